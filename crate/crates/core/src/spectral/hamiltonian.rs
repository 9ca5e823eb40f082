use std::f64::consts::{PI, TAU};

use crate::error::{Error, Result};
use crate::numkit::eig::unitarity_defect;
use crate::numkit::{hermitian_eig, ComplexMatrix, PureState, C64};

/// Basis unitarity tolerance.
const TOL_BASIS: f64 = 1e-10;

/// Hamiltonian whose spectrum is `E_0 + n * 2pi/tau` for integers `n`.
#[derive(Debug, Clone, PartialEq)]
pub struct PeriodicHamiltonian {
    tau: f64,
    levels: Vec<i64>,
    offset: f64,
    /// Column `i` is the working-basis vector of level `i`; identity if absent.
    basis: Option<ComplexMatrix>,
}

impl PeriodicHamiltonian {
    /// Levels must be non-decreasing (repeats encode degeneracy).
    pub fn new(tau: f64, levels: Vec<i64>, offset: f64, basis: Option<ComplexMatrix>) -> Result<Self> {
        if !(tau > 0.0) || !tau.is_finite() {
            return Err(Error::InvalidArgument(format!("tau must be positive, got {tau}")));
        }
        if !offset.is_finite() {
            return Err(Error::NonFinite);
        }
        if levels.is_empty() {
            return Err(Error::InvalidLevels("no levels".into()));
        }
        if levels.windows(2).any(|w| w[0] > w[1]) {
            return Err(Error::InvalidLevels("levels must be non-decreasing".into()));
        }
        if let Some(b) = &basis {
            if b.rows() != levels.len() || b.cols() != levels.len() {
                return Err(Error::DimensionMismatch(b.rows(), levels.len()));
            }
            let d = unitarity_defect(b);
            if d > TOL_BASIS {
                return Err(Error::InvalidArgument(format!("basis not unitary (defect {d:.3e})")));
            }
        }
        Ok(Self {
            tau,
            levels,
            offset,
            basis,
        })
    }

    /// Diagonal Hamiltonian `sum_k n_k (2pi/tau) |k><k|`.
    pub fn from_levels(tau: f64, levels: Vec<i64>) -> Result<Self> {
        Self::new(tau, levels, 0.0, None)
    }

    /// Two-level reference system with energies `-pi/tau` and `pi/tau`.
    pub fn cbit(tau: f64) -> Self {
        Self::new(tau, vec![0, 1], -PI / tau, None).expect("valid c-bit")
    }

    pub fn tau(&self) -> f64 {
        self.tau
    }

    pub fn levels(&self) -> &[i64] {
        &self.levels
    }

    pub fn offset(&self) -> f64 {
        self.offset
    }

    pub fn basis(&self) -> Option<&ComplexMatrix> {
        self.basis.as_ref()
    }

    pub fn dim(&self) -> usize {
        self.levels.len()
    }

    /// Energy quantum `2pi/tau`.
    pub fn omega(&self) -> f64 {
        TAU / self.tau
    }

    pub fn energies(&self) -> Vec<f64> {
        self.levels
            .iter()
            .map(|&n| self.offset + n as f64 * self.omega())
            .collect()
    }

    /// Matrix in the working basis.
    pub fn matrix(&self) -> ComplexMatrix {
        let d: Vec<C64> = self.energies().into_iter().map(|e| C64::new(e, 0.0)).collect();
        self.from_level_basis_op(&ComplexMatrix::from_diag(&d))
    }

    /// `(H - E_0) / omega`: the level integers as an operator in the working basis.
    pub fn level_matrix(&self) -> ComplexMatrix {
        let d: Vec<C64> = self.levels.iter().map(|&n| C64::new(n as f64, 0.0)).collect();
        self.from_level_basis_op(&ComplexMatrix::from_diag(&d))
    }

    /// Same Hamiltonian with `E_0 = 0`.
    pub fn without_offset(&self) -> Self {
        Self {
            offset: 0.0,
            ..self.clone()
        }
    }

    /// Distinct level integers, ascending.
    pub fn distinct_levels(&self) -> Vec<i64> {
        let mut v = self.levels.clone();
        v.dedup();
        v
    }

    /// Projector onto all basis vectors with level `n`, in the working basis.
    pub fn level_projector(&self, n: i64) -> ComplexMatrix {
        let d: Vec<C64> = self
            .levels
            .iter()
            .map(|&m| if m == n { C64::new(1.0, 0.0) } else { C64::new(0.0, 0.0) })
            .collect();
        self.from_level_basis_op(&ComplexMatrix::from_diag(&d))
    }

    /// `e^{-iHt}` in the working basis.
    pub fn evolution(&self, t: f64) -> ComplexMatrix {
        let d: Vec<C64> = self
            .energies()
            .into_iter()
            .map(|e| C64::from_polar(1.0, -e * t))
            .collect();
        self.from_level_basis_op(&ComplexMatrix::from_diag(&d))
    }

    /// Amplitudes of a working-basis vector in the level basis.
    pub fn to_level_basis(&self, v: &[C64]) -> Vec<C64> {
        match &self.basis {
            None => v.to_vec(),
            Some(b) => b.adjoint().mul_vec(v),
        }
    }

    pub fn to_level_basis_op(&self, m: &ComplexMatrix) -> ComplexMatrix {
        match &self.basis {
            None => m.clone(),
            Some(b) => m.conjugate_by(&b.adjoint()),
        }
    }

    pub fn from_level_basis_op(&self, m: &ComplexMatrix) -> ComplexMatrix {
        match &self.basis {
            None => m.clone(),
            Some(b) => m.conjugate_by(b),
        }
    }
}

/// Snaps a Hermitian matrix onto the integer grid `E_0 + n * 2pi/tau`.
///
/// `E_0` is the least-squares offset of the snapped levels, so the lowest
/// level is `0`.
pub fn snap_hermitian(h: &ComplexMatrix, tau: f64, tol_snap: f64) -> Result<PeriodicHamiltonian> {
    if !(tau > 0.0) {
        return Err(Error::InvalidArgument(format!("tau must be positive, got {tau}")));
    }
    let e = hermitian_eig(h)?;
    let omega = TAU / tau;
    let lo = e.values[0];
    let mut levels = Vec::with_capacity(e.dim());
    let mut worst: f64 = 0.0;
    for &v in &e.values {
        let x = (v - lo) / omega;
        let n = x.round();
        worst = worst.max((x - n).abs() * omega);
        levels.push(n as i64);
    }
    if worst > tol_snap {
        return Err(Error::NotCommensurate { deviation: worst });
    }
    let offset = e
        .values
        .iter()
        .zip(&levels)
        .map(|(v, &n)| v - n as f64 * omega)
        .sum::<f64>()
        / e.dim() as f64;
    PeriodicHamiltonian::new(tau, levels, offset, Some(e.vectors))
}

/// Weights below this are treated as unoccupied.
pub const OCCUPANCY_CUTOFF: f64 = 1e-14;

/// Energy distribution `p(n) = ||Pi_n psi||^2` over level integers.
pub fn energy_distribution(psi: &PureState, h: &PeriodicHamiltonian) -> Result<super::IntDist> {
    if psi.dim() != h.dim() {
        return Err(Error::DimensionMismatch(psi.dim(), h.dim()));
    }
    let amps = h.to_level_basis(psi.amplitudes());
    let pairs: Vec<(i64, f64)> = h
        .levels()
        .iter()
        .zip(&amps)
        .map(|(&n, a)| (n, a.norm_sqr()))
        .map(|(n, w)| (n, if w > OCCUPANCY_CUTOFF { w } else { 0.0 }))
        .collect();
    let lo = pairs[0].0;
    let mut w = vec![0.0; (h.levels()[h.dim() - 1] - lo + 1) as usize];
    for (n, p) in pairs {
        w[(n - lo) as usize] += p;
    }
    super::IntDist::normalized(lo, w)
}

/// Period of a state's evolution.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum StatePeriod {
    Stationary,
    /// `tau / divisor`.
    Period { tau: f64, divisor: u64 },
}

impl StatePeriod {
    pub fn is_full(&self) -> bool {
        matches!(self, StatePeriod::Period { divisor: 1, .. })
    }
}

pub fn gcd(a: u64, b: u64) -> u64 {
    if b == 0 {
        a
    } else {
        gcd(b, a % b)
    }
}

/// gcd of gaps `n - n_min` over the given points; 0 for a single point.
pub fn gap_gcd(points: &[i64]) -> u64 {
    let Some(&lo) = points.iter().min() else {
        return 0;
    };
    points.iter().fold(0, |g, &n| gcd(g, (n - lo) as u64))
}

pub fn state_period(psi: &PureState, h: &PeriodicHamiltonian) -> Result<StatePeriod> {
    let p = energy_distribution(psi, h)?;
    Ok(period_of_dist(&p, h.tau()))
}

pub fn period_of_dist(p: &super::IntDist, tau: f64) -> StatePeriod {
    match gap_gcd(&p.support()) {
        0 => StatePeriod::Stationary,
        g => StatePeriod::Period { tau: tau / g as f64, divisor: g },
    }
}

/// Outcome of the adjacent-support search.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum AdjacentL {
    Finite(u64),
    NoFiniteL,
}

/// Extended Euclid: returns `(g, x, y)` with `a x + b y = g`.
fn ext_gcd(a: i128, b: i128) -> (i128, i128, i128) {
    if b == 0 {
        (a, 1, 0)
    } else {
        let (g, x, y) = ext_gcd(b, a % b);
        (g, y, x - (a / b) * y)
    }
}

/// Bezout coefficients for positive integers whose gcd is `g`.
pub fn bezout(values: &[u64]) -> (u64, Vec<i128>) {
    let mut g: i128 = 0;
    let mut coeffs: Vec<i128> = Vec::with_capacity(values.len());
    for &v in values {
        let (g2, x, y) = ext_gcd(g, v as i128);
        for c in coeffs.iter_mut() {
            *c *= x;
        }
        coeffs.push(y);
        g = g2;
    }
    if g < 0 {
        g = -g;
        coeffs.iter_mut().for_each(|c| *c = -*c);
    }
    (g as u64, coeffs)
}

/// Smallest `L` such that the `L`-fold convolution occupies two adjacent integers.
///
/// Occupancy is tracked as a boolean reachability set, so no weight ever
/// underflows into a false negative. The search stops at the Bezout bound
/// `sum |x_i|`.
pub fn minimal_adjacent_l(p: &super::IntDist) -> AdjacentL {
    let support = p.support();
    let lo = support[0];
    let gaps: Vec<u64> = support.iter().skip(1).map(|&n| (n - lo) as u64).collect();
    if gaps.is_empty() {
        return AdjacentL::NoFiniteL;
    }
    let (g, coeffs) = bezout(&gaps);
    if g != 1 {
        return AdjacentL::NoFiniteL;
    }
    let bound: u64 = coeffs.iter().map(|c| c.unsigned_abs() as u64).sum::<u64>().max(1);
    let base: Vec<bool> = {
        let mut b = vec![false; (support[support.len() - 1] - lo + 1) as usize];
        for &n in &support {
            b[(n - lo) as usize] = true;
        }
        b
    };
    let mut reach = base.clone();
    for l in 1..=bound {
        if reach.windows(2).any(|w| w[0] && w[1]) {
            return AdjacentL::Finite(l);
        }
        let mut next = vec![false; reach.len() + base.len() - 1];
        for (i, &a) in reach.iter().enumerate() {
            if a {
                for (j, &b) in base.iter().enumerate() {
                    next[i + j] |= b;
                }
            }
        }
        reach = next;
    }
    unreachable!("Bezout bound guarantees adjacency by L = {bound}")
}
