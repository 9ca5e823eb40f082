//! Pure-state conversion under time-translation-invariant (TI) operations.
//!
//! A conversion between pure states of periodic systems is realized by
//! matching their integer energy distributions up to an integer shift. The
//! resulting trace-distance error is what the constructive protocol achieves.
//! It is an upper bound on the optimal finite-`n` error, not the optimum itself.
//!
//! The module also provides the converse floor, the fidelity-gap inequality
//! used in its derivation, and a generator of random covariant channels.

use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::numkit::distance::root_fidelity;
use crate::numkit::random::{random_density_with, random_unitary_with, rng};
use crate::numkit::{ComplexMatrix, DensityOperator, PureState};
use crate::qfi::qfi;
use crate::spectral::{energy_distribution, IntDist, PeriodicHamiltonian};

/// Relative tolerance when comparing base periods of two systems.
const TOL_PERIOD: f64 = 1e-12;

/// Two shifts whose Hellinger deficits differ by less than this are tied.
const TOL_TIE: f64 = 1e-15;

/// Input copies tried on either side of the variance-matched count.
const DISCARD_WINDOW: i64 = 3;

/// Relative slack when comparing a rate with the variance ratio.
const TOL_RATIO: f64 = 1e-12;

/// Incoherent QFI threshold below which the target of a conversion is treated as free.
pub const TOL_INCOHERENT: f64 = 1e-12;

/// Outcome of a simulated conversion.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ConversionReport {
    /// Input copies available.
    pub n_in: u64,
    /// Input copies actually used; the rest are discarded.
    pub n_used: u64,
    pub n_out: u64,
    pub rate: f64,
    pub shift: i64,
    /// Bhattacharyya overlap `sum_n sqrt(p_in(n) p_out(n + k))`.
    pub overlap: f64,
    /// `sqrt(1 - overlap^2)`.
    pub trace_error: f64,
    pub error_upper_bound: f64,
    pub converse_floor: f64,
}

impl ConversionReport {
    pub const CSV_HEADER: &'static str = "n,R,k,overlap,trace_error,upper_bound,converse_floor";

    pub fn csv_row(&self) -> String {
        format!(
            "{},{:.16e},{},{:.16e},{:.16e},{:.16e},{:.16e}",
            self.n_in,
            self.rate,
            self.shift,
            self.overlap,
            self.trace_error,
            self.error_upper_bound,
            self.converse_floor
        )
    }
}

/// `1 - sum_n sqrt(p1(n) p2(n + k))`, summed as `½ sum_n (sqrt p1 - sqrt p2)^2`
/// so that identical distributions give exactly zero.
fn hellinger_deficit(p1: &IntDist, p2: &IntDist, k: i64) -> f64 {
    let lo = p1.min_support().min(p2.min_support() - k);
    let hi = p1.max_support().max(p2.max_support() - k);
    let s: f64 = (lo..=hi)
        .map(|n| (p1.pmf(n).sqrt() - p2.pmf(n + k).sqrt()).powi(2))
        .sum();
    (0.5 * s).clamp(0.0, 1.0)
}

fn best_shift(p1: &IntDist, p2: &IntDist) -> (i64, f64) {
    let k_lo = p2.min_support() - p1.max_support();
    let k_hi = p2.max_support() - p1.min_support();
    let mut ks: Vec<i64> = (k_lo..=k_hi).collect();
    ks.sort_by_key(|&k| (k.abs(), k));
    let mut best = (ks[0], hellinger_deficit(p1, p2, ks[0]));
    for &k in &ks[1..] {
        let h = hellinger_deficit(p1, p2, k);
        if h < best.1 - TOL_TIE {
            best = (k, h);
        }
    }
    best
}

/// Integer shift `k` maximizing `sum_n sqrt(p1(n) p2(n + k))`, and that overlap.
///
/// Ties go to the smallest `|k|`, then the smallest `k`.
pub fn optimal_shift(p1: &IntDist, p2: &IntDist) -> (i64, f64) {
    let (k, h) = best_shift(p1, p2);
    (k, 1.0 - h)
}

fn trace_error_from_deficit(h: f64) -> f64 {
    (h * (2.0 - h)).max(0.0).sqrt()
}

fn check_periods(h1: &PeriodicHamiltonian, h2: &PeriodicHamiltonian) -> Result<()> {
    let (a, b) = (h1.tau(), h2.tau());
    if (a - b).abs() > TOL_PERIOD * a.max(b) {
        return Err(Error::PeriodMismatch(format!("base periods {a} and {b} differ")));
    }
    Ok(())
}

/// Single-copy conversion by energy shift.
pub fn single_copy_error(
    psi1: &PureState,
    h1: &PeriodicHamiltonian,
    psi2: &PureState,
    h2: &PeriodicHamiltonian,
) -> Result<ConversionReport> {
    check_periods(h1, h2)?;
    let p1 = energy_distribution(psi1, h1)?;
    let p2 = energy_distribution(psi2, h2)?;
    let (k, h) = best_shift(&p1, &p2);
    let l1: f64 = (p1.min_support().min(p2.min_support() - k)..=p1.max_support().max(p2.max_support() - k))
        .map(|n| (p1.pmf(n) - p2.pmf(n + k)).abs())
        .sum();
    Ok(ConversionReport {
        n_in: 1,
        n_used: 1,
        n_out: 1,
        rate: 1.0,
        shift: k,
        overlap: 1.0 - h,
        trace_error: trace_error_from_deficit(h),
        error_upper_bound: l1.sqrt().min(1.0),
        converse_floor: 0.0,
    })
}

/// `ceil(rate * n)`, robust to products like `0.3 * 100` landing just above an integer.
pub fn output_copies(rate: f64, n: u64) -> u64 {
    let x = rate * n as f64;
    let r = x.round();
    let c = if (x - r).abs() <= 1e-9 * x.max(1.0) { r } else { x.ceil() };
    (c as u64).max(1)
}

/// Conversion of `n` copies of `psi1` into `ceil(R n)` copies of `psi2`.
pub fn iid_convert(
    psi1: &PureState,
    h1: &PeriodicHamiltonian,
    psi2: &PureState,
    h2: &PeriodicHamiltonian,
    rate: f64,
    n: u64,
) -> Result<ConversionReport> {
    check_periods(h1, h2)?;
    let p1 = energy_distribution(psi1, h1)?;
    let p2 = energy_distribution(psi2, h2)?;
    convert_distributions(&p1, &p2, rate, n)
}

/// [`iid_convert`] on single-copy energy distributions.
///
/// Before shifting, the protocol may discard input copies. It tries every
/// count within a few copies of the one whose total variance matches the
/// output, plus the full `n`, and keeps the best overlap.
pub fn convert_distributions(p1: &IntDist, p2: &IntDist, rate: f64, n: u64) -> Result<ConversionReport> {
    if !(rate > 0.0) || !rate.is_finite() {
        return Err(Error::InvalidArgument(format!("rate must be positive, got {rate}")));
    }
    if n == 0 {
        return Err(Error::InvalidArgument("need at least one input copy".into()));
    }
    let (v1, v2) = (p1.variance(), p2.variance());
    if v1 <= 0.0 || v2 <= 0.0 {
        return Err(Error::Stationary);
    }
    let n_out = output_copies(rate, n);
    let p_out = p2.convolve_power(n_out)?;

    let matched = (n_out as f64 * v2 / v1).round() as i64;
    let mut candidates: Vec<u64> = (-DISCARD_WINDOW..=DISCARD_WINDOW)
        .map(|d| (matched + d).clamp(1, n as i64) as u64)
        .chain(std::iter::once(n))
        .collect();
    candidates.sort_unstable();
    candidates.dedup();

    let mut best: Option<(u64, i64, f64)> = None;
    for &c in &candidates {
        let p_in = p1.convolve_power(c)?;
        let (k, h) = best_shift(&p_in, &p_out);
        if best.is_none_or(|b| h < b.2 - TOL_TIE) {
            best = Some((c, k, h));
        }
    }
    let (n_used, k, h) = best.expect("candidate list is non-empty");

    let ratio = v1 / v2;
    let q = v1;
    let error_upper_bound = if rate <= ratio * (1.0 + TOL_RATIO) {
        ((q / rate + 2.0) / (q * n as f64).sqrt()).min(1.0)
    } else {
        1.0
    };
    Ok(ConversionReport {
        n_in: n,
        n_used,
        n_out,
        rate,
        shift: k,
        overlap: 1.0 - h,
        trace_error: trace_error_from_deficit(h),
        error_upper_bound,
        converse_floor: min_error_floor(v1, v2, rate),
    })
}

/// Reports for every `(R, n)` cell, `R` outermost. Cells run in parallel.
pub fn sweep(
    psi1: &PureState,
    h1: &PeriodicHamiltonian,
    psi2: &PureState,
    h2: &PeriodicHamiltonian,
    rates: &[f64],
    ns: &[u64],
) -> Result<Vec<ConversionReport>> {
    check_periods(h1, h2)?;
    let p1 = energy_distribution(psi1, h1)?;
    let p2 = energy_distribution(psi2, h2)?;
    let cells: Vec<(f64, u64)> = rates.iter().flat_map(|&r| ns.iter().map(move |&n| (r, n))).collect();
    let workers = std::thread::available_parallelism().map_or(1, |n| n.get()).min(cells.len().max(1));
    let chunk = cells.len().div_ceil(workers.max(1)).max(1);
    std::thread::scope(|s| {
        let handles: Vec<_> = cells
            .chunks(chunk)
            .map(|part| {
                let (p1, p2) = (&p1, &p2);
                s.spawn(move || {
                    part.iter()
                        .map(|&(r, n)| convert_distributions(p1, p2, r, n))
                        .collect::<Vec<_>>()
                })
            })
            .collect();
        handles
            .into_iter()
            .flat_map(|h| h.join().expect("sweep worker panicked"))
            .collect()
    })
}

/// `g(T) = T^{T/(1-T)} - T^{1/(1-T)}`; 1 at `T <= 0`, 0 at `T >= 1`.
pub fn monotonicity_gap(t: f64) -> f64 {
    if t <= 0.0 {
        return 1.0;
    }
    if t >= 1.0 {
        return 0.0;
    }
    let e = 1.0 / (1.0 - t);
    (t.powf(t * e) - t.powf(e)).max(0.0)
}

/// `(g(T)/4)^2` with `T = F_in / (R F_out)`.
pub fn min_error_floor(f_in: f64, f_out: f64, rate: f64) -> f64 {
    if f_out <= 0.0 {
        return 0.0;
    }
    (monotonicity_gap(f_in / (rate * f_out)) / 4.0).powi(2)
}

/// `F_{H1}(rho1) / F_{H2}(rho2)`; `+inf` when the target carries no QFI.
pub fn rate_bound(
    rho1: &DensityOperator,
    h1: &ComplexMatrix,
    rho2: &DensityOperator,
    h2: &ComplexMatrix,
) -> Result<f64> {
    let f_in = qfi(rho1, h1)?.value;
    let f_out = qfi(rho2, h2)?.value;
    if f_out <= TOL_INCOHERENT {
        return Ok(f64::INFINITY);
    }
    Ok(f_in / f_out)
}

/// Both sides of `|sqrt Fid(U t1 U†, t1) - sqrt Fid(U t2 U†, t2)| <= 4 sqrt(1 - sqrt Fid(t1, t2))`.
pub fn lemma_fid_gap(u: &ComplexMatrix, t1: &DensityOperator, t2: &DensityOperator) -> Result<(f64, f64)> {
    if t1.dim() != t2.dim() {
        return Err(Error::DimensionMismatch(t1.dim(), t2.dim()));
    }
    let a = root_fidelity(&t1.evolve(u)?, t1)?;
    let b = root_fidelity(&t2.evolve(u)?, t2)?;
    let rhs = 4.0 * (1.0 - root_fidelity(t1, t2)?).max(0.0).sqrt();
    Ok(((a - b).abs(), rhs))
}

/// How the system is coupled to the ancilla inside each total-energy block.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Coupling {
    /// Seeded Haar unitary on every block.
    Haar(u64),
    Identity,
}

/// Channel in Kraus form with its input and output Hamiltonians.
#[derive(Debug, Clone)]
pub struct TiChannel {
    pub kraus: Vec<ComplexMatrix>,
    pub h_in: PeriodicHamiltonian,
    pub h_out: PeriodicHamiltonian,
}

impl TiChannel {
    pub fn identity(h: &PeriodicHamiltonian) -> Self {
        Self {
            kraus: vec![ComplexMatrix::identity(h.dim())],
            h_in: h.clone(),
            h_out: h.clone(),
        }
    }

    /// `rho -> sum_n P_n rho P_n` over the energy eigenspaces.
    pub fn dephasing(h: &PeriodicHamiltonian) -> Self {
        Self {
            kraus: h.distinct_levels().into_iter().map(|n| h.level_projector(n)).collect(),
            h_in: h.clone(),
            h_out: h.clone(),
        }
    }

    pub fn apply(&self, rho: &DensityOperator) -> Result<DensityOperator> {
        if rho.dim() != self.h_in.dim() {
            return Err(Error::DimensionMismatch(rho.dim(), self.h_in.dim()));
        }
        let d = self.h_out.dim();
        let mut out = ComplexMatrix::zeros(d, d);
        for k in &self.kraus {
            out = &out + &rho.matrix().conjugate_by(k);
        }
        Ok(DensityOperator::from_trusted(out))
    }

    /// `||sum K^dagger K - I||_F`.
    pub fn completeness_defect(&self) -> f64 {
        let d = self.h_in.dim();
        let mut s = ComplexMatrix::zeros(d, d);
        for k in &self.kraus {
            s = &s + &k.adjoint().matmul(k);
        }
        (&s - &ComplexMatrix::identity(d)).frobenius_norm()
    }

    /// Largest `||U_out(t) E(rho) U_out(t)^dagger - E(U_in(t) rho U_in(t)^dagger)||_F`
    /// over 8 random times and 5 random full-rank states.
    pub fn covariance_residual(&self, seed: u64) -> Result<f64> {
        let mut r = rng(seed);
        let d = self.h_in.dim();
        let states: Vec<DensityOperator> =
            (0..5).map(|_| random_density_with(d, d, &mut r)).collect::<Result<_>>()?;
        let period = self.h_in.tau().max(self.h_out.tau());
        let mut worst: f64 = 0.0;
        for _ in 0..8 {
            let t = r.random_range(0.0..2.0 * period);
            let u_in = self.h_in.evolution(t);
            let u_out = self.h_out.evolution(t);
            for rho in &states {
                let a = self.apply(rho)?.evolve(&u_out)?;
                let b = self.apply(&rho.evolve(&u_in)?)?;
                worst = worst.max((a.matrix() - b.matrix()).frobenius_norm());
            }
        }
        Ok(worst)
    }
}

/// Random TI channel: append an ancilla in the uniform diagonal state, apply a
/// unitary that is block diagonal in total energy, and trace the ancilla out.
pub fn make_ti_channel(h_s: &PeriodicHamiltonian, ancilla_levels: &[i64], seed: u64) -> Result<TiChannel> {
    make_ti_channel_with(h_s, ancilla_levels, Coupling::Haar(seed))
}

pub fn make_ti_channel_with(
    h_s: &PeriodicHamiltonian,
    ancilla_levels: &[i64],
    coupling: Coupling,
) -> Result<TiChannel> {
    let anc = PeriodicHamiltonian::from_levels(h_s.tau(), ancilla_levels.to_vec())?;
    let (ds, da) = (h_s.dim(), anc.dim());
    let dim = ds * da;

    let mut u = ComplexMatrix::identity(dim);
    if let Coupling::Haar(seed) = coupling {
        let mut r = rng(seed);
        let total: Vec<i64> = (0..dim).map(|i| h_s.levels()[i / da] + anc.levels()[i % da]).collect();
        let mut energies = total.clone();
        energies.sort_unstable();
        energies.dedup();
        for e in energies {
            let block: Vec<usize> = (0..dim).filter(|&i| total[i] == e).collect();
            let v = random_unitary_with(block.len(), &mut r);
            for (a, &i) in block.iter().enumerate() {
                for (b, &j) in block.iter().enumerate() {
                    u[(i, j)] = v[(a, b)];
                }
            }
        }
    }
    if let Some(basis) = h_s.basis() {
        u = u.conjugate_by(&basis.kron(&ComplexMatrix::identity(da)));
    }

    let weight = (1.0 / da as f64).sqrt();
    let mut kraus = Vec::with_capacity(da * da);
    for a in 0..da {
        for b in 0..da {
            let mut k = ComplexMatrix::zeros(ds, ds);
            for i in 0..ds {
                for j in 0..ds {
                    k[(i, j)] = u[(i * da + a, j * da + b)] * weight;
                }
            }
            if k.frobenius_norm() > 0.0 {
                kraus.push(k);
            }
        }
    }
    Ok(TiChannel {
        kraus,
        h_in: h_s.clone(),
        h_out: h_s.clone(),
    })
}
