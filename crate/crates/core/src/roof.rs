//! Convex-roof decompositions of the QFI.

use rand::Rng;

use crate::error::{Error, Result};
use crate::numkit::random::rng;
use crate::numkit::{canonical_phase, hermitian_eig, inner, ComplexMatrix, DensityOperator, PureState, C64};
use crate::purify::{optimal_aux_hamiltonian, total_hamiltonian};
use crate::qfi::{pure_variance, CUTOFF_RANK};
use crate::spectral::{gap_gcd, gcd, state_period, PeriodicHamiltonian, StatePeriod};

/// Members with weight at or below this are dropped.
pub const MIN_WEIGHT: f64 = 1e-14;

/// Default Frobenius threshold for linking two levels by coherence.
pub const TOL_LINK: f64 = 1e-10;

/// Weighted pure-state decomposition.
#[derive(Debug, Clone, PartialEq)]
pub struct Ensemble {
    members: Vec<(f64, PureState)>,
}

impl Ensemble {
    pub fn new(members: Vec<(f64, PureState)>) -> Result<Self> {
        if members.is_empty() {
            return Err(Error::InvalidArgument("empty ensemble".into()));
        }
        let dim = members[0].1.dim();
        if let Some((_, s)) = members.iter().find(|(_, s)| s.dim() != dim) {
            return Err(Error::DimensionMismatch(dim, s.dim()));
        }
        if let Some((q, _)) = members.iter().find(|(q, _)| !(*q >= 0.0)) {
            return Err(Error::InvalidArgument(format!("negative weight {q}")));
        }
        let total: f64 = members.iter().map(|m| m.0).sum();
        if (total - 1.0).abs() > 1e-12 {
            return Err(Error::InvalidArgument(format!("weights sum to {total}")));
        }
        Ok(Self { members })
    }

    /// Drops members at or below [`MIN_WEIGHT`] and rescales the rest.
    fn pruned(members: Vec<(f64, PureState)>) -> Result<Self> {
        let kept: Vec<_> = members.into_iter().filter(|(q, _)| *q > MIN_WEIGHT).collect();
        let total: f64 = kept.iter().map(|m| m.0).sum();
        Self::new(kept.into_iter().map(|(q, s)| (q / total, s)).collect())
    }

    pub fn members(&self) -> &[(f64, PureState)] {
        &self.members
    }

    pub fn len(&self) -> usize {
        self.members.len()
    }

    pub fn is_empty(&self) -> bool {
        self.members.is_empty()
    }

    pub fn dim(&self) -> usize {
        self.members[0].1.dim()
    }

    pub fn weights(&self) -> Vec<f64> {
        self.members.iter().map(|m| m.0).collect()
    }

    /// `sum_k q_k |eta_k><eta_k|`.
    pub fn density_matrix(&self) -> ComplexMatrix {
        let d = self.dim();
        self.members.iter().fold(ComplexMatrix::zeros(d, d), |acc, (q, s)| {
            &acc + &ComplexMatrix::outer(s.amplitudes(), s.amplitudes()).scale_real(*q)
        })
    }

    pub fn variances(&self, h: &ComplexMatrix) -> Result<Vec<f64>> {
        self.members.iter().map(|(_, s)| pure_variance(s, h)).collect()
    }
}

/// Ensemble of `rho` whose average pure-state QFI equals `F_H(rho)`.
#[derive(Debug, Clone)]
pub struct YuEnsemble {
    pub ensemble: Ensemble,
    /// Eigenvectors `|E_k>` of the optimal auxiliary Hamiltonian paired with each member.
    pub aux_vectors: Vec<Vec<C64>>,
    pub aux_energies: Vec<f64>,
}

/// Measures the auxiliary side of the optimal purification in the
/// eigenbasis of `H_A`. Member `k` is `sum_j <E_k|phi_j> sqrt(p_j) |phi_j>`
/// normalized, with weight `<E_k|rho|E_k>`.
pub fn yu_ensemble(rho: &DensityOperator, h_s: &ComplexMatrix) -> Result<YuEnsemble> {
    let e = rho.spectrum()?;
    let h_a = optimal_aux_hamiltonian(rho, h_s)?;
    let support: Vec<usize> = (0..e.dim()).filter(|&j| e.values[j] > CUTOFF_RANK).collect();
    let r = support.len();
    let phis: Vec<Vec<C64>> = support.iter().map(|&j| e.vector(j)).collect();
    // H_A restricted to the support, in rho's eigenbasis.
    let mut m = ComplexMatrix::zeros(r, r);
    for a in 0..r {
        let col = h_a.mul_vec(&phis[a]);
        for b in 0..r {
            m[(b, a)] = inner(&phis[b], &col);
        }
    }
    let ea = hermitian_eig(&m.hermitian_part())?;
    let d = rho.dim();
    let mut members = Vec::with_capacity(r);
    let mut aux_vectors = Vec::with_capacity(r);
    let mut aux_energies = Vec::with_capacity(r);
    for k in 0..r {
        let ek = ea.vector(k);
        let mut eta = vec![C64::new(0.0, 0.0); d];
        let mut e_work = vec![C64::new(0.0, 0.0); d];
        for (j, phi) in phis.iter().enumerate() {
            let coeff = ek[j].conj() * e.values[support[j]].sqrt();
            for i in 0..d {
                eta[i] += phi[i] * coeff;
                e_work[i] += phi[i] * ek[j];
            }
        }
        let q: f64 = eta.iter().map(|z| z.norm_sqr()).sum();
        if q <= MIN_WEIGHT {
            continue;
        }
        canonical_phase(&mut eta);
        members.push((q, PureState::normalized(eta)?));
        aux_vectors.push(e_work);
        aux_energies.push(ea.values[k]);
    }
    Ok(YuEnsemble {
        ensemble: Ensemble::pruned(members)?,
        aux_vectors,
        aux_energies,
    })
}

impl YuEnsemble {
    /// `sum_k q_k |eta_k><eta_k| x |E_k><E_k|` on system times auxiliary.
    pub fn dephased_joint_state(&self) -> Result<DensityOperator> {
        let d = self.ensemble.dim();
        let mut m = ComplexMatrix::zeros(d * d, d * d);
        for ((q, eta), ek) in self.ensemble.members().iter().zip(&self.aux_vectors) {
            let v = crate::numkit::kron_vec(eta.amplitudes(), ek);
            m = &m + &ComplexMatrix::outer(&v, &v).scale_real(*q);
        }
        DensityOperator::new(m)
    }

    /// Joint generator for [`YuEnsemble::dephased_joint_state`].
    pub fn joint_hamiltonian(rho: &DensityOperator, h_s: &ComplexMatrix) -> Result<ComplexMatrix> {
        Ok(total_hamiltonian(h_s, &optimal_aux_hamiltonian(rho, h_s)?))
    }
}

/// `sum_k q_k 4 V_H(eta_k)`.
pub fn ensemble_avg_qfi(e: &Ensemble, h: &ComplexMatrix) -> Result<f64> {
    let v = e.variances(h)?;
    Ok(e.members().iter().zip(v).map(|((q, _), v)| 4.0 * q * v).sum())
}

/// Coherence-closed groups of energy levels.
#[derive(Debug, Clone)]
pub struct PartitionSet {
    /// Level integers in each class, ascending; classes ordered by smallest level.
    pub classes: Vec<Vec<i64>>,
    /// Working-basis projector onto each class.
    pub projectors: Vec<ComplexMatrix>,
    /// `||sum_r P_r rho P_r - rho||_F`.
    pub leak: f64,
}

pub fn period_partitions(rho: &DensityOperator, h: &PeriodicHamiltonian) -> Result<PartitionSet> {
    period_partitions_with_tol(rho, h, TOL_LINK)
}

/// Union-find over distinct levels, linking `E_1, E_2` when
/// `||Pi_1 rho Pi_2||_F > tol_link`.
///
/// Fails with `PeriodMismatch` when linked gaps share a common divisor above
/// one, since then `rho` evolves with a period shorter than `tau`.
pub fn period_partitions_with_tol(rho: &DensityOperator, h: &PeriodicHamiltonian, tol_link: f64) -> Result<PartitionSet> {
    if rho.dim() != h.dim() {
        return Err(Error::DimensionMismatch(rho.dim(), h.dim()));
    }
    let levels = h.distinct_levels();
    let proj: Vec<ComplexMatrix> = levels.iter().map(|&n| h.level_projector(n)).collect();
    let mut parent: Vec<usize> = (0..levels.len()).collect();
    fn find(p: &mut [usize], i: usize) -> usize {
        let mut r = i;
        while p[r] != r {
            r = p[r];
        }
        let mut c = i;
        while p[c] != r {
            let next = p[c];
            p[c] = r;
            c = next;
        }
        r
    }
    let mut link_gcd = 0u64;
    for a in 0..levels.len() {
        let left = proj[a].matmul(rho.matrix());
        for b in (a + 1)..levels.len() {
            if left.matmul(&proj[b]).frobenius_norm() > tol_link {
                link_gcd = gcd(link_gcd, (levels[b] - levels[a]) as u64);
                let (ra, rb) = (find(&mut parent, a), find(&mut parent, b));
                if ra != rb {
                    parent[ra.max(rb)] = ra.min(rb);
                }
            }
        }
    }
    if link_gcd > 1 {
        return Err(Error::PeriodMismatch(format!(
            "coherent level gaps share divisor {link_gcd}; state period is tau/{link_gcd}"
        )));
    }
    let mut roots: Vec<usize> = Vec::new();
    let mut classes: Vec<Vec<i64>> = Vec::new();
    let mut projectors: Vec<ComplexMatrix> = Vec::new();
    for i in 0..levels.len() {
        let r = find(&mut parent, i);
        match roots.iter().position(|&x| x == r) {
            Some(c) => {
                classes[c].push(levels[i]);
                projectors[c] = &projectors[c] + &proj[i];
            }
            None => {
                roots.push(r);
                classes.push(vec![levels[i]]);
                projectors.push(proj[i].clone());
            }
        }
    }
    let d = rho.dim();
    let mut recon = ComplexMatrix::zeros(d, d);
    for p in &projectors {
        recon = &recon + &rho.matrix().conjugate_by(p);
    }
    let leak = (&recon - rho.matrix()).frobenius_norm();
    Ok(PartitionSet {
        classes,
        projectors,
        leak,
    })
}

/// Splits every member across the partition: `P_r |eta_k>` with weight `q_k <eta_k|P_r|eta_k>`.
pub fn refine_ensemble_periods(e: &Ensemble, parts: &PartitionSet) -> Result<Ensemble> {
    let mut out = Vec::new();
    for (q, eta) in e.members() {
        for p in &parts.projectors {
            let mut v = p.mul_vec(eta.amplitudes());
            let w: f64 = v.iter().map(|z| z.norm_sqr()).sum();
            if q * w <= MIN_WEIGHT {
                continue;
            }
            canonical_phase(&mut v);
            out.push((q * w, PureState::normalized(v)?));
        }
    }
    Ensemble::pruned(out)
}

/// Period of each member under `h`.
pub fn member_periods(e: &Ensemble, h: &PeriodicHamiltonian) -> Result<Vec<StatePeriod>> {
    e.members().iter().map(|(_, s)| state_period(s, h)).collect()
}

/// gcd of the period divisors `m_k` over non-stationary members; `None` if all are stationary.
pub fn joint_period_divisor(periods: &[StatePeriod]) -> Option<u64> {
    let ms: Vec<u64> = periods
        .iter()
        .filter_map(|p| match p {
            StatePeriod::Period { divisor, .. } => Some(*divisor),
            StatePeriod::Stationary => None,
        })
        .collect();
    if ms.is_empty() {
        None
    } else {
        Some(ms.iter().fold(0, |g, &m| gcd(g, m)))
    }
}

/// gcd of level gaps linked by coherence in `rho`; 0 when `rho` is incoherent.
pub fn coherent_gap_gcd(rho: &DensityOperator, h: &PeriodicHamiltonian) -> Result<u64> {
    let levels = h.distinct_levels();
    let proj: Vec<ComplexMatrix> = levels.iter().map(|&n| h.level_projector(n)).collect();
    let mut g = 0;
    for a in 0..levels.len() {
        let left = proj[a].matmul(rho.matrix());
        for b in (a + 1)..levels.len() {
            if left.matmul(&proj[b]).frobenius_norm() > TOL_LINK {
                g = gcd(g, gap_gcd(&[levels[a], levels[b]]));
            }
        }
    }
    Ok(g)
}

/// Default grid resolution for [`bruteforce_roof_oracle`].
pub const ORACLE_GRID: usize = 64;

/// Minimum over qubit ensembles of the average pure-state QFI.
///
/// Ensembles of a rank-`r` state are `K x r` isometries `W` acting on
/// `sqrt(p_j) |phi_j>`. Two-member ensembles are scanned on a
/// `grid x grid` mesh of `W = [[c, -e^{-i phi} s], [e^{i phi} s, c]]`;
/// three- and four-member ones start from seeded Givens products. Every
/// candidate is then polished by a shrinking coordinate search.
pub fn bruteforce_roof_oracle(rho: &DensityOperator, h: &ComplexMatrix, grid: usize) -> Result<f64> {
    if rho.dim() != 2 || h.rows() != 2 || h.cols() != 2 {
        return Err(Error::InvalidArgument("roof oracle is restricted to qubits".into()));
    }
    let e = rho.spectrum()?;
    let scaled: Vec<Vec<C64>> = (0..2)
        .filter(|&j| e.values[j] > CUTOFF_RANK)
        .map(|j| e.vector(j).into_iter().map(|z| z * e.values[j].sqrt()).collect())
        .collect();
    if scaled.len() == 1 {
        let psi = PureState::normalized(scaled[0].clone())?;
        return Ok(4.0 * pure_variance(&psi, h)?);
    }
    let h2 = h.matmul(h);
    // Unnormalized member |v>: q V = <v|H^2|v> - <v|H|v>^2 / <v|v>.
    let member_cost = |v: &[C64]| -> f64 {
        let q: f64 = v.iter().map(|z| z.norm_sqr()).sum();
        if q <= 1e-300 {
            return 0.0;
        }
        let m = inner(v, &h.mul_vec(v)).re;
        4.0 * (inner(v, &h2.mul_vec(v)).re - m * m / q)
    };
    let cost_of = |w: &ComplexMatrix| -> f64 {
        (0..w.rows())
            .map(|k| {
                let v: Vec<C64> = (0..2)
                    .map(|i| w[(k, 0)] * scaled[0][i] + w[(k, 1)] * scaled[1][i])
                    .collect();
                member_cost(&v)
            })
            .sum()
    };

    let mut best = f64::INFINITY;
    let mut best_params: Option<(usize, Vec<f64>)> = None;
    let grid = grid.max(4);
    for a in 0..=grid {
        let th = std::f64::consts::FRAC_PI_2 * a as f64 / grid as f64;
        for b in 0..grid {
            let ph = std::f64::consts::TAU * b as f64 / grid as f64;
            let c = cost_of(&givens_isometry(2, &[th, ph]));
            if c < best {
                best = c;
                best_params = Some((2, vec![th, ph]));
            }
        }
    }
    let mut starts = vec![best_params.expect("grid is non-empty")];
    let mut r = rng(0x5eed);
    for k in [3usize, 4] {
        for _ in 0..4 {
            let n = k * (k - 1);
            starts.push((k, (0..n).map(|_| r.random_range(0.0..std::f64::consts::TAU)).collect()));
        }
    }
    for (k, mut x) in starts {
        let mut f = cost_of(&givens_isometry(k, &x));
        let mut step = std::f64::consts::PI / grid as f64;
        let mut rounds = 0;
        while step > 1e-8 && rounds < 2000 {
            rounds += 1;
            let mut improved = false;
            for i in 0..x.len() {
                for dir in [1.0, -1.0] {
                    x[i] += dir * step;
                    let g = cost_of(&givens_isometry(k, &x));
                    if g < f {
                        f = g;
                        improved = true;
                    } else {
                        x[i] -= dir * step;
                    }
                }
            }
            if !improved {
                step *= 0.5;
            }
        }
        best = best.min(f);
    }
    Ok(best)
}

/// First two columns of a product of `K(K-1)/2` complex Givens rotations.
fn givens_isometry(k: usize, params: &[f64]) -> ComplexMatrix {
    let mut u = ComplexMatrix::identity(k);
    let mut idx = 0;
    for i in 0..k {
        for j in (i + 1)..k {
            let (th, ph) = (params[idx], params[idx + 1]);
            idx += 2;
            let (c, s) = (th.cos(), th.sin());
            let e = C64::from_polar(1.0, ph);
            for row in 0..k {
                let a = u[(row, i)];
                let b = u[(row, j)];
                u[(row, i)] = a * c + b * e * s;
                u[(row, j)] = -a * e.conj() * s + b * c;
            }
        }
    }
    let mut w = ComplexMatrix::zeros(k, 2);
    for row in 0..k {
        w[(row, 0)] = u[(row, 0)];
        w[(row, 1)] = u[(row, 1)];
    }
    w
}
