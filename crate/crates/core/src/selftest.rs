//! Built-in property suite behind `ticoh selftest`.
//!
//! Every check is seeded, so a run is reproducible. Each one reports the worst
//! observed margin next to its verdict.

use std::f64::consts::TAU;

use crate::approx::{adell_bound, bc_bound, poisson_pmf, tp_distance, tv_distance, BcBound, TranslatedPoisson};
use crate::convert::{iid_convert, make_ti_channel, min_error_floor, monotonicity_gap, lemma_fid_gap};
use crate::cost::{coherence_cost, preparation_ensemble, protocol_rate, pure_coherence_cost, typicality_simulate, CBit};
use crate::error::Result;
use crate::numkit::random::{random_density_min_eig, rng};
use crate::numkit::{
    bures_distance, fidelity, random_density, random_hermitian, random_pure, random_unitary, trace_distance,
    ComplexMatrix, DensityOperator, PureState,
};
use crate::purify::{aux_qfi, numeric_min_oracle, optimal_purification, standard_purification};
use crate::qfi::{pure_variance, qfi, qfi_fd_oracle, wigner_yanase, FD_STEP};
use crate::roof::{bruteforce_roof_oracle, ensemble_avg_qfi, yu_ensemble, YuEnsemble, ORACLE_GRID};
use crate::spectral::{energy_distribution, minimal_adjacent_l, state_period, AdjacentL, IntDist, PeriodicHamiltonian, StatePeriod};
use rand::Rng;

/// Verdict of one acceptance criterion.
#[derive(Debug, Clone, PartialEq)]
pub struct Outcome {
    pub id: u8,
    pub name: &'static str,
    pub passed: bool,
    pub detail: String,
}

impl std::fmt::Display for Outcome {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let tag = if self.passed { "PASS" } else { "FAIL" };
        write!(f, "{tag} [{:>2}] {}: {}", self.id, self.name, self.detail)
    }
}

type Check = fn() -> Result<(bool, String)>;

const CRITERIA: [(u8, &str, Check); 12] = [
    (1, "pure-state identity", pure_identity),
    (2, "fidelity-derivative oracle", fd_oracle),
    (3, "optimal purification", purification),
    (4, "convex roof", convex_roof),
    (5, "qubit closed forms", qubit_closed_forms),
    (6, "worked energy distributions", worked_distributions),
    (7, "achievable conversion", achievable_conversion),
    (8, "converse floor", converse_floor),
    (9, "monotonicity under TI channels", monotonicity),
    (10, "Poisson approximation", approximation),
    (11, "cost accounting", cost_accounting),
    (12, "fidelity inequalities", fidelity_inequalities),
];

/// Runs every criterion in order.
pub fn run_all() -> Vec<Outcome> {
    CRITERIA.iter().map(|&(id, name, check)| run_one(id, name, check)).collect()
}

/// Runs a single criterion by number (1 to 12).
pub fn run(id: u8) -> Option<Outcome> {
    CRITERIA
        .iter()
        .find(|c| c.0 == id)
        .map(|&(id, name, check)| run_one(id, name, check))
}

fn run_one(id: u8, name: &'static str, check: Check) -> Outcome {
    let (passed, detail) = match check() {
        Ok(r) => r,
        Err(e) => (false, format!("error {}: {e}", e.kind())),
    };
    Outcome { id, name, passed, detail }
}

fn sz_half() -> ComplexMatrix {
    ComplexMatrix::from_real_diag(&[0.5, -0.5])
}

fn plus_mixture(p: f64) -> Result<DensityOperator> {
    let c = p - 0.5;
    DensityOperator::new(ComplexMatrix::from_real_rows(&[&[0.5, c], &[c, 0.5]]))
}

fn pure_identity() -> Result<(bool, String)> {
    let mut worst: f64 = 0.0;
    for seed in 0..100u64 {
        let dim = 2 + (seed % 5) as usize;
        let psi = random_pure(dim, seed);
        let h = random_hermitian(dim, seed + 10_000);
        let f = qfi(&psi.density(), &h)?.value;
        let v = pure_variance(&psi, &h)?;
        worst = worst.max((f - 4.0 * v).abs() / f.max(1.0));
    }
    Ok((worst <= 1e-9, format!("max relative gap {worst:.3e}")))
}

fn fd_oracle() -> Result<(bool, String)> {
    let mut worst: f64 = 0.0;
    for seed in 0..50u64 {
        let dim = 2 + (seed % 3) as usize;
        let rho = random_density_min_eig(dim, 0.05, seed)?;
        let h = random_hermitian(dim, seed + 20_000);
        let f = qfi(&rho, &h)?.value;
        let fd = qfi_fd_oracle(&rho, &h, FD_STEP)?;
        worst = worst.max((f - fd).abs() / 1e-4f64.max(1e-3 * f));
    }
    Ok((worst <= 1.0, format!("max gap / tolerance {worst:.3e}")))
}

fn purification() -> Result<(bool, String)> {
    let mut eq: f64 = 0.0;
    for seed in 0..100u64 {
        let dim = 2 + (seed % 3) as usize;
        let rank = 1 + (seed as usize / 3) % dim;
        let rho = random_density(dim, rank, seed)?;
        let h = random_hermitian(dim, seed + 30_000);
        let p = optimal_purification(&rho, &h)?;
        let joint = qfi(&p.joint.density(), &p.total_hamiltonian())?.value;
        eq = eq.max((joint - qfi(&rho, &h)?.value).abs());
    }
    let mut below: f64 = f64::NEG_INFINITY;
    for seed in 0..20u64 {
        let dim = 2 + (seed % 2) as usize;
        let rho = random_density(dim, dim, seed + 500)?;
        let h = random_hermitian(dim, seed + 31_000);
        let r = numeric_min_oracle(&rho, &h, seed, 400)?;
        below = below.max(qfi(&rho, &h)?.value / 4.0 - r.best_variance);
    }
    Ok((
        eq <= 1e-8 && below <= 1e-6,
        format!("max |F_joint - F| {eq:.3e}; max (F/4 - oracle variance) {below:.3e}"),
    ))
}

fn convex_roof() -> Result<(bool, String)> {
    let mut avg: f64 = 0.0;
    let mut sandwich: f64 = 0.0;
    for seed in 0..100u64 {
        let dim = 2 + (seed % 3) as usize;
        let rank = 1 + (seed as usize / 3) % dim;
        let rho = random_density(dim, rank, seed + 1000)?;
        let h = random_hermitian(dim, seed + 40_000);
        let f = qfi(&rho, &h)?.value;
        let y = yu_ensemble(&rho, &h)?;
        avg = avg.max((ensemble_avg_qfi(&y.ensemble, &h)? - f).abs());
        let ht = YuEnsemble::joint_hamiltonian(&rho, &h)?;
        let mid = qfi(&y.dephased_joint_state()?, &ht)?.value;
        let top = qfi(&standard_purification(&rho)?.density(), &ht)?.value;
        sandwich = sandwich.max((mid - f).abs()).max((top - f).abs());
    }
    let mut brute: f64 = 0.0;
    for seed in 0..20u64 {
        let rho = random_density(2, 2, seed + 2000)?;
        let h = random_hermitian(2, seed + 41_000);
        let f = qfi(&rho, &h)?.value;
        brute = brute.max((bruteforce_roof_oracle(&rho, &h, ORACLE_GRID)? - f).abs());
    }
    Ok((
        avg <= 1e-8 && sandwich <= 1e-8 && brute <= 5e-3,
        format!("ensemble gap {avg:.3e}; sandwich gap {sandwich:.3e}; brute-force gap {brute:.3e}"),
    ))
}

fn qubit_closed_forms() -> Result<(bool, String)> {
    let h = sz_half();
    let mut gaps = [0.0f64; 3];
    for p in [0.6, 0.75, 0.9] {
        let rho = plus_mixture(p)?;
        let c = 2.0 * p - 1.0;
        gaps[0] = gaps[0].max((qfi(&rho, &h)?.value - c * c).abs());
        gaps[1] = gaps[1].max((aux_qfi(&rho, &h)? - 4.0 * p * (1.0 - p) * c * c).abs());
        let w = (p.sqrt() - (1.0 - p).sqrt()).powi(2) / 4.0;
        gaps[2] = gaps[2].max((wigner_yanase(&rho, &h)? - w).abs());
    }
    Ok((
        gaps[0] <= 1e-10 && gaps[1] <= 1e-9 && gaps[2] <= 1e-10,
        format!("qfi {:.3e}; aux {:.3e}; skew {:.3e}", gaps[0], gaps[1], gaps[2]),
    ))
}

fn ladder_state(dim: usize, occupied: &[usize]) -> Result<PureState> {
    let mut a = vec![0.0; dim];
    for &i in occupied {
        a[i] = 1.0;
    }
    PureState::from_real(&a)
}

fn worked_distributions() -> Result<(bool, String)> {
    let h = PeriodicHamiltonian::from_levels(TAU, (0..6).collect())?;
    let gamma = energy_distribution(&ladder_state(6, &[0, 2, 5])?, &h)?;
    let eta_state = ladder_state(6, &[0, 2])?;
    let eta = energy_distribution(&eta_state, &h)?;
    let uniform = [0, 2, 5].iter().all(|&n| (gamma.pmf(n) - 1.0 / 3.0).abs() <= 1e-15) && gamma.support() == [0, 2, 5];
    let sq = gamma.convolve_power(2)?;
    let expected = [(0, 1.0), (2, 2.0), (4, 1.0), (5, 2.0), (7, 2.0), (10, 1.0)];
    let conv = sq.support() == [0, 2, 4, 5, 7, 10] && expected.iter().all(|&(n, w)| (sq.pmf(n) - w / 9.0).abs() <= 1e-15);
    let l_gamma = minimal_adjacent_l(&gamma) == AdjacentL::Finite(2);
    let l_eta = minimal_adjacent_l(&eta) == AdjacentL::NoFiniteL;
    let period = matches!(state_period(&eta_state, &h)?, StatePeriod::Period { tau, divisor: 2 } if (tau - TAU / 2.0).abs() < 1e-15);
    Ok((
        uniform && conv && l_gamma && l_eta && period,
        format!("uniform {uniform}; square {conv}; L(gamma)=2 {l_gamma}; L(eta) none {l_eta}; period tau/2 {period}"),
    ))
}

fn cbit_and_qutrit() -> Result<(PureState, PeriodicHamiltonian, PureState, PeriodicHamiltonian)> {
    let c = CBit::new(TAU);
    let q = PureState::from_real(&[1.0, 1.0, 1.0])?;
    let hq = PeriodicHamiltonian::from_levels(TAU, vec![0, 1, 2])?;
    Ok((c.state, c.hamiltonian, q, hq))
}

const NS: [u64; 4] = [100, 200, 400, 800];

fn achievable_conversion() -> Result<(bool, String)> {
    let (a, ha, b, hb) = cbit_and_qutrit()?;
    let errs = NS
        .iter()
        .map(|&n| iid_convert(&a, &ha, &b, &hb, 0.3, n))
        .collect::<Result<Vec<_>>>()?;
    let trend = errs.windows(2).all(|w| w[1].trace_error <= 1.1 * w[0].trace_error);
    let last = errs[3];
    let q = energy_distribution(&a, &ha)?.variance() * (TAU / (2.0 * std::f64::consts::PI)).powi(2);
    let bound = (q / 0.3 + 2.0) / (q * 800.0).sqrt();
    let errors: Vec<String> = errs.iter().map(|r| format!("{:.4}", r.trace_error)).collect();
    Ok((
        trend && last.trace_error <= bound,
        format!("errors [{}]; bound at n=800 {bound:.4}", errors.join(", ")),
    ))
}

fn converse_floor() -> Result<(bool, String)> {
    let (a, ha, b, hb) = cbit_and_qutrit()?;
    let floor = (monotonicity_gap(0.75) / 4.0).powi(2);
    let v1 = energy_distribution(&a, &ha)?.variance();
    let v2 = energy_distribution(&b, &hb)?.variance();
    let mut min_err = f64::INFINITY;
    let mut last = 0.0;
    for n in NS {
        last = iid_convert(&a, &ha, &b, &hb, 0.5, n)?.trace_error;
        min_err = min_err.min(last);
    }
    let consistent = (min_error_floor(v1, v2, 0.5) - floor).abs() <= 1e-15;
    Ok((
        consistent && min_err >= floor && last >= 0.01,
        format!("floor {floor:.4e}; min error {min_err:.4e}; error at n=800 {last:.4e}"),
    ))
}

fn monotonicity() -> Result<(bool, String)> {
    let mut residual: f64 = 0.0;
    let mut increase = f64::NEG_INFINITY;
    let levels_pool: [&[i64]; 3] = [&[0, 1], &[0, 1, 2], &[0, 1, 3]];
    for seed in 0..50u64 {
        let sys = levels_pool[(seed % 3) as usize];
        let dim = sys.len();
        let basis = random_unitary(dim, seed + 50_000);
        let h = PeriodicHamiltonian::new(TAU, sys.to_vec(), 0.0, Some(basis))?;
        let anc: &[i64] = if seed % 2 == 0 { &[0, 1] } else { &[0, 1, 2] };
        let ch = make_ti_channel(&h, anc, seed)?;
        residual = residual.max(ch.covariance_residual(seed + 51_000)?);
        let rho = random_density(dim, 1 + (seed as usize) % dim, seed + 52_000)?;
        let hm = h.matrix();
        increase = increase.max(qfi(&ch.apply(&rho)?, &hm)?.value - qfi(&rho, &hm)?.value);
    }
    let mut add: f64 = 0.0;
    let mut convex = f64::NEG_INFINITY;
    let mut r = rng(53_000);
    for seed in 0..50u64 {
        let (d1, d2) = (2 + (seed % 2) as usize, 2 + (seed % 3) as usize);
        let r1 = random_density(d1, 1 + (seed as usize) % d1, seed + 54_000)?;
        let r2 = random_density(d2, d2, seed + 55_000)?;
        let h1 = random_hermitian(d1, seed + 56_000);
        let h2 = random_hermitian(d2, seed + 57_000);
        let ht = &h1.kron(&ComplexMatrix::identity(d2)) + &ComplexMatrix::identity(d1).kron(&h2);
        let joint = qfi(&r1.tensor(&r2), &ht)?.value;
        add = add.max((joint - qfi(&r1, &h1)?.value - qfi(&r2, &h2)?.value).abs());
        let s = random_density(d1, d1, seed + 58_000)?;
        let p: f64 = r.random();
        let mix = qfi(&r1.mix(&s, p)?, &h1)?.value;
        convex = convex.max(mix - p * qfi(&r1, &h1)?.value - (1.0 - p) * qfi(&s, &h1)?.value);
    }
    Ok((
        residual <= 1e-8 && increase <= 1e-9 && add <= 1e-8 && convex <= 1e-8,
        format!(
            "covariance residual {residual:.3e}; max increase {increase:.3e}; additivity {add:.3e}; convexity excess {convex:.3e}"
        ),
    ))
}

fn approximation() -> Result<(bool, String)> {
    let mut r = rng(60_000);
    let mut adell_ok = true;
    for _ in 0..50 {
        let l1: f64 = r.random_range(0.5..40.0);
        let x: f64 = r.random_range(0.0..5.0);
        let tv = tv_distance(&poisson_pmf(l1)?, &poisson_pmf(l1 + x)?);
        adell_ok &= tv <= adell_bound(l1, x)? + 1e-12;
    }
    let gamma = IntDist::from_pairs(&[(0, 1.0 / 3.0), (2, 1.0 / 3.0), (5, 1.0 / 3.0)])?;
    let p = gamma.convolve(&gamma);
    let mut bc_ok = true;
    let mut vacuous = Vec::new();
    for m in [4u64, 16, 64, 256] {
        match bc_bound(&p, m)? {
            BcBound::Bound { value, .. } => bc_ok &= tp_distance(&p, m)? <= value,
            BcBound::Inapplicable(_) => vacuous.push(m),
        }
    }
    let mut tp_ok = true;
    for _ in 0..50 {
        let sigma2: f64 = r.random_range(0.5..50.0);
        let mu: f64 = r.random_range(-20.0..80.0);
        let d = TranslatedPoisson::new(mu, sigma2)?.dist()?;
        let excess = d.variance() - sigma2;
        tp_ok &= (-1e-9..1.0).contains(&excess) && (d.mean() - mu).abs() <= 1e-9 * mu.abs().max(1.0);
    }
    Ok((
        adell_ok && bc_ok && tp_ok,
        format!("adell {adell_ok}; bc {bc_ok} (vacuous at m={vacuous:?}); TP variance {tp_ok}"),
    ))
}

fn cost_accounting() -> Result<(bool, String)> {
    let c = CBit::new(TAU);
    let cbit = pure_coherence_cost(&c.state, &c.hamiltonian)?;
    let h = PeriodicHamiltonian::new(TAU, vec![0, 1], -0.5, None)?;
    let mixed = coherence_cost(&plus_mixture(0.9)?, &h)?;
    let hn = h.matrix().operator_norm_hermitian()?;
    let mut slack_ok = true;
    for seed in 0..20u64 {
        let rho = random_density(2, 2, seed + 70_000)?;
        let cost = coherence_cost(&rho, &h)?;
        let e = preparation_ensemble(&rho, &h)?;
        for delta in [0.01, 0.05, 0.1] {
            let excess = protocol_rate(&e, &h, delta)? - cost;
            slack_ok &= excess <= 2.0 * delta * hn * hn * (h.tau() / std::f64::consts::PI).powi(2) + 1e-12;
        }
    }
    let errs = [50u64, 100, 200]
        .iter()
        .map(|&m| typicality_simulate(&plus_mixture(0.9)?, &h, 0.05, m, 2000, 1).map(|r| r.p_err))
        .collect::<Result<Vec<_>>>()?;
    let decreasing = errs[0] > errs[1] && errs[1] > errs[2];
    Ok((
        cbit == 1.0 && (mixed - 0.64).abs() <= 1e-10 && slack_ok && decreasing,
        format!(
            "c-bit {cbit}; mixed {mixed:.12}; rate slack {slack_ok}; p_err [{:.3e}, {:.3e}, {:.3e}]",
            errs[0], errs[1], errs[2]
        ),
    ))
}

fn fidelity_inequalities() -> Result<(bool, String)> {
    let mut lemma = f64::NEG_INFINITY;
    let mut fvdg = f64::NEG_INFINITY;
    for seed in 0..200u64 {
        let d = 2 + (seed % 3) as usize;
        let u = random_unitary(d, seed + 80_000);
        let t1 = random_density(d, 1 + (seed as usize) % d, seed + 81_000)?;
        let t2 = random_density(d, d, seed + 82_000)?;
        let (lhs, rhs) = lemma_fid_gap(&u, &t1, &t2)?;
        lemma = lemma.max(lhs - rhs);
        let f = fidelity(&t1, &t2)?;
        let dist = trace_distance(&t1, &t2)?;
        fvdg = fvdg.max((1.0 - f.sqrt()) - dist).max(dist - (1.0 - f).sqrt());
        let b = bures_distance(&t1, &t2)?;
        fvdg = fvdg.max((b * b / 2.0 - (1.0 - f.sqrt())).abs() - 1e-12);
    }
    Ok((
        lemma <= 1e-10 && fvdg <= 1e-10,
        format!("lemma excess {lemma:.3e}; Fuchs-van de Graaf excess {fvdg:.3e}"),
    ))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn lookup_and_display() {
        let o = run(6).unwrap();
        assert!(o.passed, "{o}");
        assert!(o.to_string().starts_with("PASS [ 6]"));
        assert!(run(13).is_none());
    }

    #[test]
    fn errors_become_failures() {
        fn broken() -> Result<(bool, String)> {
            Err(crate::Error::Stationary)
        }
        let o = run_one(99, "broken", broken);
        assert!(!o.passed);
        assert!(o.detail.contains("Stationary"));
    }
}
