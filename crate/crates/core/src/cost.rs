//! Coherence cost in c-bits per copy, and a simulator for the typical-string
//! preparation protocol.
//!
//! Costs are measured against the c-bit: a qubit in `(|0> + |1>)/sqrt 2` with
//! Hamiltonian `pi sigma_z / tau`, whose QFI is `(2 pi / tau)^2`.

use std::f64::consts::PI;

use rand::Rng;
use rand_distr::{Binomial, Distribution};
use serde::{Deserialize, Serialize};
use statrs::function::factorial::ln_factorial;

use crate::convert::{convert_distributions, min_error_floor};
use crate::error::{Error, Result};
use crate::numkit::random::rng;
use crate::numkit::{DensityOperator, PureState};
use crate::qfi::{pure_variance, qfi};
use crate::roof::{
    coherent_gap_gcd, joint_period_divisor, member_periods, period_partitions, refine_ensemble_periods, yu_ensemble,
    Ensemble,
};
use crate::spectral::{energy_distribution, gap_gcd, IntDist, PeriodicHamiltonian};

/// Largest ensemble and copy count for which typical-set tails are summed exactly.
pub const EXACT_MAX_MEMBERS: usize = 3;
pub const EXACT_MAX_COPIES: u64 = 200;

/// Slack on the closed typicality interval, absorbing rounding in `n/m - q`.
const TOL_TYPICAL: f64 = 1e-12;

/// Reference coherence unit.
#[derive(Debug, Clone)]
pub struct CBit {
    pub tau: f64,
    pub state: PureState,
    pub hamiltonian: PeriodicHamiltonian,
}

impl CBit {
    pub fn new(tau: f64) -> Self {
        Self {
            tau,
            state: PureState::from_real(&[1.0, 1.0]).expect("nonzero"),
            hamiltonian: PeriodicHamiltonian::cbit(tau),
        }
    }

    /// `(pi / tau)^2`.
    pub fn variance(&self) -> f64 {
        (PI / self.tau).powi(2)
    }

    /// `(2 pi / tau)^2`.
    pub fn qfi(&self) -> f64 {
        4.0 * self.variance()
    }

    /// Single-copy energy distribution: uniform on `{0, 1}`.
    pub fn energy_distribution(&self) -> IntDist {
        IntDist::from_pairs(&[(0, 0.5), (1, 0.5)]).expect("valid pmf")
    }
}

/// `(tau / 2 pi)^2 F_H(rho)`, i.e. the QFI of the level operator.
///
/// Fails with `NotPeriodic` when the coherent level gaps of `rho` share a
/// common divisor above one.
pub fn coherence_cost(rho: &DensityOperator, h: &PeriodicHamiltonian) -> Result<f64> {
    let g = coherent_gap_gcd(rho, h)?;
    if g > 1 {
        return Err(Error::NotPeriodic(g));
    }
    Ok(qfi(rho, &h.level_matrix())?.value)
}

/// Cost of a pure state: `4 Var(p_psi)` over its integer energy distribution.
///
/// Agrees with [`coherence_cost`] on `|psi><psi|` but avoids the eigensolver,
/// so states with dyadic level weights such as the c-bit come out exact.
pub fn pure_coherence_cost(psi: &PureState, h: &PeriodicHamiltonian) -> Result<f64> {
    let p = energy_distribution(psi, h)?;
    let g = gap_gcd(&p.support());
    if g > 1 {
        return Err(Error::NotPeriodic(g));
    }
    Ok(4.0 * p.variance())
}

/// `sum_l (q_l + delta) V_H(eta_l) / (pi / tau)^2`.
pub fn protocol_rate(e: &Ensemble, h: &PeriodicHamiltonian, delta: f64) -> Result<f64> {
    if !(delta >= 0.0) {
        return Err(Error::InvalidArgument(format!("delta must be non-negative, got {delta}")));
    }
    check_member_periods(e, h)?;
    let lm = h.level_matrix();
    let mut total = 0.0;
    for (q, eta) in e.members() {
        total += (q + delta) * 4.0 * pure_variance(eta, &lm)?;
    }
    Ok(total)
}

fn check_member_periods(e: &Ensemble, h: &PeriodicHamiltonian) -> Result<()> {
    match joint_period_divisor(&member_periods(e, h)?) {
        Some(g) if g != 1 => Err(Error::EnsemblePeriodViolation(format!(
            "member period divisors share the factor {g}"
        ))),
        _ => Ok(()),
    }
}

/// Yu ensemble split across the coherence-closed level partitions.
pub fn preparation_ensemble(rho: &DensityOperator, h: &PeriodicHamiltonian) -> Result<Ensemble> {
    let yu = yu_ensemble(rho, &h.matrix())?;
    let parts = period_partitions(rho, h)?;
    refine_ensemble_periods(&yu.ensemble, &parts)
}

/// Outcome of the typical-string preparation protocol on `m` copies.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ProtocolReport {
    pub m: u64,
    pub delta: f64,
    /// Probability that the sampled string is atypical.
    pub p_err: f64,
    /// Whether `p_err` is an exact tail sum rather than a Monte-Carlo estimate.
    pub exact: bool,
    pub cbit_rate: f64,
    pub target_cost: f64,
    /// Summed trace-distance error of the per-member blocked preparations.
    pub conversion_error: f64,
    /// `p_err + conversion_error`.
    pub achieved_error: f64,
}

impl ProtocolReport {
    pub const CSV_HEADER: &'static str = "m,delta,p_err,cbit_rate,target_cost,achieved_error";

    pub fn csv_row(&self) -> String {
        format!(
            "{},{:.16e},{:.16e},{:.16e},{:.16e},{:.16e}",
            self.m, self.delta, self.p_err, self.cbit_rate, self.target_cost, self.achieved_error
        )
    }
}

fn is_typical(counts: &[u64], q: &[f64], m: u64, delta: f64) -> bool {
    counts
        .iter()
        .zip(q)
        .all(|(&n, &ql)| (n as f64 / m as f64 - ql).abs() <= delta + TOL_TYPICAL)
}

fn ln_multinomial(counts: &[u64], q: &[f64], m: u64) -> f64 {
    let mut s = ln_factorial(m);
    for (&n, &ql) in counts.iter().zip(q) {
        s -= ln_factorial(n);
        if n > 0 {
            s += n as f64 * ql.ln();
        }
    }
    s
}

/// Exact probability that a multinomial `(m, q)` count vector is atypical.
pub fn atypical_probability_exact(q: &[f64], m: u64, delta: f64) -> Result<f64> {
    let mut typical = 0.0;
    match q.len() {
        1 => return Ok(0.0),
        2 => {
            for a in 0..=m {
                let c = [a, m - a];
                if is_typical(&c, q, m, delta) {
                    typical += ln_multinomial(&c, q, m).exp();
                }
            }
        }
        3 => {
            for a in 0..=m {
                for b in 0..=(m - a) {
                    let c = [a, b, m - a - b];
                    if is_typical(&c, q, m, delta) {
                        typical += ln_multinomial(&c, q, m).exp();
                    }
                }
            }
        }
        k => {
            return Err(Error::InvalidArgument(format!(
                "exact tails support at most {EXACT_MAX_MEMBERS} members, got {k}"
            )))
        }
    }
    Ok((1.0 - typical).clamp(0.0, 1.0))
}

/// Monte-Carlo estimate of the atypical probability, drawing counts by sequential binomials.
pub fn atypical_probability_mc(q: &[f64], m: u64, delta: f64, trials: u64, seed: u64) -> Result<f64> {
    if trials == 0 {
        return Err(Error::InvalidArgument("need at least one trial".into()));
    }
    let mut r = rng(seed);
    let mut bad = 0u64;
    let mut counts = vec![0u64; q.len()];
    for _ in 0..trials {
        sample_multinomial(q, m, &mut r, &mut counts)?;
        if !is_typical(&counts, q, m, delta) {
            bad += 1;
        }
    }
    Ok(bad as f64 / trials as f64)
}

fn sample_multinomial(q: &[f64], m: u64, r: &mut impl Rng, out: &mut [u64]) -> Result<()> {
    let mut left = m;
    let mut mass = 1.0;
    for (l, &ql) in q.iter().enumerate() {
        if l + 1 == q.len() {
            out[l] = left;
            break;
        }
        let p = if mass > 0.0 { (ql / mass).clamp(0.0, 1.0) } else { 0.0 };
        let n = Binomial::new(left, p)
            .map_err(|e| Error::InvalidArgument(format!("binomial sampler: {e}")))?
            .sample(r);
        out[l] = n;
        left -= n;
        mass -= ql;
    }
    Ok(())
}

/// `2 |S| exp(-2 m delta^2)`, a union-of-Hoeffding ceiling on the atypical probability.
pub fn hoeffding_ceiling(members: usize, m: u64, delta: f64) -> f64 {
    (2.0 * members as f64 * (-2.0 * m as f64 * delta * delta).exp()).min(1.0)
}

/// Simulates preparing `m` copies of `rho` from c-bits.
///
/// The atypical probability is exact for small ensembles and copy counts and
/// sampled with `trials` draws otherwise. Each member `l` is prepared in a
/// block of `ceil(m (q_l + delta))` copies by iid conversion from c-bits at
/// the variance ratio; surplus copies are discarded.
pub fn typicality_simulate(
    rho: &DensityOperator,
    h: &PeriodicHamiltonian,
    delta: f64,
    m: u64,
    trials: u64,
    seed: u64,
) -> Result<ProtocolReport> {
    if m == 0 {
        return Err(Error::InvalidArgument("need at least one copy".into()));
    }
    let e = preparation_ensemble(rho, h)?;
    let q = e.weights();
    let exact = q.len() <= EXACT_MAX_MEMBERS && m <= EXACT_MAX_COPIES;
    let p_err = if exact {
        atypical_probability_exact(&q, m, delta)?
    } else {
        atypical_probability_mc(&q, m, delta, trials, seed)?
    };

    let cbit = CBit::new(h.tau()).energy_distribution();
    let v_cbit = cbit.variance();
    let mut conversion_error = 0.0;
    for (ql, eta) in e.members() {
        let p = energy_distribution(eta, h)?;
        let v = p.variance();
        if v <= 0.0 {
            continue;
        }
        let block = ((m as f64) * (ql + delta)).ceil().max(1.0) as u64;
        let rate = v_cbit / v;
        let inputs = ((block as f64) / rate).ceil() as u64;
        let rep = convert_distributions(&cbit, &p, rate, inputs.max(1))?;
        conversion_error += rep.trace_error;
    }

    Ok(ProtocolReport {
        m,
        delta,
        p_err,
        exact,
        cbit_rate: protocol_rate(&e, h, delta)?,
        target_cost: coherence_cost(rho, h)?,
        conversion_error,
        achieved_error: (p_err + conversion_error).min(1.0),
    })
}

/// Reports for every `(m, delta)` pair, `m` outermost.
pub fn protocol_sweep(
    rho: &DensityOperator,
    h: &PeriodicHamiltonian,
    ms: &[u64],
    deltas: &[f64],
    trials: u64,
    seed: u64,
) -> Result<Vec<ProtocolReport>> {
    let mut out = Vec::with_capacity(ms.len() * deltas.len());
    for (i, &m) in ms.iter().enumerate() {
        for (j, &d) in deltas.iter().enumerate() {
            let cell_seed = seed.wrapping_add((i * deltas.len() + j) as u64);
            out.push(typicality_simulate(rho, h, d, m, trials, cell_seed)?);
        }
    }
    Ok(out)
}

/// Verdict of [`cost_converse`].
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub enum ConverseVerdict {
    Consistent,
    Violation,
}

/// Checks a claimed preparation against the converse bound.
///
/// Spending `R` c-bits per copy is a conversion from c-bits to `rho` at rate
/// `1/R`, so `T = F_cbit R / F_H(rho) = R / cost`. A claim is a violation when
/// `R` is below the cost and the observed error is below `(g(T)/4)^2`.
pub fn cost_converse(rho: &DensityOperator, h: &PeriodicHamiltonian, rate: f64, delta_observed: f64) -> Result<ConverseVerdict> {
    if !(rate > 0.0) {
        return Err(Error::InvalidArgument(format!("rate must be positive, got {rate}")));
    }
    let cost = coherence_cost(rho, h)?;
    if rate >= cost {
        return Ok(ConverseVerdict::Consistent);
    }
    let floor = min_error_floor(1.0, cost, 1.0 / rate);
    Ok(if delta_observed < floor {
        ConverseVerdict::Violation
    } else {
        ConverseVerdict::Consistent
    })
}
