//! Poisson and translated-Poisson laws, exact total-variation distances, and
//! two analytic bounds: the Adell bound between Poisson laws and the
//! Barbour–Čekanavičius bound for iid integer sums.
//!
//! Poisson laws are parameterized by `lambda`, which is both mean and
//! variance.

use serde::{Deserialize, Serialize};
use statrs::function::factorial::ln_factorial;

use crate::error::{Error, Result};
use crate::spectral::IntDist;

/// Default probability mass allowed to be discarded from Poisson tails.
pub const TAIL_EPS: f64 = 1e-14;

/// Poisson pmf with default tail truncation.
pub fn poisson_pmf(lambda: f64) -> Result<IntDist> {
    poisson_pmf_with_tail(lambda, TAIL_EPS)
}

/// `e^{-lambda} lambda^l / l!`, renormalized after cutting both tails.
///
/// A tail is cut only while its mass weighted by `1 + (l - lambda)^2` stays
/// below `tail_eps / 2`, which bounds both the discarded mass and its effect
/// on the variance.
pub fn poisson_pmf_with_tail(lambda: f64, tail_eps: f64) -> Result<IntDist> {
    if !(lambda > 0.0) || !lambda.is_finite() {
        return Err(Error::InvalidArgument(format!("poisson rate must be positive, got {lambda}")));
    }
    if !(tail_eps > 0.0 && tail_eps < 1.0) {
        return Err(Error::InvalidArgument(format!("tail_eps {tail_eps} outside (0,1)")));
    }
    let hi = (lambda + 15.0 * lambda.sqrt() + 40.0).ceil() as u64;
    let ln_l = lambda.ln();
    let w: Vec<f64> = (0..=hi)
        .map(|l| (-lambda + l as f64 * ln_l - ln_factorial(l)).exp())
        .collect();

    let half = 0.5 * tail_eps;
    let weight = |l: usize| w[l] * (1.0 + (l as f64 - lambda).powi(2));
    let mut lo_cut = 0;
    let mut acc = 0.0;
    while lo_cut < w.len() - 1 && acc + weight(lo_cut) < half {
        acc += weight(lo_cut);
        lo_cut += 1;
    }
    let mut hi_cut = w.len();
    acc = 0.0;
    while hi_cut > lo_cut + 1 && acc + weight(hi_cut - 1) < half {
        acc += weight(hi_cut - 1);
        hi_cut -= 1;
    }
    IntDist::normalized(lo_cut as i64, w[lo_cut..hi_cut].to_vec())
}

/// `TP(mu, sigma2)`: a Poisson law of rate `sigma2 + gamma` shifted by `s`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TranslatedPoisson {
    pub mu: f64,
    pub sigma2: f64,
    /// `floor(mu - sigma2)`.
    pub shift: i64,
    /// `mu - sigma2 - shift`, in `[0, 1)`.
    pub gamma: f64,
}

impl TranslatedPoisson {
    pub fn new(mu: f64, sigma2: f64) -> Result<Self> {
        if !(sigma2 > 0.0) || !sigma2.is_finite() || !mu.is_finite() {
            return Err(Error::InvalidArgument(format!(
                "translated Poisson needs finite mu and sigma2 > 0, got ({mu}, {sigma2})"
            )));
        }
        let d = mu - sigma2;
        let shift = d.floor();
        let gamma = (d - shift).clamp(0.0, 1.0 - f64::EPSILON);
        Ok(Self {
            mu,
            sigma2,
            shift: shift as i64,
            gamma,
        })
    }

    pub fn lambda(&self) -> f64 {
        self.sigma2 + self.gamma
    }

    pub fn dist(&self) -> Result<IntDist> {
        Ok(poisson_pmf(self.lambda())?.shift(self.shift))
    }
}

pub fn translated_poisson(mu: f64, sigma2: f64) -> Result<IntDist> {
    TranslatedPoisson::new(mu, sigma2)?.dist()
}

/// `½ Σ_n |p(n) - q(n)|` over the union of supports.
pub fn tv_distance(p: &IntDist, q: &IntDist) -> f64 {
    let lo = p.min_support().min(q.min_support());
    let hi = p.max_support().max(q.max_support());
    let s: f64 = (lo..=hi).map(|n| (p.pmf(n) - q.pmf(n)).abs()).sum();
    (0.5 * s).clamp(0.0, 1.0)
}

/// Upper bound on `d_TV(P(sigma2), P(sigma2 + x))`:
/// `min{x, sqrt(2/e) (sqrt(sigma2 + x) - sqrt(sigma2))}`.
pub fn adell_bound(sigma2: f64, x: f64) -> Result<f64> {
    if !(sigma2 > 0.0) || !(x >= 0.0) || !sigma2.is_finite() || !x.is_finite() {
        return Err(Error::InvalidArgument(format!("adell_bound needs sigma2 > 0, x >= 0; got ({sigma2}, {x})")));
    }
    let c = (2.0 / std::f64::consts::E).sqrt();
    Ok(x.min(c * ((sigma2 + x).sqrt() - sigma2.sqrt())))
}

/// Result of the Barbour–Čekanavičius bound for an iid sum.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub enum BcBound {
    Bound {
        value: f64,
        /// Summand variance.
        a: f64,
        /// `min{1/2, 1 - d_TV(p, p shifted by 1)}`.
        b: f64,
        /// `phi / variance`.
        c: f64,
    },
    Inapplicable(String),
}

impl BcBound {
    pub fn value(&self) -> Option<f64> {
        match self {
            BcBound::Bound { value, .. } => Some(*value),
            BcBound::Inapplicable(_) => None,
        }
    }
}

/// `phi = s2 E[X(X-1)] + |mu - s2| E[(X-1)(X-2)] + E|X(X-1)(X-2)|` by direct summation.
pub fn bc_phi(p: &IntDist) -> f64 {
    let mu = p.mean();
    let s2 = p.variance();
    s2 * p.expect(|x| x * (x - 1.0))
        + (mu - s2).abs() * p.expect(|x| (x - 1.0) * (x - 2.0))
        + p.expect(|x| (x * (x - 1.0) * (x - 2.0)).abs())
}

/// `c / sqrt(m b - 1/2) + 2 / (m a)` for the sum of `m` iid draws from `p`,
/// measured against `TP(m mean, m var)`.
pub fn bc_bound(p: &IntDist, m: u64) -> Result<BcBound> {
    if m == 0 {
        return Err(Error::InvalidArgument("bc_bound needs m >= 1".into()));
    }
    let a = p.variance();
    if a <= 0.0 {
        return Ok(BcBound::Inapplicable("zero variance".into()));
    }
    let overlap = 1.0 - tv_distance(p, &p.shift(1));
    let b = overlap.min(0.5);
    if b <= 0.0 {
        return Ok(BcBound::Inapplicable("support is disjoint from its unit shift".into()));
    }
    let mb = m as f64 * b;
    if mb <= 0.5 {
        return Ok(BcBound::Inapplicable(format!("m b = {mb} does not exceed 1/2")));
    }
    let c = bc_phi(p) / a;
    let value = c / (mb - 0.5).sqrt() + 2.0 / (m as f64 * a);
    Ok(BcBound::Bound { value, a, b, c })
}

/// Exact `d_TV(p^{*m}, TP(m mean(p), m var(p)))`.
pub fn tp_distance(p: &IntDist, m: u64) -> Result<f64> {
    let sum = p.convolve_power(m)?;
    let tp = translated_poisson(m as f64 * p.mean(), m as f64 * p.variance())?;
    Ok(tv_distance(&sum, &tp))
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::{assert_abs_diff_eq, assert_relative_eq};
    use proptest::prelude::*;

    fn p_gamma() -> IntDist {
        IntDist::from_pairs(&[(0, 1.0 / 3.0), (2, 1.0 / 3.0), (5, 1.0 / 3.0)]).unwrap()
    }

    // Forward recurrence p(l+1) = p(l) lambda / (l+1), independent of ln_factorial.
    fn poisson_recurrence(lambda: f64, n: usize) -> Vec<f64> {
        let mut out = vec![(-lambda).exp()];
        for l in 0..n {
            let next = out[l] * lambda / (l as f64 + 1.0);
            out.push(next);
        }
        out
    }

    #[test]
    fn poisson_at_one() {
        let p = poisson_pmf(1.0).unwrap();
        assert_relative_eq!(p.pmf(0), (-1.0f64).exp(), max_relative = 1e-13);
        let r = poisson_recurrence(1.0, 10);
        for (l, v) in r.iter().enumerate() {
            assert_relative_eq!(p.pmf(l as i64), *v, max_relative = 1e-12);
        }
    }

    #[test]
    fn poisson_small_rate() {
        let p = poisson_pmf(1e-6).unwrap();
        assert!(p.pmf(0) >= 1.0 - 2e-6);
    }

    #[test]
    fn poisson_moments() {
        let p = poisson_pmf(4.5).unwrap();
        assert_abs_diff_eq!(p.mean(), 4.5, epsilon = 1e-12);
        assert_abs_diff_eq!(p.variance(), 4.5, epsilon = 1e-12);
    }

    #[test]
    fn poisson_large_rate_drops_left_tail() {
        let p = poisson_pmf(2000.0).unwrap();
        assert!(p.min_support() > 1000);
        assert_relative_eq!(p.mean(), 2000.0, max_relative = 1e-12);
        assert_relative_eq!(p.variance(), 2000.0, max_relative = 1e-10);
    }

    #[test]
    fn invalid_rate() {
        assert!(poisson_pmf(0.0).is_err());
        assert!(poisson_pmf(f64::NAN).is_err());
    }

    #[test]
    fn tp_zero_shift() {
        let tp = TranslatedPoisson::new(3.0, 3.0).unwrap();
        assert_eq!((tp.shift, tp.gamma), (0, 0.0));
        assert_eq!(tp.dist().unwrap(), poisson_pmf(3.0).unwrap());
    }

    #[test]
    fn tp_integer_shift() {
        let tp = TranslatedPoisson::new(10.0, 2.0).unwrap();
        assert_eq!((tp.shift, tp.gamma), (8, 0.0));
        assert_abs_diff_eq!(tp.dist().unwrap().mean(), 10.0, epsilon = 1e-9);
    }

    #[test]
    fn tp_matches_gamma_moments() {
        let p = p_gamma();
        assert_abs_diff_eq!(p.mean(), 7.0 / 3.0, epsilon = 1e-15);
        assert_abs_diff_eq!(p.variance(), 38.0 / 9.0, epsilon = 1e-14);
        let tp = TranslatedPoisson::new(p.mean(), p.variance()).unwrap();
        assert_eq!(tp.shift, -2);
        let d = tp.dist().unwrap();
        assert_abs_diff_eq!(d.mean(), 7.0 / 3.0, epsilon = 1e-9);
        assert_abs_diff_eq!(d.variance(), tp.sigma2 + tp.gamma, epsilon = 1e-9);
    }

    #[test]
    fn tv_trivial_cases() {
        let p = p_gamma();
        assert_eq!(tv_distance(&p, &p), 0.0);
        assert_eq!(tv_distance(&IntDist::point(0), &IntDist::point(3)), 1.0);
        assert_abs_diff_eq!(tv_distance(&p, &p.shift(1)), 1.0, epsilon = 1e-15);
    }

    #[test]
    fn adell_values() {
        assert_eq!(adell_bound(1.0, 0.0).unwrap(), 0.0);
        let b = adell_bound(1.0, 0.5).unwrap();
        assert_abs_diff_eq!(b, 0.192_778, epsilon = 1e-6);
        let exact = tv_distance(&poisson_pmf(1.0).unwrap(), &poisson_pmf(1.5).unwrap());
        assert!(exact <= b + 1e-12);
    }

    #[test]
    fn bc_single_gamma_is_inapplicable() {
        assert!(matches!(bc_bound(&p_gamma(), 10).unwrap(), BcBound::Inapplicable(_)));
        assert!(matches!(bc_bound(&IntDist::point(4), 10).unwrap(), BcBound::Inapplicable(_)));
    }

    #[test]
    fn bc_gamma_squared() {
        let p2 = p_gamma().convolve(&p_gamma());
        assert_eq!(p2.support(), vec![0, 2, 4, 5, 7, 10]);
        assert_abs_diff_eq!(1.0 - tv_distance(&p2, &p2.shift(1)), 1.0 / 9.0, epsilon = 1e-15);
        assert!(matches!(bc_bound(&p2, 4).unwrap(), BcBound::Inapplicable(_)));
        let mut prev = f64::INFINITY;
        for m in [16u64, 64, 256] {
            let BcBound::Bound { value, b, .. } = bc_bound(&p2, m).unwrap() else {
                panic!("expected a finite bound at m = {m}");
            };
            assert_abs_diff_eq!(b, 1.0 / 9.0, epsilon = 1e-15);
            assert!(value < prev);
            prev = value;
            assert!(tp_distance(&p2, m).unwrap() <= value);
        }
    }

    #[test]
    fn tp_distance_shrinks() {
        let p2 = p_gamma().convolve(&p_gamma());
        let d: Vec<f64> = [4u64, 16, 64, 256].iter().map(|&m| tp_distance(&p2, m).unwrap()).collect();
        for w in d.windows(2) {
            assert!(w[1] <= 1.1 * w[0], "{d:?}");
        }
        assert!(d[3] < 0.05);
    }

    #[test]
    fn phi_of_bernoulli() {
        // X in {0,1}: X(X-1) = 0 and (X-1)(X-2) = 0 at X = 1, 2 at X = 0.
        let p = IntDist::from_pairs(&[(0, 0.5), (1, 0.5)]).unwrap();
        let expect = (0.5f64 - 0.25).abs() * 0.5 * 2.0;
        assert_abs_diff_eq!(bc_phi(&p), expect, epsilon = 1e-15);
    }

    fn arb_dist() -> impl Strategy<Value = IntDist> {
        (-3i64..3, prop::collection::vec(0.0f64..1.0, 1..6)).prop_filter_map("mass", |(lo, w)| {
            IntDist::normalized(lo, w).ok()
        })
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(64))]

        #[test]
        fn adell_dominates_exact(s2 in 0.05f64..20.0, x in 0.0f64..5.0) {
            let exact = tv_distance(&poisson_pmf(s2).unwrap(), &poisson_pmf(s2 + x).unwrap());
            prop_assert!(exact <= adell_bound(s2, x).unwrap() + 1e-12);
        }

        #[test]
        fn tp_variance_excess_in_unit_interval(mu in -50.0f64..50.0, s2 in 0.1f64..30.0) {
            let tp = TranslatedPoisson::new(mu, s2).unwrap();
            let d = tp.dist().unwrap();
            prop_assert!((d.mean() - mu).abs() <= 1e-9 * mu.abs().max(1.0));
            let excess = d.variance() - s2;
            prop_assert!(excess > -1e-9 && excess < 1.0);
        }

        #[test]
        fn tv_is_a_metric(p in arb_dist(), q in arb_dist(), r in arb_dist()) {
            let pq = tv_distance(&p, &q);
            prop_assert!((pq - tv_distance(&q, &p)).abs() <= 1e-15);
            prop_assert!(tv_distance(&p, &p) == 0.0);
            prop_assert!(tv_distance(&p, &r) <= pq + tv_distance(&q, &r) + 1e-12);
        }
    }
}
