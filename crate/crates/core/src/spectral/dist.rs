use crate::error::{Error, Result};

/// Default cap on the number of support points a convolution may produce.
pub const DEFAULT_SUPPORT_CAP: u64 = 10_000_000;

/// Tolerance on total probability mass.
pub const TOL_PMF: f64 = 1e-12;

/// Finitely supported probability mass function on the integers.
///
/// Stored densely from `min` upward; the first and last weights are nonzero.
#[derive(Debug, Clone, PartialEq)]
pub struct IntDist {
    min: i64,
    weights: Vec<f64>,
}

impl IntDist {
    /// Validates mass and sign, then trims zero weights at both ends.
    pub fn new(min: i64, weights: Vec<f64>) -> Result<Self> {
        if weights.iter().any(|w| !w.is_finite()) {
            return Err(Error::NonFinite);
        }
        if let Some(w) = weights.iter().find(|&&w| w < 0.0) {
            return Err(Error::InvalidDistribution(format!("negative weight {w}")));
        }
        let total: f64 = weights.iter().sum();
        if (total - 1.0).abs() > TOL_PMF {
            return Err(Error::InvalidDistribution(format!("total mass {total}")));
        }
        Ok(Self::trimmed(min, weights))
    }

    /// Like [`IntDist::new`] but rescales positive mass to one first.
    pub fn normalized(min: i64, mut weights: Vec<f64>) -> Result<Self> {
        let total: f64 = weights.iter().sum();
        if !(total > 0.0) || !total.is_finite() {
            return Err(Error::InvalidDistribution(format!("total mass {total}")));
        }
        for w in weights.iter_mut() {
            *w /= total;
        }
        Self::new(min, weights)
    }

    /// Builds a pmf from `(n, weight)` pairs; repeated `n` accumulate.
    pub fn from_pairs(pairs: &[(i64, f64)]) -> Result<Self> {
        let lo = pairs.iter().map(|p| p.0).min();
        let hi = pairs.iter().map(|p| p.0).max();
        let (Some(lo), Some(hi)) = (lo, hi) else {
            return Err(Error::InvalidDistribution("empty support".into()));
        };
        let mut w = vec![0.0; (hi - lo + 1) as usize];
        for &(n, p) in pairs {
            w[(n - lo) as usize] += p;
        }
        Self::new(lo, w)
    }

    pub fn point(n: i64) -> Self {
        Self {
            min: n,
            weights: vec![1.0],
        }
    }

    fn trimmed(mut min: i64, mut weights: Vec<f64>) -> Self {
        while weights.last() == Some(&0.0) {
            weights.pop();
        }
        let lead = weights.iter().take_while(|&&w| w == 0.0).count();
        weights.drain(..lead);
        min += lead as i64;
        Self { min, weights }
    }

    pub fn min_support(&self) -> i64 {
        self.min
    }

    pub fn max_support(&self) -> i64 {
        self.min + self.weights.len() as i64 - 1
    }

    /// Number of integers from the lowest to the highest support point.
    pub fn span(&self) -> usize {
        self.weights.len()
    }

    pub fn weights(&self) -> &[f64] {
        &self.weights
    }

    pub fn pmf(&self, n: i64) -> f64 {
        let i = n - self.min;
        if i < 0 {
            return 0.0;
        }
        self.weights.get(i as usize).copied().unwrap_or(0.0)
    }

    /// Points carrying strictly positive weight.
    pub fn support(&self) -> Vec<i64> {
        self.iter().filter(|&(_, w)| w > 0.0).map(|(n, _)| n).collect()
    }

    pub fn iter(&self) -> impl Iterator<Item = (i64, f64)> + '_ {
        self.weights
            .iter()
            .enumerate()
            .map(move |(i, &w)| (self.min + i as i64, w))
    }

    pub fn mean(&self) -> f64 {
        // Centered at `min` to limit cancellation for far-off supports.
        self.min as f64 + self.weights.iter().enumerate().map(|(i, w)| i as f64 * w).sum::<f64>()
    }

    pub fn variance(&self) -> f64 {
        let m = self.mean() - self.min as f64;
        self.weights
            .iter()
            .enumerate()
            .map(|(i, w)| (i as f64 - m).powi(2) * w)
            .sum()
    }

    /// `E[f(X)]`.
    pub fn expect(&self, f: impl Fn(f64) -> f64) -> f64 {
        self.iter().map(|(n, w)| w * f(n as f64)).sum()
    }

    /// Distribution of `X + k`.
    pub fn shift(&self, k: i64) -> Self {
        Self {
            min: self.min + k,
            weights: self.weights.clone(),
        }
    }

    /// Distribution of the sum of independent draws.
    pub fn convolve(&self, other: &Self) -> Self {
        let mut w = vec![0.0; self.weights.len() + other.weights.len() - 1];
        for (i, a) in self.weights.iter().enumerate() {
            if *a == 0.0 {
                continue;
            }
            for (j, b) in other.weights.iter().enumerate() {
                w[i + j] += a * b;
            }
        }
        Self::trimmed(self.min + other.min, w)
    }

    /// Exact `m`-fold self-convolution with the default support cap.
    pub fn convolve_power(&self, m: u64) -> Result<Self> {
        self.convolve_power_capped(m, DEFAULT_SUPPORT_CAP)
    }

    pub fn convolve_power_capped(&self, m: u64, cap: u64) -> Result<Self> {
        if m == 0 {
            return Err(Error::InvalidArgument("convolution power must be >= 1".into()));
        }
        let width = (self.weights.len() - 1) as u64;
        let needed = width.saturating_mul(m).saturating_add(1);
        if needed > cap {
            return Err(Error::SupportOverflow(needed, cap));
        }
        let mut result: Option<Self> = None;
        let mut base = self.clone();
        let mut k = m;
        loop {
            if k & 1 == 1 {
                result = Some(match result {
                    None => base.clone(),
                    Some(r) => r.convolve(&base),
                });
            }
            k >>= 1;
            if k == 0 {
                break;
            }
            base = base.convolve(&base);
        }
        let mut r = result.expect("m >= 1");
        let total: f64 = r.weights.iter().sum();
        r.weights.iter_mut().for_each(|w| *w /= total);
        Ok(r)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;
    use proptest::prelude::*;

    fn binomial_pmf(n: u64, k: u64) -> f64 {
        let mut c = 1.0;
        for i in 0..k {
            c *= (n - i) as f64 / (i + 1) as f64;
        }
        c * 0.5f64.powi(n as i32)
    }

    #[test]
    fn trims_zero_ends() {
        let p = IntDist::new(-2, vec![0.0, 0.5, 0.0, 0.5, 0.0]).unwrap();
        assert_eq!(p.min_support(), -1);
        assert_eq!(p.max_support(), 1);
        assert_eq!(p.support(), vec![-1, 1]);
    }

    #[test]
    fn rejects_bad_mass() {
        assert!(matches!(IntDist::new(0, vec![0.5, 0.4]), Err(Error::InvalidDistribution(_))));
        assert!(matches!(IntDist::new(0, vec![1.5, -0.5]), Err(Error::InvalidDistribution(_))));
    }

    #[test]
    fn point_mass_power() {
        let p = IntDist::point(3).convolve_power(5).unwrap();
        assert_eq!(p, IntDist::point(15));
    }

    #[test]
    fn cbit_power_is_binomial() {
        let p = IntDist::new(0, vec![0.5, 0.5]).unwrap().convolve_power(10).unwrap();
        assert_eq!(p.min_support(), 0);
        assert_eq!(p.max_support(), 10);
        for k in 0..=10 {
            assert_relative_eq!(p.pmf(k), binomial_pmf(10, k as u64), max_relative = 1e-13);
        }
    }

    #[test]
    fn overflow_is_reported() {
        let p = IntDist::new(0, vec![0.5, 0.5]).unwrap();
        assert!(matches!(p.convolve_power_capped(100, 50), Err(Error::SupportOverflow(101, 50))));
    }

    proptest! {
        #[test]
        fn moments_scale_with_power(raw in prop::collection::vec(0.0f64..1.0, 2..6), min in -5i64..5, m in 1u64..40) {
            prop_assume!(raw.iter().sum::<f64>() > 0.1);
            let p = IntDist::normalized(min, raw).unwrap();
            let q = p.convolve_power(m).unwrap();
            let mf = m as f64;
            prop_assert!((q.mean() - mf * p.mean()).abs() <= 1e-9 * (mf * p.mean()).abs().max(1.0));
            prop_assert!((q.variance() - mf * p.variance()).abs() <= 1e-9 * (mf * p.variance()).max(1.0));
        }
    }
}
