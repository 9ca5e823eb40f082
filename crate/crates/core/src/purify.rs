//! Minimum-variance purifications.
//!
//! The standard purification is `|Phi> = sum_i sqrt(p_i) |phi_i>|phi_i>` with
//! the same eigenvectors on both factors, so tracing out either side returns
//! `rho`. An auxiliary Hamiltonian `H_A` acts on the second factor, and the
//! joint generator is `H_S x I + I x H_A`. Transposes are taken in the
//! eigenbasis of `rho`.

use rand::Rng;

use crate::error::{Error, Result};
use crate::numkit::random::{random_hermitian_with, rng};
use crate::numkit::{ComplexMatrix, DensityOperator, PureState, C64};
use crate::qfi::{eigenframe, pure_variance, CUTOFF_RANK};

/// A purification together with the system and auxiliary Hamiltonians.
#[derive(Debug, Clone)]
pub struct Purification {
    pub joint: PureState,
    pub h_s: ComplexMatrix,
    pub h_a: ComplexMatrix,
    pub dim_s: usize,
    pub dim_a: usize,
}

impl Purification {
    pub fn total_hamiltonian(&self) -> ComplexMatrix {
        total_hamiltonian(&self.h_s, &self.h_a)
    }

    pub fn variance(&self) -> f64 {
        pure_variance(&self.joint, &self.total_hamiltonian()).expect("dims agree by construction")
    }

    pub fn reduced_system(&self) -> DensityOperator {
        self.joint
            .density()
            .partial_trace_second(self.dim_s, self.dim_a)
            .expect("dims agree by construction")
    }
}

/// `H_S x I + I x H_A`.
pub fn total_hamiltonian(h_s: &ComplexMatrix, h_a: &ComplexMatrix) -> ComplexMatrix {
    &h_s.kron(&ComplexMatrix::identity(h_a.rows())) + &ComplexMatrix::identity(h_s.rows()).kron(h_a)
}

pub fn standard_purification(rho: &DensityOperator) -> Result<PureState> {
    let e = rho.spectrum()?;
    let d = rho.dim();
    let mut amps = vec![C64::new(0.0, 0.0); d * d];
    for k in 0..d {
        let s = e.values[k].sqrt();
        if s == 0.0 {
            continue;
        }
        let v = e.vector(k);
        for i in 0..d {
            for j in 0..d {
                amps[i * d + j] += v[i] * v[j] * s;
            }
        }
    }
    PureState::normalized(amps)
}

fn check_square(rho: &DensityOperator, h: &ComplexMatrix) -> Result<()> {
    if h.rows() != rho.dim() || h.cols() != rho.dim() {
        return Err(Error::DimensionMismatch(rho.dim(), h.rows()));
    }
    Ok(())
}

/// Auxiliary Hamiltonian minimizing the joint variance of the standard purification.
///
/// In `rho`'s eigenbasis, `(H_A)_jk = -2 sqrt(p_j p_k)/(p_j + p_k) (H_S)_kj`.
pub fn optimal_aux_hamiltonian(rho: &DensityOperator, h_s: &ComplexMatrix) -> Result<ComplexMatrix> {
    let f = eigenframe(rho, h_s)?;
    let n = f.p.len();
    let mut m = ComplexMatrix::zeros(n, n);
    for j in 0..n {
        for k in 0..n {
            let s = f.p[j] + f.p[k];
            if s > CUTOFF_RANK {
                m[(j, k)] = f.h[(k, j)] * (-2.0 * (f.p[j] * f.p[k]).sqrt() / s);
            }
        }
    }
    Ok(m.conjugate_by(&f.v).hermitian_part())
}

/// Auxiliary Hamiltonian of the conjugate purification, `-(H_S)^T` in `rho`'s eigenbasis.
pub fn conjugate_aux_hamiltonian(rho: &DensityOperator, h_s: &ComplexMatrix) -> Result<ComplexMatrix> {
    let f = eigenframe(rho, h_s)?;
    Ok(f.h.transpose().scale_real(-1.0).conjugate_by(&f.v))
}

pub fn optimal_purification(rho: &DensityOperator, h_s: &ComplexMatrix) -> Result<Purification> {
    Ok(Purification {
        joint: standard_purification(rho)?,
        h_s: h_s.clone(),
        h_a: optimal_aux_hamiltonian(rho, h_s)?,
        dim_s: rho.dim(),
        dim_a: rho.dim(),
    })
}

/// Joint variance of the standard purification under `H_S x I + I x H_A`,
/// evaluated from `rho`'s spectrum without forming the joint state.
pub fn purification_variance(rho: &DensityOperator, h_s: &ComplexMatrix, h_a: &ComplexMatrix) -> Result<f64> {
    check_square(rho, h_a)?;
    let f = eigenframe(rho, h_s)?;
    let a = h_a.conjugate_by(&f.v.adjoint());
    let n = f.p.len();
    let mut second = 0.0;
    let mut mean = 0.0;
    for i in 0..n {
        mean += f.p[i] * (f.h[(i, i)].re + a[(i, i)].re);
        for j in 0..n {
            second += f.p[i] * (f.h[(i, j)].norm_sqr() + a[(i, j)].norm_sqr());
            second += 2.0 * (f.p[i] * f.p[j]).sqrt() * (f.h[(i, j)] * a[(i, j)]).re;
        }
    }
    Ok((second - mean * mean).max(0.0))
}

/// QFI of `rho` under the optimal auxiliary Hamiltonian, in closed form.
pub fn aux_qfi(rho: &DensityOperator, h_s: &ComplexMatrix) -> Result<f64> {
    let f = eigenframe(rho, h_s)?;
    let n = f.p.len();
    let mut total = 0.0;
    for i in 0..n {
        for j in 0..n {
            let s = f.p[i] + f.p[j];
            if s <= CUTOFF_RANK {
                continue;
            }
            let d = f.p[i] - f.p[j];
            total += 8.0 * f.p[i] * f.p[j] * d * d / (s * s * s) * f.h[(i, j)].norm_sqr();
        }
    }
    Ok(total)
}

#[derive(Debug, Clone)]
pub struct MinOracleResult {
    pub best_variance: f64,
    pub best_h_a: ComplexMatrix,
    pub iterations: usize,
    /// False if the gradient never fell below tolerance; the best value is still reported.
    pub converged: bool,
}

fn hermitian_from_params(x: &[f64], d: usize) -> ComplexMatrix {
    let mut m = ComplexMatrix::zeros(d, d);
    let mut idx = d;
    for i in 0..d {
        m[(i, i)] = C64::new(x[i], 0.0);
        for j in (i + 1)..d {
            let z = C64::new(x[idx], x[idx + 1]);
            m[(i, j)] = z;
            m[(j, i)] = z.conj();
            idx += 2;
        }
    }
    m
}

fn params_from_hermitian(m: &ComplexMatrix) -> Vec<f64> {
    let d = m.rows();
    let mut x: Vec<f64> = (0..d).map(|i| m[(i, i)].re).collect();
    for i in 0..d {
        for j in (i + 1)..d {
            x.push(m[(i, j)].re);
            x.push(m[(i, j)].im);
        }
    }
    x
}

/// Minimizes the joint variance over Hermitian `H_A` by gradient descent.
///
/// The objective is evaluated on the explicit tensor-product state and the
/// gradient by central differences, so this shares no algebra with
/// [`optimal_aux_hamiltonian`]. Runs one start from `H_A = 0` plus three
/// seeded random starts with Barzilai-Borwein steps.
pub fn numeric_min_oracle(rho: &DensityOperator, h_s: &ComplexMatrix, seed: u64, iters: usize) -> Result<MinOracleResult> {
    check_square(rho, h_s)?;
    let d = rho.dim();
    let joint = standard_purification(rho)?;
    let objective = |x: &[f64]| -> f64 {
        let h = total_hamiltonian(h_s, &hermitian_from_params(x, d));
        pure_variance(&joint, &h).expect("dims agree")
    };
    let fd = 1e-5;
    let gradient = |x: &[f64]| -> Vec<f64> {
        let mut y = x.to_vec();
        (0..x.len())
            .map(|i| {
                y[i] = x[i] + fd;
                let up = objective(&y);
                y[i] = x[i] - fd;
                let down = objective(&y);
                y[i] = x[i];
                (up - down) / (2.0 * fd)
            })
            .collect()
    };
    let scale = h_s.frobenius_norm().max(1.0);
    let mut r = rng(seed);
    let mut starts = vec![vec![0.0; d * d]];
    for _ in 0..3 {
        let m = random_hermitian_with(d, &mut r).scale_real(scale * r.random_range(0.1..1.0));
        starts.push(params_from_hermitian(&m));
    }

    let mut best = (f64::INFINITY, vec![0.0; d * d]);
    let mut total_iters = 0;
    let mut all_converged = true;
    for mut x in starts {
        let mut g = gradient(&x);
        let mut step = 0.1;
        let mut converged = false;
        for _ in 0..iters {
            total_iters += 1;
            let gnorm = g.iter().map(|v| v * v).sum::<f64>().sqrt();
            if gnorm < 1e-9 * scale {
                converged = true;
                break;
            }
            let x_new: Vec<f64> = x.iter().zip(&g).map(|(a, b)| a - step * b).collect();
            let g_new = gradient(&x_new);
            let s: Vec<f64> = x_new.iter().zip(&x).map(|(a, b)| a - b).collect();
            let y: Vec<f64> = g_new.iter().zip(&g).map(|(a, b)| a - b).collect();
            let sy: f64 = s.iter().zip(&y).map(|(a, b)| a * b).sum();
            let ss: f64 = s.iter().map(|a| a * a).sum();
            step = if sy > 1e-300 { (ss / sy).min(1e6) } else { 0.1 };
            x = x_new;
            g = g_new;
        }
        all_converged &= converged;
        let v = objective(&x);
        if v < best.0 {
            best = (v, x);
        }
    }
    Ok(MinOracleResult {
        best_variance: best.0,
        best_h_a: hermitian_from_params(&best.1, d),
        iterations: total_iters,
        converged: all_converged,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numkit::random::{random_density, random_hermitian};
    use crate::qfi::{qfi, variance, wigner_yanase};
    use approx::assert_abs_diff_eq;
    use proptest::prelude::*;

    fn plus_mixture(p: f64) -> DensityOperator {
        let c = p - 0.5;
        DensityOperator::new(ComplexMatrix::from_real_rows(&[&[0.5, c], &[c, 0.5]])).unwrap()
    }

    fn sz_half() -> ComplexMatrix {
        ComplexMatrix::from_real_diag(&[0.5, -0.5])
    }

    #[test]
    fn maximally_mixed_qubit() {
        let rho = DensityOperator::maximally_mixed(2);
        let psi = standard_purification(&rho).unwrap();
        let r = std::f64::consts::FRAC_1_SQRT_2;
        let a = psi.amplitudes();
        assert_abs_diff_eq!(a[0].norm(), r, epsilon = 1e-15);
        assert_abs_diff_eq!(a[3].norm(), r, epsilon = 1e-15);
        assert!(a[1].norm() < 1e-15 && a[2].norm() < 1e-15);
        let h_a = optimal_aux_hamiltonian(&rho, &sz_half()).unwrap();
        assert!((&h_a + &sz_half().transpose()).frobenius_norm() < 1e-15);
        assert_abs_diff_eq!(purification_variance(&rho, &sz_half(), &h_a).unwrap(), 0.0, epsilon = 1e-15);
    }

    #[test]
    fn qubit_mixture_worked_numbers() {
        let rho = plus_mixture(0.9);
        let h = sz_half();
        let h_a = optimal_aux_hamiltonian(&rho, &h).unwrap();
        let v_s = variance(&rho, &h).unwrap();
        let v_a = variance(&rho, &h_a).unwrap();
        assert_abs_diff_eq!(v_s, 0.25, epsilon = 1e-15);
        assert_abs_diff_eq!(v_a, 0.09, epsilon = 1e-14);
        assert_abs_diff_eq!(purification_variance(&rho, &h, &h_a).unwrap(), 0.16, epsilon = 1e-14);
        assert_abs_diff_eq!(aux_qfi(&rho, &h).unwrap(), 0.2304, epsilon = 1e-14);
        assert_abs_diff_eq!(qfi(&rho, &h_a).unwrap().value, 0.2304, epsilon = 1e-14);
        let p = optimal_purification(&rho, &h).unwrap();
        assert_abs_diff_eq!(p.variance(), 0.16, epsilon = 1e-14);
    }

    #[test]
    fn pure_state_aux_is_minus_mean_projector() {
        let psi = PureState::from_real(&[0.3, -0.4, 0.8]).unwrap();
        let rho = psi.density();
        let h = random_hermitian(3, 2);
        let h_a = optimal_aux_hamiltonian(&rho, &h).unwrap();
        let mean = psi.expectation(&h).re;
        let expected = rho.matrix().scale_real(-mean);
        assert!((&h_a - &expected).frobenius_norm() < 1e-12);
        let v = pure_variance(&psi, &h).unwrap();
        assert_abs_diff_eq!(purification_variance(&rho, &h, &h_a).unwrap(), v, epsilon = 1e-12);
        assert_abs_diff_eq!(
            purification_variance(&rho, &h, &ComplexMatrix::zeros(3, 3)).unwrap(),
            v,
            epsilon = 1e-12
        );
        assert_abs_diff_eq!(aux_qfi(&rho, &h).unwrap(), 0.0, epsilon = 1e-15);
    }

    #[test]
    fn incoherent_full_rank_has_zero_aux_qfi() {
        let rho = DensityOperator::diagonal(&[0.5, 0.3, 0.2]).unwrap();
        let h = ComplexMatrix::from_real_diag(&[0.0, 1.0, 2.0]);
        assert_abs_diff_eq!(aux_qfi(&rho, &h).unwrap(), 0.0, epsilon = 1e-15);
    }

    #[test]
    fn oracle_finds_qubit_minimum() {
        let rho = plus_mixture(0.9);
        let r = numeric_min_oracle(&rho, &sz_half(), 1, 400).unwrap();
        assert_abs_diff_eq!(r.best_variance, 0.16, epsilon = 1e-4);
        assert!(r.best_variance >= 0.16 - 1e-6);
        let inc = DensityOperator::diagonal(&[0.7, 0.3]).unwrap();
        let r = numeric_min_oracle(&inc, &sz_half(), 2, 400).unwrap();
        assert_abs_diff_eq!(r.best_variance, 0.0, epsilon = 1e-6);
    }

    #[test]
    fn oracle_matches_closed_form_on_qutrits() {
        for seed in 0..3 {
            let rho = random_density(3, 2, seed).unwrap();
            let h = random_hermitian(3, seed + 50);
            let f = qfi(&rho, &h).unwrap().value;
            let r = numeric_min_oracle(&rho, &h, seed, 600).unwrap();
            assert!(r.best_variance >= f / 4.0 - 1e-6);
            assert_abs_diff_eq!(r.best_variance, f / 4.0, epsilon = 1e-3);
        }
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(48))]

        #[test]
        fn purification_reduces_to_rho(seed in 0u64..5000, dim in 2usize..5, rank in 1usize..5) {
            let rho = random_density(dim, rank.min(dim), seed).unwrap();
            let psi = standard_purification(&rho).unwrap();
            let joint = psi.density();
            let rs = joint.partial_trace_second(dim, dim).unwrap();
            let ra = joint.partial_trace_first(dim, dim).unwrap();
            prop_assert!((rs.matrix() - rho.matrix()).frobenius_norm() <= 1e-12);
            prop_assert!((ra.matrix() - rho.matrix()).frobenius_norm() <= 1e-12);
        }

        #[test]
        fn optimal_aux_properties(seed in 0u64..5000, dim in 2usize..5, rank in 1usize..5) {
            let rho = random_density(dim, rank.min(dim), seed).unwrap();
            let h = random_hermitian(dim, seed + 1);
            let h_a = optimal_aux_hamiltonian(&rho, &h).unwrap();
            let f = qfi(&rho, &h).unwrap().value;
            prop_assert!(h_a.hermitian_defect() < 1e-14);
            prop_assert!((rho.expectation(&h_a).re + rho.expectation(&h).re).abs() <= 1e-9);
            let p = optimal_purification(&rho, &h).unwrap();
            let joint_f = qfi(&p.joint.density(), &p.total_hamiltonian()).unwrap().value;
            prop_assert!((joint_f - f).abs() <= 1e-8);
            let pv = purification_variance(&rho, &h, &h_a).unwrap();
            prop_assert!((pv - p.variance()).abs() <= 1e-10);
            let gap = variance(&rho, &h).unwrap() - variance(&rho, &h_a).unwrap();
            prop_assert!((pv - gap).abs() <= 1e-9);
            prop_assert!((aux_qfi(&rho, &h).unwrap() - qfi(&rho, &h_a).unwrap().value).abs() <= 1e-8);
        }

        #[test]
        fn random_aux_never_beats_minimum(seed in 0u64..5000, dim in 2usize..5) {
            let rho = random_density(dim, dim, seed).unwrap();
            let h = random_hermitian(dim, seed + 1);
            let f = qfi(&rho, &h).unwrap().value;
            let h_a = random_hermitian(dim, seed + 2);
            let pv = purification_variance(&rho, &h, &h_a).unwrap();
            prop_assert!(pv >= f / 4.0 - 1e-9);
            let joint = standard_purification(&rho).unwrap();
            let explicit = pure_variance(&joint, &total_hamiltonian(&h, &h_a)).unwrap();
            prop_assert!((pv - explicit).abs() <= 1e-10 * explicit.max(1.0));
        }

        #[test]
        fn conjugate_purification_gives_twice_skew(seed in 0u64..5000, dim in 2usize..5, rank in 1usize..5) {
            let rho = random_density(dim, rank.min(dim), seed).unwrap();
            let h = random_hermitian(dim, seed + 1);
            let h_a = conjugate_aux_hamiltonian(&rho, &h).unwrap();
            let pv = purification_variance(&rho, &h, &h_a).unwrap();
            let w = wigner_yanase(&rho, &h).unwrap();
            prop_assert!((pv - 2.0 * w).abs() <= 1e-10);
            prop_assert!(4.0 * pv >= qfi(&rho, &h).unwrap().value - 1e-9);
        }
    }
}
