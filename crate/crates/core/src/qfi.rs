//! Quantum Fisher information, symmetric logarithmic derivative, energy
//! variance and Wigner-Yanase skew information.
//!
//! All spectral sums run in the eigenbasis of `rho`. Pairs `(j, k)` with
//! `p_j + p_k` at or below the rank cutoff contribute nothing.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::numkit::{hermitian_eig, root_fidelity, ComplexMatrix, DensityOperator, PureState, C64};

/// Default cutoff on `p_j + p_k`.
pub const CUTOFF_RANK: f64 = 1e-12;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct QfiReport {
    pub value: f64,
    /// Ordered pairs `(j, k)` skipped because `p_j + p_k` fell below the cutoff.
    pub dropped_pairs: usize,
}

/// `rho`'s spectrum together with `H` expressed in its eigenbasis.
pub(crate) struct Eigenframe {
    pub p: Vec<f64>,
    pub v: ComplexMatrix,
    pub h: ComplexMatrix,
}

pub(crate) fn eigenframe(rho: &DensityOperator, h: &ComplexMatrix) -> Result<Eigenframe> {
    check_dims(rho, h)?;
    let e = rho.spectrum()?;
    let hv = h.conjugate_by(&e.vectors.adjoint());
    Ok(Eigenframe {
        p: e.values,
        v: e.vectors,
        h: hv,
    })
}

fn check_dims(rho: &DensityOperator, h: &ComplexMatrix) -> Result<()> {
    if !h.is_square() {
        return Err(Error::NotSquare(h.rows(), h.cols()));
    }
    if h.rows() != rho.dim() {
        return Err(Error::DimensionMismatch(rho.dim(), h.rows()));
    }
    Ok(())
}

/// `Tr(rho H^2) - Tr(rho H)^2`.
pub fn variance(rho: &DensityOperator, h: &ComplexMatrix) -> Result<f64> {
    check_dims(rho, h)?;
    let mean = rho.expectation(h).re;
    let second = rho.matrix().matmul(h).trace_product(h).re;
    Ok((second - mean * mean).max(0.0))
}

/// `<psi|H^2|psi> - <psi|H|psi>^2`.
pub fn pure_variance(psi: &PureState, h: &ComplexMatrix) -> Result<f64> {
    if h.rows() != psi.dim() || h.cols() != psi.dim() {
        return Err(Error::DimensionMismatch(psi.dim(), h.rows()));
    }
    let hv = h.mul_vec(psi.amplitudes());
    let mean = crate::numkit::inner(psi.amplitudes(), &hv).re;
    let second: f64 = hv.iter().map(|z| z.norm_sqr()).sum();
    Ok((second - mean * mean).max(0.0))
}

pub fn qfi(rho: &DensityOperator, h: &ComplexMatrix) -> Result<QfiReport> {
    qfi_with_cutoff(rho, h, CUTOFF_RANK)
}

pub fn qfi_with_cutoff(rho: &DensityOperator, h: &ComplexMatrix, cutoff: f64) -> Result<QfiReport> {
    let f = eigenframe(rho, h)?;
    let n = f.p.len();
    let mut value = 0.0;
    let mut dropped = 0;
    for j in 0..n {
        for k in 0..n {
            let s = f.p[j] + f.p[k];
            if s <= cutoff {
                dropped += 1;
                continue;
            }
            let d = f.p[j] - f.p[k];
            value += 2.0 * d * d / s * f.h[(j, k)].norm_sqr();
        }
    }
    Ok(QfiReport {
        value,
        dropped_pairs: dropped,
    })
}

/// Symmetric logarithmic derivative of `t -> e^{-iHt} rho e^{iHt}` at `t = 0`.
pub fn sld(rho: &DensityOperator, h: &ComplexMatrix) -> Result<ComplexMatrix> {
    let f = eigenframe(rho, h)?;
    let n = f.p.len();
    let mut l = ComplexMatrix::zeros(n, n);
    for k in 0..n {
        for j in 0..n {
            let s = f.p[k] + f.p[j];
            if s > CUTOFF_RANK {
                l[(k, j)] = C64::new(0.0, 2.0 * (f.p[k] - f.p[j]) / s) * f.h[(k, j)];
            }
        }
    }
    Ok(l.conjugate_by(&f.v).hermitian_part())
}

/// `-Tr([sqrt(rho), H]^2) / 2`.
pub fn wigner_yanase(rho: &DensityOperator, h: &ComplexMatrix) -> Result<f64> {
    let f = eigenframe(rho, h)?;
    let n = f.p.len();
    let mut w = 0.0;
    for j in 0..n {
        for k in 0..n {
            let d = f.p[j].sqrt() - f.p[k].sqrt();
            w += 0.5 * d * d * f.h[(j, k)].norm_sqr();
        }
    }
    Ok(w)
}

/// Default finite-difference step.
pub const FD_STEP: f64 = 1e-3;

/// `-4 d^2/dt^2 sqrt(Fid(rho, rho_t))` at `t = 0` by central differences,
/// Richardson-extrapolated over steps `h` and `h/2`.
pub fn qfi_fd_oracle(rho: &DensityOperator, h: &ComplexMatrix, step: f64) -> Result<f64> {
    check_dims(rho, h)?;
    if !(1e-5..=1e-2).contains(&step) {
        return Err(Error::InvalidArgument(format!("step {step} outside [1e-5, 1e-2]")));
    }
    let eh = hermitian_eig(h)?;
    let evolve = |t: f64| -> Result<DensityOperator> {
        let u = eh.apply_fn(|x| C64::from_polar(1.0, -x * t));
        rho.evolve(&u)
    };
    let second = |s: f64| -> Result<f64> {
        let plus = root_fidelity(rho, &evolve(s)?)?;
        let minus = root_fidelity(rho, &evolve(-s)?)?;
        Ok(-4.0 * (plus - 2.0 + minus) / (s * s))
    };
    let coarse = second(step)?;
    let fine = second(step / 2.0)?;
    Ok((4.0 * fine - coarse) / 3.0)
}

/// `||[rho, H]||_F`.
pub fn commutator_norm(rho: &DensityOperator, h: &ComplexMatrix) -> Result<f64> {
    check_dims(rho, h)?;
    Ok(rho.matrix().commutator(h).frobenius_norm())
}
