use super::eig::hermitian_eig;
use super::matrix::{inner, ComplexMatrix, C64};
use super::svd::nuclear_norm;
use super::state::DensityOperator;
use crate::error::{Error, Result};

/// Eigenvalues at or below this are treated as outside the support.
const SUPPORT_CUTOFF: f64 = 1e-13;

/// Uhlmann fidelity `(Tr sqrt(sqrt(rho) sigma sqrt(rho)))^2`.
pub fn fidelity(rho: &DensityOperator, sigma: &DensityOperator) -> Result<f64> {
    Ok(root_fidelity(rho, sigma)?.powi(2))
}

/// `sqrt(Fid)`, evaluated as the nuclear norm of `sqrt(rho) sqrt(sigma)`.
///
/// Both square roots are taken on the respective supports, so that round-off
/// eigenvalues never enter a square root.
pub fn root_fidelity(rho: &DensityOperator, sigma: &DensityOperator) -> Result<f64> {
    if rho.dim() != sigma.dim() {
        return Err(Error::DimensionMismatch(rho.dim(), sigma.dim()));
    }
    let (pr, vr) = support(rho)?;
    let (ps, vs) = support(sigma)?;
    let mut m = ComplexMatrix::zeros(pr.len(), ps.len());
    for (a, va) in vr.iter().enumerate() {
        for (b, vb) in vs.iter().enumerate() {
            m[(a, b)] = inner(va, vb) * (pr[a] * ps[b]).sqrt();
        }
    }
    Ok(nuclear_norm(&m)?.clamp(0.0, 1.0))
}

fn support(rho: &DensityOperator) -> Result<(Vec<f64>, Vec<Vec<C64>>)> {
    let e = rho.spectrum()?;
    let idx = (0..e.dim()).filter(|&i| e.values[i] > SUPPORT_CUTOFF);
    Ok(idx.map(|i| (e.values[i], e.vector(i))).unzip())
}

/// `||rho - sigma||_1 / 2`.
pub fn trace_distance(rho: &DensityOperator, sigma: &DensityOperator) -> Result<f64> {
    if rho.dim() != sigma.dim() {
        return Err(Error::DimensionMismatch(rho.dim(), sigma.dim()));
    }
    let diff = (rho.matrix() - sigma.matrix()).hermitian_part();
    let e = hermitian_eig(&diff)?;
    Ok((0.5 * e.values.iter().map(|x| x.abs()).sum::<f64>()).clamp(0.0, 1.0))
}

/// `sqrt(2 (1 - sqrt(Fid)))`.
pub fn bures_distance(rho: &DensityOperator, sigma: &DensityOperator) -> Result<f64> {
    let f = root_fidelity(rho, sigma)?;
    Ok((2.0 * (1.0 - f)).max(0.0).sqrt())
}
