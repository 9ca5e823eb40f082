//! One-sided (Hestenes) Jacobi singular values.
//!
//! Singular values come out with absolute error near machine epsilon times the
//! largest one, unlike square roots of Gram-matrix eigenvalues.

use super::matrix::{inner, vec_norm, ComplexMatrix, C64};
use crate::error::{Error, Result};

const MAX_SWEEPS: usize = 64;

/// Singular values in descending order.
pub fn singular_values(m: &ComplexMatrix) -> Result<Vec<f64>> {
    if !m.is_finite() {
        return Err(Error::NonFinite);
    }
    let m = if m.cols() > m.rows() { m.adjoint() } else { m.clone() };
    let mut cols: Vec<Vec<C64>> = (0..m.cols()).map(|j| m.column(j)).collect();
    let n = cols.len();
    let floor = 1e-30 * m.frobenius_norm().powi(2);
    let rel = 1e-15 * m.rows().max(1) as f64;
    let mut sweeps = 0;
    loop {
        let mut rotated = false;
        for i in 0..n {
            for j in (i + 1)..n {
                let a = vec_norm(&cols[i]).powi(2);
                let b = vec_norm(&cols[j]).powi(2);
                let g = inner(&cols[i], &cols[j]);
                let gm = g.norm();
                if gm <= rel * (a * b).sqrt() || gm <= floor {
                    continue;
                }
                rotated = true;
                let phase = g.conj() / gm;
                let zeta = (b - a) / (2.0 * gm);
                let t = if zeta == 0.0 {
                    1.0
                } else {
                    zeta.signum() / (zeta.abs() + (1.0 + zeta * zeta).sqrt())
                };
                let c = 1.0 / (1.0 + t * t).sqrt();
                let s = c * t;
                let (left, right) = cols.split_at_mut(j);
                for (x, y) in left[i].iter_mut().zip(right[0].iter_mut()) {
                    let yp = *y * phase;
                    let xi = *x;
                    *x = xi * c - yp * s;
                    *y = xi * s + yp * c;
                }
            }
        }
        if !rotated {
            break;
        }
        sweeps += 1;
        if sweeps == MAX_SWEEPS {
            return Err(Error::NoConvergence(MAX_SWEEPS));
        }
    }
    let mut sv: Vec<f64> = cols.iter().map(|c| vec_norm(c)).collect();
    sv.sort_by(|a, b| b.total_cmp(a));
    Ok(sv)
}

/// Sum of singular values.
pub fn nuclear_norm(m: &ComplexMatrix) -> Result<f64> {
    Ok(singular_values(m)?.iter().sum())
}
