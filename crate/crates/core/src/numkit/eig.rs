//! Cyclic Jacobi eigensolver for small dense Hermitian matrices.
//!
//! Each rotation first removes the phase of the pivot `a_pq` with a diagonal
//! unitary and then applies the classical real Jacobi rotation, so the 2x2
//! block becomes diagonal exactly. Sweeps run in fixed row-major pivot order,
//! which makes the output a deterministic function of the input bits.

use super::matrix::{ComplexMatrix, C64, ONE, ZERO};
use crate::error::{Error, Result};

const MAX_SWEEPS: usize = 64;

/// Default tolerance for the Hermitian precondition.
pub const TOL_HERM: f64 = 1e-9;

/// Eigenpairs of a Hermitian matrix, eigenvalues ascending.
#[derive(Debug, Clone)]
pub struct HermitianEigen {
    pub values: Vec<f64>,
    /// Unitary whose columns are the eigenvectors.
    pub vectors: ComplexMatrix,
}

impl HermitianEigen {
    pub fn dim(&self) -> usize {
        self.values.len()
    }

    pub fn vector(&self, k: usize) -> Vec<C64> {
        self.vectors.column(k)
    }

    /// `V f(Λ) V^dagger`.
    pub fn apply_fn(&self, f: impl Fn(f64) -> C64) -> ComplexMatrix {
        let d: Vec<C64> = self.values.iter().map(|&x| f(x)).collect();
        ComplexMatrix::from_diag(&d).conjugate_by(&self.vectors)
    }

    pub fn reconstruct(&self) -> ComplexMatrix {
        self.apply_fn(|x| C64::new(x, 0.0))
    }
}

/// Eigen-decomposition of a Hermitian matrix with the default symmetry tolerance.
pub fn hermitian_eig(m: &ComplexMatrix) -> Result<HermitianEigen> {
    hermitian_eig_with_tol(m, TOL_HERM)
}

pub fn hermitian_eig_with_tol(m: &ComplexMatrix, tol_herm: f64) -> Result<HermitianEigen> {
    if !m.is_square() {
        return Err(Error::NotSquare(m.rows(), m.cols()));
    }
    if !m.is_finite() {
        return Err(Error::NonFinite);
    }
    let defect = m.hermitian_defect();
    let scale = m.frobenius_norm().max(1.0);
    if defect > tol_herm * scale {
        return Err(Error::NotHermitian(defect));
    }
    let n = m.rows();
    let mut a = m.hermitian_part();
    let mut v = ComplexMatrix::identity(n);
    let frob = a.frobenius_norm();

    let mut converged = n <= 1 || frob == 0.0;
    let mut sweeps = 0;
    while !converged {
        if sweeps == MAX_SWEEPS {
            return Err(Error::NoConvergence(MAX_SWEEPS));
        }
        sweeps += 1;
        for p in 0..n {
            for q in (p + 1)..n {
                rotate(&mut a, &mut v, p, q, frob);
            }
        }
        converged = off_diagonal_norm(&a) <= 1e-15 * frob;
    }

    let mut order: Vec<usize> = (0..n).collect();
    let diag: Vec<f64> = (0..n).map(|i| a[(i, i)].re).collect();
    order.sort_by(|&i, &j| diag[i].total_cmp(&diag[j]).then(i.cmp(&j)));

    let values: Vec<f64> = order.iter().map(|&i| diag[i]).collect();
    let mut vectors = ComplexMatrix::zeros(n, n);
    for (new_col, &old_col) in order.iter().enumerate() {
        let mut col = v.column(old_col);
        canonical_phase(&mut col);
        for (i, z) in col.into_iter().enumerate() {
            vectors[(i, new_col)] = z;
        }
    }
    Ok(HermitianEigen { values, vectors })
}

fn off_diagonal_norm(a: &ComplexMatrix) -> f64 {
    let n = a.rows();
    let mut s = 0.0;
    for i in 0..n {
        for j in 0..n {
            if i != j {
                s += a[(i, j)].norm_sqr();
            }
        }
    }
    s.sqrt()
}

fn rotate(a: &mut ComplexMatrix, v: &mut ComplexMatrix, p: usize, q: usize, frob: f64) {
    let apq = a[(p, q)];
    let mag = apq.norm();
    if mag <= 1e-300 || mag < 1e-18 * frob {
        a[(p, q)] = ZERO;
        a[(q, p)] = ZERO;
        return;
    }
    let app = a[(p, p)].re;
    let aqq = a[(q, q)].re;
    let phase = apq / mag;

    // Real Jacobi on [[app, mag], [mag, aqq]].
    let theta = (aqq - app) / (2.0 * mag);
    let t = theta.signum() / (theta.abs() + (theta * theta + 1.0).sqrt());
    let t = if theta == 0.0 { 1.0 } else { t };
    let c = 1.0 / (t * t + 1.0).sqrt();
    let s = t * c;

    // J = diag(1, conj(phase)) * [[c, s], [-s, c]]
    let j_pp = C64::new(c, 0.0);
    let j_pq = C64::new(s, 0.0);
    let j_qp = -phase.conj() * s;
    let j_qq = phase.conj() * c;

    let n = a.rows();
    // A <- A J (columns p, q)
    for i in 0..n {
        let aip = a[(i, p)];
        let aiq = a[(i, q)];
        a[(i, p)] = aip * j_pp + aiq * j_qp;
        a[(i, q)] = aip * j_pq + aiq * j_qq;
    }
    // A <- J^dagger A (rows p, q)
    for k in 0..n {
        let apk = a[(p, k)];
        let aqk = a[(q, k)];
        a[(p, k)] = j_pp.conj() * apk + j_qp.conj() * aqk;
        a[(q, k)] = j_pq.conj() * apk + j_qq.conj() * aqk;
    }
    a[(p, q)] = ZERO;
    a[(q, p)] = ZERO;
    a[(p, p)] = C64::new(a[(p, p)].re, 0.0);
    a[(q, q)] = C64::new(a[(q, q)].re, 0.0);
    // V <- V J
    for i in 0..n {
        let vip = v[(i, p)];
        let viq = v[(i, q)];
        v[(i, p)] = vip * j_pp + viq * j_qp;
        v[(i, q)] = vip * j_pq + viq * j_qq;
    }
}

/// Rotates a vector so its first component with modulus above 1e-12 is real positive.
pub fn canonical_phase(v: &mut [C64]) {
    if let Some(z) = v.iter().copied().find(|z| z.norm() > 1e-12) {
        let ph = z.conj() / z.norm();
        for x in v.iter_mut() {
            *x *= ph;
        }
    }
}

/// Unitary check: largest entry of `V^dagger V - I`.
pub fn unitarity_defect(v: &ComplexMatrix) -> f64 {
    let g = v.adjoint().matmul(v);
    let n = g.rows();
    let mut worst: f64 = 0.0;
    for i in 0..n {
        for j in 0..n {
            let target = if i == j { ONE } else { ZERO };
            worst = worst.max((g[(i, j)] - target).norm());
        }
    }
    worst
}
