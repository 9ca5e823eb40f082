use super::eig::{hermitian_eig, HermitianEigen};
use super::matrix::{inner, kron_vec, vec_norm, ComplexMatrix, C64};
use crate::error::{Error, Result};

/// Numerical tolerances shared by validation routines.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Tolerances {
    pub herm: f64,
    pub trace: f64,
    pub psd: f64,
    pub eig: f64,
    pub norm: f64,
}

impl Default for Tolerances {
    fn default() -> Self {
        Self {
            herm: 1e-9,
            trace: 1e-9,
            psd: 1e-9,
            eig: 1e-10,
            norm: 1e-9,
        }
    }
}

impl Tolerances {
    /// Named profiles: `default`, `strict` (100x tighter), `loose` (100x looser).
    pub fn profile(name: &str) -> Option<Self> {
        let d = Self::default();
        let f = match name {
            "default" => 1.0,
            "strict" => 1e-2,
            "loose" => 1e2,
            _ => return None,
        };
        Some(Self {
            herm: d.herm * f,
            trace: d.trace * f,
            psd: d.psd * f,
            eig: d.eig * f,
            norm: d.norm * f,
        })
    }
}

/// Normalized state vector.
#[derive(Debug, Clone, PartialEq)]
pub struct PureState {
    amplitudes: Vec<C64>,
}

impl PureState {
    pub fn new(amplitudes: Vec<C64>) -> Result<Self> {
        Self::with_tol(amplitudes, Tolerances::default().norm)
    }

    pub fn with_tol(amplitudes: Vec<C64>, tol_norm: f64) -> Result<Self> {
        if amplitudes.is_empty() {
            return Err(Error::InvalidArgument("empty state vector".into()));
        }
        if amplitudes.iter().any(|z| !z.re.is_finite() || !z.im.is_finite()) {
            return Err(Error::NonFinite);
        }
        let n = vec_norm(&amplitudes);
        if (n - 1.0).abs() > tol_norm {
            return Err(Error::NotNormalized(n));
        }
        Ok(Self { amplitudes })
    }

    /// Normalizes an arbitrary nonzero vector.
    pub fn normalized(amplitudes: Vec<C64>) -> Result<Self> {
        let n = vec_norm(&amplitudes);
        if !(n > 0.0) || !n.is_finite() {
            return Err(Error::NotNormalized(n));
        }
        Ok(Self {
            amplitudes: amplitudes.into_iter().map(|z| z / n).collect(),
        })
    }

    pub fn from_real(amps: &[f64]) -> Result<Self> {
        Self::normalized(amps.iter().map(|&x| C64::new(x, 0.0)).collect())
    }

    /// Computational basis vector `|k>`.
    pub fn basis(dim: usize, k: usize) -> Self {
        let mut v = vec![C64::new(0.0, 0.0); dim];
        v[k] = C64::new(1.0, 0.0);
        Self { amplitudes: v }
    }

    pub fn dim(&self) -> usize {
        self.amplitudes.len()
    }

    pub fn amplitudes(&self) -> &[C64] {
        &self.amplitudes
    }

    pub fn into_amplitudes(self) -> Vec<C64> {
        self.amplitudes
    }

    pub fn density(&self) -> DensityOperator {
        DensityOperator {
            matrix: ComplexMatrix::outer(&self.amplitudes, &self.amplitudes),
        }
    }

    pub fn overlap(&self, other: &Self) -> C64 {
        inner(&self.amplitudes, &other.amplitudes)
    }

    pub fn tensor(&self, other: &Self) -> Self {
        Self {
            amplitudes: kron_vec(&self.amplitudes, &other.amplitudes),
        }
    }

    pub fn apply(&self, u: &ComplexMatrix) -> Result<Self> {
        if u.cols() != self.dim() {
            return Err(Error::DimensionMismatch(u.cols(), self.dim()));
        }
        Self::normalized(u.mul_vec(&self.amplitudes))
    }

    /// `<psi|A|psi>`.
    pub fn expectation(&self, a: &ComplexMatrix) -> C64 {
        inner(&self.amplitudes, &a.mul_vec(&self.amplitudes))
    }
}

/// Hermitian, positive semi-definite, unit-trace matrix.
#[derive(Debug, Clone, PartialEq)]
pub struct DensityOperator {
    matrix: ComplexMatrix,
}

impl DensityOperator {
    pub fn new(matrix: ComplexMatrix) -> Result<Self> {
        Self::with_tol(matrix, &Tolerances::default())
    }

    pub fn with_tol(matrix: ComplexMatrix, tol: &Tolerances) -> Result<Self> {
        if !matrix.is_square() {
            return Err(Error::NotSquare(matrix.rows(), matrix.cols()));
        }
        if !matrix.is_finite() {
            return Err(Error::NonFinite);
        }
        let defect = matrix.hermitian_defect();
        if defect > tol.herm {
            return Err(Error::NotHermitian(defect));
        }
        let tr = matrix.trace();
        if (tr.re - 1.0).abs() > tol.trace || tr.im.abs() > tol.trace {
            return Err(Error::InvalidTrace(tr.re));
        }
        let matrix = matrix.hermitian_part();
        let eig = hermitian_eig(&matrix)?;
        let min = eig.values.first().copied().unwrap_or(0.0);
        if min < -tol.psd {
            return Err(Error::NotPositive(min));
        }
        Ok(Self { matrix })
    }

    /// Builds `sum_k w_k |v_k><v_k|` from eigenvalues and an orthonormal basis.
    pub fn from_spectrum(weights: &[f64], basis: &ComplexMatrix) -> Result<Self> {
        if basis.cols() != weights.len() {
            return Err(Error::DimensionMismatch(basis.cols(), weights.len()));
        }
        let d: Vec<C64> = weights.iter().map(|&w| C64::new(w, 0.0)).collect();
        Self::new(ComplexMatrix::from_diag(&d).conjugate_by(basis))
    }

    pub fn maximally_mixed(dim: usize) -> Self {
        Self {
            matrix: ComplexMatrix::identity(dim).scale_real(1.0 / dim as f64),
        }
    }

    /// Diagonal state in the computational basis.
    pub fn diagonal(probs: &[f64]) -> Result<Self> {
        Self::new(ComplexMatrix::from_real_diag(probs))
    }

    /// Convex mixture `p * self + (1 - p) * other`.
    pub fn mix(&self, other: &Self, p: f64) -> Result<Self> {
        if self.dim() != other.dim() {
            return Err(Error::DimensionMismatch(self.dim(), other.dim()));
        }
        if !(0.0..=1.0).contains(&p) {
            return Err(Error::InvalidArgument(format!("mixing weight {p} outside [0,1]")));
        }
        Ok(Self {
            matrix: &self.matrix.scale_real(p) + &other.matrix.scale_real(1.0 - p),
        })
    }

    pub fn dim(&self) -> usize {
        self.matrix.rows()
    }

    pub fn matrix(&self) -> &ComplexMatrix {
        &self.matrix
    }

    pub fn into_matrix(self) -> ComplexMatrix {
        self.matrix
    }

    /// Spectral decomposition; eigenvalues in `[-tol_psd, 0)` are clipped to zero.
    pub fn spectrum(&self) -> Result<HermitianEigen> {
        let mut e = hermitian_eig(&self.matrix)?;
        for v in e.values.iter_mut() {
            if *v < 0.0 {
                *v = 0.0;
            }
        }
        Ok(e)
    }

    pub fn purity(&self) -> f64 {
        self.matrix.trace_product(&self.matrix).re
    }

    pub fn sqrt(&self) -> Result<ComplexMatrix> {
        Ok(self.spectrum()?.apply_fn(|x| C64::new(x.max(0.0).sqrt(), 0.0)))
    }

    pub fn tensor(&self, other: &Self) -> Self {
        Self {
            matrix: self.matrix.kron(&other.matrix),
        }
    }

    /// `U rho U^dagger`; `u` must be unitary.
    pub fn evolve(&self, u: &ComplexMatrix) -> Result<Self> {
        if u.cols() != self.dim() || u.rows() != u.cols() {
            return Err(Error::DimensionMismatch(u.cols(), self.dim()));
        }
        Ok(Self {
            matrix: self.matrix.conjugate_by(u).hermitian_part(),
        })
    }

    pub fn expectation(&self, a: &ComplexMatrix) -> C64 {
        self.matrix.trace_product(a)
    }

    pub fn partial_trace_second(&self, dim_a: usize, dim_b: usize) -> Result<Self> {
        if dim_a * dim_b != self.dim() {
            return Err(Error::DimensionMismatch(dim_a * dim_b, self.dim()));
        }
        Ok(Self {
            matrix: self.matrix.partial_trace_second(dim_a, dim_b),
        })
    }

    pub fn partial_trace_first(&self, dim_a: usize, dim_b: usize) -> Result<Self> {
        if dim_a * dim_b != self.dim() {
            return Err(Error::DimensionMismatch(dim_a * dim_b, self.dim()));
        }
        Ok(Self {
            matrix: self.matrix.partial_trace_first(dim_a, dim_b),
        })
    }

    /// Wraps a matrix already known to be a valid state (e.g. the output of a channel).
    pub(crate) fn from_trusted(matrix: ComplexMatrix) -> Self {
        Self {
            matrix: matrix.hermitian_part(),
        }
    }
}
