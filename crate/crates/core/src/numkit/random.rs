//! Seeded random states, unitaries and Hermitian matrices.
//!
//! Every generator takes an explicit `u64` seed and draws from a ChaCha8
//! stream, so outputs are bitwise reproducible across platforms.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;

use super::matrix::{inner, vec_norm, ComplexMatrix, C64};
use super::state::{DensityOperator, PureState};
use crate::error::{Error, Result};

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

fn gaussian(rng: &mut impl Rng) -> C64 {
    C64::new(rng.sample(StandardNormal), rng.sample(StandardNormal))
}

/// Matrix of iid standard complex Gaussians.
pub fn ginibre(rows: usize, cols: usize, rng: &mut impl Rng) -> ComplexMatrix {
    let data = (0..rows * cols).map(|_| gaussian(rng)).collect();
    ComplexMatrix::from_vec(rows, cols, data).expect("finite gaussian samples")
}

/// Haar-distributed pure state.
pub fn random_pure(dim: usize, seed: u64) -> PureState {
    random_pure_with(dim, &mut rng(seed))
}

pub fn random_pure_with(dim: usize, rng: &mut impl Rng) -> PureState {
    let v: Vec<C64> = (0..dim).map(|_| gaussian(rng)).collect();
    PureState::normalized(v).expect("gaussian vector is nonzero")
}

/// Density matrix `G G^dagger / Tr` with `G` a `dim x rank` Ginibre matrix,
/// i.e. the reduced state of a Haar pure state on `dim x rank`.
pub fn random_density(dim: usize, rank: usize, seed: u64) -> Result<DensityOperator> {
    random_density_with(dim, rank, &mut rng(seed))
}

pub fn random_density_with(dim: usize, rank: usize, rng: &mut impl Rng) -> Result<DensityOperator> {
    if dim == 0 || rank == 0 || rank > dim {
        return Err(Error::BadRank { rank, dim });
    }
    let g = ginibre(dim, rank, rng);
    let w = g.matmul(&g.adjoint());
    let tr = w.trace().re;
    DensityOperator::new(w.scale_real(1.0 / tr).hermitian_part())
}

/// Haar unitary from Gram-Schmidt orthonormalization of a Ginibre matrix.
pub fn random_unitary(dim: usize, seed: u64) -> ComplexMatrix {
    random_unitary_with(dim, &mut rng(seed))
}

pub fn random_unitary_with(dim: usize, rng: &mut impl Rng) -> ComplexMatrix {
    let g = ginibre(dim, dim, rng);
    let mut cols: Vec<Vec<C64>> = Vec::with_capacity(dim);
    for j in 0..dim {
        let mut v = g.column(j);
        // Two passes of modified Gram-Schmidt keep orthogonality at machine precision.
        for _ in 0..2 {
            for q in &cols {
                let c = inner(q, &v);
                for (x, y) in v.iter_mut().zip(q) {
                    *x -= c * y;
                }
            }
        }
        let n = vec_norm(&v);
        cols.push(v.into_iter().map(|z| z / n).collect());
    }
    ComplexMatrix::from_columns(&cols)
}

/// Hermitian matrix `(G + G^dagger) / 2` with Gaussian entries.
pub fn random_hermitian(dim: usize, seed: u64) -> ComplexMatrix {
    random_hermitian_with(dim, &mut rng(seed))
}

pub fn random_hermitian_with(dim: usize, rng: &mut impl Rng) -> ComplexMatrix {
    ginibre(dim, dim, rng).hermitian_part()
}

/// Density matrix whose eigenvalues are all at least `min_eig`.
pub fn random_density_min_eig(dim: usize, min_eig: f64, seed: u64) -> Result<DensityOperator> {
    if !(0.0..1.0 / dim as f64).contains(&min_eig) {
        return Err(Error::InvalidArgument(format!(
            "min eigenvalue {min_eig} not attainable in dimension {dim}"
        )));
    }
    let base = random_density(dim, dim, seed)?;
    let w = dim as f64 * min_eig;
    base.mix(&DensityOperator::maximally_mixed(dim), 1.0 - w)
}
