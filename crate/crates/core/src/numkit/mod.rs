//! Dense complex linear algebra, states, distances and seeded sampling.

pub mod distance;
pub mod eig;
pub mod matrix;
pub mod random;
pub mod state;
pub mod svd;

pub use distance::{bures_distance, fidelity, root_fidelity, trace_distance};
pub use eig::{canonical_phase, hermitian_eig, hermitian_eig_with_tol, HermitianEigen};
pub use matrix::{inner, kron_vec, vec_norm, ComplexMatrix, C64};
pub use random::{random_density, random_hermitian, random_pure, random_unitary};
pub use state::{DensityOperator, PureState, Tolerances};
