//! Periodic Hamiltonians, integer energy distributions and their convolutions.

mod dist;
mod hamiltonian;

pub use dist::{IntDist, DEFAULT_SUPPORT_CAP, TOL_PMF};
pub use hamiltonian::{
    bezout, energy_distribution, gap_gcd, gcd, minimal_adjacent_l, period_of_dist,
    snap_hermitian, state_period, AdjacentL, PeriodicHamiltonian, StatePeriod, OCCUPANCY_CUTOFF,
};
