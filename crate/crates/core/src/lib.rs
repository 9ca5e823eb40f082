//! Numerics for coherence as a resource under time-translation-invariant
//! operations: quantum Fisher information, minimum-variance purifications,
//! convex-roof ensembles, integer energy distributions, translated-Poisson
//! approximation, iid state conversion and coherence cost.

pub mod approx;
pub mod cli;
pub mod convert;
pub mod cost;
pub mod error;
pub mod numkit;
pub mod purify;
pub mod qfi;
pub mod roof;
pub mod selftest;
pub mod spectral;

pub use error::{Error, Result};
