//! Brute-force oracles for the work-statistics engines.
//!
//! Everything here validates engine output without sharing its code paths:
//! [`fock`] realizes the quadratic fermion Hamiltonians as dense matrices on
//! an explicit mode register and traces the characteristic function over the
//! full 2^N space; [`brute`] enumerates the two-measurement work
//! distribution with literal projector products. The only engine types used
//! are the shared data containers (`DensityState`, `WorkDistribution`).

pub mod brute;
pub mod fock;

pub use brute::brute_force_work;
pub use fock::{FermionOracle, FockOperatorSet};
