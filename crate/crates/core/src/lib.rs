//! Statistics of quantum work for sudden quenches of spin-chain Hamiltonians.
//!
//! Two engines compute the same physics through unrelated routes:
//!
//! * [`work`] + [`spectral`]: an exact small-N engine that eigendecomposes
//!   dense Hamiltonians and enumerates the two-projective-measurement work
//!   atoms, including degenerate subspaces;
//! * [`tfim`]: a free-fermion engine for the periodic transverse-field
//!   Ising chain that evaluates the closed-form mode product, scaling to
//!   hundreds of sites.
//!
//! [`suscept`] and [`thermo`] derive susceptibilities, free-energy
//! differences and the non-equilibrium lag from either engine; [`model`]
//! builds the Hamiltonians both engines quench.

pub mod cumulants;
pub mod error;
pub mod model;
pub mod numerics;
pub mod spectral;
pub mod sudden;
pub mod suscept;
pub mod tfim;
pub mod thermo;
pub mod work;

pub use cumulants::{cumulants_from_atoms, cumulants_from_moments, CumulantSet, EngineTag};
pub use error::{Error, Result};
pub use model::{
    build_hamiltonian, build_hamiltonian_capped, magnetization_operator, quench_operator,
    CMatrix, ModelKind, QuenchSpec, DEFAULT_DENSE_CAP,
};
pub use spectral::{
    eigendecompose, eigendecompose_auto, gibbs_state, log_partition, project_state, DensityState,
    GibbsData, SpectralData, StateLabel, StateSpectrum,
};
pub use work::{
    characteristic_function, moments_direct, work_distribution, work_statistics,
    InitialCondition, WorkDistribution, WorkStatistics,
};
