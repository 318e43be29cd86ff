//! ADAPT-VQE with operator pool tiling for spin-1/2 XXZ lattices.
//!
//! A small instance is solved repeatedly with the full Pauli pool; the
//! generators ADAPT picks are harvested into a tile set, which is then
//! translated across larger chains or grids to build compact pools.
//!
//! - [`pauli`]: symplectic Pauli strings, commutators, symmetry sectors.
//! - [`statevector`]: dense simulation, Pauli rotations, pool gradients.
//! - [`lattice`] / [`sum`] / [`eigen`]: XXZ Hamiltonians and a Lanczos ground-energy oracle.
//! - [`pool`]: full, harvested and tiled operator pools.
//! - [`optimizer`]: analytic ansatz gradients and L-BFGS.
//! - [`adapt`]: the ADAPT loop and randomized trials.
//! - [`closure`]: Lie closure and pool-completeness certificates.

pub mod adapt;
pub mod closure;
pub mod eigen;
pub mod error;
pub mod lattice;
pub mod optimizer;
pub mod pauli;
pub mod pool;
pub mod statevector;
pub mod sum;

pub use adapt::{
    adapt_run, adapt_trials, convergence_trace, trace_csv, AdaptConfig, ConvergenceCriterion,
    RunRecord, StepRecord, TieBreak, TraceRow,
};
pub use closure::{
    certify_tiled_completeness, certify_tiled_completeness_2d, lie_closure, sector_basis,
    CompletenessReport,
};
pub use eigen::exact_ground_energy;
pub use error::{Error, Result};
pub use lattice::{build_xxz, symmetry_of, Geometry, LatticeSpec};
pub use optimizer::{
    ansatz_state, energy_and_gradient, minimize, AnsatzEntry, OptimizationResult,
    OptimizerSettings,
};
pub use pauli::{Pauli, PauliString, SymmetrySector, YParity};
pub use pool::{
    full_pauli_pool, harvest_tiles, tile_pool_1d, tile_pool_2d, OperatorPool, TileSet, TileShape,
};
pub use statevector::{prepare_neel, NeelPattern, NeelSpec, StateVector};
pub use sum::PauliSum;
