//! Dense open-system simulation of two driven qubits sharing a lossy bosonic
//! (plasmonic) mode.
//!
//! The crate is `no_std` (with `alloc`). Everything here is a pure function of
//! its inputs; IO, configuration files, timing and thread pools live in the
//! `ddesim` companion crate.
//!
//! Layout of the crate:
//!
//! - [`operator`]: complex matrices, tensor products, ladder operators,
//!   partial traces and density matrices.
//! - [`liouvillian`]: Lindblad generator, propagation (spectral and adaptive
//!   Runge–Kutta), steady states and the boson truncation check.
//! - [`models`]: the qubit–qubit–boson Hamiltonian, the adiabatically
//!   eliminated two-qubit model, its Dicke-basis form and the closed-form
//!   coherent populations.
//! - [`observables`]: concurrence, quantum-jump g²(τ), g²(0) and FFT timescale
//!   extraction.
//! - [`sweep`]: deterministic parameter-grid harness.
//!
//! All energies and rates are expressed in units of the boson decay rate γ_a,
//! and all times in units of 1/γ_a.

#![no_std]
#![forbid(unsafe_code)]

extern crate alloc;
#[cfg(test)]
extern crate std;

mod error;
mod fft;
pub mod liouvillian;
pub mod models;
pub mod observables;
pub mod operator;
pub mod sweep;

pub use error::{Error, Result};
pub use faer::c64;
pub use liouvillian::{
    build_liouvillian, truncation_check, EvolveResult, JumpTerm, Liouvillian, Propagation,
    RkTolerances,
};
pub use models::{
    adiabatic_eliminate, analytic_populations, build_effective_model, build_full_model,
    dicke_transform, population_period, DickeParams, DickePopulations, EffectiveModel,
    EffectiveParams, FullModel, FullModelParams, RelaxationOperator,
};
pub use observables::{
    concurrence, concurrence_with, default_tau_max, extract_timescale, g2_trace, g2_zero,
    post_jump_state, ConcurrenceResult, ConcurrenceVariant, CorrelationTrace, TimescaleResult,
};
pub use operator::{ComplexMatrix, DensityMatrix, SpaceLayout};
pub use sweep::{
    correlation_stats, run_sweep, run_sweep_with, Axis, CellExecutor, GridSpec, ObservableSet,
    Sequential, SweepResult, SweepRow,
};

/// Library version, recorded in output metadata.
pub const VERSION: &str = env!("CARGO_PKG_VERSION");
