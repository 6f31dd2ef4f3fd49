//! Floquet stability analysis of a parametrically forced immersed fiber.
//!
//! A closed elastic fiber in a viscous fluid, with stiffness modulated
//! periodically in time, can pump energy into shape disturbances. This crate
//! computes where that happens:
//!
//! - [`bessel`] evaluates the Bessel/Hankel kernels that encode the viscous
//!   response of the surrounding fluid at complex arguments,
//! - [`floquet`] assembles the generalized eigenvalue pencil whose spectrum
//!   in the forcing amplitude τ marks neutral stability,
//! - [`eig`] solves the pencil and filters physically meaningful (real,
//!   bounded) amplitudes,
//! - [`sweep`] traces the instability tongues over a range of wavenumbers p
//!   and identifies resonant integer modes,
//! - [`ibsim`] cross-checks a predicted resonance by direct numerical
//!   simulation of an immersed fiber in a 2D incompressible flow.

mod dd;

pub mod bessel;
pub mod eig;
pub mod floquet;
pub mod ibsim;
pub mod matrix;
pub mod sweep;

pub use eig::{filter_real_amplitudes, generalized_eigenvalues, EigenError, EigenResult};
pub use floquet::{
    assemble_pencil, FloquetClass, FloquetError, FloquetMode, FloquetPencil, PhysicalParameters,
};
pub use ibsim::{
    fiber_force, run_simulation, FiberState, FluidGrid, ForcingSchedule, ModeAmplitudeSeries,
    SimConfig, SimError, SimulationRun,
};
pub use matrix::ComplexMatrix;
pub use sweep::{
    converge_truncation, physical_modes, sweep, PhysicalMode, StabilityPoint, SweepConfig,
    SweepError,
};

/// Complex scalar used throughout the pencil and spectral code.
pub type ComplexValue = num_complex::Complex64;

/// Integer Bessel order, nonnegative by construction.
pub type BesselOrder = u32;
