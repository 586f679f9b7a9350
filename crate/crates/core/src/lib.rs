//! Numerical laboratory for the inviscid limit of barotropic compressible
//! flows with density-dependent viscosity and turbulent drag.
//!
//! The crate provides
//! * a structural audit of density-dependent viscosity pairs
//!   ([`viscosity`]),
//! * the barotropic thermodynamics and relative-entropy machinery
//!   ([`thermo`]),
//! * second-order finite-volume solvers for the viscous system and its
//!   inviscid reference ([`solver`]),
//! * the cutoff-based wall corrector and its scaling checks ([`layer`]),
//! * the functionals driving the convergence analysis: stress surrogates,
//!   relative energy, remainder terms and criterion integrals
//!   ([`diagnostics`]),
//! * configuration, sweep orchestration and report emission ([`harness`]).

pub mod diagnostics;
pub mod error;
pub mod fitting;
pub mod grid;
pub mod harness;
pub mod layer;
pub mod ops;
pub mod quadrature;
pub mod solver;
pub mod state;
pub mod thermo;
pub mod viscosity;

pub use error::{Error, Result};
pub use grid::{Geometry, Grid};
pub use state::{FluidState, Trajectory};
pub use thermo::GasLaw;
pub use viscosity::ViscosityLaw;
