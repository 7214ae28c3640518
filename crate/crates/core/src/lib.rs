//! Configuration interaction for two bosons in a harmonic trap, interacting
//! through a Morse potential, on a Cartesian Gaussian basis.
//!
//! Internally `hbar = m = omega = 1`; see [`units`].

pub mod basis;
pub mod ci;
pub mod error;
pub mod linalg;
pub mod morse;
pub mod one_body;
pub mod potential;
pub mod quadrature;
pub mod reference;
pub mod special;
pub mod units;
pub mod workflow;

pub use basis::{expand_shells, normalization_constant, BasisSet, GtoPrimitive, ShellSpec};
pub use ci::{
    assemble, enumerate_configurations, solve, solve_congruence, solve_congruence_pruned, AxisGrid,
    CiMatrices, CiSolution, ConfigurationSpace, DensityCut,
};
pub use error::{Error, Result};
pub use morse::{build_integral_tensor, IntegralTensor};
pub use one_body::{one_body_matrices, OneBodyMatrices};
pub use potential::{morse_value, GaussianWell, MorseParams, TrapParams};
pub use reference::{ReferenceResult, ScatteringResult, StateName};
pub use units::UnitSystem;
pub use workflow::{run_ci, CiOptions, CiRun};
