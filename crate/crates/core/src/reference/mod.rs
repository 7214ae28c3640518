//! Quasi-exact reference for the harmonic trap: the relative motion is solved
//! on a radial grid and combined with the analytic centre-of-mass ladder.

mod compose;
mod density;
mod radial;
mod scattering;

pub use compose::{compose_totals, reference_spectrum, CompositeLevel, ReferenceResult, StateName};
pub use density::{
    com_oscillator, named_reference_cut, reference_density_cut, COM_GROUND, COM_N2_L0, COM_N2_L2,
    COM_Z,
};
pub use radial::{
    radial_spectrum, radial_state, RadialProblem, RadialSpectrum, RadialState, DEFAULT_POINTS,
    DEFAULT_R_MAX, RICHARDSON_TOL,
};
pub use scattering::{
    pole_positions, scattering_length, PoleSearch, ScatteringOptions, ScatteringResult, POLE_FLAG,
};
