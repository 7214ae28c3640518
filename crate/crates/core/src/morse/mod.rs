//! Two-particle Morse integrals over Cartesian Gaussians.
//!
//! A bra-ket pair of Gaussians on particle 1 (exponent sum `p`, center `P`)
//! and one on particle 2 (`q`, `Q`) interact through
//! `g(R) = (pi/(p+q))^{3/2} int d^3s U(|s|) exp(-xi |s - R|^2)` with
//! `R = P - Q` and `xi = pq/(p+q)`. Every quartet integral is a contraction
//! of Hermite expansion coefficients with Cartesian derivatives of `g`
//! (the R tensor). The radial moments of `U` against a Gaussian are the
//! master integrals, which for the Morse form reduce to S integrals.

mod cache;
mod quartet;
mod rtensor;
mod tensor;

pub use cache::{basis_hash, load_tensor, save_tensor, CACHE_MAGIC, CACHE_VERSION};
pub use quartet::two_particle_integral;
pub use rtensor::{
    r_tensor_general, r_tensor_q0, taylor_coefficients, RTableQ0, RTensorGeneral, RTensorRequest,
    QUADRATURE_SWITCH, TAYLOR_MAX_TERMS,
};
pub use tensor::{build_integral_tensor, IntegralTensor, QuartetKey, DEFAULT_THRESHOLD};

use crate::error::Result;
use crate::potential::MorseParams;
use crate::special::{ln_s_integral, s_integral_recurrence, SIntegralParams};

/// `Pi_lambda(xi) = int_0^inf r^lambda U(r) exp(-xi r^2) dr` from the closed-form
/// S integrals. Expanding `U` gives
/// `De e^{am Rm} [e^{am Rm} S(lambda, -2 am, xi) - 2 S(lambda, -am, xi)]`.
pub fn master_integral(lambda: u32, xi: f64, morse: &MorseParams) -> Result<f64> {
    if morse.de == 0.0 {
        SIntegralParams::new(lambda, 0.0, xi)?;
        return Ok(0.0);
    }
    let ar = morse.am * morse.rm;
    let s2 = ln_s_integral(SIntegralParams::new(lambda, -2.0 * morse.am, xi)?)?;
    let s1 = ln_s_integral(SIntegralParams::new(lambda, -morse.am, xi)?)?;
    Ok(morse.de * ((2.0 * ar + s2).exp() - 2.0 * (ar + s1).exp()))
}

/// `Pi_0 ..= Pi_lambda_max` at one `xi` through the S recurrence.
pub fn master_integrals(lambda_max: usize, xi: f64, morse: &MorseParams) -> Result<Vec<f64>> {
    if morse.de == 0.0 {
        SIntegralParams::new(0, 0.0, xi)?;
        return Ok(vec![0.0; lambda_max + 1]);
    }
    let ar = morse.am * morse.rm;
    let s2 = s_integral_recurrence(lambda_max, -2.0 * morse.am, xi)?;
    let s1 = s_integral_recurrence(lambda_max, -morse.am, xi)?;
    Ok((0..=lambda_max)
        .map(|l| morse.de * ((2.0 * ar + s2.ln_value(l)).exp() - 2.0 * (ar + s1.ln_value(l)).exp()))
        .collect())
}
