use std::f64::consts::PI;

use crate::ci::{AxisGrid, DensityCut};
use crate::error::{Error, Result};
use crate::potential::MorseParams;
use crate::special::{factorial, hermite_polynomials};
use crate::units::{self, D_HO, MASS, OMEGA};

use super::compose::StateName;
use super::radial::{radial_state, RadialProblem, RadialState};

/// 1D oscillator function of the centre-of-mass coordinate (mass `2m`).
pub fn com_oscillator(n: u32, x: f64) -> f64 {
    let alpha = 2.0 * MASS * OMEGA;
    let y = alpha.sqrt() * x;
    let mut h = Vec::new();
    hermite_polynomials(n as usize, y, &mut h);
    (alpha / PI).powf(0.25) / (2f64.powi(n as i32) * factorial(n)).sqrt()
        * h[n as usize]
        * (-0.5 * y * y).exp()
}

/// Centre-of-mass ground state.
pub const COM_GROUND: &[(f64, [u32; 3])] = &[(1.0, [0, 0, 0])];
/// One quantum along `z`.
pub const COM_Z: &[(f64, [u32; 3])] = &[(1.0, [0, 0, 1])];
/// Two quanta coupled to zero angular momentum.
pub const COM_N2_L0: &[(f64, [u32; 3])] = &[
    (FRAC_1_SQRT_3, [2, 0, 0]),
    (FRAC_1_SQRT_3, [0, 2, 0]),
    (FRAC_1_SQRT_3, [0, 0, 2]),
];
/// Two quanta coupled to `L = 2, M = 0`, i.e. `2 z^2 - x^2 - y^2`.
pub const COM_N2_L2: &[(f64, [u32; 3])] = &[
    (-FRAC_1_SQRT_6, [2, 0, 0]),
    (-FRAC_1_SQRT_6, [0, 2, 0]),
    (2.0 * FRAC_1_SQRT_6, [0, 0, 2]),
];
const FRAC_1_SQRT_3: f64 = 0.577_350_269_189_625_8;
const FRAC_1_SQRT_6: f64 = 0.408_248_290_463_863;

/// `psi_rel(r1 - r2) psi_com((r1 + r2) / 2)` on the `[z1, z2]` plane, with the
/// relative part in `M = 0`. The centre of mass is a combination of Cartesian
/// oscillator states.
pub fn reference_density_cut(
    rel: &RadialState,
    com: &[(f64, [u32; 3])],
    grid: &AxisGrid,
) -> Result<DensityCut> {
    if com.is_empty() {
        return Err(Error::invalid("empty centre-of-mass state"));
    }
    // Y_l0 on the z axis
    let y_l0 = ((2 * rel.ell + 1) as f64 / (4.0 * PI)).sqrt();
    let odd = rel.ell % 2 == 1;
    let scale = D_HO.powi(3);
    let psi = |z1: f64, z2: f64| {
        let (a, b) = (units::length_from_dho(z1), units::length_from_dho(z2));
        let r = (a - b).abs();
        let zc = 0.5 * (a + b);
        let com_value: f64 = com
            .iter()
            .map(|&(w, [nx, ny, nz])| {
                w * com_oscillator(nx, 0.0) * com_oscillator(ny, 0.0) * com_oscillator(nz, zc)
            })
            .sum();
        let sign = if odd && a < b { -1.0 } else { 1.0 };
        scale * sign * y_l0 * rel.value_over_r(r) * com_value
    };
    DensityCut::from_amplitude(grid, psi)
}

/// Reference cut of a named state of the trapped pair.
pub fn named_reference_cut(
    name: StateName,
    morse: &MorseParams,
    grid: &AxisGrid,
) -> Result<DensityCut> {
    let (ell, n_rel, n_com) = name.composition();
    let com = match (n_com, name.l() == ell) {
        (0, _) => COM_GROUND,
        (1, _) => COM_Z,
        (2, true) => COM_N2_L0,
        _ => COM_N2_L2,
    };
    let rel = radial_state(&RadialProblem::trapped(ell, *morse), n_rel)?;
    reference_density_cut(&rel, com, grid)
}
