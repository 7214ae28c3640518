//! Oscillator units.
//!
//! Everything inside the crate runs with `hbar = m = omega = 1`, so the
//! reduced mass is `1/2` and the oscillator length of the relative motion is
//! `d_ho = sqrt(hbar / (mu omega)) = sqrt(2)`. Inputs and reported results use
//! `d_ho` for lengths and `hbar omega` for energies; energies therefore need no
//! conversion and lengths are scaled by [`D_HO`].

pub const HBAR: f64 = 1.0;
pub const MASS: f64 = 1.0;
pub const OMEGA: f64 = 1.0;
pub const MU: f64 = 0.5 * MASS;
pub const D_HO: f64 = std::f64::consts::SQRT_2;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct UnitSystem {
    pub hbar: f64,
    pub mass: f64,
    pub omega: f64,
    pub mu: f64,
    pub d_ho: f64,
}

impl Default for UnitSystem {
    fn default() -> Self {
        Self {
            hbar: HBAR,
            mass: MASS,
            omega: OMEGA,
            mu: MU,
            d_ho: D_HO,
        }
    }
}

impl UnitSystem {
    /// Ground energy of two non-interacting particles in the trap.
    pub fn noninteracting_ground(&self) -> f64 {
        2.0 * 1.5 * self.hbar * self.omega
    }
}

pub fn length_from_dho(x: f64) -> f64 {
    x * D_HO
}

pub fn length_to_dho(x: f64) -> f64 {
    x / D_HO
}

pub fn inverse_length_from_dho(k: f64) -> f64 {
    k / D_HO
}

pub fn inverse_length_to_dho(k: f64) -> f64 {
    k * D_HO
}

pub fn vec_from_dho(v: [f64; 3]) -> [f64; 3] {
    v.map(length_from_dho)
}

pub fn vec_to_dho(v: [f64; 3]) -> [f64; 3] {
    v.map(length_to_dho)
}
