//! Interaction and trapping potentials.

use crate::error::{Error, Result};
use crate::units;

/// Equilibrium distance used throughout, in `d_ho`.
pub const DEFAULT_RM_DHO: f64 = 0.212;

/// `U(r) = De (exp(-2 am (r - Rm)) - 2 exp(-am (r - Rm)))`, internal units.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MorseParams {
    pub de: f64,
    pub rm: f64,
    pub am: f64,
}

impl MorseParams {
    pub fn new(de: f64, rm: f64, am: f64) -> Result<Self> {
        if !(de >= 0.0) || !de.is_finite() {
            return Err(Error::invalid(format!("Morse De must be >= 0, got {de}")));
        }
        if !(rm >= 0.0) || !rm.is_finite() {
            return Err(Error::invalid(format!("Morse Rm must be >= 0, got {rm}")));
        }
        if !(am > 0.0) || !am.is_finite() {
            return Err(Error::invalid(format!("Morse am must be > 0, got {am}")));
        }
        Ok(Self { de, rm, am })
    }

    /// `De` in `hbar omega`, `Rm` in `d_ho`, `am` in `1/d_ho`.
    pub fn from_oscillator_units(de: f64, rm_dho: f64, am_per_dho: f64) -> Result<Self> {
        Self::new(
            de,
            units::length_from_dho(rm_dho),
            units::inverse_length_from_dho(am_per_dho),
        )
    }

    /// `Rm = 0.212 d_ho`, `am = sqrt(20) / d_ho`.
    pub fn standard(de: f64) -> Result<Self> {
        Self::from_oscillator_units(de, DEFAULT_RM_DHO, 20f64.sqrt())
    }

    pub fn with_de(&self, de: f64) -> Result<Self> {
        Self::new(de, self.rm, self.am)
    }

    pub fn rm_dho(&self) -> f64 {
        units::length_to_dho(self.rm)
    }

    pub fn am_per_dho(&self) -> f64 {
        units::inverse_length_to_dho(self.am)
    }
}

pub fn morse_value(p: &MorseParams, r: f64) -> f64 {
    if p.de == 0.0 {
        return 0.0;
    }
    let e = (-p.am * (r - p.rm)).exp();
    p.de * (e * e - 2.0 * e)
}

/// Attractive well `-depth exp(-|r - C|^2 / (2 width^2))`, internal units.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GaussianWell {
    pub center: [f64; 3],
    pub depth: f64,
    pub width: f64,
}

impl GaussianWell {
    /// Center and width in `d_ho`, depth in `hbar omega`.
    pub fn from_oscillator_units(center: [f64; 3], depth: f64, width: f64) -> Result<Self> {
        if !(depth > 0.0) || !(width > 0.0) {
            return Err(Error::invalid(format!(
                "Gaussian well needs positive depth and width, got {depth} and {width}"
            )));
        }
        Ok(Self {
            center: units::vec_from_dho(center),
            depth,
            width: units::length_from_dho(width),
        })
    }

    /// Exponent `eta` of the well in `exp(-eta |r - C|^2)`.
    pub fn eta(&self) -> f64 {
        0.5 / (self.width * self.width)
    }

    pub fn value(&self, r: [f64; 3]) -> f64 {
        let d2: f64 = (0..3).map(|i| (r[i] - self.center[i]).powi(2)).sum();
        -self.depth * (-self.eta() * d2).exp()
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum TrapParams {
    HarmonicIsotropic { omega: f64 },
    GaussianWells(Vec<GaussianWell>),
}

impl Default for TrapParams {
    fn default() -> Self {
        TrapParams::HarmonicIsotropic {
            omega: units::OMEGA,
        }
    }
}

impl TrapParams {
    pub fn harmonic(omega: f64) -> Result<Self> {
        if !(omega > 0.0) || !omega.is_finite() {
            return Err(Error::invalid(format!(
                "trap frequency must be > 0, got {omega}"
            )));
        }
        Ok(TrapParams::HarmonicIsotropic { omega })
    }

    pub fn wells(wells: Vec<GaussianWell>) -> Result<Self> {
        if wells.is_empty() {
            return Err(Error::invalid(
                "a Gaussian-well trap needs at least one well",
            ));
        }
        if wells.iter().any(|w| !(w.depth > 0.0) || !(w.width > 0.0)) {
            return Err(Error::invalid(
                "Gaussian wells need positive depths and widths",
            ));
        }
        Ok(TrapParams::GaussianWells(wells))
    }

    pub fn value(&self, r: [f64; 3]) -> f64 {
        match self {
            TrapParams::HarmonicIsotropic { omega } => {
                0.5 * units::MASS * omega * omega * r.iter().map(|x| x * x).sum::<f64>()
            }
            TrapParams::GaussianWells(ws) => ws.iter().map(|w| w.value(r)).sum(),
        }
    }
}
