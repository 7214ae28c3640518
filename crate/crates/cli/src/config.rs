//! Run configuration, read from JSON. Lengths are in `d_ho`, energies in `hbar omega`.

use std::path::{Path, PathBuf};

use anyhow::{Context, Result};
use serde::{Deserialize, Serialize};
use trapci::ci::{AxisGrid, DEFAULT_DEGENERACY_TOL, DEFAULT_LINDEP};
use trapci::morse::DEFAULT_THRESHOLD;
use trapci::reference::ScatteringOptions;
use trapci::{BasisSet, CiOptions, GaussianWell, MorseParams, ShellSpec, TrapParams};

use crate::UsageError;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct RunConfig {
    pub trap: TrapConfig,
    pub morse: MorseConfig,
    pub basis: BasisConfig,
    pub solver: SolverConfig,
    /// Depths for `sweep` and `reference`.
    pub sweep: DeGrid,
    pub scatter: ScatterConfig,
    pub converge: ConvergeConfig,
    pub density: DensityConfig,
    /// States written to the spectrum file lie at most this far above the ground state.
    pub spectrum_window: f64,
    pub output_dir: PathBuf,
    pub cache_dir: Option<PathBuf>,
}

impl Default for RunConfig {
    fn default() -> Self {
        Self {
            trap: TrapConfig::default(),
            morse: MorseConfig::default(),
            basis: BasisConfig::default(),
            solver: SolverConfig::default(),
            sweep: DeGrid::Geometric {
                min: 0.5,
                max: 15.0,
                points: 60,
            },
            scatter: ScatterConfig::default(),
            converge: ConvergeConfig::default(),
            density: DensityConfig::default(),
            spectrum_window: 6.0,
            output_dir: PathBuf::from("out"),
            cache_dir: None,
        }
    }
}

impl RunConfig {
    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path)
            .with_context(|| format!("reading config {}", path.display()))?;
        let cfg: Self = serde_json::from_str(&text)
            .map_err(|e| UsageError(format!("config {}: {e}", path.display())))?;
        Ok(cfg)
    }

    pub fn options(&self) -> CiOptions {
        CiOptions {
            threshold: self.solver.threshold,
            lindep: self.solver.lindep,
            degeneracy_tol: self.solver.degeneracy_tol,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, rename_all = "snake_case")]
pub enum TrapConfig {
    Harmonic { omega: f64 },
    GaussianWells(Vec<WellConfig>),
}

impl Default for TrapConfig {
    fn default() -> Self {
        TrapConfig::Harmonic { omega: 1.0 }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct WellConfig {
    pub center: [f64; 3],
    pub depth: f64,
    pub width: f64,
}

impl TrapConfig {
    pub fn build(&self) -> Result<TrapParams> {
        Ok(match self {
            TrapConfig::Harmonic { omega } => TrapParams::harmonic(*omega)?,
            TrapConfig::GaussianWells(wells) => TrapParams::wells(
                wells
                    .iter()
                    .map(|w| GaussianWell::from_oscillator_units(w.center, w.depth, w.width))
                    .collect::<trapci::Result<_>>()?,
            )?,
        })
    }

    /// The radial reference only exists for the unit harmonic trap.
    pub fn has_reference(&self) -> bool {
        matches!(self, TrapConfig::Harmonic { omega } if *omega == 1.0)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct MorseConfig {
    pub de: f64,
    pub rm_dho: f64,
    pub am_per_dho: f64,
}

impl Default for MorseConfig {
    fn default() -> Self {
        let p = MorseParams::standard(1.0).expect("standard Morse parameters");
        Self {
            de: 3.0,
            rm_dho: p.rm_dho(),
            am_per_dho: p.am_per_dho(),
        }
    }
}

impl MorseConfig {
    pub fn build(&self, de: f64) -> Result<MorseParams> {
        Ok(MorseParams::from_oscillator_units(
            de,
            self.rm_dho,
            self.am_per_dho,
        )?)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, rename_all = "snake_case")]
pub enum BasisConfig {
    Named(String),
    Custom {
        name: String,
        shells: Vec<ShellSpec>,
    },
}

impl Default for BasisConfig {
    fn default() -> Self {
        BasisConfig::Named("GTO".into())
    }
}

impl BasisConfig {
    pub fn build(&self) -> Result<BasisSet> {
        match self {
            BasisConfig::Named(n) => {
                BasisSet::named(n).map_err(|e| UsageError(e.to_string()).into())
            }
            BasisConfig::Custom { name, shells } => Ok(BasisSet::from_shells(name, shells)?),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct SolverConfig {
    pub lindep: f64,
    pub degeneracy_tol: f64,
    pub threshold: f64,
}

impl Default for SolverConfig {
    fn default() -> Self {
        Self {
            lindep: DEFAULT_LINDEP,
            degeneracy_tol: DEFAULT_DEGENERACY_TOL,
            threshold: DEFAULT_THRESHOLD,
        }
    }
}

/// A list of depths, given explicitly or as a range with endpoints included.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, rename_all = "snake_case")]
pub enum DeGrid {
    Values(Vec<f64>),
    Linear { min: f64, max: f64, points: usize },
    Geometric { min: f64, max: f64, points: usize },
}

impl DeGrid {
    pub fn values(&self) -> Result<Vec<f64>> {
        let v = match *self {
            DeGrid::Values(ref v) => v.clone(),
            DeGrid::Linear { min, max, points } => {
                check_range(min, max, points)?;
                if points == 1 {
                    vec![min]
                } else {
                    let h = (max - min) / (points - 1) as f64;
                    (0..points).map(|i| min + h * i as f64).collect()
                }
            }
            DeGrid::Geometric { min, max, points } => {
                check_range(min, max, points)?;
                if !(min > 0.0) {
                    return Err(UsageError("geometric depth grid needs min > 0".into()).into());
                }
                if points == 1 {
                    vec![min]
                } else {
                    let r = (max / min).ln() / (points - 1) as f64;
                    (0..points).map(|i| min * (r * i as f64).exp()).collect()
                }
            }
        };
        if v.is_empty() {
            return Err(UsageError("empty list of depths".into()).into());
        }
        if let Some(bad) = v.iter().find(|d| !(**d >= 0.0) || !d.is_finite()) {
            return Err(UsageError(format!("depth must be finite and >= 0, got {bad}")).into());
        }
        Ok(v)
    }

    pub fn bounds(&self) -> Result<[f64; 2]> {
        let v = self.values()?;
        let lo = v.iter().copied().fold(f64::INFINITY, f64::min);
        let hi = v.iter().copied().fold(f64::NEG_INFINITY, f64::max);
        Ok([lo, hi])
    }
}

fn check_range(min: f64, max: f64, points: usize) -> Result<()> {
    if points == 0 || !(max >= min) || !min.is_finite() || !max.is_finite() {
        return Err(UsageError(format!(
            "empty depth range: min {min}, max {max}, points {points}"
        ))
        .into());
    }
    Ok(())
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct ScatterConfig {
    pub grid: DeGrid,
    pub options: ScatteringOptions,
    pub pole_scan_step: f64,
    pub pole_tol: f64,
}

impl Default for ScatterConfig {
    fn default() -> Self {
        Self {
            grid: DeGrid::Linear {
                min: 0.5,
                max: 70.0,
                points: 700,
            },
            options: ScatteringOptions::default(),
            pole_scan_step: 0.25,
            pole_tol: 1e-6,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct ConvergeConfig {
    pub depths: Vec<f64>,
    /// Largest shell of the ladder; every basis from `s` up to it is run.
    pub sigma_max: u32,
    /// Further bases run after the ladder.
    pub extra: Vec<BasisConfig>,
}

impl Default for ConvergeConfig {
    fn default() -> Self {
        Self {
            depths: vec![3.0, 5.0, 10.0, 13.0],
            sigma_max: 3,
            extra: vec![BasisConfig::Named("GTO-2".into())],
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct DensityConfig {
    pub grid: AxisGrid,
    /// Named states (`MGS`, `MS1`, ...) or CI state indices.
    pub states: Vec<String>,
}

impl Default for DensityConfig {
    fn default() -> Self {
        Self {
            grid: AxisGrid::default(),
            states: vec!["MGS".into(), "MS1".into(), "MS2_L0".into()],
        }
    }
}
