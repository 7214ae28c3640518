//! End-to-end CI runs shared by the command line and the acceptance suite.

use std::path::{Path, PathBuf};
use std::time::{Duration, Instant};

use crate::basis::BasisSet;
use crate::ci::{self, CiMatrices, CiSolution, DEFAULT_DEGENERACY_TOL, DEFAULT_LINDEP};
use crate::error::Result;
use crate::morse::{
    basis_hash, build_integral_tensor, load_tensor, save_tensor, IntegralTensor, DEFAULT_THRESHOLD,
};
use crate::one_body::one_body_matrices;
use crate::potential::{MorseParams, TrapParams};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CiOptions {
    pub threshold: f64,
    pub lindep: f64,
    pub degeneracy_tol: f64,
}

impl Default for CiOptions {
    fn default() -> Self {
        Self {
            threshold: DEFAULT_THRESHOLD,
            lindep: DEFAULT_LINDEP,
            degeneracy_tol: DEFAULT_DEGENERACY_TOL,
        }
    }
}

#[derive(Debug, Clone, Copy, Default, PartialEq)]
pub struct Timings {
    pub integrals: Duration,
    pub assembly: Duration,
    pub solve: Duration,
}

impl Timings {
    pub fn total(&self) -> Duration {
        self.integrals + self.assembly + self.solve
    }
}

#[derive(Debug, Clone)]
pub struct CiRun {
    pub tensor: IntegralTensor,
    pub matrices: CiMatrices,
    pub solution: CiSolution,
    pub timings: Timings,
}

pub fn cache_path(dir: &Path, basis: &BasisSet, morse: &MorseParams) -> PathBuf {
    let hash: String = basis_hash(basis)[..8]
        .iter()
        .map(|b| format!("{b:02x}"))
        .collect();
    dir.join(format!(
        "{}-{hash}-{:016x}.tci",
        basis.name,
        morse.de.to_bits()
    ))
}

/// Integral tensor from `cache_dir` when a matching file exists, otherwise
/// built and written there.
pub fn tensor_for(
    basis: &BasisSet,
    morse: &MorseParams,
    threshold: f64,
    cache_dir: Option<&Path>,
) -> Result<IntegralTensor> {
    let Some(dir) = cache_dir else {
        return build_integral_tensor(basis, morse, threshold);
    };
    let path = cache_path(dir, basis, morse);
    if path.exists() {
        if let Some(t) = load_tensor(&path, basis, morse, threshold)? {
            return Ok(t);
        }
    }
    let t = build_integral_tensor(basis, morse, threshold)?;
    std::fs::create_dir_all(dir)?;
    save_tensor(&path, &t, basis)?;
    Ok(t)
}

/// Builds (or takes) the integrals, assembles and solves by canonical
/// orthogonalization.
pub fn run_ci(
    basis: &BasisSet,
    trap: &TrapParams,
    morse: &MorseParams,
    opts: &CiOptions,
    tensor: Option<IntegralTensor>,
) -> Result<CiRun> {
    let t0 = Instant::now();
    let tensor = match tensor {
        Some(t) => t,
        None => build_integral_tensor(basis, morse, opts.threshold)?,
    };
    let t1 = Instant::now();
    let one = one_body_matrices(basis, trap);
    let space = ci::enumerate_configurations(basis.len())?;
    let matrices = ci::assemble(&space, &one, Some(&tensor))?;
    let t2 = Instant::now();
    let solution = ci::solve(&space, &matrices, opts.lindep)?;
    let t3 = Instant::now();
    Ok(CiRun {
        tensor,
        matrices,
        solution,
        timings: Timings {
            integrals: t1 - t0,
            assembly: t2 - t1,
            solve: t3 - t2,
        },
    })
}
