//! Command-line front end: configuration, CSV output and the workflows.

use std::fmt;
use std::path::PathBuf;

use anyhow::Result;
use clap::{Parser, Subcommand};

pub mod commands;
pub mod config;
pub mod output;

pub use config::RunConfig;

/// Bad input from the command line or the config file.
#[derive(Debug)]
pub struct UsageError(pub String);

impl fmt::Display for UsageError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

impl std::error::Error for UsageError {}

#[derive(Debug, Parser)]
#[command(
    name = "trapci",
    version,
    about = "Two bosons with a Morse interaction in a harmonic trap"
)]
pub struct Cli {
    /// JSON run configuration.
    #[arg(long, global = true)]
    pub config: Option<PathBuf>,
    /// Output directory, overriding the config.
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,
    /// Worker threads.
    #[arg(long, global = true)]
    pub threads: Option<usize>,
    /// Basis name (GTO or GTO-2).
    #[arg(long, global = true)]
    pub basis: Option<String>,
    /// Morse depth in hbar omega; replaces any depth list.
    #[arg(long = "De", global = true, allow_negative_numbers = true)]
    pub de: Option<f64>,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Clone, Subcommand)]
pub enum Command {
    /// Free-space scattering length and Feshbach-like poles against De.
    Scatter,
    /// Quasi-exact trapped levels from the radial reference.
    Reference,
    /// One CI calculation.
    Ci,
    /// CI over a list of depths, compared with the reference.
    Sweep,
    /// Ground-state energy against basis size.
    Converge,
    /// Density cuts on the z1/z2 plane.
    Density {
        /// Named state (MGS, MS1, ...) or CI state index; repeatable.
        #[arg(long = "state")]
        states: Vec<String>,
    },
}

impl Cli {
    /// The config file with the command-line overrides applied.
    pub fn resolve(&self) -> Result<RunConfig> {
        let mut cfg = match &self.config {
            Some(p) => RunConfig::load(p)?,
            None => RunConfig::default(),
        };
        if let Some(out) = &self.out {
            cfg.output_dir = out.clone();
        }
        if let Some(b) = &self.basis {
            cfg.basis = config::BasisConfig::Named(b.clone());
        }
        if let Some(de) = self.de {
            if !(de >= 0.0) || !de.is_finite() {
                return Err(UsageError(format!("--De must be finite and >= 0, got {de}")).into());
            }
            cfg.morse.de = de;
            cfg.sweep = config::DeGrid::Values(vec![de]);
            cfg.scatter.grid = config::DeGrid::Values(vec![de]);
            cfg.converge.depths = vec![de];
        }
        if let Command::Density { states } = &self.command {
            if !states.is_empty() {
                cfg.density.states = states.clone();
            }
        }
        Ok(cfg)
    }
}

/// Sizes the rayon pool and the dense linear algebra to `threads`.
pub fn set_threads(threads: usize) -> Result<()> {
    if threads == 0 {
        return Err(UsageError("--threads must be at least 1".into()).into());
    }
    rayon::ThreadPoolBuilder::new()
        .num_threads(threads)
        .build_global()?;
    faer::set_global_parallelism(if threads == 1 {
        faer::Par::Seq
    } else {
        faer::Par::rayon(threads)
    });
    Ok(())
}

pub fn run(cli: &Cli) -> Result<()> {
    if let Some(n) = cli.threads {
        set_threads(n)?;
    }
    let cfg = cli.resolve()?;
    match &cli.command {
        Command::Scatter => commands::scatter(&cfg),
        Command::Reference => commands::reference(&cfg),
        Command::Ci => commands::ci(&cfg),
        Command::Sweep => commands::sweep(&cfg),
        Command::Converge => commands::converge(&cfg),
        Command::Density { .. } => commands::density(&cfg),
    }
}
