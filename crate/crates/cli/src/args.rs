use std::path::PathBuf;

use clap::{Args, Parser, Subcommand};

use crate::error::Result;
use crate::job::{Mode, Settings};

#[derive(Debug, Parser)]
#[command(
    name = "sqrtpot",
    version,
    about = "Bound states of the square-root power-law potential"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Energies and ansatz constants for every (dim, ell, n) channel
    Spectrum(JobArgs),
    /// Normalized radial function of a single channel
    Wavefn(JobArgs),
    /// Compare ansatz energies with closed forms and, optionally, the shooting solver
    Validate(JobArgs),
    /// Spectrum over a grid of parameter values
    Sweep(JobArgs),
}

impl Command {
    pub fn split(self) -> (Mode, JobArgs) {
        match self {
            Command::Spectrum(a) => (Mode::Spectrum, a),
            Command::Wavefn(a) => (Mode::Wavefn, a),
            Command::Validate(a) => (Mode::Validate, a),
            Command::Sweep(a) => (Mode::Sweep, a),
        }
    }
}

/// Every flag mirrors a config-file key; flags win over the file.
#[derive(Debug, Args, Default)]
#[command(allow_negative_numbers = true)]
pub struct JobArgs {
    /// Flat `key = value` file supplying defaults for any flag
    #[arg(long)]
    pub config: Option<PathBuf>,
    #[arg(long)]
    pub a0: Option<f64>,
    #[arg(long)]
    pub a1: Option<f64>,
    #[arg(long)]
    pub a2: Option<f64>,
    #[arg(long)]
    pub a3: Option<f64>,
    #[arg(long)]
    pub a4: Option<f64>,
    #[arg(long)]
    pub mass: Option<f64>,
    /// Dimensions, e.g. `3`, `2..5` or `3,5`
    #[arg(long)]
    pub dim: Option<String>,
    /// Angular momenta, same syntax as --dim
    #[arg(long)]
    pub ell: Option<String>,
    /// Series degrees n, same syntax as --dim
    #[arg(long, conflicts_with = "nr")]
    pub n: Option<String>,
    /// Radial quantum numbers of Mie/Coulomb states; selects n = 2 nr
    #[arg(long)]
    pub nr: Option<String>,
    /// Cross-check each state with the shooting solver
    #[arg(long)]
    pub oracle: bool,
    /// Replace a3 per channel by the smallest value that terminates the series
    #[arg(long)]
    pub constrain_a3: bool,
    #[arg(long, value_parser = ["csv", "json"])]
    pub format: Option<String>,
    /// Output file (stdout if absent)
    #[arg(long)]
    pub out: Option<PathBuf>,
    /// Relative tolerance for every comparison in `validate`
    #[arg(long)]
    pub tol: Option<f64>,
    /// Number of output grid points (wavefn) or shooting grid points (oracle)
    #[arg(long)]
    pub grid_points: Option<usize>,
    #[arg(long)]
    pub r_min: Option<f64>,
    #[arg(long)]
    pub r_max: Option<f64>,
    /// Largest number of rows a job may produce
    #[arg(long)]
    pub cap: Option<usize>,
    /// Rows per chunk; with --chunk, emit only that slice of the job
    #[arg(long)]
    pub chunk_size: Option<usize>,
    /// Zero-based chunk index
    #[arg(long)]
    pub chunk: Option<usize>,
    /// Swept parameter, `a4=0,0.5,1` or `a4=0:1:11`; repeat for a product grid
    #[arg(long)]
    pub sweep: Vec<String>,
}

impl JobArgs {
    pub fn to_settings(&self) -> Result<Settings> {
        let mut s = Settings::default();
        let floats = [
            ("a0", self.a0),
            ("a1", self.a1),
            ("a2", self.a2),
            ("a3", self.a3),
            ("a4", self.a4),
            ("mass", self.mass),
            ("tol", self.tol),
            ("r_min", self.r_min),
            ("r_max", self.r_max),
        ];
        for (k, v) in floats {
            if let Some(v) = v {
                s.push(k, v.to_string())?;
            }
        }
        let counts = [
            ("grid_points", self.grid_points),
            ("cap", self.cap),
            ("chunk_size", self.chunk_size),
            ("chunk", self.chunk),
        ];
        for (k, v) in counts {
            if let Some(v) = v {
                s.push(k, v.to_string())?;
            }
        }
        let texts = [
            ("dim", &self.dim),
            ("ell", &self.ell),
            ("n", &self.n),
            ("nr", &self.nr),
            ("format", &self.format),
        ];
        for (k, v) in texts {
            if let Some(v) = v {
                s.push(k, v.clone())?;
            }
        }
        if let Some(out) = &self.out {
            s.push("out", out.display().to_string())?;
        }
        // flags can only switch on; a config file may also switch them on
        if self.oracle {
            s.push("oracle", "true")?;
        }
        if self.constrain_a3 {
            s.push("constrain_a3", "true")?;
        }
        for sweep in &self.sweep {
            s.push("sweep", sweep.clone())?;
        }
        Ok(s)
    }
}
