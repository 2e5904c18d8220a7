use crate::series::Format;
use clap::{Args, Parser, Subcommand};
use serde::{Deserialize, Serialize};
use std::path::{Path, PathBuf};

/// Solvers for Caputo-Fabrizio fractional differential equations of order
/// between one and two.
#[derive(Debug, Parser)]
#[command(name = "cfode", version)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Clone, PartialEq, Subcommand, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Command {
    /// Solve D^β u - λu = f on [a, t1] in closed form.
    SolveLinear(LinearArgs),
    /// Solve D^β u = φ(t, u) on [0, T] by Picard iteration.
    SolveNonlinear(NonlinearArgs),
    /// Solve the fractional mass-spring-damper equation.
    SolveMsd(MsdArgs),
    /// Substitute a solution file back into D^β u - λu = f.
    Verify(VerifyArgs),
    /// Re-run the command recorded in a run manifest.
    Replay(ReplayArgs),
}

#[derive(Debug, Clone, PartialEq, Args, Serialize, Deserialize)]
pub struct LinearArgs {
    #[arg(long, allow_hyphen_values = true)]
    pub alpha: f64,
    #[arg(long, allow_hyphen_values = true)]
    pub lambda: f64,
    /// Interval start.
    #[arg(long, default_value_t = 0.0, allow_hyphen_values = true)]
    pub a: f64,
    #[arg(long, allow_hyphen_values = true)]
    pub t1: f64,
    #[arg(long, default_value_t = 4001)]
    pub n: usize,
    /// Forcing as an expression in t.
    #[arg(long, allow_hyphen_values = true, conflicts_with = "f_csv")]
    pub f: Option<String>,
    /// Forcing sampled in a `t,f` CSV file.
    #[arg(long)]
    pub f_csv: Option<PathBuf>,
    #[arg(long, default_value_t = 0.0, allow_hyphen_values = true)]
    pub u0: f64,
    #[arg(long, default_value_t = 0.0, allow_hyphen_values = true)]
    pub du0: f64,
    #[arg(long, default_value = "u.csv")]
    pub out: PathBuf,
    #[arg(long, value_enum, default_value_t = Format::Csv)]
    pub format: Format,
}

#[derive(Debug, Clone, PartialEq, Args, Serialize, Deserialize)]
pub struct NonlinearArgs {
    #[arg(long, allow_hyphen_values = true)]
    pub alpha: f64,
    /// Horizon T.
    #[arg(long = "T", allow_hyphen_values = true)]
    pub horizon: f64,
    /// Right-hand side φ as an expression in t and u.
    #[arg(long, allow_hyphen_values = true)]
    pub phi: String,
    /// Lipschitz constant of φ in u.
    #[arg(long = "L1", allow_hyphen_values = true)]
    pub l1: f64,
    /// Lipschitz constant of ∂φ/∂t in u.
    #[arg(long = "L2", allow_hyphen_values = true)]
    pub l2: f64,
    #[arg(long = "U0", default_value_t = 0.0, allow_hyphen_values = true)]
    pub u0: f64,
    #[arg(long = "U1", default_value_t = 0.0, allow_hyphen_values = true)]
    pub u1: f64,
    #[arg(long, default_value_t = 1e-10, allow_hyphen_values = true)]
    pub tol: f64,
    #[arg(long, default_value_t = 200)]
    pub max_iter: usize,
    #[arg(long, default_value_t = 2001)]
    pub n: usize,
    #[arg(long, default_value = "u.csv")]
    pub out: PathBuf,
}

#[derive(Debug, Clone, PartialEq, Args, Serialize, Deserialize)]
pub struct MsdArgs {
    #[arg(long, allow_hyphen_values = true)]
    pub gamma: f64,
    #[arg(long, allow_hyphen_values = true)]
    pub m: f64,
    #[arg(long, allow_hyphen_values = true)]
    pub delta: f64,
    #[arg(long, allow_hyphen_values = true)]
    pub k: f64,
    #[arg(long, default_value_t = 1.0, allow_hyphen_values = true)]
    pub sigma: f64,
    /// External force as an expression in t.
    #[arg(long = "F", allow_hyphen_values = true, conflicts_with = "forcing_csv")]
    pub forcing: Option<String>,
    /// External force sampled in a `t,F` CSV file.
    #[arg(long = "F-csv")]
    pub forcing_csv: Option<PathBuf>,
    /// Initial displacement; defaults to F(0)/k, the only value the
    /// equation admits at t = 0.
    #[arg(long, allow_hyphen_values = true)]
    pub x0: Option<f64>,
    #[arg(long, allow_hyphen_values = true)]
    pub t1: f64,
    #[arg(long, default_value_t = 8001)]
    pub n: usize,
    #[arg(long, default_value = "x.csv")]
    pub out: PathBuf,
}

#[derive(Debug, Clone, PartialEq, Args, Serialize, Deserialize)]
pub struct VerifyArgs {
    /// `t,u` CSV on a uniform grid.
    #[arg(long)]
    pub solution_csv: PathBuf,
    #[arg(long, allow_hyphen_values = true)]
    pub alpha: f64,
    #[arg(long, allow_hyphen_values = true)]
    pub lambda: f64,
    #[arg(long, allow_hyphen_values = true)]
    pub f: String,
    /// Per-node residual CSV; defaults to `<solution>.residual.csv`.
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Clone, PartialEq, Args, Serialize, Deserialize)]
pub struct ReplayArgs {
    pub manifest: PathBuf,
    /// Write the primary output here instead of the recorded path.
    #[arg(long)]
    pub out: Option<PathBuf>,
}

impl VerifyArgs {
    pub fn residual_path(&self) -> PathBuf {
        self.out
            .clone()
            .unwrap_or_else(|| with_suffix(&self.solution_csv, ".residual.csv"))
    }
}

impl Command {
    /// Path of the primary output file.
    pub fn out(&self) -> Option<PathBuf> {
        match self {
            Command::SolveLinear(a) => Some(a.out.clone()),
            Command::SolveNonlinear(a) => Some(a.out.clone()),
            Command::SolveMsd(a) => Some(a.out.clone()),
            Command::Verify(a) => Some(a.residual_path()),
            Command::Replay(_) => None,
        }
    }

    pub fn set_out(&mut self, out: PathBuf) {
        match self {
            Command::SolveLinear(a) => a.out = out,
            Command::SolveNonlinear(a) => a.out = out,
            Command::SolveMsd(a) => a.out = out,
            Command::Verify(a) => a.out = Some(out),
            Command::Replay(a) => a.out = Some(out),
        }
    }
}

/// `path` with `suffix` appended to its file name.
pub fn with_suffix(path: &Path, suffix: &str) -> PathBuf {
    let mut s = path.as_os_str().to_owned();
    s.push(suffix);
    PathBuf::from(s)
}
