//! Flag definitions and their translation into library parameters.

use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};
use eit_core::analytic::critical_xi;
use eit_core::gaussian::Ordering;
use eit_core::{DriveOrder, SystemParams};
use serde::Deserialize;

use crate::CliError;

#[derive(Debug, Parser)]
#[command(name = "eitsim", version, about = "Coupled-resonator transparency and Stark-shift simulator")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Resonator response over a detuning grid.
    Sweep(SweepArgs),
    /// Observables at a list of times, starting from the vacuum.
    Evolve(EvolveArgs),
    /// Closed-form stationary amplitudes and energies (linear drive).
    Stationary(StationaryArgs),
    /// Critical drive and regime (parametric drive).
    Threshold(ThresholdArgs),
    /// Largest moment discrepancy between the Gaussian solver and the Fock oracle.
    OracleCompare(OracleArgs),
}

/// System parameters. Without `--absolute`, every rate and frequency is a
/// multiple of Γ₁ and times are in units of 1/Γ₁.
#[derive(Debug, Clone, Default, Args)]
pub struct ParamArgs {
    /// TOML file with any of omega1, omega2, gamma1, gamma2, lambda,
    /// drive_amp, drive_freq, order; flags take precedence.
    #[arg(long, value_name = "PATH")]
    pub config: Option<PathBuf>,
    #[arg(long, allow_hyphen_values = true)]
    pub omega1: Option<f64>,
    #[arg(long, allow_hyphen_values = true, conflicts_with = "epsilon")]
    pub omega2: Option<f64>,
    /// Splitting ω₂ − ω₁.
    #[arg(long, allow_hyphen_values = true)]
    pub epsilon: Option<f64>,
    /// Mode-1 damping; the unit of everything else unless --absolute.
    #[arg(long)]
    pub gamma1: Option<f64>,
    #[arg(long)]
    pub gamma2: Option<f64>,
    #[arg(long)]
    pub lambda: Option<f64>,
    #[arg(long, conflicts_with_all = ["xi", "xi_rel"])]
    pub drive_amp: Option<f64>,
    /// ξ = 4Ϝ/Γ₁.
    #[arg(long, conflicts_with = "xi_rel")]
    pub xi: Option<f64>,
    /// ξ − ξ_c (parametric, degenerate resonators).
    #[arg(long, allow_hyphen_values = true)]
    pub xi_rel: Option<f64>,
    #[arg(long, allow_hyphen_values = true, conflicts_with = "delta")]
    pub drive_freq: Option<f64>,
    /// Δ = (ν − ω₁)/Γ₁; always dimensionless.
    #[arg(long, allow_hyphen_values = true)]
    pub delta: Option<f64>,
    /// Drive power: 1 (linear) or 2 (parametric).
    #[arg(long)]
    pub order: Option<u32>,
    /// Read rates, frequencies and times as raw values.
    #[arg(long)]
    pub absolute: bool,
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, ValueEnum)]
pub enum OrderingArg {
    #[default]
    Normal,
    Symmetric,
}

impl From<OrderingArg> for Ordering {
    fn from(o: OrderingArg) -> Self {
        match o {
            OrderingArg::Normal => Ordering::Normal,
            OrderingArg::Symmetric => Ordering::Symmetric,
        }
    }
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, ValueEnum)]
pub enum Format {
    #[default]
    Csv,
    Json,
}

#[derive(Debug, Clone, Default, Args)]
pub struct OutputArgs {
    #[arg(long, value_enum, default_value_t)]
    pub format: Format,
    /// Output file; standard output if omitted.
    #[arg(long, value_name = "PATH")]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Clone, Args)]
pub struct SweepArgs {
    #[command(flatten)]
    pub params: ParamArgs,
    #[arg(long, allow_hyphen_values = true, default_value_t = -0.8)]
    pub delta_min: f64,
    #[arg(long, allow_hyphen_values = true, default_value_t = 0.8)]
    pub delta_max: f64,
    #[arg(long, default_value_t = 801, value_parser = clap::value_parser!(u64).range(2..))]
    pub delta_steps: u64,
    /// Evaluation time; defaults to the relaxation time.
    #[arg(long, conflicts_with = "stationary")]
    pub time: Option<f64>,
    /// Evaluate the stationary state instead of a finite time.
    #[arg(long)]
    pub stationary: bool,
    /// Add e1 divided by its value at Δ = 0.
    #[arg(long)]
    pub normalize: bool,
    #[arg(long, value_enum, default_value_t)]
    pub ordering: OrderingArg,
    #[command(flatten)]
    pub output: OutputArgs,
}

#[derive(Debug, Clone, Args)]
pub struct EvolveArgs {
    #[command(flatten)]
    pub params: ParamArgs,
    /// Comma-separated evaluation times.
    #[arg(long, required = true, value_delimiter = ',', num_args = 1..)]
    pub time: Vec<f64>,
    #[arg(long, value_enum, default_value_t)]
    pub ordering: OrderingArg,
    #[command(flatten)]
    pub output: OutputArgs,
}

#[derive(Debug, Clone, Args)]
pub struct StationaryArgs {
    #[command(flatten)]
    pub params: ParamArgs,
    #[arg(long, value_enum, default_value_t)]
    pub ordering: OrderingArg,
    #[command(flatten)]
    pub output: OutputArgs,
}

#[derive(Debug, Clone, Args)]
pub struct ThresholdArgs {
    #[command(flatten)]
    pub params: ParamArgs,
    #[command(flatten)]
    pub output: OutputArgs,
}

#[derive(Debug, Clone, Args)]
pub struct OracleArgs {
    #[command(flatten)]
    pub params: ParamArgs,
    /// Comma-separated comparison times.
    #[arg(long, required = true, value_delimiter = ',', num_args = 1..)]
    pub time: Vec<f64>,
    /// Fock cutoff per mode: `N` or `N1,N2`.
    #[arg(long, value_delimiter = ',', num_args = 1..=2, default_value = "20")]
    pub truncation: Vec<usize>,
    /// Integration step; defaults to the largest stable step.
    #[arg(long)]
    pub dt: Option<f64>,
    #[command(flatten)]
    pub output: OutputArgs,
}

#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
struct ConfigFile {
    omega1: Option<f64>,
    omega2: Option<f64>,
    gamma1: Option<f64>,
    gamma2: Option<f64>,
    lambda: Option<f64>,
    drive_amp: Option<f64>,
    drive_freq: Option<f64>,
    order: Option<u32>,
}

fn read_config(path: &Path) -> Result<ConfigFile, CliError> {
    let text = std::fs::read_to_string(path).map_err(|source| CliError::Io { path: path.to_owned(), source })?;
    toml::from_str(&text).map_err(|e| CliError::Usage(format!("{}: {e}", path.display())))
}

/// Parameters resolved to library units, plus the factor that converts
/// user times into library times.
#[derive(Debug, Clone, Copy)]
pub struct Resolved {
    pub params: SystemParams,
    /// Library value of one user rate unit (Γ₁, or 1 with --absolute).
    pub rate_unit: f64,
}

impl Resolved {
    pub fn time_to_library(&self, t: f64) -> f64 {
        t / self.rate_unit
    }

    pub fn time_to_user(&self, t: f64) -> f64 {
        t * self.rate_unit
    }
}

impl ParamArgs {
    pub fn resolve(&self, default_order: DriveOrder) -> Result<Resolved, CliError> {
        let mut p = self.clone();
        if let Some(path) = &self.config {
            let cfg = read_config(path)?;
            p.omega1 = p.omega1.or(cfg.omega1);
            p.gamma1 = p.gamma1.or(cfg.gamma1);
            p.gamma2 = p.gamma2.or(cfg.gamma2);
            p.lambda = p.lambda.or(cfg.lambda);
            p.order = p.order.or(cfg.order);
            if p.epsilon.is_none() {
                p.omega2 = p.omega2.or(cfg.omega2);
            }
            if p.xi.is_none() && p.xi_rel.is_none() {
                p.drive_amp = p.drive_amp.or(cfg.drive_amp);
            }
            if p.delta.is_none() {
                p.drive_freq = p.drive_freq.or(cfg.drive_freq);
            }
        }

        let order = match p.order {
            Some(o) => DriveOrder::try_from(o)?,
            None => default_order,
        };
        let gamma1 = p.gamma1.unwrap_or(1.0);
        let unit = if p.absolute { 1.0 } else { gamma1 };
        let omega1 = p.omega1.unwrap_or(0.0);
        let epsilon = match (p.omega2, p.epsilon) {
            (Some(w2), _) => (w2 - omega1) * unit,
            (None, e) => e.unwrap_or(0.0) * unit,
        };
        let drive_offset = match p.drive_freq {
            Some(nu) => (nu - omega1) * unit,
            None => p.delta.unwrap_or(0.0) * gamma1,
        };
        let mut params = SystemParams {
            omega1: omega1 * unit,
            epsilon,
            drive_offset,
            gamma1,
            gamma2: p.gamma2.unwrap_or(0.0) * unit,
            lambda: p.lambda.unwrap_or(0.0) * unit,
            drive_amp: p.drive_amp.unwrap_or(0.0) * unit,
            order,
        };
        params.validate()?;
        if let Some(xi) = p.xi {
            params = params.with_xi(xi);
        } else if let Some(rel) = p.xi_rel {
            let xi_c = critical_xi(&params)?.xi_c;
            params = params.with_xi(xi_c + rel);
        }
        params.validate()?;
        Ok(Resolved { params, rate_unit: unit })
    }
}
