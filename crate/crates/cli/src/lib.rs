//! Command-line front end: `sweep`, `evolve`, `stationary`, `threshold`
//! and `oracle-compare`.
//!
//! Exit codes: 0 success, 1 invalid input, 2 no stationary state where one
//! was required, 3 Fock truncation failure or numerical overflow.

pub mod args;
pub mod output;

use std::ffi::OsString;
use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::PathBuf;

use clap::Parser;
use eit_core::analytic::{
    classify_regime, critical_xi, relaxation_rate, stationary_amplitudes, AnalyticError, RegimeKind,
};
use eit_core::fock::{evolve_fock, fock_moments, max_step, FockDensity, FockError};
use eit_core::gaussian::{build_generator, evolve, observables, stationary_state, DynamicsError, MomentState};
use eit_core::sweep::{
    default_evaluation_time, linspace, sweep_detuning, time_series, Evaluation, SweepError, SweepOptions,
};
use eit_core::{DriveOrder, Error as CoreError, ValidationError};
use thiserror::Error;

use args::{Cli, Command, EvolveArgs, OracleArgs, OutputArgs, StationaryArgs, SweepArgs, ThresholdArgs};
use output::{Cell, Table};

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{0}")]
    Usage(String),
    #[error(transparent)]
    Core(#[from] CoreError),
    #[error("{}: {source}", path.display())]
    Io { path: PathBuf, source: io::Error },
}

impl From<ValidationError> for CliError {
    fn from(e: ValidationError) -> Self {
        CliError::Core(e.into())
    }
}

impl From<AnalyticError> for CliError {
    fn from(e: AnalyticError) -> Self {
        CliError::Core(e.into())
    }
}

impl From<SweepError> for CliError {
    fn from(e: SweepError) -> Self {
        CliError::Core(e.into())
    }
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        fn dynamics(e: &DynamicsError) -> i32 {
            match e {
                DynamicsError::NumericalOverflow { .. } => 3,
                DynamicsError::InvalidTime(_) => 1,
            }
        }
        match self {
            CliError::Usage(_) | CliError::Io { .. } => 1,
            CliError::Core(e) => match e {
                CoreError::NonStationary(_) => 2,
                CoreError::Dynamics(d) => dynamics(d),
                CoreError::Fock(FockError::Truncation { .. } | FockError::NonPhysical { .. }) => 3,
                CoreError::Sweep(SweepError::NonStationary { .. }) => 2,
                CoreError::Sweep(SweepError::Dynamics(d)) => dynamics(d),
                _ => 1,
            },
        }
    }
}

/// Parses `argv` (including the program name), runs the subcommand and
/// returns the process exit code.
pub fn run<I, T>(argv: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    run_with(argv, &mut io::stdout().lock(), &mut io::stderr().lock())
}

/// [`run`] with explicit output streams.
pub fn run_with<I, T>(argv: I, stdout: &mut dyn Write, stderr: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(cli) => cli,
        Err(e) => {
            let text = e.render().to_string();
            return if e.use_stderr() {
                let _ = write!(stderr, "{text}");
                1
            } else {
                let _ = write!(stdout, "{text}");
                0
            };
        }
    };
    match dispatch(cli.command, stdout) {
        Ok(()) => 0,
        Err(e) => {
            let _ = writeln!(stderr, "error: {e}");
            e.exit_code()
        }
    }
}

fn dispatch(command: Command, stdout: &mut dyn Write) -> Result<(), CliError> {
    match command {
        Command::Sweep(a) => sweep(a, stdout),
        Command::Evolve(a) => evolve_cmd(a, stdout),
        Command::Stationary(a) => stationary(a, stdout),
        Command::Threshold(a) => threshold(a, stdout),
        Command::OracleCompare(a) => oracle_compare(a, stdout),
    }
}

fn emit(
    out: &OutputArgs,
    stdout: &mut dyn Write,
    write: impl FnOnce(&mut dyn Write) -> io::Result<()>,
) -> Result<(), CliError> {
    match &out.out {
        Some(path) => {
            let io_err = |source| CliError::Io { path: path.clone(), source };
            let mut w = BufWriter::new(File::create(path).map_err(io_err)?);
            write(&mut w).map_err(io_err)?;
            w.flush().map_err(io_err)
        }
        None => write(stdout).map_err(|source| CliError::Io { path: "<stdout>".into(), source }),
    }
}

fn checked_times(times: &[f64], to_library: impl Fn(f64) -> f64) -> Result<Vec<f64>, CliError> {
    times
        .iter()
        .map(|&t| {
            if t.is_finite() && t >= 0.0 {
                Ok(to_library(t))
            } else {
                Err(CliError::Usage(format!("times must be finite and non-negative (got {t})")))
            }
        })
        .collect()
}

fn sweep(a: SweepArgs, stdout: &mut dyn Write) -> Result<(), CliError> {
    let r = a.params.resolve(DriveOrder::Linear)?;
    if a.delta_min.partial_cmp(&a.delta_max) != Some(std::cmp::Ordering::Less) {
        return Err(CliError::Usage(format!(
            "--delta-min ({}) must be below --delta-max ({})",
            a.delta_min, a.delta_max
        )));
    }
    let evaluation = if a.stationary {
        Evaluation::Stationary
    } else if let Some(t) = a.time {
        Evaluation::AtTime(checked_times(&[t], |t| r.time_to_library(t))?[0])
    } else {
        let t = default_evaluation_time(&r.params).map_err(|e| match e {
            SweepError::Analytic(AnalyticError::NoRelaxation(why)) => {
                CliError::Usage(format!("no default evaluation time ({why}); pass --time or --stationary"))
            }
            e => e.into(),
        })?;
        Evaluation::AtTime(t)
    };
    let grid = linspace(a.delta_min, a.delta_max, a.delta_steps as usize);
    let mut opts = SweepOptions::new(evaluation);
    opts.normalize = a.normalize;
    opts.ordering = a.ordering.into();
    let mut curve = sweep_detuning(&r.params, &grid, &opts)?;
    curve.t_eval = curve.t_eval.map(|t| r.time_to_user(t));
    emit(&a.output, stdout, |w| output::serialize(&curve, a.output.format, w))
}

fn evolve_cmd(a: EvolveArgs, stdout: &mut dyn Write) -> Result<(), CliError> {
    let r = a.params.resolve(DriveOrder::Linear)?;
    let times = checked_times(&a.time, |t| r.time_to_library(t))?;
    let series = time_series(&r.params, &times, a.ordering.into())?;
    let rows = a
        .time
        .iter()
        .zip(&series)
        .map(|(&t, p)| {
            vec![
                t.into(),
                p.mode1.energy.into(),
                p.mode1.sin2theta.into(),
                p.mode1.mean_x.into(),
                p.mode1.mean_y.into(),
                p.mode2.energy.into(),
                p.mode2.sin2theta.into(),
                p.mode2.mean_x.into(),
                p.mode2.mean_y.into(),
            ]
        })
        .collect();
    let table = Table {
        columns: vec!["t", "e1", "sin2theta1", "mean_x1", "mean_y1", "e2", "sin2theta2", "mean_x2", "mean_y2"],
        rows,
        single: false,
    };
    emit(&a.output, stdout, |w| table.write(a.output.format, w))
}

fn stationary(a: StationaryArgs, stdout: &mut dyn Write) -> Result<(), CliError> {
    let r = a.params.resolve(DriveOrder::Linear)?;
    if r.params.order != DriveOrder::Linear {
        return Err(CliError::Usage("stationary amplitudes are defined for --order 1 only".into()));
    }
    let gen = build_generator(&r.params)?;
    let fixed = stationary_state(&gen).map_err(CoreError::from)?;
    let amp = stationary_amplitudes(&r.params)?;
    let ordering = a.ordering.into();
    let (o1, o2) = (observables(&fixed, 1, ordering), observables(&fixed, 2, ordering));
    let table = Table {
        columns: vec![
            "alpha_re",
            "alpha_im",
            "alpha_abs",
            "beta_re",
            "beta_im",
            "beta_abs",
            "e1",
            "e2",
            "sin2theta1",
            "sin2theta2",
        ],
        rows: vec![vec![
            amp.alpha.re.into(),
            amp.alpha.im.into(),
            amp.alpha.norm().into(),
            amp.beta.re.into(),
            amp.beta.im.into(),
            amp.beta.norm().into(),
            o1.energy.into(),
            o2.energy.into(),
            o1.sin2theta.into(),
            o2.sin2theta.into(),
        ]],
        single: true,
    };
    emit(&a.output, stdout, |w| table.write(a.output.format, w))
}

fn threshold(a: ThresholdArgs, stdout: &mut dyn Write) -> Result<(), CliError> {
    let r = a.params.resolve(DriveOrder::Parametric)?;
    let critical = critical_xi(&r.params)?;
    let regime = classify_regime(&r.params)?;
    let relaxation = match regime.kind {
        RegimeKind::Weak => Some(r.time_to_user(relaxation_rate(&r.params)?.time)),
        _ => None,
    };
    let table = Table {
        columns: vec!["xi", "xi_c", "drive_amp_c", "regime", "relaxation_time"],
        rows: vec![vec![
            regime.xi.into(),
            critical.xi_c.into(),
            (critical.drive_amp_c / r.rate_unit).into(),
            Cell::Text(regime.kind.to_string()),
            relaxation.into(),
        ]],
        single: true,
    };
    emit(&a.output, stdout, |w| table.write(a.output.format, w))
}

fn oracle_compare(a: OracleArgs, stdout: &mut dyn Write) -> Result<(), CliError> {
    let r = a.params.resolve(DriveOrder::Linear)?;
    let times = checked_times(&a.time, |t| r.time_to_library(t))?;
    if times.windows(2).any(|w| w[1] < w[0]) {
        return Err(CliError::Usage("--time values must be non-decreasing".into()));
    }
    let (d1, d2) = match a.truncation[..] {
        [d] => (d, d),
        [d1, d2] => (d1, d2),
        _ => unreachable!("clap bounds the count"),
    };
    let dt = match a.dt {
        Some(dt) => r.time_to_library(dt),
        None => max_step(&r.params),
    };
    let gen = build_generator(&r.params)?;
    let mut rho = FockDensity::vacuum(d1, d2);
    let mut now = 0.0;
    let mut rows = Vec::with_capacity(times.len());
    for (&t_user, &t) in a.time.iter().zip(&times) {
        rho = evolve_fock(&r.params, &rho, t - now, dt).map_err(|e| shift_time(e, now))?;
        now = t;
        let gauss = evolve(&MomentState::vacuum(), &gen, t).map_err(CoreError::from)?;
        let diff = (gauss.pack() - fock_moments(&rho).pack()).amax();
        rows.push(vec![t_user.into(), diff.into()]);
    }
    let table = Table { columns: vec!["t", "max_abs_diff"], rows, single: false };
    emit(&a.output, stdout, |w| table.write(a.output.format, w))
}

/// Fock errors report times relative to the segment start; make them absolute.
fn shift_time(e: FockError, offset: f64) -> CliError {
    let e = match e {
        FockError::Truncation { population, time } => FockError::Truncation { population, time: time + offset },
        FockError::NonPhysical { trace, time } => FockError::NonPhysical { trace, time: time + offset },
        e => e,
    };
    CliError::Core(e.into())
}
