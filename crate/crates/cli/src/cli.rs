//! Argument parsing and subcommand dispatch.
//!
//! Exit codes: 0 success, 1 verification or solver failure, 2 usage error.

use std::ffi::OsString;
use std::fs;
use std::io::Write;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use polar_core::liouville::DerivativeMode;
use polar_core::{hft, polar, Error as CoreError, GridSpec};
use thiserror::Error;

use crate::format::OutputFormat;
use crate::verify::{self, VerifyConfig};
use crate::{plot, report};

pub const DEFAULT_SPECTRUM_GRID: usize = 2048;
pub const DEFAULT_HFT_GRID: usize = 4096;
pub const DEFAULT_TRANSFORM_GRID: usize = 180;
pub const DEFAULT_DENSITY_SAMPLES: usize = 181;

#[derive(Debug, Parser)]
#[command(
    name = "polar",
    version,
    about = "Polar equation of the central-field Schrödinger problem: spectra, densities and identity checks"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Lowest eigenvalues W for fixed m, against ½(l+½)².
    Spectrum(SpectrumArgs),
    /// Normalized Legendre factor and probability density on [0, π].
    Density(DensityArgs),
    /// Three estimates of dW/dλ for one level.
    Hft(HftArgs),
    /// Effective potential after the Liouville transformation.
    Transform(TransformArgs),
    /// Run every acceptance check and report one line per check.
    Verify(VerifyArgs),
}

#[derive(Debug, Args)]
pub struct SpectrumArgs {
    #[arg(long, allow_negative_numbers = true)]
    pub m: i32,
    /// Number of levels, starting at n = 0.
    #[arg(long)]
    pub levels: u32,
    /// Subintervals of the base grid.
    #[arg(long, default_value_t = DEFAULT_SPECTRUM_GRID)]
    pub grid: usize,
    /// Grids N, 2N, 4N used for extrapolation (1 disables it).
    #[arg(long, default_value_t = 3, value_parser = clap::value_parser!(u8).range(1..=3))]
    pub richardson: u8,
    #[arg(long, value_enum, default_value_t = OutputFormat::Csv)]
    pub format: OutputFormat,
    #[arg(long)]
    pub output: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct DensityArgs {
    #[arg(long)]
    pub l: u32,
    #[arg(long, allow_negative_numbers = true)]
    pub m: i32,
    #[arg(long, default_value_t = DEFAULT_DENSITY_SAMPLES)]
    pub samples: usize,
    #[arg(long, value_enum, default_value_t = OutputFormat::Csv)]
    pub format: OutputFormat,
    #[arg(long)]
    pub output: Option<PathBuf>,
    /// Also write PATH.dat and PATH.gp for gnuplot.
    #[arg(long, value_name = "PATH")]
    pub emit_plot: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct HftArgs {
    #[arg(long, allow_negative_numbers = true)]
    pub m: i32,
    #[arg(long)]
    pub n: u32,
    /// Step in λ for the central difference; defaults to 1e-4·max(1, |λ|).
    #[arg(long)]
    pub delta: Option<f64>,
    #[arg(long, default_value_t = DEFAULT_HFT_GRID)]
    pub grid: usize,
    /// Largest accepted pairwise relative discrepancy.
    #[arg(long, default_value_t = hft::DEFAULT_TOLERANCE, allow_negative_numbers = true)]
    pub tolerance: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Derivatives {
    Analytic,
    Fd,
}

#[derive(Debug, Args)]
pub struct TransformArgs {
    #[arg(long, allow_negative_numbers = true)]
    pub m: i32,
    #[arg(long, default_value_t = DEFAULT_TRANSFORM_GRID)]
    pub grid: usize,
    #[arg(long, value_enum, default_value_t = Derivatives::Analytic)]
    pub derivatives: Derivatives,
    #[arg(long, value_enum, default_value_t = OutputFormat::Csv)]
    pub format: OutputFormat,
    #[arg(long)]
    pub output: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct VerifyArgs {
    #[arg(long, default_value_t = 5)]
    pub max_l: u32,
    #[arg(long, default_value_t = 1e-4, allow_negative_numbers = true)]
    pub tol_spectrum_m_pos: f64,
    #[arg(long, default_value_t = 5e-3, allow_negative_numbers = true)]
    pub tol_spectrum_m0: f64,
    #[arg(long, default_value_t = 1e-3, allow_negative_numbers = true)]
    pub tol_hft: f64,
    #[arg(long, default_value_t = 1e-10, allow_negative_numbers = true)]
    pub tol_quadrature: f64,
    #[arg(long, default_value_t = 4096)]
    pub grid: usize,
    #[arg(long, default_value_t = 3)]
    pub richardson: u8,
}

impl From<&VerifyArgs> for VerifyConfig {
    fn from(a: &VerifyArgs) -> Self {
        Self {
            max_l: a.max_l,
            tol_spectrum_m_pos: a.tol_spectrum_m_pos,
            tol_spectrum_m0: a.tol_spectrum_m0,
            tol_hft: a.tol_hft,
            tol_quadrature: a.tol_quadrature,
            grid: a.grid,
            richardson: a.richardson,
        }
    }
}

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{0}")]
    Usage(String),
    #[error(transparent)]
    Core(#[from] CoreError),
    #[error("{path}: {source}")]
    Io { path: String, source: std::io::Error },
    /// The command ran and its report has been written, but it did not pass.
    #[error("{0}")]
    Failed(String),
}

impl CliError {
    pub fn exit_code(&self) -> u8 {
        match self {
            CliError::Usage(_) => 2,
            CliError::Core(_) | CliError::Io { .. } | CliError::Failed(_) => 1,
        }
    }
}

fn io_error(path: impl Into<String>) -> impl FnOnce(std::io::Error) -> CliError {
    let path = path.into();
    move |source| CliError::Io { path, source }
}

fn grid_arg(intervals: usize) -> Result<GridSpec, CliError> {
    GridSpec::new(intervals).map_err(|e| CliError::Usage(format!("--grid: {e}")))
}

fn emit(text: &str, output: Option<&PathBuf>, out: &mut dyn Write) -> Result<(), CliError> {
    match output {
        Some(path) => fs::write(path, text).map_err(io_error(path.display().to_string())),
        None => out.write_all(text.as_bytes()).map_err(io_error("stdout")),
    }
}

/// Parses `args` (program name first) and runs the command. Everything meant
/// for stdout goes to `out`, diagnostics to `err`. Returns the exit code.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> u8
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let rendered = e.render().to_string();
            let sink: &mut dyn Write = if e.use_stderr() { err } else { out };
            let _ = sink.write_all(rendered.as_bytes());
            return code;
        }
    };
    match dispatch(&cli.command, out) {
        Ok(()) => 0,
        Err(e) => {
            let _ = writeln!(err, "polar: {e}");
            e.exit_code()
        }
    }
}

pub fn dispatch(command: &Command, out: &mut dyn Write) -> Result<(), CliError> {
    match command {
        Command::Spectrum(a) => spectrum(a, out),
        Command::Density(a) => density(a, out),
        Command::Hft(a) => hft_cmd(a, out),
        Command::Transform(a) => transform(a, out),
        Command::Verify(a) => verify_cmd(a, out),
    }
}

fn spectrum(a: &SpectrumArgs, out: &mut dyn Write) -> Result<(), CliError> {
    if a.levels == 0 {
        return Err(CliError::Usage("--levels must be at least 1".into()));
    }
    let grid = grid_arg(a.grid)?;
    let result = polar::compute_spectrum(a.m, a.levels, grid, a.richardson)?;
    emit(&report::render_spectrum(&result, a.format), a.output.as_ref(), out)
}

fn density(a: &DensityArgs, out: &mut dyn Write) -> Result<(), CliError> {
    if a.m.unsigned_abs() > a.l {
        return Err(CliError::Usage(format!("|m| = {} exceeds l = {}", a.m.unsigned_abs(), a.l)));
    }
    if a.samples < 2 {
        return Err(CliError::Usage("--samples must be at least 2".into()));
    }
    let table = report::density_table(a.l, a.m, a.samples)?;
    if let Some(base) = &a.emit_plot {
        plot::emit_density_plot(base, &table).map_err(io_error(base.display().to_string()))?;
    }
    emit(&report::render_density(&table, a.format), a.output.as_ref(), out)
}

fn hft_cmd(a: &HftArgs, out: &mut dyn Write) -> Result<(), CliError> {
    if !(a.tolerance > 0.0) || !a.tolerance.is_finite() {
        return Err(CliError::Usage("--tolerance must be a positive number".into()));
    }
    if let Some(d) = a.delta {
        if !(d > 0.0) || !d.is_finite() {
            return Err(CliError::Usage("--delta must be a positive number".into()));
        }
    }
    let grid = grid_arg(a.grid)?;
    if a.m == 0 {
        return Err(CliError::Failed(
            "m = 0 has no Hellmann-Feynman check: <1/sin^2(theta)> diverges for the ground family \
             (Theta ~ const at the poles), and lambda = -1/8 is the edge of the admissible range"
                .into(),
        ));
    }
    let r = hft::hft_verify(a.m, a.n, grid, a.delta, a.tolerance)?;
    emit(&report::render_hft(&r), None, out)?;
    if r.pass {
        Ok(())
    } else {
        Err(CliError::Failed(format!(
            "largest relative discrepancy {:e} exceeds tolerance {:e}",
            r.discrepancies.max(),
            r.tolerance
        )))
    }
}

fn transform(a: &TransformArgs, out: &mut dyn Write) -> Result<(), CliError> {
    let grid = grid_arg(a.grid)?;
    let mode = match a.derivatives {
        Derivatives::Analytic => DerivativeMode::Analytic,
        Derivatives::Fd => DerivativeMode::FiniteDifference,
    };
    let table = report::transform_table(a.m, grid, mode)?;
    emit(&report::render_transform(&table, a.format), a.output.as_ref(), out)
}

fn verify_cmd(a: &VerifyArgs, out: &mut dyn Write) -> Result<(), CliError> {
    let config = VerifyConfig::from(a);
    config.validate().map_err(CliError::Usage)?;
    let outcomes = verify::run_all(&config);
    for o in &outcomes {
        writeln!(out, "{}", o.line()).map_err(io_error("stdout"))?;
    }
    let failed = outcomes.iter().filter(|o| !o.pass).count();
    writeln!(out, "{} of {} checks passed", outcomes.len() - failed, outcomes.len()).map_err(io_error("stdout"))?;
    if failed == 0 {
        Ok(())
    } else {
        Err(CliError::Failed(format!("{failed} check(s) failed")))
    }
}
