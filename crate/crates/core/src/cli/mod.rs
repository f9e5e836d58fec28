//! Command-line front end. Settings come from an optional `key = value` file and are
//! overridden by flags. Exit codes: 0 ok, 2 domain error, 3 parse or I/O error,
//! 4 verification failure.

mod commands;
pub mod config;
pub mod output;

use std::ffi::OsString;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::Parser;
use thiserror::Error;

use crate::anosov_orbits::OrbitError;
use crate::bv_gauge::BvError;
use crate::ruelle_zeta::ZetaError;
use crate::twisted_complex::ComplexError;

pub use commands::{cmd_bf, cmd_orbits, cmd_torsion, cmd_verify, cmd_zeta, Output};
pub use config::{CommandKind, Family, Format, LambdaGrid, PartialConfig, RunConfig};

pub const EXIT_OK: i32 = 0;
pub const EXIT_DOMAIN: i32 = 2;
pub const EXIT_PARSE: i32 = 3;
pub const EXIT_VERIFY: i32 = 4;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum CliError {
    #[error("parse error: {0}")]
    Parse(String),
    #[error("parse error at line {line}: {message}")]
    ParseAt { line: usize, message: String },
    #[error("i/o error: {0}")]
    Io(String),
    #[error("{0}")]
    Domain(String),
    #[error("verification failed")]
    VerifyFailed,
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Parse(_) | CliError::ParseAt { .. } | CliError::Io(_) => EXIT_PARSE,
            CliError::Domain(_) => EXIT_DOMAIN,
            CliError::VerifyFailed => EXIT_VERIFY,
        }
    }

    fn from_complex(e: ComplexError, path: Option<&Path>) -> Self {
        let at = path.map(|p| format!("{}:", p.display())).unwrap_or_default();
        match e {
            ComplexError::Parse { line, message } => CliError::Parse(format!("{at}{line}: {message}")),
            ComplexError::Io(m) => CliError::Io(m),
            other => CliError::Domain(other.to_string()),
        }
    }

    fn from_orbit(e: OrbitError, path: &Path) -> Self {
        let at = path.display();
        match e {
            OrbitError::Parse { line, message } => CliError::Parse(format!("{at}:{line}: {message}")),
            OrbitError::Validation { line, field } => CliError::Parse(format!("{at}:{line}: invalid {field}")),
            OrbitError::Io(m) => CliError::Io(m),
            other => CliError::Domain(other.to_string()),
        }
    }
}

impl From<BvError> for CliError {
    fn from(e: BvError) -> Self {
        match e {
            BvError::Complex(c) => CliError::from_complex(c, None),
            other => CliError::Domain(other.to_string()),
        }
    }
}

impl From<ZetaError> for CliError {
    fn from(e: ZetaError) -> Self {
        match e {
            ZetaError::Complex(c) => CliError::from_complex(c, None),
            ZetaError::Orbit(OrbitError::Io(m)) => CliError::Io(m),
            other => CliError::Domain(other.to_string()),
        }
    }
}

/// Flags override the config file, which overrides the defaults.
#[derive(Debug, Parser)]
#[command(name = "torsionlab", version, about = "Torsion, BF gauge fixing and dynamical zeta functions of toral suspensions")]
struct Args {
    /// torsion, bf, zeta, orbits or verify
    #[arg(value_parser = config::parse_command)]
    command: Option<CommandKind>,
    /// key = value settings file
    #[arg(long)]
    config: Option<PathBuf>,
    /// complex file (torsion, bf) or orbit spectrum (zeta)
    #[arg(long)]
    input: Option<PathBuf>,
    /// monodromy entries a,b,c,d of [[a,b],[c,d]]
    #[arg(long, value_parser = config::parse_monodromy)]
    monodromy: Option<[[i64; 2]; 2]>,
    #[arg(long, allow_hyphen_values = true)]
    lambda_start: Option<f64>,
    #[arg(long, allow_hyphen_values = true)]
    lambda_stop: Option<f64>,
    #[arg(long)]
    lambda_steps: Option<usize>,
    /// imaginary part shared by every grid point
    #[arg(long, allow_hyphen_values = true)]
    lambda_imag: Option<f64>,
    /// holonomy angle; accepts multiples of pi such as `2pi/3`
    #[arg(long, allow_hyphen_values = true, value_parser = config::parse_angle)]
    theta: Option<f64>,
    /// truncation: largest period kept
    #[arg(long = "J")]
    truncation: Option<u32>,
    /// torsion convention, +1 or -1
    #[arg(long, allow_hyphen_values = true, value_parser = config::parse_sigma)]
    sigma: Option<i32>,
    #[arg(long)]
    out: Option<PathBuf>,
    /// csv or json
    #[arg(long, value_parser = config::parse_format)]
    format: Option<Format>,
    #[arg(long)]
    seed: Option<u64>,
    /// samples along the contraction path
    #[arg(long)]
    samples: Option<usize>,
    /// constant, random or degenerate
    #[arg(long, value_parser = config::parse_family)]
    family: Option<Family>,
    /// use the exact resummation instead of the Euler product
    #[arg(long)]
    closed_form: bool,
    /// append the Fried comparison to the zeta summary
    #[arg(long)]
    fried: bool,
    #[arg(long, allow_hyphen_values = true)]
    tol: Option<f64>,
    /// run a single acceptance criterion
    #[arg(long)]
    criterion: Option<u8>,
}

impl Args {
    fn partial(&self) -> PartialConfig {
        PartialConfig {
            command: self.command,
            input: self.input.clone(),
            monodromy: self.monodromy,
            lambda_start: self.lambda_start,
            lambda_stop: self.lambda_stop,
            lambda_steps: self.lambda_steps,
            lambda_imag: self.lambda_imag,
            theta: self.theta,
            truncation: self.truncation,
            sigma: self.sigma,
            out: self.out.clone(),
            format: self.format,
            seed: self.seed,
            samples: self.samples,
            family: self.family,
            closed_form: self.closed_form.then_some(true),
            fried: self.fried.then_some(true),
            tolerance: self.tol,
            criterion: self.criterion,
        }
    }
}

pub fn execute(cfg: &RunConfig) -> Result<Output, CliError> {
    match cfg.command {
        CommandKind::Torsion => cmd_torsion(cfg),
        CommandKind::Bf => cmd_bf(cfg),
        CommandKind::Zeta => cmd_zeta(cfg),
        CommandKind::Orbits => cmd_orbits(cfg),
        CommandKind::Verify => cmd_verify(cfg),
    }
}

/// Resolves the configuration and renders the command's output.
pub fn render(cfg: &RunConfig) -> Result<(String, Vec<String>, bool), CliError> {
    let out = execute(cfg)?;
    let text = match (&out.report, cfg.format) {
        (Some(r), Format::Csv) => r.to_csv(),
        (Some(r), Format::Json) => r.to_json(),
        (None, _) => out.text.clone(),
    };
    Ok((text, out.diagnostics, out.failed))
}

fn resolve(args: &Args) -> Result<RunConfig, CliError> {
    let base = match &args.config {
        Some(path) => config::load_config(path)?,
        None => PartialConfig::default(),
    };
    base.overlay(&args.partial()).resolve()
}

fn run_inner(args: &Args) -> Result<(), CliError> {
    let cfg = resolve(args)?;
    let (text, diagnostics, failed) = render(&cfg)?;
    match &cfg.out {
        Some(path) => std::fs::write(path, &text).map_err(|e| CliError::Io(format!("{}: {e}", path.display())))?,
        None => std::io::stdout().write_all(text.as_bytes()).map_err(|e| CliError::Io(e.to_string()))?,
    }
    for d in diagnostics {
        eprintln!("{d}");
    }
    if failed {
        return Err(CliError::VerifyFailed);
    }
    Ok(())
}

/// Runs the command line and returns the process exit code.
pub fn run<I, T>(argv: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let args = match Args::try_parse_from(argv) {
        Ok(a) => a,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_PARSE } else { EXIT_OK };
            let _ = e.print();
            return code;
        }
    };
    match run_inner(&args) {
        Ok(()) => EXIT_OK,
        Err(e) => {
            if e != CliError::VerifyFailed {
                eprintln!("error: {e}");
            }
            e.exit_code()
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn flags_override_defaults() {
        let args = Args::try_parse_from(["torsionlab", "zeta", "--theta", "pi/2", "--sigma", "-1", "--J", "12", "--closed-form"]).unwrap();
        let cfg = resolve(&args).unwrap();
        assert_eq!(cfg.command, CommandKind::Zeta);
        assert_eq!(cfg.theta, std::f64::consts::FRAC_PI_2);
        assert_eq!(cfg.convention.sigma(), -1);
        assert_eq!(cfg.truncation, 12);
        assert!(cfg.closed_form);
    }

    #[test]
    fn exit_codes() {
        assert_eq!(run(["torsionlab", "--help"]), EXIT_OK);
        assert_eq!(run(["torsionlab", "zeta", "--format", "xml"]), EXIT_PARSE);
        assert_eq!(run(["torsionlab"]), EXIT_PARSE);
        assert_eq!(CliError::Domain("x".into()).exit_code(), EXIT_DOMAIN);
        assert_eq!(CliError::VerifyFailed.exit_code(), EXIT_VERIFY);
    }
}
