use std::path::{Path, PathBuf};

use crate::twisted_complex::TorsionConvention;
use crate::verify::DEFAULT_SEED;

use super::CliError;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CommandKind {
    Torsion,
    Bf,
    Zeta,
    Orbits,
    Verify,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Format {
    Csv,
    Json,
}

/// Contraction family scanned by `bf`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Family {
    /// Hodge contraction, held fixed.
    Constant,
    /// Random contraction rotated by random unitaries.
    Random,
    /// Rotation through a singular contraction at `t = 1/2`.
    Degenerate,
}

/// `λ_i = start + i (stop − start)/(steps − 1) + i·imag`, `i < steps`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LambdaGrid {
    pub start: f64,
    pub stop: f64,
    pub steps: usize,
    pub imag: f64,
}

impl LambdaGrid {
    pub fn points(&self) -> Vec<(f64, f64)> {
        (0..self.steps)
            .map(|i| {
                let re = if self.steps == 1 {
                    self.start
                } else {
                    self.start + (self.stop - self.start) * i as f64 / (self.steps - 1) as f64
                };
                (re, self.imag)
            })
            .collect()
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct RunConfig {
    pub command: CommandKind,
    pub input: Option<PathBuf>,
    pub monodromy: [[i64; 2]; 2],
    pub grid: LambdaGrid,
    pub theta: f64,
    pub truncation: u32,
    pub convention: TorsionConvention,
    pub out: Option<PathBuf>,
    pub format: Format,
    pub seed: u64,
    pub samples: usize,
    pub family: Family,
    pub closed_form: bool,
    pub fried: bool,
    pub tolerance: f64,
    pub criterion: Option<u8>,
}

/// Settings before defaults are applied; later sources override earlier ones.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct PartialConfig {
    pub command: Option<CommandKind>,
    pub input: Option<PathBuf>,
    pub monodromy: Option<[[i64; 2]; 2]>,
    pub lambda_start: Option<f64>,
    pub lambda_stop: Option<f64>,
    pub lambda_steps: Option<usize>,
    pub lambda_imag: Option<f64>,
    pub theta: Option<f64>,
    pub truncation: Option<u32>,
    pub sigma: Option<i32>,
    pub out: Option<PathBuf>,
    pub format: Option<Format>,
    pub seed: Option<u64>,
    pub samples: Option<usize>,
    pub family: Option<Family>,
    pub closed_form: Option<bool>,
    pub fried: Option<bool>,
    pub tolerance: Option<f64>,
    pub criterion: Option<u8>,
}

macro_rules! overlay {
    ($base:ident, $top:ident; $($f:ident),*) => {
        $( if $top.$f.is_some() { $base.$f = $top.$f.clone(); } )*
    };
}

impl PartialConfig {
    pub fn overlay(mut self, top: &PartialConfig) -> PartialConfig {
        overlay!(self, top; command, input, monodromy, lambda_start, lambda_stop, lambda_steps, lambda_imag, theta,
            truncation, sigma, out, format, seed, samples, family, closed_form, fried, tolerance, criterion);
        self
    }

    pub fn resolve(self) -> Result<RunConfig, CliError> {
        let command = self.command.ok_or_else(|| CliError::Parse("no command given".into()))?;
        let grid = LambdaGrid {
            start: self.lambda_start.unwrap_or(2.0),
            stop: self.lambda_stop.unwrap_or(5.0),
            steps: self.lambda_steps.unwrap_or(7),
            imag: self.lambda_imag.unwrap_or(0.0),
        };
        if grid.steps == 0 {
            return Err(CliError::Parse("lambda grid is empty".into()));
        }
        let tolerance = self.tolerance.unwrap_or(1e-9);
        if !(tolerance > 0.0) {
            return Err(CliError::Parse(format!("tolerance must be positive, got {tolerance}")));
        }
        let samples = self.samples.unwrap_or(10);
        if samples < 2 {
            return Err(CliError::Parse("a scan needs at least 2 samples".into()));
        }
        let convention = TorsionConvention::from_sigma(self.sigma.unwrap_or(1)).map_err(|e| CliError::Parse(e.to_string()))?;
        Ok(RunConfig {
            command,
            input: self.input,
            monodromy: self.monodromy.unwrap_or([[2, 1], [1, 1]]),
            grid,
            theta: self.theta.unwrap_or(std::f64::consts::PI),
            truncation: self.truncation.unwrap_or(40),
            convention,
            out: self.out,
            format: self.format.unwrap_or(Format::Csv),
            seed: self.seed.unwrap_or(DEFAULT_SEED),
            samples,
            family: self.family.unwrap_or(Family::Random),
            closed_form: self.closed_form.unwrap_or(false),
            fried: self.fried.unwrap_or(false),
            tolerance,
            criterion: self.criterion,
        })
    }
}

pub fn parse_command(s: &str) -> Result<CommandKind, String> {
    match s {
        "torsion" => Ok(CommandKind::Torsion),
        "bf" => Ok(CommandKind::Bf),
        "zeta" => Ok(CommandKind::Zeta),
        "orbits" => Ok(CommandKind::Orbits),
        "verify" => Ok(CommandKind::Verify),
        _ => Err(format!("unknown command `{s}`")),
    }
}

pub fn parse_format(s: &str) -> Result<Format, String> {
    match s {
        "csv" => Ok(Format::Csv),
        "json" => Ok(Format::Json),
        _ => Err(format!("unknown format `{s}` (csv or json)")),
    }
}

pub fn parse_family(s: &str) -> Result<Family, String> {
    match s {
        "constant" => Ok(Family::Constant),
        "random" => Ok(Family::Random),
        "degenerate" => Ok(Family::Degenerate),
        _ => Err(format!("unknown family `{s}` (constant, random or degenerate)")),
    }
}

pub fn parse_sigma(s: &str) -> Result<i32, String> {
    match s.trim() {
        "+1" | "1" => Ok(1),
        "-1" => Ok(-1),
        _ => Err(format!("sigma must be +1 or -1, got `{s}`")),
    }
}

/// `a,b,c,d` for the matrix `[[a, b], [c, d]]`.
pub fn parse_monodromy(s: &str) -> Result<[[i64; 2]; 2], String> {
    let v: Vec<i64> = s
        .split(',')
        .map(|t| t.trim().parse::<i64>().map_err(|e| format!("`{t}`: {e}")))
        .collect::<Result<_, _>>()?;
    match v.as_slice() {
        &[a, b, c, d] => Ok([[a, b], [c, d]]),
        _ => Err(format!("monodromy needs 4 integers, got {}", v.len())),
    }
}

/// A real number, or a multiple of π such as `pi`, `pi/2`, `2pi/3`, `-pi/4`.
pub fn parse_angle(s: &str) -> Result<f64, String> {
    let t = s.trim();
    if let Ok(x) = t.parse::<f64>() {
        return Ok(x);
    }
    let err = || format!("cannot read angle `{s}`");
    let (num, den) = match t.split_once('/') {
        Some((n, d)) => (n.trim(), d.trim().parse::<f64>().map_err(|_| err())?),
        None => (t, 1.0),
    };
    let coeff = num.strip_suffix("pi").ok_or_else(err)?.trim().trim_end_matches('*');
    let coeff = match coeff {
        "" | "+" => 1.0,
        "-" => -1.0,
        c => c.parse::<f64>().map_err(|_| err())?,
    };
    Ok(coeff * std::f64::consts::PI / den)
}

fn parse_bool(s: &str) -> Result<bool, String> {
    match s {
        "true" | "yes" | "1" => Ok(true),
        "false" | "no" | "0" => Ok(false),
        _ => Err(format!("expected true or false, got `{s}`")),
    }
}

fn num<T: std::str::FromStr>(s: &str) -> Result<T, String>
where
    T::Err: std::fmt::Display,
{
    s.parse::<T>().map_err(|e| format!("`{s}`: {e}"))
}

/// `key = value` lines; `#` starts a comment. Keys use the flag names with `-` or `_`.
pub fn read_config(text: &str) -> Result<PartialConfig, CliError> {
    let mut cfg = PartialConfig::default();
    for (idx, raw) in text.lines().enumerate() {
        let line = idx + 1;
        let body = raw.split('#').next().unwrap_or("").trim();
        if body.is_empty() {
            continue;
        }
        let (key, value) = body
            .split_once('=')
            .ok_or_else(|| CliError::ParseAt { line, message: "expected `key = value`".into() })?;
        let (key, value) = (key.trim().replace('-', "_"), value.trim());
        let set = |cfg: &mut PartialConfig| -> Result<(), String> {
            match key.as_str() {
                "command" => cfg.command = Some(parse_command(value)?),
                "input" => cfg.input = Some(PathBuf::from(value)),
                "monodromy" => cfg.monodromy = Some(parse_monodromy(value)?),
                "lambda_start" => cfg.lambda_start = Some(num(value)?),
                "lambda_stop" => cfg.lambda_stop = Some(num(value)?),
                "lambda_steps" => cfg.lambda_steps = Some(num(value)?),
                "lambda_imag" => cfg.lambda_imag = Some(num(value)?),
                "theta" => cfg.theta = Some(parse_angle(value)?),
                "J" | "j" => cfg.truncation = Some(num(value)?),
                "sigma" => cfg.sigma = Some(parse_sigma(value)?),
                "out" => cfg.out = Some(PathBuf::from(value)),
                "format" => cfg.format = Some(parse_format(value)?),
                "seed" => cfg.seed = Some(num(value)?),
                "samples" => cfg.samples = Some(num(value)?),
                "family" => cfg.family = Some(parse_family(value)?),
                "closed_form" => cfg.closed_form = Some(parse_bool(value)?),
                "fried" => cfg.fried = Some(parse_bool(value)?),
                "tol" | "tolerance" => cfg.tolerance = Some(num(value)?),
                "criterion" => cfg.criterion = Some(num(value)?),
                other => return Err(format!("unknown key `{other}`")),
            }
            Ok(())
        };
        set(&mut cfg).map_err(|message| CliError::ParseAt { line, message })?;
    }
    Ok(cfg)
}

pub fn load_config(path: &Path) -> Result<PartialConfig, CliError> {
    let text = std::fs::read_to_string(path).map_err(|e| CliError::Io(format!("{}: {e}", path.display())))?;
    read_config(&text).map_err(|e| match e {
        CliError::ParseAt { line, message } => CliError::Parse(format!("{}:{line}: {message}", path.display())),
        other => other,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    #[test]
    fn angles() {
        assert_eq!(parse_angle("pi").unwrap(), PI);
        assert_eq!(parse_angle("pi/2").unwrap(), PI / 2.0);
        assert_eq!(parse_angle("2pi/3").unwrap(), 2.0 * PI / 3.0);
        assert_eq!(parse_angle("-pi/4").unwrap(), -PI / 4.0);
        assert_eq!(parse_angle("1.5").unwrap(), 1.5);
        assert!(parse_angle("tau").is_err());
    }

    #[test]
    fn config_file_and_overrides() {
        let text = "# zeta grid\ncommand = zeta\nlambda-start = 3\nlambda_steps = 4\ntheta = pi/2\nJ = 30\nsigma = -1\n";
        let file = read_config(text).unwrap();
        let flags = PartialConfig { lambda_steps: Some(2), ..PartialConfig::default() };
        let cfg = file.overlay(&flags).resolve().unwrap();
        assert_eq!(cfg.command, CommandKind::Zeta);
        assert_eq!(cfg.grid.points(), vec![(3.0, 0.0), (5.0, 0.0)]);
        assert_eq!(cfg.theta, PI / 2.0);
        assert_eq!(cfg.truncation, 30);
        assert_eq!(cfg.convention, TorsionConvention::Reciprocal);
    }

    #[test]
    fn config_errors_carry_lines() {
        assert_eq!(
            read_config("command = zeta\nbogus = 1\n").unwrap_err(),
            CliError::ParseAt { line: 2, message: "unknown key `bogus`".into() }
        );
        assert!(matches!(read_config("theta\n").unwrap_err(), CliError::ParseAt { line: 1, .. }));
        let empty = PartialConfig { command: Some(CommandKind::Zeta), lambda_steps: Some(0), ..Default::default() };
        assert!(matches!(empty.resolve(), Err(CliError::Parse(_))));
        let neg = PartialConfig { command: Some(CommandKind::Zeta), tolerance: Some(-1.0), ..Default::default() };
        assert!(neg.resolve().is_err());
    }

    #[test]
    fn monodromy_and_sigma() {
        assert_eq!(parse_monodromy("2, 1, 1, 1").unwrap(), [[2, 1], [1, 1]]);
        assert!(parse_monodromy("2,1,1").is_err());
        assert_eq!(parse_sigma("+1").unwrap(), 1);
        assert_eq!(parse_sigma("-1").unwrap(), -1);
        assert!(parse_sigma("2").is_err());
    }
}
