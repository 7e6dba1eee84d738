//! Run configuration: one flag set shared by all subcommands, mirrored
//! exactly by `key = value` config files.

use std::fmt;
use std::path::PathBuf;
use std::str::FromStr;

use clap::{Args, Parser, ValueEnum};
use sha2::{Digest, Sha256};
use smoothsum::asymptotic::TestFunction;
use smoothsum::verify::Level;
use smoothsum::Complex64;

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum FSpec {
    Gaussian { mu: f64, sigma: f64 },
    /// `f = 1`, accepted by `brute` only.
    Constant,
}

impl FSpec {
    pub fn build(&self, eta: Option<f64>) -> smoothsum::Result<TestFunction> {
        let f = match *self {
            FSpec::Gaussian { mu, sigma } => TestFunction::gaussian(mu, sigma)?,
            FSpec::Constant => return Ok(TestFunction::constant_for_tests()),
        };
        match eta {
            Some(e) => f.with_eta(e),
            None => Ok(f),
        }
    }
}

impl FromStr for FSpec {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, String> {
        if s == "constant" {
            return Ok(FSpec::Constant);
        }
        let Some(rest) = s.strip_prefix("gaussian:") else {
            return Err(format!("expected gaussian:MU,SIGMA or constant, got {s:?}"));
        };
        let v = parse_floats(rest, 2)?;
        Ok(FSpec::Gaussian { mu: v[0], sigma: v[1] })
    }
}

impl fmt::Display for FSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            FSpec::Gaussian { mu, sigma } => write!(f, "gaussian:{mu},{sigma}"),
            FSpec::Constant => f.write_str("constant"),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TauGrid {
    pub min: f64,
    pub max: f64,
    pub step: f64,
}

impl TauGrid {
    pub fn points(&self) -> Vec<f64> {
        let n = ((self.max - self.min) / self.step + 1e-9).floor() as usize;
        (0..=n).map(|i| self.min + i as f64 * self.step).collect()
    }
}

impl FromStr for TauGrid {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, String> {
        let v = parse_floats(s, 3)?;
        Ok(TauGrid { min: v[0], max: v[1], step: v[2] })
    }
}

impl fmt::Display for TauGrid {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{},{},{}", self.min, self.max, self.step)
    }
}

fn parse_floats(s: &str, n: usize) -> Result<Vec<f64>, String> {
    let v: Vec<f64> = s
        .split(',')
        .map(|p| p.trim().parse::<f64>().map_err(|e| format!("{p:?}: {e}")))
        .collect::<Result<_, _>>()?;
    if v.len() != n {
        return Err(format!("expected {n} comma-separated numbers, got {s:?}"));
    }
    Ok(v)
}

pub fn parse_complex(s: &str) -> Result<Complex64, String> {
    let v = parse_floats(s, 2)?;
    Ok(Complex64::new(v[0], v[1]))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum DickmanKind {
    Rho,
    RhoHat,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Csv,
    Json,
}

#[derive(Debug, Clone, PartialEq, Args)]
pub struct RunConfig {
    /// Exponent alpha as RE,IM
    #[arg(long, value_parser = parse_complex, allow_hyphen_values = true, default_value = "1,0")]
    pub alpha: Complex64,
    /// k-free parameter (k >= 2)
    #[arg(long, default_value_t = 2)]
    pub k: u32,
    /// Prime bounds, comma separated
    #[arg(long = "N", action = clap::ArgAction::Set, value_delimiter = ',', default_value = "1000", required = false)]
    pub n: Vec<u64>,
    /// Test function: gaussian:MU,SIGMA (or constant, brute only)
    #[arg(long = "f", default_value = "gaussian:1,0.4", allow_hyphen_values = true)]
    pub f: FSpec,
    /// Decay exponent of the test function transform (default 8)
    #[arg(long)]
    pub eta: Option<f64>,
    /// Absolute quadrature tolerance
    #[arg(long, default_value_t = 1e-10)]
    pub tol: f64,
    /// Exponent offset in L_epsilon(N) = exp((log N)^(3/5 - epsilon))
    #[arg(long, default_value_t = 0.1)]
    pub epsilon: f64,
    /// Grid of tau values as MIN,MAX,STEP
    #[arg(long, allow_hyphen_values = true, default_value = "-3,3,0.05")]
    pub tau: TauGrid,
    /// Real part of s in zeta-table and products-table
    #[arg(long, default_value_t = 1.0, allow_hyphen_values = true)]
    pub sigma: f64,
    /// Enumeration limit in u = log n / log N (default from the test function)
    #[arg(long = "u-cutoff")]
    pub u_cutoff: Option<f64>,
    /// Maximum number of integers enumerated by brute
    #[arg(long = "count-cap", default_value_t = smoothsum::arith::DEFAULT_COUNT_CAP)]
    pub count_cap: u64,
    /// Upper end of the rho table
    #[arg(long = "u-max", default_value_t = 10.0)]
    pub u_max: f64,
    /// Half-width of the rho_hat table
    #[arg(long = "x-max", default_value_t = 20.0)]
    pub x_max: f64,
    /// Grid step of dickman-table
    #[arg(long, default_value_t = 0.25)]
    pub step: f64,
    /// Which dickman-table to write
    #[arg(long, value_enum, default_value_t = DickmanKind::Rho)]
    pub table: DickmanKind,
    /// Smallest N accepted by cfactor
    #[arg(long = "n-floor", default_value_t = smoothsum::asymptotic::DEFAULT_N_FLOOR)]
    pub n_floor: u64,
    /// Worker threads; 0 uses all cores. Results do not depend on it.
    #[arg(long, default_value_t = 1)]
    pub threads: usize,
    #[arg(long, value_enum, default_value_t = Format::Csv)]
    pub format: Format,
    /// Output file (default stdout)
    #[arg(long)]
    pub out: Option<PathBuf>,
    /// Parameter set of verify-all: quick or desk
    #[arg(long, default_value = "desk")]
    pub level: Level,
}

impl Default for RunConfig {
    fn default() -> Self {
        Holder::try_parse_from(["x"]).expect("defaults parse").run
    }
}

#[derive(Parser)]
#[command(args_override_self = true)]
struct Holder {
    #[command(flatten)]
    run: RunConfig,
}

fn value_name(f: Format) -> &'static str {
    match f {
        Format::Csv => "csv",
        Format::Json => "json",
    }
}

impl RunConfig {
    /// Every field as `key = value`, in flag order; parses back to `self`.
    pub fn to_config_text(&self) -> String {
        let ns: Vec<String> = self.n.iter().map(|n| n.to_string()).collect();
        let mut lines = vec![
            format!("alpha = {},{}", self.alpha.re, self.alpha.im),
            format!("k = {}", self.k),
            format!("N = {}", ns.join(",")),
            format!("f = {}", self.f),
        ];
        if let Some(e) = self.eta {
            lines.push(format!("eta = {e}"));
        }
        lines.push(format!("tol = {}", self.tol));
        lines.push(format!("epsilon = {}", self.epsilon));
        lines.push(format!("tau = {}", self.tau));
        lines.push(format!("sigma = {}", self.sigma));
        if let Some(u) = self.u_cutoff {
            lines.push(format!("u-cutoff = {u}"));
        }
        lines.push(format!("count-cap = {}", self.count_cap));
        lines.push(format!("u-max = {}", self.u_max));
        lines.push(format!("x-max = {}", self.x_max));
        lines.push(format!("step = {}", self.step));
        lines.push(format!(
            "table = {}",
            match self.table {
                DickmanKind::Rho => "rho",
                DickmanKind::RhoHat => "rho-hat",
            }
        ));
        lines.push(format!("n-floor = {}", self.n_floor));
        lines.push(format!("threads = {}", self.threads));
        lines.push(format!("format = {}", value_name(self.format)));
        if let Some(p) = &self.out {
            lines.push(format!("out = {}", p.display()));
        }
        lines.push(format!("level = {}", self.level));
        let mut text = lines.join("\n");
        text.push('\n');
        text
    }

    pub fn from_config_text(text: &str) -> Result<Self, String> {
        let mut argv = vec!["x".to_string()];
        argv.extend(config_args(text)?);
        Holder::try_parse_from(argv).map(|h| h.run).map_err(|e| e.to_string())
    }

    /// Hex SHA-256 of the command name and the canonical config text.
    pub fn hash(&self, command: &str) -> String {
        let mut h = Sha256::new();
        h.update(command.as_bytes());
        h.update(b"\n");
        h.update(self.to_config_text().as_bytes());
        hex::encode(h.finalize())
    }
}

/// `key = value` lines as `--key=value` arguments. Blank lines and lines
/// starting with `#` are skipped.
pub fn config_args(text: &str) -> Result<Vec<String>, String> {
    let mut out = Vec::new();
    for (i, line) in text.lines().enumerate() {
        let line = line.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let Some((key, value)) = line.split_once('=') else {
            return Err(format!("config line {}: expected key = value, got {line:?}", i + 1));
        };
        let key = key.trim();
        if key.is_empty() || key.starts_with('-') || key == "config" {
            return Err(format!("config line {}: invalid key {key:?}", i + 1));
        }
        out.push(format!("--{key}={}", value.trim()));
    }
    Ok(out)
}

/// Replaces `--config FILE` (or `--config=FILE`) by the file's arguments,
/// placed right after the subcommand so that later flags override them.
pub fn expand_config(argv: Vec<String>) -> Result<Vec<String>, String> {
    let mut path = None;
    let mut rest = Vec::with_capacity(argv.len());
    let mut it = argv.into_iter();
    while let Some(a) = it.next() {
        if a == "--config" {
            path = Some(it.next().ok_or("--config needs a file")?);
        } else if let Some(p) = a.strip_prefix("--config=") {
            path = Some(p.to_string());
        } else {
            rest.push(a);
        }
    }
    let Some(path) = path else {
        return Ok(rest);
    };
    let text = std::fs::read_to_string(&path).map_err(|e| format!("cannot read config {path}: {e}"))?;
    let injected = config_args(&text)?;
    // rest[0] is the program, rest[1] the subcommand
    let at = rest.len().min(2);
    rest.splice(at..at, injected);
    Ok(rest)
}
