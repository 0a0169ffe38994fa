use std::collections::BTreeMap;
use std::fs;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};
use confined2d::{MeasureSpec, QuantumState};

use crate::CliError;

#[derive(Debug, Parser)]
#[command(name = "confined2d", version, about = "Energies and information measures of the confined 2D hydrogen atom")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
    #[command(flatten)]
    pub args: CommonArgs,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Subcommand)]
pub enum Command {
    /// Optimized energies against the reference table, one row per (r0, state)
    Table1,
    /// Every measure on an r0 grid
    Sweep,
    /// Radius where the position and momentum Shannon entropies cross
    Crossover,
    /// Radius where the 2s and 3d energies cross
    Inversion,
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, ValueEnum)]
pub enum Format {
    #[default]
    Csv,
    Json,
}

#[derive(Debug, Clone, Default, Args)]
pub struct CommonArgs {
    /// Comma-separated state labels out of 1s, 2s, 2p, 3d
    #[arg(long, global = true)]
    pub states: Option<String>,
    /// Radii for sweep, as a comma list or a `min:max:count` log-spaced spec
    #[arg(long = "r0-grid", global = true)]
    pub r0_grid: Option<String>,
    /// Lower Rényi order of the LMC-Rényi complexity
    #[arg(long, global = true, allow_negative_numbers = true)]
    pub lambda: Option<f64>,
    /// Upper Rényi order of the LMC-Rényi complexity
    #[arg(long, global = true, allow_negative_numbers = true)]
    pub beta: Option<f64>,
    /// Search bracket `lo:hi` for crossover and inversion
    #[arg(long, global = true)]
    pub bracket: Option<String>,
    /// Output file (stdout when absent); sweep plots are written next to it
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,
    #[arg(long, value_enum, global = true)]
    pub format: Option<Format>,
    /// Write SVG plots of the sweep
    #[arg(long, global = true, overrides_with = "no_plot")]
    pub plot: bool,
    #[arg(long = "no-plot", global = true, overrides_with = "plot")]
    pub no_plot: bool,
    /// Worker threads
    #[arg(long, global = true)]
    pub jobs: Option<usize>,
    /// Exit with status 2 when a sweep row violates a bound
    #[arg(long, global = true)]
    pub strict: bool,
    /// table1: relative energy tolerance; sweep: momentum quadrature tolerance;
    /// crossover and inversion: bracket width
    #[arg(long, global = true, allow_negative_numbers = true)]
    pub tol: Option<f64>,
    /// Flat `key = value` file with defaults for any of the flags above
    #[arg(long, global = true)]
    pub config: Option<PathBuf>,
}

const KEYS: [&str; 11] = [
    "states", "r0-grid", "lambda", "beta", "bracket", "out", "format", "plot", "jobs", "strict", "tol",
];

/// Resolved options shared by every subcommand.
#[derive(Debug, Clone, PartialEq)]
pub struct Settings {
    pub states: Vec<QuantumState>,
    /// `None` selects the command's default grid.
    pub radii: Option<Vec<f64>>,
    pub spec: MeasureSpec,
    pub bracket: Option<(f64, f64)>,
    pub out: Option<PathBuf>,
    pub format: Format,
    /// `None` plots exactly when an output file is given.
    pub plot: Option<bool>,
    pub jobs: Option<usize>,
    pub strict: bool,
    pub tol: Option<f64>,
}

impl Default for Settings {
    fn default() -> Self {
        Self {
            states: QuantumState::STUDIED.to_vec(),
            radii: None,
            spec: MeasureSpec::default(),
            bracket: None,
            out: None,
            format: Format::Csv,
            plot: None,
            jobs: None,
            strict: false,
            tol: None,
        }
    }
}

impl Settings {
    /// Config file values first, then command-line flags on top.
    pub fn resolve(args: &CommonArgs) -> Result<Self, CliError> {
        let mut raw = match &args.config {
            Some(path) => read_config(path)?,
            None => BTreeMap::new(),
        };
        let mut set = |key: &str, value: Option<String>| {
            if let Some(v) = value {
                raw.insert(key.to_string(), v);
            }
        };
        set("states", args.states.clone());
        set("r0-grid", args.r0_grid.clone());
        set("lambda", args.lambda.map(|x| x.to_string()));
        set("beta", args.beta.map(|x| x.to_string()));
        set("bracket", args.bracket.clone());
        set("out", args.out.as_ref().map(|p| p.display().to_string()));
        set("format", args.format.map(|f| format!("{f:?}").to_lowercase()));
        set("plot", (args.plot || args.no_plot).then(|| args.plot.to_string()));
        set("jobs", args.jobs.map(|j| j.to_string()));
        set("strict", args.strict.then(|| "true".to_string()));
        set("tol", args.tol.map(|x| x.to_string()));
        Self::from_map(&raw)
    }

    pub fn from_map(raw: &BTreeMap<String, String>) -> Result<Self, CliError> {
        let mut s = Settings::default();
        for (key, value) in raw {
            let value = value.trim();
            match key.as_str() {
                "states" => s.states = parse_states(value)?,
                "r0-grid" => s.radii = Some(parse_grid(value)?),
                "lambda" => s.spec.renyi_lambda = parse_num(key, value)?,
                "beta" => s.spec.renyi_beta = parse_num(key, value)?,
                "bracket" => s.bracket = Some(parse_bracket(value)?),
                "out" => s.out = Some(PathBuf::from(value)),
                "format" => {
                    s.format = Format::from_str(value, true).map_err(|_| config(format!("unknown format {value:?}")))?
                }
                "plot" => s.plot = Some(parse_bool(key, value)?),
                "jobs" => {
                    let jobs: usize = value.parse().map_err(|_| config(format!("jobs: {value:?} is not a count")))?;
                    if jobs == 0 {
                        return Err(config("jobs must be at least 1"));
                    }
                    s.jobs = Some(jobs);
                }
                "strict" => s.strict = parse_bool(key, value)?,
                "tol" => {
                    let tol = parse_num(key, value)?;
                    if !(tol > 0.0 && tol.is_finite()) {
                        return Err(config(format!("tol must be positive, got {value}")));
                    }
                    s.tol = Some(tol);
                }
                _ => return Err(config(format!("unknown key {key:?}"))),
            }
        }
        s.spec.validate().map_err(|e| config(e.to_string()))?;
        Ok(s)
    }
}

fn config(msg: impl Into<String>) -> CliError {
    CliError::Config(msg.into())
}

pub fn read_config(path: &Path) -> Result<BTreeMap<String, String>, CliError> {
    let text = fs::read_to_string(path).map_err(|e| config(format!("{}: {e}", path.display())))?;
    parse_config(&text)
}

/// `key = value` lines; `#` starts a comment. Keys match the long flag names.
pub fn parse_config(text: &str) -> Result<BTreeMap<String, String>, CliError> {
    let mut map = BTreeMap::new();
    for (i, line) in text.lines().enumerate() {
        let line = line.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let (key, value) = line
            .split_once('=')
            .ok_or_else(|| config(format!("line {}: expected key = value", i + 1)))?;
        let key = key.trim().trim_start_matches("--").replace('_', "-");
        if !KEYS.contains(&key.as_str()) {
            return Err(config(format!("line {}: unknown key {key:?}", i + 1)));
        }
        map.insert(key, value.trim().to_string());
    }
    Ok(map)
}

fn parse_num(key: &str, value: &str) -> Result<f64, CliError> {
    value
        .parse()
        .ok()
        .filter(|x: &f64| x.is_finite())
        .ok_or_else(|| config(format!("{key}: {value:?} is not a number")))
}

fn parse_bool(key: &str, value: &str) -> Result<bool, CliError> {
    match value.to_ascii_lowercase().as_str() {
        "true" | "yes" | "1" | "on" => Ok(true),
        "false" | "no" | "0" | "off" => Ok(false),
        _ => Err(config(format!("{key}: {value:?} is not a boolean"))),
    }
}

pub fn parse_states(value: &str) -> Result<Vec<QuantumState>, CliError> {
    let mut states = Vec::new();
    for label in value.split(',').map(str::trim).filter(|s| !s.is_empty()) {
        let state: QuantumState = label.parse().map_err(|e: confined2d::Error| config(e.to_string()))?;
        if !QuantumState::STUDIED.contains(&state) {
            return Err(config(format!("state {label} is not one of 1s, 2s, 2p, 3d")));
        }
        if !states.contains(&state) {
            states.push(state);
        }
    }
    if states.is_empty() {
        return Err(config("no states given"));
    }
    states.sort();
    Ok(states)
}

/// `a,b,c` (strictly increasing) or `min:max:count` log-spaced.
pub fn parse_grid(value: &str) -> Result<Vec<f64>, CliError> {
    let radii = if value.contains(':') {
        let parts: Vec<&str> = value.split(':').map(str::trim).collect();
        let [lo, hi, count] = parts[..] else {
            return Err(config(format!("r0-grid: expected min:max:count, got {value:?}")));
        };
        let (lo, hi) = (parse_num("r0-grid", lo)?, parse_num("r0-grid", hi)?);
        let count: usize = count
            .parse()
            .map_err(|_| config(format!("r0-grid: {count:?} is not a count")))?;
        if count < 2 || !(lo > 0.0 && hi > lo) {
            return Err(config(format!("r0-grid: need 0 < min < max and count >= 2, got {value:?}")));
        }
        let ratio = (hi / lo).ln();
        (0..count)
            .map(|k| match k {
                0 => lo,
                k if k == count - 1 => hi,
                k => lo * (ratio * k as f64 / (count - 1) as f64).exp(),
            })
            .collect()
    } else {
        value
            .split(',')
            .map(str::trim)
            .filter(|s| !s.is_empty())
            .map(|s| parse_num("r0-grid", s))
            .collect::<Result<Vec<f64>, _>>()?
    };
    if radii.is_empty() {
        return Err(config("r0-grid is empty"));
    }
    if radii[0] <= 0.0 || radii.windows(2).any(|w| w[1] <= w[0]) {
        return Err(config(format!("r0-grid must be positive and strictly increasing, got {value:?}")));
    }
    Ok(radii)
}

pub fn parse_bracket(value: &str) -> Result<(f64, f64), CliError> {
    let (lo, hi) = value
        .split_once(':')
        .or_else(|| value.split_once(','))
        .ok_or_else(|| config(format!("bracket: expected lo:hi, got {value:?}")))?;
    let (lo, hi) = (parse_num("bracket", lo.trim())?, parse_num("bracket", hi.trim())?);
    if !(lo > 0.0 && hi > lo) {
        return Err(config(format!("bracket: need 0 < lo < hi, got {value:?}")));
    }
    Ok((lo, hi))
}
