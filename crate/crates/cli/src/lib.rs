//! Subcommands of the `confined2d` binary, usable as a library.

pub mod config;
pub mod output;
pub mod plot;

use std::fs;
use std::path::{Path, PathBuf};

use confined2d::analysis::{
    self, default_sweep_radii, reference_table, Crossing, EnergyComparison, CROSSOVER_BRACKET, CROSSOVER_TOL,
    INVERSION_BRACKET, INVERSION_TOL,
};
use confined2d::{AnalysisOptions, MeasureRecord, QuantumState, Result as CoreResult};
use thiserror::Error;

pub use config::{Cli, Command, CommonArgs, Format, Settings};
use output::{CrossingRow, Table1Row};
use plot::Series;

/// Default relative energy tolerance of `table1`.
pub const TABLE1_TOL: f64 = 5e-3;

/// Radius the default sweep grid extends to.
pub const SWEEP_END: f64 = 30.0;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("configuration error: {0}")]
    Config(String),
    #[error(transparent)]
    Io(#[from] std::io::Error),
    #[error(transparent)]
    Csv(#[from] csv::Error),
    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
pub enum Status {
    Success = 0,
    Violation = 2,
    Config = 3,
    Numerical = 4,
}

impl Status {
    pub fn code(self) -> i32 {
        self as i32
    }
}

impl From<&CliError> for Status {
    fn from(e: &CliError) -> Self {
        match e {
            CliError::Config(_) | CliError::Io(_) => Status::Config,
            CliError::Csv(_) | CliError::Json(_) => Status::Numerical,
        }
    }
}

fn analysis_options(settings: &Settings) -> AnalysisOptions {
    let mut options = AnalysisOptions {
        spec: settings.spec,
        ..AnalysisOptions::default()
    };
    if let Some(tol) = settings.tol {
        options.momentum.rel_tol = tol;
    }
    options
}

/// Energies of the requested states at every reference radius.
pub fn cmd_table1(settings: &Settings) -> Vec<EnergyComparison> {
    reference_table(&Default::default())
        .into_iter()
        .filter(|c| settings.states.contains(&c.state))
        .collect()
}

pub fn table1_status(rows: &[Table1Row]) -> Status {
    if rows.iter().any(|r| r.status == "failed") {
        Status::Numerical
    } else if rows.iter().any(|r| r.status == "deviation") {
        Status::Violation
    } else {
        Status::Success
    }
}

pub fn sweep_radii(settings: &Settings) -> Vec<f64> {
    settings.radii.clone().unwrap_or_else(|| default_sweep_radii(SWEEP_END))
}

/// One record per `(state, r₀)`, ordered by state, then radius.
pub fn cmd_sweep(settings: &Settings) -> Vec<MeasureRecord> {
    analysis::sweep(&settings.states, &sweep_radii(settings), &analysis_options(settings))
}

pub fn sweep_status(records: &[MeasureRecord], strict: bool) -> Status {
    if records.iter().any(|r| r.values.is_none()) {
        Status::Numerical
    } else if strict && records.iter().any(MeasureRecord::has_violation) {
        Status::Violation
    } else {
        Status::Success
    }
}

/// Entropic cross-over of each requested state.
pub fn cmd_crossover(settings: &Settings) -> Vec<(QuantumState, CoreResult<Crossing>)> {
    // --tol is the bracket width here, not the quadrature tolerance
    let options = AnalysisOptions {
        spec: settings.spec,
        ..AnalysisOptions::default()
    };
    let bracket = settings.bracket.unwrap_or(CROSSOVER_BRACKET);
    let tol = settings.tol.unwrap_or(CROSSOVER_TOL);
    settings
        .states
        .iter()
        .map(|&s| (s, analysis::crossover(s, bracket, tol, &options)))
        .collect()
}

/// 2s/3d energy crossing.
pub fn cmd_inversion(settings: &Settings) -> CoreResult<Crossing> {
    let bracket = settings.bracket.unwrap_or(INVERSION_BRACKET);
    let tol = settings.tol.unwrap_or(INVERSION_TOL);
    analysis::inversion(bracket, tol, &Default::default())
}

fn emit(settings: &Settings, body: &str) -> Result<(), CliError> {
    match &settings.out {
        Some(path) => fs::write(path, body)?,
        None => print!("{body}"),
    }
    Ok(())
}

const PLOTTED: [(&str, &str); 12] = [
    ("energy", "E"),
    ("S_pos", "S_pos"),
    ("S_mom", "S_mom"),
    ("S_sum", "S_pos + S_mom"),
    ("F_pos", "F_pos"),
    ("F_mom", "F_mom"),
    ("C_FS_pos", "C_FS position"),
    ("C_FS_mom", "C_FS momentum"),
    ("C_LMC_pos", "C_LMC position"),
    ("C_LMC_mom", "C_LMC momentum"),
    ("C_LR_pos", "C_LR position"),
    ("C_LR_mom", "C_LR momentum"),
];

fn plotted_value(v: &confined2d::RecordValues, key: &str) -> f64 {
    match key {
        "energy" => v.energy,
        "S_pos" => v.s_pos,
        "S_mom" => v.s_mom,
        "S_sum" => v.s_sum,
        "F_pos" => v.f_pos,
        "F_mom" => v.f_mom,
        "C_FS_pos" => v.c_fs_pos,
        "C_FS_mom" => v.c_fs_mom,
        "C_LMC_pos" => v.c_lmc_pos,
        "C_LMC_mom" => v.c_lmc_mom,
        "C_LR_pos" => v.c_lr_pos,
        "C_LR_mom" => v.c_lr_mom,
        _ => unreachable!("unknown plot key {key}"),
    }
}

/// One chart per measure with a series per state, written as `<stem>_<measure>.svg`.
pub fn write_plots(records: &[MeasureRecord], dir: &Path, stem: &str) -> Result<Vec<PathBuf>, CliError> {
    let mut states: Vec<QuantumState> = records.iter().map(|r| r.state).collect();
    states.dedup();
    let mut written = Vec::new();
    for (key, title) in PLOTTED {
        let series: Vec<Series> = states
            .iter()
            .map(|&s| Series {
                name: s.label(),
                points: records
                    .iter()
                    .filter(|r| r.state == s)
                    .filter_map(|r| r.values.as_ref().map(|v| (r.r0, plotted_value(v, key))))
                    .collect(),
            })
            .collect();
        let path = dir.join(format!("{stem}_{key}.svg"));
        fs::write(&path, plot::line_chart(title, "r0 (bohr)", key, &series))?;
        written.push(path);
    }
    Ok(written)
}

fn run_command(command: Command, settings: &Settings) -> Result<Status, CliError> {
    match command {
        Command::Table1 => {
            let tol = settings.tol.unwrap_or(TABLE1_TOL);
            let rows: Vec<Table1Row> = cmd_table1(settings).iter().map(|c| Table1Row::new(c, tol)).collect();
            emit(settings, &output::render(&rows, settings.format)?)?;
            let bad = rows.iter().filter(|r| r.status != "ok").count();
            eprintln!("table1: {} rows, {bad} outside tolerance", rows.len());
            Ok(table1_status(&rows))
        }
        Command::Sweep => {
            let records = cmd_sweep(settings);
            emit(settings, &output::render_sweep(&records, settings.format)?)?;
            for r in &records {
                if let Some(e) = &r.error {
                    eprintln!("{} at r0 = {}: {e}", r.state, r.r0);
                }
            }
            if settings.plot.unwrap_or(settings.out.is_some()) {
                let (dir, stem) = match &settings.out {
                    Some(p) => (
                        p.parent().map(Path::to_path_buf).unwrap_or_default(),
                        p.file_stem().map(|s| s.to_string_lossy().into_owned()).unwrap_or("sweep".into()),
                    ),
                    None => (PathBuf::new(), "sweep".into()),
                };
                let dir = if dir.as_os_str().is_empty() { PathBuf::from(".") } else { dir };
                write_plots(&records, &dir, &stem)?;
            }
            Ok(sweep_status(&records, settings.strict))
        }
        Command::Crossover => {
            let results = cmd_crossover(settings);
            let rows: Vec<CrossingRow> = results.iter().map(|(s, r)| CrossingRow::for_state(*s, r)).collect();
            emit(settings, &output::render(&rows, settings.format)?)?;
            let mut status = Status::Success;
            for (s, r) in &results {
                match r {
                    Ok(c) => eprintln!("{s}: r_c = {}", c.estimate),
                    Err(e @ confined2d::Error::NoSignChange { .. }) => eprintln!("{s}: no crossing ({e})"),
                    Err(e) => {
                        eprintln!("{s}: {e}");
                        status = Status::Numerical;
                    }
                }
            }
            Ok(status)
        }
        Command::Inversion => {
            let result = cmd_inversion(settings);
            let row = CrossingRow::new("2s-3d".into(), &result);
            emit(settings, &output::render(&[row], settings.format)?)?;
            match result {
                Ok(c) => {
                    eprintln!("r0* = {}", c.estimate);
                    Ok(Status::Success)
                }
                Err(e) => {
                    eprintln!("{e}");
                    Ok(Status::Numerical)
                }
            }
        }
    }
}

/// Runs a parsed command line and returns the process exit status.
pub fn run(cli: &Cli) -> Status {
    let settings = match Settings::resolve(&cli.args) {
        Ok(s) => s,
        Err(e) => {
            eprintln!("{e}");
            return Status::Config;
        }
    };
    let result = match settings.jobs {
        Some(n) => match rayon::ThreadPoolBuilder::new().num_threads(n).build() {
            Ok(pool) => pool.install(|| run_command(cli.command, &settings)),
            Err(e) => Err(CliError::Config(e.to_string())),
        },
        None => run_command(cli.command, &settings),
    };
    result.unwrap_or_else(|e| {
        eprintln!("{e}");
        Status::from(&e)
    })
}
