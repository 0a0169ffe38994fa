use confined2d::analysis::{Crossing, EnergyComparison};
use confined2d::{MeasureRecord, QuantumState, Result as CoreResult};
use serde::Serialize;

use crate::config::Format;
use crate::CliError;

pub const SWEEP_HEADER: &str = "state,r0,alpha,energy,S_pos,S_mom,S_sum,F_pos,F_mom,F_prod,\
R_lambda_pos,R_beta_pos,R_lambda_mom,R_beta_mom,Dq_pos,Dq_mom,\
C_FS_pos,C_LMC_pos,C_LR_pos,C_FS_mom,C_LMC_mom,C_LR_mom,flags";

fn finite(x: f64) -> Option<f64> {
    x.is_finite().then_some(x)
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SweepRow {
    pub state: String,
    pub r0: f64,
    pub alpha: Option<f64>,
    pub energy: Option<f64>,
    #[serde(rename = "S_pos")]
    pub s_pos: Option<f64>,
    #[serde(rename = "S_mom")]
    pub s_mom: Option<f64>,
    #[serde(rename = "S_sum")]
    pub s_sum: Option<f64>,
    #[serde(rename = "F_pos")]
    pub f_pos: Option<f64>,
    #[serde(rename = "F_mom")]
    pub f_mom: Option<f64>,
    #[serde(rename = "F_prod")]
    pub f_prod: Option<f64>,
    #[serde(rename = "R_lambda_pos")]
    pub r_lambda_pos: Option<f64>,
    #[serde(rename = "R_beta_pos")]
    pub r_beta_pos: Option<f64>,
    #[serde(rename = "R_lambda_mom")]
    pub r_lambda_mom: Option<f64>,
    #[serde(rename = "R_beta_mom")]
    pub r_beta_mom: Option<f64>,
    #[serde(rename = "Dq_pos")]
    pub dq_pos: Option<f64>,
    #[serde(rename = "Dq_mom")]
    pub dq_mom: Option<f64>,
    #[serde(rename = "C_FS_pos")]
    pub c_fs_pos: Option<f64>,
    #[serde(rename = "C_LMC_pos")]
    pub c_lmc_pos: Option<f64>,
    #[serde(rename = "C_LR_pos")]
    pub c_lr_pos: Option<f64>,
    #[serde(rename = "C_FS_mom")]
    pub c_fs_mom: Option<f64>,
    #[serde(rename = "C_LMC_mom")]
    pub c_lmc_mom: Option<f64>,
    #[serde(rename = "C_LR_mom")]
    pub c_lr_mom: Option<f64>,
    pub flags: String,
}

impl From<&MeasureRecord> for SweepRow {
    fn from(rec: &MeasureRecord) -> Self {
        let v = rec.values.as_ref();
        let get = |f: fn(&confined2d::RecordValues) -> f64| v.map(f).and_then(finite);
        SweepRow {
            state: rec.state.label(),
            r0: rec.r0,
            alpha: get(|v| v.alpha),
            energy: get(|v| v.energy),
            s_pos: get(|v| v.s_pos),
            s_mom: get(|v| v.s_mom),
            s_sum: get(|v| v.s_sum),
            f_pos: get(|v| v.f_pos),
            f_mom: get(|v| v.f_mom),
            f_prod: v.and_then(|v| v.f_prod).and_then(finite),
            r_lambda_pos: get(|v| v.r_lambda_pos),
            r_beta_pos: get(|v| v.r_beta_pos),
            r_lambda_mom: get(|v| v.r_lambda_mom),
            r_beta_mom: get(|v| v.r_beta_mom),
            dq_pos: get(|v| v.dq_pos),
            dq_mom: get(|v| v.dq_mom),
            c_fs_pos: get(|v| v.c_fs_pos),
            c_lmc_pos: get(|v| v.c_lmc_pos),
            c_lr_pos: get(|v| v.c_lr_pos),
            c_fs_mom: get(|v| v.c_fs_mom),
            c_lmc_mom: get(|v| v.c_lmc_mom),
            c_lr_mom: get(|v| v.c_lr_mom),
            flags: rec.flags.iter().map(|f| f.token()).collect::<Vec<_>>().join(";"),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Table1Row {
    pub state: String,
    pub r0: f64,
    pub alpha: Option<f64>,
    pub computed: Option<f64>,
    pub reference: f64,
    pub deviation: Option<f64>,
    pub tolerance: f64,
    pub status: &'static str,
}

impl Table1Row {
    pub fn new(c: &EnergyComparison, tol_factor: f64) -> Self {
        let tolerance = tol_factor * c.reference.abs().max(1.0);
        let status = match c.deviation {
            None => "failed",
            Some(d) if d.abs() <= tolerance => "ok",
            Some(_) => "deviation",
        };
        Table1Row {
            state: c.state.label(),
            r0: c.r0,
            alpha: c.alpha,
            computed: c.computed,
            reference: c.reference,
            deviation: c.deviation,
            tolerance,
            status,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CrossingRow {
    pub state: String,
    pub estimate: Option<f64>,
    pub lo: Option<f64>,
    pub hi: Option<f64>,
    pub evaluations: Option<usize>,
    pub status: &'static str,
}

impl CrossingRow {
    pub fn new(label: String, result: &CoreResult<Crossing>) -> Self {
        let c = result.as_ref().ok();
        CrossingRow {
            state: label,
            estimate: c.map(|c| c.estimate),
            lo: c.map(|c| c.lo),
            hi: c.map(|c| c.hi),
            evaluations: c.map(|c| c.evaluations),
            status: match result {
                Ok(_) => "crossing",
                Err(confined2d::Error::NoSignChange { .. }) => "no_crossing",
                Err(_) => "failed",
            },
        }
    }

    pub fn for_state(state: QuantumState, result: &CoreResult<Crossing>) -> Self {
        Self::new(state.label(), result)
    }
}

/// Rows as CSV with a header, or a JSON array of objects with the same keys.
pub fn render<T: Serialize>(rows: &[T], format: Format) -> Result<String, CliError> {
    match format {
        Format::Csv => {
            let mut w = csv::Writer::from_writer(Vec::new());
            for row in rows {
                w.serialize(row)?;
            }
            let bytes = w.into_inner().map_err(|e| CliError::Io(e.into_error()))?;
            Ok(String::from_utf8(bytes).expect("csv output is utf-8"))
        }
        Format::Json => {
            let mut s = serde_json::to_string_pretty(rows)?;
            s.push('\n');
            Ok(s)
        }
    }
}

/// CSV of the sweep; the header is written even when there are no rows.
pub fn render_sweep(records: &[MeasureRecord], format: Format) -> Result<String, CliError> {
    let rows: Vec<SweepRow> = records.iter().map(SweepRow::from).collect();
    if rows.is_empty() && format == Format::Csv {
        return Ok(format!("{SWEEP_HEADER}\n"));
    }
    render(&rows, format)
}
