//! Whole-orbital analyses: the reference energy table, measure records over
//! radius grids, the entropic cross-over radius and the s-d inversion radius.

use std::fmt;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::density::Space;
use crate::error::{Error, Result};
use crate::hydrogen2d::{ConfinedOrbital, ConfinementSetup, QuantumState, SolverOptions, VariationalProblem};
use crate::infotheory::{uncertainty_fisher, uncertainty_shannon, DensityMeasures, MeasureSpec, EPS_NUM};
use crate::momentum::{momentum_density_with, MomentumOptions};

/// One row of published variational energies (hartree).
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ReferenceRow {
    pub r0: f64,
    pub e10: f64,
    pub e21: f64,
    pub e20: f64,
    pub e32: f64,
}

impl ReferenceRow {
    pub fn energy(&self, state: QuantumState) -> Option<f64> {
        match (state.n(), state.m()) {
            (1, 0) => Some(self.e10),
            (2, 0) => Some(self.e20),
            (2, 1) => Some(self.e21),
            (3, 2) => Some(self.e32),
            _ => None,
        }
    }
}

const fn row(r0: f64, e10: f64, e21: f64, e20: f64, e32: f64) -> ReferenceRow {
    ReferenceRow { r0, e10, e21, e20, e32 }
}

/// Published energies of the confined states.
pub const REFERENCE_ENERGIES: [ReferenceRow; 16] = [
    row(0.5, 3.92586, 25.48515, 56.01640, 49.80890),
    row(0.6, 1.53084, 17.10328, 37.37040, 34.09951),
    row(0.7, 0.21363, 12.12701, 26.31850, 24.69224),
    row(0.8, -0.56133, 8.94756, 19.27500, 18.62865),
    row(0.9, -1.03983, 6.80218, 14.60420, 14.50030),
    row(1.0, -1.34601, 5.29221, 11.33490, 11.56791),
    row(1.3, -1.77456, 2.74203, 5.81833, 6.52929),
    row(1.6, -1.91438, 1.54967, 3.28143, 4.10112),
    row(1.8, -1.95294, 1.08564, 2.31032, 3.12980),
    row(2.0, -1.97315, 0.76587, 1.65148, 2.44530),
    row(3.0, -1.99719, 0.08023, 0.30176, 0.88537),
    row(4.0, -1.99939, -0.11005, -0.03841, 0.38292),
    row(6.0, -1.99991, -0.20310, -0.19213, 0.06512),
    row(8.0, -1.99997, -0.21842, -0.21631, -0.02496),
    row(10.0, -1.99999, -0.22129, -0.22080, -0.05741),
    row(20.0, -1.99999, -0.22220, -0.22219, -0.07961),
];

/// Published free-atom energies.
pub const REFERENCE_FREE: ReferenceRow = row(f64::INFINITY, -2.0, -0.22222, -0.22222, -0.08);

pub fn reference_radii() -> Vec<f64> {
    REFERENCE_ENERGIES.iter().map(|r| r.r0).collect()
}

/// Default acceptance band `5e-3 · max(1, |E_ref|)`.
pub fn reference_tolerance(reference: f64) -> f64 {
    5e-3 * reference.abs().max(1.0)
}

/// Computed energy against the published value for one table cell.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EnergyComparison {
    pub state: QuantumState,
    pub r0: f64,
    pub reference: f64,
    pub alpha: Option<f64>,
    pub computed: Option<f64>,
    pub deviation: Option<f64>,
    pub alpha_at_floor: bool,
    pub error: Option<String>,
}

impl EnergyComparison {
    /// True when the cell was computed and lies within `tol(reference)`.
    pub fn within(&self, tol: impl Fn(f64) -> f64) -> bool {
        self.deviation.is_some_and(|d| d.abs() <= tol(self.reference))
    }
}

/// Recomputes every cell of the reference table, ordered by radius then state.
pub fn reference_table(solver: &SolverOptions) -> Vec<EnergyComparison> {
    let cells: Vec<(ReferenceRow, QuantumState)> = REFERENCE_ENERGIES
        .iter()
        .flat_map(|row| QuantumState::STUDIED.map(|s| (*row, s)))
        .collect();
    cells
        .par_iter()
        .map(|&(row, state)| {
            let reference = row.energy(state).expect("studied state");
            let orbital = ConfinementSetup::hydrogen(row.r0)
                .and_then(|setup| VariationalProblem::with_options(state, setup, *solver))
                .and_then(|p| p.optimize());
            match orbital {
                Ok(o) => EnergyComparison {
                    state,
                    r0: row.r0,
                    reference,
                    alpha: Some(o.alpha()),
                    computed: Some(o.energy()),
                    deviation: Some(o.energy() - reference),
                    alpha_at_floor: o.is_constrained(),
                    error: None,
                },
                Err(e) => EnergyComparison {
                    state,
                    r0: row.r0,
                    reference,
                    alpha: None,
                    computed: None,
                    deviation: None,
                    alpha_at_floor: false,
                    error: Some(e.to_string()),
                },
            }
        })
        .collect()
}

/// Everything needed to go from `(state, r₀)` to measures.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct AnalysisOptions {
    pub solver: SolverOptions,
    pub momentum: MomentumOptions,
    pub spec: MeasureSpec,
}

/// Conditions attached to a [`MeasureRecord`].
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Flag {
    /// `S_pos + S_mom` below `2 ln(eπ)`.
    EntropicUncertainty,
    /// `F_pos F_mom` below 16 for an `m = 0` state.
    FisherUncertainty,
    ComplexityFs(Space),
    ComplexityLmc(Space),
    ComplexityLmcRenyi(Space),
    /// Momentum norm defect above `1e-6`.
    Parseval,
    /// Optimal `α` on the lower edge of its search window (informational).
    AlphaAtFloor,
    /// No asymptotic continuation past `p_max` could be fitted (informational).
    TruncatedMomentum,
    /// The point could not be computed.
    Failed,
}

impl Flag {
    /// Violations of a bound or tolerance, as opposed to informational notes.
    pub fn is_violation(self) -> bool {
        !matches!(self, Flag::AlphaAtFloor | Flag::TruncatedMomentum)
    }

    pub fn token(self) -> &'static str {
        use Space::{Momentum, Position};
        match self {
            Flag::EntropicUncertainty => "S_sum",
            Flag::FisherUncertainty => "F_prod",
            Flag::ComplexityFs(Position) => "C_FS_pos",
            Flag::ComplexityFs(Momentum) => "C_FS_mom",
            Flag::ComplexityLmc(Position) => "C_LMC_pos",
            Flag::ComplexityLmc(Momentum) => "C_LMC_mom",
            Flag::ComplexityLmcRenyi(Position) => "C_LR_pos",
            Flag::ComplexityLmcRenyi(Momentum) => "C_LR_mom",
            Flag::Parseval => "parseval",
            Flag::AlphaAtFloor => "alpha_floor",
            Flag::TruncatedMomentum => "truncated_momentum",
            Flag::Failed => "failed",
        }
    }
}

impl fmt::Display for Flag {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.token())
    }
}

/// Upper bound on the momentum norm defect before [`Flag::Parseval`] is raised.
pub const PARSEVAL_TOL: f64 = 1e-6;

/// Numeric content of a [`MeasureRecord`].
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct RecordValues {
    pub alpha: f64,
    pub energy: f64,
    pub s_pos: f64,
    pub s_mom: f64,
    pub s_sum: f64,
    pub f_pos: f64,
    pub f_mom: f64,
    /// Only for `m = 0`, where the Fisher uncertainty relation applies.
    pub f_prod: Option<f64>,
    pub r_lambda_pos: f64,
    pub r_beta_pos: f64,
    pub r_lambda_mom: f64,
    pub r_beta_mom: f64,
    pub dq_pos: f64,
    pub dq_mom: f64,
    pub c_fs_pos: f64,
    pub c_lmc_pos: f64,
    pub c_lr_pos: f64,
    pub c_fs_mom: f64,
    pub c_lmc_mom: f64,
    pub c_lr_mom: f64,
    pub parseval_defect: f64,
    pub p_max: f64,
}

/// One output row: a state at one radius with all measures and flags.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MeasureRecord {
    pub state: QuantumState,
    pub r0: f64,
    pub values: Option<RecordValues>,
    pub flags: Vec<Flag>,
    pub error: Option<String>,
}

impl MeasureRecord {
    pub fn has_violation(&self) -> bool {
        self.flags.iter().any(|f| f.is_violation())
    }

    /// Optimizes the orbital and evaluates every measure; failures become a
    /// record carrying [`Flag::Failed`] and the error text.
    pub fn compute(state: QuantumState, r0: f64, options: &AnalysisOptions) -> Self {
        match orbital(state, r0, &options.solver).and_then(|o| Self::from_orbital(&o, options)) {
            Ok(record) => record,
            Err(e) => Self {
                state,
                r0,
                values: None,
                flags: vec![Flag::Failed],
                error: Some(e.to_string()),
            },
        }
    }

    pub fn from_orbital(orbital: &ConfinedOrbital, options: &AnalysisOptions) -> Result<Self> {
        let spec = &options.spec;
        let position = orbital.position_density()?;
        let momentum = momentum_density_with(orbital, options.momentum)?;
        let pos = DensityMeasures::compute(&position, spec)?;
        let mom = DensityMeasures::compute(&momentum, spec)?;
        let state = orbital.state();
        let (s_sum, entropic_ok) = uncertainty_shannon(pos.shannon, mom.shannon);
        let fisher = uncertainty_fisher(pos.fisher, mom.fisher, state);

        let mut flags = Vec::new();
        if !entropic_ok {
            flags.push(Flag::EntropicUncertainty);
        }
        if fisher.satisfied == Some(false) {
            flags.push(Flag::FisherUncertainty);
        }
        for (space, m) in [(Space::Position, &pos), (Space::Momentum, &mom)] {
            if m.complexity_fs < 2.0 - EPS_NUM {
                flags.push(Flag::ComplexityFs(space));
            }
            if m.complexity_lmc < 1.0 - EPS_NUM {
                flags.push(Flag::ComplexityLmc(space));
            }
            if m.complexity_lmc_renyi < 1.0 - EPS_NUM {
                flags.push(Flag::ComplexityLmcRenyi(space));
            }
        }
        if momentum.norm_defect() > PARSEVAL_TOL || momentum.tabulated_norm_defect() > PARSEVAL_TOL {
            flags.push(Flag::Parseval);
        }
        if orbital.is_constrained() {
            flags.push(Flag::AlphaAtFloor);
        }
        if momentum.tail().is_none() {
            flags.push(Flag::TruncatedMomentum);
        }

        Ok(Self {
            state,
            r0: orbital.r0(),
            values: Some(RecordValues {
                alpha: orbital.alpha(),
                energy: orbital.energy(),
                s_pos: pos.shannon,
                s_mom: mom.shannon,
                s_sum,
                f_pos: pos.fisher,
                f_mom: mom.fisher,
                f_prod: fisher.applicable.then_some(fisher.product),
                r_lambda_pos: pos.renyi_lambda,
                r_beta_pos: pos.renyi_beta,
                r_lambda_mom: mom.renyi_lambda,
                r_beta_mom: mom.renyi_beta,
                dq_pos: pos.disequilibrium,
                dq_mom: mom.disequilibrium,
                c_fs_pos: pos.complexity_fs,
                c_lmc_pos: pos.complexity_lmc,
                c_lr_pos: pos.complexity_lmc_renyi,
                c_fs_mom: mom.complexity_fs,
                c_lmc_mom: mom.complexity_lmc,
                c_lr_mom: mom.complexity_lmc_renyi,
                parseval_defect: momentum.norm_defect().max(momentum.tabulated_norm_defect()),
                p_max: momentum.support_end(),
            }),
            flags,
            error: None,
        })
    }
}

fn orbital(state: QuantumState, r0: f64, solver: &SolverOptions) -> Result<ConfinedOrbital> {
    VariationalProblem::with_options(state, ConfinementSetup::hydrogen(r0)?, *solver)?.optimize()
}

/// Records for every `(state, r₀)` pair, computed in parallel and returned
/// ordered by state, then radius.
pub fn sweep(states: &[QuantumState], radii: &[f64], options: &AnalysisOptions) -> Vec<MeasureRecord> {
    let mut states = states.to_vec();
    states.sort();
    states.dedup();
    let mut radii = radii.to_vec();
    radii.sort_by(f64::total_cmp);
    radii.dedup();
    let points: Vec<(QuantumState, f64)> = states
        .iter()
        .flat_map(|&s| radii.iter().map(move |&r| (s, r)))
        .collect();
    points
        .par_iter()
        .map(|&(s, r)| MeasureRecord::compute(s, r, options))
        .collect()
}

/// Reference radii followed by a log-spaced fill from the last one to `end`
/// with ratio at most 1.15 between neighbours.
pub fn default_sweep_radii(end: f64) -> Vec<f64> {
    let mut radii = reference_radii();
    let last = *radii.last().expect("non-empty table");
    if end > last {
        let steps = ((end / last).ln() / 1.15f64.ln()).ceil().max(1.0) as usize;
        for k in 1..=steps {
            radii.push(if k == steps {
                end
            } else {
                last * (end / last).powf(k as f64 / steps as f64)
            });
        }
    }
    radii
}

/// Root of a scalar function located by bisection.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Crossing {
    /// Midpoint of the final bracket.
    pub estimate: f64,
    pub lo: f64,
    pub hi: f64,
    pub evaluations: usize,
}

/// Bisects `f` on `[lo, hi]` until the bracket is at most `tol` wide.
pub fn bisect<F>(what: &str, mut f: F, lo: f64, hi: f64, tol: f64) -> Result<Crossing>
where
    F: FnMut(f64) -> Result<f64>,
{
    if !(lo < hi && tol > 0.0) {
        return Err(Error::InvalidParameter(format!("bad bracket [{lo}, {hi}] or tolerance {tol}")));
    }
    let (mut a, mut b) = (lo, hi);
    let mut fa = f(a)?;
    let fb = f(b)?;
    let mut evaluations = 2;
    if !(fa.is_finite() && fb.is_finite()) || fa.signum() == fb.signum() || fa == 0.0 && fb == 0.0 {
        return Err(Error::NoSignChange {
            what: what.to_string(),
            lo,
            hi,
        });
    }
    while b - a > tol {
        let mid = 0.5 * (a + b);
        let fm = f(mid)?;
        evaluations += 1;
        if fm == 0.0 {
            a = mid;
            b = mid;
            break;
        }
        if fm.signum() == fa.signum() {
            a = mid;
            fa = fm;
        } else {
            b = mid;
        }
    }
    Ok(Crossing {
        estimate: 0.5 * (a + b),
        lo: a,
        hi: b,
        evaluations,
    })
}

pub const CROSSOVER_BRACKET: (f64, f64) = (1.0, 6.0);
pub const CROSSOVER_TOL: f64 = 0.01;
pub const INVERSION_BRACKET: (f64, f64) = (0.5, 2.0);
pub const INVERSION_TOL: f64 = 0.005;

/// `S_pos - S_mom` of the optimized state at `r0`.
pub fn entropy_gap(state: QuantumState, r0: f64, options: &AnalysisOptions) -> Result<f64> {
    let o = orbital(state, r0, &options.solver)?;
    let pos = crate::infotheory::shannon(&o.position_density()?);
    let mom = crate::infotheory::shannon(&momentum_density_with(&o, options.momentum)?);
    Ok(pos - mom)
}

/// Radius where the position and momentum Shannon entropies of `state` cross.
pub fn crossover(state: QuantumState, bracket: (f64, f64), tol: f64, options: &AnalysisOptions) -> Result<Crossing> {
    bisect(
        &format!("S_pos - S_mom for {state}"),
        |r0| entropy_gap(state, r0, options),
        bracket.0,
        bracket.1,
        tol,
    )
}

/// `E(2s) - E(3d)` at `r0`.
pub fn sd_gap(r0: f64, solver: &SolverOptions) -> Result<f64> {
    Ok(orbital(QuantumState::S2, r0, solver)?.energy() - orbital(QuantumState::D3, r0, solver)?.energy())
}

/// Radius where the 2s and 3d energies cross.
pub fn inversion(bracket: (f64, f64), tol: f64, solver: &SolverOptions) -> Result<Crossing> {
    bisect("E(2s) - E(3d)", |r0| sd_gap(r0, solver), bracket.0, bracket.1, tol)
}
