//! Entropic and complexity functionals of two-dimensional radial densities.
//!
//! All quantities use natural logarithms. A [`RadialDensity`] carries the
//! radial profile `f` of a 2D density `ρ = f/(2π)`, so the angular integral
//! folds into the `ln(2π)` and `1/(2π)` constants below.

use std::f64::consts::{E, PI};

use serde::{Deserialize, Serialize};

use crate::density::RadialDensity;
use crate::error::{Error, Result};
use crate::hydrogen2d::QuantumState;

/// Values below this are treated as exact zeros of the density.
const TINY: f64 = 1e-300;

/// Slack allowed on every inequality check.
pub const EPS_NUM: f64 = 1e-6;

/// `2 ln(eπ)`, the lower bound of the position-momentum Shannon sum in 2D.
pub const SHANNON_SUM_BOUND: f64 = 2.0 * (1.0 + 1.144_729_885_849_400_2);

/// Lower bound of the Fisher product `4 D²` for real wavefunctions, `D = 2`.
pub const FISHER_PRODUCT_BOUND: f64 = 16.0;

const DIMENSION: f64 = 2.0;

/// Orders of the LMC-Rényi complexity.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct MeasureSpec {
    pub renyi_lambda: f64,
    pub renyi_beta: f64,
}

impl Default for MeasureSpec {
    fn default() -> Self {
        Self {
            renyi_lambda: 2.0 / 3.0,
            renyi_beta: 3.0,
        }
    }
}

impl MeasureSpec {
    pub fn new(renyi_lambda: f64, renyi_beta: f64) -> Result<Self> {
        let spec = Self {
            renyi_lambda,
            renyi_beta,
        };
        spec.validate()?;
        Ok(spec)
    }

    pub fn validate(&self) -> Result<()> {
        check_orders(self.renyi_lambda, self.renyi_beta)
    }
}

fn check_orders(lambda: f64, beta: f64) -> Result<()> {
    if !(lambda > 0.0 && beta > 0.0 && lambda.is_finite() && beta.is_finite()) {
        return Err(Error::InvalidParameter(format!(
            "Rényi orders must be positive, got lambda = {lambda}, beta = {beta}"
        )));
    }
    if lambda >= beta {
        return Err(Error::InvalidParameter(format!(
            "LMC-Rényi complexity needs lambda < beta, got {lambda} >= {beta}"
        )));
    }
    Ok(())
}

/// Shannon entropy `S = ln(2π) - ∫ f ln f x dx`.
pub fn shannon(d: &RadialDensity) -> f64 {
    let integral = d.radial_integral(|f, _| if f < TINY { 0.0 } else { f * f.ln() });
    (2.0 * PI).ln() - integral
}

/// Rényi entropy `R_λ = ln(2π) + ln(∫ f^λ x dx) / (1 - λ)`.
pub fn renyi(d: &RadialDensity, lambda: f64) -> Result<f64> {
    if !(lambda > 0.0) || !lambda.is_finite() {
        return Err(Error::InvalidParameter(format!("Rényi order must be positive, got {lambda}")));
    }
    if lambda == 1.0 {
        return Err(Error::InvalidParameter(
            "Rényi order 1 is the Shannon entropy; use shannon()".into(),
        ));
    }
    let integral = d.radial_integral(|f, _| if f < TINY { 0.0 } else { f.powf(lambda) });
    if !(integral.is_finite() && integral > 0.0) {
        return Err(Error::Divergent {
            what: format!("Rényi entropy of order {lambda}"),
        });
    }
    Ok((2.0 * PI).ln() + integral.ln() / (1.0 - lambda))
}

/// Rényi entropy with `λ = 1` routed through the Shannon entropy.
fn renyi_or_shannon(d: &RadialDensity, lambda: f64) -> Result<f64> {
    if lambda == 1.0 {
        Ok(shannon(d))
    } else {
        renyi(d, lambda)
    }
}

/// Fisher information `F = ∫ f'² / f x dx`.
pub fn fisher(d: &RadialDensity) -> Result<f64> {
    let value = d.radial_integral(|f, df| if f < TINY { 0.0 } else { df * df / f });
    if value.is_finite() {
        Ok(value)
    } else {
        Err(Error::Divergent {
            what: "Fisher information".into(),
        })
    }
}

/// Disequilibrium `∫ ρ² = (1/2π) ∫ f² x dx`.
pub fn disequilibrium(d: &RadialDensity) -> f64 {
    d.radial_integral(|f, _| f * f) / (2.0 * PI)
}

/// Fisher-Shannon complexity `F e^{2S/D} / (2πe)`.
pub fn complexity_fs(d: &RadialDensity) -> Result<f64> {
    Ok(fisher_shannon(fisher(d)?, shannon(d)))
}

pub fn fisher_shannon(fisher: f64, shannon: f64) -> f64 {
    fisher * (2.0 / DIMENSION * shannon).exp() / (2.0 * PI * E)
}

/// LMC complexity `e^S · D_ρ`.
pub fn complexity_lmc(d: &RadialDensity) -> f64 {
    shannon(d).exp() * disequilibrium(d)
}

/// LMC-Rényi complexity `e^{R_λ - R_β}` for `λ < β`.
pub fn complexity_lmc_renyi(d: &RadialDensity, lambda: f64, beta: f64) -> Result<f64> {
    check_orders(lambda, beta)?;
    let r_lambda = renyi_or_shannon(d, lambda)?;
    let r_beta = renyi_or_shannon(d, beta)?;
    Ok((r_lambda - r_beta).exp())
}

/// Position-momentum Shannon sum and whether it respects `2 ln(eπ)`.
pub fn uncertainty_shannon(s_pos: f64, s_mom: f64) -> (f64, bool) {
    let sum = s_pos + s_mom;
    (sum, sum >= SHANNON_SUM_BOUND - EPS_NUM)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct FisherUncertainty {
    pub product: f64,
    /// The bound holds only for real wavefunctions, i.e. `m = 0`.
    pub applicable: bool,
    /// `None` when not applicable.
    pub satisfied: Option<bool>,
}

pub fn uncertainty_fisher(f_pos: f64, f_mom: f64, state: QuantumState) -> FisherUncertainty {
    let product = f_pos * f_mom;
    let applicable = state.m() == 0;
    FisherUncertainty {
        product,
        applicable,
        satisfied: applicable.then_some(product >= FISHER_PRODUCT_BOUND - EPS_NUM),
    }
}

/// Every single-density functional at once.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct DensityMeasures {
    pub shannon: f64,
    pub fisher: f64,
    pub renyi_lambda: f64,
    pub renyi_beta: f64,
    pub disequilibrium: f64,
    pub complexity_fs: f64,
    pub complexity_lmc: f64,
    pub complexity_lmc_renyi: f64,
}

impl DensityMeasures {
    pub fn compute(d: &RadialDensity, spec: &MeasureSpec) -> Result<Self> {
        spec.validate()?;
        let shannon = shannon(d);
        let fisher = fisher(d)?;
        let renyi_lambda = renyi_or_shannon(d, spec.renyi_lambda)?;
        let renyi_beta = renyi_or_shannon(d, spec.renyi_beta)?;
        let disequilibrium = disequilibrium(d);
        Ok(Self {
            shannon,
            fisher,
            renyi_lambda,
            renyi_beta,
            disequilibrium,
            complexity_fs: fisher_shannon(fisher, shannon),
            complexity_lmc: shannon.exp() * disequilibrium,
            complexity_lmc_renyi: (renyi_lambda - renyi_beta).exp(),
        })
    }

    /// The three lower bounds `C_FS ≥ 2`, `C_LMC ≥ 1`, `C_{λ,β} ≥ 1` up to [`EPS_NUM`].
    pub fn complexity_bounds_hold(&self) -> bool {
        self.complexity_fs >= DIMENSION - EPS_NUM
            && self.complexity_lmc >= 1.0 - EPS_NUM
            && self.complexity_lmc_renyi >= 1.0 - EPS_NUM
    }
}
