//! Tabulated radial profiles of angle-independent two-dimensional densities.

use std::fmt;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::quadrature::{reference_rule, QuadratureRule, DEFAULT_POINTS};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Space {
    Position,
    Momentum,
}

impl fmt::Display for Space {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Space::Position => "position",
            Space::Momentum => "momentum",
        })
    }
}

/// Pointwise `(f(x), f'(x))`.
pub type Profile = Arc<dyn Fn(f64) -> (f64, f64) + Send + Sync>;

/// Closed-form continuation of a profile beyond the tabulated range, possibly
/// oscillating with a known period.
#[derive(Clone)]
pub struct DensityTail {
    period: f64,
    profile: Profile,
}

impl DensityTail {
    pub fn new(period: f64, profile: Profile) -> Result<Self> {
        if !(period > 0.0 && period.is_finite()) {
            return Err(Error::InvalidParameter(format!("tail period must be positive, got {period}")));
        }
        Ok(Self { period, profile })
    }

    pub fn period(&self) -> f64 {
        self.period
    }

    pub fn profile(&self, x: f64) -> (f64, f64) {
        (self.profile)(x)
    }
}

/// Sub-panels per oscillation period when integrating a tail.
const TAIL_SUBPANELS: usize = 4;

/// Doubling blocks of periods summed explicitly before extrapolating (`2^12` periods).
const TAIL_BLOCKS: usize = 12;

/// A radial profile `f` on `[0, support_end]` standing for the 2D density
/// `f(|x|) / (2π)`, so that `∫ f x dx = 1` when normalized.
///
/// The profile and its slope are tabulated on the quadrature nodes that every
/// functional of the density is evaluated with; the closure remains available
/// for pointwise queries.
#[derive(Clone)]
pub struct RadialDensity {
    space: Space,
    support_end: f64,
    nodes: Vec<f64>,
    weights: Vec<f64>,
    values: Vec<f64>,
    slopes: Vec<f64>,
    norm_defect: f64,
    profile: Profile,
    tail: Option<DensityTail>,
}

impl fmt::Debug for RadialDensity {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("RadialDensity")
            .field("space", &self.space)
            .field("support_end", &self.support_end)
            .field("nodes", &self.nodes.len())
            .field("norm_defect", &self.norm_defect)
            .field("tail", &self.tail.as_ref().map(|t| t.period))
            .finish()
    }
}

impl RadialDensity {
    /// Samples `profile` on the nodes of `rule`, which must start at 0.
    pub fn from_profile(space: Space, rule: &QuadratureRule, profile: Profile) -> Result<Self> {
        let (values, slopes) = rule.nodes().iter().map(|&x| profile(x)).unzip();
        Self::from_samples(
            space,
            rule.interval().1,
            rule.nodes().to_vec(),
            rule.weights().to_vec(),
            values,
            slopes,
            profile,
        )
    }

    pub fn from_samples(
        space: Space,
        support_end: f64,
        nodes: Vec<f64>,
        weights: Vec<f64>,
        values: Vec<f64>,
        slopes: Vec<f64>,
        profile: Profile,
    ) -> Result<Self> {
        let n = nodes.len();
        if weights.len() != n || values.len() != n || slopes.len() != n {
            return Err(Error::InvalidParameter("density samples have mismatched lengths".into()));
        }
        if let Some((&x, &v)) = nodes
            .iter()
            .zip(&values)
            .find(|(_, v)| !v.is_finite() || **v < 0.0)
        {
            return Err(Error::InvalidParameter(format!("density value {v} at x = {x}")));
        }
        let mut density = Self {
            space,
            support_end,
            nodes,
            weights,
            values,
            slopes,
            norm_defect: 0.0,
            profile,
            tail: None,
        };
        density.norm_defect = (1.0 - density.norm()).abs();
        Ok(density)
    }

    /// Attaches a continuation beyond `support_end`; every integral then runs to infinity.
    pub fn with_tail(mut self, tail: DensityTail) -> Self {
        self.tail = Some(tail);
        self.norm_defect = (1.0 - self.norm()).abs();
        self
    }

    pub fn tail(&self) -> Option<&DensityTail> {
        self.tail.as_ref()
    }

    pub fn space(&self) -> Space {
        self.space
    }

    pub fn support_end(&self) -> f64 {
        self.support_end
    }

    /// `|1 - ∫ f x dx|`, tail included.
    pub fn norm_defect(&self) -> f64 {
        self.norm_defect
    }

    pub fn norm(&self) -> f64 {
        self.radial_integral(|f, _| f)
    }

    /// `∫ f x dx` over the tabulated range `[0, support_end]` only.
    pub fn tabulated_norm(&self) -> f64 {
        self.tabulated_integral(|f, _| f)
    }

    /// `|1 - ∫ f x dx|` over the tabulated range only.
    pub fn tabulated_norm_defect(&self) -> f64 {
        (1.0 - self.tabulated_norm()).abs()
    }

    pub fn profile(&self, x: f64) -> f64 {
        (self.profile)(x).0
    }

    pub fn slope(&self, x: f64) -> f64 {
        (self.profile)(x).1
    }

    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    /// `(x, weight, f, f')` at each tabulation node.
    pub fn samples(&self) -> impl Iterator<Item = (f64, f64, f64, f64)> + '_ {
        self.nodes
            .iter()
            .zip(&self.weights)
            .zip(self.values.iter().zip(&self.slopes))
            .map(|((&x, &w), (&f, &d))| (x, w, f, d))
    }

    /// `∫ g(f(x), f'(x)) x dx` over the tabulated range plus the tail, if any.
    ///
    /// Returns NaN when the tail integral does not converge.
    pub fn radial_integral<G: Fn(f64, f64) -> f64>(&self, g: G) -> f64 {
        self.integral(|_, f, d| g(f, d))
    }

    /// Radial moment `∫ f x^k x dx`, so that `⟨|x|^k⟩` is the moment of a normalized density.
    pub fn moment(&self, k: i32) -> f64 {
        self.integral(|x, f, _| f * x.powi(k))
    }

    fn integral<G: Fn(f64, f64, f64) -> f64>(&self, g: G) -> f64 {
        let body: f64 = self.samples().map(|(x, w, f, d)| w * x * g(x, f, d)).sum();
        match &self.tail {
            Some(tail) => body + tail_integral(tail, self.support_end, &g),
            None => body,
        }
    }

    /// `∫ g(f(x), f'(x)) x dx` by the stored rule.
    pub fn tabulated_integral<G: Fn(f64, f64) -> f64>(&self, g: G) -> f64 {
        self.samples().map(|(x, w, f, d)| w * x * g(f, d)).sum()
    }
}

/// `∫_a^∞ g(f, f') x dx` for a tail oscillating with period `T`.
///
/// The integrals `P_k` over the periods `[a + kT, a + (k+1)T]` form a smooth,
/// eventually power-law sequence. They are summed in blocks of doubling length
/// and the remainder after the last block is the geometric series continuing
/// the ratio of the last two block sums. Returns NaN when that ratio shows no
/// decay.
fn tail_integral<G: Fn(f64, f64, f64) -> f64>(tail: &DensityTail, a: f64, g: &G) -> f64 {
    let reference = reference_rule(DEFAULT_POINTS);
    let period = tail.period;
    let sub = period / TAIL_SUBPANELS as f64;
    let over_period = |k: usize| {
        let lo = a + k as f64 * period;
        (0..TAIL_SUBPANELS)
            .map(|j| {
                let s = lo + j as f64 * sub;
                reference.apply(s, s + sub, |x| {
                    let (f, d) = tail.profile(x);
                    g(x, f, d) * x
                })
            })
            .sum::<f64>()
    };
    let mut total = over_period(0);
    let mut previous = total;
    let mut start = 1;
    for _ in 0..TAIL_BLOCKS {
        let block: f64 = (start..2 * start).map(over_period).sum();
        total += block;
        if block == 0.0 || block.abs() <= 1e-16 * total.abs() {
            return total;
        }
        let ratio = block / previous;
        previous = block;
        start *= 2;
        if start >= 2usize.pow(TAIL_BLOCKS as u32) {
            return if ratio.is_finite() && (0.0..0.999).contains(&ratio) {
                total + block * ratio / (1.0 - ratio)
            } else {
                f64::NAN
            };
        }
    }
    total
}

#[cfg(test)]
mod tests {
    use super::*;

    fn truncated(end: f64) -> RadialDensity {
        let rule = QuadratureRule::composite(8, DEFAULT_POINTS, 0.0, end).unwrap();
        RadialDensity::from_profile(Space::Momentum, &rule, Arc::new(|_| (0.0, 0.0))).unwrap()
    }

    fn rippled(x: f64) -> (f64, f64) {
        let s = 1.0 + 0.5 * x.cos();
        let f = x.powi(-5) * s * s;
        let d = -5.0 * f / x - x.powi(-5) * s * x.sin();
        (f, d)
    }

    #[test]
    fn oscillating_tail_integrals() {
        // references: mpmath quadosc for the norm; for the slowly decaying
        // Rényi integrand, direct period sums over 2e6 periods plus the
        // averaged power-law remainder
        let tail = DensityTail::new(2.0 * std::f64::consts::PI, Arc::new(rippled)).unwrap();
        let d = truncated(2.0).with_tail(tail);
        let norm = d.radial_integral(|f, _| f);
        assert!((norm - 0.021_037_264_714_828_697).abs() < 1e-12, "{norm}");
        let renyi = d.radial_integral(|f, _| f.powf(2.0 / 3.0));
        assert!((renyi - 0.222_737_716_233_433).abs() < 2e-9, "{renyi}");
        assert_eq!(d.tabulated_norm(), 0.0);
    }

    #[test]
    fn divergent_tail_is_nan() {
        // f x ~ 1/x is not integrable
        let tail = DensityTail::new(1.0, Arc::new(|x: f64| (x.powi(-2), -2.0 * x.powi(-3)))).unwrap();
        let d = truncated(1.0).with_tail(tail);
        assert!(d.radial_integral(|f, _| f).is_nan());
        assert!(d.radial_integral(|f, _| f * f).is_finite());
    }

    #[test]
    fn rejects_negative_samples() {
        let rule = QuadratureRule::composite(2, 4, 0.0, 1.0).unwrap();
        let err = RadialDensity::from_profile(Space::Position, &rule, Arc::new(|x| (x - 0.5, 1.0)));
        assert!(err.is_err());
    }
}
