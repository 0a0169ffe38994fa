//! Gauss-Legendre rules, composite panel rules and a panel-accumulating tail integrator.

use std::sync::OnceLock;

use crate::error::QuadratureError;

/// Nodes and weights of a fixed rule on a finite interval.
#[derive(Debug, Clone, PartialEq)]
pub struct QuadratureRule {
    nodes: Vec<f64>,
    weights: Vec<f64>,
    interval: (f64, f64),
}

impl QuadratureRule {
    /// `npoints`-point Gauss-Legendre rule on `[a, b]`.
    pub fn gauss_legendre(npoints: usize, a: f64, b: f64) -> Result<Self, QuadratureError> {
        Self::composite(1, npoints, a, b)
    }

    /// Concatenation of `panels` equal-width Gauss-Legendre rules covering `[a, b]`.
    pub fn composite(panels: usize, npoints: usize, a: f64, b: f64) -> Result<Self, QuadratureError> {
        if npoints == 0 || panels == 0 {
            return Err(QuadratureError::EmptyRule);
        }
        if !(a < b) || !a.is_finite() || !b.is_finite() {
            return Err(QuadratureError::BadInterval { a, b });
        }
        let reference = reference_rule(npoints);
        let width = (b - a) / panels as f64;
        let mut nodes = Vec::with_capacity(panels * npoints);
        let mut weights = Vec::with_capacity(panels * npoints);
        for k in 0..panels {
            let lo = a + k as f64 * width;
            reference.map_into(lo, lo + width, &mut nodes, &mut weights);
        }
        Ok(Self {
            nodes,
            weights,
            interval: (a, b),
        })
    }

    pub fn nodes(&self) -> &[f64] {
        &self.nodes
    }

    pub fn weights(&self) -> &[f64] {
        &self.weights
    }

    pub fn interval(&self) -> (f64, f64) {
        self.interval
    }

    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    /// Iterator over `(node, weight)` pairs.
    pub fn points(&self) -> impl Iterator<Item = (f64, f64)> + '_ {
        self.nodes.iter().copied().zip(self.weights.iter().copied())
    }

    /// Weighted sum `Σ wᵢ f(xᵢ)`, rejecting non-finite integrand values.
    pub fn integrate<F: FnMut(f64) -> f64>(&self, f: F) -> Result<f64, QuadratureError> {
        weighted_sum(self.points(), f)
    }
}

/// Gauss-Legendre nodes and weights on `[-1, 1]`, ascending.
#[derive(Debug, Clone)]
pub struct ReferenceRule {
    nodes: Vec<f64>,
    weights: Vec<f64>,
}

impl ReferenceRule {
    /// Newton iteration on `P_n` from the cosine initial guess, converged to 1e-15.
    pub fn new(n: usize) -> Self {
        assert!(n > 0, "Gauss-Legendre rule needs at least one node");
        let mut nodes = vec![0.0; n];
        let mut weights = vec![0.0; n];
        let nf = n as f64;
        for i in 0..n.div_ceil(2) {
            let mut x = (std::f64::consts::PI * (i as f64 + 0.75) / (nf + 0.5)).cos();
            let mut dp = 0.0;
            for _ in 0..100 {
                let (p, d) = legendre_with_derivative(n, x);
                dp = d;
                let dx = p / d;
                x -= dx;
                if dx.abs() <= 1e-15 {
                    let (_, d) = legendre_with_derivative(n, x);
                    dp = d;
                    break;
                }
            }
            let w = 2.0 / ((1.0 - x * x) * dp * dp);
            nodes[i] = -x;
            nodes[n - 1 - i] = x;
            weights[i] = w;
            weights[n - 1 - i] = w;
        }
        if n % 2 == 1 {
            nodes[n / 2] = 0.0;
        }
        Self { nodes, weights }
    }

    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    pub fn nodes(&self) -> &[f64] {
        &self.nodes
    }

    pub fn weights(&self) -> &[f64] {
        &self.weights
    }

    /// Appends the rule mapped onto `[lo, hi]`.
    pub fn map_into(&self, lo: f64, hi: f64, nodes: &mut Vec<f64>, weights: &mut Vec<f64>) {
        let half = 0.5 * (hi - lo);
        let mid = 0.5 * (hi + lo);
        for (&x, &w) in self.nodes.iter().zip(&self.weights) {
            nodes.push(mid + half * x);
            weights.push(half * w);
        }
    }

    /// `∫_lo^hi f` with this rule, unchecked.
    pub fn apply<F: FnMut(f64) -> f64>(&self, lo: f64, hi: f64, mut f: F) -> f64 {
        let half = 0.5 * (hi - lo);
        let mid = 0.5 * (hi + lo);
        let mut sum = 0.0;
        for (&x, &w) in self.nodes.iter().zip(&self.weights) {
            sum += w * f(mid + half * x);
        }
        half * sum
    }
}

fn legendre_with_derivative(n: usize, x: f64) -> (f64, f64) {
    let mut p0 = 1.0;
    let mut p1 = x;
    for k in 2..=n {
        let k = k as f64;
        let p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
        p0 = p1;
        p1 = p2;
    }
    let (p, pm1) = if n == 0 { (1.0, 0.0) } else { (p1, p0) };
    let d = n as f64 * (x * p - pm1) / (x * x - 1.0);
    (p, d)
}

/// Shared reference rules for the orders used throughout the crate.
pub fn reference_rule(n: usize) -> std::borrow::Cow<'static, ReferenceRule> {
    static SIXTEEN: OnceLock<ReferenceRule> = OnceLock::new();
    if n == DEFAULT_POINTS {
        std::borrow::Cow::Borrowed(SIXTEEN.get_or_init(|| ReferenceRule::new(DEFAULT_POINTS)))
    } else {
        std::borrow::Cow::Owned(ReferenceRule::new(n))
    }
}

/// Points per panel for every composite rule in the crate unless overridden.
pub const DEFAULT_POINTS: usize = 16;

fn weighted_sum<I, F>(points: I, mut f: F) -> Result<f64, QuadratureError>
where
    I: Iterator<Item = (f64, f64)>,
    F: FnMut(f64) -> f64,
{
    let mut sum = 0.0;
    for (x, w) in points {
        let v = f(x);
        if !v.is_finite() {
            return Err(QuadratureError::NonFiniteIntegrand { x, value: v });
        }
        sum += w * v;
    }
    Ok(sum)
}

/// `Σ wᵢ f(xᵢ)` over `rule`.
pub fn integrate<F: FnMut(f64) -> f64>(f: F, rule: &QuadratureRule) -> Result<f64, QuadratureError> {
    rule.integrate(f)
}

/// Composite Gauss-Legendre over `panels` equal subintervals of `[a, b]`.
pub fn integrate_panels<F: FnMut(f64) -> f64>(
    f: F,
    a: f64,
    b: f64,
    panels: usize,
    npoints_per_panel: usize,
) -> Result<f64, QuadratureError> {
    if npoints_per_panel == 0 || panels == 0 {
        return Err(QuadratureError::EmptyRule);
    }
    if !(a < b) {
        return Err(QuadratureError::BadInterval { a, b });
    }
    let reference = reference_rule(npoints_per_panel);
    let width = (b - a) / panels as f64;
    let half = 0.5 * width;
    let points = (0..panels).flat_map(|k| {
        let mid = a + (k as f64 + 0.5) * width;
        reference
            .nodes()
            .iter()
            .zip(reference.weights())
            .map(move |(&x, &w)| (mid + half * x, half * w))
            .collect::<Vec<_>>()
    });
    weighted_sum(points, f)
}

/// Result of a semi-infinite integration.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TailIntegral {
    pub value: f64,
    /// Right end of the last accumulated panel.
    pub end: f64,
    pub panels: usize,
}

/// Panel layout and stopping rule for [`integrate_tail_with`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TailSettings {
    pub width: f64,
    pub npoints: usize,
    pub rel_tol: f64,
    pub max_panels: usize,
}

impl Default for TailSettings {
    fn default() -> Self {
        Self {
            width: 1.0,
            npoints: DEFAULT_POINTS,
            rel_tol: 1e-8,
            max_panels: 10_000,
        }
    }
}

/// Stopping rule for panel-by-panel accumulation: done once three consecutive
/// panel contributions are each below `rel_tol × |accumulated|`.
#[derive(Debug, Clone)]
pub struct TailAccumulator {
    rel_tol: f64,
    total: f64,
    quiet_run: usize,
    quiet_needed: usize,
    panels: usize,
}

impl TailAccumulator {
    const QUIET_PANELS: usize = 3;

    pub fn new(rel_tol: f64) -> Self {
        Self {
            rel_tol,
            total: 0.0,
            quiet_run: 0,
            quiet_needed: Self::QUIET_PANELS,
            panels: 0,
        }
    }

    /// Requires `n` consecutive small contributions (at least 1) instead of three.
    pub fn with_quiet_panels(mut self, n: usize) -> Self {
        self.quiet_needed = n.max(1);
        self
    }

    /// Adds one panel's contribution; returns `true` once converged.
    pub fn push(&mut self, contribution: f64) -> bool {
        self.total += contribution;
        self.panels += 1;
        if contribution.abs() <= self.rel_tol * self.total.abs() {
            self.quiet_run += 1;
        } else {
            self.quiet_run = 0;
        }
        self.quiet_run >= self.quiet_needed
    }

    pub fn total(&self) -> f64 {
        self.total
    }

    pub fn panels(&self) -> usize {
        self.panels
    }
}

/// `∫_a^∞ f` with unit-width 16-point panels.
pub fn integrate_tail<F: FnMut(f64) -> f64>(f: F, a: f64, rel_tol: f64) -> Result<TailIntegral, QuadratureError> {
    integrate_tail_with(
        f,
        a,
        TailSettings {
            rel_tol,
            ..TailSettings::default()
        },
    )
}

pub fn integrate_tail_with<F: FnMut(f64) -> f64>(
    mut f: F,
    a: f64,
    settings: TailSettings,
) -> Result<TailIntegral, QuadratureError> {
    if !(settings.rel_tol > 0.0) || !(settings.width > 0.0) || settings.npoints == 0 {
        return Err(QuadratureError::BadTailSettings);
    }
    let reference = reference_rule(settings.npoints);
    let mut acc = TailAccumulator::new(settings.rel_tol);
    for k in 0..settings.max_panels {
        let lo = a + k as f64 * settings.width;
        let hi = lo + settings.width;
        let mut bad = None;
        let part = reference.apply(lo, hi, |x| {
            let v = f(x);
            if !v.is_finite() && bad.is_none() {
                bad = Some((x, v));
            }
            v
        });
        if let Some((x, value)) = bad {
            return Err(QuadratureError::NonFiniteIntegrand { x, value });
        }
        if acc.push(part) {
            return Ok(TailIntegral {
                value: acc.total(),
                end: hi,
                panels: acc.panels(),
            });
        }
    }
    Err(QuadratureError::TailNotConverged {
        panels: settings.max_panels,
        reached: a + settings.max_panels as f64 * settings.width,
    })
}
