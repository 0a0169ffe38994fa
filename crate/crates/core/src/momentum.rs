//! Momentum-space orbitals through the radial Hankel (Fourier-Bessel) transform
//! `φ(p) = ∫₀^{r₀} R(r) J_m(pr) r dr`.
//!
//! The angular phase `i^{3m} e^{imθ_p}` of the 2D Fourier transform has unit
//! modulus and is dropped; with this convention the transform is unitary, so
//! `∫ φ(p)² p dp = ∫ R(r)² r dr = 1` and the 2D momentum density is `φ²/(2π)`.

use std::f64::consts::PI;
use std::sync::Arc;

use rayon::prelude::*;

pub use crate::density::{DensityTail, RadialDensity, Space};
use crate::error::{QuadratureError, Result};
use crate::hydrogen2d::ConfinedOrbital;
use crate::linalg::least_squares;
use crate::quadrature::{reference_rule, ReferenceRule, TailAccumulator, DEFAULT_POINTS};
use crate::specfun::bessel_j_orders;

/// Default relative tolerance of the momentum-norm tail accumulation, per unit
/// of momentum.
pub const DEFAULT_REL_TOL: f64 = 1e-9;

/// Minimum number of radial panels for any `p`.
const BASE_PANELS: usize = 32;

/// Radial tail `∫ R² r dr` that may be dropped beyond the effective support.
const SUPPORT_TAIL: f64 = 1e-13;

/// Momentum span over which panel contributions must stay small before stopping.
const QUIET_SPAN: f64 = 3.0;

/// Panels evaluated per parallel batch in [`momentum_density`].
const BATCH_PANELS: usize = 8;

/// Largest relative residual accepted from the asymptotic tail fit.
const TAIL_FIT_TOL: f64 = 1e-4;

/// Evaluates `φ(p)` and `φ'(p)` for one orbital.
///
/// The radial integral runs over `[0, r_s]`, where `r_s ≤ r₀` is the smallest
/// radial panel end beyond which `∫ R² r dr` is below `1e-13`; by unitarity the
/// cut moves `∫ φ² p dp` by exactly that amount.
#[derive(Debug, Clone)]
pub struct MomentumTransform {
    orbital: ConfinedOrbital,
    reference: ReferenceRule,
    support: f64,
    base_grid: Vec<(f64, f64)>,
}

impl MomentumTransform {
    pub fn new(orbital: &ConfinedOrbital) -> Result<Self> {
        let support = effective_support(orbital)?;
        let mut t = Self {
            orbital: orbital.clone(),
            reference: reference_rule(DEFAULT_POINTS).into_owned(),
            support,
            base_grid: Vec::new(),
        };
        t.base_grid = t.grid(BASE_PANELS);
        Ok(t)
    }

    pub fn orbital(&self) -> &ConfinedOrbital {
        &self.orbital
    }

    /// Effective radial support `r_s`.
    pub fn support(&self) -> f64 {
        self.support
    }

    /// Radial panels used at momentum `p`: at least one per half period of `J_m(pr)`.
    pub fn panels_at(&self, p: f64) -> usize {
        let half_periods = (self.support * p / PI).ceil() as usize;
        half_periods.max(BASE_PANELS)
    }

    pub fn amplitude(&self, p: f64) -> f64 {
        self.amplitude_and_slope(p).0
    }

    /// `(φ(p), dφ/dp)`; the slope uses `J_m' = (J_{m-1} - J_{m+1}) / 2`.
    pub fn amplitude_and_slope(&self, p: f64) -> (f64, f64) {
        let panels = self.panels_at(p);
        if panels == BASE_PANELS {
            self.evaluate_on(&self.base_grid, p)
        } else {
            self.evaluate_on(&self.grid(panels), p)
        }
    }

    /// Radial nodes with `w R(r) r` folded into the weights.
    fn grid(&self, panels: usize) -> Vec<(f64, f64)> {
        let width = self.support / panels as f64;
        let half = 0.5 * width;
        let mut points = Vec::with_capacity(panels * self.reference.len());
        for k in 0..panels {
            let mid = (k as f64 + 0.5) * width;
            for (&x, &w) in self.reference.nodes().iter().zip(self.reference.weights()) {
                let r = mid + half * x;
                points.push((r, half * w * self.orbital.radial(r) * r));
            }
        }
        points
    }

    fn evaluate_on(&self, grid: &[(f64, f64)], p: f64) -> (f64, f64) {
        let m = self.orbital.state().m() as usize;
        let mut bessel = [0.0; 8];
        let orders = &mut bessel[..m + 2];
        let mut value = 0.0;
        let mut slope = 0.0;
        for &(r, weight) in grid {
            bessel_j_orders(p * r, orders);
            let djm = if m == 0 {
                -orders[1]
            } else {
                0.5 * (orders[m - 1] - orders[m + 1])
            };
            value += weight * orders[m];
            slope += weight * r * djm;
        }
        (value, slope)
    }
}

fn effective_support(orbital: &ConfinedOrbital) -> Result<f64> {
    let resolution = orbital.resolution();
    let r0 = orbital.r0();
    let rule = resolution.rule(r0)?;
    let panel = r0 / resolution.panels as f64;
    let mut tail = 0.0;
    for (r, w) in rule.points().collect::<Vec<_>>().into_iter().rev() {
        let rad = orbital.radial(r);
        tail += w * rad * rad * r;
        if tail > SUPPORT_TAIL {
            return Ok(((r / panel).ceil() * panel).min(r0));
        }
    }
    Ok(r0)
}

/// `φ(p)`, the radial momentum amplitude (its modulus is the physical one).
pub fn momentum_amplitude(orbital: &ConfinedOrbital, p: f64) -> Result<f64> {
    Ok(MomentumTransform::new(orbital)?.amplitude(p))
}

/// Settings for [`momentum_density_with`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MomentumOptions {
    pub rel_tol: f64,
    pub max_panels: usize,
    /// Panels kept beyond the automatic truncation point.
    pub extra_panels: usize,
    /// Continue the density past `p_max` with a fitted large-`p` expansion.
    pub asymptotic_tail: bool,
}

impl Default for MomentumOptions {
    fn default() -> Self {
        Self {
            rel_tol: DEFAULT_REL_TOL,
            max_panels: 20_000,
            extra_panels: 0,
            asymptotic_tail: true,
        }
    }
}

/// Width of the momentum panels: one unit, narrowed so that a panel never spans
/// more than half a period of the `cos²(p r_s)` ripple an abrupt radial edge
/// imprints on `φ²`.
pub fn momentum_panel_width(support: f64) -> f64 {
    (PI / support).min(1.0)
}

/// Large-`p` expansion of `φ` with edge `r_s`, phase `χ = p r_s - mπ/2 - π/4`:
///
/// `φ ≈ p^{-5/2} (c₀ cos χ + c₁ sin χ) + p^{-7/2} (c₂ cos χ + c₃ sin χ) + c₄ p^{-(m+3)} + c₅ p^{-(m+5)}`.
///
/// The oscillating terms come from the endpoint `r_s` (where `R` has a kink or
/// has decayed), the others from the odd powers of `r` in `R(r) r^{-m}` at the origin.
#[derive(Debug, Clone, PartialEq)]
pub struct AsymptoticAmplitude {
    m: u32,
    edge: f64,
    coeffs: [f64; 6],
}

impl AsymptoticAmplitude {
    const POWERS: [f64; 2] = [2.5, 3.5];

    /// Least-squares fit to samples `(p, φ(p))`; `None` when the fit residual
    /// exceeds `1e-4` of the largest sample.
    pub fn fit(m: u32, edge: f64, samples: &[(f64, f64)]) -> Option<Self> {
        let peak = samples.iter().map(|s| s.1.abs()).fold(0.0, f64::max);
        if samples.len() < 24 || !(peak > 0.0) {
            return None;
        }
        let mut columns: Vec<Vec<f64>> = (0..6).map(|_| Vec::with_capacity(samples.len())).collect();
        for &(p, _) in samples {
            for (col, v) in columns.iter_mut().zip(Self::basis(m, edge, p)) {
                col.push(v);
            }
        }
        let ys: Vec<f64> = samples.iter().map(|s| s.1).collect();
        let c = least_squares(columns, &ys)?;
        let model = Self {
            m,
            edge,
            coeffs: [c[0], c[1], c[2], c[3], c[4], c[5]],
        };
        let residual = samples
            .iter()
            .map(|&(p, y)| (model.amplitude_and_slope(p).0 - y).abs())
            .fold(0.0, f64::max);
        (residual <= TAIL_FIT_TOL * peak).then_some(model)
    }

    fn phase(&self, p: f64) -> f64 {
        phase(self.m, self.edge, p)
    }

    fn basis(m: u32, edge: f64, p: f64) -> [f64; 6] {
        let (sin, cos) = phase(m, edge, p).sin_cos();
        let a = p.powf(-Self::POWERS[0]);
        let b = p.powf(-Self::POWERS[1]);
        let origin = p.powi(-(m as i32 + 3));
        [a * cos, a * sin, b * cos, b * sin, origin, origin / (p * p)]
    }

    /// `(φ(p), φ'(p))` from the expansion.
    pub fn amplitude_and_slope(&self, p: f64) -> (f64, f64) {
        let c = &self.coeffs;
        let (sin, cos) = self.phase(p).sin_cos();
        let mut value = 0.0;
        let mut slope = 0.0;
        for (k, &power) in Self::POWERS.iter().enumerate() {
            let (cc, cs) = (c[2 * k], c[2 * k + 1]);
            let env = p.powf(-power);
            let osc = cc * cos + cs * sin;
            let dosc = self.edge * (cs * cos - cc * sin);
            value += env * osc;
            slope += env * (dosc - power * osc / p);
        }
        let n0 = f64::from(self.m + 3);
        for (k, &coef) in c[4..].iter().enumerate() {
            let n = n0 + 2.0 * k as f64;
            let term = coef * p.powf(-n);
            value += term;
            slope -= n * term / p;
        }
        (value, slope)
    }
}

fn phase(m: u32, edge: f64, p: f64) -> f64 {
    p * edge - (f64::from(m) * 0.5 + 0.25) * PI
}

/// Momentum density `g(p) = φ(p)²` tabulated on `[0, p_max]`.
///
/// Panels are added until their contributions to `∫ g p dp`, per unit of
/// momentum, stay below `rel_tol` times the accumulated norm over a span of
/// three momentum units. Unless disabled, an [`AsymptoticAmplitude`] fitted
/// to the last tabulated stretch continues the density to infinity; if the
/// fit is poor the density simply ends at `p_max`.
pub fn momentum_density(orbital: &ConfinedOrbital, rel_tol: f64) -> Result<RadialDensity> {
    momentum_density_with(
        orbital,
        MomentumOptions {
            rel_tol,
            ..MomentumOptions::default()
        },
    )
}

pub fn momentum_density_with(orbital: &ConfinedOrbital, options: MomentumOptions) -> Result<RadialDensity> {
    if !(options.rel_tol > 0.0) {
        return Err(QuadratureError::BadTailSettings.into());
    }
    let transform = Arc::new(MomentumTransform::new(orbital)?);
    let width = momentum_panel_width(transform.support);
    let npts = transform.reference.len();
    let quiet = (QUIET_SPAN / width).ceil() as usize;
    let mut acc = TailAccumulator::new(options.rel_tol * width).with_quiet_panels(quiet);
    let mut nodes = Vec::new();
    let mut weights = Vec::new();
    let mut amplitudes: Vec<(f64, f64)> = Vec::new();
    let mut panel = 0usize;
    let mut stop_after: Option<usize> = None;
    loop {
        if panel >= options.max_panels {
            return Err(QuadratureError::TailNotConverged {
                panels: options.max_panels,
                reached: options.max_panels as f64 * width,
            }
            .into());
        }
        let batch_end = (panel + BATCH_PANELS).min(options.max_panels);
        for k in panel..batch_end {
            let lo = k as f64 * width;
            transform.reference.map_into(lo, lo + width, &mut nodes, &mut weights);
        }
        let fresh: Vec<Vec<(f64, f64)>> = (panel..batch_end)
            .into_par_iter()
            .map(|k| {
                let ps = &nodes[k * npts..(k + 1) * npts];
                let grid = transform.grid(transform.panels_at(ps[npts - 1]));
                ps.iter().map(|&p| transform.evaluate_on(&grid, p)).collect()
            })
            .collect();
        amplitudes.extend(fresh.into_iter().flatten());
        for k in panel..batch_end {
            if stop_after.is_some() {
                break;
            }
            let part: f64 = (k * npts..(k + 1) * npts)
                .map(|i| weights[i] * nodes[i] * amplitudes[i].0 * amplitudes[i].0)
                .sum();
            if !part.is_finite() {
                return Err(QuadratureError::NonFiniteIntegrand {
                    x: nodes[k * npts],
                    value: part,
                }
                .into());
            }
            if acc.push(part) {
                stop_after = Some(k + options.extra_panels);
            }
        }
        panel = batch_end;
        if let Some(last) = stop_after {
            if panel > last {
                let keep = (last + 1) * npts;
                nodes.truncate(keep);
                weights.truncate(keep);
                amplitudes.truncate(keep);
                break;
            }
        }
    }
    let support_end = nodes.len() as f64 / npts as f64 * width;
    let tail = if options.asymptotic_tail {
        fit_tail(&transform, &nodes, &amplitudes, support_end)
    } else {
        None
    };
    let (values, slopes) = amplitudes.iter().map(|&(a, d)| (a * a, 2.0 * a * d)).unzip();
    let profile_transform = Arc::clone(&transform);
    let density = RadialDensity::from_samples(
        Space::Momentum,
        support_end,
        nodes,
        weights,
        values,
        slopes,
        Arc::new(move |p| {
            let (a, d) = profile_transform.amplitude_and_slope(p);
            (a * a, 2.0 * a * d)
        }),
    )?;
    Ok(match tail {
        Some(model) => {
            // cross terms between the oscillating and the monotone parts of φ
            // give g the full period of cos χ
            let period = 2.0 * PI / model.edge;
            density.with_tail(DensityTail::new(
                period,
                Arc::new(move |p| {
                    let (a, d) = model.amplitude_and_slope(p);
                    (a * a, 2.0 * a * d)
                }),
            )?)
        }
        None => density,
    })
}

/// Fits the large-`p` expansion to the last `max(3, 4 · 2π/r_s)` momentum units,
/// but never to more than the upper half of the tabulated range.
fn fit_tail(
    transform: &MomentumTransform,
    nodes: &[f64],
    amplitudes: &[(f64, f64)],
    p_max: f64,
) -> Option<AsymptoticAmplitude> {
    let window = QUIET_SPAN.max(8.0 * PI / transform.support).min(0.5 * p_max);
    let samples: Vec<(f64, f64)> = nodes
        .iter()
        .zip(amplitudes)
        .filter(|(&p, _)| p >= p_max - window)
        .map(|(&p, &(a, _))| (p, a))
        .collect();
    AsymptoticAmplitude::fit(transform.orbital.state().m(), transform.support, &samples)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::hydrogen2d::{optimize_alpha, ConfinementSetup, QuantumState};

    #[test]
    fn amplitude_at_origin() {
        let s = ConfinementSetup::hydrogen(2.0).unwrap();
        for state in [QuantumState::P2, QuantumState::D3] {
            let o = optimize_alpha(state, s).unwrap();
            assert_eq!(momentum_amplitude(&o, 0.0).unwrap(), 0.0);
        }
        let o = optimize_alpha(QuantumState::S1, s).unwrap();
        assert!(momentum_amplitude(&o, 0.0).unwrap() > 0.0);
    }

    #[test]
    fn free_ground_state_profile() {
        // 2D transform of e^{-2r} is proportional to (4 + p²)^{-3/2}
        let o = optimize_alpha(QuantumState::S1, ConfinementSetup::hydrogen(30.0).unwrap()).unwrap();
        assert!((o.alpha() - 2.0).abs() < 0.05);
        let t = MomentumTransform::new(&o).unwrap();
        let ratio = t.amplitude(1.0) / t.amplitude(0.0);
        assert!((ratio - 1.25f64.powf(-1.5)).abs() < 1e-3);
    }

    #[test]
    fn slope_matches_finite_difference() {
        let o = optimize_alpha(QuantumState::D3, ConfinementSetup::hydrogen(3.0).unwrap()).unwrap();
        let t = MomentumTransform::new(&o).unwrap();
        for p in [0.3, 1.7, 6.0, 25.0] {
            let h = 1e-5;
            let fd = (t.amplitude(p + h) - t.amplitude(p - h)) / (2.0 * h);
            let (_, d) = t.amplitude_and_slope(p);
            assert!((fd - d).abs() < 1e-7 * d.abs().max(1e-3), "p={p}: {fd} vs {d}");
        }
    }

    #[test]
    fn half_period_panels_are_converged() {
        for (state, r0) in [(QuantumState::S1, 0.5), (QuantumState::S2, 4.0), (QuantumState::D3, 12.0)] {
            let o = optimize_alpha(state, ConfinementSetup::hydrogen(r0).unwrap()).unwrap();
            let t = MomentumTransform::new(&o).unwrap();
            for p in [0.0, 0.7, 9.0, 80.0, 700.0] {
                let (a, d) = t.amplitude_and_slope(p);
                let (a2, d2) = t.evaluate_on(&t.grid(4 * t.panels_at(p)), p);
                assert!((a - a2).abs() < 1e-13, "{state} p={p}: {a} vs {a2}");
                assert!((d - d2).abs() < 1e-12, "{state} p={p}: {d} vs {d2}");
            }
        }
    }

    #[test]
    fn support_drops_negligible_tail() {
        let o = optimize_alpha(QuantumState::S1, ConfinementSetup::hydrogen(30.0).unwrap()).unwrap();
        let t = MomentumTransform::new(&o).unwrap();
        assert!(t.support() < 15.0);
        let o = optimize_alpha(QuantumState::S1, ConfinementSetup::hydrogen(2.0).unwrap()).unwrap();
        assert_eq!(MomentumTransform::new(&o).unwrap().support(), 2.0);
    }
}
