//! One-dimensional minimization: coarse log-spaced scan followed by Brent refinement.

use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Minimum {
    pub x: f64,
    pub value: f64,
    /// The scan minimum sat on the lower end of the window; `x` is then a
    /// constrained minimizer rather than a stationary point.
    pub at_lower_edge: bool,
    pub evaluations: usize,
}

/// Minimizes `f` on `[lo, hi]`.
///
/// The window is sampled at `scan_points` log-spaced abscissae; the best sample
/// and its neighbours seed Brent's method, which runs until the bracket is
/// narrower than `xtol` (plus a relative term at the `sqrt(eps)` floor).
/// A best sample at the upper end is reported as [`Error::NoBracket`].
pub fn minimize_log_window<F>(mut f: F, lo: f64, hi: f64, scan_points: usize, xtol: f64) -> Result<Minimum>
where
    F: FnMut(f64) -> Result<f64>,
{
    assert!(lo > 0.0 && hi > lo && scan_points >= 3);
    let ratio = (hi / lo).ln() / (scan_points - 1) as f64;
    let xs: Vec<f64> = (0..scan_points)
        .map(|i| if i + 1 == scan_points { hi } else { lo * (ratio * i as f64).exp() })
        .collect();
    let mut values = Vec::with_capacity(scan_points);
    for &x in &xs {
        values.push(f(x)?);
    }
    let best = values
        .iter()
        .enumerate()
        .filter(|(_, v)| v.is_finite())
        .min_by(|a, b| a.1.total_cmp(b.1))
        .map(|(i, _)| i)
        .ok_or(Error::NoBracket { lo, hi })?;
    if best + 1 == scan_points {
        return Err(Error::NoBracket { lo, hi });
    }
    let a = xs[best.saturating_sub(1)];
    let b = xs[best + 1];
    let mut evaluations = scan_points;
    let (x, value) = brent(&mut f, a, b, (xs[best], values[best]), xtol, &mut evaluations)?;
    let at_lower_edge = best == 0 && (x - lo) <= 2.0 * xtol + 1e-8 * lo;
    Ok(Minimum {
        x,
        value,
        at_lower_edge,
        evaluations,
    })
}

const GOLDEN: f64 = 0.381_966_011_250_105_1;

/// Brent's parabolic/golden-section minimizer on `[a, b]` seeded with a known point.
fn brent<F>(f: &mut F, mut a: f64, mut b: f64, start: (f64, f64), xtol: f64, evals: &mut usize) -> Result<(f64, f64)>
where
    F: FnMut(f64) -> Result<f64>,
{
    let sqrt_eps = f64::EPSILON.sqrt();
    let (mut x, mut fx) = start;
    let (mut w, mut fw) = start;
    let (mut v, mut fv) = start;
    let mut d: f64 = 0.0;
    let mut e: f64 = 0.0;
    for _ in 0..500 {
        let mid = 0.5 * (a + b);
        let tol1 = sqrt_eps * x.abs() + xtol / 3.0;
        let tol2 = 2.0 * tol1;
        if (x - mid).abs() <= tol2 - 0.5 * (b - a) {
            break;
        }
        let mut golden = true;
        if e.abs() > tol1 {
            let r = (x - w) * (fx - fv);
            let mut q = (x - v) * (fx - fw);
            let mut p = (x - v) * q - (x - w) * r;
            q = 2.0 * (q - r);
            if q > 0.0 {
                p = -p;
            }
            q = q.abs();
            if p.abs() < (0.5 * q * e).abs() && p > q * (a - x) && p < q * (b - x) {
                e = d;
                d = p / q;
                let u = x + d;
                if u - a < tol2 || b - u < tol2 {
                    d = if x < mid { tol1 } else { -tol1 };
                }
                golden = false;
            }
        }
        if golden {
            e = if x < mid { b - x } else { a - x };
            d = GOLDEN * e;
        }
        let u = if d.abs() >= tol1 { x + d } else { x + tol1.copysign(d) };
        let fu = f(u)?;
        *evals += 1;
        if fu <= fx {
            if u < x {
                b = x;
            } else {
                a = x;
            }
            (v, fv) = (w, fw);
            (w, fw) = (x, fx);
            (x, fx) = (u, fu);
        } else {
            if u < x {
                a = u;
            } else {
                b = u;
            }
            if fu <= fw || w == x {
                (v, fv) = (w, fw);
                (w, fw) = (u, fu);
            } else if fu <= fv || v == x || v == w {
                (v, fv) = (u, fu);
            }
        }
    }
    Ok((x, fx))
}
