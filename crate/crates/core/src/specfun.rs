//! Special functions used to build the trial orbitals and their Hankel transforms.
//!
//! Everything here is a pure scalar function in double precision. The Bessel
//! routines are tuned for the integer orders and argument ranges that occur in
//! the momentum-space transforms (order ≤ a handful, argument up to ~10⁴).

use std::f64::consts::{FRAC_PI_4, PI};

/// Rising factorial `a (a+1) … (a+k-1)`; the empty product is 1.
pub fn pochhammer(a: f64, k: u32) -> f64 {
    (0..k).fold(1.0, |acc, i| acc * (a + f64::from(i)))
}

/// Generalized Laguerre polynomial `L_k^a(x)` by forward recurrence in the degree.
pub fn assoc_laguerre(k: u32, a: f64, x: f64) -> f64 {
    if k == 0 {
        return 1.0;
    }
    let mut prev = 1.0;
    let mut cur = 1.0 + a - x;
    for j in 1..k {
        let j = f64::from(j);
        let next = ((2.0 * j + 1.0 + a - x) * cur - (j + a) * prev) / (j + 1.0);
        prev = cur;
        cur = next;
    }
    cur
}

/// Derivative of `L_k^a` with respect to `x`, via `d/dx L_k^a = -L_{k-1}^{a+1}`.
pub fn assoc_laguerre_deriv(k: u32, a: f64, x: f64) -> f64 {
    if k == 0 {
        0.0
    } else {
        -assoc_laguerre(k - 1, a + 1.0, x)
    }
}

/// Bessel function of the first kind `J_m(x)` for integer `m ≥ 0` and `x ≥ 0`.
pub fn bessel_j(m: u32, x: f64) -> f64 {
    let mut out = [0.0; 8];
    let n = m as usize + 1;
    if n <= out.len() {
        bessel_j_orders(x, &mut out[..n]);
        out[m as usize]
    } else {
        let mut out = vec![0.0; n];
        bessel_j_orders(x, &mut out);
        out[m as usize]
    }
}

const SERIES_LIMIT: f64 = 2.0;
const ASYMPTOTIC_LIMIT: f64 = 16.0;

/// Fills `out[k] = J_k(x)` for `k = 0..out.len()`.
///
/// Small arguments use the power series, intermediate ones Miller's backward
/// recurrence normalized by `J_0 + 2 Σ J_2k = 1`, and large ones the Hankel
/// asymptotic expansion for `J_0`, `J_1` followed by upward recurrence (stable
/// while the order stays below `x`).
pub fn bessel_j_orders(x: f64, out: &mut [f64]) {
    if out.is_empty() {
        return;
    }
    debug_assert!(x >= 0.0, "bessel_j_orders: negative argument {x}");
    let max_order = out.len() - 1;
    if x == 0.0 {
        out.fill(0.0);
        out[0] = 1.0;
    } else if x <= SERIES_LIMIT {
        for (m, slot) in out.iter_mut().enumerate() {
            *slot = bessel_series(m as u32, x);
        }
    } else if x >= ASYMPTOTIC_LIMIT && (max_order as f64) < 0.5 * x {
        let (j0, j1) = bessel_01_asymptotic(x);
        out[0] = j0;
        if max_order >= 1 {
            out[1] = j1;
        }
        for m in 1..max_order {
            out[m + 1] = 2.0 * m as f64 / x * out[m] - out[m - 1];
        }
    } else {
        bessel_miller(x, out);
    }
}

fn bessel_series(m: u32, x: f64) -> f64 {
    let half = 0.5 * x;
    let mut term = 1.0;
    for k in 1..=m {
        term *= half / f64::from(k);
    }
    let q = -half * half;
    let mut sum = term;
    let mut k = 1.0;
    loop {
        term *= q / (k * (k + f64::from(m)));
        sum += term;
        if term.abs() <= 1e-17 * sum.abs() {
            break;
        }
        k += 1.0;
    }
    sum
}

fn bessel_miller(x: f64, out: &mut [f64]) {
    let max_order = out.len() - 1;
    let top = x.max(max_order as f64);
    let mut start = (top + 30.0 + 6.0 * top.sqrt()) as usize;
    start += start % 2;
    let mut next = 0.0;
    let mut cur = 1e-300;
    let mut norm = 0.0;
    out.fill(0.0);
    for k in (1..=start).rev() {
        let prev = 2.0 * k as f64 / x * cur - next;
        next = cur;
        cur = prev;
        // cur now holds the unnormalized J_{k-1}
        let order = k - 1;
        if order <= max_order {
            out[order] = cur;
        }
        if order > 0 && order % 2 == 0 {
            norm += 2.0 * cur;
        }
        if cur.abs() > 1e250 {
            cur *= 1e-250;
            next *= 1e-250;
            norm *= 1e-250;
            out.iter_mut().for_each(|v| *v *= 1e-250);
        }
    }
    norm += cur;
    let scale = 1.0 / norm;
    out.iter_mut().for_each(|v| *v *= scale);
}

fn bessel_01_asymptotic(x: f64) -> (f64, f64) {
    let (p0, q0) = hankel_pq(0.0, x);
    let (p1, q1) = hankel_pq(4.0, x);
    let (s, c) = x.sin_cos();
    // chi0 = x - pi/4, chi1 = x - 3pi/4
    let (s4, c4) = FRAC_PI_4.sin_cos();
    let cos0 = c * c4 + s * s4;
    let sin0 = s * c4 - c * s4;
    let cos1 = -c * c4 + s * s4;
    let sin1 = s * -c4 - c * s4;
    let amp = (2.0 / (PI * x)).sqrt();
    (
        amp * (p0 * cos0 - q0 * sin0),
        amp * (p1 * cos1 - q1 * sin1),
    )
}

/// Hankel asymptotic series `P(ν, x)`, `Q(ν, x)` with `mu = 4ν²`.
fn hankel_pq(mu: f64, x: f64) -> (f64, f64) {
    let eight_x = 8.0 * x;
    let mut p = 1.0;
    let mut q = 0.0;
    let mut term = 1.0;
    let mut prev_mag = f64::INFINITY;
    for k in 1..60 {
        let odd = (2 * k - 1) as f64;
        term *= (mu - odd * odd) / (k as f64 * eight_x);
        let mag = term.abs();
        if mag > prev_mag {
            break;
        }
        prev_mag = mag;
        // k odd feeds Q with alternating signs, k even feeds P
        match k % 4 {
            1 => q += term,
            2 => p -= term,
            3 => q -= term,
            _ => p += term,
        }
        if mag < 1e-17 {
            break;
        }
    }
    (p, q)
}
