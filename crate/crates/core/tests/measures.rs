use std::f64::consts::PI;

use confined2d::hydrogen2d::optimize_alpha;
use confined2d::infotheory::{self, uncertainty_fisher, uncertainty_shannon};
use confined2d::momentum::{momentum_density, DEFAULT_REL_TOL};
use confined2d::*;

fn orbital(state: QuantumState, r0: f64) -> ConfinedOrbital {
    optimize_alpha(state, ConfinementSetup::hydrogen(r0).unwrap()).unwrap()
}

fn simpson<F: Fn(f64) -> f64>(f: F, a: f64, b: f64, n: usize) -> f64 {
    let h = (b - a) / n as f64;
    let inner: f64 = (1..n)
        .map(|i| f(a + i as f64 * h) * if i % 2 == 1 { 4.0 } else { 2.0 })
        .sum();
    (f(a) + inner + f(b)) * h / 3.0
}

fn both(state: QuantumState, r0: f64) -> (DensityMeasures, DensityMeasures) {
    let o = orbital(state, r0);
    let spec = MeasureSpec::default();
    let pos = DensityMeasures::compute(&o.position_density().unwrap(), &spec).unwrap();
    let mom = DensityMeasures::compute(&momentum_density(&o, DEFAULT_REL_TOL).unwrap(), &spec).unwrap();
    (pos, mom)
}

#[test]
fn position_fisher_is_four_times_gradient_norm() {
    for state in QuantumState::STUDIED {
        let o = orbital(state, 2.5);
        let rule = o.resolution().rule(2.5).unwrap();
        let grad: f64 = rule
            .points()
            .map(|(r, w)| {
                let d = o.radial_with_deriv(r).1;
                w * r * d * d
            })
            .sum();
        let f = infotheory::fisher(&o.position_density().unwrap()).unwrap();
        assert!((f - 4.0 * grad).abs() < 1e-6 * f, "{state}: {f} vs {}", 4.0 * grad);
    }
}

#[test]
fn uncertainty_and_complexity_bounds_on_a_grid() {
    for state in QuantumState::STUDIED {
        for r0 in [0.5, 1.0, 2.0, 5.0, 10.0] {
            let (pos, mom) = both(state, r0);
            assert!(pos.complexity_bounds_hold(), "{state} at {r0}: {pos:?}");
            assert!(mom.complexity_bounds_hold(), "{state} at {r0}: {mom:?}");
            let (sum, ok) = uncertainty_shannon(pos.shannon, mom.shannon);
            assert!(ok, "{state} at {r0}: S_sum = {sum}");
            let fu = uncertainty_fisher(pos.fisher, mom.fisher, state);
            assert_eq!(fu.applicable, state.m() == 0);
            assert_ne!(fu.satisfied, Some(false), "{state} at {r0}: F_prod = {}", fu.product);
        }
    }
}

#[test]
fn ground_state_entropies_follow_the_confinement() {
    let values: Vec<(f64, f64)> = [0.5, 1.0, 2.0, 4.0, 6.0]
        .iter()
        .map(|&r0| {
            let (pos, mom) = both(QuantumState::S1, r0);
            (pos.shannon, mom.shannon)
        })
        .collect();
    assert!(values.windows(2).all(|w| w[1].0 > w[0].0), "{values:?}");
    assert!(values.windows(2).all(|w| w[1].1 < w[0].1), "{values:?}");
}

#[test]
fn disequilibrium_matches_simpson_oracle() {
    let o = orbital(QuantumState::S1, 1.0);
    let oracle = simpson(|r| o.radial(r).powi(4) * r, 0.0, 1.0, 200_000) / (2.0 * PI);
    let value = infotheory::disequilibrium(&o.position_density().unwrap());
    assert!((value - oracle).abs() < 1e-7 * oracle, "{value} vs {oracle}");
}

#[test]
fn free_ground_state_closed_forms() {
    let (pos, mom) = both(QuantumState::S1, 30.0);
    let shannon = 2.0 + (PI / 8.0).ln();
    assert!((pos.shannon - shannon).abs() < 1e-3, "{}", pos.shannon);
    assert!((pos.fisher - 16.0).abs() < 1e-2, "{}", pos.fisher);
    // g(p) = 64 / (4 + p²)³ gives F = 3/2
    assert!((mom.fisher - 1.5).abs() < 1e-3, "{}", mom.fisher);
    let g = |p: f64| 64.0 / (4.0 + p * p).powi(3);
    let s_mom = (2.0 * PI).ln() - simpson(|p| g(p) * g(p).ln() * p, 0.0, 2000.0, 2_000_000);
    assert!((mom.shannon - s_mom).abs() < 1e-3, "{} vs {s_mom}", mom.shannon);
    // ∫ g² p dp / 2π = 4096 / (10 · 4⁵ · 2π)
    let diseq = 4096.0 / (10.0 * 1024.0 * 2.0 * PI);
    assert!((mom.disequilibrium - diseq).abs() < 1e-3 * diseq, "{}", mom.disequilibrium);
}

#[test]
fn lmc_renyi_complexity_orders() {
    let o = orbital(QuantumState::P2, 2.0);
    let d = o.position_density().unwrap();
    let c = |l, b| infotheory::complexity_lmc_renyi(&d, l, b).unwrap();
    // R_λ is non-increasing in λ, so widening the order gap cannot lower the complexity
    assert!(c(0.5, 3.0) >= c(2.0 / 3.0, 3.0));
    assert!(c(2.0 / 3.0, 4.0) >= c(2.0 / 3.0, 3.0));
    assert!((c(1.0, 2.0) - (infotheory::shannon(&d) - infotheory::renyi(&d, 2.0).unwrap()).exp()).abs() < 1e-12);
    assert!(infotheory::complexity_lmc_renyi(&d, 3.0, 2.0).is_err());
}
