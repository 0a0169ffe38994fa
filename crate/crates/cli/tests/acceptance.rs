//! Acceptance criteria, one PASS/FAIL line each. Runs without the libtest
//! harness so the report is always printed; exits non-zero if any fails.

use std::f64::consts::PI;
use std::sync::Arc;
use std::time::Instant;

use confined2d::hydrogen2d::{free_energy, optimize_alpha};
use confined2d::infotheory::{self, DensityMeasures};
use confined2d::quadrature::QuadratureRule;
use confined2d::specfun::{assoc_laguerre, bessel_j};
use confined2d::{ConfinementSetup, Error, MeasureRecord, QuantumState, RadialDensity, RecordValues, Space};
use confined2d_cli::output::Table1Row;
use confined2d_cli::{cmd_crossover, cmd_inversion, cmd_sweep, cmd_table1, Settings, TABLE1_TOL};
use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};

struct Report {
    failed: usize,
}

impl Report {
    fn check(&mut self, id: u32, name: &str, passed: bool, detail: String) {
        if !passed {
            self.failed += 1;
        }
        println!("[{}] {id:>2} {name}: {detail}", if passed { "PASS" } else { "FAIL" });
    }
}

fn values(records: &[MeasureRecord], state: QuantumState, r0: f64) -> Option<&RecordValues> {
    records
        .iter()
        .find(|r| r.state == state && r.r0 == r0)
        .and_then(|r| r.values.as_ref())
}

/// Worst `(margin, state, r0)` of `margin(values)` over the sweep rows of `states`.
fn worst<F>(records: &[MeasureRecord], states: &[QuantumState], margin: F) -> (f64, String)
where
    F: Fn(&RecordValues) -> f64,
{
    let mut worst = (f64::INFINITY, String::from("no rows"));
    for r in records.iter().filter(|r| states.contains(&r.state)) {
        let m = r.values.as_ref().map_or(f64::NEG_INFINITY, &margin);
        if !(m >= worst.0) {
            worst = (m, format!("{} at r0 = {}", r.state, r.r0));
        }
    }
    worst
}

fn table1(report: &mut Report) {
    let start = Instant::now();
    let rows: Vec<Table1Row> = cmd_table1(&Settings::default())
        .iter()
        .map(|c| Table1Row::new(c, TABLE1_TOL))
        .collect();
    let elapsed = start.elapsed().as_secs_f64();
    let ok = rows.iter().filter(|r| r.status == "ok").count();
    let worst = rows
        .iter()
        .map(|r| r.deviation.map_or(f64::INFINITY, |d| d.abs() / r.tolerance))
        .fold(0.0, f64::max);
    report.check(
        1,
        "Table I energies",
        rows.len() == 64 && ok == 64 && elapsed < 60.0,
        format!("{ok}/{} within tolerance, worst |dev|/tol = {worst:.3}, {elapsed:.2} s", rows.len()),
    );
}

fn free_limits(report: &mut Report, records: &[MeasureRecord]) {
    let mut detail = Vec::new();
    let mut ok = true;
    for state in QuantumState::STUDIED {
        let exact = free_energy(state.n(), 1.0);
        let e = values(records, state, 30.0).map_or(f64::NAN, |v| v.energy);
        ok &= (e - exact).abs() <= 1e-3;
        detail.push(format!("{state} {e:.6} (free {exact:.6})"));
    }
    report.check(2, "free-limit energies at r0 = 30", ok, detail.join(", "));

    let s = values(records, QuantumState::S1, 30.0).map_or(f64::NAN, |v| v.s_pos);
    let target = 2.0 + (PI / 8.0).ln();
    report.check(
        3,
        "free-limit Shannon S_pos(1s)",
        (s - target).abs() <= 0.01,
        format!("{s:.6} vs {target:.6}"),
    );

    let f1 = values(records, QuantumState::S1, 30.0).map_or(f64::NAN, |v| v.f_pos);
    let f2 = values(records, QuantumState::S2, 30.0).map_or(f64::NAN, |v| v.f_pos);
    report.check(
        4,
        "free-limit Fisher F_pos(1s), F_pos(2s)",
        (f1 - 16.0).abs() <= 0.16 && (f2 - 16.0 / 9.0).abs() <= 0.01 * 16.0 / 9.0,
        format!("{f1:.6} vs 16, {f2:.6} vs {:.6}", 16.0 / 9.0),
    );
}

fn sweep_bounds(report: &mut Report, records: &[MeasureRecord]) {
    let all = QuantumState::STUDIED;
    let failed = records.iter().filter(|r| r.values.is_none()).count();

    let (m, at) = worst(records, &all, |v| v.s_sum - (4.2894 - 1e-6));
    report.check(
        5,
        "entropic uncertainty",
        failed == 0 && m >= 0.0,
        format!("{} rows, min S_sum - 4.2894 = {:.6} ({at})", records.len(), m + 1e-6),
    );

    let s_states = [QuantumState::S1, QuantumState::S2];
    let (m, at) = worst(records, &s_states, |v| v.f_prod.unwrap_or(f64::NAN) - (16.0 - 1e-4));
    report.check(
        6,
        "Fisher uncertainty (1s, 2s)",
        failed == 0 && m >= 0.0,
        format!("min F_prod - 16 = {:.6} ({at})", m - 1e-4),
    );

    let (m, at) = worst(records, &all, |v| {
        [
            v.c_fs_pos - 2.0,
            v.c_fs_mom - 2.0,
            v.c_lmc_pos - 1.0,
            v.c_lmc_mom - 1.0,
            v.c_lr_pos - 1.0,
            v.c_lr_mom - 1.0,
        ]
        .into_iter()
        .fold(f64::INFINITY, f64::min)
            + 1e-6
    });
    report.check(
        7,
        "complexity lower bounds",
        failed == 0 && m >= 0.0,
        format!("smallest margin {:.6} ({at})", m - 1e-6),
    );
}

fn parseval(report: &mut Report, records: &[MeasureRecord]) {
    let failed = records.iter().filter(|r| r.values.is_none()).count();
    let (m, at) = worst(records, &QuantumState::STUDIED, |v| 1e-6 - v.parseval_defect);
    report.check(
        10,
        "Parseval",
        failed == 0 && m >= 0.0,
        format!("max momentum norm defect {:.3e} ({at})", 1e-6 - m),
    );
}

fn crossover_and_inversion(report: &mut Report) {
    let mut ok = true;
    let mut detail = Vec::new();
    for (state, result) in cmd_crossover(&Settings::default()) {
        match (state, result) {
            (QuantumState::S1, Err(Error::NoSignChange { .. })) => detail.push("1s none".to_string()),
            (QuantumState::S1, r) => {
                ok = false;
                detail.push(format!("1s unexpected {r:?}"));
            }
            (s, Ok(c)) => {
                ok &= (2.5..=3.1).contains(&c.estimate);
                detail.push(format!("{s} {:.4}", c.estimate));
            }
            (s, Err(e)) => {
                ok = false;
                detail.push(format!("{s} {e}"));
            }
        }
    }
    report.check(8, "entropic cross-over", ok, detail.join(", "));

    let (ok, detail) = match cmd_inversion(&Settings::default()) {
        Ok(c) => (c.estimate > 0.9 && c.estimate < 1.0, format!("r0* = {:.5}", c.estimate)),
        Err(e) => (false, e.to_string()),
    };
    report.check(9, "s-d inversion", ok, detail);
}

fn density(rule: &QuadratureRule, f: impl Fn(f64) -> (f64, f64) + Send + Sync + 'static) -> RadialDensity {
    RadialDensity::from_profile(Space::Position, rule, Arc::new(f)).expect("valid density")
}

/// Largest deviation of the uniform-disk and Gaussian measures from their closed forms.
fn closed_forms() -> f64 {
    let mut err: f64 = 0.0;
    for r0 in [0.5, 1.0, 3.0] {
        let h = 2.0 / (r0 * r0);
        let d = density(&QuadratureRule::composite(8, 16, 0.0, r0).unwrap(), move |_| (h, 0.0));
        let area = PI * r0 * r0;
        let m = DensityMeasures::compute(&d, &Default::default()).unwrap();
        for (got, want) in [
            (m.shannon, area.ln()),
            (m.renyi_lambda, area.ln()),
            (m.renyi_beta, area.ln()),
            (m.disequilibrium * area, 1.0),
            (m.fisher, 0.0),
            (m.complexity_lmc, 1.0),
            (m.complexity_lmc_renyi, 1.0),
        ] {
            err = err.max((got - want).abs());
        }
    }
    for sigma in [0.3, 1.0, 2.5] {
        let s2 = sigma * sigma;
        let rule = QuadratureRule::composite(64, 16, 0.0, 14.0 * sigma).unwrap();
        let d = density(&rule, move |r| {
            let f = (-r * r / (2.0 * s2)).exp() / s2;
            (f, -r / s2 * f)
        });
        let m = DensityMeasures::compute(&d, &Default::default()).unwrap();
        let renyi = |l: f64| (2.0 * PI * s2).ln() + l.ln() / (l - 1.0);
        for (got, want) in [
            (m.shannon, (2.0 * PI * s2).ln() + 1.0),
            (m.fisher * s2, 2.0),
            (m.renyi_lambda, renyi(2.0 / 3.0)),
            (m.renyi_beta, renyi(3.0)),
            (m.disequilibrium * 4.0 * PI * s2, 1.0),
            (m.complexity_fs, 2.0),
            (m.complexity_lmc, 0.5 * std::f64::consts::E),
        ] {
            err = err.max((got - want).abs());
        }
    }
    err
}

fn laguerre_recurrence() -> f64 {
    let mut err: f64 = 0.0;
    for a in 0..=6 {
        let a = f64::from(a);
        for i in 0..=400 {
            let x = 0.25 * f64::from(i);
            for k in 1..10u32 {
                let kf = f64::from(k);
                let lhs = (kf + 1.0) * assoc_laguerre(k + 1, a, x);
                let t1 = (2.0 * kf + a + 1.0 - x) * assoc_laguerre(k, a, x);
                let t2 = (kf + a) * assoc_laguerre(k - 1, a, x);
                let scale = lhs.abs().max(t1.abs()).max(t2.abs()).max(f64::MIN_POSITIVE);
                err = err.max((lhs - (t1 - t2)).abs() / scale);
            }
        }
    }
    err
}

fn bessel_recurrence() -> f64 {
    let mut err: f64 = 0.0;
    for i in 0..=9990 {
        let x = 0.1 + 0.01 * f64::from(i);
        for m in 1..=5u32 {
            let lhs = bessel_j(m - 1, x) + bessel_j(m + 1, x);
            let rhs = 2.0 * f64::from(m) / x * bessel_j(m, x);
            let scale = bessel_j(m - 1, x).abs().max(bessel_j(m + 1, x).abs()).max(rhs.abs());
            err = err.max((lhs - rhs).abs() / scale);
        }
    }
    err
}

/// Largest scaled error of Gauss-Legendre rules on random polynomials of degree `2n - 1`.
fn quadrature_exactness() -> f64 {
    let mut rng = StdRng::seed_from_u64(7);
    let mut err: f64 = 0.0;
    for _ in 0..100 {
        let n = rng.gen_range(1..=20usize);
        let a: f64 = rng.gen_range(-3.0..1.0);
        let b = a + rng.gen_range(0.1..4.0);
        let c: Vec<f64> = (0..2 * n).map(|_| rng.gen_range(-1.0..1.0)).collect();
        let poly = |x: f64| c.iter().rev().fold(0.0, |acc, k| acc * x + k);
        let anti = |x: f64| {
            c.iter()
                .enumerate()
                .rev()
                .fold(0.0, |acc, (i, k)| acc * x + k / (i as f64 + 1.0))
                * x
        };
        let rule = QuadratureRule::gauss_legendre(n, a, b).unwrap();
        let got = rule.integrate(poly).unwrap();
        let scale: f64 = c.iter().map(|k| k.abs()).sum::<f64>() * a.abs().max(b.abs()).max(1.0).powi(2 * n as i32);
        err = err.max((got - (anti(b) - anti(a))).abs() / scale);
    }
    err
}

/// Largest relative gap between `F_pos` and `4 ∫ R'² r dr` for real orbitals.
fn fisher_identity() -> f64 {
    let mut err: f64 = 0.0;
    for state in [QuantumState::S1, QuantumState::S2] {
        for r0 in [0.5, 1.0, 3.0, 10.0] {
            let o = optimize_alpha(state, ConfinementSetup::hydrogen(r0).unwrap()).unwrap();
            let grad: f64 = o
                .resolution()
                .rule(r0)
                .unwrap()
                .points()
                .map(|(r, w)| w * r * o.radial_with_deriv(r).1.powi(2))
                .sum();
            let f = infotheory::fisher(&o.position_density().unwrap()).unwrap();
            err = err.max((f - 4.0 * grad).abs() / f);
        }
    }
    err
}

/// Shape checks on the sweep grid: monotone ground-state entropies and the
/// between-state complexity orderings.
fn qualitative(records: &[MeasureRecord]) -> Vec<String> {
    use QuantumState as Q;
    let mut problems = Vec::new();
    let ground: Vec<&MeasureRecord> = records.iter().filter(|r| r.state == Q::S1).collect();
    let pairs = ground.windows(2).filter_map(|w| Some((w[0].values.as_ref()?, w[1].values.as_ref()?)));
    for (a, b) in pairs {
        if !(b.s_pos > a.s_pos && b.s_mom < a.s_mom) {
            problems.push("1s entropies not monotone".to_string());
            break;
        }
    }
    let mut radii: Vec<f64> = records.iter().map(|r| r.r0).collect();
    radii.sort_by(f64::total_cmp);
    radii.dedup();
    type Pick = fn(&RecordValues) -> f64;
    let orderings: [(&str, f64, Pick, [Q; 4], bool); 5] = [
        ("C_FS_pos 1s<2p<3d<2s", 5.0, |v| v.c_fs_pos, [Q::S1, Q::P2, Q::D3, Q::S2], true),
        ("C_LMC_pos 1s>2p>2s>3d", 5.0, |v| v.c_lmc_pos, [Q::S1, Q::P2, Q::S2, Q::D3], false),
        ("C_LR_pos 1s>2p>2s>3d", 5.0, |v| v.c_lr_pos, [Q::S1, Q::P2, Q::S2, Q::D3], false),
        ("C_LMC_mom 2s>1s>2p>3d", 5.0, |v| v.c_lmc_mom, [Q::S2, Q::S1, Q::P2, Q::D3], false),
        ("C_LR_mom 2s>1s>2p>3d", 5.0, |v| v.c_lr_mom, [Q::S2, Q::S1, Q::P2, Q::D3], false),
    ];
    for (name, from, pick, order, increasing) in orderings {
        for &r0 in radii.iter().filter(|&&r| r >= from) {
            let vals: Option<Vec<f64>> = order.iter().map(|&s| values(records, s, r0).map(pick)).collect();
            let Some(vals) = vals else { continue };
            let holds = vals.windows(2).all(|w| if increasing { w[0] < w[1] } else { w[0] > w[1] });
            if !holds {
                problems.push(format!("{name} at r0 = {r0}"));
            }
        }
    }
    // sets in between r0 = 6 and 8 on this grid
    for &r0 in radii.iter().filter(|&&r| r >= 8.0) {
        let v: Option<Vec<f64>> = [Q::S1, Q::P2, Q::S2, Q::D3]
            .iter()
            .map(|&s| values(records, s, r0).map(|v| v.c_fs_mom))
            .collect();
        if let Some(v) = v {
            if !v.windows(2).all(|w| w[0] < w[1]) {
                problems.push(format!("C_FS_mom 1s<2p<2s<3d at r0 = {r0}"));
            }
        }
    }
    problems
}

fn properties(report: &mut Report, records: &[MeasureRecord]) {
    let closed = closed_forms();
    let lag = laguerre_recurrence();
    let bes = bessel_recurrence();
    let quad = quadrature_exactness();
    let fisher = fisher_identity();
    let shape = qualitative(records);
    report.check(
        11,
        "property suites",
        closed <= 1e-6 && lag <= 1e-10 && bes <= 1e-9 && quad <= 1e-13 && fisher <= 1e-6 && shape.is_empty(),
        format!(
            "closed forms {closed:.1e}, Laguerre {lag:.1e}, Bessel {bes:.1e}, GL exactness {quad:.1e}, \
             Fisher identity {fisher:.1e}, shape checks {}",
            if shape.is_empty() { "ok".to_string() } else { shape.join("; ") }
        ),
    );
}

fn main() {
    let mut report = Report { failed: 0 };
    table1(&mut report);
    let start = Instant::now();
    let records = cmd_sweep(&Settings::default());
    println!(
        "       sweep: {} rows on the default grid in {:.1} s",
        records.len(),
        start.elapsed().as_secs_f64()
    );
    free_limits(&mut report, &records);
    sweep_bounds(&mut report, &records);
    crossover_and_inversion(&mut report);
    parseval(&mut report, &records);
    properties(&mut report, &records);
    if report.failed > 0 {
        println!("{} acceptance criteria failed", report.failed);
        std::process::exit(1);
    }
    println!("all acceptance criteria passed");
}
