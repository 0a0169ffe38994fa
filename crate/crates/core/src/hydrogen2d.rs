//! Variational orbitals of the hydrogenic atom confined to a disk with an
//! impenetrable wall.
//!
//! A trial radial function has the form
//!
//! ```text
//! u(r) = e^{-αr} (αr)^|m| q(r) (1 - r/r₀)
//! ```
//!
//! where the cut-off factor enforces `u(r₀) = 0` and `q` carries the radial
//! nodes. For circular states (`m = n - 1`) `q ≡ 1`. For the others `q` is
//! either the free-atom Laguerre polynomial `L_{n-|m|-1}^{2|m|}(αr)`
//! ([`Ansatz::Laguerre`]) or a polynomial `1 + c₁r + … + c_k r^k` whose
//! coefficients make the trial function orthogonal to the already optimized
//! lower states of the same `m` ([`Ansatz::Orthogonalized`], the default).
//! Minimizing the energy of the plain Laguerre form lets the excited state
//! slide down onto the ground state, so only the orthogonalized form is a
//! usable excited-state approximation.

use std::fmt;
use std::str::FromStr;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::density::{RadialDensity, Space};
use crate::error::{Error, Result};
use crate::linalg::solve_dense;
use crate::minimize::minimize_log_window;
use crate::quadrature::{QuadratureRule, DEFAULT_POINTS};
use crate::specfun::{assoc_laguerre, assoc_laguerre_deriv, pochhammer};

/// Radius standing in for the unconfined atom.
pub const FREE_PROXY_RADIUS: f64 = 30.0;

const ORBITAL_LETTERS: &[u8] = b"spdfghik";

/// Quantum numbers `(n, m)` with `n ≥ 1` and `0 ≤ m ≤ n - 1`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct QuantumState {
    n: u32,
    m: u32,
}

impl QuantumState {
    pub const S1: Self = Self { n: 1, m: 0 };
    pub const S2: Self = Self { n: 2, m: 0 };
    pub const P2: Self = Self { n: 2, m: 1 };
    pub const D3: Self = Self { n: 3, m: 2 };

    /// The four states tabulated and analysed by default, in output order.
    pub const STUDIED: [Self; 4] = [Self::S1, Self::S2, Self::P2, Self::D3];

    pub fn new(n: u32, m: u32) -> Result<Self> {
        if n == 0 || m >= n {
            return Err(Error::InvalidState { n, m });
        }
        Ok(Self { n, m })
    }

    pub fn n(self) -> u32 {
        self.n
    }

    pub fn m(self) -> u32 {
        self.m
    }

    /// Number of radial nodes, `n - |m| - 1`.
    pub fn radial_degree(self) -> u32 {
        self.n - self.m - 1
    }

    pub fn is_circular(self) -> bool {
        self.m + 1 == self.n
    }

    pub fn label(self) -> String {
        self.to_string()
    }
}

impl fmt::Display for QuantumState {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match ORBITAL_LETTERS.get(self.m as usize) {
            Some(&c) => write!(f, "{}{}", self.n, c as char),
            None => write!(f, "({},{})", self.n, self.m),
        }
    }
}

impl FromStr for QuantumState {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        let bad = || Error::UnknownLabel(s.to_string());
        let split = s.find(|c: char| !c.is_ascii_digit()).ok_or_else(bad)?;
        let (digits, letter) = s.split_at(split);
        let n: u32 = digits.parse().map_err(|_| bad())?;
        let letter = letter.to_ascii_lowercase();
        if letter.len() != 1 {
            return Err(bad());
        }
        let m = ORBITAL_LETTERS
            .iter()
            .position(|&c| c == letter.as_bytes()[0])
            .ok_or_else(bad)? as u32;
        Self::new(n, m).map_err(|_| bad())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub enum Radius {
    Finite(f64),
    /// Unconfined atom, evaluated at [`FREE_PROXY_RADIUS`].
    Free,
}

/// Confinement radius `r₀` (bohr) and nuclear charge `Z`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ConfinementSetup {
    radius: Radius,
    z: f64,
}

impl ConfinementSetup {
    pub fn new(r0: f64, z: f64) -> Result<Self> {
        if !(r0 > 0.0 && r0.is_finite()) {
            return Err(Error::InvalidRadius(r0));
        }
        if !(z > 0.0 && z.is_finite()) {
            return Err(Error::InvalidCharge(z));
        }
        Ok(Self {
            radius: Radius::Finite(r0),
            z,
        })
    }

    /// Hydrogen (`Z = 1`) in a disk of radius `r0`.
    pub fn hydrogen(r0: f64) -> Result<Self> {
        Self::new(r0, 1.0)
    }

    pub fn free(z: f64) -> Result<Self> {
        if !(z > 0.0 && z.is_finite()) {
            return Err(Error::InvalidCharge(z));
        }
        Ok(Self { radius: Radius::Free, z })
    }

    pub fn radius(&self) -> Radius {
        self.radius
    }

    /// Effective wall radius used in computations.
    pub fn r0(&self) -> f64 {
        match self.radius {
            Radius::Finite(r) => r,
            Radius::Free => FREE_PROXY_RADIUS,
        }
    }

    pub fn charge(&self) -> f64 {
        self.z
    }

    pub fn is_free(&self) -> bool {
        matches!(self.radius, Radius::Free)
    }
}

/// `β_n = 2Z / (n - 1/2)`, the exponent scale of the free radial function.
pub fn free_beta(n: u32, z: f64) -> f64 {
    2.0 * z / (f64::from(n) - 0.5)
}

/// Exact free-atom energy `-Z² / (2 (n - 1/2)²)`.
pub fn free_energy(n: u32, z: f64) -> f64 {
    let nh = f64::from(n) - 0.5;
    -z * z / (2.0 * nh * nh)
}

/// Normalization of the free radial function `e^{-βr/2} (βr)^m L(βr)` with
/// respect to `∫ R² r dr = 1`: `β / sqrt((2n - 1) (n-m)_{2m})`.
pub fn free_normalization(state: QuantumState, z: f64) -> f64 {
    let n = f64::from(state.n);
    let beta = free_beta(state.n, z);
    beta / ((2.0 * n - 1.0) * pochhammer(n - f64::from(state.m), 2 * state.m)).sqrt()
}

/// Normalized free-atom radial function `R_{n,m}(r)`.
pub fn free_radial(state: QuantumState, z: f64, r: f64) -> f64 {
    let beta = free_beta(state.n, z);
    let x = beta * r;
    let m = state.m as i32;
    free_normalization(state, z)
        * (-0.5 * x).exp()
        * x.powi(m)
        * assoc_laguerre(state.radial_degree(), f64::from(2 * state.m), x)
}

/// Form of the node-carrying factor `q(r)` of non-circular trial functions.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
pub enum Ansatz {
    /// `q(r) = 1 + c₁r + … + c_k r^k`, orthogonal to the optimized lower states.
    #[default]
    Orthogonalized,
    /// `q(r) = L_k^{2|m|}(αr)` with the same `α` as the exponential.
    Laguerre,
}

/// Composite Gauss-Legendre layout for radial position-space integrals.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct Resolution {
    pub panels: usize,
    pub points: usize,
}

impl Default for Resolution {
    fn default() -> Self {
        Self {
            panels: 64,
            points: DEFAULT_POINTS,
        }
    }
}

impl Resolution {
    pub fn doubled(self) -> Self {
        Self {
            panels: 2 * self.panels,
            ..self
        }
    }

    pub fn rule(self, r0: f64) -> Result<QuadratureRule> {
        Ok(QuadratureRule::composite(self.panels, self.points, 0.0, r0)?)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
enum NodeFactor {
    Laguerre { degree: u32, order: f64 },
    /// Coefficients of `q(r)` in powers of `r`, constant term first.
    Polynomial(Vec<f64>),
}

/// Unnormalized trial radial function `u(r)` for one value of `α`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TrialRadial {
    m: u32,
    alpha: f64,
    r0: f64,
    factor: NodeFactor,
}

impl TrialRadial {
    fn circular(m: u32, alpha: f64, r0: f64) -> Self {
        Self {
            m,
            alpha,
            r0,
            factor: NodeFactor::Polynomial(vec![1.0]),
        }
    }

    pub fn alpha(&self) -> f64 {
        self.alpha
    }

    pub fn r0(&self) -> f64 {
        self.r0
    }

    /// Coefficients of the node polynomial, when the trial is orthogonalized.
    pub fn node_polynomial(&self) -> Option<&[f64]> {
        match &self.factor {
            NodeFactor::Polynomial(c) => Some(c),
            NodeFactor::Laguerre { .. } => None,
        }
    }

    fn factor(&self, r: f64) -> (f64, f64) {
        match &self.factor {
            NodeFactor::Laguerre { degree, order } => {
                let x = self.alpha * r;
                (
                    assoc_laguerre(*degree, *order, x),
                    self.alpha * assoc_laguerre_deriv(*degree, *order, x),
                )
            }
            NodeFactor::Polynomial(c) => {
                let mut q = 0.0;
                let mut dq = 0.0;
                for &cj in c.iter().rev() {
                    dq = dq * r + q;
                    q = q * r + cj;
                }
                (q, dq)
            }
        }
    }

    /// `u(r)` without domain checking.
    pub fn value(&self, r: f64) -> f64 {
        self.value_and_deriv(r).0
    }

    /// `(u(r), u'(r))` without domain checking.
    pub fn value_and_deriv(&self, r: f64) -> (f64, f64) {
        let m = self.m as i32;
        let a = self.alpha;
        let e = (-a * r).exp();
        let cut = 1.0 - r / self.r0;
        let (q, dq) = self.factor(r);
        let power = (a * r).powi(m);
        let dpower = if m == 0 { 0.0 } else { f64::from(self.m) * a * (a * r).powi(m - 1) };
        let u = e * power * q * cut;
        let du = e * (dpower * q * cut + power * (dq * cut - q / self.r0 - a * q * cut));
        (u, du)
    }

    pub fn eval(&self, r: f64) -> Result<f64> {
        self.check(r)?;
        Ok(self.value(r))
    }

    pub fn eval_deriv(&self, r: f64) -> Result<f64> {
        self.check(r)?;
        Ok(self.value_and_deriv(r).1)
    }

    fn check(&self, r: f64) -> Result<()> {
        if (0.0..=self.r0).contains(&r) {
            Ok(())
        } else {
            Err(Error::OutsideDomain { r, r0: self.r0 })
        }
    }
}

/// An optimized (or merely normalized) confined trial state.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ConfinedOrbital {
    state: QuantumState,
    setup: ConfinementSetup,
    alpha: f64,
    norm: f64,
    energy: f64,
    trial: TrialRadial,
    resolution: Resolution,
    constrained: bool,
}

impl ConfinedOrbital {
    pub fn state(&self) -> QuantumState {
        self.state
    }

    pub fn setup(&self) -> ConfinementSetup {
        self.setup
    }

    pub fn r0(&self) -> f64 {
        self.setup.r0()
    }

    pub fn alpha(&self) -> f64 {
        self.alpha
    }

    pub fn norm(&self) -> f64 {
        self.norm
    }

    /// Rayleigh-quotient energy in hartree.
    pub fn energy(&self) -> f64 {
        self.energy
    }

    pub fn trial(&self) -> &TrialRadial {
        &self.trial
    }

    pub fn resolution(&self) -> Resolution {
        self.resolution
    }

    /// True when the optimal `α` sits on the lower end of the search window.
    pub fn is_constrained(&self) -> bool {
        self.constrained
    }

    /// Normalized radial function `R(r) = norm · u(r)`.
    pub fn radial(&self, r: f64) -> f64 {
        self.norm * self.trial.value(r)
    }

    pub fn radial_with_deriv(&self, r: f64) -> (f64, f64) {
        let (u, du) = self.trial.value_and_deriv(r);
        (self.norm * u, self.norm * du)
    }

    /// Radial position profile `f(r) = R(r)²`; the 2D density is `f / (2π)`.
    pub fn position_density(&self) -> Result<RadialDensity> {
        let rule = self.resolution.rule(self.r0())?;
        let orbital = self.clone();
        RadialDensity::from_profile(
            Space::Position,
            &rule,
            Arc::new(move |r| {
                if !(0.0..=orbital.r0()).contains(&r) {
                    return (0.0, 0.0);
                }
                let (rad, d) = orbital.radial_with_deriv(r);
                (rad * rad, 2.0 * rad * d)
            }),
        )
    }
}

/// Knobs for building and optimizing trial states.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SolverOptions {
    pub ansatz: Ansatz,
    pub resolution: Resolution,
    /// Lower end of the `α` search window; the upper end is `4 Z n`.
    pub alpha_floor: f64,
    pub scan_points: usize,
    pub alpha_tol: f64,
}

impl Default for SolverOptions {
    fn default() -> Self {
        Self {
            ansatz: Ansatz::Orthogonalized,
            resolution: Resolution::default(),
            alpha_floor: 0.01,
            scan_points: 60,
            alpha_tol: 1e-8,
        }
    }
}

/// Energy functional `E(α)` of one state at one confinement.
///
/// Building the problem optimizes the lower states the trial function must be
/// orthogonal to, so reuse it when evaluating many `α`.
#[derive(Debug, Clone)]
pub struct VariationalProblem {
    state: QuantumState,
    setup: ConfinementSetup,
    options: SolverOptions,
    rule: QuadratureRule,
    lower: Vec<ConfinedOrbital>,
}

impl VariationalProblem {
    pub fn new(state: QuantumState, setup: ConfinementSetup) -> Result<Self> {
        Self::with_options(state, setup, SolverOptions::default())
    }

    pub fn with_options(state: QuantumState, setup: ConfinementSetup, options: SolverOptions) -> Result<Self> {
        let rule = options.resolution.rule(setup.r0())?;
        let mut lower = Vec::new();
        if options.ansatz == Ansatz::Orthogonalized {
            for n in (state.m + 1)..state.n {
                let below = QuantumState::new(n, state.m)?;
                lower.push(Self::with_options(below, setup, options)?.optimize()?);
            }
        }
        Ok(Self {
            state,
            setup,
            options,
            rule,
            lower,
        })
    }

    /// The same problem on a different radial rule, keeping the lower states
    /// (and hence the orthogonality constraints' parameters) as they are.
    pub fn at_resolution(&self, resolution: Resolution) -> Result<Self> {
        Ok(Self {
            options: SolverOptions {
                resolution,
                ..self.options
            },
            rule: resolution.rule(self.setup.r0())?,
            ..self.clone()
        })
    }

    pub fn state(&self) -> QuantumState {
        self.state
    }

    pub fn setup(&self) -> ConfinementSetup {
        self.setup
    }

    /// Optimized lower states of the same `m` the trial is orthogonal to.
    pub fn lower_states(&self) -> &[ConfinedOrbital] {
        &self.lower
    }

    pub fn alpha_window(&self) -> (f64, f64) {
        (
            self.options.alpha_floor,
            4.0 * self.setup.charge() * f64::from(self.state.n),
        )
    }

    /// Unnormalized trial function at `alpha`.
    pub fn trial(&self, alpha: f64) -> Result<TrialRadial> {
        if !(alpha > 0.0 && alpha.is_finite()) {
            return Err(Error::InvalidAlpha(alpha));
        }
        let m = self.state.m;
        let r0 = self.setup.r0();
        let k = self.state.radial_degree();
        if k == 0 {
            return Ok(TrialRadial::circular(m, alpha, r0));
        }
        match self.options.ansatz {
            Ansatz::Laguerre => Ok(TrialRadial {
                m,
                alpha,
                r0,
                factor: NodeFactor::Laguerre {
                    degree: k,
                    order: f64::from(2 * m),
                },
            }),
            Ansatz::Orthogonalized => self.orthogonalized_trial(alpha),
        }
    }

    fn orthogonalized_trial(&self, alpha: f64) -> Result<TrialRadial> {
        let m = self.state.m;
        let r0 = self.setup.r0();
        let base = TrialRadial::circular(m, alpha, r0);
        let k = self.lower.len();
        // rows: lower states, columns: powers r^1..r^k, rhs: -<lower|base>
        let mut a = vec![vec![0.0; k + 1]; k];
        for (row, lower) in a.iter_mut().zip(&self.lower) {
            for (r, w) in self.rule.points() {
                let weight = w * r * base.value(r) * lower.radial(r);
                let mut power = 1.0;
                row[k] -= weight;
                for cell in row.iter_mut().take(k) {
                    power *= r;
                    *cell += weight * power;
                }
            }
        }
        let coeffs = solve_dense(a).ok_or_else(|| Error::SingularConstraints {
            state: self.state.label(),
        })?;
        let mut poly = Vec::with_capacity(k + 1);
        poly.push(1.0);
        poly.extend(coeffs);
        Ok(TrialRadial {
            m,
            alpha,
            r0,
            factor: NodeFactor::Polynomial(poly),
        })
    }

    /// `(⟨u|H|u⟩, ⟨u|u⟩)` with the kinetic term in first-derivative form.
    fn matrix_elements(&self, trial: &TrialRadial) -> Result<(f64, f64)> {
        let m2 = f64::from(self.state.m * self.state.m);
        let z = self.setup.charge();
        let mut h = 0.0;
        let mut s = 0.0;
        for (r, w) in self.rule.points() {
            let (u, du) = trial.value_and_deriv(r);
            let u2 = u * u;
            h += w * r * (0.5 * du * du + 0.5 * m2 * u2 / (r * r) - z * u2 / r);
            s += w * r * u2;
        }
        if !h.is_finite() || !s.is_finite() {
            return Err(crate::error::QuadratureError::NonFiniteIntegrand { x: f64::NAN, value: h + s }.into());
        }
        if s < 1e-280 {
            return Err(Error::DegenerateWavefunction(s));
        }
        Ok((h, s))
    }

    /// Rayleigh quotient `E(α)` in hartree.
    pub fn energy(&self, alpha: f64) -> Result<f64> {
        let trial = self.trial(alpha)?;
        let (h, s) = self.matrix_elements(&trial)?;
        Ok(h / s)
    }

    /// Normalized orbital at `alpha`.
    pub fn normalize(&self, alpha: f64) -> Result<ConfinedOrbital> {
        self.build(alpha, false)
    }

    fn build(&self, alpha: f64, constrained: bool) -> Result<ConfinedOrbital> {
        let trial = self.trial(alpha)?;
        let (h, s) = self.matrix_elements(&trial)?;
        Ok(ConfinedOrbital {
            state: self.state,
            setup: self.setup,
            alpha,
            norm: s.sqrt().recip(),
            energy: h / s,
            trial,
            resolution: self.options.resolution,
            constrained,
        })
    }

    /// Minimizes `E(α)` over the search window.
    pub fn optimize(&self) -> Result<ConfinedOrbital> {
        let (lo, hi) = self.alpha_window();
        let best = minimize_log_window(
            |a| self.energy(a),
            lo,
            hi,
            self.options.scan_points,
            self.options.alpha_tol,
        )?;
        self.build(best.x, best.at_lower_edge)
    }
}

/// Unnormalized trial function with the default ansatz.
pub fn trial_radial(state: QuantumState, setup: ConfinementSetup, alpha: f64) -> Result<TrialRadial> {
    VariationalProblem::new(state, setup)?.trial(alpha)
}

pub fn normalize(state: QuantumState, setup: ConfinementSetup, alpha: f64) -> Result<ConfinedOrbital> {
    VariationalProblem::new(state, setup)?.normalize(alpha)
}

pub fn energy(state: QuantumState, setup: ConfinementSetup, alpha: f64) -> Result<f64> {
    VariationalProblem::new(state, setup)?.energy(alpha)
}

pub fn optimize_alpha(state: QuantumState, setup: ConfinementSetup) -> Result<ConfinedOrbital> {
    VariationalProblem::new(state, setup)?.optimize()
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    fn setup(r0: f64) -> ConfinementSetup {
        ConfinementSetup::hydrogen(r0).unwrap()
    }

    #[test]
    fn labels_round_trip() {
        for (label, n, m) in [("1s", 1, 0), ("2s", 2, 0), ("2p", 2, 1), ("3d", 3, 2)] {
            let s: QuantumState = label.parse().unwrap();
            assert_eq!((s.n(), s.m()), (n, m));
            assert_eq!(s.label(), label);
        }
        assert!(QuantumState::S1.is_circular() && QuantumState::P2.is_circular() && QuantumState::D3.is_circular());
        assert!(!QuantumState::S2.is_circular());
        assert!("2d".parse::<QuantumState>().is_err());
        assert!("s".parse::<QuantumState>().is_err());
        assert!(QuantumState::new(0, 0).is_err());
    }

    #[test]
    fn setup_validation() {
        assert!(ConfinementSetup::hydrogen(0.0).is_err());
        assert!(ConfinementSetup::hydrogen(-1.0).is_err());
        assert!(ConfinementSetup::new(1.0, 0.0).is_err());
        assert_eq!(ConfinementSetup::free(1.0).unwrap().r0(), FREE_PROXY_RADIUS);
    }

    #[test]
    fn beta_values() {
        assert_eq!(free_beta(1, 1.0), 4.0);
        assert_relative_eq!(free_beta(2, 1.0), 4.0 / 3.0);
        assert_relative_eq!(free_beta(3, 2.0), 8.0 / 5.0);
    }

    #[test]
    fn free_radial_is_normalized() {
        for state in QuantumState::STUDIED {
            let rule = QuadratureRule::composite(200, 16, 0.0, 120.0).unwrap();
            let norm = rule.integrate(|r| free_radial(state, 1.0, r).powi(2) * r).unwrap();
            assert_relative_eq!(norm, 1.0, max_relative = 1e-12);
        }
    }

    #[test]
    fn trial_boundary_and_origin() {
        let s = setup(1.7);
        for state in QuantumState::STUDIED {
            let t = trial_radial(state, s, 0.9).unwrap();
            assert_eq!(t.eval(1.7).unwrap(), 0.0);
            assert!(t.eval(1.8).is_err());
            assert!(t.eval(-0.1).is_err());
            assert!(t.eval_deriv(1.8).is_err());
        }
        let one_s = trial_radial(QuantumState::S1, s, 0.9).unwrap();
        assert_eq!(one_s.eval(0.0).unwrap(), 1.0);
        let two_p = trial_radial(QuantumState::P2, s, 0.9).unwrap();
        let r = 1e-7;
        assert_relative_eq!(two_p.eval(r).unwrap() / r, 0.9, max_relative = 1e-6);
    }

    #[test]
    fn derivative_at_origin_for_ground_state() {
        let t = trial_radial(QuantumState::S1, setup(1.0), 1.0).unwrap();
        assert_relative_eq!(t.eval_deriv(0.0).unwrap(), -2.0, epsilon = 1e-15);
    }

    #[test]
    fn derivative_matches_finite_differences() {
        let s = setup(2.3);
        for ansatz in [Ansatz::Orthogonalized, Ansatz::Laguerre] {
            let options = SolverOptions { ansatz, ..SolverOptions::default() };
            for state in QuantumState::STUDIED {
                let t = VariationalProblem::with_options(state, s, options).unwrap().trial(1.1).unwrap();
                let h = 1e-6;
                for i in 1..100 {
                    let r = 2.3 * f64::from(i) / 100.0;
                    let fd = (t.value(r + h) - t.value(r - h)) / (2.0 * h);
                    let d = t.eval_deriv(r).unwrap();
                    assert!((fd - d).abs() < 1e-6, "{state} {ansatz:?} r={r}: {fd} vs {d}");
                }
            }
        }
    }

    #[test]
    fn orthogonalized_two_s_has_one_node_and_is_orthogonal() {
        let s = setup(3.0);
        let problem = VariationalProblem::new(QuantumState::S2, s).unwrap();
        let ground = &problem.lower_states()[0];
        assert_eq!(ground.state(), QuantumState::S1);
        for alpha in [0.02, 0.3, 1.0, 4.0] {
            let t = problem.trial(alpha).unwrap();
            let rule = Resolution::default().rule(3.0).unwrap();
            let overlap = rule.integrate(|r| t.value(r) * ground.radial(r) * r).unwrap();
            let scale = rule.integrate(|r| t.value(r).abs() * ground.radial(r).abs() * r).unwrap();
            assert!(overlap.abs() < 1e-12 * scale, "alpha {alpha}: overlap {overlap}");
            // sign scan on a 10^4 grid
            let grid: Vec<f64> = (1..10_000).map(|i| t.value(3.0 * f64::from(i) / 10_000.0)).collect();
            let changes = grid.windows(2).filter(|w| w[0] * w[1] < 0.0).count();
            assert_eq!(changes, 1, "alpha {alpha}");
        }
    }

    #[test]
    fn two_s_derivative_sign_pattern() {
        let orbital = optimize_alpha(QuantumState::S2, setup(4.0)).unwrap();
        let xs: Vec<f64> = (1..10_000).map(|i| 4.0 * f64::from(i) / 10_000.0).collect();
        let du: Vec<f64> = xs.iter().map(|&r| orbital.trial().eval_deriv(r).unwrap()).collect();
        let u: Vec<f64> = xs.iter().map(|&r| orbital.trial().value(r)).collect();
        // u starts positive, falls through its node, reaches one minimum, then climbs to the wall
        assert!(u[0] > 0.0 && u[9000] < 0.0);
        assert_eq!(du.windows(2).filter(|w| w[0] * w[1] < 0.0).count(), 1);
    }

    #[test]
    fn normalization_is_unit() {
        for state in QuantumState::STUDIED {
            let o = normalize(state, setup(1.0), 1.3).unwrap();
            let rule = Resolution::default().rule(1.0).unwrap();
            let n = rule.integrate(|r| o.radial(r).powi(2) * r).unwrap();
            assert!((n - 1.0).abs() < 1e-10);
            assert_relative_eq!(o.energy(), energy(state, setup(1.0), 1.3).unwrap(), max_relative = 1e-12);
        }
        let a = normalize(QuantumState::S1, setup(1.0), 1.0).unwrap();
        let b = normalize(QuantumState::S1, setup(1.0), 2.0).unwrap();
        assert!((a.norm() - b.norm()).abs() > 1e-3);
    }

    #[test]
    fn ground_state_is_a_minimum() {
        let best = optimize_alpha(QuantumState::S1, setup(1.0)).unwrap();
        for d in [-0.2, 0.2] {
            assert!(energy(QuantumState::S1, setup(1.0), best.alpha() + d).unwrap() >= best.energy());
        }
        assert!(!best.is_constrained());
    }

    #[test]
    fn rejects_bad_alpha() {
        assert!(matches!(energy(QuantumState::S1, setup(1.0), 0.0), Err(Error::InvalidAlpha(_))));
        assert!(matches!(energy(QuantumState::S1, setup(1.0), f64::NAN), Err(Error::InvalidAlpha(_))));
    }

    #[test]
    fn free_limit_ground_state() {
        let e = energy(QuantumState::S1, setup(30.0), 2.0).unwrap();
        assert!((e + 2.0).abs() < 1e-3);
    }

    #[test]
    fn laguerre_ansatz_collapses_onto_ground_state() {
        let options = SolverOptions {
            ansatz: Ansatz::Laguerre,
            ..SolverOptions::default()
        };
        let laguerre = VariationalProblem::with_options(QuantumState::S2, setup(10.0), options)
            .unwrap()
            .optimize()
            .unwrap();
        let ortho = optimize_alpha(QuantumState::S2, setup(10.0)).unwrap();
        assert!((ortho.energy() + 0.2208).abs() < 1e-3);
        assert!(laguerre.energy() < -0.5, "{}", laguerre.energy());
    }
}
