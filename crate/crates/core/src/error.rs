use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum QuadratureError {
    #[error("quadrature rule needs at least one node and one panel")]
    EmptyRule,
    #[error("invalid integration interval [{a}, {b}]")]
    BadInterval { a: f64, b: f64 },
    #[error("integrand is not finite at x = {x} (value {value})")]
    NonFiniteIntegrand { x: f64, value: f64 },
    #[error("tail integration requires positive panel width and tolerance")]
    BadTailSettings,
    #[error("tail integral did not converge within {panels} panels (reached x = {reached})")]
    TailNotConverged { panels: usize, reached: f64 },
}

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error(transparent)]
    Quadrature(#[from] QuadratureError),
    #[error("invalid quantum numbers (n = {n}, m = {m}): need n >= 1 and 0 <= m <= n - 1")]
    InvalidState { n: u32, m: u32 },
    #[error("unknown state label {0:?}")]
    UnknownLabel(String),
    #[error("confinement radius must be positive and finite, got {0}")]
    InvalidRadius(f64),
    #[error("nuclear charge must be positive and finite, got {0}")]
    InvalidCharge(f64),
    #[error("variational parameter must be positive and finite, got {0}")]
    InvalidAlpha(f64),
    #[error("r = {r} lies outside the confinement region [0, {r0}]")]
    OutsideDomain { r: f64, r0: f64 },
    #[error("trial wavefunction is degenerate (norm integral {0:e})")]
    DegenerateWavefunction(f64),
    #[error("energy decreases monotonically towards alpha = {hi} on the search window [{lo}, {hi}]")]
    NoBracket { lo: f64, hi: f64 },
    #[error("orthogonality constraints for {state} are singular")]
    SingularConstraints { state: String },
    #[error("invalid measure parameter: {0}")]
    InvalidParameter(String),
    #[error("no sign change of {what} on [{lo}, {hi}]")]
    NoSignChange { what: String, lo: f64, hi: f64 },
    #[error("{what} diverges: the density decays too slowly at large argument")]
    Divergent { what: String },
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
