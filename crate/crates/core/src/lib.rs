//! Variational orbitals, momentum transforms and information-theoretic
//! measures of the hydrogen atom confined to a disk.

pub mod analysis;
pub mod density;
pub mod error;
pub mod hydrogen2d;
pub mod infotheory;
mod linalg;
pub mod minimize;
pub mod momentum;
pub mod quadrature;
pub mod specfun;

pub use analysis::{AnalysisOptions, Crossing, Flag, MeasureRecord, RecordValues};
pub use density::{DensityTail, RadialDensity, Space};
pub use error::{Error, QuadratureError, Result};
pub use hydrogen2d::{
    Ansatz, ConfinedOrbital, ConfinementSetup, QuantumState, Radius, Resolution, SolverOptions, VariationalProblem,
};
pub use infotheory::{DensityMeasures, MeasureSpec};
pub use momentum::{MomentumOptions, MomentumTransform};
