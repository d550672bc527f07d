//! Simulation and hypothesis checking for non-homogeneous stochastic
//! difference equations of the form
//!
//! ```text
//! X_{n+1} = X_n (1 + f(X_n) ξ_{n+1}) + S_n,      X_0 > 0,
//! ```
//!
//! together with the linear case `f ≡ 1`, the Itô-type recursion
//! `X_{n+1} = (1 + k f(X_n) a + sqrt(k f(X_n)) ζ_{n+1}) X_n + S_n` and its
//! noiseless counterpart.
//!
//! The numeric core is generic over [`Scalar`] (`f32` or `f64`); the `*64`
//! aliases below fix the common double-precision instantiation.

pub mod analysis;
pub mod engine;
pub mod ensemble;
pub mod error;
pub mod noise;
pub mod quadrature;
pub mod scalar;
pub mod sequences;

pub use analysis::{CriticalExponent, TheoremId, TheoremVerdict};
pub use engine::{EquationKind, EquationSpec, FeedbackFunction, PathSummary, SimulationOptions};
pub use ensemble::{EnsembleResult, Surrogate};
pub use error::{Error, Result};
pub use noise::{Law, NoiseFamily, NoiseModel, PositivityContext, Schedule};
pub use scalar::Scalar;
pub use sequences::{CoefficientSequence, KappaSequence, SequenceFamily, Status, Summability};

pub type NoiseModel64 = NoiseModel<f64>;
pub type CoefficientSequence64 = CoefficientSequence<f64>;
pub type KappaSequence64 = KappaSequence<f64>;
pub type EquationSpec64 = EquationSpec<f64>;
pub type PathSummary64 = PathSummary<f64>;
pub type TheoremVerdict64 = TheoremVerdict<f64>;
pub type EnsembleResult64 = EnsembleResult<f64>;
