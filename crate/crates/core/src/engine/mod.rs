//! Single-path simulation of the four recursions.
//!
//! The engine only produces raw path statistics. Deciding whether a path
//! "converges" is left to [`crate::ensemble`], which documents its finite
//! surrogates.

mod equation;
mod feedback;
mod martingale;
mod path;

pub use equation::{EquationKind, EquationSpec, OVERFLOW_CAP};
pub use feedback::FeedbackFunction;
pub use martingale::MartingaleTracker;
pub use path::{
    path_rng, simulate, simulate_with_rng, trajectory_csv, Checkpoint, Path, PathSummary,
    SimulationOptions, DEFAULT_RECORD_STRIDE, DEFAULT_TAIL_WINDOW,
};
