//! GPS-level path follower.
//!
//! The vehicle is treated as a planar single integrator, `ẋ = u` with
//! `x = (p_n, p_e)` and `u = (v_n, v_e)`; position is a flat output, so
//! states and inputs follow directly from the position trace and its
//! derivative. A recorded trajectory is replayed as a virtual target and
//! the tracking error is closed with an LQR state-feedback gain. The
//! commanded velocity vector becomes a desired speed and heading for the
//! low-level loops.

mod flat;
mod lqr;
mod oval;
mod step;
mod target;

pub use flat::{error_dynamics_check, flat_from_output, FlatInput, FlatState};
pub use lqr::{lqr_gain, riccati_residual, LqrWeights};
pub use oval::{make_oval, OvalSpec};
pub use step::{follower_step, wrap_to_pi, FollowerGains, FollowerOutput, HeadingMode};
pub use target::{load_target_path, save_target_path, TargetPath, TargetSample};

use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum FollowerError {
    #[error("control weight R must be positive definite, got diag {0:?}")]
    SingularR([f64; 2]),
    #[error("state weight Q must be non-negative, got diag {0:?}")]
    NegativeQ([f64; 2]),
    #[error("path line {line}: {reason}")]
    Parse { line: usize, reason: String },
    #[error("path time goes backwards at line {line}")]
    NonMonotoneTime { line: usize },
    #[error("path is empty")]
    EmptyPath,
    #[error("invalid oval: {0}")]
    InvalidOval(String),
}
