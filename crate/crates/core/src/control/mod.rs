//! Low-level PI loops for speed and steering angle: gain synthesis by pole
//! placement, the inverse gain maps, accelerator/brake switching and
//! steering deadband compensation.

mod deadband;
mod gains;
mod inverse;
mod lateral;
mod longitudinal;
mod pi;

pub use deadband::{deadband_compensate, deadband_uncompensate, DeadbandParams};
pub use gains::{closed_loop_poles, design_pi, ClosedLoop, LoopSpec, PiGains};
pub use inverse::{invert_k_app, invert_k_bpp, invert_k_steer, signed_steer_duty};
pub use lateral::SteeringController;
pub use longitudinal::{LongitudinalCommand, LongitudinalController, LongitudinalMode};
pub use pi::{pi_step, PiController, PiState};

use serde::{Deserialize, Serialize};
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum ControlError {
    #[error("loop spec needs positive tau_car, zeta and omega_n (got {0:?})")]
    InvalidSpec(LoopSpec),
    #[error("requested closed loop is not faster than the plant: kp = {kp} <= 0")]
    NegativeGain { kp: f64 },
    #[error("{what} target {value} outside achievable range [{min}, {max}]")]
    Unachievable {
        what: &'static str,
        value: f64,
        min: f64,
        max: f64,
    },
    #[error("torque {0} outside [{1}, {2}]")]
    OutOfRange(f64, f64, f64),
    #[error("invalid deadband parameters {0:?}")]
    InvalidDeadband(DeadbandParams),
}

/// Gains and loop-shaping choices for the three low-level loops. Defaults
/// are the Table of input loops designed for the Focus EV.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct LowLevelConfig {
    pub accel: PiGains,
    pub brake: PiGains,
    pub steer: PiGains,
    /// Proportional setpoint weights; `None` derives `τ_car·ω_n/kp` from the
    /// design spec, `Some(1.0)` is the plain PI.
    pub accel_setpoint_weight: Option<f64>,
    pub brake_setpoint_weight: Option<f64>,
    pub steer_setpoint_weight: Option<f64>,
    /// Speed error (mph) below which the brake loop takes over.
    pub hysteresis_mph: f64,
    pub deadband: DeadbandParams,
}

impl LowLevelConfig {
    pub fn accel_spec() -> LoopSpec {
        LoopSpec::from_omega_n(7.0, 1.0, 2.0)
    }

    pub fn brake_spec() -> LoopSpec {
        LoopSpec::from_omega_n(0.3, 1.0, 2.0)
    }

    pub fn steer_spec() -> LoopSpec {
        LoopSpec::from_omega_n(0.2, 1.0, 3.0)
    }
}

impl Default for LowLevelConfig {
    fn default() -> Self {
        Self {
            accel: design_pi(&Self::accel_spec()).expect("static spec"),
            brake: design_pi(&Self::brake_spec()).expect("static spec"),
            steer: design_pi(&Self::steer_spec()).expect("static spec"),
            accel_setpoint_weight: None,
            brake_setpoint_weight: Some(1.0),
            steer_setpoint_weight: None,
            hysteresis_mph: 0.5,
            deadband: DeadbandParams::default(),
        }
    }
}

impl LowLevelConfig {
    pub(crate) fn weight(explicit: Option<f64>, gains: &PiGains, spec: &LoopSpec) -> f64 {
        explicit.unwrap_or_else(|| spec.zero_cancelling_weight(gains))
    }
}
