//! Simulated 2013 Focus EV: identified pedal and steering dynamics, pose
//! kinematics, pedal sensor signals and the ECUs that publish on the bus.

mod config;
mod ecu;
mod first_order;
mod kmaps;
mod pose;
mod sensors;
mod vehicle;

pub use config::{DecelUnits, PlantConfig, PoseParams};
pub use ecu::{
    default_schedule, throttle_byte, throttle_pct, Ecus, Tcm, DEFAULT_THROTTLE_PERIOD_US,
    SPEED_PERIOD_US, THROTTLE_BYTE,
};
pub use first_order::FirstOrderPlant;
pub use kmaps::{app_k, bpp_k, steer_k, KMaps};
pub use pose::pose_step;
pub use sensors::{sensors_from_inputs, SensorCalibration, SensorSignals};
pub use vehicle::{plant_step, steer_settle, PlantInputs, Vehicle, VehicleState};

use thiserror::Error;

/// Metres per second in one mph.
pub const MPH_TO_MPS: f64 = 0.44704;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum PlantError {
    #[error("{what} = {value} outside [{min}, {max}]")]
    OutOfRange {
        what: &'static str,
        value: f64,
        min: f64,
        max: f64,
    },
    #[error("steering duty {0} outside the identified branch [{1:.2}, {2}]")]
    OutOfDomain(f64, f64, f64),
    #[error("invalid plant configuration: {0}")]
    Config(String),
}

pub(crate) fn check_range(
    what: &'static str,
    value: f64,
    min: f64,
    max: f64,
) -> Result<f64, PlantError> {
    if value.is_finite() && (min..=max).contains(&value) {
        Ok(value)
    } else {
        Err(PlantError::OutOfRange {
            what,
            value,
            min,
            max,
        })
    }
}
