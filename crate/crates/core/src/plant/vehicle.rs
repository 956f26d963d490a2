use log::warn;
use serde::{Deserialize, Serialize};

use super::first_order::relax;
use super::{pose_step, KMaps, PlantConfig, PlantError};

/// Largest physics step the exact update is validated for.
pub const MAX_DT_S: f64 = 0.010;

#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
pub struct VehicleState {
    pub speed_mph: f64,
    /// Steering wheel angle in CAN counts; positive steers right.
    pub steer_angle_counts: f64,
    /// Heading, radians clockwise from north.
    pub heading_rad: f64,
    pub p_n: f64,
    pub p_e: f64,
    /// Brake-loop deceleration state, in the brake map's units.
    pub decel_state: f64,
}

/// Actuator inputs held over one physics step.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PlantInputs {
    pub app_pct: f64,
    pub bpp_pct: f64,
    /// Steering torque sensor duty; 50 is no torque.
    pub steer_duty: f64,
}

impl Default for PlantInputs {
    fn default() -> Self {
        Self {
            app_pct: 0.0,
            bpp_pct: 0.0,
            steer_duty: 50.0,
        }
    }
}

fn clamp_logged(what: &str, v: f64, lo: f64, hi: f64) -> f64 {
    let v = if v.is_nan() { lo } else { v };
    if v < lo || v > hi {
        warn!("{what} = {v} clamped to [{lo}, {hi}]");
    }
    v.clamp(lo, hi)
}

/// Settle angle for a steering duty, or `None` inside the deadband (the
/// wheel holds its angle).
///
/// Above the deadband the identified parabola branch applies from its
/// vertex to `steer_duty_max`; between the deadband edge and the vertex the
/// settle angle ramps linearly from 0 to the vertex value. Duties below 50
/// mirror the map.
pub fn steer_settle(cfg: &PlantConfig, k: &KMaps, duty: f64) -> Option<f64> {
    if (cfg.deadband_min..=cfg.deadband_max).contains(&duty) {
        return None;
    }
    let (mag, sign) = if duty > 50.0 {
        (duty, 1.0)
    } else {
        (100.0 - duty, -1.0)
    };
    let vertex = k.steer_vertex();
    let counts = if mag >= vertex {
        k.steer_unchecked(mag.min(cfg.steer_duty_max))
    } else {
        let edge = 50.0 + (cfg.deadband_max - 50.0).max(50.0 - cfg.deadband_min);
        k.steer_min_counts() * ((mag - edge) / (vertex - edge)).clamp(0.0, 1.0)
    };
    Some(sign * counts)
}

/// Advances the longitudinal and steering dynamics by `dt_s`, then the pose.
///
/// Brake pedal above `brake_active_pct` hands speed to the brake path,
/// which integrates the deceleration state; otherwise speed relaxes toward
/// the accelerator settle speed and the deceleration state relaxes to 0.
pub fn plant_step(
    cfg: &PlantConfig,
    state: &VehicleState,
    inputs: &PlantInputs,
    dt_s: f64,
) -> VehicleState {
    let k = KMaps::from(cfg);
    let mut s = *state;
    let dt = clamp_logged("dt_s", dt_s, f64::MIN_POSITIVE, MAX_DT_S);
    let app = clamp_logged("app_pct", inputs.app_pct, 0.0, 100.0);
    let bpp = clamp_logged("bpp_pct", inputs.bpp_pct, 0.0, 100.0);
    let duty = clamp_logged("steer_duty", inputs.steer_duty, 0.0, 100.0);

    if bpp > cfg.brake_active_pct {
        s.decel_state = relax(s.decel_state, k.bpp_unchecked(bpp), cfg.tau_bpp_s, dt);
        s.speed_mph += cfg.decel_to_mph_per_s(s.decel_state) * dt;
    } else {
        s.decel_state = relax(s.decel_state, 0.0, cfg.tau_bpp_s, dt);
        s.speed_mph = relax(s.speed_mph, k.app_unchecked(app), cfg.tau_app_s, dt);
    }
    s.speed_mph = s.speed_mph.max(0.0);

    if let Some(target) = steer_settle(cfg, &k, duty) {
        s.steer_angle_counts = relax(s.steer_angle_counts, target, cfg.tau_steer_s, dt);
    }

    pose_step(&cfg.pose, &s, dt)
}

/// Owns a calibration and the evolving state.
#[derive(Debug, Clone)]
pub struct Vehicle {
    config: PlantConfig,
    state: VehicleState,
}

impl Vehicle {
    pub fn new(config: PlantConfig, state: VehicleState) -> Result<Self, PlantError> {
        config.validate()?;
        Ok(Self { config, state })
    }

    pub fn config(&self) -> &PlantConfig {
        &self.config
    }

    pub fn state(&self) -> &VehicleState {
        &self.state
    }

    pub fn state_mut(&mut self) -> &mut VehicleState {
        &mut self.state
    }

    pub fn step(&mut self, inputs: &PlantInputs, dt_s: f64) -> &VehicleState {
        self.state = plant_step(&self.config, &self.state, inputs, dt_s);
        &self.state
    }
}
