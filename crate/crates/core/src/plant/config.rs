use serde::{Deserialize, Serialize};

use super::PlantError;

/// Units of the brake deceleration map. The identified polynomial does not
/// carry units; m/s² is the default reading.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, Default)]
#[serde(rename_all = "snake_case")]
pub enum DecelUnits {
    #[default]
    MetersPerSecond2,
    MphPerSecond,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct PoseParams {
    pub wheelbase_m: f64,
    /// Steering-wheel angle over road-wheel angle.
    pub steer_ratio: f64,
    /// Steering angle counts per steering-wheel radian.
    pub counts_per_rad: f64,
}

impl Default for PoseParams {
    fn default() -> Self {
        Self {
            wheelbase_m: 2.7,
            steer_ratio: 15.0,
            // 0x7D0 counts = half a turn of the wheel
            counts_per_rad: 2000.0 / std::f64::consts::PI,
        }
    }
}

/// Plant calibration. Every field defaults to the identified Focus EV value.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct PlantConfig {
    /// Settle speed (mph) = `app_slope * app% + app_intercept`.
    pub app_slope: f64,
    pub app_intercept: f64,
    /// Settle deceleration = `c[0] x² + c[1] x + c[2]` for brake pedal x%.
    pub bpp_coeffs: [f64; 3],
    /// Settle steering counts = `c[0] x² + c[1] x + c[2]` for torque duty x%
    /// (25 mph fit).
    pub steer_coeffs: [f64; 3],
    /// Largest steering duty the identification covered.
    pub steer_duty_max: f64,
    pub tau_app_s: f64,
    pub tau_bpp_s: f64,
    pub tau_steer_s: f64,
    /// Steering duty band that produces no response.
    pub deadband_min: f64,
    pub deadband_max: f64,
    /// Brake pedal percentage above which the brake path owns the speed.
    pub brake_active_pct: f64,
    pub decel_units: DecelUnits,
    pub pose: PoseParams,
}

impl Default for PlantConfig {
    fn default() -> Self {
        Self {
            app_slope: 3.65,
            app_intercept: -9.7,
            bpp_coeffs: [-0.0018, 0.029, -0.3768],
            steer_coeffs: [59.4, -6802.7, 195084.5],
            steer_duty_max: 64.0,
            tau_app_s: 7.0,
            tau_bpp_s: 0.3,
            tau_steer_s: 0.2,
            deadband_min: 45.0,
            deadband_max: 55.0,
            brake_active_pct: 1.0,
            decel_units: DecelUnits::MetersPerSecond2,
            pose: PoseParams::default(),
        }
    }
}

impl PlantConfig {
    pub fn validate(&self) -> Result<(), PlantError> {
        let positive = [
            ("tau_app_s", self.tau_app_s),
            ("tau_bpp_s", self.tau_bpp_s),
            ("tau_steer_s", self.tau_steer_s),
            ("app_slope", self.app_slope),
            ("steer_coeffs[0]", self.steer_coeffs[0]),
            ("pose.wheelbase_m", self.pose.wheelbase_m),
            ("pose.steer_ratio", self.pose.steer_ratio),
            ("pose.counts_per_rad", self.pose.counts_per_rad),
        ];
        for (name, v) in positive {
            if !(v.is_finite() && v > 0.0) {
                return Err(PlantError::Config(format!(
                    "{name} must be positive, got {v}"
                )));
            }
        }
        if !(self.deadband_min < 50.0 && 50.0 < self.deadband_max) {
            return Err(PlantError::Config("deadband must straddle 50%".into()));
        }
        let vertex = self.steer_vertex();
        if !(self.deadband_max <= vertex
            && vertex < self.steer_duty_max
            && self.steer_duty_max <= 100.0)
        {
            return Err(PlantError::Config(format!(
                "steering branch [{vertex:.2}, {}] must lie above the deadband",
                self.steer_duty_max
            )));
        }
        Ok(())
    }

    /// Duty at the vertex of the steering parabola; the identified branch
    /// starts here.
    pub fn steer_vertex(&self) -> f64 {
        -self.steer_coeffs[1] / (2.0 * self.steer_coeffs[0])
    }

    /// Converts a deceleration in configured units to mph per second.
    pub fn decel_to_mph_per_s(&self, decel: f64) -> f64 {
        match self.decel_units {
            DecelUnits::MetersPerSecond2 => decel / super::MPH_TO_MPS,
            DecelUnits::MphPerSecond => decel,
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn defaults_validate() {
        PlantConfig::default().validate().unwrap();
        let v = PlantConfig::default().steer_vertex();
        assert!((v - 57.262).abs() < 1e-3, "{v}");
    }

    #[test]
    fn toml_overrides_single_field() {
        let cfg: PlantConfig =
            toml::from_str("tau_app_s = 5.0\n[pose]\nwheelbase_m = 3.0\n").unwrap();
        assert_eq!(cfg.tau_app_s, 5.0);
        assert_eq!(cfg.pose.wheelbase_m, 3.0);
        assert_eq!(cfg.tau_bpp_s, 0.3);
    }

    #[test]
    fn bad_values_rejected() {
        let cfg = PlantConfig {
            tau_bpp_s: 0.0,
            ..Default::default()
        };
        assert!(cfg.validate().is_err());
        let cfg = PlantConfig {
            deadband_max: 49.0,
            ..Default::default()
        };
        assert!(cfg.validate().is_err());
    }
}
