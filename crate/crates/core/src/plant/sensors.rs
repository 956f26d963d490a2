//! Pedal and steering-torque sensor signals as seen at the vehicle
//! harness.
//!
//! The accelerator pedal emits two DC voltages with `V1 = 2·V2`. The brake
//! pedal emits a complementary PWM pair at 533 Hz / 482 Hz resting at
//! 89 % / 11 %. The steering torque sensor emits a complementary pair at
//! 2.15 kHz resting at 50 % / 50 %.

use serde::{Deserialize, Serialize};

use super::{check_range, PlantError};

pub const BPP_FREQ1_HZ: f64 = 533.0;
pub const BPP_FREQ2_HZ: f64 = 482.0;
pub const STEER_FREQ_HZ: f64 = 2150.0;
pub const BPP_REST_DUTY1: f64 = 89.0;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct SensorCalibration {
    /// V1 at rest and at full pedal.
    pub app_v1_rest: f64,
    pub app_v1_full: f64,
    /// Drop in brake duty 1 per percent of pedal travel.
    pub bpp_slope: f64,
}

impl Default for SensorCalibration {
    fn default() -> Self {
        Self {
            app_v1_rest: 0.9,
            app_v1_full: 4.1,
            bpp_slope: 0.78,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SensorSignals {
    pub app_v1: f64,
    pub app_v2: f64,
    pub bpp_duty1: f64,
    pub bpp_duty2: f64,
    pub steer_duty1: f64,
    pub steer_duty2: f64,
}

impl SensorSignals {
    pub const BPP_F1_HZ: f64 = BPP_FREQ1_HZ;
    pub const BPP_F2_HZ: f64 = BPP_FREQ2_HZ;
    pub const STEER_F_HZ: f64 = STEER_FREQ_HZ;
}

pub fn sensors_from_inputs(
    cal: &SensorCalibration,
    app_pct: f64,
    bpp_pct: f64,
    steer_torque_duty: f64,
) -> Result<SensorSignals, PlantError> {
    let app = check_range("app_pct", app_pct, 0.0, 100.0)?;
    let bpp = check_range("bpp_pct", bpp_pct, 0.0, 100.0)?;
    let steer = check_range("steer_duty", steer_torque_duty, 0.0, 100.0)?;
    let app_v1 = cal.app_v1_rest + (cal.app_v1_full - cal.app_v1_rest) * app / 100.0;
    let bpp_duty1 = BPP_REST_DUTY1 - cal.bpp_slope * bpp;
    Ok(SensorSignals {
        app_v1,
        app_v2: app_v1 / 2.0,
        bpp_duty1,
        bpp_duty2: 100.0 - bpp_duty1,
        steer_duty1: steer,
        steer_duty2: 100.0 - steer,
    })
}

impl SensorSignals {
    /// Pedal percentage a receiving module would read back from V1.
    pub fn app_pct(&self, cal: &SensorCalibration) -> f64 {
        (self.app_v1 - cal.app_v1_rest) / (cal.app_v1_full - cal.app_v1_rest) * 100.0
    }

    pub fn bpp_pct(&self, cal: &SensorCalibration) -> f64 {
        (BPP_REST_DUTY1 - self.bpp_duty1) / cal.bpp_slope
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn rest_signals() {
        let cal = SensorCalibration::default();
        let s = sensors_from_inputs(&cal, 0.0, 0.0, 50.0).unwrap();
        assert_eq!(s.app_v1, 2.0 * s.app_v2);
        assert_eq!(s.app_v1, cal.app_v1_rest);
        assert_eq!((s.bpp_duty1, s.bpp_duty2), (89.0, 11.0));
        assert_eq!((s.steer_duty1, s.steer_duty2), (50.0, 50.0));
    }

    #[test]
    fn steering_complement() {
        let s = sensors_from_inputs(&SensorCalibration::default(), 0.0, 0.0, 58.0).unwrap();
        assert_eq!((s.steer_duty1, s.steer_duty2), (58.0, 42.0));
    }

    #[test]
    fn out_of_range() {
        let cal = SensorCalibration::default();
        assert!(sensors_from_inputs(&cal, 101.0, 0.0, 50.0).is_err());
        assert!(sensors_from_inputs(&cal, 0.0, -1.0, 50.0).is_err());
        assert!(sensors_from_inputs(&cal, 0.0, 0.0, f64::NAN).is_err());
    }

    proptest! {
        #[test]
        fn complements_hold(app in 0.0f64..=100.0, bpp in 0.0f64..=100.0, st in 0.0f64..=100.0) {
            let cal = SensorCalibration::default();
            let s = sensors_from_inputs(&cal, app, bpp, st).unwrap();
            prop_assert_eq!(s.bpp_duty1 + s.bpp_duty2, 100.0);
            prop_assert_eq!(s.steer_duty1 + s.steer_duty2, 100.0);
            prop_assert_eq!(s.app_v1 - 2.0 * s.app_v2, 0.0);
            prop_assert!((s.app_pct(&cal) - app).abs() < 1e-9);
            prop_assert!((s.bpp_pct(&cal) - bpp).abs() < 1e-9);
        }
    }
}
