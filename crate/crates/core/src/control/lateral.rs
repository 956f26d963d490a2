use crate::plant::KMaps;

use super::{
    deadband_uncompensate, signed_steer_duty, DeadbandParams, LowLevelConfig, PiController,
};

/// Steering-angle loop. Produces the controller-side torque duty `τ` that
/// deadband compensation later maps to the command sent to the car.
#[derive(Debug, Clone)]
pub struct SteeringController {
    kmaps: KMaps,
    deadband: DeadbandParams,
    pi: PiController,
}

impl SteeringController {
    pub fn new(cfg: &LowLevelConfig, kmaps: KMaps) -> Self {
        let w = LowLevelConfig::weight(
            cfg.steer_setpoint_weight,
            &cfg.steer,
            &LowLevelConfig::steer_spec(),
        );
        let db = cfg.deadband;
        let right = kmaps.steer_unchecked(db.tau_max.min(kmaps.steer_duty_max));
        let left = kmaps.steer_unchecked((100.0 - db.tau_min).min(kmaps.steer_duty_max));
        Self {
            kmaps,
            deadband: db,
            pi: PiController::new(cfg.steer, w, (-left, right)),
        }
    }

    /// Range of settle angles the loop may request, `(min, max)` counts.
    pub fn angle_limits(&self) -> (f64, f64) {
        self.pi.state.output_limits
    }

    /// Returns the controller-side duty in percent (50 = no torque).
    pub fn step(&mut self, desired_counts: f64, measured_counts: f64, dt: f64) -> f64 {
        let settle = self.pi.update(desired_counts, measured_counts, dt);
        let duty = signed_steer_duty(&self.kmaps, self.deadband.b_max, settle)
            .clamp(self.deadband.tau_min, self.deadband.tau_max);
        deadband_uncompensate(&self.deadband, duty)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::control::deadband_compensate;

    #[test]
    fn centred_hold_is_no_torque() {
        let mut c = SteeringController::new(&LowLevelConfig::default(), KMaps::default());
        assert_eq!(c.step(0.0, 0.0, 0.01), 50.0);
    }

    #[test]
    fn right_and_left_requests() {
        let mut c = SteeringController::new(&LowLevelConfig::default(), KMaps::default());
        let right = c.step(2000.0, 0.0, 0.01);
        assert!(right > 50.0 && right <= 64.0);
        let mut c = SteeringController::new(&LowLevelConfig::default(), KMaps::default());
        let left = c.step(-2000.0, 0.0, 0.01);
        assert!((37.0..50.0).contains(&left));
        let cmd = deadband_compensate(&DeadbandParams::default(), left).unwrap();
        assert!(cmd < 45.0);
    }
}
