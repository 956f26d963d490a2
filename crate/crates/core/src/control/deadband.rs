//! Steering deadband compensation.
//!
//! Torque duties in `[b_min, b_max]` produce no steering response. The
//! compensator stretches the controller's `[τ_min, τ_max]` range so that
//! anything off-centre lands outside the deadband:
//!
//! ```text
//! τ > 50:  b_max + (τ − 50)/(τ_max − 50)·(τ_max − b_max)
//! τ < 50:  b_min + (50 − τ)/(50 − τ_min)·(τ_min − b_min)
//! τ = 50:  50
//! ```

use serde::{Deserialize, Serialize};

use super::ControlError;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct DeadbandParams {
    pub b_max: f64,
    pub b_min: f64,
    pub tau_max: f64,
    pub tau_min: f64,
}

impl Default for DeadbandParams {
    fn default() -> Self {
        Self {
            b_max: 55.0,
            b_min: 45.0,
            tau_max: 64.0,
            tau_min: 37.0,
        }
    }
}

impl DeadbandParams {
    pub fn validate(&self) -> Result<(), ControlError> {
        if self.tau_min < self.b_min
            && self.b_min < 50.0
            && 50.0 < self.b_max
            && self.b_max < self.tau_max
        {
            Ok(())
        } else {
            Err(ControlError::InvalidDeadband(*self))
        }
    }
}

pub fn deadband_compensate(p: &DeadbandParams, tau: f64) -> Result<f64, ControlError> {
    if !(tau.is_finite() && (p.tau_min..=p.tau_max).contains(&tau)) {
        return Err(ControlError::OutOfRange(tau, p.tau_min, p.tau_max));
    }
    Ok(if tau > 50.0 {
        p.b_max + (tau - 50.0) / (p.tau_max - 50.0) * (p.tau_max - p.b_max)
    } else if tau < 50.0 {
        p.b_min + (50.0 - tau) / (50.0 - p.tau_min) * (p.tau_min - p.b_min)
    } else {
        50.0
    })
}

/// Inverse of [`deadband_compensate`]: the controller-side duty that
/// compensates to `cmd`. Commands inside the deadband map to 50; commands
/// outside `[τ_min, τ_max]` are clamped first.
pub fn deadband_uncompensate(p: &DeadbandParams, cmd: f64) -> f64 {
    let cmd = cmd.clamp(p.tau_min, p.tau_max);
    if cmd > p.b_max {
        50.0 + (cmd - p.b_max) / (p.tau_max - p.b_max) * (p.tau_max - 50.0)
    } else if cmd < p.b_min {
        50.0 - (p.b_min - cmd) / (p.b_min - p.tau_min) * (50.0 - p.tau_min)
    } else {
        50.0
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn p() -> DeadbandParams {
        DeadbandParams::default()
    }

    #[test]
    fn endpoints_and_interior() {
        assert_eq!(deadband_compensate(&p(), 64.0).unwrap(), 64.0);
        assert_eq!(deadband_compensate(&p(), 37.0).unwrap(), 37.0);
        assert_eq!(deadband_compensate(&p(), 57.0).unwrap(), 59.5);
        assert_eq!(deadband_compensate(&p(), 43.5).unwrap(), 41.0);
        assert_eq!(deadband_compensate(&p(), 50.0).unwrap(), 50.0);
    }

    #[test]
    fn out_of_range() {
        assert!(deadband_compensate(&p(), 36.9).is_err());
        assert!(deadband_compensate(&p(), 64.1).is_err());
        assert!(deadband_compensate(&p(), f64::NAN).is_err());
    }

    #[test]
    fn validation() {
        p().validate().unwrap();
        let bad = DeadbandParams { b_min: 52.0, ..p() };
        assert!(bad.validate().is_err());
    }

    proptest! {
        #[test]
        fn image_skips_deadband(t in 37.0f64..=64.0) {
            let c = deadband_compensate(&p(), t).unwrap();
            prop_assert!(c == 50.0 || (37.0..=45.0).contains(&c) || (55.0..=64.0).contains(&c));
        }

        #[test]
        fn monotone(a in 37.0f64..=64.0, b in 37.0f64..=64.0) {
            let (lo, hi) = if a <= b { (a, b) } else { (b, a) };
            prop_assert!(deadband_compensate(&p(), lo).unwrap() <= deadband_compensate(&p(), hi).unwrap());
        }

        #[test]
        fn uncompensate_inverts(t in 37.0f64..=64.0) {
            let back = deadband_uncompensate(&p(), deadband_compensate(&p(), t).unwrap());
            prop_assert!((back - t).abs() < 1e-9);
        }
    }
}
