use nalgebra::Complex;
use serde::{Deserialize, Serialize};

use super::ControlError;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PiGains {
    pub kp: f64,
    pub ki: f64,
}

/// Desired second-order closed loop around a first-order plant.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct LoopSpec {
    /// Plant time constant, seconds.
    pub tau_car: f64,
    pub zeta: f64,
    /// Natural frequency, rad/s.
    pub omega_n: f64,
}

impl LoopSpec {
    /// From a desired closed-loop time constant, `ω_n = 1/(ζ·τ_cl)`.
    pub fn from_tau_cl(tau_car: f64, zeta: f64, tau_cl: f64) -> Self {
        Self {
            tau_car,
            zeta,
            omega_n: 1.0 / (zeta * tau_cl),
        }
    }

    pub fn from_omega_n(tau_car: f64, zeta: f64, omega_n: f64) -> Self {
        Self {
            tau_car,
            zeta,
            omega_n,
        }
    }

    pub fn tau_cl(&self) -> f64 {
        1.0 / (self.zeta * self.omega_n)
    }

    fn validate(&self) -> Result<(), ControlError> {
        let ok = |v: f64| v.is_finite() && v > 0.0;
        if ok(self.tau_car) && ok(self.zeta) && ok(self.omega_n) {
            Ok(())
        } else {
            Err(ControlError::InvalidSpec(*self))
        }
    }

    /// Proportional setpoint weight that puts the controller zero at `−ω_n`.
    /// For ζ = 1 this cancels one of the repeated poles and leaves a pure
    /// first-order response with time constant `1/ω_n`.
    pub fn zero_cancelling_weight(&self, gains: &PiGains) -> f64 {
        gains.ki / (gains.kp * self.omega_n)
    }
}

/// Pole placement for a PI loop around `1/(τ_car s + 1)`:
/// `kp = τ_car(2ζω_n − 1/τ_car)`, `ki = τ_car ω_n²`.
pub fn design_pi(spec: &LoopSpec) -> Result<PiGains, ControlError> {
    spec.validate()?;
    let kp = spec.tau_car * (2.0 * spec.zeta * spec.omega_n - 1.0 / spec.tau_car);
    if kp <= 0.0 {
        return Err(ControlError::NegativeGain { kp });
    }
    Ok(PiGains {
        kp,
        ki: spec.tau_car * spec.omega_n * spec.omega_n,
    })
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ClosedLoop {
    pub poles: [Complex<f64>; 2],
    pub zero: f64,
}

impl ClosedLoop {
    pub fn is_stable(&self) -> bool {
        self.poles.iter().all(|p| p.re < 0.0)
    }

    /// True when both poles are real (no oscillatory mode).
    pub fn is_real(&self) -> bool {
        self.poles.iter().all(|p| p.im == 0.0)
    }
}

/// Poles `(−(kp+1) ± √((kp+1)² − 4·ki·τ)) / (2τ)` and zero `−ki/kp` of the
/// PI loop around `1/(τs + 1)`.
pub fn closed_loop_poles(gains: &PiGains, tau_car: f64) -> ClosedLoop {
    let b = gains.kp + 1.0;
    let disc = b * b - 4.0 * gains.ki * tau_car;
    let two_tau = 2.0 * tau_car;
    let poles = if disc >= 0.0 {
        let r = disc.sqrt();
        [
            Complex::new((-b + r) / two_tau, 0.0),
            Complex::new((-b - r) / two_tau, 0.0),
        ]
    } else {
        let im = (-disc).sqrt() / two_tau;
        [
            Complex::new(-b / two_tau, im),
            Complex::new(-b / two_tau, -im),
        ]
    };
    ClosedLoop {
        poles,
        zero: -gains.ki / gains.kp,
    }
}
