use crate::plant::KMaps;

use super::{invert_k_app, invert_k_bpp, LowLevelConfig, PiController};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum LongitudinalMode {
    Accelerate,
    Brake,
}

#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct LongitudinalCommand {
    pub app_pct: f64,
    pub bpp_pct: f64,
}

/// Speed controller switching between an accelerator loop and a brake
/// loop.
///
/// The accelerator loop's PI produces a settle speed that the inverse
/// accelerator map turns into pedal travel. The brake loop's PI turns the
/// speed error into a deceleration demand for the inverse brake map. The
/// brake loop takes over when the speed error drops below
/// `−hysteresis_mph` and hands back once the error is non-negative.
#[derive(Debug, Clone)]
pub struct LongitudinalController {
    kmaps: KMaps,
    accel: PiController,
    brake: PiController,
    hysteresis_mph: f64,
    mode: LongitudinalMode,
    primed: bool,
}

impl LongitudinalController {
    pub fn new(cfg: &LowLevelConfig, kmaps: KMaps) -> Self {
        let accel_w = LowLevelConfig::weight(
            cfg.accel_setpoint_weight,
            &cfg.accel,
            &LowLevelConfig::accel_spec(),
        );
        let brake_w = LowLevelConfig::weight(
            cfg.brake_setpoint_weight,
            &cfg.brake,
            &LowLevelConfig::brake_spec(),
        );
        let speed_range = (
            kmaps.app_intercept,
            kmaps.app_slope * 100.0 + kmaps.app_intercept,
        );
        let decel_range = (kmaps.bpp_unchecked(100.0), 0.0);
        Self {
            kmaps,
            accel: PiController::new(cfg.accel, accel_w, speed_range),
            brake: PiController::new(cfg.brake, brake_w, decel_range),
            hysteresis_mph: cfg.hysteresis_mph,
            mode: LongitudinalMode::Accelerate,
            primed: false,
        }
    }

    pub fn mode(&self) -> LongitudinalMode {
        self.mode
    }

    pub fn accel_loop(&self) -> &PiController {
        &self.accel
    }

    pub fn step(&mut self, desired_mph: f64, measured_mph: f64, dt: f64) -> LongitudinalCommand {
        let error = desired_mph - measured_mph;
        if !self.primed {
            // first call: start as if the accelerator loop had been holding
            // the measured speed, so a setpoint step still gets its kick
            self.primed = true;
            self.accel.preload(measured_mph, measured_mph, measured_mph);
        }
        match self.mode {
            LongitudinalMode::Accelerate if error < -self.hysteresis_mph => {
                self.mode = LongitudinalMode::Brake;
                self.brake.reset();
            }
            LongitudinalMode::Brake if error >= 0.0 => {
                self.mode = LongitudinalMode::Accelerate;
                self.accel.preload(measured_mph, measured_mph, measured_mph);
            }
            _ => {}
        }
        match self.mode {
            LongitudinalMode::Accelerate => {
                let settle = self.accel.update(desired_mph, measured_mph, dt);
                let app_pct = if settle <= 0.0 {
                    0.0
                } else {
                    invert_k_app(&self.kmaps, settle).unwrap_or(100.0)
                };
                LongitudinalCommand {
                    app_pct,
                    bpp_pct: 0.0,
                }
            }
            LongitudinalMode::Brake => {
                let demand = self.brake.update(desired_mph, measured_mph, dt);
                let c = &self.kmaps.bpp;
                let vertex = -c[1] / (2.0 * c[0]);
                // demands lighter than the map's shallowest point get the vertex
                let bpp_pct = invert_k_bpp(&self.kmaps, demand).unwrap_or(if demand > -1.0 {
                    vertex
                } else {
                    100.0
                });
                LongitudinalCommand {
                    app_pct: 0.0,
                    bpp_pct,
                }
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ctl() -> LongitudinalController {
        LongitudinalController::new(&LowLevelConfig::default(), KMaps::default())
    }

    #[test]
    fn accelerate_case() {
        let c = ctl().step(20.0, 15.0, 0.01);
        assert!(c.app_pct > 0.0);
        assert_eq!(c.bpp_pct, 0.0);
    }

    #[test]
    fn brake_case() {
        let mut ctl = ctl();
        let c = ctl.step(10.0, 25.0, 0.01);
        assert!(c.bpp_pct > 0.0);
        assert_eq!(c.app_pct, 0.0);
        assert_eq!(ctl.mode(), LongitudinalMode::Brake);
    }

    #[test]
    fn equilibrium_at_rest() {
        let c = ctl().step(0.0, 0.0, 0.01);
        assert_eq!(c, LongitudinalCommand::default());
    }

    #[test]
    fn small_overspeed_stays_on_accelerator() {
        let mut ctl = ctl();
        let c = ctl.step(20.0, 20.4, 0.01);
        assert_eq!(c.bpp_pct, 0.0);
        assert_eq!(ctl.mode(), LongitudinalMode::Accelerate);
    }

    #[test]
    fn exactly_one_actuator() {
        let mut ctl = ctl();
        for k in 0..2000 {
            let desired = 15.0 + 10.0 * (k as f64 * 0.01).sin();
            let measured = 15.0 + 10.0 * ((k as f64 - 50.0) * 0.01).sin();
            let c = ctl.step(desired, measured, 0.01);
            assert!(c.app_pct == 0.0 || c.bpp_pct == 0.0);
            assert!((0.0..=100.0).contains(&c.app_pct));
            assert!((0.0..=100.0).contains(&c.bpp_pct));
        }
    }
}
