//! Pole-placement PI gains for the three input loops, and the accelerator
//! loop's step response against the plant.

use canpilot::control::{closed_loop_poles, design_pi, LongitudinalController, LowLevelConfig};
use canpilot::plant::{KMaps, PlantConfig, PlantInputs, Vehicle, VehicleState};

fn main() {
    for (name, spec) in [
        ("accelerator", LowLevelConfig::accel_spec()),
        ("brake", LowLevelConfig::brake_spec()),
        ("steering", LowLevelConfig::steer_spec()),
    ] {
        let g = design_pi(&spec).unwrap();
        let cl = closed_loop_poles(&g, spec.tau_car);
        println!(
            "{name:>11}: tau_car {:>4} s  kp {:>5.2}  ki {:>5.2}  poles {:.2}, {:.2}  zero {:.3}",
            spec.tau_car, g.kp, g.ki, cl.poles[0].re, cl.poles[1].re, cl.zero
        );
    }

    // 10 -> 20 mph step with the 100 Hz loop
    let cfg = PlantConfig::default();
    let mut car = Vehicle::new(
        cfg.clone(),
        VehicleState {
            speed_mph: 10.0,
            ..Default::default()
        },
    )
    .unwrap();
    let mut ctl = LongitudinalController::new(&LowLevelConfig::default(), KMaps::from(&cfg));
    let mut cmd = PlantInputs::default();
    println!("\n   t (s)  speed (mph)  app (%)");
    for ms in 0..=3_000 {
        if ms % 10 == 0 {
            let c = ctl.step(20.0, car.state().speed_mph, 0.01);
            cmd.app_pct = c.app_pct;
            cmd.bpp_pct = c.bpp_pct;
        }
        if ms % 250 == 0 {
            println!(
                "{:>8.2}  {:>11.3}  {:>7.2}",
                ms as f64 / 1e3,
                car.state().speed_mph,
                cmd.app_pct
            );
        }
        car.step(&cmd, 1e-3);
    }
}
