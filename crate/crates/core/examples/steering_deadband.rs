//! Deadband compensation on the torque duty, and the steering loop
//! reaching a target angle through it.

use canpilot::control::{
    deadband_compensate, deadband_uncompensate, DeadbandParams, LowLevelConfig, SteeringController,
};
use canpilot::plant::{KMaps, PlantConfig, PlantInputs, Vehicle, VehicleState};

fn main() {
    let p = DeadbandParams::default();
    println!("  tau   command   back");
    for tau in [37.0, 40.0, 43.5, 50.0, 52.0, 57.0, 60.0, 64.0] {
        let cmd = deadband_compensate(&p, tau).unwrap();
        println!(
            "{tau:>5.1}  {cmd:>8.3}  {:>5.1}",
            deadband_uncompensate(&p, cmd)
        );
    }

    let cfg = PlantConfig::default();
    let mut car = Vehicle::new(
        cfg.clone(),
        VehicleState {
            speed_mph: 25.0,
            ..Default::default()
        },
    )
    .unwrap();
    let mut ctl = SteeringController::new(&LowLevelConfig::default(), KMaps::from(&cfg));
    let mut cmd = PlantInputs {
        app_pct: 9.5,
        ..Default::default()
    };
    println!("\nsteering to 1500 counts");
    for ms in 0..=2_000 {
        if ms % 10 == 0 {
            let tau = ctl.step(1500.0, car.state().steer_angle_counts, 0.01);
            cmd.steer_duty = deadband_compensate(&p, tau).unwrap();
        }
        if ms % 200 == 0 {
            println!(
                "  t = {:.1} s  duty {:>6.2}  angle {:>8.1}",
                ms as f64 / 1e3,
                cmd.steer_duty,
                car.state().steer_angle_counts
            );
        }
        car.step(&cmd, 1e-3);
    }
}
