//! Open-loop pedal steps on the identified plant.

use canpilot::plant::{app_k, bpp_k, PlantConfig, PlantInputs, Vehicle, VehicleState};

fn main() {
    let cfg = PlantConfig::default();
    let mut car = Vehicle::new(cfg.clone(), VehicleState::default()).unwrap();
    let app = PlantInputs {
        app_pct: 15.0,
        ..Default::default()
    };
    println!(
        "APP 15 % from rest, settle speed {:.2} mph",
        app_k(15.0).unwrap()
    );
    for s in 0..=35 {
        if s % 5 == 0 {
            println!("  t = {s:>2} s  {:>6.2} mph", car.state().speed_mph);
        }
        for _ in 0..1000 {
            car.step(&app, 1e-3);
        }
    }

    println!(
        "\nBPP 15 %, settle deceleration {:.4}",
        bpp_k(15.0).unwrap()
    );
    let brake = PlantInputs {
        bpp_pct: 15.0,
        ..Default::default()
    };
    let mut car = Vehicle::new(
        cfg,
        VehicleState {
            speed_mph: 25.0,
            ..Default::default()
        },
    )
    .unwrap();
    for ms in 0..=3_000 {
        if ms % 300 == 0 {
            let s = car.state();
            println!(
                "  t = {:.1} s  decel {:>8.5}  speed {:>6.2} mph",
                ms as f64 / 1e3,
                s.decel_state,
                s.speed_mph
            );
        }
        car.step(&brake, 1e-3);
    }

    println!("\nsteering duty sweep, settle counts");
    for duty in [37.0, 42.0, 45.0, 50.0, 55.0, 57.3, 60.0, 64.0] {
        let mut car = Vehicle::new(PlantConfig::default(), VehicleState::default()).unwrap();
        let cmd = PlantInputs {
            steer_duty: duty,
            ..Default::default()
        };
        for _ in 0..3_000 {
            car.step(&cmd, 1e-3);
        }
        println!("  {duty:>5.1} %  {:>8.1}", car.state().steer_angle_counts);
    }
}
