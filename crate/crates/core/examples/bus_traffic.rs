//! One second of the simulated modules on the bus while the car pulls
//! away, written as a text trace.

use canpilot::can::{ids, parse_trace, serialize_trace, Bus, CanTrace};
use canpilot::plant::{default_schedule, Ecus, PlantConfig, PlantInputs, Vehicle, VehicleState};

fn main() {
    let mut car = Vehicle::new(PlantConfig::default(), VehicleState::default()).unwrap();
    let mut ecus = Ecus::new();
    let mut bus = Bus::new(default_schedule(100_000));
    let pedals = PlantInputs {
        app_pct: 30.0,
        steer_duty: 58.0,
        ..Default::default()
    };
    let mut trace = CanTrace::default();
    for ms in 1..=1_000u64 {
        car.step(&pedals, 1e-3);
        let s = *car.state();
        for f in bus.step(ms * 1_000, |id, _| ecus.payload(id, &s, &pedals)) {
            trace.push(f).unwrap();
        }
    }
    for id in trace.ids() {
        let n = trace.iter().filter(|f| f.id() == id).count();
        println!("0x{id:03X}: {n} frames");
    }
    let last_speed = trace.iter().rev().find(|f| f.id() == ids::SPEED).unwrap();
    println!(
        "last speed frame {last_speed:?} = {:.2} mph",
        canpilot::can::decode_speed(last_speed).unwrap()
    );

    let text = serialize_trace(&trace);
    println!(
        "\nfirst lines:\n{}",
        text.lines().take(6).collect::<Vec<_>>().join("\n")
    );
    assert_eq!(parse_trace(&text).unwrap(), trace);
}
