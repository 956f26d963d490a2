//! Bisecting a 102-id drive recording to find the message that moves the
//! car.

use std::cell::Cell;

use canpilot::plant::PlantConfig;
use canpilot::revtools::{group_by_id, isolate_control_id, plant_oracle, synthetic_drive};

fn main() {
    let drive = synthetic_drive(1, 102, 30.0);
    let groups = group_by_id(&drive.trace);
    println!("{} frames, {} ids", drive.trace.len(), groups.len());
    let mut bench = plant_oracle(PlantConfig::default(), 1.0);
    let round = Cell::new(0);
    let found = isolate_control_id(&groups, |frames| {
        let ids: std::collections::BTreeSet<u16> = frames.iter().map(|f| f.id()).collect();
        let moved = bench(frames);
        round.set(round.get() + 1);
        println!(
            "replay {}: {:>3} ids  accelerated: {moved}",
            round.get(),
            ids.len()
        );
        moved
    })
    .unwrap();
    println!(
        "actuating id: 0x{:03X} after {} replays",
        found.id, found.oracle_calls
    );
}
