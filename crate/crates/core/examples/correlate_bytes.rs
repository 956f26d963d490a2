//! Ranking every payload byte of a drive by correlation with speed. The
//! throttle command leads speed through a 7 s lag, so it lands mid-table.

use canpilot::can::ids;
use canpilot::revtools::{correlate_bytes, speed_series, synthetic_drive};

fn main() {
    let drive = synthetic_drive(1, 102, 120.0);
    let speed = speed_series(&drive.trace, ids::SPEED);
    let rep = correlate_bytes(&drive.trace, &speed, false).unwrap();
    println!("rank     id  byte        r");
    for e in rep.top(15) {
        println!(
            "{:>4}  0x{:03X}  {:>4}  {:>7.4}",
            e.rank,
            e.id,
            e.byte + 1,
            e.r
        );
    }
    let throttle = rep
        .entries
        .iter()
        .find(|e| e.id == ids::THROTTLE && e.byte == 3)
        .unwrap();
    println!(
        "\n0x11A byte 4: r = {:.4}, rank {} of {} ({} bytes excluded)",
        throttle.r,
        throttle.rank,
        rep.entries.len(),
        rep.excluded.len()
    );
}
