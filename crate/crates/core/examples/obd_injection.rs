//! Taking over the throttle from the diagnostics port: forged 0x11A
//! frames 250 us behind the genuine ones, compared with cutting in at the
//! PCM.

use canpilot::can::{ids, BroadcastSchedule, Bus};
use canpilot::injection::{
    dominance_fraction, idle_traffic, run_injection, InjectionMode, InjectionSpec, ShadowInjector,
};

fn main() {
    // Receiver hold time with a 10 ms throttle period.
    let period = 10_000;
    let mut bus = Bus::new(
        BroadcastSchedule::new()
            .with(ids::THROTTLE, period)
            .unwrap(),
    );
    let inj = ShadowInjector::single_byte(ids::THROTTLE, period, 4, |_| 0x40).unwrap();
    let mut seen = Vec::new();
    for t in (50..=1_010_000).step_by(50) {
        for f in bus.step(t, |_, _| vec![0; 8]) {
            if f.data()[3] == 0 {
                bus.enqueue(inj.shadow_inject(&f, f.timestamp_us()).unwrap());
            }
            seen.push(f);
        }
    }
    let frac = dominance_fraction(
        &seen,
        ids::THROTTLE,
        |f| f.data()[3] == 0x40,
        period,
        1_000_000 + period,
    );
    println!("forged value held {:.2} % of the time", frac * 100.0);

    for (label, mode) in [
        ("tap", InjectionMode::Tap),
        ("diagnostics port", InjectionMode::Shadow { delay_us: 250 }),
    ] {
        let mut spec = InjectionSpec::new(ids::THROTTLE, 4, "0:120:20".parse().unwrap());
        spec.hold_us = 3_000_000;
        spec.mode = mode;
        let run = run_injection(&idle_traffic(spec.duration_us(), 100_000), &spec).unwrap();
        println!("\n{label}: byte 4 ramp 0..120 step 20, 3 s per step");
        for s in run.speed.iter().step_by(10) {
            println!(
                "  t = {:>4.1} s  app {:>5.1} %  {:>6.2} mph",
                s.t_s, s.app_pct, s.speed_mph
            );
        }
    }
}
