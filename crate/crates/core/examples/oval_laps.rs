//! Two laps of the oval with the full stack in the loop: follower, PI
//! loops, serial link, deadband compensation, plant and bus.
//!
//! Pass a directory to write the logs there.

use canpilot::follower::OvalSpec;
use canpilot::sim::{calibrate_kd, emit_logs, run, Scenario};

fn main() {
    let mut sc = Scenario::oval_laps(2);
    sc.initial.p_e = -3.0;
    let oval = OvalSpec::default();
    println!(
        "oval {:.1} m per lap, {:.1} s at 20 mph, run {} s",
        oval.lap_length(),
        oval.lap_length() / oval.speed_mps,
        sc.duration_s
    );

    let cal = calibrate_kd(&sc, 1e3, 2.56e5, 10).unwrap();
    println!(
        "calibrated k_d {:.0} counts/rad over {} runs",
        cal.k_d, cal.runs
    );
    sc.follower.k_d = cal.k_d;

    let r = run(&sc).unwrap();
    let m = &r.metrics;
    println!(
        "overall: path error avg {:.3} m, max {:.3} m; speed error avg {:.3} mph",
        m.avg_path_error_m, m.max_path_error_m, m.avg_velocity_error_mph
    );
    for l in &m.laps {
        println!(
            "lap {}: path error avg {:.3} m (max {:.3}), target error avg {:.3} m",
            l.lap, l.avg_path_error_m, l.max_path_error_m, l.avg_target_error_m
        );
    }
    if let Some(dir) = std::env::args().nth(1) {
        for p in emit_logs(&r, dir.as_ref()).unwrap() {
            println!("wrote {}", p.display());
        }
    }
}
