use super::{run, Scenario, SimError};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Calibration {
    pub k_d: f64,
    /// Average path error over the final lap at `k_d`.
    pub last_lap_error_m: f64,
    pub runs: usize,
}

fn last_lap_error(sc: &Scenario, k_d: f64) -> Result<f64, SimError> {
    let mut sc = sc.clone();
    sc.follower.k_d = k_d;
    let m = run(&sc)?.metrics;
    Ok(m.laps
        .last()
        .map(|l| l.avg_path_error_m)
        .unwrap_or(m.avg_path_error_m))
}

/// Golden-section search over `log k_d` in `[lo, hi]` for the smallest
/// final-lap average path error, using `iterations` narrowing steps.
pub fn calibrate_kd(
    base: &Scenario,
    lo: f64,
    hi: f64,
    iterations: usize,
) -> Result<Calibration, SimError> {
    if !(lo > 0.0 && hi > lo) {
        return Err(SimError::Config(format!(
            "k_d search range [{lo}, {hi}] is empty"
        )));
    }
    let g = (5f64.sqrt() - 1.0) / 2.0;
    let (mut a, mut b) = (lo.ln(), hi.ln());
    let mut c = b - g * (b - a);
    let mut d = a + g * (b - a);
    let mut fc = last_lap_error(base, c.exp())?;
    let mut fd = last_lap_error(base, d.exp())?;
    let mut runs = 2;
    for _ in 0..iterations {
        if fc <= fd {
            b = d;
            d = c;
            fd = fc;
            c = b - g * (b - a);
            fc = last_lap_error(base, c.exp())?;
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + g * (b - a);
            fd = last_lap_error(base, d.exp())?;
        }
        runs += 1;
    }
    let (x, f) = if fc <= fd { (c, fc) } else { (d, fd) };
    Ok(Calibration {
        k_d: x.exp(),
        last_lap_error_m: f,
        runs,
    })
}
