use serde::{Deserialize, Serialize};

use crate::follower::{FlatState, TargetPath};

/// Distance to the current virtual-target sample, and to the closest point
/// of the path.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct PathError {
    pub target_error_m: f64,
    pub nearest_point_error_m: f64,
}

pub fn path_error(x: &FlatState, path: &TargetPath, t_s: f64) -> PathError {
    let target_error_m = x.distance(&path.sample_at(t_s).state());
    // the target sample lies on the polyline, so this never exceeds it
    let nearest_point_error_m = path.nearest_distance(x).min(target_error_m);
    PathError {
        target_error_m,
        nearest_point_error_m,
    }
}

#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
pub struct LapMetrics {
    /// 1-based lap number.
    pub lap: usize,
    pub samples: usize,
    pub avg_path_error_m: f64,
    pub max_path_error_m: f64,
    pub avg_target_error_m: f64,
    pub avg_velocity_error_mph: f64,
}

/// Tracking summary over the high-level ticks. Path error is the distance
/// to the closest point of the path; target error is the distance to the
/// current virtual-target sample.
#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
pub struct RunMetrics {
    pub samples: usize,
    pub avg_path_error_m: f64,
    pub max_path_error_m: f64,
    pub avg_target_error_m: f64,
    pub max_target_error_m: f64,
    pub avg_velocity_error_mph: f64,
    pub laps: Vec<LapMetrics>,
}

#[derive(Debug, Clone, Copy, Default)]
struct Sums {
    n: usize,
    path: f64,
    path_max: f64,
    target: f64,
    target_max: f64,
    vel: f64,
}

impl Sums {
    fn add(&mut self, e: &PathError, vel: f64) {
        self.n += 1;
        self.path += e.nearest_point_error_m;
        self.path_max = self.path_max.max(e.nearest_point_error_m);
        self.target += e.target_error_m;
        self.target_max = self.target_max.max(e.target_error_m);
        self.vel += vel;
    }

    fn mean(&self, x: f64) -> f64 {
        if self.n == 0 {
            0.0
        } else {
            x / self.n as f64
        }
    }
}

/// Running accumulation of [`RunMetrics`].
#[derive(Debug, Clone, Default)]
pub struct MetricsAccumulator {
    total: Sums,
    laps: Vec<Sums>,
}

impl MetricsAccumulator {
    /// Adds one sample taken during zero-based target lap `lap`.
    pub fn push(&mut self, lap: usize, e: &PathError, velocity_error_mph: f64) {
        self.total.add(e, velocity_error_mph);
        if self.laps.len() <= lap {
            self.laps.resize(lap + 1, Sums::default());
        }
        self.laps[lap].add(e, velocity_error_mph);
    }

    pub fn finish(&self) -> RunMetrics {
        let t = &self.total;
        RunMetrics {
            samples: t.n,
            avg_path_error_m: t.mean(t.path),
            max_path_error_m: t.path_max,
            avg_target_error_m: t.mean(t.target),
            max_target_error_m: t.target_max,
            avg_velocity_error_mph: t.mean(t.vel),
            laps: self
                .laps
                .iter()
                .enumerate()
                .map(|(i, l)| LapMetrics {
                    lap: i + 1,
                    samples: l.n,
                    avg_path_error_m: l.mean(l.path),
                    max_path_error_m: l.path_max,
                    avg_target_error_m: l.mean(l.target),
                    avg_velocity_error_mph: l.mean(l.vel),
                })
                .collect(),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::follower::TargetSample;
    use proptest::prelude::*;

    /// Northbound straight, 1 m/s, sampled at 10 Hz for 20 s.
    fn north() -> TargetPath {
        let s = (0..=200)
            .map(|i| {
                let t = i as f64 * 0.1;
                TargetSample {
                    t,
                    p_nt: t,
                    p_et: 0.0,
                    v_nt: 1.0,
                    v_et: 0.0,
                }
            })
            .collect();
        TargetPath::once(s).unwrap()
    }

    #[test]
    fn on_target() {
        let e = path_error(&FlatState { p_n: 5.0, p_e: 0.0 }, &north(), 5.0);
        assert_eq!(e.target_error_m, 0.0);
        assert_eq!(e.nearest_point_error_m, 0.0);
    }

    #[test]
    fn east_offset() {
        let e = path_error(&FlatState { p_n: 7.3, p_e: 3.0 }, &north(), 7.3);
        assert!((e.nearest_point_error_m - 3.0).abs() < 1e-12);
    }

    #[test]
    fn behind_the_target() {
        let e = path_error(&FlatState { p_n: 5.0, p_e: 0.0 }, &north(), 10.0);
        assert!((e.target_error_m - 5.0).abs() < 1e-12);
        assert_eq!(e.nearest_point_error_m, 0.0);
    }

    #[test]
    fn empty_accumulator_is_zero() {
        assert_eq!(
            MetricsAccumulator::default().finish(),
            RunMetrics::default()
        );
    }

    #[test]
    fn per_lap_means() {
        let mut m = MetricsAccumulator::default();
        let e = |p| PathError {
            target_error_m: p,
            nearest_point_error_m: p,
        };
        m.push(0, &e(1.0), 1.0);
        m.push(0, &e(3.0), 1.0);
        m.push(1, &e(0.5), 0.0);
        let r = m.finish();
        assert_eq!(r.laps.len(), 2);
        assert_eq!(r.laps[0].avg_path_error_m, 2.0);
        assert_eq!(r.laps[1].avg_path_error_m, 0.5);
        assert_eq!(r.avg_path_error_m, 1.5);
        assert_eq!(r.max_path_error_m, 3.0);
        assert!((r.avg_velocity_error_mph - 2.0 / 3.0).abs() < 1e-15);
    }

    proptest! {
        #[test]
        fn nearest_never_exceeds_target(pn in -50.0..50.0f64, pe in -50.0..50.0f64, t in 0.0..25.0f64) {
            let e = path_error(&FlatState { p_n: pn, p_e: pe }, &north(), t);
            prop_assert!(e.nearest_point_error_m <= e.target_error_m);
        }
    }
}
