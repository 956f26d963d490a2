//! Virtual-target trajectory files.
//!
//! Plain text, comma-separated, one sample per line in SI units:
//!
//! ```text
//! t,p_n,p_e,v_n,v_e
//! 0.0,0.0,0.0,8.9408,0.0
//! ```
//!
//! A header line and `#` comments are optional.

use std::fmt::Write as _;

use serde::{Deserialize, Serialize};

use super::{FlatInput, FlatState, FollowerError};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TargetSample {
    pub t: f64,
    pub p_nt: f64,
    pub p_et: f64,
    pub v_nt: f64,
    pub v_et: f64,
}

impl TargetSample {
    pub fn state(&self) -> FlatState {
        FlatState {
            p_n: self.p_nt,
            p_e: self.p_et,
        }
    }

    pub fn input(&self) -> FlatInput {
        FlatInput {
            v_n: self.v_nt,
            v_e: self.v_et,
        }
    }
}

pub const HEADER: &str = "t,p_n,p_e,v_n,v_e";

pub fn load_target_path(text: &str) -> Result<Vec<TargetSample>, FollowerError> {
    let mut out: Vec<TargetSample> = Vec::new();
    for (i, raw) in text.lines().enumerate() {
        let line = raw.trim();
        let lineno = i + 1;
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        if out.is_empty() && line.replace(' ', "").eq_ignore_ascii_case(HEADER) {
            continue;
        }
        let fields: Vec<&str> = line.split(',').map(str::trim).collect();
        if fields.len() != 5 {
            return Err(FollowerError::Parse {
                line: lineno,
                reason: format!("expected 5 columns, found {}", fields.len()),
            });
        }
        let mut v = [0.0; 5];
        for (slot, f) in v.iter_mut().zip(&fields) {
            *slot = f
                .parse::<f64>()
                .ok()
                .filter(|x| x.is_finite())
                .ok_or_else(|| FollowerError::Parse {
                    line: lineno,
                    reason: format!("bad number {f:?}"),
                })?;
        }
        let s = TargetSample {
            t: v[0],
            p_nt: v[1],
            p_et: v[2],
            v_nt: v[3],
            v_et: v[4],
        };
        if let Some(prev) = out.last() {
            if s.t <= prev.t {
                return Err(FollowerError::NonMonotoneTime { line: lineno });
            }
        }
        out.push(s);
    }
    Ok(out)
}

pub fn save_target_path(samples: &[TargetSample]) -> String {
    let mut out = String::from(HEADER);
    out.push('\n');
    for s in samples {
        writeln!(out, "{},{},{},{},{}", s.t, s.p_nt, s.p_et, s.v_nt, s.v_et).unwrap();
    }
    out
}

/// A loaded trajectory with nearest-time sample selection, optionally
/// replayed periodically.
#[derive(Debug, Clone, PartialEq)]
pub struct TargetPath {
    samples: Vec<TargetSample>,
    period: Option<f64>,
}

impl TargetPath {
    /// Plays once; past the last sample the final sample holds.
    pub fn once(samples: Vec<TargetSample>) -> Result<Self, FollowerError> {
        if samples.is_empty() {
            return Err(FollowerError::EmptyPath);
        }
        Ok(Self {
            samples,
            period: None,
        })
    }

    /// Replays with period `t_last − t_first + mean sample interval`, so a
    /// closed track recorded at a fixed rate wraps seamlessly. Single-sample
    /// paths hold forever.
    pub fn looped(samples: Vec<TargetSample>) -> Result<Self, FollowerError> {
        let mut p = Self::once(samples)?;
        let n = p.samples.len();
        if n > 1 {
            let span = p.samples[n - 1].t - p.samples[0].t;
            p.period = Some(span + span / (n - 1) as f64);
        }
        Ok(p)
    }

    pub fn samples(&self) -> &[TargetSample] {
        &self.samples
    }

    pub fn period(&self) -> Option<f64> {
        self.period
    }

    pub fn start_time(&self) -> f64 {
        self.samples[0].t
    }

    /// Zero-based replay count at time `t` (0 for non-looping paths).
    pub fn lap(&self, t: f64) -> usize {
        match self.period {
            Some(p) if t > self.start_time() => ((t - self.start_time()) / p).floor() as usize,
            _ => 0,
        }
    }

    /// Index of the sample nearest in time to `t` (after wrapping).
    pub fn index_at(&self, t: f64) -> usize {
        let t0 = self.start_time();
        let n = self.samples.len();
        let local = match self.period {
            Some(p) => t0 + (t - t0).rem_euclid(p),
            None => t,
        };
        let after = self.samples.partition_point(|s| s.t <= local);
        if after == 0 {
            return 0;
        }
        let before = after - 1;
        let next_t = if after < n {
            self.samples[after].t
        } else if let Some(p) = self.period {
            t0 + p
        } else {
            return n - 1;
        };
        if next_t - local < local - self.samples[before].t {
            after % n
        } else {
            before
        }
    }

    pub fn sample_at(&self, t: f64) -> &TargetSample {
        &self.samples[self.index_at(t)]
    }

    /// Arc length of the polyline, including the closing segment for a
    /// looping path.
    pub fn length(&self) -> f64 {
        let mut len: f64 = self
            .samples
            .windows(2)
            .map(|w| w[0].state().distance(&w[1].state()))
            .sum();
        if self.period.is_some() && self.samples.len() > 2 {
            len += self.samples[0]
                .state()
                .distance(&self.samples[self.samples.len() - 1].state());
        }
        len
    }

    /// Shortest distance from `x` to the sampled path polyline.
    pub fn nearest_distance(&self, x: &FlatState) -> f64 {
        let pts: Vec<FlatState> = self.samples.iter().map(TargetSample::state).collect();
        if pts.len() == 1 {
            return x.distance(&pts[0]);
        }
        let mut best = pts
            .windows(2)
            .map(|w| segment_distance(x, &w[0], &w[1]))
            .fold(f64::INFINITY, f64::min);
        if self.period.is_some() && pts.len() > 2 {
            best = best.min(segment_distance(x, &pts[pts.len() - 1], &pts[0]));
        }
        best
    }
}

fn segment_distance(x: &FlatState, a: &FlatState, b: &FlatState) -> f64 {
    let (dx, dy) = (b.p_n - a.p_n, b.p_e - a.p_e);
    let len2 = dx * dx + dy * dy;
    let t = if len2 == 0.0 {
        0.0
    } else {
        (((x.p_n - a.p_n) * dx + (x.p_e - a.p_e) * dy) / len2).clamp(0.0, 1.0)
    };
    (x.p_n - (a.p_n + t * dx)).hypot(x.p_e - (a.p_e + t * dy))
}
