use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

use super::{FollowerError, TargetSample};

/// Stadium-shaped closed track: two north-south straights joined by
/// semicircles, driven clockwise starting at the origin heading north.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct OvalSpec {
    pub straight_m: f64,
    pub radius_m: f64,
    pub speed_mps: f64,
    /// Nominal sample rate; the actual interval is adjusted so a whole
    /// number of samples spans one lap.
    pub rate_hz: f64,
}

impl Default for OvalSpec {
    fn default() -> Self {
        Self {
            straight_m: 100.0,
            radius_m: 20.0,
            speed_mps: 20.0 * crate::plant::MPH_TO_MPS,
            rate_hz: 10.0,
        }
    }
}

impl OvalSpec {
    pub fn lap_length(&self) -> f64 {
        2.0 * self.straight_m + 2.0 * PI * self.radius_m
    }

    /// Position and unit tangent at arc length `s` along the lap.
    fn point(&self, s: f64) -> ((f64, f64), (f64, f64)) {
        let (l, r) = (self.straight_m, self.radius_m);
        let arc = PI * r;
        let s = s.rem_euclid(self.lap_length());
        if s < l {
            ((s, 0.0), (1.0, 0.0))
        } else if s < l + arc {
            // north turn, centre (l, r)
            let a = (s - l) / r;
            ((l + r * a.sin(), r - r * a.cos()), (a.cos(), a.sin()))
        } else if s < 2.0 * l + arc {
            let d = s - l - arc;
            ((l - d, 2.0 * r), (-1.0, 0.0))
        } else {
            // south turn, centre (0, r)
            let a = (s - 2.0 * l - arc) / r;
            ((-r * a.sin(), r + r * a.cos()), (-a.cos(), -a.sin()))
        }
    }
}

/// One lap of virtual-target samples at constant speed.
pub fn make_oval(spec: &OvalSpec) -> Result<Vec<TargetSample>, FollowerError> {
    for (name, v) in [
        ("straight", spec.straight_m),
        ("radius", spec.radius_m),
        ("speed", spec.speed_mps),
        ("rate", spec.rate_hz),
    ] {
        if !(v.is_finite() && v > 0.0) {
            return Err(FollowerError::InvalidOval(format!(
                "{name} must be positive, got {v}"
            )));
        }
    }
    let lap_time = spec.lap_length() / spec.speed_mps;
    let n = ((lap_time * spec.rate_hz).round() as usize).max(2);
    let dt = lap_time / n as f64;
    Ok((0..n)
        .map(|i| {
            let t = i as f64 * dt;
            let ((pn, pe), (tn, te)) = spec.point(spec.speed_mps * t);
            TargetSample {
                t,
                p_nt: pn,
                p_et: pe,
                v_nt: spec.speed_mps * tn,
                v_et: spec.speed_mps * te,
            }
        })
        .collect())
}
