//! The `1/K` blocks: pedal or duty that settles the plant at a requested
//! speed, deceleration or steering angle.

use crate::plant::KMaps;

use super::ControlError;

/// Root of `c0·x² + c1·x + c2 = y` on the branch right of the vertex.
fn right_root(c: &[f64; 3], y: f64) -> Option<f64> {
    let disc = c[1] * c[1] - 4.0 * c[0] * (c[2] - y);
    if disc < 0.0 {
        return None;
    }
    Some(-c[1] / (2.0 * c[0]) + disc.sqrt() / (2.0 * c[0].abs()))
}

/// Accelerator pedal percentage for a settle speed: `(v − b)/m`.
pub fn invert_k_app(k: &KMaps, speed_mph: f64) -> Result<f64, ControlError> {
    let max = k.app_slope * 100.0 + k.app_intercept;
    if !(speed_mph.is_finite() && (0.0..=max).contains(&speed_mph)) {
        return Err(ControlError::Unachievable {
            what: "speed",
            value: speed_mph,
            min: 0.0,
            max,
        });
    }
    Ok((speed_mph - k.app_intercept) / k.app_slope)
}

/// Brake pedal percentage for a settle deceleration, on the branch where
/// more pedal means harder braking.
pub fn invert_k_bpp(k: &KMaps, decel: f64) -> Result<f64, ControlError> {
    let c = &k.bpp;
    let vertex = -c[1] / (2.0 * c[0]);
    let lightest = k.bpp_unchecked(vertex);
    let hardest = k.bpp_unchecked(100.0);
    let unachievable = ControlError::Unachievable {
        what: "deceleration",
        value: decel,
        min: hardest,
        max: lightest,
    };
    if !(decel.is_finite() && (hardest..=lightest).contains(&decel)) {
        return Err(unachievable);
    }
    right_root(c, decel)
        .map(|x| x.clamp(vertex, 100.0))
        .ok_or(unachievable)
}

/// Steering duty (> 50) settling at `counts`, on the increasing branch and
/// clamped to `[vertex, steer_duty_max]`.
pub fn invert_k_steer(k: &KMaps, counts: f64) -> Result<f64, ControlError> {
    if !counts.is_finite() {
        return Err(ControlError::Unachievable {
            what: "steering angle",
            value: counts,
            min: k.steer_min_counts(),
            max: k.steer_max_counts(),
        });
    }
    let vertex = k.steer_vertex();
    let x = right_root(&k.steer, counts).unwrap_or(vertex);
    Ok(x.clamp(vertex, k.steer_duty_max))
}

/// Duty for a signed settle angle, the inverse of the plant's full
/// steering map: mirrored below 50 %, and a linear ramp between the
/// deadband edge and the parabola vertex for angles smaller than the
/// vertex value. Zero counts maps to 50 (no torque).
pub fn signed_steer_duty(k: &KMaps, deadband_max: f64, counts: f64) -> f64 {
    if counts == 0.0 || !counts.is_finite() {
        return 50.0;
    }
    let mag = counts.abs();
    let vertex = k.steer_vertex();
    let min_counts = k.steer_min_counts();
    let duty = if mag >= min_counts {
        invert_k_steer(k, mag).expect("finite")
    } else {
        deadband_max + (vertex - deadband_max) * mag / min_counts
    };
    if counts > 0.0 {
        duty
    } else {
        100.0 - duty
    }
}
