use std::f64::consts::PI;

use nalgebra::Matrix2;
use serde::{Deserialize, Serialize};

use super::{FlatInput, FlatState, TargetSample};
use crate::plant::MPH_TO_MPS;

/// How the commanded heading becomes a steering-wheel angle.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum HeadingMode {
    /// `θ_d = k_d · wrap(ψ_d − ψ)`.
    #[default]
    HeadingError,
    /// `θ_d = k_d · ψ_d`, heading taken as absolute. Does not close a lap.
    Absolute,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FollowerGains {
    pub k: Matrix2<f64>,
    /// Steering counts per radian of heading.
    pub k_d: f64,
    pub heading_mode: HeadingMode,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FollowerOutput {
    pub u: FlatInput,
    pub v_desired_mps: f64,
    pub v_desired_mph: f64,
    /// Desired heading, radians clockwise from north.
    pub psi_desired: f64,
    pub theta_desired_counts: f64,
}

/// Wraps an angle into `(−π, π]`.
pub fn wrap_to_pi(a: f64) -> f64 {
    let w = (a + PI).rem_euclid(2.0 * PI) - PI;
    if w == -PI {
        PI
    } else {
        w
    }
}

/// Virtual-target tracking law `u = u_t − k(x − x_t)`, mapped to a desired
/// speed `|u|` and heading `atan2(u_e, u_n)`.
pub fn follower_step(
    x: &FlatState,
    target: &TargetSample,
    gains: &FollowerGains,
    vehicle_heading: f64,
) -> FollowerOutput {
    let err = x.vector() - target.state().vector();
    let u = FlatInput::from_vector(target.input().vector() - gains.k * err);
    let v = u.speed();
    let psi = if v > 0.0 {
        u.v_e.atan2(u.v_n)
    } else {
        vehicle_heading
    };
    let theta = match gains.heading_mode {
        HeadingMode::HeadingError => gains.k_d * wrap_to_pi(psi - vehicle_heading),
        HeadingMode::Absolute => gains.k_d * wrap_to_pi(psi),
    };
    FollowerOutput {
        u,
        v_desired_mps: v,
        v_desired_mph: v / MPH_TO_MPS,
        psi_desired: psi,
        theta_desired_counts: theta,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn gains() -> FollowerGains {
        FollowerGains {
            k: Matrix2::identity(),
            k_d: 5000.0,
            heading_mode: HeadingMode::HeadingError,
        }
    }

    fn target(pn: f64, pe: f64, vn: f64, ve: f64) -> TargetSample {
        TargetSample {
            t: 0.0,
            p_nt: pn,
            p_et: pe,
            v_nt: vn,
            v_et: ve,
        }
    }

    #[test]
    fn on_target_passes_feedforward() {
        let t = target(3.0, 4.0, 6.0, 8.0);
        let out = follower_step(&t.state(), &t, &gains(), 0.0);
        assert_eq!(out.u, t.input());
        assert!((out.v_desired_mps - 10.0).abs() < 1e-12);
    }

    #[test]
    fn offset_north_drives_south() {
        let t = target(0.0, 0.0, 0.0, 0.0);
        let out = follower_step(&FlatState { p_n: 1.0, p_e: 0.0 }, &t, &gains(), 0.0);
        assert_eq!((out.u.v_n, out.u.v_e), (-1.0, 0.0));
        assert!((out.v_desired_mps - 1.0).abs() < 1e-12);
        assert!((out.psi_desired.abs() - PI).abs() < 1e-12);
    }

    #[test]
    fn aligned_heading_needs_no_steering() {
        let t = target(50.0, 0.0, 10.0, 0.0);
        let out = follower_step(&t.state(), &t, &gains(), 0.0);
        assert_eq!(out.theta_desired_counts, 0.0);
    }

    #[test]
    fn southbound_uses_four_quadrants() {
        let t = target(0.0, 0.0, -5.0, -0.1);
        let out = follower_step(&t.state(), &t, &gains(), PI);
        assert!(out.psi_desired < -3.0);
        assert!(out.theta_desired_counts.abs() < 0.03 * 5000.0);
    }

    #[test]
    fn absolute_mode() {
        let g = FollowerGains {
            heading_mode: HeadingMode::Absolute,
            ..gains()
        };
        let t = target(0.0, 0.0, 0.0, 1.0);
        let out = follower_step(&t.state(), &t, &g, 1.0);
        assert!((out.theta_desired_counts - 5000.0 * PI / 2.0).abs() < 1e-9);
    }

    #[test]
    fn wrap_range() {
        assert_eq!(wrap_to_pi(PI), PI);
        assert_eq!(wrap_to_pi(-PI), PI);
        assert!((wrap_to_pi(3.0 * PI / 2.0) + PI / 2.0).abs() < 1e-12);
    }

    proptest! {
        #[test]
        fn speed_non_negative_and_parallel_means_straight(
            pn in -50.0f64..50.0, pe in -50.0f64..50.0,
            vn in -20.0f64..20.0, ve in -20.0f64..20.0,
        ) {
            let t = target(pn, pe, vn, ve);
            let x = FlatState { p_n: pn + 1.0, p_e: pe - 2.0 };
            let out = follower_step(&x, &t, &gains(), 0.3);
            prop_assert!(out.v_desired_mps >= 0.0);
            if out.v_desired_mps > 1e-9 {
                let heading = out.u.v_e.atan2(out.u.v_n);
                let aligned = follower_step(&x, &t, &gains(), heading);
                prop_assert!(aligned.theta_desired_counts.abs() < 1e-9);
            }
        }
    }
}
