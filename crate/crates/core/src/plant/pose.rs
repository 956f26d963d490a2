use super::{PoseParams, VehicleState, MPH_TO_MPS};

/// Kinematic bicycle update of heading and north/east position.
///
/// Road-wheel angle is `counts / counts_per_rad / steer_ratio`. Heading is
/// advanced first and the position uses the updated heading.
pub fn pose_step(params: &PoseParams, state: &VehicleState, dt_s: f64) -> VehicleState {
    let mut s = *state;
    let v = s.speed_mph * MPH_TO_MPS;
    if v == 0.0 {
        return s;
    }
    let road = road_wheel_angle(params, s.steer_angle_counts);
    s.heading_rad += v / params.wheelbase_m * road.tan() * dt_s;
    s.p_n += v * s.heading_rad.cos() * dt_s;
    s.p_e += v * s.heading_rad.sin() * dt_s;
    s
}

pub fn road_wheel_angle(params: &PoseParams, counts: f64) -> f64 {
    counts / params.counts_per_rad / params.steer_ratio
}
