use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, Normal};
use serde::Serialize;

use crate::can::{self, ids, Bus, CanFrame, CanTrace, FrameOrigin};
use crate::control::{
    deadband_compensate, LongitudinalController, LongitudinalMode, SteeringController,
};
use crate::follower::{follower_step, FlatState};
use crate::injection::{tap_filter, FilterRule, ShadowInjector};
use crate::plant::{default_schedule, Ecus, KMaps, PlantInputs, Tcm, Vehicle, VehicleState};
use crate::serial::{decode_packet, encode_packet, CommandPacket};

use super::{path_error, InjectionKind, MetricsAccumulator, RunMetrics, Scenario, SimError};

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct StateRow {
    pub t_s: f64,
    pub p_n_m: f64,
    pub p_e_m: f64,
    pub heading_rad: f64,
    pub speed_mph: f64,
    pub steer_counts: f64,
    pub decel: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct CommandRow {
    pub t_s: f64,
    pub v_desired_mph: f64,
    pub theta_desired_counts: f64,
    pub measured_speed_mph: f64,
    pub measured_steer_counts: f64,
    pub mode: &'static str,
    pub app_pct: f64,
    pub bpp_pct: f64,
    /// Controller-side torque duty after the serial link.
    pub steer_tau_pct: f64,
    /// Duty sent to the car after deadband compensation.
    pub steer_cmd_pct: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ErrorRow {
    pub t_s: f64,
    pub lap: usize,
    pub target_p_n_m: f64,
    pub target_p_e_m: f64,
    pub target_error_m: f64,
    pub nearest_point_error_m: f64,
    pub velocity_error_mph: f64,
}

#[derive(Debug, Clone, Default, PartialEq)]
pub struct RunLogs {
    pub state: Vec<StateRow>,
    pub commands: Vec<CommandRow>,
    pub errors: Vec<ErrorRow>,
    pub trace: CanTrace,
}

/// How often each loop ran.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize)]
pub struct LoopCounts {
    pub physics: u64,
    pub lowlevel: u64,
    pub highlevel: u64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct RunResult {
    pub logs: RunLogs,
    pub metrics: RunMetrics,
    pub counts: LoopCounts,
    pub final_state: VehicleState,
}

enum ActiveInjector {
    Tap(FilterRule),
    Shadow(ShadowInjector),
}

/// What the controller knows, decoded from the bus.
struct Measured {
    speed_mph: f64,
    steer_counts: f64,
}

/// Runs a scenario to completion.
///
/// Per physics tick: the follower (high-level rate) turns the target and
/// pose into a desired speed and steering angle; the PI loops (low-level
/// rate) turn those into pedal and torque commands, which cross the serial
/// link, get deadband compensation and drive the plant; then the modules
/// publish on the bus, injections are applied, and the controller's speed
/// and steering measurements are refreshed from the delivered frames.
pub fn run(sc: &Scenario) -> Result<RunResult, SimError> {
    sc.validate()?;
    let steps = sc.steps()?;
    let dt = sc.physics_dt_s;
    let dt_us = (dt * 1e6).round() as u64;
    if dt_us == 0 || ((dt * 1e6) - dt_us as f64).abs() > 1e-6 {
        return Err(SimError::Config(format!(
            "physics_dt_s {dt} is not a whole number of microseconds"
        )));
    }
    let ll_dt = dt * steps.per_lowlevel as f64;
    let path = sc.target_path()?;
    let gains = sc.follower.gains()?;
    let kmaps = KMaps::from(&sc.plant);
    let init = VehicleState {
        speed_mph: sc.initial.speed_mph,
        heading_rad: sc.initial.heading_rad,
        p_n: sc.initial.p_n,
        p_e: sc.initial.p_e,
        ..VehicleState::default()
    };
    let mut vehicle = Vehicle::new(sc.plant.clone(), init)?;
    let mut lon = LongitudinalController::new(&sc.control, kmaps);
    let mut lat = SteeringController::new(&sc.control, kmaps);
    let schedule = default_schedule(sc.throttle_period_us);
    let injectors = sc
        .injections
        .iter()
        .map(|c| {
            let inj = match c.mode {
                InjectionKind::Tap => {
                    ActiveInjector::Tap(FilterRule::single_byte(c.id, c.byte, c.value)?)
                }
                InjectionKind::Shadow => {
                    let period = schedule.period_us(c.id).unwrap_or(u64::MAX);
                    let value = c.value;
                    let s = ShadowInjector::single_byte(c.id, period, c.byte, move |_| value)?;
                    ActiveInjector::Shadow(s.with_delay(c.delay_us, period)?)
                }
            };
            Ok((c, inj))
        })
        .collect::<Result<Vec<_>, SimError>>()?;
    let mut bus = Bus::new(schedule);
    let mut ecus = Ecus::new();
    let mut tcm = Tcm::new();
    let mut rng = ChaCha8Rng::seed_from_u64(sc.seed);
    let noise =
        Normal::new(0.0, sc.speed_noise_mph).map_err(|e| SimError::Config(e.to_string()))?;

    let mut measured = Measured {
        speed_mph: init.speed_mph,
        steer_counts: 0.0,
    };
    let (mut v_des, mut theta_des) = (0.0, 0.0);
    let mut pedals = PlantInputs::default();
    let mut metrics = MetricsAccumulator::default();
    let mut logs = RunLogs::default();
    let mut counts = LoopCounts::default();

    for k in 0..steps.total {
        let t = k as f64 * dt;
        let s = *vehicle.state();

        if k % steps.per_highlevel == 0 {
            counts.highlevel += 1;
            if let Some(path) = &path {
                let x = FlatState {
                    p_n: s.p_n,
                    p_e: s.p_e,
                };
                let target = path.sample_at(t);
                let out = follower_step(&x, target, &gains, s.heading_rad);
                v_des = out.v_desired_mph;
                theta_des = out.theta_desired_counts;
                let e = path_error(&x, path, t);
                let vel_err = (v_des - s.speed_mph).abs();
                let lap = path.lap(t);
                metrics.push(lap, &e, vel_err);
                logs.errors.push(ErrorRow {
                    t_s: t,
                    lap: lap + 1,
                    target_p_n_m: target.p_nt,
                    target_p_e_m: target.p_et,
                    target_error_m: e.target_error_m,
                    nearest_point_error_m: e.nearest_point_error_m,
                    velocity_error_mph: vel_err,
                });
            }
        }

        if k % steps.per_lowlevel == 0 {
            counts.lowlevel += 1;
            let cmd = lon.step(v_des, measured.speed_mph, ll_dt);
            let tau = lat.step(theta_des, measured.steer_counts, ll_dt);
            let wire = encode_packet(&CommandPacket::from_percent(cmd.app_pct, cmd.bpp_pct, tau)?)?;
            let rx = decode_packet(&wire)?;
            let db = &sc.control.deadband;
            let tau_rx = (rx.steer_torque * 100.0).clamp(db.tau_min, db.tau_max);
            let steer_cmd = deadband_compensate(db, tau_rx)?;
            pedals = PlantInputs {
                app_pct: rx.app * 100.0,
                bpp_pct: rx.bpp * 100.0,
                steer_duty: steer_cmd,
            };
            logs.state.push(StateRow {
                t_s: t,
                p_n_m: s.p_n,
                p_e_m: s.p_e,
                heading_rad: s.heading_rad,
                speed_mph: s.speed_mph,
                steer_counts: s.steer_angle_counts,
                decel: s.decel_state,
            });
            logs.commands.push(CommandRow {
                t_s: t,
                v_desired_mph: v_des,
                theta_desired_counts: theta_des,
                measured_speed_mph: measured.speed_mph,
                measured_steer_counts: measured.steer_counts,
                mode: match lon.mode() {
                    LongitudinalMode::Accelerate => "accel",
                    LongitudinalMode::Brake => "brake",
                },
                app_pct: pedals.app_pct,
                bpp_pct: pedals.bpp_pct,
                steer_tau_pct: tau_rx,
                steer_cmd_pct: steer_cmd,
            });
        }

        let mut plant_in = pedals;
        if sc.throttle_via_can {
            plant_in.app_pct = tcm.app_pct();
        }
        vehicle.step(&plant_in, dt);
        counts.physics += 1;

        let now_us = (k + 1) * dt_us;
        let now_s = now_us as f64 * 1e-6;
        let s = *vehicle.state();
        let delivered = bus.step_tagged(now_us, |id, _| ecus.payload(id, &s, &pedals));
        for (frame, origin) in delivered {
            let mut frame = frame;
            for (cfg, inj) in &injectors {
                if !cfg.active(now_s) {
                    continue;
                }
                match inj {
                    ActiveInjector::Tap(rule) => frame = tap_filter(rule, &frame),
                    ActiveInjector::Shadow(sh) if origin == FrameOrigin::Periodic => {
                        if let Some(forged) = sh.shadow_inject(&frame, frame.timestamp_us()) {
                            bus.enqueue(forged);
                        }
                    }
                    ActiveInjector::Shadow(_) => {}
                }
            }
            deliver(&frame, &mut tcm, &mut measured, &mut || {
                noise.sample(&mut rng)
            });
            logs.trace.push(frame)?;
        }
    }

    Ok(RunResult {
        logs,
        metrics: metrics.finish(),
        counts,
        final_state: *vehicle.state(),
    })
}

fn deliver(frame: &CanFrame, tcm: &mut Tcm, m: &mut Measured, noise: &mut impl FnMut() -> f64) {
    tcm.receive(frame);
    match frame.id() {
        ids::SPEED => {
            if let Ok(v) = can::decode_speed(frame) {
                m.speed_mph = (v + noise()).max(0.0);
            }
        }
        ids::STEER_ANGLE => {
            if let Ok(c) = can::decode_steer_counts(frame) {
                m.steer_counts = c as f64;
            }
        }
        _ => {}
    }
}
