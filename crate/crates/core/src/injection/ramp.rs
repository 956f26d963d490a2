use std::collections::{BTreeMap, BTreeSet};
use std::str::FromStr;

use serde::Serialize;

use crate::can::{self, ids, BroadcastSchedule, Bus, CanFrame, CanTrace};
use crate::plant::{default_schedule, Ecus, PlantConfig, PlantInputs, Tcm, Vehicle, VehicleState};

use super::{record, tap_filter, FilterRule, InjectionError, ShadowInjector};

/// Byte values `start, start + step, ...` up to and including `end`, each
/// held for a fixed time.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Ramp {
    pub start: u8,
    pub end: u8,
    pub step: u8,
}

impl Ramp {
    pub fn values(&self) -> Vec<u8> {
        let step = self.step.max(1) as usize;
        if self.start <= self.end {
            (self.start..=self.end).step_by(step).collect()
        } else {
            (self.end..=self.start).rev().step_by(step).collect()
        }
    }

    /// Value in force at `t_us` when each step lasts `hold_us`.
    pub fn value_at(&self, t_us: u64, hold_us: u64) -> u8 {
        let v = self.values();
        let i = (t_us / hold_us.max(1)) as usize;
        v[i.min(v.len() - 1)]
    }

    pub fn duration_us(&self, hold_us: u64) -> u64 {
        self.values().len() as u64 * hold_us
    }
}

impl FromStr for Ramp {
    type Err = InjectionError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let bad = || InjectionError::BadRamp(s.to_string());
        let parts: Vec<&str> = s.split(':').collect();
        let [a, b, c] = parts[..] else {
            return Err(bad());
        };
        let num = |p: &str| -> Result<u8, InjectionError> {
            let p = p.trim();
            match p.strip_prefix("0x").or_else(|| p.strip_prefix("0X")) {
                Some(h) => u8::from_str_radix(h, 16),
                None => p.parse(),
            }
            .map_err(|_| bad())
        };
        let ramp = Ramp {
            start: num(a)?,
            end: num(b)?,
            step: num(c)?,
        };
        if ramp.step == 0 {
            return Err(bad());
        }
        Ok(ramp)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum InjectionMode {
    /// Filter-and-replace between the source module and the bus.
    Tap,
    /// Forged copies from the diagnostics port, `delay_us` after each
    /// genuine frame.
    Shadow { delay_us: u64 },
}

#[derive(Debug, Clone)]
pub struct InjectionSpec {
    pub id: u16,
    /// 1-based byte number.
    pub byte: usize,
    pub ramp: Ramp,
    pub hold_us: u64,
    pub mode: InjectionMode,
    /// Interval of the speed log.
    pub sample_us: u64,
    pub plant: PlantConfig,
}

impl InjectionSpec {
    pub fn new(id: u16, byte: usize, ramp: Ramp) -> Self {
        Self {
            id,
            byte,
            ramp,
            hold_us: 1_000_000,
            mode: InjectionMode::Shadow { delay_us: 250 },
            sample_us: 100_000,
            plant: PlantConfig::default(),
        }
    }

    pub fn duration_us(&self) -> u64 {
        self.ramp.duration_us(self.hold_us)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct SpeedSample {
    pub t_s: f64,
    pub speed_mph: f64,
    /// Accelerator percentage the TCM was acting on.
    pub app_pct: f64,
}

#[derive(Debug, Clone)]
pub struct InjectionRun {
    /// Bus traffic as the receiver saw it.
    pub trace: CanTrace,
    pub speed: Vec<SpeedSample>,
}

/// Traffic of a car at rest with nobody on the pedals, used when no
/// recording is supplied.
pub fn idle_traffic(duration_us: u64, throttle_period_us: u64) -> CanTrace {
    let mut bus = Bus::new(default_schedule(throttle_period_us));
    let mut ecus = Ecus::new();
    let state = VehicleState::default();
    let pedals = PlantInputs::default();
    record(&mut bus, duration_us, 1_000, |id, _| {
        ecus.payload(id, &state, &pedals)
    })
}

/// Replays `background` (frames past the ramp are dropped) into a vehicle
/// at rest whose TCM drives the motor, while injecting the ramp on
/// `spec.id`. Speed frames in the background are re-encoded from the
/// simulated vehicle.
pub fn run_injection(
    background: &CanTrace,
    spec: &InjectionSpec,
) -> Result<InjectionRun, InjectionError> {
    spec.plant.validate()?;
    let ramp = spec.ramp;
    let hold = spec.hold_us;
    let duration = spec.duration_us();
    enum Injector {
        Tap(FilterRule),
        Shadow(ShadowInjector),
    }
    let injector = match spec.mode {
        InjectionMode::Tap => Injector::Tap(FilterRule::single_byte(spec.id, spec.byte, 0)?),
        InjectionMode::Shadow { delay_us } => {
            let period = shortest_gap(background, spec.id).unwrap_or(u64::MAX);
            let inj = ShadowInjector::single_byte(spec.id, period, spec.byte, move |t| {
                ramp.value_at(t, hold)
            })?;
            Injector::Shadow(inj.with_delay(delay_us, period)?)
        }
    };
    let frames: Vec<CanFrame> = background
        .iter()
        .filter(|f| f.timestamp_us() <= duration)
        .copied()
        .collect();
    let mut bench = ReceiverBench::new(spec.plant.clone(), spec.sample_us)?;
    let mut events = EventQueue::new(frames);
    let mut seen = Vec::new();
    while let Some((origin, frame)) = events.pop() {
        bench.advance_to(frame.timestamp_us());
        let mut frame = frame;
        if frame.id() == ids::SPEED {
            frame = bench.speed_frame(frame.timestamp_us());
        }
        match &injector {
            Injector::Tap(rule) if frame.id() == spec.id => {
                let mut rule = rule.clone();
                rule.set_replacement(vec![ramp.value_at(frame.timestamp_us(), hold)])?;
                frame = tap_filter(&rule, &frame);
            }
            Injector::Shadow(inj) if origin == 0 => {
                if let Some(forged) = inj.shadow_inject(&frame, frame.timestamp_us()) {
                    if forged.timestamp_us() <= duration {
                        events.push_injected(forged);
                    }
                }
            }
            _ => {}
        }
        bench.receive(&frame);
        seen.push(frame);
    }
    bench.advance_to(duration);
    Ok(InjectionRun {
        trace: CanTrace::new(seen)?,
        speed: bench.into_log(),
    })
}

fn shortest_gap(trace: &CanTrace, id: u16) -> Option<u64> {
    let ts: Vec<u64> = trace
        .iter()
        .filter(|f| f.id() == id)
        .map(|f| f.timestamp_us())
        .collect();
    ts.windows(2).map(|w| w[1] - w[0]).filter(|&d| d > 0).min()
}

/// Pending frames ordered by `(timestamp, id, origin, sequence)`.
struct EventQueue {
    queue: BTreeMap<(u64, u16, u8, u64), CanFrame>,
    seq: u64,
}

impl EventQueue {
    fn new(frames: Vec<CanFrame>) -> Self {
        let mut q = Self {
            queue: BTreeMap::new(),
            seq: 0,
        };
        for f in frames {
            q.insert(0, f);
        }
        q
    }

    fn insert(&mut self, origin: u8, f: CanFrame) {
        self.seq += 1;
        self.queue
            .insert((f.timestamp_us(), f.id(), origin, self.seq), f);
    }

    fn push_injected(&mut self, f: CanFrame) {
        self.insert(1, f);
    }

    fn pop(&mut self) -> Option<(u8, CanFrame)> {
        self.queue
            .pop_first()
            .map(|((_, _, origin, _), f)| (origin, f))
    }
}

/// A vehicle at rest whose only input is the throttle byte its TCM reads
/// off the bus. Nobody touches the brake or the wheel.
#[derive(Debug, Clone)]
pub struct ReceiverBench {
    vehicle: Vehicle,
    tcm: Tcm,
    now_us: u64,
    sample_us: u64,
    next_sample_us: u64,
    log: Vec<SpeedSample>,
}

impl ReceiverBench {
    const MAX_STEP_US: u64 = 1_000;

    pub fn new(config: PlantConfig, sample_us: u64) -> Result<Self, InjectionError> {
        let vehicle = Vehicle::new(config, VehicleState::default())?;
        let mut bench = Self {
            vehicle,
            tcm: Tcm::new(),
            now_us: 0,
            sample_us: sample_us.max(1),
            next_sample_us: 0,
            log: Vec::new(),
        };
        bench.sample();
        Ok(bench)
    }

    fn sample(&mut self) {
        self.log.push(SpeedSample {
            t_s: self.now_us as f64 * 1e-6,
            speed_mph: self.vehicle.state().speed_mph,
            app_pct: self.tcm.app_pct(),
        });
        self.next_sample_us += self.sample_us;
    }

    /// Integrates the plant up to `t_us`, logging at every sample instant
    /// passed on the way.
    pub fn advance_to(&mut self, t_us: u64) {
        while self.now_us < t_us {
            let next = t_us
                .min(self.now_us + Self::MAX_STEP_US)
                .min(self.next_sample_us);
            let inputs = PlantInputs {
                app_pct: self.tcm.app_pct(),
                ..PlantInputs::default()
            };
            self.vehicle
                .step(&inputs, (next - self.now_us) as f64 * 1e-6);
            self.now_us = next;
            if self.now_us == self.next_sample_us {
                self.sample();
            }
        }
    }

    pub fn receive(&mut self, frame: &CanFrame) {
        self.tcm.receive(frame);
    }

    /// Speed broadcast reflecting the simulated vehicle.
    pub fn speed_frame(&self, t_us: u64) -> CanFrame {
        can::encode_speed(self.vehicle.state().speed_mph.min(370.0))
            .expect("clamped")
            .with_timestamp(t_us)
    }

    pub fn speed_mph(&self) -> f64 {
        self.vehicle.state().speed_mph
    }

    pub fn into_log(self) -> Vec<SpeedSample> {
        self.log
    }

    /// Plays `frames` (in time order) into a fresh bench and reports the
    /// speed gained by `t_end_us`.
    pub fn speed_gain(
        config: &PlantConfig,
        frames: &[CanFrame],
        t_end_us: u64,
    ) -> Result<f64, InjectionError> {
        let mut bench = Self::new(config.clone(), u64::MAX)?;
        for f in frames {
            bench.advance_to(f.timestamp_us());
            bench.receive(f);
        }
        bench.advance_to(t_end_us.max(bench.now_us));
        Ok(bench.speed_mph())
    }
}

/// Ids present in `trace`, for playing everything back.
pub fn all_ids(trace: &CanTrace) -> BTreeSet<u16> {
    trace.ids()
}

/// Throttle schedule with a 10 ms period, the faster of the two readings of
/// the PCM rate.
pub fn fast_throttle_schedule() -> BroadcastSchedule {
    default_schedule(10_000)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::injection::{dominance_fraction, playback};
    use crate::plant::DEFAULT_THROTTLE_PERIOD_US;

    #[test]
    fn ramp_parsing() {
        let r: Ramp = "0:100:20".parse().unwrap();
        assert_eq!(r.values(), [0, 20, 40, 60, 80, 100]);
        let r: Ramp = "0x40:0x10:0x10".parse().unwrap();
        assert_eq!(r.values(), [0x40, 0x30, 0x20, 0x10]);
        assert!("1:2".parse::<Ramp>().is_err());
        assert!("1:2:0".parse::<Ramp>().is_err());
        assert!("1:300:1".parse::<Ramp>().is_err());
        assert_eq!(r.value_at(0, 10), 0x40);
        assert_eq!(r.value_at(35, 10), 0x10);
        assert_eq!(r.value_at(1_000, 10), 0x10);
    }

    fn monotone(samples: &[SpeedSample]) -> bool {
        samples.windows(2).all(|w| w[1].speed_mph >= w[0].speed_mph)
    }

    fn ramp_run(mode: InjectionMode) -> InjectionRun {
        let mut spec = InjectionSpec::new(ids::THROTTLE, 4, "0:200:20".parse().unwrap());
        spec.mode = mode;
        let bg = idle_traffic(spec.duration_us(), DEFAULT_THROTTLE_PERIOD_US);
        run_injection(&bg, &spec).unwrap()
    }

    #[test]
    fn tap_ramp_accelerates_monotonically() {
        let run = ramp_run(InjectionMode::Tap);
        assert!(monotone(&run.speed));
        let last = run.speed.last().unwrap();
        assert!(last.speed_mph > 50.0, "{last:?}");
        assert!(run
            .trace
            .iter()
            .filter(|f| f.id() == ids::THROTTLE)
            .all(|f| f.data()[3] % 20 == 0));
    }

    #[test]
    fn shadow_ramp_accelerates_monotonically() {
        let run = ramp_run(InjectionMode::Shadow { delay_us: 250 });
        assert!(monotone(&run.speed));
        assert!(run.speed.last().unwrap().speed_mph > 50.0);
        let injected = |f: &CanFrame| f.timestamp_us() % 100_000 == 250;
        let frac = dominance_fraction(
            run.trace.frames(),
            ids::THROTTLE,
            injected,
            100_000,
            11_000_000,
        );
        assert!((frac - 0.9975).abs() < 1e-12, "{frac}");
    }

    #[test]
    fn speed_frames_follow_the_vehicle() {
        let run = ramp_run(InjectionMode::Tap);
        let last = run
            .trace
            .iter()
            .rev()
            .find(|f| f.id() == ids::SPEED)
            .unwrap();
        let v = can::decode_speed(last).unwrap();
        assert!(v > 50.0);
    }

    #[test]
    fn tap_matches_direct_pcm_output() {
        // Direct: the PCM itself commands 40 % (byte 102).
        let throttle = 102u8;
        let pedals = PlantInputs {
            app_pct: crate::plant::throttle_pct(throttle),
            ..PlantInputs::default()
        };
        let mut bus = Bus::new(fast_throttle_schedule());
        let mut ecus = Ecus::new();
        let state = VehicleState::default();
        let direct = record(&mut bus, 20_000_000, 1_000, |id, _| {
            ecus.payload(id, &state, &pedals)
        });
        let direct_speed =
            ReceiverBench::speed_gain(&PlantConfig::default(), direct.frames(), 20_000_000)
                .unwrap();

        let mut spec = InjectionSpec::new(
            ids::THROTTLE,
            4,
            Ramp {
                start: throttle,
                end: throttle,
                step: 1,
            },
        );
        spec.hold_us = 20_000_000;
        let mut idle = Ecus::new();
        let bg = record(
            &mut Bus::new(fast_throttle_schedule()),
            20_000_000,
            1_000,
            |id, _| idle.payload(id, &state, &PlantInputs::default()),
        );
        spec.mode = InjectionMode::Tap;
        let tap = run_injection(&bg, &spec).unwrap();
        assert_eq!(tap.speed.last().unwrap().speed_mph, direct_speed);

        spec.mode = InjectionMode::Shadow { delay_us: 250 };
        let shadow = run_injection(&bg, &spec).unwrap();
        let v = shadow.speed.last().unwrap().speed_mph;
        // The genuine zero holds for 250 us of every 10 ms.
        assert!(
            (v - direct_speed).abs() / direct_speed < 0.03,
            "{v} vs {direct_speed}"
        );
    }

    #[test]
    fn playback_reproduces_recorded_acceleration() {
        let cfg = PlantConfig::default();
        let mut vehicle = Vehicle::new(cfg.clone(), VehicleState::default()).unwrap();
        let pedals = PlantInputs {
            app_pct: 30.0,
            ..PlantInputs::default()
        };
        let mut bus = Bus::new(default_schedule(DEFAULT_THROTTLE_PERIOD_US));
        let mut ecus = Ecus::new();
        let mut frames = Vec::new();
        for ms in 1..=10_000u64 {
            vehicle.step(&pedals, 1e-3);
            let s = *vehicle.state();
            frames.extend(bus.step(ms * 1_000, |id, _| ecus.payload(id, &s, &pedals)));
        }
        let trace = CanTrace::new(frames).unwrap();
        let replayed = playback(&trace, &all_ids(&trace)).unwrap();
        let v = ReceiverBench::speed_gain(&cfg, &replayed, 10_000_000).unwrap();
        let recorded = vehicle.state().speed_mph;
        // The bench only starts moving at the first throttle frame.
        assert!((v - recorded).abs() < 0.1 * recorded, "{v} vs {recorded}");
        assert!(v > 1.0);
    }
}
