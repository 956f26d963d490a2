use std::collections::BTreeSet;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::can::{ids, Bus, CanTrace};
use crate::plant::{
    default_schedule, Ecus, PlantConfig, PlantInputs, Vehicle, VehicleState,
    DEFAULT_THROTTLE_PERIOD_US,
};

/// A recorded drive: the bus traffic plus the true speed every 10 ms.
#[derive(Debug, Clone)]
pub struct DriveRecording {
    pub trace: CanTrace,
    pub speed: Vec<(u64, f64)>,
    pub actuator_id: u16,
}

#[derive(Debug, Clone, Copy)]
enum Filler {
    /// Speed scaled into one byte with +-1 count of sensor jitter.
    SpeedByte {
        scale: f64,
        offset: f64,
        byte: usize,
    },
    /// Speed * 100 as a big-endian word in bytes 1-2.
    SpeedWord,
    Counter,
    Noise,
    Constant(u8),
    /// Counter in byte 1, constants elsewhere.
    Status(u8),
}

/// Seeded drive of `duration_s` seconds on a bus carrying `n_ids` distinct
/// ids: the five simulated modules plus filler traffic. Some filler bytes
/// track speed closely (wheel speeds, odometry), others are counters,
/// noise or constants.
pub fn synthetic_drive(seed: u64, n_ids: usize, duration_s: f64) -> DriveRecording {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut schedule = default_schedule(DEFAULT_THROTTLE_PERIOD_US);
    let mut taken: BTreeSet<u16> = schedule.iter().map(|(id, _)| id).collect();
    let periods = [
        10_000u64, 20_000, 50_000, 100_000, 200_000, 500_000, 1_000_000,
    ];
    let mut fillers: Vec<(u16, Filler, usize)> = Vec::new();
    let n_fill = n_ids.saturating_sub(taken.len());
    for k in 0..n_fill {
        let id = loop {
            let id = rng.gen_range(0x020..=0x7FF);
            if taken.insert(id) {
                break id;
            }
        };
        let kind = match k % 7 {
            0 | 1 => Filler::SpeedByte {
                scale: rng.gen_range(0.5..3.0),
                offset: rng.gen_range(0.0..40.0),
                byte: rng.gen_range(0..8),
            },
            2 => Filler::SpeedWord,
            3 => Filler::Counter,
            4 => Filler::Noise,
            5 => Filler::Constant(rng.gen()),
            _ => Filler::Status(rng.gen()),
        };
        let dlc = if rng.gen_bool(0.2) {
            rng.gen_range(2..8)
        } else {
            8
        };
        schedule
            .insert(id, periods[rng.gen_range(0..periods.len())])
            .expect("valid filler id");
        fillers.push((id, kind, dlc));
    }
    fillers.sort_by_key(|f| f.0);

    let mut vehicle =
        Vehicle::new(PlantConfig::default(), VehicleState::default()).expect("default config");
    let mut ecus = Ecus::new();
    let mut bus = Bus::new(schedule);
    let mut counters = vec![0u8; fillers.len()];
    let mut pedals = PlantInputs::default();
    let mut segment_end_ms = 0u64;
    let total_ms = (duration_s * 1e3).round() as u64;
    let mut frames = Vec::new();
    let mut speed = Vec::new();
    for ms in 1..=total_ms {
        if ms >= segment_end_ms {
            segment_end_ms = ms + rng.gen_range(3_000..10_000);
            pedals = if rng.gen_bool(0.2) {
                PlantInputs {
                    app_pct: 0.0,
                    bpp_pct: rng.gen_range(5.0..40.0),
                    ..PlantInputs::default()
                }
            } else {
                PlantInputs {
                    app_pct: rng.gen_range(0.0..45.0),
                    ..PlantInputs::default()
                }
            };
        }
        vehicle.step(&pedals, 1e-3);
        let s = *vehicle.state();
        if ms % 10 == 0 {
            speed.push((ms * 1_000, s.speed_mph));
        }
        frames.extend(bus.step(ms * 1_000, |id, _| {
            let Ok(i) = fillers.binary_search_by_key(&id, |f| f.0) else {
                return ecus.payload(id, &s, &pedals);
            };
            let (_, kind, dlc) = fillers[i];
            let mut d = vec![0u8; dlc];
            match kind {
                Filler::SpeedByte {
                    scale,
                    offset,
                    byte,
                } => {
                    let j = rng.gen_range(-1.0..=1.0);
                    let b = byte.min(dlc - 1);
                    d[b] = (s.speed_mph * scale + offset + j).round().clamp(0.0, 255.0) as u8;
                }
                Filler::SpeedWord => {
                    let w = (s.speed_mph * 100.0).round().clamp(0.0, 65_535.0) as u16;
                    d[..2].copy_from_slice(&w.to_be_bytes());
                }
                Filler::Counter => {
                    d[0] = counters[i];
                    counters[i] = counters[i].wrapping_add(1);
                }
                Filler::Noise => rng.fill(&mut d[..]),
                Filler::Constant(c) => d.iter_mut().for_each(|b| *b = c),
                Filler::Status(c) => {
                    d.iter_mut().for_each(|b| *b = c);
                    d[0] = counters[i] & 0x0F;
                    counters[i] = counters[i].wrapping_add(1);
                }
            }
            d
        }));
    }
    DriveRecording {
        trace: CanTrace::new(frames).expect("bus output is time ordered"),
        speed,
        actuator_id: ids::THROTTLE,
    }
}
