//! Simulated modules publishing on the EV bus, and the TCM that consumes
//! the PCM throttle message.
//!
//! | id    | source | content                                             |
//! |-------|--------|-----------------------------------------------------|
//! | 0x010 | SASM   | steering angle counts, i16 BE, bytes 1-2            |
//! | 0x075 | ABS    | speed word, bytes 7-8                               |
//! | 0x07D | ABS    | brake pedal, 0.1 % u16 BE, bytes 1-2                |
//! | 0x11A | PCM    | throttle 0..=255 in byte 4, rolling counter byte 8  |
//! | 0x204 | PCM    | accelerator pedal, 0.1 % u16 BE, bytes 1-2          |
//!
//! Only the speed encoding and the throttle byte position are pinned by the
//! vehicle; the remaining layouts are simulator choices.

use crate::can::{self, ids, BroadcastSchedule, CanFrame};

use super::{PlantInputs, VehicleState};

/// 0-indexed position of the throttle byte ("byte 4") in 0x11A.
pub const THROTTLE_BYTE: usize = 3;

pub const SPEED_PERIOD_US: u64 = 10_000;
pub const DEFAULT_THROTTLE_PERIOD_US: u64 = 100_000;

/// Broadcast periods of the simulated modules.
pub fn default_schedule(throttle_period_us: u64) -> BroadcastSchedule {
    let mut s = BroadcastSchedule::new();
    for (id, p) in [
        (ids::STEER_ANGLE, 10_000),
        (ids::SPEED, SPEED_PERIOD_US),
        (ids::BRAKE_PEDAL, 20_000),
        (ids::THROTTLE, throttle_period_us),
        (ids::ACCEL_PEDAL, 10_000),
    ] {
        s.insert(id, p).expect("static schedule is valid");
    }
    s
}

pub fn throttle_byte(app_pct: f64) -> u8 {
    (app_pct.clamp(0.0, 100.0) * 2.55).round() as u8
}

pub fn throttle_pct(byte: u8) -> f64 {
    byte as f64 / 2.55
}

fn pct_word(pct: f64) -> [u8; 2] {
    ((pct.clamp(0.0, 100.0) * 10.0).round() as u16).to_be_bytes()
}

/// The publishing side of the vehicle network.
#[derive(Debug, Clone, Default)]
pub struct Ecus {
    throttle_counter: u8,
}

impl Ecus {
    pub fn new() -> Self {
        Self::default()
    }

    /// Payload for `id`, given the current state and the pedal/torque
    /// signals the modules read. Unknown ids get an all-zero payload.
    pub fn payload(&mut self, id: u16, state: &VehicleState, pedals: &PlantInputs) -> Vec<u8> {
        match id {
            ids::SPEED => can::encode_speed(state.speed_mph.min(370.0))
                .expect("speed clamped into encodable range")
                .data()
                .to_vec(),
            ids::STEER_ANGLE => can::encode_steer_counts(state.steer_angle_counts)
                .data()
                .to_vec(),
            ids::THROTTLE => {
                let mut d = vec![0u8; 8];
                d[THROTTLE_BYTE] = throttle_byte(pedals.app_pct);
                d[7] = self.throttle_counter;
                self.throttle_counter = self.throttle_counter.wrapping_add(1);
                d
            }
            ids::ACCEL_PEDAL => {
                let mut d = vec![0u8; 8];
                d[..2].copy_from_slice(&pct_word(pedals.app_pct));
                d
            }
            ids::BRAKE_PEDAL => {
                let mut d = vec![0u8; 8];
                d[..2].copy_from_slice(&pct_word(pedals.bpp_pct));
                d
            }
            _ => vec![0u8; 8],
        }
    }

    /// Frames for every scheduled id due at `now_us` in schedule order.
    /// Convenience for driving the modules without a [`crate::can::Bus`].
    pub fn publish(
        &mut self,
        schedule: &BroadcastSchedule,
        state: &VehicleState,
        pedals: &PlantInputs,
        now_us: u64,
    ) -> Vec<CanFrame> {
        schedule
            .iter()
            .filter(|&(_, p)| now_us > 0 && now_us.is_multiple_of(p))
            .map(|(id, _)| {
                let d = self.payload(id, state, pedals);
                CanFrame::new(now_us, id, &d).expect("valid id")
            })
            .collect()
    }
}

/// Transmission control module: drives the motor from the last throttle
/// value it saw on 0x11A.
#[derive(Debug, Clone, Default)]
pub struct Tcm {
    last: Option<(u64, u8)>,
}

impl Tcm {
    pub fn new() -> Self {
        Self::default()
    }

    /// Consumes a frame; anything but a full-length 0x11A is ignored.
    pub fn receive(&mut self, frame: &CanFrame) {
        if frame.id() == ids::THROTTLE && frame.data().len() > THROTTLE_BYTE {
            self.last = Some((frame.timestamp_us(), frame.data()[THROTTLE_BYTE]));
        }
    }

    pub fn last_byte(&self) -> Option<u8> {
        self.last.map(|(_, b)| b)
    }

    /// Effective accelerator percentage; 0 until a throttle frame arrives.
    pub fn app_pct(&self) -> f64 {
        self.last_byte().map(throttle_pct).unwrap_or(0.0)
    }

    pub fn reset(&mut self) {
        self.last = None;
    }
}
