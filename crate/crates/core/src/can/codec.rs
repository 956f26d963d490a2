//! Payload codecs for the simulated vehicle messages.
//!
//! Vehicle documentation numbers payload bytes 1..=8; storage here is
//! 0-indexed, so "bytes 7 and 8" of the speed message are `data[6]` and
//! `data[7]`.

use super::{ids, CanError, CanFrame};

/// Raw value of the speed word at standstill (0xB0D4).
pub const SPEED_OFFSET: f64 = 45268.0;
/// Raw counts per mph.
pub const SPEED_SCALE: f64 = 54.0;

/// Vehicle speed in mph from bytes 7 and 8 of a 0x75 frame.
pub fn decode_speed(frame: &CanFrame) -> Result<f64, CanError> {
    if frame.id() != ids::SPEED {
        return Err(CanError::WrongId {
            expected: ids::SPEED,
            got: frame.id(),
        });
    }
    if frame.dlc() < 8 {
        return Err(CanError::ShortFrame {
            dlc: frame.dlc(),
            needed: 8,
        });
    }
    let d = frame.data();
    let raw = ((d[6] as u32) << 8) + d[7] as u32;
    Ok((raw as f64 - SPEED_OFFSET) / SPEED_SCALE)
}

/// Builds a 0x75 frame (timestamp 0) carrying `speed_mph`, rounded to the
/// nearest 1/54 mph. Bytes 1..=6 are zero.
pub fn encode_speed(speed_mph: f64) -> Result<CanFrame, CanError> {
    let raw = (speed_mph * SPEED_SCALE + SPEED_OFFSET).round();
    if !raw.is_finite() || !(0.0..=65535.0).contains(&raw) {
        return Err(CanError::OutOfRange(speed_mph));
    }
    let raw = raw as u16;
    let mut data = [0u8; 8];
    data[6..8].copy_from_slice(&raw.to_be_bytes());
    CanFrame::new(0, ids::SPEED, &data)
}

/// Steering wheel angle counts, signed 16-bit big-endian in bytes 1 and 2
/// of a 0x10 frame.
pub fn encode_steer_counts(counts: f64) -> CanFrame {
    let raw = counts.round().clamp(i16::MIN as f64, i16::MAX as f64) as i16;
    let mut data = [0u8; 8];
    data[0..2].copy_from_slice(&raw.to_be_bytes());
    CanFrame::new(0, ids::STEER_ANGLE, &data).expect("static id and length")
}

pub fn decode_steer_counts(frame: &CanFrame) -> Result<i16, CanError> {
    if frame.id() != ids::STEER_ANGLE {
        return Err(CanError::WrongId {
            expected: ids::STEER_ANGLE,
            got: frame.id(),
        });
    }
    if frame.dlc() < 2 {
        return Err(CanError::ShortFrame {
            dlc: frame.dlc(),
            needed: 2,
        });
    }
    Ok(i16::from_be_bytes([frame.data()[0], frame.data()[1]]))
}
