//! CAN frame model, text trace I/O, the periodic broadcast scheduler and
//! payload codecs for the messages the simulated vehicle publishes.

mod bus;
mod codec;
mod frame;
mod trace;

pub use bus::{BroadcastSchedule, Bus, FrameOrigin};
pub use codec::{
    decode_speed, decode_steer_counts, encode_speed, encode_steer_counts, SPEED_OFFSET, SPEED_SCALE,
};
pub use frame::{CanFrame, MAX_ID};
pub use trace::{parse_trace, serialize_trace, CanTrace};

use thiserror::Error;

/// Arbitration IDs of the Focus EV messages the simulator models.
pub mod ids {
    /// Steering wheel angle (SASM).
    pub const STEER_ANGLE: u16 = 0x010;
    /// Vehicle speed, 100 Hz.
    pub const SPEED: u16 = 0x075;
    /// Brake pedal position (ABS).
    pub const BRAKE_PEDAL: u16 = 0x07D;
    /// PCM throttle command read by the TCM.
    pub const THROTTLE: u16 = 0x11A;
    /// Accelerator pedal position (PCM).
    pub const ACCEL_PEDAL: u16 = 0x204;
}

#[derive(Debug, Error, Clone, PartialEq)]
pub enum CanError {
    #[error("arbitration id {0:#X} does not fit in 11 bits")]
    IdOutOfRange(u32),
    #[error("dlc {0} exceeds 8")]
    DlcOutOfRange(usize),
    #[error("expected arbitration id {expected:#X}, got {got:#X}")]
    WrongId { expected: u16, got: u16 },
    #[error("frame carries {dlc} bytes, need {needed}")]
    ShortFrame { dlc: u8, needed: u8 },
    #[error("value {0} cannot be encoded in 16 bits")]
    OutOfRange(f64),
    #[error("trace line {line}: {reason}")]
    Parse { line: usize, reason: String },
    #[error("trace timestamps decrease at frame {index}")]
    NonMonotone { index: usize },
    #[error("broadcast period for {id:#X} must be positive")]
    ZeroPeriod { id: u16 },
}
