//! Host-to-microcontroller command link.
//!
//! Wire format (10 bytes for a command packet):
//!
//! ```text
//! FA | len | payload (len bytes) | crc16 hi | crc16 lo
//! ```
//!
//! The command payload is three big-endian u16 fixed-point values,
//! `round(x · 65535)`, in the order accelerator, brake, steering torque.
//! The CRC covers the payload only.

mod crc;
mod packet;
mod stream;

pub use crc::{crc16, crc16_ccitt, CrcVariant};
pub use packet::{
    decode_packet, decode_packet_with, encode_packet, encode_packet_with, CommandPacket,
    PAYLOAD_LEN,
};
pub use stream::StreamDecoder;

use thiserror::Error;

pub const START_BYTE: u8 = 0xFA;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum SerialError {
    #[error("{field} = {value} outside [0, 1]")]
    OutOfRange { field: &'static str, value: f64 },
    #[error("bad start byte {0:#04X}")]
    BadStart(u8),
    #[error("bad length: header says {declared}, frame has {actual} bytes")]
    BadLength { declared: usize, actual: usize },
    #[error("crc mismatch: computed {computed:#06X}, received {received:#06X}")]
    BadCrc { computed: u16, received: u16 },
}
