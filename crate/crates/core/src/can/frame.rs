use std::fmt;

use super::CanError;

/// Largest standard (11-bit) arbitration id.
pub const MAX_ID: u16 = 0x7FF;

/// A timestamped classic CAN data frame with a standard identifier.
///
/// Payload bytes are stored 0-indexed. Byte numbers used in vehicle
/// documentation are 1-indexed, so "byte 4" lives at `data()[3]`.
#[derive(Clone, Copy, PartialEq, Eq, Hash)]
pub struct CanFrame {
    timestamp_us: u64,
    id: u16,
    dlc: u8,
    data: [u8; 8],
}

impl CanFrame {
    pub fn new(timestamp_us: u64, id: u16, data: &[u8]) -> Result<Self, CanError> {
        if id > MAX_ID {
            return Err(CanError::IdOutOfRange(id as u32));
        }
        if data.len() > 8 {
            return Err(CanError::DlcOutOfRange(data.len()));
        }
        let mut buf = [0u8; 8];
        buf[..data.len()].copy_from_slice(data);
        Ok(Self {
            timestamp_us,
            id,
            dlc: data.len() as u8,
            data: buf,
        })
    }

    pub fn timestamp_us(&self) -> u64 {
        self.timestamp_us
    }

    pub fn id(&self) -> u16 {
        self.id
    }

    pub fn dlc(&self) -> u8 {
        self.dlc
    }

    pub fn data(&self) -> &[u8] {
        &self.data[..self.dlc as usize]
    }

    /// Mutable view of the payload; the length stays fixed at `dlc`.
    pub fn data_mut(&mut self) -> &mut [u8] {
        &mut self.data[..self.dlc as usize]
    }

    pub fn with_timestamp(mut self, timestamp_us: u64) -> Self {
        self.timestamp_us = timestamp_us;
        self
    }
}

impl fmt::Debug for CanFrame {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "CanFrame({} {:03X} [{}]",
            self.timestamp_us, self.id, self.dlc
        )?;
        for b in self.data() {
            write!(f, " {b:02X}")?;
        }
        write!(f, ")")
    }
}
