use serde::{Deserialize, Serialize};

use super::{crc16, CrcVariant, SerialError, START_BYTE};

/// Payload bytes of a command packet.
pub const PAYLOAD_LEN: usize = 6;

const SCALE: f64 = 65535.0;

/// Normalized actuator commands. Steering torque 0.5 is 50 % duty (no
/// torque); pedal values are fractions of full travel.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CommandPacket {
    pub app: f64,
    pub bpp: f64,
    pub steer_torque: f64,
}

impl CommandPacket {
    pub fn new(app: f64, bpp: f64, steer_torque: f64) -> Result<Self, SerialError> {
        let p = Self {
            app,
            bpp,
            steer_torque,
        };
        p.validate()?;
        Ok(p)
    }

    /// From percentages (pedal travel and torque duty).
    pub fn from_percent(app_pct: f64, bpp_pct: f64, steer_duty: f64) -> Result<Self, SerialError> {
        Self::new(app_pct / 100.0, bpp_pct / 100.0, steer_duty / 100.0)
    }

    pub fn validate(&self) -> Result<(), SerialError> {
        for (field, value) in [
            ("app", self.app),
            ("bpp", self.bpp),
            ("steer_torque", self.steer_torque),
        ] {
            if !(value.is_finite() && (0.0..=1.0).contains(&value)) {
                return Err(SerialError::OutOfRange { field, value });
            }
        }
        Ok(())
    }
}

fn fixed(x: f64) -> [u8; 2] {
    ((x * SCALE).round() as u16).to_be_bytes()
}

fn unfixed(hi: u8, lo: u8) -> f64 {
    u16::from_be_bytes([hi, lo]) as f64 / SCALE
}

pub fn encode_packet_with(
    variant: CrcVariant,
    cmd: &CommandPacket,
) -> Result<Vec<u8>, SerialError> {
    cmd.validate()?;
    let mut out = Vec::with_capacity(PAYLOAD_LEN + 4);
    out.push(START_BYTE);
    out.push(PAYLOAD_LEN as u8);
    for v in [cmd.app, cmd.bpp, cmd.steer_torque] {
        out.extend_from_slice(&fixed(v));
    }
    let crc = crc16(variant, &out[2..]);
    out.extend_from_slice(&crc.to_be_bytes());
    Ok(out)
}

pub fn encode_packet(cmd: &CommandPacket) -> Result<Vec<u8>, SerialError> {
    encode_packet_with(CrcVariant::default(), cmd)
}

pub fn decode_packet_with(variant: CrcVariant, bytes: &[u8]) -> Result<CommandPacket, SerialError> {
    let start = *bytes.first().ok_or(SerialError::BadLength {
        declared: PAYLOAD_LEN,
        actual: 0,
    })?;
    if start != START_BYTE {
        return Err(SerialError::BadStart(start));
    }
    let declared = bytes.get(1).map(|&n| n as usize).unwrap_or(0);
    if declared != PAYLOAD_LEN || bytes.len() != declared + 4 {
        return Err(SerialError::BadLength {
            declared,
            actual: bytes.len(),
        });
    }
    let payload = &bytes[2..2 + PAYLOAD_LEN];
    let received = u16::from_be_bytes([bytes[2 + PAYLOAD_LEN], bytes[3 + PAYLOAD_LEN]]);
    let computed = crc16(variant, payload);
    if computed != received {
        return Err(SerialError::BadCrc { computed, received });
    }
    Ok(CommandPacket {
        app: unfixed(payload[0], payload[1]),
        bpp: unfixed(payload[2], payload[3]),
        steer_torque: unfixed(payload[4], payload[5]),
    })
}

pub fn decode_packet(bytes: &[u8]) -> Result<CommandPacket, SerialError> {
    decode_packet_with(CrcVariant::default(), bytes)
}
