use serde::{Deserialize, Serialize};

/// CRC-16 with polynomial 0x1021, unreflected, no final XOR. The variants
/// differ only in the initial register.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum CrcVariant {
    /// init 0xFFFF ("CCITT-FALSE")
    #[default]
    CcittFalse,
    /// init 0x0000
    Xmodem,
}

impl CrcVariant {
    pub fn init(self) -> u16 {
        match self {
            CrcVariant::CcittFalse => 0xFFFF,
            CrcVariant::Xmodem => 0x0000,
        }
    }
}

const POLY: u16 = 0x1021;

const TABLE: [u16; 256] = {
    let mut table = [0u16; 256];
    let mut i = 0;
    while i < 256 {
        let mut crc = (i as u16) << 8;
        let mut bit = 0;
        while bit < 8 {
            crc = if crc & 0x8000 != 0 {
                (crc << 1) ^ POLY
            } else {
                crc << 1
            };
            bit += 1;
        }
        table[i] = crc;
        i += 1;
    }
    table
};

pub fn crc16(variant: CrcVariant, bytes: &[u8]) -> u16 {
    bytes.iter().fold(variant.init(), |crc, &b| {
        (crc << 8) ^ TABLE[((crc >> 8) as u8 ^ b) as usize]
    })
}

/// CRC16-CCITT, FALSE variant.
pub fn crc16_ccitt(bytes: &[u8]) -> u16 {
    crc16(CrcVariant::CcittFalse, bytes)
}
