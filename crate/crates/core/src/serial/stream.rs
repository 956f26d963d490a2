use super::{decode_packet_with, CommandPacket, CrcVariant, SerialError, PAYLOAD_LEN, START_BYTE};

/// Byte-at-a-time receiver that resynchronizes on the start byte.
///
/// Bytes before a start byte are skipped. A frame that fails its length or
/// CRC check is reported and dropped, and scanning resumes one byte after
/// the rejected start byte.
#[derive(Debug, Clone, Default)]
pub struct StreamDecoder {
    variant: CrcVariant,
    buf: Vec<u8>,
    skipped: usize,
}

impl StreamDecoder {
    pub fn new(variant: CrcVariant) -> Self {
        Self {
            variant,
            buf: Vec::with_capacity(PAYLOAD_LEN + 4),
            skipped: 0,
        }
    }

    /// Bytes discarded while hunting for a start byte.
    pub fn skipped(&self) -> usize {
        self.skipped
    }

    pub fn feed(&mut self, bytes: &[u8]) -> Vec<Result<CommandPacket, SerialError>> {
        let mut out = Vec::new();
        for &b in bytes {
            self.buf.push(b);
            self.drain(&mut out);
        }
        out
    }

    fn resync(&mut self) {
        self.buf.remove(0);
        let keep = self
            .buf
            .iter()
            .position(|&b| b == START_BYTE)
            .unwrap_or(self.buf.len());
        self.skipped += keep;
        self.buf.drain(..keep);
    }

    fn drain(&mut self, out: &mut Vec<Result<CommandPacket, SerialError>>) {
        loop {
            match self.buf.first() {
                None => return,
                Some(&b) if b != START_BYTE => {
                    self.skipped += 1;
                    self.buf.remove(0);
                    continue;
                }
                _ => {}
            }
            if self.buf.len() < 2 {
                return;
            }
            let declared = self.buf[1] as usize;
            if declared != PAYLOAD_LEN {
                out.push(Err(SerialError::BadLength {
                    declared,
                    actual: self.buf.len(),
                }));
                self.resync();
                continue;
            }
            if self.buf.len() < PAYLOAD_LEN + 4 {
                return;
            }
            match decode_packet_with(self.variant, &self.buf) {
                Ok(p) => {
                    self.buf.clear();
                    out.push(Ok(p));
                }
                Err(e) => {
                    out.push(Err(e));
                    self.resync();
                }
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::serial::encode_packet;

    fn frame(a: f64) -> Vec<u8> {
        encode_packet(&CommandPacket::new(a, 0.0, 0.5).unwrap()).unwrap()
    }

    #[test]
    fn decodes_back_to_back_frames_with_noise() {
        let mut d = StreamDecoder::default();
        let mut wire = vec![0x00, 0x13];
        wire.extend(frame(0.25));
        wire.push(0x77);
        wire.extend(frame(0.75));
        let got: Vec<_> = d.feed(&wire);
        assert_eq!(got.len(), 2);
        assert!((got[0].as_ref().unwrap().app - 0.25).abs() < 1e-4);
        assert!((got[1].as_ref().unwrap().app - 0.75).abs() < 1e-4);
        assert_eq!(d.skipped(), 3);
    }

    #[test]
    fn corrupted_frame_dropped_then_recovers() {
        let mut d = StreamDecoder::default();
        let mut bad = frame(0.5);
        bad[3] ^= 0x01;
        let mut wire = bad;
        wire.extend(frame(0.125));
        let got = d.feed(&wire);
        assert!(matches!(got[0], Err(SerialError::BadCrc { .. })));
        assert_eq!(got.iter().filter(|r| r.is_ok()).count(), 1);
        assert!((got.last().unwrap().as_ref().unwrap().app - 0.125).abs() < 1e-4);
    }

    #[test]
    fn split_delivery() {
        let mut d = StreamDecoder::default();
        let f = frame(0.4);
        assert!(d.feed(&f[..3]).is_empty());
        let got = d.feed(&f[3..]);
        assert_eq!(got.len(), 1);
        assert!(got[0].is_ok());
    }
}
