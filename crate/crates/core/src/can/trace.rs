//! Plain-text trace files, one frame per line:
//!
//! ```text
//! <timestamp_us> <hex id> <dlc> <hex bytes...>
//! 1000 11A 8 00 00 00 40 00 00 00 00
//! ```
//!
//! Blank lines and lines starting with `#` are ignored on input.

use std::collections::BTreeSet;
use std::fmt::Write as _;

use super::{CanError, CanFrame, MAX_ID};

/// Time-ordered frames.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct CanTrace {
    frames: Vec<CanFrame>,
}

impl CanTrace {
    pub fn new(frames: Vec<CanFrame>) -> Result<Self, CanError> {
        if let Some(i) = frames
            .windows(2)
            .position(|w| w[1].timestamp_us() < w[0].timestamp_us())
        {
            return Err(CanError::NonMonotone { index: i + 1 });
        }
        Ok(Self { frames })
    }

    /// Appends a frame. Frames earlier than the current tail are rejected.
    pub fn push(&mut self, frame: CanFrame) -> Result<(), CanError> {
        if let Some(last) = self.frames.last() {
            if frame.timestamp_us() < last.timestamp_us() {
                return Err(CanError::NonMonotone {
                    index: self.frames.len(),
                });
            }
        }
        self.frames.push(frame);
        Ok(())
    }

    pub fn frames(&self) -> &[CanFrame] {
        &self.frames
    }

    pub fn len(&self) -> usize {
        self.frames.len()
    }

    pub fn is_empty(&self) -> bool {
        self.frames.is_empty()
    }

    pub fn iter(&self) -> std::slice::Iter<'_, CanFrame> {
        self.frames.iter()
    }

    /// Distinct arbitration ids, ascending.
    pub fn ids(&self) -> BTreeSet<u16> {
        self.frames.iter().map(CanFrame::id).collect()
    }

    /// Frames whose id is in `ids`, order preserved.
    pub fn filter_ids(&self, ids: &BTreeSet<u16>) -> CanTrace {
        CanTrace {
            frames: self
                .frames
                .iter()
                .filter(|f| ids.contains(&f.id()))
                .copied()
                .collect(),
        }
    }

    /// (first, last) timestamps, if any.
    pub fn span_us(&self) -> Option<(u64, u64)> {
        Some((
            self.frames.first()?.timestamp_us(),
            self.frames.last()?.timestamp_us(),
        ))
    }
}

impl<'a> IntoIterator for &'a CanTrace {
    type Item = &'a CanFrame;
    type IntoIter = std::slice::Iter<'a, CanFrame>;

    fn into_iter(self) -> Self::IntoIter {
        self.frames.iter()
    }
}

fn parse_line(line: &str, lineno: usize) -> Result<CanFrame, CanError> {
    let err = |reason: String| CanError::Parse {
        line: lineno,
        reason,
    };
    let mut fields = line.split_whitespace();
    let ts = fields
        .next()
        .ok_or_else(|| err("missing timestamp".into()))?;
    let ts: u64 = ts
        .parse()
        .map_err(|_| err(format!("bad timestamp {ts:?}")))?;
    let id = fields.next().ok_or_else(|| err("missing id".into()))?;
    let id = u32::from_str_radix(id, 16).map_err(|_| err(format!("bad hex id {id:?}")))?;
    if id > MAX_ID as u32 {
        return Err(err(format!("id {id:X} exceeds 7FF")));
    }
    let dlc = fields.next().ok_or_else(|| err("missing dlc".into()))?;
    let dlc: usize = dlc.parse().map_err(|_| err(format!("bad dlc {dlc:?}")))?;
    if dlc > 8 {
        return Err(err(format!("dlc {dlc} exceeds 8")));
    }
    let data = fields
        .map(|b| {
            if b.len() != 2 {
                return Err(err(format!("bad data byte {b:?}")));
            }
            u8::from_str_radix(b, 16).map_err(|_| err(format!("bad data byte {b:?}")))
        })
        .collect::<Result<Vec<u8>, _>>()?;
    if data.len() != dlc {
        return Err(err(format!("dlc {dlc} but {} data bytes", data.len())));
    }
    CanFrame::new(ts, id as u16, &data).map_err(|e| err(e.to_string()))
}

/// Parses a text trace. Line numbers in errors are 1-based.
pub fn parse_trace(text: &str) -> Result<CanTrace, CanError> {
    let mut trace = CanTrace::default();
    for (i, raw) in text.lines().enumerate() {
        let line = raw.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let frame = parse_line(line, i + 1)?;
        trace.push(frame).map_err(|_| CanError::Parse {
            line: i + 1,
            reason: "timestamp decreases".into(),
        })?;
    }
    Ok(trace)
}

pub fn serialize_trace(trace: &CanTrace) -> String {
    let mut out = String::with_capacity(trace.len() * 40);
    for f in trace {
        write!(out, "{} {:X} {}", f.timestamp_us(), f.id(), f.dlc()).unwrap();
        for b in f.data() {
            write!(out, " {b:02X}").unwrap();
        }
        out.push('\n');
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn parses_reference_line() {
        let t = parse_trace("1000 11A 8 00 00 00 40 00 00 00 00\n").unwrap();
        let f = t.frames()[0];
        assert_eq!(f.timestamp_us(), 1000);
        assert_eq!(f.id(), 0x11A);
        assert_eq!(f.data(), &[0, 0, 0, 0x40, 0, 0, 0, 0]);
    }

    #[test]
    fn rejects_wide_id_with_line_number() {
        let text = "0 75 0\n1000 8FF 8 00 00 00 00 00 00 00 00\n";
        match parse_trace(text) {
            Err(CanError::Parse { line, .. }) => assert_eq!(line, 2),
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn rejects_dlc_mismatch_and_garbage() {
        assert!(parse_trace("0 75 8 00").is_err());
        assert!(parse_trace("0 75 1 0G").is_err());
        assert!(parse_trace("x 75 0").is_err());
        assert!(parse_trace("0 75 9 00 00 00 00 00 00 00 00 00").is_err());
    }

    #[test]
    fn rejects_decreasing_time() {
        assert!(matches!(
            parse_trace("10 75 0\n5 75 0\n"),
            Err(CanError::Parse { line: 2, .. })
        ));
    }

    #[test]
    fn skips_comments_and_whitespace() {
        let t = parse_trace("# header\n\n  1   7d   2  01   02 \n").unwrap();
        assert_eq!(t.len(), 1);
        assert_eq!(serialize_trace(&t), "1 7D 2 01 02\n");
    }

    fn arb_frame() -> impl Strategy<Value = (u64, u16, Vec<u8>)> {
        (
            0u64..1_000_000,
            0u16..=MAX_ID,
            prop::collection::vec(any::<u8>(), 0..=8),
        )
    }

    proptest! {
        #[test]
        fn text_roundtrip(mut raw in prop::collection::vec(arb_frame(), 0..40)) {
            raw.sort_by_key(|r| r.0);
            let frames = raw
                .iter()
                .map(|(t, id, d)| CanFrame::new(*t, *id, d).unwrap())
                .collect();
            let trace = CanTrace::new(frames).unwrap();
            let text = serialize_trace(&trace);
            let back = parse_trace(&text).unwrap();
            prop_assert_eq!(&back, &trace);
            prop_assert_eq!(serialize_trace(&back), text);
        }
    }
}
