use std::cmp::Ordering;
use std::collections::BTreeMap;

use serde::Serialize;

use crate::can::{decode_speed, CanTrace};

use super::RevError;

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct CorrelationEntry {
    pub id: u16,
    /// 0-based byte position.
    pub byte: u8,
    pub r: f64,
    /// 1-based, by descending |r|.
    pub rank: usize,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum Exclusion {
    /// Byte never changes, so r is undefined.
    ConstantByte,
    /// Byte lies beyond the frame length in at least one frame.
    MissingByte,
    /// Speed did not change over this id's timestamps.
    ConstantSpeed,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CorrelationReport {
    pub entries: Vec<CorrelationEntry>,
    pub excluded: Vec<(u16, u8, Exclusion)>,
}

impl CorrelationReport {
    pub fn rank_of(&self, id: u16, byte: u8) -> Option<usize> {
        self.entries
            .iter()
            .find(|e| e.id == id && e.byte == byte)
            .map(|e| e.rank)
    }

    pub fn top(&self, n: usize) -> &[CorrelationEntry] {
        &self.entries[..n.min(self.entries.len())]
    }
}

/// `(timestamp, mph)` decoded from every `speed_id` frame.
pub fn speed_series(trace: &CanTrace, speed_id: u16) -> Vec<(u64, f64)> {
    trace
        .iter()
        .filter(|f| f.id() == speed_id)
        .filter_map(|f| decode_speed(f).ok().map(|v| (f.timestamp_us(), v)))
        .collect()
}

/// Pearson correlation, or `None` if either side has zero variance.
pub fn pearson(x: &[f64], y: &[f64]) -> Option<f64> {
    let n = x.len().min(y.len());
    if n < 2 {
        return None;
    }
    let mx = x[..n].iter().sum::<f64>() / n as f64;
    let my = y[..n].iter().sum::<f64>() / n as f64;
    let (mut sxy, mut sxx, mut syy) = (0.0, 0.0, 0.0);
    for (a, b) in x[..n].iter().zip(&y[..n]) {
        let (dx, dy) = (a - mx, b - my);
        sxy += dx * dy;
        sxx += dx * dx;
        syy += dy * dy;
    }
    if sxx <= 0.0 || syy <= 0.0 {
        return None;
    }
    Some((sxy / (sxx.sqrt() * syy.sqrt())).clamp(-1.0, 1.0))
}

/// Sample-and-hold lookup: the last sample at or before `t`, or the first
/// sample when `t` precedes the series.
fn held(series: &[(u64, f64)], t: u64) -> f64 {
    let i = series.partition_point(|&(ts, _)| ts <= t);
    series[i.saturating_sub(1)].1
}

/// Ranks every payload byte of `trace` by |Pearson r| against `speed`
/// (time-ordered `(timestamp, value)` pairs), resampled at each frame's
/// timestamp. Bytes are read unsigned unless `signed` is set.
///
/// Ties on |r| (compared at 1e-9) are broken by `(id, byte)`.
pub fn correlate_bytes(
    trace: &CanTrace,
    speed: &[(u64, f64)],
    signed: bool,
) -> Result<CorrelationReport, RevError> {
    if trace.is_empty() {
        return Err(RevError::EmptyTrace);
    }
    if speed.is_empty() {
        return Err(RevError::EmptySpeed);
    }
    let mut by_id: BTreeMap<u16, Vec<(u64, [u8; 8], u8)>> = BTreeMap::new();
    for f in trace.iter() {
        let mut d = [0u8; 8];
        d[..f.data().len()].copy_from_slice(f.data());
        by_id
            .entry(f.id())
            .or_default()
            .push((f.timestamp_us(), d, f.dlc()));
    }
    let mut scored = Vec::new();
    let mut excluded = Vec::new();
    for (&id, frames) in &by_id {
        let v: Vec<f64> = frames.iter().map(|(t, _, _)| held(speed, *t)).collect();
        let speed_flat = pearson(&v, &v).is_none();
        for byte in 0..8u8 {
            let b = byte as usize;
            if frames.iter().any(|(_, _, dlc)| (*dlc as usize) <= b) {
                excluded.push((id, byte, Exclusion::MissingByte));
                continue;
            }
            let x: Vec<f64> = frames
                .iter()
                .map(|(_, d, _)| {
                    if signed {
                        d[b] as i8 as f64
                    } else {
                        d[b] as f64
                    }
                })
                .collect();
            if x.iter().all(|&a| a == x[0]) {
                excluded.push((id, byte, Exclusion::ConstantByte));
                continue;
            }
            if speed_flat {
                excluded.push((id, byte, Exclusion::ConstantSpeed));
                continue;
            }
            let r = pearson(&x, &v).expect("both sides vary");
            scored.push((id, byte, r));
        }
    }
    let key = |r: f64| (r.abs() * 1e9).round() as i64;
    scored.sort_by(|a, b| match key(b.2).cmp(&key(a.2)) {
        Ordering::Equal => (a.0, a.1).cmp(&(b.0, b.1)),
        o => o,
    });
    let entries = scored
        .into_iter()
        .enumerate()
        .map(|(i, (id, byte, r))| CorrelationEntry {
            id,
            byte,
            r,
            rank: i + 1,
        })
        .collect();
    Ok(CorrelationReport { entries, excluded })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::can::CanFrame;
    use proptest::prelude::*;

    fn toy() -> (CanTrace, Vec<(u64, f64)>) {
        let mut frames = Vec::new();
        let mut speed = Vec::new();
        for i in 0..200u64 {
            let t = i * 10_000;
            let v = 20.0 + 10.0 * (i as f64 * 0.05).sin();
            speed.push((t, v));
            let affine = (3.0 * v + 7.0).round() as u8;
            let noisy = ((i * 37 + 11) % 251) as u8;
            frames.push(CanFrame::new(t, 0x100, &[affine, 0x55, noisy, 0, 0, 0, 0, 0]).unwrap());
            if i % 3 == 0 {
                frames.push(CanFrame::new(t, 0x200, &[noisy, (v as u8) / 2]).unwrap());
            }
        }
        (CanTrace::new(frames).unwrap(), speed)
    }

    #[test]
    fn affine_byte_ranks_first() {
        let (trace, speed) = toy();
        let rep = correlate_bytes(&trace, &speed, false).unwrap();
        assert_eq!((rep.entries[0].id, rep.entries[0].byte), (0x100, 0));
        assert!(rep.entries[0].r > 0.999);
        assert!(rep.excluded.contains(&(0x100, 1, Exclusion::ConstantByte)));
        assert!(rep.excluded.contains(&(0x200, 5, Exclusion::MissingByte)));
        assert_eq!(rep.entries.len() + rep.excluded.len(), 16);
        for (i, e) in rep.entries.iter().enumerate() {
            assert_eq!(e.rank, i + 1);
            assert!((-1.0..=1.0).contains(&e.r));
        }
    }

    #[test]
    fn pearson_oracles() {
        let close = |a: Option<f64>, b: f64| (a.unwrap() - b).abs() < 1e-15;
        assert!(close(pearson(&[1.0, 2.0, 3.0], &[2.0, 4.0, 6.0]), 1.0));
        assert!(close(pearson(&[1.0, 2.0, 3.0], &[3.0, 2.0, 1.0]), -1.0));
        assert_eq!(pearson(&[1.0, 1.0], &[1.0, 2.0]), None);
        // Hand-computed: x = [1,2,3,4], y = [1,3,2,4] gives r = 0.8.
        assert!(
            (pearson(&[1.0, 2.0, 3.0, 4.0], &[1.0, 3.0, 2.0, 4.0]).unwrap() - 0.8).abs() < 1e-15
        );
    }

    #[test]
    fn signed_reading_changes_wrapping_bytes() {
        let frames: Vec<_> = (0..50u64)
            .map(|i| CanFrame::new(i, 1, &[(i as i64 - 25) as i8 as u8]).unwrap())
            .collect();
        let speed: Vec<_> = (0..50u64).map(|i| (i, i as f64)).collect();
        let trace = CanTrace::new(frames).unwrap();
        let signed = correlate_bytes(&trace, &speed, true).unwrap();
        let unsigned = correlate_bytes(&trace, &speed, false).unwrap();
        assert!((signed.entries[0].r - 1.0).abs() < 1e-12);
        assert!(unsigned.entries[0].r < 0.9);
    }

    #[test]
    fn empty_inputs() {
        let (trace, speed) = toy();
        assert_eq!(
            correlate_bytes(&CanTrace::default(), &speed, false),
            Err(RevError::EmptyTrace)
        );
        assert_eq!(
            correlate_bytes(&trace, &[], false),
            Err(RevError::EmptySpeed)
        );
    }

    proptest! {
        #[test]
        fn ranks_invariant_under_affine_speed(scale in prop_oneof![-50.0..-0.01f64, 0.01..50.0f64], offset in -1e3..1e3f64) {
            let (trace, speed) = toy();
            let base = correlate_bytes(&trace, &speed, false).unwrap();
            let moved: Vec<_> = speed.iter().map(|&(t, v)| (t, scale * v + offset)).collect();
            let other = correlate_bytes(&trace, &moved, false).unwrap();
            let order = |r: &CorrelationReport| r.entries.iter().map(|e| (e.id, e.byte)).collect::<Vec<_>>();
            prop_assert_eq!(order(&base), order(&other));
            for (a, b) in base.entries.iter().zip(&other.entries) {
                prop_assert!((a.r.abs() - b.r.abs()).abs() < 1e-9);
            }
        }
    }
}
