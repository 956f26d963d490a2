use std::collections::BTreeMap;

use crate::can::{CanFrame, CanTrace};
use crate::injection::ReceiverBench;
use crate::plant::PlantConfig;

use super::RevError;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Isolation {
    pub id: u16,
    pub oracle_calls: usize,
}

/// Frames of `trace` grouped by id, ids ascending.
pub fn group_by_id(trace: &CanTrace) -> Vec<(u16, Vec<CanFrame>)> {
    let mut groups: BTreeMap<u16, Vec<CanFrame>> = BTreeMap::new();
    for f in trace.iter() {
        groups.entry(f.id()).or_default().push(*f);
    }
    groups.into_iter().collect()
}

fn merged(groups: &[(u16, Vec<CanFrame>)], chosen: &[usize]) -> Vec<CanFrame> {
    let mut frames: Vec<CanFrame> = chosen
        .iter()
        .flat_map(|&i| groups[i].1.iter().copied())
        .collect();
    frames.sort_by_key(|f| (f.timestamp_us(), f.id()));
    frames
}

/// Finds the single id whose frames trigger `oracle`.
///
/// Each round replays only the first half of the remaining ids and infers
/// the other half from the answer, then the survivor is confirmed on its
/// own (skipped when the last replay was already that id alone). A
/// successful search costs at most `ceil(log2 n) + 1` oracle calls.
///
/// When the survivor fails confirmation the whole set is replayed once to
/// tell [`RevError::NoEffect`] from [`RevError::Ambiguous`].
pub fn isolate_control_id<O>(
    groups: &[(u16, Vec<CanFrame>)],
    mut oracle: O,
) -> Result<Isolation, RevError>
where
    O: FnMut(&[CanFrame]) -> bool,
{
    if groups.is_empty() {
        return Err(RevError::EmptyTrace);
    }
    let mut calls = 0usize;
    let mut ask = |chosen: &[usize], calls: &mut usize| {
        *calls += 1;
        oracle(&merged(groups, chosen))
    };
    let mut candidates: Vec<usize> = (0..groups.len()).collect();
    let mut any_positive = false;
    let mut confirmed = false;
    while candidates.len() > 1 {
        let mid = candidates.len().div_ceil(2);
        let first = candidates[..mid].to_vec();
        if ask(&first, &mut calls) {
            any_positive = true;
            confirmed = first.len() == 1;
            candidates = first;
        } else {
            confirmed = false;
            candidates.drain(..mid);
        }
    }
    let survivor = candidates[0];
    if confirmed || ask(&[survivor], &mut calls) {
        return Ok(Isolation {
            id: groups[survivor].0,
            oracle_calls: calls,
        });
    }
    if any_positive {
        return Err(RevError::Ambiguous);
    }
    let all: Vec<usize> = (0..groups.len()).collect();
    if ask(&all, &mut calls) {
        Err(RevError::Ambiguous)
    } else {
        Err(RevError::NoEffect)
    }
}

/// Replays frames into a vehicle at rest and reports whether it gained
/// more than `threshold_mph` by the last frame.
pub fn plant_oracle(config: PlantConfig, threshold_mph: f64) -> impl FnMut(&[CanFrame]) -> bool {
    move |frames| {
        let end = frames.last().map(|f| f.timestamp_us()).unwrap_or(0);
        ReceiverBench::speed_gain(&config, frames, end)
            .map(|v| v > threshold_mph)
            .unwrap_or(false)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn groups(n: usize) -> Vec<(u16, Vec<CanFrame>)> {
        (0..n as u16)
            .map(|i| (i, vec![CanFrame::new(i as u64, i, &[i as u8]).unwrap()]))
            .collect()
    }

    fn bound(n: usize) -> usize {
        (n as f64).log2().ceil() as usize + 1
    }

    fn planted(id: u16) -> impl FnMut(&[CanFrame]) -> bool {
        move |fs| fs.iter().any(|f| f.id() == id)
    }

    #[test]
    fn single_id() {
        let r = isolate_control_id(&groups(1), planted(0)).unwrap();
        assert_eq!(
            r,
            Isolation {
                id: 0,
                oracle_calls: 1
            }
        );
    }

    #[test]
    fn hundred_and_two_ids() {
        let mut g = groups(101);
        g.push((0x11A, vec![CanFrame::new(0, 0x11A, &[0]).unwrap()]));
        g.sort_by_key(|(id, _)| *id);
        let r = isolate_control_id(&g, planted(0x11A)).unwrap();
        assert_eq!(r.id, 0x11A);
        assert!(r.oracle_calls <= 8);
    }

    #[test]
    fn two_key_actuator_is_ambiguous() {
        let both =
            |fs: &[CanFrame]| fs.iter().any(|f| f.id() == 3) && fs.iter().any(|f| f.id() == 12);
        assert_eq!(
            isolate_control_id(&groups(16), both),
            Err(RevError::Ambiguous)
        );
        let both =
            |fs: &[CanFrame]| fs.iter().any(|f| f.id() == 1) && fs.iter().any(|f| f.id() == 2);
        assert_eq!(
            isolate_control_id(&groups(16), both),
            Err(RevError::Ambiguous)
        );
    }

    #[test]
    fn no_effect() {
        assert_eq!(
            isolate_control_id(&groups(10), |_| false),
            Err(RevError::NoEffect)
        );
        assert_eq!(isolate_control_id(&[], |_| true), Err(RevError::EmptyTrace));
    }

    #[test]
    fn oracle_sees_time_ordered_frames() {
        let g = vec![
            (1, vec![CanFrame::new(5, 1, &[]).unwrap()]),
            (2, vec![CanFrame::new(1, 2, &[]).unwrap()]),
        ];
        isolate_control_id(&g, |fs| {
            assert!(fs
                .windows(2)
                .all(|w| w[0].timestamp_us() <= w[1].timestamp_us()));
            true
        })
        .unwrap();
    }

    proptest! {
        #[test]
        fn call_count_bound(n in 1usize..=1024, seed in any::<u64>()) {
            let target = (seed % n as u64) as u16;
            let r = isolate_control_id(&groups(n), planted(target)).unwrap();
            prop_assert_eq!(r.id, target);
            prop_assert!(r.oracle_calls <= bound(n), "n={} calls={}", n, r.oracle_calls);
        }
    }
}
