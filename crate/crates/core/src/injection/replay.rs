use std::collections::BTreeSet;

use crate::can::{Bus, CanFrame, CanTrace};

use super::InjectionError;

/// Records everything `bus` delivers over `(now, now + duration_us]`,
/// stepping in `tick_us` increments.
pub fn record<F>(bus: &mut Bus, duration_us: u64, tick_us: u64, mut payload: F) -> CanTrace
where
    F: FnMut(u16, u64) -> Vec<u8>,
{
    let tick = tick_us.max(1);
    let start = bus.now_us();
    let end = start + duration_us;
    let mut frames = Vec::new();
    let mut t = start;
    while t < end {
        t = (t + tick).min(end);
        frames.extend(bus.step(t, &mut payload));
    }
    CanTrace::new(frames).expect("bus delivers in time order")
}

/// Frames of `trace` whose id is in `id_subset`, with their original
/// timestamps.
pub fn playback(
    trace: &CanTrace,
    id_subset: &BTreeSet<u16>,
) -> Result<Vec<CanFrame>, InjectionError> {
    let present = trace.ids();
    if let Some(&id) = id_subset.iter().find(|id| !present.contains(id)) {
        return Err(InjectionError::UnknownId(id));
    }
    Ok(trace
        .iter()
        .filter(|f| id_subset.contains(&f.id()))
        .copied()
        .collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::can::{ids, BroadcastSchedule};

    fn sample_trace() -> CanTrace {
        let sched = BroadcastSchedule::new()
            .with(ids::SPEED, 10_000)
            .unwrap()
            .with(ids::THROTTLE, 30_000)
            .unwrap()
            .with(0x300, 7_000)
            .unwrap();
        let mut bus = Bus::new(sched);
        let mut n = 0u8;
        record(&mut bus, 200_000, 1_000, |id, _| {
            n = n.wrapping_add(1);
            vec![id as u8, n]
        })
    }

    #[test]
    fn records_every_source() {
        let trace = sample_trace();
        assert_eq!(trace.ids().len(), 3);
        assert_eq!(trace.len(), 20 + 6 + 28);
    }

    #[test]
    fn empty_subset_gives_nothing() {
        assert!(playback(&sample_trace(), &BTreeSet::new())
            .unwrap()
            .is_empty());
    }

    #[test]
    fn unknown_id_rejected() {
        let subset = BTreeSet::from([0x123]);
        assert_eq!(
            playback(&sample_trace(), &subset),
            Err(InjectionError::UnknownId(0x123))
        );
    }

    #[test]
    fn selection_preserves_timing() {
        let trace = sample_trace();
        let subset = BTreeSet::from([ids::THROTTLE]);
        let out = playback(&trace, &subset).unwrap();
        let original: Vec<_> = trace.iter().filter(|f| f.id() == ids::THROTTLE).collect();
        assert_eq!(out.len(), original.len());
        let deltas = |v: Vec<u64>| v.windows(2).map(|w| w[1] - w[0]).collect::<Vec<_>>();
        assert_eq!(
            deltas(out.iter().map(|f| f.timestamp_us()).collect()),
            deltas(original.iter().map(|f| f.timestamp_us()).collect())
        );
        assert_eq!(playback(&trace, &trace.ids()).unwrap(), trace.frames());
    }
}
