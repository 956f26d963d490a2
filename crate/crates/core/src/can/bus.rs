//! Deterministic stand-in for a CAN bus.
//!
//! Bit-level arbitration is not modeled. Periodic sources fire at exact
//! multiples of their period, and all frames falling in the same step are
//! delivered ordered by `(timestamp, arbitration id, origin, sequence)`:
//! lower ids win at equal timestamps, and one-shot frames (injections,
//! playback) queue behind a periodic frame with the same id and timestamp.

use std::collections::BTreeMap;

use super::{CanError, CanFrame};

/// Broadcast periods keyed by arbitration id.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct BroadcastSchedule {
    entries: BTreeMap<u16, u64>,
}

impl BroadcastSchedule {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn with(mut self, id: u16, period_us: u64) -> Result<Self, CanError> {
        self.insert(id, period_us)?;
        Ok(self)
    }

    pub fn insert(&mut self, id: u16, period_us: u64) -> Result<(), CanError> {
        if period_us == 0 {
            return Err(CanError::ZeroPeriod { id });
        }
        if id > super::MAX_ID {
            return Err(CanError::IdOutOfRange(id as u32));
        }
        self.entries.insert(id, period_us);
        Ok(())
    }

    pub fn period_us(&self, id: u16) -> Option<u64> {
        self.entries.get(&id).copied()
    }

    pub fn iter(&self) -> impl Iterator<Item = (u16, u64)> + '_ {
        self.entries.iter().map(|(&id, &p)| (id, p))
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }
}

/// Where a delivered frame came from.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum FrameOrigin {
    Periodic,
    Queued,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
struct Key {
    ts: u64,
    id: u16,
    origin: u8,
    seq: u64,
}

#[derive(Debug, Clone)]
pub struct Bus {
    schedule: BroadcastSchedule,
    next_due: BTreeMap<u16, u64>,
    queued: BTreeMap<Key, CanFrame>,
    seq: u64,
    now_us: u64,
}

impl Bus {
    /// A bus whose clock starts at 0. Each scheduled id first fires at
    /// `t = period`.
    pub fn new(schedule: BroadcastSchedule) -> Self {
        let next_due = schedule.iter().collect();
        Self {
            schedule,
            next_due,
            queued: BTreeMap::new(),
            seq: 0,
            now_us: 0,
        }
    }

    pub fn schedule(&self) -> &BroadcastSchedule {
        &self.schedule
    }

    pub fn now_us(&self) -> u64 {
        self.now_us
    }

    /// Number of one-shot frames waiting for delivery.
    pub fn pending(&self) -> usize {
        self.queued.len()
    }

    /// Queues a one-shot frame for delivery at its own timestamp. Frames
    /// stamped at or before the current clock go out on the next step.
    pub fn enqueue(&mut self, frame: CanFrame) {
        let ts = frame.timestamp_us().max(self.now_us);
        let key = Key {
            ts,
            id: frame.id(),
            origin: 1,
            seq: self.next_seq(),
        };
        self.queued.insert(key, frame.with_timestamp(ts));
    }

    fn next_seq(&mut self) -> u64 {
        self.seq += 1;
        self.seq
    }

    /// Advances the clock to `now_us` and returns every frame due in
    /// `(previous now, now_us]` (plus anything queued for the previous
    /// instant), in delivery order.
    ///
    /// `payload(id, t)` supplies the bytes for a periodic source firing at
    /// `t`; the bus stamps id and timestamp.
    pub fn step<F>(&mut self, now_us: u64, payload: F) -> Vec<CanFrame>
    where
        F: FnMut(u16, u64) -> Vec<u8>,
    {
        self.step_tagged(now_us, payload)
            .into_iter()
            .map(|(f, _)| f)
            .collect()
    }

    /// As [`Bus::step`], also reporting whether each frame came from the
    /// schedule or the one-shot queue.
    pub fn step_tagged<F>(&mut self, now_us: u64, mut payload: F) -> Vec<(CanFrame, FrameOrigin)>
    where
        F: FnMut(u16, u64) -> Vec<u8>,
    {
        let mut due: Vec<(Key, CanFrame)> = Vec::new();
        for (&id, next) in self.next_due.iter_mut() {
            let period = self.schedule.entries[&id];
            while *next <= now_us {
                let ts = *next;
                let data = payload(id, ts);
                let frame = CanFrame::new(ts, id, &data[..data.len().min(8)])
                    .expect("scheduled ids are validated");
                due.push((
                    Key {
                        ts,
                        id,
                        origin: 0,
                        seq: 0,
                    },
                    frame,
                ));
                *next += period;
            }
        }
        while let Some(entry) = self.queued.first_entry() {
            if entry.key().ts > now_us {
                break;
            }
            due.push(entry.remove_entry());
        }
        due.sort_by_key(|(k, _)| *k);
        self.now_us = self.now_us.max(now_us);
        due.into_iter()
            .map(|(k, f)| {
                let origin = if k.origin == 0 {
                    FrameOrigin::Periodic
                } else {
                    FrameOrigin::Queued
                };
                (f, origin)
            })
            .collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn schedule() -> BroadcastSchedule {
        BroadcastSchedule::new()
            .with(0x11A, 100_000)
            .unwrap()
            .with(0x75, 10_000)
            .unwrap()
    }

    fn zeros(_: u16, _: u64) -> Vec<u8> {
        vec![0; 8]
    }

    #[test]
    fn zero_period_rejected() {
        assert_eq!(
            BroadcastSchedule::new().with(0x75, 0),
            Err(CanError::ZeroPeriod { id: 0x75 })
        );
    }

    #[test]
    fn priority_ordering_at_shared_instant() {
        let mut bus = Bus::new(schedule());
        let mut at_100ms = Vec::new();
        for t in (1_000..=100_000).step_by(1_000) {
            let out = bus.step(t, zeros);
            if t == 10_000 {
                assert_eq!(out.iter().map(|f| f.id()).collect::<Vec<_>>(), [0x75]);
            }
            if t == 100_000 {
                at_100ms = out;
            }
        }
        let ids: Vec<_> = at_100ms.iter().map(|f| f.id()).collect();
        assert_eq!(ids, [0x75, 0x11A]);
    }

    #[test]
    fn one_second_counts() {
        let mut bus = Bus::new(schedule());
        let mut frames = Vec::new();
        for t in (1_000..=1_000_000).step_by(1_000) {
            frames.extend(bus.step(t, zeros));
        }
        let count = |id| frames.iter().filter(|f| f.id() == id).count();
        assert_eq!(count(0x75), 100);
        assert_eq!(count(0x11A), 10);
    }

    #[test]
    fn coarse_steps_keep_exact_timestamps() {
        let mut bus = Bus::new(schedule());
        let frames = bus.step(1_000_000, zeros);
        assert_eq!(frames.len(), 110);
        assert!(frames
            .windows(2)
            .all(|w| w[0].timestamp_us() <= w[1].timestamp_us()));
        assert_eq!(frames[0].timestamp_us(), 10_000);
    }

    #[test]
    fn injected_frames_follow_periodic_at_same_instant() {
        let mut bus = Bus::new(schedule());
        let forged = CanFrame::new(10_000, 0x75, &[1; 8]).unwrap();
        bus.enqueue(forged);
        let early = CanFrame::new(10_000, 0x11A, &[2; 8]).unwrap();
        bus.enqueue(early);
        let out = bus.step(10_000, zeros);
        assert_eq!(out.len(), 3);
        assert_eq!(out[0].data(), &[0; 8]);
        assert_eq!(out[1], forged);
        assert_eq!(out[2].id(), 0x11A);
    }

    #[test]
    fn identical_runs_are_identical() {
        let run = || {
            let mut bus = Bus::new(schedule());
            let mut v = Vec::new();
            for t in (1_000..=300_000).step_by(1_000) {
                if t % 7_000 == 0 {
                    bus.enqueue(CanFrame::new(t + 250, 0x11A, &[t as u8; 8]).unwrap());
                }
                v.extend(bus.step(t, |id, ts| vec![id as u8, (ts / 1000) as u8]));
            }
            v
        };
        assert_eq!(run(), run());
    }
}
