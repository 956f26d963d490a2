use std::fmt;

use crate::can::CanFrame;

use super::{FilterRule, InjectionError};

pub const DEFAULT_DELAY_US: u64 = 250;

type PayloadFn = Box<dyn Fn(u64) -> Vec<u8> + Send + Sync>;

/// Diagnostics-port injector: follows every genuine `target_id` frame with
/// a forged copy `delay_us` later.
pub struct ShadowInjector {
    target_id: u16,
    delay_us: u64,
    byte_mask: [bool; 8],
    payload_source: PayloadFn,
}

impl fmt::Debug for ShadowInjector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("ShadowInjector")
            .field("target_id", &self.target_id)
            .field("delay_us", &self.delay_us)
            .field("byte_mask", &self.byte_mask)
            .finish_non_exhaustive()
    }
}

impl ShadowInjector {
    /// `payload_source(now)` returns one byte per masked position.
    /// `target_period_us` is the genuine broadcast period; the delay must
    /// be shorter.
    pub fn new<F>(
        target_id: u16,
        target_period_us: u64,
        delay_us: u64,
        byte_mask: [bool; 8],
        payload_source: F,
    ) -> Result<Self, InjectionError>
    where
        F: Fn(u64) -> Vec<u8> + Send + Sync + 'static,
    {
        if delay_us >= target_period_us {
            return Err(InjectionError::DelayTooLong {
                delay_us,
                period_us: target_period_us,
            });
        }
        Ok(Self {
            target_id,
            delay_us,
            byte_mask,
            payload_source: Box::new(payload_source),
        })
    }

    /// Single-byte injector (byte numbered 1..=8) with the default delay.
    pub fn single_byte<F>(
        target_id: u16,
        target_period_us: u64,
        byte_number: usize,
        value: F,
    ) -> Result<Self, InjectionError>
    where
        F: Fn(u64) -> u8 + Send + Sync + 'static,
    {
        if !(1..=8).contains(&byte_number) {
            return Err(InjectionError::BadByte(byte_number));
        }
        let mut mask = [false; 8];
        mask[byte_number - 1] = true;
        Self::new(
            target_id,
            target_period_us,
            DEFAULT_DELAY_US,
            mask,
            move |t| vec![value(t)],
        )
    }

    pub fn with_delay(
        mut self,
        delay_us: u64,
        target_period_us: u64,
    ) -> Result<Self, InjectionError> {
        if delay_us >= target_period_us {
            return Err(InjectionError::DelayTooLong {
                delay_us,
                period_us: target_period_us,
            });
        }
        self.delay_us = delay_us;
        Ok(self)
    }

    pub fn target_id(&self) -> u16 {
        self.target_id
    }

    pub fn delay_us(&self) -> u64 {
        self.delay_us
    }

    /// The forged frame answering `observed`, or `None` if `observed` is
    /// not a `target_id` frame. Unmasked bytes copy the observed frame.
    pub fn shadow_inject(&self, observed: &CanFrame, now_us: u64) -> Option<CanFrame> {
        if observed.id() != self.target_id {
            return None;
        }
        let at = now_us + self.delay_us;
        let replacement = (self.payload_source)(at);
        let mut out = observed.with_timestamp(at);
        FilterRule::apply(&self.byte_mask, &replacement, out.data_mut());
        Some(out)
    }
}

/// Fraction of `[t_start, t_end)` during which the last `id` frame a
/// receiver saw satisfies `is_injected`. `frames` must be in delivery
/// order; time before the first `id` frame counts as not injected.
pub fn dominance_fraction<P>(
    frames: &[CanFrame],
    id: u16,
    is_injected: P,
    t_start: u64,
    t_end: u64,
) -> f64
where
    P: Fn(&CanFrame) -> bool,
{
    if t_end <= t_start {
        return 0.0;
    }
    let mut held = false;
    let mut since = t_start;
    let mut injected_us = 0u64;
    for f in frames.iter().filter(|f| f.id() == id) {
        let ts = f.timestamp_us();
        if ts >= t_end {
            break;
        }
        if ts > since {
            if held {
                injected_us += ts - since;
            }
            since = ts;
        }
        held = is_injected(f);
    }
    if held {
        injected_us += t_end - since;
    }
    injected_us as f64 / (t_end - t_start) as f64
}
