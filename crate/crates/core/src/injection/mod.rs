//! Controller insertion on the simulated bus.
//!
//! Two strategies are modeled: a tap point that sits between one module and
//! the bus and rewrites selected bytes of matching frames, and shadow
//! injection from the diagnostics port, which answers every genuine frame
//! with a forged copy a fixed delay later so the forged value is what the
//! receiver holds for most of each period. Record and playback of raw
//! traffic are here too.

mod filter;
mod ramp;
mod replay;
mod shadow;

pub use filter::{tap_filter, FilterRule};
pub use ramp::{
    all_ids, fast_throttle_schedule, idle_traffic, run_injection, InjectionMode, InjectionRun,
    InjectionSpec, Ramp, ReceiverBench, SpeedSample,
};
pub use replay::{playback, record};
pub use shadow::{dominance_fraction, ShadowInjector, DEFAULT_DELAY_US};

use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum InjectionError {
    #[error("mask selects {masked} bytes but {given} replacement bytes were given")]
    MaskMismatch { masked: usize, given: usize },
    #[error("byte number {0} outside 1..=8")]
    BadByte(usize),
    #[error("injection delay {delay_us} us must be shorter than the target period {period_us} us")]
    DelayTooLong { delay_us: u64, period_us: u64 },
    #[error("id {0:#X} does not appear in the trace")]
    UnknownId(u16),
    #[error("bad ramp {0:?}: expected start:end:step")]
    BadRamp(String),
    #[error(transparent)]
    Can(#[from] crate::can::CanError),
    #[error(transparent)]
    Plant(#[from] crate::plant::PlantError),
}
