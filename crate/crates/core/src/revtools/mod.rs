//! Reverse-engineering helpers: finding the arbitration id that actuates
//! the vehicle by bisecting replayed traffic, and ranking payload bytes by
//! their correlation with vehicle speed.

mod correlate;
mod drive;
mod isolate;

pub use correlate::{
    correlate_bytes, pearson, speed_series, CorrelationEntry, CorrelationReport, Exclusion,
};
pub use drive::{synthetic_drive, DriveRecording};
pub use isolate::{group_by_id, isolate_control_id, plant_oracle, Isolation};

use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum RevError {
    #[error("no subset of ids made the vehicle accelerate")]
    NoEffect,
    #[error("the effect needs more than one id")]
    Ambiguous,
    #[error("trace is empty")]
    EmptyTrace,
    #[error("speed series is empty")]
    EmptySpeed,
}
