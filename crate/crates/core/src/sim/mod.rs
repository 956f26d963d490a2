//! Scenario runner: plant, bus, injectors, low-level loops and the path
//! follower stepped together at a fixed physics rate, with tracking
//! metrics and plot-ready logs.

mod calibrate;
mod logs;
mod metrics;
mod run;
mod scenario;

pub use calibrate::{calibrate_kd, Calibration};
pub use logs::{
    emit_logs, render_logs, to_csv, COMMANDS_FILE, ERRORS_FILE, METRICS_FILE, STATE_FILE,
    TRACE_FILE,
};
pub use metrics::{path_error, LapMetrics, MetricsAccumulator, PathError, RunMetrics};
pub use run::{run, CommandRow, ErrorRow, LoopCounts, RunLogs, RunResult, StateRow};
pub use scenario::{
    FollowerConfig, InitialState, InjectionConfig, InjectionKind, Scenario, Steps, TargetConfig,
    DEFAULT_K_D,
};

use thiserror::Error;

#[derive(Debug, Error)]
pub enum SimError {
    #[error("scenario: {0}")]
    Config(String),
    #[error(transparent)]
    Io(#[from] std::io::Error),
    #[error("scenario file: {0}")]
    Toml(#[from] toml::de::Error),
    #[error(transparent)]
    Json(#[from] serde_json::Error),
    #[error(transparent)]
    Csv(#[from] csv::Error),
    #[error(transparent)]
    Plant(#[from] crate::plant::PlantError),
    #[error(transparent)]
    Control(#[from] crate::control::ControlError),
    #[error(transparent)]
    Follower(#[from] crate::follower::FollowerError),
    #[error(transparent)]
    Serial(#[from] crate::serial::SerialError),
    #[error(transparent)]
    Injection(#[from] crate::injection::InjectionError),
    #[error(transparent)]
    Can(#[from] crate::can::CanError),
}
