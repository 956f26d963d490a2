use std::fs;
use std::path::{Path, PathBuf};

use serde::Serialize;

use crate::can::serialize_trace;

use super::{RunResult, SimError};

pub const STATE_FILE: &str = "state.csv";
pub const COMMANDS_FILE: &str = "commands.csv";
pub const ERRORS_FILE: &str = "errors.csv";
pub const TRACE_FILE: &str = "can.log";
pub const METRICS_FILE: &str = "metrics.json";

/// CSV text with a header row taken from the row type's field names.
pub fn to_csv<T: Serialize>(rows: &[T]) -> Result<String, SimError> {
    let mut w = csv::Writer::from_writer(Vec::new());
    for r in rows {
        w.serialize(r)?;
    }
    let bytes = w.into_inner().map_err(|e| SimError::Io(e.into_error()))?;
    Ok(String::from_utf8(bytes).expect("csv output is utf-8"))
}

/// Every log of a run as `(file name, contents)`.
pub fn render_logs(run: &RunResult) -> Result<Vec<(&'static str, String)>, SimError> {
    let mut metrics = serde_json::to_string_pretty(&run.metrics)?;
    metrics.push('\n');
    Ok(vec![
        (STATE_FILE, to_csv(&run.logs.state)?),
        (COMMANDS_FILE, to_csv(&run.logs.commands)?),
        (ERRORS_FILE, to_csv(&run.logs.errors)?),
        (TRACE_FILE, serialize_trace(&run.logs.trace)),
        (METRICS_FILE, metrics),
    ])
}

/// Writes the logs into `dir`, creating it if needed.
pub fn emit_logs(run: &RunResult, dir: &Path) -> Result<Vec<PathBuf>, SimError> {
    fs::create_dir_all(dir)?;
    render_logs(run)?
        .into_iter()
        .map(|(name, text)| {
            let p = dir.join(name);
            fs::write(&p, text)?;
            Ok(p)
        })
        .collect()
}
