use std::fs;

use canpilot::can::{ids, parse_trace};
use canpilot::sim::{emit_logs, run, RunMetrics, Scenario, METRICS_FILE, STATE_FILE, TRACE_FILE};

fn short_oval() -> Scenario {
    let mut sc = Scenario::oval_laps(1);
    sc.duration_s = 5.0;
    sc
}

#[test]
fn emitted_logs_reload() {
    let dir = tempfile::tempdir().unwrap();
    let r = run(&short_oval()).unwrap();
    let written = emit_logs(&r, dir.path()).unwrap();
    assert_eq!(written.len(), 5);

    let trace = parse_trace(&fs::read_to_string(dir.path().join(TRACE_FILE)).unwrap()).unwrap();
    assert_eq!(trace, r.logs.trace);
    assert!(trace.ids().contains(&ids::SPEED));

    let metrics: RunMetrics =
        serde_json::from_str(&fs::read_to_string(dir.path().join(METRICS_FILE)).unwrap()).unwrap();
    assert_eq!(metrics, r.metrics);

    let mut rdr = csv::Reader::from_path(dir.path().join(STATE_FILE)).unwrap();
    assert_eq!(rdr.records().count(), r.logs.state.len());
}

#[test]
fn scenario_toml_roundtrip_runs_identically() {
    let sc = short_oval();
    let back = Scenario::from_toml(&sc.to_toml()).unwrap();
    assert_eq!(run(&sc).unwrap().metrics, run(&back).unwrap().metrics);
}
