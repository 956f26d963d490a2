use std::path::Path;
use std::process::{Command, Output};

fn canpilot(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_canpilot"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn stdout(args: &[&str]) -> String {
    let out = canpilot(args);
    assert!(
        out.status.success(),
        "{args:?}: {}",
        String::from_utf8_lossy(&out.stderr)
    );
    String::from_utf8(out.stdout).unwrap()
}

#[test]
fn packet_encode_and_decode() {
    let hex = stdout(&[
        "packet", "--app", "0.1", "--bpp", "0", "--steer", "0.5", "--hex",
    ]);
    assert_eq!(hex.trim(), "FA06199A0000800027CA");
    assert!(stdout(&["packet", "--decode", hex.trim()]).contains("0.5"));
    assert!(!canpilot(&["packet", "--decode", "FA06199A0000800027CB"])
        .status
        .success());
}

#[test]
fn design_gains_table_row() {
    let out = stdout(&[
        "design-gains",
        "--tau-car",
        "7",
        "--zeta",
        "1",
        "--tau-cl",
        "0.5",
    ]);
    assert!(out.contains("27") && out.contains("28"), "{out}");
}

#[test]
fn oval_then_simulate() {
    let dir = tempfile::tempdir().unwrap();
    let oval = dir.path().join("oval.csv");
    stdout(&["make-oval", "--out", oval.to_str().unwrap()]);
    let scenario = dir.path().join("s.toml");
    std::fs::write(
        &scenario,
        "duration_s = 3.0\n[target]\nfile = \"oval.csv\"\n",
    )
    .unwrap();
    let out = dir.path().join("run");
    stdout(&[
        "simulate",
        scenario.to_str().unwrap(),
        "--out",
        out.to_str().unwrap(),
    ]);
    for f in [
        "state.csv",
        "commands.csv",
        "errors.csv",
        "can.log",
        "metrics.json",
    ] {
        assert!(Path::new(&out).join(f).is_file(), "missing {f}");
    }
}

#[test]
fn record_isolate_correlate_inject() {
    let dir = tempfile::tempdir().unwrap();
    let trace = dir.path().join("drive.log");
    let t = trace.to_str().unwrap();
    stdout(&[
        "record-drive",
        "--ids",
        "40",
        "--duration-s",
        "20",
        "--out",
        t,
    ]);
    assert!(stdout(&["isolate", "--trace", t]).contains("11A"));
    assert!(!stdout(&["correlate", "--trace", t, "--top", "5"]).is_empty());
    let out = dir.path().join("inj");
    stdout(&[
        "inject",
        "--ramp",
        "0:40:20",
        "--hold-ms",
        "200",
        "--out",
        out.to_str().unwrap(),
    ]);
    assert!(out.read_dir().unwrap().count() > 0);
}
