use std::error::Error;
use std::fs;
use std::path::{Path, PathBuf};

use clap::{Parser, Subcommand, ValueEnum};

use canpilot::can::{ids, parse_trace, serialize_trace, CanTrace};
use canpilot::control::{closed_loop_poles, design_pi, LoopSpec};
use canpilot::follower::{make_oval, save_target_path, OvalSpec};
use canpilot::injection::{idle_traffic, run_injection, InjectionMode, InjectionSpec, Ramp};
use canpilot::plant::{PlantConfig, DEFAULT_THROTTLE_PERIOD_US, MPH_TO_MPS};
use canpilot::revtools::{
    correlate_bytes, group_by_id, isolate_control_id, plant_oracle, speed_series, synthetic_drive,
};
use canpilot::serial::{decode_packet, encode_packet, CommandPacket};
use canpilot::sim::{calibrate_kd, emit_logs, run, to_csv, Scenario};

type Res<T> = Result<T, Box<dyn Error>>;

#[derive(Parser)]
#[command(
    name = "canpilot",
    version,
    about = "Drive-by-wire testbed on a simulated CAN bus"
)]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Clone, Copy, ValueEnum)]
enum Mode {
    Shadow,
    Tap,
}

#[derive(Subcommand)]
enum Cmd {
    /// Run a scenario file and write logs plus a metrics summary.
    Simulate {
        scenario: PathBuf,
        /// Log directory (overrides the scenario's output_dir).
        #[arg(long)]
        out: Option<PathBuf>,
        /// Search for the heading gain k_d before the final run.
        #[arg(long)]
        calibrate: bool,
    },
    /// Inject a ramp of byte values into one id and log the vehicle speed.
    Inject {
        /// Background traffic; idle modules if omitted.
        #[arg(long)]
        trace: Option<PathBuf>,
        #[arg(long, value_parser = parse_id, default_value = "11A")]
        id: u16,
        /// 1-based byte number.
        #[arg(long, default_value_t = 4)]
        byte: usize,
        /// start:end:step
        #[arg(long)]
        ramp: Ramp,
        /// Time each ramp value is held.
        #[arg(long, default_value_t = 1000)]
        hold_ms: u64,
        #[arg(long, value_enum, default_value_t = Mode::Shadow)]
        mode: Mode,
        #[arg(long, default_value_t = 250)]
        delay_us: u64,
        #[arg(long, default_value = "inject_out")]
        out: PathBuf,
    },
    /// Find the id that makes the car accelerate by bisecting replays.
    Isolate {
        /// Recording to bisect; a seeded synthetic drive if omitted.
        #[arg(long)]
        trace: Option<PathBuf>,
        #[arg(long, default_value_t = 1.0)]
        threshold_mph: f64,
    },
    /// Rank payload bytes by correlation with vehicle speed.
    Correlate {
        #[arg(long)]
        trace: PathBuf,
        #[arg(long, value_parser = parse_id, default_value = "75")]
        speed_id: u16,
        #[arg(long, default_value_t = 20)]
        top: usize,
        /// Read bytes as two's-complement.
        #[arg(long)]
        signed: bool,
    },
    /// Write a seeded synthetic drive recording.
    RecordDrive {
        #[arg(long, default_value_t = 1)]
        seed: u64,
        #[arg(long, default_value_t = 102)]
        ids: usize,
        #[arg(long, default_value_t = 120.0)]
        duration_s: f64,
        #[arg(long)]
        out: PathBuf,
    },
    /// PI gains by pole placement, with closed-loop poles.
    DesignGains {
        #[arg(long)]
        tau_car: f64,
        #[arg(long, default_value_t = 1.0)]
        zeta: f64,
        #[arg(long, conflicts_with = "omega_n", required_unless_present = "omega_n")]
        tau_cl: Option<f64>,
        #[arg(long)]
        omega_n: Option<f64>,
    },
    /// Write an oval virtual-target track.
    MakeOval {
        #[arg(long, default_value_t = 100.0)]
        straight: f64,
        #[arg(long, default_value_t = 20.0)]
        radius: f64,
        /// m/s, or with a unit: 20mph, 8.9mps, 32kph
        #[arg(long, value_parser = parse_speed, default_value = "20mph")]
        speed: f64,
        #[arg(long, default_value_t = 10.0)]
        rate: f64,
        /// Output file; stdout if omitted.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Encode a command packet (fractions in [0, 1]) or decode one.
    Packet {
        #[arg(long, default_value_t = 0.0)]
        app: f64,
        #[arg(long, default_value_t = 0.0)]
        bpp: f64,
        #[arg(long, default_value_t = 0.5)]
        steer: f64,
        /// Print the frame as hex instead of the field summary.
        #[arg(long)]
        hex: bool,
        /// Decode this hex frame instead of encoding.
        #[arg(long, conflicts_with_all = ["app", "bpp", "steer"])]
        decode: Option<String>,
    },
}

fn parse_id(s: &str) -> Result<u16, String> {
    let h = s.trim_start_matches("0x").trim_start_matches("0X");
    let id = u16::from_str_radix(h, 16).map_err(|e| format!("bad id {s:?}: {e}"))?;
    if id > canpilot::can::MAX_ID {
        return Err(format!("{s} is not an 11-bit id"));
    }
    Ok(id)
}

fn parse_speed(s: &str) -> Result<f64, String> {
    let s = s.trim().to_ascii_lowercase();
    let (num, factor) = if let Some(n) = s.strip_suffix("mph") {
        (n, MPH_TO_MPS)
    } else if let Some(n) = s.strip_suffix("kph") {
        (n, 1.0 / 3.6)
    } else if let Some(n) = s.strip_suffix("mps") {
        (n, 1.0)
    } else {
        (s.as_str(), 1.0)
    };
    num.trim()
        .parse::<f64>()
        .map(|v| v * factor)
        .map_err(|e| format!("bad speed {s:?}: {e}"))
}

fn load_trace(path: &Path) -> Res<CanTrace> {
    Ok(parse_trace(&fs::read_to_string(path)?)?)
}

fn main() -> Res<()> {
    env_logger::init();
    match Cli::parse().cmd {
        Cmd::Simulate {
            scenario,
            out,
            calibrate,
        } => {
            let mut sc = Scenario::load(&scenario)?;
            if calibrate {
                let cal = calibrate_kd(&sc, 1e3, 2.56e5, 12)?;
                eprintln!(
                    "k_d = {:.1} (final lap {:.3} m, {} runs)",
                    cal.k_d, cal.last_lap_error_m, cal.runs
                );
                sc.follower.k_d = cal.k_d;
            }
            let result = run(&sc)?;
            let dir = out
                .or(sc.output_dir.clone())
                .unwrap_or_else(|| PathBuf::from("sim_out"));
            for p in emit_logs(&result, &dir)? {
                eprintln!("wrote {}", p.display());
            }
            println!("{}", serde_json::to_string_pretty(&result.metrics)?);
        }
        Cmd::Inject {
            trace,
            id,
            byte,
            ramp,
            hold_ms,
            mode,
            delay_us,
            out,
        } => {
            let mut spec = InjectionSpec::new(id, byte, ramp);
            spec.hold_us = hold_ms * 1_000;
            spec.mode = match mode {
                Mode::Shadow => InjectionMode::Shadow { delay_us },
                Mode::Tap => InjectionMode::Tap,
            };
            spec.plant = PlantConfig::default();
            let background = match trace {
                Some(p) => load_trace(&p)?,
                None => idle_traffic(spec.duration_us(), DEFAULT_THROTTLE_PERIOD_US),
            };
            let result = run_injection(&background, &spec)?;
            fs::create_dir_all(&out)?;
            fs::write(out.join("trace.log"), serialize_trace(&result.trace))?;
            fs::write(out.join("speed.csv"), to_csv(&result.speed)?)?;
            let last = result.speed.last().map(|s| s.speed_mph).unwrap_or(0.0);
            println!(
                "{} frames, final speed {last:.2} mph, logs in {}",
                result.trace.len(),
                out.display()
            );
        }
        Cmd::Isolate {
            trace,
            threshold_mph,
        } => {
            let trace = match trace {
                Some(p) => load_trace(&p)?,
                None => synthetic_drive(1, 102, 30.0).trace,
            };
            let groups = group_by_id(&trace);
            let found =
                isolate_control_id(&groups, plant_oracle(PlantConfig::default(), threshold_mph))?;
            println!(
                "actuating id 0x{:03X} found among {} ids in {} replays",
                found.id,
                groups.len(),
                found.oracle_calls
            );
        }
        Cmd::Correlate {
            trace,
            speed_id,
            top,
            signed,
        } => {
            let trace = load_trace(&trace)?;
            let speed = speed_series(&trace, speed_id);
            let rep = correlate_bytes(&trace, &speed, signed)?;
            println!("{:>4}  {:>5}  {:>4}  {:>8}", "rank", "id", "byte", "r");
            for e in rep.top(top) {
                println!(
                    "{:>4}  0x{:03X}  {:>4}  {:>8.4}",
                    e.rank,
                    e.id,
                    e.byte + 1,
                    e.r
                );
            }
            println!(
                "{} bytes ranked, {} excluded",
                rep.entries.len(),
                rep.excluded.len()
            );
            if let Some(r) = rep.rank_of(ids::THROTTLE, 3) {
                println!("0x11A byte 4 ranks {r}");
            }
        }
        Cmd::RecordDrive {
            seed,
            ids,
            duration_s,
            out,
        } => {
            let drive = synthetic_drive(seed, ids, duration_s);
            fs::write(&out, serialize_trace(&drive.trace))?;
            println!(
                "{} frames over {} ids -> {}",
                drive.trace.len(),
                drive.trace.ids().len(),
                out.display()
            );
        }
        Cmd::DesignGains {
            tau_car,
            zeta,
            tau_cl,
            omega_n,
        } => {
            let spec = match (tau_cl, omega_n) {
                (Some(t), _) => LoopSpec::from_tau_cl(tau_car, zeta, t),
                (None, Some(w)) => LoopSpec::from_omega_n(tau_car, zeta, w),
                (None, None) => unreachable!("clap requires one of them"),
            };
            let g = design_pi(&spec)?;
            let cl = closed_loop_poles(&g, tau_car);
            println!("kp = {}", g.kp);
            println!("ki = {}", g.ki);
            println!("omega_n = {}", spec.omega_n);
            for p in cl.poles {
                println!("pole = {:.6} {:+.6}i", p.re, p.im);
            }
            println!("zero = {:.6}", cl.zero);
        }
        Cmd::MakeOval {
            straight,
            radius,
            speed,
            rate,
            out,
        } => {
            let spec = OvalSpec {
                straight_m: straight,
                radius_m: radius,
                speed_mps: speed,
                rate_hz: rate,
            };
            let text = save_target_path(&make_oval(&spec)?);
            match out {
                Some(p) => fs::write(p, text)?,
                None => print!("{text}"),
            }
        }
        Cmd::Packet {
            app,
            bpp,
            steer,
            hex,
            decode,
        } => {
            if let Some(h) = decode {
                let bytes = hex::decode(h.replace([' ', ':'], ""))?;
                let p = decode_packet(&bytes)?;
                println!(
                    "app = {:.6}\nbpp = {:.6}\nsteer = {:.6}",
                    p.app, p.bpp, p.steer_torque
                );
                return Ok(());
            }
            let frame = encode_packet(&CommandPacket::new(app, bpp, steer)?)?;
            if hex {
                println!("{}", hex::encode_upper(&frame));
            } else {
                let words: Vec<String> = frame.iter().map(|b| format!("{b:02X}")).collect();
                println!("{}", words.join(" "));
            }
        }
    }
    Ok(())
}
