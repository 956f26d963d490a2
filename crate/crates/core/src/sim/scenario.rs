use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use crate::control::LowLevelConfig;
use crate::follower::{
    load_target_path, lqr_gain, make_oval, FollowerGains, HeadingMode, LqrWeights, OvalSpec,
    TargetPath,
};
use crate::plant::{PlantConfig, DEFAULT_THROTTLE_PERIOD_US};

use super::SimError;

/// Steering counts per radian of heading error, calibrated on the default
/// two-lap oval.
pub const DEFAULT_K_D: f64 = 42_000.0;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct FollowerConfig {
    pub lqr: LqrWeights,
    pub k_d: f64,
    pub heading_mode: HeadingMode,
}

impl Default for FollowerConfig {
    fn default() -> Self {
        Self {
            lqr: LqrWeights::default(),
            k_d: DEFAULT_K_D,
            heading_mode: HeadingMode::default(),
        }
    }
}

impl FollowerConfig {
    pub fn gains(&self) -> Result<FollowerGains, SimError> {
        Ok(FollowerGains {
            k: lqr_gain(&self.lqr)?,
            k_d: self.k_d,
            heading_mode: self.heading_mode,
        })
    }
}

/// Where the virtual target comes from. With neither a file nor an oval
/// the vehicle is simply held at rest.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct TargetConfig {
    /// CSV with columns `t,p_n,p_e,v_n,v_e`, relative to the scenario file.
    pub file: Option<PathBuf>,
    pub oval: Option<OvalSpec>,
    /// Replay the recording periodically.
    pub looped: bool,
}

impl Default for TargetConfig {
    fn default() -> Self {
        Self {
            file: None,
            oval: None,
            looped: true,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum InjectionKind {
    Tap,
    Shadow,
}

/// Forces one byte of one id to a fixed value while active.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct InjectionConfig {
    pub id: u16,
    /// 1-based byte number.
    pub byte: usize,
    pub value: u8,
    pub mode: InjectionKind,
    #[serde(default = "default_delay")]
    pub delay_us: u64,
    #[serde(default)]
    pub start_s: f64,
    pub end_s: Option<f64>,
}

fn default_delay() -> u64 {
    crate::injection::DEFAULT_DELAY_US
}

impl InjectionConfig {
    pub fn active(&self, t_s: f64) -> bool {
        t_s >= self.start_s && self.end_s.is_none_or(|e| t_s < e)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct InitialState {
    pub p_n: f64,
    pub p_e: f64,
    pub heading_rad: f64,
    pub speed_mph: f64,
}

impl Default for InitialState {
    fn default() -> Self {
        Self {
            p_n: 0.0,
            p_e: 0.0,
            heading_rad: 0.0,
            speed_mph: 0.0,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct Scenario {
    pub duration_s: f64,
    pub physics_dt_s: f64,
    pub lowlevel_rate_hz: f64,
    pub highlevel_rate_hz: f64,
    /// Seeds the speed-sensor noise.
    pub seed: u64,
    /// Standard deviation of noise added to the decoded speed, mph.
    pub speed_noise_mph: f64,
    /// Drive the motor from the throttle byte the TCM sees on 0x11A
    /// rather than straight from the pedal emulator. Injections on 0x11A
    /// only reach the plant with this set.
    pub throttle_via_can: bool,
    pub throttle_period_us: u64,
    pub plant: PlantConfig,
    pub control: LowLevelConfig,
    pub follower: FollowerConfig,
    pub target: TargetConfig,
    pub initial: InitialState,
    pub injections: Vec<InjectionConfig>,
    /// Directory for logs written by the CLI.
    pub output_dir: Option<PathBuf>,
}

impl Default for Scenario {
    fn default() -> Self {
        Self {
            duration_s: 10.0,
            physics_dt_s: 1e-3,
            lowlevel_rate_hz: 100.0,
            highlevel_rate_hz: 10.0,
            seed: 0,
            speed_noise_mph: 0.0,
            throttle_via_can: false,
            throttle_period_us: DEFAULT_THROTTLE_PERIOD_US,
            plant: PlantConfig::default(),
            control: LowLevelConfig::default(),
            follower: FollowerConfig::default(),
            target: TargetConfig::default(),
            initial: InitialState::default(),
            injections: Vec::new(),
            output_dir: None,
        }
    }
}

/// Integer step counts derived from a validated scenario.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Steps {
    pub total: u64,
    pub per_lowlevel: u64,
    pub per_highlevel: u64,
}

fn whole(x: f64) -> Option<u64> {
    let r = x.round();
    ((x - r).abs() < 1e-6 && r >= 1.0).then_some(r as u64)
}

impl Scenario {
    /// `laps` laps of the default oval, cut at the last high-level tick
    /// before the target would start another lap.
    pub fn oval_laps(laps: u32) -> Self {
        let oval = OvalSpec::default();
        let base = Self::default();
        let lap_s = oval.lap_length() / oval.speed_mps;
        let ticks = (lap_s * laps as f64 * base.highlevel_rate_hz).floor();
        Self {
            duration_s: ticks / base.highlevel_rate_hz,
            target: TargetConfig {
                oval: Some(oval),
                ..TargetConfig::default()
            },
            ..Self::default()
        }
    }

    pub fn from_toml(text: &str) -> Result<Self, SimError> {
        let s: Scenario = toml::from_str(text)?;
        s.validate()?;
        Ok(s)
    }

    /// Loads a scenario file; a relative target file is resolved against
    /// the scenario's directory.
    pub fn load(path: &Path) -> Result<Self, SimError> {
        let mut s = Self::from_toml(&std::fs::read_to_string(path)?)?;
        if let (Some(f), Some(dir)) = (&s.target.file, path.parent()) {
            if f.is_relative() {
                s.target.file = Some(dir.join(f));
            }
        }
        Ok(s)
    }

    pub fn to_toml(&self) -> String {
        toml::to_string(self).expect("scenario serializes")
    }

    pub fn steps(&self) -> Result<Steps, SimError> {
        let cfg = |m: String| SimError::Config(m);
        if !(self.physics_dt_s.is_finite() && self.physics_dt_s > 0.0) {
            return Err(cfg(format!(
                "physics_dt_s must be positive, got {}",
                self.physics_dt_s
            )));
        }
        if !(self.duration_s.is_finite() && self.duration_s >= 0.0) {
            return Err(cfg(format!(
                "duration_s must be non-negative, got {}",
                self.duration_s
            )));
        }
        let physics_hz = 1.0 / self.physics_dt_s;
        let per = |rate: f64, name: &str| {
            whole(physics_hz / rate).ok_or_else(|| {
                cfg(format!(
                    "{name} {rate} Hz does not divide the physics rate {physics_hz} Hz"
                ))
            })
        };
        let per_lowlevel = per(self.lowlevel_rate_hz, "lowlevel_rate_hz")?;
        let per_highlevel = per(self.highlevel_rate_hz, "highlevel_rate_hz")?;
        let total = if self.duration_s == 0.0 {
            0
        } else {
            whole(self.duration_s / self.physics_dt_s).ok_or_else(|| {
                cfg(format!(
                    "duration {} s is not a whole number of physics steps",
                    self.duration_s
                ))
            })?
        };
        Ok(Steps {
            total,
            per_lowlevel,
            per_highlevel,
        })
    }

    pub fn validate(&self) -> Result<(), SimError> {
        self.steps()?;
        self.plant.validate()?;
        self.control.deadband.validate()?;
        self.follower.gains()?;
        if self.speed_noise_mph < 0.0 || !self.speed_noise_mph.is_finite() {
            return Err(SimError::Config(format!(
                "speed_noise_mph must be >= 0, got {}",
                self.speed_noise_mph
            )));
        }
        if self.throttle_period_us == 0 {
            return Err(SimError::Config(
                "throttle_period_us must be positive".into(),
            ));
        }
        if self.target.file.is_some() && self.target.oval.is_some() {
            return Err(SimError::Config(
                "give either target.file or target.oval, not both".into(),
            ));
        }
        for inj in &self.injections {
            if !(1..=8).contains(&inj.byte) {
                return Err(SimError::Config(format!(
                    "injection byte {} outside 1..=8",
                    inj.byte
                )));
            }
            if inj.id > crate::can::MAX_ID {
                return Err(SimError::Config(format!(
                    "injection id {:#X} is not an 11-bit id",
                    inj.id
                )));
            }
        }
        Ok(())
    }

    /// The virtual target, or `None` when the scenario has none.
    pub fn target_path(&self) -> Result<Option<TargetPath>, SimError> {
        let samples = if let Some(f) = &self.target.file {
            load_target_path(&std::fs::read_to_string(f)?)?
        } else if let Some(oval) = &self.target.oval {
            make_oval(oval)?
        } else {
            return Ok(None);
        };
        if samples.is_empty() {
            return Ok(None);
        }
        let path = if self.target.looped {
            TargetPath::looped(samples)?
        } else {
            TargetPath::once(samples)?
        };
        Ok(Some(path))
    }
}
