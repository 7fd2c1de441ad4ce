//! TOML configuration. Every field has a default, so an empty file is a
//! valid configuration.

use std::path::Path;

use serde::{Deserialize, Serialize};
use yui_core::expression::{AuId, AuPriority};
use yui_core::perception::{EarModel, EarPair, EyeGeometry};
use yui_core::rig::{ConflictPolicy, MotionId, MotorId, RigTable, Unit};
use yui_core::servo::{
    settle_time_ns, PidGains, PlantParams, ServoConfig, DEFAULT_CONTROL_PERIOD_NS, DEGREE_GAINS,
    NORMALIZED_GAINS,
};

use crate::error::{Error, Result};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct Config {
    pub bus: BusConfig,
    pub servo: ServoSection,
    pub rig: RigSection,
    pub audio: AudioConfig,
    pub ears: EarConfig,
    pub eyes: EyeConfig,
    pub camera: CameraConfig,
    pub delays: DelayConfig,
    pub mapping: MappingConfig,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct BusConfig {
    pub cycle_ms: u32,
    pub queue_depth: usize,
    pub host: String,
    pub port: u16,
}

impl Default for BusConfig {
    fn default() -> Self {
        BusConfig {
            cycle_ms: 10,
            queue_depth: crate::bus::DEFAULT_QUEUE_DEPTH,
            host: "127.0.0.1".into(),
            port: 7450,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MotorTuning {
    pub kp: f64,
    pub ki: f64,
    pub kd: f64,
    pub input_limit: f64,
    pub max_speed: f64,
    pub time_constant: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MotorOverride {
    pub id: u8,
    pub kp: Option<f64>,
    pub ki: Option<f64>,
    pub kd: Option<f64>,
    pub input_limit: Option<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct ServoSection {
    pub control_period_us: u32,
    pub degrees: MotorTuning,
    pub normalized: MotorTuning,
    #[serde(rename = "motor", skip_serializing_if = "Vec::is_empty")]
    pub overrides: Vec<MotorOverride>,
}

impl Default for ServoSection {
    fn default() -> Self {
        let deg = ServoConfig::degrees(0.0, 0.0);
        let norm = ServoConfig::normalized(0.0, 0.0);
        let tuning = |g: PidGains, c: ServoConfig| MotorTuning {
            kp: g.kp,
            ki: g.ki,
            kd: g.kd,
            input_limit: c.input_limit,
            max_speed: c.plant.max_speed,
            time_constant: c.plant.time_constant,
        };
        ServoSection {
            control_period_us: (DEFAULT_CONTROL_PERIOD_NS / 1000) as u32,
            degrees: tuning(DEGREE_GAINS, deg),
            normalized: tuning(NORMALIZED_GAINS, norm),
            overrides: Vec::new(),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum PolicyName {
    Net,
    Strict,
}

impl From<PolicyName> for ConflictPolicy {
    fn from(p: PolicyName) -> Self {
        match p {
            PolicyName::Net => ConflictPolicy::Net,
            PolicyName::Strict => ConflictPolicy::Strict,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MotionRange {
    pub id: u8,
    pub min: f64,
    pub max: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct RigSection {
    pub conflict_policy: PolicyName,
    /// AUs that win conflicts, highest first; the rest follow by number.
    pub au_priority: Vec<u8>,
    #[serde(rename = "motion_range", skip_serializing_if = "Vec::is_empty")]
    pub motion_ranges: Vec<MotionRange>,
}

impl Default for RigSection {
    fn default() -> Self {
        RigSection {
            conflict_policy: PolicyName::Net,
            au_priority: Vec::new(),
            motion_ranges: Vec::new(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct AudioConfig {
    pub sample_rate: u32,
    pub tone_hz: f64,
    pub amplitude: f32,
    pub source_distance_m: f64,
}

impl Default for AudioConfig {
    fn default() -> Self {
        AudioConfig {
            sample_rate: 48_000,
            tone_hz: 440.0,
            amplitude: 0.5,
            source_distance_m: 1.0,
        }
    }
}

/// The right ear; the left one is its mirror image.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct EarConfig {
    pub axis_deg: f64,
    pub forward_bias: f64,
    pub rear_floor: f64,
    pub reference_distance_m: f64,
}

impl Default for EarConfig {
    fn default() -> Self {
        let r = EarPair::default().right;
        EarConfig {
            axis_deg: r.axis_deg,
            forward_bias: r.forward_bias,
            rear_floor: r.rear_floor,
            reference_distance_m: r.reference_distance,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct EyeConfig {
    pub baseline_m: f64,
    pub focal_length: f64,
    pub width: u32,
    pub height: u32,
}

impl Default for EyeConfig {
    fn default() -> Self {
        let g = EyeGeometry::default();
        EyeConfig {
            baseline_m: g.baseline_m,
            focal_length: g.focal_length,
            width: g.width,
            height: g.height,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct CameraConfig {
    pub rate_hz: f64,
}

impl Default for CameraConfig {
    fn default() -> Self {
        CameraConfig { rate_hz: 30.0 }
    }
}

/// End-to-end latencies of each stream. Streams are delayed so they all
/// come out together with the slowest one.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct DelayConfig {
    /// Facial motor lag; defaults to the simulated settle time of a full
    /// normalized step.
    pub motor_settle_ms: Option<f64>,
    pub camera_latency_ms: f64,
    pub audio_latency_ms: f64,
}

impl Default for DelayConfig {
    fn default() -> Self {
        DelayConfig {
            motor_settle_ms: None,
            camera_latency_ms: 40.0,
            audio_latency_ms: 0.0,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct MappingConfig {
    pub gain: f64,
    /// Fitted parameters written by `yui fit-mapping`; the hand-derived
    /// map is used when absent.
    pub params_file: Option<String>,
}

impl Default for MappingConfig {
    fn default() -> Self {
        MappingConfig {
            gain: 1.0,
            params_file: None,
        }
    }
}

/// Per-stream playback delays derived from [`DelayConfig`].
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Delays {
    /// Operator voice played by the avatar, held back to match the lips.
    pub operator_audio_ns: u64,
    /// Avatar ears as heard by the operator.
    pub avatar_audio_ns: u64,
    /// Avatar cameras as seen by the operator.
    pub camera_ns: u64,
    pub motor_settle_ns: u64,
    /// Capture-to-publish latency of the avatar microphones.
    pub audio_latency_ns: u64,
    /// Capture-to-publish latency of the avatar cameras.
    pub camera_latency_ns: u64,
}

fn ms_to_ns(ms: f64) -> u64 {
    (ms * 1e6).round().max(0.0) as u64
}

impl Config {
    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
        let cfg: Config = toml::from_str(&text).map_err(|e| Error::Config(format!("{}: {e}", path.display())))?;
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn to_toml(&self) -> String {
        toml::to_string_pretty(self).expect("config serializes")
    }

    pub fn validate(&self) -> Result<()> {
        let bad = |m: String| Err(Error::Config(m));
        if self.bus.cycle_ms == 0 {
            return bad("bus.cycle_ms must be positive".into());
        }
        if self.servo.control_period_us == 0 {
            return bad("servo.control_period_us must be positive".into());
        }
        if !(self.camera.rate_hz > 0.0 && self.camera.rate_hz.is_finite()) {
            return bad("camera.rate_hz must be positive".into());
        }
        if !(self.mapping.gain.is_finite()) {
            return bad("mapping.gain must be finite".into());
        }
        for m in &self.servo.overrides {
            if MotorId::new(m.id).is_none() {
                return bad(format!("servo.motor id {} is not a motor", m.id));
            }
        }
        for &au in &self.rig.au_priority {
            AuId::new(au)?;
        }
        self.rig()?;
        self.ears().validate()?;
        self.eye_geometry().validate()?;
        for id in 1..=yui_core::MOTOR_COUNT as u8 {
            self.servo_config(&RigTable::yui(), MotorId::new(id).unwrap())
                .validate()?;
        }
        Ok(())
    }

    pub fn cycle_ns(&self) -> u64 {
        self.bus.cycle_ms as u64 * 1_000_000
    }

    /// The built-in rig with configured motion ranges applied.
    pub fn rig(&self) -> Result<RigTable> {
        let mut rig = RigTable::yui();
        for r in &self.rig.motion_ranges {
            let id = MotionId::new(r.id)
                .ok_or_else(|| Error::Config(format!("rig.motion_range id {} is not a motion", r.id)))?;
            rig.set_motion_range(id, r.min, r.max)?;
        }
        Ok(rig)
    }

    pub fn policy(&self) -> ConflictPolicy {
        self.rig.conflict_policy.into()
    }

    pub fn au_priority(&self) -> AuPriority {
        let order: Vec<AuId> = self
            .rig
            .au_priority
            .iter()
            .filter_map(|&a| AuId::new(a).ok())
            .collect();
        AuPriority::new(&order)
    }

    pub fn ears(&self) -> EarPair {
        EarPair::mirrored(EarModel {
            axis_deg: self.ears.axis_deg,
            forward_bias: self.ears.forward_bias,
            rear_floor: self.ears.rear_floor,
            reference_distance: self.ears.reference_distance_m,
        })
    }

    /// Eye geometry with the eyes centred.
    pub fn eye_geometry(&self) -> EyeGeometry {
        EyeGeometry {
            baseline_m: self.eyes.baseline_m,
            focal_length: self.eyes.focal_length,
            width: self.eyes.width,
            height: self.eyes.height,
            ..EyeGeometry::default()
        }
    }

    pub fn servo_config(&self, rig: &RigTable, motor: MotorId) -> ServoConfig {
        let spec = rig.motor(motor);
        let t = match spec.unit {
            Unit::Degrees => self.servo.degrees,
            Unit::Normalized => self.servo.normalized,
        };
        let mut gains = PidGains {
            kp: t.kp,
            ki: t.ki,
            kd: t.kd,
        };
        let mut input_limit = t.input_limit;
        for o in self.servo.overrides.iter().filter(|o| o.id == motor.get()) {
            gains.kp = o.kp.unwrap_or(gains.kp);
            gains.ki = o.ki.unwrap_or(gains.ki);
            gains.kd = o.kd.unwrap_or(gains.kd);
            input_limit = o.input_limit.unwrap_or(input_limit);
        }
        ServoConfig {
            gains,
            input_limit,
            plant: PlantParams {
                max_speed: t.max_speed,
                time_constant: t.time_constant,
                min_angle: spec.min,
                max_angle: spec.max,
            },
            control_period_ns: self.servo.control_period_us as u64 * 1000,
            command_period_ns: self.cycle_ns(),
        }
    }

    /// Settle time of a full `0 → 1` step on a facial motor, rounded up to
    /// whole bus cycles.
    pub fn motor_settle_ns(&self) -> Result<u64> {
        if let Some(ms) = self.delays.motor_settle_ms {
            return Ok(ms_to_ns(ms));
        }
        let rig = RigTable::yui();
        let cfg = self.servo_config(&rig, MotorId::new(10).unwrap());
        let t = settle_time_ns(cfg, 0.0, 1.0, 0.02, 5_000_000_000)?
            .ok_or_else(|| Error::Config("facial servo does not settle within 5 s".into()))?;
        let cycle = self.cycle_ns();
        Ok(t.div_ceil(cycle) * cycle)
    }

    pub fn delays(&self) -> Result<Delays> {
        let settle = self.motor_settle_ns()?;
        let audio = ms_to_ns(self.delays.audio_latency_ms);
        let camera = ms_to_ns(self.delays.camera_latency_ms);
        let aligned = yui_core::protocol::aligned_delay(&[audio, camera]);
        Ok(Delays {
            operator_audio_ns: settle.saturating_sub(audio),
            avatar_audio_ns: aligned - audio,
            camera_ns: aligned - camera,
            motor_settle_ns: settle,
            audio_latency_ns: audio,
            camera_latency_ns: camera,
        })
    }
}

impl Default for Config {
    fn default() -> Self {
        Config {
            bus: BusConfig::default(),
            servo: ServoSection::default(),
            rig: RigSection::default(),
            audio: AudioConfig::default(),
            ears: EarConfig::default(),
            eyes: EyeConfig::default(),
            camera: CameraConfig::default(),
            delays: DelayConfig::default(),
            mapping: MappingConfig::default(),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn empty_file_is_default() {
        let cfg: Config = toml::from_str("").unwrap();
        assert_eq!(cfg, Config::default());
        cfg.validate().unwrap();
    }

    #[test]
    fn default_round_trips_through_toml() {
        let cfg = Config::default();
        let back: Config = toml::from_str(&cfg.to_toml()).unwrap();
        assert_eq!(back, cfg);
    }

    #[test]
    fn overrides_apply() {
        let cfg: Config = toml::from_str(
            r#"
            [bus]
            cycle_ms = 20
            [[servo.motor]]
            id = 4
            kp = 2.5
            [[rig.motion_range]]
            id = 29
            min = -60.0
            max = 60.0
            "#,
        )
        .unwrap();
        cfg.validate().unwrap();
        let rig = cfg.rig().unwrap();
        assert_eq!(rig.motion(MotionId::new(29).unwrap()).max, 60.0);
        let s = cfg.servo_config(&rig, MotorId::new(4).unwrap());
        assert_eq!(s.gains.kp, 2.5);
        assert_eq!(s.gains.ki, NORMALIZED_GAINS.ki);
        assert_eq!(s.command_period_ns, 20_000_000);
    }

    #[test]
    fn rejects_bad_values() {
        for text in [
            "[bus]\ncycle_ms = 0",
            "[servo]\ncontrol_period_us = 20000",
            "[ears]\nrear_floor = 0.0",
            "[rig]\nau_priority = [3]",
            "[[servo.motor]]\nid = 40",
            "[bogus]\nx = 1",
        ] {
            let parsed: std::result::Result<Config, _> = toml::from_str(text);
            let ok = parsed.map(|c| c.validate().is_ok()).unwrap_or(false);
            assert!(!ok, "{text}");
        }
    }

    #[test]
    fn delays_align_to_the_slowest_stream() {
        let cfg = Config::default();
        let d = cfg.delays().unwrap();
        assert_eq!(d.camera_ns, 0);
        assert_eq!(d.avatar_audio_ns, 40_000_000);
        assert_eq!(d.operator_audio_ns, d.motor_settle_ns);
        assert!(d.motor_settle_ns > 0 && d.motor_settle_ns % cfg.cycle_ns() == 0);
    }
}
