//! The operator daemon: turns scripted or live input into joint targets and
//! presents what the avatar senses with aligned delays.

use log::{debug, warn};
use yui_core::expression::{
    map_expression, resolve_au_conflicts, AuFrame, AuId, AuPriority, AuTable, ChannelRegistry,
    Emotion, ExpressionVector, MappingParams,
};
use yui_core::gaze::{gaze_allocate, GazeAllocation};
use yui_core::perception::{position_azimuth, SoundSource};
use yui_core::protocol::{
    frames_per_chunk, AudioChunkMsg, CameraFrameMsg, DelayBuffer, JointState, JointStateMsg,
    Message, SequenceTracker, Topic,
};
use yui_core::rig::{
    ConflictPolicy, MotionId, MotionTargetSet, MotorTargets, NeckPose, RigTable, EYE_LEFT_YAW,
    EYE_PITCH, EYE_RIGHT_YAW, NECK_PITCH, NECK_ROLL, NECK_YAW,
};
use yui_core::{MotorId, MOTOR_COUNT};

use crate::avatar::{ToneSource, World, OBJECT_POINT_ID};
use crate::bus::{Bus, Subscription};
use crate::config::Config;
use crate::error::{Error, Result};
use crate::scenario::{Event, ObjectPath};
use crate::tables::PresetTable;

/// A `joint_targets` message: positions from `targets`, zero velocity so
/// the avatar ramps over one cycle, effort carrying the input limits.
pub fn targets_message(
    rig: &RigTable,
    targets: &MotorTargets,
    limits: &[f64; MOTOR_COUNT],
    timestamp_ns: u64,
) -> JointStateMsg {
    JointStateMsg {
        timestamp_ns,
        joints: rig
            .motors()
            .iter()
            .map(|m| JointState {
                name: m.name.clone(),
                position: targets.get(m.id),
                velocity: 0.0,
                effort: limits[m.id.index()],
            })
            .collect(),
    }
}

/// End-to-end latency seen for one presented stream.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub struct StreamLatency {
    pub count: u64,
    pub min_ns: u64,
    pub max_ns: u64,
}

impl StreamLatency {
    fn record(&mut self, latency_ns: u64) {
        if self.count == 0 {
            self.min_ns = latency_ns;
            self.max_ns = latency_ns;
        } else {
            self.min_ns = self.min_ns.min(latency_ns);
            self.max_ns = self.max_ns.max(latency_ns);
        }
        self.count += 1;
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub struct OperatorStats {
    pub targets_sent: u64,
    pub rejected_frames: u64,
    pub audio: StreamLatency,
    pub camera: StreamLatency,
    pub audio_missing: u64,
    pub camera_missing: u64,
}

/// One world change requested by a scenario, for the simulated avatar
/// surroundings.
#[derive(Debug, Clone, PartialEq)]
pub enum WorldChange {
    Tone(ToneSource),
    Object(ObjectPath),
}

pub struct Operator {
    rig: RigTable,
    au_table: AuTable,
    priority: AuPriority,
    policy: ConflictPolicy,
    presets: PresetTable,
    registry: ChannelRegistry,
    params: MappingParams,
    limits: [f64; MOTOR_COUNT],
    audio_distance_m: f64,
    default_tone_hz: f64,
    tone_amplitude: f32,
    sample_rate: u32,
    frames: usize,

    face: MotionTargetSet,
    overlay: MotionTargetSet,
    neck: Option<NeckPose>,
    eyes: Option<[f64; 3]>,
    gaze: Option<GazeAllocation>,
    follow: Option<ObjectPath>,
    expression: Option<ExpressionVector>,
    last: MotorTargets,
    speak: Option<(u64, f64)>,
    mic_seq: u64,

    bus: Bus,
    inbox: Subscription,
    audio_in: DelayBuffer<AudioChunkMsg>,
    camera_in: DelayBuffer<CameraFrameMsg>,
    audio_seq: SequenceTracker,
    camera_seq: SequenceTracker,
    latest_state: Option<JointStateMsg>,
    latest_object: Option<(f64, f64)>,
    stats: OperatorStats,
}

impl Operator {
    pub fn new(cfg: &Config, bus: Bus) -> Result<Self> {
        Self::with_params(cfg, bus, None)
    }

    /// `params` replaces the configured or hand-derived expression map.
    pub fn with_params(cfg: &Config, bus: Bus, params: Option<MappingParams>) -> Result<Self> {
        cfg.validate()?;
        let rig = cfg.rig()?;
        let au_table = AuTable::default();
        let registry = ChannelRegistry::default();
        let params = match params {
            Some(p) => Some(p),
            None => cfg
                .mapping
                .params_file
                .as_ref()
                .map(|f| crate::calib::load_params(std::path::Path::new(f)))
                .transpose()?,
        };
        let mut params = params.unwrap_or_else(|| MappingParams::from_rig(&rig, &au_table, &registry));
        params.gain = cfg.mapping.gain;
        let limits = std::array::from_fn(|i| {
            cfg.servo_config(&rig, MotorId::new(i as u8 + 1).expect("motor index"))
                .input_limit
        });
        let delays = cfg.delays()?;
        let inbox = bus.subscribe(&[
            Topic::JointStates,
            Topic::AudioAvatar,
            Topic::CameraLeft,
            Topic::CameraRight,
        ]);
        Ok(Operator {
            au_table,
            priority: cfg.au_priority(),
            policy: cfg.policy(),
            presets: PresetTable::default(),
            registry,
            params,
            limits,
            audio_distance_m: cfg.audio.source_distance_m,
            default_tone_hz: cfg.audio.tone_hz,
            tone_amplitude: cfg.audio.amplitude,
            sample_rate: cfg.audio.sample_rate,
            frames: frames_per_chunk(cfg.audio.sample_rate, cfg.bus.cycle_ms),
            face: MotionTargetSet::new(),
            overlay: MotionTargetSet::new(),
            neck: None,
            eyes: None,
            gaze: None,
            follow: None,
            expression: None,
            last: MotorTargets::neutral(),
            speak: None,
            mic_seq: 0,
            bus,
            inbox,
            audio_in: DelayBuffer::new(delays.avatar_audio_ns),
            camera_in: DelayBuffer::new(delays.camera_ns),
            audio_seq: SequenceTracker::new(),
            camera_seq: SequenceTracker::new(),
            latest_state: None,
            latest_object: None,
            stats: OperatorStats::default(),
            rig,
        })
    }

    pub fn rig(&self) -> &RigTable {
        &self.rig
    }

    pub fn stats(&self) -> OperatorStats {
        self.stats
    }

    pub fn limits(&self) -> &[f64; MOTOR_COUNT] {
        &self.limits
    }

    /// Last joint states received from the avatar.
    pub fn latest_state(&self) -> Option<&JointStateMsg> {
        self.latest_state.as_ref()
    }

    /// Direction of the tracked object in the most recent presented left
    /// camera frame, in image coordinates.
    pub fn latest_object(&self) -> Option<(f64, f64)> {
        self.latest_object
    }

    pub fn set_presets(&mut self, presets: PresetTable) {
        self.presets = presets;
    }

    /// Applies one input event. World events are returned for the caller to
    /// hand to the avatar side.
    pub fn apply(&mut self, event: &Event, now_ns: u64) -> Result<Option<WorldChange>> {
        match event {
            Event::SetEmotion { name, intensity } => {
                let emotion: Emotion = name.parse()?;
                let k = intensity.clamp(0.0, 1.0);
                self.face = self
                    .presets
                    .get(emotion)
                    .iter()
                    .map(|(m, v)| (m, v * k))
                    .collect();
            }
            Event::SetAu { aus } => {
                let mut frame = AuFrame::new();
                for (k, v) in aus {
                    let id: u8 = k
                        .trim_start_matches("au")
                        .parse()
                        .map_err(|_| Error::Config(format!("bad AU key {k:?}")))?;
                    frame.set(AuId::new(id)?, *v)?;
                }
                let frame = resolve_au_conflicts(&frame, &self.au_table, &self.rig, &self.priority);
                self.face = self.au_table.au_to_motions(&frame);
            }
            Event::SetMotions { motions } => {
                for (k, v) in motions {
                    let id = k
                        .parse()
                        .ok()
                        .and_then(MotionId::new)
                        .ok_or_else(|| Error::Config(format!("bad motion key {k:?}")))?;
                    self.overlay.insert(id, *v);
                }
            }
            Event::SetExpression { values } => {
                let named: Vec<(&str, f64)> = values.iter().map(|(k, v)| (k.as_str(), *v)).collect();
                self.expression = Some(ExpressionVector::from_named(&self.registry, &named)?);
            }
            Event::SetNeck { yaw, pitch, roll } => {
                self.neck = Some(NeckPose {
                    yaw: *yaw,
                    pitch: *pitch,
                    roll: *roll,
                });
                self.gaze = None;
                self.follow = None;
            }
            Event::SetEyes {
                left_yaw,
                right_yaw,
                pitch,
            } => {
                self.eyes = Some([*left_yaw, *right_yaw, *pitch]);
                self.gaze = None;
                self.follow = None;
            }
            Event::Gaze { azimuth, elevation } => {
                self.gaze = Some(gaze_allocate(*azimuth, *elevation));
                self.follow = None;
            }
            Event::PlayTone {
                position,
                duration_ms,
                freq_hz,
            } => {
                let source = SoundSource::new(position_azimuth(*position), self.audio_distance_m)?;
                return Ok(Some(WorldChange::Tone(ToneSource {
                    source,
                    freq_hz: freq_hz.unwrap_or(self.default_tone_hz),
                    amplitude: self.tone_amplitude,
                    until_ns: now_ns + duration_ms * 1_000_000,
                })));
            }
            Event::MoveObject { path, follow } => {
                let p = ObjectPath::new(now_ns, path);
                if *follow {
                    self.follow = Some(p.clone());
                    self.gaze = None;
                }
                return Ok(Some(WorldChange::Object(p)));
            }
            Event::Speak {
                duration_ms,
                freq_hz,
            } => {
                self.speak = Some((
                    now_ns + duration_ms * 1_000_000,
                    freq_hz.unwrap_or(self.default_tone_hz),
                ));
            }
            Event::Clear => {
                self.face = MotionTargetSet::new();
                self.overlay = MotionTargetSet::new();
                self.expression = None;
                self.neck = None;
                self.eyes = None;
                self.gaze = None;
                self.follow = None;
            }
            Event::End => {}
        }
        Ok(None)
    }

    fn gaze_at(&self, now_ns: u64) -> Option<GazeAllocation> {
        if let Some(path) = &self.follow {
            let (az, el) = path.at(now_ns).direction_deg();
            return Some(gaze_allocate(az, el));
        }
        self.gaze
    }

    /// Motor targets for `now_ns`. A frame the strict policy rejects keeps
    /// the previous targets.
    pub fn targets(&mut self, now_ns: u64) -> MotorTargets {
        let mut set = self.face.clone();
        set.extend(&self.overlay);
        let mut eyes = self.eyes;
        let mut neck = self.neck;
        if let Some(g) = self.gaze_at(now_ns) {
            eyes = Some([g.eye_left_yaw, g.eye_right_yaw, g.eye_pitch]);
            neck = Some(g.neck);
        }
        if let Some([l, r, p]) = eyes {
            set.insert(EYE_LEFT_YAW, l);
            set.insert(EYE_RIGHT_YAW, r);
            set.insert(EYE_PITCH, p);
        }
        if let Some(n) = neck {
            set.insert(NECK_YAW, n.yaw);
            set.insert(NECK_PITCH, n.pitch);
            set.insert(NECK_ROLL, n.roll);
        }
        let compiled = match &self.expression {
            Some(f) => map_expression(f, &self.params, &self.rig).map_err(Error::from).and_then(|mut out| {
                // Eye and neck layers still apply on top of the expression map.
                let head = self.rig.motions_to_motor_targets(&set, ConflictPolicy::Net)?;
                for i in [0usize, 1, 2, 18, 19, 20] {
                    if eyes.is_some() && i < 3 || neck.is_some() && i >= 18 {
                        out.0[i] = head.0[i];
                    }
                }
                Ok(out)
            }),
            None => self
                .rig
                .motions_to_motor_targets(&set, self.policy)
                .map_err(Error::from),
        };
        match compiled {
            Ok(t) => self.last = t,
            Err(e) => warn!("keeping previous targets: {e}"),
        }
        self.last
    }

    /// One communication cycle: take in what the avatar sent, present what
    /// is due, publish new targets and the operator microphone.
    pub fn step(&mut self, now_ns: u64) -> Result<()> {
        for (topic, msg) in self.inbox.drain() {
            match (topic, msg) {
                (Topic::JointStates, Message::Joints(j)) => self.latest_state = Some(j),
                (Topic::AudioAvatar, Message::Audio(a)) => {
                    if self.audio_seq.observe(a.sequence) {
                        self.audio_in.push(a.capture_ns, a);
                    }
                }
                (Topic::CameraLeft, Message::Camera(c)) => {
                    if self.camera_seq.observe(c.sequence) {
                        self.camera_in.push(c.capture_ns, c);
                    }
                }
                (Topic::CameraRight, Message::Camera(_)) => {}
                (t, _) => {
                    debug!("operator ignores {t}");
                    self.stats.rejected_frames += 1;
                }
            }
        }
        for (captured, _) in self.audio_in.release(now_ns) {
            self.stats.audio.record(now_ns - captured);
        }
        for (captured, frame) in self.camera_in.release(now_ns) {
            self.stats.camera.record(now_ns - captured);
            self.latest_object = frame
                .points
                .iter()
                .find(|p| p.id == OBJECT_POINT_ID)
                .map(|p| (p.x, p.y));
        }
        self.stats.audio_missing = self.audio_seq.missing();
        self.stats.camera_missing = self.camera_seq.missing();

        let targets = self.targets(now_ns);
        let msg = targets_message(&self.rig, &targets, &self.limits, now_ns);
        self.bus.publish(Topic::JointTargets, Message::Joints(msg))?;
        self.stats.targets_sent += 1;

        let chunk = self.microphone(now_ns);
        self.bus.publish(Topic::AudioOperator, Message::Audio(chunk))?;
        Ok(())
    }

    fn microphone(&mut self, now_ns: u64) -> AudioChunkMsg {
        let mut samples = vec![0.0f32; self.frames * 2];
        if let Some((until, freq)) = self.speak {
            if now_ns < until {
                let first = self.mic_seq * self.frames as u64;
                let w = 2.0 * std::f64::consts::PI * freq / self.sample_rate as f64;
                for i in 0..self.frames {
                    let s = (self.tone_amplitude as f64 * (w * (first + i as u64) as f64).sin()) as f32;
                    samples[2 * i] = s;
                    samples[2 * i + 1] = s;
                }
            } else {
                self.speak = None;
            }
        }
        let chunk = AudioChunkMsg {
            sequence: self.mic_seq,
            capture_ns: now_ns,
            sample_rate: self.sample_rate,
            valid_frames: self.frames as u32,
            samples,
        };
        self.mic_seq += 1;
        chunk
    }
}

/// Applies a world change to the simulated surroundings.
pub fn apply_world(world: &mut World, change: WorldChange) {
    match change {
        WorldChange::Tone(t) => world.tone = Some(t),
        WorldChange::Object(p) => world.object = Some(p),
    }
}
