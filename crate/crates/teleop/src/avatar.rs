//! The avatar daemon: 21 simulated servos behind the rig, plus the ears and
//! eye cameras.

use log::{debug, warn};
use yui_core::perception::{ear_gains, project_stereo, EarPair, EyeGeometry, Point3, SoundSource};
use yui_core::protocol::{
    frames_per_chunk, AudioChunkMsg, CameraFrameMsg, CameraPoint, DelayBuffer, JointState,
    JointStateMsg, Message, Topic,
};
use yui_core::rig::{neck_forward, MotorId, NeckAngles, NeckPose, RigTable, EYE_PITCH};
use yui_core::servo::Servo;
use yui_core::MOTOR_COUNT;

use crate::bus::{Bus, Subscription};
use crate::config::Config;
use crate::error::Result;
use crate::scenario::ObjectPath;

/// Id of the scripted object in camera frames. Fixed landmarks use 1 and up.
pub const OBJECT_POINT_ID: u32 = 0;

/// A tone played from a fixed direction until `until_ns`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ToneSource {
    pub source: SoundSource,
    pub freq_hz: f64,
    pub amplitude: f32,
    pub until_ns: u64,
}

/// What the avatar can see and hear.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct World {
    pub tone: Option<ToneSource>,
    pub object: Option<ObjectPath>,
    pub landmarks: Vec<(u32, Point3)>,
}

impl World {
    /// A few fixed points in front of the head for stereo checks.
    pub fn with_landmarks() -> Self {
        World {
            landmarks: vec![
                (1, Point3::new(0.0, 0.0, 0.5)),
                (2, Point3::new(-0.3, 0.1, 1.0)),
                (3, Point3::new(0.4, -0.1, 2.0)),
                (4, Point3::new(0.0, 0.2, 5.0)),
            ],
            ..World::default()
        }
    }
}

/// Head orientation from the neck motor angles.
pub fn head_pose(angles: &[f64; MOTOR_COUNT]) -> NeckPose {
    neck_forward(NeckAngles {
        yaw: angles[18],
        left: angles[19],
        right: angles[20],
    })
}

/// World point expressed in the head frame (x right, y up, z forward).
pub fn world_to_head(p: Point3, head: NeckPose) -> Point3 {
    let (sy, cy) = head.yaw.to_radians().sin_cos();
    let (sp, cp) = head.pitch.to_radians().sin_cos();
    let (sr, cr) = head.roll.to_radians().sin_cos();
    let f = (sy * cp, sp, cy * cp);
    let r = (cy, 0.0, -sy);
    let u = (-sy * sp, cp, -cy * sp);
    // Positive roll tips the head towards the right shoulder.
    let r2 = (r.0 * cr - u.0 * sr, r.1 * cr - u.1 * sr, r.2 * cr - u.2 * sr);
    let u2 = (u.0 * cr + r.0 * sr, u.1 * cr + r.1 * sr, u.2 * cr + r.2 * sr);
    let dot = |a: (f64, f64, f64)| a.0 * p.x + a.1 * p.y + a.2 * p.z;
    Point3::new(dot(r2), dot(u2), dot(f))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub struct AvatarStats {
    pub cycles: u64,
    pub targets_received: u64,
    pub voice_chunks_played: u64,
    /// Largest `played - captured` seen for operator audio.
    pub voice_delay_ns: u64,
}

pub struct Avatar {
    rig: RigTable,
    servos: Vec<Servo>,
    ears: EarPair,
    eyes: EyeGeometry,
    sample_rate: u32,
    frames: usize,
    camera_period_ns: u64,
    next_camera_ns: u64,
    audio_seq: u64,
    camera_seq: u64,
    bus: Bus,
    inbox: Subscription,
    voice: DelayBuffer<AudioChunkMsg>,
    /// Captured sensor data waiting out the simulated capture latency.
    mic_out: DelayBuffer<AudioChunkMsg>,
    camera_out: DelayBuffer<(CameraFrameMsg, CameraFrameMsg)>,
    pub world: World,
    stats: AvatarStats,
}

impl Avatar {
    pub fn new(cfg: &Config, bus: Bus) -> Result<Self> {
        cfg.validate()?;
        let rig = cfg.rig()?;
        let servos = MotorId::all()
            .map(|m| Servo::new(cfg.servo_config(&rig, m), 0.0))
            .collect::<std::result::Result<Vec<_>, _>>()?;
        let inbox = bus.subscribe(&[Topic::JointTargets, Topic::AudioOperator]);
        let delays = cfg.delays()?;
        Ok(Avatar {
            servos,
            ears: cfg.ears(),
            eyes: cfg.eye_geometry(),
            sample_rate: cfg.audio.sample_rate,
            frames: frames_per_chunk(cfg.audio.sample_rate, cfg.bus.cycle_ms),
            camera_period_ns: (1e9 / cfg.camera.rate_hz).round() as u64,
            next_camera_ns: 0,
            audio_seq: 0,
            camera_seq: 0,
            voice: DelayBuffer::new(delays.operator_audio_ns),
            mic_out: DelayBuffer::new(delays.audio_latency_ns),
            camera_out: DelayBuffer::new(delays.camera_latency_ns),
            bus,
            inbox,
            rig,
            world: World::with_landmarks(),
            stats: AvatarStats::default(),
        })
    }

    pub fn rig(&self) -> &RigTable {
        &self.rig
    }

    pub fn stats(&self) -> AvatarStats {
        self.stats
    }

    pub fn angles(&self) -> [f64; MOTOR_COUNT] {
        std::array::from_fn(|i| self.servos[i].state().angle)
    }

    pub fn joint_states(&self, now_ns: u64) -> JointStateMsg {
        JointStateMsg {
            timestamp_ns: now_ns,
            joints: self
                .rig
                .motors()
                .iter()
                .zip(&self.servos)
                .map(|(m, s)| JointState {
                    name: m.name.clone(),
                    position: s.state().angle,
                    velocity: s.state().angular_velocity,
                    effort: s.state().input_ratio,
                })
                .collect(),
        }
    }

    /// One communication cycle at `now_ns`: bring the servos up to date,
    /// publish what the head measures, then latch newly arrived targets.
    pub fn step(&mut self, now_ns: u64) -> Result<()> {
        for s in &mut self.servos {
            s.advance_to(now_ns)?;
        }
        self.bus
            .publish(Topic::JointStates, Message::Joints(self.joint_states(now_ns)))?;
        let chunk = self.render_audio(now_ns);
        self.mic_out.push(now_ns, chunk);
        if now_ns >= self.next_camera_ns {
            let frames = self.render_cameras(now_ns);
            self.camera_out.push(now_ns, frames);
            self.next_camera_ns += self.camera_period_ns;
        }
        for (_, chunk) in self.mic_out.release(now_ns) {
            self.bus.publish(Topic::AudioAvatar, Message::Audio(chunk))?;
        }
        for (_, (l, r)) in self.camera_out.release(now_ns) {
            self.bus.publish(Topic::CameraLeft, Message::Camera(l))?;
            self.bus.publish(Topic::CameraRight, Message::Camera(r))?;
        }
        for (topic, msg) in self.inbox.drain() {
            match (topic, msg) {
                (Topic::JointTargets, Message::Joints(t)) => self.latch(&t, now_ns)?,
                (Topic::AudioOperator, Message::Audio(a)) => self.voice.push(a.capture_ns, a),
                (t, _) => debug!("avatar ignores {t}"),
            }
        }
        for (captured, _) in self.voice.release(now_ns) {
            self.stats.voice_chunks_played += 1;
            self.stats.voice_delay_ns = self.stats.voice_delay_ns.max(now_ns - captured);
        }
        self.stats.cycles += 1;
        Ok(())
    }

    fn latch(&mut self, targets: &JointStateMsg, now_ns: u64) -> Result<()> {
        if let Err(e) = targets.validate() {
            warn!("dropping joint targets: {e}");
            return Ok(());
        }
        for ((servo, spec), j) in self.servos.iter_mut().zip(self.rig.motors()).zip(&targets.joints) {
            let goal = j.position.clamp(spec.min, spec.max);
            servo.command_with_limit(goal, j.effort, now_ns)?;
        }
        self.stats.targets_received += 1;
        Ok(())
    }

    fn render_audio(&mut self, now_ns: u64) -> AudioChunkMsg {
        let mut samples = vec![0.0f32; self.frames * 2];
        if let Some(tone) = self.world.tone.filter(|t| now_ns < t.until_ns) {
            let yaw = head_pose(&self.angles()).yaw;
            let (gl, gr) = ear_gains(&tone.source, yaw, &self.ears);
            let first = self.audio_seq * self.frames as u64;
            let w = 2.0 * std::f64::consts::PI * tone.freq_hz / self.sample_rate as f64;
            for i in 0..self.frames {
                let s = tone.amplitude as f64 * (w * (first + i as u64) as f64).sin();
                samples[2 * i] = (s * gl) as f32;
                samples[2 * i + 1] = (s * gr) as f32;
            }
        }
        let chunk = AudioChunkMsg {
            sequence: self.audio_seq,
            capture_ns: now_ns,
            sample_rate: self.sample_rate,
            valid_frames: self.frames as u32,
            samples,
        };
        self.audio_seq += 1;
        chunk
    }

    /// Current eye geometry from motors 1-3, clamped into the camera model.
    pub fn eye_geometry(&self) -> EyeGeometry {
        let a = self.angles();
        let pitch = self.rig.motion(EYE_PITCH);
        EyeGeometry {
            left_yaw_deg: a[0].clamp(-35.0, 35.0),
            right_yaw_deg: a[1].clamp(-35.0, 35.0),
            pitch_deg: a[2].clamp(pitch.min.max(-14.0), pitch.max.min(8.0)),
            ..self.eyes
        }
    }

    fn render_cameras(&mut self, now_ns: u64) -> (CameraFrameMsg, CameraFrameMsg) {
        let head = head_pose(&self.angles());
        let geom = self.eye_geometry();
        let mut points: Vec<(u32, Point3)> = self.world.landmarks.clone();
        if let Some(obj) = &self.world.object {
            points.insert(0, (OBJECT_POINT_ID, obj.at(now_ns)));
        }
        let frame = |pts: Vec<CameraPoint>| CameraFrameMsg {
            sequence: self.camera_seq,
            capture_ns: now_ns,
            width: geom.width.min(u16::MAX as u32) as u16,
            height: geom.height.min(u16::MAX as u32) as u16,
            points: pts,
        };
        let (mut left, mut right) = (Vec::new(), Vec::new());
        for (id, p) in points {
            // Points behind either eye are simply not seen.
            if let Ok(proj) = project_stereo(world_to_head(p, head), &geom) {
                left.push(CameraPoint {
                    id,
                    x: proj.left.x,
                    y: proj.left.y,
                });
                right.push(CameraPoint {
                    id,
                    x: proj.right.x,
                    y: proj.right.y,
                });
            }
        }
        let out = (frame(left), frame(right));
        self.camera_seq += 1;
        out
    }
}
