use alloc::string::String;
use alloc::vec::Vec;
use core::fmt;

use crate::rig::MOTOR_COUNT;

/// The fixed set of bus topics.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Topic {
    /// Measured motor states, avatar to operator.
    JointStates,
    /// Motor goals, operator to avatar.
    JointTargets,
    /// Ear microphones, avatar to operator.
    AudioAvatar,
    /// Operator microphone, operator to avatar.
    AudioOperator,
    CameraLeft,
    CameraRight,
}

/// Payload layout carried by a topic.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Schema {
    Joints,
    Audio,
    Camera,
}

impl Topic {
    pub const ALL: [Topic; 6] = [
        Topic::JointStates,
        Topic::JointTargets,
        Topic::AudioAvatar,
        Topic::AudioOperator,
        Topic::CameraLeft,
        Topic::CameraRight,
    ];

    pub fn id(self) -> u8 {
        match self {
            Topic::JointStates => 1,
            Topic::JointTargets => 2,
            Topic::AudioAvatar => 3,
            Topic::AudioOperator => 4,
            Topic::CameraLeft => 5,
            Topic::CameraRight => 6,
        }
    }

    pub fn from_id(id: u8) -> Option<Topic> {
        Topic::ALL.into_iter().find(|t| t.id() == id)
    }

    pub fn name(self) -> &'static str {
        match self {
            Topic::JointStates => "joint_states",
            Topic::JointTargets => "joint_targets",
            Topic::AudioAvatar => "audio_avatar",
            Topic::AudioOperator => "audio_operator",
            Topic::CameraLeft => "camera_left",
            Topic::CameraRight => "camera_right",
        }
    }

    pub fn from_name(name: &str) -> Option<Topic> {
        Topic::ALL.into_iter().find(|t| t.name() == name)
    }

    pub fn schema(self) -> Schema {
        match self {
            Topic::JointStates | Topic::JointTargets => Schema::Joints,
            Topic::AudioAvatar | Topic::AudioOperator => Schema::Audio,
            Topic::CameraLeft | Topic::CameraRight => Schema::Camera,
        }
    }

    /// Joint topics must never drop messages.
    pub fn is_lossless(self) -> bool {
        self.schema() == Schema::Joints
    }
}

impl fmt::Display for Topic {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// One motor entry. On `joint_states` the effort field is the applied
/// input ratio; on `joint_targets` it is the input limit and `velocity` is
/// the requested ramp speed (0 lets the driver derive it from the cycle).
#[derive(Debug, Clone, PartialEq)]
pub struct JointState {
    pub name: String,
    pub position: f64,
    pub velocity: f64,
    pub effort: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct JointStateMsg {
    pub timestamp_ns: u64,
    pub joints: Vec<JointState>,
}

#[derive(Debug, Clone, PartialEq)]
pub enum SchemaError {
    WrongSchema { topic: Topic, found: Schema },
    JointCount(usize),
    NonFinite { joint: usize },
    Effort { joint: usize },
    OddSampleCount(usize),
    ValidFrames { valid: u32, frames: usize },
}

impl fmt::Display for SchemaError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            SchemaError::WrongSchema { topic, found } => {
                write!(f, "topic {topic} does not carry {found:?} payloads")
            }
            SchemaError::JointCount(n) => write!(f, "expected {MOTOR_COUNT} joints, got {n}"),
            SchemaError::NonFinite { joint } => write!(f, "joint {joint} has a non-finite value"),
            SchemaError::Effort { joint } => write!(f, "joint {joint} effort outside [0, 1]"),
            SchemaError::OddSampleCount(n) => write!(f, "{n} samples is not whole stereo frames"),
            SchemaError::ValidFrames { valid, frames } => {
                write!(f, "{valid} valid frames exceeds chunk size {frames}")
            }
        }
    }
}

impl core::error::Error for SchemaError {}

impl JointStateMsg {
    /// All 21 motors in id order with finite values and effort in `[0, 1]`.
    pub fn validate(&self) -> Result<(), SchemaError> {
        if self.joints.len() != MOTOR_COUNT {
            return Err(SchemaError::JointCount(self.joints.len()));
        }
        for (i, j) in self.joints.iter().enumerate() {
            if !(j.position.is_finite() && j.velocity.is_finite() && j.effort.is_finite()) {
                return Err(SchemaError::NonFinite { joint: i });
            }
            if !(0.0..=1.0).contains(&j.effort) {
                return Err(SchemaError::Effort { joint: i });
            }
        }
        Ok(())
    }

    pub fn positions(&self) -> impl Iterator<Item = f64> + '_ {
        self.joints.iter().map(|j| j.position)
    }
}

/// One bus cycle of interleaved stereo audio.
#[derive(Debug, Clone, PartialEq)]
pub struct AudioChunkMsg {
    pub sequence: u64,
    pub capture_ns: u64,
    pub sample_rate: u32,
    /// Frames carrying real audio; the rest of the chunk is zero padding.
    pub valid_frames: u32,
    /// Left/right interleaved.
    pub samples: Vec<f32>,
}

impl AudioChunkMsg {
    pub fn frames(&self) -> usize {
        self.samples.len() / 2
    }

    pub fn is_padded(&self) -> bool {
        (self.valid_frames as usize) < self.frames()
    }

    /// Samples excluding padding.
    pub fn valid_samples(&self) -> &[f32] {
        let n = (self.valid_frames as usize * 2).min(self.samples.len());
        &self.samples[..n]
    }

    pub fn validate(&self) -> Result<(), SchemaError> {
        if self.samples.len() % 2 != 0 {
            return Err(SchemaError::OddSampleCount(self.samples.len()));
        }
        if self.valid_frames as usize > self.frames() {
            return Err(SchemaError::ValidFrames {
                valid: self.valid_frames,
                frames: self.frames(),
            });
        }
        Ok(())
    }
}

/// A projected scene point in one eye image.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CameraPoint {
    pub id: u32,
    pub x: f64,
    pub y: f64,
}

/// Synthetic camera frame: the projections of tracked scene points.
#[derive(Debug, Clone, PartialEq)]
pub struct CameraFrameMsg {
    pub sequence: u64,
    pub capture_ns: u64,
    pub width: u16,
    pub height: u16,
    pub points: Vec<CameraPoint>,
}

#[derive(Debug, Clone, PartialEq)]
pub enum Message {
    Joints(JointStateMsg),
    Audio(AudioChunkMsg),
    Camera(CameraFrameMsg),
}

impl Message {
    pub fn schema(&self) -> Schema {
        match self {
            Message::Joints(_) => Schema::Joints,
            Message::Audio(_) => Schema::Audio,
            Message::Camera(_) => Schema::Camera,
        }
    }

    /// Capture or measurement time.
    pub fn timestamp_ns(&self) -> u64 {
        match self {
            Message::Joints(m) => m.timestamp_ns,
            Message::Audio(m) => m.capture_ns,
            Message::Camera(m) => m.capture_ns,
        }
    }

    /// Checks that the message fits `topic` and its schema invariants.
    pub fn validate_for(&self, topic: Topic) -> Result<(), SchemaError> {
        if self.schema() != topic.schema() {
            return Err(SchemaError::WrongSchema {
                topic,
                found: self.schema(),
            });
        }
        match self {
            Message::Joints(m) => m.validate(),
            Message::Audio(m) => m.validate(),
            Message::Camera(_) => Ok(()),
        }
    }
}
