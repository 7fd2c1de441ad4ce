use std::io;
use std::path::PathBuf;

use yui_core::expression::ExpressionError;
use yui_core::perception::PerceptionError;
use yui_core::protocol::{ChunkError, DecodeError, EncodeError, SchemaError};
use yui_core::rig::RigError;
use yui_core::servo::ServoError;

use crate::bus::BusError;

#[derive(Debug, thiserror::Error)]
pub enum Error {
    #[error("{path}: {source}")]
    Io { path: PathBuf, source: io::Error },
    #[error("io: {0}")]
    Net(#[from] io::Error),
    #[error("config: {0}")]
    Config(String),
    #[error("{path}:{line}: {msg}")]
    Parse { path: PathBuf, line: usize, msg: String },
    #[error("session {path} at byte {offset} (line {line}): {msg}")]
    Session { path: PathBuf, offset: u64, line: usize, msg: String },
    #[error("replay diverged at joint_states #{index} (t = {timestamp_ns} ns)")]
    ReplayMismatch { index: usize, timestamp_ns: u64 },
    #[error(transparent)]
    Servo(#[from] ServoError),
    #[error(transparent)]
    Rig(#[from] RigError),
    #[error(transparent)]
    Expression(#[from] ExpressionError),
    #[error(transparent)]
    Perception(#[from] PerceptionError),
    #[error(transparent)]
    Chunk(#[from] ChunkError),
    #[error(transparent)]
    Schema(#[from] SchemaError),
    #[error(transparent)]
    Encode(#[from] EncodeError),
    #[error(transparent)]
    Decode(#[from] DecodeError),
    #[error(transparent)]
    Bus(#[from] BusError),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;

impl Error {
    pub fn io(path: impl Into<PathBuf>, source: io::Error) -> Self {
        Error::Io {
            path: path.into(),
            source,
        }
    }
}
