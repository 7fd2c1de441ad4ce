//! Avatar/operator messaging: topics, message schemas, the binary frame
//! codec, audio chunking and playback delay buffers.
//!
//! Frame layout, all integers little-endian:
//!
//! ```text
//! magic "YU" (2) | version (1) | topic id (1) | payload length (4) | payload | CRC-32 (4)
//! ```
//!
//! The CRC covers every byte before it. Timestamps are nanoseconds since
//! session start.

mod chunk;
mod delay;
mod message;
mod wire;

pub use chunk::{chunk_audio, frames_per_chunk, reassemble, AudioChunker, ChunkError, SequenceTracker};
pub use delay::{aligned_delay, DelayBuffer};
pub use message::{
    AudioChunkMsg, CameraFrameMsg, CameraPoint, JointState, JointStateMsg, Message, Schema,
    SchemaError, Topic,
};
pub use wire::{
    decode, decode_as, encode, frame_length, DecodeError, DecodeErrorKind, EncodeError, HEADER_LEN,
    MAGIC, MAX_PAYLOAD, TRAILER_LEN, VERSION,
};
