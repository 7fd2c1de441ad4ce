use alloc::vec::Vec;
use core::fmt;

use super::message::AudioChunkMsg;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ChunkError {
    /// Cycle length of zero, or so short that a chunk holds no frame.
    EmptyChunk,
    /// Interleaved input with an odd number of samples.
    OddSampleCount(usize),
    /// Reassembly found `found` where `expected` was next.
    Gap { expected: u64, found: u64 },
}

impl fmt::Display for ChunkError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ChunkError::EmptyChunk => f.write_str("chunk would hold no frames"),
            ChunkError::OddSampleCount(n) => write!(f, "{n} samples is not whole stereo frames"),
            ChunkError::Gap { expected, found } => {
                write!(f, "sequence gap: expected {expected}, found {found}")
            }
        }
    }
}

impl core::error::Error for ChunkError {}

/// Stereo frames per chunk: `sample_rate · cycle_ms / 1000`, rounded down.
pub fn frames_per_chunk(sample_rate: u32, cycle_ms: u32) -> usize {
    (sample_rate as u64 * cycle_ms as u64 / 1000) as usize
}

/// Splits an interleaved stereo stream into one chunk per bus cycle.
#[derive(Debug, Clone)]
pub struct AudioChunker {
    sample_rate: u32,
    frames: usize,
    cycle_ns: u64,
    start_ns: u64,
    next_sequence: u64,
    pending: Vec<f32>,
}

impl AudioChunker {
    pub fn new(sample_rate: u32, cycle_ms: u32, start_ns: u64) -> Result<Self, ChunkError> {
        let frames = frames_per_chunk(sample_rate, cycle_ms);
        if frames == 0 {
            return Err(ChunkError::EmptyChunk);
        }
        Ok(AudioChunker {
            sample_rate,
            frames,
            cycle_ns: cycle_ms as u64 * 1_000_000,
            start_ns,
            next_sequence: 0,
            pending: Vec::new(),
        })
    }

    pub fn frames_per_chunk(&self) -> usize {
        self.frames
    }

    fn emit(&mut self, samples: Vec<f32>, valid_frames: usize) -> AudioChunkMsg {
        let seq = self.next_sequence;
        self.next_sequence += 1;
        AudioChunkMsg {
            sequence: seq,
            capture_ns: self.start_ns + seq * self.cycle_ns,
            sample_rate: self.sample_rate,
            valid_frames: valid_frames as u32,
            samples,
        }
    }

    /// Appends interleaved samples and returns every chunk now complete.
    pub fn push(&mut self, interleaved: &[f32]) -> Result<Vec<AudioChunkMsg>, ChunkError> {
        if interleaved.len() % 2 != 0 {
            return Err(ChunkError::OddSampleCount(interleaved.len()));
        }
        self.pending.extend_from_slice(interleaved);
        let per_chunk = self.frames * 2;
        let mut out = Vec::new();
        while self.pending.len() >= per_chunk {
            let rest = self.pending.split_off(per_chunk);
            let full = core::mem::replace(&mut self.pending, rest);
            out.push(self.emit(full, self.frames));
        }
        Ok(out)
    }

    /// Flushes buffered samples as a final zero-padded chunk, if any.
    pub fn finish(mut self) -> Option<AudioChunkMsg> {
        if self.pending.is_empty() {
            return None;
        }
        let valid = self.pending.len() / 2;
        let mut samples = core::mem::take(&mut self.pending);
        samples.resize(self.frames * 2, 0.0);
        Some(self.emit(samples, valid))
    }
}

/// Chunks a complete interleaved recording.
pub fn chunk_audio(
    interleaved: &[f32],
    sample_rate: u32,
    cycle_ms: u32,
    start_ns: u64,
) -> Result<Vec<AudioChunkMsg>, ChunkError> {
    let mut c = AudioChunker::new(sample_rate, cycle_ms, start_ns)?;
    let mut out = c.push(interleaved)?;
    out.extend(c.finish());
    Ok(out)
}

/// Concatenates the valid samples of consecutive chunks.
pub fn reassemble(chunks: &[AudioChunkMsg]) -> Result<Vec<f32>, ChunkError> {
    let mut out = Vec::new();
    let mut expected = chunks.first().map_or(0, |c| c.sequence);
    for c in chunks {
        if c.sequence != expected {
            return Err(ChunkError::Gap {
                expected,
                found: c.sequence,
            });
        }
        out.extend_from_slice(c.valid_samples());
        expected += 1;
    }
    Ok(out)
}

/// Tracks a received sequence: counts missing numbers and rejects anything
/// not newer than what was already accepted.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct SequenceTracker {
    next: Option<u64>,
    missing: u64,
    stale: u64,
}

impl SequenceTracker {
    pub fn new() -> Self {
        Self::default()
    }

    /// Returns `true` if `seq` is accepted.
    pub fn observe(&mut self, seq: u64) -> bool {
        match self.next {
            Some(next) if seq < next => {
                self.stale += 1;
                false
            }
            Some(next) => {
                self.missing += seq - next;
                self.next = Some(seq + 1);
                true
            }
            None => {
                self.next = Some(seq + 1);
                true
            }
        }
    }

    /// Sequence numbers skipped so far.
    pub fn missing(&self) -> u64 {
        self.missing
    }

    /// Duplicates or reordered arrivals that were rejected.
    pub fn stale(&self) -> u64 {
        self.stale
    }
}
