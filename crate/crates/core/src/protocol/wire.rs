use alloc::string::String;
use alloc::vec::Vec;
use core::fmt;

use super::message::{
    AudioChunkMsg, CameraFrameMsg, CameraPoint, JointState, JointStateMsg, Message, Schema, Topic,
};

pub const MAGIC: [u8; 2] = *b"YU";
pub const VERSION: u8 = 1;
pub const HEADER_LEN: usize = 8;
pub const TRAILER_LEN: usize = 4;
/// Largest payload accepted by the decoder.
pub const MAX_PAYLOAD: usize = 16 * 1024 * 1024;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum DecodeErrorKind {
    /// Input ended; `needed` more bytes were expected.
    Truncated { needed: usize },
    BadMagic,
    UnsupportedVersion(u8),
    UnknownTopic(u8),
    EmptyPayload,
    PayloadTooLarge(usize),
    Checksum { expected: u32, found: u32 },
    /// Bytes left over after the frame or inside the payload.
    TrailingBytes,
    /// A field inside the payload is invalid.
    Malformed(&'static str),
    WrongTopic { expected: Topic, found: Topic },
}

/// Decode failure at byte `offset` of the input.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct DecodeError {
    pub offset: usize,
    pub kind: DecodeErrorKind,
}

impl fmt::Display for DecodeError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "decode error at byte {}: ", self.offset)?;
        match self.kind {
            DecodeErrorKind::Truncated { needed } => write!(f, "truncated, {needed} more bytes needed"),
            DecodeErrorKind::BadMagic => f.write_str("bad magic"),
            DecodeErrorKind::UnsupportedVersion(v) => write!(f, "unsupported version {v}"),
            DecodeErrorKind::UnknownTopic(t) => write!(f, "unknown topic id {t}"),
            DecodeErrorKind::EmptyPayload => f.write_str("empty payload"),
            DecodeErrorKind::PayloadTooLarge(n) => write!(f, "payload of {n} bytes is too large"),
            DecodeErrorKind::Checksum { expected, found } => {
                write!(f, "checksum mismatch: frame says {expected:#010x}, computed {found:#010x}")
            }
            DecodeErrorKind::TrailingBytes => f.write_str("trailing bytes"),
            DecodeErrorKind::Malformed(what) => write!(f, "malformed {what}"),
            DecodeErrorKind::WrongTopic { expected, found } => {
                write!(f, "expected topic {expected}, found {found}")
            }
        }
    }
}

impl core::error::Error for DecodeError {}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum EncodeError {
    WrongSchema { topic: Topic, found: Schema },
    /// A joint name longer than 255 bytes or a count that does not fit.
    FieldTooLarge(&'static str),
}

impl fmt::Display for EncodeError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            EncodeError::WrongSchema { topic, found } => {
                write!(f, "topic {topic} does not carry {found:?} payloads")
            }
            EncodeError::FieldTooLarge(what) => write!(f, "{what} too large to encode"),
        }
    }
}

impl core::error::Error for EncodeError {}

fn put_u16(out: &mut Vec<u8>, v: u16) {
    out.extend_from_slice(&v.to_le_bytes());
}

fn put_u32(out: &mut Vec<u8>, v: u32) {
    out.extend_from_slice(&v.to_le_bytes());
}

fn put_u64(out: &mut Vec<u8>, v: u64) {
    out.extend_from_slice(&v.to_le_bytes());
}

fn put_f64(out: &mut Vec<u8>, v: f64) {
    out.extend_from_slice(&v.to_le_bytes());
}

fn encode_payload(msg: &Message, out: &mut Vec<u8>) -> Result<(), EncodeError> {
    match msg {
        Message::Joints(m) => {
            put_u64(out, m.timestamp_ns);
            let count = u16::try_from(m.joints.len()).map_err(|_| EncodeError::FieldTooLarge("joint count"))?;
            put_u16(out, count);
            for j in &m.joints {
                let name = j.name.as_bytes();
                let len = u8::try_from(name.len()).map_err(|_| EncodeError::FieldTooLarge("joint name"))?;
                out.push(len);
                out.extend_from_slice(name);
                put_f64(out, j.position);
                put_f64(out, j.velocity);
                put_f64(out, j.effort);
            }
        }
        Message::Audio(m) => {
            put_u64(out, m.sequence);
            put_u64(out, m.capture_ns);
            put_u32(out, m.sample_rate);
            put_u32(out, m.valid_frames);
            let count = u32::try_from(m.samples.len()).map_err(|_| EncodeError::FieldTooLarge("sample count"))?;
            put_u32(out, count);
            for s in &m.samples {
                out.extend_from_slice(&s.to_le_bytes());
            }
        }
        Message::Camera(m) => {
            put_u64(out, m.sequence);
            put_u64(out, m.capture_ns);
            put_u16(out, m.width);
            put_u16(out, m.height);
            let count = u32::try_from(m.points.len()).map_err(|_| EncodeError::FieldTooLarge("point count"))?;
            put_u32(out, count);
            for p in &m.points {
                put_u32(out, p.id);
                put_f64(out, p.x);
                put_f64(out, p.y);
            }
        }
    }
    Ok(())
}

/// Encodes `msg` as one frame on `topic`.
pub fn encode(topic: Topic, msg: &Message) -> Result<Vec<u8>, EncodeError> {
    if msg.schema() != topic.schema() {
        return Err(EncodeError::WrongSchema {
            topic,
            found: msg.schema(),
        });
    }
    let mut out = Vec::with_capacity(64);
    out.extend_from_slice(&MAGIC);
    out.push(VERSION);
    out.push(topic.id());
    put_u32(&mut out, 0);
    encode_payload(msg, &mut out)?;
    let len = out.len() - HEADER_LEN;
    if len > MAX_PAYLOAD {
        return Err(EncodeError::FieldTooLarge("payload"));
    }
    out[4..8].copy_from_slice(&(len as u32).to_le_bytes());
    let crc = crc32fast::hash(&out);
    put_u32(&mut out, crc);
    Ok(out)
}

/// Total length of the frame starting at `buf`, once its header is in.
///
/// Returns `Ok(None)` while fewer than [`HEADER_LEN`] bytes are available.
/// Header errors are reported as soon as they are visible, which lets a
/// stream reader fail fast on garbage.
pub fn frame_length(buf: &[u8]) -> Result<Option<usize>, DecodeError> {
    let err = |offset, kind| Err(DecodeError { offset, kind });
    for (i, m) in MAGIC.iter().enumerate() {
        match buf.get(i) {
            Some(b) if b != m => return err(0, DecodeErrorKind::BadMagic),
            None => return Ok(None),
            _ => {}
        }
    }
    match buf.get(2) {
        Some(&v) if v != VERSION => return err(2, DecodeErrorKind::UnsupportedVersion(v)),
        None => return Ok(None),
        _ => {}
    }
    match buf.get(3) {
        Some(&t) if Topic::from_id(t).is_none() => return err(3, DecodeErrorKind::UnknownTopic(t)),
        None => return Ok(None),
        _ => {}
    }
    if buf.len() < HEADER_LEN {
        return Ok(None);
    }
    let len = u32::from_le_bytes([buf[4], buf[5], buf[6], buf[7]]) as usize;
    if len == 0 {
        return err(4, DecodeErrorKind::EmptyPayload);
    }
    if len > MAX_PAYLOAD {
        return err(4, DecodeErrorKind::PayloadTooLarge(len));
    }
    Ok(Some(HEADER_LEN + len + TRAILER_LEN))
}

struct Reader<'a> {
    buf: &'a [u8],
    pos: usize,
    // Offset of `buf[0]` in the original input, for error reporting.
    base: usize,
}

impl<'a> Reader<'a> {
    fn err(&self, kind: DecodeErrorKind) -> DecodeError {
        DecodeError {
            offset: self.base + self.pos,
            kind,
        }
    }

    fn take(&mut self, n: usize) -> Result<&'a [u8], DecodeError> {
        let end = self.pos.checked_add(n).filter(|&e| e <= self.buf.len());
        match end {
            Some(end) => {
                let s = &self.buf[self.pos..end];
                self.pos = end;
                Ok(s)
            }
            None => Err(self.err(DecodeErrorKind::Truncated {
                needed: n - (self.buf.len() - self.pos),
            })),
        }
    }

    fn u8(&mut self) -> Result<u8, DecodeError> {
        Ok(self.take(1)?[0])
    }

    fn u16(&mut self) -> Result<u16, DecodeError> {
        let b = self.take(2)?;
        Ok(u16::from_le_bytes([b[0], b[1]]))
    }

    fn u32(&mut self) -> Result<u32, DecodeError> {
        let b = self.take(4)?;
        Ok(u32::from_le_bytes([b[0], b[1], b[2], b[3]]))
    }

    fn u64(&mut self) -> Result<u64, DecodeError> {
        let mut a = [0u8; 8];
        a.copy_from_slice(self.take(8)?);
        Ok(u64::from_le_bytes(a))
    }

    fn f64(&mut self) -> Result<f64, DecodeError> {
        Ok(f64::from_bits(self.u64()?))
    }

    fn f32(&mut self) -> Result<f32, DecodeError> {
        Ok(f32::from_bits(self.u32()?))
    }

    fn remaining(&self) -> usize {
        self.buf.len() - self.pos
    }

    /// Fails before allocating if `count` items of `size` cannot fit.
    fn check_count(&self, count: usize, size: usize) -> Result<(), DecodeError> {
        match count.checked_mul(size) {
            Some(total) if total <= self.remaining() => Ok(()),
            _ => Err(self.err(DecodeErrorKind::Malformed("element count exceeds payload"))),
        }
    }
}

fn decode_payload(schema: Schema, r: &mut Reader<'_>) -> Result<Message, DecodeError> {
    let msg = match schema {
        Schema::Joints => {
            let timestamp_ns = r.u64()?;
            let count = r.u16()? as usize;
            // name length byte + three f64s
            r.check_count(count, 25)?;
            let mut joints = Vec::with_capacity(count);
            for _ in 0..count {
                let len = r.u8()? as usize;
                let at = r.pos;
                let raw = r.take(len)?;
                let name = core::str::from_utf8(raw).map_err(|_| DecodeError {
                    offset: r.base + at,
                    kind: DecodeErrorKind::Malformed("joint name is not UTF-8"),
                })?;
                joints.push(JointState {
                    name: String::from(name),
                    position: r.f64()?,
                    velocity: r.f64()?,
                    effort: r.f64()?,
                });
            }
            Message::Joints(JointStateMsg {
                timestamp_ns,
                joints,
            })
        }
        Schema::Audio => {
            let sequence = r.u64()?;
            let capture_ns = r.u64()?;
            let sample_rate = r.u32()?;
            let valid_frames = r.u32()?;
            let count = r.u32()? as usize;
            if count % 2 != 0 {
                return Err(r.err(DecodeErrorKind::Malformed("odd stereo sample count")));
            }
            if valid_frames as usize > count / 2 {
                return Err(r.err(DecodeErrorKind::Malformed("valid frames exceed chunk")));
            }
            r.check_count(count, 4)?;
            let mut samples = Vec::with_capacity(count);
            for _ in 0..count {
                samples.push(r.f32()?);
            }
            Message::Audio(AudioChunkMsg {
                sequence,
                capture_ns,
                sample_rate,
                valid_frames,
                samples,
            })
        }
        Schema::Camera => {
            let sequence = r.u64()?;
            let capture_ns = r.u64()?;
            let width = r.u16()?;
            let height = r.u16()?;
            let count = r.u32()? as usize;
            r.check_count(count, 20)?;
            let mut points = Vec::with_capacity(count);
            for _ in 0..count {
                points.push(CameraPoint {
                    id: r.u32()?,
                    x: r.f64()?,
                    y: r.f64()?,
                });
            }
            Message::Camera(CameraFrameMsg {
                sequence,
                capture_ns,
                width,
                height,
                points,
            })
        }
    };
    if r.remaining() != 0 {
        return Err(r.err(DecodeErrorKind::TrailingBytes));
    }
    Ok(msg)
}

/// Decodes exactly one frame.
pub fn decode(bytes: &[u8]) -> Result<(Topic, Message), DecodeError> {
    let total = match frame_length(bytes)? {
        Some(t) => t,
        None => {
            return Err(DecodeError {
                offset: bytes.len(),
                kind: DecodeErrorKind::Truncated {
                    needed: HEADER_LEN - bytes.len(),
                },
            })
        }
    };
    if bytes.len() < total {
        return Err(DecodeError {
            offset: bytes.len(),
            kind: DecodeErrorKind::Truncated {
                needed: total - bytes.len(),
            },
        });
    }
    if bytes.len() > total {
        return Err(DecodeError {
            offset: total,
            kind: DecodeErrorKind::TrailingBytes,
        });
    }
    let body = total - TRAILER_LEN;
    let expected = u32::from_le_bytes([bytes[body], bytes[body + 1], bytes[body + 2], bytes[body + 3]]);
    let found = crc32fast::hash(&bytes[..body]);
    if expected != found {
        return Err(DecodeError {
            offset: body,
            kind: DecodeErrorKind::Checksum { expected, found },
        });
    }
    let topic = Topic::from_id(bytes[3]).expect("checked by frame_length");
    let mut r = Reader {
        buf: &bytes[HEADER_LEN..body],
        pos: 0,
        base: HEADER_LEN,
    };
    let msg = decode_payload(topic.schema(), &mut r)?;
    Ok((topic, msg))
}

/// Decodes one frame and requires it to be on `expected`.
pub fn decode_as(bytes: &[u8], expected: Topic) -> Result<Message, DecodeError> {
    let (topic, msg) = decode(bytes)?;
    if topic != expected {
        return Err(DecodeError {
            offset: 3,
            kind: DecodeErrorKind::WrongTopic {
                expected,
                found: topic,
            },
        });
    }
    Ok(msg)
}

#[cfg(test)]
mod tests {
    use super::*;
    use alloc::vec;

    fn joints() -> Message {
        Message::Joints(JointStateMsg {
            timestamp_ns: 123_456_789,
            joints: (1..=21)
                .map(|i| JointState {
                    name: alloc::format!("m{i}"),
                    position: i as f64 * 0.1,
                    velocity: -(i as f64),
                    effort: 0.5,
                })
                .collect(),
        })
    }

    #[test]
    fn joint_round_trip() {
        let m = joints();
        let bytes = encode(Topic::JointStates, &m).unwrap();
        assert_eq!(&bytes[..2], b"YU");
        assert_eq!(bytes[2], VERSION);
        assert_eq!(bytes[3], 1);
        assert_eq!(decode(&bytes).unwrap(), (Topic::JointStates, m));
    }

    #[test]
    fn header_length_matches() {
        let bytes = encode(Topic::JointTargets, &joints()).unwrap();
        assert_eq!(frame_length(&bytes).unwrap(), Some(bytes.len()));
        assert_eq!(frame_length(&bytes[..5]).unwrap(), None);
    }

    #[test]
    fn schema_mismatch_rejected_on_encode() {
        assert!(matches!(
            encode(Topic::AudioAvatar, &joints()),
            Err(EncodeError::WrongSchema { .. })
        ));
    }

    #[test]
    fn empty_payload_frame() {
        let mut f = vec![b'Y', b'U', VERSION, 1, 0, 0, 0, 0];
        let crc = crc32fast::hash(&f);
        f.extend_from_slice(&crc.to_le_bytes());
        assert_eq!(decode(&f).unwrap_err().kind, DecodeErrorKind::EmptyPayload);
    }

    #[test]
    fn truncation_reports_offset() {
        let bytes = encode(Topic::JointStates, &joints()).unwrap();
        let cut = &bytes[..bytes.len() - 10];
        let e = decode(cut).unwrap_err();
        assert_eq!(e.offset, cut.len());
        assert_eq!(e.kind, DecodeErrorKind::Truncated { needed: 10 });
    }

    #[test]
    fn version_and_topic_checked() {
        let mut bytes = encode(Topic::JointStates, &joints()).unwrap();
        bytes[2] = 9;
        assert_eq!(decode(&bytes).unwrap_err().kind, DecodeErrorKind::UnsupportedVersion(9));
        bytes[2] = VERSION;
        bytes[3] = 42;
        assert_eq!(decode(&bytes).unwrap_err().kind, DecodeErrorKind::UnknownTopic(42));
    }

    #[test]
    fn corruption_caught_by_checksum() {
        let mut bytes = encode(Topic::JointStates, &joints()).unwrap();
        bytes[20] ^= 0x40;
        assert!(matches!(decode(&bytes).unwrap_err().kind, DecodeErrorKind::Checksum { .. }));
    }

    #[test]
    fn wrong_topic() {
        let bytes = encode(Topic::JointTargets, &joints()).unwrap();
        assert_eq!(
            decode_as(&bytes, Topic::JointStates).unwrap_err().kind,
            DecodeErrorKind::WrongTopic {
                expected: Topic::JointStates,
                found: Topic::JointTargets
            }
        );
    }

    #[test]
    fn huge_count_does_not_allocate() {
        // Audio header claiming u32::MAX - 1 samples with a valid checksum.
        let mut f = vec![b'Y', b'U', VERSION, 3, 0, 0, 0, 0];
        let mut payload = Vec::new();
        put_u64(&mut payload, 0);
        put_u64(&mut payload, 0);
        put_u32(&mut payload, 48_000);
        put_u32(&mut payload, 0);
        put_u32(&mut payload, u32::MAX - 1);
        f[4..8].copy_from_slice(&(payload.len() as u32).to_le_bytes());
        f.extend_from_slice(&payload);
        let crc = crc32fast::hash(&f);
        f.extend_from_slice(&crc.to_le_bytes());
        assert!(matches!(decode(&f).unwrap_err().kind, DecodeErrorKind::Malformed(_)));
    }
}
