use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use yui_core::protocol::*;

fn joints() -> impl Strategy<Value = JointStateMsg> {
    (any::<u64>(), prop::collection::vec((any::<f64>(), any::<f64>(), any::<f64>()), 21)).prop_map(
        |(ts, vals)| JointStateMsg {
            timestamp_ns: ts,
            joints: vals
                .into_iter()
                .enumerate()
                .map(|(i, (p, v, e))| JointState {
                    name: format!("motor_{}", i + 1),
                    position: p,
                    velocity: v,
                    effort: e,
                })
                .collect(),
        },
    )
}

fn audio() -> impl Strategy<Value = AudioChunkMsg> {
    (any::<u64>(), any::<u64>(), any::<u32>(), prop::collection::vec(any::<f32>(), 0..200).prop_map(|mut v| {
        v.truncate(v.len() & !1);
        v
    }))
        .prop_flat_map(|(seq, ts, rate, samples)| {
            let frames = samples.len() as u32 / 2;
            (0..=frames).prop_map(move |valid| AudioChunkMsg {
                sequence: seq,
                capture_ns: ts,
                sample_rate: rate,
                valid_frames: valid,
                samples: samples.clone(),
            })
        })
}

fn camera() -> impl Strategy<Value = CameraFrameMsg> {
    (
        any::<u64>(),
        any::<u64>(),
        any::<u16>(),
        any::<u16>(),
        prop::collection::vec((any::<u32>(), any::<f64>(), any::<f64>()), 0..30),
    )
        .prop_map(|(seq, ts, w, h, pts)| CameraFrameMsg {
            sequence: seq,
            capture_ns: ts,
            width: w,
            height: h,
            points: pts.into_iter().map(|(id, x, y)| CameraPoint { id, x, y }).collect(),
        })
}

/// Equality by bit pattern so NaN payloads compare.
fn same_bits(a: &[u8], b: &[u8]) -> bool {
    a == b
}

proptest! {
    #[test]
    fn joints_round_trip(m in joints(), targets in any::<bool>()) {
        let topic = if targets { Topic::JointTargets } else { Topic::JointStates };
        let bytes = encode(topic, &Message::Joints(m)).unwrap();
        let (t, back) = decode(&bytes).unwrap();
        prop_assert_eq!(t, topic);
        prop_assert!(same_bits(&encode(topic, &back).unwrap(), &bytes));
    }

    #[test]
    fn audio_round_trip(m in audio()) {
        let bytes = encode(Topic::AudioAvatar, &Message::Audio(m)).unwrap();
        let back = decode_as(&bytes, Topic::AudioAvatar).unwrap();
        prop_assert!(same_bits(&encode(Topic::AudioAvatar, &back).unwrap(), &bytes));
        prop_assert_eq!(frame_length(&bytes).unwrap(), Some(bytes.len()));
    }

    #[test]
    fn camera_round_trip(m in camera()) {
        let msg = Message::Camera(m);
        let bytes = encode(Topic::CameraRight, &msg).unwrap();
        let (_, back) = decode(&bytes).unwrap();
        prop_assert!(same_bits(&encode(Topic::CameraRight, &back).unwrap(), &bytes));
        let wrong = matches!(
            decode_as(&bytes, Topic::CameraLeft).unwrap_err().kind,
            DecodeErrorKind::WrongTopic { .. }
        );
        prop_assert!(wrong);
    }

    #[test]
    fn chunking_reassembles_bit_exact(
        frames in 0usize..3000,
        rate in prop::sample::select(vec![16_000u32, 44_100, 48_000]),
        seed in any::<u64>(),
    ) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let pcm: Vec<f32> = (0..frames * 2).map(|_| f32::from_bits(rng.random())).collect();
        let chunks = chunk_audio(&pcm, rate, 10, 0).unwrap();
        let per = frames_per_chunk(rate, 10);
        for (i, c) in chunks.iter().enumerate() {
            prop_assert_eq!(c.frames(), per);
            if i + 1 < chunks.len() {
                prop_assert!(!c.is_padded());
            }
        }
        let back = reassemble(&chunks).unwrap();
        prop_assert_eq!(back.len(), pcm.len());
        prop_assert!(back.iter().zip(&pcm).all(|(a, b)| a.to_bits() == b.to_bits()));
    }

    #[test]
    fn delay_preserves_spacing(
        gaps in prop::collection::vec(0u64..30_000_000, 1..60),
        delay in 0u64..100_000_000,
    ) {
        let mut buf = DelayBuffer::new(delay);
        let mut t = 0;
        let mut captures = Vec::new();
        for g in gaps {
            t += g;
            captures.push(t);
            buf.push(t, t);
        }
        let mut released = Vec::new();
        let mut now = 0;
        while !buf.is_empty() {
            for (c, _) in buf.release(now) {
                prop_assert!(c + delay <= now && now < c + delay + 1_000_000);
                released.push(c);
            }
            now += 1_000_000;
        }
        prop_assert_eq!(released, captures);
    }
}

#[test]
fn fuzz_decoder_never_panics() {
    let mut rng = ChaCha8Rng::seed_from_u64(0xf022);
    let mut ok = 0;
    let valid = encode(
        Topic::AudioOperator,
        &Message::Audio(AudioChunkMsg {
            sequence: 7,
            capture_ns: 70_000_000,
            sample_rate: 48_000,
            valid_frames: 3,
            samples: vec![0.5; 8],
        }),
    )
    .unwrap();
    for i in 0..10_000 {
        let bytes: Vec<u8> = match i % 3 {
            // Pure noise.
            0 => (0..rng.random_range(0..256)).map(|_| rng.random()).collect(),
            // A valid frame with flipped bits or truncated.
            1 => {
                let mut b = valid.clone();
                for _ in 0..rng.random_range(1..4) {
                    let at = rng.random_range(0..b.len());
                    b[at] ^= 1 << rng.random_range(0..8);
                }
                b.truncate(rng.random_range(0..=b.len()));
                b
            }
            // Valid header and checksum around a random payload.
            _ => {
                let payload: Vec<u8> = (0..rng.random_range(1..120)).map(|_| rng.random()).collect();
                let mut b = vec![b'Y', b'U', VERSION, rng.random_range(1..=6)];
                b.extend_from_slice(&(payload.len() as u32).to_le_bytes());
                b.extend_from_slice(&payload);
                let crc = crc32(&b);
                b.extend_from_slice(&crc.to_le_bytes());
                b
            }
        };
        match decode(&bytes) {
            Ok(_) => ok += 1,
            Err(e) => assert!(e.offset <= bytes.len()),
        }
        let _ = frame_length(&bytes);
    }
    assert!(ok < 10_000);
}

fn crc32(bytes: &[u8]) -> u32 {
    // Bitwise reflected CRC-32, independent of the codec's implementation.
    let mut crc = !0u32;
    for &b in bytes {
        crc ^= b as u32;
        for _ in 0..8 {
            crc = if crc & 1 != 0 { (crc >> 1) ^ 0xEDB8_8320 } else { crc >> 1 };
        }
    }
    !crc
}

#[test]
fn twenty_ms_delay_is_two_cycles() {
    let cycle = 10_000_000u64;
    let pcm = vec![0.1f32; 48_000 * 2 / 10];
    let chunks = chunk_audio(&pcm, 48_000, 10, 0).unwrap();
    let mut buf = DelayBuffer::new(2 * cycle);
    let mut out = Vec::new();
    for (tick, c) in chunks.into_iter().enumerate() {
        let now = tick as u64 * cycle;
        buf.push(c.capture_ns, c);
        out.extend(buf.release(now).into_iter().map(|(_, c)| (c.sequence, tick as u64)));
    }
    assert_eq!(out.len(), 8);
    assert!(out.iter().all(|(seq, tick)| tick - seq == 2));
}
