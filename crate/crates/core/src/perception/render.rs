use alloc::vec::Vec;

use crate::math;

use super::{ear_gains, EarPair, PerceptionError, SoundSource};

/// Mono samples at a fixed rate.
#[derive(Debug, Clone, PartialEq)]
pub struct Waveform {
    pub samples: Vec<f32>,
    pub sample_rate: u32,
}

impl Waveform {
    /// Sine tone of `amplitude` lasting `duration_ns`.
    pub fn tone(freq_hz: f64, amplitude: f32, duration_ns: u64, sample_rate: u32) -> Self {
        let n = frames_in(sample_rate, duration_ns);
        let w = 2.0 * core::f64::consts::PI * freq_hz / sample_rate as f64;
        let samples = (0..n)
            .map(|i| amplitude * math::sin(w * i as f64) as f32)
            .collect();
        Waveform {
            samples,
            sample_rate,
        }
    }

    pub fn silence(duration_ns: u64, sample_rate: u32) -> Self {
        Waveform {
            samples: alloc::vec![0.0; frames_in(sample_rate, duration_ns)],
            sample_rate,
        }
    }
}

/// Whole sample frames in `duration_ns` at `sample_rate`.
pub(crate) fn frames_in(sample_rate: u32, duration_ns: u64) -> usize {
    (sample_rate as u128 * duration_ns as u128 / 1_000_000_000u128) as usize
}

/// A block of stereo samples as captured by the ear microphones.
#[derive(Debug, Clone, PartialEq)]
pub struct StereoFrame {
    pub left: Vec<f32>,
    pub right: Vec<f32>,
    pub sample_rate: u32,
    pub sequence: u64,
    pub capture_ns: u64,
}

impl StereoFrame {
    pub fn len(&self) -> usize {
        self.left.len()
    }

    pub fn is_empty(&self) -> bool {
        self.left.is_empty()
    }

    /// Left/right interleaved samples.
    pub fn interleaved(&self) -> Vec<f32> {
        self.left
            .iter()
            .zip(&self.right)
            .flat_map(|(l, r)| [*l, *r])
            .collect()
    }
}

/// Pull-based stream of rendered frames, one per bus cycle. The final frame
/// may be shorter so the total length matches the requested duration.
#[derive(Debug, Clone)]
pub struct StereoStream<'a> {
    samples: &'a [f32],
    sample_rate: u32,
    gains: (f32, f32),
    chunk: usize,
    pos: usize,
    sequence: u64,
    start_ns: u64,
    cycle_ns: u64,
}

impl StereoStream<'_> {
    pub fn gains(&self) -> (f32, f32) {
        self.gains
    }
}

impl Iterator for StereoStream<'_> {
    type Item = StereoFrame;

    fn next(&mut self) -> Option<StereoFrame> {
        if self.pos >= self.samples.len() {
            return None;
        }
        let end = (self.pos + self.chunk).min(self.samples.len());
        let block = &self.samples[self.pos..end];
        let frame = StereoFrame {
            left: block.iter().map(|s| s * self.gains.0).collect(),
            right: block.iter().map(|s| s * self.gains.1).collect(),
            sample_rate: self.sample_rate,
            sequence: self.sequence,
            capture_ns: self.start_ns + self.sequence * self.cycle_ns,
        };
        self.pos = end;
        self.sequence += 1;
        Some(frame)
    }
}

/// Renders `duration_ns` of `waveform` as heard from `source` with the head
/// turned by `head_yaw_deg`.
///
/// Each channel is the input scaled by its ear gain; there is no time
/// difference between the ears. Frames hold one `cycle_ns` of audio and are
/// stamped from `start_ns`.
pub fn render_stereo<'a>(
    waveform: &'a Waveform,
    source: &SoundSource,
    head_yaw_deg: f64,
    ears: &EarPair,
    duration_ns: u64,
    cycle_ns: u64,
    start_ns: u64,
) -> Result<StereoStream<'a>, PerceptionError> {
    ears.validate()?;
    let needed = frames_in(waveform.sample_rate, duration_ns);
    if needed > waveform.samples.len() {
        return Err(PerceptionError::WaveformTooShort {
            needed,
            available: waveform.samples.len(),
        });
    }
    let chunk = frames_in(waveform.sample_rate, cycle_ns);
    if chunk == 0 {
        return Err(PerceptionError::ChunkTooShort);
    }
    let (l, r) = ear_gains(source, head_yaw_deg, ears);
    Ok(StereoStream {
        samples: &waveform.samples[..needed],
        sample_rate: waveform.sample_rate,
        gains: (l as f32, r as f32),
        chunk,
        pos: 0,
        sequence: 0,
        start_ns,
        cycle_ns,
    })
}

/// Speaker positions of the eight-point audio check.
pub const SWEEP_POSITIONS: [u8; 8] = [1, 2, 3, 4, 5, 6, 7, 8];

/// Azimuth of a sweep position: 5 is straight ahead, 1 directly behind,
/// 45° apart, increasing to the right.
pub fn position_azimuth(position: u8) -> f64 {
    math::wrap_deg((position as f64 - 5.0) * 45.0)
}

/// Measured levels for one speaker position.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SweepRow {
    pub position: u8,
    pub azimuth_deg: f64,
    pub peak_left: f64,
    pub peak_right: f64,
    pub rms_left: f64,
    pub rms_right: f64,
    /// RMS of the sample-wise difference `L - R`.
    pub rms_difference: f64,
    /// Sum of squared samples over both channels.
    pub energy: f64,
}

/// Plays `waveform` from each of the eight positions on a circle of
/// `radius_m` and measures what each ear picks up.
pub fn audio_sweep(
    waveform: &Waveform,
    radius_m: f64,
    ears: &EarPair,
    cycle_ns: u64,
) -> Result<Vec<SweepRow>, PerceptionError> {
    let duration_ns =
        (waveform.samples.len() as u128 * 1_000_000_000u128 / waveform.sample_rate as u128) as u64;
    let mut rows = Vec::with_capacity(SWEEP_POSITIONS.len());
    for position in SWEEP_POSITIONS {
        let azimuth = position_azimuth(position);
        let source = SoundSource::new(azimuth, radius_m)?;
        let stream = render_stereo(waveform, &source, 0.0, ears, duration_ns, cycle_ns, 0)?;
        let (mut pl, mut pr, mut sl, mut sr, mut sd) = (0.0f64, 0.0f64, 0.0, 0.0, 0.0);
        let mut n = 0usize;
        for frame in stream {
            for (l, r) in frame.left.iter().zip(&frame.right) {
                let (l, r) = (*l as f64, *r as f64);
                pl = pl.max(math::abs(l));
                pr = pr.max(math::abs(r));
                sl += l * l;
                sr += r * r;
                sd += (l - r) * (l - r);
                n += 1;
            }
        }
        let n = n.max(1) as f64;
        rows.push(SweepRow {
            position,
            azimuth_deg: azimuth,
            peak_left: pl,
            peak_right: pr,
            rms_left: math::sqrt(sl / n),
            rms_right: math::sqrt(sr / n),
            rms_difference: math::sqrt(sd / n),
            energy: sl + sr,
        });
    }
    Ok(rows)
}

#[cfg(test)]
mod tests {
    use super::*;

    const SEC: u64 = 1_000_000_000;
    const CYCLE: u64 = 10_000_000;

    #[test]
    fn silence_renders_silent() {
        let w = Waveform::silence(SEC / 10, 48_000);
        let s = SoundSource::new(30.0, 1.0).unwrap();
        for f in render_stereo(&w, &s, 0.0, &EarPair::default(), SEC / 10, CYCLE, 0).unwrap() {
            assert!(f.left.iter().chain(&f.right).all(|x| *x == 0.0));
        }
    }

    #[test]
    fn front_tone_identical_channels() {
        let w = Waveform::tone(440.0, 0.5, SEC / 10, 48_000);
        let s = SoundSource::new(0.0, 1.0).unwrap();
        for f in render_stereo(&w, &s, 0.0, &EarPair::default(), SEC / 10, CYCLE, 0).unwrap() {
            assert_eq!(f.left, f.right);
        }
    }

    #[test]
    fn length_exact_with_partial_tail() {
        let w = Waveform::tone(440.0, 0.5, 25 * CYCLE / 10, 48_000);
        let s = SoundSource::new(10.0, 1.0).unwrap();
        let frames: Vec<_> = render_stereo(&w, &s, 0.0, &EarPair::default(), 25 * CYCLE / 10, CYCLE, 7)
            .unwrap()
            .collect();
        assert_eq!(frames.len(), 3);
        assert_eq!(frames[0].len(), 480);
        assert_eq!(frames[2].len(), 240);
        assert_eq!(frames.iter().map(StereoFrame::len).sum::<usize>(), w.samples.len());
        assert_eq!(frames[2].capture_ns, 7 + 2 * CYCLE);
        assert!(frames.iter().all(|f| f.sample_rate == 48_000));
    }

    #[test]
    fn too_short_waveform() {
        let w = Waveform::silence(CYCLE, 48_000);
        let s = SoundSource::new(0.0, 1.0).unwrap();
        assert!(matches!(
            render_stereo(&w, &s, 0.0, &EarPair::default(), 2 * CYCLE, CYCLE, 0),
            Err(PerceptionError::WaveformTooShort { needed: 960, available: 480 })
        ));
    }

    #[test]
    fn positions() {
        assert_eq!(position_azimuth(5), 0.0);
        assert_eq!(position_azimuth(1), 180.0);
        assert_eq!(position_azimuth(3), -90.0);
        assert_eq!(position_azimuth(7), 90.0);
        assert_eq!(position_azimuth(2), -135.0);
        assert_eq!(position_azimuth(8), 135.0);
    }
}
