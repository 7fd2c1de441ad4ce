//! Eight-position audio check around the head, written as CSV.

use std::fmt::Write as _;

use yui_core::perception::{audio_sweep, SweepRow, Waveform};

use crate::config::Config;
use crate::error::Result;

pub const CSV_HEADER: &str =
    "position,azimuth_deg,peak_left,peak_right,rms_left,rms_right,rms_difference,energy";

/// Plays the configured tone for `duration_ms` from each position.
pub fn run_sweep(cfg: &Config, duration_ms: u64) -> Result<Vec<SweepRow>> {
    cfg.validate()?;
    let tone = Waveform::tone(
        cfg.audio.tone_hz,
        cfg.audio.amplitude,
        duration_ms * 1_000_000,
        cfg.audio.sample_rate,
    );
    Ok(audio_sweep(
        &tone,
        cfg.audio.source_distance_m,
        &cfg.ears(),
        cfg.cycle_ns(),
    )?)
}

pub fn to_csv(rows: &[SweepRow]) -> String {
    let mut out = String::from(CSV_HEADER);
    out.push('\n');
    for r in rows {
        writeln!(
            out,
            "{},{},{:.6},{:.6},{:.6},{:.6},{:.6},{:.6}",
            r.position,
            r.azimuth_deg,
            r.peak_left,
            r.peak_right,
            r.rms_left,
            r.rms_right,
            r.rms_difference,
            r.energy
        )
        .expect("write to string");
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn csv_has_a_row_per_position() {
        let rows = run_sweep(&Config::default(), 100).unwrap();
        let csv = to_csv(&rows);
        let lines: Vec<&str> = csv.lines().collect();
        assert_eq!(lines.len(), 9);
        assert_eq!(lines[0], CSV_HEADER);
        assert!(lines[5].starts_with("5,0,"));
        for l in &lines[1..] {
            assert_eq!(l.split(',').count(), 8);
        }
    }
}
