//! Expression-map calibration files.
//!
//! Samples are JSON Lines, `{"inputs": [...], "targets": [...]}`, with one
//! target per motor. Fitted parameters are stored as TOML.

use std::path::Path;

use serde::{Deserialize, Serialize};
use yui_core::expression::{fit_mapping, CalibrationSample, FitReport, MappingParams};

use crate::error::{Error, Result};
use crate::tables::FORMAT_VERSION;

#[derive(Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct SampleLine {
    inputs: Vec<f64>,
    targets: Vec<f64>,
}

pub fn parse_samples(name: &str, text: &str) -> Result<Vec<CalibrationSample>> {
    let mut out = Vec::new();
    for (i, line) in text.lines().enumerate() {
        let line = line.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let s: SampleLine = serde_json::from_str(line).map_err(|e| Error::Parse {
            path: name.into(),
            line: i + 1,
            msg: e.to_string(),
        })?;
        out.push(CalibrationSample {
            inputs: s.inputs,
            targets: s.targets,
        });
    }
    Ok(out)
}

pub fn samples_to_jsonl(samples: &[CalibrationSample]) -> String {
    samples
        .iter()
        .map(|s| {
            let line = SampleLine {
                inputs: s.inputs.clone(),
                targets: s.targets.clone(),
            };
            serde_json::to_string(&line).expect("sample serializes") + "\n"
        })
        .collect()
}

pub fn fit_file(path: &Path) -> Result<FitReport> {
    let text = std::fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
    let samples = parse_samples(&path.display().to_string(), &text)?;
    Ok(fit_mapping(&samples)?)
}

#[derive(Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct ParamsFile {
    format: u32,
    inputs: usize,
    offset: Vec<f64>,
    /// One row per motor.
    weights: Vec<Vec<f64>>,
}

pub fn params_to_toml(p: &MappingParams) -> String {
    let file = ParamsFile {
        format: FORMAT_VERSION,
        inputs: p.inputs(),
        offset: p.offset().to_vec(),
        weights: p.weights().chunks(p.inputs().max(1)).map(<[f64]>::to_vec).collect(),
    };
    toml::to_string(&file).expect("params serialize")
}

pub fn params_from_toml(text: &str) -> Result<MappingParams> {
    let file: ParamsFile =
        toml::from_str(text).map_err(|e| Error::Config(format!("mapping params: {e}")))?;
    if file.format != FORMAT_VERSION {
        return Err(Error::Config(format!(
            "mapping params: unsupported format version {}",
            file.format
        )));
    }
    if file.weights.iter().any(|r| r.len() != file.inputs) {
        return Err(Error::Config(format!(
            "mapping params: every weight row needs {} entries",
            file.inputs
        )));
    }
    let weights = file.weights.concat();
    Ok(MappingParams::new(file.offset, weights, file.inputs)?)
}

pub fn load_params(path: &Path) -> Result<MappingParams> {
    let text = std::fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
    params_from_toml(&text)
}
