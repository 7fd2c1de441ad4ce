//! External, versioned TOML copies of the rig table, the AU table and the
//! emotion presets. `data/` in this crate holds the shipped files.

use std::collections::BTreeMap;
use std::path::Path;

use serde::{Deserialize, Serialize};
use yui_core::expression::{emotion_preset, AuId, AuTable, Emotion};
use yui_core::rig::{
    Drive, MotionId, MotionSpec, MotionTargetSet, MotorId, MotorSpec, NeckAxis, Polarity, RigTable,
    Unit,
};

use crate::error::{Error, Result};

pub const FORMAT_VERSION: u32 = 1;

pub const RIG_FILE: &str = "rig.toml";
pub const AU_FILE: &str = "au_table.toml";
pub const PRESET_FILE: &str = "presets.toml";

fn bad(msg: impl Into<String>) -> Error {
    Error::Config(msg.into())
}

fn check_version(v: u32, what: &str) -> Result<()> {
    if v != FORMAT_VERSION {
        return Err(bad(format!("{what}: unsupported format version {v}")));
    }
    Ok(())
}

#[derive(Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct RigFile {
    format: u32,
    rig_version: u32,
    motor: Vec<MotorRow>,
    motion: Vec<MotionRow>,
}

#[derive(Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct MotorRow {
    id: u8,
    unit: String,
    min: f64,
    max: f64,
    name: String,
}

#[derive(Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct MotionRow {
    id: u8,
    label: String,
    min: f64,
    max: f64,
    #[serde(skip_serializing_if = "Option::is_none")]
    motor: Option<u8>,
    /// Motor terminals such as `"14-"`.
    #[serde(skip_serializing_if = "Option::is_none")]
    terminals: Option<Vec<String>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    neck: Option<String>,
}

fn motor_id(id: u8) -> Result<MotorId> {
    MotorId::new(id).ok_or_else(|| bad(format!("motor {id} out of range")))
}

fn motion_id(id: u8) -> Result<MotionId> {
    MotionId::new(id).ok_or_else(|| bad(format!("motion {id} out of range")))
}

fn parse_terminal(s: &str) -> Result<(MotorId, Polarity)> {
    let (num, pol) = match s.strip_suffix('+') {
        Some(n) => (n, Polarity::Plus),
        None => match s.strip_suffix('-') {
            Some(n) => (n, Polarity::Minus),
            None => return Err(bad(format!("terminal {s:?} needs a + or - suffix"))),
        },
    };
    let id: u8 = num.parse().map_err(|_| bad(format!("bad terminal {s:?}")))?;
    Ok((motor_id(id)?, pol))
}

fn axis_name(a: NeckAxis) -> &'static str {
    match a {
        NeckAxis::Yaw => "yaw",
        NeckAxis::Pitch => "pitch",
        NeckAxis::Roll => "roll",
    }
}

pub fn rig_to_toml(rig: &RigTable) -> String {
    let file = RigFile {
        format: FORMAT_VERSION,
        rig_version: rig.version(),
        motor: rig
            .motors()
            .iter()
            .map(|m| MotorRow {
                id: m.id.get(),
                unit: match m.unit {
                    Unit::Degrees => "degrees".into(),
                    Unit::Normalized => "normalized".into(),
                },
                min: m.min,
                max: m.max,
                name: m.name.clone(),
            })
            .collect(),
        motion: rig
            .motions()
            .iter()
            .map(|m| {
                let mut row = MotionRow {
                    id: m.id.get(),
                    label: m.label.clone(),
                    min: m.min,
                    max: m.max,
                    motor: None,
                    terminals: None,
                    neck: None,
                };
                match &m.drive {
                    Drive::Direct(id) => row.motor = Some(id.get()),
                    Drive::Terminals(ts) => {
                        row.terminals = Some(
                            ts.iter()
                                .map(|(id, p)| format!("{}{}", id.get(), p.symbol()))
                                .collect(),
                        )
                    }
                    Drive::Neck(a) => row.neck = Some(axis_name(*a).into()),
                }
                row
            })
            .collect(),
    };
    toml::to_string(&file).expect("rig table serializes")
}

pub fn rig_from_toml(text: &str) -> Result<RigTable> {
    let file: RigFile = toml::from_str(text).map_err(|e| bad(format!("rig table: {e}")))?;
    check_version(file.format, "rig table")?;
    let motors = file
        .motor
        .into_iter()
        .map(|r| {
            let unit = match r.unit.as_str() {
                "degrees" => Unit::Degrees,
                "normalized" => Unit::Normalized,
                other => return Err(bad(format!("unknown unit {other:?}"))),
            };
            Ok(MotorSpec {
                id: motor_id(r.id)?,
                unit,
                min: r.min,
                max: r.max,
                name: r.name,
            })
        })
        .collect::<Result<Vec<_>>>()?;
    let motions = file
        .motion
        .into_iter()
        .map(|r| {
            let drive = match (r.motor, r.terminals, r.neck) {
                (Some(m), None, None) => Drive::Direct(motor_id(m)?),
                (None, Some(ts), None) => {
                    Drive::Terminals(ts.iter().map(|t| parse_terminal(t)).collect::<Result<_>>()?)
                }
                (None, None, Some(axis)) => Drive::Neck(match axis.as_str() {
                    "yaw" => NeckAxis::Yaw,
                    "pitch" => NeckAxis::Pitch,
                    "roll" => NeckAxis::Roll,
                    other => return Err(bad(format!("unknown neck axis {other:?}"))),
                }),
                _ => {
                    return Err(bad(format!(
                        "motion {} needs exactly one of motor, terminals, neck",
                        r.id
                    )))
                }
            };
            Ok(MotionSpec {
                id: motion_id(r.id)?,
                drive,
                min: r.min,
                max: r.max,
                label: r.label,
            })
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(RigTable::new(file.rig_version, motors, motions)?)
}

#[derive(Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct AuFile {
    format: u32,
    au: Vec<AuRow>,
}

#[derive(Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct AuRow {
    id: u8,
    name: String,
    motions: Vec<u8>,
}

pub fn au_table_to_toml(table: &AuTable) -> String {
    let file = AuFile {
        format: FORMAT_VERSION,
        au: table
            .rows()
            .map(|(au, ms)| AuRow {
                id: au.get(),
                name: au.description().into(),
                motions: ms.iter().map(|m| m.get()).collect(),
            })
            .collect(),
    };
    toml::to_string(&file).expect("AU table serializes")
}

pub fn au_table_from_toml(text: &str) -> Result<AuTable> {
    let file: AuFile = toml::from_str(text).map_err(|e| bad(format!("AU table: {e}")))?;
    check_version(file.format, "AU table")?;
    let mut rows = BTreeMap::new();
    for r in file.au {
        let motions = r.motions.iter().map(|&m| motion_id(m)).collect::<Result<Vec<_>>>()?;
        if rows.insert(AuId::new(r.id)?, motions).is_some() {
            return Err(bad(format!("AU{} listed twice", r.id)));
        }
    }
    Ok(AuTable::new(rows)?)
}

/// Facial targets for every emotion.
#[derive(Debug, Clone, PartialEq)]
pub struct PresetTable(BTreeMap<Emotion, MotionTargetSet>);

impl Default for PresetTable {
    fn default() -> Self {
        PresetTable(Emotion::ALL.into_iter().map(|e| (e, emotion_preset(e))).collect())
    }
}

impl PresetTable {
    pub fn get(&self, e: Emotion) -> &MotionTargetSet {
        &self.0[&e]
    }

    pub fn to_toml(&self) -> String {
        let mut doc = toml::Table::new();
        doc.insert("format".into(), toml::Value::Integer(FORMAT_VERSION as i64));
        let mut presets = toml::Table::new();
        for (e, set) in &self.0 {
            let row: toml::Table = set
                .iter()
                .map(|(m, v)| (m.get().to_string(), toml::Value::Float(v)))
                .collect();
            presets.insert(e.name().to_ascii_lowercase(), toml::Value::Table(row));
        }
        doc.insert("preset".into(), toml::Value::Table(presets));
        toml::to_string(&doc).expect("presets serialize")
    }

    pub fn from_toml(text: &str) -> Result<Self> {
        #[derive(Deserialize)]
        #[serde(deny_unknown_fields)]
        struct File {
            format: u32,
            preset: BTreeMap<String, BTreeMap<String, f64>>,
        }
        let file: File = toml::from_str(text).map_err(|e| bad(format!("presets: {e}")))?;
        check_version(file.format, "presets")?;
        let mut out = BTreeMap::new();
        for (name, row) in file.preset {
            let emotion: Emotion = name.parse()?;
            let mut set = MotionTargetSet::new();
            for (k, v) in row {
                let id: u8 = k.parse().map_err(|_| bad(format!("preset {name}: bad motion {k:?}")))?;
                if !(0.0..=1.0).contains(&v) {
                    return Err(bad(format!("preset {name}: motion {id} value {v} outside [0, 1]")));
                }
                set.insert(motion_id(id)?, v);
            }
            out.insert(emotion, set);
        }
        for e in Emotion::ALL {
            if !out.contains_key(&e) {
                return Err(bad(format!("presets: {} missing", e.name())));
            }
        }
        Ok(PresetTable(out))
    }
}

/// Writes the three built-in tables into `dir`.
pub fn export_builtin(dir: &Path) -> Result<()> {
    std::fs::create_dir_all(dir).map_err(|e| Error::io(dir, e))?;
    for (name, text) in [
        (RIG_FILE, rig_to_toml(&RigTable::yui())),
        (AU_FILE, au_table_to_toml(&AuTable::default())),
        (PRESET_FILE, PresetTable::default().to_toml()),
    ] {
        let path = dir.join(name);
        std::fs::write(&path, text).map_err(|e| Error::io(&path, e))?;
    }
    Ok(())
}
