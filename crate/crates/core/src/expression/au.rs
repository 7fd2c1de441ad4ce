use alloc::collections::BTreeMap;
use alloc::vec::Vec;
use core::fmt;

use crate::rig::{MotionId, MotionTargetSet, RigTable};

use super::ExpressionError;

/// Action Units with at least one actuation point on the head.
pub const SUPPORTED_AUS: [u8; 18] = [1, 2, 4, 5, 6, 7, 9, 10, 12, 14, 15, 17, 20, 22, 23, 24, 25, 26];

/// A supported Action Unit number.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct AuId(u8);

impl AuId {
    pub fn new(id: u8) -> Result<Self, ExpressionError> {
        if SUPPORTED_AUS.contains(&id) {
            Ok(AuId(id))
        } else {
            Err(ExpressionError::UnsupportedAu(id))
        }
    }

    pub fn get(self) -> u8 {
        self.0
    }

    pub fn all() -> impl Iterator<Item = AuId> {
        SUPPORTED_AUS.iter().map(|&id| AuId(id))
    }

    pub fn description(self) -> &'static str {
        AU_TABLE
            .iter()
            .find(|row| row.0 == self.0)
            .map(|row| row.1)
            .unwrap_or("")
    }
}

impl fmt::Display for AuId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "AU{}", self.0)
    }
}

/// Sparse Action Unit intensities in `[0, 1]`.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct AuFrame(BTreeMap<AuId, f64>);

impl AuFrame {
    pub fn new() -> Self {
        Self::default()
    }

    /// Builds a frame from `(AU number, intensity)` pairs. Intensities are
    /// clamped into `[0, 1]`.
    pub fn from_pairs(pairs: &[(u8, f64)]) -> Result<Self, ExpressionError> {
        let mut frame = Self::new();
        for &(id, v) in pairs {
            frame.set(AuId::new(id)?, v)?;
        }
        Ok(frame)
    }

    pub fn set(&mut self, au: AuId, intensity: f64) -> Result<(), ExpressionError> {
        if !intensity.is_finite() {
            return Err(ExpressionError::NonFinite);
        }
        self.0.insert(au, intensity.clamp(0.0, 1.0));
        Ok(())
    }

    pub fn get(&self, au: AuId) -> Option<f64> {
        self.0.get(&au).copied()
    }

    pub fn remove(&mut self, au: AuId) -> Option<f64> {
        self.0.remove(&au)
    }

    pub fn iter(&self) -> impl Iterator<Item = (AuId, f64)> + '_ {
        self.0.iter().map(|(k, v)| (*k, *v))
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }
}

// AU -> head motions. AU9 has no dedicated point and is approximated by
// 7, 14 and 15 together; AU17 is substituted by 28.
const AU_TABLE: [(u8, &str, &[u8]); 18] = [
    (1, "Inner brow raiser", &[12, 13]),
    (2, "Outer brow raiser", &[8, 9]),
    (4, "Brow lowerer", &[14, 15]),
    (5, "Upper lid raiser", &[4]),
    (6, "Cheek raiser", &[16, 17]),
    (7, "Lid tightener", &[5, 7]),
    (9, "Nose wrinkler", &[7, 14, 15]),
    (10, "Upper lip raiser", &[18]),
    (12, "Lip corner puller", &[23, 24]),
    (14, "Dimpler", &[20, 21]),
    (15, "Lip corner depressor", &[25, 26]),
    (17, "Chin raiser", &[28]),
    (20, "Lip stretcher", &[20, 21, 25, 26]),
    (22, "Lip funneler", &[18, 19, 22]),
    (23, "Lip tightener", &[22]),
    (24, "Lip pressor", &[28]),
    (25, "Lips part", &[18, 19]),
    (26, "Jaw drop", &[27]),
];

/// Which head motions each Action Unit drives.
#[derive(Debug, Clone, PartialEq)]
pub struct AuTable {
    rows: BTreeMap<AuId, Vec<MotionId>>,
}

impl Default for AuTable {
    fn default() -> Self {
        let rows = AU_TABLE
            .iter()
            .map(|&(au, _, motions)| {
                let ms = motions
                    .iter()
                    .map(|&m| MotionId::new(m).expect("table motion in range"))
                    .collect();
                (AuId(au), ms)
            })
            .collect();
        AuTable { rows }
    }
}

impl AuTable {
    /// Builds a table from explicit rows. Every supported AU needs a
    /// non-empty row.
    pub fn new(rows: BTreeMap<AuId, Vec<MotionId>>) -> Result<Self, ExpressionError> {
        for au in AuId::all() {
            match rows.get(&au) {
                Some(ms) if !ms.is_empty() => {}
                _ => return Err(ExpressionError::MissingAuRow(au.get())),
            }
        }
        Ok(AuTable { rows })
    }

    pub fn motions(&self, au: AuId) -> &[MotionId] {
        self.rows.get(&au).map(Vec::as_slice).unwrap_or(&[])
    }

    pub fn rows(&self) -> impl Iterator<Item = (AuId, &[MotionId])> + '_ {
        self.rows.iter().map(|(k, v)| (*k, v.as_slice()))
    }

    /// Compiles an AU frame into motion intensities. Motions reached by
    /// several AUs take the largest contribution.
    pub fn au_to_motions(&self, frame: &AuFrame) -> MotionTargetSet {
        let mut out = MotionTargetSet::new();
        for (au, intensity) in frame.iter() {
            for &m in self.motions(au) {
                let v = out.get(m).map_or(intensity, |prev| prev.max(intensity));
                out.insert(m, v);
            }
        }
        out
    }
}

/// Order in which Action Units win motor conflicts, highest first.
#[derive(Debug, Clone, PartialEq)]
pub struct AuPriority(Vec<AuId>);

impl Default for AuPriority {
    /// Ascending AU number. This puts the brow raisers (AU1, AU2) ahead
    /// of the brow lowerer (AU4).
    fn default() -> Self {
        AuPriority(AuId::all().collect())
    }
}

impl AuPriority {
    /// Uses `order` first; supported AUs missing from it follow in
    /// ascending order.
    pub fn new(order: &[AuId]) -> Self {
        let mut v: Vec<AuId> = Vec::new();
        for &au in order {
            if !v.contains(&au) {
                v.push(au);
            }
        }
        for au in AuId::all() {
            if !v.contains(&au) {
                v.push(au);
            }
        }
        AuPriority(v)
    }

    pub fn order(&self) -> &[AuId] {
        &self.0
    }
}

/// Drops Action Units that would drive a shared motor against a
/// higher-priority unit.
///
/// AUs are admitted greedily in priority order; an active AU whose motions
/// would oppose an already admitted one is removed. Zero-intensity entries
/// are kept as they are since they drive nothing.
pub fn resolve_au_conflicts(
    frame: &AuFrame,
    table: &AuTable,
    rig: &RigTable,
    priority: &AuPriority,
) -> AuFrame {
    let mut admitted = AuFrame::new();
    for &au in priority.order() {
        let Some(v) = frame.get(au) else { continue };
        let mut trial = admitted.clone();
        trial.0.insert(au, v);
        if v == 0.0 || rig.detect_conflicts(&table.au_to_motions(&trial)).is_empty() {
            admitted = trial;
        }
    }
    admitted
}
