//! Head motions and their allocation onto motors.
//!
//! The head has 31 controllable motions driven by 21 motors. Several facial
//! motors pull one wire when turning forward and another when turning in
//! reverse, so each of their two motions owns one *terminal* (`+` or `-`)
//! of the motor and the two can never be active at the same time. The mouth
//! pucker drives the `-` terminals of two motors at once, and the neck uses
//! a differential linkage: the mean of motors 20 and 21 is pitch and their
//! half-difference is roll.
//!
//! Jaw labels follow the action-unit usage: motion 27 opens the jaw
//! (motor 18 forward) and motion 28 closes it (motor 18 reverse).

use alloc::collections::BTreeMap;
use alloc::string::String;
use alloc::vec::Vec;
use core::fmt;

pub const MOTOR_COUNT: usize = 21;
pub const MOTION_COUNT: usize = 31;

/// Motor number `1..=21`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct MotorId(u8);

impl MotorId {
    pub const fn new(id: u8) -> Option<Self> {
        if id >= 1 && id as usize <= MOTOR_COUNT {
            Some(MotorId(id))
        } else {
            None
        }
    }

    pub const fn get(self) -> u8 {
        self.0
    }

    /// Zero-based index into per-motor arrays.
    pub const fn index(self) -> usize {
        self.0 as usize - 1
    }

    pub fn all() -> impl Iterator<Item = MotorId> {
        (1..=MOTOR_COUNT as u8).map(MotorId)
    }
}

impl fmt::Display for MotorId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "motor {}", self.0)
    }
}

/// Head motion (actuation point) number `1..=31`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct MotionId(u8);

impl MotionId {
    pub const fn new(id: u8) -> Option<Self> {
        if id >= 1 && id as usize <= MOTION_COUNT {
            Some(MotionId(id))
        } else {
            None
        }
    }

    pub const fn get(self) -> u8 {
        self.0
    }

    pub fn all() -> impl Iterator<Item = MotionId> {
        (1..=MOTION_COUNT as u8).map(MotionId)
    }
}

impl fmt::Display for MotionId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "motion {}", self.0)
    }
}

const fn motor(id: u8) -> MotorId {
    match MotorId::new(id) {
        Some(m) => m,
        None => panic!("motor id out of range"),
    }
}

pub const NECK_YAW_MOTOR: MotorId = motor(19);
pub const NECK_LEFT_MOTOR: MotorId = motor(20);
pub const NECK_RIGHT_MOTOR: MotorId = motor(21);

pub const EYE_LEFT_YAW: MotionId = MotionId(1);
pub const EYE_RIGHT_YAW: MotionId = MotionId(2);
pub const EYE_PITCH: MotionId = MotionId(3);
pub const NECK_YAW: MotionId = MotionId(29);
pub const NECK_PITCH: MotionId = MotionId(30);
pub const NECK_ROLL: MotionId = MotionId(31);

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Polarity {
    /// Forward rotation.
    Plus,
    /// Reverse rotation.
    Minus,
}

impl Polarity {
    pub fn sign(self) -> f64 {
        match self {
            Polarity::Plus => 1.0,
            Polarity::Minus => -1.0,
        }
    }

    pub fn symbol(self) -> char {
        match self {
            Polarity::Plus => '+',
            Polarity::Minus => '-',
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum NeckAxis {
    Yaw,
    Pitch,
    Roll,
}

/// How a motion reaches the motors.
#[derive(Debug, Clone, PartialEq)]
pub enum Drive {
    /// The motion owns the whole motor.
    Direct(MotorId),
    /// The motion owns one rotation direction of a shared motor.
    Terminals(Vec<(MotorId, Polarity)>),
    /// Routed through the neck linkage.
    Neck(NeckAxis),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Unit {
    Degrees,
    Normalized,
}

#[derive(Debug, Clone, PartialEq)]
pub struct MotionSpec {
    pub id: MotionId,
    pub drive: Drive,
    pub min: f64,
    pub max: f64,
    pub label: String,
}

#[derive(Debug, Clone, PartialEq)]
pub struct MotorSpec {
    pub id: MotorId,
    pub unit: Unit,
    pub min: f64,
    pub max: f64,
    pub name: String,
}

/// A dual-use motor asked to turn both ways at once.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Conflict {
    pub motor: MotorId,
    pub plus: MotionId,
    pub minus: MotionId,
}

impl fmt::Display for Conflict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "{} driven by {} (+) and {} (-)",
            self.motor, self.plus, self.minus
        )
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum RigError {
    /// Strict allocation found motors driven both ways.
    Conflict(Vec<Conflict>),
    /// Neck pose outside its range; `suggestion` is the clamped pose.
    PoseOutOfRange { suggestion: NeckPose },
    /// The rig table itself is inconsistent.
    Table(String),
    NonFinite(MotionId),
}

impl fmt::Display for RigError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            RigError::Conflict(list) => {
                write!(f, "motor conflict:")?;
                for c in list {
                    write!(f, " [{c}]")?;
                }
                Ok(())
            }
            RigError::PoseOutOfRange { suggestion } => write!(
                f,
                "neck pose out of range; nearest valid pose is yaw {} pitch {} roll {}",
                suggestion.yaw, suggestion.pitch, suggestion.roll
            ),
            RigError::Table(msg) => write!(f, "invalid rig table: {msg}"),
            RigError::NonFinite(id) => write!(f, "{id} has a non-finite value"),
        }
    }
}

impl core::error::Error for RigError {}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum ConflictPolicy {
    /// Dual-use motors receive `(+ intensity) - (- intensity)`.
    #[default]
    Net,
    /// Both terminals active is an error.
    Strict,
}

/// Sparse motion targets. Facial motions are intensities in `[0, 1]`; eye
/// and neck motions are degrees.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct MotionTargetSet(BTreeMap<MotionId, f64>);

impl MotionTargetSet {
    pub fn new() -> Self {
        Self::default()
    }

    /// Builds a set from raw `(motion number, value)` pairs.
    ///
    /// Returns `None` if a motion number is out of range.
    pub fn from_pairs(pairs: &[(u8, f64)]) -> Option<Self> {
        let mut set = Self::new();
        for &(id, v) in pairs {
            set.insert(MotionId::new(id)?, v);
        }
        Some(set)
    }

    pub fn insert(&mut self, id: MotionId, value: f64) -> Option<f64> {
        self.0.insert(id, value)
    }

    pub fn remove(&mut self, id: MotionId) -> Option<f64> {
        self.0.remove(&id)
    }

    pub fn get(&self, id: MotionId) -> Option<f64> {
        self.0.get(&id).copied()
    }

    /// Value for `id`, zero when absent.
    pub fn value(&self, id: MotionId) -> f64 {
        self.get(id).unwrap_or(0.0)
    }

    pub fn iter(&self) -> impl Iterator<Item = (MotionId, f64)> + '_ {
        self.0.iter().map(|(k, v)| (*k, *v))
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    /// Overlays `other` onto `self`, replacing shared entries.
    pub fn extend(&mut self, other: &MotionTargetSet) {
        for (k, v) in other.iter() {
            self.0.insert(k, v);
        }
    }
}

impl FromIterator<(MotionId, f64)> for MotionTargetSet {
    fn from_iter<I: IntoIterator<Item = (MotionId, f64)>>(iter: I) -> Self {
        MotionTargetSet(iter.into_iter().collect())
    }
}

/// One signed target per motor, indexed by motor id.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MotorTargets(pub [f64; MOTOR_COUNT]);

impl Default for MotorTargets {
    fn default() -> Self {
        MotorTargets([0.0; MOTOR_COUNT])
    }
}

impl MotorTargets {
    pub fn neutral() -> Self {
        Self::default()
    }

    pub fn get(&self, id: MotorId) -> f64 {
        self.0[id.index()]
    }

    pub fn set(&mut self, id: MotorId, v: f64) {
        self.0[id.index()] = v;
    }

    pub fn as_slice(&self) -> &[f64] {
        &self.0
    }
}

/// Head orientation in degrees.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct NeckPose {
    pub yaw: f64,
    pub pitch: f64,
    pub roll: f64,
}

/// Neck motor angles in degrees.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct NeckAngles {
    /// Motor 19.
    pub yaw: f64,
    /// Motor 20.
    pub left: f64,
    /// Motor 21.
    pub right: f64,
}

/// Linkage inverse without range checks: `pitch = (l + r) / 2`,
/// `roll = (l - r) / 2`.
pub fn neck_angles(pose: NeckPose) -> NeckAngles {
    NeckAngles {
        yaw: pose.yaw,
        left: pose.pitch + pose.roll,
        right: pose.pitch - pose.roll,
    }
}

/// Linkage forward map.
pub fn neck_forward(angles: NeckAngles) -> NeckPose {
    NeckPose {
        yaw: angles.yaw,
        pitch: (angles.left + angles.right) / 2.0,
        roll: (angles.left - angles.right) / 2.0,
    }
}

/// Motion and motor tables for one head.
#[derive(Debug, Clone, PartialEq)]
pub struct RigTable {
    version: u32,
    motions: Vec<MotionSpec>,
    motors: Vec<MotorSpec>,
    // (motor index, polarity) -> owning motion
    plus_owner: [Option<MotionId>; MOTOR_COUNT],
    minus_owner: [Option<MotionId>; MOTOR_COUNT],
}

impl RigTable {
    /// Validates and indexes a table.
    ///
    /// Every motion 1..=31 and motor 1..=21 must appear exactly once, every
    /// motor terminal must belong to exactly one motion, direct motors must
    /// not also expose terminals, and motors 19-21 are reserved for the
    /// neck motions.
    pub fn new(
        version: u32,
        mut motors: Vec<MotorSpec>,
        mut motions: Vec<MotionSpec>,
    ) -> Result<Self, RigError> {
        let bad = |msg: String| Err(RigError::Table(msg));
        motors.sort_by_key(|m| m.id);
        motions.sort_by_key(|m| m.id);
        if motors.len() != MOTOR_COUNT || motors.iter().map(|m| m.id).ne(MotorId::all()) {
            return bad("motors must be exactly 1..=21".into());
        }
        if motions.len() != MOTION_COUNT || motions.iter().map(|m| m.id).ne(MotionId::all()) {
            return bad("motions must be exactly 1..=31".into());
        }
        for m in &motors {
            if !(m.min.is_finite() && m.max.is_finite()) || m.min > m.max {
                return bad(alloc::format!("{} range is not ordered", m.id));
            }
        }

        let mut plus_owner = [None; MOTOR_COUNT];
        let mut minus_owner = [None; MOTOR_COUNT];
        let mut direct_owner: [Option<MotionId>; MOTOR_COUNT] = [None; MOTOR_COUNT];
        let mut neck_axes = [None::<MotionId>; 3];
        for spec in &motions {
            if !(spec.min.is_finite() && spec.max.is_finite()) || spec.min > spec.max {
                return bad(alloc::format!("{} range is not ordered", spec.id));
            }
            match &spec.drive {
                Drive::Direct(m) => {
                    if is_neck_motor(*m) {
                        return bad(alloc::format!("{m} is reserved for the neck"));
                    }
                    if direct_owner[m.index()].replace(spec.id).is_some() {
                        return bad(alloc::format!("{m} has two direct motions"));
                    }
                }
                Drive::Terminals(ts) => {
                    if ts.is_empty() {
                        return bad(alloc::format!("{} has no terminals", spec.id));
                    }
                    for (m, pol) in ts {
                        if is_neck_motor(*m) {
                            return bad(alloc::format!("{m} is reserved for the neck"));
                        }
                        let slot = match pol {
                            Polarity::Plus => &mut plus_owner[m.index()],
                            Polarity::Minus => &mut minus_owner[m.index()],
                        };
                        if let Some(prev) = slot.replace(spec.id) {
                            return bad(alloc::format!(
                                "{m}{} owned by both {prev} and {}",
                                pol.symbol(),
                                spec.id
                            ));
                        }
                    }
                }
                Drive::Neck(axis) => {
                    let i = *axis as usize;
                    if neck_axes[i].replace(spec.id).is_some() {
                        return bad(alloc::format!("neck axis {axis:?} assigned twice"));
                    }
                }
            }
        }
        if neck_axes.iter().any(Option::is_none) {
            return bad("every neck axis needs a motion".into());
        }
        for m in MotorId::all() {
            let i = m.index();
            if is_neck_motor(m) {
                continue;
            }
            let direct = direct_owner[i].is_some();
            let plus = plus_owner[i].is_some();
            let minus = minus_owner[i].is_some();
            match (direct, plus, minus) {
                (true, false, false) | (false, true, true) => {}
                (false, false, false) => return bad(alloc::format!("{m} is not driven")),
                (true, _, _) => {
                    return bad(alloc::format!("{m} is both direct and dual-use"))
                }
                _ => return bad(alloc::format!("{m} has only one terminal assigned")),
            }
        }

        Ok(RigTable {
            version,
            motions,
            motors,
            plus_owner,
            minus_owner,
        })
    }

    /// The Yui head.
    pub fn yui() -> Self {
        let motors = YUI_MOTORS
            .iter()
            .map(|&(id, unit, min, max, name)| MotorSpec {
                id: motor(id),
                unit,
                min,
                max,
                name: name.into(),
            })
            .collect();
        let motions = YUI_MOTIONS
            .iter()
            .map(|&(id, drive, min, max, label)| MotionSpec {
                id: MotionId(id),
                drive: drive.build(),
                min,
                max,
                label: label.into(),
            })
            .collect();
        Self::new(1, motors, motions).expect("built-in rig table is consistent")
    }

    pub fn version(&self) -> u32 {
        self.version
    }

    pub fn motions(&self) -> &[MotionSpec] {
        &self.motions
    }

    pub fn motors(&self) -> &[MotorSpec] {
        &self.motors
    }

    pub fn motion(&self, id: MotionId) -> &MotionSpec {
        &self.motions[id.get() as usize - 1]
    }

    pub fn motor(&self, id: MotorId) -> &MotorSpec {
        &self.motors[id.index()]
    }

    /// Replaces the range of one motion, e.g. from configuration.
    pub fn set_motion_range(&mut self, id: MotionId, min: f64, max: f64) -> Result<(), RigError> {
        if !(min.is_finite() && max.is_finite()) || min > max {
            return Err(RigError::Table(alloc::format!("{id} range is not ordered")));
        }
        let spec = &mut self.motions[id.get() as usize - 1];
        spec.min = min;
        spec.max = max;
        Ok(())
    }

    /// Motion owning the given terminal of a dual-use motor.
    pub fn terminal_owner(&self, m: MotorId, pol: Polarity) -> Option<MotionId> {
        match pol {
            Polarity::Plus => self.plus_owner[m.index()],
            Polarity::Minus => self.minus_owner[m.index()],
        }
    }

    /// Whether a motor exposes two terminals.
    pub fn is_dual_use(&self, m: MotorId) -> bool {
        self.plus_owner[m.index()].is_some()
    }

    /// Clamps `value` into the range of motion `id`.
    pub fn clamp_motion(&self, id: MotionId, value: f64) -> f64 {
        let spec = self.motion(id);
        value.clamp(spec.min, spec.max)
    }

    /// Copy of `targets` with every value clamped into its range.
    pub fn clamp_targets(&self, targets: &MotionTargetSet) -> Result<MotionTargetSet, RigError> {
        targets
            .iter()
            .map(|(id, v)| {
                if v.is_finite() {
                    Ok((id, self.clamp_motion(id, v)))
                } else {
                    Err(RigError::NonFinite(id))
                }
            })
            .collect()
    }

    /// Every dual-use motor whose two terminals are both active.
    pub fn detect_conflicts(&self, targets: &MotionTargetSet) -> Vec<Conflict> {
        let active = |id: MotionId| {
            let v = targets.value(id);
            v.is_finite() && self.clamp_motion(id, v) != 0.0
        };
        let mut out = Vec::new();
        for m in MotorId::all() {
            if let (Some(plus), Some(minus)) = (self.plus_owner[m.index()], self.minus_owner[m.index()]) {
                if active(plus) && active(minus) {
                    out.push(Conflict { motor: m, plus, minus });
                }
            }
        }
        out
    }

    /// Neck pose to motor angles, rejecting poses outside the motion ranges.
    pub fn neck_inverse(&self, pose: NeckPose) -> Result<NeckAngles, RigError> {
        let clamped = self.clamp_neck(pose);
        if clamped != pose {
            return Err(RigError::PoseOutOfRange { suggestion: clamped });
        }
        Ok(neck_angles(pose))
    }

    pub fn clamp_neck(&self, pose: NeckPose) -> NeckPose {
        NeckPose {
            yaw: self.clamp_motion(NECK_YAW, pose.yaw),
            pitch: self.clamp_motion(NECK_PITCH, pose.pitch),
            roll: self.clamp_motion(NECK_ROLL, pose.roll),
        }
    }

    /// Compiles motion targets into one signed target per motor.
    ///
    /// Values are clamped into their motion ranges first. Dual-use motors
    /// get `(+ motion) - (- motion)` under [`ConflictPolicy::Net`]; under
    /// [`ConflictPolicy::Strict`] any motor with both terminals active is
    /// reported instead. Neck motions go through the linkage inverse.
    pub fn motions_to_motor_targets(
        &self,
        targets: &MotionTargetSet,
        policy: ConflictPolicy,
    ) -> Result<MotorTargets, RigError> {
        let targets = self.clamp_targets(targets)?;
        if policy == ConflictPolicy::Strict {
            let conflicts = self.detect_conflicts(&targets);
            if !conflicts.is_empty() {
                return Err(RigError::Conflict(conflicts));
            }
        }
        let mut out = MotorTargets::neutral();
        let mut pose = NeckPose::default();
        for spec in &self.motions {
            let v = targets.value(spec.id);
            match &spec.drive {
                Drive::Direct(m) => out.0[m.index()] += v,
                Drive::Terminals(ts) => {
                    for (m, pol) in ts {
                        out.0[m.index()] += pol.sign() * v;
                    }
                }
                Drive::Neck(NeckAxis::Yaw) => pose.yaw = v,
                Drive::Neck(NeckAxis::Pitch) => pose.pitch = v,
                Drive::Neck(NeckAxis::Roll) => pose.roll = v,
            }
        }
        let neck = neck_angles(pose);
        out.set(NECK_YAW_MOTOR, neck.yaw);
        out.set(NECK_LEFT_MOTOR, neck.left);
        out.set(NECK_RIGHT_MOTOR, neck.right);
        for m in &self.motors {
            let v = out.get(m.id);
            out.set(m.id, v.clamp(m.min, m.max));
        }
        Ok(out)
    }
}

fn is_neck_motor(m: MotorId) -> bool {
    m == NECK_YAW_MOTOR || m == NECK_LEFT_MOTOR || m == NECK_RIGHT_MOTOR
}

#[derive(Clone, Copy)]
enum DriveDef {
    Direct(u8),
    Plus(u8),
    Minus(u8),
    MinusPair(u8, u8),
    Neck(NeckAxis),
}

impl DriveDef {
    fn build(self) -> Drive {
        match self {
            DriveDef::Direct(m) => Drive::Direct(motor(m)),
            DriveDef::Plus(m) => Drive::Terminals(alloc::vec![(motor(m), Polarity::Plus)]),
            DriveDef::Minus(m) => Drive::Terminals(alloc::vec![(motor(m), Polarity::Minus)]),
            DriveDef::MinusPair(a, b) => Drive::Terminals(alloc::vec![
                (motor(a), Polarity::Minus),
                (motor(b), Polarity::Minus)
            ]),
            DriveDef::Neck(axis) => Drive::Neck(axis),
        }
    }
}

use DriveDef::{Direct, Minus, MinusPair, Neck, Plus};
use Unit::{Degrees, Normalized};

const YUI_MOTIONS: [(u8, DriveDef, f64, f64, &str); MOTION_COUNT] = [
    (1, Direct(1), -35.0, 35.0, "Left eye left and right"),
    (2, Direct(2), -35.0, 35.0, "Right eye left and right"),
    (3, Direct(3), -14.0, 8.0, "Eye up and down"),
    (4, Plus(4), 0.0, 1.0, "Upper eyelid open"),
    (5, Minus(4), 0.0, 1.0, "Upper eyelid close"),
    (6, Plus(5), 0.0, 1.0, "Lower eyelid open"),
    (7, Minus(5), 0.0, 1.0, "Lower eyelid close"),
    (8, Plus(6), 0.0, 1.0, "Left outer eyebrow up"),
    (9, Plus(7), 0.0, 1.0, "Right outer eyebrow up"),
    (10, Minus(6), 0.0, 1.0, "Left outer eyebrow down"),
    (11, Minus(7), 0.0, 1.0, "Right outer eyebrow down"),
    (12, Plus(8), 0.0, 1.0, "Left inner eyebrow up"),
    (13, Plus(9), 0.0, 1.0, "Right inner eyebrow up"),
    (14, Minus(9), 0.0, 1.0, "Left inner eyebrow frown"),
    (15, Minus(8), 0.0, 1.0, "Right inner eyebrow frown"),
    (16, Direct(10), 0.0, 1.0, "Left cheek pull"),
    (17, Direct(11), 0.0, 1.0, "Right cheek pull"),
    (18, Direct(12), 0.0, 1.0, "Upper lip up"),
    (19, Direct(13), 0.0, 1.0, "Lower lip down"),
    (20, Plus(14), 0.0, 1.0, "Left corner of the mouth pull"),
    (21, Plus(15), 0.0, 1.0, "Right corner of the mouth pull"),
    (22, MinusPair(14, 15), 0.0, 1.0, "Mouth pucker"),
    (23, Plus(16), 0.0, 1.0, "Left corner of the mouth up"),
    (24, Plus(17), 0.0, 1.0, "Right corner of the mouth up"),
    (25, Minus(16), 0.0, 1.0, "Left corner of the mouth down"),
    (26, Minus(17), 0.0, 1.0, "Right corner of the mouth down"),
    (27, Plus(18), 0.0, 1.0, "Jaw open"),
    (28, Minus(18), 0.0, 1.0, "Jaw close"),
    (29, Neck(NeckAxis::Yaw), -83.0, 83.0, "Head turn"),
    (30, Neck(NeckAxis::Pitch), -30.0, 40.0, "Head up and down"),
    (31, Neck(NeckAxis::Roll), -21.0, 21.0, "Head tilt"),
];

// Neck differential motors span pitch ± roll over the motion ranges.
const YUI_MOTORS: [(u8, Unit, f64, f64, &str); MOTOR_COUNT] = [
    (1, Degrees, -35.0, 35.0, "eye_left_yaw"),
    (2, Degrees, -35.0, 35.0, "eye_right_yaw"),
    (3, Degrees, -14.0, 8.0, "eye_pitch"),
    (4, Normalized, -1.0, 1.0, "upper_eyelid"),
    (5, Normalized, -1.0, 1.0, "lower_eyelid"),
    (6, Normalized, -1.0, 1.0, "left_outer_brow"),
    (7, Normalized, -1.0, 1.0, "right_outer_brow"),
    (8, Normalized, -1.0, 1.0, "left_inner_brow"),
    (9, Normalized, -1.0, 1.0, "right_inner_brow"),
    (10, Normalized, 0.0, 1.0, "left_cheek"),
    (11, Normalized, 0.0, 1.0, "right_cheek"),
    (12, Normalized, 0.0, 1.0, "upper_lip"),
    (13, Normalized, 0.0, 1.0, "lower_lip"),
    (14, Normalized, -1.0, 1.0, "left_mouth_pull"),
    (15, Normalized, -1.0, 1.0, "right_mouth_pull"),
    (16, Normalized, -1.0, 1.0, "left_mouth_corner"),
    (17, Normalized, -1.0, 1.0, "right_mouth_corner"),
    (18, Normalized, -1.0, 1.0, "jaw"),
    (19, Degrees, -83.0, 83.0, "neck_yaw"),
    (20, Degrees, -51.0, 61.0, "neck_left"),
    (21, Degrees, -51.0, 61.0, "neck_right"),
];
