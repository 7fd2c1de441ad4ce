use alloc::string::{String, ToString};
use alloc::vec;
use alloc::vec::Vec;

use crate::rig::{Drive, MotorId, MotorTargets, RigTable, MOTOR_COUNT};

use super::{AuId, AuTable, ExpressionError};

/// Names of the operator tracker channels, in vector order.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ChannelRegistry {
    names: Vec<String>,
}

impl Default for ChannelRegistry {
    /// One channel per supported AU (`au1`, `au2`, ...), then `jaw_open`
    /// and four eye-direction channels.
    fn default() -> Self {
        let mut names: Vec<String> = AuId::all().map(|au| alloc::format!("au{}", au.get())).collect();
        for extra in ["jaw_open", "eye_look_left", "eye_look_right", "eye_look_up", "eye_look_down"] {
            names.push(extra.to_string());
        }
        ChannelRegistry { names }
    }
}

impl ChannelRegistry {
    pub fn new(names: Vec<String>) -> Self {
        ChannelRegistry { names }
    }

    pub fn len(&self) -> usize {
        self.names.len()
    }

    pub fn is_empty(&self) -> bool {
        self.names.is_empty()
    }

    pub fn names(&self) -> &[String] {
        &self.names
    }

    pub fn index_of(&self, name: &str) -> Option<usize> {
        self.names.iter().position(|n| n == name)
    }
}

/// Dense tracker channel values, each in `[0, 1]`.
#[derive(Debug, Clone, PartialEq)]
pub struct ExpressionVector(Vec<f64>);

impl ExpressionVector {
    pub fn zeros(registry: &ChannelRegistry) -> Self {
        ExpressionVector(vec![0.0; registry.len()])
    }

    /// Values are clamped into `[0, 1]`.
    pub fn new(registry: &ChannelRegistry, values: Vec<f64>) -> Result<Self, ExpressionError> {
        if values.len() != registry.len() {
            return Err(ExpressionError::Dimension {
                expected: registry.len(),
                found: values.len(),
            });
        }
        Self::from_values(values)
    }

    /// Vector without a registry; only the length is fixed.
    pub fn from_values(mut values: Vec<f64>) -> Result<Self, ExpressionError> {
        for v in &mut values {
            if !v.is_finite() {
                return Err(ExpressionError::NonFinite);
            }
            *v = v.clamp(0.0, 1.0);
        }
        Ok(ExpressionVector(values))
    }

    /// Zero vector with the named channels set.
    pub fn from_named(registry: &ChannelRegistry, values: &[(&str, f64)]) -> Result<Self, ExpressionError> {
        let mut out = vec![0.0; registry.len()];
        for &(name, v) in values {
            let i = registry.index_of(name).ok_or(ExpressionError::UnknownChannel)?;
            out[i] = v;
        }
        Self::from_values(out)
    }

    pub fn as_slice(&self) -> &[f64] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }
}

/// Affine expression map: offset `F_o` (length n) and weights `A` (n×m,
/// row-major, one row per motor).
#[derive(Debug, Clone, PartialEq)]
pub struct MappingParams {
    outputs: usize,
    inputs: usize,
    offset: Vec<f64>,
    weights: Vec<f64>,
    /// Scales `A·f`; 1.0 reproduces the operator, larger exaggerates.
    pub gain: f64,
}

impl MappingParams {
    pub fn new(offset: Vec<f64>, weights: Vec<f64>, inputs: usize) -> Result<Self, ExpressionError> {
        let outputs = offset.len();
        if weights.len() != outputs * inputs {
            return Err(ExpressionError::Dimension {
                expected: outputs * inputs,
                found: weights.len(),
            });
        }
        if offset.iter().chain(&weights).any(|v| !v.is_finite()) {
            return Err(ExpressionError::NonFinite);
        }
        Ok(MappingParams {
            outputs,
            inputs,
            offset,
            weights,
            gain: 1.0,
        })
    }

    pub fn zeros(outputs: usize, inputs: usize) -> Self {
        MappingParams {
            outputs,
            inputs,
            offset: vec![0.0; outputs],
            weights: vec![0.0; outputs * inputs],
            gain: 1.0,
        }
    }

    /// Hand-derived map for the default channel registry: every AU channel
    /// drives the motor terminals of its motions with unit weight,
    /// `jaw_open` drives the jaw-open terminal, and the eye channels span
    /// the eye ranges in degrees. Unknown channel names get zero weights.
    pub fn from_rig(rig: &RigTable, table: &AuTable, registry: &ChannelRegistry) -> Self {
        let mut p = Self::zeros(MOTOR_COUNT, registry.len());
        let motor = |id: u8| MotorId::new(id).expect("motor id in range");
        for (c, name) in registry.names().iter().enumerate() {
            let drive_motion = |p: &mut MappingParams, motion| match &rig.motion(motion).drive {
                Drive::Direct(m) => p.weights[m.index() * p.inputs + c] += 1.0,
                Drive::Terminals(ts) => {
                    for (m, pol) in ts {
                        p.weights[m.index() * p.inputs + c] += pol.sign();
                    }
                }
                Drive::Neck(_) => {}
            };
            if let Some(au) = name.strip_prefix("au").and_then(|n| n.parse().ok()).and_then(|n| AuId::new(n).ok()) {
                for &motion in table.motions(au) {
                    drive_motion(&mut p, motion);
                }
                continue;
            }
            let eye = |p: &mut MappingParams, ids: &[u8], spec_min: bool| {
                for &id in ids {
                    let m = rig.motor(motor(id));
                    p.weights[m.id.index() * p.inputs + c] = if spec_min { m.min } else { m.max };
                }
            };
            match name.as_str() {
                "jaw_open" => drive_motion(&mut p, crate::rig::MotionId::new(27).expect("jaw motion")),
                "eye_look_left" => eye(&mut p, &[1, 2], true),
                "eye_look_right" => eye(&mut p, &[1, 2], false),
                "eye_look_up" => eye(&mut p, &[3], false),
                "eye_look_down" => eye(&mut p, &[3], true),
                _ => {}
            }
        }
        p
    }

    pub fn outputs(&self) -> usize {
        self.outputs
    }

    pub fn inputs(&self) -> usize {
        self.inputs
    }

    pub fn offset(&self) -> &[f64] {
        &self.offset
    }

    /// Row-major weights, `outputs × inputs`.
    pub fn weights(&self) -> &[f64] {
        &self.weights
    }

    pub fn weight(&self, output: usize, input: usize) -> f64 {
        self.weights[output * self.inputs + input]
    }

    /// `F_o + gain·A·f`, without clamping.
    pub fn affine(&self, f: &ExpressionVector) -> Result<Vec<f64>, ExpressionError> {
        if f.len() != self.inputs {
            return Err(ExpressionError::Dimension {
                expected: self.inputs,
                found: f.len(),
            });
        }
        let f = f.as_slice();
        Ok((0..self.outputs)
            .map(|i| {
                let row = &self.weights[i * self.inputs..(i + 1) * self.inputs];
                let dot: f64 = row.iter().zip(f).map(|(a, x)| a * x).sum();
                self.offset[i] + self.gain * dot
            })
            .collect())
    }
}

/// Motor targets for an operator expression, clamped to the motor ranges.
pub fn map_expression(
    f: &ExpressionVector,
    params: &MappingParams,
    rig: &RigTable,
) -> Result<MotorTargets, ExpressionError> {
    if params.outputs() != MOTOR_COUNT {
        return Err(ExpressionError::Dimension {
            expected: MOTOR_COUNT,
            found: params.outputs(),
        });
    }
    let raw = params.affine(f)?;
    let mut out = MotorTargets::neutral();
    for (m, v) in rig.motors().iter().zip(raw) {
        out.set(m.id, v.clamp(m.min, m.max));
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn motor(id: u8) -> MotorId {
        MotorId::new(id).unwrap()
    }

    #[test]
    fn default_registry_layout() {
        let r = ChannelRegistry::default();
        assert_eq!(r.len(), 23);
        assert_eq!(r.index_of("au1"), Some(0));
        assert_eq!(r.index_of("au26"), Some(17));
        assert_eq!(r.index_of("jaw_open"), Some(18));
    }

    #[test]
    fn zero_input_gives_offset() {
        let rig = RigTable::yui();
        let reg = ChannelRegistry::default();
        let mut offset = vec![0.0; MOTOR_COUNT];
        offset[9] = 0.25;
        offset[0] = 3.0;
        let p = MappingParams::new(offset.clone(), vec![0.5; MOTOR_COUNT * reg.len()], reg.len()).unwrap();
        let w = map_expression(&ExpressionVector::zeros(&reg), &p, &rig).unwrap();
        assert_eq!(w.as_slice(), &offset[..]);
    }

    #[test]
    fn zero_weights_ignore_input() {
        let rig = RigTable::yui();
        let reg = ChannelRegistry::default();
        let p = MappingParams::zeros(MOTOR_COUNT, reg.len());
        let f = ExpressionVector::new(&reg, vec![0.7; reg.len()]).unwrap();
        assert_eq!(map_expression(&f, &p, &rig).unwrap(), MotorTargets::neutral());
    }

    #[test]
    fn dimension_mismatch_rejected() {
        let rig = RigTable::yui();
        let p = MappingParams::zeros(MOTOR_COUNT, 4);
        let f = ExpressionVector::from_values(vec![0.0; 5]).unwrap();
        assert_eq!(
            map_expression(&f, &p, &rig),
            Err(ExpressionError::Dimension { expected: 4, found: 5 })
        );
        let q = MappingParams::zeros(3, 5);
        assert!(map_expression(&f, &q, &rig).is_err());
        assert!(MappingParams::new(vec![0.0; 2], vec![0.0; 5], 3).is_err());
    }

    #[test]
    fn default_map_follows_rig() {
        let rig = RigTable::yui();
        let reg = ChannelRegistry::default();
        let p = MappingParams::from_rig(&rig, &AuTable::default(), &reg);
        let f = ExpressionVector::from_named(&reg, &[("au12", 0.8), ("jaw_open", 0.5), ("eye_look_right", 1.0)]).unwrap();
        let w = map_expression(&f, &p, &rig).unwrap();
        assert_eq!(w.get(motor(16)), 0.8);
        assert_eq!(w.get(motor(17)), 0.8);
        assert_eq!(w.get(motor(18)), 0.5);
        assert_eq!(w.get(motor(1)), 35.0);
        assert_eq!(w.get(motor(2)), 35.0);
        let down = ExpressionVector::from_named(&reg, &[("eye_look_down", 0.5)]).unwrap();
        assert_eq!(map_expression(&down, &p, &rig).unwrap().get(motor(3)), -7.0);
    }

    #[test]
    fn output_clamped_to_motor_range() {
        let rig = RigTable::yui();
        let reg = ChannelRegistry::default();
        let mut p = MappingParams::from_rig(&rig, &AuTable::default(), &reg);
        p.gain = 3.0;
        let f = ExpressionVector::from_named(&reg, &[("au6", 1.0)]).unwrap();
        assert_eq!(p.affine(&f).unwrap()[9], 3.0);
        assert_eq!(map_expression(&f, &p, &rig).unwrap().get(motor(10)), 1.0);
    }

    #[test]
    fn vector_clamps_and_checks() {
        let reg = ChannelRegistry::new(vec!["a".into(), "b".into()]);
        let f = ExpressionVector::new(&reg, vec![1.5, -1.0]).unwrap();
        assert_eq!(f.as_slice(), &[1.0, 0.0]);
        assert!(ExpressionVector::new(&reg, vec![0.0]).is_err());
        assert!(ExpressionVector::new(&reg, vec![f64::NAN, 0.0]).is_err());
        assert_eq!(ExpressionVector::from_named(&reg, &[("c", 1.0)]), Err(ExpressionError::UnknownChannel));
    }
}
