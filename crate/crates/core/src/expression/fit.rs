use alloc::vec::Vec;

use crate::linalg;
use crate::math;

use super::{ExpressionError, MappingParams};

/// One calibration pair: tracker inputs and the motor targets wanted for
/// them.
#[derive(Debug, Clone, PartialEq)]
pub struct CalibrationSample {
    pub inputs: Vec<f64>,
    pub targets: Vec<f64>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct FitReport {
    pub params: MappingParams,
    /// Per-motor residual norm `‖F_o + A·f − w‖₂` over all samples.
    pub residuals: Vec<f64>,
}

impl FitReport {
    pub fn max_residual(&self) -> f64 {
        self.residuals.iter().copied().fold(0.0, f64::max)
    }
}

/// Least-squares fit of `F_o` and `A` to calibration samples.
///
/// Needs at least `m + 1` samples whose inputs, together with a constant
/// column, have full column rank.
pub fn fit_mapping(samples: &[CalibrationSample]) -> Result<FitReport, ExpressionError> {
    let first = samples.first().ok_or(ExpressionError::TooFewSamples { needed: 1, found: 0 })?;
    let m = first.inputs.len();
    let n = first.targets.len();
    if samples.len() < m + 1 {
        return Err(ExpressionError::TooFewSamples {
            needed: m + 1,
            found: samples.len(),
        });
    }
    let cols = m + 1;
    let mut x = Vec::with_capacity(samples.len() * cols);
    let mut y = Vec::with_capacity(samples.len() * n);
    for s in samples {
        if s.inputs.len() != m {
            return Err(ExpressionError::Dimension {
                expected: m,
                found: s.inputs.len(),
            });
        }
        if s.targets.len() != n {
            return Err(ExpressionError::Dimension {
                expected: n,
                found: s.targets.len(),
            });
        }
        if s.inputs.iter().chain(&s.targets).any(|v| !v.is_finite()) {
            return Err(ExpressionError::NonFinite);
        }
        x.push(1.0);
        x.extend_from_slice(&s.inputs);
        y.extend_from_slice(&s.targets);
    }

    let beta = linalg::least_squares(&x, samples.len(), cols, &y, n)
        .map_err(|e| ExpressionError::RankDeficient { column: e.column })?;

    // beta is (m+1) × n: row 0 is the offset, row j+1 holds channel j.
    let offset: Vec<f64> = beta[..n].to_vec();
    let mut weights = Vec::with_capacity(n * m);
    for motor in 0..n {
        for ch in 0..m {
            weights.push(beta[(ch + 1) * n + motor]);
        }
    }
    let params = MappingParams::new(offset, weights, m)?;

    let mut sq = alloc::vec![0.0; n];
    for s in samples {
        for (motor, acc) in sq.iter_mut().enumerate() {
            let row = &params.weights()[motor * m..(motor + 1) * m];
            let pred = params.offset()[motor] + row.iter().zip(&s.inputs).map(|(a, f)| a * f).sum::<f64>();
            let r = pred - s.targets[motor];
            *acc += r * r;
        }
    }
    let residuals = sq.into_iter().map(math::sqrt).collect();
    Ok(FitReport { params, residuals })
}
