// Dense least squares by Householder QR. Matrices are row-major.

use alloc::vec;
use alloc::vec::Vec;

use crate::math;

#[derive(Debug, Clone, Copy, PartialEq)]
pub(crate) struct RankDeficient {
    pub column: usize,
}

/// Solves `min ‖X·B − Y‖` column by column.
///
/// `x` is `rows × cols`, `y` is `rows × rhs`; returns `B` as `cols × rhs`.
/// Requires `rows >= cols`.
pub(crate) fn least_squares(
    x: &[f64],
    rows: usize,
    cols: usize,
    y: &[f64],
    rhs: usize,
) -> Result<Vec<f64>, RankDeficient> {
    debug_assert_eq!(x.len(), rows * cols);
    debug_assert_eq!(y.len(), rows * rhs);
    if rows < cols {
        return Err(RankDeficient { column: rows });
    }
    let mut a = x.to_vec();
    let mut b = y.to_vec();

    let scale = (0..cols)
        .map(|j| math::sqrt((0..rows).map(|i| a[i * cols + j] * a[i * cols + j]).sum()))
        .fold(0.0_f64, f64::max);
    let tol = 1e-10 * scale.max(f64::MIN_POSITIVE);

    let mut v = vec![0.0; rows];
    for j in 0..cols {
        let norm = math::sqrt((j..rows).map(|i| a[i * cols + j] * a[i * cols + j]).sum());
        if norm <= tol {
            return Err(RankDeficient { column: j });
        }
        let head = a[j * cols + j];
        let alpha = if head >= 0.0 { -norm } else { norm };
        for i in j..rows {
            v[i] = a[i * cols + j];
        }
        v[j] -= alpha;
        let vnorm2: f64 = (j..rows).map(|i| v[i] * v[i]).sum();
        if vnorm2 == 0.0 {
            continue;
        }
        for k in j..cols {
            let dot: f64 = (j..rows).map(|i| v[i] * a[i * cols + k]).sum();
            let f = 2.0 * dot / vnorm2;
            for i in j..rows {
                a[i * cols + k] -= f * v[i];
            }
        }
        for k in 0..rhs {
            let dot: f64 = (j..rows).map(|i| v[i] * b[i * rhs + k]).sum();
            let f = 2.0 * dot / vnorm2;
            for i in j..rows {
                b[i * rhs + k] -= f * v[i];
            }
        }
    }

    let mut out = vec![0.0; cols * rhs];
    for k in 0..rhs {
        for j in (0..cols).rev() {
            let mut s = b[j * rhs + k];
            for c in (j + 1)..cols {
                s -= a[j * cols + c] * out[c * rhs + k];
            }
            out[j * rhs + k] = s / a[j * cols + j];
        }
    }
    Ok(out)
}
