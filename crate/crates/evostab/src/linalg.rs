//! Small dense kernels: vector norms and induced operator norms.
//!
//! Matrices are ndarray `Array2` in row-major layout, sized for desk-scale
//! dimensions (the tooling targets d <= 16 or so). The sup-norm induced
//! operator norm is the exact maximum absolute row sum; the euclidean one is
//! the largest singular value, estimated by power iteration on the Gram
//! matrix to a relative accuracy of 1e-6 (the iteration stops once the
//! Rayleigh quotient settles to that tolerance, with a fixed iteration cap).

use crate::num::{r, Real};
use ndarray::{Array1, Array2, ArrayView1, ArrayView2};
use serde::{Deserialize, Serialize};

/// Which norm the ambient space `R^d` carries. Everything induced (operator
/// norms, adapted norms, certificates) follows this choice.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, Default)]
#[serde(rename_all = "lowercase")]
pub enum VectorNorm {
    /// max_i |x_i| (the default; induced operator norm is exact)
    #[default]
    Sup,
    /// sqrt(sum x_i^2) (induced norm via power iteration, rel. acc. 1e-6)
    Euclidean,
}

/// Relative accuracy target for the power-iteration singular value.
pub const TWO_NORM_REL_ACCURACY: f64 = 1e-6;
const POWER_ITER_CAP: usize = 512;

pub fn vec_norm<T: Real>(norm: VectorNorm, x: ArrayView1<T>) -> T {
    match norm {
        VectorNorm::Sup => x.iter().fold(T::zero(), |acc, v| acc.max(v.abs())),
        VectorNorm::Euclidean => x.iter().map(|v| *v * *v).sum::<T>().sqrt(),
    }
}

/// Exact induced sup-norm: max absolute row sum.
pub fn operator_norm_sup<T: Real>(a: ArrayView2<T>) -> T {
    let mut best = T::zero();
    for row in a.rows() {
        let s = row.iter().map(|v| v.abs()).sum::<T>();
        best = best.max(s);
    }
    best
}

/// Largest singular value by power iteration on `A^T A`.
///
/// Deterministic: the start vector is fixed (slightly tilted so it is not
/// orthogonal to a coordinate-aligned top singular vector). For the d = 1
/// case this is exact.
pub fn operator_norm_euclidean<T: Real>(a: ArrayView2<T>) -> T {
    let d = a.ncols();
    if d == 0 {
        return T::zero();
    }
    if d == 1 && a.nrows() == 1 {
        return a[[0, 0]].abs();
    }
    // Gram matrix once; iterate v <- G v.
    let gram: Array2<T> = a.t().dot(&a);
    let mut v: Array1<T> = Array1::from_iter((0..d).map(|i| T::one() + r::<T>(1e-3) * crate::num::ri::<T>(i)));
    let mut norm_v = vec_norm(VectorNorm::Euclidean, v.view());
    if norm_v == T::zero() {
        return T::zero();
    }
    v.mapv_inplace(|x| x / norm_v);
    let tol = r::<T>(TWO_NORM_REL_ACCURACY);
    let mut prev = T::zero();
    for _ in 0..POWER_ITER_CAP {
        let w = gram.dot(&v);
        norm_v = vec_norm(VectorNorm::Euclidean, w.view());
        if norm_v == T::zero() {
            return T::zero();
        }
        // Rayleigh quotient of the Gram matrix equals sigma_max^2 at the fix
        // point; its square root is the estimate we report.
        let est = norm_v.sqrt();
        v = w.mapv(|x| x / norm_v);
        if (est - prev).abs() <= tol * est.max(T::min_positive_value()) {
            return est;
        }
        prev = est;
    }
    prev
}

pub fn operator_norm<T: Real>(norm: VectorNorm, a: ArrayView2<T>) -> T {
    match norm {
        VectorNorm::Sup => operator_norm_sup(a),
        VectorNorm::Euclidean => operator_norm_euclidean(a),
    }
}

/// First non-finite entry of a matrix, if any (row-major order).
pub fn first_non_finite<T: Real>(a: ArrayView2<T>) -> Option<usize> {
    a.iter().position(|v| !v.is_finite())
}
