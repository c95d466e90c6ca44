//! Independent reference computations.
//!
//! Everything here is deliberately naive: literal sums, brute-force scans,
//! exact integer arithmetic. None of it is fast, and none of it shares code
//! with the optimized implementations; tests pin the two against each other.
//! On scalar families the rescan below evaluates the same floating-point
//! expression the batched tables reduce to, so agreement there is bit for
//! bit, not just within tolerance.

use crate::dynamics::EvolutionCache;
use crate::error::Error;
use crate::linalg;
use crate::num::{ri, Real};
use crate::window::SequenceWindow;
use crate::Result;
use ndarray::{Array1, ArrayView1};
use num_bigint::BigUint;

/// Exact integer form of the power-sum lower bound
/// `(p + 1) * sum_{k=1..n} k^p >= n^(p+1)`, which underpins the ramp-probe
/// ladder estimates. Both sides are reported so a failure would be auditable.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PowerSumCheck {
    /// `(p + 1) * sum_{k=1..n} k^p`
    pub scaled_sum: BigUint,
    /// `n^(p+1)`
    pub power: BigUint,
    pub holds: bool,
}

pub fn power_sum_lower_bound(n: u64, p: u32) -> PowerSumCheck {
    let mut sum = BigUint::from(0u32);
    for k in 1..=n {
        sum += BigUint::from(k).pow(p);
    }
    let scaled_sum = sum * BigUint::from(p as u64 + 1);
    let power = BigUint::from(n).pow(p + 1);
    let holds = scaled_sum >= power;
    PowerSumCheck { scaled_sum, power, holds }
}

/// Brute-force sup of `3 (a_n - a_m) + (m - n)` over `m` in `[n, m_max]` for
/// the alternating-rate family, entirely in integers (`3 a_k` is `k` at even
/// `k` and `3k` at odd `k`). This is `3 ln M_n` at the floor exponent `-1/3`.
pub fn ex1_f_sup_scan_thirds(n: usize, m_max: usize) -> i64 {
    let t = |k: usize| -> i64 {
        if k % 2 == 0 {
            k as i64
        } else {
            3 * k as i64
        }
    };
    let mut best = i64::MIN;
    for m in n..=m_max.max(n) {
        best = best.max(t(n) - t(m) + (m as i64 - n as i64));
    }
    best
}

/// Literal prefix convolution `c_n = sum_{k=0..n} a_k b_{n-k}`, defined up to
/// the shorter input. Cross-checks the generator solve on constant-step
/// families, where the solution is exactly a convolution with the power
/// sequence of the step.
pub fn convolve_prefix<T: Real>(a: &[T], b: &[T]) -> Vec<T> {
    let len = a.len().min(b.len());
    (0..len)
        .map(|n| (0..=n).map(|k| a[k] * b[n - k]).fold(T::zero(), |acc, x| acc + x))
        .collect()
}

/// Literal solution of the inhomogeneous recursion by its closed sum
/// `u_n = sum_{k=0..n} A(n, k) v_k`, materializing every evolution operator.
pub fn generator_solve_by_sum<T: Real>(
    cache: &EvolutionCache<T>,
    v: &SequenceWindow<T>,
) -> Result<SequenceWindow<T>> {
    if v.dim() != cache.dim() {
        return Err(Error::DimensionMismatch { expected: cache.dim(), found: v.dim() });
    }
    if v.horizon() < cache.horizon() {
        return Err(Error::invalid(format!(
            "window has horizon {}, cache needs {}",
            v.horizon(),
            cache.horizon()
        )));
    }
    let h = cache.horizon();
    let mut u = SequenceWindow::zeros(h, cache.dim());
    for n in 0..=h {
        let mut acc = Array1::<T>::zeros(cache.dim());
        for k in 0..=n {
            acc = acc + cache.evolution(n, k)?.apply(v.slot(k));
        }
        u.set_slot(n, acc.view());
    }
    Ok(u)
}

/// Adapted norm of a vector at slot `n` by a literal rescan over the window,
/// through the public operator interface only.
pub fn adapted_norm_rescan<T: Real>(
    cache: &EvolutionCache<T>,
    alpha: T,
    horizon: usize,
    n: usize,
    x: ArrayView1<T>,
) -> Result<T> {
    if horizon > cache.horizon() || n > horizon {
        return Err(Error::IndexOutOfRange { m: n, n, horizon: cache.horizon() });
    }
    if x.len() != cache.dim() {
        return Err(Error::DimensionMismatch { expected: cache.dim(), found: x.len() });
    }
    if cache.is_scalar_track() {
        let mut best = T::neg_infinity();
        for m in n..=horizon {
            let t = cache.operator_norm_ln(m, n)? - alpha * ri::<T>(m - n);
            if t > best {
                best = t;
            }
        }
        Ok(best.exp() * linalg::vec_norm(cache.vector_norm(), x))
    } else {
        let mut best = T::neg_infinity();
        for m in n..=horizon {
            let y = cache.evolution(m, n)?.apply(x);
            let t = linalg::vec_norm(cache.vector_norm(), y.view()).ln() - alpha * ri::<T>(m - n);
            if t > best {
                best = t;
            }
        }
        Ok(best.exp())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::adapted_norms::AlphaContext;
    use crate::dynamics::OperatorFamily;
    use crate::linalg::VectorNorm;
    use ndarray::array;

    #[test]
    fn power_sum_bound_small_values() {
        let c = power_sum_lower_bound(10, 3);
        // sum of cubes to 10 is 3025; scaled by 4 against 10^4
        assert_eq!(c.scaled_sum, BigUint::from(12100u32));
        assert_eq!(c.power, BigUint::from(10000u32));
        assert!(c.holds);
        for n in 1..=60u64 {
            for p in 0..=6u32 {
                assert!(power_sum_lower_bound(n, p).holds, "failed at n={n} p={p}");
            }
        }
    }

    #[test]
    fn alternating_scan_matches_closed_form() {
        for n in 0..=64usize {
            let brute = ex1_f_sup_scan_thirds(n, 512);
            assert_eq!(brute, crate::examples::ex1::f_sup_thirds(n), "mismatch at n = {n}");
        }
    }

    #[test]
    fn convolution_is_the_literal_sum() {
        let a = [1.0f64, 2.0, 3.0];
        let b = [0.5f64, -1.0, 4.0];
        let c = convolve_prefix(&a, &b);
        assert_eq!(c.len(), 3);
        assert!((c[0] - 0.5).abs() < 1e-15);
        assert!((c[1] - 0.0).abs() < 1e-15);
        assert!((c[2] - (4.0 - 2.0 + 1.5)).abs() < 1e-15);
    }

    #[test]
    fn rescan_matches_context_bit_for_bit_on_scalar_families() {
        let cache = EvolutionCache::build(
            OperatorFamily::<f64>::Example2 { dim: 1 },
            256,
            VectorNorm::Sup,
        )
        .unwrap();
        let ctx = AlphaContext::new(&cache, -0.4, None).unwrap();
        let x = array![1.7f64];
        for n in [0usize, 3, 100, 256] {
            let fast = ctx.adapted_norm(n, x.view()).unwrap().value;
            let slow = adapted_norm_rescan(&cache, -0.4, 256, n, x.view()).unwrap();
            assert_eq!(fast.to_bits(), slow.to_bits(), "divergence at n = {n}");
        }
    }

    #[test]
    fn rescan_matches_context_on_dense_families() {
        let steps = vec![
            array![[0.4f64, 0.3], [-0.2, 0.8]],
            array![[0.9f64, -0.1], [0.0, 0.5]],
            array![[0.2f64, 0.7], [0.3, 0.1]],
        ];
        let cache = EvolutionCache::build(
            OperatorFamily::MatrixList { dim: 2, steps },
            3,
            VectorNorm::Sup,
        )
        .unwrap();
        let ctx = AlphaContext::new(&cache, 0.05, None).unwrap();
        let x = array![0.3f64, -1.1];
        for n in 0..=3usize {
            let fast = ctx.adapted_norm(n, x.view()).unwrap().value;
            let slow = adapted_norm_rescan(&cache, 0.05, 3, n, x.view()).unwrap();
            assert_eq!(fast.to_bits(), slow.to_bits(), "divergence at n = {n}");
        }
    }

    #[test]
    fn solve_by_sum_matches_power_convolution_on_constant_steps() {
        let rate = 0.6f64;
        let cache = EvolutionCache::build(
            OperatorFamily::Geometric { dim: 1, rate },
            8,
            VectorNorm::Sup,
        )
        .unwrap();
        let vs = [0.0f64, 1.0, -0.5, 2.0, 0.0, 0.25, -1.0, 0.75, 0.1];
        let mut v = SequenceWindow::<f64>::zeros(8, 1);
        for (k, val) in vs.iter().enumerate() {
            v.set_slot(k, array![*val].view());
        }
        let u = generator_solve_by_sum(&cache, &v).unwrap();
        let powers: Vec<f64> = (0..=8).map(|j| rate.powi(j as i32)).collect();
        let conv = convolve_prefix(&powers, &vs);
        for n in 0..=8usize {
            assert!(
                (u.slot(n)[0] - conv[n]).abs() <= 1e-12 * conv[n].abs().max(1.0),
                "n = {n}: {} vs {}",
                u.slot(n)[0],
                conv[n]
            );
        }
    }
}
