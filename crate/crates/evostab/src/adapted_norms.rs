//! Growth tables and adapted norms around one exponent.
//!
//! Fix an exponent `alpha`. The growth constant at start `n` on the window
//! is `M_n(alpha) = max_{n <= m <= N} e^{-alpha (m - n)} |A(m, n)|` (always
//! `>= 1`, the `m = n` term), and the adapted norm of a vector placed at
//! slot `n` is `|x|_{n,alpha} = max_m e^{-alpha (m - n)} |A(m, n) x|`, which
//! sandwiches between `|x|` and `M_n |x|`.
//!
//! Everything here is finite-horizon and says so: each start carries a
//! `tail_status` that is `Certified` only when a margin exponent below
//! `alpha` plus a per-family proven growth bound shows the sup cannot move
//! past the window edge; otherwise values are honest window maxima marked
//! `Heuristic`.

use crate::dynamics::EvolutionCache;
use crate::error::Error;
use crate::linalg;
use crate::num::{r, ri, Real};
use crate::window::SequenceWindow;
use crate::Result;
use serde::{Deserialize, Serialize};

/// Fitted ln-growth per step above which a table is considered unbounded.
pub const UNIFORMITY_SLOPE_THRESHOLD: f64 = 1e-3;
/// Tail ceiling for membership verdicts.
pub const MEMBERSHIP_TAIL_EPS: f64 = 1e-8;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum TailStatus {
    /// margin bound dominates the window maximum; the sup cannot sit past N
    Certified,
    /// window maximum only
    Heuristic,
}

/// Growth table, adapted-norm evaluator and verdict machinery for one
/// exponent over (a prefix of) a cached window.
#[derive(Debug)]
pub struct AlphaContext<'c, T: Real> {
    cache: &'c EvolutionCache<T>,
    alpha: T,
    horizon: usize,
    margin: Option<T>,
    m_ln: Vec<T>,
    argmax: Vec<usize>,
    tail: Vec<TailStatus>,
}

/// Value of one adapted-norm query plus the tail honesty flag of its start.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct NormValue<T> {
    pub value: T,
    pub certified: bool,
}

impl<'c, T: Real> AlphaContext<'c, T> {
    /// Growth table over the cache's full window.
    pub fn new(cache: &'c EvolutionCache<T>, alpha: T, margin: Option<T>) -> Result<Self> {
        Self::with_horizon(cache, alpha, margin, cache.horizon())
    }

    /// Growth table truncated to `horizon` (used for half-window
    /// convergence diagnostics).
    pub fn with_horizon(
        cache: &'c EvolutionCache<T>,
        alpha: T,
        margin: Option<T>,
        horizon: usize,
    ) -> Result<Self> {
        if !alpha.is_finite() {
            return Err(Error::invalid("alpha must be finite"));
        }
        if horizon == 0 || horizon > cache.horizon() {
            return Err(Error::invalid(format!(
                "context horizon must be in 1..={}, got {horizon}",
                cache.horizon()
            )));
        }
        if let Some(b) = margin {
            if !(b < alpha) {
                return Err(Error::invalid(format!(
                    "margin exponent {b} must lie strictly below alpha {alpha}"
                )));
            }
        }
        let (m_ln, argmax) = if cache.track_count() >= 1 {
            Self::table_log_domain(cache, alpha, horizon)
        } else {
            Self::table_dense(cache, alpha, horizon)
        };
        let tail = Self::tail_statuses(cache, alpha, margin, horizon, &m_ln);
        Ok(AlphaContext { cache, alpha, horizon, margin, m_ln, argmax, tail })
    }

    /// Suffix-max scan over per-track weighted potentials; O(N) per track.
    fn table_log_domain(
        cache: &EvolutionCache<T>,
        alpha: T,
        horizon: usize,
    ) -> (Vec<T>, Vec<usize>) {
        let tracks = cache.track_count();
        let mut m_ln = vec![T::neg_infinity(); horizon + 1];
        let mut argmax = vec![0usize; horizon + 1];
        for j in 0..tracks {
            // W_m = S_m - alpha m, shifted by the common S_0 (irrelevant to
            // differences). suffix[m] = leftmost max of W over [m, N].
            let w: Vec<T> = (0..=horizon)
                .map(|m| cache.track_ln(j, m, 0) - alpha * ri::<T>(m))
                .collect();
            let mut suffix = vec![(T::neg_infinity(), 0usize); horizon + 1];
            let mut best = (T::neg_infinity(), horizon);
            for m in (0..=horizon).rev() {
                if w[m] >= best.0 {
                    best = (w[m], m);
                }
                suffix[m] = best;
            }
            for n in 0..=horizon {
                let v = suffix[n].0 - w[n];
                if v > m_ln[n] || (j == 0) {
                    m_ln[n] = m_ln[n].max(v);
                    argmax[n] = suffix[n].1;
                }
            }
        }
        (m_ln, argmax)
    }

    fn table_dense(cache: &EvolutionCache<T>, alpha: T, horizon: usize) -> (Vec<T>, Vec<usize>) {
        let mut m_ln = Vec::with_capacity(horizon + 1);
        let mut argmax = Vec::with_capacity(horizon + 1);
        for n in 0..=horizon {
            let mut best = T::neg_infinity();
            let mut at = n;
            for m in n..=horizon {
                let v = cache.norm_ln_unchecked(m, n) - alpha * ri::<T>(m - n);
                if v > best {
                    best = v;
                    at = m;
                }
            }
            m_ln.push(best);
            argmax.push(at);
        }
        (m_ln, argmax)
    }

    fn tail_statuses(
        cache: &EvolutionCache<T>,
        alpha: T,
        margin: Option<T>,
        horizon: usize,
        m_ln: &[T],
    ) -> Vec<TailStatus> {
        let Some(beta) = margin else {
            return vec![TailStatus::Heuristic; horizon + 1];
        };
        (0..=horizon)
            .map(|n| {
                match cache.family().uniform_growth_ln_bound(beta, n) {
                    Some(bound_ln) => {
                        // every m > N term is <= e^{(beta-alpha)(m-n)} M_n(beta),
                        // largest at m = N+1
                        let tail_ln = (beta - alpha) * ri::<T>(horizon + 1 - n) + bound_ln;
                        if tail_ln <= m_ln[n] {
                            TailStatus::Certified
                        } else {
                            TailStatus::Heuristic
                        }
                    }
                    None => TailStatus::Heuristic,
                }
            })
            .collect()
    }

    pub fn alpha(&self) -> T {
        self.alpha
    }

    pub fn margin(&self) -> Option<T> {
        self.margin
    }

    pub fn cache(&self) -> &'c EvolutionCache<T> {
        self.cache
    }

    /// Effective horizon of this table (may be below the cache's).
    pub fn horizon(&self) -> usize {
        self.horizon
    }

    pub fn dim(&self) -> usize {
        self.cache.dim()
    }

    pub fn growth_ln(&self, n: usize) -> T {
        self.m_ln[n]
    }

    pub fn growth(&self, n: usize) -> T {
        self.m_ln[n].exp()
    }

    /// Index where the per-start sup is attained (leftmost).
    pub fn growth_argmax(&self, n: usize) -> usize {
        self.argmax[n]
    }

    pub fn tail_status(&self, n: usize) -> TailStatus {
        self.tail[n]
    }

    pub fn tail_counts(&self) -> (usize, usize) {
        let certified = self.tail.iter().filter(|t| **t == TailStatus::Certified).count();
        (certified, self.tail.len() - certified)
    }

    pub fn growth_table_ln(&self) -> &[T] {
        &self.m_ln
    }

    fn check_slot(&self, n: usize) -> Result<()> {
        if n > self.horizon {
            return Err(Error::IndexOutOfRange { m: n, n, horizon: self.horizon });
        }
        Ok(())
    }

    /// Adapted norm of a vector placed at slot `n`: a literal maximum over
    /// `m` (for log-domain backends this is the expression the rescan oracle
    /// uses, term for term, so single queries agree bit for bit).
    pub fn adapted_norm(&self, n: usize, x: ndarray::ArrayView1<T>) -> Result<NormValue<T>> {
        self.check_slot(n)?;
        if x.len() != self.dim() {
            return Err(Error::DimensionMismatch { expected: self.dim(), found: x.len() });
        }
        let value = if self.cache.is_scalar_track() {
            let mut best = T::neg_infinity();
            for m in n..=self.horizon {
                let t = self.cache.norm_ln_unchecked(m, n) - self.alpha * ri::<T>(m - n);
                if t > best {
                    best = t;
                }
            }
            best.exp() * linalg::vec_norm(self.cache.vector_norm(), x)
        } else {
            let mut best = T::neg_infinity();
            for m in n..=self.horizon {
                let applied = self.cache.apply_norm_unchecked(m, n, x);
                let t = applied.ln() - self.alpha * ri::<T>(m - n);
                if t > best {
                    best = t;
                }
            }
            best.exp()
        };
        Ok(NormValue { value, certified: self.tail[n] == TailStatus::Certified })
    }

    /// ln of the adapted norm of one window slot, using the batched table
    /// for log-domain backends (`-inf` for a zero slot).
    pub fn slot_norm_ln(&self, w: &SequenceWindow<T>, k: usize) -> Result<T> {
        self.check_slot(k)?;
        self.check_window(w)?;
        Ok(self.slot_norm_ln_unchecked(w, k))
    }

    fn slot_norm_ln_unchecked(&self, w: &SequenceWindow<T>, k: usize) -> T {
        if self.cache.is_scalar_track() {
            // the scalar factor is the same for every m, so the slot norm
            // factorizes exactly through the growth table
            let vn = linalg::vec_norm(self.cache.vector_norm(), w.slot(k));
            return self.m_ln[k] + vn.ln();
        }
        let mut best = T::neg_infinity();
        for m in k..=self.horizon {
            let applied = self.cache.apply_norm_unchecked(m, k, w.slot(k));
            let t = applied.ln() - self.alpha * ri::<T>(m - k);
            if t > best {
                best = t;
            }
        }
        best
    }

    fn check_window(&self, w: &SequenceWindow<T>) -> Result<()> {
        if w.dim() != self.dim() {
            return Err(Error::DimensionMismatch { expected: self.dim(), found: w.dim() });
        }
        if w.horizon() < self.horizon {
            return Err(Error::invalid(format!(
                "window has horizon {}, context needs {}",
                w.horizon(),
                self.horizon
            )));
        }
        Ok(())
    }

    /// Window norm `max_k |u_k|_{k,alpha}` in log-domain.
    pub fn window_norm_ln(&self, w: &SequenceWindow<T>) -> Result<T> {
        self.check_window(w)?;
        let mut best = T::neg_infinity();
        for k in 0..=self.horizon {
            let v = self.slot_norm_ln_unchecked(w, k);
            if v > best {
                best = v;
            }
        }
        Ok(best)
    }

    /// Linear-domain window norm (may overflow for extreme growth; use the
    /// ln variant in that regime).
    pub fn window_norm(&self, w: &SequenceWindow<T>) -> Result<T> {
        Ok(self.window_norm_ln(w)?.exp())
    }

    /// Uniform boundedness of the growth table: sup and the fitted ln-slope
    /// over the top half of the window.
    pub fn uniformity(&self) -> UniformityReport<T> {
        let sup_m_ln = self.m_ln.iter().copied().fold(T::neg_infinity(), T::max);
        let half = self.horizon / 2;
        let slope = fit_slope(&self.m_ln[half..]);
        UniformityReport {
            uniform: slope <= r::<T>(UNIFORMITY_SLOPE_THRESHOLD),
            sup_m_ln,
            slope,
        }
    }

    /// Membership verdict for "vanishes at 0 and decays in adapted norms".
    /// Quarter maxima of the slot norms drive it: `yes` needs slot 0 to be
    /// zero and the last quarter both below the tail ceiling and no larger
    /// than the previous quarter; `no` needs a nonzero slot 0 or growth
    /// between the last two quarters above the ceiling.
    pub fn membership(&self, w: &SequenceWindow<T>) -> Result<MembershipReport<T>> {
        self.check_window(w)?;
        let len = self.horizon + 1;
        let q3_start = len / 2;
        let q4_start = (3 * len) / 4;
        let mut q3 = T::neg_infinity();
        let mut q4 = T::neg_infinity();
        for k in q3_start..len {
            let v = self.slot_norm_ln_unchecked(w, k);
            if k < q4_start {
                q3 = q3.max(v);
            } else {
                q4 = q4.max(v);
            }
        }
        let initial_zero = w.slot_is_zero(0);
        let eps_ln = r::<T>(MEMBERSHIP_TAIL_EPS).ln();
        let grows = q4 > q3 + r::<T>(1e-9) && q4 > eps_ln;
        let verdict = if !initial_zero || grows {
            Membership::No
        } else if q4 < eps_ln && q4 <= q3 {
            Membership::Yes
        } else {
            Membership::Inconclusive
        };
        Ok(MembershipReport { verdict, initial_zero, q3_max_ln: q3, q4_max_ln: q4 })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Membership {
    Yes,
    No,
    Inconclusive,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MembershipReport<T> {
    pub verdict: Membership,
    pub initial_zero: bool,
    pub q3_max_ln: T,
    pub q4_max_ln: T,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct UniformityReport<T> {
    pub uniform: bool,
    pub sup_m_ln: T,
    pub slope: T,
}

/// Least-squares slope of `ys` against consecutive integers.
pub(crate) fn fit_slope<T: Real>(ys: &[T]) -> T {
    let n = ys.len();
    if n < 2 {
        return T::zero();
    }
    let nf = ri::<T>(n);
    let mean_x = (nf - T::one()) / r::<T>(2.0);
    let mean_y = ys.iter().copied().fold(T::zero(), |a, b| a + b) / nf;
    let mut num = T::zero();
    let mut den = T::zero();
    for (i, y) in ys.iter().enumerate() {
        let dx = ri::<T>(i) - mean_x;
        num = num + dx * (*y - mean_y);
        den = den + dx * dx;
    }
    num / den
}

/// How a single grid exponent looks on this window.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Classification {
    /// weighted norms still climbing at the window edge: no admissibility
    /// evidence
    Growing,
    /// admissible-looking but with unbounded growth constants
    Nonuniform,
    /// admissible-looking with bounded growth constants
    Uniform,
}

/// Per-exponent record emitted by [`admissible_scan`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ScanRecord<T> {
    pub alpha: T,
    pub classification: Classification,
    pub uniform: bool,
    pub sup_m_ln: T,
    /// same sup on the half window (horizon-convergence diagnostic)
    pub sup_m_ln_half: T,
    pub slope: T,
    pub edge_attained: bool,
    /// largest per-start gain of the full window over the half window among
    /// early starts; nonzero means per-start sups were still moving
    pub prefix_growth: T,
    pub tail_certified: usize,
    pub tail_heuristic: usize,
}

/// Growth still visible at the window edge beyond this means "growing".
pub const SCAN_PREFIX_GROWTH_TOL: f64 = 1e-6;
/// A stable overall sup (full vs half window) within this is "converged".
pub const SCAN_SUP_GROWTH_TOL: f64 = 1e-3;

/// Classify each exponent of a grid.
///
/// Three signals feed the label. No admissibility evidence ("growing") when
/// either some early start attains its sup only at the window edge, or the
/// per-start sups of early starts still grew between the half and the full
/// window. Otherwise per-start sups have settled, and the exponent is
/// "uniform" when the table's overall sup has also stopped moving and its
/// top-half slope is flat, else "nonuniform" (per-start sups settle
/// individually but grow along the starts).
pub fn admissible_scan<T: Real>(
    cache: &EvolutionCache<T>,
    grid: &[T],
    margin: Option<T>,
) -> Result<Vec<ScanRecord<T>>> {
    if grid.is_empty() {
        return Err(Error::invalid("exponent grid must be nonempty"));
    }
    let horizon = cache.horizon();
    let mut out = Vec::with_capacity(grid.len());
    for &alpha in grid {
        let margin_for = margin.filter(|b| *b < alpha);
        let ctx = AlphaContext::new(cache, alpha, margin_for)?;
        let half_ctx = if horizon >= 2 {
            Some(AlphaContext::with_horizon(cache, alpha, margin_for, horizon / 2)?)
        } else {
            None
        };
        let uni = ctx.uniformity();
        let edge_cut = horizon.saturating_sub((horizon / 50).max(2));
        let edge_attained =
            (0..=horizon / 2).any(|n| ctx.growth_argmax(n) > edge_cut);
        let prefix_growth = half_ctx
            .as_ref()
            .map(|half| {
                (0..=horizon / 4)
                    .map(|n| ctx.growth_ln(n) - half.growth_ln(n))
                    .fold(T::zero(), T::max)
            })
            .unwrap_or_else(T::zero);
        let sup_m_ln_half = half_ctx
            .as_ref()
            .map(|c| c.uniformity().sup_m_ln)
            .unwrap_or(uni.sup_m_ln);
        let sup_settled = uni.sup_m_ln - sup_m_ln_half <= r::<T>(SCAN_SUP_GROWTH_TOL);
        let classification = if edge_attained || prefix_growth > r::<T>(SCAN_PREFIX_GROWTH_TOL) {
            Classification::Growing
        } else if uni.uniform && sup_settled {
            Classification::Uniform
        } else {
            Classification::Nonuniform
        };
        let (tail_certified, tail_heuristic) = ctx.tail_counts();
        out.push(ScanRecord {
            alpha,
            classification,
            uniform: uni.uniform && sup_settled,
            sup_m_ln: uni.sup_m_ln,
            sup_m_ln_half,
            slope: uni.slope,
            edge_attained,
            prefix_growth,
            tail_certified,
            tail_heuristic,
        });
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dynamics::OperatorFamily;
    use crate::linalg::VectorNorm;
    use crate::window::basis_vector;
    use ndarray::array;

    fn cache(family: OperatorFamily<f64>, horizon: usize) -> EvolutionCache<f64> {
        EvolutionCache::build(family, horizon, VectorNorm::Sup).unwrap()
    }

    #[test]
    fn geometric_growth_table_is_flat() {
        let c = cache(OperatorFamily::Geometric { dim: 1, rate: (-1.0f64).exp() }, 64);
        // alpha = -1 is the attained floor: every weighted term is 1
        let ctx = AlphaContext::new(&c, -1.0, None).unwrap();
        for n in 0..=64 {
            assert!(ctx.growth_ln(n).abs() < 1e-12, "M_n should be 1");
        }
        let uni = ctx.uniformity();
        assert!(uni.uniform);
        assert!(uni.slope.abs() < 1e-12);
    }

    #[test]
    fn example1_growth_table_matches_closed_form() {
        let c = cache(OperatorFamily::Example1 { dim: 1 }, 128);
        let third = 1.0 / 3.0;
        let ctx = AlphaContext::new(&c, -third, None).unwrap();
        for n in 0..=127 {
            let expected = if n % 2 == 0 { 0.0 } else { 2.0 * n as f64 / 3.0 };
            assert!(
                (ctx.growth_ln(n) - expected).abs() <= 1e-12 * expected.max(1.0),
                "n = {n}: {} vs {expected}",
                ctx.growth_ln(n)
            );
        }
        // adapted norm of 1 at odd n is e^{2n/3}
        let x = array![1.0f64];
        let got = ctx.adapted_norm(1, x.view()).unwrap().value;
        assert!((got - 1.9477340410546757).abs() < 1e-12, "got {got}");
    }

    #[test]
    fn sandwich_bounds_hold() {
        let steps = vec![
            array![[0.4f64, 0.3], [-0.2, 0.8]],
            array![[0.9f64, -0.1], [0.0, 0.5]],
            array![[0.2f64, 0.7], [0.3, 0.1]],
            array![[1.1f64, 0.0], [-0.4, 0.6]],
        ];
        let c = cache(OperatorFamily::MatrixList { dim: 2, steps }, 4);
        let ctx = AlphaContext::new(&c, 0.1, None).unwrap();
        for n in 0..=4usize {
            for i in 0..2 {
                let x = basis_vector::<f64>(2, i);
                let nv = ctx.adapted_norm(n, x.view()).unwrap().value;
                let plain = 1.0;
                let upper = ctx.growth(n) * plain;
                assert!(nv >= plain * (1.0 - 1e-10), "lower sandwich at n={n}");
                assert!(nv <= upper * (1.0 + 1e-10), "upper sandwich at n={n}");
            }
        }
    }

    #[test]
    fn tail_certification_uses_margin_bound() {
        let c = cache(OperatorFamily::Example1 { dim: 1 }, 64);
        let certified = AlphaContext::new(&c, 0.0, Some(-1.0 / 3.0)).unwrap();
        assert_eq!(certified.tail_counts().1, 0, "all starts certified");
        let heuristic = AlphaContext::new(&c, 0.0, None).unwrap();
        assert_eq!(heuristic.tail_counts().0, 0, "no margin, no certificates");
        assert!(certified.adapted_norm(3, array![1.0].view()).unwrap().certified);
        assert!(!heuristic.adapted_norm(3, array![1.0].view()).unwrap().certified);
    }

    #[test]
    fn margin_must_sit_below_alpha() {
        let c = cache(OperatorFamily::Geometric { dim: 1, rate: 0.5 }, 8);
        assert!(AlphaContext::new(&c, 0.0, Some(0.0)).is_err());
        assert!(AlphaContext::new(&c, 0.0, Some(-0.2)).is_ok());
    }

    #[test]
    fn example1_scan_matches_expected_labels() {
        let c = cache(OperatorFamily::Example1 { dim: 1 }, 512);
        let records =
            admissible_scan(&c, &[-0.5, -1.0 / 3.0, 0.0], Some(-1.0 / 3.0 - 1e-9)).unwrap();
        assert_eq!(records[0].classification, Classification::Growing);
        assert_eq!(records[1].classification, Classification::Nonuniform);
        assert_eq!(records[2].classification, Classification::Nonuniform);
    }

    #[test]
    fn identity_and_geometric_scan_labels() {
        let c = cache(OperatorFamily::Identity { dim: 2 }, 128);
        let records = admissible_scan(&c, &[-0.1, 0.0, 0.5], None).unwrap();
        assert_eq!(records[0].classification, Classification::Growing);
        assert_eq!(records[1].classification, Classification::Uniform);
        assert_eq!(records[2].classification, Classification::Uniform);
    }

    #[test]
    fn membership_verdicts() {
        let c = cache(OperatorFamily::Geometric { dim: 1, rate: (-1.0f64).exp() }, 64);
        let ctx = AlphaContext::new(&c, 0.0, None).unwrap();
        // all-zero window belongs
        let zeros = SequenceWindow::<f64>::zeros(64, 1);
        assert_eq!(ctx.membership(&zeros).unwrap().verdict, Membership::Yes);
        // nonzero slot 0 cannot belong
        let mut bad = SequenceWindow::<f64>::zeros(64, 1);
        bad.set_slot(0, array![1.0].view());
        assert_eq!(ctx.membership(&bad).unwrap().verdict, Membership::No);
        // decaying tail belongs
        let mut decay = SequenceWindow::<f64>::zeros(64, 1);
        for k in 1..=64usize {
            decay.set_slot(k, array![(-(k as f64)).exp()].view());
        }
        assert_eq!(ctx.membership(&decay).unwrap().verdict, Membership::Yes);
        // growing tail does not
        let mut grow = SequenceWindow::<f64>::zeros(64, 1);
        for k in 1..=64usize {
            grow.set_slot(k, array![(0.5 * k as f64).exp()].view());
        }
        assert_eq!(ctx.membership(&grow).unwrap().verdict, Membership::No);
        // small but non-decreasing tail stays inconclusive
        let mut flat = SequenceWindow::<f64>::zeros(64, 1);
        for k in 1..=64usize {
            flat.set_slot(k, array![1e-12 * (1.0 + 1e-10 * k as f64)].view());
        }
        assert_eq!(ctx.membership(&flat).unwrap().verdict, Membership::Inconclusive);
    }

    #[test]
    fn window_norm_matches_slot_maxima() {
        let c = cache(OperatorFamily::Geometric { dim: 1, rate: 0.5 }, 16);
        let ctx = AlphaContext::new(&c, 0.0, None).unwrap();
        let mut w = SequenceWindow::<f64>::zeros(16, 1);
        w.set_slot(3, array![2.0].view());
        w.set_slot(9, array![-0.5].view());
        let direct = (0..=16usize)
            .map(|k| ctx.slot_norm_ln(&w, k).unwrap())
            .fold(f64::NEG_INFINITY, f64::max);
        assert!((ctx.window_norm_ln(&w).unwrap() - direct).abs() < 1e-14);
        // geometric at alpha=0 with rate < 1: slot norm equals the plain norm
        assert!((ctx.window_norm(&w).unwrap() - 2.0).abs() < 1e-12);
    }
}
