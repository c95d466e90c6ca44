//! Decay certificates and their independent verification.
//!
//! A certificate packages the conclusion "the family decays at rate `nu`
//! relative to its own growth constants" together with everything needed to
//! re-check it from scratch: the family, the window, the weight `alpha`, and
//! the inverse-norm bound `c` it was derived from. Verification never trusts
//! the derivation — it rebuilds the growth table and compares the claimed
//! envelope against every cached operator norm.
//!
//! The quantitative chain behind a certificate, in the order the checks
//! exercise it:
//! plateau `‖A(m,n)‖ <= [c (e^alpha - 1) + 1] M_n`, the power ladder
//! `‖A(m,n)‖ <= plateau * c^k k! / (m-n)^k * M_n`, and the exponential
//! envelope with prefactor `2 [c (e^alpha - 1) + 1]` and rate `nu = 1/(2c)`.
//! A bounded-orbit certificate runs the same ladder with the orbit's own
//! rise-time `theta` in place of `c`.

use ndarray::ArrayView1;
use serde::{Deserialize, Serialize};

use crate::adapted_norms::AlphaContext;
use crate::dynamics::{EvolutionCache, FamilyFile};
use crate::error::Error;
use crate::Result;
use crate::evolution_operators::{
    approximate_point_gap, generator_inverse_bounds, BoundQuality, InverseNormBounds,
    ProbeConfig,
};
use crate::linalg::{self, VectorNorm};
use crate::num::{r, ri, Real};
use crate::window::SequenceWindow;

/// Verification slack for certified inequalities.
pub const VERIFY_TOL: f64 = 1e-9;

/// Step-chain verification is quadratic in the horizon; cap it.
pub const STEP_CHAIN_HORIZON_CAP: usize = 20_000;

/// A self-contained exponential-decay certificate (wire form, always `f64`).
///
/// The claim: for all `m >= n >= 0`,
/// `‖A(m,n)‖ <= prefactor * e^{-decay_rate (m-n)} * M_n(alpha)`,
/// where `M_n` is the adapted-norm growth constant the verifier recomputes
/// from `family` itself.
#[derive(Debug, Clone, Serialize, Deserialize, PartialEq)]
#[serde(deny_unknown_fields)]
pub struct StabilityCertificate {
    pub family: FamilyFile,
    pub vector_norm: VectorNorm,
    /// window the inverse bound was computed on
    pub horizon: usize,
    pub alpha: f64,
    /// upper bound for the inverse of the generator in the weighted norm
    pub inverse_norm: f64,
    /// `delta / inverse_norm` for the margin delta (default 1/2)
    pub decay_rate: f64,
    /// `[inverse_norm * (e^alpha - 1) + 1] / (1 - delta)`
    pub prefactor: f64,
    /// derivation route, e.g. "generator-inverse-decay"
    pub rule: String,
    /// upper-bound quality: "slot-normalized" or "norm-product"
    pub bound_quality: String,
}

/// Issue a decay certificate from two-sided inverse bounds.
///
/// Fails with `NotCertifiable` when the upper bound diverged (the generator
/// is not invertible at this weight on this window) or when the plateau
/// constant collapses to zero, which can happen when a coarse norm-product
/// bound overshoots at a negative weight.
pub fn certify_stability<T: Real>(
    ctx: &AlphaContext<'_, T>,
    bounds: &InverseNormBounds<T>,
) -> Result<StabilityCertificate> {
    certify_stability_with_margin(ctx, bounds, r::<T>(0.5))
}

/// Same construction with an explicit margin `delta` in `(0,1)`: the decay
/// rate becomes `delta / c` and the prefactor `plateau / (1 - delta)`. The
/// summation argument behind the envelope works for every such margin;
/// `delta = 1/2` is the canonical trade-off.
pub fn certify_stability_with_margin<T: Real>(
    ctx: &AlphaContext<'_, T>,
    bounds: &InverseNormBounds<T>,
    delta: T,
) -> Result<StabilityCertificate> {
    if bounds.alpha != ctx.alpha() {
        return Err(Error::invalid("inverse bounds were computed at a different weight"));
    }
    if !(delta > T::zero() && delta < T::one()) {
        return Err(Error::invalid("margin delta must lie strictly between 0 and 1"));
    }
    let c = match bounds.upper.finite() {
        Some(c) => c,
        None => {
            return Err(Error::NotCertifiable(format!(
                "inverse-norm bound diverged at weight {} (row slope {})",
                db(ctx.alpha()),
                db(bounds.row_slope),
            )))
        }
    };
    let plateau = c * (ctx.alpha().exp() - T::one()) + T::one();
    if !(plateau > T::zero()) {
        return Err(Error::NotCertifiable(format!(
            "plateau constant {} is not positive; the inverse bound is too coarse",
            db(plateau),
        )));
    }
    let quality = match bounds.quality {
        BoundQuality::SlotNormalized => "slot-normalized",
        BoundQuality::NormProduct => "norm-product",
    };
    Ok(StabilityCertificate {
        family: ctx.cache().family().to_file(),
        vector_norm: ctx.cache().vector_norm(),
        horizon: bounds.horizon,
        alpha: db(ctx.alpha()),
        inverse_norm: db(c),
        decay_rate: db(delta / c),
        prefactor: db(plateau / (T::one() - delta)),
        rule: "generator-inverse-decay".to_string(),
        bound_quality: quality.to_string(),
    })
}

/// Outcome of replaying a certificate against a cache.
#[derive(Debug, Clone)]
pub struct VerificationReport<T> {
    /// worst `‖A(m,n)‖ / (prefactor e^{-nu (m-n)} M_n)` on the window
    pub max_ratio: T,
    /// `(m, n)` attaining it (leftmost)
    pub worst: (usize, usize),
    pub horizon: usize,
}

impl<T: Real> VerificationReport<T> {
    pub fn passes(&self, tol: f64) -> bool {
        self.max_ratio <= T::one() + r::<T>(tol)
    }
}

/// Re-check a certificate against a cache built from the same family.
///
/// The growth constants `M_n` are recomputed at the certified weight; nothing
/// from the derivation is reused. Scalar backends verify in one pass over a
/// suffix maximum of the decay-weighted potential; dense backends compare
/// every cached pair.
pub fn verify_certificate<T: Real>(
    cert: &StabilityCertificate,
    cache: &EvolutionCache<T>,
) -> Result<VerificationReport<T>> {
    if cache.family().to_file() != cert.family {
        return Err(Error::invalid("certificate family does not match the cache"));
    }
    if cache.vector_norm() != cert.vector_norm {
        return Err(Error::invalid("certificate vector norm does not match the cache"));
    }
    let alpha = r::<T>(cert.alpha);
    let nu = r::<T>(cert.decay_rate);
    let pref_ln = r::<T>(cert.prefactor).ln();
    let ctx = AlphaContext::new(cache, alpha, None)?;
    let h = ctx.horizon();
    let mut best = T::neg_infinity();
    let mut worst = (0usize, 0usize);
    if cache.is_scalar_track() {
        // one suffix pass: max_m [S_m + nu m] per start. The per-slot weights
        // are materialized once so the ratio at start n subtracts exactly the
        // value the scan compared against; diagonal ties then stay exact ties
        // and resolve to the smallest indices.
        let weights: Vec<T> = (0..=h)
            .map(|m| cache.track_ln(0, m, 0) + nu * ri::<T>(m))
            .collect();
        let mut suf = T::neg_infinity();
        let mut suf_arg = h;
        let mut per_start: Vec<(T, usize)> = vec![(T::neg_infinity(), 0); h + 1];
        for m in (0..=h).rev() {
            if weights[m] >= suf {
                // ties resolve to the smaller m by scanning right to left
                suf = weights[m];
                suf_arg = m;
            }
            per_start[m] = (suf, suf_arg);
        }
        for n in 0..=h {
            let (peak, peak_arg) = per_start[n];
            let ratio_ln = peak - weights[n] - pref_ln - ctx.growth_ln(n);
            if ratio_ln > best {
                best = ratio_ln;
                worst = (peak_arg, n);
            }
        }
    } else {
        for n in 0..=h {
            let m_ln = ctx.growth_ln(n);
            for m in n..=h {
                let ratio_ln = cache.norm_ln_unchecked(m, n) + nu * ri::<T>(m - n)
                    - pref_ln
                    - m_ln;
                if ratio_ln > best {
                    best = ratio_ln;
                    worst = (m, n);
                }
            }
        }
    }
    Ok(VerificationReport { max_ratio: best.exp(), worst, horizon: h })
}

/// One rung of the plateau-to-ladder chain.
#[derive(Debug, Clone)]
pub struct StepChainRecord<T> {
    pub k: usize,
    /// worst observed `‖A(m,n)‖ / bound_k(m, n)`
    pub max_ratio: T,
    pub worst: (usize, usize),
}

/// Verify the full step chain implied by an inverse-norm bound `c`:
/// `k = 0` is the plateau `‖A(m,n)‖ <= [c(e^alpha - 1) + 1] M_n`, and rung
/// `k >= 1` is `‖A(m,n)‖ <= plateau * c^k k!/(m-n)^k * M_n` for `m > n`.
///
/// The chain is a nonnegative-exponent construction: below zero the plateau
/// constant drops under 1 and the `m = n` slot of rung 0 is no longer
/// claimed, so contexts with a negative exponent are refused. (The final
/// decay inequality of a certificate is still checked at any exponent by
/// [`verify_certificate`].)
pub fn verify_step_chain<T: Real>(
    ctx: &AlphaContext<'_, T>,
    c: T,
    k_max: usize,
) -> Result<Vec<StepChainRecord<T>>> {
    if !(c > T::zero()) || !c.is_finite() {
        return Err(Error::invalid("step chain needs a positive finite inverse bound"));
    }
    if ctx.alpha() < T::zero() {
        return Err(Error::invalid(
            "the step chain applies to nonnegative exponents only; \
             re-check the certificate through its verification record instead",
        ));
    }
    let h = ctx.horizon();
    if h > STEP_CHAIN_HORIZON_CAP {
        return Err(Error::invalid(format!(
            "step-chain verification is quadratic; horizon {h} exceeds {STEP_CHAIN_HORIZON_CAP}"
        )));
    }
    let cache = ctx.cache();
    let plateau = c * (ctx.alpha().exp() - T::one()) + T::one();
    if !(plateau > T::zero()) {
        return Err(Error::NotCertifiable(format!(
            "plateau constant {} is not positive",
            db(plateau)
        )));
    }
    let plateau_ln = plateau.ln();
    let c_ln = c.ln();
    let norm_ln = |m: usize, n: usize| -> T {
        if cache.is_scalar_track() {
            cache.track_ln(0, m, n)
        } else {
            cache.norm_ln_unchecked(m, n)
        }
    };
    let mut records = Vec::with_capacity(k_max + 1);
    // k = 0: plateau
    {
        let mut best = T::neg_infinity();
        let mut worst = (0usize, 0usize);
        for n in 0..=h {
            let m_ln = ctx.growth_ln(n);
            for m in n..=h {
                let ratio_ln = norm_ln(m, n) - plateau_ln - m_ln;
                if ratio_ln > best {
                    best = ratio_ln;
                    worst = (m, n);
                }
            }
        }
        records.push(StepChainRecord { k: 0, max_ratio: best.exp(), worst });
    }
    let mut ln_factorial = T::zero();
    for k in 1..=k_max {
        ln_factorial = ln_factorial + ri::<T>(k).ln();
        let mut best = T::neg_infinity();
        let mut worst = (0usize, 0usize);
        for n in 0..h {
            let m_ln = ctx.growth_ln(n);
            for m in (n + 1)..=h {
                let bound_ln = plateau_ln + ri::<T>(k) * c_ln + ln_factorial
                    - ri::<T>(k) * ri::<T>(m - n).ln()
                    + m_ln;
                let ratio_ln = norm_ln(m, n) - bound_ln;
                if ratio_ln > best {
                    best = ratio_ln;
                    worst = (m, n);
                }
            }
        }
        records.push(StepChainRecord { k, max_ratio: best.exp(), worst });
    }
    Ok(records)
}

/// One named inequality checked along an orbit.
#[derive(Debug, Clone)]
pub struct OrbitCheck<T> {
    pub name: &'static str,
    /// worst observed `actual / bound`
    pub max_ratio: T,
    pub worst_m: usize,
}

/// Certificate that a single orbit `m -> A(m,n) x0` is bounded and decays.
#[derive(Debug, Clone)]
pub struct BoundedOrbitCertificate<T> {
    pub start: usize,
    pub theta: T,
    pub delta: T,
    /// `K = sup_m ‖A(m,n) x0‖`
    pub orbit_sup: T,
    /// first index attaining the supremum
    pub first_peak: usize,
    /// whether `first_peak - start <= theta` (up to tolerance); the rise time
    /// of a bounded orbit cannot exceed the inverse-bound scale
    pub peak_within_theta: bool,
    /// `L = e^{alpha theta}`
    pub level: T,
    /// `nu = delta / theta`
    pub decay_rate: T,
    /// `N_n = theta L M_n / (1 - delta)`
    pub amplitude: T,
    pub checks: Vec<OrbitCheck<T>>,
}

impl<T: Real> BoundedOrbitCertificate<T> {
    pub fn all_hold(&self, tol: f64) -> bool {
        self.checks.iter().all(|c| c.max_ratio <= T::one() + r::<T>(tol))
    }
}

/// Certify decay of one orbit from its rise time.
///
/// `theta` plays the role the inverse bound plays for the whole family:
/// it caps how long the orbit can keep rising. The checks run, in order,
/// the reciprocal decay `‖A(m,n)x0‖ <= theta K / (m-n)`, the level bound
/// `<= theta L M_n ‖x0‖ / (m-n)`, the power ladder `<= k! theta^k / (m-n)^k *
/// theta L M_n ‖x0‖` for `k <= 5`, the exponential envelope
/// `<= N_n e^{-nu (m-n)} ‖x0‖`, and the arithmetic fact that the envelope
/// dominates the ladder's best rung (`k <= 20`) once the geometric series in
/// `delta` is summed.
pub fn certify_bounded_orbit<T: Real>(
    ctx: &AlphaContext<'_, T>,
    n: usize,
    x0: ArrayView1<T>,
    theta: T,
    delta: T,
) -> Result<BoundedOrbitCertificate<T>> {
    if !(theta > T::zero()) || !theta.is_finite() {
        return Err(Error::invalid("theta must be positive and finite"));
    }
    if !(delta > T::zero() && delta < T::one()) {
        return Err(Error::invalid("delta must lie strictly between 0 and 1"));
    }
    if n >= ctx.horizon() {
        return Err(Error::invalid("orbit start must lie inside the window"));
    }
    if x0.len() != ctx.dim() {
        return Err(Error::DimensionMismatch { expected: ctx.dim(), found: x0.len() });
    }
    let vnorm = ctx.cache().vector_norm();
    if x0.iter().any(|v| !v.is_finite()) {
        return Err(Error::invalid("orbit seed must be finite"));
    }
    let x0_norm = linalg::vec_norm(vnorm, x0);
    let m_n = ctx.growth(n);
    let level = (ctx.alpha() * theta).exp();
    let nu = delta / theta;
    let amplitude = theta * level * m_n / (T::one() - delta);
    if x0_norm == T::zero() {
        // the zero orbit satisfies every bound with room to spare
        let names = [
            "reciprocal-decay",
            "level-bound",
            "power-ladder-1",
            "power-ladder-2",
            "power-ladder-3",
            "power-ladder-4",
            "power-ladder-5",
            "exponential-envelope",
            "ladder-to-envelope-summation",
        ];
        let checks = names
            .iter()
            .map(|name| OrbitCheck { name, max_ratio: T::zero(), worst_m: n + 1 })
            .collect();
        return Ok(BoundedOrbitCertificate {
            start: n,
            theta,
            delta,
            orbit_sup: T::zero(),
            first_peak: n,
            peak_within_theta: true,
            level,
            decay_rate: nu,
            amplitude,
            checks,
        });
    }
    let h = ctx.horizon();
    // walk the orbit once, tracking the supremum and its first index
    let mut norms: Vec<T> = Vec::with_capacity(h - n + 1);
    norms.push(x0_norm);
    let mut cur = x0.to_owned();
    let mut orbit_sup = x0_norm;
    let mut first_peak = n;
    for m in (n + 1)..=h {
        cur = ctx.cache().apply_step(m - 1, cur.view())?;
        let nm = linalg::vec_norm(vnorm, cur.view());
        if !nm.is_finite() {
            return Err(Error::NonFinite { context: "walking the orbit", index: m });
        }
        norms.push(nm);
        if nm > orbit_sup {
            orbit_sup = nm;
            first_peak = m;
        }
    }
    let peak_within_theta = ri::<T>(first_peak - n) <= theta + r::<T>(VERIFY_TOL);

    let mut checks = Vec::new();
    let worst_over = |bound: &dyn Fn(usize) -> T| -> (T, usize) {
        let mut best = T::neg_infinity();
        let mut at = n + 1;
        for m in (n + 1)..=h {
            let ratio = norms[m - n] / bound(m);
            if ratio > best {
                best = ratio;
                at = m;
            }
        }
        (best, at)
    };
    {
        let b = |m: usize| theta * orbit_sup / ri::<T>(m - n);
        let (max_ratio, worst_m) = worst_over(&b);
        checks.push(OrbitCheck { name: "reciprocal-decay", max_ratio, worst_m });
    }
    {
        let b = |m: usize| theta * level * m_n * x0_norm / ri::<T>(m - n);
        let (max_ratio, worst_m) = worst_over(&b);
        checks.push(OrbitCheck { name: "level-bound", max_ratio, worst_m });
    }
    let mut ln_factorial = T::zero();
    for k in 1..=5usize {
        ln_factorial = ln_factorial + ri::<T>(k).ln();
        let rungs = theta * level * m_n * x0_norm;
        let b = move |m: usize| {
            (ln_factorial + ri::<T>(k) * (theta.ln() - ri::<T>(m - n).ln())).exp() * rungs
        };
        let (max_ratio, worst_m) = worst_over(&b);
        let name: &'static str = match k {
            1 => "power-ladder-1",
            2 => "power-ladder-2",
            3 => "power-ladder-3",
            4 => "power-ladder-4",
            _ => "power-ladder-5",
        };
        checks.push(OrbitCheck { name, max_ratio, worst_m });
    }
    {
        let b = |m: usize| amplitude * (-nu * ri::<T>(m - n)).exp() * x0_norm;
        let (max_ratio, worst_m) = worst_over(&b);
        checks.push(OrbitCheck { name: "exponential-envelope", max_ratio, worst_m });
    }
    {
        // pure arithmetic: summing the ladder's rungs against the geometric
        // series in delta yields the envelope, so the envelope prefactor must
        // dominate the best rung (k = 0 is the plateau rung, value 1); the
        // comparison carries absolute slack since both sides vanish together
        let mut best = T::neg_infinity();
        let mut at = n + 1;
        let slack = r::<T>(VERIFY_TOL);
        for m in (n + 1)..=h {
            let s = ri::<T>(m - n);
            let lhs = (-nu * s).exp() / (T::one() - delta);
            let mut rung_min = T::one();
            let mut lf = T::zero();
            for k in 1..=20usize {
                lf = lf + ri::<T>(k).ln();
                let rung = (lf + ri::<T>(k) * (theta.ln() - s.ln())).exp();
                rung_min = rung_min.min(rung);
            }
            let ratio = rung_min / (lhs + slack);
            if ratio > best {
                best = ratio;
                at = m;
            }
        }
        checks.push(OrbitCheck {
            name: "ladder-to-envelope-summation",
            max_ratio: best,
            worst_m: at,
        });
    }

    Ok(BoundedOrbitCertificate {
        start: n,
        theta,
        delta,
        orbit_sup,
        first_peak,
        peak_within_theta,
        level,
        decay_rate: nu,
        amplitude,
        checks,
    })
}

/// Pick a rise-time scale for orbit certification: the inverse-norm upper
/// bound when the generator inverts, otherwise the best probed gap ratio
/// (tagged heuristic because a divergent family has no finite scale).
pub fn default_theta<T: Real>(
    ctx: &AlphaContext<'_, T>,
    cfg: &ProbeConfig,
) -> Result<(T, &'static str)> {
    let bounds = generator_inverse_bounds(ctx, cfg)?;
    if let Some(c) = bounds.upper.finite() {
        return Ok((c, "generator-inverse-upper"));
    }
    let gap = approximate_point_gap(ctx, cfg)?;
    Ok((gap.ratio, "gap-probe-heuristic"))
}

/// The rescaled orbit `k -> e^{-beta (k-n)} A(k,n) x` (zero for `k <= n`),
/// the window whose first peak locates the orbit's rise time.
pub fn rescaled_orbit_window<T: Real>(
    cache: &EvolutionCache<T>,
    beta: T,
    n: usize,
    x: ArrayView1<T>,
    horizon: usize,
) -> Result<SequenceWindow<T>> {
    if !(beta < T::zero()) || !beta.is_finite() {
        return Err(Error::invalid("rescaling exponent must be negative"));
    }
    if horizon == 0 || horizon > cache.horizon() {
        return Err(Error::IndexOutOfRange { m: horizon, n: 0, horizon: cache.horizon() });
    }
    if n >= horizon {
        return Err(Error::invalid("orbit start must lie inside the window"));
    }
    if x.len() != cache.dim() {
        return Err(Error::DimensionMismatch { expected: cache.dim(), found: x.len() });
    }
    if x.iter().all(|v| *v == T::zero()) {
        return Err(Error::invalid("orbit seed must be nonzero"));
    }
    let mut w = SequenceWindow::zeros(horizon, cache.dim());
    let mut cur = x.to_owned();
    for k in (n + 1)..=horizon {
        cur = cache.apply_step(k - 1, cur.view())?;
        let factor_ln = -beta * ri::<T>(k - n);
        let size = linalg::vec_norm(cache.vector_norm(), cur.view());
        if size > T::zero() && factor_ln + size.ln() > r::<T>(709.0) {
            return Err(Error::NonFinite { context: "building the rescaled orbit", index: k });
        }
        let factor = factor_ln.exp();
        let scaled = cur.mapv(|c| c * factor);
        w.set_slot(k, scaled.view());
    }
    Ok(w)
}

/// Location of the first peak of the rescaled orbit, measured slot by slot in
/// the context's adapted norms.
#[derive(Debug, Clone, Copy)]
pub struct FirstPeak {
    /// minimal index attaining the maximum; always `>= n + 1`
    pub index: usize,
    /// diagnostic: whether `index < n - 1/beta` (the coarse bracket a decay
    /// estimate predicts); reported, not enforced
    pub bracket_satisfied: bool,
}

/// Find the first peak of `k -> ‖e^{-beta (k-n)} A(k,n) x‖_{k,alpha}`.
///
/// Errors with `HorizonTooSmall` when the maximum sits on the window edge,
/// since a longer window could still move it.
pub fn first_peak<T: Real>(
    ctx: &AlphaContext<'_, T>,
    beta: T,
    n: usize,
    x: ArrayView1<T>,
) -> Result<FirstPeak> {
    let w = rescaled_orbit_window(ctx.cache(), beta, n, x, ctx.horizon())?;
    let mut best = T::neg_infinity();
    let mut at: Option<usize> = None;
    for k in (n + 1)..=ctx.horizon() {
        let slot_ln = ctx.slot_norm_ln(&w, k)?;
        if slot_ln > best {
            best = slot_ln;
            at = Some(k);
        }
    }
    let index = match at {
        Some(k) if best > T::neg_infinity() => k,
        _ => return Err(Error::invalid("rescaled orbit vanished; no peak to locate")),
    };
    if index == ctx.horizon() {
        return Err(Error::HorizonTooSmall(format!(
            "first peak of the rescaled orbit sits on the window edge ({index})"
        )));
    }
    debug_assert!(index >= n + 1);
    let bracket_satisfied = ri::<T>(index) < ri::<T>(n) - T::one() / beta;
    Ok(FirstPeak { index, bracket_satisfied })
}

/// Comparison of two adapted-norm scales on the same cache.
#[derive(Debug, Clone)]
pub struct SpaceComparison<T> {
    /// weight of the denominator norms
    pub alpha: T,
    /// weight of the numerator norms (`beta <= alpha`, `beta < 0`)
    pub beta: T,
    /// largest observed `‖x‖_{n,beta} / ‖x‖_{n,alpha}`
    pub max_ratio: T,
    /// the uniform-equivalence envelope `e^{-(alpha-beta)/beta}`
    pub ratio_bound: T,
    /// sample points where the ratio exceeded the envelope — evidence that
    /// the two scales are genuinely inequivalent
    pub violations: usize,
    pub samples: usize,
}

/// Sample `‖x‖_{n,beta} / ‖x‖_{n,alpha}` over starts and directions.
///
/// When the embedding of the `beta`-scale into the `alpha`-scale is uniform,
/// every ratio stays below `e^{-(alpha-beta)/beta}`; counted violations
/// witness strict (non-uniform) inclusion.
pub fn space_equivalence_evidence<T: Real>(
    ctx_alpha: &AlphaContext<'_, T>,
    ctx_beta: &AlphaContext<'_, T>,
    cfg: &ProbeConfig,
) -> Result<SpaceComparison<T>> {
    if !std::ptr::eq(ctx_alpha.cache(), ctx_beta.cache()) {
        return Err(Error::invalid("space comparison needs contexts over the same cache"));
    }
    let alpha = ctx_alpha.alpha();
    let beta = ctx_beta.alpha();
    if !(beta < T::zero()) {
        return Err(Error::invalid("numerator weight must be negative"));
    }
    if beta > alpha {
        return Err(Error::invalid(
            "numerator weight must not exceed the denominator weight",
        ));
    }
    let h = ctx_alpha.horizon().min(ctx_beta.horizon());
    let d = ctx_alpha.dim();
    let ratio_bound = (-(alpha - beta) / beta).exp();
    let budget = cfg.random.max(1);
    let stride = (h / budget).max(1);
    let mut directions: Vec<ndarray::Array1<T>> =
        (0..d).map(|i| crate::window::basis_vector::<T>(d, i)).collect();
    if d > 1 {
        use rand::{Rng, SeedableRng};
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(cfg.seed);
        for _ in 0..4 {
            directions.push(ndarray::Array1::from_iter(
                (0..d).map(|_| r::<T>(rng.random_range(-1.0..=1.0))),
            ));
        }
    }
    let mut max_ratio = T::zero();
    let mut violations = 0usize;
    let mut samples = 0usize;
    let guard = T::one() + r::<T>(VERIFY_TOL);
    for n in (0..=h).step_by(stride) {
        for x in &directions {
            let num = ctx_beta.adapted_norm(n, x.view())?.value;
            let den = ctx_alpha.adapted_norm(n, x.view())?.value;
            if !(num.is_finite() && den > T::zero()) {
                continue;
            }
            samples += 1;
            let ratio = num / den;
            max_ratio = max_ratio.max(ratio);
            if ratio > ratio_bound * guard {
                violations += 1;
            }
        }
    }
    Ok(SpaceComparison { alpha, beta, max_ratio, ratio_bound, violations, samples })
}

fn db<T: Real>(x: T) -> f64 {
    x.to_f64().unwrap_or(f64::NAN)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::adapted_norms::AlphaContext;
    use crate::dynamics::{EvolutionCache, FamilyFile};
    use ndarray::arr1;

    fn cache_of(file: FamilyFile, h: usize) -> EvolutionCache<f64> {
        EvolutionCache::build(file.into_family().unwrap(), h, VectorNorm::Sup).unwrap()
    }

    fn geometric(rate: f64, h: usize) -> EvolutionCache<f64> {
        cache_of(FamilyFile::Geometric { dimension: 1, data: rate }, h)
    }

    fn certified(cache: &EvolutionCache<f64>, alpha: f64) -> StabilityCertificate {
        let ctx = AlphaContext::new(cache, alpha, None).unwrap();
        let bounds = generator_inverse_bounds(&ctx, &ProbeConfig::default()).unwrap();
        certify_stability(&ctx, &bounds).unwrap()
    }

    #[test]
    fn geometric_certificate_has_frozen_rate_and_verifies() {
        let cache = geometric((-1.0f64).exp(), 512);
        let cert = certified(&cache, 0.0);
        assert!((cert.inverse_norm - 1.5819767068693265).abs() < 1e-12);
        assert!((cert.decay_rate - 0.31606027941427883).abs() < 1e-12);
        assert_eq!(cert.prefactor, 2.0);
        assert_eq!(cert.rule, "generator-inverse-decay");
        assert_eq!(cert.bound_quality, "slot-normalized");

        let report = verify_certificate(&cert, &cache).unwrap();
        assert!(report.passes(VERIFY_TOL));
        // at m = n the envelope is exactly the prefactor, so the worst ratio
        // is 1/2 at the very first pair
        assert!((report.max_ratio - 0.5).abs() < 1e-6, "ratio = {}", report.max_ratio);
        assert_eq!(report.worst, (0, 0));
    }

    #[test]
    fn corrupted_certificates_fail_verification() {
        let cache = geometric((-1.0f64).exp(), 128);
        let cert = certified(&cache, 0.0);

        let mut fast = cert.clone();
        fast.decay_rate = 1.2; // claims decay faster than the family's actual rate 1
        let report = verify_certificate(&fast, &cache).unwrap();
        assert!(!report.passes(VERIFY_TOL), "ratio = {}", report.max_ratio);
        assert!(report.max_ratio > 1.0);

        let mut squeezed = cert.clone();
        squeezed.prefactor = 0.9; // below the ratio-1/2 margin at m = n
        let report = verify_certificate(&squeezed, &cache).unwrap();
        assert!(!report.passes(VERIFY_TOL));
        assert_eq!(report.worst, (0, 0));
    }

    #[test]
    fn verification_rejects_mismatched_family() {
        let cache = geometric((-1.0f64).exp(), 64);
        let cert = certified(&cache, 0.0);
        let other = geometric(0.5, 64);
        assert!(matches!(
            verify_certificate(&cert, &other),
            Err(Error::InvalidParameter(_))
        ));
    }

    #[test]
    fn identity_is_not_certifiable() {
        let cache = cache_of(FamilyFile::Identity { dimension: 1 }, 128);
        let ctx = AlphaContext::new(&cache, 0.0, None).unwrap();
        let bounds = generator_inverse_bounds(&ctx, &ProbeConfig::default()).unwrap();
        assert!(matches!(
            certify_stability(&ctx, &bounds),
            Err(Error::NotCertifiable(_))
        ));
    }

    #[test]
    fn step_chain_holds_and_ladder_beats_envelope_at_moderate_gaps() {
        let cache = geometric((-1.0f64).exp(), 256);
        let ctx = AlphaContext::new(&cache, 0.0, None).unwrap();
        let bounds = generator_inverse_bounds(&ctx, &ProbeConfig::default()).unwrap();
        let c = bounds.upper.finite().unwrap();
        let records = verify_step_chain(&ctx, c, 12).unwrap();
        assert_eq!(records.len(), 13);
        for rec in &records {
            assert!(
                rec.max_ratio <= 1.0 + VERIFY_TOL,
                "rung {} ratio {}",
                rec.k,
                rec.max_ratio
            );
        }
        // the plateau at weight 0 collapses to M_n itself, attained at m = n
        assert!((records[0].max_ratio - 1.0).abs() < 1e-12);

        // at a gap of 10 steps the second rung is sharper than the
        // exponential envelope: c^2 2!/100 < 2 e^{-10/(2c)}
        let ladder2 = c * c * 2.0 / 100.0;
        let envelope = 2.0 * (-10.0 / (2.0 * c)).exp();
        assert!(ladder2 < envelope, "{ladder2} vs {envelope}");
        assert!((ladder2 - 0.050053006021542376).abs() < 1e-12, "{ladder2}");
    }

    #[test]
    fn example1_certificate_passes_both_verifications() {
        let cache = cache_of(FamilyFile::Example1 { dimension: 1 }, 512);
        let cert = certified(&cache, 0.0);
        assert!(cert.decay_rate > 0.0);
        let report = verify_certificate(&cert, &cache).unwrap();
        assert!(report.passes(VERIFY_TOL), "ratio = {}", report.max_ratio);
        let ctx = AlphaContext::new(&cache, 0.0, None).unwrap();
        let records = verify_step_chain(&ctx, cert.inverse_norm, 6).unwrap();
        for rec in &records {
            assert!(rec.max_ratio <= 1.0 + VERIFY_TOL, "rung {}", rec.k);
        }
    }

    #[test]
    fn bounded_orbit_certificate_on_a_contraction() {
        let cache = geometric((-1.0f64).exp(), 256);
        let ctx = AlphaContext::new(&cache, 0.0, None).unwrap();
        let (theta, source) = default_theta(&ctx, &ProbeConfig::default()).unwrap();
        assert_eq!(source, "generator-inverse-upper");
        let cert =
            certify_bounded_orbit(&ctx, 0, arr1(&[1.0]).view(), theta, 0.5).unwrap();
        assert_eq!(cert.first_peak, 0);
        assert!(cert.peak_within_theta);
        assert_eq!(cert.orbit_sup, 1.0);
        assert!((cert.decay_rate - 0.5 / theta).abs() < 1e-15);
        assert!(cert.all_hold(VERIFY_TOL), "checks: {:?}", cert.checks);
        assert_eq!(cert.checks.len(), 9);
    }

    #[test]
    fn bounded_orbit_rejects_bad_parameters() {
        let cache = geometric(0.5, 32);
        let ctx = AlphaContext::new(&cache, 0.0, None).unwrap();
        let x = arr1(&[1.0]);
        assert!(certify_bounded_orbit(&ctx, 0, x.view(), 0.0, 0.5).is_err());
        assert!(certify_bounded_orbit(&ctx, 0, x.view(), 1.0, 1.0).is_err());
        assert!(certify_bounded_orbit(&ctx, 32, x.view(), 1.0, 0.5).is_err());
    }

    #[test]
    fn zero_seed_certifies_trivially() {
        let cache = geometric(0.5, 32);
        let ctx = AlphaContext::new(&cache, 0.0, None).unwrap();
        let cert =
            certify_bounded_orbit(&ctx, 0, arr1(&[0.0]).view(), 1.0, 0.5).unwrap();
        assert_eq!(cert.orbit_sup, 0.0);
        assert!(cert.all_hold(0.0));
    }

    #[test]
    fn ladder_rungs_trade_factorials_for_powers() {
        // at a fixed gap the rung values keep shrinking while gap > c (k+1)
        let c = 1.5819767068693265f64;
        let s = 100.0f64;
        let mut prev = f64::INFINITY;
        let mut lf = 0.0f64;
        for k in 1..=12usize {
            lf += (k as f64).ln();
            let rung = (lf + k as f64 * (c.ln() - s.ln())).exp();
            if s > c * (k as f64 + 1.0) {
                assert!(rung <= prev * (1.0 + 1e-12), "k = {k}");
            }
            prev = rung;
        }
    }

    #[test]
    fn rescaled_orbit_obeys_the_contraction_estimate() {
        // at an admissible weight, slot norms of the rescaled orbit decay at
        // least as fast as the weight gap: |theta_k|_{k,alpha} <=
        // e^{-(beta-alpha)(k-n)} M_n |x|
        let cache = cache_of(FamilyFile::Example1 { dimension: 1 }, 256);
        let alpha = -1.0 / 3.0;
        let beta = -0.2;
        let ctx = AlphaContext::new(&cache, alpha, None).unwrap();
        for n in [0usize, 5] {
            let w =
                rescaled_orbit_window(&cache, beta, n, arr1(&[1.0]).view(), 256).unwrap();
            for k in (n + 1)..=256 {
                let slot_ln = ctx.slot_norm_ln(&w, k).unwrap();
                let bound_ln = -(beta - alpha) * ((k - n) as f64) + ctx.growth_ln(n);
                assert!(
                    slot_ln <= bound_ln + 1e-9,
                    "n = {n}, k = {k}: {slot_ln} vs {bound_ln}"
                );
            }
        }
    }

    #[test]
    fn rescaled_orbit_matches_closed_form() {
        let cache = geometric((-1.0f64).exp(), 64);
        let w = rescaled_orbit_window(&cache, -0.5, 0, arr1(&[1.0]).view(), 64).unwrap();
        assert_eq!(w.slot(0)[0], 0.0);
        // e^{0.5 k} e^{-k} = e^{-k/2}
        assert!((w.slot(3)[0] - 0.22313016014842983).abs() < 1e-15);
    }

    #[test]
    fn first_peak_is_minimal_and_respects_the_bracket() {
        let cache = geometric((-1.0f64).exp(), 64);
        let ctx = AlphaContext::new(&cache, 0.0, None).unwrap();
        let p = first_peak(&ctx, -0.5, 0, arr1(&[1.0]).view()).unwrap();
        assert_eq!(p.index, 1);
        assert!(p.bracket_satisfied); // 1 < 0 + 2
    }

    #[test]
    fn first_peak_on_the_edge_is_inconclusive() {
        // rescaling steeper than the decay pushes the peak past any window
        let cache = geometric((-1.0f64).exp(), 64);
        let ctx = AlphaContext::new(&cache, 0.0, None).unwrap();
        assert!(matches!(
            first_peak(&ctx, -2.0, 0, arr1(&[1.0]).view()),
            Err(Error::HorizonTooSmall(_))
        ));
    }

    #[test]
    fn space_comparison_is_tight_on_example1() {
        let cache = cache_of(FamilyFile::Example1 { dimension: 1 }, 256);
        let ctx_a = AlphaContext::new(&cache, 0.0, None).unwrap();
        let ctx_b = AlphaContext::new(&cache, -1.0 / 3.0, None).unwrap();
        let cmp =
            space_equivalence_evidence(&ctx_a, &ctx_b, &ProbeConfig::default()).unwrap();
        assert_eq!(cmp.violations, 0);
        // the sharper per-family factor e^{alpha + 1/3} = e^{1/3} is attained
        // at odd starts and never exceeded
        let sharp = (1.0f64 / 3.0).exp();
        assert!((cmp.max_ratio - sharp).abs() < 1e-12, "max = {}", cmp.max_ratio);
        assert!(cmp.ratio_bound > sharp);
    }

    #[test]
    fn space_comparison_detects_inequivalence_on_example2() {
        let cache = cache_of(FamilyFile::Example2 { dimension: 1 }, 440);
        let ctx_a = AlphaContext::new(&cache, -0.2, None).unwrap();
        let ctx_b = AlphaContext::new(&cache, -0.5, None).unwrap();
        let cmp =
            space_equivalence_evidence(&ctx_a, &ctx_b, &ProbeConfig::default()).unwrap();
        assert!(cmp.violations > 0, "max = {} bound = {}", cmp.max_ratio, cmp.ratio_bound);
        assert!(cmp.max_ratio > cmp.ratio_bound);
    }

    #[test]
    fn equal_weights_compare_at_exactly_one() {
        let cache = geometric(0.5, 64);
        let ctx_a = AlphaContext::new(&cache, -0.2, None).unwrap();
        let ctx_b = AlphaContext::new(&cache, -0.2, None).unwrap();
        let cmp =
            space_equivalence_evidence(&ctx_a, &ctx_b, &ProbeConfig::default()).unwrap();
        assert_eq!(cmp.max_ratio, 1.0);
        assert_eq!(cmp.ratio_bound, 1.0);
        assert_eq!(cmp.violations, 0);
    }
}
