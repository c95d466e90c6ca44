//! Operator families and the cached evolution triangle.
//!
//! A family is the step sequence `A_0, A_1, ...`; the cache materializes the
//! two-parameter products `A(m, n) = A_{m-1} ... A_n` for `0 <= n <= m <= N`
//! together with their operator norms. Two storage strategies:
//!
//! * dense matrix families keep the full triangle of products (built in
//!   O(N^2) matrix multiplications, the only route for non-commuting steps);
//! * scalar and diagonal families keep per-coordinate log-potential prefixes
//!   `S_0 ..= S_N` plus sign parities, so `A(m, n)` is the endpoint pair
//!   `(sign, S_n, S_m)` and never overflows. Products telescope exactly (see
//!   [`crate::logdomain`]), and cache construction is O(N).
//!
//! Zero steps are representable only in matrix form; the log-domain kinds
//! reject them at construction.

use crate::error::Error;
use crate::examples;
use crate::linalg::{self, VectorNorm};
use crate::logdomain::{LogScalar, Sign};
use crate::num::{r, ri, Real};
use crate::Result;
use ndarray::{Array1, Array2, ArrayView1};
use serde::{Deserialize, Serialize};

/// Hard cap on dense triangle storage (bytes) before construction refuses.
const DENSE_CACHE_BYTE_CAP: u128 = 1 << 30;

/// JSON wire form of a family. `data` layouts:
/// matrix-list takes one flat row-major `d*d` array per step; diagonal takes
/// the `d` constant rates; geometric takes the scalar rate.
#[derive(Debug, Clone, Serialize, Deserialize, PartialEq)]
#[serde(tag = "kind", deny_unknown_fields)]
pub enum FamilyFile {
    #[serde(rename = "matrix-list")]
    MatrixList { dimension: usize, data: Vec<Vec<f64>> },
    #[serde(rename = "geometric")]
    Geometric { dimension: usize, data: f64 },
    #[serde(rename = "identity")]
    Identity { dimension: usize },
    #[serde(rename = "diagonal")]
    Diagonal { dimension: usize, data: Vec<f64> },
    #[serde(rename = "example1")]
    Example1 { dimension: usize },
    #[serde(rename = "example2")]
    Example2 { dimension: usize },
}

impl FamilyFile {
    pub fn into_family<T: Real>(self) -> Result<OperatorFamily<T>> {
        let conv = |x: f64| r::<T>(x);
        match self {
            FamilyFile::MatrixList { dimension, data } => {
                if dimension == 0 {
                    return Err(Error::invalid("dimension must be >= 1"));
                }
                let mut steps = Vec::with_capacity(data.len());
                for (idx, flat) in data.iter().enumerate() {
                    if flat.len() != dimension * dimension {
                        return Err(Error::DimensionMismatch {
                            expected: dimension * dimension,
                            found: flat.len(),
                        });
                    }
                    if flat.iter().any(|v| !v.is_finite()) {
                        return Err(Error::NonFinite { context: "reading family file", index: idx });
                    }
                    let m = Array2::from_shape_vec(
                        (dimension, dimension),
                        flat.iter().map(|v| conv(*v)).collect(),
                    )
                    .expect("shape checked above");
                    steps.push(m);
                }
                Ok(OperatorFamily::MatrixList { dim: dimension, steps })
            }
            FamilyFile::Geometric { dimension, data } => {
                if dimension == 0 {
                    return Err(Error::invalid("dimension must be >= 1"));
                }
                if !data.is_finite() {
                    return Err(Error::NonFinite { context: "reading family file", index: 0 });
                }
                Ok(OperatorFamily::Geometric { dim: dimension, rate: conv(data) })
            }
            FamilyFile::Identity { dimension } => {
                if dimension == 0 {
                    return Err(Error::invalid("dimension must be >= 1"));
                }
                Ok(OperatorFamily::Identity { dim: dimension })
            }
            FamilyFile::Diagonal { dimension, data } => {
                if dimension == 0 {
                    return Err(Error::invalid("dimension must be >= 1"));
                }
                if data.len() != dimension {
                    return Err(Error::DimensionMismatch { expected: dimension, found: data.len() });
                }
                if let Some(i) = data.iter().position(|v| !v.is_finite()) {
                    return Err(Error::NonFinite { context: "reading family file", index: i });
                }
                Ok(OperatorFamily::Diagonal { dim: dimension, rates: data.iter().map(|v| conv(*v)).collect() })
            }
            FamilyFile::Example1 { dimension } => {
                if dimension == 0 {
                    return Err(Error::invalid("dimension must be >= 1"));
                }
                Ok(OperatorFamily::Example1 { dim: dimension })
            }
            FamilyFile::Example2 { dimension } => {
                if dimension == 0 {
                    return Err(Error::invalid("dimension must be >= 1"));
                }
                Ok(OperatorFamily::Example2 { dim: dimension })
            }
        }
    }
}

/// A concrete step sequence. Scalar closed forms act as `c_n * Id` on `R^d`.
#[derive(Debug, Clone)]
pub enum OperatorFamily<T> {
    MatrixList { dim: usize, steps: Vec<Array2<T>> },
    /// constant step `a * Id`
    Geometric { dim: usize, rate: T },
    Identity { dim: usize },
    /// constant diagonal step `diag(r_1 ... r_d)`
    Diagonal { dim: usize, rates: Vec<T> },
    /// `A_n = e^{a_n - a_{n+1}} Id` with `a_n = n / (2 + (-1)^n)`
    Example1 { dim: usize },
    /// `A(m, n) = e^{f(m) - f(n)} Id` with `f(t) = -2 sqrt(t) cos(sqrt(t)) + 2 sin(sqrt(t)) - t`
    Example2 { dim: usize },
}

/// Largest exponent below which nothing is admissible, when the family has a
/// closed form for it. `attained` says whether the floor itself is
/// admissible (example-2's interval is open at the floor).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AdmissibleFloor<T> {
    pub value: T,
    pub attained: bool,
}

impl<T: Real> OperatorFamily<T> {
    pub fn dim(&self) -> usize {
        match self {
            OperatorFamily::MatrixList { dim, .. }
            | OperatorFamily::Geometric { dim, .. }
            | OperatorFamily::Identity { dim }
            | OperatorFamily::Diagonal { dim, .. }
            | OperatorFamily::Example1 { dim }
            | OperatorFamily::Example2 { dim } => *dim,
        }
    }

    pub fn kind_name(&self) -> &'static str {
        match self {
            OperatorFamily::MatrixList { .. } => "matrix-list",
            OperatorFamily::Geometric { .. } => "geometric",
            OperatorFamily::Identity { .. } => "identity",
            OperatorFamily::Diagonal { .. } => "diagonal",
            OperatorFamily::Example1 { .. } => "example1",
            OperatorFamily::Example2 { .. } => "example2",
        }
    }

    /// Wire form (used to echo families into reports and certificates).
    pub fn to_file(&self) -> FamilyFile {
        let back = |x: &T| x.to_f64().expect("scalar converts to f64");
        match self {
            OperatorFamily::MatrixList { dim, steps } => FamilyFile::MatrixList {
                dimension: *dim,
                data: steps.iter().map(|m| m.iter().map(&back).collect()).collect(),
            },
            OperatorFamily::Geometric { dim, rate } => {
                FamilyFile::Geometric { dimension: *dim, data: back(rate) }
            }
            OperatorFamily::Identity { dim } => FamilyFile::Identity { dimension: *dim },
            OperatorFamily::Diagonal { dim, rates } => {
                FamilyFile::Diagonal { dimension: *dim, data: rates.iter().map(&back).collect() }
            }
            OperatorFamily::Example1 { dim } => FamilyFile::Example1 { dimension: *dim },
            OperatorFamily::Example2 { dim } => FamilyFile::Example2 { dimension: *dim },
        }
    }

    /// Infimum of the admissible exponents, where known in closed form.
    pub fn admissible_floor(&self) -> Option<AdmissibleFloor<T>> {
        match self {
            OperatorFamily::MatrixList { .. } => None,
            OperatorFamily::Geometric { rate, .. } => {
                Some(AdmissibleFloor { value: rate.abs().ln(), attained: true })
            }
            OperatorFamily::Identity { .. } => {
                Some(AdmissibleFloor { value: T::zero(), attained: true })
            }
            OperatorFamily::Diagonal { rates, .. } => {
                let v = rates
                    .iter()
                    .map(|x| x.abs().ln())
                    .fold(T::neg_infinity(), T::max);
                Some(AdmissibleFloor { value: v, attained: true })
            }
            OperatorFamily::Example1 { .. } => {
                Some(AdmissibleFloor { value: -T::one() / ri::<T>(3), attained: true })
            }
            OperatorFamily::Example2 { .. } => {
                Some(AdmissibleFloor { value: -T::one(), attained: false })
            }
        }
    }

    /// ln of a proven bound on the *infinite-horizon* growth constant
    /// `M_n(beta)`, when the closed form supports one. This is what lets a
    /// finite window certify its tails.
    pub fn uniform_growth_ln_bound(&self, beta: T, n: usize) -> Option<T> {
        match self {
            OperatorFamily::MatrixList { .. } => None,
            OperatorFamily::Geometric { .. }
            | OperatorFamily::Identity { .. }
            | OperatorFamily::Diagonal { .. } => {
                let floor = self.admissible_floor()?;
                if beta >= floor.value {
                    // e^{-beta j} |A|^j = e^{(floor - beta) j} <= 1
                    Some(T::zero())
                } else {
                    None
                }
            }
            OperatorFamily::Example1 { .. } => {
                let third = T::one() / ri::<T>(3);
                if beta >= -third {
                    // sup_m e^{-beta(m-n)} e^{a_n - a_m} <= e^{f_n} since the
                    // extra e^{(-1/3 - beta)(m-n)} factor is <= 1.
                    Some(examples::ex1::f_sup::<T>(n))
                } else {
                    None
                }
            }
            OperatorFamily::Example2 { .. } => {
                if beta >= T::zero() {
                    return Some(T::zero()); // f_beta is nonincreasing
                }
                if beta <= -T::one() {
                    return None;
                }
                Some(examples::ex2::real_sup_from(beta, ri::<T>(n)))
            }
        }
    }
}

/// One evolution operator `A(m, n)`, in whatever form the backend keeps.
#[derive(Debug, Clone, PartialEq)]
pub enum Operator<T> {
    Dense(Array2<T>),
    /// scalar multiple of the identity on `R^d`
    Scalar { dim: usize, value: LogScalar<T> },
    Diagonal(Vec<LogScalar<T>>),
}

impl<T: Real> Operator<T> {
    pub fn apply(&self, x: ArrayView1<T>) -> Array1<T> {
        match self {
            Operator::Dense(a) => a.dot(&x),
            Operator::Scalar { value, .. } => {
                let v = value.value();
                x.mapv(|c| c * v)
            }
            Operator::Diagonal(entries) => {
                Array1::from_iter(entries.iter().zip(x.iter()).map(|(e, c)| e.value() * *c))
            }
        }
    }

    pub fn norm(&self, vector_norm: VectorNorm) -> T {
        match self {
            Operator::Dense(a) => linalg::operator_norm(vector_norm, a.view()),
            // |c Id| = |c| and |diag| = max |c_j| under either norm
            Operator::Scalar { value, .. } => value.abs(),
            Operator::Diagonal(entries) => entries
                .iter()
                .map(|e| e.ln_abs())
                .fold(T::neg_infinity(), T::max)
                .exp(),
        }
    }

    /// Composition `self o rhs` (apply `rhs` first). Exact for adjacent
    /// log-domain factors.
    pub fn compose(&self, rhs: &Operator<T>) -> Operator<T> {
        match (self, rhs) {
            (Operator::Dense(a), Operator::Dense(b)) => Operator::Dense(a.dot(b)),
            (Operator::Scalar { dim, value: a }, Operator::Scalar { value: b, .. }) => {
                Operator::Scalar { dim: *dim, value: a.compose(b) }
            }
            (Operator::Diagonal(a), Operator::Diagonal(b)) => Operator::Diagonal(
                a.iter().zip(b.iter()).map(|(x, y)| x.compose(y)).collect(),
            ),
            _ => panic!("cannot compose operators from different backends"),
        }
    }
}

/// Per-coordinate log-potential prefix of a scalar track.
#[derive(Debug, Clone)]
struct ScalarTrack<T> {
    /// `S_0 ..= S_N`
    potential: Vec<T>,
    /// running count of negative steps before each slot
    neg_prefix: Vec<u32>,
}

impl<T: Real> ScalarTrack<T> {
    fn from_steps(values: impl Iterator<Item = T>, horizon: usize) -> Result<Self> {
        let mut potential = Vec::with_capacity(horizon + 1);
        let mut neg_prefix = Vec::with_capacity(horizon + 1);
        potential.push(T::zero());
        neg_prefix.push(0);
        let mut s = T::zero();
        let mut negs = 0u32;
        for (n, a) in values.take(horizon).enumerate() {
            if !a.is_finite() {
                return Err(Error::NonFinite { context: "building scalar track", index: n });
            }
            if a == T::zero() {
                return Err(Error::ZeroStep { index: n });
            }
            if a < T::zero() {
                negs += 1;
            }
            s = s + a.abs().ln();
            potential.push(s);
            neg_prefix.push(negs);
        }
        Ok(ScalarTrack { potential, neg_prefix })
    }

    fn from_potential(potential: Vec<T>) -> Self {
        let neg_prefix = vec![0; potential.len()];
        ScalarTrack { potential, neg_prefix }
    }

    #[inline]
    fn ln_abs(&self, m: usize, n: usize) -> T {
        self.potential[m] - self.potential[n]
    }

    #[inline]
    fn sign(&self, m: usize, n: usize) -> Sign {
        Sign::from_parity(self.neg_prefix[m] - self.neg_prefix[n])
    }

    #[inline]
    fn log_scalar(&self, m: usize, n: usize) -> LogScalar<T> {
        LogScalar::from_endpoints(self.sign(m, n), self.potential[n], self.potential[m])
    }
}

#[derive(Debug, Clone)]
enum Backend<T> {
    Dense { prods: Vec<Array2<T>>, norms: Vec<T> },
    Scalar(ScalarTrack<T>),
    Diagonal(Vec<ScalarTrack<T>>),
}

/// All evolution operators `A(m, n)` on the window `0 <= n <= m <= N`, with
/// operator norms, behind one of the backends described in the module docs.
#[derive(Debug, Clone)]
pub struct EvolutionCache<T: Real> {
    family: OperatorFamily<T>,
    horizon: usize,
    vector_norm: VectorNorm,
    backend: Backend<T>,
    build_ops: u64,
}

#[inline]
fn tri_index(m: usize, n: usize) -> usize {
    m * (m + 1) / 2 + n
}

impl<T: Real> EvolutionCache<T> {
    /// Build the cache for slots `0 ..= horizon`.
    pub fn build(
        family: OperatorFamily<T>,
        horizon: usize,
        vector_norm: VectorNorm,
    ) -> Result<Self> {
        if horizon == 0 {
            return Err(Error::invalid("horizon must be >= 1"));
        }
        let mut build_ops = 0u64;
        let backend = match &family {
            OperatorFamily::MatrixList { dim, steps } => {
                if steps.len() < horizon {
                    return Err(Error::NotEnoughSteps { available: steps.len(), horizon });
                }
                let tri = (horizon + 1) * (horizon + 2) / 2;
                let bytes =
                    (tri as u128) * (dim * dim) as u128 * std::mem::size_of::<T>() as u128;
                if bytes > DENSE_CACHE_BYTE_CAP {
                    return Err(Error::CacheTooLarge { bytes });
                }
                let mut prods: Vec<Array2<T>> = Vec::with_capacity(tri);
                let mut norms: Vec<T> = Vec::with_capacity(tri);
                for m in 0..=horizon {
                    for n in 0..=m {
                        let p = if m == n {
                            Array2::eye(*dim)
                        } else {
                            // A(m, n) = A_{m-1} A(m-1, n)
                            build_ops += 1;
                            steps[m - 1].dot(&prods[tri_index(m - 1, n)])
                        };
                        if linalg::first_non_finite(p.view()).is_some() {
                            return Err(Error::NonFinite {
                                context: "building evolution product",
                                index: m,
                            });
                        }
                        norms.push(linalg::operator_norm(vector_norm, p.view()));
                        prods.push(p);
                    }
                }
                Backend::Dense { prods, norms }
            }
            OperatorFamily::Geometric { rate, .. } => {
                build_ops += horizon as u64;
                Backend::Scalar(ScalarTrack::from_steps(
                    std::iter::repeat(*rate),
                    horizon,
                )?)
            }
            OperatorFamily::Identity { .. } => {
                build_ops += horizon as u64;
                Backend::Scalar(ScalarTrack::from_steps(
                    std::iter::repeat(T::one()),
                    horizon,
                )?)
            }
            OperatorFamily::Diagonal { rates, .. } => {
                build_ops += (horizon * rates.len()) as u64;
                let tracks = rates
                    .iter()
                    .map(|rate| ScalarTrack::from_steps(std::iter::repeat(*rate), horizon))
                    .collect::<Result<Vec<_>>>()?;
                Backend::Diagonal(tracks)
            }
            OperatorFamily::Example1 { .. } => {
                build_ops += horizon as u64;
                // A(m, n) = e^{a_n - a_m}, so the potential is S_k = -a_k.
                let potential =
                    (0..=horizon).map(|k| -examples::ex1::a::<T>(k)).collect::<Vec<_>>();
                Backend::Scalar(ScalarTrack::from_potential(potential))
            }
            OperatorFamily::Example2 { .. } => {
                build_ops += horizon as u64;
                let potential = (0..=horizon)
                    .map(|k| examples::ex2::f(ri::<T>(k)))
                    .collect::<Vec<_>>();
                Backend::Scalar(ScalarTrack::from_potential(potential))
            }
        };
        Ok(EvolutionCache { family, horizon, vector_norm, backend, build_ops, })
    }

    pub fn horizon(&self) -> usize {
        self.horizon
    }

    pub fn dim(&self) -> usize {
        self.family.dim()
    }

    pub fn vector_norm(&self) -> VectorNorm {
        self.vector_norm
    }

    pub fn family(&self) -> &OperatorFamily<T> {
        &self.family
    }

    /// Scalar operations spent building (tests assert the O(N^2) contract).
    pub fn build_ops(&self) -> u64 {
        self.build_ops
    }

    /// True when norms live in log-domain (scalar or diagonal backend), in
    /// which case single-query adapted norms match the literal rescan oracle
    /// bit for bit.
    pub fn is_log_domain(&self) -> bool {
        !matches!(self.backend, Backend::Dense { .. })
    }

    /// True when every `A(m, n)` acts on norms multiplicatively, i.e.
    /// `|A(m, n) x| = |A(m, n)| |x|` exactly: scalar-multiple-of-identity
    /// steps, or any one-dimensional family.
    pub(crate) fn is_scalar_track(&self) -> bool {
        matches!(self.backend, Backend::Scalar(_)) || self.dim() == 1
    }

    /// Number of independent scalar tracks (0 for the dense backend above
    /// dimension one; a one-dimensional dense family is a single track).
    pub(crate) fn track_count(&self) -> usize {
        match &self.backend {
            Backend::Dense { .. } => usize::from(self.dim() == 1),
            Backend::Scalar(_) => 1,
            Backend::Diagonal(tracks) => tracks.len(),
        }
    }

    /// `ln |c_j(m, n)|` of scalar track `j` (backends with tracks only).
    pub(crate) fn track_ln(&self, j: usize, m: usize, n: usize) -> T {
        match &self.backend {
            Backend::Dense { .. } => {
                debug_assert!(self.dim() == 1 && j == 0, "dense tracks exist only at dim 1");
                self.norm_ln_unchecked(m, n)
            }
            Backend::Scalar(track) => {
                debug_assert_eq!(j, 0);
                track.ln_abs(m, n)
            }
            Backend::Diagonal(tracks) => tracks[j].ln_abs(m, n),
        }
    }

    fn check_range(&self, m: usize, n: usize) -> Result<()> {
        if n > m || m > self.horizon {
            return Err(Error::IndexOutOfRange { m, n, horizon: self.horizon });
        }
        Ok(())
    }

    /// The evolution operator `A(m, n)`; `A(n, n)` is the identity.
    pub fn evolution(&self, m: usize, n: usize) -> Result<Operator<T>> {
        self.check_range(m, n)?;
        Ok(match &self.backend {
            Backend::Dense { prods, .. } => Operator::Dense(prods[tri_index(m, n)].clone()),
            Backend::Scalar(track) => {
                Operator::Scalar { dim: self.dim(), value: track.log_scalar(m, n) }
            }
            Backend::Diagonal(tracks) => {
                Operator::Diagonal(tracks.iter().map(|t| t.log_scalar(m, n)).collect())
            }
        })
    }

    /// Induced operator norm of `A(m, n)` under the cache's vector norm.
    /// Linear-domain value; see [`Self::operator_norm_ln`] for growth-proof
    /// queries on scalar backends.
    pub fn operator_norm(&self, m: usize, n: usize) -> Result<T> {
        self.check_range(m, n)?;
        Ok(match &self.backend {
            Backend::Dense { norms, .. } => norms[tri_index(m, n)],
            _ => self.norm_ln_unchecked(m, n).exp(),
        })
    }

    /// `ln |A(m, n)|`; `-inf` when the product is the zero operator.
    pub fn operator_norm_ln(&self, m: usize, n: usize) -> Result<T> {
        self.check_range(m, n)?;
        Ok(self.norm_ln_unchecked(m, n))
    }

    #[inline]
    pub(crate) fn norm_ln_unchecked(&self, m: usize, n: usize) -> T {
        match &self.backend {
            Backend::Dense { norms, .. } => norms[tri_index(m, n)].ln(),
            Backend::Scalar(track) => track.ln_abs(m, n),
            Backend::Diagonal(tracks) => tracks
                .iter()
                .map(|t| t.ln_abs(m, n))
                .fold(T::neg_infinity(), T::max),
        }
    }

    /// `|A(m, n) x|` under the cache's vector norm, without materializing
    /// the operator. For scalar backends this is exactly `|A(m, n)| * |x|`.
    pub(crate) fn apply_norm_unchecked(&self, m: usize, n: usize, x: ArrayView1<T>) -> T {
        match &self.backend {
            Backend::Dense { prods, .. } => {
                let y = prods[tri_index(m, n)].dot(&x);
                linalg::vec_norm(self.vector_norm, y.view())
            }
            Backend::Scalar(track) => {
                track.ln_abs(m, n).exp() * linalg::vec_norm(self.vector_norm, x)
            }
            Backend::Diagonal(tracks) => {
                let y = Array1::from_iter(
                    tracks.iter().zip(x.iter()).map(|(t, c)| t.log_scalar(m, n).value() * *c),
                );
                linalg::vec_norm(self.vector_norm, y.view())
            }
        }
    }

    /// Apply the single step `A_n` (requires `n < horizon`).
    pub fn apply_step(&self, n: usize, x: ArrayView1<T>) -> Result<Array1<T>> {
        if n >= self.horizon {
            return Err(Error::IndexOutOfRange { m: n + 1, n, horizon: self.horizon });
        }
        Ok(match &self.backend {
            Backend::Dense { prods, .. } => prods[tri_index(n + 1, n)].dot(&x),
            Backend::Scalar(track) => {
                let a = track.log_scalar(n + 1, n).value();
                x.mapv(|c| c * a)
            }
            Backend::Diagonal(tracks) => Array1::from_iter(
                tracks.iter().zip(x.iter()).map(|(t, c)| t.log_scalar(n + 1, n).value() * *c),
            ),
        })
    }
}
