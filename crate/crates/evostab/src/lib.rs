//! Numerical stability analysis for discrete linear dynamics `x_{n+1} = A_n x_n`.
//!
//! The central object is the two-parameter evolution family
//! `A(m, n) = A_{m-1} ... A_n` (with `A(n, n) = Id`), which is *not* assumed
//! invertible. An exponent `alpha` is admissible when
//! `|A(m, n)| <= M_n e^{alpha (m - n)}` for some positive sequence `(M_n)`;
//! the family is uniformly bounded at `alpha` when `(M_n)` can be chosen
//! bounded. Around any admissible exponent one can build the adapted norms
//!
//! ```text
//! |x|_{n,alpha} = sup_{m >= n} e^{-alpha (m - n)} |A(m, n) x|
//! ```
//!
//! under which the one-step evolution map `(T u)_n = A_{n-1} u_{n-1}` acts
//! with norm at most `e^alpha` on windows of vector sequences. Everything
//! here is finite-horizon numerics on a window `n = 0 ..= N`: growth tables,
//! invertibility bounds for `G = T - Id`, exponential-decay certificates with
//! explicitly checkable constants, and two closed-form worked families that
//! exercise the nonuniform corners of the theory.
//!
//! Modules follow the pipeline:
//!
//! * [`dynamics`]: operator families, the cached evolution triangle, norms;
//! * [`adapted_norms`]: growth tables `M_n(alpha)`, adapted norms of vectors
//!   and windows, uniformity and membership verdicts, admissibility scans;
//! * [`evolution_operators`]: the evolution map `T`, its generator-like
//!   difference `G = T - Id`, forward solves of `G u = -v`, norm and
//!   spectral-radius estimates, invertibility bounds;
//! * [`certificates`]: decay certificates built from inverse-norm bounds or
//!   from single-orbit gap arguments, plus their verifiers;
//! * [`examples`]: the two closed-form families used as worked examples,
//!   with their full verification suites;
//! * [`oracles`]: slow, independent re-computations used by the test suites
//!   (exact integer power sums, dense forward substitution, literal sup
//!   rescans);
//! * [`report`]: deterministic line-oriented records shared with the CLI.
//!
//! The numeric core is generic over the scalar type through [`num::Real`];
//! the aliases at the crate root pin `f64`, which is what the CLI and the
//! acceptance tolerances assume.

pub mod adapted_norms;
pub mod certificates;
pub mod dynamics;
pub mod error;
pub mod evolution_operators;
pub mod examples;
pub mod linalg;
pub mod logdomain;
pub mod num;
pub mod oracles;
pub mod report;
pub mod window;

pub use error::Error;
pub use linalg::VectorNorm;

/// Result alias used throughout the crate.
pub type Result<T, E = Error> = std::result::Result<T, E>;

/// Double-precision operator family (what the CLI builds from JSON).
pub type Family = dynamics::OperatorFamily<f64>;
/// Double-precision evolution cache.
pub type Cache = dynamics::EvolutionCache<f64>;
/// Double-precision growth-table context around one exponent.
pub type Context<'c> = adapted_norms::AlphaContext<'c, f64>;
/// Double-precision window of vector samples.
pub type Window = window::SequenceWindow<f64>;
