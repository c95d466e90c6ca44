//! Log-domain scalars for overflow-free evolution products.
//!
//! Scalar and diagonal families can sweep hundreds of e-folds across a
//! window, so their evolution operators are kept as `sign * exp(hi - lo)`
//! where `lo` and `hi` are accumulated log-potentials at the two endpoints
//! (`lo = S_n`, `hi = S_m` for the operator taking slot `n` to slot `m`).
//! Keeping both endpoints instead of the difference makes composition of
//! adjacent factors exact: the shared middle potential cancels structurally,
//! so `A(m, k) * A(k, n) == A(m, n)` bit for bit. That is the sense in which
//! the cocycle identity holds "exactly in log-domain" for these families.

use crate::num::Real;
use std::ops::Mul;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Sign {
    Negative,
    Zero,
    Positive,
}

impl Sign {
    pub fn of<T: Real>(x: T) -> Sign {
        if x == T::zero() {
            Sign::Zero
        } else if x > T::zero() {
            Sign::Positive
        } else {
            Sign::Negative
        }
    }

    pub fn from_parity(neg_count: u32) -> Sign {
        if neg_count % 2 == 0 {
            Sign::Positive
        } else {
            Sign::Negative
        }
    }

    pub fn unit<T: Real>(self) -> T {
        match self {
            Sign::Negative => -T::one(),
            Sign::Zero => T::zero(),
            Sign::Positive => T::one(),
        }
    }
}

impl Mul for Sign {
    type Output = Sign;
    fn mul(self, rhs: Sign) -> Sign {
        use Sign::*;
        match (self, rhs) {
            (Zero, _) | (_, Zero) => Zero,
            (Positive, Positive) | (Negative, Negative) => Positive,
            _ => Negative,
        }
    }
}

/// A real scalar `sign * exp(hi - lo)` carried by endpoint potentials.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LogScalar<T> {
    pub sign: Sign,
    /// potential at the source slot
    pub lo: T,
    /// potential at the target slot
    pub hi: T,
}

impl<T: Real> LogScalar<T> {
    pub fn one() -> Self {
        LogScalar { sign: Sign::Positive, lo: T::zero(), hi: T::zero() }
    }

    pub fn from_endpoints(sign: Sign, lo: T, hi: T) -> Self {
        LogScalar { sign, lo, hi }
    }

    /// Free-standing value (unit source potential).
    pub fn from_value(x: T) -> Self {
        match Sign::of(x) {
            Sign::Zero => LogScalar { sign: Sign::Zero, lo: T::zero(), hi: T::neg_infinity() },
            s => LogScalar { sign: s, lo: T::zero(), hi: x.abs().ln() },
        }
    }

    pub fn ln_abs(&self) -> T {
        match self.sign {
            Sign::Zero => T::neg_infinity(),
            _ => self.hi - self.lo,
        }
    }

    pub fn abs(&self) -> T {
        self.ln_abs().exp()
    }

    /// Linear value; may overflow to +/-inf for extreme exponents.
    pub fn value(&self) -> T {
        self.sign.unit::<T>() * self.abs()
    }

    /// Composition `self * rhs` with `self` acting after `rhs`. When the
    /// factors are adjacent (the source potential of `self` equals the
    /// target potential of `rhs`) the middle coordinate drops out exactly;
    /// otherwise the magnitudes are re-based, which costs one rounding.
    pub fn compose(&self, rhs: &LogScalar<T>) -> LogScalar<T> {
        let sign = self.sign * rhs.sign;
        if self.lo == rhs.hi {
            return LogScalar { sign, lo: rhs.lo, hi: self.hi };
        }
        LogScalar { sign, lo: rhs.lo, hi: rhs.hi + (self.hi - self.lo) }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn adjacent_composition_telescopes_exactly() {
        // Irrational-ish potentials where naive log addition would round.
        let s = [0.0_f64, 0.1f64.ln() + 0.77, 1.0 / 3.0, -7.4142135, 0.3333333333333333f64.exp()];
        for n in 0..s.len() {
            for k in n..s.len() {
                for m in k..s.len() {
                    let a_mk = LogScalar::from_endpoints(Sign::Positive, s[k], s[m]);
                    let a_kn = LogScalar::from_endpoints(Sign::Positive, s[n], s[k]);
                    let prod = a_mk.compose(&a_kn);
                    let direct = LogScalar::from_endpoints(Sign::Positive, s[n], s[m]);
                    assert_eq!(prod, direct);
                }
            }
        }
    }

    #[test]
    fn signs_multiply() {
        let neg = LogScalar::<f64>::from_value(-2.0);
        let pos = LogScalar::<f64>::from_value(3.0);
        assert_eq!(neg.compose(&neg).sign, Sign::Positive);
        assert_eq!(neg.compose(&pos).sign, Sign::Negative);
        let z = LogScalar::<f64>::from_value(0.0);
        assert_eq!(z.compose(&neg).sign, Sign::Zero);
        assert_eq!(z.value(), 0.0);
    }

    #[test]
    fn value_round_trips_modest_scalars() {
        for &x in &[0.5_f64, -1.25, 3.0, -0.1] {
            let v = LogScalar::from_value(x).value();
            assert!((v - x).abs() <= 1e-15 * x.abs());
        }
    }
}
