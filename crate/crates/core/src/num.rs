//! Exact rational scalars and small vector helpers.
//!
//! Every coefficient in this crate is a [`Rat`]: an arbitrary-precision
//! fraction kept in lowest terms with a positive denominator. There is no
//! floating point anywhere; all comparisons are exact.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use std::cmp::Ordering;

/// Exact rational scalar. Always reduced, denominator always positive.
pub type Rat = num_rational::BigRational;

/// Integer-valued rational.
pub fn rat(n: i64) -> Rat {
    Rat::from_integer(BigInt::from(n))
}

/// Rational `n/d`. Panics on `d == 0`.
pub fn frac(n: i64, d: i64) -> Rat {
    Rat::new(BigInt::from(n), BigInt::from(d))
}

/// Parses `"p/q"` or `"p"` into a rational.
pub fn parse_rat(s: &str) -> Result<Rat, String> {
    s.trim()
        .parse::<Rat>()
        .map_err(|e| format!("invalid rational {s:?}: {e}"))
}

/// Renders a rational as `"p/q"`, or `"p"` when the denominator is 1.
pub fn format_rat(r: &Rat) -> String {
    r.to_string()
}

pub fn dot(a: &[Rat], b: &[Rat]) -> Rat {
    debug_assert_eq!(a.len(), b.len(), "dot product dimension mismatch");
    let mut acc = Rat::zero();
    for (x, y) in a.iter().zip(b.iter()) {
        if !x.is_zero() && !y.is_zero() {
            acc += x * y;
        }
    }
    acc
}

pub fn is_zero_vec(v: &[Rat]) -> bool {
    v.iter().all(Rat::is_zero)
}

pub fn lex_cmp(a: &[Rat], b: &[Rat]) -> Ordering {
    for (x, y) in a.iter().zip(b.iter()) {
        match x.cmp(y) {
            Ordering::Equal => continue,
            ord => return ord,
        }
    }
    a.len().cmp(&b.len())
}

/// The unique positive scale factor that turns the given rationals into
/// integers with content (gcd of absolute values) 1. Returns 1 for an
/// all-zero input.
pub fn primitive_positive_scale<'a>(values: impl Iterator<Item = &'a Rat> + Clone) -> Rat {
    let mut denom_lcm = BigInt::one();
    let mut any = false;
    for v in values.clone() {
        if !v.is_zero() {
            any = true;
            denom_lcm = denom_lcm.lcm(v.denom());
        }
    }
    if !any {
        return Rat::one();
    }
    let mut content = BigInt::zero();
    for v in values {
        if !v.is_zero() {
            let scaled = v.numer() * (&denom_lcm / v.denom());
            content = content.gcd(&scaled.abs());
        }
    }
    Rat::new(denom_lcm, content)
}

/// Scales a direction vector to primitive integer form (positive scaling,
/// so the ray it spans is unchanged).
pub fn primitive_direction(v: &[Rat]) -> Vec<Rat> {
    let s = primitive_positive_scale(v.iter());
    v.iter().map(|x| x * &s).collect()
}

pub fn all_integer(v: &[Rat]) -> bool {
    v.iter().all(Rat::is_integer)
}
