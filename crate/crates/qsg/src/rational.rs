//! Exact rational arithmetic helpers.
//!
//! All weights, thresholds, payoffs and region coordinates in this crate are
//! arbitrary-precision rationals. Floating point appears nowhere in a
//! decision path.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};

/// The scalar type used everywhere.
pub type Q = BigRational;

/// Rational from an integer.
pub fn qi(n: i64) -> Q {
    Q::from_integer(BigInt::from(n))
}

/// Rational n/d.
pub fn q(n: i64, d: i64) -> Q {
    assert!(d != 0, "zero denominator");
    Q::new(BigInt::from(n), BigInt::from(d))
}

/// Parses `p`, `-p`, or `p/q`. Decimal notation is rejected so that float
/// contamination is impossible at the boundary.
pub fn parse_q(s: &str) -> Result<Q> {
    let s = s.trim();
    if s.is_empty() {
        return Err(Error::invalid("empty rational"));
    }
    if s.contains('.') {
        return Err(Error::invalid(format!(
            "`{s}`: decimal notation is not accepted; write an exact fraction like 1/2"
        )));
    }
    let parse_int = |t: &str| -> Result<BigInt> {
        t.parse::<BigInt>()
            .map_err(|_| Error::invalid(format!("`{t}` is not an integer")))
    };
    match s.split_once('/') {
        None => Ok(Q::from_integer(parse_int(s)?)),
        Some((num, den)) => {
            let num = parse_int(num)?;
            let den = parse_int(den)?;
            if den.is_zero() {
                return Err(Error::invalid(format!("`{s}` has a zero denominator")));
            }
            Ok(Q::new(num, den))
        }
    }
}

/// Canonical text form: lowest terms, `p` for integers, `p/q` otherwise.
pub fn fmt_q(x: &Q) -> String {
    if x.denom().is_one() {
        x.numer().to_string()
    } else {
        format!("{}/{}", x.numer(), x.denom())
    }
}

/// λ^k for a natural exponent.
pub fn pow_q(x: &Q, k: usize) -> Q {
    let mut acc = Q::one();
    let mut base = x.clone();
    let mut k = k;
    while k > 0 {
        if k & 1 == 1 {
            acc *= &base;
        }
        base = &base * &base;
        k >>= 1;
    }
    acc
}

/// max(|x|, acc) convenience for weight scans.
pub fn abs_q(x: &Q) -> Q {
    x.abs()
}
