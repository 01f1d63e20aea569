//! Exact rational scalars.
//!
//! `Rational` is `num_rational::BigRational`: always stored reduced with a
//! positive denominator, so equality is structural and hashing-free code can
//! compare coefficients directly.

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};

use crate::error::Error;

pub type Rational = num_rational::BigRational;

/// `n/d` as an exact rational. Panics if `d == 0`; use for literals in
/// tests and constructions where the denominator is statically nonzero.
pub fn rat(n: i64, d: i64) -> Rational {
    assert!(d != 0, "rat: zero denominator");
    Rational::new(BigInt::from(n), BigInt::from(d))
}

/// Integer `n` as a rational.
pub fn rat_int(n: i64) -> Rational {
    Rational::from_integer(BigInt::from(n))
}

/// Parses `"p"`, `"-p"`, or `"p/q"` with optional sign, exactly.
pub fn parse_rational(s: &str) -> Result<Rational, Error> {
    let t = s.trim();
    if t.is_empty() {
        return Err(Error::Parse {
            at: 0,
            msg: "empty rational literal".into(),
        });
    }
    let (num_str, den_str) = match t.split_once('/') {
        Some((a, b)) => (a.trim(), Some(b.trim())),
        None => (t, None),
    };
    let num: BigInt = num_str.parse().map_err(|e| Error::Parse {
        at: 0,
        msg: format!("bad integer {num_str:?}: {e}"),
    })?;
    let den: BigInt = match den_str {
        Some(d) => d.parse().map_err(|e| Error::Parse {
            at: 0,
            msg: format!("bad integer {d:?}: {e}"),
        })?,
        None => BigInt::one(),
    };
    if den.is_zero() {
        return Err(Error::DivisionByZero);
    }
    Ok(Rational::new(num, den))
}

/// Renders reduced `p/q`, omitting `/q` when the denominator is one.
pub fn format_rational(r: &Rational) -> String {
    if r.denom().is_one() {
        r.numer().to_string()
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

/// Nearest-double approximation, for hand-off to float-based numerics.
pub fn rational_to_f64(r: &Rational) -> f64 {
    use num_traits::ToPrimitive;
    r.to_f64().unwrap_or_else(|| {
        let n = r.numer().to_f64().unwrap_or(f64::NAN);
        let d = r.denom().to_f64().unwrap_or(f64::NAN);
        n / d
    })
}

/// Nonnegative height `max(|numerator|, |denominator|)` of a reduced rational.
pub fn height(r: &Rational) -> BigInt {
    let n = r.numer().abs();
    let d = r.denom().abs();
    if n >= d {
        n
    } else {
        d
    }
}
