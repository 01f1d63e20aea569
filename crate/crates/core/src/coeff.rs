//! Coefficient fields for polynomials and power series.
//!
//! Two implementations: exact rationals, where every zero test is decidable,
//! and complex balls, where only "provably nonzero" and "structurally zero"
//! are available. Generic code must branch on those two predicates and never
//! assume a ball that straddles zero is zero.

use crate::ball::ComplexBall;
use crate::error::Error;
use crate::rational::{format_rational, Rational};
use crate::Result;
use num_traits::{One, Zero};

pub trait CoeffField: Clone + PartialEq + std::fmt::Debug {
    fn zero() -> Self;
    fn one() -> Self;
    fn from_rational(q: &Rational) -> Self;
    fn from_i64(k: i64) -> Self;

    fn add(&self, rhs: &Self) -> Self;
    fn sub(&self, rhs: &Self) -> Self;
    fn mul(&self, rhs: &Self) -> Self;
    /// Errors on division by (possible) zero.
    fn div(&self, rhs: &Self) -> Result<Self>;
    fn neg(&self) -> Self;

    /// Structural zero: safe to drop from sparse storage. For balls this is
    /// the exact point 0, not a small enclosure around it.
    fn is_zero(&self) -> bool;

    /// Certified nonzero. For rationals this is the negation of `is_zero`;
    /// for balls it requires the whole enclosure to avoid 0.
    fn is_provably_nonzero(&self) -> bool;

    fn scale_i64(&self, k: i64) -> Self {
        self.mul(&Self::from_i64(k))
    }

    /// Human-readable rendering used by the text printers.
    fn render(&self) -> String;

    /// `(is_negative, |self|)` when the field has a canonical sign; `None`
    /// for balls, whose terms are printed with explicit `+`.
    fn as_signed_abs(&self) -> Option<(bool, Self)>;
}

impl CoeffField for Rational {
    fn zero() -> Self {
        <Rational as Zero>::zero()
    }

    fn one() -> Self {
        <Rational as One>::one()
    }

    fn from_rational(q: &Rational) -> Self {
        q.clone()
    }

    fn from_i64(k: i64) -> Self {
        Rational::from_integer(k.into())
    }

    fn add(&self, rhs: &Self) -> Self {
        self + rhs
    }

    fn sub(&self, rhs: &Self) -> Self {
        self - rhs
    }

    fn mul(&self, rhs: &Self) -> Self {
        self * rhs
    }

    fn div(&self, rhs: &Self) -> Result<Self> {
        if Zero::is_zero(rhs) {
            return Err(Error::DivisionByZero);
        }
        Ok(self / rhs)
    }

    fn neg(&self) -> Self {
        -self
    }

    fn is_zero(&self) -> bool {
        Zero::is_zero(self)
    }

    fn is_provably_nonzero(&self) -> bool {
        !Zero::is_zero(self)
    }

    fn render(&self) -> String {
        format_rational(self)
    }

    fn as_signed_abs(&self) -> Option<(bool, Self)> {
        use num_traits::Signed;
        Some((self.is_negative(), self.abs()))
    }
}

impl CoeffField for ComplexBall {
    fn zero() -> Self {
        ComplexBall::zero(crate::ball::MIN_PREC)
    }

    fn one() -> Self {
        ComplexBall::one(crate::ball::MIN_PREC)
    }

    fn from_rational(q: &Rational) -> Self {
        ComplexBall::from_rational(q, crate::ball::MIN_PREC)
    }

    fn from_i64(k: i64) -> Self {
        ComplexBall::from_i64(k, crate::ball::MIN_PREC)
    }

    fn add(&self, rhs: &Self) -> Self {
        ComplexBall::add(self, rhs)
    }

    fn sub(&self, rhs: &Self) -> Self {
        ComplexBall::sub(self, rhs)
    }

    fn mul(&self, rhs: &Self) -> Self {
        ComplexBall::mul(self, rhs)
    }

    fn div(&self, rhs: &Self) -> Result<Self> {
        ComplexBall::div(self, rhs)
    }

    fn neg(&self) -> Self {
        ComplexBall::neg(self)
    }

    fn is_zero(&self) -> bool {
        self.is_exact_zero()
    }

    fn is_provably_nonzero(&self) -> bool {
        self.definitely_nonzero()
    }

    fn render(&self) -> String {
        self.to_string()
    }

    fn as_signed_abs(&self) -> Option<(bool, Self)> {
        None
    }
}
