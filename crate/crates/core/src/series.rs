//! Truncated power series in one variable, and Laurent windows with
//! explicit knowledge ranges.
//!
//! A [`TruncatedSeries`] of order K stores coefficients of ζ^0..ζ^K and
//! guarantees correctness modulo ζ^{K+1}. Every operation records the
//! smallest truncation order its result is good for; orders only shrink.

use crate::coeff::CoeffField;
use crate::error::Error;
use crate::rational::Rational;
use crate::univar::UniPoly;
use crate::Result;

/// Default truncation order for germ-level detection work.
pub const DEFAULT_ORDER: usize = 24;

/// Dense truncated power series: coefficients of ζ^0..ζ^order.
#[derive(Clone, Debug, PartialEq)]
pub struct TruncatedSeries<C: CoeffField> {
    coeffs: Vec<C>,
}

impl<C: CoeffField> TruncatedSeries<C> {
    /// Series with the given coefficients; order = len - 1.
    pub fn from_coeffs(coeffs: Vec<C>) -> Result<Self> {
        if coeffs.is_empty() {
            return Err(Error::invalid("series needs at least the constant term"));
        }
        Ok(TruncatedSeries { coeffs })
    }

    pub fn zero(order: usize) -> Self {
        TruncatedSeries {
            coeffs: vec![C::zero(); order + 1],
        }
    }

    pub fn constant(c: C, order: usize) -> Self {
        let mut s = Self::zero(order);
        s.coeffs[0] = c;
        s
    }

    pub fn one(order: usize) -> Self {
        Self::constant(C::one(), order)
    }

    /// The series ζ.
    pub fn var(order: usize) -> Self {
        let mut s = Self::zero(order);
        if order >= 1 {
            s.coeffs[1] = C::one();
        }
        s
    }

    /// e^{c ζ} through the given order.
    pub fn exp_linear(c: &C, order: usize) -> Self {
        let mut coeffs = Vec::with_capacity(order + 1);
        let mut term = C::one();
        coeffs.push(term.clone());
        for k in 1..=order {
            term = term
                .mul(c)
                .div(&C::from_i64(k as i64))
                .expect("nonzero integer divisor");
            coeffs.push(term.clone());
        }
        TruncatedSeries { coeffs }
    }

    /// Truncation order K: coefficients are correct through ζ^K.
    pub fn order(&self) -> usize {
        self.coeffs.len() - 1
    }

    pub fn coeff(&self, i: usize) -> C {
        self.coeffs.get(i).cloned().unwrap_or_else(C::zero)
    }

    pub fn coeffs(&self) -> &[C] {
        &self.coeffs
    }

    /// All stored coefficients structurally zero.
    pub fn is_zero_through_order(&self) -> bool {
        self.coeffs.iter().all(|c| c.is_zero())
    }

    /// Lowers the truncation order.
    pub fn truncate(&self, order: usize) -> Self {
        let k = order.min(self.order());
        TruncatedSeries {
            coeffs: self.coeffs[..=k].to_vec(),
        }
    }

    pub fn neg(&self) -> Self {
        TruncatedSeries {
            coeffs: self.coeffs.iter().map(|c| c.neg()).collect(),
        }
    }

    pub fn add(&self, other: &Self) -> Self {
        let k = self.order().min(other.order());
        let mut coeffs = Vec::with_capacity(k + 1);
        for i in 0..=k {
            coeffs.push(self.coeffs[i].add(&other.coeffs[i]));
        }
        TruncatedSeries { coeffs }
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.neg())
    }

    pub fn mul(&self, other: &Self) -> Self {
        let k = self.order().min(other.order());
        let mut coeffs = vec![C::zero(); k + 1];
        for i in 0..=k {
            if self.coeffs[i].is_zero() {
                continue;
            }
            for j in 0..=(k - i) {
                coeffs[i + j] = coeffs[i + j].add(&self.coeffs[i].mul(&other.coeffs[j]));
            }
        }
        TruncatedSeries { coeffs }
    }

    pub fn scale(&self, c: &C) -> Self {
        TruncatedSeries {
            coeffs: self.coeffs.iter().map(|k| k.mul(c)).collect(),
        }
    }

    pub fn pow(&self, n: usize) -> Self {
        let mut acc = Self::one(self.order());
        let mut base = self.clone();
        let mut k = n;
        while k > 0 {
            if k & 1 == 1 {
                acc = acc.mul(&base);
            }
            k >>= 1;
            if k > 0 {
                base = base.mul(&base);
            }
        }
        acc
    }

    /// d/dζ. The top coefficient of the result would need the next unknown
    /// coefficient, so the order drops by one.
    pub fn derivative(&self) -> Result<Self> {
        if self.order() == 0 {
            return Err(Error::TruncationTooSmall { have: 0, need: 1 });
        }
        let mut coeffs = Vec::with_capacity(self.order());
        for i in 1..=self.order() {
            coeffs.push(self.coeffs[i].scale_i64(i as i64));
        }
        Ok(TruncatedSeries { coeffs })
    }

    /// Composition self ∘ inner; `inner` must have zero constant term.
    pub fn compose(&self, inner: &Self) -> Result<Self> {
        if !inner.coeffs[0].is_zero() {
            return Err(Error::ConstantTermNonzero);
        }
        let k = self.order().min(inner.order());
        let inner = inner.truncate(k);
        // Horner: s0 + t (s1 + t (s2 + ...)).
        let mut acc = TruncatedSeries::constant(self.coeff(k), k);
        for i in (0..k).rev() {
            acc = acc.mul(&inner);
            acc.coeffs[0] = acc.coeffs[0].add(&self.coeffs[i]);
        }
        Ok(acc)
    }

    /// Reciprocal; the constant term must be provably nonzero.
    pub fn recip(&self) -> Result<Self> {
        let coeffs = recip_raw(&self.coeffs)?;
        Ok(TruncatedSeries { coeffs })
    }

    pub fn div(&self, other: &Self) -> Result<Self> {
        Ok(self.mul(&other.recip()?))
    }

    /// Index of the first provably nonzero coefficient, with everything
    /// before it structurally zero. `None` when the whole window is zero.
    /// Errors if a leading coefficient is neither (ball indeterminacy).
    pub fn valuation(&self) -> Result<Option<usize>> {
        for (i, c) in self.coeffs.iter().enumerate() {
            if c.is_provably_nonzero() {
                return Ok(Some(i));
            }
            if !c.is_zero() {
                return Err(Error::invalid(
                    "leading coefficient neither provably nonzero nor structurally zero",
                ));
            }
        }
        Ok(None)
    }
}

fn recip_raw<C: CoeffField>(a: &[C]) -> Result<Vec<C>> {
    let a0 = &a[0];
    if !a0.is_provably_nonzero() {
        return Err(Error::ConstantTermZero);
    }
    let inv0 = C::one().div(a0)?;
    let mut b = Vec::with_capacity(a.len());
    b.push(inv0.clone());
    for k in 1..a.len() {
        // b_k = -(sum_{i=1..k} a_i b_{k-i}) / a_0.
        let mut s = C::zero();
        for i in 1..=k {
            s = s.add(&a[i].mul(&b[k - i]));
        }
        b.push(s.neg().mul(&inv0));
    }
    Ok(b)
}

impl TruncatedSeries<Rational> {
    /// A polynomial in one variable, read as a series.
    pub fn from_unipoly(p: &UniPoly<Rational>, order: usize) -> Self {
        let mut s = Self::zero(order);
        for (i, c) in p.coeffs().iter().enumerate() {
            if i > order {
                break;
            }
            s.coeffs[i] = c.clone();
        }
        s
    }
}

/// Formal Laurent window: the coefficient of ζ^t is known to be 0 for
/// t < start, stored for start ≤ t < end, and unknown from end on.
///
/// Operations propagate exactly how far knowledge extends; nothing is ever
/// claimed beyond the window.
#[derive(Clone, Debug, PartialEq)]
pub struct LaurentWindow<C: CoeffField> {
    start: i64,
    coeffs: Vec<C>,
}

impl<C: CoeffField> LaurentWindow<C> {
    pub fn new(start: i64, coeffs: Vec<C>) -> Self {
        LaurentWindow { start, coeffs }
    }

    pub fn from_series(s: &TruncatedSeries<C>) -> Self {
        LaurentWindow {
            start: 0,
            coeffs: s.coeffs().to_vec(),
        }
    }

    pub fn start(&self) -> i64 {
        self.start
    }

    /// First exponent with unknown coefficient.
    pub fn end(&self) -> i64 {
        self.start + self.coeffs.len() as i64
    }

    pub fn coeff(&self, t: i64) -> C {
        if t < self.start {
            return C::zero();
        }
        let i = (t - self.start) as usize;
        self.coeffs.get(i).cloned().unwrap_or_else(C::zero)
    }

    /// All known coefficients structurally zero.
    pub fn is_zero_through_window(&self) -> bool {
        self.coeffs.iter().all(|c| c.is_zero())
    }

    pub fn neg(&self) -> Self {
        LaurentWindow {
            start: self.start,
            coeffs: self.coeffs.iter().map(|c| c.neg()).collect(),
        }
    }

    pub fn add(&self, other: &Self) -> Self {
        let start = self.start.min(other.start);
        let end = self.end().min(other.end());
        let mut coeffs = Vec::new();
        let mut t = start;
        while t < end {
            coeffs.push(self.coeff(t).add(&other.coeff(t)));
            t += 1;
        }
        LaurentWindow { start, coeffs }
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.neg())
    }

    pub fn mul(&self, other: &Self) -> Self {
        let start = self.start + other.start;
        // Unknown tails first pollute exponent min(e1 + s2, e2 + s1).
        let end = (self.end() + other.start).min(other.end() + self.start);
        let len = (end - start).max(0) as usize;
        let mut coeffs = vec![C::zero(); len];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in other.coeffs.iter().enumerate() {
                if i + j < len {
                    coeffs[i + j] = coeffs[i + j].add(&a.mul(b));
                }
            }
        }
        LaurentWindow { start, coeffs }
    }

    /// d/dζ termwise: coefficient of ζ^{t} picks up factor t+1 from ζ^{t+1}.
    pub fn derivative(&self) -> Self {
        let start = self.start - 1;
        let end = self.end() - 1;
        let mut coeffs = Vec::with_capacity((end - start).max(0) as usize);
        let mut t = start;
        while t < end {
            coeffs.push(self.coeff(t + 1).scale_i64(t + 1));
            t += 1;
        }
        LaurentWindow { start, coeffs }
    }

    /// Exact scalar multiple; the knowledge window is unchanged.
    pub fn scale(&self, c: &C) -> Self {
        LaurentWindow {
            start: self.start,
            coeffs: self.coeffs.iter().map(|a| a.mul(c)).collect(),
        }
    }

    /// Moves structural leading zeros out of storage, raising `start`; the
    /// value is unchanged. Prepares a window for [`Self::recip`].
    pub fn normalized(&self) -> Self {
        let lead = self.coeffs.iter().take_while(|c| c.is_zero()).count();
        LaurentWindow {
            start: self.start + lead as i64,
            coeffs: self.coeffs[lead..].to_vec(),
        }
    }

    /// First exponent in the window with a structurally nonzero coefficient.
    pub fn lowest_nonzero(&self) -> Option<i64> {
        self.coeffs
            .iter()
            .position(|c| !c.is_zero())
            .map(|i| self.start + i as i64)
    }

    /// Reciprocal. The lowest known coefficient must be provably nonzero
    /// (the window must expose the true valuation).
    pub fn recip(&self) -> Result<Self> {
        if self.coeffs.is_empty() {
            return Err(Error::ConstantTermZero);
        }
        let coeffs = recip_raw(&self.coeffs)?;
        Ok(LaurentWindow {
            start: -self.start,
            coeffs,
        })
    }

    /// Integer power, negative exponents via the reciprocal.
    pub fn powi(&self, k: i64) -> Result<Self> {
        let base = if k < 0 { self.recip()? } else { self.clone() };
        let mut e = k.unsigned_abs();
        if e == 0 {
            let mut v = vec![C::zero(); base.coeffs.len().max(1)];
            v[0] = C::one();
            return Ok(LaurentWindow { start: 0, coeffs: v });
        }
        // Repeated squaring without an identity factor: multiplying by a
        // finite-window 1 would artificially shrink the knowledge window.
        let mut acc: Option<Self> = None;
        let mut b = base;
        while e > 0 {
            if e & 1 == 1 {
                acc = Some(match acc {
                    None => b.clone(),
                    Some(r) => r.mul(&b),
                });
            }
            e >>= 1;
            if e > 0 {
                b = b.mul(&b);
            }
        }
        Ok(acc.expect("nonzero exponent produces a factor"))
    }

    /// Windows agree on every exponent both know.
    pub fn agrees_with(&self, other: &Self) -> bool {
        let end = self.end().min(other.end());
        let start = self.start.min(other.start);
        let mut t = start;
        while t < end {
            if self.coeff(t) != other.coeff(t) {
                return false;
            }
            t += 1;
        }
        true
    }
}

impl<C: CoeffField> std::fmt::Display for TruncatedSeries<C> {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let mut first = true;
        for (i, c) in self.coeffs.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            if !first {
                write!(f, " + ")?;
            }
            first = false;
            match i {
                0 => write!(f, "{}", c.render())?,
                1 => write!(f, "{}*zeta", c.render())?,
                _ => write!(f, "{}*zeta^{i}", c.render())?,
            }
        }
        if first {
            write!(f, "0")?;
        }
        write!(f, " + O(zeta^{})", self.order() + 1)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::{rat, rat_int};

    fn geom(order: usize) -> TruncatedSeries<Rational> {
        // 1/(1 - zeta) = 1 + zeta + zeta^2 + ...
        TruncatedSeries::one(order)
            .sub(&TruncatedSeries::var(order))
            .recip()
            .unwrap()
    }

    #[test]
    fn geometric_series_by_reciprocal() {
        let g = geom(3);
        assert_eq!(
            g.coeffs(),
            &[rat_int(1), rat_int(1), rat_int(1), rat_int(1)]
        );
    }

    #[test]
    fn exp_composed_with_doubling() {
        // exp(2 zeta) through order 4: 1 + 2z + 2z^2 + 4/3 z^3 + 2/3 z^4.
        let e = TruncatedSeries::exp_linear(&rat_int(1), 4);
        let t = TruncatedSeries::var(4).scale(&rat_int(2));
        let c = e.compose(&t).unwrap();
        assert_eq!(
            c.coeffs(),
            &[rat_int(1), rat_int(2), rat_int(2), rat(4, 3), rat(2, 3)]
        );
        // Same thing directly.
        assert_eq!(c, TruncatedSeries::exp_linear(&rat_int(2), 4));
    }

    #[test]
    fn compose_with_zero_gives_constant_term() {
        let s = TruncatedSeries::from_coeffs(vec![rat_int(7), rat_int(3), rat_int(5)]).unwrap();
        let z = TruncatedSeries::zero(2);
        let c = s.compose(&z).unwrap();
        assert_eq!(c.coeff(0), rat_int(7));
        assert!(c.coeffs()[1..].iter().all(|c| c == &rat_int(0)));
    }

    #[test]
    fn compose_rejects_nonzero_constant_term() {
        let s = TruncatedSeries::<Rational>::one(4);
        assert!(matches!(
            s.compose(&TruncatedSeries::one(4)),
            Err(Error::ConstantTermNonzero)
        ));
    }

    #[test]
    fn recip_rejects_zero_constant_term() {
        let v: TruncatedSeries<Rational> = TruncatedSeries::var(4);
        assert!(matches!(v.recip(), Err(Error::ConstantTermZero)));
    }

    #[test]
    fn derivative_shrinks_order() {
        let e = TruncatedSeries::exp_linear(&rat_int(3), 6);
        let d = e.derivative().unwrap();
        assert_eq!(d.order(), 5);
        assert_eq!(d, e.truncate(5).scale(&rat_int(3)));
    }

    #[test]
    fn laurent_recip_flips_valuation() {
        // zeta^2 * (1 + zeta): recip = zeta^{-2} * (1 - zeta + zeta^2 - ...).
        let w = LaurentWindow::new(2, vec![rat_int(1), rat_int(1), rat_int(0), rat_int(0)]);
        let r = w.recip().unwrap();
        assert_eq!(r.start(), -2);
        assert_eq!(r.coeff(-2), rat_int(1));
        assert_eq!(r.coeff(-1), rat_int(-1));
        assert_eq!(r.coeff(0), rat_int(1));
        // w * recip(w) agrees with 1 on the common window.
        let prod = w.mul(&r);
        let one = LaurentWindow::new(0, vec![rat_int(1), rat_int(0), rat_int(0), rat_int(0)]);
        assert!(prod.agrees_with(&one));
    }

    #[test]
    fn laurent_derivative_handles_negative_exponents() {
        // d/dzeta (zeta^{-1}) = -zeta^{-2}.
        let w = LaurentWindow::new(-1, vec![rat_int(1), rat_int(0), rat_int(0)]);
        let d = w.derivative();
        assert_eq!(d.coeff(-2), rat_int(-1));
        assert_eq!(d.coeff(-1), rat_int(0));
    }

    #[test]
    fn window_arithmetic_tracks_knowledge() {
        let a = LaurentWindow::new(0, vec![rat_int(1); 5]); // known through zeta^4
        let b = LaurentWindow::new(-1, vec![rat_int(1); 3]); // known through zeta^1
        let s = a.add(&b);
        assert_eq!(s.start(), -1);
        assert_eq!(s.end(), 2);
        let p = a.mul(&b);
        // end = min(5 + (-1), 2 + 0) = 2.
        assert_eq!(p.start(), -1);
        assert_eq!(p.end(), 2);
    }
}
