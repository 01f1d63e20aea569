//! Dense univariate polynomials: Euclidean gcd, Sylvester resultants, and
//! certified squarefreeness on the exact and ball tracks.
//!
//! The exact track decides squarefreeness outright via deg gcd(p, p') = 0.
//! The ball track can only certify "squarefree" (resultant ball excluding 0)
//! or report Unknown; it never claims a repeated root.

use crate::ball::{ball_determinant, ComplexBall};
use crate::coeff::CoeffField;
use crate::error::Error;
use crate::linalg;
use crate::rational::{rat_int, Rational};
use crate::Result;

/// Three-valued certificate answer.
#[derive(Debug, Clone, Copy, PartialEq, Eq, serde::Serialize)]
pub enum Decision {
    Yes,
    No,
    Unknown,
}

/// Coefficients in ascending degree; no trailing structural zeros.
#[derive(Clone, Debug, PartialEq)]
pub struct UniPoly<C: CoeffField> {
    coeffs: Vec<C>,
}

impl<C: CoeffField> UniPoly<C> {
    pub fn new(mut coeffs: Vec<C>) -> Self {
        while coeffs.last().is_some_and(|c| c.is_zero()) {
            coeffs.pop();
        }
        UniPoly { coeffs }
    }

    pub fn zero() -> Self {
        UniPoly { coeffs: vec![] }
    }

    pub fn constant(c: C) -> Self {
        Self::new(vec![c])
    }

    pub fn one() -> Self {
        Self::constant(C::one())
    }

    pub fn x() -> Self {
        Self::new(vec![C::zero(), C::one()])
    }

    /// The monomial `c x^e`.
    pub fn monomial(c: C, e: usize) -> Self {
        let mut v = vec![C::zero(); e + 1];
        v[e] = c;
        Self::new(v)
    }

    pub fn coeffs(&self) -> &[C] {
        &self.coeffs
    }

    pub fn coeff(&self, i: usize) -> C {
        self.coeffs.get(i).cloned().unwrap_or_else(C::zero)
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn degree(&self) -> Option<usize> {
        if self.coeffs.is_empty() {
            None
        } else {
            Some(self.coeffs.len() - 1)
        }
    }

    pub fn leading(&self) -> Option<&C> {
        self.coeffs.last()
    }

    pub fn neg(&self) -> Self {
        UniPoly {
            coeffs: self.coeffs.iter().map(|c| c.neg()).collect(),
        }
    }

    pub fn add(&self, other: &Self) -> Self {
        let n = self.coeffs.len().max(other.coeffs.len());
        let mut v = Vec::with_capacity(n);
        for i in 0..n {
            v.push(self.coeff(i).add(&other.coeff(i)));
        }
        Self::new(v)
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.neg())
    }

    pub fn mul(&self, other: &Self) -> Self {
        if self.is_zero() || other.is_zero() {
            return Self::zero();
        }
        let mut v = vec![C::zero(); self.coeffs.len() + other.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in other.coeffs.iter().enumerate() {
                v[i + j] = v[i + j].add(&a.mul(b));
            }
        }
        Self::new(v)
    }

    pub fn scale(&self, c: &C) -> Self {
        Self::new(self.coeffs.iter().map(|k| k.mul(c)).collect())
    }

    pub fn pow(&self, n: usize) -> Self {
        let mut acc = Self::one();
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

    pub fn derivative(&self) -> Self {
        if self.coeffs.len() <= 1 {
            return Self::zero();
        }
        let mut v = Vec::with_capacity(self.coeffs.len() - 1);
        for (i, c) in self.coeffs.iter().enumerate().skip(1) {
            v.push(c.scale_i64(i as i64));
        }
        Self::new(v)
    }

    pub fn eval(&self, x: &C) -> C {
        let mut acc = C::zero();
        for c in self.coeffs.iter().rev() {
            acc = acc.mul(x).add(c);
        }
        acc
    }
}

impl UniPoly<Rational> {
    pub fn from_i64_coeffs(coeffs: &[i64]) -> Self {
        Self::new(
            coeffs
                .iter()
                .map(|&k| Rational::from_integer(k.into()))
                .collect(),
        )
    }

    pub fn monic(&self) -> Self {
        match self.leading() {
            None => Self::zero(),
            Some(l) => {
                let inv = Rational::from_integer(1.into()) / l;
                self.scale(&inv)
            }
        }
    }

    /// Euclidean division: `self = q * d + r` with deg r < deg d.
    pub fn divrem(&self, d: &Self) -> Result<(Self, Self)> {
        let Some(dd) = d.degree() else {
            return Err(Error::DivisionByZero);
        };
        let lead = d.coeffs[dd].clone();
        let mut r = self.clone();
        let mut q = vec![rat_int(0); self.coeffs.len().saturating_sub(dd)];
        while let Some(rd) = r.degree() {
            if rd < dd {
                break;
            }
            let factor = &r.coeffs[rd] / &lead;
            q[rd - dd] = factor.clone();
            let shift = UniPoly::monomial(factor, rd - dd);
            r = r.sub(&shift.mul(d));
        }
        Ok((Self::new(q), r))
    }

    /// Monic greatest common divisor; gcd(p, 0) = monic(p).
    pub fn gcd(&self, other: &Self) -> Self {
        let mut a = self.clone();
        let mut b = other.clone();
        while !b.is_zero() {
            let (_, r) = a.divrem(&b).expect("division by nonzero polynomial");
            a = b;
            b = r;
        }
        a.monic()
    }

    /// Sylvester resultant, exact. Zero when either input is zero.
    pub fn resultant(&self, other: &Self) -> Rational {
        let (Some(m), Some(n)) = (self.degree(), other.degree()) else {
            return rat_int(0);
        };
        if m == 0 && n == 0 {
            return Rational::from_integer(1.into());
        }
        // res(a, b) with deg a = 0: a_0^n (and symmetrically).
        if m == 0 {
            return num_traits::pow::pow(self.coeffs[0].clone(), n);
        }
        if n == 0 {
            return num_traits::pow::pow(other.coeffs[0].clone(), m);
        }
        let size = m + n;
        let mut mat = vec![vec![rat_int(0); size]; size];
        for (row, r) in mat.iter_mut().enumerate().take(n) {
            for j in 0..=m {
                r[row + j] = self.coeffs[m - j].clone();
            }
        }
        for row in 0..m {
            for j in 0..=n {
                mat[n + row][row + j] = other.coeffs[n - j].clone();
            }
        }
        linalg::det_rational(mat)
    }

    /// Yun's squarefree decomposition: pairs (factor, multiplicity) with the
    /// factors squarefree, pairwise coprime, and the product of factor^mult
    /// equal to the input up to a constant. Empty for constants.
    pub fn squarefree_decomposition(&self) -> Vec<(Self, usize)> {
        let Some(d) = self.degree() else {
            return vec![];
        };
        if d == 0 {
            return vec![];
        }
        let mut out = Vec::new();
        let dp = self.derivative();
        let mut a = self.gcd(&dp);
        let mut b = self.divrem(&a).expect("gcd divides").0;
        let mut c = dp.divrem(&a).expect("gcd divides derivative").0;
        let mut mult = 1usize;
        loop {
            let d = c.sub(&b.derivative());
            a = b.gcd(&d);
            if a.degree() != Some(0) {
                out.push((a.monic(), mult));
            }
            b = b.divrem(&a).expect("gcd divides").0;
            c = d.divrem(&a).expect("gcd divides").0;
            mult += 1;
            if b.degree() == Some(0) {
                break;
            }
        }
        out
    }

    /// Exact squarefreeness: yes iff gcd(p, p') is constant.
    pub fn is_squarefree_exact(&self) -> Result<bool> {
        match self.degree() {
            None | Some(0) => Err(Error::DegreeZero),
            Some(_) => {
                let g = self.gcd(&self.derivative());
                Ok(g.degree() == Some(0))
            }
        }
    }

    /// Three-valued interface on the exact track: never Unknown.
    pub fn squarefree_certified(&self) -> Result<Decision> {
        Ok(if self.is_squarefree_exact()? {
            Decision::Yes
        } else {
            Decision::No
        })
    }

    /// Evaluation at a complex ball, coefficients lifted at the ball's
    /// precision.
    pub fn eval_ball(&self, z: &ComplexBall) -> ComplexBall {
        let p = z.prec();
        let mut acc = ComplexBall::zero(p);
        for c in self.coeffs.iter().rev() {
            acc = acc.mul(z).add(&ComplexBall::from_rational(c, p));
        }
        acc
    }

    pub fn to_ball(&self, prec: usize) -> UniPoly<ComplexBall> {
        UniPoly {
            coeffs: self
                .coeffs
                .iter()
                .map(|c| ComplexBall::from_rational(c, prec))
                .collect(),
        }
    }
}

impl UniPoly<ComplexBall> {
    /// Sylvester resultant over balls. Requires both leading coefficients to
    /// be provably nonzero, so the formal degrees are the true degrees.
    pub fn resultant_ball(&self, other: &Self, prec: usize) -> Result<ComplexBall> {
        let (Some(m), Some(n)) = (self.degree(), other.degree()) else {
            return Ok(ComplexBall::zero(prec));
        };
        for (p, what) in [(self, "left"), (other, "right")] {
            if !p.leading().is_some_and(|c| c.is_provably_nonzero()) {
                return Err(Error::invalid(format!(
                    "{what} resultant operand has uncertified leading coefficient"
                )));
            }
        }
        if m == 0 {
            return Ok(self.coeffs[0].powi(n));
        }
        if n == 0 {
            return Ok(other.coeffs[0].powi(m));
        }
        let size = m + n;
        let zero = ComplexBall::zero(prec);
        let mut mat = vec![vec![zero; size]; size];
        for (row, r) in mat.iter_mut().enumerate().take(n) {
            for j in 0..=m {
                r[row + j] = self.coeffs[m - j].clone();
            }
        }
        for row in 0..m {
            for j in 0..=n {
                mat[n + row][row + j] = other.coeffs[n - j].clone();
            }
        }
        ball_determinant(mat, prec)
    }

    /// Certified squarefreeness on the ball track: Yes when res(p, p') is
    /// bounded away from 0, otherwise Unknown. Never No.
    pub fn squarefree_certified_ball(&self, prec: usize) -> Result<Decision> {
        match self.degree() {
            None | Some(0) => Err(Error::DegreeZero),
            Some(_) => {
                let d = self.derivative();
                match self.resultant_ball(&d, prec) {
                    Ok(r) if r.definitely_nonzero() => Ok(Decision::Yes),
                    Ok(_) => Ok(Decision::Unknown),
                    Err(Error::BallContainsZero { .. }) => Ok(Decision::Unknown),
                    Err(e) => Err(e),
                }
            }
        }
    }
}
