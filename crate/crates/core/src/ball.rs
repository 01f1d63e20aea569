//! Certified complex interval arithmetic.
//!
//! A [`ComplexBall`] is a midpoint-radius enclosure: an arbitrary-precision
//! binary-float center together with a low-precision radius that is always
//! rounded outward. Every operation satisfies the containment contract: the
//! result ball contains the exact mathematical result for all points of the
//! input balls. Center arithmetic rounds to nearest at the ball's working
//! precision and the committed rounding error is folded into the radius.
//!
//! Nothing here ever claims a quantity is nonzero unless the whole ball is
//! bounded away from zero; callers that need a definitive answer on a ball
//! that straddles zero must recompute at higher precision.

use astro_float::{BigFloat, Exponent, RoundingMode, Sign};
use num_bigint::{BigInt, Sign as IntSign};
use num_traits::{ToPrimitive, Zero};

use crate::error::Error;
use crate::rational::Rational;
use crate::Result;

/// Radius precision in bits. Radii are coarse upper bounds; 64 bits is
/// plenty and keeps the error bookkeeping cheap at any center precision.
const RAD_PREC: usize = 64;

/// Smallest allowed working precision for centers.
pub const MIN_PREC: usize = 64;

const RM_CENTER: RoundingMode = RoundingMode::ToEven;
const UP: RoundingMode = RoundingMode::Up;
const DOWN: RoundingMode = RoundingMode::Down;

fn r_zero() -> BigFloat {
    BigFloat::new(RAD_PREC)
}

/// Exactly 2^k.
fn bf_two_pow(k: i64) -> BigFloat {
    // Mantissa 0.5 shifted by exponent k+1: 0.5 * 2^(k+1) = 2^k.
    let e: Exponent = (k + 1)
        .try_into()
        .expect("bf_two_pow: exponent out of range");
    BigFloat::from_words(&[1u64 << 63], Sign::Pos, e)
}

/// Upper bound on the absolute rounding error of one operation that produced
/// `x` at precision `p` bits: one ulp, 2^(exponent - p).
fn bf_ulp(x: &BigFloat, p: usize) -> BigFloat {
    match x.exponent() {
        Some(e) => bf_two_pow(e as i64 - p as i64),
        // NaN or infinity: poison the radius so the ball certifies nothing.
        None => BigFloat::nan(None),
    }
}

fn r_add(a: &BigFloat, b: &BigFloat) -> BigFloat {
    a.add(b, RAD_PREC, UP)
}

fn r_mul(a: &BigFloat, b: &BigFloat) -> BigFloat {
    a.mul(b, RAD_PREC, UP)
}

fn round_up(x: &BigFloat) -> BigFloat {
    x.add(&r_zero(), RAD_PREC, UP)
}

fn round_down(x: &BigFloat) -> BigFloat {
    x.add(&r_zero(), RAD_PREC, DOWN)
}

fn is_positive_finite(x: &BigFloat) -> bool {
    !x.is_nan() && !x.is_inf() && matches!(x.cmp(&r_zero()), Some(c) if c > 0)
}

/// Exact conversion of a big integer to a binary float.
pub fn bigfloat_from_bigint(n: &BigInt) -> BigFloat {
    let (sign, digits) = n.to_u64_digits();
    if digits.is_empty() {
        return BigFloat::new(MIN_PREC);
    }
    let s = match sign {
        IntSign::Minus => Sign::Neg,
        _ => Sign::Pos,
    };
    let e: Exponent = (digits.len() * 64)
        .try_into()
        .expect("bigfloat_from_bigint: integer too large");
    BigFloat::from_words(&digits, s, e)
}

/// Exact value of a finite binary float as a rational. `None` for NaN or
/// infinity.
pub fn bigfloat_to_rational(x: &BigFloat) -> Option<Rational> {
    if x.is_nan() || x.is_inf() {
        return None;
    }
    if x.is_zero() {
        return Some(Rational::zero());
    }
    let (words, _nbits, sign, e, _inexact) = x.as_raw_parts()?;
    // Value is sign * (M / 2^(64*len)) * 2^e with M the little-endian words.
    let mut m = BigInt::zero();
    for (i, w) in words.iter().enumerate() {
        m += BigInt::from(*w) << (64 * i);
    }
    if sign == Sign::Neg {
        m = -m;
    }
    let shift = e as i64 - 64 * words.len() as i64;
    let q = if shift >= 0 {
        Rational::from_integer(m << shift as usize)
    } else {
        Rational::new(m, BigInt::from(1) << ((-shift) as usize))
    };
    Some(q)
}

/// Approximate value of a binary float as an f64 (for display and seeding
/// only; never used in certified paths).
pub fn bigfloat_to_f64(x: &BigFloat) -> f64 {
    if x.is_nan() {
        return f64::NAN;
    }
    if x.is_inf_pos() {
        return f64::INFINITY;
    }
    if x.is_inf_neg() {
        return f64::NEG_INFINITY;
    }
    if x.is_zero() {
        return 0.0;
    }
    let Some((words, _nbits, sign, e, _inexact)) = x.as_raw_parts() else {
        return f64::NAN;
    };
    let len = words.len();
    let top = words[len - 1] as f64;
    let next = if len >= 2 { words[len - 2] as f64 } else { 0.0 };
    let frac = top * 2f64.powi(-64) + next * 2f64.powi(-128);
    let v = frac * 2f64.powi(e);
    if sign == Sign::Neg {
        -v
    } else {
        v
    }
}

/// Directed conversion of a rational to a binary float at `p` bits.
fn bigfloat_from_rational(q: &Rational, p: usize, rm: RoundingMode) -> BigFloat {
    let num = bigfloat_from_bigint(q.numer());
    let den = bigfloat_from_bigint(q.denom());
    num.div(&den, p, rm)
}

/// Complex midpoint-radius enclosure.
#[derive(Clone, Debug)]
pub struct ComplexBall {
    re: BigFloat,
    im: BigFloat,
    rad: BigFloat,
    prec: usize,
}

impl ComplexBall {
    fn make(re: BigFloat, im: BigFloat, rad: BigFloat, prec: usize) -> Self {
        ComplexBall { re, im, rad, prec }
    }

    /// The additive identity, exact at any precision.
    pub fn zero(prec: usize) -> Self {
        let p = prec.max(MIN_PREC);
        Self::make(BigFloat::new(p), BigFloat::new(p), r_zero(), p)
    }

    pub fn one(prec: usize) -> Self {
        Self::from_i64(1, prec)
    }

    pub fn from_i64(k: i64, prec: usize) -> Self {
        Self::from_bigint(&BigInt::from(k), prec)
    }

    /// Exact if the integer fits in `prec` bits; otherwise correctly rounded
    /// with the rounding error absorbed into the radius.
    pub fn from_bigint(n: &BigInt, prec: usize) -> Self {
        let p = prec.max(MIN_PREC);
        let exact = bigfloat_from_bigint(n);
        let mut c = exact.clone();
        if c.set_precision(p, RM_CENTER).is_err() {
            c = BigFloat::nan(None);
        }
        let rad = if n.bits() as usize <= p {
            r_zero()
        } else {
            bf_ulp(&c, p)
        };
        Self::make(c, BigFloat::new(p), round_up(&rad), p)
    }

    /// Encloses the exact rational `q`: center rounded to nearest at `prec`
    /// bits, radius one ulp.
    pub fn from_rational(q: &Rational, prec: usize) -> Self {
        Self::from_rational_pair(q, &Rational::zero(), prec)
    }

    pub fn from_rational_pair(re: &Rational, im: &Rational, prec: usize) -> Self {
        let p = prec.max(MIN_PREC);
        let cre = bigfloat_from_rational(re, p, RM_CENTER);
        let cim = bigfloat_from_rational(im, p, RM_CENTER);
        let mut rad = r_zero();
        if !re.is_zero() {
            rad = r_add(&rad, &bf_ulp(&cre, p));
        }
        if !im.is_zero() {
            rad = r_add(&rad, &bf_ulp(&cim, p));
        }
        Self::make(cre, cim, rad, p)
    }

    /// Exact embedding of an f64 pair (every f64 is a dyadic rational).
    pub fn from_f64_pair(re: f64, im: f64, prec: usize) -> Self {
        let p = prec.max(MIN_PREC);
        Self::make(BigFloat::from_f64(re, p), BigFloat::from_f64(im, p), r_zero(), p)
    }

    pub fn prec(&self) -> usize {
        self.prec
    }

    /// The same center with the radius enlarged by `|extra|`: turns a point
    /// enclosure into an enclosure of the whole disc of that radius.
    pub fn inflate(&self, extra: f64) -> Self {
        let e = round_up(&BigFloat::from_f64(extra.abs(), RAD_PREC));
        Self::make(
            self.re.clone(),
            self.im.clone(),
            r_add(&self.rad, &e),
            self.prec,
        )
    }

    pub fn re(&self) -> &BigFloat {
        &self.re
    }

    pub fn im(&self) -> &BigFloat {
        &self.im
    }

    pub fn rad(&self) -> &BigFloat {
        &self.rad
    }

    pub fn re_f64(&self) -> f64 {
        bigfloat_to_f64(&self.re)
    }

    pub fn im_f64(&self) -> f64 {
        bigfloat_to_f64(&self.im)
    }

    pub fn rad_f64(&self) -> f64 {
        bigfloat_to_f64(&self.rad)
    }

    /// Exact rational coordinates of the center. `None` if a center
    /// coordinate is not finite.
    pub fn center_to_rationals(&self) -> Option<(Rational, Rational)> {
        Some((
            bigfloat_to_rational(&self.re)?,
            bigfloat_to_rational(&self.im)?,
        ))
    }

    /// True when the ball is a single exact point.
    pub fn is_exact(&self) -> bool {
        self.rad.is_zero()
    }

    /// True when the ball is exactly the point 0.
    pub fn is_exact_zero(&self) -> bool {
        self.re.is_zero() && self.im.is_zero() && self.rad.is_zero()
    }

    fn center_abs_up(&self) -> BigFloat {
        let re2 = r_mul(&self.re.abs(), &self.re.abs());
        let im2 = r_mul(&self.im.abs(), &self.im.abs());
        r_add(&re2, &im2).sqrt(RAD_PREC, UP)
    }

    fn center_abs_down(&self) -> BigFloat {
        let rea = round_down(&self.re.abs());
        let ima = round_down(&self.im.abs());
        let re2 = rea.mul(&rea, RAD_PREC, DOWN);
        let im2 = ima.mul(&ima, RAD_PREC, DOWN);
        re2.add(&im2, RAD_PREC, DOWN).sqrt(RAD_PREC, DOWN)
    }

    /// Upper bound on |z| over the whole ball.
    pub fn abs_upper(&self) -> BigFloat {
        r_add(&self.center_abs_up(), &self.rad)
    }

    /// Lower bound on |z| over the whole ball (clamped at 0).
    pub fn abs_lower(&self) -> BigFloat {
        let d = self.center_abs_down().sub(&self.rad, RAD_PREC, DOWN);
        if is_positive_finite(&d) {
            d
        } else {
            r_zero()
        }
    }

    /// True when every point of the ball is nonzero.
    pub fn definitely_nonzero(&self) -> bool {
        let d = self.center_abs_down().sub(&self.rad, RAD_PREC, DOWN);
        is_positive_finite(&d)
    }

    /// True unless the ball is certified to exclude 0.
    pub fn possibly_zero(&self) -> bool {
        !self.definitely_nonzero()
    }

    /// Exact containment test for a rational point. Decided without rounding:
    /// centers and radius are dyadic rationals.
    pub fn contains_rational(&self, re: &Rational, im: &Rational) -> bool {
        let (Some(cre), Some(cim), Some(r)) = (
            bigfloat_to_rational(&self.re),
            bigfloat_to_rational(&self.im),
            bigfloat_to_rational(&self.rad),
        ) else {
            // A non-finite ball makes no exclusion claim.
            return true;
        };
        let dre = cre - re;
        let dim = cim - im;
        &dre * &dre + &dim * &dim <= &r * &r
    }

    pub fn neg(&self) -> Self {
        Self::make(self.re.neg(), self.im.neg(), self.rad.clone(), self.prec)
    }

    pub fn conj(&self) -> Self {
        Self::make(self.re.clone(), self.im.neg(), self.rad.clone(), self.prec)
    }

    pub fn add(&self, rhs: &Self) -> Self {
        let p = self.prec.max(rhs.prec);
        let re = self.re.add(&rhs.re, p, RM_CENTER);
        let im = self.im.add(&rhs.im, p, RM_CENTER);
        let mut rad = r_add(&self.rad, &rhs.rad);
        rad = r_add(&rad, &bf_ulp(&re, p));
        rad = r_add(&rad, &bf_ulp(&im, p));
        Self::make(re, im, rad, p)
    }

    pub fn sub(&self, rhs: &Self) -> Self {
        self.add(&rhs.neg())
    }

    pub fn mul(&self, rhs: &Self) -> Self {
        let p = self.prec.max(rhs.prec);
        let (a1, b1, a2, b2) = (&self.re, &self.im, &rhs.re, &rhs.im);

        let mut err = r_zero();
        let mut track = |x: &BigFloat| -> BigFloat {
            err = r_add(&err, &bf_ulp(x, p));
            x.clone()
        };
        let p11 = track(&a1.mul(a2, p, RM_CENTER));
        let p22 = track(&b1.mul(b2, p, RM_CENTER));
        let p12 = track(&a1.mul(b2, p, RM_CENTER));
        let p21 = track(&b1.mul(a2, p, RM_CENTER));
        let re = track(&p11.sub(&p22, p, RM_CENTER));
        let im = track(&p12.add(&p21, p, RM_CENTER));

        // |z1 z2 - c1 c2| <= |c1| r2 + |c2| r1 + r1 r2 over the input balls.
        let u1 = self.center_abs_up();
        let u2 = rhs.center_abs_up();
        let mut rad = r_mul(&u1, &rhs.rad);
        rad = r_add(&rad, &r_mul(&u2, &self.rad));
        rad = r_add(&rad, &r_mul(&self.rad, &rhs.rad));
        rad = r_add(&rad, &err);
        Self::make(re, im, rad, p)
    }

    pub fn mul_i64(&self, k: i64) -> Self {
        self.mul(&Self::from_i64(k, self.prec))
    }

    /// Multiplicative inverse. Errors if the ball is not certified to
    /// exclude 0.
    pub fn recip(&self) -> Result<Self> {
        let p = self.prec;
        let m = self.center_abs_down();
        let low = m.sub(&self.rad, RAD_PREC, DOWN);
        if !is_positive_finite(&low) {
            return Err(Error::BallContainsZero { prec: p });
        }

        // Approximate center w ~= conj(c) / |c|^2.
        let den = self
            .re
            .mul(&self.re, p, RM_CENTER)
            .add(&self.im.mul(&self.im, p, RM_CENTER), p, RM_CENTER);
        let wre = self.re.div(&den, p, RM_CENTER);
        let wim = self.im.neg().div(&den, p, RM_CENTER);

        // For any z in the ball, |1/z - w| <= (|1 - w c| + |w| r) / |z|
        // with |z| >= low. Both w and c are exact points, so the residual
        // 1 - w c is computed soundly in ball arithmetic.
        let w = Self::make(wre.clone(), wim.clone(), r_zero(), p);
        let c = Self::make(self.re.clone(), self.im.clone(), r_zero(), p);
        let resid = Self::one(p).sub(&w.mul(&c));
        let mut num = resid.abs_upper();
        num = r_add(&num, &r_mul(&w.center_abs_up(), &self.rad));
        let rad = num.div(&low, RAD_PREC, UP);
        Ok(Self::make(wre, wim, rad, p))
    }

    pub fn div(&self, rhs: &Self) -> Result<Self> {
        Ok(self.mul(&rhs.recip()?))
    }

    pub fn powi(&self, n: usize) -> Self {
        let mut acc = Self::one(self.prec);
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
}

impl PartialEq for ComplexBall {
    fn eq(&self, other: &Self) -> bool {
        self.re.cmp(&other.re) == Some(0)
            && self.im.cmp(&other.im) == Some(0)
            && self.rad.cmp(&other.rad) == Some(0)
    }
}

impl std::fmt::Display for ComplexBall {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(
            f,
            "({:e} + {:e}i +/- {:e})",
            self.re_f64(),
            self.im_f64(),
            self.rad_f64()
        )
    }
}

/// Certified enclosures of all `n` roots of `x^n = a` for a nonzero
/// rational `a`, pairwise disjoint.
///
/// Centers come from Newton refinement of f64 seeds; each radius is the
/// rigorous bound n |p(z)| / |p'(z)| on the distance from the center to the
/// nearest true root. Errors if a radius cannot be certified or two
/// enclosures overlap at this precision; retry at higher precision.
pub fn certified_binomial_roots(n: usize, a: &Rational, prec: usize) -> Result<Vec<ComplexBall>> {
    if n == 0 {
        return Err(Error::DegreeZero);
    }
    if a.is_zero() {
        return Err(Error::invalid("binomial root base must be nonzero"));
    }
    let p = prec.max(MIN_PREC);
    let wp = p + 64;

    let a_f64 = a.to_f64().ok_or_else(|| {
        Error::Numerical("rational base does not fit in f64 for seeding".into())
    })?;
    let r0 = a_f64.abs().powf(1.0 / n as f64);
    let theta0 = if a_f64 >= 0.0 { 0.0 } else { std::f64::consts::PI };

    let a_num = bigfloat_from_bigint(a.numer());
    let a_den = bigfloat_from_bigint(a.denom());
    let a_bf = a_num.div(&a_den, wp, RM_CENTER);
    let n_bf = BigFloat::from_f64(n as f64, wp);

    // Plain complex center arithmetic at working precision.
    let cmul = |x: &(BigFloat, BigFloat), y: &(BigFloat, BigFloat)| {
        (
            x.0.mul(&y.0, wp, RM_CENTER)
                .sub(&x.1.mul(&y.1, wp, RM_CENTER), wp, RM_CENTER),
            x.0.mul(&y.1, wp, RM_CENTER)
                .add(&x.1.mul(&y.0, wp, RM_CENTER), wp, RM_CENTER),
        )
    };
    let cdiv = |x: &(BigFloat, BigFloat), y: &(BigFloat, BigFloat)| {
        let d = y
            .0
            .mul(&y.0, wp, RM_CENTER)
            .add(&y.1.mul(&y.1, wp, RM_CENTER), wp, RM_CENTER);
        let nr = x
            .0
            .mul(&y.0, wp, RM_CENTER)
            .add(&x.1.mul(&y.1, wp, RM_CENTER), wp, RM_CENTER);
        let ni = x
            .1
            .mul(&y.0, wp, RM_CENTER)
            .sub(&x.0.mul(&y.1, wp, RM_CENTER), wp, RM_CENTER);
        (nr.div(&d, wp, RM_CENTER), ni.div(&d, wp, RM_CENTER))
    };
    let cpow = |x: &(BigFloat, BigFloat), mut k: usize| {
        let mut acc = (BigFloat::from_f64(1.0, wp), BigFloat::new(wp));
        let mut base = x.clone();
        while k > 0 {
            if k & 1 == 1 {
                acc = cmul(&acc, &base);
            }
            k >>= 1;
            if k > 0 {
                base = cmul(&base, &base);
            }
        }
        acc
    };

    // Newton doubles correct bits each step; f64 seeds carry ~50.
    let iters = {
        let mut it = 1usize;
        let mut bits = 40usize;
        while bits < wp {
            bits *= 2;
            it += 1;
        }
        it + 2
    };

    let mut roots = Vec::with_capacity(n);
    for k in 0..n {
        let theta = (theta0 + 2.0 * std::f64::consts::PI * k as f64) / n as f64;
        let mut z = (
            BigFloat::from_f64(r0 * theta.cos(), wp),
            BigFloat::from_f64(r0 * theta.sin(), wp),
        );
        for _ in 0..iters {
            let zn1 = cpow(&z, n - 1);
            let zn = cmul(&zn1, &z);
            let num = (zn.0.sub(&a_bf, wp, RM_CENTER), zn.1.clone());
            let den = (n_bf.mul(&zn1.0, wp, RM_CENTER), n_bf.mul(&zn1.1, wp, RM_CENTER));
            let step = cdiv(&num, &den);
            z = (z.0.sub(&step.0, wp, RM_CENTER), z.1.sub(&step.1, wp, RM_CENTER));
        }

        // Certify: the nearest root of x^n - a lies within n |p(z)/p'(z)|.
        let zb = ComplexBall::make(z.0.clone(), z.1.clone(), r_zero(), wp);
        let a_ball = ComplexBall::from_rational(a, wp);
        let pz = zb.powi(n).sub(&a_ball);
        let dpz = zb.powi(n - 1).mul_i64(n as i64);
        let dp_low = dpz.abs_lower();
        if !is_positive_finite(&dp_low) {
            return Err(Error::Numerical(format!(
                "root certification failed at {p} bits: derivative not bounded away from 0"
            )));
        }
        let radius = r_mul(&pz.abs_upper(), &BigFloat::from_f64(n as f64, RAD_PREC))
            .div(&dp_low, RAD_PREC, UP);
        roots.push(ComplexBall::make(z.0, z.1, radius, p));
    }

    for i in 0..roots.len() {
        for j in (i + 1)..roots.len() {
            if !roots[i].sub(&roots[j]).definitely_nonzero() {
                return Err(Error::Numerical(format!(
                    "root enclosures {i} and {j} overlap at {p} bits"
                )));
            }
        }
    }
    Ok(roots)
}

/// Certified enclosures of the `n` roots of `x^n + 1 = 0`.
pub fn certified_roots_of_minus_one(n: usize, prec: usize) -> Result<Vec<ComplexBall>> {
    certified_binomial_roots(n, &Rational::from_integer(BigInt::from(-1)), prec)
}

/// Determinant of a square ball matrix by Gaussian elimination with
/// partial pivoting on the lower absolute-value bound.
///
/// Returns an exact zero ball when a pivot column is structurally zero.
/// Errors with [`Error::BallContainsZero`] when every pivot candidate
/// straddles zero, meaning the sign of the determinant cannot be certified
/// at this precision.
pub fn ball_determinant(mut m: Vec<Vec<ComplexBall>>, prec: usize) -> Result<ComplexBall> {
    let n = m.len();
    for row in &m {
        if row.len() != n {
            return Err(Error::invalid("determinant requires a square matrix"));
        }
    }
    if n == 0 {
        return Ok(ComplexBall::one(prec));
    }
    let mut det = ComplexBall::one(prec);
    let mut sign_flip = false;
    for col in 0..n {
        let mut best: Option<(usize, BigFloat)> = None;
        let mut all_exact_zero = true;
        for row in col..n {
            if !m[row][col].is_exact_zero() {
                all_exact_zero = false;
            }
            let lo = m[row][col].abs_lower();
            if is_positive_finite(&lo) {
                let better = match &best {
                    None => true,
                    Some((_, b)) => matches!(lo.cmp(b), Some(c) if c > 0),
                };
                if better {
                    best = Some((row, lo));
                }
            }
        }
        if all_exact_zero {
            return Ok(ComplexBall::zero(prec));
        }
        let Some((piv, _)) = best else {
            return Err(Error::BallContainsZero { prec });
        };
        if piv != col {
            m.swap(piv, col);
            sign_flip = !sign_flip;
        }
        let pivot = m[col][col].clone();
        det = det.mul(&pivot);
        for row in (col + 1)..n {
            let factor = m[row][col].div(&pivot)?;
            for k in (col + 1)..n {
                let t = factor.mul(&m[col][k]);
                m[row][k] = m[row][k].sub(&t);
            }
            m[row][col] = ComplexBall::zero(prec);
        }
    }
    if sign_flip {
        det = det.neg();
    }
    Ok(det)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::rat;

    #[test]
    fn rational_enclosure_contains_value() {
        let third = rat(1, 3);
        let b = ComplexBall::from_rational(&third, 128);
        assert!(b.contains_rational(&third, &Rational::zero()));
        assert!(!b.is_exact());
        assert!(b.definitely_nonzero());
    }

    #[test]
    fn arithmetic_preserves_containment() {
        let a = ComplexBall::from_rational_pair(&rat(1, 3), &rat(2, 7), 128);
        let b = ComplexBall::from_rational_pair(&rat(-5, 11), &rat(1, 2), 128);
        // (1/3 + 2/7 i)(-5/11 + 1/2 i) exactly:
        // re = -5/33 - 1/7, im = 1/6 - 10/77.
        let prod = a.mul(&b);
        let re = rat(-5, 33) - rat(1, 7);
        let im = rat(1, 6) - rat(10, 77);
        assert!(prod.contains_rational(&re, &im));

        let q = a.div(&b).unwrap();
        let back = q.mul(&b);
        assert!(back.contains_rational(&rat(1, 3), &rat(2, 7)));
    }

    #[test]
    fn recip_rejects_zero_straddling_ball() {
        let tiny = ComplexBall::from_rational(&Rational::zero(), 128);
        assert!(matches!(
            tiny.recip(),
            Err(Error::BallContainsZero { .. })
        ));
    }

    #[test]
    fn exact_dyadic_roundtrip() {
        let x = BigFloat::from_f64(1.5, 64);
        assert_eq!(bigfloat_to_rational(&x).unwrap(), rat(3, 2));
        let n = BigInt::from(123456789012345678i64);
        let y = bigfloat_from_bigint(&n);
        assert_eq!(
            bigfloat_to_rational(&y).unwrap(),
            Rational::from_integer(n)
        );
    }

    #[test]
    fn square_roots_of_minus_one_are_certified() {
        let roots = certified_roots_of_minus_one(2, 256).unwrap();
        assert_eq!(roots.len(), 2);
        // Roots are +/- i.
        let mut found_pos = false;
        let mut found_neg = false;
        for r in &roots {
            if r.contains_rational(&Rational::zero(), &rat(1, 1)) {
                found_pos = true;
            }
            if r.contains_rational(&Rational::zero(), &rat(-1, 1)) {
                found_neg = true;
            }
            assert!(r.rad_f64() < 1e-60);
        }
        assert!(found_pos && found_neg);
    }

    #[test]
    fn eleventh_roots_partition_the_circle() {
        let roots = certified_roots_of_minus_one(11, 256).unwrap();
        assert_eq!(roots.len(), 11);
        // One root must be exactly -1 up to the enclosure.
        assert!(roots
            .iter()
            .any(|r| r.contains_rational(&rat(-1, 1), &Rational::zero())));
        // Vieta: the product of the roots of x^11 + 1 is (-1)^11 * 1 = -1.
        let mut prod = ComplexBall::one(256);
        for r in &roots {
            prod = prod.mul(r);
        }
        assert!(prod.contains_rational(&rat(-1, 1), &Rational::zero()));
        assert!(prod.definitely_nonzero());
    }

    #[test]
    fn determinant_of_rational_matrix() {
        // det [[1, 2], [3, 4]] = -2.
        let p = 128;
        let m = vec![
            vec![
                ComplexBall::from_i64(1, p),
                ComplexBall::from_i64(2, p),
            ],
            vec![
                ComplexBall::from_i64(3, p),
                ComplexBall::from_i64(4, p),
            ],
        ];
        let d = ball_determinant(m, p).unwrap();
        assert!(d.contains_rational(&rat(-2, 1), &Rational::zero()));
        assert!(d.definitely_nonzero());
    }

    #[test]
    fn determinant_detects_structural_zero_column() {
        let p = 128;
        let z = ComplexBall::zero(p);
        let m = vec![
            vec![z.clone(), ComplexBall::from_i64(2, p)],
            vec![z.clone(), ComplexBall::from_i64(4, p)],
        ];
        let d = ball_determinant(m, p).unwrap();
        assert!(d.is_exact_zero());
    }
}
