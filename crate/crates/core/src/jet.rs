//! Formal jet-differential algebra.
//!
//! Jet variables are the symbols d^ℓ z_j (ℓ ≥ 1); the coordinates z_j
//! themselves live in the polynomial coefficients and carry weight 0. A
//! monomial's weight is Σ ℓ·ν over its factors (d^ℓ z_j)^ν and its order is
//! the largest ℓ present. Products are symmetric. The total derivative obeys
//! d(d^ℓ z_j) = d^{ℓ+1} z_j, the Leibniz rule, and the chain rule on
//! coefficients; pullback along a curve germ substitutes the ℓ-th derivative
//! of the component series and returns the scalar series multiplying (dζ)^m.

use std::collections::BTreeMap;

use crate::coeff::CoeffField;
use crate::error::Error;
use crate::linalg::det_by_permutations;
use crate::poly::{Polynomial, VarSet};
use crate::rational::Rational;
use crate::series::TruncatedSeries;
use crate::univar::UniPoly;
use crate::Result;

/// Coordinate variables `z1..zn` for jet coefficients.
pub fn coordinate_vars(n: usize) -> VarSet {
    VarSet::new((1..=n).map(|j| format!("z{j}")).collect::<Vec<_>>())
        .expect("generated names are distinct")
}

/// A product of jet variables: sorted factors ((variable, order), exponent)
/// with positive exponents.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub struct JetMonomial {
    factors: Vec<((usize, usize), u32)>,
}

impl JetMonomial {
    pub fn one() -> Self {
        JetMonomial { factors: vec![] }
    }

    pub fn single(var: usize, order: usize) -> Self {
        assert!(order >= 1, "jet order starts at 1");
        JetMonomial {
            factors: vec![((var, order), 1)],
        }
    }

    pub fn from_factors(mut factors: Vec<((usize, usize), u32)>) -> Self {
        factors.retain(|&(_, e)| e > 0);
        factors.sort_by_key(|&(k, _)| k);
        let mut merged: Vec<((usize, usize), u32)> = Vec::with_capacity(factors.len());
        for (k, e) in factors {
            assert!(k.1 >= 1, "jet order starts at 1");
            match merged.last_mut() {
                Some((lk, le)) if *lk == k => *le += e,
                _ => merged.push((k, e)),
            }
        }
        JetMonomial { factors: merged }
    }

    pub fn factors(&self) -> &[((usize, usize), u32)] {
        &self.factors
    }

    pub fn is_empty(&self) -> bool {
        self.factors.is_empty()
    }

    /// Σ ℓ·ν over factors (d^ℓ z_j)^ν.
    pub fn weight(&self) -> usize {
        self.factors
            .iter()
            .map(|&((_, l), e)| l * e as usize)
            .sum()
    }

    /// Largest jet order present; 0 for the empty monomial.
    pub fn order(&self) -> usize {
        self.factors.iter().map(|&((_, l), _)| l).max().unwrap_or(0)
    }

    pub fn mul(&self, other: &JetMonomial) -> JetMonomial {
        let mut f = self.factors.clone();
        f.extend_from_slice(&other.factors);
        Self::from_factors(f)
    }
}

/// Formal sum of jet monomials with polynomial coefficients in z1..zn.
#[derive(Clone, Debug, PartialEq)]
pub struct JetDifferential<C: CoeffField> {
    n: usize,
    terms: BTreeMap<JetMonomial, Polynomial<C>>,
}

impl<C: CoeffField> JetDifferential<C> {
    pub fn zero(n: usize) -> Self {
        JetDifferential {
            n,
            terms: BTreeMap::new(),
        }
    }

    /// A weight-0 jet differential: just a coefficient polynomial. The
    /// polynomial's variables must be among z1..zn.
    pub fn from_poly(n: usize, p: &Polynomial<C>) -> Result<Self> {
        let vars = coordinate_vars(n);
        let p = p.embed(&vars)?;
        let mut jd = Self::zero(n);
        if !p.is_zero() {
            jd.terms.insert(JetMonomial::one(), p);
        }
        Ok(jd)
    }

    /// The jet variable d^order z_{var+1}.
    pub fn jet_var(n: usize, var: usize, order: usize) -> Self {
        assert!(var < n, "coordinate index out of range");
        let vars = coordinate_vars(n);
        let mut jd = Self::zero(n);
        jd.terms
            .insert(JetMonomial::single(var, order), Polynomial::one(&vars));
        jd
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&JetMonomial, &Polynomial<C>)> {
        self.terms.iter()
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    fn add_term(&mut self, m: JetMonomial, p: Polynomial<C>) {
        if p.is_zero() {
            return;
        }
        match self.terms.entry(m) {
            std::collections::btree_map::Entry::Vacant(e) => {
                e.insert(p);
            }
            std::collections::btree_map::Entry::Occupied(mut e) => {
                let s = e.get().add(&p);
                if s.is_zero() {
                    e.remove();
                } else {
                    *e.get_mut() = s;
                }
            }
        }
    }

    pub fn neg(&self) -> Self {
        let mut jd = Self::zero(self.n);
        for (m, p) in &self.terms {
            jd.terms.insert(m.clone(), p.neg());
        }
        jd
    }

    pub fn add(&self, other: &Self) -> Self {
        assert_eq!(self.n, other.n, "ambient dimension mismatch");
        let mut jd = self.clone();
        for (m, p) in &other.terms {
            jd.add_term(m.clone(), p.clone());
        }
        jd
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.neg())
    }

    /// Symmetric product.
    pub fn mul(&self, other: &Self) -> Self {
        assert_eq!(self.n, other.n, "ambient dimension mismatch");
        let mut jd = Self::zero(self.n);
        for (ma, pa) in &self.terms {
            for (mb, pb) in &other.terms {
                jd.add_term(ma.mul(mb), pa.mul(pb));
            }
        }
        jd
    }

    pub fn scale_poly(&self, p: &Polynomial<C>) -> Result<Self> {
        let vars = coordinate_vars(self.n);
        let p = p.embed(&vars)?;
        let mut jd = Self::zero(self.n);
        for (m, q) in &self.terms {
            jd.add_term(m.clone(), q.mul(&p));
        }
        Ok(jd)
    }

    pub fn scale(&self, c: &C) -> Self {
        let mut jd = Self::zero(self.n);
        for (m, q) in &self.terms {
            jd.add_term(m.clone(), q.scale(c));
        }
        jd
    }

    /// Common weight of all terms, when homogeneous. `None` for the zero
    /// differential or mixed weights.
    pub fn weight_homogeneous(&self) -> Option<usize> {
        let mut it = self.terms.keys();
        let w = it.next()?.weight();
        if it.all(|m| m.weight() == w) {
            Some(w)
        } else {
            None
        }
    }

    /// Largest jet order over all terms.
    pub fn order(&self) -> usize {
        self.terms.keys().map(|m| m.order()).max().unwrap_or(0)
    }

    /// The formal total derivative: d(d^ℓ z_j) = d^{ℓ+1} z_j on jet
    /// variables (Leibniz over products), chain rule dP = Σ ∂P/∂z_j · dz_j
    /// on coefficients. Raises every term's weight by exactly 1.
    pub fn total_derivative(&self) -> Self {
        let mut out = Self::zero(self.n);
        for (mono, coeff) in &self.terms {
            // Chain rule on the coefficient.
            for j in 0..self.n {
                let dp = coeff.partial_derivative(j);
                if !dp.is_zero() {
                    out.add_term(mono.mul(&JetMonomial::single(j, 1)), dp);
                }
            }
            // Leibniz over the jet factors.
            for (idx, &((j, l), e)) in mono.factors.iter().enumerate() {
                let mut f = mono.factors.clone();
                f[idx].1 = e - 1;
                f.push(((j, l + 1), 1));
                let bumped = JetMonomial::from_factors(f);
                out.add_term(bumped, coeff.scale(&C::from_i64(e as i64)));
            }
        }
        out
    }

    /// Pullback along a curve germ: substitute d^ℓ z_j ↦ (d/dζ)^ℓ f_j to
    /// get the scalar series τ with f*ω = τ(ζ)(dζ)^m. Requires homogeneous
    /// weight; the result's truncation order is the germ's minus the jet
    /// order.
    pub fn pullback(&self, germ: &CurveGerm<C>) -> Result<TruncatedSeries<C>> {
        if germ.n() != self.n {
            return Err(Error::invalid(
                "germ dimension does not match jet differential",
            ));
        }
        let big_k = germ.order();
        if self.is_zero() {
            return Ok(TruncatedSeries::zero(big_k));
        }
        if self.weight_homogeneous().is_none() {
            return Err(Error::NotHomogeneous);
        }
        let k_max = self.order();
        if big_k < k_max {
            return Err(Error::TruncationTooSmall {
                have: big_k,
                need: k_max,
            });
        }
        let out_order = big_k - k_max;

        // derivs[j][l] = (d/dζ)^l f_j, truncation order big_k - l.
        let mut derivs: Vec<Vec<TruncatedSeries<C>>> = Vec::with_capacity(self.n);
        for j in 0..self.n {
            let mut col = vec![germ.component(j).clone()];
            for l in 1..=k_max {
                let d = col[l - 1].derivative()?;
                col.push(d);
            }
            derivs.push(col);
        }

        let mut acc = TruncatedSeries::zero(out_order);
        for (mono, coeff) in &self.terms {
            let mut t = eval_poly_at_series(coeff, germ.components())?.truncate(out_order);
            for &((j, l), e) in mono.factors() {
                let base = derivs[j][l].truncate(out_order);
                t = t.mul(&base.pow(e as usize));
            }
            acc = acc.add(&t);
        }
        Ok(acc)
    }
}

/// Evaluates a polynomial at series arguments.
pub fn eval_poly_at_series<C: CoeffField>(
    p: &Polynomial<C>,
    args: &[TruncatedSeries<C>],
) -> Result<TruncatedSeries<C>> {
    if p.vars().len() != args.len() {
        return Err(Error::invalid("series substitution arity mismatch"));
    }
    let order = args.iter().map(|s| s.order()).min().unwrap_or(0);
    let mut acc = TruncatedSeries::zero(order);
    for (m, c) in p.terms() {
        let mut t = TruncatedSeries::constant(c.clone(), order);
        for (j, &e) in m.0.iter().enumerate() {
            if e > 0 {
                t = t.mul(&args[j].pow(e as usize));
            }
        }
        acc = acc.add(&t);
    }
    Ok(acc)
}

/// Truncated-series map ζ ↦ (f_1(ζ), ..., f_n(ζ)); the carrier of d^ℓ f.
#[derive(Clone, Debug, PartialEq)]
pub struct CurveGerm<C: CoeffField> {
    comps: Vec<TruncatedSeries<C>>,
}

impl<C: CoeffField> CurveGerm<C> {
    /// Components are normalized to the smallest common truncation order.
    pub fn new(comps: Vec<TruncatedSeries<C>>) -> Result<Self> {
        if comps.is_empty() {
            return Err(Error::invalid("germ needs at least one component"));
        }
        let order = comps.iter().map(|s| s.order()).min().unwrap();
        Ok(CurveGerm {
            comps: comps.into_iter().map(|s| s.truncate(order)).collect(),
        })
    }

    pub fn n(&self) -> usize {
        self.comps.len()
    }

    pub fn order(&self) -> usize {
        self.comps[0].order()
    }

    pub fn component(&self, j: usize) -> &TruncatedSeries<C> {
        &self.comps[j]
    }

    pub fn components(&self) -> &[TruncatedSeries<C>] {
        &self.comps
    }
}

/// Wronskian of scalar series: det[(d/dζ)^{i} u_j], rows i = 0..s-1.
pub fn wronskian_series<C: CoeffField>(
    entries: &[TruncatedSeries<C>],
) -> Result<TruncatedSeries<C>> {
    let s = entries.len();
    if s == 0 {
        return Err(Error::invalid("empty Wronskian entry list"));
    }
    let kmin = entries.iter().map(|u| u.order()).min().unwrap();
    if kmin + 1 < s {
        return Err(Error::TruncationTooSmall {
            have: kmin,
            need: s - 1,
        });
    }
    let out_order = kmin - (s - 1);
    let mut rows: Vec<Vec<TruncatedSeries<C>>> = vec![entries.to_vec()];
    for i in 1..s {
        let prev = &rows[i - 1];
        let mut row = Vec::with_capacity(s);
        for u in prev {
            row.push(u.derivative()?);
        }
        rows.push(row);
    }
    let det = det_by_permutations(
        s,
        |i, j| rows[i][j].truncate(out_order),
        TruncatedSeries::zero(out_order),
        |a, b| a.add(b),
        |a, b| a.mul(b),
        |a| a.neg(),
    );
    Ok(det)
}

/// Wronskian of univariate polynomials with the formal derivative; exact.
pub fn wronskian_poly(entries: &[UniPoly<Rational>]) -> Result<UniPoly<Rational>> {
    let s = entries.len();
    if s == 0 {
        return Err(Error::invalid("empty Wronskian entry list"));
    }
    let mut rows: Vec<Vec<UniPoly<Rational>>> = vec![entries.to_vec()];
    for i in 1..s {
        let row = rows[i - 1].iter().map(|u| u.derivative()).collect();
        rows.push(row);
    }
    Ok(det_by_permutations(
        s,
        |i, j| rows[i][j].clone(),
        UniPoly::zero(),
        |a, b| a.add(b),
        |a, b| a.mul(b),
        |a| a.neg(),
    ))
}

/// Wronskian inside the jet algebra: entries are jet differentials, the
/// derivative is the formal total derivative d.
pub fn wronskian_jet<C: CoeffField>(
    entries: &[JetDifferential<C>],
) -> Result<JetDifferential<C>> {
    let s = entries.len();
    if s == 0 {
        return Err(Error::invalid("empty Wronskian entry list"));
    }
    let n = entries[0].n();
    if entries.iter().any(|e| e.n() != n) {
        return Err(Error::invalid("Wronskian entries over different dimensions"));
    }
    let mut rows: Vec<Vec<JetDifferential<C>>> = vec![entries.to_vec()];
    for i in 1..s {
        let row = rows[i - 1].iter().map(|u| u.total_derivative()).collect();
        rows.push(row);
    }
    Ok(det_by_permutations(
        s,
        |i, j| rows[i][j].clone(),
        JetDifferential::zero(n),
        |a, b| a.add(b),
        |a, b| a.mul(b),
        |a| a.neg(),
    ))
}

impl<C: CoeffField> std::fmt::Display for JetDifferential<C> {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "{}", crate::textio::format_jet(self))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::rat_int;

    fn z_poly(n: usize, j: usize) -> Polynomial<Rational> {
        Polynomial::var(&coordinate_vars(n), j)
    }

    #[test]
    fn leibniz_on_z_dz() {
        // d(z1 * dz1) = (dz1)^2 + z1 * d2z1.
        let n = 1;
        let z_dz = JetDifferential::jet_var(n, 0, 1)
            .scale_poly(&z_poly(n, 0))
            .unwrap();
        let d = z_dz.total_derivative();
        let expect = JetDifferential::jet_var(n, 0, 1)
            .mul(&JetDifferential::jet_var(n, 0, 1))
            .add(
                &JetDifferential::jet_var(n, 0, 2)
                    .scale_poly(&z_poly(n, 0))
                    .unwrap(),
            );
        assert_eq!(d, expect);
    }

    #[test]
    fn derivative_of_constant_vanishes() {
        let c = JetDifferential::from_poly(2, &Polynomial::constant(&coordinate_vars(2), rat_int(5)))
            .unwrap();
        assert!(c.total_derivative().is_zero());
    }

    #[test]
    fn weight_increases_by_one_under_d() {
        let w = JetDifferential::<Rational>::jet_var(2, 0, 1)
            .mul(&JetDifferential::jet_var(2, 1, 2));
        assert_eq!(w.weight_homogeneous(), Some(3));
        let dw = w.total_derivative();
        assert_eq!(dw.weight_homogeneous(), Some(4));
        assert!(dw.order() <= w.order() + 1);
    }

    #[test]
    fn pullback_of_squared_differential() {
        // ω = (dz)^2 along f(ζ) = ζ^2: (2ζ)^2 = 4ζ^2.
        let omega = JetDifferential::<Rational>::jet_var(1, 0, 1).mul(&JetDifferential::jet_var(1, 0, 1));
        let f = CurveGerm::new(vec![TruncatedSeries::var(8).pow(2)]).unwrap();
        let tau = omega.pullback(&f).unwrap();
        assert_eq!(tau.coeff(2), rat_int(4));
        assert_eq!(tau.coeff(0), rat_int(0));
        assert_eq!(tau.coeff(1), rat_int(0));
    }

    #[test]
    fn pullback_of_second_derivative_is_constant() {
        // ω = d²z along f(ζ) = ζ²: identically 2.
        let omega = JetDifferential::<Rational>::jet_var(1, 0, 2);
        let f = CurveGerm::new(vec![TruncatedSeries::var(8).pow(2)]).unwrap();
        let tau = omega.pullback(&f).unwrap();
        assert_eq!(tau.coeff(0), rat_int(2));
        assert!(tau.coeffs()[1..].iter().all(|c| c == &rat_int(0)));
    }

    #[test]
    fn third_derivative_of_quadratic_germ_vanishes() {
        let omega = JetDifferential::<Rational>::jet_var(1, 0, 3);
        let f = CurveGerm::new(vec![TruncatedSeries::var(8).pow(2)]).unwrap();
        let tau = omega.pullback(&f).unwrap();
        assert!(tau.is_zero_through_order());
    }

    #[test]
    fn pullback_weight_three_along_exp() {
        // ω = z (dz)(d²z), f = e^ζ: τ = e^ζ · e^ζ · e^ζ = e^{3ζ}.
        let n = 1;
        let omega = JetDifferential::jet_var(n, 0, 1)
            .mul(&JetDifferential::jet_var(n, 0, 2))
            .scale_poly(&z_poly(n, 0))
            .unwrap();
        assert_eq!(omega.weight_homogeneous(), Some(3));
        let f = CurveGerm::new(vec![TruncatedSeries::exp_linear(&rat_int(1), 10)]).unwrap();
        let tau = omega.pullback(&f).unwrap();
        let expect = TruncatedSeries::exp_linear(&rat_int(3), tau.order());
        assert_eq!(tau, expect);
    }

    #[test]
    fn pullback_rejects_mixed_weight() {
        let omega = JetDifferential::<Rational>::jet_var(1, 0, 1)
            .add(&JetDifferential::jet_var(1, 0, 2));
        let f = CurveGerm::new(vec![TruncatedSeries::var(8)]).unwrap();
        assert!(matches!(omega.pullback(&f), Err(Error::NotHomogeneous)));
    }

    #[test]
    fn wronskian_of_monomial_basis() {
        // W(1, ζ, ζ²) = 2.
        let one = TruncatedSeries::<Rational>::one(8);
        let z = TruncatedSeries::var(8);
        let z2 = z.pow(2);
        let w = wronskian_series(&[one, z, z2]).unwrap();
        assert_eq!(w.coeff(0), rat_int(2));
        assert!(w.coeffs()[1..].iter().all(|c| c == &rat_int(0)));
    }

    #[test]
    fn wronskian_alternating_gives_zero() {
        let u = TruncatedSeries::exp_linear(&rat_int(2), 8);
        let w = wronskian_series(&[u.clone(), u]).unwrap();
        assert!(w.is_zero_through_order());
    }

    #[test]
    fn wronskian_with_sine_matches_negative_sine() {
        // W(1, ζ, sin ζ) = -sin ζ.
        let order = 8;
        let mut sin = TruncatedSeries::<Rational>::zero(order);
        // sin ζ = ζ - ζ³/6 + ζ⁵/120 - ζ⁷/5040.
        let mut sc = vec![rat_int(0); order + 1];
        sc[1] = rat_int(1);
        sc[3] = rat_int(-1) / rat_int(6);
        sc[5] = rat_int(1) / rat_int(120);
        sc[7] = rat_int(-1) / rat_int(5040);
        for (i, c) in sc.into_iter().enumerate() {
            if i <= order {
                let mut coeffs = sin.coeffs().to_vec();
                coeffs[i] = c;
                sin = TruncatedSeries::from_coeffs(coeffs).unwrap();
            }
        }
        let one = TruncatedSeries::one(order);
        let z = TruncatedSeries::var(order);
        let w = wronskian_series(&[one, z, sin.clone()]).unwrap();
        let neg_sin = sin.truncate(w.order()).neg();
        assert_eq!(w, neg_sin);
    }
}
