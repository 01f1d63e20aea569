//! Sparse exact multivariate polynomials over a pluggable coefficient field.
//!
//! Terms are stored in a map keyed by exponent vectors under graded
//! lexicographic order on the declared variable list, with no structurally
//! zero coefficients. Binary operations align operands by variable name,
//! extending each side with exponent-zero variables as needed.

use std::cmp::Ordering;
use std::collections::BTreeMap;

use crate::coeff::CoeffField;
use crate::error::Error;
use crate::rational::Rational;
use crate::univar::UniPoly;
use crate::Result;

/// Ordered list of distinct variable names.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct VarSet {
    names: Vec<String>,
}

impl VarSet {
    pub fn new<S: Into<String>>(names: Vec<S>) -> Result<Self> {
        let names: Vec<String> = names.into_iter().map(Into::into).collect();
        for (i, a) in names.iter().enumerate() {
            if a.is_empty() {
                return Err(Error::invalid("empty variable name"));
            }
            if names[..i].contains(a) {
                return Err(Error::invalid(format!("duplicate variable name {a:?}")));
            }
        }
        Ok(VarSet { names })
    }

    /// `x0, x1, ..., x{n-1}`.
    pub fn xs(n: usize) -> Self {
        VarSet {
            names: (0..n).map(|i| format!("x{i}")).collect(),
        }
    }

    /// The single variable `name`.
    pub fn single(name: &str) -> Self {
        VarSet {
            names: vec![name.to_string()],
        }
    }

    pub fn len(&self) -> usize {
        self.names.len()
    }

    pub fn is_empty(&self) -> bool {
        self.names.is_empty()
    }

    pub fn name(&self, i: usize) -> &str {
        &self.names[i]
    }

    pub fn names(&self) -> &[String] {
        &self.names
    }

    pub fn index(&self, name: &str) -> Option<usize> {
        self.names.iter().position(|n| n == name)
    }

    /// Union preserving the left order, then right-only names in right order.
    pub fn union(&self, other: &VarSet) -> VarSet {
        let mut names = self.names.clone();
        for n in &other.names {
            if !names.contains(n) {
                names.push(n.clone());
            }
        }
        VarSet { names }
    }

    fn describe(&self) -> String {
        self.names.join(",")
    }
}

/// Exponent vector; always the length of the owning polynomial's variable
/// list. Ordered by total degree, then lexicographically.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Monomial(pub Vec<u16>);

impl Monomial {
    pub fn constant(nvars: usize) -> Self {
        Monomial(vec![0; nvars])
    }

    pub fn var(nvars: usize, i: usize) -> Self {
        let mut e = vec![0; nvars];
        e[i] = 1;
        Monomial(e)
    }

    pub fn degree(&self) -> usize {
        self.0.iter().map(|&e| e as usize).sum()
    }

    pub fn mul(&self, other: &Monomial) -> Monomial {
        Monomial(
            self.0
                .iter()
                .zip(other.0.iter())
                .map(|(a, b)| a + b)
                .collect(),
        )
    }
}

impl Ord for Monomial {
    fn cmp(&self, other: &Self) -> Ordering {
        self.degree()
            .cmp(&other.degree())
            .then_with(|| self.0.cmp(&other.0))
    }
}

impl PartialOrd for Monomial {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct Polynomial<C: CoeffField> {
    vars: VarSet,
    terms: BTreeMap<Monomial, C>,
}

impl<C: CoeffField> Polynomial<C> {
    pub fn zero(vars: &VarSet) -> Self {
        Polynomial {
            vars: vars.clone(),
            terms: BTreeMap::new(),
        }
    }

    pub fn constant(vars: &VarSet, c: C) -> Self {
        let mut p = Self::zero(vars);
        if !c.is_zero() {
            p.terms.insert(Monomial::constant(vars.len()), c);
        }
        p
    }

    pub fn one(vars: &VarSet) -> Self {
        Self::constant(vars, C::one())
    }

    pub fn var(vars: &VarSet, i: usize) -> Self {
        assert!(i < vars.len(), "variable index out of range");
        let mut p = Self::zero(vars);
        p.terms.insert(Monomial::var(vars.len(), i), C::one());
        p
    }

    pub fn from_terms<I>(vars: &VarSet, terms: I) -> Result<Self>
    where
        I: IntoIterator<Item = (Monomial, C)>,
    {
        let mut p = Self::zero(vars);
        for (m, c) in terms {
            if m.0.len() != vars.len() {
                return Err(Error::invalid(
                    "exponent vector length does not match variable count",
                ));
            }
            p.add_term(m, c);
        }
        Ok(p)
    }

    fn add_term(&mut self, m: Monomial, c: C) {
        if c.is_zero() {
            return;
        }
        match self.terms.entry(m) {
            std::collections::btree_map::Entry::Vacant(e) => {
                e.insert(c);
            }
            std::collections::btree_map::Entry::Occupied(mut e) => {
                let s = e.get().add(&c);
                if s.is_zero() {
                    e.remove();
                } else {
                    *e.get_mut() = s;
                }
            }
        }
    }

    pub fn vars(&self) -> &VarSet {
        &self.vars
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Monomial, &C)> {
        self.terms.iter()
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    pub fn coeff(&self, m: &Monomial) -> C {
        self.terms.get(m).cloned().unwrap_or_else(C::zero)
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_constant(&self) -> bool {
        self.terms.keys().all(|m| m.degree() == 0)
    }

    /// The constant coefficient.
    pub fn constant_coeff(&self) -> C {
        self.coeff(&Monomial::constant(self.vars.len()))
    }

    /// Total degree; `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.terms.keys().map(|m| m.degree()).max()
    }

    /// `Some(d)` when every stored term has total degree exactly `d`.
    pub fn homogeneous_degree(&self) -> Option<usize> {
        let mut it = self.terms.keys();
        let d = it.next()?.degree();
        if it.all(|m| m.degree() == d) {
            Some(d)
        } else {
            None
        }
    }

    /// Re-expresses the polynomial over a variable set containing all of its
    /// variables (matched by name).
    pub fn embed(&self, vars: &VarSet) -> Result<Self> {
        if self.vars == *vars {
            return Ok(self.clone());
        }
        let map: Vec<usize> = self
            .vars
            .names()
            .iter()
            .map(|n| {
                vars.index(n).ok_or_else(|| Error::VarMismatch {
                    left: self.vars.describe(),
                    right: vars.describe(),
                })
            })
            .collect::<Result<_>>()?;
        let mut p = Self::zero(vars);
        for (m, c) in &self.terms {
            let mut e = vec![0u16; vars.len()];
            for (i, &ex) in m.0.iter().enumerate() {
                e[map[i]] = ex;
            }
            p.add_term(Monomial(e), c.clone());
        }
        Ok(p)
    }

    fn aligned(&self, other: &Self) -> (Self, Self) {
        if self.vars == other.vars {
            (self.clone(), other.clone())
        } else {
            let u = self.vars.union(&other.vars);
            // Both operands embed into the union by construction.
            (self.embed(&u).unwrap(), other.embed(&u).unwrap())
        }
    }

    pub fn neg(&self) -> Self {
        let mut p = Self::zero(&self.vars);
        for (m, c) in &self.terms {
            p.terms.insert(m.clone(), c.neg());
        }
        p
    }

    pub fn add(&self, other: &Self) -> Self {
        let (mut a, b) = self.aligned(other);
        for (m, c) in b.terms {
            a.add_term(m, c);
        }
        a
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.neg())
    }

    pub fn mul(&self, other: &Self) -> Self {
        let (a, b) = self.aligned(other);
        let mut p = Self::zero(&a.vars);
        for (ma, ca) in &a.terms {
            for (mb, cb) in &b.terms {
                p.add_term(ma.mul(mb), ca.mul(cb));
            }
        }
        p
    }

    pub fn scale(&self, c: &C) -> Self {
        let mut p = Self::zero(&self.vars);
        if c.is_zero() {
            return p;
        }
        for (m, k) in &self.terms {
            p.add_term(m.clone(), k.mul(c));
        }
        p
    }

    pub fn pow(&self, n: usize) -> Self {
        let mut acc = Self::one(&self.vars);
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

    pub fn partial_derivative(&self, var: usize) -> Self {
        assert!(var < self.vars.len(), "variable index out of range");
        let mut p = Self::zero(&self.vars);
        for (m, c) in &self.terms {
            let e = m.0[var];
            if e == 0 {
                continue;
            }
            let mut em = m.clone();
            em.0[var] = e - 1;
            p.add_term(em, c.scale_i64(e as i64));
        }
        p
    }

    pub fn eval(&self, point: &[C]) -> Result<C> {
        if point.len() != self.vars.len() {
            return Err(Error::invalid("evaluation point has wrong arity"));
        }
        let mut acc = C::zero();
        for (m, c) in &self.terms {
            let mut t = c.clone();
            for (i, &e) in m.0.iter().enumerate() {
                for _ in 0..e {
                    t = t.mul(&point[i]);
                }
            }
            acc = acc.add(&t);
        }
        Ok(acc)
    }

    /// Substitutes `images[i]` for variable `i`. All images must share one
    /// variable set, which becomes the result's variable set.
    pub fn substitute_polys(&self, images: &[Polynomial<C>]) -> Result<Polynomial<C>> {
        if images.len() != self.vars.len() {
            return Err(Error::invalid("substitution image count mismatch"));
        }
        let tvars = match images.first() {
            Some(p) => p.vars.clone(),
            None => return Ok(Polynomial::constant(&VarSet::xs(0), self.constant_coeff())),
        };
        for p in images {
            if p.vars != tvars {
                return Err(Error::VarMismatch {
                    left: tvars.describe(),
                    right: p.vars.describe(),
                });
            }
        }
        // Precompute image powers up to the largest exponent per variable.
        let mut max_e = vec![0u16; self.vars.len()];
        for m in self.terms.keys() {
            for (i, &e) in m.0.iter().enumerate() {
                max_e[i] = max_e[i].max(e);
            }
        }
        let mut powers: Vec<Vec<Polynomial<C>>> = Vec::with_capacity(images.len());
        for (i, img) in images.iter().enumerate() {
            let mut pw = vec![Polynomial::one(&tvars)];
            for e in 1..=max_e[i] as usize {
                let next = pw[e - 1].mul(img);
                pw.push(next);
            }
            powers.push(pw);
        }
        let mut acc = Polynomial::zero(&tvars);
        for (m, c) in &self.terms {
            let mut t = Polynomial::constant(&tvars, c.clone());
            for (i, &e) in m.0.iter().enumerate() {
                if e > 0 {
                    t = t.mul(&powers[i][e as usize]);
                }
            }
            acc = acc.add(&t);
        }
        Ok(acc)
    }

    pub fn map_coeffs<D: CoeffField, F: Fn(&C) -> D>(&self, f: F) -> Polynomial<D> {
        let mut p = Polynomial::zero(&self.vars);
        for (m, c) in &self.terms {
            p.add_term(m.clone(), f(c));
        }
        p
    }

    /// Dense univariate view. Succeeds when at most one variable occurs with
    /// positive exponent; constants report no active variable.
    pub fn to_univariate(&self) -> Result<(Option<usize>, UniPoly<C>)> {
        let mut active: Option<usize> = None;
        for m in self.terms.keys() {
            for (i, &e) in m.0.iter().enumerate() {
                if e > 0 {
                    match active {
                        None => active = Some(i),
                        Some(j) if j == i => {}
                        Some(_) => return Err(Error::NotUnivariate),
                    }
                }
            }
        }
        let deg = self.degree().unwrap_or(0);
        let mut coeffs = vec![C::zero(); deg + 1];
        for (m, c) in &self.terms {
            coeffs[m.degree()] = c.clone();
        }
        Ok((active, UniPoly::new(coeffs)))
    }

    /// The univariate polynomial `u` in variable `var` of `vars`.
    pub fn from_univariate(vars: &VarSet, var: usize, u: &UniPoly<C>) -> Self {
        assert!(var < vars.len(), "variable index out of range");
        let mut p = Self::zero(vars);
        for (e, c) in u.coeffs().iter().enumerate() {
            if !c.is_zero() {
                let mut m = Monomial::constant(vars.len());
                m.0[var] = e as u16;
                p.add_term(m, c.clone());
            }
        }
        p
    }
}

impl Polynomial<Rational> {
    /// Lifts rational coefficients into balls at the given precision.
    pub fn to_ball(&self, prec: usize) -> Polynomial<crate::ball::ComplexBall> {
        self.map_coeffs(|c| crate::ball::ComplexBall::from_rational(c, prec))
    }
}

impl<C: CoeffField> std::fmt::Display for Polynomial<C> {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "{}", crate::textio::format_poly(self))
    }
}
