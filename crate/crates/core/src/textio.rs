//! Text grammar for polynomials and jet differentials.
//!
//! Polynomials: terms joined by `+`/`-`; coefficients as integers or `a/b`
//! rationals; variables like `x0`, `y`, `eta`, `xi`, `zeta`, `z1`; powers
//! with `^`; products by `*` or juxtaposition. The printer and parser
//! round-trip exactly on the rational track.
//!
//! Jet differentials extend the grammar with jet variables `d z1`,
//! `d2 z1`, ..., e.g. `z1*(d z1)*(d2 z1) + (d z2)^3`.

use crate::coeff::CoeffField;
use crate::error::Error;
use crate::jet::JetDifferential;
use crate::poly::{Polynomial, VarSet};
use crate::rational::Rational;
use crate::Result;
use num_bigint::BigInt;

#[derive(Debug, Clone, PartialEq)]
enum Tok {
    Int(String),
    Ident(String),
    Plus,
    Minus,
    Star,
    Caret,
    Slash,
    LParen,
    RParen,
}

fn lex(s: &str) -> Result<Vec<(Tok, usize)>> {
    let bytes = s.as_bytes();
    let mut toks = Vec::new();
    let mut i = 0;
    while i < bytes.len() {
        let b = bytes[i];
        match b {
            b' ' | b'\t' | b'\n' | b'\r' => i += 1,
            b'+' => {
                toks.push((Tok::Plus, i));
                i += 1;
            }
            b'-' => {
                toks.push((Tok::Minus, i));
                i += 1;
            }
            b'*' => {
                toks.push((Tok::Star, i));
                i += 1;
            }
            b'^' => {
                toks.push((Tok::Caret, i));
                i += 1;
            }
            b'/' => {
                toks.push((Tok::Slash, i));
                i += 1;
            }
            b'(' => {
                toks.push((Tok::LParen, i));
                i += 1;
            }
            b')' => {
                toks.push((Tok::RParen, i));
                i += 1;
            }
            b'0'..=b'9' => {
                let start = i;
                while i < bytes.len() && bytes[i].is_ascii_digit() {
                    i += 1;
                }
                toks.push((Tok::Int(s[start..i].to_string()), start));
            }
            b'a'..=b'z' | b'A'..=b'Z' | b'_' => {
                let start = i;
                while i < bytes.len()
                    && (bytes[i].is_ascii_alphanumeric() || bytes[i] == b'_')
                {
                    i += 1;
                }
                toks.push((Tok::Ident(s[start..i].to_string()), start));
            }
            _ => {
                return Err(Error::Parse {
                    at: i,
                    msg: format!("unexpected character {:?}", b as char),
                })
            }
        }
    }
    Ok(toks)
}

/// Sort key giving the canonical variable order
/// `x0 < x1 < ... < y < eta < xi < zeta < z1 < z2 < ...` with anything else
/// after, alphabetically.
fn var_key(name: &str) -> (u8, u64, String) {
    if let Some(rest) = name.strip_prefix('x') {
        if let Ok(idx) = rest.parse::<u64>() {
            return (0, idx, String::new());
        }
    }
    if name == "y" {
        return (1, 0, String::new());
    }
    if name == "eta" {
        return (2, 0, String::new());
    }
    if name == "xi" {
        return (3, 0, String::new());
    }
    if name == "zeta" {
        return (4, 0, String::new());
    }
    if let Some(rest) = name.strip_prefix('z') {
        if let Ok(idx) = rest.parse::<u64>() {
            return (5, idx, String::new());
        }
    }
    (6, 0, name.to_string())
}

struct Parser<'a> {
    toks: &'a [(Tok, usize)],
    pos: usize,
    vars: &'a VarSet,
    n_jet: Option<usize>,
}

type JetFactor = (usize, usize); // (variable index, jet order)

/// Factors are polynomials times a multiset of jet variables; plain
/// polynomial parsing requires the jet part to stay empty.
struct Piece {
    poly: Polynomial<Rational>,
    jets: Vec<(JetFactor, u32)>,
}

impl<'a> Parser<'a> {
    fn peek(&self) -> Option<&Tok> {
        self.toks.get(self.pos).map(|(t, _)| t)
    }

    fn here(&self) -> usize {
        self.toks
            .get(self.pos)
            .or_else(|| self.toks.last())
            .map_or(0, |(_, p)| *p)
    }

    fn bump(&mut self) -> Option<Tok> {
        let t = self.toks.get(self.pos).map(|(t, _)| t.clone());
        if t.is_some() {
            self.pos += 1;
        }
        t
    }

    fn err(&self, msg: impl Into<String>) -> Error {
        Error::Parse {
            at: self.here(),
            msg: msg.into(),
        }
    }

    fn expect_int(&mut self) -> Result<BigInt> {
        match self.bump() {
            Some(Tok::Int(d)) => d
                .parse()
                .map_err(|e| self.err(format!("bad integer: {e}"))),
            _ => Err(self.err("expected an integer")),
        }
    }

    fn parse_expr(&mut self) -> Result<Piece> {
        let mut negate = false;
        match self.peek() {
            Some(Tok::Minus) => {
                self.bump();
                negate = true;
            }
            Some(Tok::Plus) => {
                self.bump();
            }
            _ => {}
        }
        let mut acc = self.parse_term()?;
        if negate {
            acc = self.piece_neg(acc);
        }
        loop {
            match self.peek() {
                Some(Tok::Plus) => {
                    self.bump();
                    let t = self.parse_term()?;
                    acc = self.piece_add(acc, t)?;
                }
                Some(Tok::Minus) => {
                    self.bump();
                    let t = self.parse_term()?;
                    let t = self.piece_neg(t);
                    acc = self.piece_add(acc, t)?;
                }
                _ => break,
            }
        }
        Ok(acc)
    }

    fn parse_term(&mut self) -> Result<Piece> {
        let mut acc = self.parse_factor()?;
        loop {
            match self.peek() {
                Some(Tok::Star) => {
                    self.bump();
                    let f = self.parse_factor()?;
                    acc = self.piece_mul(acc, f);
                }
                // Juxtaposition: a factor can start right away.
                Some(Tok::Int(_)) | Some(Tok::Ident(_)) | Some(Tok::LParen) => {
                    let f = self.parse_factor()?;
                    acc = self.piece_mul(acc, f);
                }
                _ => break,
            }
        }
        Ok(acc)
    }

    fn parse_exponent(&mut self) -> Result<u32> {
        if self.peek() == Some(&Tok::Caret) {
            self.bump();
            let e = self.expect_int()?;
            u32::try_from(e).map_err(|_| self.err("exponent out of range"))
        } else {
            Ok(1)
        }
    }

    fn parse_factor(&mut self) -> Result<Piece> {
        match self.peek().cloned() {
            Some(Tok::Int(_)) => {
                let num = self.expect_int()?;
                let mut q = Rational::from_integer(num);
                if self.peek() == Some(&Tok::Slash) {
                    self.bump();
                    let den = self.expect_int()?;
                    if den == BigInt::from(0) {
                        return Err(self.err("zero denominator"));
                    }
                    q = Rational::new(q.numer().clone(), den);
                }
                let e = self.parse_exponent()?;
                let mut v = Rational::from_integer(1.into());
                for _ in 0..e {
                    v *= &q;
                }
                Ok(self.const_piece(v))
            }
            Some(Tok::Ident(name)) => {
                self.bump();
                // Jet variable: `d z1` or `d2 z1` (only in jet mode).
                if self.n_jet.is_some() {
                    if let Some(order) = jet_prefix_order(&name) {
                        if let Some(Tok::Ident(vn)) = self.peek().cloned() {
                            self.bump();
                            let j = self.jet_var_index(&vn)?;
                            let e = self.parse_exponent()?;
                            return Ok(self.jet_piece(j, order, e));
                        }
                        return Err(self.err(format!(
                            "jet operator {name:?} must be followed by a coordinate"
                        )));
                    }
                }
                let Some(i) = self.vars.index(&name) else {
                    return Err(self.err(format!("unknown variable {name:?}")));
                };
                let e = self.parse_exponent()?;
                let p = Polynomial::var(self.vars, i).pow(e as usize);
                Ok(Piece {
                    poly: p,
                    jets: vec![],
                })
            }
            Some(Tok::LParen) => {
                self.bump();
                let inner = self.parse_expr()?;
                match self.bump() {
                    Some(Tok::RParen) => {}
                    _ => return Err(self.err("expected ')'")),
                }
                let e = self.parse_exponent()?;
                Ok(self.piece_pow(inner, e))
            }
            _ => Err(self.err("expected a number, variable, or '('")),
        }
    }

    fn jet_var_index(&self, name: &str) -> Result<usize> {
        let n = self.n_jet.expect("jet mode");
        if let Some(rest) = name.strip_prefix('z') {
            if let Ok(j) = rest.parse::<usize>() {
                if (1..=n).contains(&j) {
                    return Ok(j - 1);
                }
            }
        }
        Err(self.err(format!(
            "jet coordinate must be z1..z{n}, got {name:?}"
        )))
    }

    fn const_piece(&self, q: Rational) -> Piece {
        Piece {
            poly: Polynomial::constant(self.vars, q),
            jets: vec![],
        }
    }

    fn jet_piece(&self, var: usize, order: usize, e: u32) -> Piece {
        Piece {
            poly: Polynomial::one(self.vars),
            jets: vec![((var, order), e)],
        }
    }

    fn piece_neg(&self, p: Piece) -> Piece {
        Piece {
            poly: p.poly.neg(),
            jets: p.jets,
        }
    }

    fn piece_mul(&self, a: Piece, b: Piece) -> Piece {
        let mut jets = a.jets;
        for (k, e) in b.jets {
            match jets.iter_mut().find(|(j, _)| *j == k) {
                Some((_, ex)) => *ex += e,
                None => jets.push((k, e)),
            }
        }
        Piece {
            poly: a.poly.mul(&b.poly),
            jets,
        }
    }

    fn piece_pow(&self, p: Piece, e: u32) -> Piece {
        let jets = p
            .jets
            .iter()
            .map(|&(k, ex)| (k, ex * e))
            .collect();
        Piece {
            poly: p.poly.pow(e as usize),
            jets,
        }
    }

    fn piece_add(&self, a: Piece, b: Piece) -> Result<Piece> {
        if !a.jets.is_empty() || !b.jets.is_empty() {
            return Err(self.err(
                "jet factors cannot be added inside a grouped factor; \
                 split the sum at top level",
            ));
        }
        Ok(Piece {
            poly: a.poly.add(&b.poly),
            jets: vec![],
        })
    }
}

fn jet_prefix_order(name: &str) -> Option<usize> {
    let rest = name.strip_prefix('d')?;
    if rest.is_empty() {
        return Some(1);
    }
    rest.parse::<usize>().ok().filter(|&k| k >= 1)
}

/// Parses a polynomial over the given variables.
pub fn parse_poly(s: &str, vars: &VarSet) -> Result<Polynomial<Rational>> {
    let toks = lex(s)?;
    if toks.is_empty() {
        return Err(Error::Parse {
            at: 0,
            msg: "empty input".into(),
        });
    }
    let mut p = Parser {
        toks: &toks,
        pos: 0,
        vars,
        n_jet: None,
    };
    let piece = p.parse_expr()?;
    if p.pos != toks.len() {
        return Err(p.err("trailing input"));
    }
    Ok(piece.poly)
}

/// Parses a polynomial, collecting its variables in canonical order.
pub fn parse_poly_auto(s: &str) -> Result<Polynomial<Rational>> {
    let toks = lex(s)?;
    let mut names: Vec<String> = Vec::new();
    for (t, _) in &toks {
        if let Tok::Ident(name) = t {
            if !names.contains(name) {
                names.push(name.clone());
            }
        }
    }
    names.sort_by_key(|n| var_key(n));
    let vars = VarSet::new(names)?;
    parse_poly(s, &vars)
}

/// Parses a jet differential in coordinates `z1..zn`.
pub fn parse_jet(s: &str, n: usize) -> Result<JetDifferential<Rational>> {
    let toks = lex(s)?;
    if toks.is_empty() {
        return Err(Error::Parse {
            at: 0,
            msg: "empty input".into(),
        });
    }
    let vars = crate::jet::coordinate_vars(n);
    // Sums of jet pieces must be combined at top level, so re-run the
    // expression loop here over full jet differentials.
    let mut p = Parser {
        toks: &toks,
        pos: 0,
        vars: &vars,
        n_jet: Some(n),
    };
    let mut acc = JetDifferential::zero(n);
    let mut negate = match p.peek() {
        Some(Tok::Minus) => {
            p.bump();
            true
        }
        Some(Tok::Plus) => {
            p.bump();
            false
        }
        _ => false,
    };
    loop {
        let piece = p.parse_term()?;
        let mut jd = JetDifferential::from_poly(n, &piece.poly)?;
        for &((var, order), e) in &piece.jets {
            for _ in 0..e {
                jd = jd.mul(&JetDifferential::jet_var(n, var, order));
            }
        }
        if negate {
            jd = jd.neg();
        }
        acc = acc.add(&jd);
        match p.peek() {
            Some(Tok::Plus) => {
                p.bump();
                negate = false;
            }
            Some(Tok::Minus) => {
                p.bump();
                negate = true;
            }
            None => break,
            _ => return Err(p.err("expected '+', '-', or end of input")),
        }
    }
    Ok(acc)
}

fn format_monomial_part(vars: &VarSet, exps: &[u16]) -> Option<String> {
    let mut parts: Vec<String> = Vec::new();
    for (i, &e) in exps.iter().enumerate() {
        match e {
            0 => {}
            1 => parts.push(vars.name(i).to_string()),
            _ => parts.push(format!("{}^{}", vars.name(i), e)),
        }
    }
    if parts.is_empty() {
        None
    } else {
        Some(parts.join("*"))
    }
}

/// Canonical text: terms in descending graded-lex order, exact coefficients.
pub fn format_poly<C: CoeffField>(p: &Polynomial<C>) -> String {
    if p.is_zero() {
        return "0".to_string();
    }
    let mut out = String::new();
    let terms: Vec<_> = p.terms().collect();
    for (idx, (m, c)) in terms.iter().rev().enumerate() {
        let mono = format_monomial_part(p.vars(), &m.0);
        match c.as_signed_abs() {
            Some((neg, abs)) => {
                if idx == 0 {
                    if neg {
                        out.push('-');
                    }
                } else {
                    out.push_str(if neg { " - " } else { " + " });
                }
                let abs_is_one = abs == C::one();
                match (&mono, abs_is_one) {
                    (Some(ms), true) => out.push_str(ms),
                    (Some(ms), false) => {
                        out.push_str(&abs.render());
                        out.push('*');
                        out.push_str(ms);
                    }
                    (None, _) => out.push_str(&abs.render()),
                }
            }
            None => {
                if idx > 0 {
                    out.push_str(" + ");
                }
                match &mono {
                    Some(ms) => {
                        out.push_str(&c.render());
                        out.push('*');
                        out.push_str(ms);
                    }
                    None => out.push_str(&c.render()),
                }
            }
        }
    }
    out
}

/// Canonical text for a jet differential.
pub fn format_jet<C: CoeffField>(jd: &JetDifferential<C>) -> String {
    if jd.is_zero() {
        return "0".to_string();
    }
    let mut out = String::new();
    for (idx, (mono, coeff)) in jd.terms().enumerate() {
        let mut coeff_str = format_poly(coeff);
        // Single-term negative coefficients surface their sign so the
        // printed form stays inside the grammar (no "+ -2*..." sequences).
        let mut negative = false;
        if coeff.num_terms() == 1 {
            if let Some(stripped) = coeff_str.strip_prefix('-') {
                negative = true;
                coeff_str = stripped.to_string();
            }
        }
        if idx == 0 {
            if negative {
                out.push('-');
            }
        } else {
            out.push_str(if negative { " - " } else { " + " });
        }
        let mut factors: Vec<String> = Vec::new();
        if coeff_str != "1" {
            if coeff.num_terms() > 1 {
                factors.push(format!("({coeff_str})"));
            } else {
                factors.push(coeff_str);
            }
        }
        for &((var, order), e) in mono.factors() {
            let base = if order == 1 {
                format!("(d z{})", var + 1)
            } else {
                format!("(d{} z{})", order, var + 1)
            };
            if e == 1 {
                factors.push(base);
            } else {
                factors.push(format!("{base}^{e}"));
            }
        }
        if factors.is_empty() {
            factors.push("1".to_string());
        }
        out.push_str(&factors.join("*"));
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::{rat, rat_int};

    #[test]
    fn parses_the_documented_example() {
        let p = parse_poly_auto("x0^3 + 2/3*x1*x2^2").unwrap();
        assert_eq!(p.vars().names(), &["x0", "x1", "x2"]);
        assert_eq!(p.num_terms(), 2);
        assert_eq!(p.degree(), Some(3));
    }

    #[test]
    fn juxtaposition_multiplies() {
        let vars = VarSet::xs(2);
        let a = parse_poly("2x0 x1", &vars).unwrap();
        let b = parse_poly("2*x0*x1", &vars).unwrap();
        assert_eq!(a, b);
    }

    #[test]
    fn roundtrip_is_exact() {
        let vars = VarSet::xs(3);
        let cases = [
            "x0^3 + 2/3*x1*x2^2",
            "-x0 + x1 - 5",
            "7/2",
            "0",
            "x0*x1*x2 - 1/3",
        ];
        for s in cases {
            let p = parse_poly(s, &vars).unwrap();
            let printed = format_poly(&p);
            let again = parse_poly(&printed, &vars).unwrap();
            assert_eq!(p, again, "roundtrip failed for {s:?} -> {printed:?}");
        }
    }

    #[test]
    fn printer_orders_terms_leading_first() {
        let vars = VarSet::xs(2);
        let p = parse_poly("x1 + x0^2 - 3", &vars).unwrap();
        assert_eq!(format_poly(&p), "x0^2 + x1 - 3");
    }

    #[test]
    fn rational_coefficients_roundtrip() {
        let vars = VarSet::single("eta");
        let p = parse_poly("-2/3*eta^2 + 1/7", &vars).unwrap();
        assert_eq!(p.coeff(&crate::poly::Monomial(vec![2])), rat(-2, 3));
        let printed = format_poly(&p);
        assert_eq!(parse_poly(&printed, &vars).unwrap(), p);
    }

    #[test]
    fn rejects_unknown_variables_and_garbage() {
        let vars = VarSet::xs(1);
        assert!(parse_poly("x0 + w", &vars).is_err());
        assert!(parse_poly("x0 +", &vars).is_err());
        assert!(parse_poly("(x0", &vars).is_err());
        assert!(parse_poly("1/0", &vars).is_err());
    }

    #[test]
    fn canonical_variable_order() {
        let p = parse_poly_auto("z2 + xi + x1 + eta + y + x0 + zeta").unwrap();
        assert_eq!(
            p.vars().names(),
            &["x0", "x1", "y", "eta", "xi", "zeta", "z2"]
        );
    }

    #[test]
    fn jet_grammar_roundtrip() {
        let jd = parse_jet("z1*(d z1)*(d2 z1) + (d z2)^3", 2).unwrap();
        let printed = format_jet(&jd);
        let again = parse_jet(&printed, 2).unwrap();
        assert_eq!(jd, again);
        assert_eq!(jd.weight_homogeneous(), Some(3));
    }

    #[test]
    fn constant_one_jet_prints_as_one() {
        let jd = parse_jet("1", 2).unwrap();
        assert_eq!(format_jet(&jd), "1");
        assert_eq!(rat_int(1), jd.terms().next().unwrap().1.constant_coeff());
    }
}
