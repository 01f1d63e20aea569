//! Power-sum hypersurface instances, the two-chart Wronskian transfer, and
//! recovery of proportionality partitions for vanishing sums of series.
//!
//! The central identity: for a germ with homogeneous lift (x_0, ..., x_n) and
//! homogeneous g_j of degree δ_j, the Wronskian of
//! (g̃_0, z_1^{p-δ_1}g̃_1, ..., z_{n-1}^{p-δ_{n-1}}g̃_{n-1}) in the chart
//! z_j = x_j/x_0 equals w_0^{-np} times the Wronskian of
//! (w_0^{p-δ_0}ĝ_0, ..., w_{n-1}^{p-δ_{n-1}}ĝ_{n-1}) in the chart
//! w_j = x_j/x_n. Both sides are Laurent windows along the germ, so the
//! check is coefficient-wise and exact through the knowledge window.

use crate::error::Error;
use crate::linalg::det_by_permutations;
use crate::poly::{Polynomial, VarSet};
use crate::rational::Rational;
use crate::series::{LaurentWindow, TruncatedSeries};
use crate::univar::UniPoly;
use crate::CoeffField;
use crate::Result;

/// Exponent bound (n+1)(n-1) + Σδ_j; power-sum arguments compare p strictly
/// against it.
pub fn borel_threshold(n: usize, deltas: &[usize]) -> Result<usize> {
    if n < 2 {
        return Err(Error::invalid("threshold needs ambient dimension >= 2"));
    }
    if deltas.len() != n + 1 {
        return Err(Error::invalid("need one degree bound per coordinate"));
    }
    Ok((n + 1) * (n - 1) + deltas.iter().sum::<usize>())
}

/// Hypersurface of the form Σ_j x_j^{p-δ_j} g_j(x_0..x_n) = 0 with g_j
/// homogeneous of degree δ_j.
#[derive(Clone, Debug)]
pub struct PowerSumInstance {
    n: usize,
    p: usize,
    deltas: Vec<usize>,
    gs: Vec<Polynomial<Rational>>,
}

impl PowerSumInstance {
    pub fn new(
        n: usize,
        p: usize,
        deltas: Vec<usize>,
        gs: Vec<Polynomial<Rational>>,
    ) -> Result<Self> {
        if n < 2 {
            return Err(Error::invalid("ambient dimension must be >= 2"));
        }
        if deltas.len() != n + 1 || gs.len() != n + 1 {
            return Err(Error::invalid("need n+1 degree bounds and n+1 factors"));
        }
        let vars = Self::vars_for(n);
        let mut embedded = Vec::with_capacity(gs.len());
        for (j, g) in gs.iter().enumerate() {
            let g = g.embed(&vars)?;
            if g.homogeneous_degree() != Some(deltas[j]) {
                return Err(Error::invalid(format!(
                    "factor {j} is not homogeneous of degree {}",
                    deltas[j]
                )));
            }
            if p <= deltas[j] {
                return Err(Error::invalid(format!(
                    "power {p} does not exceed factor degree {}",
                    deltas[j]
                )));
            }
            embedded.push(g);
        }
        Ok(PowerSumInstance {
            n,
            p,
            deltas,
            gs: embedded,
        })
    }

    /// Instance with all g_j constant (δ_j = 0).
    pub fn with_constant_factors(n: usize, p: usize, consts: &[Rational]) -> Result<Self> {
        let vars = Self::vars_for(n);
        let gs = consts
            .iter()
            .map(|c| Polynomial::constant(&vars, c.clone()))
            .collect();
        Self::new(n, p, vec![0; n + 1], gs)
    }

    pub fn vars_for(n: usize) -> VarSet {
        VarSet::new((0..=n).map(|j| format!("x{j}")).collect::<Vec<_>>())
            .expect("generated names are distinct")
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn p(&self) -> usize {
        self.p
    }

    pub fn deltas(&self) -> &[usize] {
        &self.deltas
    }

    pub fn factor(&self, j: usize) -> &Polynomial<Rational> {
        &self.gs[j]
    }

    pub fn threshold(&self) -> usize {
        borel_threshold(self.n, &self.deltas).expect("validated in new")
    }

    pub fn exceeds_threshold(&self) -> bool {
        self.p > self.threshold()
    }

    /// Σ_j x_j^{p-δ_j} g_j, homogeneous of degree p.
    pub fn defining_polynomial(&self) -> Polynomial<Rational> {
        let vars = Self::vars_for(self.n);
        let mut acc = Polynomial::zero(&vars);
        for j in 0..=self.n {
            let xj = Polynomial::var(&vars, j);
            acc = acc.add(&xj.pow(self.p - self.deltas[j]).mul(&self.gs[j]));
        }
        acc
    }
}

/// Wronskian of Laurent windows along a germ: det[(d/dζ)^i u_j].
pub fn wronskian_windows<C: CoeffField>(
    entries: &[LaurentWindow<C>],
) -> Result<LaurentWindow<C>> {
    let s = entries.len();
    if s == 0 {
        return Err(Error::invalid("empty Wronskian entry list"));
    }
    let mut rows: Vec<Vec<LaurentWindow<C>>> = vec![entries.to_vec()];
    for i in 1..s {
        let row = rows[i - 1].iter().map(|u| u.derivative()).collect();
        rows.push(row);
    }
    // Additive identity with an unbounded window, so it never truncates.
    let zero = LaurentWindow::new(i64::MAX / 4, vec![]);
    Ok(det_by_permutations(
        s,
        |i, j| rows[i][j].clone(),
        zero,
        |a, b| a.add(b),
        |a, b| a.mul(b),
        |a| a.neg(),
    ))
}

/// Evaluates a polynomial at Laurent-window arguments. Constants are known
/// on any window, so the constant term is materialized across the span the
/// other terms reach.
pub fn eval_poly_at_windows<C: CoeffField>(
    p: &Polynomial<C>,
    args: &[LaurentWindow<C>],
) -> Result<LaurentWindow<C>> {
    if p.vars().len() != args.len() {
        return Err(Error::invalid("window substitution arity mismatch"));
    }
    let mut term_windows: Vec<LaurentWindow<C>> = Vec::new();
    let mut const_coeff: Option<C> = None;
    for (m, c) in p.terms() {
        let mut w: Option<LaurentWindow<C>> = None;
        for (j, &e) in m.0.iter().enumerate() {
            if e > 0 {
                let f = args[j].powi(e as i64)?;
                w = Some(match w {
                    None => f,
                    Some(acc) => acc.mul(&f),
                });
            }
        }
        match w {
            Some(acc) => term_windows.push(acc.scale(c)),
            None => const_coeff = Some(c.clone()),
        }
    }
    // Span for exact constants: cover every other term's window and 0.
    let lo = term_windows
        .iter()
        .map(|w| w.start())
        .chain(args.iter().map(|w| w.start()))
        .min()
        .unwrap_or(0)
        .min(0);
    let hi = term_windows
        .iter()
        .map(|w| w.end())
        .chain(args.iter().map(|w| w.end()))
        .max()
        .unwrap_or(1)
        .max(1);
    let mut acc = {
        let mut coeffs = vec![C::zero(); (hi - lo) as usize];
        if let Some(c) = const_coeff {
            coeffs[(-lo) as usize] = c;
        }
        LaurentWindow::new(lo, coeffs)
    };
    for w in term_windows {
        acc = acc.add(&w);
    }
    Ok(acc)
}

/// Outcome of the two-chart Wronskian comparison along one germ.
#[derive(Clone, Debug, serde::Serialize)]
pub struct ChartTransferReport {
    pub n: usize,
    pub p: usize,
    /// p - Σδ_j - (n+1)(n-1); positive exactly when p clears the threshold.
    pub prefactor_exponent: i64,
    /// Vanishing order of w_0 = x_0/x_n along the germ.
    pub w0_vanishing_order: i64,
    /// Number of coefficients on which the two sides were compared.
    pub identity_overlap: usize,
    /// w_0^{np} · W_z and W_w agree on every compared coefficient.
    pub identity_holds: bool,
    pub wz_zero: bool,
    pub ww_zero: bool,
    /// Lowest nonzero exponent of W_z / Π_{j=1}^n z_j^{p-δ_j-n+1}; None when
    /// the quotient vanishes through its window.
    pub quotient_min_exponent: Option<i64>,
    /// The quotient has no nonzero coefficient at a negative exponent.
    pub quotient_holomorphic: bool,
}

/// Computes the chart Wronskian on each side of the transfer identity along
/// a germ given by its homogeneous lift, and compares them coefficient-wise.
pub fn wronskian_chart_transfer(
    inst: &PowerSumInstance,
    lift: &[TruncatedSeries<Rational>],
) -> Result<ChartTransferReport> {
    let n = inst.n();
    let p = inst.p();
    if lift.len() != n + 1 {
        return Err(Error::invalid("lift needs n+1 components"));
    }
    if !inst.exceeds_threshold() {
        return Err(Error::invalid(format!(
            "power {p} does not exceed the threshold {}",
            inst.threshold()
        )));
    }
    for (j, x) in lift.iter().enumerate() {
        if x.is_zero_through_order() {
            return Err(Error::GermComponentZero { index: j });
        }
    }
    let xs: Vec<LaurentWindow<Rational>> = lift
        .iter()
        .map(|s| LaurentWindow::from_series(s).normalized())
        .collect();
    let gs: Vec<LaurentWindow<Rational>> = (0..=n)
        .map(|j| eval_poly_at_windows(inst.factor(j), &xs))
        .collect::<Result<_>>()?;
    let r0 = xs[0].recip()?;
    let rn = xs[n].recip()?;

    // z-chart entries: g̃_0, then z_j^{p-δ_j} g̃_j = x_j^{p-δ_j} g_j / x_0^p.
    let mut u = vec![gs[0].mul(&r0.powi(inst.deltas()[0] as i64)?)];
    let r0p = r0.powi(p as i64)?;
    for j in 1..n {
        let e = (p - inst.deltas()[j]) as i64;
        u.push(xs[j].powi(e)?.mul(&gs[j]).mul(&r0p));
    }
    let wz = wronskian_windows(&u)?;

    // w-chart entries: w_j^{p-δ_j} ĝ_j = x_j^{p-δ_j} g_j / x_n^p.
    let rnp = rn.powi(p as i64)?;
    let v: Vec<LaurentWindow<Rational>> = (0..n)
        .map(|j| {
            let e = (p - inst.deltas()[j]) as i64;
            Ok(xs[j].powi(e)?.mul(&gs[j]).mul(&rnp))
        })
        .collect::<Result<_>>()?;
    let ww = wronskian_windows(&v)?;

    let w0 = xs[0].mul(&rn).normalized();
    let w0_vanishing_order = w0.lowest_nonzero().unwrap_or(w0.start());

    let lhs = wz.mul(&w0.powi((n * p) as i64)?);
    let overlap_start = lhs.start().min(ww.start());
    let overlap_end = lhs.end().min(ww.end());
    let identity_overlap = (overlap_end - overlap_start).max(0) as usize;
    let identity_holds = identity_overlap > 0 && lhs.agrees_with(&ww);

    // Divisibility along the germ: W_z / Π_{j=1}^n z_j^{p-δ_j-n+1} stays
    // free of negative exponents.
    let mut quotient = wz.clone();
    for j in 1..=n {
        let zj = xs[j].mul(&r0).normalized();
        let e = (p - inst.deltas()[j]) as i64 - (n as i64 - 1);
        quotient = quotient.mul(&zj.powi(-e)?);
    }
    let quotient_min_exponent = quotient.lowest_nonzero();
    let quotient_holomorphic = quotient_min_exponent.map_or(true, |t| t >= 0);

    let sigma: usize = inst.deltas().iter().sum();
    Ok(ChartTransferReport {
        n,
        p,
        prefactor_exponent: p as i64 - sigma as i64 - ((n + 1) * (n - 1)) as i64,
        w0_vanishing_order,
        identity_overlap,
        identity_holds,
        wz_zero: wz.is_zero_through_window(),
        ww_zero: ww.is_zero_through_window(),
        quotient_min_exponent,
        quotient_holomorphic,
    })
}

/// One block of a proportionality partition: the member series are constant
/// multiples of the representative and the block sum vanishes, all checked
/// coefficient-wise through the truncation order.
#[derive(Clone, Debug)]
pub struct BorelBlock<C: CoeffField> {
    /// Sorted member indices.
    pub indices: Vec<usize>,
    /// Smallest member index; constants are relative to it.
    pub representative: usize,
    /// (index, c) with f_index = c · f_representative, for non-representatives.
    pub constants: Vec<(usize, C)>,
    /// Singleton block holding a series that vanishes through truncation.
    pub identically_zero: bool,
}

#[derive(Clone, Debug)]
pub struct BorelPartition<C: CoeffField> {
    pub blocks: Vec<BorelBlock<C>>,
    pub verified_through_order: usize,
}

impl<C: CoeffField> BorelPartition<C> {
    pub fn q(&self) -> usize {
        self.blocks.len()
    }

    /// Re-checks every block identity against the series, coefficient-wise.
    pub fn verify(&self, f: &[TruncatedSeries<C>]) -> bool {
        let mut seen = vec![false; f.len()];
        for b in &self.blocks {
            for &i in &b.indices {
                if i >= f.len() || seen[i] {
                    return false;
                }
                seen[i] = true;
            }
            if b.identically_zero {
                if b.indices.len() != 1 || !f[b.indices[0]].is_zero_through_order() {
                    return false;
                }
                continue;
            }
            if b.indices.len() < 2 || b.indices[0] != b.representative {
                return false;
            }
            let rep = &f[b.representative];
            let mut sum = rep.clone();
            for (i, c) in &b.constants {
                if !f[*i].sub(&rep.scale(c)).is_zero_through_order() {
                    return false;
                }
                sum = sum.add(&f[*i]);
            }
            if !sum.is_zero_through_order() {
                return false;
            }
        }
        seen.into_iter().all(|s| s)
    }
}

/// Splits `class` (constants relative to a shared representative) into the
/// largest number of groups of size >= 2 each with vanishing constant sum.
/// Returns groups of positions into `class`, or None when no grouping works.
fn best_zero_sum_grouping<C: CoeffField>(class: &[C]) -> Option<Vec<Vec<usize>>> {
    fn rec<C: CoeffField>(
        remaining: &[usize],
        class: &[C],
        current: &mut Vec<Vec<usize>>,
        best: &mut Option<Vec<Vec<usize>>>,
    ) {
        let Some(&first) = remaining.first() else {
            if best.as_ref().map_or(true, |b| current.len() > b.len()) {
                *best = Some(current.clone());
            }
            return;
        };
        let rest: Vec<usize> = remaining[1..].to_vec();
        // `first` joins each subset of the rest (size >= 1 so the group has
        // size >= 2); the complement is grouped recursively.
        let k = rest.len();
        for mask in 0..(1u32 << k) {
            if mask == 0 {
                continue;
            }
            let mut group = vec![first];
            let mut sum = class[first].clone();
            let mut complement = Vec::new();
            for (pos, &idx) in rest.iter().enumerate() {
                if mask & (1 << pos) != 0 {
                    group.push(idx);
                    sum = sum.add(&class[idx]);
                } else {
                    complement.push(idx);
                }
            }
            if !sum.is_zero() {
                continue;
            }
            current.push(group);
            rec(&complement, class, current, best);
            current.pop();
        }
    }

    let all: Vec<usize> = (0..class.len()).collect();
    let mut best = None;
    rec(&all, class, &mut Vec::new(), &mut best);
    best
}

/// Recovers a proportionality partition from series summing to zero:
/// blocks of mutually proportional series whose block sums vanish, with the
/// block count maximal. Returns None when the series admit no such
/// structure through the truncation order, which is evidence (bounded by the
/// truncation), not proof.
pub fn find_borel_partition<C: CoeffField>(
    f: &[TruncatedSeries<C>],
) -> Result<Option<BorelPartition<C>>> {
    if f.is_empty() {
        return Err(Error::invalid("need at least one series"));
    }
    let order = f.iter().map(|s| s.order()).min().unwrap();
    let f: Vec<TruncatedSeries<C>> = f.iter().map(|s| s.truncate(order)).collect();
    let mut sum = f[0].clone();
    for s in &f[1..] {
        sum = sum.add(s);
    }
    if !sum.is_zero_through_order() {
        return Err(Error::invalid("series sum does not vanish through truncation"));
    }

    let mut blocks: Vec<BorelBlock<C>> = Vec::new();
    // Proportionality classes among the non-vanishing series: (representative,
    // members as (index, constant relative to the representative)).
    let mut classes: Vec<(usize, Vec<(usize, C)>)> = Vec::new();
    for (i, s) in f.iter().enumerate() {
        if s.is_zero_through_order() {
            blocks.push(BorelBlock {
                indices: vec![i],
                representative: i,
                constants: vec![],
                identically_zero: true,
            });
            continue;
        }
        let Ok(Some(v)) = s.valuation() else {
            // Leading coefficient not certified nonzero: no detection claim.
            return Ok(None);
        };
        let mut placed = false;
        for (rep, members) in classes.iter_mut() {
            let r = &f[*rep];
            let Ok(Some(rv)) = r.valuation() else {
                return Ok(None);
            };
            if rv != v {
                continue;
            }
            let c = match s.coeff(v).div(&r.coeff(rv)) {
                Ok(c) => c,
                Err(_) => return Ok(None),
            };
            if s.sub(&r.scale(&c)).is_zero_through_order() {
                members.push((i, c));
                placed = true;
                break;
            }
        }
        if !placed {
            classes.push((i, vec![(i, C::one())]));
        }
    }

    for (rep, members) in classes {
        let consts: Vec<C> = members.iter().map(|(_, c)| c.clone()).collect();
        let Some(grouping) = best_zero_sum_grouping(&consts) else {
            return Ok(None);
        };
        for group in grouping {
            let mut indices: Vec<usize> = group.iter().map(|&pos| members[pos].0).collect();
            indices.sort_unstable();
            let block_rep = indices[0];
            // Rebase constants from the class representative to the block's.
            let rep_c = members
                .iter()
                .find(|(i, _)| *i == block_rep)
                .map(|(_, c)| c.clone())
                .expect("block representative is a member");
            let mut constants = Vec::new();
            for &i in &indices[1..] {
                let ci = members
                    .iter()
                    .find(|(j, _)| *j == i)
                    .map(|(_, c)| c.clone())
                    .expect("index is a member");
                match ci.div(&rep_c) {
                    Ok(c) => constants.push((i, c)),
                    Err(_) => return Ok(None),
                }
            }
            let _ = rep;
            blocks.push(BorelBlock {
                indices,
                representative: block_rep,
                constants,
                identically_zero: false,
            });
        }
    }

    blocks.sort_by_key(|b| b.indices[0]);
    let partition = BorelPartition {
        blocks,
        verified_through_order: order,
    };
    if !partition.verify(&f) {
        return Ok(None);
    }
    Ok(Some(partition))
}

/// Wronskian of exact univariate polynomials vanishes identically iff the
/// polynomials are linearly dependent; comparing against the coefficient
/// matrix rank gives an independent exactness check.
pub fn polynomial_wronskian_matches_rank(entries: &[UniPoly<Rational>]) -> Result<bool> {
    let s = entries.len();
    if s == 0 {
        return Err(Error::invalid("empty entry list"));
    }
    let w = crate::jet::wronskian_poly(entries)?;
    let cols = entries
        .iter()
        .map(|p| p.degree().map_or(0, |d| d + 1))
        .max()
        .unwrap_or(1)
        .max(1);
    let mat: Vec<Vec<Rational>> = entries
        .iter()
        .map(|p| (0..cols).map(|i| p.coeff(i)).collect())
        .collect();
    let rank = crate::linalg::rank(mat);
    Ok(w.is_zero() == (rank < s))
}
