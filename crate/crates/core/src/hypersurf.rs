//! Constructors and certificate checkers for explicit hyperbolic
//! hypersurfaces: power sums of generic linear forms, and degree-n surfaces
//! x_0^n + x_1^n + x_2^n + x_3^{n-2} g with quadratic g.
//!
//! Verdicts are three-valued. Certified means every required condition was
//! established, exactly or by a ball that excludes zero. Rejected always
//! carries an exact witness (a repeated factor, a vanishing Hessian root, an
//! exact power equality). Unknown only ever signals ball-arithmetic
//! indeterminacy at the precision cap, never a decided falsehood.

use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha20Rng;

use crate::ball::{certified_binomial_roots, certified_roots_of_minus_one, ComplexBall};
use crate::coeff::CoeffField;
use crate::error::Error;
use crate::grassmann::{prop4_threshold_scan, HyperplaneSet, ThresholdScan};
use crate::linalg;
use crate::poly::{Monomial, Polynomial, VarSet};
use crate::rational::{rat_int, Rational};
use crate::univar::{Decision, UniPoly};
use crate::Result;

/// Ball-precision ladder for certificate checks, in bits.
pub const DEFAULT_PRECISIONS: &[usize] = &[256, 512, 1024, 2048, 4096];

#[derive(Clone, Copy, Debug, PartialEq, Eq, serde::Serialize)]
pub enum Verdict {
    #[serde(rename = "Hyperbolic-Certified")]
    Certified,
    Rejected,
    Unknown,
}

#[derive(Clone, Debug, serde::Serialize)]
pub struct CertificateVerdict {
    pub verdict: Verdict,
    /// Identifier of the first failing (or indeterminate) condition.
    pub failing_condition: Option<String>,
    /// Largest ball precision consulted; None when decided exactly.
    pub precision: Option<usize>,
}

impl CertificateVerdict {
    fn certified(precision: Option<usize>) -> Self {
        CertificateVerdict {
            verdict: Verdict::Certified,
            failing_condition: None,
            precision,
        }
    }

    fn rejected(cond: impl Into<String>, precision: Option<usize>) -> Self {
        CertificateVerdict {
            verdict: Verdict::Rejected,
            failing_condition: Some(cond.into()),
            precision,
        }
    }

    fn unknown(cond: impl Into<String>, precision: Option<usize>) -> Self {
        CertificateVerdict {
            verdict: Verdict::Unknown,
            failing_condition: Some(cond.into()),
            precision,
        }
    }
}

/// Form count and power for the power-sum construction in dimension n:
/// N = 4n-3 and p = 16(n-1)^2, with the integer identity p = 1 + N(N-2)
/// verified on the way out.
pub fn power_sum_parameters(n: usize) -> Result<(usize, usize)> {
    if n < 2 {
        return Err(Error::invalid("dimension must be at least 2"));
    }
    let big_n = 4 * n - 3;
    let p = 16 * (n - 1) * (n - 1);
    debug_assert_eq!(p, 1 + big_n * (big_n - 2));
    if p != 1 + big_n * (big_n - 2) {
        return Err(Error::Numerical("parameter identity failed".into()));
    }
    Ok((big_n, p))
}

/// Power sum Σ_j H_j^p of N generic linear forms on C^{n+1}, with the
/// genericity evidence attached.
#[derive(Clone, Debug)]
pub struct PowerSumSurface {
    n: usize,
    p: usize,
    forms: HyperplaneSet,
    scan: ThresholdScan,
}

impl PowerSumSurface {
    pub fn n(&self) -> usize {
        self.n
    }

    pub fn num_forms(&self) -> usize {
        self.forms.len()
    }

    pub fn power(&self) -> usize {
        self.p
    }

    pub fn forms(&self) -> &HyperplaneSet {
        &self.forms
    }

    /// The attached partition-scan certificate; uniformly empty because
    /// N = 4n-3 meets the 4m-7 threshold at m = n+1.
    pub fn scan(&self) -> &ThresholdScan {
        &self.scan
    }

    /// The defining polynomial in unexpanded power-sum form: (form, power).
    pub fn power_sum_form(&self) -> Vec<(Vec<Rational>, usize)> {
        (0..self.forms.len())
            .map(|j| (self.forms.form(j).to_vec(), self.p))
            .collect()
    }

    /// Fully expanded defining polynomial; the term count grows fast, so
    /// expansion is limited to n <= 3.
    pub fn defining_polynomial(&self) -> Result<Polynomial<Rational>> {
        if self.n > 3 {
            return Err(Error::invalid(
                "expansion is limited to dimension <= 3; use power_sum_form",
            ));
        }
        let vars = VarSet::xs(self.n + 1);
        let mut acc = Polynomial::zero(&vars);
        for j in 0..self.forms.len() {
            let mut linear = Polynomial::zero(&vars);
            for (i, c) in self.forms.form(j).iter().enumerate() {
                linear = linear.add(&Polynomial::var(&vars, i).scale(c));
            }
            acc = acc.add(&linear.pow(self.p));
        }
        Ok(acc)
    }
}

/// Draws N = 4n-3 seeded random rational forms on C^{n+1}, verifies pairwise
/// non-proportionality and full spanning on sampled (n+1)-subsets, and
/// attaches the exhaustive partition-count certificate.
pub fn construct_power_sum_surface(n: usize, seed: u64) -> Result<PowerSumSurface> {
    let (big_n, p) = power_sum_parameters(n)?;
    let m = n + 1;
    let mut rng = ChaCha20Rng::seed_from_u64(seed);
    let mut last_err = Error::invalid("no draw attempted");
    for _attempt in 0..16 {
        let forms = HyperplaneSet::random(m, big_n, &mut rng)?;
        match validate_generic(&forms, &mut rng) {
            Ok(()) => {
                let scan = prop4_threshold_scan(m, big_n)?;
                return Ok(PowerSumSurface { n, p, forms, scan });
            }
            Err(e) => last_err = e,
        }
    }
    Err(last_err)
}

fn validate_generic(forms: &HyperplaneSet, rng: &mut ChaCha20Rng) -> Result<()> {
    let n_forms = forms.len();
    let m = forms.m();
    for i in 0..n_forms {
        for j in i + 1..n_forms {
            let pair = vec![forms.form(i).to_vec(), forms.form(j).to_vec()];
            if linalg::rank(pair) < 2 {
                return Err(Error::invalid(format!(
                    "forms {i} and {j} are proportional"
                )));
            }
        }
    }
    if n_forms >= m {
        for subset in sample_subsets(n_forms, m, 40, rng) {
            let mat: Vec<Vec<Rational>> =
                subset.iter().map(|&i| forms.form(i).to_vec()).collect();
            if linalg::rank(mat) < m {
                return Err(Error::invalid(format!(
                    "forms {subset:?} do not span the ambient space"
                )));
            }
        }
    }
    Ok(())
}

/// All m-subsets when there are at most `cap`, otherwise `cap` sampled ones.
fn sample_subsets(n: usize, m: usize, cap: usize, rng: &mut ChaCha20Rng) -> Vec<Vec<usize>> {
    fn all(n: usize, m: usize, from: usize, prefix: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if prefix.len() == m {
            out.push(prefix.clone());
            return;
        }
        for i in from..n {
            prefix.push(i);
            all(n, m, i + 1, prefix, out);
            prefix.pop();
        }
    }
    let mut count = 1usize;
    for i in 0..m {
        count = count.saturating_mul(n - i) / (i + 1);
    }
    if count <= cap {
        let mut out = Vec::new();
        all(n, m, 0, &mut Vec::new(), &mut out);
        return out;
    }
    use rand::seq::SliceRandom;
    (0..cap)
        .map(|_| {
            let mut idx: Vec<usize> = (0..n).collect();
            idx.shuffle(rng);
            let mut s: Vec<usize> = idx.into_iter().take(m).collect();
            s.sort_unstable();
            s
        })
        .collect()
}

/// (B^2 - 4AC) / (4A): what remains of A ξ^2 + B(η) ξ + C(η) after the
/// square in ξ is completed, equal to (∂h/∂ξ)^2 / (2 ∂²h/∂ξ²) - h. Fails
/// when A is zero or its ball does not exclude zero.
pub fn complete_square_residual<C: CoeffField>(
    a: &C,
    b: &UniPoly<C>,
    c: &UniPoly<C>,
) -> Result<UniPoly<C>> {
    let four_a = a.scale_i64(4);
    let inv = C::one().div(&four_a)?;
    Ok(b.mul(b).sub(&c.scale(&four_a)).scale(&inv))
}

/// Degree-n surface x_0^n + x_1^n + x_2^n + x_3^{n-2} g(x_0..x_3) = 0 with
/// g homogeneous quadratic normalized by g(0,0,0,x_3) = x_3^2.
#[derive(Clone, Debug)]
pub struct PerturbedFermatSurface {
    n: usize,
    g: Polynomial<Rational>,
}

/// The three substitution patterns (i, j, k): x_i = ζξ, x_j = ξ, x_k = η,
/// x_3 = 1, one per unordered pair {i, j} ⊂ {0, 1, 2} along which the
/// Fermat part collapses.
pub const SUBSTITUTION_PATTERNS: [(usize, usize, usize); 3] =
    [(0, 1, 2), (1, 2, 0), (0, 2, 1)];

impl PerturbedFermatSurface {
    pub fn new(n: usize, g: &Polynomial<Rational>) -> Result<Self> {
        if n < 11 {
            return Err(Error::invalid("degree must be at least 11"));
        }
        let vars = VarSet::xs(4);
        let g = g.embed(&vars)?;
        if g.homogeneous_degree() != Some(2) {
            return Err(Error::invalid("perturbation must be homogeneous quadratic"));
        }
        if Self::quad_coeff(&g, 3, 3) != rat_int(1) {
            return Err(Error::invalid(
                "perturbation must restrict to x3^2 on the x3-axis",
            ));
        }
        Ok(PerturbedFermatSurface { n, g })
    }

    /// Surface with diagonal perturbation x_3^2 + a_0 x_0^2 + a_1 x_1^2 + a_2 x_2^2.
    pub fn diagonal(n: usize, a: &[Rational; 3]) -> Result<Self> {
        let vars = VarSet::xs(4);
        let mut g = Polynomial::var(&vars, 3).mul(&Polynomial::var(&vars, 3));
        for (j, aj) in a.iter().enumerate() {
            let xj = Polynomial::var(&vars, j);
            g = g.add(&xj.mul(&xj).scale(aj));
        }
        Self::new(n, &g)
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn g(&self) -> &Polynomial<Rational> {
        &self.g
    }

    /// x_0^n + x_1^n + x_2^n + x_3^{n-2} g.
    pub fn defining_polynomial(&self) -> Polynomial<Rational> {
        let vars = VarSet::xs(4);
        let mut acc = Polynomial::zero(&vars);
        for j in 0..3 {
            acc = acc.add(&Polynomial::var(&vars, j).pow(self.n));
        }
        acc.add(&Polynomial::var(&vars, 3).pow(self.n - 2).mul(&self.g))
    }

    fn quad_coeff(g: &Polynomial<Rational>, a: usize, b: usize) -> Rational {
        let mut exps = vec![0u16; 4];
        exps[a] += 1;
        exps[b] += 1;
        g.coeff(&Monomial(exps))
    }

    /// Coefficient of x_a x_b in g (a, b not necessarily distinct).
    pub fn coeff(&self, a: usize, b: usize) -> Rational {
        Self::quad_coeff(&self.g, a, b)
    }
}

/// Per-pattern data for the substitution x_i = ζξ, x_j = ξ, x_k = η, x_3 = 1
/// with ζ kept symbolic: h(ξ,η) = A(ζ)ξ² + B(ζ,η)ξ + C(η).
struct PatternData {
    /// A as a polynomial in ζ.
    a_of_zeta: UniPoly<Rational>,
    /// Coefficient of ξη in h, as a polynomial in ζ.
    b_eta: UniPoly<Rational>,
    /// Coefficient of ξ in h, as a polynomial in ζ.
    b_const: UniPoly<Rational>,
    /// C(η) = c_kk η² + c_k3 η + 1; independent of ζ.
    c_of_eta: UniPoly<Rational>,
}

fn pattern_data(surface: &PerturbedFermatSurface, pat: (usize, usize, usize)) -> PatternData {
    let (i, j, k) = pat;
    let c = |a: usize, b: usize| surface.coeff(a, b);
    PatternData {
        a_of_zeta: UniPoly::new(vec![c(j, j), c(i, j), c(i, i)]),
        b_eta: UniPoly::new(vec![c(j, k), c(i, k)]),
        b_const: UniPoly::new(vec![c(j, 3), c(i, 3)]),
        c_of_eta: UniPoly::new(vec![c(3, 3), c(k, 3), c(k, k)]),
    }
}

fn x_pow_n_plus_one(n: usize) -> UniPoly<Rational> {
    UniPoly::monomial(rat_int(1), n).add(&UniPoly::constant(rat_int(1)))
}

/// Checks the distinct-roots and nonzero-Hessian hypotheses for the surface:
/// for each substitution pattern and every n-th root ζ of -1, the Hessian
/// coefficient A(ζ) must be nonzero and -η^n + (B²-4AC)/(4A) must have n
/// distinct roots. Exact routes decide whenever ζ drops out; otherwise balls
/// on the given precision ladder.
pub fn check_perturbed_fermat(
    surface: &PerturbedFermatSurface,
    precisions: &[usize],
) -> Result<CertificateVerdict> {
    if precisions.is_empty() {
        return Err(Error::invalid("precision ladder must be nonempty"));
    }
    let n = surface.n();
    let modulus = x_pow_n_plus_one(n);
    let mut max_prec: Option<usize> = None;

    for (pat_idx, &pat) in SUBSTITUTION_PATTERNS.iter().enumerate() {
        let data = pattern_data(surface, pat);

        // Hessian hypothesis, exact: A(ζ) != 0 for every root of ζ^n = -1
        // iff gcd(A, ζ^n + 1) is constant. Covers A ≡ 0.
        let g = data.a_of_zeta.gcd(&modulus);
        if g.degree().map_or(true, |d| d > 0) {
            return Ok(CertificateVerdict::rejected(
                format!("hessian_vanishes(pattern={pat_idx})"),
                None,
            ));
        }

        if data.b_eta.is_zero() && data.b_const.is_zero() {
            // B ≡ 0: the residual is -C independent of ζ, so the root
            // polynomial -η^n - C(η) is exactly rational.
            let p = UniPoly::monomial(rat_int(-1), n).sub(&data.c_of_eta);
            if !p.is_squarefree_exact()? {
                return Ok(CertificateVerdict::rejected(
                    format!("repeated_root(pattern={pat_idx})"),
                    None,
                ));
            }
            continue;
        }

        // ζ survives into the coefficients: certify per root by balls.
        let mut pattern_done = false;
        'ladder: for &prec in precisions {
            max_prec = Some(max_prec.map_or(prec, |m: usize| m.max(prec)));
            let roots = certified_roots_of_minus_one(n, prec)?;
            let mut all_certified = true;
            for zeta in &roots {
                let a = data.a_of_zeta.eval_ball(zeta);
                if !a.definitely_nonzero() {
                    // gcd already proved A(ζ) != 0; only precision is short.
                    all_certified = false;
                    break;
                }
                let b = UniPoly::new(vec![
                    data.b_const.eval_ball(zeta),
                    data.b_eta.eval_ball(zeta),
                ]);
                let c = data.c_of_eta.to_ball(prec);
                let residual = complete_square_residual(&a, &b, &c)?;
                let mut coeffs = vec![ComplexBall::zero(prec); n + 1];
                for (t, v) in residual.coeffs().iter().enumerate() {
                    coeffs[t] = v.clone();
                }
                coeffs[n] = ComplexBall::from_i64(-1, prec);
                let p = UniPoly::new(coeffs);
                match p.squarefree_certified_ball(prec)? {
                    Decision::Yes => {}
                    Decision::No | Decision::Unknown => {
                        all_certified = false;
                        break;
                    }
                }
            }
            if all_certified {
                pattern_done = true;
                break 'ladder;
            }
        }
        if !pattern_done {
            return Ok(CertificateVerdict::unknown(
                format!("indeterminate(pattern={pat_idx})"),
                max_prec,
            ));
        }
    }
    Ok(CertificateVerdict::certified(max_prec))
}

/// Checks the diagonal-perturbation conditions directly from (a_0, a_1, a_2):
/// the pairwise power condition a_i^n != (-1)^n a_j^n exactly, and for each
/// j the branch condition 1 + a_j w² + w^n != 0 over every (n-2)-th root w
/// of -2a_j/n, certified by balls with the exact squarefree oracle deciding
/// genuine vanishing.
pub fn check_diagonal_conditions(
    n: usize,
    a: &[Rational; 3],
    precisions: &[usize],
) -> Result<CertificateVerdict> {
    if n < 11 {
        return Err(Error::invalid("degree must be at least 11"));
    }
    if precisions.is_empty() {
        return Err(Error::invalid("precision ladder must be nonempty"));
    }
    let sign = if n % 2 == 0 { rat_int(1) } else { rat_int(-1) };
    for i in 0..3 {
        for j in i + 1..3 {
            let lhs = num_traits::pow::pow(a[i].clone(), n);
            let rhs = &sign * num_traits::pow::pow(a[j].clone(), n);
            if lhs == rhs {
                return Ok(CertificateVerdict::rejected(
                    format!("power_equality(i={i},j={j})"),
                    None,
                ));
            }
        }
    }

    let mut max_prec: Option<usize> = None;
    for (j, aj) in a.iter().enumerate() {
        if aj == &rat_int(0) {
            // -2a/n = 0: every branch value is 1.
            continue;
        }
        let target = rat_int(-2) * aj / rat_int(n as i64);
        let mut done = false;
        'ladder: for &prec in precisions {
            max_prec = Some(max_prec.map_or(prec, |m: usize| m.max(prec)));
            let ws = certified_binomial_roots(n - 2, &target, prec)?;
            let mut all_nonzero = true;
            for w in &ws {
                let aj_ball = ComplexBall::from_rational(aj, prec);
                let value = ComplexBall::one(prec)
                    .add(&aj_ball.mul(&w.powi(2)))
                    .add(&w.powi(n));
                if !value.definitely_nonzero() {
                    all_nonzero = false;
                    break;
                }
            }
            if all_nonzero {
                done = true;
                break 'ladder;
            }
            // A straddling value either vanishes exactly (a repeated root
            // of -η^n - a η² - 1) or needs more precision; decide exactly.
            let p = UniPoly::new({
                let mut cs = vec![rat_int(0); n + 1];
                cs[0] = rat_int(-1);
                cs[2] = aj.clone() * rat_int(-1);
                cs[n] = rat_int(-1);
                cs
            });
            if !p.is_squarefree_exact()? {
                return Ok(CertificateVerdict::rejected(
                    format!("branch_vanishes(j={j})"),
                    max_prec,
                ));
            }
        }
        if !done {
            return Ok(CertificateVerdict::unknown(
                format!("indeterminate(j={j})"),
                max_prec,
            ));
        }
    }
    Ok(CertificateVerdict::certified(max_prec))
}
