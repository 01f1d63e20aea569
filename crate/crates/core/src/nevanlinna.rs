//! Value-distribution numerics on C: circle averages, counting and
//! characteristic functions, defect ratios against an elliptic-curve target,
//! and finite-difference checks of the curvature identity behind the
//! Schwarz-lemma argument.
//!
//! Everything here is double-precision quadrature with reported error
//! estimates; nothing in this module claims certified enclosures. The one
//! exception is pole extraction for rational functions, which goes through
//! exact squarefree decomposition plus an interval-Newton certification of
//! each root enclosure.

use std::f64::consts::PI;
use std::sync::Arc;

use num_complex::Complex64;
use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha20Rng;

use crate::ball::ComplexBall;
use crate::error::Error;
use crate::rational::{rational_to_f64, Rational};
use crate::univar::UniPoly;
use crate::Result;

/// Relative radial displacement applied to quadrature nodes that land on a
/// singularity.
pub const RADIAL_NUDGE: f64 = 1e-9;

/// Default angular node count; doubled internally for the error estimate.
pub const DEFAULT_NODES: usize = 512;

fn log_plus(x: f64) -> f64 {
    if x > 1.0 {
        x.ln()
    } else {
        0.0
    }
}

// ---------------------------------------------------------------------------
// Complex polynomial roots: Durand-Kerner refinement plus an interval-Newton
// certification step over ball arithmetic.
// ---------------------------------------------------------------------------

fn eval_c64(coeffs: &[Complex64], z: Complex64) -> Complex64 {
    let mut acc = Complex64::new(0.0, 0.0);
    for c in coeffs.iter().rev() {
        acc = acc * z + c;
    }
    acc
}

fn poly_c64(p: &UniPoly<Rational>) -> Vec<Complex64> {
    p.coeffs()
        .iter()
        .map(|c| Complex64::new(rational_to_f64(c), 0.0))
        .collect()
}

/// All complex roots of a c64 polynomial by Durand-Kerner iteration.
/// Intended for well-separated roots of modest degree; callers needing
/// multiplicities should factor first (see `certified_roots`).
pub fn complex_roots(coeffs: &[Complex64]) -> Vec<Complex64> {
    let mut cs: Vec<Complex64> = coeffs.to_vec();
    while cs.last().is_some_and(|c| c.norm() == 0.0) {
        cs.pop();
    }
    let deg = cs.len().saturating_sub(1);
    if deg == 0 {
        return vec![];
    }
    let lead = cs[deg];
    let monic: Vec<Complex64> = cs.iter().map(|c| c / lead).collect();
    let scale = 1.0
        + monic
            .iter()
            .take(deg)
            .map(|c| c.norm())
            .fold(0.0f64, f64::max);
    // Standard non-real seed angles avoid symmetry traps.
    let seed = Complex64::new(0.4, 0.9);
    let mut roots: Vec<Complex64> = (0..deg).map(|k| scale * seed.powu(k as u32 + 1)).collect();
    for _ in 0..400 {
        let mut max_step = 0.0f64;
        for i in 0..deg {
            let mut denom = Complex64::new(1.0, 0.0);
            for j in 0..deg {
                if j != i {
                    denom *= roots[i] - roots[j];
                }
            }
            if denom.norm() == 0.0 {
                roots[i] += Complex64::new(1e-6, 2e-6);
                continue;
            }
            let step = eval_c64(&monic, roots[i]) / denom;
            roots[i] -= step;
            max_step = max_step.max(step.norm());
        }
        if max_step < 1e-14 * scale {
            break;
        }
    }
    roots
}

/// A root enclosure: the true root lies within `radius` of `value`, with the
/// multiplicity it carries in the original polynomial.
#[derive(Clone, Copy, Debug, serde::Serialize)]
pub struct CertifiedRoot {
    pub re: f64,
    pub im: f64,
    pub radius: f64,
    pub multiplicity: usize,
}

impl CertifiedRoot {
    pub fn location(&self) -> Complex64 {
        Complex64::new(self.re, self.im)
    }
}

/// Interval-Newton uniqueness test: with X the disc of radius rho around z,
/// N(X) = z - p(z)/p'(X) landing inside X proves a unique root of p in X.
fn newton_certifies(p: &UniPoly<Rational>, z: Complex64, rho: f64) -> bool {
    const PREC: usize = 128;
    let center = ComplexBall::from_f64_pair(z.re, z.im, PREC);
    let disc = center.inflate(rho);
    let dp = p.derivative();
    let Ok(step) = p.eval_ball(&center).div(&dp.eval_ball(&disc)) else {
        return false;
    };
    let image = center.sub(&step);
    let dist = crate::ball::bigfloat_to_f64(&image.sub(&center).abs_upper());
    dist <= rho * 0.999
}

/// Roots of an exact rational polynomial: Yun decomposition supplies exact
/// multiplicities, Durand-Kerner locates each squarefree factor's roots, and
/// interval Newton certifies an enclosure radius per root.
pub fn certified_roots(p: &UniPoly<Rational>) -> Result<Vec<CertifiedRoot>> {
    let Some(d) = p.degree() else {
        return Err(Error::DivisionByZero);
    };
    if d == 0 {
        return Ok(vec![]);
    }
    let mut out = Vec::new();
    for (factor, mult) in p.squarefree_decomposition() {
        let approx = complex_roots(&poly_c64(&factor));
        for z in approx {
            let scale = 1.0 + z.norm();
            let mut certified = None;
            for rho in [1e-11, 1e-9, 1e-7, 1e-5] {
                if newton_certifies(&factor, z, rho * scale) {
                    certified = Some(rho * scale);
                    break;
                }
            }
            let Some(radius) = certified else {
                return Err(Error::Numerical(format!(
                    "root near {z} of a degree-{d} polynomial resisted certification"
                )));
            };
            out.push(CertifiedRoot {
                re: z.re,
                im: z.im,
                radius,
                multiplicity: mult,
            });
        }
    }
    out.sort_by(|a, b| {
        (a.re, a.im)
            .partial_cmp(&(b.re, b.im))
            .unwrap_or(std::cmp::Ordering::Equal)
    });
    Ok(out)
}

// ---------------------------------------------------------------------------
// Meromorphic samples
// ---------------------------------------------------------------------------

#[derive(Clone, Copy, Debug, PartialEq, Eq, serde::Serialize)]
pub enum SampleKind {
    /// Exact numerator/denominator; pole list derived and certified.
    Rational,
    /// Black-box evaluator; the caller-supplied pole list is trusted.
    Plugin,
}

#[derive(Clone, Copy, Debug, serde::Serialize)]
pub struct Pole {
    pub re: f64,
    pub im: f64,
    pub multiplicity: usize,
}

impl Pole {
    pub fn location(&self) -> Complex64 {
        Complex64::new(self.re, self.im)
    }
}

type Evaluator = Arc<dyn Fn(Complex64) -> Complex64 + Send + Sync>;

/// A meromorphic function presented as an evaluator plus a pole list valid
/// up to `r_max`.
#[derive(Clone)]
pub struct MeromorphicSample {
    kind: SampleKind,
    label: String,
    eval: Evaluator,
    poles: Vec<Pole>,
    r_max: f64,
    rational: Option<(UniPoly<Rational>, UniPoly<Rational>)>,
}

impl std::fmt::Debug for MeromorphicSample {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("MeromorphicSample")
            .field("kind", &self.kind)
            .field("label", &self.label)
            .field("poles", &self.poles)
            .field("r_max", &self.r_max)
            .finish()
    }
}

impl MeromorphicSample {
    /// num/den with exact coefficients. Common factors are removed exactly,
    /// then the poles (denominator roots) are certified.
    pub fn rational(num: &UniPoly<Rational>, den: &UniPoly<Rational>) -> Result<Self> {
        if den.is_zero() {
            return Err(Error::DivisionByZero);
        }
        let (num, den) = if num.is_zero() {
            (UniPoly::zero(), UniPoly::one())
        } else {
            let g = num.gcd(den);
            (num.divrem(&g)?.0, den.divrem(&g)?.0)
        };
        let poles = if den.degree() == Some(0) {
            vec![]
        } else {
            certified_roots(&den)?
                .into_iter()
                .map(|r| Pole {
                    re: r.re,
                    im: r.im,
                    multiplicity: r.multiplicity,
                })
                .collect()
        };
        let nc = poly_c64(&num);
        let dc = poly_c64(&den);
        let label = format!("rational(deg {}/{})", nc.len().max(1) - 1, dc.len() - 1);
        let eval: Evaluator = Arc::new(move |z| eval_c64(&nc, z) / eval_c64(&dc, z));
        Ok(MeromorphicSample {
            kind: SampleKind::Rational,
            label,
            eval,
            poles,
            r_max: f64::INFINITY,
            rational: Some((num, den)),
        })
    }

    /// Black-box function with a trusted pole list valid within `r_max`.
    pub fn plugin(
        label: impl Into<String>,
        eval: impl Fn(Complex64) -> Complex64 + Send + Sync + 'static,
        poles: Vec<Pole>,
        r_max: f64,
    ) -> Self {
        MeromorphicSample {
            kind: SampleKind::Plugin,
            label: label.into(),
            eval: Arc::new(eval),
            poles,
            r_max,
            rational: None,
        }
    }

    pub fn kind(&self) -> SampleKind {
        self.kind
    }

    pub fn label(&self) -> &str {
        &self.label
    }

    pub fn eval(&self, z: Complex64) -> Complex64 {
        (self.eval)(z)
    }

    pub fn poles(&self) -> &[Pole] {
        &self.poles
    }

    pub fn r_max(&self) -> f64 {
        self.r_max
    }

    /// Degree as a map to the projective line; rational kind only.
    pub fn degree(&self) -> Option<usize> {
        let (num, den) = self.rational.as_ref()?;
        Some(num.degree().unwrap_or(0).max(den.degree().unwrap_or(0)))
    }

    pub fn rational_parts(&self) -> Option<(&UniPoly<Rational>, &UniPoly<Rational>)> {
        self.rational.as_ref().map(|(n, d)| (n, d))
    }

    /// 1/(F - a) for a rational sample: poles are the a-points of F, located
    /// by Durand-Kerner on the shifted numerator and clustered into
    /// multiplicities. Complex shifts leave the exact ring, so the result is
    /// a plugin-kind sample.
    pub fn shifted_reciprocal(&self, a: Complex64) -> Result<Self> {
        let Some((num, den)) = self.rational.as_ref() else {
            return Err(Error::invalid(
                "shifted reciprocal requires a rational sample",
            ));
        };
        let nc = poly_c64(num);
        let dc = poly_c64(den);
        let mut shifted = vec![Complex64::new(0.0, 0.0); nc.len().max(dc.len())];
        for (i, c) in nc.iter().enumerate() {
            shifted[i] += c;
        }
        for (i, c) in dc.iter().enumerate() {
            shifted[i] -= a * c;
        }
        let roots = complex_roots(&shifted);
        let poles = cluster_roots(&roots, 1e-6);
        let label = format!("1/({} - {a})", self.label);
        let eval: Evaluator =
            Arc::new(move |z| eval_c64(&dc, z) / (eval_c64(&nc, z) - a * eval_c64(&dc, z)));
        Ok(MeromorphicSample {
            kind: SampleKind::Plugin,
            label,
            eval,
            poles,
            r_max: f64::INFINITY,
            rational: None,
        })
    }

    /// F'/F as an exact rational sample.
    pub fn log_derivative(&self) -> Result<Self> {
        let Some((num, den)) = self.rational.as_ref() else {
            return Err(Error::invalid("log derivative requires a rational sample"));
        };
        let top = num.derivative().mul(den).sub(&num.mul(&den.derivative()));
        let bottom = num.mul(den);
        Self::rational(&top, &bottom)
    }
}

/// Groups approximate roots within `tol` of each other; cluster size becomes
/// the multiplicity.
fn cluster_roots(roots: &[Complex64], tol: f64) -> Vec<Pole> {
    let mut poles: Vec<Pole> = Vec::new();
    for &z in roots {
        if let Some(p) = poles
            .iter_mut()
            .find(|p| (p.location() - z).norm() < tol * (1.0 + z.norm()))
        {
            p.multiplicity += 1;
        } else {
            poles.push(Pole {
                re: z.re,
                im: z.im,
                multiplicity: 1,
            });
        }
    }
    poles
}

// ---------------------------------------------------------------------------
// Quadrature
// ---------------------------------------------------------------------------

/// Trapezoidal circle average with a node-doubling error estimate.
#[derive(Clone, Debug, serde::Serialize)]
pub struct QuadratureResult {
    pub value: f64,
    pub error_estimate: f64,
    pub nodes: usize,
    /// Angles whose nodes needed a radial nudge off a singularity.
    pub nudged_angles: Vec<f64>,
}

/// Mean of the integrand over the circle of radius `r`, sampled at 2*nodes
/// equispaced angles; the even-index subsample provides the error estimate.
/// Nodes landing on a singularity are nudged radially by 1e-9 r, escalating
/// to 1e-7 r and 1e-5 r (both directions each); angles that stay non-finite
/// abort the average.
pub fn circle_average<F: Fn(Complex64) -> f64>(
    integrand: F,
    r: f64,
    nodes: usize,
) -> Result<QuadratureResult> {
    if !(r > 0.0) || !r.is_finite() {
        return Err(Error::invalid("circle radius must be positive and finite"));
    }
    if nodes < 4 {
        return Err(Error::invalid("need at least 4 quadrature nodes"));
    }
    let fine = 2 * nodes;
    let mut values = Vec::with_capacity(fine);
    let mut nudged = Vec::new();
    let mut bad = Vec::new();
    for k in 0..fine {
        let theta = 2.0 * PI * (k as f64) / (fine as f64);
        let dir = Complex64::new(theta.cos(), theta.sin());
        let mut v = integrand(r * dir);
        if !v.is_finite() {
            // Escalate the nudge: near a multiple zero the value at offset
            // eps is O(eps^2) and must clear f64 cancellation noise.
            'nudge: for scale in [1.0, 100.0, 10000.0] {
                for sign in [1.0, -1.0] {
                    v = integrand(r * (1.0 + sign * scale * RADIAL_NUDGE) * dir);
                    if v.is_finite() {
                        break 'nudge;
                    }
                }
            }
            if v.is_finite() {
                nudged.push(theta);
            } else {
                bad.push(theta);
            }
        }
        values.push(v);
    }
    if !bad.is_empty() {
        return Err(Error::Numerical(format!(
            "integrand non-finite after nudging at angles {bad:?}"
        )));
    }
    let mean_fine = values.iter().sum::<f64>() / fine as f64;
    let mean_coarse = values.iter().step_by(2).sum::<f64>() / nodes as f64;
    Ok(QuadratureResult {
        value: mean_fine,
        error_estimate: (mean_fine - mean_coarse).abs(),
        nodes,
        nudged_angles: nudged,
    })
}

// ---------------------------------------------------------------------------
// Counting and characteristic functions
// ---------------------------------------------------------------------------

/// Integrated pole-counting function N(r), optionally with every
/// multiplicity capped at `truncation`. A pole at the origin contributes
/// mult * log r.
pub fn counting_function(
    sample: &MeromorphicSample,
    r: f64,
    truncation: Option<usize>,
) -> Result<f64> {
    if !(r > 0.0) {
        return Err(Error::invalid("radius must be positive"));
    }
    if r > sample.r_max() {
        return Err(Error::invalid(format!(
            "radius {r} exceeds the pole list's validity {}",
            sample.r_max()
        )));
    }
    let cap = truncation.unwrap_or(usize::MAX);
    let mut n = 0.0;
    for p in sample.poles() {
        let mult = p.multiplicity.min(cap) as f64;
        let d = p.location().norm();
        if d <= 1e-14 {
            n += mult * r.ln();
        } else if d <= r {
            n += mult * (r / d).ln();
        }
    }
    Ok(n)
}

/// One grid point of a characteristic-function profile.
#[derive(Clone, Debug, serde::Serialize)]
pub struct ProfileRecord {
    pub r: f64,
    #[serde(rename = "A_term")]
    pub a_term: f64,
    #[serde(rename = "N_term")]
    pub n_term: f64,
    #[serde(rename = "T")]
    pub t: f64,
    pub m: Option<f64>,
    pub ratio: Option<f64>,
    pub quad_error: f64,
}

/// Finite-sample estimate of lim T(r)/log r against the degree of a
/// rational map. T(r) = d log r + O(1), so the naive quotient converges
/// only like 1/log r; the slope of T against log r over the grid tail
/// cancels the bounded term and reaches the limit at desk radii.
#[derive(Clone, Debug, serde::Serialize)]
pub struct DegreeCheck {
    pub expected: usize,
    pub observed: f64,
    pub tolerance: f64,
    pub within_tolerance: bool,
}

#[derive(Clone, Debug, serde::Serialize)]
pub struct NevanlinnaProfile {
    pub records: Vec<ProfileRecord>,
    pub nodes: usize,
    pub degree_check: Option<DegreeCheck>,
}

/// T(r) = A_r(log+ |F|) + N(r) over an increasing radius grid.
pub fn characteristic(
    sample: &MeromorphicSample,
    grid: &[f64],
    nodes: usize,
) -> Result<NevanlinnaProfile> {
    if grid.is_empty() {
        return Err(Error::invalid("empty radius grid"));
    }
    if grid.windows(2).any(|w| w[0] >= w[1]) || grid[0] <= 0.0 {
        return Err(Error::invalid("grid must be strictly increasing and positive"));
    }
    let mut records = Vec::with_capacity(grid.len());
    let mut prev_n = 0.0f64;
    for &r in grid {
        let quad = circle_average(
            |z| {
                let v = sample.eval(z).norm();
                if v.is_finite() {
                    log_plus(v)
                } else {
                    f64::INFINITY
                }
            },
            r,
            nodes,
        )?;
        let n_term = counting_function(sample, r, None)?;
        debug_assert!(n_term >= prev_n - 1e-12, "N must be nondecreasing");
        prev_n = n_term;
        records.push(ProfileRecord {
            r,
            a_term: quad.value,
            n_term,
            t: quad.value + n_term,
            m: None,
            ratio: None,
            quad_error: quad.error_estimate,
        });
    }
    let degree_check = match (sample.degree(), records.last()) {
        (Some(d), Some(last)) if last.r >= 100.0 => {
            let cut = (grid[0] * last.r).sqrt();
            let tail: Vec<&ProfileRecord> =
                records.iter().filter(|rec| rec.r >= cut).collect();
            if tail.len() >= 3 {
                let xs: Vec<f64> = tail.iter().map(|rec| rec.r.ln()).collect();
                let ys: Vec<f64> = tail.iter().map(|rec| rec.t).collect();
                let observed = fit_slope(&xs, &ys);
                Some(DegreeCheck {
                    expected: d,
                    observed,
                    tolerance: 0.05,
                    within_tolerance: (observed - d as f64).abs() <= 0.05,
                })
            } else {
                None
            }
        }
        _ => None,
    };
    Ok(NevanlinnaProfile {
        records,
        nodes,
        degree_check,
    })
}

/// Least-squares slope of y against x.
pub fn fit_slope(xs: &[f64], ys: &[f64]) -> f64 {
    let n = xs.len() as f64;
    let mx = xs.iter().sum::<f64>() / n;
    let my = ys.iter().sum::<f64>() / n;
    let mut num = 0.0;
    let mut den = 0.0;
    for (x, y) in xs.iter().zip(ys) {
        num += (x - mx) * (y - my);
        den += (x - mx) * (x - mx);
    }
    num / den
}

// ---------------------------------------------------------------------------
// Elliptic model: C/(Z + tau Z) with a one-point divisor
// ---------------------------------------------------------------------------

/// The elliptic curve C/(Z + tau Z) carrying the divisor {divisor}, with the
/// odd theta function as defining section and the quadratic form phi making
/// |theta|^2 exp(-phi) doubly periodic. The section norm is scaled so its
/// supremum over the curve is 1, absorbing the bounded-term ambiguity in the
/// proximity function.
#[derive(Clone, Debug)]
pub struct EllipticModel {
    tau: Complex64,
    divisor: Complex64,
    truncation: usize,
    /// sup over the curve of log |theta| - phi/2, located numerically.
    norm_log_sup: f64,
}

impl EllipticModel {
    pub fn new(tau: Complex64, divisor: Complex64) -> Result<Self> {
        if !(tau.im > 0.0) {
            return Err(Error::invalid("lattice parameter needs Im tau > 0"));
        }
        let mut model = EllipticModel {
            tau,
            divisor,
            truncation: 24,
            norm_log_sup: 0.0,
        };
        model.norm_log_sup = model.locate_norm_sup();
        Ok(model)
    }

    /// Square lattice tau = i with the divisor at the origin.
    pub fn square_lattice() -> Self {
        Self::new(Complex64::new(0.0, 1.0), Complex64::new(0.0, 0.0))
            .expect("square lattice parameters are valid")
    }

    pub fn tau(&self) -> Complex64 {
        self.tau
    }

    pub fn divisor(&self) -> Complex64 {
        self.divisor
    }

    pub fn truncation(&self) -> usize {
        self.truncation
    }

    /// Odd theta series at z, summed directly (no lattice reduction):
    /// 2 sum_k (-1)^k q^{(k+1/2)^2} sin((2k+1) pi z) with q = exp(i pi tau).
    pub fn theta_raw(&self, z: Complex64) -> Complex64 {
        let ipitau = Complex64::new(0.0, PI) * self.tau;
        let mut acc = Complex64::new(0.0, 0.0);
        let mut small = 0;
        for k in 0..=self.truncation {
            let half = k as f64 + 0.5;
            let term = 2.0
                * (ipitau * half * half).exp()
                * ((2 * k + 1) as f64 * PI * z).sin()
                * if k % 2 == 0 { 1.0 } else { -1.0 };
            acc += term;
            if term.norm() < 1e-22 * (1.0 + acc.norm()) {
                small += 1;
                if small >= 2 {
                    break;
                }
            } else {
                small = 0;
            }
        }
        acc
    }

    /// log |theta_D(z)| with theta_D(z) = theta(z - divisor), evaluated by
    /// reducing into the fundamental cell and adding the quasi-periodicity
    /// correction pi n^2 Im tau + 2 pi n Im w0. Minus infinity on the
    /// divisor's lattice orbit.
    pub fn log_abs_theta(&self, z: Complex64) -> f64 {
        let w = z - self.divisor;
        let n = (w.im / self.tau.im).round();
        let m = (w.re - n * self.tau.re).round();
        let w0 = w - m - n * self.tau;
        let base = self.theta_raw(w0).norm();
        base.ln() + PI * n * n * self.tau.im + 2.0 * PI * n * w0.im
    }

    /// The invariance-restoring quadratic form 2 pi Im(z - divisor)^2 / Im tau.
    pub fn phi(&self, z: Complex64) -> f64 {
        let b = (z - self.divisor).im;
        2.0 * PI * b * b / self.tau.im
    }

    /// log of the normalized section norm: log |theta_D| - phi/2 - sup.
    /// Nonpositive up to the sup-location error; -infinity on the divisor.
    pub fn log_section_norm(&self, z: Complex64) -> f64 {
        self.log_abs_theta(z) - 0.5 * self.phi(z) - self.norm_log_sup
    }

    /// Residuals of the two quasi-periodicity laws at z, evaluated on the
    /// raw series: |theta(z+1) + theta(z)| and
    /// |theta(z+tau) + exp(-i pi tau - 2 pi i z) theta(z)|.
    pub fn transformation_residual(&self, z: Complex64) -> (f64, f64) {
        let t = self.theta_raw(z);
        let shift1 = self.theta_raw(z + 1.0);
        let i = Complex64::new(0.0, 1.0);
        let factor = (-i * PI * self.tau - 2.0 * PI * i * z).exp();
        let shift_tau = self.theta_raw(z + self.tau);
        ((shift1 + t).norm(), (shift_tau + factor * t).norm())
    }

    /// Grid search with two refinement passes for sup(log|theta| - phi/2)
    /// over the fundamental cell.
    fn locate_norm_sup(&self) -> f64 {
        let value = |z: Complex64| {
            let v = self.log_abs_theta(z + self.divisor) - 0.5 * self.phi(z + self.divisor);
            if v.is_finite() {
                v
            } else {
                f64::NEG_INFINITY
            }
        };
        let mut best = f64::NEG_INFINITY;
        let mut best_z = Complex64::new(0.5, 0.5 * self.tau.im);
        let cells = 96;
        for a in 0..cells {
            for b in 0..cells {
                let x = (a as f64 + 0.5) / cells as f64;
                let y = (b as f64 + 0.5) / cells as f64;
                let z = Complex64::new(x, 0.0) + y * self.tau;
                let v = value(z);
                if v > best {
                    best = v;
                    best_z = z;
                }
            }
        }
        let mut span = 1.0 / cells as f64;
        for _ in 0..3 {
            let mut local_best = best;
            let mut local_z = best_z;
            for a in -8i32..=8 {
                for b in -8i32..=8 {
                    let z = best_z
                        + Complex64::new(a as f64 * span / 8.0, b as f64 * span / 8.0 * self.tau.im);
                    let v = value(z);
                    if v > local_best {
                        local_best = v;
                        local_z = z;
                    }
                }
            }
            best = local_best;
            best_z = local_z;
            span /= 8.0;
        }
        best
    }
}

// ---------------------------------------------------------------------------
// Defect profile
// ---------------------------------------------------------------------------

#[derive(Clone, Debug, serde::Serialize)]
pub struct DefectRecord {
    pub r: f64,
    pub m: f64,
    #[serde(rename = "T")]
    pub t: f64,
    pub ratio: f64,
    pub quad_error: f64,
}

#[derive(Clone, Debug, serde::Serialize)]
pub struct DefectProfile {
    pub records: Vec<DefectRecord>,
    /// Least-squares slope of log T against log r over the grid.
    pub growth_exponent: f64,
    pub nodes: usize,
    /// Total quadrature nodes that needed a radial nudge.
    pub nudged: usize,
}

/// m(r)/T(r) for the line zeta -> c zeta into the elliptic curve:
/// m(r) = A_r(-log section norm) and T(r) = A_r(phi o f)/2, the
/// Green's-theorem form of the curvature integral.
pub fn defect_estimate(
    model: &EllipticModel,
    c: Complex64,
    grid: &[f64],
    nodes: usize,
) -> Result<DefectProfile> {
    if c.norm() == 0.0 {
        return Err(Error::invalid("the germ must be nonconstant"));
    }
    if grid.is_empty() || grid.windows(2).any(|w| w[0] >= w[1]) || grid[0] <= 0.0 {
        return Err(Error::invalid("grid must be strictly increasing and positive"));
    }
    let mut records = Vec::with_capacity(grid.len());
    let mut nudged = 0usize;
    for &r in grid {
        let m_quad = circle_average(
            |z| {
                let v = -model.log_section_norm(c * z);
                if v.is_finite() {
                    v
                } else {
                    f64::INFINITY
                }
            },
            r,
            nodes,
        )?;
        let t_quad = circle_average(|z| model.phi(c * z), r, nodes)?;
        nudged += m_quad.nudged_angles.len() + t_quad.nudged_angles.len();
        let t = 0.5 * t_quad.value;
        records.push(DefectRecord {
            r,
            m: m_quad.value,
            t,
            ratio: m_quad.value / t,
            quad_error: m_quad.error_estimate + 0.5 * t_quad.error_estimate,
        });
    }
    let xs: Vec<f64> = records.iter().map(|p| p.r.ln()).collect();
    let ys: Vec<f64> = records.iter().map(|p| p.t.ln()).collect();
    let growth_exponent = fit_slope(&xs, &ys);
    Ok(DefectProfile {
        records,
        growth_exponent,
        nodes,
        nudged,
    })
}

// ---------------------------------------------------------------------------
// Curvature identity and the Calculus-Lemma probe
// ---------------------------------------------------------------------------

/// A holomorphic function with its derivative, both as evaluators.
#[derive(Clone)]
pub struct HolomorphicSample {
    label: String,
    f: Evaluator,
    df: Evaluator,
}

impl HolomorphicSample {
    pub fn new(
        label: impl Into<String>,
        f: impl Fn(Complex64) -> Complex64 + Send + Sync + 'static,
        df: impl Fn(Complex64) -> Complex64 + Send + Sync + 'static,
    ) -> Self {
        HolomorphicSample {
            label: label.into(),
            f: Arc::new(f),
            df: Arc::new(df),
        }
    }

    pub fn label(&self) -> &str {
        &self.label
    }

    pub fn eval(&self, z: Complex64) -> Complex64 {
        (self.f)(z)
    }

    pub fn deriv(&self, z: Complex64) -> Complex64 {
        (self.df)(z)
    }

    pub fn constant(c: Complex64) -> Self {
        Self::new(format!("const {c}"), move |_| c, |_| Complex64::new(0.0, 0.0))
    }

    pub fn coordinate() -> Self {
        Self::new("zeta", |z| z, |_| Complex64::new(1.0, 0.0))
    }

    pub fn coordinate_square() -> Self {
        Self::new("zeta^2", |z| z * z, |z| 2.0 * z)
    }

    /// exp via its truncated power series, derivative included.
    pub fn exp_series(terms: usize) -> Self {
        let sum = move |z: Complex64| {
            let mut acc = Complex64::new(0.0, 0.0);
            let mut term = Complex64::new(1.0, 0.0);
            for k in 0..terms {
                acc += term;
                term = term * z / (k as f64 + 1.0);
            }
            acc
        };
        Self::new(format!("exp series ({terms} terms)"), sum, sum)
    }
}

#[derive(Clone, Debug, serde::Serialize)]
pub struct CurvatureReport {
    pub max_relative_residual: f64,
    pub worst_re: f64,
    pub worst_im: f64,
    pub points: usize,
    pub step: f64,
}

/// Checks d d-bar log(1 + |w|^2) = |w'|^2 / (1 + |w|^2)^2 pointwise: the
/// left side by the 5-point Laplacian (d d-bar = Laplacian/4 in real
/// coordinates), the right side from the supplied derivative.
pub fn curvature_identity_check(
    w: &HolomorphicSample,
    h: f64,
    points: &[Complex64],
) -> Result<CurvatureReport> {
    if !(h > 0.0) || h >= 0.1 {
        return Err(Error::invalid("step must lie in (0, 0.1)"));
    }
    if points.is_empty() {
        return Err(Error::invalid("need at least one grid point"));
    }
    let u = |z: Complex64| (1.0 + w.eval(z).norm_sqr()).ln();
    let mut worst = 0.0f64;
    let mut worst_z = points[0];
    for &z in points {
        let lap = u(z + h) + u(z - h) + u(z + Complex64::new(0.0, h)) + u(z - Complex64::new(0.0, h))
            - 4.0 * u(z);
        let lhs = lap / (4.0 * h * h);
        let denom = 1.0 + w.eval(z).norm_sqr();
        let rhs = w.deriv(z).norm_sqr() / (denom * denom);
        // Relative where the curvature is of order one, absolute where it
        // degenerates: a pure quotient is ill-posed at zeros of w', where
        // the difference quotient still carries O(h^2) truncation noise.
        let rel = if lhs.abs().max(rhs.abs()) < 1e-9 {
            0.0
        } else {
            (lhs - rhs).abs() / rhs.abs().max(1.0)
        };
        if rel > worst {
            worst = rel;
            worst_z = z;
        }
    }
    Ok(CurvatureReport {
        max_relative_residual: worst,
        worst_re: worst_z.re,
        worst_im: worst_z.im,
        points: points.len(),
        step: h,
    })
}

/// Evenly spaced grid over the disc of the given radius.
pub fn disc_grid(radius: f64, per_axis: usize) -> Vec<Complex64> {
    let mut out = Vec::new();
    for a in 0..per_axis {
        for b in 0..per_axis {
            let x = radius * (2.0 * (a as f64 + 0.5) / per_axis as f64 - 1.0);
            let y = radius * (2.0 * (b as f64 + 0.5) / per_axis as f64 - 1.0);
            if x * x + y * y <= radius * radius {
                out.push(Complex64::new(x, y));
            }
        }
    }
    out
}

#[derive(Clone, Debug, serde::Serialize)]
pub struct CalculusLemmaRecord {
    pub r: f64,
    /// A_r(log g).
    pub lhs: f64,
    pub log_r: f64,
    /// log of I_r(g), the dlog-integrated area integral of g.
    pub log_integral: f64,
    /// lhs / (log r + log I_r(g)) where the denominator is meaningfully
    /// positive.
    pub ratio: Option<f64>,
}

#[derive(Clone, Debug, serde::Serialize)]
pub struct CalculusLemmaReport {
    pub records: Vec<CalculusLemmaRecord>,
    /// Largest observed ratio: the empirical constant for the inequality.
    pub empirical_constant: f64,
    /// Radii where the left side is positive but the right side has no
    /// positive slack; candidates for the exceptional set.
    pub violating_radii: Vec<f64>,
}

/// Compares A_r(log g) against log r + log I_r(g) on the grid, reporting the
/// empirical constant; radii where the comparison degenerates are reported
/// rather than silently dropped.
pub fn calculus_lemma_probe<G: Fn(Complex64) -> f64>(
    g: G,
    grid: &[f64],
    nodes: usize,
) -> Result<CalculusLemmaReport> {
    if grid.is_empty() || grid.windows(2).any(|w| w[0] >= w[1]) || grid[0] <= 0.0 {
        return Err(Error::invalid("grid must be strictly increasing and positive"));
    }
    let mut records = Vec::with_capacity(grid.len());
    let mut empirical = 0.0f64;
    let mut violating = Vec::new();
    for &r in grid {
        let lhs = circle_average(
            |z| {
                let v = g(z);
                if v > 0.0 {
                    v.ln()
                } else {
                    f64::INFINITY
                }
            },
            r,
            nodes,
        )?
        .value;
        // I_r(g) = int_0^r S(rho)/rho drho with S the cumulative area
        // integral, itself built from ring averages.
        let radial = 128usize;
        let mut s = vec![0.0f64; radial + 1];
        let mut ring = vec![0.0f64; radial + 1];
        for i in 1..=radial {
            let t = r * i as f64 / radial as f64;
            ring[i] = 2.0 * PI * t * circle_average(|z| g(z), t, nodes)?.value;
        }
        let dt = r / radial as f64;
        for i in 1..=radial {
            s[i] = s[i - 1] + 0.5 * (ring[i - 1] + ring[i]) * dt;
        }
        let mut integral = 0.0;
        for i in 1..=radial {
            let prev = if i == 1 {
                0.0
            } else {
                s[i - 1] / (r * (i - 1) as f64 / radial as f64)
            };
            integral += 0.5 * (prev + s[i] / (r * i as f64 / radial as f64)) * dt;
        }
        let log_r = r.ln();
        let log_integral = integral.ln();
        let denom = log_r + log_integral;
        let ratio = if denom > 0.1 {
            let q = lhs / denom;
            if lhs > 0.0 {
                empirical = empirical.max(q);
            }
            Some(q)
        } else {
            if lhs > 0.0 {
                violating.push(r);
            }
            None
        };
        records.push(CalculusLemmaRecord {
            r,
            lhs,
            log_r,
            log_integral,
            ratio,
        });
    }
    Ok(CalculusLemmaReport {
        records,
        empirical_constant: empirical,
        violating_radii: violating,
    })
}

/// Seeded sample points in the square [-1/2, 1/2]^2, for transformation-law
/// spot checks.
pub fn sample_points(count: usize, seed: u64) -> Vec<Complex64> {
    let mut rng = ChaCha20Rng::seed_from_u64(seed);
    (0..count)
        .map(|_| Complex64::new(rng.gen_range(-0.5..0.5), rng.gen_range(-0.5..0.5)))
        .collect()
}
