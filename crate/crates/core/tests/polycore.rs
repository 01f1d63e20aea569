//! Cross-checks of the exact kernel: ring laws on randomized polynomials,
//! the gcd multiplicity law against factored constructions, series identities,
//! and containment of exact arithmetic inside ball enclosures.

use hypjet_core::ball::ComplexBall;
use hypjet_core::rational::{rat, rat_int, Rational};
use hypjet_core::univar::UniPoly;
use hypjet_core::{Polynomial, TruncatedSeries, VarSet};
use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha20Rng;

fn random_rational(rng: &mut ChaCha20Rng) -> Rational {
    rat(rng.gen_range(-6..=6), rng.gen_range(1..=4))
}

fn random_poly(rng: &mut ChaCha20Rng, vars: &VarSet, terms: usize, max_deg: u16) -> Polynomial<Rational> {
    let mut p = Polynomial::zero(vars);
    for _ in 0..terms {
        let mono: Vec<Polynomial<Rational>> = (0..vars.len())
            .map(|j| Polynomial::var(vars, j).pow(rng.gen_range(0..=max_deg) as usize))
            .collect();
        let mut t = Polynomial::constant(vars, random_rational(rng));
        for f in &mono {
            t = t.mul(f);
        }
        p = p.add(&t);
    }
    p
}

#[test]
fn polynomial_ring_laws_hold_on_random_triples() {
    let vars = VarSet::xs(3);
    let mut rng = ChaCha20Rng::seed_from_u64(41);
    for _ in 0..50 {
        let a = random_poly(&mut rng, &vars, 4, 3);
        let b = random_poly(&mut rng, &vars, 4, 3);
        let c = random_poly(&mut rng, &vars, 4, 3);
        let left = a.mul(&b.add(&c));
        let right = a.mul(&b).add(&a.mul(&c));
        assert!(left.sub(&right).is_zero(), "distributivity failed");
        let assoc = a.mul(&b).mul(&c).sub(&a.mul(&b.mul(&c)));
        assert!(assoc.is_zero(), "associativity failed");
        assert!(a.mul(&b).sub(&b.mul(&a)).is_zero(), "commutativity failed");
    }
}

#[test]
fn evaluation_is_a_ring_homomorphism() {
    let vars = VarSet::xs(3);
    let mut rng = ChaCha20Rng::seed_from_u64(42);
    for _ in 0..30 {
        let a = random_poly(&mut rng, &vars, 4, 3);
        let b = random_poly(&mut rng, &vars, 4, 3);
        let point: Vec<Rational> = (0..3).map(|_| random_rational(&mut rng)).collect();
        let lhs = a.mul(&b).eval(&point).unwrap();
        let rhs = a.eval(&point).unwrap() * b.eval(&point).unwrap();
        assert_eq!(lhs, rhs);
    }
}

#[test]
fn gcd_with_derivative_counts_repeated_roots() {
    // For p = prod (x - r_i)^{m_i} with distinct roots, deg gcd(p, p') is
    // exactly sum (m_i - 1): the multiplicity law, on factored input the
    // gcd routine never sees.
    let mut rng = ChaCha20Rng::seed_from_u64(43);
    for _ in 0..60 {
        let mut roots: Vec<i64> = Vec::new();
        let mut mults: Vec<usize> = Vec::new();
        let mut degree = 0usize;
        while degree < 8 {
            let r = rng.gen_range(-4..=4);
            if roots.contains(&r) {
                continue;
            }
            let m = rng.gen_range(1..=3).min(8 - degree);
            roots.push(r);
            mults.push(m);
            degree += m;
            if rng.gen_bool(0.3) {
                break;
            }
        }
        let mut p = UniPoly::from_i64_coeffs(&[rng.gen_range(1..=3)]);
        for (r, m) in roots.iter().zip(&mults) {
            p = p.mul(&UniPoly::from_i64_coeffs(&[-r, 1]).pow(*m));
        }
        let g = p.gcd(&p.derivative());
        let expected: usize = mults.iter().map(|m| m - 1).sum();
        assert_eq!(g.degree(), Some(expected), "roots {roots:?} mults {mults:?}");

        // Yun's decomposition must reassemble the same polynomial.
        let mut rebuilt = UniPoly::from_i64_coeffs(&[1]);
        for (f, m) in p.squarefree_decomposition() {
            rebuilt = rebuilt.mul(&f.pow(m));
        }
        assert!(rebuilt.sub(&p.monic()).is_zero());
    }
}

#[test]
fn resultant_vanishes_exactly_on_shared_roots() {
    let mut rng = ChaCha20Rng::seed_from_u64(44);
    for _ in 0..40 {
        let shared = rng.gen_range(-3..=3);
        let a = UniPoly::from_i64_coeffs(&[-shared, 1])
            .mul(&UniPoly::from_i64_coeffs(&[rng.gen_range(1..=5), 1]));
        let b = UniPoly::from_i64_coeffs(&[-shared, 1])
            .mul(&UniPoly::from_i64_coeffs(&[rng.gen_range(-5..=-1), 1]));
        assert_eq!(a.resultant(&b), rat_int(0));

        let c = UniPoly::from_i64_coeffs(&[-(shared + 7), 1]);
        let d = UniPoly::from_i64_coeffs(&[-shared, 1]);
        assert_ne!(c.resultant(&d), rat_int(0));
    }
}

#[test]
fn series_exponential_turns_sums_into_products() {
    let order = 24;
    let a = rat(2, 3);
    let b = rat(-5, 7);
    let lhs = TruncatedSeries::exp_linear(&a, order).mul(&TruncatedSeries::exp_linear(&b, order));
    let rhs = TruncatedSeries::exp_linear(&(a + b), order);
    assert!(lhs.sub(&rhs).is_zero_through_order());
}

#[test]
fn series_reciprocal_and_composition_roundtrip() {
    let order = 20;
    let mut rng = ChaCha20Rng::seed_from_u64(45);
    for _ in 0..25 {
        let mut coeffs: Vec<Rational> = (0..=order).map(|_| random_rational(&mut rng)).collect();
        coeffs[0] = rat_int(1) + random_rational(&mut rng) * random_rational(&mut rng);
        if coeffs[0] == rat_int(0) {
            coeffs[0] = rat_int(1);
        }
        let u = TruncatedSeries::from_coeffs(coeffs).unwrap();
        let one = u.mul(&u.recip().unwrap());
        assert!(one.sub(&TruncatedSeries::one(order)).is_zero_through_order());

        let mut inner: Vec<Rational> = (0..=order).map(|_| random_rational(&mut rng)).collect();
        inner[0] = rat_int(0);
        let g = TruncatedSeries::from_coeffs(inner).unwrap();
        // Composition respects products: (u*u) o g = (u o g)*(u o g).
        let lhs = u.mul(&u).compose(&g).unwrap();
        let rhs = u.compose(&g).unwrap().mul(&u.compose(&g).unwrap());
        assert!(lhs.sub(&rhs).is_zero_through_order());
    }
}

#[test]
fn ball_arithmetic_contains_the_exact_value() {
    let mut rng = ChaCha20Rng::seed_from_u64(46);
    for prec in [64usize, 128, 256] {
        for _ in 0..20 {
            let parts: Vec<Rational> = (0..6).map(|_| random_rational(&mut rng)).collect();
            let x = ComplexBall::from_rational_pair(&parts[0], &parts[1], prec);
            let y = ComplexBall::from_rational_pair(&parts[2], &parts[3], prec);
            let z = ComplexBall::from_rational_pair(&parts[4], &parts[5], prec);
            let result = x.mul(&y).add(&z).mul(&x.sub(&y));

            // Same chain over exact complex rationals, split into re/im.
            let (xr, xi) = (parts[0].clone(), parts[1].clone());
            let (yr, yi) = (parts[2].clone(), parts[3].clone());
            let (zr, zi) = (parts[4].clone(), parts[5].clone());
            let (mr, mi) = (&xr * &yr - &xi * &yi, &xr * &yi + &xi * &yr);
            let (sr, si) = (mr + &zr, mi + &zi);
            let (dr, di) = (&xr - &yr, &xi - &yi);
            let (fr, fi) = (&sr * &dr - &si * &di, &sr * &di + &si * &dr);
            assert!(
                result.contains_rational(&fr, &fi),
                "exact value escaped the enclosure at {prec} bits"
            );
        }
    }
}

#[test]
fn certified_binomial_roots_satisfy_their_equation() {
    use hypjet_core::ball::certified_binomial_roots;
    for (k, a) in [(3usize, rat(2, 1)), (5, rat(-3, 4)), (9, rat(7, 2))] {
        let roots = certified_binomial_roots(k, &a, 256).unwrap();
        assert_eq!(roots.len(), k);
        let target = ComplexBall::from_rational(&a, 256);
        for w in &roots {
            let residual = w.powi(k).sub(&target);
            assert!(
                !residual.definitely_nonzero(),
                "root ball fails its defining equation"
            );
        }
    }
}
