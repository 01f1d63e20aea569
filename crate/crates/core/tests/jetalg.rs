//! Randomized laws for the jet-differential algebra: the total derivative is
//! a derivation that raises weight by one, pullback along curve germs is a
//! ring map that intertwines d with d/dzeta, and the Wronskian built inside
//! the algebra matches its univariate specializations.

mod common;

use common::{random_germ, random_jet, random_rational, series_agree, ORDER};
use hypjet_core::jet::{wronskian_poly, wronskian_series};
use hypjet_core::rational::{rat, Rational};
use hypjet_core::univar::UniPoly;
use hypjet_core::TruncatedSeries;
use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha20Rng;

fn random_series(rng: &mut ChaCha20Rng) -> TruncatedSeries<Rational> {
    let coeffs: Vec<Rational> = (0..=ORDER).map(|_| random_rational(rng)).collect();
    TruncatedSeries::from_coeffs(coeffs).unwrap()
}

#[test]
fn total_derivative_is_a_derivation() {
    let mut rng = ChaCha20Rng::seed_from_u64(71);
    for _ in 0..100 {
        let n = rng.gen_range(1..=3);
        let k = rng.gen_range(1..=3);
        let wu = rng.gen_range(1..=2);
        let wv = rng.gen_range(1..=2);
        let u = random_jet(&mut rng, n, k, wu);
        let v = random_jet(&mut rng, n, k, wv);
        let lhs = u.mul(&v).total_derivative();
        let rhs = u.total_derivative().mul(&v).add(&u.mul(&v.total_derivative()));
        assert!(lhs.sub(&rhs).is_zero(), "Leibniz failed at n={n} k={k}");
    }
}

#[test]
fn total_derivative_raises_weight_by_one() {
    let mut rng = ChaCha20Rng::seed_from_u64(72);
    for _ in 0..100 {
        let n = rng.gen_range(1..=3);
        let k = rng.gen_range(1..=3);
        let w = rng.gen_range(1..=3);
        let u = random_jet(&mut rng, n, k, w);
        if u.is_zero() {
            continue;
        }
        assert_eq!(u.weight_homogeneous(), Some(w));
        let du = u.total_derivative();
        if !du.is_zero() {
            assert_eq!(du.weight_homogeneous(), Some(w + 1));
        }
    }
}

#[test]
fn pullback_intertwines_d_with_the_series_derivative() {
    let mut rng = ChaCha20Rng::seed_from_u64(73);
    for _ in 0..100 {
        let n = rng.gen_range(1..=3);
        let k = rng.gen_range(1..=3);
        let w = rng.gen_range(1..=3);
        let u = random_jet(&mut rng, n, k, w);
        let f = random_germ(&mut rng, n);
        let pulled_du = u.total_derivative().pullback(&f).unwrap();
        let d_pulled = u.pullback(&f).unwrap().derivative().unwrap();
        assert!(
            series_agree(&pulled_du, &d_pulled),
            "commutation failed at n={n} k={k}"
        );
    }
}

#[test]
fn pullback_is_multiplicative() {
    let mut rng = ChaCha20Rng::seed_from_u64(74);
    for _ in 0..100 {
        let n = rng.gen_range(1..=3);
        let k = rng.gen_range(1..=3);
        let wu = rng.gen_range(1..=2);
        let wv = rng.gen_range(1..=2);
        let u = random_jet(&mut rng, n, k, wu);
        let v = random_jet(&mut rng, n, k, wv);
        let f = random_germ(&mut rng, n);
        let lhs = u.mul(&v).pullback(&f).unwrap();
        let rhs = u.pullback(&f).unwrap().mul(&v.pullback(&f).unwrap());
        assert!(series_agree(&lhs, &rhs), "multiplicativity failed at n={n} k={k}");
    }
}

#[test]
fn wronskian_is_alternating_and_kills_dependence() {
    let mut rng = ChaCha20Rng::seed_from_u64(75);
    for _ in 0..30 {
        let u1 = random_series(&mut rng);
        let u2 = random_series(&mut rng);
        let w12 = wronskian_series(&[u1.clone(), u2.clone()]).unwrap();
        let w21 = wronskian_series(&[u2.clone(), u1.clone()]).unwrap();
        assert!(w12.add(&w21).is_zero_through_order(), "sign flip under swap");

        // u3 = 2 u1 - 3 u2 makes the triple dependent.
        let u3 = u1.scale(&rat(2, 1)).sub(&u2.scale(&rat(3, 1)));
        let w = wronskian_series(&[u1, u2, u3]).unwrap();
        assert!(w.is_zero_through_order(), "dependent triple has zero Wronskian");
    }
}

#[test]
fn polynomial_and_series_wronskians_agree() {
    let mut rng = ChaCha20Rng::seed_from_u64(76);
    for _ in 0..40 {
        let s = rng.gen_range(2..=4);
        let entries: Vec<UniPoly<Rational>> = (0..s)
            .map(|_| {
                let coeffs: Vec<i64> = (0..=rng.gen_range(1..=6)).map(|_| rng.gen_range(-4..=4)).collect();
                UniPoly::from_i64_coeffs(&coeffs)
            })
            .collect();
        let w_poly = wronskian_poly(&entries).unwrap();
        let as_series: Vec<TruncatedSeries<Rational>> = entries
            .iter()
            .map(|p| TruncatedSeries::from_unipoly(p, ORDER))
            .collect();
        let w_series = wronskian_series(&as_series).unwrap();
        let expected = TruncatedSeries::from_unipoly(&w_poly, w_series.order());
        assert!(series_agree(&w_series, &expected));
    }
}
