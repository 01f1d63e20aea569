//! Integration tests for the value-distribution toolkit: characteristic
//! flatness under target shifts, the exact Jensen reciprocal identity,
//! theta transformation laws on a skew lattice, defect profiles, and the
//! averaged-growth probe with an unbounded weight.

mod common;

use common::{dominant_sample, log_grid};
use hypjet_core::nevanlinna::{
    calculus_lemma_probe, characteristic, counting_function, curvature_identity_check,
    defect_estimate, disc_grid, fit_slope, sample_points, EllipticModel, HolomorphicSample,
    MeromorphicSample,
};
use hypjet_core::rational::{rat_int, Rational};
use hypjet_core::univar::UniPoly;
use num_complex::Complex64;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha20Rng;

#[test]
fn characteristic_is_flat_under_target_shifts() {
    let mut rng = ChaCha20Rng::seed_from_u64(0x5eed);
    let grid = log_grid(1.0, 1000.0, 32);
    let targets = [
        Complex64::new(0.0, 0.0),
        Complex64::new(1.0, 0.0),
        Complex64::new(0.0, 1.0),
    ];
    for _ in 0..5 {
        let f = dominant_sample(&mut rng);
        let base = characteristic(&f, &grid, 256).unwrap();
        let check = base.degree_check.expect("grid reaches the degree regime");
        assert!(
            check.within_tolerance,
            "degree estimate {} vs {} for {}",
            check.observed,
            check.expected,
            f.label()
        );
        for a in targets {
            let shifted = f.shifted_reciprocal(a).unwrap();
            let moved = characteristic(&shifted, &grid, 256).unwrap();
            let xs: Vec<f64> = grid.iter().map(|r| r.ln()).collect();
            let diff: Vec<f64> = base
                .records
                .iter()
                .zip(moved.records.iter())
                .map(|(b, m)| m.t - b.t)
                .collect();
            let slope = fit_slope(&xs, &diff);
            assert!(
                slope.abs() <= 0.02,
                "difference drifts with slope {slope} for {} at target {a}",
                f.label()
            );
        }
    }
}

#[test]
fn reciprocal_characteristic_obeys_jensen_exactly() {
    // T(r, 1/g) = T(r, g) - log|g(0)| with no bounded-term slack when the
    // target is zero; only quadrature error remains.
    let cases: [(UniPoly<Rational>, UniPoly<Rational>, f64); 2] = [
        (
            UniPoly::from_i64_coeffs(&[-3, 1]),
            UniPoly::constant(rat_int(1)),
            3.0f64.ln(),
        ),
        (
            UniPoly::from_i64_coeffs(&[1, 0, 1]),
            UniPoly::from_i64_coeffs(&[-2, 1]),
            0.5f64.ln(),
        ),
    ];
    let grid = [1.4, 2.6, 7.3, 50.0];
    for (num, den, log_at_zero) in &cases {
        let g = MeromorphicSample::rational(num, den).unwrap();
        let recip = g.shifted_reciprocal(Complex64::new(0.0, 0.0)).unwrap();
        let direct = characteristic(&g, &grid, 256).unwrap();
        let flipped = characteristic(&recip, &grid, 256).unwrap();
        for (d, f) in direct.records.iter().zip(flipped.records.iter()) {
            let drop = d.t - f.t;
            assert!(
                (drop - log_at_zero).abs() <= 2e-3,
                "Jensen drop {drop} vs {log_at_zero} at r = {}",
                d.r
            );
        }
    }
}

#[test]
fn counting_function_respects_multiplicity_truncation() {
    let num = UniPoly::constant(rat_int(1));
    let den = UniPoly::from_i64_coeffs(&[1, -2, 1]); // (z-1)^2
    let f = MeromorphicSample::rational(&num, &den).unwrap();
    let full = counting_function(&f, 4.0, None).unwrap();
    let truncated = counting_function(&f, 4.0, Some(1)).unwrap();
    assert!((full - 2.0 * 4.0f64.ln()).abs() < 1e-9);
    assert!((truncated - 4.0f64.ln()).abs() < 1e-9);
}

#[test]
fn theta_laws_hold_on_a_skew_lattice() {
    let tau = Complex64::new(0.3, 1.2);
    let divisor = Complex64::new(0.25, 0.1);
    let model = EllipticModel::new(tau, divisor).unwrap();

    // The section vanishes at the divisor and at its lattice translates.
    assert!(model.theta_raw(Complex64::new(0.0, 0.0)).norm() < 1e-14);
    for shift in [Complex64::new(1.0, 0.0), tau, Complex64::new(-2.0, 0.0) + tau] {
        let z = divisor + shift;
        assert!(
            model.log_abs_theta(z) < -12.0,
            "theta fails to vanish at translate {shift}"
        );
    }

    for &p in &sample_points(60, 0x7a77) {
        let (r1, rtau) = model.transformation_residual(p);
        assert!(r1 < 1e-10, "unit shift law broken at {p}: {r1}");
        assert!(rtau < 1e-10, "tau shift law broken at {p}: {rtau}");
    }

    // The normalized section norm stays below 1 everywhere, including far
    // outside the fundamental domain.
    for &p in &sample_points(200, 0x901) {
        for scale in [1.0, 3.0, 11.0] {
            let z = p * scale;
            assert!(model.log_section_norm(z) <= 1e-9, "norm exceeds 1 at {z}");
        }
    }
}

#[test]
fn defect_profile_scales_with_the_map_speed() {
    let model = EllipticModel::square_lattice();
    let grid = [4.0, 8.0, 16.0];
    let unit = defect_estimate(&model, Complex64::new(1.0, 0.0), &grid, 128).unwrap();
    let double = defect_estimate(&model, Complex64::new(2.0, 0.0), &grid, 128).unwrap();

    for pair in unit.records.windows(2) {
        assert!(
            pair[1].ratio <= pair[0].ratio + pair[0].quad_error + pair[1].quad_error + 1e-6,
            "ratio rose from {} to {}",
            pair[0].ratio,
            pair[1].ratio
        );
    }
    assert!(unit.growth_exponent > 1.8 && unit.growth_exponent < 2.2);

    // Doubling the speed quadruples the area growth.
    let t_ratio = double.records.last().unwrap().t / unit.records.last().unwrap().t;
    assert!(
        (3.5..=4.5).contains(&t_ratio),
        "area growth ratio {t_ratio} far from 4"
    );

    assert!(defect_estimate(&model, Complex64::new(0.0, 0.0), &grid, 128).is_err());
    assert!(defect_estimate(&model, Complex64::new(1.0, 0.0), &[3.0, 2.0], 128).is_err());
}

#[test]
fn curvature_identity_survives_composition_scale() {
    // Denser check than the unit-disc sweep: a slower and a faster map on
    // a wider disc, plus the explicit worst point must stay in range.
    let half = HolomorphicSample::new(
        "half speed",
        |z| 0.5 * z,
        |_| Complex64::new(0.5, 0.0),
    );
    let grid = disc_grid(1.5, 21);
    for w in [half, HolomorphicSample::exp_series(40)] {
        let report = curvature_identity_check(&w, 1e-3, &grid).unwrap();
        assert!(
            report.max_relative_residual < 1e-4,
            "{}: residual {}",
            w.label(),
            report.max_relative_residual
        );
        assert!(report.worst_re * report.worst_re + report.worst_im * report.worst_im <= 1.5 * 1.5 + 1e-9);
    }
}

#[test]
fn averaged_growth_probe_handles_an_unbounded_weight() {
    let g = |z: Complex64| z.norm_sqr().exp();
    let grid = [2.0, 5.0, 10.0, 15.0, 20.0];
    let report = calculus_lemma_probe(g, &grid, 64).unwrap();
    assert!(report.violating_radii.is_empty());
    assert!(
        report.empirical_constant > 0.8 && report.empirical_constant < 1.2,
        "empirical constant {}",
        report.empirical_constant
    );
    // A_r(log g) = r^2 exactly for this weight.
    for rec in &report.records {
        assert!((rec.lhs - rec.r * rec.r).abs() < 1e-6 * rec.r * rec.r);
    }
}
