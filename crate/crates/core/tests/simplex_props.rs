mod common;

use common::multinomial_expectation;
use proptest::prelude::*;
use qi_core::rng::SplitMix64;
use qi_core::simplex::{bernstein_simplex, multi_indices, voronovskaja_defect, BarycentricPoint, SimplexBernstein};

fn random_point(rng: &mut SplitMix64, d: usize) -> BarycentricPoint<f64> {
    // Normalized exponentials: uniform on the simplex.
    let raw: Vec<f64> = (0..d).map(|_| -(1.0 - rng.next_f64()).ln()).collect();
    let s: f64 = raw.iter().sum();
    let mut c: Vec<f64> = raw.iter().map(|v| v / s).collect();
    let rest: f64 = c[1..].iter().sum();
    c[0] = 1.0 - rest;
    BarycentricPoint::new(c).unwrap()
}

#[test]
fn matches_multinomial_enumeration() {
    let mut rng = SplitMix64::new(11);
    let f = |y: &[f64]| (y[0] - 2.0 * y[1]).sin() + y[2] * y[2] * y[0];
    for n in 1..=7 {
        let x = random_point(&mut rng, 3);
        let got = bernstein_simplex(f, n, &x).unwrap();
        let oracle = multinomial_expectation(f, n, x.coords());
        assert!((got - oracle).abs() < 1e-13, "n={n}");
    }
}

#[test]
fn dimension_count() {
    for d in 2..5 {
        for n in 0..6 {
            let expect = (1..d).fold(1, |acc, k| acc * (n + k) / k);
            assert_eq!(multi_indices(d, n).len(), expect);
        }
    }
}

#[test]
fn isomorphism_on_quadratics() {
    let b = SimplexBernstein::<f64>::new(3, 2).unwrap();
    assert_eq!(b.action_matrix().unwrap().len(), 6);
    let cond = b.action_condition().unwrap();
    assert!(cond.is_finite() && cond >= 1.0);
}

#[test]
fn affine_functions_have_no_defect() {
    let x = BarycentricPoint::new(vec![0.2, 0.5, 0.3]).unwrap();
    let v = voronovskaja_defect(|y: &[f64]| 3.0 * y[0] - y[1] + 0.5, 9, &x).unwrap();
    assert!(v.defect.abs() < 1e-12 && v.target.abs() < 1e-6);
}

#[test]
fn univariate_reduction() {
    for n in [1, 2, 5, 17, 64] {
        let x = BarycentricPoint::new(vec![0.35, 0.65]).unwrap();
        let v = voronovskaja_defect(|y: &[f64]| y[0] * y[0], n, &x).unwrap();
        assert!((v.defect - 0.35 * 0.65).abs() < 1e-12);
    }
}

#[test]
fn quadratic_defect_is_exact_for_every_n() {
    // n(B_n f - f) does not depend on n for quadratics, so the gap is pure
    // finite-difference error.
    let x = BarycentricPoint::new(vec![0.3, 0.45, 0.25]).unwrap();
    for n in [32, 64, 128] {
        let v = voronovskaja_defect(|y: &[f64]| y[0] * y[0], n, &x).unwrap();
        assert!((v.defect - 0.3 * 0.7).abs() < 1e-12);
        assert!(v.gap() < 1e-6);
    }
}

#[test]
fn defect_converges_for_cubic() {
    let x = BarycentricPoint::new(vec![0.3, 0.45, 0.25]).unwrap();
    let f = |y: &[f64]| y[0].powi(3) + (y[1] - y[2]).exp();
    let gaps: Vec<f64> = [32, 64, 128]
        .iter()
        .map(|&n| voronovskaja_defect(f, n, &x).unwrap().gap())
        .collect();
    assert!(gaps[0] / gaps[1] >= 1.8 && gaps[1] / gaps[2] >= 1.8, "{gaps:?}");
}

#[test]
fn boundary_and_bad_points_rejected() {
    assert!(BarycentricPoint::new(vec![0.5, 0.6]).is_err());
    assert!(BarycentricPoint::new(vec![-0.1, 1.1]).is_err());
    let edge = BarycentricPoint::new(vec![0.0, 0.4, 0.6]).unwrap();
    assert!(voronovskaja_defect(|y: &[f64]| y[0], 4, &edge).is_err());
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(16))]

    #[test]
    fn partition_of_unity(seed in any::<u64>(), d in 2usize..5, n in 1usize..9) {
        let mut rng = SplitMix64::new(seed);
        let b = SimplexBernstein::<f64>::new(d, n).unwrap();
        for _ in 0..500 {
            let x = random_point(&mut rng, d);
            let s: f64 = b.basis(&x).unwrap().iter().sum();
            prop_assert!((s - 1.0).abs() < 1e-12);
        }
    }

    #[test]
    fn reproduces_affine(seed in any::<u64>(), d in 2usize..5, n in 1usize..9) {
        let mut rng = SplitMix64::new(seed);
        let c: Vec<f64> = (0..d).map(|_| rng.uniform(-1.0, 1.0)).collect();
        let f = |y: &[f64]| y.iter().zip(&c).map(|(a, b)| a * b).sum::<f64>();
        let x = random_point(&mut rng, d);
        prop_assert!((bernstein_simplex(f, n, &x).unwrap() - f(x.coords())).abs() < 1e-13);
    }
}
