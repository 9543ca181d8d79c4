mod common;

use common::{three_direction_convolution, zwart_powell_convolution};
use proptest::prelude::*;
use qi_core::boxspline::{apply_mask_qi, lebesgue_norm_2d, nearbest_mask, BoxSpline, Mesh};
use qi_core::lebesgue::GridOptions;
use std::sync::OnceLock;

fn three() -> &'static BoxSpline<f64> {
    static S: OnceLock<BoxSpline<f64>> = OnceLock::new();
    S.get_or_init(|| BoxSpline::new(Mesh::ThreeDir).unwrap())
}

fn four() -> &'static BoxSpline<f64> {
    static S: OnceLock<BoxSpline<f64>> = OnceLock::new();
    S.get_or_init(|| BoxSpline::new(Mesh::FourDir).unwrap())
}

fn phi(mesh: Mesh) -> &'static BoxSpline<f64> {
    match mesh {
        Mesh::ThreeDir => three(),
        Mesh::FourDir => four(),
    }
}

#[test]
fn three_direction_matches_convolution() {
    for i in 0..=16 {
        for j in 0..=16 {
            let (x, y) = (i as f64 * 0.19 + 0.01, j as f64 * 0.19 + 0.02);
            let got = three().eval(x, y);
            let oracle = three_direction_convolution(x, y);
            assert!((got - oracle).abs() < 1e-10, "({x}, {y}): {got} vs {oracle}");
        }
    }
}

#[test]
fn four_direction_matches_convolution() {
    for i in 0..=16 {
        for j in 0..=16 {
            let (x, y) = (-1.0 + i as f64 * 0.19 + 0.01, j as f64 * 0.19 + 0.02);
            let got = four().eval(x, y);
            let oracle = zwart_powell_convolution(x, y);
            assert!((got - oracle).abs() < 1e-10, "({x}, {y}): {got} vs {oracle}");
        }
    }
    assert!((four().eval(0.5, 1.5) - 0.5).abs() < 1e-12);
}

#[test]
fn partition_of_unity() {
    for mesh in [Mesh::ThreeDir, Mesh::FourDir] {
        let p = phi(mesh);
        for k in 0..50 {
            let (x, y) = (0.013 * k as f64, 0.021 * k as f64 % 1.0);
            let s: f64 = (-6..=6)
                .flat_map(|a| (-6..=6).map(move |b| (a, b)))
                .map(|(a, b)| p.eval_centered(x - a as f64, y - b as f64))
                .sum();
            assert!((s - 1.0).abs() < 1e-12);
        }
    }
}

/// Highest total degree `d` such that the QI reproduces every monomial of degree `<= d`.
fn reproduced_degree(mesh: Mesh) -> usize {
    let mask = nearbest_mask::<f64>(mesh, 1).unwrap();
    let pts = [(0.13, 0.71), (0.5, 0.25), (0.9, 0.6), (0.37, 0.37)];
    let mut degree = 0;
    for d in 0..=6 {
        for a in 0..=d {
            let b = d - a;
            let f = |x: f64, y: f64| x.powi(a as i32) * y.powi(b as i32);
            for &(x, y) in &pts {
                let got = apply_mask_qi(&mask, phi(mesh), f, x, y).unwrap();
                if (got - f(x, y)).abs() > 1e-9 {
                    return degree;
                }
            }
        }
        degree = d;
    }
    degree
}

#[test]
fn reproduced_polynomial_degree() {
    assert_eq!(reproduced_degree(Mesh::ThreeDir), 3);
    assert_eq!(reproduced_degree(Mesh::FourDir), 2);
}

#[test]
fn norms_bounded_and_decreasing() {
    for mesh in [Mesh::ThreeDir, Mesh::FourDir] {
        let mut prev = f64::INFINITY;
        for s in 1..=4 {
            let mask = nearbest_mask::<f64>(mesh, s).unwrap();
            assert!((mask.weight_sum() - 1.0).abs() < 1e-15);
            assert!((mask.nu() - (1.0 + 1.0 / (s * s) as f64)).abs() < 1e-14);
            let est = lebesgue_norm_2d(&mask, phi(mesh), GridOptions::with_points(48)).unwrap();
            assert!(est.value <= mask.nu() + 1e-12);
            assert!(est.value <= prev + 1e-12);
            prev = est.value;
        }
    }
}

#[test]
fn mesh_names_parse() {
    for mesh in [Mesh::ThreeDir, Mesh::FourDir] {
        assert_eq!(mesh.to_string().parse::<Mesh>().unwrap(), mesh);
    }
    assert!("five_dir".parse::<Mesh>().is_err());
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn spline_symmetry(x in -3.0f64..3.0, y in -3.0f64..3.0) {
        for mesh in [Mesh::ThreeDir, Mesh::FourDir] {
            let p = phi(mesh);
            let v = p.eval_centered(x, y);
            for [a, b, c, d] in mesh.symmetries() {
                let (sx, sy) = (a as f64 * x + b as f64 * y, c as f64 * x + d as f64 * y);
                prop_assert!((p.eval_centered(sx, sy) - v).abs() < 1e-12);
            }
        }
    }

    #[test]
    fn qi_commutes_with_symmetries(x in -1.0f64..1.0, y in -1.0f64..1.0, s in 1usize..4) {
        let f = |u: f64, v: f64| (0.7 * u - 0.3 * v).sin() + 0.2 * u * v * v;
        for mesh in [Mesh::ThreeDir, Mesh::FourDir] {
            let mask = nearbest_mask::<f64>(mesh, s).unwrap();
            for [a, b, c, d] in mesh.symmetries() {
                let (a, b, c, d) = (a as f64, b as f64, c as f64, d as f64);
                let moved = |u: f64, v: f64| f(a * u + b * v, c * u + d * v);
                let lhs = apply_mask_qi(&mask, phi(mesh), moved, x, y).unwrap();
                let rhs = apply_mask_qi(&mask, phi(mesh), f, a * x + b * y, c * x + d * y).unwrap();
                prop_assert!((lhs - rhs).abs() < 1e-10);
            }
        }
    }
}
