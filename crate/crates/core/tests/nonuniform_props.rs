mod common;

use common::{adaptive_pieces, bspline_recursive, gauss_solve, l1_vertex_enumeration};
use proptest::prelude::*;
use qi_core::lebesgue::{lebesgue_norm, GridOptions};
use qi_core::nonuniform::{gs2_weights, nearbest_nonuniform, q2star_weights, GoodmanSharma, GsOrder, NearBestDqi, Q2Star};
use qi_core::rng::{random_clamped, SplitMix64};
use qi_core::spline::{deboor_fix, greville, monomial_derivatives, KnotVector};

fn knots(seed: u64, m: usize, ratio: f64) -> KnotVector<f64> {
    let mut rng = SplitMix64::new(seed);
    let intervals = 4 + rng.below(10);
    random_clamped(&mut rng, m, intervals, ratio).unwrap()
}

fn samples(kv: &KnotVector<f64>, count: usize, seed: u64) -> Vec<f64> {
    let (a, b) = kv.domain();
    let mut rng = SplitMix64::new(!seed);
    (0..count).map(|_| rng.uniform(a, b)).collect()
}

fn quadratic(seed: u64) -> impl Fn(f64) -> f64 {
    let mut rng = SplitMix64::new(seed.rotate_left(7));
    let c = [rng.uniform(-1.0, 1.0), rng.uniform(-1.0, 1.0), rng.uniform(-1.0, 1.0)];
    move |x| c[0] + c[1] * x + c[2] * x * x
}

/// B-spline coefficients of `e_2` by collocation with the recursive basis at Greville points.
fn collocated_e2(kv: &KnotVector<f64>) -> Vec<f64> {
    let t = kv.knots();
    let m = kv.degree();
    let n = kv.num_basis();
    let (a, b) = kv.domain();
    let pts: Vec<f64> = (0..n)
        .map(|i| {
            let g = greville(kv, i).unwrap().theta;
            // shift the right end inside the half-open recursion
            g.min(b - 1e-12 * (b - a))
        })
        .collect();
    let mat: Vec<Vec<f64>> = pts
        .iter()
        .map(|&x| (0..n).map(|j| bspline_recursive(&t[j..j + m + 2], x)).collect())
        .collect();
    gauss_solve(mat, pts.iter().map(|x| x * x).collect()).unwrap()
}

#[test]
fn q2star_uniform_weights_match_collocation_solve() {
    let kv = KnotVector::clamped_uniform(3, 10, 0.0_f64, 10.0).unwrap();
    let th2 = collocated_e2(&kv);
    let th: Vec<f64> = (0..kv.num_basis()).map(|i| greville(&kv, i).unwrap().theta).collect();
    for i in 3..kv.num_basis() - 3 {
        let mat = vec![
            vec![1.0, 1.0, 1.0],
            vec![th[i - 1], th[i], th[i + 1]],
            vec![th[i - 1].powi(2), th[i].powi(2), th[i + 1].powi(2)],
        ];
        let w = gauss_solve(mat, vec![1.0, th[i], th2[i]]).unwrap();
        let (a, b, c) = q2star_weights(&kv, i).unwrap();
        assert!((a - w[0]).abs() < 1e-10 && (b - w[1]).abs() < 1e-10 && (c - w[2]).abs() < 1e-10);
        // classical uniform cubic mask
        assert!((a + 1.0 / 6.0).abs() < 1e-12 && (b - 4.0 / 3.0).abs() < 1e-12);
    }
}

#[test]
fn symmetric_knots_give_symmetric_weights() {
    let kv = KnotVector::clamped(3, &[0.0_f64, 0.7, 2.0, 3.3, 4.0]).unwrap();
    let mid = kv.num_basis() / 2;
    let (a, _, c) = q2star_weights(&kv, mid).unwrap();
    assert!((a - c).abs() < 1e-12);
}

#[test]
fn greville_second_mean_matches_collocation() {
    let kv = knots(5, 4, 100.0);
    let th2 = collocated_e2(&kv);
    for (i, v) in th2.iter().enumerate() {
        let g = greville(&kv, i).unwrap().theta2;
        assert!((g - v).abs() < 1e-9, "i={i}: {g} vs {v}");
        // de Boor-Fix ties both symbol families together
        let (lo, hi) = kv.support(i);
        let tau = 0.5 * (lo + hi);
        assert!((deboor_fix(&kv, i, tau, &monomial_derivatives(2, tau, 4)).unwrap() - g).abs() < 1e-10);
    }
}

#[test]
fn gs2_weights_match_quadrature_moments() {
    for (seed, m) in [(1u64, 3usize), (2, 4), (3, 5)] {
        let kv = knots(seed, m, 50.0);
        let t = kv.knots();
        let moments = |j: usize, r: i32| {
            let piece = &t[j + 1..=j + m];
            let width = piece[m - 1] - piece[0];
            let mass = width / (m - 1) as f64;
            adaptive_pieces(|x| x.powi(r) * bspline_recursive(piece, x), piece, 1e-15) / mass
        };
        for i in 2..kv.num_basis() - 2 {
            let (a, b, c) = gs2_weights(&kv, i).unwrap();
            let g = greville(&kv, i).unwrap();
            let targets = [1.0, g.theta, g.theta2];
            for (r, target) in targets.iter().enumerate() {
                let lhs = a * moments(i - 1, r as i32) + b * moments(i, r as i32) + c * moments(i + 1, r as i32);
                assert!((lhs - target).abs() < 1e-8, "m={m} i={i} r={r}: {lhs} vs {target}");
            }
        }
    }
}

#[test]
fn g2_kernel_matches_dense_integration() {
    let kv = knots(21, 3, 20.0);
    let g = GoodmanSharma::new(kv.clone(), GsOrder::Two).unwrap();
    let t = kv.knots().to_vec();
    let m = kv.degree();
    let nb = kv.num_basis();
    for x in samples(&kv, 5, 3) {
        let mut w = vec![0.0; nb];
        for (j, bj) in kv.basis_values(x).unwrap().iter() {
            let fj = &g.functionals()[j];
            for (&k, &c) in fj.nodes.iter().zip(&fj.weights) {
                w[k] += bj * c;
            }
        }
        let kernel = |s: f64| {
            (1..nb - 1)
                .map(|j| {
                    let piece = &t[j + 1..=j + m];
                    let mass = (piece[m - 1] - piece[0]) / (m - 1) as f64;
                    w[j] * bspline_recursive(piece, s) / mass
                })
                .sum::<f64>()
                .abs()
        };
        let oracle = w[0].abs() + w[nb - 1].abs() + adaptive_pieces(kernel, &t, 1e-13);
        let got = g.kernel_function(x).unwrap();
        assert!((got - oracle).abs() < 1e-8, "x={x}: {got} vs {oracle}");
    }
}

#[test]
fn g1_norm_is_one() {
    for seed in 0..5 {
        let g = GoodmanSharma::new(knots(seed, 3, 1e3), GsOrder::One).unwrap();
        let est = g.norm_kernel(GridOptions::with_points(256)).unwrap();
        assert!((est.value - 1.0).abs() < 1e-12);
    }
}

#[test]
fn nearbest_examples() {
    let kv = KnotVector::<f64>::uniform_integer(3, 0, 20).unwrap();
    let q0 = nearbest_nonuniform(&kv, 8, 3, 0).unwrap();
    assert!((q0.norm1() - 1.0).abs() < 1e-12);
    let f = nearbest_nonuniform(&kv, 8, 2, 3).unwrap();
    assert!((f.norm1() - 7.0 / 6.0).abs() < 1e-12);
    let expect = [-1.0 / 24.0, 0.0, 13.0 / 12.0, 0.0, -1.0 / 24.0];
    for (a, b) in f.weights.iter().zip(expect) {
        assert!((a - b).abs() < 1e-12);
    }
    assert!(nearbest_nonuniform(&kv, 1, 2, 3).is_err());
    assert!(nearbest_nonuniform(&kv, 8, 1, 3).is_err());
}

#[test]
fn nearbest_matches_vertex_enumeration() {
    for seed in 0..10 {
        let kv = knots(seed, 3, 30.0);
        let thetas: Vec<f64> = (0..kv.num_basis()).map(|i| greville(&kv, i).unwrap().theta).collect();
        let p = 2;
        for i in p..kv.num_basis() - p {
            if thetas[i - p..=i + p].windows(2).any(|w| w[1] <= w[0]) {
                continue;
            }
            let fun = nearbest_nonuniform(&kv, i, p, 3).unwrap();
            let c = thetas[i];
            let inner: Vec<f64> = kv.interior_knots(i).iter().map(|t| t - c).collect();
            let e2 = inner[0] * inner[1] + inner[0] * inner[2] + inner[1] * inner[2];
            let rhs = vec![1.0, inner.iter().sum::<f64>() / 3.0, e2 / 3.0, inner.iter().product::<f64>()];
            let mat: Vec<Vec<f64>> = (0..4)
                .map(|r| thetas[i - p..=i + p].iter().map(|th| (th - c).powi(r)).collect())
                .collect();
            let oracle = l1_vertex_enumeration(&mat, &rhs);
            assert!((fun.norm1() - oracle).abs() < 1e-8 * oracle, "seed {seed} i {i}");
        }
    }
}

#[test]
fn q2star_fallback_on_clamped_multiple_knots() {
    let kv = KnotVector::new(vec![0.0, 0.0, 0.0, 0.0, 0.5, 0.5, 0.5, 1.0, 1.0, 1.0, 1.0], 3).unwrap();
    let q = Q2Star::new(kv).unwrap();
    let p = quadratic(4);
    for k in 0..=50 {
        let x = k as f64 / 50.0;
        assert!((q.apply(&p, x).unwrap() - p(x)).abs() < 1e-10);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(20))]

    #[test]
    fn q2star_and_g2_reproduce_quadratics(seed in any::<u64>(), m in 3usize..6) {
        let kv = knots(seed, m, 1e3);
        let p = quadratic(seed);
        let q2 = Q2Star::new(kv.clone()).unwrap();
        let g2 = GoodmanSharma::new(kv.clone(), GsOrder::Two).unwrap();
        let c_q = q2.coefficients(&p).unwrap();
        let c_g = g2.coefficients(&p).unwrap();
        for x in samples(&kv, 100, seed) {
            let bv = kv.basis_values(x).unwrap();
            let vq: f64 = bv.iter().map(|(j, b)| b * c_q[j]).sum();
            let vg: f64 = bv.iter().map(|(j, b)| b * c_g[j]).sum();
            prop_assert!((vq - p(x)).abs() < 1e-9);
            prop_assert!((vg - p(x)).abs() < 1e-9);
        }
    }

    #[test]
    fn g1_reproduces_lines(seed in any::<u64>(), m in 2usize..6) {
        let kv = knots(seed, m, 1e3);
        let g1 = GoodmanSharma::new(kv.clone(), GsOrder::One).unwrap();
        let line = |x: f64| 0.3 - 1.7 * x;
        for x in samples(&kv, 100, seed) {
            prop_assert!((g1.apply(line, x).unwrap() - line(x)).abs() < 1e-9);
        }
    }

    #[test]
    fn nearbest_operator_reproduces_its_space(seed in any::<u64>(), m in 2usize..5, p in 1usize..4) {
        let kv = knots(seed, m, 100.0);
        prop_assume!(kv.num_basis() > 2 * p);
        let q = m.min(2 * p);
        let op = NearBestDqi::new(kv.clone(), p, q).unwrap();
        let (a, b) = kv.domain();
        let mut rng = SplitMix64::new(seed ^ 77);
        let coef: Vec<f64> = (0..=q).map(|_| rng.uniform(-1.0, 1.0)).collect();
        let poly = |x: f64| coef.iter().rev().fold(0.0, |acc, c| acc * (x - a) / (b - a) + c);
        for x in samples(&kv, 100, seed) {
            prop_assert!((op.apply(poly, x).unwrap() - poly(x)).abs() < 1e-9);
        }
    }

    #[test]
    fn nearbest_norm_non_increasing_in_p(seed in any::<u64>()) {
        let kv = knots(seed, 3, 10.0);
        let nb = kv.num_basis();
        let i = nb / 2;
        let mut prev = f64::INFINITY;
        for p in 2..=i.min(nb - 1 - i) {
            let Ok(f) = nearbest_nonuniform(&kv, i, p, 3) else { continue };
            prop_assert!(f.norm1() <= prev + 1e-10);
            prev = f.norm1();
        }
    }

    #[test]
    fn nu1_bounds_lebesgue(seed in any::<u64>()) {
        let kv = knots(seed, 3, 100.0);
        prop_assume!(kv.num_basis() >= 5);
        let op = NearBestDqi::new(kv, 2, 3).unwrap();
        let est = lebesgue_norm(&op, GridOptions::with_points(512)).unwrap();
        prop_assert!(est.value <= op.nu1() + 1e-10);
    }

    #[test]
    fn q2star_norm_bounded(seed in any::<u64>(), m in 3usize..7) {
        let q = Q2Star::new(knots(seed, m, 1e4)).unwrap();
        let est = lebesgue_norm(&q, GridOptions::with_points(512)).unwrap();
        prop_assert!(est.value <= ((m + 4) / 2) as f64);
        prop_assert!(est.value <= q.nu() + 1e-10);
    }
}
