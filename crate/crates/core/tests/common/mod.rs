//! Independent reference computations shared by the integration tests.
#![allow(dead_code)]

/// Minimum of `sum |lambda|` over basic solutions: all column subsets of size
/// `rows` with a nonsingular square system.
pub fn l1_vertex_enumeration(matrix: &[Vec<f64>], rhs: &[f64]) -> f64 {
    let rows = matrix.len();
    let cols = matrix[0].len();
    let mut best = f64::INFINITY;
    let mut subset: Vec<usize> = (0..rows).collect();
    loop {
        let sq: Vec<Vec<f64>> = matrix.iter().map(|r| subset.iter().map(|&c| r[c]).collect()).collect();
        if let Some(sol) = gauss_solve(sq, rhs.to_vec()) {
            best = best.min(sol.iter().map(|v| v.abs()).sum());
        }
        // next combination
        let mut k = rows;
        while k > 0 && subset[k - 1] == cols - rows + k - 1 {
            k -= 1;
        }
        if k == 0 {
            break;
        }
        subset[k - 1] += 1;
        for j in k..rows {
            subset[j] = subset[j - 1] + 1;
        }
    }
    best
}

/// Gaussian elimination with full pivoting; `None` when numerically singular.
pub fn gauss_solve(mut a: Vec<Vec<f64>>, mut b: Vec<f64>) -> Option<Vec<f64>> {
    let n = b.len();
    let scale = a.iter().flatten().fold(0.0_f64, |m, v| m.max(v.abs())).max(1e-300);
    let mut perm: Vec<usize> = (0..n).collect();
    for k in 0..n {
        let (mut pi, mut pj, mut pv) = (k, k, 0.0);
        for i in k..n {
            for j in k..n {
                if a[i][j].abs() > pv {
                    (pi, pj, pv) = (i, j, a[i][j].abs());
                }
            }
        }
        if pv < 1e-11 * scale {
            return None;
        }
        a.swap(k, pi);
        b.swap(k, pi);
        for row in a.iter_mut() {
            row.swap(k, pj);
        }
        perm.swap(k, pj);
        for i in k + 1..n {
            let f = a[i][k] / a[k][k];
            for j in k..n {
                a[i][j] -= f * a[k][j];
            }
            b[i] -= f * b[k];
        }
    }
    let mut y = vec![0.0; n];
    for k in (0..n).rev() {
        let s: f64 = (k + 1..n).map(|j| a[k][j] * y[j]).sum();
        y[k] = (b[k] - s) / a[k][k];
    }
    let mut x = vec![0.0; n];
    for (k, &p) in perm.iter().enumerate() {
        x[p] = y[k];
    }
    Some(x)
}

/// Centered cardinal B-spline from the truncated-power form of the repeated
/// convolution of the unit box: `1/(k-1)! sum_j (-1)^j C(k,j) (x + k/2 - j)_+^(k-1)`.
pub fn cardinal_truncated_power(order: usize, x: f64) -> f64 {
    let k = order as i32;
    if x.abs() >= order as f64 / 2.0 {
        return 0.0;
    }
    let mut acc = 0.0;
    let mut binom = 1.0;
    for j in 0..=k {
        let y = x + k as f64 / 2.0 - j as f64;
        if y > 0.0 {
            let sign = if j % 2 == 0 { 1.0 } else { -1.0 };
            acc += sign * binom * y.powi(k - 1);
        }
        binom = binom * (k - j) as f64 / (j + 1) as f64;
    }
    acc / (1..k).fold(1.0, |f, v| f * v as f64)
}

/// Uncentered cardinal B-spline on knots `0..=order` by the truncated-power form.
pub fn cardinal_uncentered(order: usize, x: f64) -> f64 {
    cardinal_truncated_power(order, x - order as f64 / 2.0)
}

/// Composite three-point Gauss rule with `pieces` subintervals. Open, so
/// half-open indicator conventions at the ends do not matter.
pub fn gauss3<F: Fn(f64) -> f64>(f: F, a: f64, b: f64, pieces: usize) -> f64 {
    let h = (b - a) / pieces as f64;
    let r = (0.6_f64).sqrt() / 2.0;
    let mut s = 0.0;
    for k in 0..pieces {
        let c = a + h * (k as f64 + 0.5);
        s += 5.0 * f(c - r * h) + 8.0 * f(c) + 5.0 * f(c + r * h);
    }
    s * h / 18.0
}

/// Integral over `[a, b]` by interval halving until two passes agree.
pub fn adaptive<F: Fn(f64) -> f64>(f: F, a: f64, b: f64, tol: f64) -> f64 {
    let mut pieces = 16;
    let mut prev = gauss3(&f, a, b, pieces);
    loop {
        pieces *= 2;
        let next = gauss3(&f, a, b, pieces);
        if (next - prev).abs() < tol || pieces > 1 << 20 {
            return next;
        }
        prev = next;
    }
}

/// `adaptive` applied on each piece between consecutive distinct breakpoints.
pub fn adaptive_pieces<F: Fn(f64) -> f64>(f: F, breaks: &[f64], tol: f64) -> f64 {
    breaks
        .windows(2)
        .filter(|w| w[1] > w[0])
        .map(|w| adaptive(&f, w[0], w[1], tol))
        .sum()
}

/// Single B-spline by the Cox–de Boor recursion on its own knots (no table sharing).
pub fn bspline_recursive(knots: &[f64], x: f64) -> f64 {
    if knots.len() == 2 {
        return if x >= knots[0] && x < knots[1] { 1.0 } else { 0.0 };
    }
    let d = knots.len() - 2;
    let mut v = 0.0;
    if knots[d] > knots[0] {
        v += (x - knots[0]) / (knots[d] - knots[0]) * bspline_recursive(&knots[..knots.len() - 1], x);
    }
    if knots[d + 1] > knots[1] {
        v += (knots[d + 1] - x) / (knots[d + 1] - knots[1]) * bspline_recursive(&knots[1..], x);
    }
    v
}

/// Pólya urn probabilities `P(k successes in n draws)` with start `x`, increment `a`:
/// the Stancu basis evaluated by dynamic programming over draw sequences.
pub fn polya_urn(n: usize, a: f64, x: f64) -> Vec<f64> {
    let mut dist = vec![1.0];
    for draws in 0..n {
        let mut next = vec![0.0; draws + 2];
        for (s, &p) in dist.iter().enumerate() {
            let f = draws - s;
            let ps = (x + s as f64 * a) / (1.0 + draws as f64 * a);
            let pf = (1.0 - x + f as f64 * a) / (1.0 + draws as f64 * a);
            next[s + 1] += p * ps;
            next[s] += p * pf;
        }
        dist = next;
    }
    dist
}

/// Zwart–Powell element at `(x, y)`: the unit-square indicator convolved along
/// `(1,1)` and `(-1,1)`. The inner convolution is an interval length, the outer
/// one is integrated numerically.
pub fn zwart_powell_convolution(x: f64, y: f64) -> f64 {
    let overlap = |b: f64| {
        let hi = 1.0_f64.min(x + b).min(y - b);
        let lo = 0.0_f64.max(x + b - 1.0).max(y - b - 1.0);
        (hi - lo).max(0.0)
    };
    let mut breaks = vec![0.0, 1.0];
    for c in [-x, 1.0 - x, 2.0 - x, y, y - 1.0, y - 2.0, (y - x) / 2.0, (y - x - 1.0) / 2.0, (y - x + 1.0) / 2.0] {
        if c > 0.0 && c < 1.0 {
            breaks.push(c);
        }
    }
    breaks.sort_by(f64::total_cmp);
    adaptive_pieces(overlap, &breaks, 1e-14)
}

/// Three-direction box spline with directions `(1,0), (0,1), (1,1)` doubled:
/// `int hat(s) hat(x - s) hat(y - s) ds` with `hat` the linear B-spline on `[0, 2]`.
pub fn three_direction_convolution(x: f64, y: f64) -> f64 {
    let hat = |t: f64| cardinal_uncentered(2, t);
    let mut breaks: Vec<f64> = vec![0.0, 1.0, 2.0];
    for c in [x - 2.0, x - 1.0, x, y - 2.0, y - 1.0, y] {
        if c > 0.0 && c < 2.0 {
            breaks.push(c);
        }
    }
    breaks.sort_by(f64::total_cmp);
    adaptive_pieces(|s| hat(s) * hat(x - s) * hat(y - s), &breaks, 1e-14)
}

/// `E[f(K/n)]` for `K ~ Multinomial(n, x)`, with the distribution built draw by draw.
pub fn multinomial_expectation<F: Fn(&[f64]) -> f64>(f: F, n: usize, x: &[f64]) -> f64 {
    use std::collections::BTreeMap;
    let d = x.len();
    let mut dist: BTreeMap<Vec<usize>, f64> = BTreeMap::new();
    dist.insert(vec![0; d], 1.0);
    for _ in 0..n {
        let mut next = BTreeMap::new();
        for (counts, p) in &dist {
            for (i, &xi) in x.iter().enumerate() {
                let mut c = counts.clone();
                c[i] += 1;
                *next.entry(c).or_insert(0.0) += p * xi;
            }
        }
        dist = next;
    }
    dist.iter()
        .map(|(counts, p)| {
            let y: Vec<f64> = counts.iter().map(|&c| c as f64 / n as f64).collect();
            p * f(&y)
        })
        .sum()
}
