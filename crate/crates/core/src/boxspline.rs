//! Bivariate box splines on the three- and four-direction meshes and the
//! near-best discrete quasi-interpolants built on their integer translates.
//!
//! Values come from the recurrence
//! `(n - 2) M_X(x) = sum_ξ [t_ξ M_{X\ξ}(x) + (1 - t_ξ) M_{X\ξ}(x - ξ)]`, `x = X t`,
//! evaluated at points inside mesh triangles and fitted exactly by one
//! polynomial per triangle.

use std::fmt;
use std::str::FromStr;

use crate::error::{QiError, Result};
use crate::lebesgue::GridOptions;
use crate::linalg::solve;
use crate::scalar::Real;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Mesh {
    /// C² quartic: directions (1,0), (0,1), (1,1), each twice.
    ThreeDir,
    /// C¹ quadratic Zwart–Powell element: (1,0), (0,1), (1,1), (-1,1).
    FourDir,
}

impl Mesh {
    pub fn directions(&self) -> Vec<(i64, i64)> {
        match self {
            Mesh::ThreeDir => vec![(1, 0), (1, 0), (0, 1), (0, 1), (1, 1), (1, 1)],
            Mesh::FourDir => vec![(1, 0), (0, 1), (1, 1), (-1, 1)],
        }
    }

    pub fn degree(&self) -> usize {
        self.directions().len() - 2
    }

    /// Stencil vertices of the unit hexagon (three_dir) or lozenge (four_dir).
    pub fn vertices(&self) -> Vec<(i64, i64)> {
        match self {
            Mesh::ThreeDir => vec![(1, 0), (1, 1), (0, 1), (-1, 0), (-1, -1), (0, -1)],
            Mesh::FourDir => vec![(1, 0), (0, 1), (-1, 0), (0, -1)],
        }
    }

    /// Linear maps (integer matrices, row-major) preserving the direction set.
    pub fn symmetries(&self) -> Vec<[i64; 4]> {
        let mut out = vec![[1, 0, 0, 1], [-1, 0, 0, -1], [0, 1, 1, 0], [0, -1, -1, 0]];
        match self {
            Mesh::ThreeDir => {
                // rotation by 60 degrees in mesh coordinates and its powers
                out.push([1, -1, 1, 0]);
                out.push([0, -1, 1, -1]);
                out.push([-1, 1, -1, 0]);
                out.push([0, 1, -1, 1]);
            }
            Mesh::FourDir => {
                out.push([0, -1, 1, 0]);
                out.push([0, 1, -1, 0]);
                out.push([1, 0, 0, -1]);
                out.push([-1, 0, 0, 1]);
            }
        }
        out
    }

    fn triangles(&self) -> usize {
        match self {
            Mesh::ThreeDir => 2,
            Mesh::FourDir => 4,
        }
    }

    /// Triangle index of local cell coordinates `(u, v)` in `[0, 1]^2`.
    fn triangle<T: Real>(&self, u: T, v: T) -> usize {
        match self {
            Mesh::ThreeDir => usize::from(v > u),
            Mesh::FourDir => {
                let d1 = v > u;
                let d2 = u + v > T::one();
                match (d1, d2) {
                    (false, false) => 0,
                    (false, true) => 1,
                    (true, true) => 2,
                    (true, false) => 3,
                }
            }
        }
    }

    fn triangle_vertices(&self, k: usize) -> [(f64, f64); 3] {
        match (self, k) {
            (Mesh::ThreeDir, 0) => [(0.0, 0.0), (1.0, 0.0), (1.0, 1.0)],
            (Mesh::ThreeDir, _) => [(0.0, 0.0), (1.0, 1.0), (0.0, 1.0)],
            (Mesh::FourDir, 0) => [(0.0, 0.0), (1.0, 0.0), (0.5, 0.5)],
            (Mesh::FourDir, 1) => [(1.0, 0.0), (1.0, 1.0), (0.5, 0.5)],
            (Mesh::FourDir, 2) => [(1.0, 1.0), (0.0, 1.0), (0.5, 0.5)],
            (Mesh::FourDir, _) => [(0.0, 1.0), (0.0, 0.0), (0.5, 0.5)],
        }
    }
}

impl fmt::Display for Mesh {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Mesh::ThreeDir => "three_dir",
            Mesh::FourDir => "four_dir",
        })
    }
}

impl FromStr for Mesh {
    type Err = QiError;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "three_dir" | "three" | "3" => Ok(Mesh::ThreeDir),
            "four_dir" | "four" | "4" => Ok(Mesh::FourDir),
            other => Err(QiError::Parse(format!("unknown mesh '{other}', expected three_dir or four_dir"))),
        }
    }
}

/// Box spline value by the recurrence; `x` must avoid mesh lines.
fn box_recursive(dirs: &[(f64, f64)], x: (f64, f64)) -> f64 {
    let n = dirs.len();
    if n == 2 {
        let (a, b) = (dirs[0], dirs[1]);
        let det = a.0 * b.1 - a.1 * b.0;
        if det.abs() < 1e-12 {
            return 0.0;
        }
        let t0 = (x.0 * b.1 - x.1 * b.0) / det;
        let t1 = (a.0 * x.1 - a.1 * x.0) / det;
        return if (0.0..1.0).contains(&t0) && (0.0..1.0).contains(&t1) { 1.0 / det.abs() } else { 0.0 };
    }
    let (mut g00, mut g01, mut g11) = (0.0, 0.0, 0.0);
    for d in dirs {
        g00 += d.0 * d.0;
        g01 += d.0 * d.1;
        g11 += d.1 * d.1;
    }
    let det = g00 * g11 - g01 * g01;
    if det.abs() < 1e-12 {
        return 0.0;
    }
    let y = ((g11 * x.0 - g01 * x.1) / det, (g00 * x.1 - g01 * x.0) / det);
    let mut acc = 0.0;
    for k in 0..n {
        let xi = dirs[k];
        let t = xi.0 * y.0 + xi.1 * y.1;
        let rest: Vec<(f64, f64)> = dirs.iter().enumerate().filter(|&(j, _)| j != k).map(|(_, &d)| d).collect();
        acc += t * box_recursive(&rest, x) + (1.0 - t) * box_recursive(&rest, (x.0 - xi.0, x.1 - xi.1));
    }
    acc / (n - 2) as f64
}

fn monomials(degree: usize) -> Vec<(i32, i32)> {
    let mut out = Vec::new();
    for total in 0..=degree as i32 {
        for a in (0..=total).rev() {
            out.push((a, total - a));
        }
    }
    out
}

/// Tabulated box spline: one polynomial in local cell coordinates per mesh triangle.
#[derive(Debug, Clone)]
pub struct BoxSpline<T> {
    mesh: Mesh,
    degree: usize,
    center: (T, T),
    origin: (i64, i64),
    cells: (usize, usize),
    powers: Vec<(i32, i32)>,
    polys: Vec<Vec<T>>,
}

impl<T: Real> BoxSpline<T> {
    pub fn new(mesh: Mesh) -> Result<Self> {
        let dirs = mesh.directions();
        let degree = mesh.degree();
        let fdirs: Vec<(f64, f64)> = dirs.iter().map(|&(a, b)| (a as f64, b as f64)).collect();
        let (mut xmin, mut xmax, mut ymin, mut ymax) = (0i64, 0i64, 0i64, 0i64);
        for &(a, b) in &dirs {
            if a < 0 { xmin += a } else { xmax += a }
            if b < 0 { ymin += b } else { ymax += b }
        }
        let sx: i64 = dirs.iter().map(|d| d.0).sum();
        let sy: i64 = dirs.iter().map(|d| d.1).sum();
        let center = (T::lit(sx as f64 / 2.0), T::lit(sy as f64 / 2.0));
        let cells = ((xmax - xmin) as usize, (ymax - ymin) as usize);
        let powers = monomials(degree);
        // principal lattice of degree d, shrunk toward the centroid
        let lattice: Vec<[f64; 3]> = {
            let mut out = Vec::new();
            for i in 0..=degree {
                for j in 0..=degree - i {
                    let k = degree - i - j;
                    let d = degree.max(1) as f64;
                    out.push([i as f64 / d, j as f64 / d, k as f64 / d]);
                }
            }
            out
        };
        let mut polys = Vec::with_capacity(cells.0 * cells.1 * mesh.triangles());
        for cy in 0..cells.1 {
            for cx in 0..cells.0 {
                let (ox, oy) = ((xmin + cx as i64) as f64, (ymin + cy as i64) as f64);
                for tri in 0..mesh.triangles() {
                    let v = mesh.triangle_vertices(tri);
                    let g = ((v[0].0 + v[1].0 + v[2].0) / 3.0, (v[0].1 + v[1].1 + v[2].1) / 3.0);
                    let mut rows = Vec::with_capacity(lattice.len());
                    let mut vals = Vec::with_capacity(lattice.len());
                    for b in &lattice {
                        let p = (
                            b[0] * v[0].0 + b[1] * v[1].0 + b[2] * v[2].0,
                            b[0] * v[0].1 + b[1] * v[1].1 + b[2] * v[2].1,
                        );
                        let q = (g.0 + 0.7 * (p.0 - g.0), g.1 + 0.7 * (p.1 - g.1));
                        rows.push(powers.iter().map(|&(a, c)| q.0.powi(a) * q.1.powi(c)).collect::<Vec<f64>>());
                        vals.push(box_recursive(&fdirs, (ox + q.0, oy + q.1)));
                    }
                    let coef = solve(&rows, &vals)
                        .ok_or_else(|| QiError::Undefined("box spline fit is singular".into()))?;
                    polys.push(coef.into_iter().map(|c| T::lit(if c.abs() < 1e-13 { 0.0 } else { c })).collect());
                }
            }
        }
        Ok(BoxSpline {
            mesh,
            degree,
            center,
            origin: (xmin, ymin),
            cells,
            powers,
            polys,
        })
    }

    pub fn mesh(&self) -> Mesh {
        self.mesh
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    /// Center of symmetry of the support.
    pub fn center(&self) -> (T, T) {
        self.center
    }

    /// Box spline with its support in its natural position.
    pub fn eval(&self, x: T, y: T) -> T {
        let gx = x - T::lit(self.origin.0 as f64);
        let gy = y - T::lit(self.origin.1 as f64);
        let (w, h) = (T::from_usize_lossy(self.cells.0), T::from_usize_lossy(self.cells.1));
        if !(gx >= T::zero() && gx <= w && gy >= T::zero() && gy <= h) {
            return T::zero();
        }
        let cx = gx.floor().to_usize().unwrap_or(0).min(self.cells.0 - 1);
        let cy = gy.floor().to_usize().unwrap_or(0).min(self.cells.1 - 1);
        let u = gx - T::from_usize_lossy(cx);
        let v = gy - T::from_usize_lossy(cy);
        let tri = self.mesh.triangle(u, v);
        let coef = &self.polys[(cy * self.cells.0 + cx) * self.mesh.triangles() + tri];
        let mut acc = T::zero();
        for (&(a, b), &c) in self.powers.iter().zip(coef) {
            if c != T::zero() {
                acc += c * u.powi(a) * v.powi(b);
            }
        }
        acc
    }

    /// Translate centered at the origin.
    pub fn eval_centered(&self, x: T, y: T) -> T {
        self.eval(x + self.center.0, y + self.center.1)
    }

    /// Integer offsets `k` where the centered spline can be nonzero near `(x, y)`.
    fn active(&self, x: T, y: T) -> (std::ops::RangeInclusive<i64>, std::ops::RangeInclusive<i64>) {
        let rx = T::from_usize_lossy(self.cells.0) / T::lit(2.0);
        let ry = T::from_usize_lossy(self.cells.1) / T::lit(2.0);
        let (x0, x1) = ((x - rx).floor().to_i64().unwrap(), (x + rx).ceil().to_i64().unwrap());
        let (y0, y1) = ((y - ry).floor().to_i64().unwrap(), (y + ry).ceil().to_i64().unwrap());
        (x0..=x1, y0..=y1)
    }
}

/// Near-best coefficient functional on the hexagon or lozenge of size `s`.
#[derive(Debug, Clone, PartialEq)]
pub struct BoxSplineMask<T> {
    pub mesh: Mesh,
    pub s: usize,
    pub stencil: Vec<((i64, i64), T)>,
}

impl<T: Real> BoxSplineMask<T> {
    pub fn nu(&self) -> T {
        self.stencil.iter().map(|(_, w)| w.abs()).sum()
    }

    pub fn weight_sum(&self) -> T {
        self.stencil.iter().map(|(_, w)| *w).sum()
    }

    /// `sum_o w_o f(k + o)`.
    pub fn coefficient<F: Fn(T, T) -> T>(&self, f: &F, k: (i64, i64)) -> T {
        self.stencil
            .iter()
            .map(|&((a, b), w)| w * f(T::lit((k.0 + a) as f64), T::lit((k.1 + b) as f64)))
            .sum()
    }
}

/// Center `1 + 1/(2s^2)`; six hexagon vertices `-1/(12s^2)` (three_dir) or four
/// lozenge vertices `-1/(8s^2)` (four_dir).
pub fn nearbest_mask<T: Real>(mesh: Mesh, s: usize) -> Result<BoxSplineMask<T>> {
    if s < 1 {
        return Err(QiError::Parameter("mask scale s must be at least 1".into()));
    }
    let s2 = T::from_usize_lossy(s * s);
    let verts = mesh.vertices();
    let vw = -T::one() / (T::from_usize_lossy(2 * verts.len()) * s2);
    let mut stencil = vec![((0, 0), T::one() + T::one() / (T::lit(2.0) * s2))];
    let si = s as i64;
    stencil.extend(verts.into_iter().map(|(a, b)| ((si * a, si * b), vw)));
    Ok(BoxSplineMask { mesh, s, stencil })
}

/// `Qf(x, y) = sum_k (mask f)(k) phi(x - k, y - k)` with `phi` centered at the origin.
pub fn apply_mask_qi<T: Real, F: Fn(T, T) -> T>(mask: &BoxSplineMask<T>, phi: &BoxSpline<T>, f: F, x: T, y: T) -> Result<T> {
    if mask.mesh != phi.mesh() {
        return Err(QiError::Input(format!("mask for {} used with {} box spline", mask.mesh, phi.mesh())));
    }
    let (rx, ry) = phi.active(x, y);
    let mut acc = T::zero();
    for kx in rx {
        for ky in ry.clone() {
            let b = phi.eval_centered(x - T::lit(kx as f64), y - T::lit(ky as f64));
            if b != T::zero() {
                let c = mask.coefficient(&f, (kx, ky));
                if !c.is_finite() {
                    return Err(QiError::Evaluation { at: x.as_f64() });
                }
                acc += b * c;
            }
        }
    }
    Ok(acc)
}

/// `sum_l |sum_o w_o phi(x - l + o)|`.
pub fn lebesgue_function_2d<T: Real>(mask: &BoxSplineMask<T>, phi: &BoxSpline<T>, x: T, y: T) -> T {
    let (rx, ry) = phi.active(x, y);
    let (x0, y0) = (*rx.start(), *ry.start());
    let (nx, ny) = ((rx.end() - x0 + 1) as usize, (ry.end() - y0 + 1) as usize);
    let mut vals = vec![T::zero(); nx * ny];
    for (i, kx) in rx.clone().enumerate() {
        for (j, ky) in ry.clone().enumerate() {
            vals[j * nx + i] = phi.eval_centered(x - T::lit(kx as f64), y - T::lit(ky as f64));
        }
    }
    let reach = mask.stencil.iter().map(|((a, b), _)| a.abs().max(b.abs())).max().unwrap_or(0);
    let mut total = T::zero();
    for lx in x0 - reach..=rx.end() + reach {
        for ly in y0 - reach..=ry.end() + reach {
            let mut w = T::zero();
            for &((a, b), c) in &mask.stencil {
                // weight of f(l) collects phi(x - k) with k = l - o
                let (kx, ky) = (lx - a, ly - b);
                if kx >= x0 && ky >= y0 && kx <= *rx.end() && ky <= *ry.end() {
                    w += c * vals[(ky - y0) as usize * nx + (kx - x0) as usize];
                }
            }
            total += w.abs();
        }
    }
    total
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LebesgueEstimate2d<T> {
    pub value: T,
    pub argmax: (T, T),
    pub samples: usize,
}

/// Maximum of the 1-periodic Lebesgue function over the unit cell: a
/// `(g+1) x (g+1)` grid with `g = opts.points` rounded up to a multiple of 4,
/// then compass search around the best `opts.refine` grid maxima.
pub fn lebesgue_norm_2d<T: Real>(mask: &BoxSplineMask<T>, phi: &BoxSpline<T>, opts: GridOptions) -> Result<LebesgueEstimate2d<T>> {
    if mask.mesh != phi.mesh() {
        return Err(QiError::Input(format!("mask for {} used with {} box spline", mask.mesh, phi.mesh())));
    }
    let g = opts.points.max(4).div_ceil(4) * 4;
    let gf = T::from_usize_lossy(g);
    let lf = |x: T, y: T| lebesgue_function_2d(mask, phi, x, y);
    let mut grid = Vec::with_capacity((g + 1) * (g + 1));
    for j in 0..=g {
        for i in 0..=g {
            let (x, y) = (T::from_usize_lossy(i) / gf, T::from_usize_lossy(j) / gf);
            grid.push((x, y, lf(x, y)));
        }
    }
    let samples = grid.len();
    grid.sort_by(|a, b| b.2.partial_cmp(&a.2).unwrap_or(std::cmp::Ordering::Equal));
    let mut best = grid[0];
    for &(sx, sy, sv) in grid.iter().take(opts.refine.max(1)) {
        let (mut x, mut y, mut v) = (sx, sy, sv);
        let mut step = T::one() / gf;
        for _ in 0..opts.iterations {
            let mut moved = false;
            for (dx, dy) in [(1, 0), (-1, 0), (0, 1), (0, -1), (1, 1), (-1, -1), (1, -1), (-1, 1)] {
                let (nx, ny) = (x + step * T::lit(dx as f64), y + step * T::lit(dy as f64));
                let nv = lf(nx, ny);
                if nv > v {
                    (x, y, v) = (nx, ny, nv);
                    moved = true;
                }
            }
            if !moved {
                step /= T::lit(2.0);
            }
        }
        if v > best.2 {
            best = (x, y, v);
        }
    }
    Ok(LebesgueEstimate2d {
        value: best.2,
        argmax: (best.0, best.1),
        samples,
    })
}

/// Convenience: `(nu, lebesgue)` for the near-best mask of size `s`.
pub fn nearbest_norms<T: Real>(mesh: Mesh, s: usize, opts: GridOptions) -> Result<(T, LebesgueEstimate2d<T>)> {
    let phi = BoxSpline::new(mesh)?;
    let mask = nearbest_mask(mesh, s)?;
    Ok((mask.nu(), lebesgue_norm_2d(&mask, &phi, opts)?))
}
