//! Numerical laboratory for patchworked hypersurfaces: Laurent polynomials
//! with coefficients scaled by t^{-v(a)}, amoeba sampling by fiberwise root
//! finding, distance-to-spine metrics, complement-component counts, and the
//! localization of the skeleton over the bounded complement component.
//!
//! Sample points live in base-t logarithmic coordinates u = Log|z| / ln t,
//! the scale in which the amoeba converges to the exact spine.

use crate::arith::{dot_rat_int, rat_to_f64, Rat};
use crate::fan::{ConeId, PLFunction, StackyFan};
use crate::skeleton::build_skeleton;
use crate::spine::{bounded_component, cell_shape_2d, BoundedRegion, CellShape, DualComplex};
use num_complex::Complex;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use std::collections::VecDeque;
use thiserror::Error;

type C64 = Complex<f64>;

#[derive(Debug, Error, PartialEq)]
pub enum AmoebaError {
    #[error("sample contains no points")]
    EmptySample,
    #[error("thickening radius {0:.4} exceeds half the minimal feature size {1:.4}")]
    ResolutionTooCoarse(f64, f64),
    #[error("no bounded complement component")]
    NoBoundedComponent,
}

#[derive(Clone, Debug, PartialEq)]
pub struct Term {
    pub exponent: Vec<i64>,
    pub coefficient: f64,
}

#[derive(Clone, Debug, PartialEq)]
pub struct LaurentPoly {
    pub terms: Vec<Term>,
    pub rank: usize,
}

impl LaurentPoly {
    pub fn new(rank: usize, mut terms: Vec<Term>) -> Self {
        terms.sort_by(|a, b| a.exponent.cmp(&b.exponent));
        for pair in terms.windows(2) {
            assert_ne!(pair[0].exponent, pair[1].exponent, "exponents must be distinct");
        }
        for t in &terms {
            assert_eq!(t.exponent.len(), rank);
        }
        LaurentPoly { terms, rank }
    }

    pub fn eval(&self, z: &[C64]) -> C64 {
        self.terms
            .iter()
            .map(|t| {
                let mut v = C64::new(t.coefficient, 0.0);
                for (zi, &e) in z.iter().zip(&t.exponent) {
                    v *= zi.powi(e as i32);
                }
                v
            })
            .sum()
    }

    pub fn max_term_magnitude(&self, z: &[C64]) -> f64 {
        self.terms
            .iter()
            .map(|t| {
                let mut v = t.coefficient.abs();
                for (zi, &e) in z.iter().zip(&t.exponent) {
                    v *= zi.norm().powi(e as i32);
                }
                v
            })
            .fold(0.0, f64::max)
    }
}

/// One term per lifting-function support point a, with coefficient t^{-v(a)}.
pub fn patchwork(fan: &StackyFan, v: &PLFunction, t: f64) -> LaurentPoly {
    assert!(t >= 1.0, "patchworking needs t ≥ 1");
    let terms = crate::fan::support_points(fan)
        .into_iter()
        .map(|a| {
            let va = v
                .values
                .get(&a)
                .unwrap_or_else(|| panic!("certificate misses support point {a:?}"));
            Term {
                exponent: a
                    .iter()
                    .map(|c| i64::try_from(c).expect("desk-scale exponent"))
                    .collect(),
                coefficient: t.powf(-rat_to_f64(va)),
            }
        })
        .collect();
    LaurentPoly::new(fan.rank, terms)
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Window {
    pub x: (f64, f64),
    pub y: (f64, f64),
}

impl Window {
    pub fn square(h: f64) -> Self {
        assert!(h > 0.0);
        Window { x: (-h, h), y: (-h, h) }
    }

    pub fn width(&self) -> f64 {
        self.x.1 - self.x.0
    }

    pub fn height(&self) -> f64 {
        self.y.1 - self.y.0
    }

    pub fn min_extent(&self) -> f64 {
        self.width().min(self.height())
    }

    pub fn contains(&self, p: (f64, f64)) -> bool {
        p.0 >= self.x.0 && p.0 <= self.x.1 && p.1 >= self.y.0 && p.1 <= self.y.1
    }
}

#[derive(Clone, Debug)]
pub struct AmoebaSample {
    /// base-t log-modulus pairs, sorted, duplicates removed
    pub points: Vec<(f64, f64)>,
    pub t: f64,
    pub resolution: usize,
    pub seed: u64,
    pub window: Window,
    pub degenerate_fibers: usize,
}

fn splitmix64(mut x: u64) -> u64 {
    x = x.wrapping_add(0x9E37_79B9_7F4A_7C15);
    x = (x ^ (x >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    x = (x ^ (x >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    x ^ (x >> 31)
}

fn fiber_seed(seed: u64, axis: usize, i: usize, j: usize) -> u64 {
    splitmix64(seed ^ splitmix64((axis as u64) << 48 | (i as u64) << 24 | j as u64))
}

/// Weierstrass-style simultaneous iteration for all roots of Σ cᵢ xⁱ.
/// Degrees here are tiny (the number of distinct fiber exponents).
fn all_roots(coeffs: &[C64], rng: &mut ChaCha8Rng) -> Vec<C64> {
    let maxn = coeffs.iter().map(|c| c.norm()).fold(0.0, f64::max);
    if maxn == 0.0 {
        return Vec::new();
    }
    let mut cs = coeffs.to_vec();
    while cs.len() > 1 && cs.last().unwrap().norm() <= 1e-14 * maxn {
        cs.pop();
    }
    let mut roots = Vec::new();
    while cs.len() > 1 && cs[0].norm() <= 1e-14 * maxn {
        cs.remove(0);
        roots.push(C64::new(0.0, 0.0));
    }
    let d = cs.len() - 1;
    if d == 0 {
        return roots;
    }
    let lead = cs[d];
    let monic: Vec<C64> = cs.iter().map(|c| c / lead).collect();
    let radius = 1.0 + monic.iter().take(d).map(|c| c.norm()).fold(0.0, f64::max);
    let tau = std::f64::consts::TAU;
    let mut xs: Vec<C64> = (0..d)
        .map(|k| C64::from_polar(radius, tau * (k as f64 + 0.3 + 0.4 * rng.gen::<f64>()) / d as f64))
        .collect();
    let eval = |x: C64| {
        let mut v = monic[d];
        for i in (0..d).rev() {
            v = v * x + monic[i];
        }
        v
    };
    for _ in 0..160 {
        let mut moved = 0.0f64;
        for k in 0..d {
            let mut den = C64::new(1.0, 0.0);
            for j in 0..d {
                if j != k {
                    den *= xs[k] - xs[j];
                }
            }
            if den.norm() < 1e-280 {
                xs[k] += C64::from_polar(radius * 1e-6, tau * rng.gen::<f64>());
                moved = f64::INFINITY;
                continue;
            }
            let step = eval(xs[k]) / den;
            xs[k] -= step;
            moved = moved.max(step.norm() / (1.0 + xs[k].norm()));
        }
        if moved < 1e-13 {
            break;
        }
    }
    roots.extend(xs);
    roots
}

/// Roots of W along one fiber: the named axis is pinned to modulus t^u and
/// phase θ, and W collapses to a one-variable polynomial in the other
/// coordinate. Returns retained points plus a degenerate-fiber flag.
fn fiber_points(
    w: &LaurentPoly,
    axis: usize,
    u_fixed: f64,
    theta: f64,
    t: f64,
    window: &Window,
    rng: &mut ChaCha8Rng,
) -> (Vec<(f64, f64)>, bool) {
    let ln_t = t.ln();
    let z_fixed = C64::from_polar(t.powf(u_fixed), theta);
    let other = 1 - axis;
    let kmin = w.terms.iter().map(|t| t.exponent[other]).min().unwrap();
    let kmax = w.terms.iter().map(|t| t.exponent[other]).max().unwrap();
    let mut coeffs = vec![C64::new(0.0, 0.0); (kmax - kmin + 1) as usize];
    let mut scale = 0.0f64;
    for term in &w.terms {
        let contrib = C64::new(term.coefficient, 0.0) * z_fixed.powi(term.exponent[axis] as i32);
        coeffs[(term.exponent[other] - kmin) as usize] += contrib;
        scale += term.coefficient.abs() * z_fixed.norm().powi(term.exponent[axis] as i32);
    }
    let maxc = coeffs.iter().map(|c| c.norm()).fold(0.0, f64::max);
    if maxc <= 1e-12 * scale {
        return (Vec::new(), true);
    }
    let mut out = Vec::new();
    for root in all_roots(&coeffs, rng) {
        let r = root.norm();
        if r <= 0.0 {
            continue;
        }
        let u_other = r.ln() / ln_t;
        let p = if axis == 0 { (u_fixed, u_other) } else { (u_other, u_fixed) };
        if !window.contains(p) {
            continue;
        }
        let z = if axis == 0 { [z_fixed, root] } else { [root, z_fixed] };
        if w.eval(&z).norm() <= 1e-6 * w.max_term_magnitude(&z) {
            out.push(p);
        }
    }
    (out, false)
}

/// Log-image samples of W^{-1}(0) over the window: both coordinate axes are
/// scanned on a modulus × phase grid and the fiberwise roots are kept when
/// they pass the residual test. Deterministic for a fixed seed.
pub fn sample_amoeba(
    w: &LaurentPoly,
    window: Window,
    resolution: usize,
    seed: u64,
    t: f64,
) -> AmoebaSample {
    sample_impl(w, window, resolution, seed, t, true)
}

/// Single-threaded variant of [`sample_amoeba`], kept callable under every
/// feature set so the two execution paths can be benchmarked against each
/// other. Output is identical.
pub fn sample_amoeba_serial(
    w: &LaurentPoly,
    window: Window,
    resolution: usize,
    seed: u64,
    t: f64,
) -> AmoebaSample {
    sample_impl(w, window, resolution, seed, t, false)
}

fn sample_impl(
    w: &LaurentPoly,
    window: Window,
    resolution: usize,
    seed: u64,
    t: f64,
    parallel: bool,
) -> AmoebaSample {
    assert_eq!(w.rank, 2, "sampling is rank 2 in this version");
    assert!(resolution >= 16, "resolution below 16 is meaningless");
    assert!(t > 1.0, "log base must exceed 1");
    let tau = std::f64::consts::TAU;
    let mut jobs = Vec::with_capacity(2 * resolution * resolution);
    for axis in 0..2usize {
        let (lo, hi) = if axis == 0 { window.x } else { window.y };
        for i in 0..resolution {
            let u = lo + (i as f64 + 0.5) * (hi - lo) / resolution as f64;
            for j in 0..resolution {
                let theta = (j as f64 + 0.5) * tau / resolution as f64;
                jobs.push((axis, i, j, u, theta));
            }
        }
    }
    let run = |&(axis, i, j, u, theta): &(usize, usize, usize, f64, f64)| {
        let mut rng = ChaCha8Rng::seed_from_u64(fiber_seed(seed, axis, i, j));
        fiber_points(w, axis, u, theta, t, &window, &mut rng)
    };
    #[cfg(feature = "parallel")]
    let results: Vec<(Vec<(f64, f64)>, bool)> = if parallel {
        use rayon::prelude::*;
        jobs.par_iter().map(run).collect()
    } else {
        jobs.iter().map(run).collect()
    };
    #[cfg(not(feature = "parallel"))]
    let results: Vec<(Vec<(f64, f64)>, bool)> = {
        let _ = parallel;
        jobs.iter().map(run).collect()
    };
    let degenerate_fibers = results.iter().filter(|(_, d)| *d).count();
    let mut points: Vec<(f64, f64)> = results.into_iter().flat_map(|(p, _)| p).collect();
    points.sort_by(|a, b| a.0.total_cmp(&b.0).then(a.1.total_cmp(&b.1)));
    points.dedup();
    AmoebaSample { points, t, resolution, seed, window, degenerate_fibers }
}

/// Sorted base-t log-moduli of the roots of a one-variable Laurent
/// polynomial, the rank-1 analogue of the amoeba.
pub fn univariate_log_roots(w: &LaurentPoly, t: f64, seed: u64) -> Vec<f64> {
    assert_eq!(w.rank, 1);
    assert!(t > 1.0);
    let kmin = w.terms.iter().map(|t| t.exponent[0]).min().unwrap();
    let kmax = w.terms.iter().map(|t| t.exponent[0]).max().unwrap();
    let mut coeffs = vec![C64::new(0.0, 0.0); (kmax - kmin + 1) as usize];
    for term in &w.terms {
        coeffs[(term.exponent[0] - kmin) as usize] += C64::new(term.coefficient, 0.0);
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut out: Vec<f64> = all_roots(&coeffs, &mut rng)
        .into_iter()
        .filter(|r| r.norm() > 0.0)
        .map(|r| r.norm().ln() / t.ln())
        .collect();
    out.sort_by(f64::total_cmp);
    out
}

#[derive(Clone, Copy, Debug)]
enum Prim {
    Pt((f64, f64)),
    Seg((f64, f64), (f64, f64)),
    HalfLine((f64, f64), (f64, f64)),
    FullLine((f64, f64), (f64, f64)),
}

fn to_f64_pair(p: &[Rat]) -> (f64, f64) {
    (rat_to_f64(&p[0]), rat_to_f64(&p[1]))
}

fn spine_prims(dc: &DualComplex) -> Vec<Prim> {
    assert_eq!(dc.rank, 2, "geometric spine primitives are rank 2");
    dc.cells
        .iter()
        .map(|cell| match cell_shape_2d(cell) {
            CellShape::Point(p) => Prim::Pt(to_f64_pair(&p)),
            CellShape::Segment(a, b) => Prim::Seg(to_f64_pair(&a), to_f64_pair(&b)),
            CellShape::Ray { base, dir } => {
                let d = (
                    i64::try_from(&dir[0]).unwrap() as f64,
                    i64::try_from(&dir[1]).unwrap() as f64,
                );
                Prim::HalfLine(to_f64_pair(&base), d)
            }
            CellShape::Line { base, dir } => {
                let d = (
                    i64::try_from(&dir[0]).unwrap() as f64,
                    i64::try_from(&dir[1]).unwrap() as f64,
                );
                Prim::FullLine(to_f64_pair(&base), d)
            }
        })
        .collect()
}

fn dist2(a: (f64, f64), b: (f64, f64)) -> f64 {
    let (dx, dy) = (a.0 - b.0, a.1 - b.1);
    dx * dx + dy * dy
}

fn dist_to_prim(p: (f64, f64), prim: &Prim) -> f64 {
    let project = |base: (f64, f64), dir: (f64, f64), lo: f64, hi: f64| {
        let len2 = dir.0 * dir.0 + dir.1 * dir.1;
        let t = ((p.0 - base.0) * dir.0 + (p.1 - base.1) * dir.1) / len2;
        let t = t.clamp(lo, hi);
        dist2(p, (base.0 + t * dir.0, base.1 + t * dir.1)).sqrt()
    };
    match *prim {
        Prim::Pt(q) => dist2(p, q).sqrt(),
        Prim::Seg(a, b) => project(a, (b.0 - a.0, b.1 - a.1), 0.0, 1.0),
        Prim::HalfLine(base, dir) => project(base, dir, 0.0, f64::INFINITY),
        Prim::FullLine(base, dir) => project(base, dir, f64::NEG_INFINITY, f64::INFINITY),
    }
}

/// Evenly spaced points along the parts of the spine inside the window,
/// kept away from the window boundary by the given margin.
fn spine_raster(dc: &DualComplex, window: &Window, margin: f64, step: f64) -> Vec<(f64, f64)> {
    let inner = Window {
        x: (window.x.0 + margin, window.x.1 - margin),
        y: (window.y.0 + margin, window.y.1 - margin),
    };
    let reach = window.width().hypot(window.height());
    let mut out = Vec::new();
    for prim in spine_prims(dc) {
        match prim {
            Prim::Pt(p) => {
                if inner.contains(p) {
                    out.push(p);
                }
            }
            Prim::Seg(a, b) => {
                let len = dist2(a, b).sqrt();
                let n = (len / step).ceil().max(1.0) as usize;
                for k in 0..=n {
                    let s = k as f64 / n as f64;
                    let p = (a.0 + s * (b.0 - a.0), a.1 + s * (b.1 - a.1));
                    if inner.contains(p) {
                        out.push(p);
                    }
                }
            }
            Prim::HalfLine(base, dir) | Prim::FullLine(base, dir) => {
                let norm = (dir.0 * dir.0 + dir.1 * dir.1).sqrt();
                let unit = (dir.0 / norm, dir.1 / norm);
                let n = (reach / step).ceil() as i64;
                let lo = if matches!(prim, Prim::FullLine(..)) { -n } else { 0 };
                for k in lo..=n {
                    let s = k as f64 * step;
                    let p = (base.0 + s * unit.0, base.1 + s * unit.1);
                    if inner.contains(p) {
                        out.push(p);
                    }
                }
            }
        }
    }
    out
}

/// Uniform-grid index for nearest-sample queries.
struct GridIndex {
    cell: f64,
    x0: f64,
    y0: f64,
    cols: usize,
    rows: usize,
    buckets: Vec<Vec<(f64, f64)>>,
}

impl GridIndex {
    fn build(points: &[(f64, f64)], window: &Window) -> Self {
        let cell = (window.min_extent() / 64.0).max(1e-9);
        let cols = (window.width() / cell).ceil() as usize + 1;
        let rows = (window.height() / cell).ceil() as usize + 1;
        let mut buckets = vec![Vec::new(); cols * rows];
        for &p in points {
            let ix = (((p.0 - window.x.0) / cell) as usize).min(cols - 1);
            let iy = (((p.1 - window.y.0) / cell) as usize).min(rows - 1);
            buckets[iy * cols + ix].push(p);
        }
        GridIndex { cell, x0: window.x.0, y0: window.y.0, cols, rows, buckets }
    }

    fn nearest(&self, q: (f64, f64)) -> f64 {
        let ix = (((q.0 - self.x0) / self.cell).floor().max(0.0) as usize).min(self.cols - 1);
        let iy = (((q.1 - self.y0) / self.cell).floor().max(0.0) as usize).min(self.rows - 1);
        let mut best = f64::INFINITY;
        let max_ring = self.cols.max(self.rows);
        for ring in 0..=max_ring {
            if best.is_finite() && (ring as f64 - 1.0) * self.cell > best {
                break;
            }
            let (r, c) = (iy as isize, ix as isize);
            let ring = ring as isize;
            for dy in -ring..=ring {
                for dx in -ring..=ring {
                    if dx.abs() != ring && dy.abs() != ring {
                        continue;
                    }
                    let (yy, xx) = (r + dy, c + dx);
                    if yy < 0 || xx < 0 || yy >= self.rows as isize || xx >= self.cols as isize {
                        continue;
                    }
                    for &p in &self.buckets[yy as usize * self.cols + xx as usize] {
                        best = best.min(dist2(q, p).sqrt());
                    }
                }
            }
        }
        best
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct SpineDistance {
    /// max over sample points of the distance to the spine
    pub one_sided: f64,
    /// max over interior spine points of the distance to the sample
    pub spine_coverage: f64,
}

pub fn spine_distance(s: &AmoebaSample, dc: &DualComplex) -> Result<SpineDistance, AmoebaError> {
    if s.points.is_empty() {
        return Err(AmoebaError::EmptySample);
    }
    let prims = spine_prims(dc);
    let one_sided = s
        .points
        .iter()
        .map(|&p| {
            prims
                .iter()
                .map(|pr| dist_to_prim(p, pr))
                .fold(f64::INFINITY, f64::min)
        })
        .fold(0.0, f64::max);
    let margin = 0.05 * s.window.min_extent();
    let step = s.window.min_extent() / 256.0;
    let raster = spine_raster(dc, &s.window, margin, step);
    let index = GridIndex::build(&s.points, &s.window);
    let spine_coverage = raster
        .iter()
        .map(|&q| index.nearest(q))
        .fold(0.0, f64::max);
    Ok(SpineDistance { one_sided, spine_coverage })
}

struct Raster {
    res: usize,
    window: Window,
    dx: f64,
    dy: f64,
    marked: Vec<bool>,
}

impl Raster {
    fn center(&self, ix: usize, iy: usize) -> (f64, f64) {
        (
            self.window.x.0 + (ix as f64 + 0.5) * self.dx,
            self.window.y.0 + (iy as f64 + 0.5) * self.dy,
        )
    }

    fn cell_of(&self, p: (f64, f64)) -> Option<(usize, usize)> {
        if !self.window.contains(p) {
            return None;
        }
        let ix = (((p.0 - self.window.x.0) / self.dx) as usize).min(self.res - 1);
        let iy = (((p.1 - self.window.y.0) / self.dy) as usize).min(self.res - 1);
        Some((ix, iy))
    }
}

fn rasterize(s: &AmoebaSample, window: &Window, res: usize) -> Raster {
    let dx = window.width() / res as f64;
    let dy = window.height() / res as f64;
    let rho = 1.5 * dx.max(dy);
    let mut marked = vec![false; res * res];
    let reach_x = (rho / dx).ceil() as isize + 1;
    let reach_y = (rho / dy).ceil() as isize + 1;
    for &p in &s.points {
        if !window.contains(p) {
            continue;
        }
        let cx = ((p.0 - window.x.0) / dx) as isize;
        let cy = ((p.1 - window.y.0) / dy) as isize;
        for oy in -reach_y..=reach_y {
            for ox in -reach_x..=reach_x {
                let (ix, iy) = (cx + ox, cy + oy);
                if ix < 0 || iy < 0 || ix >= res as isize || iy >= res as isize {
                    continue;
                }
                let c = (
                    window.x.0 + (ix as f64 + 0.5) * dx,
                    window.y.0 + (iy as f64 + 0.5) * dy,
                );
                if dist2(c, p).sqrt() <= rho {
                    marked[iy as usize * res + ix as usize] = true;
                }
            }
        }
    }
    Raster { res, window: *window, dx, dy, marked }
}

struct Component {
    cells: Vec<usize>,
    touches_border: bool,
}

fn flood_components(r: &Raster) -> (Vec<i64>, Vec<Component>) {
    let res = r.res;
    let mut labels = vec![-1i64; res * res];
    let mut comps = Vec::new();
    for start in 0..res * res {
        if r.marked[start] || labels[start] >= 0 {
            continue;
        }
        let id = comps.len() as i64;
        let mut cells = Vec::new();
        let mut touches = false;
        let mut queue = VecDeque::from([start]);
        labels[start] = id;
        while let Some(c) = queue.pop_front() {
            cells.push(c);
            let (ix, iy) = (c % res, c / res);
            if ix == 0 || iy == 0 || ix == res - 1 || iy == res - 1 {
                touches = true;
            }
            let mut push = |n: usize| {
                if !r.marked[n] && labels[n] < 0 {
                    labels[n] = id;
                    queue.push_back(n);
                }
            };
            if ix > 0 {
                push(c - 1);
            }
            if ix + 1 < res {
                push(c + 1);
            }
            if iy > 0 {
                push(c - res);
            }
            if iy + 1 < res {
                push(c + res);
            }
        }
        comps.push(Component { cells, touches_border: touches });
    }
    (labels, comps)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct ComplementComponents {
    pub bounded: usize,
    pub total_in_window: usize,
}

/// Flood-fill census of the complement of the thickened sample on a
/// res × res raster of the window.
pub fn complement_components(
    s: &AmoebaSample,
    window: &Window,
    resolution: usize,
    min_feature: Option<f64>,
) -> Result<ComplementComponents, AmoebaError> {
    if s.points.is_empty() {
        return Err(AmoebaError::EmptySample);
    }
    let dx = window.width() / resolution as f64;
    let dy = window.height() / resolution as f64;
    let rho = 1.5 * dx.max(dy);
    if let Some(feature) = min_feature {
        if rho > feature / 2.0 {
            return Err(AmoebaError::ResolutionTooCoarse(rho, feature / 2.0));
        }
    }
    let raster = rasterize(s, window, resolution);
    let (_, comps) = flood_components(&raster);
    Ok(ComplementComponents {
        bounded: comps.iter().filter(|c| !c.touches_border).count(),
        total_in_window: comps.len(),
    })
}

#[derive(Clone, Debug)]
pub struct FaceCheck {
    pub cone: ConeId,
    /// component count of the skeleton stratum family over this cone
    pub gamma_order: usize,
    /// max over face points of the distance to the measured boundary
    pub face_error: f64,
    pub matched: bool,
}

#[derive(Clone, Debug)]
pub struct BoundaryReport {
    pub tolerance: f64,
    pub faces: Vec<FaceCheck>,
    /// max over measured boundary points of the distance to the chamber
    /// boundary (reported, not thresholded)
    pub boundary_deviation: f64,
    pub all_matched: bool,
}

/// Locate the bounded complement component of the sample, extract its
/// boundary, and check that each face of the bounded chamber (dual to a
/// nonzero cone) is approximated by that boundary within the tolerance.
pub fn skeleton_over_boundary(
    s: &AmoebaSample,
    fan: &StackyFan,
    dc: &DualComplex,
    resolution: usize,
    tolerance: f64,
) -> Result<BoundaryReport, AmoebaError> {
    if s.points.is_empty() {
        return Err(AmoebaError::EmptySample);
    }
    let region = bounded_component(dc);
    if !region.bounded {
        return Err(AmoebaError::NoBoundedComponent);
    }
    let raster = rasterize(s, &s.window, resolution);
    let (labels, comps) = flood_components(&raster);
    let centroid = {
        let k = region.vertices.len() as f64;
        let (mut cx, mut cy) = (0.0, 0.0);
        for v in &region.vertices {
            cx += rat_to_f64(&v[0]);
            cy += rat_to_f64(&v[1]);
        }
        (cx / k, cy / k)
    };
    let preferred = raster
        .cell_of(centroid)
        .map(|(ix, iy)| iy * resolution + ix)
        .filter(|&c| !raster.marked[c])
        .map(|c| labels[c] as usize)
        .filter(|&id| !comps[id].touches_border);
    let hole = match preferred {
        Some(id) => id,
        None => comps
            .iter()
            .enumerate()
            .filter(|(_, c)| !c.touches_border)
            .max_by_key(|(_, c)| c.cells.len())
            .map(|(id, _)| id)
            .ok_or(AmoebaError::NoBoundedComponent)?,
    };
    let res = resolution;
    let boundary: Vec<(f64, f64)> = comps[hole]
        .cells
        .iter()
        .filter(|&&c| {
            let (ix, iy) = (c % res, c / res);
            (ix > 0 && raster.marked[c - 1])
                || (ix + 1 < res && raster.marked[c + 1])
                || (iy > 0 && raster.marked[c - res])
                || (iy + 1 < res && raster.marked[c + res])
        })
        .map(|&c| raster.center(c % res, c / res))
        .collect();
    if boundary.is_empty() {
        return Err(AmoebaError::NoBoundedComponent);
    }
    let skel = build_skeleton(fan);
    let step = (s.window.min_extent() / 512.0).min(tolerance / 4.0);
    let mut faces = Vec::new();
    let mut chamber_raster: Vec<(f64, f64)> = Vec::new();
    for sigma in fan.all_cones().to_vec() {
        if sigma.is_empty() {
            continue;
        }
        let face_pts = face_points(&region, fan, &sigma, step);
        chamber_raster.extend_from_slice(&face_pts);
        let face_error = face_pts
            .iter()
            .map(|&q| {
                boundary
                    .iter()
                    .map(|&b| dist2(q, b).sqrt())
                    .fold(f64::INFINITY, f64::min)
            })
            .fold(0.0, f64::max);
        let gamma_order = skel.strata.iter().filter(|st| st.cone == sigma).count();
        faces.push(FaceCheck {
            cone: sigma.clone(),
            gamma_order,
            face_error,
            matched: face_error < tolerance,
        });
    }
    let boundary_deviation = boundary
        .iter()
        .map(|&b| {
            chamber_raster
                .iter()
                .map(|&q| dist2(q, b).sqrt())
                .fold(f64::INFINITY, f64::min)
        })
        .fold(0.0, f64::max);
    let all_matched = faces.iter().all(|f| f.matched);
    Ok(BoundaryReport { tolerance, faces, boundary_deviation, all_matched })
}

/// Points along the chamber face whose tight inequalities are exactly the
/// rows of σ's rays: a vertex for a top cone, an edge for a ray (rank 2).
fn face_points(region: &BoundedRegion, fan: &StackyFan, sigma: &[usize], step: f64) -> Vec<(f64, f64)> {
    let rows: Vec<usize> = sigma
        .iter()
        .map(|&r| {
            region
                .inequalities
                .iter()
                .position(|(a, _)| a == &fan.rays[r].stacky)
                .expect("every ray contributes a chamber row")
        })
        .collect();
    let on_face = |v: &[Rat]| {
        rows.iter().all(|&i| {
            let (a, b) = &region.inequalities[i];
            dot_rat_int(v, a) == *b
        })
    };
    let verts: Vec<(f64, f64)> = region
        .vertices
        .iter()
        .filter(|v| on_face(v))
        .map(|v| to_f64_pair(v))
        .collect();
    match verts.len() {
        1 => verts,
        2 => {
            let (a, b) = (verts[0], verts[1]);
            let n = (dist2(a, b).sqrt() / step).ceil().max(1.0) as usize;
            (0..=n)
                .map(|k| {
                    let t = k as f64 / n as f64;
                    (a.0 + t * (b.0 - a.0), a.1 + t * (b.1 - a.1))
                })
                .collect()
        }
        other => panic!("rank-2 chamber face with {other} vertices"),
    }
}

pub fn sample_to_json(s: &AmoebaSample) -> serde_json::Value {
    serde_json::json!({
        "t": s.t,
        "resolution": s.resolution,
        "seed": s.seed,
        "window": [[s.window.x.0, s.window.x.1], [s.window.y.0, s.window.y.1]],
        "points": s.points.len(),
        "degenerate_fibers": s.degenerate_fibers,
    })
}

pub fn boundary_to_json(r: &BoundaryReport) -> serde_json::Value {
    serde_json::json!({
        "tolerance": r.tolerance,
        "boundary_deviation": r.boundary_deviation,
        "all_matched": r.all_matched,
        "faces": r.faces.iter().map(|f| serde_json::json!({
            "cone": f.cone,
            "gamma_order": f.gamma_order,
            "face_error": f.face_error,
            "matched": f.matched,
        })).collect::<Vec<_>>(),
    })
}

/// Layered drawing: bounded chamber, sample cloud, spine overlay.
pub fn render_amoeba_svg(
    s: &AmoebaSample,
    dc: Option<&DualComplex>,
    region: Option<&BoundedRegion>,
) -> String {
    let pad = 0.06 * s.window.min_extent();
    let scale = 720.0 / s.window.width().max(s.window.height());
    let mut canvas = crate::svg::SvgCanvas::new(
        s.window.x.0 - pad,
        s.window.y.0 - pad,
        s.window.x.1 + pad,
        s.window.y.1 + pad,
        scale,
    );
    if let Some(region) = region.filter(|r| r.bounded) {
        let mut pts: Vec<(f64, f64)> = region.vertices.iter().map(|v| to_f64_pair(v)).collect();
        let cx = pts.iter().map(|p| p.0).sum::<f64>() / pts.len() as f64;
        let cy = pts.iter().map(|p| p.1).sum::<f64>() / pts.len() as f64;
        pts.sort_by(|a, b| {
            (a.1 - cy)
                .atan2(a.0 - cx)
                .total_cmp(&(b.1 - cy).atan2(b.0 - cx))
        });
        canvas.polygon(&pts, "fill:#fbe9e7;stroke:none");
    }
    let stride = (s.points.len() / 20000).max(1);
    for p in s.points.iter().step_by(stride) {
        canvas.circle(*p, 1.2, "fill:#556270;fill-opacity:0.5");
    }
    if let Some(dc) = dc {
        for prim in spine_prims(dc) {
            match prim {
                Prim::Pt(p) => canvas.circle(p, 3.0, "fill:#c0392b"),
                Prim::Seg(a, b) => canvas.line(a, b, "stroke:#c0392b;stroke-width:2"),
                Prim::HalfLine(base, dir) => {
                    if let Some((a, b)) = crate::svg::clip_ray(base, dir, canvas.clip_bounds()) {
                        canvas.line(a, b, "stroke:#c0392b;stroke-width:2");
                    }
                }
                Prim::FullLine(base, dir) => {
                    for d in [dir, (-dir.0, -dir.1)] {
                        if let Some((a, b)) = crate::svg::clip_ray(base, d, canvas.clip_bounds()) {
                            canvas.line(a, b, "stroke:#c0392b;stroke-width:2");
                        }
                    }
                }
            }
        }
    }
    canvas.render()
}
