//! Legendre transforms and the tropical spine: the corner locus of
//! m ↦ max(⟨m,n⟩ − v(n)), its cell complex dual to the fan's triangulation,
//! the bounded chamber, and the order-reversing matching between its
//! boundary faces and the nonzero cones.

use crate::arith::{dot_rat_int, format_rat, rat_to_f64, Int, LatVec, Rat, RatVec};
use crate::fan::{ConeId, PLFunction, StackyFan};
use crate::fm::{fm_feasible, in_cone_hull, solve_affine, Feasibility, LinIneq};
use crate::svg::{clip_ray, SvgCanvas};
use num_traits::{One, Signed, Zero};
use std::collections::BTreeSet;
use thiserror::Error;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum SpineError {
    #[error("PL data does not induce the fan's triangulation: {0}")]
    WrongCertificate(String),
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LegendreValue {
    pub value: Rat,
    pub argmax: Vec<LatVec>,
}

/// Exact maximum of ⟨m,n⟩ − v(n) over the domain of v, with ties.
pub fn legendre(v: &PLFunction, m: &[Rat]) -> LegendreValue {
    assert!(!v.values.is_empty(), "PL function has empty domain");
    let mut best: Option<Rat> = None;
    let mut argmax: Vec<LatVec> = Vec::new();
    for (n, vn) in &v.values {
        let score = dot_rat_int(m, n) - vn;
        match &best {
            Some(b) if &score < b => {}
            Some(b) if &score == b => argmax.push(n.clone()),
            _ => {
                best = Some(score);
                argmax = vec![n.clone()];
            }
        }
    }
    LegendreValue {
        value: best.unwrap(),
        argmax,
    }
}

/// A simplex of the star triangulation: the cone's stacky points, coned off
/// the origin when `has_origin` is set.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub struct DualSimplex {
    pub has_origin: bool,
    pub cone: ConeId,
}

impl DualSimplex {
    pub fn dim(&self) -> usize {
        self.cone.len() + usize::from(self.has_origin) - 1
    }

    pub fn vertex_points(&self, fan: &StackyFan) -> Vec<LatVec> {
        let mut pts = Vec::new();
        if self.has_origin {
            pts.push(vec![Int::zero(); fan.rank]);
        }
        pts.extend(fan.stacky_points(&self.cone));
        pts
    }
}

/// A relatively open cell of the corner locus, stored by the exact tie
/// system that cuts it out.
#[derive(Clone, Debug)]
pub struct SpineCell {
    pub dual_simplex: DualSimplex,
    /// ⟨a, m⟩ = b
    pub equalities: Vec<(LatVec, Rat)>,
    /// ⟨a, m⟩ ≤ b
    pub inequalities: Vec<(LatVec, Rat)>,
    pub dim: usize,
    /// a relative-interior point
    pub witness: RatVec,
}

#[derive(Clone, Debug)]
pub struct DualComplex {
    pub rank: usize,
    /// every triangulation vertex with its value (origin included)
    pub vertices: Vec<(LatVec, Rat)>,
    pub origin_value: Rat,
    pub cells: Vec<SpineCell>,
    /// (a, b): cell a lies in the closure of cell b
    pub incidence: Vec<(usize, usize)>,
}

/// Relative-interior witness for the pattern "exactly these vertices attain
/// the max": ties on `active`, everything else beaten by a slack s ∈ (0,1].
/// Returns the point and the best slack (0 means the open pattern is empty).
fn pattern_witness(
    vertices: &[(LatVec, Rat)],
    active: &[usize],
    rank: usize,
) -> Option<(RatVec, Rat)> {
    let nvars = rank + 1;
    let base = active[0];
    let (n0, v0) = &vertices[base];
    let mut ineqs: Vec<LinIneq> = Vec::new();
    for &i in &active[1..] {
        let (ni, vi) = &vertices[i];
        let row: RatVec = ni
            .iter()
            .zip(n0)
            .map(|(a, b)| Rat::from_integer(a - b))
            .chain(std::iter::once(Rat::zero()))
            .collect();
        let rhs = vi - v0;
        let neg: RatVec = row.iter().map(|c| -c).collect();
        ineqs.push(LinIneq::new(row, rhs.clone()));
        ineqs.push(LinIneq::new(neg, -rhs));
    }
    for (j, (nj, vj)) in vertices.iter().enumerate() {
        if active.contains(&j) {
            continue;
        }
        let row: RatVec = nj
            .iter()
            .zip(n0)
            .map(|(a, b)| Rat::from_integer(a - b))
            .chain(std::iter::once(Rat::one()))
            .collect();
        ineqs.push(LinIneq::new(row, vj - v0));
    }
    let mut s_low = vec![Rat::zero(); nvars];
    s_low[rank] = -Rat::one();
    ineqs.push(LinIneq::new(s_low, Rat::zero()));
    let mut s_high = vec![Rat::zero(); nvars];
    s_high[rank] = Rat::one();
    ineqs.push(LinIneq::new(s_high, Rat::one()));
    match fm_feasible(&ineqs, nvars) {
        Feasibility::Feasible(mut p) => {
            let s = p.pop().unwrap();
            Some((p, s))
        }
        Feasibility::Infeasible(_) => None,
    }
}

/// Build the spine: one cell per positive-dimensional simplex of the star
/// triangulation. Fails if the PL data's argmax pattern does not reproduce
/// exactly that triangulation.
pub fn dual_complex(fan: &StackyFan, v: &PLFunction) -> Result<DualComplex, SpineError> {
    let n = fan.rank;
    let origin = vec![Int::zero(); n];
    let mut vertices: Vec<(LatVec, Rat)> = Vec::new();
    for p in std::iter::once(origin.clone()).chain(fan.rays.iter().map(|r| r.stacky.clone())) {
        let val = v
            .values
            .get(&p)
            .ok_or_else(|| SpineError::WrongCertificate(format!("no value at {:?}", p)))?;
        vertices.push((p, val.clone()));
    }
    vertices.sort();
    vertices.dedup();
    let origin_value = v.values[&origin].clone();

    let mut simplices: Vec<DualSimplex> = Vec::new();
    for cone in fan.all_cones() {
        simplices.push(DualSimplex {
            has_origin: true,
            cone: cone.clone(),
        });
        if !cone.is_empty() {
            simplices.push(DualSimplex {
                has_origin: false,
                cone: cone.clone(),
            });
        }
    }
    simplices.sort();

    let index_of = |p: &LatVec| vertices.iter().position(|(q, _)| q == p).unwrap();
    let mut cells = Vec::new();
    for s in &simplices {
        if s.dim() == 0 {
            continue;
        }
        let pts = s.vertex_points(fan);
        let active: Vec<usize> = pts.iter().map(|p| index_of(p)).collect();
        let Some((witness, slack)) = pattern_witness(&vertices, &active, n) else {
            return Err(SpineError::WrongCertificate(format!(
                "tie region of simplex {:?} is empty",
                s
            )));
        };
        if !slack.is_positive() {
            return Err(SpineError::WrongCertificate(format!(
                "tie region of simplex {:?} has no interior",
                s
            )));
        }
        let (n0, v0) = &vertices[active[0]];
        let mut equalities = Vec::new();
        for &i in &active[1..] {
            let (ni, vi) = &vertices[i];
            let row: LatVec = ni.iter().zip(n0).map(|(a, b)| a - b).collect();
            equalities.push((row, vi - v0));
        }
        let mut inequalities = Vec::new();
        for (j, (nj, vj)) in vertices.iter().enumerate() {
            if active.contains(&j) {
                continue;
            }
            let row: LatVec = nj.iter().zip(n0).map(|(a, b)| a - b).collect();
            inequalities.push((row, vj - v0));
        }
        let tie_rows: Vec<RatVec> = equalities
            .iter()
            .map(|(a, _)| a.iter().map(|c| Rat::from_integer(c.clone())).collect())
            .collect();
        let tie_rank = rational_rank(&tie_rows);
        let dim = n - tie_rank;
        if dim + s.dim() != n {
            return Err(SpineError::WrongCertificate(format!(
                "cell of simplex {:?} has dimension {} (expected {})",
                s,
                dim,
                n - s.dim()
            )));
        }
        cells.push(SpineCell {
            dual_simplex: s.clone(),
            equalities,
            inequalities,
            dim,
            witness,
        });
    }

    let mut incidence = Vec::new();
    for (i, a) in cells.iter().enumerate() {
        for (j, b) in cells.iter().enumerate() {
            if i == j {
                continue;
            }
            let va: BTreeSet<LatVec> = a.dual_simplex.vertex_points(fan).into_iter().collect();
            let vb: BTreeSet<LatVec> = b.dual_simplex.vertex_points(fan).into_iter().collect();
            if vb.is_subset(&va) && vb != va {
                incidence.push((i, j));
            }
        }
    }
    Ok(DualComplex {
        rank: n,
        vertices,
        origin_value,
        cells,
        incidence,
    })
}

fn rational_rank(rows: &[RatVec]) -> usize {
    if rows.is_empty() {
        return 0;
    }
    let n = rows[0].len();
    let eqs: Vec<(RatVec, Rat)> = rows.iter().map(|r| (r.clone(), Rat::zero())).collect();
    let sol = solve_affine(&eqs, n).expect("homogeneous system is consistent");
    n - sol.basis.len()
}

/// The chamber of the Legendre max where the origin wins:
/// {m : ⟨m,n⟩ − v(n) ≤ −v(0) for all n ≠ 0}.
#[derive(Clone, Debug)]
pub struct BoundedRegion {
    pub rank: usize,
    /// row per fan ray: ⟨m, stacky⟩ ≤ v(stacky) − v(0)
    pub inequalities: Vec<(LatVec, Rat)>,
    pub bounded: bool,
    /// 0-dimensional faces, when bounded
    pub vertices: Vec<RatVec>,
}

/// A boundary face of the region with exact tight set `tight` (ray indices).
#[derive(Clone, Debug)]
pub struct RegionFace {
    pub tight: Vec<usize>,
    pub dim: usize,
    pub witness: RatVec,
}

pub fn bounded_component(dc: &DualComplex) -> BoundedRegion {
    let n = dc.rank;
    let origin = vec![Int::zero(); n];
    let inequalities: Vec<(LatVec, Rat)> = dc
        .vertices
        .iter()
        .filter(|(p, _)| p != &origin)
        .map(|(p, vp)| (p.clone(), vp - &dc.origin_value))
        .collect();
    let support: Vec<LatVec> = inequalities.iter().map(|(p, _)| p.clone()).collect();
    let bounded = (0..n).all(|i| {
        let mut e = vec![Rat::zero(); n];
        e[i] = Rat::one();
        let pos = in_cone_hull(&e, &support);
        e[i] = -Rat::one();
        pos && in_cone_hull(&e, &support)
    });
    let region = BoundedRegion {
        rank: n,
        inequalities,
        bounded,
        vertices: Vec::new(),
    };
    let vertices = if bounded {
        region_faces(&region)
            .into_iter()
            .filter(|f| f.dim == 0)
            .map(|f| f.witness)
            .collect()
    } else {
        Vec::new()
    };
    BoundedRegion { vertices, ..region }
}

/// All proper nonempty faces, each identified by its exact tight set.
pub fn region_faces(region: &BoundedRegion) -> Vec<RegionFace> {
    let n = region.rank;
    let m = region.inequalities.len();
    assert!(m <= 20, "face enumeration is desk-scale");
    let mut out: Vec<RegionFace> = Vec::new();
    for mask in 1u64..(1u64 << m) {
        let tight: Vec<usize> = (0..m).filter(|i| mask >> i & 1 == 1).collect();
        let nvars = n + 1;
        let mut ineqs: Vec<LinIneq> = Vec::new();
        for (i, (a, b)) in region.inequalities.iter().enumerate() {
            let mut row: RatVec = a.iter().map(|c| Rat::from_integer(c.clone())).collect();
            if tight.contains(&i) {
                row.push(Rat::zero());
                let neg: RatVec = row.iter().map(|c| -c).collect();
                ineqs.push(LinIneq::new(row, b.clone()));
                ineqs.push(LinIneq::new(neg, -b.clone()));
            } else {
                row.push(Rat::one());
                ineqs.push(LinIneq::new(row, b.clone()));
            }
        }
        let mut s_low = vec![Rat::zero(); nvars];
        s_low[n] = -Rat::one();
        ineqs.push(LinIneq::new(s_low, Rat::zero()));
        let mut s_high = vec![Rat::zero(); nvars];
        s_high[n] = Rat::one();
        ineqs.push(LinIneq::new(s_high, Rat::one()));
        if let Feasibility::Feasible(mut p) = fm_feasible(&ineqs, nvars) {
            let s = p.pop().unwrap();
            if s.is_positive() {
                let rows: Vec<RatVec> = tight
                    .iter()
                    .map(|&i| {
                        region.inequalities[i]
                            .0
                            .iter()
                            .map(|c| Rat::from_integer(c.clone()))
                            .collect()
                    })
                    .collect();
                let dim = n - rational_rank(&rows);
                out.push(RegionFace {
                    tight,
                    dim,
                    witness: p,
                });
            }
        }
    }
    out.sort_by(|a, b| a.tight.cmp(&b.tight));
    out
}

#[derive(Clone, Debug)]
pub struct FaceMatch {
    pub cone: ConeId,
    pub dim: usize,
    pub witness: RatVec,
    /// argmax at the witness equals the vertex set of the dual simplex
    pub argmax_matches: bool,
}

#[derive(Clone, Debug)]
pub struct PosetReport {
    pub matches: Vec<FaceMatch>,
    pub unmatched_cones: Vec<ConeId>,
    pub unmatched_faces: Vec<Vec<usize>>,
    pub order_reversing: bool,
}

impl PosetReport {
    pub fn is_bijective(&self) -> bool {
        self.unmatched_cones.is_empty() && self.unmatched_faces.is_empty()
    }
}

/// Match each boundary face of the bounded chamber to a nonzero cone via its
/// tight set, checking dimensions, argmax patterns, and order reversal.
pub fn poset_antiequivalence(
    fan: &StackyFan,
    dc: &DualComplex,
    region: &BoundedRegion,
) -> PosetReport {
    assert!(region.bounded, "anti-equivalence needs the bounded chamber");
    let n = fan.rank;
    // region.inequalities rows are sorted by stacky point; map ray index → row.
    let row_of_ray: Vec<usize> = fan
        .rays
        .iter()
        .map(|r| {
            region
                .inequalities
                .iter()
                .position(|(p, _)| p == &r.stacky)
                .expect("every ray contributes a region inequality")
        })
        .collect();
    let faces = region_faces(region);
    let mut matches = Vec::new();
    let mut unmatched_cones = Vec::new();
    let mut used_faces: BTreeSet<Vec<usize>> = BTreeSet::new();
    let nonzero: Vec<ConeId> = fan
        .all_cones()
        .iter()
        .filter(|c| !c.is_empty())
        .cloned()
        .collect();
    for cone in &nonzero {
        let mut tight: Vec<usize> = cone.iter().map(|&r| row_of_ray[r]).collect();
        tight.sort_unstable();
        let Some(face) = faces.iter().find(|f| f.tight == tight) else {
            unmatched_cones.push(cone.clone());
            continue;
        };
        used_faces.insert(face.tight.clone());
        let pl = PLFunction {
            values: dc.vertices.iter().cloned().collect(),
        };
        let lv = legendre(&pl, &face.witness);
        let mut expected: Vec<LatVec> = fan.stacky_points(cone);
        expected.push(vec![Int::zero(); n]);
        expected.sort();
        let mut got = lv.argmax.clone();
        got.sort();
        let argmax_matches = got == expected && face.dim == n - cone.len();
        matches.push(FaceMatch {
            cone: cone.clone(),
            dim: face.dim,
            witness: face.witness.clone(),
            argmax_matches,
        });
    }
    let unmatched_faces: Vec<Vec<usize>> = faces
        .iter()
        .filter(|f| !used_faces.contains(&f.tight))
        .map(|f| f.tight.clone())
        .collect();
    // Order reversal: σ ⊆ τ must give F_τ ⊆ F_σ, i.e. tight(σ) ⊆ tight(τ).
    let mut order_reversing = true;
    for a in &nonzero {
        for b in &nonzero {
            if a.iter().all(|r| b.contains(r)) {
                let ta: BTreeSet<usize> = a.iter().map(|&r| row_of_ray[r]).collect();
                let tb: BTreeSet<usize> = b.iter().map(|&r| row_of_ray[r]).collect();
                if !ta.is_subset(&tb) {
                    order_reversing = false;
                }
            }
        }
    }
    PosetReport {
        matches,
        unmatched_cones,
        unmatched_faces,
        order_reversing,
    }
}

/// Piecewise description of a rank-2 cell for drawing and tests.
#[derive(Clone, Debug, PartialEq)]
pub enum CellShape {
    Point(RatVec),
    Segment(RatVec, RatVec),
    Ray { base: RatVec, dir: LatVec },
    Line { base: RatVec, dir: LatVec },
}

pub fn cell_shape_2d(cell: &SpineCell) -> CellShape {
    let n = 2;
    let eqs: Vec<(RatVec, Rat)> = cell
        .equalities
        .iter()
        .map(|(a, b)| {
            (
                a.iter().map(|c| Rat::from_integer(c.clone())).collect(),
                b.clone(),
            )
        })
        .collect();
    let sol = solve_affine(&eqs, n).expect("cell is nonempty");
    if sol.basis.is_empty() {
        return CellShape::Point(sol.point);
    }
    assert_eq!(sol.basis.len(), 1, "rank-2 cells are at most 1-dimensional");
    let d = &sol.basis[0];
    let mut lo: Option<Rat> = None;
    let mut hi: Option<Rat> = None;
    for (a, b) in &cell.inequalities {
        let ad = dot_rat_int(d, a);
        let ap = dot_rat_int(&sol.point, a);
        if ad.is_zero() {
            continue;
        }
        let bound = (b - &ap) / &ad;
        if ad.is_positive() {
            hi = Some(match hi {
                Some(h) if h <= bound => h,
                _ => bound,
            });
        } else {
            lo = Some(match lo {
                Some(l) if l >= bound => l,
                _ => bound,
            });
        }
    }
    let at = |t: &Rat| -> RatVec {
        sol.point
            .iter()
            .zip(d)
            .map(|(p, di)| p + di * t)
            .collect()
    };
    let int_dir = crate::fm::integral_direction(d);
    match (lo, hi) {
        (Some(l), Some(h)) => CellShape::Segment(at(&l), at(&h)),
        (Some(l), None) => CellShape::Ray {
            base: at(&l),
            dir: int_dir,
        },
        (None, Some(h)) => CellShape::Ray {
            base: at(&h),
            dir: int_dir.iter().map(|c| -c).collect(),
        },
        (None, None) => CellShape::Line {
            base: sol.point,
            dir: int_dir,
        },
    }
}

/// Render a rank-2 spine: bounded chamber shaded, cells drawn as segments
/// and clipped rays.
pub fn render_spine_svg(dc: &DualComplex, region: &BoundedRegion) -> String {
    assert_eq!(dc.rank, 2, "spine drawing is rank-2 only");
    let mut xs: Vec<f64> = Vec::new();
    let mut ys: Vec<f64> = Vec::new();
    for c in &dc.cells {
        let w = &c.witness;
        xs.push(rat_to_f64(&w[0]));
        ys.push(rat_to_f64(&w[1]));
    }
    for v in &region.vertices {
        xs.push(rat_to_f64(&v[0]));
        ys.push(rat_to_f64(&v[1]));
    }
    let pad = 2.0;
    let min_x = xs.iter().cloned().fold(f64::INFINITY, f64::min) - pad;
    let max_x = xs.iter().cloned().fold(f64::NEG_INFINITY, f64::max) + pad;
    let min_y = ys.iter().cloned().fold(f64::INFINITY, f64::min) - pad;
    let max_y = ys.iter().cloned().fold(f64::NEG_INFINITY, f64::max) + pad;
    let mut canvas = SvgCanvas::new(min_x, min_y, max_x, max_y, 60.0);
    let rect = canvas.clip_bounds();
    if region.bounded && !region.vertices.is_empty() {
        let cx: f64 = region.vertices.iter().map(|v| rat_to_f64(&v[0])).sum::<f64>()
            / region.vertices.len() as f64;
        let cy: f64 = region.vertices.iter().map(|v| rat_to_f64(&v[1])).sum::<f64>()
            / region.vertices.len() as f64;
        let mut pts: Vec<(f64, f64)> = region
            .vertices
            .iter()
            .map(|v| (rat_to_f64(&v[0]), rat_to_f64(&v[1])))
            .collect();
        pts.sort_by(|a, b| {
            let aa = (a.1 - cy).atan2(a.0 - cx);
            let bb = (b.1 - cy).atan2(b.0 - cx);
            aa.partial_cmp(&bb).unwrap()
        });
        canvas.polygon(&pts, "fill:#cfe8cf;stroke:none");
    }
    for cell in &dc.cells {
        match cell_shape_2d(cell) {
            CellShape::Point(p) => {
                canvas.circle((rat_to_f64(&p[0]), rat_to_f64(&p[1])), 3.0, "fill:#333");
            }
            CellShape::Segment(p, q) => {
                canvas.line(
                    (rat_to_f64(&p[0]), rat_to_f64(&p[1])),
                    (rat_to_f64(&q[0]), rat_to_f64(&q[1])),
                    "stroke:#225;stroke-width:2",
                );
            }
            CellShape::Ray { base, dir } => {
                let b = (rat_to_f64(&base[0]), rat_to_f64(&base[1]));
                let d = (
                    dir[0].to_string().parse::<f64>().unwrap(),
                    dir[1].to_string().parse::<f64>().unwrap(),
                );
                if let Some((p, q)) = clip_ray(b, d, rect) {
                    canvas.line(p, q, "stroke:#822;stroke-width:2");
                }
            }
            CellShape::Line { base, dir } => {
                let b = (rat_to_f64(&base[0]), rat_to_f64(&base[1]));
                let d = (
                    dir[0].to_string().parse::<f64>().unwrap(),
                    dir[1].to_string().parse::<f64>().unwrap(),
                );
                for dd in [d, (-d.0, -d.1)] {
                    if let Some((p, q)) = clip_ray(b, dd, rect) {
                        canvas.line(p, q, "stroke:#822;stroke-width:2");
                    }
                }
            }
        }
    }
    canvas.render()
}

/// Cells as JSON with exact rational coordinates.
pub fn dual_complex_to_json(dc: &DualComplex) -> serde_json::Value {
    use serde_json::{json, Value};
    let cells: Vec<Value> = dc
        .cells
        .iter()
        .map(|c| {
            json!({
                "dual_simplex": {
                    "has_origin": c.dual_simplex.has_origin,
                    "cone": c.dual_simplex.cone,
                },
                "dim": c.dim,
                "equalities": c.equalities.iter().map(|(a, b)| json!({
                    "coeffs": crate::fan::lat_to_json(a),
                    "rhs": format_rat(b),
                })).collect::<Vec<_>>(),
                "inequalities": c.inequalities.iter().map(|(a, b)| json!({
                    "coeffs": crate::fan::lat_to_json(a),
                    "rhs": format_rat(b),
                })).collect::<Vec<_>>(),
                "witness": c.witness.iter().map(format_rat).collect::<Vec<_>>(),
            })
        })
        .collect();
    json!({
        "rank": dc.rank,
        "cells": cells,
        "incidence": dc.incidence,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::{lat, rat};
    use crate::fan::{StackyFan, StackyRay};
    use std::collections::BTreeMap;

    fn pl(entries: &[(&[i64], (i64, i64))]) -> PLFunction {
        let mut values = BTreeMap::new();
        for (p, (num, den)) in entries {
            values.insert(lat(p), rat(*num, *den));
        }
        PLFunction { values }
    }

    fn fan_a2() -> StackyFan {
        StackyFan::new(
            2,
            vec![
                StackyRay { primitive: lat(&[1, 0]), stacky: lat(&[1, 0]) },
                StackyRay { primitive: lat(&[0, 1]), stacky: lat(&[0, 1]) },
            ],
            vec![vec![0, 1]],
        )
    }

    fn fan_p2() -> StackyFan {
        StackyFan::new(
            2,
            vec![
                StackyRay { primitive: lat(&[1, 0]), stacky: lat(&[1, 0]) },
                StackyRay { primitive: lat(&[0, 1]), stacky: lat(&[0, 1]) },
                StackyRay { primitive: lat(&[-1, -1]), stacky: lat(&[-1, -1]) },
            ],
            vec![vec![0, 1], vec![1, 2], vec![0, 2]],
        )
    }

    fn fan_p1() -> StackyFan {
        StackyFan::new(
            1,
            vec![
                StackyRay { primitive: lat(&[1]), stacky: lat(&[1]) },
                StackyRay { primitive: lat(&[-1]), stacky: lat(&[-1]) },
            ],
            vec![vec![0], vec![1]],
        )
    }

    fn v_a2() -> PLFunction {
        pl(&[(&[0, 0], (0, 1)), (&[1, 0], (0, 1)), (&[0, 1], (0, 1))])
    }

    fn v_p2() -> PLFunction {
        pl(&[
            (&[0, 0], (-1, 1)),
            (&[1, 0], (0, 1)),
            (&[0, 1], (0, 1)),
            (&[-1, -1], (0, 1)),
        ])
    }

    #[test]
    fn legendre_examples() {
        let v = v_a2();
        let l1 = legendre(&v, &[rat(-3, 1), rat(-5, 1)]);
        assert_eq!(l1.value, rat(0, 1));
        assert_eq!(l1.argmax, vec![lat(&[0, 0])]);
        let l2 = legendre(&v, &[rat(2, 1), rat(1, 1)]);
        assert_eq!(l2.value, rat(2, 1));
        assert_eq!(l2.argmax, vec![lat(&[1, 0])]);
        let l3 = legendre(&v, &[rat(0, 1), rat(0, 1)]);
        assert_eq!(l3.value, rat(0, 1));
        assert_eq!(l3.argmax.len(), 3);
    }

    #[test]
    fn a2_spine_is_the_tropical_line() {
        let dc = dual_complex(&fan_a2(), &v_a2()).unwrap();
        assert_eq!(dc.cells.len(), 4);
        let mut ray_dirs: Vec<LatVec> = Vec::new();
        let mut points = 0;
        for c in &dc.cells {
            match cell_shape_2d(c) {
                CellShape::Point(p) => {
                    assert_eq!(p, vec![rat(0, 1), rat(0, 1)]);
                    points += 1;
                }
                CellShape::Ray { base, dir } => {
                    assert_eq!(base, vec![rat(0, 1), rat(0, 1)]);
                    ray_dirs.push(dir);
                }
                other => panic!("unexpected cell {:?}", other),
            }
        }
        assert_eq!(points, 1);
        ray_dirs.sort();
        assert_eq!(ray_dirs, vec![lat(&[-1, 0]), lat(&[0, -1]), lat(&[1, 1])]);
    }

    #[test]
    fn p2_spine_counts_and_geometry() {
        let dc = dual_complex(&fan_p2(), &v_p2()).unwrap();
        assert_eq!(dc.cells.len(), 9);
        let mut verts: Vec<RatVec> = Vec::new();
        let mut segments = 0;
        let mut ray_dirs: Vec<LatVec> = Vec::new();
        for c in &dc.cells {
            match cell_shape_2d(c) {
                CellShape::Point(p) => verts.push(p),
                CellShape::Segment(_, _) => segments += 1,
                CellShape::Ray { dir, .. } => ray_dirs.push(dir),
                CellShape::Line { .. } => panic!("no full lines in the spine"),
            }
        }
        verts.sort();
        ray_dirs.sort();
        assert_eq!(
            verts,
            vec![
                vec![rat(-2, 1), rat(1, 1)],
                vec![rat(1, 1), rat(-2, 1)],
                vec![rat(1, 1), rat(1, 1)],
            ]
        );
        assert_eq!(segments, 3);
        assert_eq!(ray_dirs, vec![lat(&[-2, 1]), lat(&[1, -2]), lat(&[1, 1])]);
    }

    #[test]
    fn p1_spine_is_two_points_bounding_a_segment() {
        let v = pl(&[(&[0], (-1, 1)), (&[1], (0, 1)), (&[-1], (0, 1))]);
        let dc = dual_complex(&fan_p1(), &v).unwrap();
        assert_eq!(dc.cells.len(), 2);
        let mut spots: Vec<RatVec> = dc.cells.iter().map(|c| c.witness.clone()).collect();
        spots.sort();
        assert_eq!(spots, vec![vec![rat(-1, 1)], vec![rat(1, 1)]]);
        // the two breakpoints bound the chamber where the origin wins
        let region = bounded_component(&dc);
        assert!(region.bounded);
        let mut vs = region.vertices.clone();
        vs.sort();
        assert_eq!(vs, vec![vec![rat(-1, 1)], vec![rat(1, 1)]]);
    }

    #[test]
    fn flat_certificate_is_rejected() {
        let v = pl(&[
            (&[0, 0], (0, 1)),
            (&[1, 0], (0, 1)),
            (&[0, 1], (0, 1)),
            (&[-1, -1], (0, 1)),
        ]);
        assert!(matches!(
            dual_complex(&fan_p2(), &v),
            Err(SpineError::WrongCertificate(_))
        ));
    }

    #[test]
    fn dimension_duality_holds() {
        let dc = dual_complex(&fan_p2(), &v_p2()).unwrap();
        for c in &dc.cells {
            assert_eq!(c.dim + c.dual_simplex.dim(), 2);
        }
    }

    #[test]
    fn p2_bounded_chamber_is_the_triangle() {
        let dc = dual_complex(&fan_p2(), &v_p2()).unwrap();
        let region = bounded_component(&dc);
        assert!(region.bounded);
        let mut vs = region.vertices.clone();
        vs.sort();
        assert_eq!(
            vs,
            vec![
                vec![rat(-2, 1), rat(1, 1)],
                vec![rat(1, 1), rat(-2, 1)],
                vec![rat(1, 1), rat(1, 1)],
            ]
        );
    }

    #[test]
    fn a2_chamber_is_unbounded_with_corner_at_origin() {
        let dc = dual_complex(&fan_a2(), &v_a2()).unwrap();
        let region = bounded_component(&dc);
        assert!(!region.bounded);
        // the corner survives as the exact-tight-everything face
        let faces = region_faces(&region);
        let corner = faces.iter().find(|f| f.tight == vec![0, 1]).unwrap();
        assert_eq!(corner.dim, 0);
        assert_eq!(corner.witness, vec![rat(0, 1), rat(0, 1)]);
    }

    #[test]
    fn p2_poset_antiequivalence() {
        let fan = fan_p2();
        let dc = dual_complex(&fan, &v_p2()).unwrap();
        let region = bounded_component(&dc);
        let report = poset_antiequivalence(&fan, &dc, &region);
        assert!(report.is_bijective());
        assert!(report.order_reversing);
        assert_eq!(report.matches.len(), 6);
        for m in &report.matches {
            assert!(m.argmax_matches);
            assert_eq!(m.dim, 2 - m.cone.len());
        }
    }

    #[test]
    fn p1_poset_antiequivalence() {
        let fan = fan_p1();
        let v = pl(&[(&[0], (-1, 1)), (&[1], (0, 1)), (&[-1], (0, 1))]);
        let dc = dual_complex(&fan, &v).unwrap();
        let region = bounded_component(&dc);
        assert!(region.bounded);
        let report = poset_antiequivalence(&fan, &dc, &region);
        assert!(report.is_bijective());
        assert_eq!(report.matches.len(), 2);
    }

    #[test]
    fn skew_triangle_fan_has_six_matched_faces() {
        let delta = crate::polyhedra::LatticePolytope::from_points(
            &[lat(&[-1, 0]), lat(&[0, -1]), lat(&[1, 1])],
            2,
        );
        let (fan, v) = crate::fan::knutson_construct(&delta, &[]).unwrap();
        let dc = dual_complex(&fan, &v).unwrap();
        let region = bounded_component(&dc);
        assert!(region.bounded);
        let report = poset_antiequivalence(&fan, &dc, &region);
        assert!(report.is_bijective());
        assert_eq!(report.matches.len(), 6);
    }

    #[test]
    fn legendre_convexity_spot_checks() {
        let v = v_p2();
        let pts = [
            (rat(1, 2), rat(-3, 7)),
            (rat(-2, 3), rat(5, 2)),
            (rat(4, 1), rat(1, 3)),
        ];
        for i in 0..pts.len() {
            for j in 0..pts.len() {
                let (a, b) = (&pts[i], &pts[j]);
                for t_num in 0..=4i64 {
                    let t = rat(t_num, 4);
                    let omt = rat(1, 1) - &t;
                    let mid = [
                        &t * &a.0 + &omt * &b.0,
                        &t * &a.1 + &omt * &b.1,
                    ];
                    let lm = legendre(&v, &mid).value;
                    let la = legendre(&v, &[a.0.clone(), a.1.clone()]).value;
                    let lb = legendre(&v, &[b.0.clone(), b.1.clone()]).value;
                    assert!(lm <= &t * la + &omt * lb);
                }
            }
        }
    }

    #[test]
    fn spine_svg_renders() {
        let dc = dual_complex(&fan_p2(), &v_p2()).unwrap();
        let region = bounded_component(&dc);
        let svg = render_spine_svg(&dc, &region);
        assert!(svg.starts_with("<svg"));
        assert!(svg.contains("<polygon"));
        assert!(svg.contains("<line"));
    }
}
