//! The conic Lagrangian skeleton as combinatorics: for each fan cone σ a
//! subtorus G_σ (homs killing the stacky primitives) with component group
//! Γ_σ, paired with the conormal sector −σ. Strata, closure order, subtorus
//! intersections, the sector cover, and the rank-2 drawing.

use crate::arith::{fract_mod1, rat_to_f64, Int, LatVec, Rat, RatVec};
use crate::fan::{quotient_fan, ConeId, StackyFan};
use crate::lattice::{quotient_group, smith_normal_form, solve_integer, IntegerMatrix};
use num_traits::{One, Signed, Zero};
use std::collections::BTreeMap;
use thiserror::Error;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum SkeletonError {
    #[error("skeleton drawing needs rank 2, got {0}")]
    RankUnsupported(usize),
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SkeletonStratum {
    pub cone: ConeId,
    /// canonical coset representative of the component in ℚⁿ/ℤⁿ
    pub component: RatVec,
    pub torus_dim: usize,
    pub conormal_dim: usize,
}

impl SkeletonStratum {
    pub fn is_boundary(&self) -> bool {
        !self.cone.is_empty()
    }
}

#[derive(Clone, Debug)]
pub struct SkeletonGraph {
    pub rank: usize,
    pub strata: Vec<SkeletonStratum>,
    /// (i, j): stratum j lies over stratum i (σᵢ ⊆ σⱼ and the j component
    /// sits inside the closure of the i component's subtorus coset)
    pub closure_order: Vec<(usize, usize)>,
    pub fan: StackyFan,
}

/// Canonical component representatives of G_σ for the given stacky
/// primitives: Smith coordinates j/dᵢ pushed back through Uᵀ, free
/// directions pinned at 0, enumerated in label-lexicographic order.
pub fn component_reps(stacky: &[LatVec], rank: usize) -> Vec<RatVec> {
    if stacky.is_empty() {
        return vec![vec![Rat::zero(); rank]];
    }
    let b = IntegerMatrix::from_columns(rank, stacky);
    let snf = smith_normal_form(&b);
    let k = stacky.len();
    let divisors: Vec<Int> = (0..k).map(|i| snf.divisors[i].clone()).collect();
    assert!(
        divisors.iter().all(|d| d.is_positive()),
        "stacky primitives of a simplicial cone are independent"
    );
    let mut labels: Vec<Vec<Int>> = vec![Vec::new()];
    for d in &divisors {
        let mut next = Vec::new();
        let di = i64::try_from(d).expect("desk-scale divisor");
        for prefix in &labels {
            for j in 0..di {
                let mut l = prefix.clone();
                l.push(Int::from(j));
                next.push(l);
            }
        }
        labels = next;
    }
    labels
        .into_iter()
        .map(|label| {
            // z has j/d in the first k Smith coordinates, 0 beyond; x = Uᵀ z.
            let z: Vec<Rat> = (0..rank)
                .map(|i| {
                    if i < k {
                        Rat::new(label[i].clone(), divisors[i].clone())
                    } else {
                        Rat::zero()
                    }
                })
                .collect();
            (0..rank)
                .map(|j| {
                    let mut acc = Rat::zero();
                    for (i, zi) in z.iter().enumerate() {
                        acc += Rat::from_integer(snf.u.at(i, j).clone()) * zi;
                    }
                    fract_mod1(&acc)
                })
                .collect()
        })
        .collect()
}

/// Are two points of G_σ in the same component? Exact test: the difference
/// must pair integrally with the stacky primitives via some lattice shift.
pub fn same_component(stacky: &[LatVec], a: &[Rat], b: &[Rat]) -> bool {
    if stacky.is_empty() {
        return true;
    }
    let rank = a.len();
    let rows = IntegerMatrix::from_rows(stacky);
    let mut rhs: LatVec = Vec::new();
    for beta in stacky {
        let v: Rat = beta
            .iter()
            .zip(a.iter().zip(b))
            .map(|(c, (x, y))| Rat::from_integer(c.clone()) * (x - y))
            .sum();
        assert!(
            v.denom().is_one(),
            "both points must pair integrally with the stacky primitives"
        );
        rhs.push(v.numer().clone());
    }
    let _ = rank;
    solve_integer(&rows, &rhs).is_some()
}

pub fn build_skeleton(fan: &StackyFan) -> SkeletonGraph {
    let n = fan.rank;
    let mut strata = Vec::new();
    for cone in fan.all_cones() {
        let reps = component_reps(&fan.stacky_points(cone), n);
        for rep in reps {
            strata.push(SkeletonStratum {
                cone: cone.clone(),
                component: rep,
                torus_dim: n - cone.len(),
                conormal_dim: cone.len(),
            });
        }
    }
    let mut closure_order = Vec::new();
    for (i, a) in strata.iter().enumerate() {
        for (j, b) in strata.iter().enumerate() {
            if i == j || a.cone == b.cone {
                continue;
            }
            if !a.cone.iter().all(|r| b.cone.contains(r)) {
                continue;
            }
            let stacky_a = fan.stacky_points(&a.cone);
            if same_component(&stacky_a, &b.component, &a.component) {
                closure_order.push((i, j));
            }
        }
    }
    SkeletonGraph {
        rank: n,
        strata,
        closure_order,
        fan: fan.clone(),
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SubtorusIntersection {
    pub cones: (ConeId, ConeId),
    pub free_rank: usize,
    pub torsion: Vec<Int>,
}

impl SubtorusIntersection {
    pub fn component_count(&self) -> Int {
        self.torsion.iter().fold(Int::one(), |a, d| a * d)
    }

    /// Total point count when the intersection is finite.
    pub fn point_count(&self) -> Option<Int> {
        (self.free_rank == 0).then(|| self.component_count())
    }
}

/// G_σ ∩ G_τ: homs killing the stacky primitives of both cones.
pub fn subtorus_intersections(fan: &StackyFan, sigma: &[usize], tau: &[usize]) -> SubtorusIntersection {
    let mut rays: Vec<usize> = sigma.iter().chain(tau).copied().collect();
    rays.sort_unstable();
    rays.dedup();
    let betas = fan.stacky_points(&rays);
    let (free_rank, torsion) = quotient_group(&betas, fan.rank);
    SubtorusIntersection {
        cones: (sigma.to_vec(), tau.to_vec()),
        free_rank,
        torsion,
    }
}

#[derive(Clone, Debug)]
pub struct SectorRestriction {
    pub sigma: ConeId,
    /// strata of the full skeleton sitting over −σ°, i.e. with cone ⊇ σ
    pub strata_count: usize,
    /// strata of the quotient-fan skeleton
    pub quotient_strata_count: usize,
    pub gamma_order: Int,
    pub poset_isomorphic: bool,
}

#[derive(Clone, Debug)]
pub struct SectorCoverReport {
    pub restrictions: Vec<SectorRestriction>,
    pub pairwise_law_holds: bool,
}

impl SectorCoverReport {
    pub fn all_isomorphic(&self) -> bool {
        self.restrictions.iter().all(|r| r.poset_isomorphic)
    }
}

/// For every nonzero σ: check that the skeleton restricted over −σ° is the
/// skeleton of the quotient fan with Γ_σ-many fibers (counts per cone and
/// closure edges both match), and that the sector index sets obey
/// V_σ ∩ V_τ = V_{σ∧τ}.
pub fn sector_cover(fan: &StackyFan) -> SectorCoverReport {
    let full = build_skeleton(fan);
    let mut restrictions = Vec::new();
    for sigma in fan.all_cones().to_vec() {
        if sigma.is_empty() {
            continue;
        }
        let gamma_order = fan.sector_order(&sigma);
        let qf = quotient_fan(fan, &sigma);
        let qskel = build_skeleton(&qf.fan);
        let image: BTreeMap<ConeId, ConeId> = qf.cone_images.iter().cloned().collect();
        let star: Vec<ConeId> = fan.star(&sigma);

        let mut ok = true;
        // image map must be an order isomorphism star(σ) → cones of Σ(σ)
        let mut images: Vec<ConeId> = image.values().cloned().collect();
        images.sort();
        images.dedup();
        let mut qcones: Vec<ConeId> = qf.fan.all_cones().to_vec();
        qcones.sort();
        if images != qcones || image.len() != star.len() {
            ok = false;
        }
        for a in &star {
            for b in &star {
                let sub_full = a.iter().all(|r| b.contains(r));
                let sub_q = image[a].iter().all(|r| image[b].contains(r));
                if sub_full != sub_q {
                    ok = false;
                }
            }
        }
        // component counts multiply by |Γ_σ|
        let count_full = |c: &ConeId| {
            full.strata
                .iter()
                .filter(|s| &s.cone == c)
                .count()
        };
        let count_q = |c: &ConeId| qskel.strata.iter().filter(|s| &s.cone == c).count();
        for tau in &star {
            let lhs = Int::from(count_full(tau));
            let rhs = &gamma_order * Int::from(count_q(&image[tau]));
            if lhs != rhs {
                ok = false;
            }
        }
        // closure edges between cone pairs match with the same Γ_σ factor
        let edges_between = |skel: &SkeletonGraph, a: &ConeId, b: &ConeId| {
            skel.closure_order
                .iter()
                .filter(|(i, j)| &skel.strata[*i].cone == a && &skel.strata[*j].cone == b)
                .count()
        };
        for a in &star {
            for b in &star {
                let lhs = Int::from(edges_between(&full, a, b));
                let rhs = &gamma_order * Int::from(edges_between(&qskel, &image[a], &image[b]));
                if lhs != rhs {
                    ok = false;
                }
            }
        }
        restrictions.push(SectorRestriction {
            sigma: sigma.clone(),
            strata_count: star.iter().map(|c| count_full(c)).sum(),
            quotient_strata_count: qskel.strata.len(),
            gamma_order,
            poset_isomorphic: ok,
        });
    }
    // V_σ ∩ V_τ = V_{σ∧τ} on index sets of cones.
    let mut law = true;
    let nonzero: Vec<ConeId> = fan
        .all_cones()
        .iter()
        .filter(|c| !c.is_empty())
        .cloned()
        .collect();
    for a in &nonzero {
        for b in &nonzero {
            let va: Vec<ConeId> = fan.star(a);
            let vb: Vec<ConeId> = fan.star(b);
            let inter: Vec<ConeId> = va.iter().filter(|c| vb.contains(c)).cloned().collect();
            match crate::fan::wedge(fan, a, b) {
                Some(w) => {
                    if inter != fan.star(&w) {
                        law = false;
                    }
                }
                None => {
                    if !inter.is_empty() {
                        law = false;
                    }
                }
            }
        }
    }
    SectorCoverReport {
        restrictions,
        pairwise_law_holds: law,
    }
}

/// The skeleton is stored with cones σ; the rendered conormal data is −σ.
/// Negating every stacky primitive must give the mirror-image skeleton with
/// identical counts; this checks that involution.
pub fn negation_involution_holds(fan: &StackyFan) -> bool {
    let neg = StackyFan::new(
        fan.rank,
        fan.rays
            .iter()
            .map(|r| crate::fan::StackyRay {
                primitive: r.primitive.iter().map(|c| -c).collect(),
                stacky: r.stacky.iter().map(|c| -c).collect(),
            })
            .collect(),
        fan.maximal_cones.clone(),
    );
    let a = build_skeleton(fan);
    let b = build_skeleton(&neg);
    if a.strata.len() != b.strata.len() || a.closure_order.len() != b.closure_order.len() {
        return false;
    }
    let mut ca: Vec<(ConeId, RatVec)> = a
        .strata
        .iter()
        .map(|s| (s.cone.clone(), s.component.clone()))
        .collect();
    // components of the negated skeleton are the negated components
    let mut cb: Vec<(ConeId, RatVec)> = b
        .strata
        .iter()
        .map(|s| {
            (
                s.cone.clone(),
                s.component.iter().map(|c| fract_mod1(&-c)).collect(),
            )
        })
        .collect();
    ca.sort();
    cb.sort();
    ca == cb
}

pub fn skeleton_to_json(g: &SkeletonGraph) -> serde_json::Value {
    use serde_json::{json, Value};
    let strata: Vec<Value> = g
        .strata
        .iter()
        .map(|s| {
            json!({
                "cone": s.cone,
                "component": s.component.iter().map(crate::arith::format_rat).collect::<Vec<_>>(),
                "dims": [s.torus_dim, s.conormal_dim],
                "boundary": s.is_boundary(),
            })
        })
        .collect();
    json!({
        "rank": g.rank,
        "strata": strata,
        "closure_order": g.closure_order,
    })
}

/// Draw the rank-2 skeleton on the fundamental square [0,1]²: each ray's
/// subtorus as wrapped lines with conormal hair ticks on the −σ side, and a
/// disk for every point of each 2-cone subtorus (corners wrap).
pub fn render_skeleton_2d(g: &SkeletonGraph) -> Result<String, SkeletonError> {
    if g.rank != 2 {
        return Err(SkeletonError::RankUnsupported(g.rank));
    }
    let fan = &g.fan;
    let mut canvas = crate::svg::SvgCanvas::new(-0.08, -0.08, 1.08, 1.08, 240.0);
    canvas.polygon(
        &[(0.0, 0.0), (1.0, 0.0), (1.0, 1.0), (0.0, 1.0)],
        "fill:none;stroke:#999;stroke-width:1",
    );
    for cone in fan.all_cones().to_vec() {
        if cone.len() != 1 {
            continue;
        }
        let beta = &fan.stacky_points(&cone)[0];
        let (b1, b2) = (
            i64::try_from(&beta[0]).expect("desk scale"),
            i64::try_from(&beta[1]).expect("desk scale"),
        );
        let (b1f, b2f) = (b1 as f64, b2 as f64);
        // lines ⟨β, x⟩ = c crossing the square
        let corner_vals = [0.0, b1f, b2f, b1f + b2f];
        let lo = corner_vals.iter().cloned().fold(f64::INFINITY, f64::min).floor() as i64;
        let hi = corner_vals.iter().cloned().fold(f64::NEG_INFINITY, f64::max).ceil() as i64;
        let norm = (b1f * b1f + b2f * b2f).sqrt();
        for c in lo..=hi {
            let cf = c as f64;
            // clip the line to the unit square by intersecting with its edges
            let mut pts: Vec<(f64, f64)> = Vec::new();
            let mut push = |x: f64, y: f64| {
                if (-1e-9..=1.0 + 1e-9).contains(&x) && (-1e-9..=1.0 + 1e-9).contains(&y) {
                    if !pts.iter().any(|&(px, py): &(f64, f64)| {
                        (px - x).abs() < 1e-9 && (py - y).abs() < 1e-9
                    }) {
                        pts.push((x, y));
                    }
                }
            };
            if b2 != 0 {
                push(0.0, cf / b2f);
                push(1.0, (cf - b1f) / b2f);
            }
            if b1 != 0 {
                push(cf / b1f, 0.0);
                push((cf - b2f) / b1f, 1.0);
            }
            if pts.len() < 2 {
                continue;
            }
            let (p, q) = (pts[0], pts[1]);
            canvas.line(p, q, "stroke:#225;stroke-width:1.6");
            // conormal hairs pointing along −β
            let (hx, hy) = (-b1f / norm * 0.035, -b2f / norm * 0.035);
            for t in [0.3, 0.5, 0.7] {
                let m = (p.0 + (q.0 - p.0) * t, p.1 + (q.1 - p.1) * t);
                canvas.line(m, (m.0 + hx, m.1 + hy), "stroke:#822;stroke-width:1.2");
            }
        }
    }
    for cone in fan.all_cones().to_vec() {
        if cone.len() != 2 {
            continue;
        }
        for rep in component_reps(&fan.stacky_points(&cone), 2) {
            let (x, y) = (rat_to_f64(&rep[0]), rat_to_f64(&rep[1]));
            let mut xs = vec![x];
            let mut ys = vec![y];
            if x.abs() < 1e-9 {
                xs.push(1.0);
            }
            if y.abs() < 1e-9 {
                ys.push(1.0);
            }
            for &px in &xs {
                for &py in &ys {
                    canvas.circle((px, py), 4.0, "fill:#225");
                }
            }
        }
    }
    Ok(canvas.render())
}
