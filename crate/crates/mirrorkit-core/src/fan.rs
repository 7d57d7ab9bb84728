//! Stacky fans: simplicial fans with a chosen integer point along each ray.
//! Validation, regularity (quasiprojectivity) certificates, fans built from
//! polytopes by star triangulation, quotient fans along cone directions, and
//! the closed cover of the toric boundary.

use crate::arith::{dot, fract_mod1, primitivize, Int, LatVec, Rat, RatVec};
use crate::fm::{fm_feasible, solve_affine, Feasibility, LinIneq};
use crate::lattice::{quotient_group, smith_normal_form, IntegerMatrix};
use crate::polyhedra::{lattice_rank, ConeData, LatticePolytope};
use num_traits::{One, Signed, Zero};
use std::collections::{BTreeMap, BTreeSet};
use std::sync::OnceLock;
use thiserror::Error;

/// Sorted ray-index set naming a cone of the fan.
pub type ConeId = Vec<usize>;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct StackyRay {
    pub primitive: LatVec,
    pub stacky: LatVec,
}

#[derive(Clone, Debug)]
pub struct StackyFan {
    pub rank: usize,
    pub rays: Vec<StackyRay>,
    pub maximal_cones: Vec<ConeId>,
    cones: OnceLock<Vec<ConeId>>,
}

impl PartialEq for StackyFan {
    fn eq(&self, other: &Self) -> bool {
        self.rank == other.rank
            && self.rays == other.rays
            && self.maximal_cones == other.maximal_cones
    }
}
impl Eq for StackyFan {}

#[derive(Debug, Error, PartialEq, Eq)]
pub enum FanError {
    #[error("cones do not triangulate the polytope: {0}")]
    NotATriangulation(String),
    #[error("the origin does not lie in the polytope")]
    OriginOutside,
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Violation {
    #[error("ray {ray} primitive vector is not primitive")]
    NonPrimitiveRay { ray: usize },
    #[error("ray {ray} stacky point is not a positive integer multiple of the primitive")]
    StackyOffRay { ray: usize },
    #[error("rays {a} and {b} share a primitive vector")]
    DuplicateRay { a: usize, b: usize },
    #[error("cone {cone:?} has linearly dependent rays")]
    NonSimplicialCone { cone: ConeId },
    #[error("maximal cone entry {cone_pos} names a ray that does not exist")]
    BadRayIndex { cone_pos: usize },
    #[error("maximal cone {a:?} is contained in {b:?}")]
    RedundantMaximalCone { a: ConeId, b: ConeId },
    #[error("cones {a:?} and {b:?} do not intersect in a common face")]
    FaceIntersectionFailure { a: ConeId, b: ConeId },
}

#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct ValidationReport {
    pub violations: Vec<Violation>,
}

impl ValidationReport {
    pub fn is_valid(&self) -> bool {
        self.violations.is_empty()
    }
}

/// Exact rational values at the origin and every stacky primitive; the
/// piecewise-linear extension lives on the fan's simplices.
#[derive(Clone, Debug, PartialEq, Eq, Default)]
pub struct PLFunction {
    pub values: BTreeMap<LatVec, Rat>,
}

impl PLFunction {
    pub fn value(&self, p: &LatVec) -> Option<&Rat> {
        self.values.get(p)
    }
}

/// An interior wall: an (n−1)-dimensional cone shared by exactly two
/// maximal cones.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Wall {
    pub shared: ConeId,
    pub left: ConeId,
    pub right: ConeId,
}

#[derive(Clone, Debug)]
pub struct QuasiprojectivityResult {
    pub quasiprojective: bool,
    pub certificate: Option<PLFunction>,
    /// Walls appearing in a dead-end combination of the strict system.
    pub infeasible_walls: Option<Vec<Wall>>,
}

impl StackyFan {
    pub fn new(rank: usize, rays: Vec<StackyRay>, maximal_cones: Vec<ConeId>) -> Self {
        let mut cones: Vec<ConeId> = maximal_cones
            .into_iter()
            .map(|mut c| {
                c.sort_unstable();
                c.dedup();
                c
            })
            .collect();
        cones.sort();
        cones.dedup();
        StackyFan {
            rank,
            rays,
            maximal_cones: cones,
            cones: OnceLock::new(),
        }
    }

    /// Every cone of the fan (all faces of maximal cones, including the
    /// origin), ordered by dimension then lexicographically.
    pub fn all_cones(&self) -> &[ConeId] {
        self.cones.get_or_init(|| {
            let mut seen: BTreeSet<ConeId> = BTreeSet::new();
            for mc in &self.maximal_cones {
                let k = mc.len();
                for mask in 0u64..(1u64 << k) {
                    let face: ConeId = (0..k).filter(|i| mask >> i & 1 == 1).map(|i| mc[i]).collect();
                    seen.insert(face);
                }
            }
            let mut out: Vec<ConeId> = seen.into_iter().collect();
            out.sort_by(|a, b| (a.len(), a.clone()).cmp(&(b.len(), b.clone())));
            out
        })
    }

    pub fn contains_cone(&self, id: &[usize]) -> bool {
        self.all_cones().iter().any(|c| c == id)
    }

    /// Cones of the fan containing the given one.
    pub fn star(&self, id: &[usize]) -> Vec<ConeId> {
        self.all_cones()
            .iter()
            .filter(|c| id.iter().all(|r| c.contains(r)))
            .cloned()
            .collect()
    }

    pub fn cone(&self, id: &[usize]) -> ConeData {
        let rays: Vec<LatVec> = id.iter().map(|&r| self.rays[r].primitive.clone()).collect();
        ConeData::from_rays(&rays, self.rank)
    }

    pub fn stacky_points(&self, id: &[usize]) -> Vec<LatVec> {
        id.iter().map(|&r| self.rays[r].stacky.clone()).collect()
    }

    /// Component group data Γ_σ: invariant factors (>1) of ℤ^n / ⟨stacky primitives of σ⟩.
    pub fn sector_torsion(&self, id: &[usize]) -> Vec<Int> {
        quotient_group(&self.stacky_points(id), self.rank).1
    }

    pub fn sector_order(&self, id: &[usize]) -> Int {
        self.sector_torsion(id)
            .iter()
            .fold(Int::one(), |acc, d| acc * d)
    }
}

pub fn validate(fan: &StackyFan) -> ValidationReport {
    let mut violations = Vec::new();
    for (i, ray) in fan.rays.iter().enumerate() {
        if ray.primitive.iter().all(|c| c.is_zero())
            || primitivize(&ray.primitive) != ray.primitive
        {
            violations.push(Violation::NonPrimitiveRay { ray: i });
            continue;
        }
        if !stacky_multiple(&ray.primitive, &ray.stacky) {
            violations.push(Violation::StackyOffRay { ray: i });
        }
    }
    for a in 0..fan.rays.len() {
        for b in a + 1..fan.rays.len() {
            if fan.rays[a].primitive == fan.rays[b].primitive {
                violations.push(Violation::DuplicateRay { a, b });
            }
        }
    }
    for (pos, mc) in fan.maximal_cones.iter().enumerate() {
        if mc.iter().any(|&r| r >= fan.rays.len()) {
            violations.push(Violation::BadRayIndex { cone_pos: pos });
        }
    }
    if !violations.is_empty() {
        return ValidationReport { violations };
    }
    for mc in &fan.maximal_cones {
        let rays: Vec<LatVec> = mc.iter().map(|&r| fan.rays[r].primitive.clone()).collect();
        if lattice_rank(&rays) != mc.len() {
            violations.push(Violation::NonSimplicialCone { cone: mc.clone() });
        }
    }
    if !violations.is_empty() {
        return ValidationReport { violations };
    }
    for (i, a) in fan.maximal_cones.iter().enumerate() {
        for b in fan.maximal_cones.iter().skip(i + 1) {
            if a.iter().all(|r| b.contains(r)) {
                violations.push(Violation::RedundantMaximalCone {
                    a: a.clone(),
                    b: b.clone(),
                });
                continue;
            }
            if b.iter().all(|r| a.contains(r)) {
                violations.push(Violation::RedundantMaximalCone {
                    a: b.clone(),
                    b: a.clone(),
                });
                continue;
            }
            let ca = fan.cone(a);
            let cb = fan.cone(b);
            let mut ineqs = ca.inequalities.clone();
            ineqs.extend(cb.inequalities.clone());
            let inter_rays = crate::fm::dual_generators(&ineqs, fan.rank);
            let inter = ConeData::from_rays(&inter_rays, fan.rank);
            let common: ConeId = a.iter().copied().filter(|r| b.contains(r)).collect();
            let common_cone = fan.cone(&common);
            if !inter.same_cone(&common_cone) {
                violations.push(Violation::FaceIntersectionFailure {
                    a: a.clone(),
                    b: b.clone(),
                });
            }
        }
    }
    ValidationReport { violations }
}

fn stacky_multiple(primitive: &LatVec, stacky: &LatVec) -> bool {
    let Some(i) = primitive.iter().position(|c| !c.is_zero()) else {
        return false;
    };
    let (q, r) = num_integer::div_rem(stacky[i].clone(), primitive[i].clone());
    if !r.is_zero() || !q.is_positive() {
        return false;
    }
    stacky
        .iter()
        .zip(primitive)
        .all(|(s, p)| s == &(&q * p))
}

/// The smallest fan cone containing both, if any.
pub fn wedge(fan: &StackyFan, a: &[usize], b: &[usize]) -> Option<ConeId> {
    let mut union: ConeId = a.to_vec();
    union.extend_from_slice(b);
    union.sort_unstable();
    union.dedup();
    let candidates: Vec<&ConeId> = fan
        .all_cones()
        .iter()
        .filter(|c| union.iter().all(|r| c.contains(r)))
        .collect();
    candidates
        .into_iter()
        .min_by_key(|c| c.len())
        .cloned()
}

/// All interior walls of the fan, sorted by shared ray set.
pub fn interior_walls(fan: &StackyFan) -> Vec<Wall> {
    let mut seen: BTreeSet<ConeId> = BTreeSet::new();
    let mut walls = Vec::new();
    for mc in &fan.maximal_cones {
        for skip in mc {
            let sub: ConeId = mc.iter().copied().filter(|r| r != skip).collect();
            if !seen.insert(sub.clone()) {
                continue;
            }
            let owners: Vec<&ConeId> = fan
                .maximal_cones
                .iter()
                .filter(|c| sub.iter().all(|r| c.contains(r)))
                .collect();
            if owners.len() == 2 {
                walls.push(Wall {
                    shared: sub,
                    left: owners[0].clone(),
                    right: owners[1].clone(),
                });
            }
        }
    }
    walls.sort_by(|a, b| a.shared.cmp(&b.shared));
    walls
}

/// Affine coordinates of `target` with respect to the affinely independent
/// points `simplex` (they sum to 1).
fn barycentric(simplex: &[LatVec], target: &LatVec) -> Option<Vec<Rat>> {
    let n = target.len();
    let k = simplex.len();
    let mut eqs: Vec<(RatVec, Rat)> = Vec::new();
    for coord in 0..n {
        let row: RatVec = simplex
            .iter()
            .map(|p| Rat::from_integer(p[coord].clone()))
            .collect();
        eqs.push((row, Rat::from_integer(target[coord].clone())));
    }
    eqs.push((vec![Rat::one(); k], Rat::one()));
    let sol = solve_affine(&eqs, k)?;
    if !sol.basis.is_empty() {
        return None;
    }
    Some(sol.point)
}

/// Points the PL data must cover: the origin and every stacky primitive.
pub fn support_points(fan: &StackyFan) -> Vec<LatVec> {
    let mut pts = vec![vec![Int::zero(); fan.rank]];
    for r in &fan.rays {
        pts.push(r.stacky.clone());
    }
    pts.sort();
    pts.dedup();
    pts
}

/// Strict-convexity margins of a PL function across each interior wall:
/// v(opposite vertex) minus the affine extension from the neighbouring
/// simplex. All margins positive ⇔ the function certifies regularity.
pub fn certificate_margins(fan: &StackyFan, pl: &PLFunction) -> Result<Vec<(Wall, Rat)>, String> {
    let origin = vec![Int::zero(); fan.rank];
    for p in support_points(fan) {
        if !pl.values.contains_key(&p) {
            return Err(format!("certificate is missing a value at {:?}", p));
        }
    }
    let mut out = Vec::new();
    for wall in interior_walls(fan) {
        let mut simplex = vec![origin.clone()];
        simplex.extend(fan.stacky_points(&wall.left));
        let opposite_ray = wall
            .right
            .iter()
            .copied()
            .find(|r| !wall.shared.contains(r))
            .expect("wall sides differ by one ray");
        let target = fan.rays[opposite_ray].stacky.clone();
        let lambda = barycentric(&simplex, &target)
            .ok_or_else(|| "wall simplex is degenerate".to_string())?;
        let mut extension = Rat::zero();
        for (l, p) in lambda.iter().zip(&simplex) {
            extension += l * pl.values.get(p).unwrap();
        }
        let margin = pl.values.get(&target).unwrap() - extension;
        out.push((wall, margin));
    }
    Ok(out)
}

/// Check that the fan's simplices (each coned off the origin) triangulate
/// Δ^∨ = conv(stacky primitives ∪ {0}): every facet of every simplex is
/// either shared by exactly two simplices or supports the polytope.
fn triangulation_check(fan: &StackyFan) -> Result<(), FanError> {
    let n = fan.rank;
    let origin = vec![Int::zero(); n];
    let mut hull_pts = support_points(fan);
    hull_pts.push(origin.clone());
    hull_pts.sort();
    hull_pts.dedup();
    for mc in &fan.maximal_cones {
        if mc.len() != n {
            return Err(FanError::NotATriangulation(format!(
                "cone {:?} is not full-dimensional",
                mc
            )));
        }
    }
    if fan.maximal_cones.is_empty() {
        return Err(FanError::NotATriangulation("fan has no maximal cones".into()));
    }
    for mc in &fan.maximal_cones {
        // Facets through the origin: drop one ray.
        for skip in mc {
            let sub: ConeId = mc.iter().copied().filter(|r| r != skip).collect();
            let owners = fan
                .maximal_cones
                .iter()
                .filter(|c| sub.iter().all(|r| c.contains(r)))
                .count();
            match owners {
                2 => {}
                1 => {
                    let mut pts = vec![origin.clone()];
                    pts.extend(fan.stacky_points(&sub));
                    if !supports_hull(&pts, &hull_pts, n) {
                        return Err(FanError::NotATriangulation(format!(
                            "facet {:?} of cone {:?} is interior but unshared",
                            sub, mc
                        )));
                    }
                }
                k => {
                    return Err(FanError::NotATriangulation(format!(
                        "facet {:?} lies in {} maximal cones",
                        sub, k
                    )));
                }
            }
        }
        // The outer facet must lie on the polytope boundary.
        let pts = fan.stacky_points(mc);
        if !supports_hull(&pts, &hull_pts, n) {
            return Err(FanError::NotATriangulation(format!(
                "outer facet of cone {:?} cuts through the polytope",
                mc
            )));
        }
    }
    Ok(())
}

/// Do the given points span a hyperplane with every hull point weakly on
/// one side?
fn supports_hull(face_pts: &[LatVec], hull_pts: &[LatVec], n: usize) -> bool {
    let base = &face_pts[0];
    let eqs: Vec<(RatVec, Rat)> = face_pts[1..]
        .iter()
        .map(|p| {
            let row: RatVec = p
                .iter()
                .zip(base)
                .map(|(a, b)| Rat::from_integer(a - b))
                .collect();
            (row, Rat::zero())
        })
        .collect();
    let Some(sol) = solve_affine(&eqs, n) else {
        return false;
    };
    if sol.basis.len() != 1 {
        return false;
    }
    let normal = crate::fm::integral_direction(&sol.basis[0]);
    let mut saw_pos = false;
    let mut saw_neg = false;
    for p in hull_pts {
        let diff: LatVec = p.iter().zip(base).map(|(a, b)| a - b).collect();
        let v = dot(&normal, &diff);
        if v.is_positive() {
            saw_pos = true;
        } else if v.is_negative() {
            saw_neg = true;
        }
    }
    !(saw_pos && saw_neg)
}

/// Decide regularity: search for a PL function strictly convex across every
/// interior wall (strictness normalized to margin ≥ 1, which scaling makes
/// lossless). Returns a certificate or the walls in a contradictory
/// combination.
pub fn is_quasiprojective(fan: &StackyFan) -> Result<QuasiprojectivityResult, FanError> {
    triangulation_check(fan)?;
    let origin = vec![Int::zero(); fan.rank];
    let points = support_points(fan);
    let var_of: BTreeMap<LatVec, usize> = points
        .iter()
        .cloned()
        .enumerate()
        .map(|(i, p)| (p, i))
        .collect();
    let nvars = points.len();
    let walls = interior_walls(fan);
    let mut ineqs: Vec<LinIneq> = Vec::new();
    for wall in &walls {
        let mut simplex = vec![origin.clone()];
        simplex.extend(fan.stacky_points(&wall.left));
        let opposite_ray = wall
            .right
            .iter()
            .copied()
            .find(|r| !wall.shared.contains(r))
            .expect("wall sides differ by one ray");
        let target = fan.rays[opposite_ray].stacky.clone();
        let lambda = barycentric(&simplex, &target).expect("valid fan wall");
        // extension − v(target) ≤ −1
        let mut coeffs = vec![Rat::zero(); nvars];
        for (l, p) in lambda.iter().zip(&simplex) {
            coeffs[var_of[p]] += l;
        }
        coeffs[var_of[&target]] -= Rat::one();
        ineqs.push(LinIneq::new(coeffs, -Rat::one()));
    }
    let n_wall_ineqs = ineqs.len();
    // Gauge: pin the certificate to 0 on the lex-first maximal simplex.
    if let Some(first) = fan.maximal_cones.first() {
        for p in fan.stacky_points(first) {
            let mut row = vec![Rat::zero(); nvars];
            row[var_of[&p]] = Rat::one();
            ineqs.push(LinIneq::new(row.clone(), Rat::zero()));
            let neg: RatVec = row.iter().map(|c| -c).collect();
            ineqs.push(LinIneq::new(neg, Rat::zero()));
        }
    }
    match fm_feasible(&ineqs, nvars) {
        Feasibility::Feasible(sol) => {
            let values: BTreeMap<LatVec, Rat> = points
                .iter()
                .cloned()
                .zip(sol.iter().cloned())
                .collect();
            Ok(QuasiprojectivityResult {
                quasiprojective: true,
                certificate: Some(PLFunction { values }),
                infeasible_walls: None,
            })
        }
        Feasibility::Infeasible(support) => {
            let bad: Vec<Wall> = support
                .into_iter()
                .filter(|&i| i < n_wall_ineqs)
                .map(|i| walls[i].clone())
                .collect();
            Ok(QuasiprojectivityResult {
                quasiprojective: false,
                certificate: None,
                infeasible_walls: Some(bad),
            })
        }
    }
}

/// Star-triangulate a polytope containing the origin and return the fan over
/// the triangulation together with a certifying PL function. Boundary facets
/// are subdivided at the given extra lattice points (rank ≤ 2).
pub fn knutson_construct(
    delta: &LatticePolytope,
    extra_facet_points: &[LatVec],
) -> Result<(StackyFan, PLFunction), FanError> {
    let n = delta.ambient_rank;
    assert!(n <= 2, "polytope-to-fan construction is implemented for rank ≤ 2");
    let origin = vec![Int::zero(); n];
    let origin_rat: RatVec = origin.iter().map(|c| Rat::from_integer(c.clone())).collect();
    if !delta.contains(&origin_rat) {
        return Err(FanError::OriginOutside);
    }
    // Boundary simplices (vertex lists) from facets not containing 0,
    // each split at the extra points lying on it.
    let mut boundary: Vec<Vec<LatVec>> = Vec::new();
    let facets = delta.facets();
    assert!(!facets.is_empty(), "polytope must be full-dimensional");
    for f in &facets {
        if dot(&f.normal, &origin) == f.offset {
            continue; // facet through the origin: flattened by the star
        }
        let verts: Vec<LatVec> = f.vertex_ids.iter().map(|&i| delta.vertices[i].clone()).collect();
        if n == 1 {
            boundary.push(verts);
            continue;
        }
        let a = verts[0].clone();
        let b = verts[1].clone();
        let dir: LatVec = b.iter().zip(&a).map(|(x, y)| x - y).collect();
        let prim = primitivize(&dir);
        let len = (0..n)
            .find_map(|i| {
                if prim[i].is_zero() {
                    None
                } else {
                    Some(&dir[i] / &prim[i])
                }
            })
            .expect("edge has positive length");
        let mut stops: Vec<Int> = vec![Int::zero(), len.clone()];
        for e in extra_facet_points {
            if dot(&f.normal, e) != f.offset {
                continue;
            }
            let de: LatVec = e.iter().zip(&a).map(|(x, y)| x - y).collect();
            let Some(i) = (0..n).find(|&i| !prim[i].is_zero()) else {
                continue;
            };
            let (t, rem) = num_integer::div_rem(de[i].clone(), prim[i].clone());
            if !rem.is_zero() || de != prim.iter().map(|c| c * &t).collect::<LatVec>() {
                continue;
            }
            if t.is_positive() && t < len {
                stops.push(t);
            }
        }
        stops.sort();
        stops.dedup();
        for w in stops.windows(2) {
            let p: LatVec = a.iter().zip(&prim).map(|(x, d)| x + d * &w[0]).collect();
            let q: LatVec = a.iter().zip(&prim).map(|(x, d)| x + d * &w[1]).collect();
            boundary.push(vec![p, q]);
        }
    }
    // Rays: every boundary vertex, as a stacky point on its primitive ray.
    let mut stacky_pts: Vec<LatVec> = boundary.iter().flatten().cloned().collect();
    stacky_pts.sort();
    stacky_pts.dedup();
    stacky_pts.retain(|p| p != &origin);
    let rays: Vec<StackyRay> = stacky_pts
        .iter()
        .map(|s| StackyRay {
            primitive: primitivize(s),
            stacky: s.clone(),
        })
        .collect();
    let index_of: BTreeMap<LatVec, usize> = stacky_pts
        .iter()
        .cloned()
        .enumerate()
        .map(|(i, p)| (p, i))
        .collect();
    let maximal_cones: Vec<ConeId> = boundary
        .iter()
        .filter(|simplex| simplex.iter().all(|p| p != &origin))
        .map(|simplex| {
            let mut c: ConeId = simplex.iter().map(|p| index_of[p]).collect();
            c.sort_unstable();
            c
        })
        .collect();
    let fan = StackyFan::new(n, rays, maximal_cones);

    // Certificate: dip at the origin, plus an ε-scaled dip along each
    // subdivided facet, with ε shrunk until strict convexity holds.
    let mut base: BTreeMap<LatVec, Rat> = BTreeMap::new();
    base.insert(origin.clone(), -Rat::one());
    for s in &stacky_pts {
        base.insert(s.clone(), Rat::zero());
    }
    let mut bonus: BTreeMap<LatVec, Rat> = BTreeMap::new();
    if n == 2 {
        for f in &facets {
            if dot(&f.normal, &origin) == f.offset {
                continue;
            }
            let a = delta.vertices[f.vertex_ids[0]].clone();
            let b = delta.vertices[f.vertex_ids[1]].clone();
            let dir: LatVec = b.iter().zip(&a).map(|(x, y)| x - y).collect();
            let prim = primitivize(&dir);
            let i = (0..n).find(|&i| !prim[i].is_zero()).unwrap();
            let len = &dir[i] / &prim[i];
            for s in &stacky_pts {
                if dot(&f.normal, s) != f.offset {
                    continue;
                }
                let ds: LatVec = s.iter().zip(&a).map(|(x, y)| x - y).collect();
                let (t, rem) = num_integer::div_rem(ds[i].clone(), prim[i].clone());
                if !rem.is_zero() || t.is_negative() || t > len {
                    continue;
                }
                let dip = &t * (&t - &len); // ≤ 0, strictly inside the edge
                if !dip.is_zero() {
                    let e = bonus.entry(s.clone()).or_insert_with(Rat::zero);
                    *e += Rat::from_integer(dip);
                }
            }
        }
    }
    let mut k = 1u32;
    loop {
        let eps = Rat::new(Int::one(), Int::from(2).pow(k));
        let mut values = base.clone();
        for (p, d) in &bonus {
            let v = values.get_mut(p).unwrap();
            *v += &eps * d;
        }
        let pl = PLFunction { values };
        let margins = certificate_margins(&fan, &pl)
            .map_err(|e| FanError::NotATriangulation(e))?;
        if margins.iter().all(|(_, m)| m.is_positive()) {
            return Ok((fan, pl));
        }
        assert!(k <= 40, "certificate search failed to converge");
        k *= 2;
    }
}

/// The fan of an orbit closure: images under the projection along σ of the
/// cones containing σ, in the free quotient lattice, with Γ_σ torsion
/// recorded.
#[derive(Clone, Debug)]
pub struct OrbitClosureFan {
    pub base_cone: ConeId,
    pub quotient_rank: usize,
    pub torsion: Vec<Int>,
    pub fan: StackyFan,
    /// original cone of the star ↦ cone of the quotient fan
    pub cone_images: Vec<(ConeId, ConeId)>,
    /// free-part projection matrix, (rank − dim σ) × rank
    pub projection: IntegerMatrix,
}

pub fn quotient_fan(fan: &StackyFan, sigma: &[usize]) -> OrbitClosureFan {
    assert!(fan.contains_cone(sigma), "cone is not in the fan");
    let n = fan.rank;
    let k = sigma.len();
    let stacky = fan.stacky_points(sigma);
    let (projection, torsion) = if k == 0 {
        (IntegerMatrix::identity(n), Vec::new())
    } else {
        let a = IntegerMatrix::from_columns(n, &stacky);
        let snf = smith_normal_form(&a);
        let mut rows: Vec<LatVec> = Vec::new();
        for i in k..n {
            rows.push(snf.u.row(i));
        }
        let proj = if rows.is_empty() {
            IntegerMatrix::new(0, n, Vec::new())
        } else {
            IntegerMatrix::from_rows(&rows)
        };
        (proj, snf.torsion())
    };
    let qrank = n - k;
    let star = fan.star(sigma);
    // Quotient rays: images of star rays outside σ.
    let mut ray_ids: Vec<usize> = star
        .iter()
        .flatten()
        .copied()
        .filter(|r| !sigma.contains(r))
        .collect();
    ray_ids.sort_unstable();
    ray_ids.dedup();
    let mut qrays: Vec<StackyRay> = Vec::new();
    let mut image_of: BTreeMap<usize, usize> = BTreeMap::new();
    for &r in &ray_ids {
        let prim_img = primitivize(&projection.mul_vec(&fan.rays[r].primitive));
        let stacky_img = projection.mul_vec(&fan.rays[r].stacky);
        assert!(
            prim_img.iter().any(|c| !c.is_zero()),
            "star ray collapses in the quotient"
        );
        if let Some(pos) = qrays.iter().position(|q| q.primitive == prim_img) {
            assert_eq!(
                qrays[pos].stacky, stacky_img,
                "two star rays disagree on the quotient ray's stacky point"
            );
            image_of.insert(r, pos);
        } else {
            qrays.push(StackyRay {
                primitive: prim_img,
                stacky: stacky_img,
            });
            image_of.insert(r, qrays.len() - 1);
        }
    }
    let mut cone_images: Vec<(ConeId, ConeId)> = Vec::new();
    for tau in &star {
        let mut img: ConeId = tau
            .iter()
            .filter(|r| !sigma.contains(r))
            .map(|r| image_of[r])
            .collect();
        img.sort_unstable();
        img.dedup();
        cone_images.push((tau.clone(), img));
    }
    let qmax: Vec<ConeId> = fan
        .maximal_cones
        .iter()
        .filter(|mc| sigma.iter().all(|r| mc.contains(r)))
        .map(|mc| {
            let mut img: ConeId = mc
                .iter()
                .filter(|r| !sigma.contains(r))
                .map(|r| image_of[r])
                .collect();
            img.sort_unstable();
            img
        })
        .collect();
    let qfan = StackyFan::new(qrank, qrays, qmax);
    OrbitClosureFan {
        base_cone: sigma.to_vec(),
        quotient_rank: qrank,
        torsion,
        fan: qfan,
        cone_images,
        projection,
    }
}

/// The closed cover of the toric boundary: one object per nonzero cone,
/// an arrow for each strict inclusion σ ⊂ τ (reading O̅_τ ⊆ O̅_σ), the
/// orbit-closure fan at each object, and the pairwise intersection law
/// O̅_σ ∩ O̅_τ = O̅_{σ∧τ} checked on cone index sets.
#[derive(Clone, Debug)]
pub struct BoundaryCover {
    pub objects: Vec<ConeId>,
    pub arrows: Vec<(usize, usize)>,
    pub orbit_fans: Vec<OrbitClosureFan>,
    pub intersection_law_holds: bool,
}

pub fn boundary_cover(fan: &StackyFan) -> BoundaryCover {
    let objects: Vec<ConeId> = fan
        .all_cones()
        .iter()
        .filter(|c| !c.is_empty())
        .cloned()
        .collect();
    let mut arrows = Vec::new();
    for (i, a) in objects.iter().enumerate() {
        for (j, b) in objects.iter().enumerate() {
            if i != j && a.iter().all(|r| b.contains(r)) {
                arrows.push((i, j));
            }
        }
    }
    let orbit_fans: Vec<OrbitClosureFan> =
        objects.iter().map(|c| quotient_fan(fan, c)).collect();
    let mut law = true;
    for a in &objects {
        for b in &objects {
            let star_a: BTreeSet<ConeId> = fan.star(a).into_iter().collect();
            let star_b: BTreeSet<ConeId> = fan.star(b).into_iter().collect();
            let inter: BTreeSet<ConeId> = star_a.intersection(&star_b).cloned().collect();
            match wedge(fan, a, b) {
                Some(w) => {
                    let star_w: BTreeSet<ConeId> = fan.star(&w).into_iter().collect();
                    if inter != star_w {
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
    BoundaryCover {
        objects,
        arrows,
        orbit_fans,
        intersection_law_holds: law,
    }
}

// ---------------------------------------------------------------------------
// JSON wire format

pub fn fan_to_json(fan: &StackyFan) -> serde_json::Value {
    use serde_json::{json, Value};
    let rays: Vec<Value> = fan
        .rays
        .iter()
        .map(|r| {
            json!({
                "primitive": lat_to_json(&r.primitive),
                "stacky": lat_to_json(&r.stacky),
            })
        })
        .collect();
    let cones: Vec<Value> = fan
        .maximal_cones
        .iter()
        .map(|c| Value::Array(c.iter().map(|&i| json!(i)).collect()))
        .collect();
    json!({
        "rank": fan.rank,
        "rays": rays,
        "maximal_cones": cones,
    })
}

pub fn fan_from_json(v: &serde_json::Value) -> Result<StackyFan, String> {
    let obj = v.as_object().ok_or("fan JSON must be an object")?;
    let rank = obj
        .get("rank")
        .and_then(|r| r.as_u64())
        .ok_or("missing integer field \"rank\"")? as usize;
    let rays_v = obj
        .get("rays")
        .and_then(|r| r.as_array())
        .ok_or("missing array field \"rays\"")?;
    let mut rays = Vec::new();
    for rv in rays_v {
        let ro = rv.as_object().ok_or("each ray must be an object")?;
        let primitive = lat_from_json(
            ro.get("primitive").ok_or("ray missing \"primitive\"")?,
            rank,
        )?;
        let stacky = lat_from_json(ro.get("stacky").ok_or("ray missing \"stacky\"")?, rank)?;
        rays.push(StackyRay { primitive, stacky });
    }
    let cones_v = obj
        .get("maximal_cones")
        .and_then(|c| c.as_array())
        .ok_or("missing array field \"maximal_cones\"")?;
    let mut maximal_cones = Vec::new();
    for cv in cones_v {
        let arr = cv.as_array().ok_or("each maximal cone must be an array")?;
        let mut cone = Vec::new();
        for iv in arr {
            let i = iv
                .as_u64()
                .ok_or("ray indices must be nonnegative integers")? as usize;
            cone.push(i);
        }
        maximal_cones.push(cone);
    }
    Ok(StackyFan::new(rank, rays, maximal_cones))
}

pub fn pl_to_json(pl: &PLFunction) -> serde_json::Value {
    use serde_json::{json, Value};
    let values: Vec<Value> = pl
        .values
        .iter()
        .map(|(p, v)| {
            json!({
                "point": lat_to_json(p),
                "v": crate::arith::format_rat(v),
            })
        })
        .collect();
    json!({ "values": values })
}

pub fn pl_from_json(v: &serde_json::Value) -> Result<PLFunction, String> {
    let obj = v.as_object().ok_or("PL JSON must be an object")?;
    let list = obj
        .get("values")
        .and_then(|x| x.as_array())
        .ok_or("missing array field \"values\"")?;
    let mut values = BTreeMap::new();
    for item in list {
        let io = item.as_object().ok_or("each value entry must be an object")?;
        let point_v = io.get("point").ok_or("value entry missing \"point\"")?;
        let arr = point_v.as_array().ok_or("\"point\" must be an array")?;
        let point: LatVec = arr
            .iter()
            .map(|c| c.as_i64().map(Int::from).ok_or("point coordinates must be integers"))
            .collect::<Result<_, _>>()?;
        let vs = io
            .get("v")
            .and_then(|x| x.as_str())
            .ok_or("value entry missing string \"v\"")?;
        let val = crate::arith::parse_rat(vs).ok_or_else(|| format!("bad rational {:?}", vs))?;
        values.insert(point, val);
    }
    Ok(PLFunction { values })
}

pub fn lat_to_json(v: &[Int]) -> serde_json::Value {
    serde_json::Value::Array(
        v.iter()
            .map(|c| {
                serde_json::Value::Number(serde_json::Number::from(
                    i64::try_from(c).expect("coordinate fits in i64"),
                ))
            })
            .collect(),
    )
}

fn lat_from_json(v: &serde_json::Value, rank: usize) -> Result<LatVec, String> {
    let arr = v.as_array().ok_or("lattice vector must be an array")?;
    if arr.len() != rank {
        return Err(format!("lattice vector has length {}, expected {}", arr.len(), rank));
    }
    arr.iter()
        .map(|c| c.as_i64().map(Int::from).ok_or_else(|| "coordinates must be integers".to_string()))
        .collect()
}

/// Same-component test data: the fractional part of a translation against
/// the stacky pairing. Used by skeleton bookkeeping; kept here because the
/// pairing belongs to the fan.
pub fn stacky_pairing_fract(fan: &StackyFan, sigma: &[usize], delta: &[Rat]) -> Vec<Rat> {
    fan.stacky_points(sigma)
        .iter()
        .map(|beta| {
            let v: Rat = beta
                .iter()
                .zip(delta)
                .map(|(b, d)| Rat::from_integer(b.clone()) * d)
                .sum();
            fract_mod1(&v)
        })
        .collect()
}
