//! Graded-dimension shadow of the coherent-constructible correspondence:
//! homs between the A(σ)/B(σ) objects, the restriction functor on the B
//! side, microlocalization on the A side, and the boundary-descent diagram
//! matching the two. Only graded dimensions are modeled; every hom is a
//! semigroup algebra with degreewise dims 0 or 1.

use crate::arith::{dot, Int, LatVec};
use crate::fan::{quotient_fan, ConeId, OrbitClosureFan, StackyFan};
use crate::lattice::{integer_kernel, solve_integer, IntegerMatrix};
use crate::polyhedra::{dual_cone, hilbert_basis};
use crate::skeleton::build_skeleton;
use num_traits::{One, Signed, Zero};
use std::collections::{BTreeMap, BTreeSet, VecDeque};
use thiserror::Error;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum BondalError {
    #[error("cones do not form a chain: {0}")]
    NotComposable(String),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub enum Side {
    A,
    B,
}

impl Side {
    pub fn label(self) -> &'static str {
        match self {
            Side::A => "A",
            Side::B => "B",
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CccObject {
    pub side: Side,
    pub cone: ConeId,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GradedHom {
    pub source: CccObject,
    pub target: CccObject,
    pub box_bound: i64,
    /// degree → dimension; entries are always 1, absence means 0
    pub dims: BTreeMap<LatVec, usize>,
}

impl GradedHom {
    pub fn dim_at(&self, degree: &[Int]) -> usize {
        self.dims.get(degree).copied().unwrap_or(0)
    }

    pub fn is_zero(&self) -> bool {
        self.dims.is_empty()
    }
}

fn subset(a: &[usize], b: &[usize]) -> bool {
    a.iter().all(|r| b.contains(r))
}

/// All lattice points of the L∞ cube of the given radius, lex order.
pub fn cube_points(rank: usize, bound: i64) -> Vec<LatVec> {
    assert!(bound >= 0);
    let mut out = Vec::new();
    let mut point = vec![-bound; rank];
    loop {
        out.push(point.iter().map(|&c| Int::from(c)).collect());
        let mut i = rank;
        loop {
            if i == 0 {
                return out;
            }
            i -= 1;
            if point[i] < bound {
                point[i] += 1;
                for p in point.iter_mut().skip(i + 1) {
                    *p = -bound;
                }
                break;
            }
        }
    }
}

fn in_dual(fan: &StackyFan, tau: &[usize], m: &[Int]) -> bool {
    tau.iter()
        .all(|&r| !dot(m, &fan.rays[r].primitive).is_negative())
}

/// Membership route: τ^∨ cut out by τ's rays as inequality normals.
fn dual_degrees_a(fan: &StackyFan, tau: &[usize], bound: i64) -> BTreeSet<LatVec> {
    cube_points(fan.rank, bound)
        .into_iter()
        .filter(|m| in_dual(fan, tau, m))
        .collect()
}

/// Generator route: ℕ-closure of a finite generating set of τ^∨ ∩ M.
/// Full-dimensional τ uses the Hilbert basis of the pointed dual; the zero
/// cone and rays (non-pointed duals) get explicit lattice generators.
fn dual_degrees_b(fan: &StackyFan, tau: &[usize], bound: i64) -> BTreeSet<LatVec> {
    let n = fan.rank;
    let gens: Vec<LatVec> = if tau.is_empty() {
        let mut g = Vec::new();
        for i in 0..n {
            let mut e = vec![Int::zero(); n];
            e[i] = Int::one();
            g.push(e.clone());
            e[i] = -Int::one();
            g.push(e);
        }
        g
    } else if tau.len() == 1 {
        let r = &fan.rays[tau[0]].primitive;
        let row = IntegerMatrix::from_rows(std::slice::from_ref(r));
        let u = solve_integer(&row, &[Int::one()]).expect("ray primitive");
        let mut g = vec![u];
        for w in integer_kernel(&row) {
            g.push(w.iter().map(|c| -c).collect());
            g.push(w);
        }
        g
    } else {
        hilbert_basis(&dual_cone(&fan.cone(tau)))
            .expect("dual of a full-dimensional simplicial cone is pointed")
            .generators
    };
    let spread = gens
        .iter()
        .flat_map(|g| g.iter().map(|c| c.abs()))
        .max()
        .unwrap_or_else(Int::zero);
    let expand = Int::from(bound) + Int::from(2) * spread;
    let within = |m: &LatVec, b: &Int| m.iter().all(|c| &c.abs() <= b);
    let mut seen: BTreeSet<LatVec> = BTreeSet::new();
    let mut queue = VecDeque::new();
    let zero: LatVec = vec![Int::zero(); n];
    seen.insert(zero.clone());
    queue.push_back(zero);
    while let Some(p) = queue.pop_front() {
        for g in &gens {
            let q: LatVec = p.iter().zip(g).map(|(a, b)| a + b).collect();
            if within(&q, &expand) && seen.insert(q.clone()) {
                queue.push_back(q);
            }
        }
    }
    let b = Int::from(bound);
    seen.into_iter().filter(|m| within(m, &b)).collect()
}

/// Hom(X(σ), X(τ)) on the L∞ box: k[τ^∨] when σ ⊇ τ, zero otherwise. The A
/// side computes by polyhedral membership, the B side independently by
/// semigroup generation.
pub fn hom_graded(fan: &StackyFan, side: Side, sigma: &[usize], tau: &[usize], bound: i64) -> GradedHom {
    assert!(fan.contains_cone(sigma) && fan.contains_cone(tau), "cones must lie in the fan");
    assert!(bound >= 0);
    let degrees = if subset(tau, sigma) {
        match side {
            Side::A => dual_degrees_a(fan, tau, bound),
            Side::B => dual_degrees_b(fan, tau, bound),
        }
    } else {
        BTreeSet::new()
    };
    GradedHom {
        source: CccObject { side, cone: sigma.to_vec() },
        target: CccObject { side, cone: tau.to_vec() },
        box_bound: bound,
        dims: degrees.into_iter().map(|m| (m, 1)).collect(),
    }
}

/// Hom dims for every ordered cone pair, in fan order; pairs are computed
/// in parallel when the feature is enabled, with order-preserving merge.
pub fn all_pairs_hom(fan: &StackyFan, side: Side, bound: i64) -> Vec<(ConeId, ConeId, GradedHom)> {
    let cones = fan.all_cones().to_vec();
    let mut pairs = Vec::new();
    for s in &cones {
        for t in &cones {
            pairs.push((s.clone(), t.clone()));
        }
    }
    let job = |(s, t): &(ConeId, ConeId)| (s.clone(), t.clone(), hom_graded(fan, side, s, t, bound));
    #[cfg(feature = "parallel")]
    {
        use rayon::prelude::*;
        pairs.par_iter().map(job).collect()
    }
    #[cfg(not(feature = "parallel"))]
    {
        pairs.iter().map(job).collect()
    }
}

/// Single-threaded variant of [`all_pairs_hom`], kept callable under every
/// feature set so the two execution paths can be benchmarked against each
/// other.
pub fn all_pairs_hom_serial(fan: &StackyFan, side: Side, bound: i64) -> Vec<(ConeId, ConeId, GradedHom)> {
    let cones = fan.all_cones().to_vec();
    let mut out = Vec::new();
    for s in &cones {
        for t in &cones {
            out.push((s.clone(), t.clone(), hom_graded(fan, side, s, t, bound)));
        }
    }
    out
}

/// Composition of degree m: X(σ)→X(τ) with degree m′: X(τ)→X(ρ) along a
/// cone chain σ ⊇ τ ⊇ ρ is the degree m + m′ of X(σ)→X(ρ).
pub fn compose(
    fan: &StackyFan,
    sigma: &[usize],
    tau: &[usize],
    rho: &[usize],
    m: &[Int],
    m_prime: &[Int],
) -> Result<LatVec, BondalError> {
    if !(subset(tau, sigma) && subset(rho, tau)) {
        return Err(BondalError::NotComposable(format!(
            "{sigma:?} ⊇ {tau:?} ⊇ {rho:?} fails"
        )));
    }
    if !in_dual(fan, tau, m) || !in_dual(fan, rho, m_prime) {
        return Err(BondalError::NotComposable(
            "degree lies outside its hom's semigroup".into(),
        ));
    }
    let sum: LatVec = m.iter().zip(m_prime).map(|(a, b)| a + b).collect();
    debug_assert!(in_dual(fan, rho, &sum));
    Ok(sum)
}

/// Degree-wise 0/1 pattern of the induced map k[τ^∨] → k[(τ/σ)^∨]; image
/// degrees live in the sublattice σ^⊥ ∩ M, so a surviving degree maps to
/// itself.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GradedMap {
    pub box_bound: i64,
    pub entries: BTreeMap<LatVec, Option<LatVec>>,
}

impl GradedMap {
    pub fn supported(&self) -> Vec<LatVec> {
        self.entries
            .iter()
            .filter_map(|(m, v)| v.as_ref().map(|_| m.clone()))
            .collect()
    }
}

#[derive(Clone, Debug)]
pub struct Restriction {
    /// the image object, with cone named in the quotient fan
    pub object: CccObject,
    pub quotient: OrbitClosureFan,
    pub map: GradedMap,
}

impl Restriction {
    /// Image of a degree in quotient-lattice coordinates.
    pub fn quotient_degree(&self, m: &[Int]) -> Option<LatVec> {
        match self.map.entries.get(m) {
            Some(Some(kept)) => Some(self.quotient.projection.mul_vec(kept)),
            _ => None,
        }
    }
}

fn image_cone(qf: &OrbitClosureFan, tau: &[usize]) -> ConeId {
    qf.cone_images
        .iter()
        .find(|(orig, _)| orig == tau)
        .map(|(_, img)| img.clone())
        .expect("τ ⊇ σ lies in the star")
}

/// i_σ^* B(τ): B(τ/σ) in the quotient fan when τ ⊇ σ, zero otherwise. A
/// degree survives iff it is orthogonal to each ray of σ.
pub fn restrict_b(fan: &StackyFan, sigma: &[usize], tau: &[usize], bound: i64) -> Option<Restriction> {
    if !subset(sigma, tau) {
        return None;
    }
    let qf = quotient_fan(fan, sigma);
    let entries = dual_degrees_b(fan, tau, bound)
        .into_iter()
        .map(|m| {
            let kept = sigma
                .iter()
                .all(|&r| dot(&m, &fan.rays[r].primitive).is_zero());
            let v = kept.then(|| m.clone());
            (m, v)
        })
        .collect();
    Some(Restriction {
        object: CccObject { side: Side::B, cone: image_cone(&qf, tau) },
        quotient: qf,
        map: GradedMap { box_bound: bound, entries },
    })
}

/// m_σ A(τ): A(τ/σ) when τ ⊇ σ, zero otherwise. The surviving degrees are
/// decided by the microsupport-flavored route: m ∈ τ^∨ pairs ≥ 0 with every
/// ray of σ, so orthogonality to σ is one equation against the ray sum.
pub fn microlocalize_a(fan: &StackyFan, sigma: &[usize], tau: &[usize], bound: i64) -> Option<Restriction> {
    if !subset(sigma, tau) {
        return None;
    }
    let qf = quotient_fan(fan, sigma);
    let mut ray_sum = vec![Int::zero(); fan.rank];
    for &r in sigma {
        for (acc, c) in ray_sum.iter_mut().zip(&fan.rays[r].primitive) {
            *acc += c;
        }
    }
    let entries = dual_degrees_a(fan, tau, bound)
        .into_iter()
        .map(|m| {
            let v = dot(&m, &ray_sum).is_zero().then(|| m.clone());
            (m, v)
        })
        .collect();
    Some(Restriction {
        object: CccObject { side: Side::A, cone: image_cone(&qf, tau) },
        quotient: qf,
        map: GradedMap { box_bound: bound, entries },
    })
}

/// Bondal matching then restriction equals microlocalization then Bondal
/// matching, degree-wise on the box.
pub fn compatibility_square_commutes(fan: &StackyFan, sigma: &[usize], tau: &[usize], bound: i64) -> bool {
    match (restrict_b(fan, sigma, tau, bound), microlocalize_a(fan, sigma, tau, bound)) {
        (None, None) => true,
        (Some(b), Some(a)) => a.map == b.map && a.object.cone == b.object.cone,
        _ => false,
    }
}

#[derive(Clone, Debug)]
pub struct DiagramObject {
    pub cone: ConeId,
    /// component multiplicity on the A side, counted from skeleton strata
    pub multiplicity_a: Int,
    /// component multiplicity on the B side, from quotient-fan torsion
    pub multiplicity_b: Int,
    /// graded dims of the dense-torus endomorphism algebra in the quotient
    pub end_degrees_a: usize,
    pub end_degrees_b: usize,
    pub pass: bool,
}

#[derive(Clone, Debug)]
pub struct DiagramArrow {
    pub from: ConeId,
    pub to: ConeId,
    pub pass: bool,
}

#[derive(Clone, Debug)]
pub struct DiagramReport {
    pub box_bound: i64,
    pub objects: Vec<DiagramObject>,
    pub arrows: Vec<DiagramArrow>,
    pub pass: bool,
}

/// The boundary-descent diagram over the poset of nonzero cones: the B side
/// assigns each σ its quotient fan, the A side its skeleton sector, and the
/// report certifies object-wise and arrow-wise agreement of graded data.
pub fn boundary_diagram(fan: &StackyFan, bound: i64) -> DiagramReport {
    let skel = build_skeleton(fan);
    let nonzero: Vec<ConeId> = fan
        .all_cones()
        .iter()
        .filter(|c| !c.is_empty())
        .cloned()
        .collect();
    let mut objects = Vec::new();
    for sigma in &nonzero {
        let qf = quotient_fan(fan, sigma);
        let mult_b: Int = qf.torsion.iter().fold(Int::one(), |acc, d| acc * d);
        let mult_a = Int::from(
            skel.strata
                .iter()
                .filter(|s| &s.cone == sigma)
                .count(),
        );
        let zero: ConeId = Vec::new();
        let end_a = hom_graded(&qf.fan, Side::A, &zero, &zero, bound).dims.len();
        let end_b = hom_graded(&qf.fan, Side::B, &zero, &zero, bound).dims.len();
        let pass = mult_a == mult_b && end_a == end_b;
        objects.push(DiagramObject {
            cone: sigma.clone(),
            multiplicity_a: mult_a,
            multiplicity_b: mult_b,
            end_degrees_a: end_a,
            end_degrees_b: end_b,
            pass,
        });
    }
    let mut arrows = Vec::new();
    for sigma in &nonzero {
        for tau in &nonzero {
            if sigma == tau || !subset(sigma, tau) {
                continue;
            }
            arrows.push(DiagramArrow {
                from: sigma.clone(),
                to: tau.clone(),
                pass: compatibility_square_commutes(fan, sigma, tau, bound),
            });
        }
    }
    let pass = objects.iter().all(|o| o.pass) && arrows.iter().all(|a| a.pass);
    DiagramReport { box_bound: bound, objects, arrows, pass }
}

pub fn hom_to_json(h: &GradedHom) -> serde_json::Value {
    use serde_json::json;
    let dims: Vec<serde_json::Value> = h
        .dims
        .iter()
        .map(|(deg, d)| {
            json!({
                "deg": deg.iter().map(|c| i64::try_from(c).expect("desk scale")).collect::<Vec<_>>(),
                "dim": d,
            })
        })
        .collect();
    json!({
        "side": h.source.side.label(),
        "source": h.source.cone,
        "target": h.target.cone,
        "box": h.box_bound,
        "dims": dims,
    })
}

pub fn diagram_to_json(r: &DiagramReport) -> serde_json::Value {
    use serde_json::json;
    json!({
        "box": r.box_bound,
        "objects": r.objects.iter().map(|o| json!({
            "cone": o.cone,
            "multiplicity": [o.multiplicity_a.to_string(), o.multiplicity_b.to_string()],
            "end_degrees": [o.end_degrees_a, o.end_degrees_b],
            "pass": o.pass,
        })).collect::<Vec<_>>(),
        "arrows": r.arrows.iter().map(|a| json!({
            "from": a.from,
            "to": a.to,
            "pass": a.pass,
        })).collect::<Vec<_>>(),
        "pass": r.pass,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::{int, lat};
    use crate::fan::tests::{fan_a2, fan_p2, fan_quotient22};
    use crate::fan::{StackyFan, StackyRay};

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

    fn fan_stackyskel() -> StackyFan {
        StackyFan::new(
            2,
            vec![
                StackyRay { primitive: lat(&[-1, 3]), stacky: lat(&[-1, 3]) },
                StackyRay { primitive: lat(&[3, -1]), stacky: lat(&[3, -1]) },
                StackyRay { primitive: lat(&[-1, -1]), stacky: lat(&[-1, -1]) },
            ],
            vec![vec![0, 1], vec![0, 2], vec![1, 2]],
        )
    }

    #[test]
    fn half_plane_hom_has_six_degrees_in_unit_box() {
        let fan = fan_a2();
        for side in [Side::A, Side::B] {
            let h = hom_graded(&fan, side, &[0, 1], &[0], 1);
            assert_eq!(h.dims.len(), 6);
            for m in h.dims.keys() {
                assert!(!m[0].is_negative());
            }
        }
    }

    #[test]
    fn orthant_endomorphisms_are_the_quadrant() {
        let fan = fan_a2();
        for side in [Side::A, Side::B] {
            let h = hom_graded(&fan, side, &[0, 1], &[0, 1], 1);
            assert_eq!(h.dims.len(), 4);
            assert_eq!(h.dim_at(&lat(&[1, 1])), 1);
            assert_eq!(h.dim_at(&lat(&[0, 0])), 1);
        }
    }

    #[test]
    fn homs_vanish_exactly_off_the_face_relation() {
        for fan in [fan_a2(), fan_p2(), fan_quotient22(), fan_stackyskel()] {
            for s in fan.all_cones().to_vec() {
                for t in fan.all_cones().to_vec() {
                    let h = hom_graded(&fan, Side::A, &s, &t, 2);
                    assert_eq!(h.is_zero(), !subset(&t, &s), "σ={s:?} τ={t:?}");
                }
            }
        }
    }

    #[test]
    fn membership_and_generation_routes_agree() {
        for fan in [fan_a2(), fan_p2(), fan_quotient22(), fan_stackyskel(), fan_p1()] {
            for bound in [0, 2, 6] {
                let a = all_pairs_hom(&fan, Side::A, bound);
                let b = all_pairs_hom(&fan, Side::B, bound);
                assert_eq!(a.len(), b.len());
                for ((s, t, ha), (s2, t2, hb)) in a.iter().zip(&b) {
                    assert_eq!((s, t), (s2, t2));
                    assert_eq!(ha.dims, hb.dims, "σ={s:?} τ={t:?} box={bound}");
                }
            }
        }
    }

    #[test]
    fn composition_is_semigroup_addition() {
        let fan = fan_a2();
        let m = compose(&fan, &[0, 1], &[0], &[], &lat(&[1, 0]), &lat(&[0, 3])).unwrap();
        assert_eq!(m, lat(&[1, 3]));
        // unit law
        let u = compose(&fan, &[0, 1], &[0, 1], &[0], &lat(&[0, 0]), &lat(&[2, 5])).unwrap();
        assert_eq!(u, lat(&[2, 5]));
        // broken chain
        assert!(matches!(
            compose(&fan, &[0], &[0, 1], &[], &lat(&[0, 0]), &lat(&[0, 0])),
            Err(BondalError::NotComposable(_))
        ));
        // degree outside its semigroup
        assert!(matches!(
            compose(&fan, &[0, 1], &[0], &[], &lat(&[-1, 0]), &lat(&[0, 0])),
            Err(BondalError::NotComposable(_))
        ));
    }

    #[test]
    fn composition_is_associative_on_the_box() {
        let fan = fan_p2();
        let h1 = hom_graded(&fan, Side::A, &[0, 1], &[0], 2);
        let h2 = hom_graded(&fan, Side::A, &[0], &[], 2);
        for m in h1.dims.keys().take(8) {
            for mp in h2.dims.keys().take(8) {
                for mpp in h2.dims.keys().take(4) {
                    let left = compose(
                        &fan,
                        &[0, 1],
                        &[],
                        &[],
                        &compose(&fan, &[0, 1], &[0], &[], m, mp).unwrap(),
                        mpp,
                    )
                    .unwrap();
                    let right = compose(
                        &fan,
                        &[0, 1],
                        &[0],
                        &[],
                        m,
                        &compose(&fan, &[0], &[], &[], mp, mpp).unwrap(),
                    )
                    .unwrap();
                    assert_eq!(left, right);
                }
            }
        }
    }

    #[test]
    fn restriction_projects_onto_the_orthogonal_sublattice() {
        let fan = fan_a2();
        let r = restrict_b(&fan, &[0], &[0, 1], 4).unwrap();
        assert_eq!(r.map.entries.get(&lat(&[2, 3])), Some(&None));
        assert_eq!(r.map.entries.get(&lat(&[0, 3])), Some(&Some(lat(&[0, 3]))));
        assert_eq!(r.quotient_degree(&lat(&[0, 3])), Some(lat(&[3])));
        assert_eq!(r.quotient_degree(&lat(&[2, 3])), None);
        assert_eq!(r.quotient.fan.rank, 1);
        assert_eq!(r.object.cone, vec![0]);
        // σ = 0 is the identity functor: every degree survives
        let id = restrict_b(&fan, &[], &[0, 1], 3).unwrap();
        assert!(id.map.entries.values().all(|v| v.is_some()));
        assert_eq!(id.object.cone, vec![0, 1]);
        // τ does not contain σ: zero object
        assert!(restrict_b(&fan, &[0, 1], &[0], 3).is_none());
    }

    #[test]
    fn restriction_support_is_dual_cap_perp() {
        let fan = fan_p2();
        let r = restrict_b(&fan, &[1], &[1, 2], 4).unwrap();
        for m in cube_points(2, 4) {
            let in_dual_tau = dot(&m, &lat(&[0, 1])).is_negative() == false
                && dot(&m, &lat(&[-1, -1])).is_negative() == false;
            let in_perp = dot(&m, &lat(&[0, 1])).is_zero();
            let expect = in_dual_tau && in_perp;
            let got = matches!(r.map.entries.get(&m), Some(Some(_)));
            assert_eq!(got, expect, "degree {m:?}");
        }
    }

    #[test]
    fn microlocalization_agrees_with_restriction() {
        for fan in [fan_a2(), fan_p2(), fan_quotient22(), fan_stackyskel()] {
            for s in fan.all_cones().to_vec() {
                for t in fan.all_cones().to_vec() {
                    assert!(compatibility_square_commutes(&fan, &s, &t, 4), "σ={s:?} τ={t:?}");
                }
            }
        }
    }

    #[test]
    fn self_restriction_keeps_only_the_unit_degree() {
        let fan = fan_a2();
        let r = microlocalize_a(&fan, &[0, 1], &[0, 1], 5).unwrap();
        assert_eq!(r.map.supported(), vec![lat(&[0, 0])]);
        assert_eq!(r.quotient.quotient_rank, 0);
        assert_eq!(r.quotient_degree(&lat(&[0, 0])), Some(Vec::new()));
    }

    #[test]
    fn restriction_pattern_is_multiplicative() {
        let fan = fan_p2();
        let sigma = vec![0];
        let small = restrict_b(&fan, &sigma, &[0, 1], 2).unwrap();
        let big = restrict_b(&fan, &sigma, &[0, 1], 4).unwrap();
        let keys: Vec<LatVec> = small.map.entries.keys().cloned().collect();
        for m in &keys {
            for mp in &keys {
                let sum: LatVec = m.iter().zip(mp).map(|(a, b)| a + b).collect();
                let lhs = matches!(big.map.entries.get(&sum), Some(Some(_)));
                let rhs = matches!(small.map.entries.get(m), Some(Some(_)))
                    && matches!(small.map.entries.get(mp), Some(Some(_)));
                assert_eq!(lhs, rhs, "m={m:?} m'={mp:?}");
            }
        }
    }

    #[test]
    fn p1_boundary_diagram_is_two_points() {
        let report = boundary_diagram(&fan_p1(), 3);
        assert!(report.pass);
        assert_eq!(report.objects.len(), 2);
        assert!(report.arrows.is_empty());
        for o in &report.objects {
            assert_eq!(o.multiplicity_a, int(1));
            assert_eq!(o.end_degrees_a, 1);
        }
    }

    #[test]
    fn p2_boundary_diagram_matches_with_box_four() {
        let report = boundary_diagram(&fan_p2(), 4);
        assert!(report.pass);
        assert_eq!(report.objects.len(), 6);
        assert_eq!(report.arrows.len(), 6);
        let top = report.objects.iter().find(|o| o.cone == vec![0, 1]).unwrap();
        assert_eq!(top.end_degrees_a, 1);
        let ray = report.objects.iter().find(|o| o.cone == vec![0]).unwrap();
        assert_eq!(ray.end_degrees_a, 9); // rank-1 dense torus, box 4
    }

    #[test]
    fn torsion_multiplicities_match_across_sides() {
        let report = boundary_diagram(&fan_quotient22(), 3);
        assert!(report.pass);
        let by_cone = |c: &[usize]| {
            report
                .objects
                .iter()
                .find(|o| o.cone == c)
                .map(|o| o.multiplicity_a.clone())
                .unwrap()
        };
        assert_eq!(by_cone(&[0]), int(2));
        assert_eq!(by_cone(&[1]), int(2));
        assert_eq!(by_cone(&[0, 1]), int(4));
    }

    #[test]
    fn hom_json_lists_sparse_degrees() {
        let fan = fan_a2();
        let h = hom_graded(&fan, Side::B, &[0, 1], &[0, 1], 1);
        let j = hom_to_json(&h);
        assert_eq!(j["box"], 1);
        assert_eq!(j["dims"].as_array().unwrap().len(), 4);
        assert_eq!(j["dims"][0]["dim"], 1);
        let rep = diagram_to_json(&boundary_diagram(&fan, 2));
        assert_eq!(rep["pass"], true);
    }
}
