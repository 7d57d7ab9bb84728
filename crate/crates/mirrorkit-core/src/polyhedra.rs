//! Rational polyhedral cones and lattice polytopes: duality, membership,
//! faces, lattice-point enumeration, Hilbert bases. Everything is exact;
//! cones carry both generator and inequality representations and the two are
//! kept consistent by construction.

use crate::arith::{dot, lat_to_rat, linf_norm, primitivize, Int, LatVec, Rat, RatVec};
use crate::fm::{
    dual_generators, fm_feasible, in_convex_hull, integral_direction, solve_affine, Feasibility,
    LinIneq,
};
use crate::lattice::{smith_normal_form, IntegerMatrix};
use num_traits::{One, Signed, Zero};
use std::collections::BTreeSet;
use thiserror::Error;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum PolyhedraError {
    #[error("cone has lineality; Hilbert bases are only computed for pointed cones")]
    NonPointed,
}

/// A rational polyhedral cone with primitive ray generators and facet
/// normals. `x ∈ cone ⇔ ⟨h, x⟩ ≥ 0` for every inequality `h`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ConeData {
    pub rays: Vec<LatVec>,
    pub inequalities: Vec<LatVec>,
    pub ambient_rank: usize,
}

impl ConeData {
    /// Build from generators; inequalities are derived by double description.
    pub fn from_rays(rays: &[LatVec], ambient_rank: usize) -> Self {
        let mut prim: Vec<LatVec> = rays
            .iter()
            .map(|r| primitivize(r))
            .filter(|r| r.iter().any(|c| !c.is_zero()))
            .collect();
        prim.sort();
        prim.dedup();
        let inequalities = dual_generators(&prim, ambient_rank);
        ConeData {
            rays: prim,
            inequalities,
            ambient_rank,
        }
    }

    pub fn origin(ambient_rank: usize) -> Self {
        Self::from_rays(&[], ambient_rank)
    }

    pub fn contains(&self, x: &[Int]) -> bool {
        self.inequalities.iter().all(|h| !dot(h, x).is_negative())
    }

    pub fn contains_rat(&self, x: &[Rat]) -> bool {
        self.inequalities.iter().all(|h| {
            let v: Rat = h
                .iter()
                .zip(x)
                .map(|(a, b)| Rat::from_integer(a.clone()) * b)
                .sum();
            !v.is_negative()
        })
    }

    /// Linear span dimension of the cone.
    pub fn dim(&self) -> usize {
        lattice_rank(&self.rays)
    }

    /// A strictly positive integral functional on the cone, if one exists
    /// (equivalently: the cone is pointed).
    pub fn pointed_witness(&self) -> Option<LatVec> {
        if self.rays.is_empty() {
            return Some(vec![Int::zero(); self.ambient_rank]);
        }
        let ineqs: Vec<LinIneq> = self
            .rays
            .iter()
            .map(|r| {
                let coeffs: RatVec = r
                    .iter()
                    .map(|c| -Rat::from_integer(c.clone()))
                    .collect();
                LinIneq::new(coeffs, -Rat::one())
            })
            .collect();
        match fm_feasible(&ineqs, self.ambient_rank) {
            Feasibility::Feasible(h) => {
                let lcm = h.iter().fold(Int::one(), |acc, c| {
                    num_integer::lcm(acc, c.denom().clone())
                });
                Some(h.iter().map(|c| c.numer() * (&lcm / c.denom())).collect())
            }
            Feasibility::Infeasible(_) => None,
        }
    }

    pub fn is_pointed(&self) -> bool {
        self.pointed_witness().is_some()
    }

    /// Same point set?
    pub fn same_cone(&self, other: &ConeData) -> bool {
        self.ambient_rank == other.ambient_rank
            && self.rays.iter().all(|r| other.contains(r))
            && other.rays.iter().all(|r| self.contains(r))
    }

    /// All faces, each given by the sorted indices of the rays it contains.
    /// The cone itself is included; for pointed cones so is the origin (∅).
    pub fn faces(&self) -> Vec<Vec<usize>> {
        let m = self.inequalities.len();
        let mut seen: BTreeSet<Vec<usize>> = BTreeSet::new();
        for mask in 0u64..(1u64 << m.min(20)) {
            let active: Vec<usize> = (0..m).filter(|i| mask >> i & 1 == 1).collect();
            let rays_on: Vec<usize> = (0..self.rays.len())
                .filter(|&ri| {
                    active
                        .iter()
                        .all(|&hi| dot(&self.inequalities[hi], &self.rays[ri]).is_zero())
                })
                .collect();
            seen.insert(rays_on);
        }
        seen.into_iter().collect()
    }

    /// Smallest face containing the point (which must lie in the cone),
    /// as ray indices.
    pub fn face_of_point(&self, x: &[Rat]) -> Vec<usize> {
        debug_assert!(self.contains_rat(x));
        let active: Vec<usize> = (0..self.inequalities.len())
            .filter(|&hi| {
                let v: Rat = self.inequalities[hi]
                    .iter()
                    .zip(x)
                    .map(|(a, b)| Rat::from_integer(a.clone()) * b)
                    .sum();
                v.is_zero()
            })
            .collect();
        (0..self.rays.len())
            .filter(|&ri| {
                active
                    .iter()
                    .all(|&hi| dot(&self.inequalities[hi], &self.rays[ri]).is_zero())
            })
            .collect()
    }
}

/// The dual {m : ⟨m, r⟩ ≥ 0 for all rays r of σ}. Its inequalities are
/// exactly σ's rays, and its rays come from double description.
pub fn dual_cone(sigma: &ConeData) -> ConeData {
    ConeData {
        rays: dual_generators(&sigma.rays, sigma.ambient_rank),
        inequalities: sigma.rays.clone(),
        ambient_rank: sigma.ambient_rank,
    }
}

/// Rank of the sublattice spanned by the vectors.
pub fn lattice_rank(vectors: &[LatVec]) -> usize {
    if vectors.is_empty() {
        return 0;
    }
    let m = IntegerMatrix::from_columns(vectors[0].len(), vectors);
    smith_normal_form(&m).rank()
}

/// Every lattice point of σ with ‖m‖_∞ ≤ bound, lex-sorted.
pub fn lattice_points_in_box(sigma: &ConeData, bound: i64) -> Vec<LatVec> {
    assert!(bound >= 0);
    let mut out = Vec::new();
    let mut point = vec![0i64; sigma.ambient_rank];
    enumerate_box(&mut point, 0, bound, &mut |p| {
        let x: LatVec = p.iter().map(|&c| Int::from(c)).collect();
        if sigma.contains(&x) {
            out.push(x);
        }
    });
    out.sort();
    out
}

fn enumerate_box(point: &mut Vec<i64>, idx: usize, bound: i64, visit: &mut impl FnMut(&[i64])) {
    if idx == point.len() {
        visit(point);
        return;
    }
    for c in -bound..=bound {
        point[idx] = c;
        enumerate_box(point, idx + 1, bound, visit);
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct HilbertBasis {
    pub generators: Vec<LatVec>,
    pub cone: ConeData,
}

/// Minimal additive generating set of σ ∩ M for a pointed cone.
///
/// Candidates are the lattice points of σ in the box of radius Σᵢ‖rᵢ‖_∞
/// (every irreducible lies in the zonotope of the ray generators, which that
/// box contains). Processing in increasing order of a strictly positive
/// functional makes the greedy reducibility test `p − g ∈ σ` complete.
pub fn hilbert_basis(sigma: &ConeData) -> Result<HilbertBasis, PolyhedraError> {
    let witness = sigma.pointed_witness().ok_or(PolyhedraError::NonPointed)?;
    if sigma.rays.is_empty() {
        return Ok(HilbertBasis {
            generators: vec![],
            cone: sigma.clone(),
        });
    }
    let bound: Int = sigma.rays.iter().map(|r| linf_norm(r)).sum();
    let bound_i64: i64 = i64::try_from(&bound).expect("desk-scale bound");
    let mut candidates: Vec<LatVec> = lattice_points_in_box(sigma, bound_i64)
        .into_iter()
        .filter(|p| p.iter().any(|c| !c.is_zero()))
        .collect();
    candidates.sort_by(|a, b| {
        let ha = dot(&witness, a);
        let hb = dot(&witness, b);
        ha.cmp(&hb).then_with(|| a.cmp(b))
    });
    let mut basis: Vec<LatVec> = Vec::new();
    for p in candidates {
        let reducible = basis.iter().any(|g| {
            let diff: LatVec = p.iter().zip(g).map(|(a, b)| a - b).collect();
            sigma.contains(&diff)
        });
        if !reducible {
            basis.push(p);
        }
    }
    basis.sort();
    Ok(HilbertBasis {
        generators: basis,
        cone: sigma.clone(),
    })
}

/// A lattice polytope stored by its extreme points.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LatticePolytope {
    pub vertices: Vec<LatVec>,
    pub ambient_rank: usize,
}

/// An outer facet description: ⟨normal, x⟩ ≤ offset, with equality exactly
/// on the facet.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Facet {
    pub normal: LatVec,
    pub offset: Int,
    pub vertex_ids: Vec<usize>,
}

impl LatticePolytope {
    /// Build from any point set; redundant points are dropped.
    pub fn from_points(points: &[LatVec], ambient_rank: usize) -> Self {
        let mut pts: Vec<LatVec> = points.to_vec();
        pts.sort();
        pts.dedup();
        let rat_pts: Vec<RatVec> = pts.iter().map(|p| lat_to_rat(p)).collect();
        let vertices: Vec<LatVec> = pts
            .iter()
            .enumerate()
            .filter(|(i, _)| {
                let others: Vec<RatVec> = rat_pts
                    .iter()
                    .enumerate()
                    .filter(|(j, _)| j != i)
                    .map(|(_, q)| q.clone())
                    .collect();
                !in_convex_hull(&rat_pts[*i], &others)
            })
            .map(|(_, p)| p.clone())
            .collect();
        LatticePolytope {
            vertices,
            ambient_rank,
        }
    }

    pub fn contains(&self, p: &[Rat]) -> bool {
        let pts: Vec<RatVec> = self.vertices.iter().map(|v| lat_to_rat(v)).collect();
        in_convex_hull(p, &pts)
    }

    /// Is the point strictly inside? Requires the polytope to be
    /// full-dimensional (otherwise nothing is).
    pub fn contains_strictly(&self, p: &[Rat]) -> bool {
        self.facets().iter().all(|f| {
            let v: Rat = f
                .normal
                .iter()
                .zip(p)
                .map(|(a, b)| Rat::from_integer(a.clone()) * b)
                .sum();
            v < Rat::from_integer(f.offset.clone())
        }) && !self.facets().is_empty()
    }

    /// Facet inequalities of a full-dimensional polytope, canonically sorted.
    pub fn facets(&self) -> Vec<Facet> {
        let n = self.ambient_rank;
        let verts = &self.vertices;
        let mut out: Vec<Facet> = Vec::new();
        let mut seen: BTreeSet<(LatVec, Int)> = BTreeSet::new();
        let k = verts.len();
        assert!(k <= 24, "facet enumeration is for desk-scale polytopes");
        for mask in 1u64..(1u64 << k) {
            if (mask.count_ones() as usize) != n {
                continue;
            }
            let subset: Vec<usize> = (0..k).filter(|i| mask >> i & 1 == 1).collect();
            let base = &verts[subset[0]];
            let eqs: Vec<(RatVec, Rat)> = subset[1..]
                .iter()
                .map(|&i| {
                    let diff: RatVec = verts[i]
                        .iter()
                        .zip(base)
                        .map(|(a, b)| Rat::from_integer(a - b))
                        .collect();
                    (diff, Rat::zero())
                })
                .collect();
            let Some(sol) = solve_affine(&eqs, n) else {
                continue;
            };
            if sol.basis.len() != 1 {
                continue;
            }
            let mut normal = integral_direction(&sol.basis[0]);
            let mut offset = dot(&normal, base);
            let mut strict_below = false;
            let mut strict_above = false;
            for v in verts {
                let val = dot(&normal, v);
                if val < offset {
                    strict_below = true;
                } else if val > offset {
                    strict_above = true;
                }
            }
            if strict_below && strict_above {
                continue;
            }
            if strict_above {
                normal = normal.iter().map(|c| -c).collect();
                offset = -offset;
            }
            if seen.insert((normal.clone(), offset.clone())) {
                let vertex_ids: Vec<usize> = (0..k)
                    .filter(|&i| dot(&normal, &verts[i]) == offset)
                    .collect();
                out.push(Facet {
                    normal,
                    offset,
                    vertex_ids,
                });
            }
        }
        out.sort_by(|a, b| (&a.normal, &a.offset).cmp(&(&b.normal, &b.offset)));
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::{int, lat, rat};

    fn cone(rays: &[&[i64]]) -> ConeData {
        let rank = rays.first().map(|r| r.len()).unwrap_or(2);
        let rs: Vec<LatVec> = rays.iter().map(|r| lat(r)).collect();
        ConeData::from_rays(&rs, rank)
    }

    #[test]
    fn orthant_is_self_dual() {
        let sigma = cone(&[&[1, 0], &[0, 1]]);
        let dual = dual_cone(&sigma);
        assert_eq!(dual.rays, vec![lat(&[0, 1]), lat(&[1, 0])]);
        assert!(sigma.same_cone(&dual));
    }

    #[test]
    fn skew_cone_dual_matches_grid_oracle() {
        let sigma = cone(&[&[1, 0], &[1, 2]]);
        let dual = dual_cone(&sigma);
        assert_eq!(dual.rays, vec![lat(&[0, 1]), lat(&[2, -1])]);
        // Oracle: membership in the dual is ⟨m, r⟩ ≥ 0 against σ's rays,
        // checked pointwise on the radius-10 grid.
        for x in -10i64..=10 {
            for y in -10i64..=10 {
                let m = lat(&[x, y]);
                let direct =
                    !dot(&m, &lat(&[1, 0])).is_negative() && !dot(&m, &lat(&[1, 2])).is_negative();
                assert_eq!(dual.contains(&m), direct, "mismatch at ({x},{y})");
            }
        }
    }

    #[test]
    fn dual_of_origin_is_everything() {
        let sigma = ConeData::origin(2);
        let dual = dual_cone(&sigma);
        assert!(dual.contains(&lat(&[7, -3])));
        assert!(dual.contains(&lat(&[-2, -9])));
        assert!(dual.inequalities.is_empty());
        assert!(!dual.is_pointed());
    }

    #[test]
    fn double_dual_is_identity_on_examples() {
        for rays in [
            vec![lat(&[1, 0]), lat(&[1, 2])],
            vec![lat(&[0, 1]), lat(&[2, -1])],
            vec![lat(&[1, 0, 0]), lat(&[0, 1, 0]), lat(&[1, 1, 2])],
        ] {
            let rank = rays[0].len();
            let sigma = ConeData::from_rays(&rays, rank);
            let dd = dual_cone(&dual_cone(&sigma));
            assert!(sigma.same_cone(&dd));
        }
    }

    #[test]
    fn hilbert_basis_of_orthant_is_free() {
        let hb = hilbert_basis(&cone(&[&[1, 0], &[0, 1]])).unwrap();
        assert_eq!(hb.generators, vec![lat(&[0, 1]), lat(&[1, 0])]);
    }

    #[test]
    fn hilbert_basis_needs_interior_generator() {
        let hb = hilbert_basis(&cone(&[&[0, 1], &[2, -1]])).unwrap();
        assert_eq!(
            hb.generators,
            vec![lat(&[0, 1]), lat(&[1, 0]), lat(&[2, -1])]
        );
        let hb2 = hilbert_basis(&cone(&[&[1, 0], &[1, 2]])).unwrap();
        assert_eq!(hb2.generators, vec![lat(&[1, 0]), lat(&[1, 1]), lat(&[1, 2])]);
    }

    #[test]
    fn hilbert_basis_brute_force_oracle() {
        // ℕ-combinations of the claimed basis, coefficients to 6, must
        // reproduce every cone point in the radius-6 box, and dropping any
        // generator must lose some point.
        for rays in [
            vec![lat(&[0, 1]), lat(&[2, -1])],
            vec![lat(&[1, 0]), lat(&[1, 2])],
        ] {
            let sigma = ConeData::from_rays(&rays, 2);
            let hb = hilbert_basis(&sigma).unwrap();
            let points = lattice_points_in_box(&sigma, 6);
            let reachable = saturate(&hb.generators, 6);
            for p in &points {
                assert!(reachable.contains(p), "basis misses {:?}", p);
            }
            for skip in 0..hb.generators.len() {
                let reduced: Vec<LatVec> = hb
                    .generators
                    .iter()
                    .enumerate()
                    .filter(|(i, _)| *i != skip)
                    .map(|(_, g)| g.clone())
                    .collect();
                let partial = saturate(&reduced, 6);
                assert!(
                    points.iter().any(|p| !partial.contains(p)),
                    "generator {skip} is redundant"
                );
            }
        }
    }

    fn saturate(gens: &[LatVec], bound: i64) -> BTreeSet<LatVec> {
        let mut reach: BTreeSet<LatVec> = BTreeSet::new();
        reach.insert(vec![int(0), int(0)]);
        loop {
            let mut grew = false;
            for p in reach.clone() {
                for g in gens {
                    let q: LatVec = p.iter().zip(g).map(|(a, b)| a + b).collect();
                    if linf_norm(&q) <= Int::from(bound) && reach.insert(q) {
                        grew = true;
                    }
                }
            }
            if !grew {
                return reach;
            }
        }
    }

    #[test]
    fn hilbert_basis_rejects_lineality() {
        let half_plane = cone(&[&[1, 0], &[0, 1], &[0, -1]]);
        assert_eq!(hilbert_basis(&half_plane), Err(PolyhedraError::NonPointed));
    }

    #[test]
    fn box_points_of_orthant() {
        let pts = lattice_points_in_box(&cone(&[&[1, 0], &[0, 1]]), 1);
        assert_eq!(
            pts,
            vec![lat(&[0, 0]), lat(&[0, 1]), lat(&[1, 0]), lat(&[1, 1])]
        );
    }

    #[test]
    fn box_points_of_half_plane() {
        let half = cone(&[&[1, 0], &[0, 1], &[0, -1]]);
        assert_eq!(half.inequalities, vec![lat(&[1, 0])]);
        assert_eq!(lattice_points_in_box(&half, 1).len(), 6);
    }

    #[test]
    fn box_points_of_skew_cone() {
        let pts = lattice_points_in_box(&cone(&[&[0, 1], &[2, -1]]), 2);
        let expect: Vec<LatVec> = [
            [0, 0],
            [0, 1],
            [0, 2],
            [1, 0],
            [1, 1],
            [1, 2],
            [2, -1],
            [2, 0],
            [2, 1],
            [2, 2],
        ]
        .iter()
        .map(|p| lat(p))
        .collect();
        assert_eq!(pts, expect);
    }

    #[test]
    fn faces_of_orthant() {
        let sigma = cone(&[&[1, 0], &[0, 1]]);
        let faces = sigma.faces();
        assert_eq!(faces.len(), 4); // origin, two rays, the cone
        assert!(faces.contains(&vec![]));
        assert!(faces.contains(&vec![0]));
        assert!(faces.contains(&vec![1]));
        assert!(faces.contains(&vec![0, 1]));
    }

    #[test]
    fn polytope_drops_interior_points() {
        let p = LatticePolytope::from_points(
            &[
                lat(&[0, 0]),
                lat(&[2, 0]),
                lat(&[0, 2]),
                lat(&[2, 2]),
                lat(&[1, 1]),
            ],
            2,
        );
        assert_eq!(p.vertices.len(), 4);
        assert!(!p.vertices.contains(&lat(&[1, 1])));
    }

    #[test]
    fn facets_of_skew_triangle() {
        let p = LatticePolytope::from_points(
            &[lat(&[-1, 0]), lat(&[0, -1]), lat(&[1, 1])],
            2,
        );
        let facets = p.facets();
        let desc: Vec<(LatVec, Int)> = facets
            .iter()
            .map(|f| (f.normal.clone(), f.offset.clone()))
            .collect();
        assert_eq!(
            desc,
            vec![
                (lat(&[-1, -1]), int(1)),
                (lat(&[-1, 2]), int(1)),
                (lat(&[2, -1]), int(1)),
            ]
        );
        assert!(p.contains_strictly(&[rat(0, 1), rat(0, 1)]));
        assert!(!p.contains_strictly(&[rat(1, 1), rat(1, 1)]));
    }

    #[test]
    fn pointedness_detection() {
        assert!(cone(&[&[1, 0], &[1, 2]]).is_pointed());
        assert!(!cone(&[&[1, 0], &[-1, 0]]).is_pointed());
        assert!(ConeData::origin(3).is_pointed());
    }
}
