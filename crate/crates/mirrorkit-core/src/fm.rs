//! Exact linear feasibility and duality kernels: Fourier–Motzkin elimination
//! with witness tracking, double description for cone duals, and small
//! Gaussian solvers over the rationals. No floating point, no LP solver.

use crate::arith::{dot_rat, primitivize, Int, LatVec, Rat, RatVec};
use num_traits::{One, Signed, Zero};

/// Σ coeffs·x ≤ rhs.
#[derive(Clone, Debug)]
pub struct LinIneq {
    pub coeffs: RatVec,
    pub rhs: Rat,
}

impl LinIneq {
    pub fn new(coeffs: RatVec, rhs: Rat) -> Self {
        LinIneq { coeffs, rhs }
    }

    pub fn from_ints(coeffs: &[Int], rhs: i64) -> Self {
        LinIneq {
            coeffs: coeffs.iter().map(|c| Rat::from_integer(c.clone())).collect(),
            rhs: Rat::from_integer(Int::from(rhs)),
        }
    }

    fn normalized(&self) -> (RatVec, Rat) {
        let scale = self
            .coeffs
            .iter()
            .chain(std::iter::once(&self.rhs))
            .map(|c| c.abs())
            .max()
            .unwrap_or_else(Rat::zero);
        if scale.is_zero() {
            return (self.coeffs.clone(), self.rhs.clone());
        }
        (
            self.coeffs.iter().map(|c| c / &scale).collect(),
            &self.rhs / &scale,
        )
    }
}

#[derive(Clone, Debug)]
pub enum Feasibility {
    /// A concrete solution, tight against upper bounds where finite.
    Feasible(RatVec),
    /// Indices of input inequalities whose nonnegative combination reads 0 ≤ negative.
    Infeasible(Vec<usize>),
}

impl Feasibility {
    pub fn is_feasible(&self) -> bool {
        matches!(self, Feasibility::Feasible(_))
    }
}

#[derive(Clone)]
struct Work {
    coeffs: RatVec,
    rhs: Rat,
    support: Vec<usize>,
}

/// Decide Σ aᵢxᵢ ≤ bᵢ over ℚ^nvars by eliminating variables in index order.
pub fn fm_feasible(ineqs: &[LinIneq], nvars: usize) -> Feasibility {
    let mut system: Vec<Work> = ineqs
        .iter()
        .enumerate()
        .map(|(i, q)| {
            assert_eq!(q.coeffs.len(), nvars, "inequality arity mismatch");
            Work {
                coeffs: q.coeffs.clone(),
                rhs: q.rhs.clone(),
                support: vec![i],
            }
        })
        .collect();

    let mut stages: Vec<Vec<Work>> = Vec::with_capacity(nvars);
    for var in 0..nvars {
        stages.push(system.clone());
        let mut pos = Vec::new();
        let mut neg = Vec::new();
        let mut zero = Vec::new();
        for w in system.drain(..) {
            match w.coeffs[var].cmp(&Rat::zero()) {
                std::cmp::Ordering::Greater => pos.push(w),
                std::cmp::Ordering::Less => neg.push(w),
                std::cmp::Ordering::Equal => zero.push(w),
            }
        }
        let mut next = zero;
        for p in &pos {
            for n in &neg {
                let lp = -n.coeffs[var].clone();
                let ln = p.coeffs[var].clone();
                let coeffs: RatVec = p
                    .coeffs
                    .iter()
                    .zip(&n.coeffs)
                    .map(|(a, b)| a * &lp + b * &ln)
                    .collect();
                let rhs = &p.rhs * &lp + &n.rhs * &ln;
                let mut support = p.support.clone();
                support.extend_from_slice(&n.support);
                support.sort_unstable();
                support.dedup();
                next.push(Work { coeffs, rhs, support });
            }
        }
        // Drop tautologies and duplicates to keep the blowup tame.
        let mut seen = std::collections::BTreeSet::new();
        system = next
            .into_iter()
            .filter(|w| {
                if w.coeffs.iter().all(|c| c.is_zero()) && !w.rhs.is_negative() {
                    return false;
                }
                let key = format!(
                    "{:?}",
                    LinIneq::new(w.coeffs.clone(), w.rhs.clone()).normalized()
                );
                seen.insert(key)
            })
            .collect();
    }

    for w in &system {
        if w.rhs.is_negative() {
            return Feasibility::Infeasible(w.support.clone());
        }
    }

    // Back-substitute, choosing the tight upper bound when one exists.
    let mut point = vec![Rat::zero(); nvars];
    for var in (0..nvars).rev() {
        let mut upper: Option<Rat> = None;
        let mut lower: Option<Rat> = None;
        for w in &stages[var] {
            let c = &w.coeffs[var];
            if c.is_zero() {
                continue;
            }
            let mut rest = w.rhs.clone();
            for j in var + 1..nvars {
                rest -= &w.coeffs[j] * &point[j];
            }
            let bound = &rest / c;
            if c.is_positive() {
                upper = Some(match upper {
                    Some(u) if u <= bound => u,
                    _ => bound,
                });
            } else {
                lower = Some(match lower {
                    Some(l) if l >= bound => l,
                    _ => bound,
                });
            }
        }
        point[var] = match (lower, upper) {
            (_, Some(u)) => u,
            (Some(l), None) => l,
            (None, None) => Rat::zero(),
        };
    }
    Feasibility::Feasible(point)
}

/// Is x a nonnegative combination of the generators?
pub fn in_cone_hull(x: &[Rat], gens: &[LatVec]) -> bool {
    let n = x.len();
    let k = gens.len();
    if x.iter().all(|c| c.is_zero()) {
        return true;
    }
    if k == 0 {
        return false;
    }
    let mut ineqs = Vec::new();
    for coord in 0..n {
        let row: RatVec = gens
            .iter()
            .map(|g| Rat::from_integer(g[coord].clone()))
            .collect();
        let neg_row: RatVec = row.iter().map(|c| -c).collect();
        ineqs.push(LinIneq::new(row, x[coord].clone()));
        ineqs.push(LinIneq::new(neg_row, -x[coord].clone()));
    }
    for i in 0..k {
        let mut row = vec![Rat::zero(); k];
        row[i] = -Rat::one();
        ineqs.push(LinIneq::new(row, Rat::zero()));
    }
    fm_feasible(&ineqs, k).is_feasible()
}

/// Is p in the convex hull of the given points?
pub fn in_convex_hull(p: &[Rat], points: &[RatVec]) -> bool {
    let n = p.len();
    let k = points.len();
    if k == 0 {
        return false;
    }
    let mut ineqs = Vec::new();
    for coord in 0..n {
        let row: RatVec = points.iter().map(|q| q[coord].clone()).collect();
        let neg_row: RatVec = row.iter().map(|c| -c).collect();
        ineqs.push(LinIneq::new(row, p[coord].clone()));
        ineqs.push(LinIneq::new(neg_row, -p[coord].clone()));
    }
    let ones: RatVec = vec![Rat::one(); k];
    let neg_ones: RatVec = vec![-Rat::one(); k];
    ineqs.push(LinIneq::new(ones, Rat::one()));
    ineqs.push(LinIneq::new(neg_ones, -Rat::one()));
    for i in 0..k {
        let mut row = vec![Rat::zero(); k];
        row[i] = -Rat::one();
        ineqs.push(LinIneq::new(row, Rat::zero()));
    }
    fm_feasible(&ineqs, k).is_feasible()
}

/// Generator description of {x : ⟨h, x⟩ ≥ 0 for all h}, by incremental
/// double description starting from the full space. Lineality comes out as
/// ± generator pairs. Rays are primitive and lex-sorted.
pub fn dual_generators(halfspaces: &[LatVec], rank: usize) -> Vec<LatVec> {
    let mut rays: Vec<RatVec> = Vec::new();
    for i in 0..rank {
        let mut e = vec![Rat::zero(); rank];
        e[i] = Rat::one();
        rays.push(e.clone());
        e[i] = -Rat::one();
        rays.push(e);
    }
    for h in halfspaces {
        assert_eq!(h.len(), rank, "halfspace arity mismatch");
        let hr: RatVec = h.iter().map(|c| Rat::from_integer(c.clone())).collect();
        let mut pos = Vec::new();
        let mut zero = Vec::new();
        let mut neg = Vec::new();
        for r in rays.drain(..) {
            let v = dot_rat(&hr, &r);
            if v.is_zero() {
                zero.push(r);
            } else if v.is_positive() {
                pos.push(r);
            } else {
                neg.push(r);
            }
        }
        let mut next = Vec::new();
        next.extend(pos.iter().cloned());
        next.extend(zero.iter().cloned());
        for p in &pos {
            for n in &neg {
                let vp = dot_rat(&hr, p);
                let vn = -dot_rat(&hr, n);
                let combo: RatVec = p
                    .iter()
                    .zip(n)
                    .map(|(a, b)| a * &vn + b * &vp)
                    .collect();
                if combo.iter().any(|c| !c.is_zero()) {
                    next.push(combo);
                }
            }
        }
        rays = prune_generators(next);
    }
    let mut out: Vec<LatVec> = rays.iter().map(|r| integral_direction(r)).collect();
    out.sort();
    out.dedup();
    out
}

/// Remove generators that are conic combinations of the others.
fn prune_generators(mut rays: Vec<RatVec>) -> Vec<RatVec> {
    let mut canon: Vec<RatVec> = rays
        .drain(..)
        .map(|r| {
            let ints = integral_direction(&r);
            ints.iter().map(|c| Rat::from_integer(c.clone())).collect()
        })
        .collect();
    canon.sort();
    canon.dedup();
    let mut keep: Vec<RatVec> = Vec::new();
    let total = canon.len();
    for i in 0..total {
        let others: Vec<LatVec> = (0..total)
            .filter(|&j| j != i)
            .filter(|&j| j > i || keep.iter().any(|k| k == &canon[j]))
            .map(|j| canon[j].iter().map(rat_to_int_exact).collect())
            .collect();
        if !in_cone_hull(&canon[i], &others) {
            keep.push(canon[i].clone());
        }
    }
    keep
}

fn rat_to_int_exact(r: &Rat) -> Int {
    assert!(r.denom().is_one(), "expected integral coordinate");
    r.numer().clone()
}

/// Scale a rational direction to a primitive integer vector.
pub fn integral_direction(r: &[Rat]) -> LatVec {
    let lcm = r.iter().fold(Int::one(), |acc, c| {
        num_integer::lcm(acc, c.denom().clone())
    });
    let ints: LatVec = r.iter().map(|c| c.numer() * (&lcm / c.denom())).collect();
    primitivize(&ints)
}

/// Particular solution and nullspace basis of a rational linear system, or
/// None if inconsistent. Plain Gaussian elimination.
pub struct AffineSolution {
    pub point: RatVec,
    pub basis: Vec<RatVec>,
}

pub fn solve_affine(equations: &[(RatVec, Rat)], nvars: usize) -> Option<AffineSolution> {
    let mut rows: Vec<(RatVec, Rat)> = equations.to_vec();
    let mut pivots: Vec<(usize, usize)> = Vec::new(); // (row, col)
    let mut rank = 0;
    for col in 0..nvars {
        let Some(sel) = (rank..rows.len()).find(|&i| !rows[i].0[col].is_zero()) else {
            continue;
        };
        rows.swap(rank, sel);
        let (head, tail) = rows.split_at_mut(rank + 1);
        let p = &head[rank];
        let pc = p.0[col].clone();
        for r in tail.iter_mut() {
            if r.0[col].is_zero() {
                continue;
            }
            let f = &r.0[col] / &pc;
            for j in 0..nvars {
                let s = &f * &p.0[j];
                r.0[j] -= s;
            }
            let s = &f * &p.1;
            r.1 -= s;
        }
        pivots.push((rank, col));
        rank += 1;
    }
    for r in rows.iter().skip(rank) {
        if !r.1.is_zero() {
            return None;
        }
    }
    // Back-substitute with free variables at zero.
    let mut point = vec![Rat::zero(); nvars];
    for &(ri, ci) in pivots.iter().rev() {
        let mut acc = rows[ri].1.clone();
        for j in ci + 1..nvars {
            acc -= &rows[ri].0[j] * &point[j];
        }
        point[ci] = acc / &rows[ri].0[ci];
    }
    let pivot_cols: Vec<usize> = pivots.iter().map(|&(_, c)| c).collect();
    let mut basis = Vec::new();
    for free in (0..nvars).filter(|c| !pivot_cols.contains(c)) {
        let mut dir = vec![Rat::zero(); nvars];
        dir[free] = Rat::one();
        for &(ri, ci) in pivots.iter().rev() {
            let mut acc = Rat::zero();
            for j in ci + 1..nvars {
                acc -= &rows[ri].0[j] * &dir[j];
            }
            dir[ci] = acc / &rows[ri].0[ci];
        }
        basis.push(dir);
    }
    Some(AffineSolution { point, basis })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::{lat, lat_to_rat, rat};

    #[test]
    fn feasible_box_gets_tight_point() {
        // 0 ≤ x ≤ 2, 1 ≤ y ≤ 3
        let ineqs = vec![
            LinIneq::new(vec![rat(1, 1), rat(0, 1)], rat(2, 1)),
            LinIneq::new(vec![rat(-1, 1), rat(0, 1)], rat(0, 1)),
            LinIneq::new(vec![rat(0, 1), rat(1, 1)], rat(3, 1)),
            LinIneq::new(vec![rat(0, 1), rat(-1, 1)], rat(-1, 1)),
        ];
        match fm_feasible(&ineqs, 2) {
            Feasibility::Feasible(p) => {
                assert_eq!(p, vec![rat(2, 1), rat(3, 1)]);
            }
            Feasibility::Infeasible(_) => panic!("box is nonempty"),
        }
    }

    #[test]
    fn infeasible_system_names_witnesses() {
        // x ≤ 0 and -x ≤ -1
        let ineqs = vec![
            LinIneq::new(vec![rat(1, 1)], rat(0, 1)),
            LinIneq::new(vec![rat(-1, 1)], rat(-1, 1)),
        ];
        match fm_feasible(&ineqs, 1) {
            Feasibility::Infeasible(w) => assert_eq!(w, vec![0, 1]),
            Feasibility::Feasible(_) => panic!("system is contradictory"),
        }
    }

    #[test]
    fn dual_of_orthant_is_orthant() {
        let gens = dual_generators(&[lat(&[1, 0]), lat(&[0, 1])], 2);
        assert_eq!(gens, vec![lat(&[0, 1]), lat(&[1, 0])]);
    }

    #[test]
    fn dual_of_origin_is_whole_plane() {
        let gens = dual_generators(&[], 2);
        for target in [lat(&[5, -7]), lat(&[-3, -4]), lat(&[0, 9])] {
            assert!(in_cone_hull(&lat_to_rat(&target), &gens));
        }
    }

    #[test]
    fn cone_hull_membership() {
        let gens = vec![lat(&[1, 0]), lat(&[1, 2])];
        assert!(in_cone_hull(&lat_to_rat(&lat(&[2, 1])), &gens));
        assert!(!in_cone_hull(&lat_to_rat(&lat(&[0, 1])), &gens));
        assert!(!in_cone_hull(&lat_to_rat(&lat(&[-1, 0])), &gens));
    }

    #[test]
    fn convex_hull_membership() {
        let pts = vec![
            lat_to_rat(&lat(&[0, 0])),
            lat_to_rat(&lat(&[2, 0])),
            lat_to_rat(&lat(&[0, 2])),
        ];
        assert!(in_convex_hull(&lat_to_rat(&lat(&[1, 1])), &pts));
        assert!(!in_convex_hull(&lat_to_rat(&lat(&[2, 2])), &pts));
    }

    #[test]
    fn affine_solver_finds_line() {
        // x + y = 2 in the plane: point plus 1-dimensional nullspace.
        let sol = solve_affine(&[(vec![rat(1, 1), rat(1, 1)], rat(2, 1))], 2).unwrap();
        assert_eq!(sol.basis.len(), 1);
        let s = &sol.point[0] + &sol.point[1];
        assert_eq!(s, rat(2, 1));
        let d = &sol.basis[0][0] + &sol.basis[0][1];
        assert_eq!(d, rat(0, 1));
    }
}
