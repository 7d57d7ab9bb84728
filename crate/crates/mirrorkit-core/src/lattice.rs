//! Integer linear algebra: Smith normal form, quotient groups, ℤ-linear solving.

use crate::arith::{int, Int, LatVec};
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

/// Row-major arbitrary-precision integer matrix.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct IntegerMatrix {
    pub rows: usize,
    pub cols: usize,
    entries: Vec<Int>,
}

impl IntegerMatrix {
    pub fn new(rows: usize, cols: usize, entries: Vec<Int>) -> Self {
        assert_eq!(rows * cols, entries.len(), "entry count must be rows*cols");
        IntegerMatrix { rows, cols, entries }
    }

    pub fn zero(rows: usize, cols: usize) -> Self {
        IntegerMatrix::new(rows, cols, vec![Int::zero(); rows * cols])
    }

    pub fn identity(n: usize) -> Self {
        let mut m = IntegerMatrix::zero(n, n);
        for i in 0..n {
            *m.at_mut(i, i) = Int::one();
        }
        m
    }

    pub fn from_columns(rank: usize, cols: &[LatVec]) -> Self {
        let mut m = IntegerMatrix::zero(rank, cols.len());
        for (j, c) in cols.iter().enumerate() {
            assert_eq!(c.len(), rank, "column length must equal rank");
            for i in 0..rank {
                *m.at_mut(i, j) = c[i].clone();
            }
        }
        m
    }

    pub fn from_rows(rows: &[LatVec]) -> Self {
        let cols = rows.first().map_or(0, |r| r.len());
        let mut m = IntegerMatrix::zero(rows.len(), cols);
        for (i, r) in rows.iter().enumerate() {
            assert_eq!(r.len(), cols, "ragged rows");
            for j in 0..cols {
                *m.at_mut(i, j) = r[j].clone();
            }
        }
        m
    }

    pub fn from_i64(rows: usize, cols: usize, entries: &[i64]) -> Self {
        IntegerMatrix::new(rows, cols, entries.iter().map(|&e| int(e)).collect())
    }

    pub fn at(&self, i: usize, j: usize) -> &Int {
        &self.entries[i * self.cols + j]
    }

    pub fn at_mut(&mut self, i: usize, j: usize) -> &mut Int {
        &mut self.entries[i * self.cols + j]
    }

    pub fn row(&self, i: usize) -> LatVec {
        (0..self.cols).map(|j| self.at(i, j).clone()).collect()
    }

    pub fn column(&self, j: usize) -> LatVec {
        (0..self.rows).map(|i| self.at(i, j).clone()).collect()
    }

    pub fn mul(&self, other: &IntegerMatrix) -> IntegerMatrix {
        assert_eq!(self.cols, other.rows, "dimension mismatch");
        let mut out = IntegerMatrix::zero(self.rows, other.cols);
        for i in 0..self.rows {
            for j in 0..other.cols {
                let mut acc = Int::zero();
                for k in 0..self.cols {
                    acc += self.at(i, k) * other.at(k, j);
                }
                *out.at_mut(i, j) = acc;
            }
        }
        out
    }

    pub fn mul_vec(&self, v: &[Int]) -> LatVec {
        assert_eq!(self.cols, v.len(), "dimension mismatch");
        (0..self.rows)
            .map(|i| (0..self.cols).map(|j| self.at(i, j) * &v[j]).sum())
            .collect()
    }

    /// Fraction-free Bareiss determinant; square matrices only.
    pub fn det(&self) -> Int {
        assert_eq!(self.rows, self.cols, "determinant of non-square matrix");
        let n = self.rows;
        if n == 0 {
            return Int::one();
        }
        let mut a = self.entries.clone();
        let idx = |i: usize, j: usize| i * n + j;
        let mut sign = Int::one();
        let mut prev = Int::one();
        for k in 0..n - 1 {
            if a[idx(k, k)].is_zero() {
                match (k + 1..n).find(|&i| !a[idx(i, k)].is_zero()) {
                    Some(i) => {
                        for j in 0..n {
                            a.swap(idx(k, j), idx(i, j));
                        }
                        sign = -sign;
                    }
                    None => return Int::zero(),
                }
            }
            for i in k + 1..n {
                for j in k + 1..n {
                    let v = (&a[idx(i, j)] * &a[idx(k, k)] - &a[idx(i, k)] * &a[idx(k, j)]) / &prev;
                    a[idx(i, j)] = v;
                }
                a[idx(i, k)] = Int::zero();
            }
            prev = a[idx(k, k)].clone();
        }
        sign * a[idx(n - 1, n - 1)].clone()
    }

    pub fn is_unimodular(&self) -> bool {
        self.rows == self.cols && self.det().abs().is_one()
    }
}

/// U·A·V diagonal with divisor chain d₁ | d₂ | …; U and V unimodular.
#[derive(Clone, Debug)]
pub struct SmithDecomposition {
    pub u: IntegerMatrix,
    pub v: IntegerMatrix,
    pub divisors: Vec<Int>,
}

impl SmithDecomposition {
    /// Nontrivial torsion part of coker(A): divisors > 1.
    pub fn torsion(&self) -> Vec<Int> {
        self.divisors
            .iter()
            .filter(|d| !d.is_zero() && !d.is_one())
            .cloned()
            .collect()
    }

    pub fn rank(&self) -> usize {
        self.divisors.iter().filter(|d| !d.is_zero()).count()
    }
}

/// Pivot choice: nonzero entry of minimal absolute value, ties broken by
/// lowest (row, column) index, so U and V are reproducible across runs.
pub fn smith_normal_form(a: &IntegerMatrix) -> SmithDecomposition {
    let (rows, cols) = (a.rows, a.cols);
    let mut d = a.clone();
    let mut u = IntegerMatrix::identity(rows);
    let mut v = IntegerMatrix::identity(cols);

    let swap_rows = |m: &mut IntegerMatrix, r1: usize, r2: usize| {
        for j in 0..m.cols {
            let t = m.at(r1, j).clone();
            *m.at_mut(r1, j) = m.at(r2, j).clone();
            *m.at_mut(r2, j) = t;
        }
    };
    let swap_cols = |m: &mut IntegerMatrix, c1: usize, c2: usize| {
        for i in 0..m.rows {
            let t = m.at(i, c1).clone();
            *m.at_mut(i, c1) = m.at(i, c2).clone();
            *m.at_mut(i, c2) = t;
        }
    };

    let mut t = 0;
    while t < rows.min(cols) {
        // Locate the pivot in the trailing submatrix.
        let mut pivot: Option<(usize, usize)> = None;
        for i in t..rows {
            for j in t..cols {
                if d.at(i, j).is_zero() {
                    continue;
                }
                match pivot {
                    None => pivot = Some((i, j)),
                    Some((pi, pj)) => {
                        if d.at(i, j).abs() < d.at(pi, pj).abs() {
                            pivot = Some((i, j));
                        }
                    }
                }
            }
        }
        let Some((pi, pj)) = pivot else { break };
        if pi != t {
            swap_rows(&mut d, t, pi);
            swap_rows(&mut u, t, pi);
        }
        if pj != t {
            swap_cols(&mut d, t, pj);
            swap_cols(&mut v, t, pj);
        }

        let mut clean = true;
        for i in t + 1..rows {
            if !d.at(i, t).is_zero() {
                let q = round_quotient(d.at(i, t), d.at(t, t));
                if !q.is_zero() {
                    for j in 0..cols {
                        let sub = &q * d.at(t, j);
                        *d.at_mut(i, j) -= sub;
                    }
                    for j in 0..rows {
                        let sub = &q * u.at(t, j);
                        *u.at_mut(i, j) -= sub;
                    }
                }
                if !d.at(i, t).is_zero() {
                    clean = false;
                }
            }
        }
        for j in t + 1..cols {
            if !d.at(t, j).is_zero() {
                let q = round_quotient(d.at(t, j), d.at(t, t));
                if !q.is_zero() {
                    for i in 0..rows {
                        let sub = &q * d.at(i, t);
                        *d.at_mut(i, j) -= sub;
                    }
                    for i in 0..cols {
                        let sub = &q * v.at(i, t);
                        *v.at_mut(i, j) -= sub;
                    }
                }
                if !d.at(t, j).is_zero() {
                    clean = false;
                }
            }
        }
        if !clean {
            continue; // smaller remainders exist; re-pivot on this corner
        }

        // Pivot must divide the rest of the submatrix for the divisor chain.
        let mut fixed = false;
        'scan: for i in t + 1..rows {
            for j in t + 1..cols {
                if !d.at(i, j).mod_floor(d.at(t, t)).is_zero() {
                    for jj in 0..cols {
                        let add = d.at(i, jj).clone();
                        *d.at_mut(t, jj) += add;
                    }
                    for jj in 0..rows {
                        let add = u.at(i, jj).clone();
                        *u.at_mut(t, jj) += add;
                    }
                    fixed = true;
                    break 'scan;
                }
            }
        }
        if fixed {
            continue;
        }

        if d.at(t, t).is_negative() {
            for j in 0..cols {
                let neg = -d.at(t, j).clone();
                *d.at_mut(t, j) = neg;
            }
            for j in 0..rows {
                let neg = -u.at(t, j).clone();
                *u.at_mut(t, j) = neg;
            }
        }
        t += 1;
    }

    let divisors = (0..rows.min(cols)).map(|i| d.at(i, i).clone()).collect();
    SmithDecomposition { u, v, divisors }
}

/// Quotient with remainder of minimal absolute value. Floor division leaves
/// a remainder with the divisor's sign, so when it is too large the next
/// quotient is always one step up, regardless of that sign.
fn round_quotient(a: &Int, b: &Int) -> Int {
    let (q, r) = a.div_mod_floor(b);
    let two_r: Int = &r * Int::from(2);
    if two_r.abs() > b.abs() {
        q + 1
    } else {
        q
    }
}

/// Free rank and torsion of ℤ^rank / ⟨gens⟩.
pub fn quotient_group(sublattice_gens: &[LatVec], ambient_rank: usize) -> (usize, Vec<Int>) {
    for g in sublattice_gens {
        assert_eq!(g.len(), ambient_rank, "generator length must equal rank");
    }
    if sublattice_gens.is_empty() {
        return (ambient_rank, Vec::new());
    }
    let snf = smith_normal_form(&IntegerMatrix::from_columns(ambient_rank, sublattice_gens));
    (ambient_rank - snf.rank(), snf.torsion())
}

/// Basis of the saturated integer kernel {x ∈ ℤ^cols : A·x = 0}.
pub fn integer_kernel(a: &IntegerMatrix) -> Vec<LatVec> {
    let snf = smith_normal_form(a);
    (snf.rank()..a.cols).map(|j| snf.v.column(j)).collect()
}

/// Some integral x with A·x = b, or None when no such x exists over ℤ.
pub fn solve_integer(a: &IntegerMatrix, b: &[Int]) -> Option<LatVec> {
    assert_eq!(a.rows, b.len(), "dimension mismatch");
    let snf = smith_normal_form(a);
    let c = snf.u.mul_vec(b);
    let mut y = vec![Int::zero(); a.cols];
    for i in 0..a.rows {
        let d = if i < snf.divisors.len() {
            snf.divisors[i].clone()
        } else {
            Int::zero()
        };
        if d.is_zero() {
            if !c[i].is_zero() {
                return None;
            }
        } else {
            let (q, r) = c[i].div_mod_floor(&d);
            if !r.is_zero() {
                return None;
            }
            y[i] = q;
        }
    }
    Some(snf.v.mul_vec(&y))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::lat;

    fn check_decomposition(a: &IntegerMatrix) {
        let snf = smith_normal_form(a);
        assert!(snf.u.is_unimodular(), "U not unimodular");
        assert!(snf.v.is_unimodular(), "V not unimodular");
        let d = snf.u.mul(a).mul(&snf.v);
        for i in 0..d.rows {
            for j in 0..d.cols {
                if i == j && i < snf.divisors.len() {
                    assert_eq!(d.at(i, j), &snf.divisors[i]);
                } else {
                    assert!(d.at(i, j).is_zero(), "off-diagonal residue at ({i},{j})");
                }
            }
        }
        let mut nonzero_seen_zero = false;
        for w in snf.divisors.windows(2) {
            if w[1].is_zero() {
                nonzero_seen_zero = true;
                continue;
            }
            assert!(!nonzero_seen_zero, "zero divisor before nonzero");
            assert!(w[1].mod_floor(&w[0]).is_zero(), "divisor chain broken");
        }
    }

    #[test]
    fn snf_of_diagonal_matrix_is_itself() {
        let a = IntegerMatrix::from_i64(2, 2, &[2, 0, 0, 2]);
        let snf = smith_normal_form(&a);
        assert_eq!(snf.divisors, vec![int(2), int(2)]);
        check_decomposition(&a);
    }

    #[test]
    fn snf_of_three_skew_columns() {
        let a = IntegerMatrix::from_columns(2, &[lat(&[-1, 3]), lat(&[3, -1]), lat(&[-1, -1])]);
        let snf = smith_normal_form(&a);
        assert_eq!(snf.divisors, vec![int(1), int(4)]);
        check_decomposition(&a);
    }

    #[test]
    fn snf_of_two_skew_columns() {
        let a = IntegerMatrix::from_columns(2, &[lat(&[-1, 3]), lat(&[3, -1])]);
        let snf = smith_normal_form(&a);
        assert_eq!(snf.divisors, vec![int(1), int(8)]);
        check_decomposition(&a);
    }

    #[test]
    fn snf_terminates_when_both_operands_are_negative() {
        // Reduction of -5 by a pivot of -3 once looped: the rounded quotient
        // came out 0 and the matrix never changed.
        let a = IntegerMatrix::from_columns(2, &[lat(&[-5, 4]), lat(&[-3, -5])]);
        let snf = smith_normal_form(&a);
        assert_eq!(snf.divisors, vec![int(1), int(37)]);
        check_decomposition(&a);
    }

    #[test]
    fn snf_sweep_over_small_two_by_two_matrices() {
        for a in -4i64..=4 {
            for b in -4i64..=4 {
                for c in -4i64..=4 {
                    for d in -4i64..=4 {
                        let m = IntegerMatrix::from_i64(2, 2, &[a, b, c, d]);
                        check_decomposition(&m);
                    }
                }
            }
        }
    }

    #[test]
    fn quotient_group_examples() {
        assert_eq!(
            quotient_group(&[lat(&[2, 0]), lat(&[0, 2])], 2),
            (0, vec![int(2), int(2)])
        );
        assert_eq!(quotient_group(&[lat(&[1, 0])], 2), (1, vec![]));
        assert_eq!(quotient_group(&[lat(&[2, 0])], 2), (1, vec![int(2)]));
    }

    #[test]
    fn quotient_torsion_matches_determinant_for_square_gens() {
        let gens = [lat(&[-1, 3]), lat(&[3, -1])];
        let (free, torsion) = quotient_group(&gens, 2);
        assert_eq!(free, 0);
        let order: Int = torsion.iter().product();
        let det = IntegerMatrix::from_columns(2, &gens).det().abs();
        assert_eq!(order, det);
    }

    /// Independent oracle: count coset classes of ℤ² modulo the generated
    /// sublattice by brute-force enumeration of lattice combinations.
    #[test]
    fn coset_enumeration_oracle_for_skew_pair() {
        let g1 = (-1i64, 3i64);
        let g2 = (3i64, -1i64);
        let mut lattice = std::collections::HashSet::new();
        for a in -24..=24i64 {
            for b in -24..=24i64 {
                lattice.insert((a * g1.0 + b * g2.0, a * g1.1 + b * g2.1));
            }
        }
        let mut reps: Vec<(i64, i64)> = Vec::new();
        for x in 0..8i64 {
            for y in 0..8i64 {
                if !reps
                    .iter()
                    .any(|&(rx, ry)| lattice.contains(&(x - rx, y - ry)))
                {
                    reps.push((x, y));
                }
            }
        }
        assert_eq!(reps.len(), 8);
    }

    #[test]
    fn kernel_spans_the_orthogonal_sublattice() {
        let a = IntegerMatrix::from_rows(&[lat(&[2, 0, -1])]);
        let ker = integer_kernel(&a);
        assert_eq!(ker.len(), 2);
        for k in &ker {
            assert_eq!(a.mul_vec(k), lat(&[0]));
        }
        assert_eq!(quotient_group(&ker, 3), (1, vec![]));

        let full = IntegerMatrix::identity(2);
        assert!(integer_kernel(&full).is_empty());
    }

    #[test]
    fn solve_identity_and_parity_obstruction() {
        let id = IntegerMatrix::identity(2);
        assert_eq!(solve_integer(&id, &lat(&[3, 5])), Some(lat(&[3, 5])));

        let diag = IntegerMatrix::from_i64(2, 2, &[2, 0, 0, 2]);
        assert_eq!(solve_integer(&diag, &lat(&[1, 0])), None);

        let a = IntegerMatrix::from_columns(2, &[lat(&[1, 1]), lat(&[1, -1])]);
        let x = solve_integer(&a, &lat(&[2, 0])).expect("solvable");
        assert_eq!(a.mul_vec(&x), lat(&[2, 0]));
        assert_eq!(x, lat(&[1, 1]));
    }

    #[test]
    fn solve_underdetermined_system() {
        let a = IntegerMatrix::from_columns(2, &[lat(&[2, 0]), lat(&[3, 0]), lat(&[0, 1])]);
        let x = solve_integer(&a, &lat(&[1, 4])).expect("gcd(2,3)=1 makes this solvable");
        assert_eq!(a.mul_vec(&x), lat(&[1, 4]));
        assert_eq!(solve_integer(&a, &lat(&[1, 4])), Some(x));
    }
}
