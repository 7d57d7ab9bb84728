//! Exact integer and rational scalars shared by every module.

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{Signed, Zero};

pub type Int = BigInt;
pub type Rat = BigRational;

/// Lattice vector in M or M^∨. Length is validated by each container.
pub type LatVec = Vec<Int>;
/// Point of M_ℝ with exact coordinates, denominators positive and reduced.
pub type RatVec = Vec<Rat>;

pub fn int(v: i64) -> Int {
    Int::from(v)
}

pub fn rat(p: i64, q: i64) -> Rat {
    Rat::new(int(p), int(q))
}

pub fn lat(coords: &[i64]) -> LatVec {
    coords.iter().map(|&c| int(c)).collect()
}

pub fn lat_to_rat(v: &[Int]) -> RatVec {
    v.iter().map(|c| Rat::from_integer(c.clone())).collect()
}

pub fn dot(a: &[Int], b: &[Int]) -> Int {
    debug_assert_eq!(a.len(), b.len());
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

pub fn dot_rat_int(a: &[Rat], b: &[Int]) -> Rat {
    debug_assert_eq!(a.len(), b.len());
    a.iter()
        .zip(b)
        .map(|(x, y)| x * Rat::from_integer(y.clone()))
        .sum()
}

pub fn dot_rat(a: &[Rat], b: &[Rat]) -> Rat {
    debug_assert_eq!(a.len(), b.len());
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

pub fn add_vec(a: &[Int], b: &[Int]) -> LatVec {
    a.iter().zip(b).map(|(x, y)| x + y).collect()
}

pub fn sub_vec(a: &[Int], b: &[Int]) -> LatVec {
    a.iter().zip(b).map(|(x, y)| x - y).collect()
}

pub fn neg_vec(a: &[Int]) -> LatVec {
    a.iter().map(|x| -x).collect()
}

pub fn scale_vec(c: &Int, a: &[Int]) -> LatVec {
    a.iter().map(|x| c * x).collect()
}

pub fn is_zero_vec(a: &[Int]) -> bool {
    a.iter().all(|x| x.is_zero())
}

pub fn linf_norm(a: &[Int]) -> Int {
    a.iter().map(|x| x.abs()).max().unwrap_or_else(Int::zero)
}

pub fn gcd_vec(a: &[Int]) -> Int {
    a.iter().fold(Int::zero(), |g, x| g.gcd(x))
}

/// Divide out the gcd. Zero vectors stay zero.
pub fn primitivize(v: &[Int]) -> LatVec {
    let g = gcd_vec(v);
    if g.is_zero() {
        return v.to_vec();
    }
    v.iter().map(|x| x / &g).collect()
}

/// Canonical "p/q" form: lowest terms, positive denominator, q always present.
pub fn format_rat(r: &Rat) -> String {
    format!("{}/{}", r.numer(), r.denom())
}

/// Accepts "p/q" or a bare integer "p".
pub fn parse_rat(s: &str) -> Option<Rat> {
    let s = s.trim();
    match s.split_once('/') {
        Some((p, q)) => {
            let p: Int = p.trim().parse().ok()?;
            let q: Int = q.trim().parse().ok()?;
            if q.is_zero() {
                return None;
            }
            Some(Rat::new(p, q))
        }
        None => {
            let p: Int = s.parse().ok()?;
            Some(Rat::from_integer(p))
        }
    }
}

/// Fractional part in [0, 1).
pub fn fract_mod1(r: &Rat) -> Rat {
    let f = r.floor();
    r - f
}

pub fn rat_to_f64(r: &Rat) -> f64 {
    use num_traits::ToPrimitive;
    r.to_f64().expect("rational out of f64 range")
}
