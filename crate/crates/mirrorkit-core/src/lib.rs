//! Exact toolkit for toric mirror geometry at desk scale: stacky fans and
//! their orbit strata, tropical spines of hypersurfaces, Lagrangian skeleton
//! combinatorics, graded Hom calculations between boundary strata, and a
//! floating-point amoeba laboratory for comparing the exact picture against
//! sampled hypersurfaces.

pub mod amoeba;
pub mod arith;
pub mod bondal;
pub mod fan;
pub mod fm;
pub mod lattice;
pub mod polyhedra;
pub mod report;
pub mod skeleton;
pub mod spine;
pub mod svg;

pub use arith::{Int, LatVec, Rat, RatVec};
