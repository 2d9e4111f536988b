//! Generalized hexastix arrangements over the permutohedral lattice.
//!
//! The crate builds `n + 1` families of parallel lines in `R^n` whose
//! directions are the shortest vectors of `A*_n`, certifies that lines of
//! different families stay as far apart as the lattice allows (for
//! prime-power `n`, via a finite-field construction), and computes the exact
//! fraction of space covered by the largest non-overlapping prisms around
//! them. All arithmetic is exact over the rationals.
//!
//! Indices are 0-based throughout the API: family `i` here is `L_{i+1}` in
//! the usual 1-based notation.

pub mod alt;
pub mod coverage;
pub mod error;
pub mod field;
pub mod io;
pub mod lattice;
pub mod linalg;
pub mod lines;
pub mod par;
pub mod polytope;
pub mod rational;

pub use error::{Error, Result};
pub use rational::{int, rat, JsonRat, Rat, RatVec, SqDist};
