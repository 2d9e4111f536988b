//! Minimum distances between line families.
//!
//! Lines are never materialized. The closest approach between `L_i` and
//! `L_j` reduces to the distance from a single vector `w ∈ H_{n-2}` to the
//! lattice `A*_{n-2}`.

use crate::error::{Error, Result};
use crate::field::OffsetFamily;
use crate::lattice::{max_sq_dist, nearest_sq_dist, parallel_sq_dist, proj_s, proj_t, LatticeRef};
use crate::par;
use crate::rational::{Rat, RatVec, SqDist};

/// One family `L_i = u^(i) + A_n + R v^(i)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LineFamily {
    pub index: usize,
    pub offset: RatVec,
    pub direction: RatVec,
}

impl OffsetFamily {
    pub fn line(&self, i: usize) -> Result<LineFamily> {
        if i > self.n {
            return Err(Error::IndexOutOfRange { index: i, len: self.n + 1 });
        }
        Ok(LineFamily { index: i, offset: self.u[i].clone(), direction: self.v[i].clone() })
    }
}

/// Closest approach between two families, with the lattice point of
/// `A*_{n-2}` nearest to `w`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PairWitness {
    pub i: usize,
    pub j: usize,
    pub w: RatVec,
    pub sq_dist: SqDist,
    pub nearest: RatVec,
}

fn check_pair(fam: &OffsetFamily, i: usize, j: usize) -> Result<()> {
    if fam.n < 3 {
        return Err(Error::Dimension { got: fam.n, what: "pair distances need n >= 3" });
    }
    for k in [i, j] {
        if k > fam.n {
            return Err(Error::IndexOutOfRange { index: k, len: fam.n + 1 });
        }
    }
    if i == j {
        return Err(Error::SameIndex(i));
    }
    Ok(())
}

/// `T(S^min(S^max(u^(i) - u^(j))))`: delete coordinates `i` and `j` from the
/// offset difference and project onto the sum-zero hyperplane.
pub fn w_vector(fam: &OffsetFamily, i: usize, j: usize) -> Result<RatVec> {
    check_pair(fam, i, j)?;
    let diff = &fam.u[i] - &fam.u[j];
    let reduced = proj_s(&proj_s(&diff, i.max(j))?, i.min(j))?;
    proj_t(&reduced)
}

pub fn pair_min_sq_dist(fam: &OffsetFamily, i: usize, j: usize) -> Result<PairWitness> {
    let w = w_vector(fam, i, j)?;
    let (sq_dist, nearest) = nearest_sq_dist(&w, LatticeRef::a_star(fam.n - 2))?;
    Ok(PairWitness { i, j, w, sq_dist, nearest })
}

/// Witnesses for every unordered pair `i < j`, in lexicographic order.
pub fn all_pairs(fam: &OffsetFamily) -> Result<Vec<PairWitness>> {
    let pairs: Vec<(usize, usize)> = (0..=fam.n)
        .flat_map(|i| (i + 1..=fam.n).map(move |j| (i, j)))
        .collect();
    par::map(&pairs, |&(i, j)| pair_min_sq_dist(fam, i, j))
        .into_iter()
        .collect()
}

/// True iff every pair of families attains the covering-radius bound
/// `max_sq_dist(n - 2)`.
pub fn check_optimal(fam: &OffsetFamily) -> bool {
    let bound = max_sq_dist(fam.n.saturating_sub(2));
    all_pairs(fam).is_ok_and(|ws| ws.iter().all(|w| *w.sq_dist.value() == bound))
}

/// Whether two parallel lines of one family come closer than the best
/// possible distance between lines of different families.
pub fn parallel_is_closer(n: usize) -> Result<bool> {
    if n < 3 {
        return Err(Error::Dimension { got: n, what: "comparison needs n >= 3" });
    }
    let parallel: Rat = parallel_sq_dist(n)?;
    Ok(parallel < max_sq_dist(n - 2))
}
