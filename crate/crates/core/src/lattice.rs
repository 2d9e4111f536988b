//! The root lattice `A_d`, its dual the permutohedral lattice `A*_d`, the
//! projections between coordinate spaces, and exact nearest-point decoding.
//!
//! Both lattices live in the sum-zero hyperplane `H_d` of `R^(d+1)`. `A*_d`
//! is the set of sum-zero points whose coordinates differ pairwise by
//! integers; it is the union of `d + 1` cosets of `A_d = Z^(d+1) ∩ H_d`,
//! which is how [`nearest_sq_dist`] decodes it.

use std::collections::BTreeSet;

use itertools::Itertools;
use num_bigint::BigInt;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};
use crate::rational::{frac, int, rat, Rat, RatVec, SqDist};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum LatticeFamily {
    /// `Z^(d+1) ∩ H_d`.
    A,
    /// The permutohedral lattice.
    AStar,
}

/// A lattice of the given family in `H_d`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct LatticeRef {
    pub family: LatticeFamily,
    pub d: usize,
}

impl LatticeRef {
    pub fn a(d: usize) -> Self {
        LatticeRef { family: LatticeFamily::A, d }
    }

    pub fn a_star(d: usize) -> Self {
        LatticeRef { family: LatticeFamily::AStar, d }
    }

    pub fn contains(&self, x: &RatVec) -> bool {
        x.dim() == self.d + 1
            && match self.family {
                LatticeFamily::A => is_in_a(x),
                LatticeFamily::AStar => is_in_a_star(x),
            }
    }
}

pub fn is_in_a(x: &RatVec) -> bool {
    x.is_sum_zero() && x.iter().all(|c| c.is_integer())
}

pub fn is_in_a_star(x: &RatVec) -> bool {
    if !x.is_sum_zero() {
        return false;
    }
    match x.coords().first() {
        None => true,
        Some(x0) => x.iter().all(|c| (c - x0).is_integer()),
    }
}

/// Projection along `(1, …, 1)` onto the sum-zero hyperplane.
///
/// Accepts dimension 1 (the image is the single point of `H_0`); rejects
/// the empty vector.
pub fn proj_t(x: &RatVec) -> Result<RatVec> {
    if x.dim() == 0 {
        return Err(Error::Dimension { got: 0, what: "projection onto H needs dim >= 1" });
    }
    let mean = x.sum() / int(x.dim() as i64);
    Ok(x.iter().map(|c| c - &mean).collect())
}

/// Deletes coordinate `i` (0-based).
pub fn proj_s(x: &RatVec, i: usize) -> Result<RatVec> {
    if i >= x.dim() {
        return Err(Error::IndexOutOfRange { index: i, len: x.dim() });
    }
    Ok(x.removed(i))
}

/// The `n + 1` shortest vectors `v^(i)` of `A*_n` (up to sign): `n/(n+1)` at
/// position `i`, `-1/(n+1)` elsewhere.
pub fn shortest_vectors(n: usize) -> Result<Vec<RatVec>> {
    if n < 2 {
        return Err(Error::Dimension { got: n, what: "shortest vectors need n >= 2" });
    }
    let m = n as i64 + 1;
    Ok((0..=n)
        .map(|i| {
            (0..=n)
                .map(|k| if k == i { rat(n as i64, m) } else { rat(-1, m) })
                .collect()
        })
        .collect())
}

fn round_half_up(x: &Rat) -> BigInt {
    (x + rat(1, 2)).floor().to_integer()
}

/// Nearest point of `A_d` to a sum-zero `y`: round every coordinate, then
/// repair the coordinate sum by moving the coordinates whose rounding error
/// was largest in the offending direction.
fn nearest_in_a(y: &RatVec) -> RatVec {
    let mut z: Vec<BigInt> = y.iter().map(round_half_up).collect();
    let deficiency: BigInt = z.iter().sum();
    let Some(deficiency) = deficiency.to_i64() else {
        unreachable!("coordinate sum of a rounded sum-zero vector is bounded by its dimension");
    };
    if deficiency != 0 {
        // delta_i = y_i - z_i in [-1/2, 1/2)
        let mut order: Vec<usize> = (0..y.dim()).collect();
        let delta: Vec<Rat> = y
            .iter()
            .zip(&z)
            .map(|(yi, zi)| yi - Rat::from_integer(zi.clone()))
            .collect();
        if deficiency > 0 {
            // Undo the roundings that went up the most.
            order.sort_by(|&a, &b| delta[a].cmp(&delta[b]).then(a.cmp(&b)));
            for &k in order.iter().take(deficiency as usize) {
                z[k] -= 1;
            }
        } else {
            order.sort_by(|&a, &b| delta[b].cmp(&delta[a]).then(a.cmp(&b)));
            for &k in order.iter().take((-deficiency) as usize) {
                z[k] += 1;
            }
        }
    }
    z.into_iter().map(Rat::from_integer).collect()
}

/// Coset representative `T(e_0 + … + e_{k-1})` of `A*_d / A_d`.
fn glue_vector(dim: usize, k: usize) -> RatVec {
    let m = dim as i64;
    let k = k as i64;
    (0..m)
        .map(|i| if i < k { rat(m - k, m) } else { rat(-k, m) })
        .collect()
}

fn check_sum_zero(x: &RatVec) -> Result<()> {
    if x.is_sum_zero() {
        Ok(())
    } else {
        Err(Error::NotSumZero(x.to_string()))
    }
}

/// Exact squared distance from `x ∈ H_d` to the nearest point of `lat`,
/// together with that point.
///
/// Ties are broken deterministically (first coset, then lowest coordinate
/// index), so the returned point is reproducible.
pub fn nearest_sq_dist(x: &RatVec, lat: LatticeRef) -> Result<(SqDist, RatVec)> {
    check_sum_zero(x)?;
    if x.dim() != lat.d + 1 {
        return Err(Error::Dimension { got: x.dim(), what: "vector must have dimension d + 1" });
    }
    let m = x.dim();
    let point = match lat.family {
        LatticeFamily::A => nearest_in_a(x),
        LatticeFamily::AStar => {
            let mut best: Option<(Rat, RatVec)> = None;
            for k in 0..m {
                let g = glue_vector(m, k);
                let shifted = x - &g;
                let candidate = &nearest_in_a(&shifted) + &g;
                let dist = (x - &candidate).norm_sq();
                if best.as_ref().is_none_or(|(b, _)| dist < *b) {
                    best = Some((dist, candidate));
                }
            }
            best.expect("at least one coset").1
        }
    };
    let dist = (x - &point).norm_sq();
    Ok((SqDist::new(dist)?, point))
}

/// The squared covering radius of `A*_d`: `d(d+2) / (12(d+1))`.
pub fn max_sq_dist(d: usize) -> Rat {
    let d = d as i64;
    rat(d * (d + 2), 12 * (d + 1))
}

/// Vertices of the Voronoi cell of the origin in `A*_d`: all permutations of
/// `((2i - d) / (2(d+1)))_{i=0..d}`, sorted.
pub fn permutohedron_vertices(d: usize) -> Result<Vec<RatVec>> {
    if d == 0 {
        return Err(Error::Dimension { got: 0, what: "permutohedron needs d >= 1" });
    }
    let di = d as i64;
    let base: Vec<Rat> = (0..=di).map(|i| rat(2 * i - di, 2 * (di + 1))).collect();
    let set: BTreeSet<RatVec> = base
        .into_iter()
        .permutations(d + 1)
        .map(RatVec::new)
        .collect();
    Ok(set.into_iter().collect())
}

/// Whether the residues of `xs` modulo 1 are `c, c + 1/m, …, c + (m-1)/m`
/// for some `c`.
pub fn is_uniform_mod1(xs: &[Rat], m: usize) -> bool {
    if m == 0 || xs.len() != m {
        return false;
    }
    let mut residues: Vec<Rat> = xs.iter().map(frac).collect();
    residues.sort();
    let step = rat(1, m as i64);
    residues
        .iter()
        .enumerate()
        .all(|(k, r)| r - &residues[0] == &step * int(k as i64))
}

/// Squared distance between two distinct parallel lines of one family: `1 - 1/n`.
pub fn parallel_sq_dist(n: usize) -> Result<Rat> {
    if n < 2 {
        return Err(Error::Dimension { got: n, what: "parallel distance needs n >= 2" });
    }
    Ok(Rat::one() - rat(1, n as i64))
}

/// Smallest non-negative integer `b` with `b^2 >= x`.
pub(crate) fn ceil_sqrt(x: &Rat) -> BigInt {
    if !x.is_positive() {
        return BigInt::zero();
    }
    let mut b = x.ceil().to_integer().sqrt();
    while Rat::from_integer(&b * &b) < *x {
        b += 1;
    }
    b
}

/// Every point `P ∈ A*_d` with `|P + shift|^2 <= radius_sq`, where
/// `shift ∈ H_d`. Sorted by `|P + shift|^2`, then lexicographically.
///
/// Points are enumerated as `T(z)` with `z ∈ Z^d × {0}`; the box for `z`
/// follows from `(y_i - y_d)^2 <= 2|y|^2`.
pub fn a_star_points_within(shift: &RatVec, radius_sq: &Rat) -> Result<Vec<RatVec>> {
    check_sum_zero(shift)?;
    let m = shift.dim();
    if m == 0 {
        return Err(Error::Dimension { got: 0, what: "empty vector" });
    }
    let last = &shift[m - 1];
    let bound = ceil_sqrt(&(radius_sq * int(2)));
    let ranges: Vec<(i64, i64)> = (0..m - 1)
        .map(|i| {
            let c = &shift[i] - last;
            let lo = (-&c).floor().to_integer() - &bound;
            let hi = (-&c).ceil().to_integer() + &bound;
            (lo.to_i64().expect("small box"), hi.to_i64().expect("small box"))
        })
        .collect();
    let mut out: Vec<(Rat, RatVec)> = Vec::new();
    let mut z: Vec<i64> = ranges.iter().map(|r| r.0).collect();
    loop {
        let mut full: Vec<Rat> = z.iter().map(|&v| int(v)).collect();
        full.push(Rat::zero());
        let p = proj_t(&RatVec::new(full))?;
        let y = &p + shift;
        let d2 = y.norm_sq();
        if d2 <= *radius_sq {
            out.push((d2, p));
        }
        // odometer increment
        let mut k = 0;
        loop {
            if k == z.len() {
                out.sort();
                return Ok(out.into_iter().map(|(_, p)| p).collect());
            }
            if z[k] < ranges[k].1 {
                z[k] += 1;
                break;
            }
            z[k] = ranges[k].0;
            k += 1;
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn proj_t_examples() {
        assert!(proj_t(&RatVec::from_ints(&[1, 1, 1])).unwrap().is_zero());
        assert_eq!(
            proj_t(&RatVec::from_ints(&[1, 0, 0, 0])).unwrap(),
            RatVec::from_fracs(&[(3, 4), (-1, 4), (-1, 4), (-1, 4)])
        );
        let x = RatVec::from_fracs(&[(1, 3), (-1, 2), (1, 6)]);
        assert_eq!(proj_t(&x).unwrap(), x);
        assert_eq!(proj_t(&RatVec::from_ints(&[5])).unwrap(), RatVec::zeros(1));
        assert!(proj_t(&RatVec::zeros(0)).is_err());
    }

    #[test]
    fn proj_s_examples() {
        assert_eq!(proj_s(&RatVec::from_ints(&[1, 2, 3]), 1).unwrap(), RatVec::from_ints(&[1, 3]));
        let u1 = RatVec::from_fracs(&[(0, 1), (1, 4), (-1, 4), (0, 1)]);
        assert_eq!(proj_s(&u1, 3).unwrap(), RatVec::from_fracs(&[(0, 1), (1, 4), (-1, 4)]));
        assert_eq!(proj_s(&RatVec::from_ints(&[7]), 0).unwrap().dim(), 0);
        assert!(matches!(
            proj_s(&RatVec::from_ints(&[1, 2]), 2),
            Err(Error::IndexOutOfRange { index: 2, len: 2 })
        ));
    }

    #[test]
    fn shortest_vector_examples() {
        let v = shortest_vectors(3).unwrap();
        assert_eq!(v[0], RatVec::from_fracs(&[(3, 4), (-1, 4), (-1, 4), (-1, 4)]));
        for vi in shortest_vectors(4).unwrap() {
            assert_eq!(vi.norm_sq(), rat(4, 5));
            assert!(vi.is_sum_zero());
            assert!(is_in_a_star(&vi));
        }
        let total = v.iter().fold(RatVec::zeros(4), |acc, x| &acc + x);
        assert!(total.is_zero());
        assert!(shortest_vectors(1).is_err());
    }

    #[test]
    fn nearest_examples() {
        let (d, p) = nearest_sq_dist(&RatVec::zeros(3), LatticeRef::a_star(2)).unwrap();
        assert!(d.value().is_zero() && p.is_zero());

        let x = RatVec::from_fracs(&[(1, 4), (-1, 4)]);
        let (d, p) = nearest_sq_dist(&x, LatticeRef::a_star(1)).unwrap();
        assert_eq!(*d.value(), rat(1, 8));
        assert!(p.is_zero());

        // residues {0, 1/3, 2/3}
        let x = RatVec::from_fracs(&[(-1, 3), (1, 3), (0, 1)]);
        let (d, p) = nearest_sq_dist(&x, LatticeRef::a_star(2)).unwrap();
        assert_eq!(*d.value(), rat(2, 9));
        assert!(is_in_a_star(&p));

        assert!(matches!(
            nearest_sq_dist(&RatVec::from_ints(&[1, 0]), LatticeRef::a_star(1)),
            Err(Error::NotSumZero(_))
        ));
        assert!(nearest_sq_dist(&RatVec::zeros(3), LatticeRef::a_star(1)).is_err());
    }

    #[test]
    fn nearest_in_degenerate_dimension() {
        let (d, p) = nearest_sq_dist(&RatVec::zeros(1), LatticeRef::a_star(0)).unwrap();
        assert!(d.value().is_zero());
        assert_eq!(p.dim(), 1);
    }

    #[test]
    fn nearest_in_a_family() {
        let x = RatVec::from_fracs(&[(2, 5), (2, 5), (-4, 5)]);
        let (d, p) = nearest_sq_dist(&x, LatticeRef::a(2)).unwrap();
        assert!(is_in_a(&p));
        // (1, 0, -1) and (0, 1, -1) tie; the lower index wins
        assert_eq!(p, RatVec::from_ints(&[1, 0, -1]));
        assert_eq!(*d.value(), rat(9 + 4 + 1, 25));
    }

    #[test]
    fn max_sq_dist_values() {
        assert!(max_sq_dist(0).is_zero());
        assert_eq!(max_sq_dist(1), rat(1, 8));
        assert_eq!(max_sq_dist(2), rat(2, 9));
        assert_eq!(max_sq_dist(3), rat(5, 16));
    }

    #[test]
    fn sigma_identity() {
        for d in 0..=20i64 {
            let lhs: i64 = (1..=d + 1).map(|i| (2 * (i - 1) - d).pow(2)).sum();
            let sigma = d * (d + 1) * (d + 2) / 3;
            assert_eq!(lhs, sigma, "d = {d}");
            assert_eq!(max_sq_dist(d as usize), rat(sigma, 4 * (d + 1) * (d + 1)));
        }
    }

    #[test]
    fn permutohedron_examples() {
        let v1 = permutohedron_vertices(1).unwrap();
        assert_eq!(
            v1,
            vec![RatVec::from_fracs(&[(-1, 4), (1, 4)]), RatVec::from_fracs(&[(1, 4), (-1, 4)])]
        );
        let v2 = permutohedron_vertices(2).unwrap();
        assert_eq!(v2.len(), 6);
        assert!(v2.iter().all(|v| v.norm_sq() == rat(2, 9)));
        assert_eq!(permutohedron_vertices(3).unwrap().len(), 24);
    }

    #[test]
    fn uniform_mod1_examples() {
        assert!(is_uniform_mod1(&[rat(1, 4), rat(3, 4)], 2));
        assert!(!is_uniform_mod1(&[int(0), int(0), rat(1, 3)], 3));
        assert!(is_uniform_mod1(&[rat(-1, 3), rat(1, 3), int(0)], 3));
        assert!(!is_uniform_mod1(&[rat(1, 4)], 2));
        assert!(is_uniform_mod1(&[rat(5, 7)], 1));
    }

    #[test]
    fn parallel_examples() {
        assert_eq!(parallel_sq_dist(4).unwrap(), rat(3, 4));
        assert_eq!(parallel_sq_dist(13).unwrap(), rat(12, 13));
        assert!(parallel_sq_dist(13).unwrap() < max_sq_dist(11));
        assert_eq!(max_sq_dist(11), rat(143, 144));
        assert_eq!(max_sq_dist(10), rat(10, 11));
        assert!(parallel_sq_dist(12).unwrap() >= max_sq_dist(10));
    }

    #[test]
    fn ceil_sqrt_small() {
        assert_eq!(ceil_sqrt(&int(4)), BigInt::from(2));
        assert_eq!(ceil_sqrt(&rat(5, 2)), BigInt::from(2));
        assert_eq!(ceil_sqrt(&rat(1, 100)), BigInt::from(1));
        assert_eq!(ceil_sqrt(&int(0)), BigInt::from(0));
    }

    #[test]
    fn enumerated_points_are_lattice_points() {
        let shift = RatVec::from_fracs(&[(-1, 3), (0, 1), (1, 3)]);
        let pts = a_star_points_within(&shift, &int(1)).unwrap();
        assert!(!pts.is_empty());
        for p in &pts {
            assert!(is_in_a_star(p));
            assert!((p + &shift).norm_sq() <= int(1));
        }
        let origin = a_star_points_within(&RatVec::zeros(3), &rat(1, 100)).unwrap();
        assert_eq!(origin, vec![RatVec::zeros(3)]);
        // A*_2 has 6 minimal vectors of norm^2 2/3.
        let shell = a_star_points_within(&RatVec::zeros(3), &rat(2, 3)).unwrap();
        assert_eq!(shell.len(), 7);
    }
}
