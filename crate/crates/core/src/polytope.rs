//! Exact convex polytopes: half-space and vertex representations, vertex
//! enumeration, redundancy removal, volume, and the extended cyclic
//! permutations used to describe symmetric cells.
//!
//! Volumes are always measured in the coordinates the polytope is given in.
//! For objects living in a sum-zero hyperplane we work in a [`Chart`] that
//! deletes one coordinate; the orthonormal volume is the chart volume times
//! `sqrt(ambient dimension)`.

use std::collections::BTreeSet;

use itertools::Itertools;
use num_integer::Integer;
use num_traits::{Signed, Zero};

use crate::error::{Error, Result};
use crate::linalg::{det, null_space, rank, solve};
use crate::par;
use crate::rational::{int, Rat, RatVec};

/// `normal · x <= rhs`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct HalfSpace {
    pub normal: RatVec,
    pub rhs: Rat,
}

impl HalfSpace {
    pub fn new(normal: RatVec, rhs: Rat) -> Self {
        HalfSpace { normal, rhs }
    }

    /// `rhs - normal · x`; non-negative inside.
    pub fn slack(&self, x: &RatVec) -> Rat {
        &self.rhs - self.normal.dot(x)
    }

    pub fn contains(&self, x: &RatVec) -> bool {
        !self.slack(x).is_negative()
    }

    pub fn is_active(&self, x: &RatVec) -> bool {
        self.slack(x).is_zero()
    }

    /// Whether both describe the same half-space (positive multiples).
    pub fn same_as(&self, other: &HalfSpace) -> bool {
        if self.normal.dim() != other.normal.dim() {
            return false;
        }
        let Some(k) = (0..self.normal.dim()).find(|&k| !self.normal[k].is_zero()) else {
            return false;
        };
        let c = &other.normal[k] / &self.normal[k];
        c.is_positive()
            && other.rhs == &self.rhs * &c
            && (0..self.normal.dim()).all(|l| other.normal[l] == &self.normal[l] * &c)
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct HPoly {
    pub dim: usize,
    pub constraints: Vec<HalfSpace>,
}

impl HPoly {
    pub fn new(dim: usize, constraints: Vec<HalfSpace>) -> Result<Self> {
        if dim == 0 {
            return Err(Error::Dimension { got: 0, what: "polytope needs dim >= 1" });
        }
        for c in &constraints {
            if c.normal.dim() != dim {
                return Err(Error::Dimension { got: c.normal.dim(), what: "normal dimension mismatch" });
            }
            if c.normal.is_zero() {
                return Err(Error::Precondition("zero normal".into()));
            }
        }
        Ok(HPoly { dim, constraints })
    }

    /// The cube `[-r, r]^dim`.
    pub fn cube(dim: usize, r: Rat) -> Self {
        let constraints = (0..dim)
            .flat_map(|k| {
                [int(1), int(-1)].into_iter().map({
                    let r = r.clone();
                    move |s| {
                        let mut n = RatVec::zeros(dim);
                        n[k] = s;
                        HalfSpace::new(n, r.clone())
                    }
                })
            })
            .collect();
        HPoly { dim, constraints }
    }

    pub fn contains(&self, x: &RatVec) -> bool {
        self.constraints.iter().all(|c| c.contains(x))
    }

    /// Whether every constraint of `self` matches one of `other` and vice versa.
    pub fn same_constraints(&self, other: &HPoly) -> bool {
        self.dim == other.dim
            && self.constraints.iter().all(|a| other.constraints.iter().any(|b| a.same_as(b)))
            && other.constraints.iter().all(|b| self.constraints.iter().any(|a| a.same_as(b)))
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct VPoly {
    pub dim: usize,
    pub vertices: Vec<RatVec>,
}

/// Affine rank of a point set (`-1` encoded as `None` for the empty set).
fn affine_rank(points: &[&RatVec]) -> Option<usize> {
    let (first, rest) = points.split_first()?;
    let rows: Vec<Vec<Rat>> = rest.iter().map(|p| (*p - *first).into_inner()).collect();
    Some(rank(&rows))
}

fn active_rank(c: &HalfSpace, vertices: &[RatVec]) -> Option<usize> {
    let active: Vec<&RatVec> = vertices.iter().filter(|v| c.is_active(v)).collect();
    affine_rank(&active)
}

/// Rejects polytopes with a nonzero recession direction.
///
/// The recession cone `{y : A y <= 0}` is trivial iff the normals have full
/// rank and no extreme ray exists; candidate rays are the one-dimensional
/// null spaces of rank-`(d-1)` subsets of normals.
pub fn check_bounded(h: &HPoly) -> Result<()> {
    let d = h.dim;
    let normals: Vec<Vec<Rat>> = h.constraints.iter().map(|c| c.normal.coords().to_vec()).collect();
    if normals.len() < d + 1 || rank(&normals) < d {
        return Err(Error::Unbounded);
    }
    let subsets: Vec<Vec<usize>> = (0..normals.len()).combinations(d - 1).collect();
    let unbounded = !par::all(&subsets, |s| {
        let rows: Vec<Vec<Rat>> = s.iter().map(|&k| normals[k].clone()).collect();
        let ns = null_space(&rows, d);
        if ns.len() != 1 {
            return true;
        }
        let y = RatVec::new(ns.into_iter().next().unwrap());
        [y.clone(), -&y].iter().all(|ray| {
            normals
                .iter()
                .any(|a| RatVec::new(a.clone()).dot(ray).is_positive())
        })
    });
    if unbounded {
        Err(Error::Unbounded)
    } else {
        Ok(())
    }
}

/// Exact vertex set of a bounded H-polytope with nonempty interior, sorted.
///
/// Every `d`-subset of constraints is solved; feasible solutions are kept.
pub fn vertex_enum(h: &HPoly) -> Result<VPoly> {
    let h = HPoly::new(h.dim, h.constraints.clone())?;
    check_bounded(&h)?;
    let d = h.dim;
    let subsets: Vec<Vec<usize>> = (0..h.constraints.len()).combinations(d).collect();
    let found: Vec<Option<RatVec>> = par::map(&subsets, |s| {
        let a: Vec<Vec<Rat>> = s.iter().map(|&k| h.constraints[k].normal.coords().to_vec()).collect();
        let b: Vec<Rat> = s.iter().map(|&k| h.constraints[k].rhs.clone()).collect();
        let x = RatVec::new(solve(&a, &b)?);
        h.contains(&x).then_some(x)
    });
    let vertices: BTreeSet<RatVec> = found.into_iter().flatten().collect();
    let vertices: Vec<RatVec> = vertices.into_iter().collect();
    check_full_dimensional(d, &vertices)?;
    Ok(VPoly { dim: d, vertices })
}

fn check_full_dimensional(d: usize, vertices: &[RatVec]) -> Result<()> {
    let refs: Vec<&RatVec> = vertices.iter().collect();
    match affine_rank(&refs) {
        None => Err(Error::Degenerate("empty feasible set".into())),
        Some(r) if r < d => Err(Error::Degenerate(format!("affine dimension {r} < {d}"))),
        Some(_) => Ok(()),
    }
}

/// Keeps only facet-defining constraints (first representative of each
/// distinct half-space), in input order.
pub fn remove_redundant(h: &HPoly) -> Result<HPoly> {
    let v = vertex_enum(h)?;
    Ok(facets_of(h, &v.vertices))
}

fn facets_of(h: &HPoly, vertices: &[RatVec]) -> HPoly {
    let d = h.dim;
    let is_facet = par::map(&h.constraints, |c| active_rank(c, vertices) == Some(d - 1));
    let mut kept: Vec<HalfSpace> = Vec::new();
    for (c, facet) in h.constraints.iter().zip(is_facet) {
        if facet && !kept.iter().any(|k| k.same_as(c)) {
            kept.push(c.clone());
        }
    }
    HPoly { dim: d, constraints: kept }
}

/// Both representations of a full-dimensional bounded polytope, with
/// the facet/vertex incidence.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Polytope {
    /// Minimal H-representation.
    pub h: HPoly,
    pub v: VPoly,
    /// For each facet, the sorted indices of the vertices on it.
    pub incidence: Vec<Vec<usize>>,
}

impl Polytope {
    pub fn from_hpoly(h: &HPoly) -> Result<Self> {
        let v = vertex_enum(h)?;
        let h = facets_of(h, &v.vertices);
        Ok(Polytope::assemble(h, v))
    }

    fn assemble(h: HPoly, v: VPoly) -> Self {
        let incidence = h
            .constraints
            .iter()
            .map(|c| (0..v.vertices.len()).filter(|&k| c.is_active(&v.vertices[k])).collect())
            .collect();
        Polytope { h, v, incidence }
    }

    pub fn dim(&self) -> usize {
        self.h.dim
    }

    pub fn volume(&self) -> Rat {
        simplex_volume_sum(&self.v.vertices, &pulling_triangulation(&self.v.vertices, &self.incidence, self.dim()), self.dim())
    }
}

/// Exact volume of the polytope given by `h` with vertex set `v`.
pub fn volume_param(h: &HPoly, v: &VPoly) -> Result<Rat> {
    if h.dim != v.dim {
        return Err(Error::Dimension { got: v.dim, what: "H and V dimensions differ" });
    }
    if let Some(bad) = v.vertices.iter().find(|x| !h.contains(x)) {
        return Err(Error::Precondition(format!("vertex {bad} violates the H-representation")));
    }
    check_full_dimensional(h.dim, &v.vertices)?;
    let facets = facets_of(h, &v.vertices);
    let p = Polytope::assemble(facets, v.clone());
    let vol = p.volume();
    if vol.is_zero() {
        return Err(Error::Degenerate("zero volume".into()));
    }
    Ok(vol)
}

/// Pulling triangulation: cone the lowest-index vertex of each face over the
/// recursively triangulated subfaces that avoid it. Returns simplices as
/// vertex-index lists of length `dim + 1`.
pub fn pulling_triangulation(vertices: &[RatVec], incidence: &[Vec<usize>], dim: usize) -> Vec<Vec<usize>> {
    let apex = 0;
    let top: Vec<&Vec<usize>> = incidence.iter().filter(|f| !f.contains(&apex)).collect();
    par::flat_map(&top, |facet| {
        let mut out = Vec::new();
        let mut stack = vec![apex];
        triangulate_face(vertices, incidence, facet, dim - 1, &mut stack, &mut out);
        out
    })
}

fn triangulate_face(
    vertices: &[RatVec],
    incidence: &[Vec<usize>],
    face: &[usize],
    k: usize,
    stack: &mut Vec<usize>,
    out: &mut Vec<Vec<usize>>,
) {
    let apex = face[0];
    if k == 0 {
        let mut s = stack.clone();
        s.push(apex);
        out.push(s);
        return;
    }
    let mut seen: BTreeSet<Vec<usize>> = BTreeSet::new();
    for facet in incidence {
        let sub: Vec<usize> = face.iter().copied().filter(|x| facet.binary_search(x).is_ok()).collect();
        if sub.len() < k || sub.contains(&apex) || seen.contains(&sub) {
            continue;
        }
        let pts: Vec<&RatVec> = sub.iter().map(|&i| &vertices[i]).collect();
        if affine_rank(&pts) != Some(k - 1) {
            continue;
        }
        stack.push(apex);
        triangulate_face(vertices, incidence, &sub, k - 1, stack, out);
        stack.pop();
        seen.insert(sub);
    }
}

fn factorial(d: usize) -> Rat {
    (1..=d as i64).fold(int(1), |acc, k| acc * int(k))
}

fn simplex_volume_sum(vertices: &[RatVec], simplices: &[Vec<usize>], dim: usize) -> Rat {
    let parts = par::map(simplices, |s| {
        let base = &vertices[s[0]];
        let rows: Vec<Vec<Rat>> = s[1..].iter().map(|&i| (&vertices[i] - base).into_inner()).collect();
        det(&rows).abs()
    });
    parts.into_iter().fold(Rat::zero(), |a, b| a + b) / factorial(dim)
}

/// Incremental half-space intersection starting from a cube. Each cut keeps
/// the vertices on its inner side and adds the points where it crosses edges
/// of the current polytope; constraints that stop supporting a facet are
/// dropped.
#[derive(Clone, Debug)]
pub struct Clipper {
    dim: usize,
    constraints: Vec<HalfSpace>,
    from_box: Vec<bool>,
    vertices: Vec<RatVec>,
}

impl Clipper {
    pub fn boxed(dim: usize, half_width: Rat) -> Result<Self> {
        if dim == 0 || !half_width.is_positive() {
            return Err(Error::Precondition("clipper needs dim >= 1 and a positive box".into()));
        }
        let h = HPoly::cube(dim, half_width.clone());
        let vertices = (0..dim)
            .map(|_| [half_width.clone(), -half_width.clone()])
            .multi_cartesian_product()
            .map(RatVec::new)
            .sorted()
            .collect();
        Ok(Clipper { dim, from_box: vec![true; h.constraints.len()], constraints: h.constraints, vertices })
    }

    pub fn vertices(&self) -> &[RatVec] {
        &self.vertices
    }

    /// Whether any face of the starting cube is still a facet.
    pub fn touches_box(&self) -> bool {
        self.from_box.iter().any(|&b| b)
    }

    fn active_sets(&self) -> Vec<Vec<usize>> {
        par::map(&self.vertices, |v| {
            (0..self.constraints.len()).filter(|&c| self.constraints[c].is_active(v)).collect()
        })
    }

    /// Intersects with `hs`; returns whether the polytope changed.
    pub fn cut(&mut self, hs: HalfSpace) -> Result<bool> {
        if hs.normal.dim() != self.dim || hs.normal.is_zero() {
            return Err(Error::Precondition("bad cutting half-space".into()));
        }
        let slacks: Vec<Rat> = self.vertices.iter().map(|v| hs.slack(v)).collect();
        if slacks.iter().all(|s| !s.is_negative()) {
            return Ok(false);
        }
        let active = self.active_sets();
        let inside: Vec<usize> = (0..self.vertices.len()).filter(|&k| !slacks[k].is_negative()).collect();
        let outside: Vec<usize> = (0..self.vertices.len()).filter(|&k| slacks[k].is_negative()).collect();
        let pairs: Vec<(usize, usize)> = outside.iter().flat_map(|&o| inside.iter().map(move |&i| (o, i))).collect();
        let d = self.dim;
        let crossings: Vec<Option<RatVec>> = par::map(&pairs, |&(o, i)| {
            if !slacks[i].is_positive() {
                return None;
            }
            let common: Vec<usize> = active[o].iter().copied().filter(|c| active[i].binary_search(c).is_ok()).collect();
            if common.len() < d - 1 {
                return None;
            }
            let rows: Vec<Vec<Rat>> = common.iter().map(|&c| self.constraints[c].normal.coords().to_vec()).collect();
            if rank(&rows) != d - 1 {
                return None;
            }
            let t = &slacks[i] / (&slacks[i] - &slacks[o]);
            let (vi, vo) = (&self.vertices[i], &self.vertices[o]);
            Some(vi + &(vo - vi).scale(&t))
        });
        let mut next: BTreeSet<RatVec> = inside.iter().map(|&k| self.vertices[k].clone()).collect();
        next.extend(crossings.into_iter().flatten());
        let vertices: Vec<RatVec> = next.into_iter().collect();
        check_full_dimensional(d, &vertices)?;
        self.constraints.push(hs);
        self.from_box.push(false);
        let keep = par::map(&self.constraints, |c| active_rank(c, &vertices) == Some(d - 1));
        let mut k = 0;
        self.constraints.retain(|_| {
            k += 1;
            keep[k - 1]
        });
        let mut k = 0;
        self.from_box.retain(|_| {
            k += 1;
            keep[k - 1]
        });
        self.vertices = vertices;
        Ok(true)
    }

    pub fn into_polytope(self) -> Polytope {
        let h = HPoly { dim: self.dim, constraints: self.constraints };
        Polytope::assemble(h, VPoly { dim: self.dim, vertices: self.vertices })
    }
}

/// Coordinate chart on the sum-zero hyperplane of `R^ambient`: delete
/// coordinate `drop`; the inverse restores it as minus the sum of the rest.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Chart {
    pub ambient: usize,
    pub drop: usize,
}

impl Chart {
    pub fn new(ambient: usize, drop: usize) -> Result<Self> {
        if ambient < 2 {
            return Err(Error::Dimension { got: ambient, what: "chart needs ambient dim >= 2" });
        }
        if drop >= ambient {
            return Err(Error::IndexOutOfRange { index: drop, len: ambient });
        }
        Ok(Chart { ambient, drop })
    }

    pub fn last(ambient: usize) -> Result<Self> {
        Chart::new(ambient, ambient.saturating_sub(1))
    }

    pub fn dim(&self) -> usize {
        self.ambient - 1
    }

    pub fn to_chart(&self, x: &RatVec) -> RatVec {
        x.removed(self.drop)
    }

    pub fn lift(&self, y: &RatVec) -> RatVec {
        y.inserted(self.drop, -y.sum())
    }

    /// `p · x <= rhs` for sum-zero `x`, rewritten in chart coordinates.
    pub fn halfspace(&self, p: &RatVec, rhs: Rat) -> HalfSpace {
        let pk = &p[self.drop];
        let normal = (0..self.ambient).filter(|&l| l != self.drop).map(|l| &p[l] - pk).collect();
        HalfSpace::new(normal, rhs)
    }

    /// Orthonormal volume / chart volume, squared.
    pub fn gram_det(&self) -> Rat {
        int(self.ambient as i64)
    }
}

/// An extended cyclic permutation `k ↦ a k + b (mod d)` on coordinates
/// `1..=d`: `(y_1, …, y_d) ↦ (y_{a+b}, y_{2a+b}, …, y_b)`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct ECPerm {
    pub a: usize,
    pub b: usize,
    pub d: usize,
}

impl ECPerm {
    pub fn new(a: usize, b: usize, d: usize) -> Result<Self> {
        if d == 0 || a.gcd(&d) != 1 {
            return Err(Error::Precondition(format!("gcd({a}, {d}) must be 1")));
        }
        Ok(ECPerm { a: a % d, b: b % d, d })
    }

    pub fn apply(&self, y: &RatVec) -> RatVec {
        debug_assert_eq!(y.dim(), self.d);
        // 1-based source index (a k + b) mod d, with 0 standing for d
        (1..=self.d)
            .map(|k| y[(self.a * k + self.b + self.d - 1) % self.d].clone())
            .collect()
    }

    /// All extended cyclic permutations of length `d`.
    pub fn all(d: usize) -> Vec<ECPerm> {
        (1..=d.max(1))
            .filter(|a| a.gcd(&d) == 1)
            .flat_map(|a| (0..d).map(move |b| ECPerm { a: a % d, b, d }))
            .collect()
    }
}

/// The orbit of `y` under every extended cyclic permutation, sorted.
pub fn ext_cyclic_orbit(y: &RatVec) -> Vec<RatVec> {
    let set: BTreeSet<RatVec> = ECPerm::all(y.dim()).iter().map(|p| p.apply(y)).collect();
    set.into_iter().collect()
}
