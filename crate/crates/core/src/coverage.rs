//! Cross-sections of the generalized prisms and the fraction of space they
//! cover.
//!
//! Looking down the lines of the last family, every line of another family
//! contributes the point where it comes closest. The prism cross-section is
//! the Voronoi cell `V` of the origin against those points; a single family
//! filling space would instead have the Voronoi cell of `A*_{n-1}`. With
//! `n + 1` families the covered fraction is `(n + 1) vol(V) / vol(A*_{n-1} cell)`.

use num_traits::{Signed, Zero};

use crate::error::{Error, Result};
use crate::field::OffsetFamily;
use crate::lattice::{a_star_points_within, ceil_sqrt, max_sq_dist};
use crate::lines::{parallel_is_closer, w_vector};
use crate::par;
use crate::polytope::{Chart, Clipper, Polytope};
use crate::rational::{int, rat, Rat, RatVec};

/// Nearest points of the other families' lines to the central line of the
/// last family, projected into `H_{n-1}`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ProjectedPointSet {
    pub n: usize,
    /// Sorted by squared norm, then lexicographically.
    pub points: Vec<RatVec>,
    pub radius_sq: Rat,
}

/// All points of the projected set with squared norm at most `radius_sq`.
///
/// For family `i < n` the points are `P + w` with `P ∈ A*_{n-2}` and `w` the
/// reduced offset difference of families `i` and `n`, with a zero inserted
/// at coordinate `i`.
pub fn projected_point_set(fam: &OffsetFamily, radius_sq: &Rat) -> Result<ProjectedPointSet> {
    if !radius_sq.is_positive() {
        return Err(Error::OutOfRange("radius^2 must be positive".into()));
    }
    let n = fam.n;
    let per_family: Vec<Result<Vec<RatVec>>> = par::map_range(n, |i| {
        let w = w_vector(fam, i, n)?;
        let lattice = a_star_points_within(&w, radius_sq)?;
        Ok(lattice.iter().map(|p| (p + &w).inserted(i, Rat::zero())).collect())
    });
    let mut points: Vec<(Rat, RatVec)> = Vec::new();
    for pts in per_family {
        points.extend(pts?.into_iter().map(|p| (p.norm_sq(), p)));
    }
    points.sort();
    points.dedup();
    Ok(ProjectedPointSet { n, points: points.into_iter().map(|(_, p)| p).collect(), radius_sq: radius_sq.clone() })
}

/// Knobs for the Voronoi-cell construction.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CellOptions {
    /// Coordinate deleted by the chart.
    pub chart_drop: Option<usize>,
    /// Largest enumeration radius^2 tried before giving up.
    pub radius_cap: Rat,
}

impl Default for CellOptions {
    fn default() -> Self {
        CellOptions { chart_drop: None, radius_cap: int(64) }
    }
}

/// A Voronoi cell in chart coordinates together with how it was obtained.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Cell {
    pub chart: Chart,
    pub polytope: Polytope,
    /// Enumeration radius^2 at convergence.
    pub radius_sq: Rat,
    /// Number of candidate points within that radius.
    pub candidates: usize,
}

impl Cell {
    pub fn volume(&self) -> Rat {
        self.polytope.volume()
    }

    /// Vertices mapped back to sum-zero ambient coordinates.
    pub fn ambient_vertices(&self) -> Vec<RatVec> {
        self.polytope.v.vertices.iter().map(|y| self.chart.lift(y)).collect()
    }

    /// Largest squared distance of a vertex from the origin, in the ambient metric.
    pub fn circumradius_sq(&self) -> Rat {
        self.ambient_vertices().iter().map(RatVec::norm_sq).max().unwrap_or_else(Rat::zero)
    }
}

/// Voronoi cell of the origin against a point set in the sum-zero
/// hyperplane of `R^ambient`, where `points(r2)` lists every point of the set
/// with squared norm `<= r2`. The radius doubles from `start` until it is at
/// least four times the squared circumradius of the cell, so no point outside
/// it can cut the cell.
fn voronoi_cell<F>(ambient: usize, start: Rat, opts: &CellOptions, points: F) -> Result<Cell>
where
    F: Fn(&Rat) -> Result<Vec<RatVec>>,
{
    let chart = match opts.chart_drop {
        Some(k) => Chart::new(ambient, k)?,
        None => Chart::last(ambient)?,
    };
    let mut radius_sq = start;
    loop {
        if radius_sq > opts.radius_cap {
            return Err(Error::NoConvergence { cap: opts.radius_cap.to_string() });
        }
        let pts = points(&radius_sq)?;
        if pts.iter().any(RatVec::is_zero) {
            return Err(Error::Degenerate("the origin is in its own point set".into()));
        }
        // Any cell within this radius fits comfortably inside the box.
        let half_width = Rat::from_integer(ceil_sqrt(&radius_sq)) + int(1);
        let mut clipper = Clipper::boxed(chart.dim(), half_width)?;
        for p in &pts {
            clipper.cut(chart.halfspace(p, p.norm_sq() / int(2)))?;
        }
        if !clipper.touches_box() {
            let cell = Cell { chart, polytope: clipper.into_polytope(), radius_sq: radius_sq.clone(), candidates: pts.len() };
            if radius_sq >= cell.circumradius_sq() * int(4) {
                return Ok(cell);
            }
        }
        radius_sq *= int(2);
    }
}

/// The cell `V` for the line family `fam`.
pub fn cell_v(fam: &OffsetFamily) -> Result<Cell> {
    cell_v_with(fam, &CellOptions::default())
}

pub fn cell_v_with(fam: &OffsetFamily, opts: &CellOptions) -> Result<Cell> {
    if fam.n < 3 {
        return Err(Error::Dimension { got: fam.n, what: "cell V needs n >= 3" });
    }
    let start = max_sq_dist(fam.n - 2) * int(4);
    voronoi_cell(fam.n, start, opts, |r2| Ok(projected_point_set(fam, r2)?.points))
}

/// The Voronoi cell of the origin in `A*_d`.
pub fn std_cell(d: usize) -> Result<Cell> {
    std_cell_with(d, &CellOptions::default())
}

pub fn std_cell_with(d: usize, opts: &CellOptions) -> Result<Cell> {
    if d == 0 {
        return Err(Error::Dimension { got: 0, what: "standard cell needs d >= 1" });
    }
    let start = rat(d as i64, d as i64 + 1);
    voronoi_cell(d + 1, start, opts, |r2| {
        let mut pts = a_star_points_within(&RatVec::zeros(d + 1), r2)?;
        pts.retain(|p| !p.is_zero());
        Ok(pts)
    })
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CoverageReport {
    pub n: usize,
    /// Chart volume of `V`.
    pub vol_v: Rat,
    /// Chart volume of the Voronoi cell of `A*_{n-1}`.
    pub vol_std: Rat,
    pub fraction: Rat,
    pub cell_v: Cell,
}

impl CoverageReport {
    /// Squared orthonormal volume of `V` (chart volume squared times `n`).
    pub fn orthonormal_vol_v_sq(&self) -> Rat {
        &self.vol_v * &self.vol_v * self.cell_v.chart.gram_det()
    }
}

/// Covered fraction for the optimal construction at `n` (prime power, `3 <= n <= 12`).
pub fn coverage_fraction(n: usize) -> Result<CoverageReport> {
    coverage_fraction_with(n, &CellOptions::default())
}

pub fn coverage_fraction_with(n: usize, opts: &CellOptions) -> Result<CoverageReport> {
    if n < 3 {
        return Err(Error::OutOfRange(format!("coverage needs n >= 3, got {n}")));
    }
    let fam = OffsetFamily::construct(n)?;
    coverage_for_family(&fam, opts)
}

/// Covered fraction for an arbitrary family. Refused once parallel lines of
/// one family come closer than lines of different families (`n >= 13`),
/// where `V` no longer describes the prism cross-section.
pub fn coverage_for_family(fam: &OffsetFamily, opts: &CellOptions) -> Result<CoverageReport> {
    let n = fam.n;
    if parallel_is_closer(n)? {
        return Err(Error::OutOfRange(format!(
            "n = {n}: parallel lines are closer than the inter-family bound; coverage is not defined by this construction"
        )));
    }
    let cell = cell_v_with(fam, opts)?;
    let std = std_cell_with(n - 1, opts)?;
    let vol_v = cell.volume();
    let vol_std = std.volume();
    let fraction = int(n as i64 + 1) * &vol_v / &vol_std;
    if !fraction.is_positive() || fraction > int(1) {
        return Err(Error::Invariant(format!("covered fraction {fraction} outside (0, 1]")));
    }
    Ok(CoverageReport { n, vol_v, vol_std, fraction, cell_v: cell })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn n4_projected_points() {
        let fam = OffsetFamily::construct(4).unwrap();
        let set = projected_point_set(&fam, &int(2)).unwrap();
        assert!(set.points.contains(&RatVec::from_fracs(&[(0, 1), (-1, 3), (0, 1), (1, 3)])));
        assert!(set.points.iter().all(|p| p.is_sum_zero() && p.norm_sq() <= int(2)));
        assert!(set.points.iter().all(|p| p.iter().any(Zero::is_zero)));
        assert_eq!(set.points[0].norm_sq(), rat(2, 9));
    }

    #[test]
    fn tiny_radius_is_empty() {
        let fam = OffsetFamily::construct(4).unwrap();
        assert!(projected_point_set(&fam, &rat(1, 9)).unwrap().points.is_empty());
        assert!(projected_point_set(&fam, &int(0)).is_err());
    }

    #[test]
    fn hexastix_points_at_one_eighth() {
        let fam = OffsetFamily::hexastix();
        let set = projected_point_set(&fam, &rat(1, 8)).unwrap();
        assert!(!set.points.is_empty());
        assert!(set.points.iter().all(|p| p.norm_sq() == rat(1, 8)));
    }

    #[test]
    fn hexastix_cell_is_hexagon() {
        let cell = cell_v(&OffsetFamily::hexastix()).unwrap();
        assert_eq!(cell.polytope.h.constraints.len(), 6);
        assert_eq!(cell.polytope.v.vertices.len(), 6);
    }

    #[test]
    fn std_cell_small() {
        let c1 = std_cell(1).unwrap();
        assert_eq!(c1.volume(), rat(1, 2));
        let c2 = std_cell(2).unwrap();
        assert_eq!(c2.polytope.h.constraints.len(), 6);
        assert_eq!(c2.volume(), rat(1, 3));
    }

    #[test]
    fn coverage_n3() {
        assert_eq!(coverage_fraction(3).unwrap().fraction, rat(3, 4));
    }

    #[test]
    fn refuses_large_and_composite() {
        assert!(matches!(coverage_fraction(13), Err(Error::OutOfRange(_))));
        assert_eq!(coverage_fraction(6).unwrap_err(), Error::NotPrimePower(6));
        assert!(coverage_fraction(2).is_err());
    }

    #[test]
    fn radius_cap_triggers() {
        let opts = CellOptions { chart_drop: None, radius_cap: rat(1, 100) };
        assert!(matches!(cell_v_with(&OffsetFamily::hexastix(), &opts), Err(Error::NoConvergence { .. })));
    }
}
