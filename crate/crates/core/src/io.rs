//! JSON documents and OBJ meshes. Every number in a JSON document is an
//! exact rational string (`"p/q"`); decimal renderings live only in the
//! manifest's `approximations` block and are never read back.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};
use serde_json::Value;

use crate::coverage::Cell;
use crate::error::{Error, Result};
use crate::polytope::{Chart, HPoly, HalfSpace, Polytope, VPoly};
use crate::rational::{JsonRat, RatVec};

pub const APPROX_DIGITS: usize = 20;

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct FacetDoc {
    pub normal: RatVec,
    pub rhs: JsonRat,
}

/// A polytope in chart coordinates of the sum-zero hyperplane of
/// `R^ambient_dim`, with the chart needed to lift it back.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PolytopeDoc {
    pub dim: usize,
    pub ambient_dim: usize,
    pub chart_drop: usize,
    pub facets: Vec<FacetDoc>,
    pub vertices: Vec<RatVec>,
    pub ambient_vertices: Vec<RatVec>,
    pub volume_param: JsonRat,
}

impl PolytopeDoc {
    pub fn from_cell(cell: &Cell) -> Self {
        let p = &cell.polytope;
        PolytopeDoc {
            dim: p.dim(),
            ambient_dim: cell.chart.ambient,
            chart_drop: cell.chart.drop,
            facets: p
                .h
                .constraints
                .iter()
                .map(|c| FacetDoc { normal: c.normal.clone(), rhs: JsonRat(c.rhs.clone()) })
                .collect(),
            vertices: p.v.vertices.clone(),
            ambient_vertices: cell.ambient_vertices(),
            volume_param: JsonRat(cell.volume()),
        }
    }

    pub fn chart(&self) -> Result<Chart> {
        let chart = Chart::new(self.ambient_dim, self.chart_drop)?;
        if chart.dim() != self.dim {
            return Err(Error::Parse("dim must equal ambient_dim - 1".into()));
        }
        Ok(chart)
    }

    /// Rebuilds the polytope from the stored H- and V-representations.
    pub fn to_polytope(&self) -> Result<Polytope> {
        self.chart()?;
        let h = HPoly::new(
            self.dim,
            self.facets.iter().map(|f| HalfSpace::new(f.normal.clone(), f.rhs.0.clone())).collect(),
        )?;
        if let Some(v) = self.vertices.iter().find(|v| v.dim() != self.dim) {
            return Err(Error::Parse(format!("vertex {v} has the wrong dimension")));
        }
        let v = VPoly { dim: self.dim, vertices: self.vertices.clone() };
        let p = Polytope::from_hpoly(&h)?;
        if p.v != v {
            return Err(Error::Parse("vertex list does not match the facets".into()));
        }
        Ok(p)
    }
}

/// The JSON document emitted by every CLI command.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RunManifest {
    pub command: String,
    pub parameters: Value,
    pub version: String,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub seed: Option<u64>,
    pub results: Value,
    pub approximations: Approximations,
    #[serde(skip_serializing_if = "Vec::is_empty", default)]
    pub warnings: Vec<String>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Approximations {
    pub non_authoritative: bool,
    pub significant_digits: usize,
    pub values: BTreeMap<String, String>,
}

impl Approximations {
    pub fn new(values: BTreeMap<String, String>) -> Self {
        Approximations { non_authoritative: true, significant_digits: APPROX_DIGITS, values }
    }
}

impl RunManifest {
    pub fn new(command: &str, parameters: Value, results: Value) -> Self {
        RunManifest {
            command: command.to_string(),
            parameters,
            version: env!("CARGO_PKG_VERSION").to_string(),
            seed: None,
            results,
            approximations: Approximations::new(BTreeMap::new()),
            warnings: Vec::new(),
        }
    }
}

/// Orthonormal basis of the sum-zero hyperplane of `R^m` (Gram-Schmidt on
/// `e_k - e_{k+1}`), for display output only.
fn hyperplane_basis(m: usize) -> Vec<Vec<f64>> {
    let mut basis: Vec<Vec<f64>> = Vec::new();
    for k in 0..m - 1 {
        let mut v = vec![0.0; m];
        v[k] = 1.0;
        v[k + 1] = -1.0;
        for b in &basis {
            let d: f64 = v.iter().zip(b).map(|(x, y)| x * y).sum();
            for (x, y) in v.iter_mut().zip(b) {
                *x -= d * y;
            }
        }
        let norm = v.iter().map(|x| x * x).sum::<f64>().sqrt();
        basis.push(v.iter().map(|x| x / norm).collect());
    }
    basis
}

fn sub3(a: [f64; 3], b: [f64; 3]) -> [f64; 3] {
    [a[0] - b[0], a[1] - b[1], a[2] - b[2]]
}

fn cross(a: [f64; 3], b: [f64; 3]) -> [f64; 3] {
    [a[1] * b[2] - a[2] * b[1], a[2] * b[0] - a[0] * b[2], a[0] * b[1] - a[1] * b[0]]
}

fn dot3(a: [f64; 3], b: [f64; 3]) -> f64 {
    a[0] * b[0] + a[1] * b[1] + a[2] * b[2]
}

/// Wavefront OBJ mesh of a 3-dimensional cell, isometrically embedded in
/// `R^3`, with outward-facing polygons.
pub fn obj_mesh(cell: &Cell) -> Result<String> {
    if cell.polytope.dim() != 3 {
        return Err(Error::Dimension { got: cell.polytope.dim(), what: "OBJ export needs a 3-dimensional cell" });
    }
    let basis = hyperplane_basis(cell.chart.ambient);
    let pts: Vec<[f64; 3]> = cell
        .ambient_vertices()
        .iter()
        .map(|x| {
            let x = x.to_f64();
            let c = |b: &Vec<f64>| x.iter().zip(b).map(|(p, q)| p * q).sum::<f64>();
            [c(&basis[0]), c(&basis[1]), c(&basis[2])]
        })
        .collect();
    let centre = pts.iter().fold([0.0; 3], |a, p| [a[0] + p[0], a[1] + p[1], a[2] + p[2]]);
    let centre = centre.map(|c| c / pts.len() as f64);
    let mut out = String::from("# generated by hexastix\n");
    for p in &pts {
        out.push_str(&format!("v {:.12} {:.12} {:.12}\n", p[0], p[1], p[2]));
    }
    for face in &cell.polytope.incidence {
        let fc = face.iter().fold([0.0; 3], |a, &i| [a[0] + pts[i][0], a[1] + pts[i][1], a[2] + pts[i][2]]);
        let fc = fc.map(|c| c / face.len() as f64);
        let e1 = sub3(pts[face[0]], fc);
        let mut normal = cross(e1, sub3(pts[face[1]], fc));
        if dot3(normal, normal) < 1e-18 {
            normal = cross(e1, sub3(pts[face[face.len() - 1]], fc));
        }
        if dot3(normal, sub3(fc, centre)) < 0.0 {
            normal = normal.map(|c| -c);
        }
        let e2 = cross(normal, e1);
        let mut order: Vec<(f64, usize)> = face
            .iter()
            .map(|&i| {
                let d = sub3(pts[i], fc);
                (dot3(d, e2).atan2(dot3(d, e1)), i)
            })
            .collect();
        order.sort_by(|a, b| a.0.total_cmp(&b.0));
        let idx: Vec<String> = order.iter().map(|(_, i)| (i + 1).to_string()).collect();
        out.push_str(&format!("f {}\n", idx.join(" ")));
    }
    Ok(out)
}
