//! Lattice polytopes in Z^3: brute-force facets, lattice points, reflexivity
//! and the Fano condition.

use num::integer::Integer;
use serde::Serialize;

pub type V3 = [i64; 3];

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum PolytopeError {
    #[error("vertex set does not span 3-space")]
    Degenerate,
    #[error("repeated vertex {0:?}")]
    RepeatedVertex(V3),
}

#[derive(Debug, Clone)]
pub struct LatticePolytope3 {
    vertices: Vec<V3>,
}

/// Half-space `a x + b y + c z <= d`, primitive.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Serialize)]
pub struct Facet {
    pub normal: V3,
    pub d: i64,
}

impl Facet {
    pub fn value(&self, p: &V3) -> i64 {
        dot(&self.normal, p)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct TerminalReport {
    pub lattice_vertices: bool,
    pub unique_interior_origin: bool,
    pub boundary_only_vertices: bool,
    pub interior_points: Vec<V3>,
    pub boundary_non_vertices: Vec<V3>,
}

impl TerminalReport {
    pub fn all(&self) -> bool {
        self.lattice_vertices && self.unique_interior_origin && self.boundary_only_vertices
    }
}

fn sub(a: &V3, b: &V3) -> V3 {
    [a[0] - b[0], a[1] - b[1], a[2] - b[2]]
}

fn cross(a: &V3, b: &V3) -> V3 {
    [a[1] * b[2] - a[2] * b[1], a[2] * b[0] - a[0] * b[2], a[0] * b[1] - a[1] * b[0]]
}

fn dot(a: &V3, b: &V3) -> i64 {
    a[0] * b[0] + a[1] * b[1] + a[2] * b[2]
}

pub fn det3(a: &V3, b: &V3, c: &V3) -> i64 {
    dot(a, &cross(b, c))
}

impl LatticePolytope3 {
    pub fn new(vertices: Vec<V3>) -> Result<Self, PolytopeError> {
        for (i, v) in vertices.iter().enumerate() {
            if vertices[..i].contains(v) {
                return Err(PolytopeError::RepeatedVertex(*v));
            }
        }
        let p = LatticePolytope3 { vertices };
        if !p.spans_space() {
            return Err(PolytopeError::Degenerate);
        }
        Ok(p)
    }

    /// Columns of a 3 x n matrix.
    pub fn from_columns(rows: &[Vec<i64>; 3]) -> Result<Self, PolytopeError> {
        let n = rows[0].len();
        Self::new((0..n).map(|j| [rows[0][j], rows[1][j], rows[2][j]]).collect())
    }

    pub fn vertices(&self) -> &[V3] {
        &self.vertices
    }

    fn spans_space(&self) -> bool {
        let v = &self.vertices;
        for i in 0..v.len() {
            for j in i + 1..v.len() {
                for k in j + 1..v.len() {
                    for l in k + 1..v.len() {
                        if det3(&sub(&v[j], &v[i]), &sub(&v[k], &v[i]), &sub(&v[l], &v[i])) != 0 {
                            return true;
                        }
                    }
                }
            }
        }
        false
    }

    /// Supporting planes through vertex triples with all vertices on one side.
    pub fn facets(&self) -> Vec<Facet> {
        let v = &self.vertices;
        let mut out: Vec<Facet> = Vec::new();
        for i in 0..v.len() {
            for j in i + 1..v.len() {
                for k in j + 1..v.len() {
                    let n = cross(&sub(&v[j], &v[i]), &sub(&v[k], &v[i]));
                    if n == [0, 0, 0] {
                        continue;
                    }
                    let d = dot(&n, &v[i]);
                    let vals: Vec<i64> = v.iter().map(|p| dot(&n, p) - d).collect();
                    let sign = if vals.iter().all(|x| *x <= 0) {
                        1
                    } else if vals.iter().all(|x| *x >= 0) {
                        -1
                    } else {
                        continue;
                    };
                    let g = n[0].gcd(&n[1]).gcd(&n[2]).gcd(&d);
                    let f = Facet {
                        normal: [sign * n[0] / g, sign * n[1] / g, sign * n[2] / g],
                        d: sign * d / g,
                    };
                    if !out.contains(&f) {
                        out.push(f);
                    }
                }
            }
        }
        out.sort();
        out
    }

    pub fn facet_vertices(&self, f: &Facet) -> Vec<V3> {
        self.vertices.iter().filter(|p| f.value(p) == f.d).copied().collect()
    }

    /// All lattice points of the bounding box inside the polytope.
    pub fn lattice_points(&self) -> Vec<V3> {
        let facets = self.facets();
        let lo: Vec<i64> = (0..3).map(|i| self.vertices.iter().map(|v| v[i]).min().unwrap()).collect();
        let hi: Vec<i64> = (0..3).map(|i| self.vertices.iter().map(|v| v[i]).max().unwrap()).collect();
        let mut pts = Vec::new();
        for x in lo[0]..=hi[0] {
            for y in lo[1]..=hi[1] {
                for z in lo[2]..=hi[2] {
                    let p = [x, y, z];
                    if facets.iter().all(|f| f.value(&p) <= f.d) {
                        pts.push(p);
                    }
                }
            }
        }
        pts
    }

    pub fn check_reflexive_terminal(&self) -> TerminalReport {
        let facets = self.facets();
        let mut interior = Vec::new();
        let mut boundary_extra = Vec::new();
        for p in self.lattice_points() {
            if facets.iter().all(|f| f.value(&p) < f.d) {
                interior.push(p);
            } else if !self.vertices.contains(&p) {
                boundary_extra.push(p);
            }
        }
        TerminalReport {
            lattice_vertices: true,
            unique_interior_origin: interior == vec![[0, 0, 0]],
            boundary_only_vertices: boundary_extra.is_empty(),
            interior_points: interior,
            boundary_non_vertices: boundary_extra,
        }
    }

    /// Every facet is a triangle whose vertices form a Z-basis.
    pub fn check_fano(&self) -> bool {
        self.facets().iter().all(|f| {
            let vs = self.facet_vertices(f);
            vs.len() == 3 && det3(&vs[0], &vs[1], &vs[2]).abs() == 1
        })
    }
}
