//! Indexed triangle mesh with exact-identity vertex welding.

use geomcore::vec3::{self, V3};
use std::collections::HashMap;

#[derive(Debug, Clone, PartialEq)]
pub struct TriangleMesh {
    pub vertices: Vec<V3>,
    pub triangles: Vec<[u32; 3]>,
}

/// Summary of the directed-edge audit of a mesh.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct EdgeAudit {
    /// Directed edges without a matching opposite edge.
    pub boundary_edges: usize,
    /// Directed edges appearing more than once.
    pub nonmanifold_edges: usize,
    /// Distinct undirected edges.
    pub undirected_edges: usize,
}

impl TriangleMesh {
    pub fn empty() -> TriangleMesh {
        TriangleMesh { vertices: Vec::new(), triangles: Vec::new() }
    }

    pub fn audit_edges(&self) -> EdgeAudit {
        let mut directed: HashMap<(u32, u32), u32> = HashMap::new();
        for t in &self.triangles {
            for k in 0..3 {
                let e = (t[k], t[(k + 1) % 3]);
                *directed.entry(e).or_insert(0) += 1;
            }
        }
        let mut boundary = 0;
        let mut nonmanifold = 0;
        let mut undirected = 0;
        for (&(a, b), &n) in &directed {
            if n > 1 {
                nonmanifold += 1;
            }
            if directed.get(&(b, a)).copied().unwrap_or(0) == 0 {
                boundary += 1;
            }
            if a < b {
                undirected += 1;
            } else if directed.get(&(b, a)).is_none() {
                undirected += 1;
            }
        }
        EdgeAudit { boundary_edges: boundary, nonmanifold_edges: nonmanifold, undirected_edges: undirected }
    }

    /// True when every directed edge is matched exactly once by its reverse.
    pub fn is_closed(&self) -> bool {
        let a = self.audit_edges();
        a.boundary_edges == 0 && a.nonmanifold_edges == 0
    }

    /// V - E + F over the whole mesh (2 for a sphere-like solid, 0 for a torus).
    pub fn euler_characteristic(&self) -> i64 {
        let a = self.audit_edges();
        self.vertices.len() as i64 - a.undirected_edges as i64 + self.triangles.len() as i64
    }

    /// Signed enclosed volume (positive for outward-oriented closed meshes).
    pub fn signed_volume(&self) -> f64 {
        let mut v = 0.0;
        for t in &self.triangles {
            let a = self.vertices[t[0] as usize];
            let b = self.vertices[t[1] as usize];
            let c = self.vertices[t[2] as usize];
            v += vec3::dot(a, vec3::cross(b, c));
        }
        v / 6.0
    }

    pub fn aabb(&self) -> (V3, V3) {
        let mut lo = [f64::INFINITY; 3];
        let mut hi = [f64::NEG_INFINITY; 3];
        for p in &self.vertices {
            for k in 0..3 {
                lo[k] = lo[k].min(p[k]);
                hi[k] = hi[k].max(p[k]);
            }
        }
        (lo, hi)
    }
}

/// Accumulates triangles, welding vertices by their quantized coordinates.
///
/// Coordinates are rounded to 1e-9 mm and -0.0 is normalized, so two faces
/// computing the same geometric point through slightly different expressions
/// (differences far below a nanometer) still share one vertex.
pub struct MeshBuilder {
    map: HashMap<[i64; 3], u32>,
    mesh: TriangleMesh,
}

pub fn quantize(x: f64) -> i64 {
    let q = (x * 1e9).round();
    if q == 0.0 {
        0
    } else {
        q as i64
    }
}

impl Default for MeshBuilder {
    fn default() -> Self {
        Self::new()
    }
}

impl MeshBuilder {
    pub fn new() -> MeshBuilder {
        MeshBuilder { map: HashMap::new(), mesh: TriangleMesh::empty() }
    }

    pub fn add_vertex(&mut self, p: V3) -> u32 {
        let key = [quantize(p[0]), quantize(p[1]), quantize(p[2])];
        if let Some(&id) = self.map.get(&key) {
            return id;
        }
        let id = self.mesh.vertices.len() as u32;
        self.mesh.vertices.push([key[0] as f64 / 1e9, key[1] as f64 / 1e9, key[2] as f64 / 1e9]);
        self.map.insert(key, id);
        id
    }

    /// Adds a triangle by position; silently drops slivers that collapse
    /// onto fewer than three distinct welded vertices.
    pub fn add_triangle(&mut self, a: V3, b: V3, c: V3) {
        let ia = self.add_vertex(a);
        let ib = self.add_vertex(b);
        let ic = self.add_vertex(c);
        if ia != ib && ib != ic && ic != ia {
            self.mesh.triangles.push([ia, ib, ic]);
        }
    }

    pub fn finish(self) -> TriangleMesh {
        self.mesh
    }
}
