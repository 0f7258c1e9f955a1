use std::collections::{HashMap, VecDeque};

use serde::{Deserialize, Serialize};

use super::{tol, triangle_half_tangents, GeometryError, Result, Vec3};

/// Closed polyhedral surface in R³ with outward-ordered face cycles.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EmbeddedMesh {
    pub vertices: Vec<Vec3>,
    pub faces: Vec<Vec<usize>>,
    /// Declared genus: 0 for a sphere, 1 for a torus.
    #[serde(default, rename = "genus")]
    pub genus_hint: u32,
    /// Two coincident faces glued with opposite orientation (the triangular
    /// pancake). Every fold is then pinned to `θ = π` with sign `+1`, since
    /// the normal-based sign rule is indeterminate.
    #[serde(default, skip_serializing_if = "std::ops::Not::not")]
    pub coincident: bool,
}

/// Where [`super::orient_outward`] reads positions to decide orientation.
#[derive(Debug, Clone, Copy)]
pub enum ConvexReference<'a> {
    /// The mesh itself is star-shaped about the origin.
    StarShaped,
    /// Positions of a star-shaped configuration with identical combinatorics.
    Positions(&'a [Vec3]),
}

/// Incidence of one undirected edge `(lo, hi)`, `lo < hi`.
#[derive(Debug, Clone, PartialEq)]
pub struct EdgeIncidence {
    pub vertices: (usize, usize),
    /// Faces whose cycle steps `lo → hi`.
    pub forward: Vec<usize>,
    /// Faces whose cycle steps `hi → lo`.
    pub backward: Vec<usize>,
}

impl EdgeIncidence {
    pub fn face_count(&self) -> usize {
        self.forward.len() + self.backward.len()
    }
}

/// Edge table of a mesh, edges sorted by vertex pair.
#[derive(Debug, Clone)]
pub struct MeshTopology {
    pub edges: Vec<EdgeIncidence>,
    index: HashMap<(usize, usize), usize>,
}

impl MeshTopology {
    pub fn edge_index(&self, a: usize, b: usize) -> Option<usize> {
        self.index.get(&(a.min(b), a.max(b))).copied()
    }

    /// Every edge has exactly two faces.
    pub fn check_manifold(&self) -> Result<()> {
        for e in &self.edges {
            if e.face_count() != 2 {
                return Err(GeometryError::NonManifoldEdge(e.vertices.0, e.vertices.1));
            }
        }
        Ok(())
    }

    /// Manifold, and each edge is traversed once in each direction.
    pub fn check_oriented(&self) -> Result<()> {
        self.check_manifold()?;
        for e in &self.edges {
            if e.forward.len() != 1 {
                return Err(GeometryError::InconsistentOrientation(
                    e.vertices.0,
                    e.vertices.1,
                ));
            }
        }
        Ok(())
    }
}

pub(crate) fn cycle_edges(cycle: &[usize]) -> impl Iterator<Item = (usize, usize)> + '_ {
    let n = cycle.len();
    (0..n).map(move |i| (cycle[i], cycle[(i + 1) % n]))
}

pub(crate) fn cycle_has_edge(cycle: &[usize], edge: (usize, usize)) -> bool {
    cycle_edges(cycle).any(|(a, b)| (a, b) == edge || (b, a) == edge)
}

pub(crate) fn reverse_cycle(cycle: &mut [usize]) {
    if cycle.len() > 1 {
        cycle[1..].reverse();
    }
}

/// Newell vector area of a cycle; equals `½ AB ∧ AC` for triangles.
pub(crate) fn newell(positions: &[Vec3], cycle: &[usize]) -> Vec3 {
    if cycle.len() == 3 {
        let (a, b, c) = (positions[cycle[0]], positions[cycle[1]], positions[cycle[2]]);
        return (b - a).cross(c - a) * 0.5;
    }
    let mut n = Vec3::ZERO;
    for (i, j) in cycle_edges(cycle) {
        n += positions[i].cross(positions[j]);
    }
    n * 0.5
}

pub(crate) fn centroid(positions: &[Vec3], cycle: &[usize]) -> Vec3 {
    let mut c = Vec3::ZERO;
    for &v in cycle {
        c += positions[v];
    }
    c / cycle.len() as f64
}

pub(crate) struct Circle {
    pub center: Vec3,
    pub radius: f64,
    pub normal: Vec3,
}

impl EmbeddedMesh {
    /// Builds a mesh and checks every structural invariant.
    pub fn new(vertices: Vec<Vec3>, faces: Vec<Vec<usize>>, genus_hint: u32) -> Result<Self> {
        let mesh = Self::from_raw(vertices, faces, genus_hint);
        mesh.check()?;
        Ok(mesh)
    }

    /// Builds a mesh without validation, e.g. to feed a validity report.
    pub fn from_raw(vertices: Vec<Vec3>, faces: Vec<Vec<usize>>, genus_hint: u32) -> Self {
        Self {
            vertices,
            faces,
            genus_hint,
            coincident: false,
        }
    }

    pub fn vertex_count(&self) -> usize {
        self.vertices.len()
    }

    pub fn face_count(&self) -> usize {
        self.faces.len()
    }

    pub fn topology(&self) -> MeshTopology {
        let mut index = HashMap::new();
        let mut edges: Vec<EdgeIncidence> = Vec::new();
        for (f, cycle) in self.faces.iter().enumerate() {
            for (a, b) in cycle_edges(cycle) {
                let key = (a.min(b), a.max(b));
                let slot = *index.entry(key).or_insert_with(|| {
                    edges.push(EdgeIncidence {
                        vertices: key,
                        forward: Vec::new(),
                        backward: Vec::new(),
                    });
                    edges.len() - 1
                });
                if a < b {
                    edges[slot].forward.push(f);
                } else {
                    edges[slot].backward.push(f);
                }
            }
        }
        edges.sort_by_key(|e| e.vertices);
        let index = edges
            .iter()
            .enumerate()
            .map(|(i, e)| (e.vertices, i))
            .collect();
        MeshTopology { edges, index }
    }

    pub fn edge_count(&self) -> usize {
        self.topology().edges.len()
    }

    pub fn euler_characteristic(&self) -> i64 {
        self.vertices.len() as i64 - self.edge_count() as i64 + self.faces.len() as i64
    }

    /// Full structural validation: indices, manifoldness, orientation,
    /// Euler characteristic, zero-length edges and degenerate triangles.
    pub fn check(&self) -> Result<()> {
        for (i, v) in self.vertices.iter().enumerate() {
            if !v.is_finite() {
                return Err(GeometryError::NonFiniteVertex(i));
            }
        }
        for (f, cycle) in self.faces.iter().enumerate() {
            self.check_cycle(f, cycle)?;
        }
        let topo = self.topology();
        topo.check_oriented()?;
        let found = self.vertices.len() as i64 - topo.edges.len() as i64 + self.faces.len() as i64;
        let expected = 2 - 2 * i64::from(self.genus_hint);
        if found != expected {
            return Err(GeometryError::EulerMismatch {
                found,
                expected,
                genus: self.genus_hint,
            });
        }
        for e in &topo.edges {
            let (a, b) = e.vertices;
            if !(self.vertices[a].distance(self.vertices[b]) > 0.0) {
                return Err(GeometryError::ZeroLengthEdge(a, b));
            }
        }
        for (f, cycle) in self.faces.iter().enumerate() {
            if cycle.len() == 3 && self.triangle_is_degenerate(cycle) {
                return Err(GeometryError::DegenerateTriangle(cycle[0], cycle[1], cycle[2]));
            }
            if cycle.len() > 3 {
                self.check_planar(f)?;
            }
        }
        Ok(())
    }

    fn check_cycle(&self, f: usize, cycle: &[usize]) -> Result<()> {
        let invalid = |reason: &str| GeometryError::InvalidFace {
            face: f,
            reason: reason.to_owned(),
        };
        if cycle.len() < 3 {
            return Err(invalid("fewer than three vertices"));
        }
        if cycle.iter().any(|&v| v >= self.vertices.len()) {
            return Err(invalid("vertex index out of range"));
        }
        let mut seen = cycle.to_vec();
        seen.sort_unstable();
        seen.dedup();
        if seen.len() != cycle.len() {
            return Err(invalid("repeated vertex"));
        }
        Ok(())
    }

    pub(crate) fn triangle_is_degenerate(&self, cycle: &[usize]) -> bool {
        let (a, b, c) = (
            self.vertices[cycle[0]],
            self.vertices[cycle[1]],
            self.vertices[cycle[2]],
        );
        triangle_half_tangents(a, b, c).is_err()
    }

    pub fn face_centroid(&self, face: usize) -> Vec3 {
        centroid(&self.vertices, &self.faces[face])
    }

    pub(crate) fn face_normal_with(&self, positions: &[Vec3], face: usize) -> Result<Vec3> {
        let cycle = &self.faces[face];
        if cycle.len() > 3 {
            self.check_planar(face)?;
        }
        Ok(newell(positions, cycle))
    }

    pub(crate) fn check_planar(&self, face: usize) -> Result<()> {
        let cycle = &self.faces[face];
        let n = newell(&self.vertices, cycle)
            .normalized()
            .ok_or(GeometryError::ZeroAreaFace(face))?;
        let c = self.face_centroid(face);
        let diameter = cycle
            .iter()
            .map(|&v| self.vertices[v].distance(c))
            .fold(0.0, f64::max);
        let worst = cycle
            .iter()
            .map(|&v| n.dot(self.vertices[v] - c).abs())
            .fold(0.0, f64::max);
        if worst > tol::PLANARITY * diameter {
            return Err(GeometryError::NonPlanarFace(face));
        }
        Ok(())
    }

    /// `(first, second)` faces for the directed edge `a → b`.
    pub(crate) fn faces_along(&self, edge: (usize, usize)) -> Result<(usize, usize)> {
        let (a, b) = edge;
        let mut along = Vec::new();
        let mut against = Vec::new();
        for (f, cycle) in self.faces.iter().enumerate() {
            for (u, v) in cycle_edges(cycle) {
                if (u, v) == (a, b) {
                    along.push(f);
                } else if (u, v) == (b, a) {
                    against.push(f);
                }
            }
        }
        match (along.len(), against.len()) {
            (0, 0) => Err(GeometryError::MissingEdge(a, b)),
            (1, 1) => Ok((along[0], against[0])),
            (n, m) if n + m == 2 => Err(GeometryError::InconsistentOrientation(a, b)),
            _ => Err(GeometryError::NonManifoldEdge(a, b)),
        }
    }

    pub(crate) fn circumcircle(&self, face: usize) -> Result<Circle> {
        let cycle = &self.faces[face];
        if cycle.len() > 3 {
            self.check_planar(face)?;
        }
        let a = self.vertices[cycle[0]];
        let u = self.vertices[cycle[1]] - a;
        let w = self.vertices[cycle[2]] - a;
        let uxw = u.cross(w);
        let denom = 2.0 * uxw.norm_squared();
        if !(denom > 0.0) {
            return Err(GeometryError::NotConcyclic(face));
        }
        let center = a + (w * u.norm_squared() - u * w.norm_squared()).cross(uxw) / denom;
        let radius = center.distance(a);
        for &v in cycle {
            if (self.vertices[v].distance(center) - radius).abs() > tol::CONCYCLICITY * radius {
                return Err(GeometryError::NotConcyclic(face));
            }
        }
        let normal = newell(&self.vertices, cycle)
            .normalized()
            .ok_or(GeometryError::ZeroAreaFace(face))?;
        Ok(Circle {
            center,
            radius,
            normal,
        })
    }

    /// `tan(φ/2)` of the angle facing `edge` inside `face`.
    ///
    /// For triangles this is the vertex opposite the edge. For concyclic
    /// polygons every other vertex sees the edge under the same inscribed
    /// angle; the best-conditioned one (largest triangle) is used.
    pub(crate) fn opposite_half_tangent(&self, face: usize, edge: (usize, usize)) -> Result<f64> {
        let cycle = &self.faces[face];
        if !cycle_has_edge(cycle, edge) {
            return Err(GeometryError::MissingEdge(edge.0, edge.1));
        }
        let a = self.vertices[edge.0];
        let b = self.vertices[edge.1];
        if cycle.len() > 3 {
            super::circumcircle_center_angle(self, face, edge)?;
        }
        let third = cycle
            .iter()
            .copied()
            .filter(|&v| v != edge.0 && v != edge.1)
            .max_by(|&p, &q| {
                let ap = (b - a).cross(self.vertices[p] - a).norm();
                let aq = (b - a).cross(self.vertices[q] - a).norm();
                ap.total_cmp(&aq)
            })
            .expect("face has at least three vertices");
        let t = triangle_half_tangents(a, b, self.vertices[third]).map_err(|_| {
            let c = &self.faces[face];
            GeometryError::DegenerateTriangle(c[0], c[1], c[2])
        })?;
        Ok(t[2])
    }

    /// Enclosed volume (positive for outward orientation).
    pub fn signed_volume(&self) -> f64 {
        let mut vol = 0.0;
        for cycle in &self.faces {
            let p0 = self.vertices[cycle[0]];
            for k in 1..cycle.len() - 1 {
                let p1 = self.vertices[cycle[k]];
                let p2 = self.vertices[cycle[k + 1]];
                vol += p0.dot(p1.cross(p2));
            }
        }
        vol / 6.0
    }

    /// Reverses every face cycle.
    pub fn flipped(&self) -> EmbeddedMesh {
        let mut out = self.clone();
        for cycle in &mut out.faces {
            reverse_cycle(cycle);
        }
        out
    }

    /// Makes face orientations mutually consistent by propagation across
    /// edges, then flips globally so the enclosed volume is positive.
    pub fn repair_orientation(&self) -> Result<EmbeddedMesh> {
        let topo = self.topology();
        topo.check_manifold()?;
        let mut face_edges: Vec<Vec<usize>> = vec![Vec::new(); self.faces.len()];
        for (i, e) in topo.edges.iter().enumerate() {
            for &f in e.forward.iter().chain(&e.backward) {
                face_edges[f].push(i);
            }
        }
        let mut out = self.clone();
        let mut done = vec![false; self.faces.len()];
        for start in 0..self.faces.len() {
            if done[start] {
                continue;
            }
            done[start] = true;
            let mut queue = VecDeque::from([start]);
            while let Some(f) = queue.pop_front() {
                for &ei in &face_edges[f] {
                    let (lo, hi) = topo.edges[ei].vertices;
                    let f_forward = directed(&out.faces[f], lo, hi);
                    let inc = &topo.edges[ei];
                    let other = inc
                        .forward
                        .iter()
                        .chain(&inc.backward)
                        .copied()
                        .find(|&g| g != f)
                        .ok_or(GeometryError::NonManifoldEdge(lo, hi))?;
                    let g_forward = directed(&out.faces[other], lo, hi);
                    if done[other] {
                        if f_forward == g_forward {
                            return Err(GeometryError::NonOrientable);
                        }
                    } else {
                        if f_forward == g_forward {
                            reverse_cycle(&mut out.faces[other]);
                        }
                        done[other] = true;
                        queue.push_back(other);
                    }
                }
            }
        }
        if out.signed_volume() < 0.0 {
            out = out.flipped();
        }
        Ok(out)
    }
}

fn directed(cycle: &[usize], lo: usize, hi: usize) -> bool {
    cycle_edges(cycle).any(|e| e == (lo, hi))
}
