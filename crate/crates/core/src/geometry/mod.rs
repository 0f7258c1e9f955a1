//! Geometry of polyhedral surfaces embedded in flat 3d space.
//!
//! Faces are stored as vertex cycles in outward order (anti-clockwise seen
//! from outside). From that orientation every shared edge gets a dihedral
//! angle `θ ∈ [0, π]` between the outward normals of its two faces plus a
//! convexity sign read off the triple product `(N₁ ∧ N₂)·AB`, where the first
//! face is the one traversing the edge in the direction `A → B`.
//!
//! Polygonal faces are supported when they are planar and inscribed in a
//! circle; their "opposite angle" for an edge is the inscribed angle, i.e.
//! half of the center angle subtended by that edge.

mod io;
mod mesh;
mod vec3;

use std::f64::consts::PI;

use serde::{Deserialize, Serialize};
use thiserror::Error;

pub(crate) use mesh::newell as newell_normal;

pub use io::{read_mesh_file, write_mesh_file, MeshFileError};
pub use mesh::{ConvexReference, EdgeIncidence, EmbeddedMesh, MeshTopology};
pub use vec3::Vec3;

/// Numerical thresholds shared by the geometry routines.
pub mod tol {
    /// A triangle is degenerate when its area is below this times the square
    /// of its longest edge.
    pub const DEGENERATE_AREA: f64 = 1e-12;
    /// Relative out-of-plane deviation allowed for polygonal faces.
    pub const PLANARITY: f64 = 1e-9;
    /// Relative deviation from the circumradius allowed for polygon vertices.
    pub const CONCYCLICITY: f64 = 1e-9;
    /// Absolute agreement (radians) required between inscribed angles of a
    /// concyclic polygon.
    pub const INSCRIBED_ANGLE: f64 = 1e-9;
    /// Relative size of the sign triple product below which the fold is
    /// treated as flat (or fully folded) and the sign is pinned to `+1`.
    pub const FLAT_FOLD: f64 = 1e-13;
}

#[derive(Debug, Error, Clone, PartialEq)]
pub enum GeometryError {
    #[error("degenerate triangle ({0}, {1}, {2})")]
    DegenerateTriangle(usize, usize, usize),
    #[error("degenerate triangle: area below tolerance")]
    DegenerateTrianglePoints,
    #[error("face {0} has zero area")]
    ZeroAreaFace(usize),
    #[error("face {0} is not planar")]
    NonPlanarFace(usize),
    #[error("face {0} is not inscribed in a circle")]
    NotConcyclic(usize),
    #[error("edge ({0}, {1}) is not shared by exactly two faces")]
    NonManifoldEdge(usize, usize),
    #[error("edge ({0}, {1}) is traversed in the same direction by both faces")]
    InconsistentOrientation(usize, usize),
    #[error("edge ({0}, {1}) not found in mesh")]
    MissingEdge(usize, usize),
    #[error("edge ({0}, {1}) has zero length")]
    ZeroLengthEdge(usize, usize),
    #[error("face {face} is invalid: {reason}")]
    InvalidFace { face: usize, reason: String },
    #[error("vertex {0} has non-finite coordinates")]
    NonFiniteVertex(usize),
    #[error("Euler characteristic {found} does not match genus {genus} (expected {expected})")]
    EulerMismatch {
        found: i64,
        expected: i64,
        genus: u32,
    },
    #[error("face {0} normal is orthogonal to its centroid direction; orientation is ambiguous")]
    OrientationAmbiguous(usize),
    #[error("surface is not orientable")]
    NonOrientable,
    #[error("reference positions do not match the mesh ({0} vs {1} vertices)")]
    ReferenceMismatch(usize, usize),
}

pub type Result<T, E = GeometryError> = std::result::Result<T, E>;

/// Everything known about one mesh edge and the fold across it.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EdgeRecord {
    /// `(A, B)` such that the first face traverses `A → B`.
    pub vertex_pair: (usize, usize),
    /// `(first, second)` incident faces.
    pub face_pair: (usize, usize),
    pub length: f64,
    /// Opposite angle in the first and second face. For polygonal faces this
    /// is the inscribed angle, half of the center angle.
    pub opposite_angles: (f64, f64),
    /// `tan(φ/2)` of the opposite angles, computed directly from lengths.
    pub opposite_half_tangents: (f64, f64),
    /// Angle between the outward normals, in `[0, π]`.
    pub dihedral_angle: f64,
    /// `+1` for a convex fold, `-1` for a concave one.
    pub convexity_sign: i8,
}

impl EdgeRecord {
    /// Signed dihedral angle `s·θ`.
    pub fn signed_angle(&self) -> f64 {
        f64::from(self.convexity_sign) * self.dihedral_angle
    }
}

/// Half-angle tangents at `a`, `b`, `c` of the triangle `(a, b, c)`.
///
/// Uses `tan²(φ/2) = (l₃+l₁−l₂)(l₃+l₂−l₁) / ((l₁+l₂+l₃)(l₁+l₂−l₃))` with
/// `l₃` the side opposite the angle, which stays accurate for needle-like
/// triangles where `acos` of a dot product does not.
pub fn triangle_half_tangents(a: Vec3, b: Vec3, c: Vec3) -> Result<[f64; 3]> {
    let la = b.distance(c);
    let lb = c.distance(a);
    let lc = a.distance(b);
    let lmax = la.max(lb).max(lc);
    let area = 0.5 * (b - a).cross(c - a).norm();
    if !(lmax > 0.0) || area < tol::DEGENERATE_AREA * lmax * lmax {
        return Err(GeometryError::DegenerateTrianglePoints);
    }
    Ok([
        half_tangent_from_lengths(la, lb, lc),
        half_tangent_from_lengths(lb, lc, la),
        half_tangent_from_lengths(lc, la, lb),
    ])
}

/// `tan(φ/2)` for the angle opposite `opposite` with adjacent sides `s1`, `s2`.
pub(crate) fn half_tangent_from_lengths(opposite: f64, s1: f64, s2: f64) -> f64 {
    let num = (opposite - s1 + s2) * (opposite + s1 - s2);
    let den = (s1 + s2 + opposite) * (s1 + s2 - opposite);
    (num / den).max(0.0).sqrt()
}

/// Interior angles at `a`, `b`, `c` of the triangle `(a, b, c)`.
pub fn triangle_angles(a: Vec3, b: Vec3, c: Vec3) -> Result<(f64, f64, f64)> {
    let t = triangle_half_tangents(a, b, c)?;
    Ok((2.0 * t[0].atan(), 2.0 * t[1].atan(), 2.0 * t[2].atan()))
}

/// Outward (non-unit) normal of a face; its norm is the face area.
///
/// Triangles use `½ AB ∧ AC`; polygons use Newell's vector area and are
/// checked for planarity.
pub fn face_normal(mesh: &EmbeddedMesh, face: usize) -> Result<Vec3> {
    mesh.face_normal_with(&mesh.vertices, face)
}

/// Dihedral angle in `[0, π]` and convexity sign of the fold at `edge`.
///
/// The edge vector is `edge.0 → edge.1`; the first face is the one whose
/// cycle contains that step. Swapping the edge direction swaps the two face
/// roles and negates the edge vector, so the sign is the same either way.
pub fn signed_dihedral(mesh: &EmbeddedMesh, edge: (usize, usize)) -> Result<(f64, i8)> {
    let (first, second) = mesh.faces_along(edge)?;
    if mesh.coincident {
        return Ok((PI, 1));
    }
    let n1 = face_normal(mesh, first)?;
    let n2 = face_normal(mesh, second)?;
    if n1.norm() == 0.0 {
        return Err(GeometryError::ZeroAreaFace(first));
    }
    if n2.norm() == 0.0 {
        return Err(GeometryError::ZeroAreaFace(second));
    }
    let ab = mesh.vertices[edge.1] - mesh.vertices[edge.0];
    let cross = n1.cross(n2);
    let theta = cross.norm().atan2(n1.dot(n2));
    let triple = cross.dot(ab);
    let scale = n1.norm() * n2.norm() * ab.norm();
    let sign = if triple.abs() <= tol::FLAT_FOLD * scale || triple > 0.0 {
        1
    } else {
        -1
    };
    Ok((theta, sign))
}

/// Dihedral angle computed from the two half-planes meeting at the edge,
/// independently of the normals: `θ = π − (angle between in-face
/// perpendiculars to the edge)`.
pub fn dihedral_from_planes(mesh: &EmbeddedMesh, edge: (usize, usize)) -> Result<f64> {
    let (first, second) = mesh.faces_along(edge)?;
    let a = mesh.vertices[edge.0];
    let e = (mesh.vertices[edge.1] - a)
        .normalized()
        .ok_or(GeometryError::ZeroLengthEdge(edge.0, edge.1))?;
    let perp = |face: usize| {
        let g = mesh.face_centroid(face);
        let d = g - a;
        d - e * d.dot(e)
    };
    Ok(PI - perp(first).angle_to(perp(second)))
}

/// Opposite angles `(φ_s, φ_t)` of an edge in its first and second face.
pub fn opposite_angles(mesh: &EmbeddedMesh, edge: (usize, usize)) -> Result<(f64, f64)> {
    let (first, second) = mesh.faces_along(edge)?;
    let t1 = mesh.opposite_half_tangent(first, edge)?;
    let t2 = mesh.opposite_half_tangent(second, edge)?;
    Ok((2.0 * t1.atan(), 2.0 * t2.atan()))
}

/// Center angle `ψ ∈ (0, 2π)` subtended by `edge` in the circumcircle of
/// `face`, measured on the side away from the rest of the polygon.
pub fn circumcircle_center_angle(
    mesh: &EmbeddedMesh,
    face: usize,
    edge: (usize, usize),
) -> Result<f64> {
    let circle = mesh.circumcircle(face)?;
    let cycle = &mesh.faces[face];
    if !mesh::cycle_has_edge(cycle, edge) {
        return Err(GeometryError::MissingEdge(edge.0, edge.1));
    }
    let a = mesh.vertices[edge.0];
    let b = mesh.vertices[edge.1];
    let chord = a.distance(b);
    let half = (chord / (2.0 * circle.radius)).min(1.0).asin();
    // Side of the chord, within the face plane, of the center and of the
    // remaining polygon vertices.
    let side = |p: Vec3| circle.normal.dot((b - a).cross(p - a));
    let center_side = side(circle.center);
    let others: Vec<usize> = cycle
        .iter()
        .copied()
        .filter(|&v| v != edge.0 && v != edge.1)
        .collect();
    let poly_side = others
        .iter()
        .map(|&v| side(mesh.vertices[v]))
        .fold(0.0, |acc: f64, s| if s.abs() > acc.abs() { s } else { acc });
    let psi = if center_side * poly_side >= 0.0 {
        2.0 * half
    } else {
        2.0 * PI - 2.0 * half
    };
    for &v in &others {
        let t = triangle_half_tangents(a, b, mesh.vertices[v])
            .map_err(|_| GeometryError::NotConcyclic(face))?;
        let inscribed = 2.0 * t[2].atan();
        if (inscribed - psi / 2.0).abs() > tol::INSCRIBED_ANGLE {
            return Err(GeometryError::NotConcyclic(face));
        }
    }
    Ok(psi)
}

/// Discrete total extrinsic curvature `Σ_e s_e θ_e L_e`.
pub fn regge_action(mesh: &EmbeddedMesh) -> Result<f64> {
    Ok(edge_records(mesh)?
        .iter()
        .map(|r| r.signed_angle() * r.length)
        .sum())
}

/// Reorders face cycles so that every normal, computed on the reference
/// positions, has positive projection on the face centroid.
///
/// With [`ConvexReference::Positions`] the orientation is decided on a convex
/// (or star-shaped) configuration with the same combinatorics, e.g. the mesh
/// before a radial rescaling, and inherited by `mesh`.
pub fn orient_outward(mesh: &EmbeddedMesh, reference: ConvexReference<'_>) -> Result<EmbeddedMesh> {
    let positions = match reference {
        ConvexReference::StarShaped => mesh.vertices.as_slice(),
        ConvexReference::Positions(p) => {
            if p.len() != mesh.vertices.len() {
                return Err(GeometryError::ReferenceMismatch(p.len(), mesh.vertices.len()));
            }
            p
        }
    };
    let mut out = mesh.clone();
    for (f, cycle) in out.faces.iter_mut().enumerate() {
        let n = mesh::newell(positions, cycle);
        let c = mesh::centroid(positions, cycle);
        let d = n.dot(c);
        if d.abs() <= 1e-12 * n.norm() * c.norm() {
            return Err(GeometryError::OrientationAmbiguous(f));
        }
        if d < 0.0 {
            mesh::reverse_cycle(cycle);
        }
    }
    out.topology().check_oriented()?;
    Ok(out)
}

/// Records for every edge, in [`MeshTopology`] edge order (sorted vertex pairs).
pub fn edge_records(mesh: &EmbeddedMesh) -> Result<Vec<EdgeRecord>> {
    let topo = mesh.topology();
    topo.check_oriented()?;
    topo.edges
        .iter()
        .map(|inc| {
            let (first, second) = (inc.forward[0], inc.backward[0]);
            let pair = (inc.vertices.0, inc.vertices.1);
            let length = mesh.vertices[pair.0].distance(mesh.vertices[pair.1]);
            if !(length > 0.0) {
                return Err(GeometryError::ZeroLengthEdge(pair.0, pair.1));
            }
            let t1 = mesh.opposite_half_tangent(first, pair)?;
            let t2 = mesh.opposite_half_tangent(second, pair)?;
            let (theta, sign) = signed_dihedral(mesh, pair)?;
            Ok(EdgeRecord {
                vertex_pair: pair,
                face_pair: (first, second),
                length,
                opposite_angles: (2.0 * t1.atan(), 2.0 * t2.atan()),
                opposite_half_tangents: (t1, t2),
                dihedral_angle: theta,
                convexity_sign: sign,
            })
        })
        .collect()
}

#[cfg(test)]
mod tests;
