//! Parametric constructors for the canonical configurations, with closed-form
//! couplings and loop polynomials used as fixtures.
//!
//! Every constructor returns an outward-oriented [`EmbeddedMesh`]; link order
//! of its dual graph follows the sorted mesh edges. Each kind groups its
//! links into symmetry classes, and [`reference_couplings`] returns one value
//! per link from the closed forms.

mod fixtures;
mod polynomials;

use std::f64::consts::{FRAC_PI_3, FRAC_PI_4, FRAC_PI_8, PI};

use num_complex::Complex64;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::geometry::{orient_outward, ConvexReference, EmbeddedMesh, GeometryError, Vec3};
use crate::ising::CouplingVector;

pub use fixtures::{fixture_names, load_fixture, NONCONVEX_9, TWO_CONCAVE_6};
pub use polynomials::{
    p_cube_classes, p_cube_homogeneous, p_double_pyramid_graph, p_pyramid, p_tetrahedral, p_theta,
    p_torus,
};

#[derive(Debug, Error, Clone, PartialEq)]
pub enum CanonicalError {
    #[error("invalid parameters: {0}")]
    InvalidParameters(String),
    #[error("expected {expected} couplings for this configuration, found {found}")]
    ShapeMismatch { expected: usize, found: usize },
    #[error("no closed form for {0}")]
    NoClosedForm(&'static str),
    #[error(transparent)]
    Geometry(#[from] GeometryError),
}

/// A canonical configuration and its parameters.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum CanonicalSpec {
    /// Two coincident unit equilateral triangles glued along their boundary.
    Pancake,
    /// Regular tetrahedron with unit edges, centered at the origin.
    TetrahedronRegular,
    /// Tetrahedron on four given points.
    TetrahedronPoints { points: [Vec3; 4] },
    /// Square base `(±1, ±1, 0)` and apex `(0, 0, h)`.
    Pyramid { h: f64 },
    /// Quadrilateral `A B C D` = `(0,0,0) (0,0,2) (2,0,2) (2,0,0)` with apexes
    /// `E = (1, h, z)` and `F = (1, −h, z)`.
    DoublePyramid { h: f64, z: f64 },
    /// Axis-aligned cube of side `a` centered at the origin.
    Cube { a: f64 },
    /// Three prisms around the `z` axis: equilateral inner and outer
    /// triangles of circumradius `r` and `R`, height `h`.
    PrismaticTorus { r: f64, big_r: f64, h: f64 },
}

impl CanonicalSpec {
    pub fn name(&self) -> &'static str {
        match self {
            CanonicalSpec::Pancake => "pancake",
            CanonicalSpec::TetrahedronRegular => "tetrahedron",
            CanonicalSpec::TetrahedronPoints { .. } => "tetrahedron_points",
            CanonicalSpec::Pyramid { .. } => "pyramid",
            CanonicalSpec::DoublePyramid { .. } => "double_pyramid",
            CanonicalSpec::Cube { .. } => "cube",
            CanonicalSpec::PrismaticTorus { .. } => "prismatic_torus",
        }
    }

    pub fn validate(&self) -> Result<(), CanonicalError> {
        let ok = match *self {
            CanonicalSpec::Pyramid { h } => h > 0.0 && h.is_finite(),
            CanonicalSpec::DoublePyramid { h, z } => h > 0.0 && h.is_finite() && z >= 0.0 && z.is_finite(),
            CanonicalSpec::Cube { a } => a > 0.0 && a.is_finite(),
            CanonicalSpec::PrismaticTorus { r, big_r, h } => {
                r > 0.0 && r < big_r && big_r.is_finite() && h > 0.0 && h.is_finite()
            }
            CanonicalSpec::TetrahedronPoints { points } => points.iter().all(|p| p.is_finite()),
            CanonicalSpec::Pancake | CanonicalSpec::TetrahedronRegular => true,
        };
        if ok {
            Ok(())
        } else {
            Err(CanonicalError::InvalidParameters(format!("{self:?}")))
        }
    }
}

/// Builds the mesh of a canonical configuration.
pub fn build_canonical(spec: &CanonicalSpec) -> Result<EmbeddedMesh, CanonicalError> {
    spec.validate()?;
    let mesh = match *spec {
        CanonicalSpec::Pancake => {
            let s3 = 3f64.sqrt();
            let v = vec![
                Vec3::new(0.0, 0.0, 0.0),
                Vec3::new(1.0, 0.0, 0.0),
                Vec3::new(0.5, s3 / 2.0, 0.0),
            ];
            let mut m = EmbeddedMesh::from_raw(v, vec![vec![0, 1, 2], vec![0, 2, 1]], 0);
            m.coincident = true;
            m.check()?;
            m
        }
        CanonicalSpec::TetrahedronRegular => {
            let s = 1.0 / (2.0 * 2f64.sqrt());
            let points = [
                Vec3::new(s, s, s),
                Vec3::new(s, -s, -s),
                Vec3::new(-s, s, -s),
                Vec3::new(-s, -s, s),
            ];
            tetrahedron(points)?
        }
        CanonicalSpec::TetrahedronPoints { points } => tetrahedron(points)?,
        CanonicalSpec::Pyramid { h } => {
            let v = vec![
                Vec3::new(1.0, 1.0, 0.0),
                Vec3::new(-1.0, 1.0, 0.0),
                Vec3::new(-1.0, -1.0, 0.0),
                Vec3::new(1.0, -1.0, 0.0),
                Vec3::new(0.0, 0.0, h),
            ];
            let faces = vec![vec![0, 3, 2, 1], vec![0, 1, 4], vec![1, 2, 4], vec![2, 3, 4], vec![3, 0, 4]];
            EmbeddedMesh::new(v, faces, 0)?
        }
        CanonicalSpec::DoublePyramid { h, z } => {
            let v = vec![
                Vec3::new(0.0, 0.0, 0.0),
                Vec3::new(0.0, 0.0, 2.0),
                Vec3::new(2.0, 0.0, 2.0),
                Vec3::new(2.0, 0.0, 0.0),
                Vec3::new(1.0, h, z),
                Vec3::new(1.0, -h, z),
            ];
            // Orientation is decided on the convex (z = 1) configuration.
            let reference = [
                v[0] - Vec3::new(1.0, 0.0, 1.0),
                v[1] - Vec3::new(1.0, 0.0, 1.0),
                v[2] - Vec3::new(1.0, 0.0, 1.0),
                v[3] - Vec3::new(1.0, 0.0, 1.0),
                Vec3::new(0.0, 1.0, 0.0),
                Vec3::new(0.0, -1.0, 0.0),
            ];
            let quad = [0, 1, 2, 3];
            let mut faces = Vec::new();
            for apex in [4, 5] {
                for k in 0..4 {
                    faces.push(vec![quad[k], quad[(k + 1) % 4], apex]);
                }
            }
            let raw = EmbeddedMesh::from_raw(v, faces, 0);
            let m = orient_outward(&raw, ConvexReference::Positions(&reference))?;
            m.check()?;
            m
        }
        CanonicalSpec::Cube { a } => {
            let s = a / 2.0;
            let v: Vec<Vec3> = (0..8)
                .map(|i| {
                    let c = |bit: usize| if i >> bit & 1 == 1 { s } else { -s };
                    Vec3::new(c(0), c(1), c(2))
                })
                .collect();
            let faces = vec![
                vec![0, 2, 3, 1],
                vec![4, 5, 7, 6],
                vec![0, 1, 5, 4],
                vec![2, 6, 7, 3],
                vec![0, 4, 6, 2],
                vec![1, 3, 7, 5],
            ];
            let raw = EmbeddedMesh::from_raw(v, faces, 0);
            let m = orient_outward(&raw, ConvexReference::StarShaped)?;
            m.check()?;
            m
        }
        CanonicalSpec::PrismaticTorus { r, big_r, h } => prismatic_torus(r, big_r, h)?,
    };
    Ok(mesh)
}

fn tetrahedron(points: [Vec3; 4]) -> Result<EmbeddedMesh, CanonicalError> {
    let raw = EmbeddedMesh::from_raw(
        points.to_vec(),
        vec![vec![0, 1, 2], vec![0, 1, 3], vec![0, 2, 3], vec![1, 2, 3]],
        0,
    );
    let m = raw.repair_orientation()?;
    m.check()?;
    Ok(m)
}

/// Vertices: inner bottom 0–2, inner top 3–5, outer bottom 6–8, outer top 9–11.
fn prismatic_torus(r: f64, big_r: f64, h: f64) -> Result<EmbeddedMesh, CanonicalError> {
    let dir = |k: usize| {
        let a = 2.0 * PI * k as f64 / 3.0;
        (a.cos(), a.sin())
    };
    let mut v = Vec::with_capacity(12);
    for (radius, z) in [(r, 0.0), (r, h), (big_r, 0.0), (big_r, h)] {
        for k in 0..3 {
            let (c, s) = dir(k);
            v.push(Vec3::new(radius * c, radius * s, z));
        }
    }
    let (ib, it, ob, ot) = (0, 3, 6, 9);
    // Each face with the direction its normal must point along.
    let mut faces: Vec<(Vec<usize>, Vec3)> = Vec::with_capacity(12);
    for k in 0..3 {
        let k1 = (k + 1) % 3;
        let (c0, s0) = dir(k);
        let (c1, s1) = dir(k1);
        let mid = Vec3::new(c0 + c1, s0 + s1, 0.0);
        faces.push((vec![it + k, it + k1, ot + k1, ot + k], Vec3::new(0.0, 0.0, 1.0)));
        faces.push((vec![ib + k, ib + k1, ob + k1, ob + k], Vec3::new(0.0, 0.0, -1.0)));
        faces.push((vec![ib + k, ib + k1, it + k1, it + k], -mid));
        faces.push((vec![ob + k, ob + k1, ot + k1, ot + k], mid));
    }
    let mut cycles = Vec::with_capacity(12);
    for (mut cycle, out) in faces {
        let n = crate::geometry::newell_normal(&v, &cycle);
        if n.dot(out) < 0.0 {
            cycle[1..].reverse();
        }
        cycles.push(cycle);
    }
    Ok(EmbeddedMesh::new(v, cycles, 1)?)
}

/// Symmetry class of each link of the dual graph, in link order.
pub fn link_classes(spec: &CanonicalSpec) -> Result<Vec<&'static str>, CanonicalError> {
    let mesh = build_canonical(spec)?;
    let topo = mesh.topology();
    let classes = topo
        .edges
        .iter()
        .map(|e| classify(spec, e.vertices))
        .collect();
    Ok(classes)
}

fn classify(spec: &CanonicalSpec, (a, b): (usize, usize)) -> &'static str {
    match spec {
        CanonicalSpec::Pyramid { .. } => {
            if a == 4 || b == 4 {
                "summit"
            } else {
                "base"
            }
        }
        CanonicalSpec::DoublePyramid { .. } => match (a, b) {
            (1, 2) => "u",
            (0, 3) => "d",
            (0, 1) | (2, 3) => "s",
            (1, _) | (2, _) => "su",
            _ => "sd",
        },
        CanonicalSpec::PrismaticTorus { .. } => {
            let ring = |v: usize| v / 3;
            match (ring(a), ring(b)) {
                (0, 1) => "vi",
                (2, 3) => "ve",
                (0, 0) | (1, 1) => "hi",
                (2, 2) | (3, 3) => "he",
                _ => "y",
            }
        }
        _ => "all",
    }
}

/// Closed-form geometric couplings, one per dual link (global sign `+1`).
///
/// The pyramid base edges only have a closed form for `Y²`; the principal
/// square root is returned, which coincides with the geometric coupling
/// since its phase `θ/2` lies in `(0, π/2)`.
pub fn reference_couplings(spec: &CanonicalSpec) -> Result<CouplingVector, CanonicalError> {
    let classes = link_classes(spec)?;
    let values = match *spec {
        CanonicalSpec::Pancake => vec![Complex64::new(0.0, (PI / 6.0).tan()); 3],
        CanonicalSpec::TetrahedronRegular => vec![Complex64::new(1.0, 2f64.sqrt()) / 3.0; 6],
        CanonicalSpec::TetrahedronPoints { .. } => return Err(CanonicalError::NoClosedForm("a general tetrahedron")),
        CanonicalSpec::Cube { .. } => vec![cube_coupling(); 12],
        CanonicalSpec::Pyramid { h } => {
            let (y2, yt) = pyramid_couplings(h);
            classes
                .iter()
                .map(|&c| if c == "base" { y2.sqrt() } else { yt })
                .collect()
        }
        CanonicalSpec::DoublePyramid { h, z } => {
            let c = double_pyramid_couplings(h, z);
            classes
                .iter()
                .map(|&k| match k {
                    "u" => c.u,
                    "d" => c.d,
                    "s" => c.s,
                    "su" => c.su2.sqrt(),
                    _ => c.sd2.sqrt(),
                })
                .collect()
        }
        CanonicalSpec::PrismaticTorus { r, big_r, h } => {
            let c = torus_couplings(r, big_r, h);
            classes
                .iter()
                .map(|&k| match k {
                    "y" => c.y,
                    "hi" => c.hi,
                    "he" => c.he,
                    "vi" => c.vi,
                    _ => c.ve,
                })
                .collect()
        }
    };
    Ok(CouplingVector::new(values))
}

/// `e^{iπ/4} tan(π/8)`, the cube coupling.
pub fn cube_coupling() -> Complex64 {
    Complex64::from_polar(FRAC_PI_8.tan(), FRAC_PI_4)
}

/// `e^{iπ/4} tan(3π/8)`, the second non-trivial root pair of the
/// double-pyramid graph polynomial.
pub fn cube_coupling_second() -> Complex64 {
    Complex64::from_polar((3.0 * FRAC_PI_8).tan(), FRAC_PI_4)
}

/// `(√2 + i)/3`, the equilateral double-pyramid coupling.
pub fn octahedron_coupling() -> Complex64 {
    Complex64::new(2f64.sqrt(), 1.0) / 3.0
}

/// `(Y², Ỹ)` for the pyramid of height `h`: base edges and summit edges.
pub fn pyramid_couplings(h: f64) -> (Complex64, Complex64) {
    let h2 = h * h;
    let s = (h2 + 2.0).sqrt();
    let y2 = Complex64::new(-1.0, h) * ((2f64.sqrt() - 1.0) / (h2 + 1.0));
    let yt = Complex64::new(s, h) * ((s - 1.0) / ((h2 + 1.0) * 2f64.sqrt()));
    (y2, yt)
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DoublePyramidCouplings {
    pub u: Complex64,
    pub d: Complex64,
    pub s: Complex64,
    pub su2: Complex64,
    pub sd2: Complex64,
}

/// `l = |AE|` and `L = |BE|`.
pub fn double_pyramid_lengths(h: f64, z: f64) -> (f64, f64) {
    ((1.0 + h * h + z * z).sqrt(), (1.0 + h * h + (2.0 - z) * (2.0 - z)).sqrt())
}

pub fn double_pyramid_couplings(h: f64, z: f64) -> DoublePyramidCouplings {
    let (l, big_l) = double_pyramid_lengths(h, z);
    // l² − 1 and L² − 1 without cancellation.
    let l2m1 = h * h + z * z;
    let big_l2m1 = h * h + (2.0 - z) * (2.0 - z);
    DoublePyramidCouplings {
        u: Complex64::new(h, 2.0 - z) / big_l2m1,
        d: Complex64::new(h, z) / l2m1,
        s: Complex64::new(h, 1.0) * 4.0 / ((big_l + l + 2.0) * (big_l + l - 2.0)),
        su2: Complex64::new(2.0 - z, h * big_l) * 4.0 / ((big_l + 1.0) * (l + big_l + 2.0) * (l - big_l + 2.0)),
        sd2: Complex64::new(z, h * l) * 4.0 / ((l + 1.0) * (big_l + l + 2.0) * (big_l - l + 2.0)),
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TorusCouplings {
    pub y: Complex64,
    pub hi: Complex64,
    pub he: Complex64,
    pub vi: Complex64,
    pub ve: Complex64,
}

/// Prismatic-torus couplings, rationalized so that no difference of nearly
/// equal square roots is formed (the asymptotic regimes need this).
pub fn torus_couplings(r: f64, big_r: f64, h: f64) -> TorusCouplings {
    let s3 = 3f64.sqrt();
    let q = (r * r + r * big_r + big_r * big_r).sqrt();
    let ri = (h * h + 3.0 * r * r).sqrt();
    let re = (h * h + 3.0 * big_r * big_r).sqrt();
    TorusCouplings {
        y: Complex64::new((big_r - r) / (2.0 * q + s3 * (big_r + r)), 0.0),
        vi: Complex64::from_polar(h / (ri + s3 * r), -FRAC_PI_3),
        ve: Complex64::from_polar(h / (re + s3 * big_r), FRAC_PI_3),
        hi: Complex64::from_polar(s3 * r / ((h + ri) * (2.0 * q + r + 2.0 * big_r)).sqrt(), FRAC_PI_4),
        he: Complex64::from_polar(((2.0 * r + big_r + 2.0 * q) / (h + re)).sqrt(), FRAC_PI_4),
    }
}

/// Loop polynomial from the closed form, given one coupling per dual link.
///
/// Couplings are read per symmetry class (the first link of each class), so
/// the vector must respect the class structure of [`link_classes`].
pub fn reference_polynomial(spec: &CanonicalSpec, y: &CouplingVector) -> Result<Complex64, CanonicalError> {
    let classes = link_classes(spec)?;
    if y.len() != classes.len() {
        return Err(CanonicalError::ShapeMismatch {
            expected: classes.len(),
            found: y.len(),
        });
    }
    let first = |name: &str| {
        classes
            .iter()
            .position(|&c| c == name)
            .map(|i| y[i])
            .expect("class present")
    };
    Ok(match *spec {
        CanonicalSpec::Pancake => p_theta(y[0], y[1], y[2]),
        CanonicalSpec::TetrahedronRegular | CanonicalSpec::TetrahedronPoints { .. } => {
            // Sorted vertex pairs (01, 02, 03, 12, 13, 23) to the K4 labels
            // (n3n4, n2n4, n1n4, n1n2, n1n3, n2n3) of the dual graph, whose
            // nodes are the faces opposite each vertex.
            let v = &y.values;
            p_tetrahedral(&[v[0], v[1], v[3], v[5], v[4], v[2]])
        }
        CanonicalSpec::Pyramid { .. } => {
            let base = first("base");
            p_pyramid(base * base, first("summit"))
        }
        CanonicalSpec::DoublePyramid { .. } => {
            let su = first("su");
            let sd = first("sd");
            p_cube_classes(first("u"), first("d"), first("s"), su * su, sd * sd)
        }
        CanonicalSpec::Cube { .. } => p_double_pyramid_graph(y[0]),
        CanonicalSpec::PrismaticTorus { .. } => {
            p_torus(first("y"), first("hi"), first("he"), first("vi"), first("ve"))
        }
    })
}

#[cfg(test)]
mod tests;
