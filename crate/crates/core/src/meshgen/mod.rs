//! Random spherical triangulations.
//!
//! Points are sampled on the unit sphere, triangulated by their convex hull
//! (which for points on a sphere is the spherical Delaunay triangulation),
//! and optionally rescaled radially vertex by vertex. All randomness comes
//! from `ChaCha8Rng::seed_from_u64(seed)`, which is specified independently
//! of platform and word size, so a seed replays the same mesh everywhere.

mod hull;

use std::f64::consts::PI;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::geometry::{EmbeddedMesh, GeometryError, Vec3};

pub use hull::{convex_hull, JITTER_SEED};

#[derive(Debug, Error, Clone, PartialEq)]
pub enum MeshgenError {
    #[error("need at least 4 points, got {0}")]
    TooFewPoints(usize),
    #[error("degenerate input: {0}")]
    DegenerateInput(String),
    #[error("invalid rescale range [{0}, {1}]")]
    InvalidRange(f64, f64),
    #[error(transparent)]
    Geometry(#[from] GeometryError),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Distribution {
    /// Uniform area measure on the sphere.
    #[default]
    Uniform,
    /// Denser near the poles: `|z|` has density `2|z|`.
    PoleWeighted,
}

impl std::str::FromStr for Distribution {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, String> {
        match s {
            "uniform" => Ok(Distribution::Uniform),
            "pole-weighted" | "pole_weighted" | "poles" => Ok(Distribution::PoleWeighted),
            _ => Err(format!("unknown distribution `{s}`")),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct SamplerConfig {
    pub n_points: usize,
    pub distribution: Distribution,
    pub seed: u64,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct RescaleConfig {
    pub factor_range: (f64, f64),
    pub seed: u64,
}

impl RescaleConfig {
    pub fn new(lo: f64, hi: f64, seed: u64) -> Result<Self, MeshgenError> {
        if !(lo > 0.0 && lo <= hi && hi.is_finite()) {
            return Err(MeshgenError::InvalidRange(lo, hi));
        }
        Ok(Self {
            factor_range: (lo, hi),
            seed,
        })
    }
}

/// Points on the unit sphere.
pub fn sample_sphere(config: &SamplerConfig) -> Result<Vec<Vec3>, MeshgenError> {
    if config.n_points < 4 {
        return Err(MeshgenError::TooFewPoints(config.n_points));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(config.seed);
    let points = (0..config.n_points)
        .map(|_| {
            let z: f64 = match config.distribution {
                // Archimedes: z uniform gives the uniform area measure.
                Distribution::Uniform => rng.random_range(-1.0..=1.0),
                Distribution::PoleWeighted => {
                    let m: f64 = rng.random::<f64>().sqrt();
                    if rng.random::<bool>() {
                        m
                    } else {
                        -m
                    }
                }
            };
            let phi: f64 = rng.random_range(0.0..2.0 * PI);
            let rho = (1.0 - z * z).max(0.0).sqrt();
            let p = Vec3::new(rho * phi.cos(), rho * phi.sin(), z);
            p / p.norm()
        })
        .collect();
    Ok(points)
}

/// Triangulates points on a sphere by their convex hull, outward oriented.
pub fn delaunay_sphere(points: &[Vec3]) -> Result<EmbeddedMesh, MeshgenError> {
    convex_hull(points)
}

/// Multiplies each vertex by an independent factor from the configured
/// range; faces (and hence orientation) are kept as they are.
pub fn radial_rescale(mesh: &EmbeddedMesh, config: &RescaleConfig) -> Result<EmbeddedMesh, MeshgenError> {
    let (lo, hi) = config.factor_range;
    if !(lo > 0.0 && lo <= hi && hi.is_finite()) {
        return Err(MeshgenError::InvalidRange(lo, hi));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(config.seed);
    let mut out = mesh.clone();
    for v in &mut out.vertices {
        let f: f64 = rng.random_range(lo..=hi);
        *v = *v * f;
    }
    Ok(out)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "issue", rename_all = "snake_case")]
pub enum ValidationIssue {
    InvalidFace { face: usize },
    NonManifold,
    InconsistentOrientation,
    EulerMismatch { found: i64, expected: i64 },
    ZeroLengthEdge,
    DegenerateFace { face: usize },
    NotStarShaped { face: usize },
    NonFinite,
}

/// Outcome of [`validate_closed`]; `accepted` iff `issues` is empty.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ValidationReport {
    pub manifold: bool,
    pub oriented: bool,
    pub euler_ok: bool,
    pub star_shaped: bool,
    pub issues: Vec<ValidationIssue>,
    pub accepted: bool,
}

/// Checks that a (possibly rescaled) mesh is still a closed polyhedron.
///
/// Star-shapedness about the origin requires every face plane to have the
/// origin strictly on its inner side: `N_f · c_f > 0` with `c_f` the face
/// centroid. A radially rescaled sphere triangulation that passes this test
/// projects one-to-one onto the sphere, hence does not self-intersect.
pub fn validate_closed(mesh: &EmbeddedMesh) -> ValidationReport {
    let mut issues = Vec::new();
    if mesh.vertices.iter().any(|v| !v.is_finite()) {
        issues.push(ValidationIssue::NonFinite);
    }
    let mut cycles_ok = true;
    for (f, cycle) in mesh.faces.iter().enumerate() {
        let distinct = {
            let mut s = cycle.clone();
            s.sort_unstable();
            s.dedup();
            s.len() == cycle.len()
        };
        if cycle.len() < 3 || !distinct || cycle.iter().any(|&v| v >= mesh.vertices.len()) {
            issues.push(ValidationIssue::InvalidFace { face: f });
            cycles_ok = false;
        }
    }
    if !cycles_ok {
        return finish(false, false, false, false, issues);
    }
    let topo = mesh.topology();
    let manifold = topo.check_manifold().is_ok();
    let oriented = manifold && topo.check_oriented().is_ok();
    if !manifold {
        issues.push(ValidationIssue::NonManifold);
    } else if !oriented {
        issues.push(ValidationIssue::InconsistentOrientation);
    }
    let found = mesh.euler_characteristic();
    let expected = 2 - 2 * i64::from(mesh.genus_hint);
    let euler_ok = found == expected;
    if !euler_ok {
        issues.push(ValidationIssue::EulerMismatch { found, expected });
    }
    if topo
        .edges
        .iter()
        .any(|e| !(mesh.vertices[e.vertices.0].distance(mesh.vertices[e.vertices.1]) > 0.0))
    {
        issues.push(ValidationIssue::ZeroLengthEdge);
    }
    let mut star_shaped = true;
    for (f, cycle) in mesh.faces.iter().enumerate() {
        let degenerate = if cycle.len() == 3 {
            mesh.triangle_is_degenerate(cycle)
        } else {
            crate::geometry::newell_normal(&mesh.vertices, cycle).norm() == 0.0
        };
        if degenerate {
            issues.push(ValidationIssue::DegenerateFace { face: f });
        }
        let n = crate::geometry::newell_normal(&mesh.vertices, cycle);
        if !(n.dot(mesh.face_centroid(f)) > 0.0) {
            star_shaped = false;
            issues.push(ValidationIssue::NotStarShaped { face: f });
        }
    }
    finish(manifold, oriented, euler_ok, star_shaped, issues)
}

fn finish(
    manifold: bool,
    oriented: bool,
    euler_ok: bool,
    star_shaped: bool,
    issues: Vec<ValidationIssue>,
) -> ValidationReport {
    ValidationReport {
        manifold,
        oriented,
        euler_ok,
        star_shaped,
        accepted: issues.is_empty(),
        issues,
    }
}

/// Samples, triangulates and (if `rescale` is given) rescales in one step.
pub fn generate_mesh(
    sampler: &SamplerConfig,
    rescale: Option<&RescaleConfig>,
) -> Result<EmbeddedMesh, MeshgenError> {
    let convex = delaunay_sphere(&sample_sphere(sampler)?)?;
    match rescale {
        Some(cfg) => radial_rescale(&convex, cfg),
        None => Ok(convex),
    }
}
