//! Incremental 3d convex hull.
//!
//! Points are inserted in index order. For each point the set of hull faces
//! it sees is collected, the horizon (edges between seen and unseen faces)
//! is extracted, and the seen faces are replaced by a fan from the horizon to
//! the new point. Orientation tests use a scale-relative epsilon; a point
//! lying on a face plane within that epsilon counts as not seeing it, and if
//! the result is not a valid triangulated sphere the whole construction is
//! retried on points jittered by `1e−12` from a fixed seed.

use std::collections::HashMap;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::MeshgenError;
use crate::geometry::{EmbeddedMesh, Vec3};

/// Seed of the tie-breaking jitter; attempt `k` uses `JITTER_SEED + k`.
pub const JITTER_SEED: u64 = 0x5EED_0F_4A11;
const JITTER: f64 = 1e-12;
const ATTEMPTS: u64 = 4;
const EPS: f64 = 1e-12;

fn orient(a: Vec3, b: Vec3, c: Vec3, p: Vec3) -> f64 {
    (b - a).cross(c - a).dot(p - a)
}

/// Convex hull of points in convex position, as an outward-oriented
/// triangle mesh on all input points (vertex `i` is `points[i]`).
pub fn convex_hull(points: &[Vec3]) -> Result<EmbeddedMesh, MeshgenError> {
    if points.len() < 4 {
        return Err(MeshgenError::TooFewPoints(points.len()));
    }
    if points.iter().any(|p| !p.is_finite()) {
        return Err(MeshgenError::DegenerateInput("non-finite point".into()));
    }
    let scale = points.iter().map(|p| p.norm()).fold(0.0, f64::max).max(f64::MIN_POSITIVE);
    let mut last_err = None;
    for attempt in 0..ATTEMPTS {
        let work: Vec<Vec3> = if attempt == 0 {
            points.to_vec()
        } else {
            let mut rng = ChaCha8Rng::seed_from_u64(JITTER_SEED + attempt);
            let mut j = || rng.random_range(-1.0..=1.0) * JITTER * scale;
            points.iter().map(|&p| p + Vec3::new(j(), j(), j())).collect()
        };
        match hull_faces(&work, scale) {
            Ok(faces) => {
                let mesh = EmbeddedMesh::from_raw(points.to_vec(), faces, 0);
                match mesh.check() {
                    Ok(()) => return Ok(mesh),
                    Err(e) => last_err = Some(MeshgenError::Geometry(e)),
                }
            }
            Err(e) => last_err = Some(e),
        }
    }
    Err(last_err.expect("at least one attempt"))
}

fn hull_faces(p: &[Vec3], scale: f64) -> Result<Vec<Vec<usize>>, MeshgenError> {
    let n = p.len();
    let tol = EPS * scale * scale * scale;
    let degenerate = |m: &str| MeshgenError::DegenerateInput(m.to_owned());

    // Initial simplex from extreme points.
    let i0 = 0;
    let i1 = (0..n)
        .max_by(|&a, &b| p[a].distance(p[i0]).total_cmp(&p[b].distance(p[i0])))
        .ok_or_else(|| degenerate("empty"))?;
    if !(p[i1].distance(p[i0]) > EPS * scale) {
        return Err(degenerate("all points coincide"));
    }
    let line = |k: usize| (p[i1] - p[i0]).cross(p[k] - p[i0]).norm();
    let i2 = (0..n).max_by(|&a, &b| line(a).total_cmp(&line(b))).unwrap();
    if !(line(i2) > EPS * scale * scale) {
        return Err(degenerate("all points collinear"));
    }
    let vol = |k: usize| orient(p[i0], p[i1], p[i2], p[k]).abs();
    let i3 = (0..n).max_by(|&a, &b| vol(a).total_cmp(&vol(b))).unwrap();
    if !(vol(i3) > tol) {
        return Err(degenerate("all points coplanar"));
    }

    let mut faces: Vec<[usize; 3]> = Vec::new();
    let mut alive: Vec<bool> = Vec::new();
    // Directed edge (a, b) → face containing it.
    let mut edge_face: HashMap<(usize, usize), usize> = HashMap::new();
    let add = |faces: &mut Vec<[usize; 3]>, alive: &mut Vec<bool>, edge_face: &mut HashMap<(usize, usize), usize>, f: [usize; 3]| {
        let id = faces.len();
        faces.push(f);
        alive.push(true);
        for k in 0..3 {
            edge_face.insert((f[k], f[(k + 1) % 3]), id);
        }
    };
    let (a, mut b, mut c, d) = (i0, i1, i2, i3);
    if orient(p[a], p[b], p[c], p[d]) > 0.0 {
        std::mem::swap(&mut b, &mut c);
    }
    for f in [[a, b, c], [b, a, d], [c, b, d], [a, c, d]] {
        add(&mut faces, &mut alive, &mut edge_face, f);
    }

    let mut on_hull = vec![false; n];
    for i in [a, b, c, d] {
        on_hull[i] = true;
    }
    for q in 0..n {
        if on_hull[q] {
            continue;
        }
        let visible: Vec<usize> = (0..faces.len())
            .filter(|&f| alive[f] && {
                let [x, y, z] = faces[f];
                orient(p[x], p[y], p[z], p[q]) > tol
            })
            .collect();
        if visible.is_empty() {
            return Err(degenerate(&format!("point {q} is not strictly outside the hull")));
        }
        let mut seen = vec![false; faces.len()];
        for &f in &visible {
            seen[f] = true;
        }
        let mut horizon = Vec::new();
        for &f in &visible {
            let t = faces[f];
            for k in 0..3 {
                let (u, v) = (t[k], t[(k + 1) % 3]);
                let twin = *edge_face.get(&(v, u)).ok_or_else(|| degenerate("open hull"))?;
                if !seen[twin] {
                    horizon.push((u, v));
                }
            }
        }
        for &f in &visible {
            alive[f] = false;
            let t = faces[f];
            for k in 0..3 {
                let e = (t[k], t[(k + 1) % 3]);
                if edge_face.get(&e) == Some(&f) {
                    edge_face.remove(&e);
                }
            }
        }
        for (u, v) in horizon {
            add(&mut faces, &mut alive, &mut edge_face, [u, v, q]);
        }
        on_hull[q] = true;
    }
    Ok(faces
        .iter()
        .zip(&alive)
        .filter(|(_, &a)| a)
        .map(|(f, _)| f.to_vec())
        .collect())
}
