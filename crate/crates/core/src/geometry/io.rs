//! Mesh files: the canonical JSON document and OFF import.

use std::fs;
use std::path::Path;

use thiserror::Error;

use super::{EmbeddedMesh, GeometryError, Vec3};

#[derive(Debug, Error)]
pub enum MeshFileError {
    #[error("i/o error: {0}")]
    Io(#[from] std::io::Error),
    #[error("malformed mesh document: {0}")]
    Json(#[from] serde_json::Error),
    #[error("malformed OFF data at line {line}: {reason}")]
    Off { line: usize, reason: String },
    #[error(transparent)]
    Geometry(#[from] GeometryError),
}

impl EmbeddedMesh {
    /// Parses the canonical document `{"vertices": [[x,y,z],…], "faces":
    /// [[i,j,k,…],…], "genus": g}` and validates it.
    pub fn from_json(text: &str) -> Result<Self, MeshFileError> {
        let mesh: EmbeddedMesh = serde_json::from_str(text)?;
        mesh.check()?;
        Ok(mesh)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("mesh serialization cannot fail")
    }

    /// Parses an OFF mesh and repairs face orientation on load.
    ///
    /// OFF carries no topology hint, so the genus is supplied by the caller
    /// and checked against the Euler characteristic.
    pub fn from_off(text: &str, genus_hint: u32) -> Result<Self, MeshFileError> {
        let mut lines = text
            .lines()
            .enumerate()
            .map(|(i, l)| (i + 1, l.split('#').next().unwrap_or("").trim()))
            .filter(|(_, l)| !l.is_empty());
        let err = |line: usize, reason: &str| MeshFileError::Off {
            line,
            reason: reason.to_owned(),
        };
        let (hl, header) = lines.next().ok_or_else(|| err(0, "empty input"))?;
        // Counts may share the header line ("OFF 8 6 12").
        let mut rest: Vec<&str> = header.split_whitespace().collect();
        if rest.first() != Some(&"OFF") {
            return Err(err(hl, "missing OFF header"));
        }
        rest.remove(0);
        let (cl, counts) = if rest.is_empty() {
            let (l, c) = lines.next().ok_or_else(|| err(hl, "missing counts"))?;
            (l, c.split_whitespace().collect::<Vec<_>>())
        } else {
            (hl, rest)
        };
        let parse_usize = |s: &str, line| s.parse::<usize>().map_err(|_| err(line, "bad integer"));
        if counts.len() < 2 {
            return Err(err(cl, "expected vertex and face counts"));
        }
        let nv = parse_usize(counts[0], cl)?;
        let nf = parse_usize(counts[1], cl)?;
        let mut vertices = Vec::with_capacity(nv);
        for _ in 0..nv {
            let (l, text) = lines.next().ok_or_else(|| err(cl, "truncated vertex list"))?;
            let coords: Vec<f64> = text
                .split_whitespace()
                .take(3)
                .map(|s| s.parse::<f64>().map_err(|_| err(l, "bad coordinate")))
                .collect::<Result<_, _>>()?;
            if coords.len() != 3 {
                return Err(err(l, "vertex needs three coordinates"));
            }
            vertices.push(Vec3::new(coords[0], coords[1], coords[2]));
        }
        let mut faces = Vec::with_capacity(nf);
        for _ in 0..nf {
            let (l, text) = lines.next().ok_or_else(|| err(cl, "truncated face list"))?;
            let nums: Vec<usize> = text
                .split_whitespace()
                .map(|s| parse_usize(s, l))
                .collect::<Result<_, _>>()?;
            let k = *nums.first().ok_or_else(|| err(l, "empty face"))?;
            if nums.len() < k + 1 {
                return Err(err(l, "face shorter than its declared size"));
            }
            faces.push(nums[1..=k].to_vec());
        }
        let raw = EmbeddedMesh::from_raw(vertices, faces, genus_hint);
        let mesh = raw.repair_orientation()?;
        mesh.check()?;
        Ok(mesh)
    }
}

/// Reads a mesh, choosing the parser from the extension (`.off` or JSON).
pub fn read_mesh_file(path: &Path) -> Result<EmbeddedMesh, MeshFileError> {
    let text = fs::read_to_string(path)?;
    let is_off = path
        .extension()
        .and_then(|e| e.to_str())
        .is_some_and(|e| e.eq_ignore_ascii_case("off"));
    if is_off {
        EmbeddedMesh::from_off(&text, 0)
    } else {
        EmbeddedMesh::from_json(&text)
    }
}

pub fn write_mesh_file(path: &Path, mesh: &EmbeddedMesh) -> Result<(), MeshFileError> {
    fs::write(path, mesh.to_json())?;
    Ok(())
}
