//! Geometric zeros of the inhomogeneous 2d Ising model.
//!
//! A closed polyhedral surface in flat 3d space defines, on its dual graph,
//! complex Ising couplings built from its dihedral and triangle angles.
//! This crate constructs such surfaces (canonical shapes and random
//! spherical triangulations), derives the couplings, and evaluates the loop
//! polynomial exactly to check whether they are zeros of the partition
//! function.
//!
//! Modules, bottom-up:
//! - [`geometry`]: meshes, angles, signed dihedral angles, Regge action.
//! - [`graph`]: the dual Ising graph and its cycle space.
//! - [`ising`]: couplings, the two exact evaluators, duality map.
//! - [`meshgen`]: random sphere triangulations and radial rescaling.
//! - [`canonical`]: closed-form shapes, couplings and polynomials.
//! - [`experiments`]: campaigns, scans, sign search, torus sweeps.

pub mod canonical;
pub mod experiments;
pub mod geometry;
pub mod graph;
pub mod ising;
pub mod meshgen;

pub use geometry::{EdgeRecord, EmbeddedMesh, GeometryError, Vec3};
pub use graph::{build_dual, GraphError, IsingGraph};
pub use ising::{CouplingVector, EvalConfig, EvaluationReport, IsingError, Method};
pub use num_complex::Complex64;

use thiserror::Error;

/// Any error raised by the crate.
#[derive(Debug, Error)]
pub enum Error {
    #[error(transparent)]
    Geometry(#[from] GeometryError),
    #[error(transparent)]
    MeshFile(#[from] geometry::MeshFileError),
    #[error(transparent)]
    Graph(#[from] GraphError),
    #[error(transparent)]
    Ising(#[from] IsingError),
    #[error(transparent)]
    Meshgen(#[from] meshgen::MeshgenError),
    #[error(transparent)]
    Canonical(#[from] canonical::CanonicalError),
    #[error(transparent)]
    Experiment(#[from] experiments::ExperimentError),
}

/// Dual graph plus geometric couplings of a mesh, with global sign `+1`.
pub fn mesh_couplings(mesh: &EmbeddedMesh) -> Result<(IsingGraph, Vec<EdgeRecord>, CouplingVector), Error> {
    let (graph, records) = build_dual(mesh)?;
    let y = ising::geometric_couplings(&graph, &records, 1)?;
    Ok((graph, records, y))
}
