//! Experiment drivers: random-mesh zero campaigns, perturbation scans,
//! exhaustive dihedral-sign search, torus sweeps and scaling studies.
//!
//! Every driver is a deterministic function of its configuration. Tables are
//! emitted as CSV with round-trip float formatting, so re-running a manifest
//! reproduces the file byte for byte.

mod campaign;
mod perturb;
mod scaling;
mod signsearch;
mod torus;

use serde::Serialize;
use thiserror::Error;

use crate::canonical::CanonicalError;
use crate::geometry::{EdgeRecord, EmbeddedMesh, GeometryError};
use crate::graph::{build_dual, GraphError, IsingGraph};
use crate::ising::{self, CouplingVector, EvalConfig, EvaluationReport, IsingError, Method};
use crate::meshgen::MeshgenError;

pub use campaign::{campaign_csv, mesh_seed, run_zero_campaign, CampaignConfig, CampaignManifest, CampaignRow};
pub use perturb::{loglog_slope, run_perturbation_scan, PerturbationConfig, ScanRow};
pub use scaling::{linear_fit, run_scaling_study, ScalingConfig, ScalingRow};
pub use signsearch::{run_sign_search, signs_of, SignSearchConfig, SignSearchResult};
pub use torus::{
    run_torus_sweep, torus_value, TorusParameter, TorusRow, TORUS_ASYMPTOTICS, TORUS_REFERENCE_POINT,
    TORUS_REFERENCE_VALUE,
};

#[derive(Debug, Error)]
pub enum ExperimentError {
    #[error("mesh has {edges} edges; the sign-search limit is {limit}")]
    SignSpaceTooLarge { edges: usize, limit: usize },
    #[error("invalid configuration: {0}")]
    InvalidConfig(String),
    #[error(transparent)]
    Geometry(#[from] GeometryError),
    #[error(transparent)]
    Graph(#[from] GraphError),
    #[error(transparent)]
    Ising(#[from] IsingError),
    #[error(transparent)]
    Meshgen(#[from] MeshgenError),
    #[error(transparent)]
    Canonical(#[from] CanonicalError),
    #[error("csv output: {0}")]
    Csv(#[from] csv::Error),
}

/// A mesh with its dual graph, edge records, geometric couplings and one
/// evaluation.
#[derive(Debug, Clone)]
pub struct MeshEvaluation {
    pub graph: IsingGraph,
    pub records: Vec<EdgeRecord>,
    pub couplings: CouplingVector,
    pub report: EvaluationReport,
}

pub fn evaluate_mesh(mesh: &EmbeddedMesh, method: Method, config: &EvalConfig) -> Result<MeshEvaluation, ExperimentError> {
    let (graph, records) = build_dual(mesh)?;
    let couplings = ising::geometric_couplings(&graph, &records, 1)?;
    let report = ising::evaluate(&graph, &couplings, method, config)?;
    Ok(MeshEvaluation {
        graph,
        records,
        couplings,
        report,
    })
}

/// One row of the batch table written by `verify`.
#[derive(Debug, Clone, Serialize)]
pub struct BatchRow {
    pub mesh_id: String,
    pub vertices: usize,
    pub faces: usize,
    pub method: Method,
    pub re: f64,
    pub im: f64,
    pub abs: f64,
    pub normalized: f64,
    pub seconds: f64,
}

impl BatchRow {
    pub fn new(mesh_id: &str, mesh: &EmbeddedMesh, report: &EvaluationReport) -> Self {
        Self {
            mesh_id: mesh_id.to_owned(),
            vertices: mesh.vertex_count(),
            faces: mesh.face_count(),
            method: report.method,
            re: report.value.re,
            im: report.value.im,
            abs: report.abs(),
            normalized: report.normalized_residual,
            seconds: report.elapsed_seconds,
        }
    }
}

/// Serializes rows to CSV with a header line.
pub fn to_csv<T: Serialize>(rows: &[T]) -> Result<String, ExperimentError> {
    let mut w = csv::Writer::from_writer(Vec::new());
    for r in rows {
        w.serialize(r)?;
    }
    let bytes = w.into_inner().map_err(|e| ExperimentError::InvalidConfig(e.to_string()))?;
    Ok(String::from_utf8(bytes).expect("csv output is utf-8"))
}

/// Median of a non-empty slice (mean of the two middle values when even).
pub fn median(values: &[f64]) -> f64 {
    let mut v = values.to_vec();
    v.sort_by(f64::total_cmp);
    let n = v.len();
    if n == 0 {
        return f64::NAN;
    }
    if n % 2 == 1 {
        v[n / 2]
    } else {
        0.5 * (v[n / 2 - 1] + v[n / 2])
    }
}
