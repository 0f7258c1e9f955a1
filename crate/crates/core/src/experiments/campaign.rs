use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::{evaluate_mesh, to_csv, ExperimentError};
use crate::geometry::regge_action;
use crate::ising::{self, EvalConfig, Method, Summation};
use crate::meshgen::{
    delaunay_sphere, radial_rescale, sample_sphere, validate_closed, Distribution, RescaleConfig, SamplerConfig,
};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CampaignConfig {
    /// One convex mesh per seed.
    pub seeds: Vec<u64>,
    pub n_vertices: usize,
    /// Rescaled variants generated from each convex mesh.
    pub rescalings_per_mesh: usize,
    pub rescale_range: (f64, f64),
    pub distribution: Distribution,
    pub tolerance: f64,
    /// Primary evaluation method.
    pub method: Method,
    /// Also evaluate with the other method and record the difference.
    pub check_oracle: bool,
    pub summation: Summation,
}

impl CampaignConfig {
    /// Seeds `base, base+1, …` with the default rescale range `[1, 4]`.
    pub fn new(n_vertices: usize, n_seeds: usize, rescalings_per_mesh: usize, base_seed: u64) -> Self {
        Self {
            seeds: (0..n_seeds as u64).map(|i| base_seed + i).collect(),
            n_vertices,
            rescalings_per_mesh,
            rescale_range: (1.0, 4.0),
            distribution: Distribution::Uniform,
            tolerance: ising::ZERO_TOLERANCE,
            method: Method::SpinSum,
            check_oracle: true,
            summation: Summation::Pairwise,
        }
    }

    fn validate(&self) -> Result<(), ExperimentError> {
        if self.seeds.is_empty() || self.n_vertices < 4 || !(self.tolerance > 0.0) {
            return Err(ExperimentError::InvalidConfig(
                "campaign needs seeds, at least 4 vertices and a positive tolerance".into(),
            ));
        }
        RescaleConfig::new(self.rescale_range.0, self.rescale_range.1, 0)?;
        Ok(())
    }
}

/// Everything needed to replay a campaign.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CampaignManifest {
    pub config: CampaignConfig,
    pub generator: String,
    pub meshes: usize,
}

impl CampaignManifest {
    pub fn new(config: &CampaignConfig) -> Self {
        Self {
            config: config.clone(),
            generator: "ChaCha8Rng::seed_from_u64".into(),
            meshes: config.seeds.len() * (1 + config.rescalings_per_mesh),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CampaignRow {
    pub mesh_id: String,
    pub seed: u64,
    /// 0 for the convex mesh, `j ≥ 1` for the `j`-th rescaling.
    pub rescale: usize,
    pub vertices: usize,
    pub faces: usize,
    pub accepted: bool,
    /// All convexity signs are `+1`.
    pub convex: bool,
    pub concave_edges: usize,
    pub regge: f64,
    pub re: f64,
    pub im: f64,
    pub abs: f64,
    pub normalized: f64,
    pub zero: bool,
    /// `|P_method − P_oracle| / S_oracle`.
    pub oracle_diff: Option<f64>,
    pub error: Option<String>,
}

impl CampaignRow {
    fn empty(mesh_id: String, seed: u64, rescale: usize) -> Self {
        Self {
            mesh_id,
            seed,
            rescale,
            vertices: 0,
            faces: 0,
            accepted: false,
            convex: false,
            concave_edges: 0,
            regge: f64::NAN,
            re: f64::NAN,
            im: f64::NAN,
            abs: f64::NAN,
            normalized: f64::NAN,
            zero: false,
            oracle_diff: None,
            error: None,
        }
    }
}

/// Seed of the `rescale`-th rescaling of the mesh sampled from `seed`.
pub fn mesh_seed(seed: u64, rescale: usize) -> u64 {
    seed ^ (rescale as u64 + 1).wrapping_mul(0x9E37_79B9_7F4A_7C15)
}

/// Generates, validates and evaluates every mesh of the campaign.
///
/// Rows come back in (seed, rescale) order. Per-mesh failures are recorded
/// in the row and do not stop the campaign.
pub fn run_zero_campaign(config: &CampaignConfig) -> Result<Vec<CampaignRow>, ExperimentError> {
    config.validate()?;
    let jobs: Vec<(u64, usize)> = config
        .seeds
        .iter()
        .flat_map(|&s| (0..=config.rescalings_per_mesh).map(move |j| (s, j)))
        .collect();
    Ok(jobs.par_iter().map(|&(seed, j)| run_one(config, seed, j)).collect())
}

fn run_one(config: &CampaignConfig, seed: u64, j: usize) -> CampaignRow {
    let id = format!("v{}-s{}-r{}", config.n_vertices, seed, j);
    let mut row = CampaignRow::empty(id, seed, j);
    if let Err(e) = fill(config, seed, j, &mut row) {
        row.error = Some(e.to_string());
    }
    row
}

fn fill(config: &CampaignConfig, seed: u64, j: usize, row: &mut CampaignRow) -> Result<(), ExperimentError> {
    let sampler = SamplerConfig {
        n_points: config.n_vertices,
        distribution: config.distribution,
        seed,
    };
    let convex = delaunay_sphere(&sample_sphere(&sampler)?)?;
    let mesh = if j == 0 {
        convex
    } else {
        let (lo, hi) = config.rescale_range;
        radial_rescale(&convex, &RescaleConfig::new(lo, hi, mesh_seed(seed, j))?)?
    };
    row.vertices = mesh.vertex_count();
    row.faces = mesh.face_count();
    row.accepted = validate_closed(&mesh).accepted;
    if !row.accepted {
        return Ok(());
    }
    let eval_cfg = EvalConfig {
        summation: config.summation,
        ..EvalConfig::default()
    };
    let ev = evaluate_mesh(&mesh, config.method, &eval_cfg)?;
    row.concave_edges = ev.records.iter().filter(|r| r.convexity_sign < 0).count();
    row.convex = row.concave_edges == 0;
    row.regge = regge_action(&mesh)?;
    row.re = ev.report.value.re;
    row.im = ev.report.value.im;
    row.abs = ev.report.abs();
    row.normalized = ev.report.normalized_residual;
    row.zero = ev.report.is_zero(config.tolerance);
    if config.check_oracle {
        let other = match config.method {
            Method::SpinSum => Method::EvenSubgraph,
            Method::EvenSubgraph => Method::SpinSum,
        };
        let oracle = ising::evaluate(&ev.graph, &ev.couplings, other, &eval_cfg)?;
        row.oracle_diff = Some((ev.report.value - oracle.value).norm() / oracle.magnitude_scale);
    }
    Ok(())
}

/// Campaign table as CSV. Contains no timings, so it is reproducible.
pub fn campaign_csv(rows: &[CampaignRow]) -> Result<String, ExperimentError> {
    to_csv(rows)
}
