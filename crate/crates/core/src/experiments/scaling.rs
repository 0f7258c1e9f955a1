use serde::{Deserialize, Serialize};

use super::{evaluate_mesh, median, ExperimentError};
use crate::ising::{EvalConfig, Method};
use crate::meshgen::{delaunay_sphere, sample_sphere, Distribution, SamplerConfig};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ScalingConfig {
    pub vertex_counts: Vec<usize>,
    pub seeds: Vec<u64>,
    /// Timed repetitions per mesh; the minimum is kept.
    pub repetitions: usize,
    pub method: Method,
}

impl ScalingConfig {
    pub fn new(vertex_counts: Vec<usize>, seeds: Vec<u64>) -> Self {
        Self {
            vertex_counts,
            seeds,
            repetitions: 3,
            method: Method::SpinSum,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ScalingRow {
    pub n: usize,
    pub faces: usize,
    /// Spin configurations enumerated per evaluation, `2^faces`.
    pub configurations: f64,
    pub median_residual: f64,
    pub median_seconds: f64,
    pub failures: usize,
}

/// Times convex random meshes at each vertex count. Meshes are evaluated
/// one at a time so the timings are not skewed by sibling jobs.
pub fn run_scaling_study(config: &ScalingConfig) -> Result<Vec<ScalingRow>, ExperimentError> {
    if config.seeds.is_empty() || config.repetitions == 0 || config.vertex_counts.iter().any(|&n| n < 4) {
        return Err(ExperimentError::InvalidConfig(
            "scaling needs seeds, repetitions and vertex counts of at least 4".into(),
        ));
    }
    let cfg = EvalConfig::default();
    let mut rows = Vec::with_capacity(config.vertex_counts.len());
    for &n in &config.vertex_counts {
        let mut residuals = Vec::new();
        let mut seconds = Vec::new();
        let mut failures = 0;
        for &seed in &config.seeds {
            let sampler = SamplerConfig {
                n_points: n,
                distribution: Distribution::Uniform,
                seed,
            };
            let run = || -> Result<(f64, f64), ExperimentError> {
                let mesh = delaunay_sphere(&sample_sphere(&sampler)?)?;
                let mut best = f64::INFINITY;
                let mut residual = 0.0;
                for _ in 0..config.repetitions {
                    let ev = evaluate_mesh(&mesh, config.method, &cfg)?;
                    best = best.min(ev.report.elapsed_seconds);
                    residual = ev.report.normalized_residual;
                }
                Ok((residual, best))
            };
            match run() {
                Ok((r, s)) => {
                    residuals.push(r);
                    seconds.push(s);
                }
                Err(_) => failures += 1,
            }
        }
        let faces = 2 * n - 4;
        rows.push(ScalingRow {
            n,
            faces,
            configurations: 2f64.powi(faces as i32),
            median_residual: median(&residuals),
            median_seconds: median(&seconds),
            failures,
        });
    }
    Ok(rows)
}

/// Least-squares line through `(x, y)` points: `(slope, intercept, r²)`.
pub fn linear_fit(points: &[(f64, f64)]) -> (f64, f64, f64) {
    let n = points.len() as f64;
    if points.len() < 2 {
        return (f64::NAN, f64::NAN, f64::NAN);
    }
    let mx = points.iter().map(|p| p.0).sum::<f64>() / n;
    let my = points.iter().map(|p| p.1).sum::<f64>() / n;
    let sxx: f64 = points.iter().map(|p| (p.0 - mx).powi(2)).sum();
    let sxy: f64 = points.iter().map(|p| (p.0 - mx) * (p.1 - my)).sum();
    let syy: f64 = points.iter().map(|p| (p.1 - my).powi(2)).sum();
    let slope = sxy / sxx;
    let r2 = if syy == 0.0 { 1.0 } else { sxy * sxy / (sxx * syy) };
    (slope, my - slope * mx, r2)
}
