use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use super::ExperimentError;
use crate::geometry::EmbeddedMesh;
use crate::graph::build_dual;
use crate::ising::{self, perturb_couplings, EvalConfig};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PerturbationConfig {
    /// Positive and ascending.
    pub amplitudes: Vec<f64>,
    /// Draws averaged per amplitude.
    pub draws: usize,
    pub seed: u64,
}

impl PerturbationConfig {
    /// `10^{−6}, 10^{−5.5}, …, 10^{−1}`.
    pub fn decades(draws: usize, seed: u64) -> Self {
        Self {
            amplitudes: (0..=10).map(|k| 10f64.powf(-6.0 + 0.5 * k as f64)).collect(),
            draws,
            seed,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ScanRow {
    pub amplitude: f64,
    /// Mean of `|P|` over the draws.
    pub mean_abs: f64,
    pub max_abs: f64,
}

/// `|P|` at the geometric couplings plus real uniform noise of each
/// amplitude. Draw `k` uses the same seed at every amplitude, so the noise
/// direction is shared and only its size changes along the scan.
pub fn run_perturbation_scan(mesh: &EmbeddedMesh, config: &PerturbationConfig) -> Result<Vec<ScanRow>, ExperimentError> {
    if config.draws == 0
        || config.amplitudes.iter().any(|&a| !(a >= 0.0))
        || config.amplitudes.windows(2).any(|w| w[0] > w[1])
    {
        return Err(ExperimentError::InvalidConfig(
            "amplitudes must be non-negative and ascending, with at least one draw".into(),
        ));
    }
    let (graph, records) = build_dual(mesh)?;
    let couplings = ising::geometric_couplings(&graph, &records, 1)?;
    let method = ising::cheaper_method(&graph);
    let cfg = EvalConfig::default();
    let mut rows = Vec::with_capacity(config.amplitudes.len());
    for &a in &config.amplitudes {
        let mut sum = 0.0;
        let mut max: f64 = 0.0;
        for k in 0..config.draws {
            let mut rng = ChaCha8Rng::seed_from_u64(config.seed.wrapping_add(k as u64));
            let y = perturb_couplings(&couplings, a, &mut rng);
            let v = ising::evaluate(&graph, &y, method, &cfg)?.abs();
            sum += v;
            max = max.max(v);
        }
        rows.push(ScanRow {
            amplitude: a,
            mean_abs: sum / config.draws as f64,
            max_abs: max,
        });
    }
    Ok(rows)
}

/// Least-squares slope of `log |P|` against `log a` over rows with `a > 0`.
pub fn loglog_slope(rows: &[ScanRow]) -> f64 {
    let pts: Vec<(f64, f64)> = rows
        .iter()
        .filter(|r| r.amplitude > 0.0 && r.mean_abs > 0.0)
        .map(|r| (r.amplitude.ln(), r.mean_abs.ln()))
        .collect();
    super::linear_fit(&pts).0
}
