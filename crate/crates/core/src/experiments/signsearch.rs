use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::ExperimentError;
use crate::geometry::EmbeddedMesh;
use crate::graph::build_dual;
use crate::ising::{self, couplings_with_signs, EvalConfig};

/// Sign vectors evaluated per sequential block.
const BLOCK: u64 = 256;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SignSearchConfig {
    pub max_edges: usize,
    /// Normalized residual at or below which a configuration is a zero.
    pub tolerance: f64,
    pub keep_table: bool,
}

impl Default for SignSearchConfig {
    fn default() -> Self {
        Self {
            max_edges: 24,
            tolerance: ising::ZERO_TOLERANCE,
            keep_table: false,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SignSearchResult {
    /// Minimizing sign vectors, in increasing order of their bit index.
    pub best_configs: Vec<Vec<i8>>,
    /// Smallest `|P|`.
    pub best_value: f64,
    /// Normalized residual of the best configuration.
    pub best_normalized: f64,
    /// The geometric convexity signs, in link order.
    pub geometric_signs: Vec<i8>,
    /// Minimizers are exactly the geometric signs and their negation.
    pub matches_geometry: bool,
    /// `|P|` for every sign vector, indexed by its bit pattern (bit `ℓ` set
    /// means `s_ℓ = −1`).
    pub full_table: Option<Vec<f64>>,
}

/// Sign vector for a bit pattern.
pub fn signs_of(mask: u64, edges: usize) -> Vec<i8> {
    (0..edges).map(|l| if mask >> l & 1 == 1 { -1 } else { 1 }).collect()
}

fn mask_of(signs: &[i8]) -> u64 {
    signs
        .iter()
        .enumerate()
        .filter(|(_, &s)| s < 0)
        .fold(0, |m, (l, _)| m | 1 << l)
}

/// Evaluates `|P|` for all `2^E` assignments of convexity signs.
///
/// Configurations are visited in Gray-code order inside fixed blocks, so
/// each step flips one sign, which conjugates a single coupling. The
/// minimizers are the configurations that are zeros within the tolerance;
/// if there are none, the configurations attaining the minimum exactly.
pub fn run_sign_search(mesh: &EmbeddedMesh, config: &SignSearchConfig) -> Result<SignSearchResult, ExperimentError> {
    let (graph, records) = build_dual(mesh)?;
    let edges = records.len();
    if edges > config.max_edges || edges > 40 {
        return Err(ExperimentError::SignSpaceTooLarge {
            edges,
            limit: config.max_edges.min(40),
        });
    }
    let base = couplings_with_signs(&records, &vec![1; edges], 1)?;
    let method = ising::cheaper_method(&graph);
    let cfg = EvalConfig::default();
    let total = 1u64 << edges;
    let blocks: Vec<u64> = (0..total.div_ceil(BLOCK)).collect();
    let evaluated: Vec<Vec<(u64, f64, f64)>> = blocks
        .par_iter()
        .map(|&b| {
            let start = b * BLOCK;
            let end = (start + BLOCK).min(total);
            let gray = |i: u64| i ^ (i >> 1);
            let mut y = base.clone();
            let g0 = gray(start);
            for l in 0..edges {
                if g0 >> l & 1 == 1 {
                    y.values[l] = y.values[l].conj();
                }
            }
            let mut out = Vec::with_capacity((end - start) as usize);
            for i in start..end {
                if i > start {
                    let flipped = (gray(i) ^ gray(i - 1)).trailing_zeros() as usize;
                    y.values[flipped] = y.values[flipped].conj();
                }
                let rep = ising::evaluate(&graph, &y, method, &cfg)?;
                out.push((gray(i), rep.abs(), rep.normalized_residual));
            }
            Ok(out)
        })
        .collect::<Result<_, ExperimentError>>()?;
    let mut abs = vec![0.0; total as usize];
    let mut norm = vec![0.0; total as usize];
    for (mask, a, n) in evaluated.into_iter().flatten() {
        abs[mask as usize] = a;
        norm[mask as usize] = n;
    }
    let best_value = abs.iter().copied().fold(f64::INFINITY, f64::min);
    let mut best: Vec<u64> = (0..total).filter(|&m| norm[m as usize] <= config.tolerance).collect();
    if best.is_empty() {
        best = (0..total).filter(|&m| abs[m as usize] == best_value).collect();
    }
    let best_normalized = best.iter().map(|&m| norm[m as usize]).fold(f64::INFINITY, f64::min);
    let geometric_signs: Vec<i8> = records.iter().map(|r| r.convexity_sign).collect();
    let g = mask_of(&geometric_signs);
    let all = total - 1;
    let mut expected = vec![g, g ^ all];
    expected.sort_unstable();
    expected.dedup();
    Ok(SignSearchResult {
        matches_geometry: best == expected,
        best_configs: best.iter().map(|&m| signs_of(m, edges)).collect(),
        best_value,
        best_normalized,
        geometric_signs,
        full_table: config.keep_table.then_some(abs),
    })
}
