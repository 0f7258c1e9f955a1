//! Enumeration over spin configurations.
//!
//! Nodes are visited in index order and the configurations form a binary
//! tree: level `k` fixes `σ_k`. Each level multiplies in the weights of the
//! links joining node `k` to earlier nodes, so a leaf costs one complex
//! product per link on average. The two subtrees of every node are summed
//! pairwise; subtrees near the root run through `rayon::join`, which leaves
//! the summation tree (and hence the rounding) unchanged.
//!
//! The weight of a configuration depends only on the products `σ_a σ_b`, so
//! `σ_0` is fixed to `+1` and the total doubled.

use std::time::Instant;

use num_complex::Complex64;

use super::{check_len, Acc, CouplingVector, EvalConfig, EvaluationReport, IsingError, Method, Summation};
use crate::graph::IsingGraph;

/// Levels near the root that may fork into parallel tasks.
const PAR_DEPTH: usize = 12;
/// Subtrees with fewer remaining levels run sequentially.
const PAR_MIN_REMAINING: usize = 14;

struct Plan<'a> {
    n: usize,
    /// `(earlier node, link)` pairs attached to each node.
    back: Vec<Vec<(u32, usize)>>,
    same: &'a [Complex64],
    diff: &'a [Complex64],
    same_abs: Vec<f64>,
    diff_abs: Vec<f64>,
}

impl<'a> Plan<'a> {
    fn new(graph: &IsingGraph, same: &'a [Complex64], diff: &'a [Complex64]) -> (Self, Complex64, f64) {
        let n = graph.node_count();
        let mut back = vec![Vec::new(); n];
        let mut constant = Complex64::new(1.0, 0.0);
        let mut constant_abs = 1.0;
        for (i, l) in graph.links().iter().enumerate() {
            if l.a == l.b {
                constant *= same[i];
                constant_abs *= same[i].norm();
            } else {
                let (lo, hi) = (l.a.min(l.b), l.a.max(l.b));
                back[hi].push((lo as u32, i));
            }
        }
        let plan = Plan {
            n,
            back,
            same,
            diff,
            same_abs: same.iter().map(|w| w.norm()).collect(),
            diff_abs: diff.iter().map(|w| w.norm()).collect(),
        };
        (plan, constant, constant_abs)
    }

    /// Weights `(σ_k = +1, σ_k = −1)` of the back links of node `k`.
    #[inline(always)]
    fn factors(&self, k: usize, spins: u32) -> (Complex64, f64, Complex64, f64) {
        let mut fp = Complex64::new(1.0, 0.0);
        let mut fm = Complex64::new(1.0, 0.0);
        let mut ap = 1.0;
        let mut am = 1.0;
        for &(j, l) in &self.back[k] {
            if spins >> j & 1 == 0 {
                fp *= self.same[l];
                ap *= self.same_abs[l];
                fm *= self.diff[l];
                am *= self.diff_abs[l];
            } else {
                fp *= self.diff[l];
                ap *= self.diff_abs[l];
                fm *= self.same[l];
                am *= self.same_abs[l];
            }
        }
        (fp, ap, fm, am)
    }

    fn rec<const COMP: bool>(&self, k: usize, spins: u32, p: Complex64, m: f64) -> Acc {
        let (fp, ap, fm, am) = self.factors(k, spins);
        if k + 1 == self.n {
            return Acc::combine::<COMP>(Acc::leaf(p * fp, m * ap), Acc::leaf(p * fm, m * am));
        }
        let down = spins | 1 << k;
        if k < PAR_DEPTH && self.n - k >= PAR_MIN_REMAINING {
            let (a, b) = rayon::join(
                || self.rec::<COMP>(k + 1, spins, p * fp, m * ap),
                || self.rec::<COMP>(k + 1, down, p * fm, m * am),
            );
            Acc::combine::<COMP>(a, b)
        } else {
            let a = self.rec::<COMP>(k + 1, spins, p * fp, m * ap);
            let b = self.rec::<COMP>(k + 1, down, p * fm, m * am);
            Acc::combine::<COMP>(a, b)
        }
    }
}

/// `Σ_σ Π_ℓ w_ℓ(σ_a σ_b)` with `w = same` when the endpoint spins agree.
/// Returns the sum and the sum of term magnitudes.
pub(crate) fn spin_sum(
    graph: &IsingGraph,
    same: &[Complex64],
    diff: &[Complex64],
    config: &EvalConfig,
) -> Result<(Complex64, f64), IsingError> {
    let n = graph.node_count();
    if n > config.max_nodes || n > 32 {
        return Err(IsingError::TooManyNodes {
            nodes: n,
            limit: config.max_nodes.min(32),
        });
    }
    let (plan, constant, constant_abs) = Plan::new(graph, same, diff);
    let acc = if n == 1 {
        Acc::leaf(constant, constant_abs)
    } else {
        match config.summation {
            Summation::Pairwise => plan.rec::<false>(1, 0, constant, constant_abs),
            Summation::Compensated => plan.rec::<true>(1, 0, constant, constant_abs),
        }
    };
    Ok((2.0 * acc.total(), 2.0 * acc.m))
}

/// `P_Γ = 2^{−N} Σ_σ Π_ℓ (1 + σ_a σ_b Y_ℓ)`.
pub fn loop_polynomial_spin_sum(
    graph: &IsingGraph,
    y: &CouplingVector,
    config: &EvalConfig,
) -> Result<EvaluationReport, IsingError> {
    check_len(graph, y)?;
    let started = Instant::now();
    let one = Complex64::new(1.0, 0.0);
    let same: Vec<Complex64> = y.values.iter().map(|&v| one + v).collect();
    let diff: Vec<Complex64> = y.values.iter().map(|&v| one - v).collect();
    let (sum, mag) = spin_sum(graph, &same, &diff, config)?;
    let norm = (-(graph.node_count() as f64)).exp2();
    Ok(EvaluationReport::new(sum * norm, mag * norm, Method::SpinSum, started))
}

/// `Z_Γ = Σ_σ Π_ℓ e^{y_ℓ σ_a σ_b}` for raw couplings `y_ℓ`.
pub fn partition_function(
    graph: &IsingGraph,
    raw: &[Complex64],
    config: &EvalConfig,
) -> Result<Complex64, IsingError> {
    if raw.len() != graph.link_count() {
        return Err(IsingError::LengthMismatch {
            expected: graph.link_count(),
            found: raw.len(),
        });
    }
    let same: Vec<Complex64> = raw.iter().map(|y| y.exp()).collect();
    let diff: Vec<Complex64> = raw.iter().map(|y| (-y).exp()).collect();
    Ok(spin_sum(graph, &same, &diff, config)?.0)
}
