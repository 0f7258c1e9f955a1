//! Enumeration over the binary cycle space.
//!
//! Every even subgraph is a unique XOR combination of the fundamental
//! cycles, so the `2^d` subsets of the basis list each even subgraph exactly
//! once. The subsets form a binary tree (level `k` decides basis cycle `k`)
//! summed pairwise, as in the spin sum.

use std::time::Instant;

use num_complex::Complex64;

use super::{check_len, Acc, CouplingVector, EvalConfig, EvaluationReport, IsingError, Method, Summation};
use crate::graph::IsingGraph;

const PAR_DEPTH: usize = 12;
const PAR_MIN_REMAINING: usize = 14;

struct Plan<'a> {
    basis: Vec<u128>,
    y: &'a [Complex64],
    y_abs: Vec<f64>,
}

impl Plan<'_> {
    #[inline(always)]
    fn leaf(&self, mut mask: u128) -> Acc {
        let mut p = Complex64::new(1.0, 0.0);
        let mut m = 1.0;
        while mask != 0 {
            let i = mask.trailing_zeros() as usize;
            p *= self.y[i];
            m *= self.y_abs[i];
            mask &= mask - 1;
        }
        Acc::leaf(p, m)
    }

    fn rec<const COMP: bool>(&self, k: usize, mask: u128) -> Acc {
        let d = self.basis.len();
        if k == d {
            return self.leaf(mask);
        }
        let other = mask ^ self.basis[k];
        if k < PAR_DEPTH && d - k >= PAR_MIN_REMAINING {
            let (a, b) = rayon::join(|| self.rec::<COMP>(k + 1, mask), || self.rec::<COMP>(k + 1, other));
            Acc::combine::<COMP>(a, b)
        } else {
            let a = self.rec::<COMP>(k + 1, mask);
            let b = self.rec::<COMP>(k + 1, other);
            Acc::combine::<COMP>(a, b)
        }
    }
}

/// `P_Γ = Σ_{G even} Π_{ℓ ∈ G} Y_ℓ`.
pub fn loop_polynomial_even_subgraphs(
    graph: &IsingGraph,
    y: &CouplingVector,
    config: &EvalConfig,
) -> Result<EvaluationReport, IsingError> {
    check_len(graph, y)?;
    let dim = graph.cycle_space_dimension();
    if dim > config.max_cycle_dimension || dim > 63 {
        return Err(IsingError::CycleSpaceTooLarge {
            dim,
            limit: config.max_cycle_dimension.min(63),
        });
    }
    let started = Instant::now();
    let plan = Plan {
        basis: graph.cycle_masks()?,
        y: &y.values,
        y_abs: y.values.iter().map(|v| v.norm()).collect(),
    };
    let acc = match config.summation {
        Summation::Pairwise => plan.rec::<false>(0, 0),
        Summation::Compensated => plan.rec::<true>(0, 0),
    };
    Ok(EvaluationReport::new(acc.total(), acc.m, Method::EvenSubgraph, started))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn theta_graph_polynomial() {
        let g = IsingGraph::new(2, vec![(0, 1), (0, 1), (0, 1)]).unwrap();
        let y = [Complex64::new(0.3, 0.2), Complex64::new(-0.5, 0.1), Complex64::new(0.7, -0.6)];
        let expected = Complex64::new(1.0, 0.0) + y[0] * y[1] + y[1] * y[2] + y[2] * y[0];
        let rep = loop_polynomial_even_subgraphs(&g, &CouplingVector::new(y.to_vec()), &EvalConfig::default()).unwrap();
        assert!((rep.value - expected).norm() < 1e-15);
        let scale = 1.0 + (y[0] * y[1]).norm() + (y[1] * y[2]).norm() + (y[2] * y[0]).norm();
        assert!((rep.magnitude_scale - scale).abs() < 1e-15);
    }

    #[test]
    fn tree_has_only_the_empty_subgraph() {
        let g = IsingGraph::new(3, vec![(0, 1), (1, 2)]).unwrap();
        let y = CouplingVector::uniform(Complex64::new(0.9, 0.4), 2);
        let rep = loop_polynomial_even_subgraphs(&g, &y, &EvalConfig::default()).unwrap();
        assert_eq!(rep.value, Complex64::new(1.0, 0.0));
        assert_eq!(rep.magnitude_scale, 1.0);
    }

    #[test]
    fn cycle_dimension_limit_is_enforced() {
        let g = IsingGraph::new(1, vec![(0, 0); 5]).unwrap();
        let cfg = EvalConfig {
            max_cycle_dimension: 4,
            ..EvalConfig::default()
        };
        let y = CouplingVector::uniform(Complex64::new(0.1, 0.0), 5);
        assert_eq!(
            loop_polynomial_even_subgraphs(&g, &y, &cfg).unwrap_err(),
            IsingError::CycleSpaceTooLarge { dim: 5, limit: 4 }
        );
    }
}
