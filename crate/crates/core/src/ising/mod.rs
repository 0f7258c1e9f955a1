//! Ising couplings from geometry and exact evaluation of the loop polynomial.
//!
//! Two independent evaluators are provided. [`loop_polynomial_spin_sum`]
//! enumerates spin configurations; [`loop_polynomial_even_subgraphs`]
//! enumerates the binary cycle space. Both sum over a fixed binary tree, so
//! the result does not depend on how many worker threads run it.

mod even;
mod spin_sum;

use std::time::Instant;

use num_complex::Complex64;
use rand::Rng;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::geometry::EdgeRecord;
use crate::graph::{GraphError, IsingGraph};

pub use even::loop_polynomial_even_subgraphs;
pub use spin_sum::{loop_polynomial_spin_sum, partition_function};

/// Normalized residual at or below which a value is declared a zero.
pub const ZERO_TOLERANCE: f64 = 1e-9;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum IsingError {
    #[error("graph has {nodes} nodes; the spin-sum limit is {limit}")]
    TooManyNodes { nodes: usize, limit: usize },
    #[error("cycle space has dimension {dim}; the even-subgraph limit is {limit}")]
    CycleSpaceTooLarge { dim: usize, limit: usize },
    #[error("opposite angle {angle} on link {link} is outside (0, π)")]
    AngleOutOfRange { link: usize, angle: f64 },
    #[error("expected {expected} couplings, found {found}")]
    LengthMismatch { expected: usize, found: usize },
    #[error("duality map has a pole at Y = −1")]
    PoleAtMinusOne,
    #[error("coupling on link {0} is ±1 and has no finite raw value")]
    SingularCoupling(usize),
    #[error("global sign must be +1 or −1, got {0}")]
    InvalidSign(i8),
    #[error(transparent)]
    Graph(#[from] GraphError),
}

/// Complex coupling `Y_ℓ = tanh y_ℓ` per link.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CouplingVector {
    pub values: Vec<Complex64>,
}

impl CouplingVector {
    pub fn new(values: Vec<Complex64>) -> Self {
        Self { values }
    }

    pub fn uniform(value: Complex64, links: usize) -> Self {
        Self {
            values: vec![value; links],
        }
    }

    /// `Y_ℓ = tanh y_ℓ`.
    pub fn from_raw(raw: &[Complex64]) -> Self {
        Self {
            values: raw.iter().map(|y| y.tanh()).collect(),
        }
    }

    /// `y_ℓ = atanh Y_ℓ`.
    pub fn raw(&self) -> Result<Vec<Complex64>, IsingError> {
        self.values
            .iter()
            .enumerate()
            .map(|(i, &v)| {
                if v == Complex64::new(1.0, 0.0) || v == Complex64::new(-1.0, 0.0) {
                    Err(IsingError::SingularCoupling(i))
                } else {
                    Ok(v.atanh())
                }
            })
            .collect()
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn is_finite(&self) -> bool {
        self.values.iter().all(|v| v.is_finite())
    }

    pub fn conj(&self) -> Self {
        Self {
            values: self.values.iter().map(|v| v.conj()).collect(),
        }
    }

    /// Componentwise duality map.
    pub fn dual(&self) -> Result<Self, IsingError> {
        Ok(Self {
            values: self
                .values
                .iter()
                .map(|&v| duality_map(v))
                .collect::<Result<_, _>>()?,
        })
    }
}

impl std::ops::Index<usize> for CouplingVector {
    type Output = Complex64;
    fn index(&self, i: usize) -> &Complex64 {
        &self.values[i]
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Method {
    SpinSum,
    EvenSubgraph,
}

impl Method {
    pub fn name(self) -> &'static str {
        match self {
            Method::SpinSum => "spin_sum",
            Method::EvenSubgraph => "even_subgraph",
        }
    }
}

impl std::fmt::Display for Method {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.name())
    }
}

impl std::str::FromStr for Method {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, String> {
        match s {
            "spin_sum" | "spin-sum" | "spin" => Ok(Method::SpinSum),
            "even_subgraph" | "even-subgraph" | "even" => Ok(Method::EvenSubgraph),
            _ => Err(format!("unknown method `{s}`")),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Summation {
    /// Plain pairwise summation over the enumeration tree.
    #[default]
    Pairwise,
    /// Pairwise with error-free transformations carried up the tree.
    Compensated,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EvalConfig {
    pub max_nodes: usize,
    pub max_cycle_dimension: usize,
    pub summation: Summation,
}

impl Default for EvalConfig {
    fn default() -> Self {
        Self {
            max_nodes: 32,
            max_cycle_dimension: 24,
            summation: Summation::Pairwise,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EvaluationReport {
    pub value: Complex64,
    /// Scale `S` of the terms that were summed: `Σ |Π Y|` over even subgraphs,
    /// or `2^{−N} Σ |Π (1 ± Y)|` over spin configurations.
    pub magnitude_scale: f64,
    /// `|P| / S`.
    pub normalized_residual: f64,
    pub method: Method,
    pub elapsed_seconds: f64,
}

impl EvaluationReport {
    pub(crate) fn new(value: Complex64, scale: f64, method: Method, started: Instant) -> Self {
        Self {
            value,
            magnitude_scale: scale,
            normalized_residual: value.norm() / scale,
            method,
            elapsed_seconds: started.elapsed().as_secs_f64(),
        }
    }

    pub fn abs(&self) -> f64 {
        self.value.norm()
    }

    pub fn is_zero(&self, tolerance: f64) -> bool {
        self.normalized_residual <= tolerance
    }
}

fn check_len(graph: &IsingGraph, y: &CouplingVector) -> Result<(), IsingError> {
    if y.len() != graph.link_count() {
        return Err(IsingError::LengthMismatch {
            expected: graph.link_count(),
            found: y.len(),
        });
    }
    Ok(())
}

/// Evaluates with the chosen method.
pub fn evaluate(
    graph: &IsingGraph,
    y: &CouplingVector,
    method: Method,
    config: &EvalConfig,
) -> Result<EvaluationReport, IsingError> {
    match method {
        Method::SpinSum => loop_polynomial_spin_sum(graph, y, config),
        Method::EvenSubgraph => loop_polynomial_even_subgraphs(graph, y, config),
    }
}

/// The method with fewer enumerated terms: `2^{N−1}` spin configurations
/// versus `2^{L−N+1}` cycle-space elements.
pub fn cheaper_method(graph: &IsingGraph) -> Method {
    if graph.cycle_space_dimension() <= graph.node_count().saturating_sub(1) {
        Method::EvenSubgraph
    } else {
        Method::SpinSum
    }
}

/// Geometric couplings `Y_ℓ = e^{i g s_ℓ θ_ℓ/2} √(tan(φ_s/2) tan(φ_t/2))`.
///
/// `records[ℓ]` describes the mesh edge dual to link `ℓ`. For polygonal
/// faces the stored opposite angle is already the inscribed angle `ψ/2`, so
/// the same expression gives the `tan(ψ/4)` form.
pub fn geometric_couplings(
    graph: &IsingGraph,
    records: &[EdgeRecord],
    global_sign: i8,
) -> Result<CouplingVector, IsingError> {
    if global_sign != 1 && global_sign != -1 {
        return Err(IsingError::InvalidSign(global_sign));
    }
    if records.len() != graph.link_count() {
        return Err(IsingError::LengthMismatch {
            expected: graph.link_count(),
            found: records.len(),
        });
    }
    let signs: Vec<i8> = records.iter().map(|r| r.convexity_sign).collect();
    couplings_with_signs(records, &signs, global_sign)
}

/// Geometric couplings with the convexity signs replaced by `signs`.
pub fn couplings_with_signs(
    records: &[EdgeRecord],
    signs: &[i8],
    global_sign: i8,
) -> Result<CouplingVector, IsingError> {
    let mut values = Vec::with_capacity(records.len());
    for (i, r) in records.iter().enumerate() {
        for angle in [r.opposite_angles.0, r.opposite_angles.1] {
            if !(angle > 0.0 && angle < std::f64::consts::PI) {
                return Err(IsingError::AngleOutOfRange { link: i, angle });
            }
        }
        let modulus = (r.opposite_half_tangents.0 * r.opposite_half_tangents.1).sqrt();
        let phase = f64::from(global_sign) * f64::from(signs[i]) * r.dihedral_angle / 2.0;
        values.push(Complex64::from_polar(modulus, phase));
    }
    Ok(CouplingVector { values })
}

/// Kramers–Wannier map `D[Y] = (1 − Y)/(1 + Y)`.
pub fn duality_map(y: Complex64) -> Result<Complex64, IsingError> {
    let den = Complex64::new(1.0, 0.0) + y;
    if den.norm() == 0.0 {
        return Err(IsingError::PoleAtMinusOne);
    }
    Ok((Complex64::new(1.0, 0.0) - y) / den)
}

/// Adds an independent real `p_ℓ ~ U[−a, a]` to every coupling.
pub fn perturb_couplings<R: Rng + ?Sized>(
    y: &CouplingVector,
    amplitude: f64,
    rng: &mut R,
) -> CouplingVector {
    assert!(amplitude >= 0.0, "perturbation amplitude must be non-negative");
    CouplingVector {
        values: y
            .values
            .iter()
            .map(|&v| v + rng.random_range(-amplitude..=amplitude))
            .collect(),
    }
}

/// Pairwise accumulator. In compensated mode `c` collects the rounding
/// error of every addition (Knuth's two-sum).
#[derive(Clone, Copy)]
pub(crate) struct Acc {
    pub s: Complex64,
    pub c: Complex64,
    pub m: f64,
}

impl Acc {
    #[inline(always)]
    pub fn leaf(s: Complex64, m: f64) -> Self {
        Acc {
            s,
            c: Complex64::new(0.0, 0.0),
            m,
        }
    }

    #[inline(always)]
    pub fn combine<const COMP: bool>(a: Acc, b: Acc) -> Acc {
        if COMP {
            let (re, ere) = two_sum(a.s.re, b.s.re);
            let (im, eim) = two_sum(a.s.im, b.s.im);
            Acc {
                s: Complex64::new(re, im),
                c: a.c + b.c + Complex64::new(ere, eim),
                m: a.m + b.m,
            }
        } else {
            Acc {
                s: a.s + b.s,
                c: a.c,
                m: a.m + b.m,
            }
        }
    }

    pub fn total(self) -> Complex64 {
        self.s + self.c
    }
}

#[inline(always)]
fn two_sum(a: f64, b: f64) -> (f64, f64) {
    let s = a + b;
    let bb = s - a;
    let e = (a - (s - bb)) + (b - bb);
    (s, e)
}

#[cfg(test)]
mod tests;
