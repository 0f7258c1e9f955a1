use serde::{Deserialize, Serialize};

use super::ExperimentError;
use crate::canonical::{build_canonical, p_torus, torus_couplings, CanonicalSpec};
use crate::graph::build_dual;
use crate::ising::{self, EvalConfig};
use crate::Complex64;

/// `(r, R, h)` of the typical configuration.
pub const TORUS_REFERENCE_POINT: (f64, f64, f64) = (1.0, 2.0, 1.0);
/// Reference value of the loop polynomial there.
pub const TORUS_REFERENCE_VALUE: (f64, f64) = (0.0437193, -0.0318252);

/// Reference asymptotic values of `|P|`: `(parameter, value, |P|)`, with the
/// other two parameters held at the reference point.
pub const TORUS_ASYMPTOTICS: [(TorusParameter, f64, f64); 12] = [
    (TorusParameter::R, 1e-1, 1.15107e-2),
    (TorusParameter::R, 1e-2, 1.87652e-4),
    (TorusParameter::R, 1e-3, 1.96812e-6),
    (TorusParameter::R, 1e-4, 1.97749e-8),
    (TorusParameter::BigR, 1e2, 1.90415e-3),
    (TorusParameter::BigR, 1e3, 1.98433e-4),
    (TorusParameter::BigR, 1e4, 1.99279e-5),
    (TorusParameter::BigR, 1e5, 1.99355e-6),
    (TorusParameter::H, 1e2, 7.3781e-5),
    (TorusParameter::H, 1e3, 7.91509e-7),
    (TorusParameter::H, 1e4, 7.97082e-9),
    (TorusParameter::H, 1e5, 7.97643e-11),
];

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum TorusParameter {
    #[serde(rename = "r")]
    R,
    #[serde(rename = "R")]
    BigR,
    #[serde(rename = "h")]
    H,
}

impl std::str::FromStr for TorusParameter {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, String> {
        match s {
            "r" => Ok(TorusParameter::R),
            "R" => Ok(TorusParameter::BigR),
            "h" => Ok(TorusParameter::H),
            _ => Err(format!("unknown torus parameter `{s}` (expected r, R or h)")),
        }
    }
}

impl TorusParameter {
    pub fn apply(self, value: f64) -> (f64, f64, f64) {
        let (r, big_r, h) = TORUS_REFERENCE_POINT;
        match self {
            TorusParameter::R => (value, big_r, h),
            TorusParameter::BigR => (r, value, h),
            TorusParameter::H => (r, big_r, value),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TorusRow {
    pub r: f64,
    pub big_r: f64,
    pub h: f64,
    pub re: f64,
    pub im: f64,
    pub abs: f64,
    /// `|P|` from enumerating the dual graph of the built mesh, when requested.
    pub enumerated_abs: Option<f64>,
}

/// Closed-form `P_torus` at the geometric couplings.
pub fn torus_value(r: f64, big_r: f64, h: f64) -> Result<Complex64, ExperimentError> {
    CanonicalSpec::PrismaticTorus { r, big_r, h }.validate()?;
    let c = torus_couplings(r, big_r, h);
    Ok(p_torus(c.y, c.hi, c.he, c.vi, c.ve))
}

/// Sweeps one parameter over `grid`; with `enumerate` the value is also
/// computed from the mesh geometry by exact enumeration.
pub fn run_torus_sweep(parameter: TorusParameter, grid: &[f64], enumerate: bool) -> Result<Vec<TorusRow>, ExperimentError> {
    grid.iter()
        .map(|&v| {
            let (r, big_r, h) = parameter.apply(v);
            let p = torus_value(r, big_r, h)?;
            let enumerated_abs = if enumerate {
                let spec = CanonicalSpec::PrismaticTorus { r, big_r, h };
                let mesh = build_canonical(&spec)?;
                let (graph, records) = build_dual(&mesh)?;
                let y = ising::geometric_couplings(&graph, &records, 1)?;
                Some(ising::loop_polynomial_even_subgraphs(&graph, &y, &EvalConfig::default())?.abs())
            } else {
                None
            };
            Ok(TorusRow {
                r,
                big_r,
                h,
                re: p.re,
                im: p.im,
                abs: p.norm(),
                enumerated_abs,
            })
        })
        .collect()
}
