use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::*;
use crate::graph::build_dual;
use crate::ising::{loop_polynomial_even_subgraphs, EvalConfig};
use crate::mesh_couplings;

fn geometric(spec: &CanonicalSpec) -> CouplingVector {
    mesh_couplings(&build_canonical(spec).unwrap()).unwrap().2
}

fn assert_close(a: &CouplingVector, b: &CouplingVector, tol: f64) {
    assert_eq!(a.len(), b.len());
    for l in 0..a.len() {
        assert!((a[l] - b[l]).norm() <= tol, "link {l}: {} vs {}", a[l], b[l]);
    }
}

/// Random couplings that are constant on each symmetry class.
fn class_couplings(spec: &CanonicalSpec, rng: &mut ChaCha8Rng) -> CouplingVector {
    let classes = link_classes(spec).unwrap();
    let mut names: Vec<&str> = classes.clone();
    names.sort_unstable();
    names.dedup();
    let draws: Vec<Complex64> = names
        .iter()
        .map(|_| Complex64::new(rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0)))
        .collect();
    let values = classes
        .iter()
        .map(|c| draws[names.iter().position(|n| n == c).unwrap()])
        .collect();
    CouplingVector::new(values)
}

fn enumerated(spec: &CanonicalSpec, y: &CouplingVector) -> (Complex64, f64) {
    let (graph, _) = build_dual(&build_canonical(spec).unwrap()).unwrap();
    let r = loop_polynomial_even_subgraphs(&graph, y, &EvalConfig::default()).unwrap();
    (r.value, r.magnitude_scale)
}

fn specs() -> Vec<CanonicalSpec> {
    vec![
        CanonicalSpec::Pancake,
        CanonicalSpec::TetrahedronRegular,
        CanonicalSpec::Pyramid { h: 0.7 },
        CanonicalSpec::DoublePyramid { h: 1.3, z: 0.4 },
        CanonicalSpec::DoublePyramid { h: 0.5, z: 3.0 },
        CanonicalSpec::Cube { a: 1.5 },
        CanonicalSpec::PrismaticTorus { r: 1.0, big_r: 2.0, h: 1.0 },
        CanonicalSpec::PrismaticTorus { r: 0.3, big_r: 5.0, h: 2.5 },
    ]
}

#[test]
fn dual_graph_sizes() {
    let cases = [
        (CanonicalSpec::Pancake, 2, 3),
        (CanonicalSpec::TetrahedronRegular, 4, 6),
        (CanonicalSpec::Pyramid { h: 1.0 }, 5, 8),
        (CanonicalSpec::DoublePyramid { h: 1.0, z: 1.0 }, 8, 12),
        (CanonicalSpec::Cube { a: 1.0 }, 6, 12),
        (CanonicalSpec::PrismaticTorus { r: 1.0, big_r: 2.0, h: 1.0 }, 12, 24),
    ];
    for (spec, nodes, links) in cases {
        let (g, _) = build_dual(&build_canonical(&spec).unwrap()).unwrap();
        assert_eq!((g.node_count(), g.link_count()), (nodes, links), "{}", spec.name());
    }
}

#[test]
fn closed_form_couplings_match_geometry() {
    for spec in specs() {
        assert_close(&reference_couplings(&spec).unwrap(), &geometric(&spec), 1e-12);
    }
    for k in 1..=20 {
        let h = 0.25 * k as f64;
        let spec = CanonicalSpec::Pyramid { h };
        assert_close(&reference_couplings(&spec).unwrap(), &geometric(&spec), 1e-12);
    }
    for i in 1..=8 {
        for j in 0..=8 {
            let spec = CanonicalSpec::DoublePyramid {
                h: 0.375 * i as f64,
                z: 0.5 * j as f64,
            };
            assert_close(&reference_couplings(&spec).unwrap(), &geometric(&spec), 1e-12);
        }
    }
}

#[test]
fn closed_form_polynomials_match_enumeration() {
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    for spec in specs() {
        for _ in 0..5 {
            let y = class_couplings(&spec, &mut rng);
            let closed = reference_polynomial(&spec, &y).unwrap();
            let (value, scale) = enumerated(&spec, &y);
            assert!((closed - value).norm() <= 1e-12 * scale, "{}: {closed} vs {value}", spec.name());
        }
    }
}

#[test]
fn tetrahedral_closed_form_with_generic_couplings() {
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    let spec = CanonicalSpec::TetrahedronRegular;
    for _ in 0..10 {
        let y = CouplingVector::new(
            (0..6)
                .map(|_| Complex64::new(rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0)))
                .collect(),
        );
        let (value, scale) = enumerated(&spec, &y);
        assert!((reference_polynomial(&spec, &y).unwrap() - value).norm() <= 1e-12 * scale);
    }
}

#[test]
fn geometric_couplings_are_zeros() {
    for spec in specs() {
        let y = geometric(&spec);
        let (value, scale) = enumerated(&spec, &y);
        let torus = matches!(spec, CanonicalSpec::PrismaticTorus { .. });
        assert_eq!(value.norm() / scale <= 1e-12, !torus, "{}: {value}", spec.name());
    }
}

#[test]
fn torus_reference_value() {
    let c = torus_couplings(1.0, 2.0, 1.0);
    let p = p_torus(c.y, c.hi, c.he, c.vi, c.ve);
    assert!((p.re - 0.0437193).abs() < 1e-6 && (p.im + 0.0318252).abs() < 1e-6, "{p}");
}

#[test]
fn pancake_and_cube_couplings() {
    let t = (PI / 6.0).tan();
    assert!((geometric(&CanonicalSpec::Pancake)[0] - Complex64::new(0.0, t)).norm() < 1e-14);
    assert!((cube_coupling() - Complex64::new(0.5, 0.5) * (2.0 - 2f64.sqrt())).norm() < 1e-15);
}

#[test]
fn pyramid_limits() {
    let (y2, yt) = pyramid_couplings(0.0);
    assert!((y2 - Complex64::new(1.0 - 2f64.sqrt(), 0.0)).norm() < 1e-15);
    assert!((yt - Complex64::new(2f64.sqrt() - 1.0, 0.0)).norm() < 1e-15);
    let (y2, yt) = pyramid_couplings(1e8);
    assert!(y2.norm() < 1e-7);
    assert!((yt - Complex64::from_polar(1.0, FRAC_PI_4)).norm() < 1e-7);
}

#[test]
fn double_pyramid_concave_edge_above_two() {
    for (z, sign) in [(1.0, 1), (1.9, 1), (2.1, -1), (3.0, -1)] {
        let spec = CanonicalSpec::DoublePyramid { h: 1.0, z };
        let mesh = build_canonical(&spec).unwrap();
        let (_, records) = build_dual(&mesh).unwrap();
        let classes = link_classes(&spec).unwrap();
        for (rec, class) in records.iter().zip(&classes) {
            let expected = if *class == "u" { sign } else { 1 };
            assert_eq!(rec.convexity_sign, expected, "z = {z}, edge {:?}", rec.vertex_pair);
        }
    }
}

#[test]
fn torus_classes_and_signs() {
    let spec = CanonicalSpec::PrismaticTorus { r: 1.0, big_r: 2.0, h: 1.0 };
    let classes = link_classes(&spec).unwrap();
    for name in ["y", "hi", "he", "vi", "ve"] {
        let count = classes.iter().filter(|&&c| c == name).count();
        assert_eq!(count, if name.starts_with('v') { 3 } else { 6 }, "{name}");
    }
    let (_, records) = build_dual(&build_canonical(&spec).unwrap()).unwrap();
    for (rec, class) in records.iter().zip(&classes) {
        assert_eq!(rec.convexity_sign, if *class == "vi" { -1 } else { 1 });
    }
}

#[test]
fn invalid_parameters_rejected() {
    for spec in [
        CanonicalSpec::Pyramid { h: 0.0 },
        CanonicalSpec::Cube { a: -1.0 },
        CanonicalSpec::PrismaticTorus { r: 2.0, big_r: 1.0, h: 1.0 },
        CanonicalSpec::DoublePyramid { h: f64::NAN, z: 1.0 },
    ] {
        assert!(matches!(build_canonical(&spec), Err(CanonicalError::InvalidParameters(_))));
    }
}

#[test]
fn fixtures_load() {
    for name in fixture_names() {
        load_fixture(name).unwrap();
    }
    assert!(load_fixture("missing").is_err());
}

#[test]
fn fixtures_regenerate_from_their_seeds() {
    use crate::experiments::mesh_seed;
    use crate::meshgen::{generate_mesh, Distribution, RescaleConfig, SamplerConfig};
    for (name, n, seed) in [("two-concave-6", 6, 2), ("nonconvex-9", 9, 4)] {
        let sampler = SamplerConfig {
            n_points: n,
            distribution: Distribution::Uniform,
            seed,
        };
        let rescale = RescaleConfig::new(1.0, 4.0, mesh_seed(seed, 1)).unwrap();
        assert_eq!(generate_mesh(&sampler, Some(&rescale)).unwrap(), load_fixture(name).unwrap());
    }
}
