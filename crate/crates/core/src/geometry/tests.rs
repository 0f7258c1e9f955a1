use std::f64::consts::{FRAC_PI_2, FRAC_PI_3, PI};

use proptest::prelude::*;

use super::*;
use crate::canonical::{build_canonical, CanonicalSpec};

fn v(x: f64, y: f64, z: f64) -> Vec3 {
    Vec3::new(x, y, z)
}

fn records(spec: CanonicalSpec) -> Vec<EdgeRecord> {
    edge_records(&build_canonical(&spec).unwrap()).unwrap()
}

#[test]
fn right_triangle_angles() {
    let (a, b, c) = triangle_angles(v(0.0, 0.0, 0.0), v(1.0, 0.0, 0.0), v(0.0, 1.0, 0.0)).unwrap();
    assert!((a - FRAC_PI_2).abs() < 1e-15);
    assert!((b - PI / 4.0).abs() < 1e-15 && (c - PI / 4.0).abs() < 1e-15);
}

#[test]
fn equilateral_half_tangents() {
    let t = triangle_half_tangents(v(0.0, 0.0, 0.0), v(1.0, 0.0, 0.0), v(0.5, 0.75f64.sqrt(), 0.0)).unwrap();
    for x in t {
        assert!((x - (PI / 6.0).tan()).abs() < 1e-15);
    }
}

#[test]
fn collinear_triangle_rejected() {
    let r = triangle_half_tangents(v(0.0, 0.0, 0.0), v(1.0, 0.0, 0.0), v(2.0, 0.0, 0.0));
    assert_eq!(r, Err(GeometryError::DegenerateTrianglePoints));
}

#[test]
fn cube_folds_are_right_angles() {
    for r in records(CanonicalSpec::Cube { a: 2.0 }) {
        assert!((r.dihedral_angle - FRAC_PI_2).abs() < 1e-14);
        assert_eq!(r.convexity_sign, 1);
        assert!((r.opposite_angles.0 - PI / 4.0).abs() < 1e-12);
    }
}

#[test]
fn pancake_folds_fully() {
    for r in records(CanonicalSpec::Pancake) {
        assert_eq!((r.dihedral_angle, r.convexity_sign), (PI, 1));
    }
}

#[test]
fn regular_tetrahedron_folds() {
    for r in records(CanonicalSpec::TetrahedronRegular) {
        assert!((r.dihedral_angle.cos() + 1.0 / 3.0).abs() < 1e-14);
        assert_eq!(r.convexity_sign, 1);
        assert!((r.length - 1.0).abs() < 1e-14);
    }
}

#[test]
fn torus_inner_vertical_edges_are_concave() {
    let spec = CanonicalSpec::PrismaticTorus { r: 1.0, big_r: 2.0, h: 1.0 };
    for r in records(spec) {
        let (a, b) = (r.vertex_pair.0.min(r.vertex_pair.1), r.vertex_pair.0.max(r.vertex_pair.1));
        if a < 3 && b >= 3 && b < 6 {
            assert!((r.dihedral_angle - 2.0 * FRAC_PI_3).abs() < 1e-14);
            assert_eq!(r.convexity_sign, -1);
        }
    }
}

#[test]
fn polygon_center_angles() {
    let square = build_canonical(&CanonicalSpec::Cube { a: 1.0 }).unwrap();
    let f = &square.faces[0];
    let psi = circumcircle_center_angle(&square, 0, (f[0], f[1])).unwrap();
    assert!((psi - FRAC_PI_2).abs() < 1e-14);

    let hex: Vec<Vec3> = (0..6)
        .map(|k| {
            let a = FRAC_PI_3 * k as f64;
            v(a.cos(), a.sin(), 0.0)
        })
        .collect();
    let mut faces = vec![(0..6).collect::<Vec<_>>()];
    faces.push((0..6).rev().collect());
    let mut m = EmbeddedMesh::from_raw(hex, faces, 0);
    m.coincident = true;
    let psi = circumcircle_center_angle(&m, 0, (0, 1)).unwrap();
    assert!((psi - FRAC_PI_3).abs() < 1e-14);
}

#[test]
fn non_concyclic_quad_rejected() {
    let pts = vec![v(0.0, 0.0, 0.0), v(2.0, 0.0, 0.0), v(2.0, 1.0, 0.0), v(0.0, 3.0, 0.0)];
    let m = EmbeddedMesh::from_raw(pts, vec![vec![0, 1, 2, 3], vec![3, 2, 1, 0]], 0);
    assert_eq!(circumcircle_center_angle(&m, 0, (0, 1)), Err(GeometryError::NotConcyclic(0)));
}

#[test]
fn regge_action_examples() {
    let cube = regge_action(&build_canonical(&CanonicalSpec::Cube { a: 1.0 }).unwrap()).unwrap();
    assert!((cube - 6.0 * PI).abs() < 1e-12, "{cube}");
    let tet = regge_action(&build_canonical(&CanonicalSpec::TetrahedronRegular).unwrap()).unwrap();
    assert!((tet - 6.0 * (-1.0f64 / 3.0).acos()).abs() < 1e-12);
}

#[test]
fn flat_fold_has_zero_angle_and_positive_sign() {
    // Two coplanar triangles closed by the square underneath.
    let pts = vec![v(0.0, 0.0, 0.0), v(1.0, 0.0, 0.0), v(1.0, 1.0, 0.0), v(0.0, 1.0, 0.0)];
    let faces = vec![vec![0, 1, 2], vec![0, 2, 3], vec![0, 3, 2, 1]];
    let m = EmbeddedMesh::from_raw(pts, faces, 0);
    let (theta, sign) = signed_dihedral(&m, (0, 2)).unwrap();
    assert!(theta.abs() < 1e-15);
    assert_eq!(sign, 1);
}

#[test]
fn orientation_is_idempotent_and_global_flip_is_undone() {
    let cube = build_canonical(&CanonicalSpec::Cube { a: 1.0 }).unwrap();
    let again = orient_outward(&cube, ConvexReference::StarShaped).unwrap();
    assert_eq!(again.faces, cube.faces);
    let restored = orient_outward(&cube.flipped(), ConvexReference::StarShaped).unwrap();
    assert_eq!(edge_records(&restored).unwrap(), edge_records(&cube).unwrap());
    assert!(cube.signed_volume() > 0.0 && cube.flipped().signed_volume() < 0.0);
}

#[test]
fn sign_does_not_depend_on_edge_direction() {
    let spec = CanonicalSpec::DoublePyramid { h: 0.8, z: 3.0 };
    let m = build_canonical(&spec).unwrap();
    for r in edge_records(&m).unwrap() {
        let (a, b) = r.vertex_pair;
        assert_eq!(signed_dihedral(&m, (a, b)).unwrap(), signed_dihedral(&m, (b, a)).unwrap());
    }
}

#[test]
fn dihedral_routes_agree_on_canonical_meshes() {
    for spec in [
        CanonicalSpec::TetrahedronRegular,
        CanonicalSpec::Pyramid { h: 0.4 },
        CanonicalSpec::DoublePyramid { h: 1.1, z: 2.7 },
        CanonicalSpec::PrismaticTorus { r: 1.0, big_r: 3.0, h: 0.5 },
    ] {
        let m = build_canonical(&spec).unwrap();
        for r in edge_records(&m).unwrap() {
            let planes = dihedral_from_planes(&m, r.vertex_pair).unwrap();
            assert!((planes - r.dihedral_angle).abs() < 1e-12, "{}", spec.name());
        }
    }
}

#[test]
fn euler_mismatch_reported() {
    let mut m = build_canonical(&CanonicalSpec::Cube { a: 1.0 }).unwrap();
    m.genus_hint = 1;
    assert!(matches!(m.check(), Err(GeometryError::EulerMismatch { found: 2, .. })));
}

#[test]
fn open_surface_rejected() {
    let mut m = build_canonical(&CanonicalSpec::Cube { a: 1.0 }).unwrap();
    m.faces.pop();
    assert!(matches!(m.check(), Err(GeometryError::NonManifoldEdge(..))));
}

fn arb_point() -> impl Strategy<Value = Vec3> {
    (-10.0..10.0f64, -10.0..10.0f64, -10.0..10.0f64).prop_map(|(x, y, z)| v(x, y, z))
}

fn arb_tetrahedron() -> impl Strategy<Value = [Vec3; 4]> {
    [arb_point(), arb_point(), arb_point(), arb_point()].prop_filter("well shaped", |p| {
        let vol = (p[1] - p[0]).cross(p[2] - p[0]).dot(p[3] - p[0]).abs();
        let l = p.iter().flat_map(|a| p.iter().map(move |b| a.distance(*b))).fold(0.0, f64::max);
        vol > 1e-2 * l * l * l
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(128))]

    #[test]
    fn half_tangent_law_matches_angles(a in arb_point(), b in arb_point(), c in arb_point()) {
        let area = 0.5 * (b - a).cross(c - a).norm();
        let l = a.distance(b).max(b.distance(c)).max(c.distance(a));
        prop_assume!(area > 1e-3 * l * l);
        let t = triangle_half_tangents(a, b, c).unwrap();
        let direct = [(b - a).angle_to(c - a), (a - b).angle_to(c - b), (a - c).angle_to(b - c)];
        for k in 0..3 {
            prop_assert!((2.0 * t[k].atan() - direct[k]).abs() < 1e-10);
        }
        let sum: f64 = t.iter().map(|x| 2.0 * x.atan()).sum();
        prop_assert!((sum - PI).abs() < 1e-12);
    }

    #[test]
    fn tetrahedron_folds_are_convex_and_routes_agree(p in arb_tetrahedron()) {
        let m = build_canonical(&CanonicalSpec::TetrahedronPoints { points: p }).unwrap();
        for r in edge_records(&m).unwrap() {
            prop_assert_eq!(r.convexity_sign, 1);
            let planes = dihedral_from_planes(&m, r.vertex_pair).unwrap();
            prop_assert!((planes - r.dihedral_angle).abs() < 1e-9);
        }
    }
}
