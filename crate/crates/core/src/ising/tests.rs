use num_complex::Complex64;
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use super::*;
use crate::graph::IsingGraph;

fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

fn theta() -> IsingGraph {
    IsingGraph::new(2, vec![(0, 1), (0, 1), (0, 1)]).unwrap()
}

/// K4 with links in the order (n3n4, n2n4, n1n4, n1n2, n1n3, n2n3); opposite
/// links are ℓ and ℓ+3.
fn tetrahedral() -> IsingGraph {
    IsingGraph::new(4, vec![(2, 3), (1, 3), (0, 3), (0, 1), (0, 2), (1, 2)]).unwrap()
}

fn cube() -> IsingGraph {
    let mut links = Vec::new();
    for n in 0..8usize {
        for bit in 0..3 {
            let m = n ^ (1 << bit);
            if n < m {
                links.push((n, m));
            }
        }
    }
    IsingGraph::new(8, links).unwrap()
}

fn p_t(y: &[Complex64]) -> Complex64 {
    c(1.0, 0.0)
        + y[0] * y[1] * y[5]
        + y[0] * y[4] * y[2]
        + y[3] * y[1] * y[2]
        + y[3] * y[4] * y[5]
        + y[0] * y[1] * y[3] * y[4]
        + y[1] * y[2] * y[4] * y[5]
        + y[0] * y[2] * y[3] * y[5]
}

fn both(g: &IsingGraph, y: &CouplingVector) -> (EvaluationReport, EvaluationReport) {
    let cfg = EvalConfig::default();
    (
        loop_polynomial_spin_sum(g, y, &cfg).unwrap(),
        loop_polynomial_even_subgraphs(g, y, &cfg).unwrap(),
    )
}

#[test]
fn theta_graph_zero_when_angles_sum_to_pi() {
    let y = CouplingVector::uniform(c(0.0, (std::f64::consts::PI / 6.0).tan()), 3);
    let (s, e) = both(&theta(), &y);
    assert!(s.abs() < 1e-15 && e.abs() < 1e-15);
    assert!(s.is_zero(ZERO_TOLERANCE));
}

#[test]
fn zero_couplings_give_one() {
    for g in [theta(), tetrahedral(), cube()] {
        let y = CouplingVector::uniform(c(0.0, 0.0), g.link_count());
        let (s, e) = both(&g, &y);
        assert_eq!(s.value, c(1.0, 0.0));
        assert_eq!(e.value, c(1.0, 0.0));
    }
}

#[test]
fn cube_graph_at_unit_coupling() {
    let (s, e) = both(&cube(), &CouplingVector::uniform(c(1.0, 0.0), 12));
    assert_eq!(e.value, c(32.0, 0.0));
    assert!((s.value - c(32.0, 0.0)).norm() < 1e-12);
}

#[test]
fn tetrahedral_graph_vanishes_at_its_homogeneous_root() {
    let y0 = c(1.0, 2f64.sqrt()) / 3.0;
    let (s, e) = both(&tetrahedral(), &CouplingVector::uniform(y0, 6));
    assert!(s.abs() < 1e-15 && e.abs() < 1e-15);
}

#[test]
fn tetrahedral_graph_matches_the_listed_monomials() {
    let y: Vec<Complex64> = (0..6).map(|i| c(0.1 * i as f64 - 0.2, 0.3 - 0.07 * i as f64)).collect();
    let (s, e) = both(&tetrahedral(), &CouplingVector::new(y.clone()));
    assert!((e.value - p_t(&y)).norm() < 1e-15);
    assert!((s.value - p_t(&y)).norm() < 1e-14);
}

#[test]
fn theta_partition_function_vanishes_at_the_geometric_zero() {
    let y0 = CouplingVector::uniform(c(0.0, 1.0 / 3f64.sqrt()), 3);
    let raw = y0.raw().unwrap();
    let z = partition_function(&theta(), &raw, &EvalConfig::default()).unwrap();
    assert!(z.norm() < 1e-14);
}

#[test]
fn duality_map_fixed_points_and_pole() {
    assert_eq!(duality_map(c(0.0, 0.0)).unwrap(), c(1.0, 0.0));
    assert_eq!(duality_map(c(1.0, 0.0)).unwrap(), c(0.0, 0.0));
    assert_eq!(duality_map(c(-1.0, 0.0)), Err(IsingError::PoleAtMinusOne));
    let yt = c(1.0, 2f64.sqrt()) / 3.0;
    assert!((duality_map(yt).unwrap() - yt.conj()).norm() < 1e-15);
}

#[test]
fn perturbation_is_reproducible_and_bounded() {
    let y = CouplingVector::uniform(c(0.2, 0.3), 50);
    assert_eq!(perturb_couplings(&y, 0.0, &mut ChaCha8Rng::seed_from_u64(1)), y);
    let a = perturb_couplings(&y, 0.1, &mut ChaCha8Rng::seed_from_u64(7));
    let b = perturb_couplings(&y, 0.1, &mut ChaCha8Rng::seed_from_u64(7));
    assert_eq!(a, b);
    for (p, q) in a.values.iter().zip(&y.values) {
        assert_eq!(p.im, q.im);
        assert!((p.re - q.re).abs() <= 0.1);
    }
}

#[test]
fn raw_couplings_reject_unit_values() {
    let y = CouplingVector::new(vec![c(0.5, 0.0), c(-1.0, 0.0)]);
    assert_eq!(y.raw(), Err(IsingError::SingularCoupling(1)));
}

#[test]
fn spin_sum_is_bit_identical_across_thread_counts() {
    // 20 nodes: deep enough for the parallel split to engage.
    let n = 20;
    let mut links: Vec<(usize, usize)> = (0..n).map(|i| (i, (i + 1) % n)).collect();
    links.extend((0..n / 2).map(|i| (i, i + n / 2)));
    let g = IsingGraph::new(n, links).unwrap();
    let y = CouplingVector::new((0..g.link_count()).map(|i| c(0.3 * ((i * 7 % 5) as f64 - 2.0) / 2.0, 0.2)).collect());
    let run = |threads: usize| {
        rayon::ThreadPoolBuilder::new()
            .num_threads(threads)
            .build()
            .unwrap()
            .install(|| loop_polynomial_spin_sum(&g, &y, &EvalConfig::default()).unwrap())
    };
    let one = run(1);
    let four = run(4);
    assert_eq!(one.value.re.to_bits(), four.value.re.to_bits());
    assert_eq!(one.value.im.to_bits(), four.value.im.to_bits());
    assert_eq!(one.magnitude_scale.to_bits(), four.magnitude_scale.to_bits());
}

fn arb_graph() -> impl Strategy<Value = IsingGraph> {
    (2usize..10).prop_flat_map(|n| {
        // A random spanning tree keeps the graph connected; extra links
        // (including parallel ones) add cycles.
        let parents = proptest::collection::vec(any::<prop::sample::Index>(), n - 1);
        let extra = proptest::collection::vec((0..n, 0..n), 0..8);
        (Just(n), parents, extra).prop_map(|(n, parents, extra)| {
            let mut links: Vec<(usize, usize)> = parents
                .iter()
                .enumerate()
                .map(|(i, p)| (p.index(i + 1), i + 1))
                .collect();
            links.extend(extra.into_iter().filter(|(a, b)| a != b));
            IsingGraph::new(n, links).unwrap()
        })
    })
}

fn arb_couplings(links: usize) -> impl Strategy<Value = CouplingVector> {
    proptest::collection::vec((-1.5f64..1.5, -1.5f64..1.5), links)
        .prop_map(|v| CouplingVector::new(v.into_iter().map(|(re, im)| c(re, im)).collect()))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn evaluators_agree(
        (g, y) in arb_graph().prop_flat_map(|g| { let l = g.link_count(); (Just(g), arb_couplings(l)) })
    ) {
        let (s, e) = both(&g, &y);
        prop_assert!((s.value - e.value).norm() <= 1e-10 * e.magnitude_scale);
        prop_assert!(e.magnitude_scale >= 1.0);
    }

    #[test]
    fn conjugate_couplings_conjugate_the_value(
        (g, y) in arb_graph().prop_flat_map(|g| { let l = g.link_count(); (Just(g), arb_couplings(l)) })
    ) {
        let cfg = EvalConfig::default();
        let a = loop_polynomial_even_subgraphs(&g, &y, &cfg).unwrap().value;
        let b = loop_polynomial_even_subgraphs(&g, &y.conj(), &cfg).unwrap().value;
        prop_assert_eq!(b, a.conj());
    }

    #[test]
    fn partition_function_factorizes(
        (g, y) in arb_graph().prop_flat_map(|g| { let l = g.link_count(); (Just(g), arb_couplings(l)) })
    ) {
        // Raw couplings kept small so cosh stays away from its zeros.
        let raw: Vec<Complex64> = y.values.iter().map(|v| v * 0.5).collect();
        let cfg = EvalConfig::default();
        let z = partition_function(&g, &raw, &cfg).unwrap();
        let p = loop_polynomial_spin_sum(&g, &CouplingVector::from_raw(&raw), &cfg).unwrap();
        let pref: Complex64 = raw.iter().map(|r| r.cosh()).product::<Complex64>()
            * (g.node_count() as f64).exp2();
        let rhs = pref * p.value;
        let scale = pref.norm() * p.magnitude_scale;
        prop_assert!((z - rhs).norm() <= 1e-10 * scale);
    }

    #[test]
    fn duality_map_is_an_involution(re in -5.0f64..5.0, im in -5.0f64..5.0) {
        let y = c(re, im);
        prop_assume!((y + 1.0).norm() > 1e-3);
        let back = duality_map(duality_map(y).unwrap()).unwrap();
        prop_assert!((back - y).norm() <= 1e-12 * (1.0 + y.norm()));
    }

    #[test]
    fn tetrahedral_self_duality(
        y in proptest::collection::vec((-2.0f64..2.0, -2.0f64..2.0), 6)
    ) {
        let y: Vec<Complex64> = y.into_iter().map(|(a, b)| c(a, b)).collect();
        prop_assume!(y.iter().all(|v| (v + 1.0).norm() > 0.1));
        let g = tetrahedral();
        let cfg = EvalConfig::default();
        let dual = CouplingVector::new(y.clone()).dual().unwrap();
        let prefactor: Complex64 = y.iter().map(|v| v + 1.0).product::<Complex64>() / 8.0;
        let lhs = loop_polynomial_even_subgraphs(&g, &dual, &cfg).unwrap().value * prefactor;
        let swapped = CouplingVector::new(vec![y[3], y[4], y[5], y[0], y[1], y[2]]);
        let rhs = loop_polynomial_even_subgraphs(&g, &swapped, &cfg).unwrap();
        prop_assert!((lhs - rhs.value).norm() <= 1e-10 * rhs.magnitude_scale);
    }
}
