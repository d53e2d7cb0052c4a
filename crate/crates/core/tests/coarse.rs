mod common;

use num_rational::Ratio;
use proptest::prelude::*;
use scwol_core::coarse::asdim::{
    check_certificate, check_uniform, find_asdim_certificate, probe_dimension, AsdimCertificate, SearchLimits, SearchOutcome,
};
use scwol_core::coarse::propa::{ball_averaging_witness, check_witness, strictly_decreasing_to_zero, validate_witness, variation_profile};
use scwol_core::metric::FiniteMetricSpace;

use common::asdim_oracle;

/// A connected graph: a random spanning tree plus a few extra edges.
fn graph(max_points: usize) -> impl Strategy<Value = FiniteMetricSpace> {
    (2..=max_points)
        .prop_flat_map(|n| {
            let parents: Vec<_> = (1..n).map(|i| 0..i).collect();
            (Just(n), parents, prop::collection::vec((0..n, 0..n), 0..3))
        })
        .prop_map(|(n, parents, extra)| {
            let mut edges: Vec<(usize, usize)> = parents.into_iter().enumerate().map(|(i, p)| (i + 1, p)).collect();
            edges.extend(extra);
            FiniteMetricSpace::from_graph((0..n).map(|i| i.to_string()).collect(), &edges).unwrap()
        })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(96))]

    #[test]
    fn search_agrees_with_exhaustive_enumeration(x in graph(8), n in 0usize..2, r in 1u32..3, d in 0u32..4) {
        let expected = asdim_oracle(&x, n, r, d);
        match find_asdim_certificate(&x, n, r, d, SearchLimits::unlimited()) {
            SearchOutcome::Found(cert) => {
                prop_assert!(expected, "search found a certificate the oracle rules out");
                let report = check_certificate(&x, &cert, Some(n));
                prop_assert!(report.is_valid(), "{:?}", report.violations);
                prop_assert!(cert.max_diameter(&x) <= d);
            }
            SearchOutcome::Impossible => prop_assert!(!expected, "oracle found a certificate"),
            SearchOutcome::LimitReached { .. } => prop_assert!(false, "unlimited search stopped"),
        }
    }

    #[test]
    fn certificates_survive_serialisation(x in graph(9), r in 1u32..3) {
        let d = x.diameter();
        let cert = find_asdim_certificate(&x, 0, r, d, SearchLimits::unlimited()).certificate().cloned().unwrap();
        let json = serde_json::to_string(&cert).unwrap();
        let back: AsdimCertificate = serde_json::from_str(&json).unwrap();
        prop_assert_eq!(&back, &cert);
        prop_assert!(check_certificate(&x, &back, Some(0)).is_valid());
    }

    #[test]
    fn ball_averages_are_probability_measures(x in graph(9), n in 0u32..5) {
        let w = ball_averaging_witness(&x, n);
        prop_assert!(validate_witness(&x, &w).is_valid());
        let check = check_witness(&x, &w, 1);
        prop_assert!(check.support_ok && check.probability_ok);
        prop_assert!(check.max_variation <= Ratio::from_integer(2));
    }

    #[test]
    fn metric_json_round_trip(x in graph(9)) {
        let back = FiniteMetricSpace::from_json(&x.to_json()).unwrap();
        prop_assert_eq!(back.rows(), x.rows());
        prop_assert_eq!(back.labels(), x.labels());
    }
}

fn intervals(len: usize, width: usize, r: u32, d: u32) -> AsdimCertificate {
    let mut families = vec![Vec::new(), Vec::new()];
    for (i, start) in (0..len).step_by(width).enumerate() {
        families[i % 2].push((start..(start + width).min(len)).collect());
    }
    AsdimCertificate { scale: r, bound: d, families }
}

#[test]
fn one_pair_serves_all_paths() {
    let xs: Vec<FiniteMetricSpace> = (10..=20).map(FiniteMetricSpace::path).collect();
    let certs: Vec<AsdimCertificate> = (10..=20).map(|n| intervals(n, 6, 5, 5)).collect();
    assert!(check_uniform(&xs, 1, 5, 5, &certs).is_valid());
    let mut wrong = certs.clone();
    wrong[3].bound = 7;
    assert!(!check_uniform(&xs, 1, 5, 5, &wrong).is_valid());
    let narrow: Vec<AsdimCertificate> = (10..=20).map(|n| intervals(n, 3, 5, 5)).collect();
    assert!(!check_uniform(&xs, 1, 5, 5, &narrow).is_valid());
}

#[test]
fn transported_certificates_only_miss_new_points() {
    let small = FiniteMetricSpace::path(9);
    let (wedge, map) = FiniteMetricSpace::path(5).wedge(0, &small, 0);
    let cert = intervals(9, 4, 3, 3);
    assert!(check_certificate(&small, &cert, Some(1)).is_valid());
    let moved = cert.transport(&map);
    let report = check_certificate(&wedge, &moved, Some(1));
    assert!(report.violations.iter().all(|v| v.kind.to_string() == "not-covered"), "{:?}", report.violations);
}

#[test]
fn path_dimension_probe() {
    let x = FiniteMetricSpace::path(30);
    let probe = probe_dimension(&x, 3, 6, 2, SearchLimits::unlimited());
    assert_eq!(probe.achieved(), Some(1));
    assert!(probe.minimal_is_proven());
}

#[test]
fn profile_of_the_circle() {
    let edges: Vec<(usize, usize)> = (0..20).map(|i| (i, (i + 1) % 20)).collect();
    let x = FiniteMetricSpace::from_graph((0..20).map(|i| i.to_string()).collect(), &edges).unwrap();
    let profile: Vec<_> = variation_profile(&x, 1..=12, 1).into_iter().map(|(_, v)| v).collect();
    assert!(strictly_decreasing_to_zero(&profile));
    assert_eq!(profile[0], Ratio::new(2, 3));
    assert_eq!(*profile.last().unwrap(), Ratio::from_integer(0));
}
