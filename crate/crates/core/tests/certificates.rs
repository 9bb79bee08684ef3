use koszul_core::certificates::{
    bound_report, certificate_generators, certify_map, check_injectivity, previous_bound, search_noninjective,
    theorem_a_bound, CertificateKind, Verdict,
};
use koszul_core::sampling::{random_chain_map, trial_seed};
use koszul_core::{ChainMap, Char, ComplexDescriptor, Grading, IndexSet, KElem, RankOptions};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

#[test]
fn bound_values() {
    let a: Vec<usize> = (1..=9).map(theorem_a_bound).collect();
    assert_eq!(a, [2, 4, 8, 10, 12, 16, 18, 20, 24]);
    let prev: Vec<usize> = (1..=6).map(previous_bound).collect();
    assert_eq!(prev, [2, 4, 8, 10, 12, 14]);
    assert!((1..40).all(|n| theorem_a_bound(n) >= previous_bound(n)));
}

#[test]
fn generator_counts_match_closed_forms() {
    for n in 1..=9 {
        let d = ComplexDescriptor::new(n, 1, Char::Zero).unwrap();
        for kind in [CertificateKind::Triples, CertificateKind::Blocks(4), CertificateKind::Mixed, CertificateKind::MixedSingletons] {
            assert_eq!(certificate_generators(kind, d).unwrap().len(), kind.expected_count(n), "{kind:?} n={n}");
        }
    }
}

#[test]
fn iota_passes_every_certificate() {
    for ch in [Char::Zero, Char::Two] {
        for n in 1..=6 {
            let g = ChainMap::iota(ComplexDescriptor::new(n, 1, ch).unwrap());
            for c in certify_map(&g, &RankOptions::default()).unwrap() {
                assert!(matches!(c.verdict, Verdict::Injective | Verdict::NotApplicable), "{:?} n={n}", c.kind);
            }
            let report = bound_report(&g, &RankOptions::default()).unwrap();
            assert_eq!(report.rank, 1 << n);
            assert_eq!(report.satisfies_a, (1 << n) >= theorem_a_bound(n));
        }
    }
}

#[test]
fn bound_report_json_shape() {
    let g = ChainMap::iota(ComplexDescriptor::new(3, 1, Char::Zero).unwrap());
    let json = serde_json::to_string(&bound_report(&g, &RankOptions::default()).unwrap()).unwrap();
    assert_eq!(json, r#"{"n":3,"m":1,"char":0,"rank":8,"theorem_A":8,"eqn07":8,"satisfies_A":true,"grading":"full"}"#);
}

#[test]
fn perturbed_maps_meet_the_bound_in_characteristic_zero() {
    for n in 3..=5 {
        let d = ComplexDescriptor::new(n, 1, Char::Zero).unwrap();
        for t in 0..15 {
            let g = random_chain_map(d, Grading::Full, &mut ChaCha8Rng::seed_from_u64(trial_seed(31, t)));
            let checks = certify_map(&g, &RankOptions::default()).unwrap();
            assert!(checks.iter().all(|c| c.verdict == Verdict::Injective), "n={n} trial {t}");
            assert!(bound_report(&g, &RankOptions::default()).unwrap().satisfies_a);
        }
    }
}

#[test]
fn failures_on_parity_maps_are_hypothesis_sensitive() {
    // kills the odd part of the span: s_1 and the s_1j
    let d = ComplexDescriptor::new(3, 1, Char::Zero).unwrap();
    let images = IndexSet::all(3).into_iter().filter(|s| s.len() != 1).map(|s| (s, ChainMap::iota(d).image(s))).collect();
    let broken = ChainMap::new(d, images).unwrap();
    let checks = certify_map(&broken, &RankOptions::default()).unwrap();
    let singles = checks.iter().find(|c| c.kind == CertificateKind::MixedSingletons).unwrap();
    assert!(!singles.report.as_ref().unwrap().injective);
    let expected = if broken.grading_class() == Grading::Full { Verdict::Falsified } else { Verdict::HypothesisSensitive };
    assert_eq!(singles.verdict, expected);
    let mixed = checks.iter().find(|c| c.kind == CertificateKind::Mixed).unwrap();
    assert_eq!(mixed.verdict, Verdict::Falsified);
}

#[test]
fn search_reports_found_witnesses_exactly() {
    let d = ComplexDescriptor::new(3, 1, Char::Two).unwrap();
    let gens = vec![KElem::basis(d, IndexSet::of(&[1, 2, 3])).differential(), KElem::basis(d, IndexSet::of(&[1, 2])).differential()];
    let out = search_noninjective(d, &gens, Grading::Full, 40, &RankOptions::default()).unwrap();
    assert_eq!(out.trials, 40);
    if let Some((_, g, w)) = out.found {
        let sub = koszul_core::certificates::Submodule { desc: d, generators: gens, labels: vec![] };
        assert!(!check_injectivity(&g, &sub, &RankOptions::default()).unwrap().injective);
        assert!(w.iter().any(|p| !p.is_zero()));
    }
}
