use koszul_core::cancellation::{build_cancellation_graph, cancelling_coeffs, classify_terms, contradiction_witness};
use koszul_core::sampling::{random_block_coeffs, random_chain_map, trial_seed};
use koszul_core::{ChainMap, Char, ComplexDescriptor, Grading, IndexSet, Poly};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

const GRADINGS: [Grading; 3] = [Grading::Full, Grading::Parity, Grading::None];

fn cases(n: usize, count: u64) -> impl Iterator<Item = (u64, ChainMap, ChaCha8Rng)> {
    (0..count).map(move |t| {
        let ch = if t % 2 == 0 { Char::Zero } else { Char::Two };
        let d = ComplexDescriptor::new(n, 1 + (t % 3 == 0) as u32, ch).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(trial_seed(21, t));
        let g = random_chain_map(d, GRADINGS[(t / 2) as usize % 3], &mut rng);
        (t, g, rng)
    })
}

#[test]
fn terms_reconstruct_the_expansion() {
    for (t, g, mut rng) in cases(6, 60) {
        let d = g.source();
        let coeffs = random_block_coeffs(d, 3, &mut rng);
        let tc = classify_terms(&g, &coeffs).unwrap();
        let w = contradiction_witness(&g, &coeffs).unwrap();
        assert_eq!(w.expansion, tc.reconstruct(), "trial {t}");
        assert_eq!(tc.regular.len(), 3 * tc.vertices.len());
        for v in 0..tc.vertices.len() {
            assert!(tc.rest_differential(v).is_zero(), "trial {t} vertex {v}");
        }
    }
}

#[test]
fn graphs_are_three_acyclic_and_witnesses_nonzero() {
    let mut with_edges = 0;
    for (t, g, mut rng) in cases(9, 80) {
        let coeffs = match cancelling_coeffs(&g, 3, &mut rng).unwrap() {
            Some(c) => c,
            None => random_block_coeffs(g.source(), 3, &mut rng),
        };
        let w = contradiction_witness(&g, &coeffs).unwrap();
        assert!(w.nonzero && w.three_acyclic && w.sink_term_survives, "trial {t}");
        let graph = &w.scheme.graph;
        assert!(graph.is_l_acyclic(3).unwrap());
        assert!(graph.is_3_sink(w.sink_vertex.unwrap()));
        with_edges += usize::from(!graph.edges().is_empty());
        // every pair joins distinct vertices over the same monomial
        for p in &w.scheme.pairs {
            assert_ne!(p.regular.vertex, p.rest.vertex);
            assert_eq!((p.regular.set, &p.regular.mono), (p.rest.set, &p.rest.mono));
        }
    }
    assert!(with_edges > 10, "only {with_edges} graphs had edges");
}

#[test]
fn rebuilding_the_scheme_is_deterministic() {
    for (_, g, mut rng) in cases(9, 10) {
        let coeffs = random_block_coeffs(g.source(), 3, &mut rng);
        let tc = classify_terms(&g, &coeffs).unwrap();
        assert_eq!(build_cancellation_graph(&tc), build_cancellation_graph(&tc));
    }
}

#[test]
fn invalid_layouts_are_rejected() {
    let d = ComplexDescriptor::new(6, 1, Char::Zero).unwrap();
    let g = ChainMap::iota(d);
    let one = Poly::one(6, Char::Zero);
    let shifted = [(IndexSet::of(&[2, 3, 4]), one.clone())].into();
    assert!(classify_terms(&g, &shifted).is_err());
    let pairs = [(IndexSet::of(&[1, 2]), one.clone())].into();
    assert!(classify_terms(&g, &pairs).is_err());
    let zero = [(IndexSet::of(&[1, 2, 3]), Poly::zero(6, Char::Zero))].into();
    assert!(classify_terms(&g, &zero).is_err());
}
