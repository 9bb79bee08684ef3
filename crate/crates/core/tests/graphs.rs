//! Graph routines against petgraph and exhaustive search.

use std::collections::BTreeSet;

use koszul_core::graph::DiGraph;
use koszul_core::sampling::{random_dag, random_digraph, random_three_acyclic};
use petgraph::algo::{is_cyclic_directed, tarjan_scc, toposort};
use petgraph::graph::DiGraph as PetGraph;
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn to_petgraph(g: &DiGraph) -> PetGraph<(), ()> {
    let mut p = PetGraph::new();
    let nodes: Vec<_> = (0..g.nvertices()).map(|_| p.add_node(())).collect();
    for &(a, b) in g.edges() {
        p.add_edge(nodes[a], nodes[b], ());
    }
    p
}

/// Length of the longest simple directed cycle, 0 if there is none.
fn longest_cycle(g: &DiGraph) -> usize {
    fn dfs(g: &DiGraph, start: usize, v: usize, path: &mut Vec<usize>, best: &mut usize) {
        for w in g.out_neighbors(v).collect::<Vec<_>>() {
            if w == start {
                *best = (*best).max(path.len());
            } else if w > start && !path.contains(&w) {
                path.push(w);
                dfs(g, start, w, path, best);
                path.pop();
            }
        }
    }
    let mut best = 0;
    for s in 0..g.nvertices() {
        dfs(g, s, s, &mut vec![s], &mut best);
    }
    best
}

fn brute_3_sink(g: &DiGraph, v: usize) -> bool {
    let outs: Vec<usize> = g.edges().iter().filter(|e| e.0 == v).map(|e| e.1).collect();
    outs.is_empty() || (outs.len() == 1 && g.edges().contains(&(outs[0], v)))
}

#[test]
fn two_acyclicity_matches_petgraph_on_1000_graphs() {
    let mut r = ChaCha8Rng::seed_from_u64(1);
    let mut cyclic = 0;
    for k in 0..1000 {
        let g = random_digraph(1 + k % 9, 0.15, &mut r);
        let p = to_petgraph(&g);
        assert_eq!(g.is_l_acyclic(2).unwrap(), !is_cyclic_directed(&p), "{}", g.to_edge_list());
        assert_eq!(g.topological_order().is_some(), toposort(&p, None).is_ok());
        cyclic += usize::from(is_cyclic_directed(&p));
    }
    assert!(cyclic > 100 && cyclic < 900, "generator should produce both kinds, got {cyclic} cyclic");
}

#[test]
fn topological_order_respects_edges() {
    let mut r = ChaCha8Rng::seed_from_u64(2);
    for _ in 0..200 {
        let g = random_dag(8, 0.4, &mut r);
        let order = g.topological_order().unwrap();
        let pos: Vec<usize> = (0..8).map(|v| order.iter().position(|&x| x == v).unwrap()).collect();
        assert!(g.edges().iter().all(|&(a, b)| pos[a] < pos[b]));
    }
}

#[test]
fn components_match_petgraph() {
    let mut r = ChaCha8Rng::seed_from_u64(3);
    for _ in 0..300 {
        let g = random_digraph(9, 0.2, &mut r);
        let ids = g.scc_ids();
        let ours: BTreeSet<BTreeSet<usize>> =
            (0..9).map(|v| (0..9).filter(|&w| ids[w] == ids[v]).collect()).collect();
        let theirs: BTreeSet<BTreeSet<usize>> =
            tarjan_scc(&to_petgraph(&g)).into_iter().map(|c| c.into_iter().map(|n| n.index()).collect()).collect();
        assert_eq!(ours, theirs);
    }
}

#[test]
fn l_acyclicity_matches_exhaustive_cycle_search() {
    let mut r = ChaCha8Rng::seed_from_u64(4);
    for k in 0..600 {
        let g = if k % 2 == 0 { random_digraph(1 + k % 7, 0.25, &mut r) } else { random_three_acyclic(1 + k % 8, 0.3, &mut r) };
        let longest = longest_cycle(&g);
        for l in 2..=5 {
            assert_eq!(g.is_l_acyclic(l).unwrap(), longest < l, "l={l}\n{}", g.to_edge_list());
        }
    }
}

#[test]
fn walks_find_verified_sinks_within_bounds() {
    let mut r = ChaCha8Rng::seed_from_u64(5);
    for k in 0..500 {
        let n = 1 + k % 10;
        let dag = random_dag(n, 0.3, &mut r);
        let walk = dag.sink_walk().unwrap();
        assert!(dag.out_degree(walk.vertex) == 0 && walk.visits <= n);
        let g = random_three_acyclic(n, 0.3, &mut r);
        let walk = g.three_sink_walk().unwrap();
        assert!(brute_3_sink(&g, walk.vertex) && g.is_3_sink(walk.vertex));
        assert!(walk.visits <= 2 * n);
    }
}

#[test]
fn cyclic_inputs_are_rejected() {
    let triangle = DiGraph::from_edges(3, &[(0, 1), (1, 2), (2, 0)]).unwrap();
    assert!(triangle.find_sink().is_err());
    assert!(triangle.find_3_sink().is_err());
    let pair = DiGraph::from_edges(2, &[(0, 1), (1, 0)]).unwrap();
    assert!(pair.find_sink().is_err());
    assert!(pair.is_l_acyclic(3).unwrap());
    assert!(pair.is_3_sink(pair.find_3_sink().unwrap()));
    assert!(DiGraph::from_edges(2, &[(1, 1)]).is_err());
    assert!(pair.is_l_acyclic(1).is_err());
}

proptest! {
    #[test]
    fn edge_list_round_trip(seed: u64, n in 1usize..12) {
        let g = random_digraph(n, 0.3, &mut ChaCha8Rng::seed_from_u64(seed));
        prop_assert_eq!(DiGraph::parse_edge_list(&g.to_edge_list()).unwrap(), g);
    }

    #[test]
    fn three_sink_exists_in_every_three_acyclic_graph(seed: u64, n in 1usize..11) {
        let g = random_three_acyclic(n, 0.35, &mut ChaCha8Rng::seed_from_u64(seed));
        prop_assert!((0..n).any(|v| brute_3_sink(&g, v)));
        prop_assert!(brute_3_sink(&g, g.find_3_sink().unwrap()));
    }
}
