//! Seeded random inputs: homotopies, perturbed chain maps, block
//! coefficients, ring elements and graphs.

use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::One;
use rand::seq::SliceRandom;
use rand::Rng;

use crate::chain_map::{ChainMap, Grading, Homotopy};
use crate::graph::DiGraph;
use crate::koszul::{ComplexDescriptor, IndexSet, KElem};
use crate::poly::{Char, Mono, Poly};

/// Independent per-trial seed derived from a master seed (splitmix64).
pub fn trial_seed(master: u64, trial: u64) -> u64 {
    let mut z = master ^ trial.wrapping_add(1).wrapping_mul(0x9e37_79b9_7f4a_7c15);
    z = (z ^ (z >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
    z ^ (z >> 31)
}

fn unit<R: Rng + ?Sized>(ch: Char, rng: &mut R) -> BigRational {
    match ch {
        Char::Two => BigRational::one(),
        Char::Zero => {
            if rng.random() {
                BigRational::one()
            } else {
                -BigRational::one()
            }
        }
    }
}

/// Uniformly random monomial of the given total degree.
pub fn random_monomial<R: Rng + ?Sized>(nvars: usize, degree: u32, rng: &mut R) -> Mono {
    let mut exps = vec![0u32; nvars];
    for _ in 0..degree {
        exps[rng.random_range(0..nvars)] += 1;
    }
    Mono::from_exponents(exps)
}

fn random_subset_of_size<R: Rng + ?Sized>(n: usize, k: usize, rng: &mut R) -> IndexSet {
    let mut idx: Vec<usize> = (1..=n).collect();
    idx.shuffle(rng);
    IndexSet::from_indices(idx[..k].iter().copied()).expect("valid subset")
}

/// Random term `t^a s_J` of `K_n(0)` for the value `h(s_I)`, subject to the
/// grading constraint (`h` has degree `-1`).
fn homotopy_term<R: Rng + ?Sized>(
    desc: ComplexDescriptor,
    set: IndexSet,
    grading: Grading,
    rng: &mut R,
) -> Option<(IndexSet, Mono)> {
    let n = desc.nvars;
    let target = desc.degree_of(set) - 1;
    match (grading, desc.char) {
        (Grading::Full, Char::Zero) => {
            // 2|a| + |J| = target
            let sizes: Vec<usize> = (0..=n.min(target as usize)).filter(|k| (target - *k as i64) % 2 == 0).collect();
            let k = *sizes.get(rng.random_range(0..sizes.len().max(1)))?;
            let deg = ((target - k as i64) / 2) as u32;
            Some((random_subset_of_size(n, k, rng), random_monomial(n, deg, rng)))
        }
        (Grading::Full, Char::Two) => {
            // |a| = target, J arbitrary
            let deg = u32::try_from(target).ok()?;
            let k = rng.random_range(0..=n);
            Some((random_subset_of_size(n, k, rng), random_monomial(n, deg, rng)))
        }
        (Grading::Parity, Char::Zero) => {
            let sizes: Vec<usize> = (0..=n).filter(|k| (target - *k as i64).rem_euclid(2) == 0).collect();
            let k = sizes[rng.random_range(0..sizes.len())];
            let deg = rng.random_range(0..=desc.level + 1);
            Some((random_subset_of_size(n, k, rng), random_monomial(n, deg, rng)))
        }
        (Grading::Parity, Char::Two) => {
            let mut deg = rng.random_range(0..=desc.level + 1);
            if (deg as i64 - target).rem_euclid(2) != 0 {
                deg += 1;
            }
            let k = rng.random_range(0..=n);
            Some((random_subset_of_size(n, k, rng), random_monomial(n, deg, rng)))
        }
        (Grading::None, _) => {
            let k = rng.random_range(0..=n);
            let deg = rng.random_range(0..=desc.level + 1);
            Some((random_subset_of_size(n, k, rng), random_monomial(n, deg, rng)))
        }
    }
}

/// Homotopy with up to three random unit-coefficient terms on each
/// nonempty generator and zero on the unit.
pub fn random_homotopy<R: Rng + ?Sized>(desc: ComplexDescriptor, grading: Grading, rng: &mut R) -> Homotopy {
    let target = desc.with_level(0);
    let mut values = BTreeMap::new();
    for set in IndexSet::all(desc.nvars).into_iter().skip(1) {
        let mut v = KElem::zero(target);
        for _ in 0..rng.random_range(0..=3) {
            if let Some((j, mono)) = homotopy_term(desc, set, grading, rng) {
                v.add_term(j, Poly::monomial(mono, unit(desc.char, rng), desc.char));
            }
        }
        values.insert(set, v);
    }
    Homotopy::new(desc, values).expect("values live in K_n(0)")
}

/// `iota + d h + h d` for a random homotopy `h`.
pub fn random_chain_map<R: Rng + ?Sized>(desc: ComplexDescriptor, grading: Grading, rng: &mut R) -> ChainMap {
    ChainMap::iota(desc)
        .homotopy_perturb(&random_homotopy(desc, grading, rng))
        .expect("homotopy vanishes on the unit")
}

/// Polynomial with up to `max_terms` terms of total degree `<= max_degree`
/// and small integer coefficients (possibly zero).
pub fn random_poly<R: Rng + ?Sized>(nvars: usize, ch: Char, max_degree: u32, max_terms: usize, rng: &mut R) -> Poly {
    let terms = (0..rng.random_range(0..=max_terms)).map(|_| {
        let m = random_monomial(nvars, rng.random_range(0..=max_degree), rng);
        let c = BigRational::from_integer(BigInt::from(rng.random_range(-3i64..=3)));
        (m, c)
    });
    Poly::from_terms(nvars, ch, terms)
}

pub fn random_nonzero_poly<R: Rng + ?Sized>(nvars: usize, ch: Char, max_degree: u32, max_terms: usize, rng: &mut R) -> Poly {
    loop {
        let p = random_poly(nvars, ch, max_degree, max_terms.max(1), rng);
        if !p.is_zero() {
            return p;
        }
    }
}

pub fn random_kelem<R: Rng + ?Sized>(desc: ComplexDescriptor, max_degree: u32, max_terms: usize, rng: &mut R) -> KElem {
    let sets = IndexSet::all(desc.nvars);
    let terms: Vec<(IndexSet, Poly)> = (0..rng.random_range(0..=max_terms))
        .map(|_| {
            let s = sets[rng.random_range(0..sets.len())];
            (s, random_poly(desc.nvars, desc.char, max_degree, 2, rng))
        })
        .collect();
    KElem::from_terms(desc, terms)
}

/// Coefficients for the consecutive blocks of size `block`, each kept with
/// probability 3/4 and at least one nonzero.
pub fn random_block_coeffs<R: Rng + ?Sized>(
    desc: ComplexDescriptor,
    block: usize,
    rng: &mut R,
) -> BTreeMap<IndexSet, Poly> {
    let nblocks = desc.nvars / block;
    assert!(nblocks > 0, "no complete block");
    loop {
        let mut out = BTreeMap::new();
        for k in 0..nblocks {
            if rng.random_range(0..4) > 0 {
                let p = random_poly(desc.nvars, desc.char, 2, 2, rng);
                if !p.is_zero() {
                    out.insert(IndexSet::range(k * block + 1, block), p);
                }
            }
        }
        if !out.is_empty() {
            return out;
        }
    }
}

/// Random graph where every edge goes up in a random vertex order.
pub fn random_dag<R: Rng + ?Sized>(nvertices: usize, edge_prob: f64, rng: &mut R) -> DiGraph {
    let mut order: Vec<usize> = (0..nvertices).collect();
    order.shuffle(rng);
    let mut g = DiGraph::new(nvertices);
    for a in 0..nvertices {
        for b in a + 1..nvertices {
            if rng.random_bool(edge_prob) {
                g.add_edge(order[a], order[b]).expect("distinct vertices");
            }
        }
    }
    g
}

/// Random 3-acyclic graph: vertices are split into groups, each group is
/// joined by a random tree of 2-cycles, and the rest is a DAG between
/// groups.
pub fn random_three_acyclic<R: Rng + ?Sized>(nvertices: usize, edge_prob: f64, rng: &mut R) -> DiGraph {
    let mut order: Vec<usize> = (0..nvertices).collect();
    order.shuffle(rng);
    let mut group = vec![0usize; nvertices];
    let mut g = DiGraph::new(nvertices);
    let mut current = 0;
    for pos in 0..nvertices {
        if pos > 0 && rng.random_bool(0.5) {
            current += 1;
        }
        group[order[pos]] = current;
        // attach to a random earlier member of the same group
        let members: Vec<usize> = order[..pos].iter().copied().filter(|&v| group[v] == current).collect();
        if let Some(&w) = members.get(rng.random_range(0..members.len().max(1))) {
            g.add_edge(w, order[pos]).expect("distinct");
            g.add_edge(order[pos], w).expect("distinct");
        }
    }
    for a in 0..nvertices {
        for b in a + 1..nvertices {
            let (u, v) = (order[a], order[b]);
            if group[u] != group[v] && rng.random_bool(edge_prob) {
                g.add_edge(u, v).expect("distinct");
            }
        }
    }
    g
}

/// Arbitrary directed graph without self-loops.
pub fn random_digraph<R: Rng + ?Sized>(nvertices: usize, edge_prob: f64, rng: &mut R) -> DiGraph {
    let mut g = DiGraph::new(nvertices);
    for u in 0..nvertices {
        for v in 0..nvertices {
            if u != v && rng.random_bool(edge_prob) {
                g.add_edge(u, v).expect("distinct");
            }
        }
    }
    g
}
