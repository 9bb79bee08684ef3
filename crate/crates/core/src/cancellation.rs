//! Cancellation bookkeeping for `gamma(v)` with `v = sum_k p_k d s_(B_k)`
//! over disjoint consecutive blocks `B_k` of size `l >= 3`.
//!
//! Projected to word-length `l-1`, each block contributes
//! `p_k eps_j t_(i_j)^(m+1) (t_(B \ i_j)^m s_(B \ i_j) + r_(B \ i_j))`.
//! The first summands are the regular terms, the `r` parts the rest terms.
//! Regular monomials are paired greedily with identical rest monomials of
//! other blocks; each pair gives an edge of the cancellation graph.

use std::collections::BTreeMap;

use num_rational::BigRational;
use num_traits::{One, Zero};
use rand::Rng;
use serde::Serialize;

use crate::chain_map::{monomial_power, ChainMap};
use crate::error::{Error, Result};
use crate::graph::DiGraph;
use crate::koszul::{ComplexDescriptor, IndexSet, KElem};
use crate::poly::{Char, Mono, Poly};
use crate::sampling::random_poly;

/// One block summand `p_k eps_j t_(i_j)^(m+1) (..)` of a vertex.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RegularTerm {
    pub vertex: usize,
    /// The removed index `i_j`.
    pub removed: usize,
    pub set: IndexSet,
    pub coeff: Poly,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RestTerm {
    pub vertex: usize,
    pub removed: usize,
    pub elem: KElem,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TermClassification {
    pub target: ComplexDescriptor,
    pub block: usize,
    /// Blocks with nonzero coefficient, ascending.
    pub vertices: Vec<IndexSet>,
    pub coeffs: Vec<Poly>,
    pub regular: Vec<RegularTerm>,
    pub rest: Vec<RestTerm>,
}

impl TermClassification {
    /// Sum of all regular and rest contributions.
    pub fn reconstruct(&self) -> KElem {
        let mut out = KElem::zero(self.target);
        for r in &self.regular {
            out.add_term(r.set, r.coeff.clone());
        }
        for r in &self.rest {
            out = out.add(&r.elem).expect("same target");
        }
        out
    }

    /// `d` of the summed rest parts of a vertex (zero for chain maps).
    pub fn rest_differential(&self, vertex: usize) -> KElem {
        self.rest
            .iter()
            .filter(|r| r.vertex == vertex)
            .fold(KElem::zero(self.target), |acc, r| acc.add(&r.elem).expect("same target"))
            .differential()
    }
}

/// A single monomial `c t^a s_J` of an expanded term.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct MonomialTerm {
    pub vertex: usize,
    pub removed: usize,
    #[serde(serialize_with = "ser_display")]
    pub set: IndexSet,
    #[serde(serialize_with = "ser_display")]
    pub mono: Mono,
    #[serde(serialize_with = "ser_display")]
    pub coeff: BigRational,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CancellationPair {
    pub regular: MonomialTerm,
    pub rest: MonomialTerm,
    /// Coefficient left over; zero when the two terms cancel exactly.
    #[serde(serialize_with = "ser_display")]
    pub residual: BigRational,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CancellationScheme {
    pub graph: DiGraph,
    pub pairs: Vec<CancellationPair>,
    pub uncancelled: Vec<MonomialTerm>,
}

impl CancellationPair {
    pub fn is_exact(&self) -> bool {
        self.residual.is_zero()
    }
}

fn ser_display<T: std::fmt::Display, S: serde::Serializer>(v: &T, s: S) -> std::result::Result<S::Ok, S::Error> {
    s.collect_str(v)
}

/// Checks that `coeffs` is keyed by consecutive blocks of one size `l >= 3`
/// and returns `l`.
fn block_size(desc: ComplexDescriptor, coeffs: &BTreeMap<IndexSet, Poly>) -> Result<usize> {
    let l = coeffs
        .keys()
        .next()
        .ok_or_else(|| Error::InvalidArgument("no block coefficients".into()))?
        .len();
    if l < 3 {
        return Err(Error::UnsupportedLayout(format!("blocks of size {l}")));
    }
    for set in coeffs.keys() {
        let first = set.indices().next().unwrap_or(0);
        let canonical = first >= 1 && (first - 1) % l == 0 && *set == IndexSet::range(first, l);
        if !canonical || set.max_index() > desc.nvars {
            return Err(Error::UnsupportedLayout(format!("{set} is not a block {{kl+1..kl+l}} of size {l} in n={}", desc.nvars)));
        }
    }
    Ok(l)
}

pub fn classify_terms(g: &ChainMap, coeffs: &BTreeMap<IndexSet, Poly>) -> Result<TermClassification> {
    let source = g.source();
    let target = g.target();
    let l = block_size(source, coeffs)?;
    let (vertices, polys): (Vec<IndexSet>, Vec<Poly>) =
        coeffs.iter().filter(|(_, p)| !p.is_zero()).map(|(s, p)| (*s, p.clone())).unzip();
    if vertices.is_empty() {
        return Err(Error::InvalidArgument("all block coefficients are zero".into()));
    }
    if let Some(p) = polys.iter().find(|p| p.nvars() != source.nvars || p.char() != source.char) {
        return Err(Error::DescriptorMismatch(format!("coefficient {p} does not live in R")));
    }
    let mut regular = Vec::new();
    let mut rest = Vec::new();
    for (vertex, (block, p)) in vertices.iter().zip(&polys).enumerate() {
        for (j, i) in block.indices().enumerate() {
            let face = block.without(i);
            let sign_neg = source.char == Char::Zero && j % 2 == 1;
            let lead = Poly::var_pow(source.nvars, i, source.level + 1, source.char);
            let mut factor = p * &lead;
            if sign_neg {
                factor = -&factor;
            }
            let canonical = monomial_power(source, face);
            regular.push(RegularTerm { vertex, removed: i, set: face, coeff: &factor * &canonical });
            let r = g
                .image(face)
                .project_wordlength(l - 1)
                .sub(&KElem::term(target, face, canonical))?;
            rest.push(RestTerm { vertex, removed: i, elem: r.scale(&factor) });
        }
    }
    Ok(TermClassification { target, block: l, vertices, coeffs: polys, regular, rest })
}

pub fn build_cancellation_graph(tc: &TermClassification) -> CancellationScheme {
    let mut graph = DiGraph::new(tc.vertices.len());
    // rest monomials keyed by (set, mono), in vertex order
    let mut pool: BTreeMap<(IndexSet, Mono), Vec<(MonomialTerm, bool)>> = BTreeMap::new();
    for r in &tc.rest {
        for (set, mono, c) in r.elem.monomial_terms() {
            let term = MonomialTerm { vertex: r.vertex, removed: r.removed, set, mono: mono.clone(), coeff: c.clone() };
            pool.entry((set, mono.clone())).or_default().push((term, false));
        }
    }
    let mut pairs = Vec::new();
    let mut uncancelled = Vec::new();
    for reg in &tc.regular {
        for (mono, c) in reg.coeff.terms().rev() {
            let term = MonomialTerm { vertex: reg.vertex, removed: reg.removed, set: reg.set, mono: mono.clone(), coeff: c.clone() };
            let partner = pool
                .get_mut(&(reg.set, mono.clone()))
                .and_then(|cands| cands.iter_mut().find(|(t, used)| !*used && t.vertex != reg.vertex));
            match partner {
                Some((rest_term, used)) => {
                    *used = true;
                    let mut residual = c + &rest_term.coeff;
                    if tc.target.char == Char::Two && !residual.is_zero() {
                        residual = if (residual.numer() % 2u8).is_zero() { BigRational::zero() } else { BigRational::one() };
                    }
                    graph.add_edge(reg.vertex, rest_term.vertex).expect("distinct vertices");
                    pairs.push(CancellationPair { regular: term, rest: rest_term.clone(), residual });
                }
                None => uncancelled.push(term),
            }
        }
    }
    CancellationScheme { graph, pairs, uncancelled }
}

/// Block coefficients under which one regular monomial of some block is
/// cancelled exactly by a rest monomial of another block. `None` when no
/// rest monomial shares an exterior index set with a foreign regular term.
/// The remaining blocks get random coefficients.
pub fn cancelling_coeffs<R: Rng + ?Sized>(
    g: &ChainMap,
    block: usize,
    rng: &mut R,
) -> Result<Option<BTreeMap<IndexSet, Poly>>> {
    let desc = g.source();
    let blocks: Vec<IndexSet> = (0..desc.nvars / block).map(|k| IndexSet::range(k * block + 1, block)).collect();
    let unit = Poly::one(desc.nvars, desc.char);
    let tc = classify_terms(g, &blocks.iter().map(|b| (*b, unit.clone())).collect())?;
    let mut candidates = Vec::new();
    for reg in &tc.regular {
        let (a, ca) = reg.coeff.leading_term().expect("regular terms are nonzero");
        for rest in tc.rest.iter().filter(|r| r.vertex != reg.vertex) {
            for (set, b, cb) in rest.elem.monomial_terms() {
                if set == reg.set {
                    candidates.push((reg.vertex, a.clone(), ca.clone(), rest.vertex, b.clone(), cb.clone()));
                }
            }
        }
    }
    if candidates.is_empty() {
        return Ok(None);
    }
    let (i, a, ca, j, b, cb) = candidates.swap_remove(rng.random_range(0..candidates.len()));
    let lcm = Mono::from_exponents(a.exponents().iter().zip(b.exponents()).map(|(x, y)| *x.max(y)).collect());
    let mut coeffs: BTreeMap<IndexSet, Poly> = blocks
        .iter()
        .map(|blk| (*blk, random_poly(desc.nvars, desc.char, 2, 2, rng)))
        .collect();
    coeffs.insert(tc.vertices[i], Poly::monomial(a.quotient(&lcm).expect("divides"), BigRational::one(), desc.char));
    let scale = -(ca / cb);
    coeffs.insert(tc.vertices[j], Poly::monomial(b.quotient(&lcm).expect("divides"), scale, desc.char));
    Ok(Some(coeffs))
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ContradictionWitness {
    /// Whether `gamma(v)` projected to word-length `l-1` is nonzero.
    pub nonzero: bool,
    pub expansion: KElem,
    pub three_acyclic: bool,
    pub sink_vertex: Option<usize>,
    pub sink_block: Option<IndexSet>,
    /// An uncancelled regular monomial of the sink, preferring one whose
    /// monomial is present in the expansion.
    pub surviving_term: Option<MonomialTerm>,
    /// The surviving term's monomial appears in the expansion.
    pub sink_term_survives: bool,
    pub classification: TermClassification,
    pub scheme: CancellationScheme,
}

pub fn contradiction_witness(g: &ChainMap, coeffs: &BTreeMap<IndexSet, Poly>) -> Result<ContradictionWitness> {
    let tc = classify_terms(g, coeffs)?;
    let v = coeffs.iter().try_fold(KElem::zero(g.source()), |acc, (set, p)| {
        acc.add(&KElem::basis(g.source(), *set).differential().scale(p))
    })?;
    let expansion = g.apply(&v)?.project_wordlength(tc.block - 1);
    let scheme = build_cancellation_graph(&tc);
    let three_acyclic = scheme.graph.is_l_acyclic(3)?;
    let nonzero = !expansion.is_zero();
    let mut sink_vertex = None;
    let mut surviving_term = None;
    let mut sink_term_survives = false;
    if three_acyclic {
        let sink = scheme.graph.find_3_sink()?;
        sink_vertex = Some(sink);
        let present = |t: &MonomialTerm| !expansion.coeff(t.set).coeff(&t.mono).is_zero();
        let own: Vec<&MonomialTerm> = scheme.uncancelled.iter().filter(|t| t.vertex == sink).collect();
        let chosen = own.iter().find(|t| present(t)).or(own.first());
        if let Some(t) = chosen {
            sink_term_survives = present(t);
            surviving_term = Some((*t).clone());
        }
    }
    Ok(ContradictionWitness {
        nonzero,
        expansion,
        three_acyclic,
        sink_block: sink_vertex.map(|v| tc.vertices[v]),
        sink_vertex,
        surviving_term,
        sink_term_survives,
        classification: tc,
        scheme,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::chain_map::Homotopy;

    fn desc(n: usize, m: u32) -> ComplexDescriptor {
        ComplexDescriptor::new(n, m, Char::Zero).unwrap()
    }

    fn one(d: ComplexDescriptor) -> Poly {
        Poly::one(d.nvars, d.char)
    }

    #[test]
    fn iota_has_no_rest_terms() {
        let d = desc(6, 1);
        let coeffs = BTreeMap::from([(IndexSet::of(&[1, 2, 3]), one(d)), (IndexSet::of(&[4, 5, 6]), one(d))]);
        let tc = classify_terms(&ChainMap::iota(d), &coeffs).unwrap();
        assert!(tc.rest.iter().all(|r| r.elem.is_zero()));
        assert_eq!(tc.regular.len(), 6);
        let scheme = build_cancellation_graph(&tc);
        assert!(scheme.graph.edges().is_empty());
        assert_eq!(scheme.uncancelled.len(), 6);
        let w = contradiction_witness(&ChainMap::iota(d), &coeffs).unwrap();
        assert!(w.nonzero && w.three_acyclic && w.sink_term_survives);
        assert_eq!(w.scheme.uncancelled.len(), 6);
        assert_eq!(w.expansion, tc.reconstruct());
    }

    #[test]
    fn single_block_regular_terms() {
        let d = desc(3, 2);
        let coeffs = BTreeMap::from([(IndexSet::of(&[1, 2, 3]), one(d))]);
        let tc = classify_terms(&ChainMap::iota(d), &coeffs).unwrap();
        assert_eq!(tc.regular.len(), 3);
        let t = d.with_level(0);
        let sum = tc.reconstruct();
        let expected = KElem::parse("t1^3*t2^2*t3^2 * s{2,3} - t1^2*t2^3*t3^2 * s{1,3} + t1^2*t2^2*t3^3 * s{1,2}", t).unwrap();
        assert_eq!(sum, expected);
        assert!(build_cancellation_graph(&tc).graph.edges().is_empty());
    }

    #[test]
    fn layout_errors() {
        let d = desc(6, 1);
        let g = ChainMap::iota(d);
        let zero = Poly::zero(6, Char::Zero);
        assert!(matches!(
            classify_terms(&g, &BTreeMap::from([(IndexSet::of(&[2, 3, 4]), one(d))])),
            Err(Error::UnsupportedLayout(_))
        ));
        assert!(matches!(
            classify_terms(&g, &BTreeMap::from([(IndexSet::of(&[1, 2]), one(d))])),
            Err(Error::UnsupportedLayout(_))
        ));
        assert!(classify_terms(&g, &BTreeMap::from([(IndexSet::of(&[1, 2, 3]), zero)])).is_err());
        assert!(classify_terms(&g, &BTreeMap::new()).is_err());
    }

    #[test]
    fn coefficient_outside_block_support() {
        let d = desc(7, 1);
        let coeffs = BTreeMap::from([(IndexSet::of(&[1, 2, 3]), Poly::var_pow(7, 7, 1, Char::Zero))]);
        let w = contradiction_witness(&ChainMap::iota(d), &coeffs).unwrap();
        assert!(w.nonzero);
    }

    #[test]
    fn engineered_edge_between_two_blocks() {
        // h(s_56) = t5 s_235 puts t5^2 s_23 into the rest part r_56
        let d = desc(6, 1);
        let t = d.with_level(0);
        let h = Homotopy::new(d, BTreeMap::from([(IndexSet::of(&[5, 6]), KElem::parse("t5 * s{2,3,5}", t).unwrap())])).unwrap();
        let g = ChainMap::iota(d).homotopy_perturb(&h).unwrap();
        let coeffs = BTreeMap::from([
            (IndexSet::of(&[1, 2, 3]), Poly::parse("t4^2*t5^2", 6, Char::Zero).unwrap()),
            (IndexSet::of(&[4, 5, 6]), Poly::parse("-t1^2*t2*t3", 6, Char::Zero).unwrap()),
        ]);
        let tc = classify_terms(&g, &coeffs).unwrap();
        for v in 0..2 {
            assert!(tc.rest_differential(v).is_zero());
        }
        let scheme = build_cancellation_graph(&tc);
        assert_eq!(scheme.graph.edges().iter().copied().collect::<Vec<_>>(), vec![(0, 1)]);
        assert_eq!(scheme.pairs.len(), 1);
        assert!(scheme.pairs[0].residual.is_zero());
        let w = contradiction_witness(&g, &coeffs).unwrap();
        assert!(w.nonzero && w.three_acyclic);
        assert_eq!(w.sink_vertex, Some(1));
        assert!(w.sink_term_survives);
        assert_eq!(w.expansion, tc.reconstruct());
    }

    #[test]
    fn cancelling_coeffs_produce_an_exact_pair() {
        use rand::SeedableRng;
        let d = desc(6, 1);
        let t = d.with_level(0);
        let h = Homotopy::new(d, BTreeMap::from([(IndexSet::of(&[5, 6]), KElem::parse("t5 * s{2,3,5}", t).unwrap())])).unwrap();
        let g = ChainMap::iota(d).homotopy_perturb(&h).unwrap();
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(4);
        let coeffs = cancelling_coeffs(&g, 3, &mut rng).unwrap().expect("r_56 meets s_23");
        let w = contradiction_witness(&g, &coeffs).unwrap();
        assert!(w.scheme.pairs.iter().any(|p| p.residual.is_zero()));
        assert!(w.scheme.graph.has_edge(0, 1));
        assert!(w.nonzero && w.sink_term_survives);
        assert!(cancelling_coeffs(&ChainMap::iota(d), 3, &mut rng).unwrap().is_none());
    }
}
