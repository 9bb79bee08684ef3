//! Submodules of `K_n(m)` on which every admissible `gamma` is injective,
//! rank checks on them, and the resulting lower bounds.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::bareiss::PolyMatrix;
use crate::chain_map::{rank_of_columns, ChainMap, Grading, RankMethod, RankOptions};
use crate::error::{Error, Result};
use crate::koszul::{ComplexDescriptor, IndexSet, KElem};
use crate::par;
use crate::poly::{Char, Poly};
use crate::sampling::{random_chain_map, trial_seed};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum CertificateKind {
    /// `d s_(3k+1,3k+2,3k+3)`.
    Triples,
    /// `d s_B` over consecutive blocks of the given size (at least 3).
    Blocks(usize),
    /// `1, s_1, s_(1,j)`, the triple differentials and the triples.
    Mixed,
    /// As `Mixed` plus every singleton `s_i`; characteristic zero only.
    MixedSingletons,
}

impl CertificateKind {
    pub fn name(self) -> String {
        match self {
            CertificateKind::Triples => "triples".into(),
            CertificateKind::Blocks(l) => format!("blocks{l}"),
            CertificateKind::Mixed => "mixed".into(),
            CertificateKind::MixedSingletons => "mixed-singletons".into(),
        }
    }

    /// Closed form for the number of generators.
    pub fn expected_count(self, n: usize) -> usize {
        match self {
            CertificateKind::Triples => n / 3,
            CertificateKind::Blocks(l) => n / l.max(1),
            CertificateKind::Mixed => n + 1 + 2 * (n / 3),
            CertificateKind::MixedSingletons => 2 * n + 2 * (n / 3),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Submodule {
    pub desc: ComplexDescriptor,
    pub generators: Vec<KElem>,
    pub labels: Vec<String>,
}

impl Submodule {
    pub fn len(&self) -> usize {
        self.generators.len()
    }

    pub fn is_empty(&self) -> bool {
        self.generators.is_empty()
    }

    fn push(&mut self, label: String, g: KElem) {
        self.labels.push(label);
        self.generators.push(g);
    }

    fn push_basis(&mut self, set: IndexSet) {
        self.push(set.to_string(), KElem::basis(self.desc, set));
    }

    fn push_boundary(&mut self, set: IndexSet) {
        self.push(format!("d {set}"), KElem::basis(self.desc, set).differential());
    }
}

pub fn certificate_generators(kind: CertificateKind, desc: ComplexDescriptor) -> Result<Submodule> {
    let n = desc.nvars;
    let mut sub = Submodule { desc, generators: Vec::new(), labels: Vec::new() };
    let triples: Vec<IndexSet> = (0..n / 3).map(|k| IndexSet::range(3 * k + 1, 3)).collect();
    match kind {
        CertificateKind::Blocks(l) if l < 3 => {
            return Err(Error::InvalidArgument(format!("block size must be at least 3, got {l}")));
        }
        CertificateKind::Blocks(l) => {
            for k in 0..n / l {
                sub.push_boundary(IndexSet::range(k * l + 1, l));
            }
        }
        CertificateKind::Triples => triples.iter().for_each(|t| sub.push_boundary(*t)),
        CertificateKind::Mixed | CertificateKind::MixedSingletons => {
            sub.push_basis(IndexSet::EMPTY);
            if kind == CertificateKind::Mixed {
                sub.push_basis(IndexSet::singleton(1));
            } else {
                (1..=n).for_each(|i| sub.push_basis(IndexSet::singleton(i)));
            }
            (2..=n).for_each(|j| sub.push_basis(IndexSet::of(&[1, j])));
            triples.iter().for_each(|t| sub.push_boundary(*t));
            triples.iter().for_each(|t| sub.push_basis(*t));
        }
    }
    Ok(sub)
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct InjectivityReport {
    pub injective: bool,
    pub rank: usize,
    pub expected: usize,
    /// Polynomial coefficients `x` with `sum_k x_k gamma(g_k) = 0`, from exact
    /// elimination.
    pub witness: Option<Vec<Poly>>,
}

/// Compares the rank of `gamma` on the span with the number of generators.
/// A deficient modular rank is rechecked exactly before a witness is built.
pub fn check_injectivity(g: &ChainMap, sub: &Submodule, opts: &RankOptions) -> Result<InjectivityReport> {
    let expected = sub.len();
    let images = sub.generators.iter().map(|x| g.apply(x)).collect::<Result<Vec<_>>>()?;
    let mut rank = rank_of_columns(g.target(), &images, opts)?;
    if rank == expected {
        return Ok(InjectivityReport { injective: true, rank, expected, witness: None });
    }
    let target = g.target();
    let basis = IndexSet::all(target.nvars);
    let cols: Vec<Vec<Poly>> = images.iter().map(|c| basis.iter().map(|s| c.coeff(*s)).collect()).collect();
    let matrix = PolyMatrix::from_columns(target.nvars, target.char, basis.len(), &cols);
    if opts.method == RankMethod::ModularProbabilistic {
        rank = matrix.rank()?;
        if rank == expected {
            return Ok(InjectivityReport { injective: true, rank, expected, witness: None });
        }
    }
    let witness = matrix.kernel_vector()?;
    Ok(InjectivityReport { injective: false, rank, expected, witness })
}

/// `2(n + floor(n/3))`.
pub fn theorem_a_bound(n: usize) -> usize {
    2 * (n + n / 3)
}

/// Strongest of the earlier bounds `2n` (n >= 2) and `2(n+1)` (n >= 3).
pub fn previous_bound(n: usize) -> usize {
    match n {
        0 => 1,
        1 => 2,
        2 => 4,
        _ => 2 * (n + 1),
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct BoundReport {
    pub n: usize,
    pub m: u32,
    pub char: Char,
    pub rank: usize,
    #[serde(rename = "theorem_A")]
    pub theorem_a: usize,
    pub eqn07: usize,
    #[serde(rename = "satisfies_A")]
    pub satisfies_a: bool,
    pub grading: Grading,
}

pub fn bound_report(g: &ChainMap, opts: &RankOptions) -> Result<BoundReport> {
    let s = g.source();
    let rank = g.rank_with(opts)?;
    let theorem_a = theorem_a_bound(s.nvars);
    Ok(BoundReport {
        n: s.nvars,
        m: s.level,
        char: s.char,
        rank,
        theorem_a,
        eqn07: previous_bound(s.nvars),
        satisfies_a: rank >= theorem_a,
        grading: g.grading_class(),
    })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Verdict {
    Injective,
    /// Injectivity fails where it is claimed unconditionally.
    Falsified,
    /// Fails for a map that only preserves the parity grading.
    HypothesisSensitive,
    NotApplicable,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CertificateCheck {
    pub kind: CertificateKind,
    pub report: Option<InjectivityReport>,
    pub verdict: Verdict,
}

/// The kinds checked for every map: triples, blocks of 4 and 5, mixed, and
/// mixed with singletons (characteristic zero only).
pub fn standard_kinds() -> [CertificateKind; 5] {
    [
        CertificateKind::Triples,
        CertificateKind::Blocks(4),
        CertificateKind::Blocks(5),
        CertificateKind::Mixed,
        CertificateKind::MixedSingletons,
    ]
}

pub fn certify_map(g: &ChainMap, opts: &RankOptions) -> Result<Vec<CertificateCheck>> {
    let desc = g.source();
    let grading = g.grading_class();
    standard_kinds()
        .into_iter()
        .map(|kind| {
            if kind == CertificateKind::MixedSingletons && desc.char == Char::Two {
                return Ok(CertificateCheck { kind, report: None, verdict: Verdict::NotApplicable });
            }
            let report = check_injectivity(g, &certificate_generators(kind, desc)?, opts)?;
            let verdict = match (report.injective, kind, grading) {
                (true, _, _) => Verdict::Injective,
                (false, CertificateKind::MixedSingletons, Grading::Parity | Grading::None) => Verdict::HypothesisSensitive,
                (false, _, _) => Verdict::Falsified,
            };
            Ok(CertificateCheck { kind, report: Some(report), verdict })
        })
        .collect()
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SearchOutcome {
    pub trials: usize,
    /// First trial (by index) whose map is not injective on the span.
    pub found: Option<(usize, ChainMap, Vec<Poly>)>,
}

/// Samples homotopy perturbations of `iota` and looks for one that is not
/// injective on the span of `generators`.
pub fn search_noninjective(
    desc: ComplexDescriptor,
    generators: &[KElem],
    grading: Grading,
    trials: usize,
    opts: &RankOptions,
) -> Result<SearchOutcome> {
    let sub = Submodule {
        desc,
        labels: generators.iter().map(|g| g.to_string()).collect(),
        generators: generators.to_vec(),
    };
    let exact = RankOptions { method: RankMethod::ExactFractionFree, ..*opts };
    let results = par::map_indexed(opts.exec, trials, |t| -> Result<Option<(usize, ChainMap, Vec<Poly>)>> {
        let mut rng = ChaCha8Rng::seed_from_u64(trial_seed(opts.seed, t as u64));
        let g = random_chain_map(desc, grading, &mut rng);
        let r = check_injectivity(&g, &sub, &exact)?;
        Ok(r.witness.map(|w| (t, g, w)))
    });
    let mut found = None;
    for r in results {
        if let Some(hit) = r? {
            found = Some(hit);
            break;
        }
    }
    Ok(SearchOutcome { trials, found })
}
