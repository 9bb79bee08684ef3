//! R-linear maps `gamma: K_n(m) -> K_n(0)` stored by the images of the `2^n`
//! exterior basis monomials `s_I^m`.

use std::collections::BTreeMap;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::bareiss::PolyMatrix;
use crate::error::{Error, Result};
use crate::field::{random_prime, Field, Gf2_64, PrimeField};
use crate::koszul::{ComplexDescriptor, IndexSet, KElem};
use crate::linalg;
use crate::par::{self, Execution};
use crate::poly::{Char, Mono, Poly};
use crate::sampling::trial_seed;

/// Grading hypotheses a map may satisfy.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Grading {
    /// Every image is homogeneous of the degree of its generator.
    Full,
    /// Degrees agree modulo 2.
    Parity,
    /// No constraint.
    None,
}

impl Grading {
    pub fn parse(s: &str) -> Result<Grading> {
        match s {
            "full" => Ok(Grading::Full),
            "parity" => Ok(Grading::Parity),
            "none" => Ok(Grading::None),
            other => Err(Error::InvalidArgument(format!("unknown grading {other:?}"))),
        }
    }

    pub fn as_str(self) -> &'static str {
        match self {
            Grading::Full => "full",
            Grading::Parity => "parity",
            Grading::None => "none",
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum RankMethod {
    /// Evaluate at random points of a large field, max over independent trials.
    ModularProbabilistic,
    /// Bareiss elimination over the polynomial ring.
    ExactFractionFree,
}

impl RankMethod {
    pub fn parse(s: &str) -> Result<RankMethod> {
        match s {
            "modular" => Ok(RankMethod::ModularProbabilistic),
            "exact" => Ok(RankMethod::ExactFractionFree),
            other => Err(Error::InvalidArgument(format!("unknown rank method {other:?}"))),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct RankOptions {
    pub method: RankMethod,
    /// Size of the random primes for characteristic zero (primes lie in
    /// `[2^(bits-1), 2^bits)`). Characteristic two always evaluates in GF(2^64).
    pub prime_bits: u32,
    pub trials: usize,
    pub seed: u64,
    pub exec: Execution,
}

impl Default for RankOptions {
    fn default() -> Self {
        RankOptions {
            method: RankMethod::ModularProbabilistic,
            prime_bits: 31,
            trials: 5,
            seed: 0x6b6f_737a_756c,
            exec: Execution::default(),
        }
    }
}

impl RankOptions {
    pub fn with_method(method: RankMethod) -> RankOptions {
        RankOptions { method, ..RankOptions::default() }
    }
}

/// Rank over `Frac(R)` of the matrix whose columns are the coefficient
/// vectors of `columns` in the exterior basis.
pub fn rank_of_columns(desc: ComplexDescriptor, columns: &[KElem], opts: &RankOptions) -> Result<usize> {
    let basis = IndexSet::all(desc.nvars);
    let cols: Vec<Vec<Poly>> = columns.iter().map(|c| basis.iter().map(|s| c.coeff(*s)).collect()).collect();
    match opts.method {
        RankMethod::ExactFractionFree => {
            PolyMatrix::from_columns(desc.nvars, desc.char, basis.len(), &cols).rank()
        }
        RankMethod::ModularProbabilistic => {
            let ranks = par::map_indexed(opts.exec, opts.trials.max(1), |trial| {
                modular_rank_trial(desc, &cols, basis.len(), opts, trial as u64)
            });
            ranks.into_iter().try_fold(0, |acc, r| Ok(acc.max(r?)))
        }
    }
}

fn modular_rank_trial(
    desc: ComplexDescriptor,
    cols: &[Vec<Poly>],
    nrows: usize,
    opts: &RankOptions,
    trial: u64,
) -> Result<usize> {
    let mut rng = ChaCha8Rng::seed_from_u64(trial_seed(opts.seed, trial));
    match desc.char {
        Char::Two => {
            let f = Gf2_64;
            let point: Vec<u64> = (0..desc.nvars).map(|_| f.random_nonzero(&mut rng)).collect();
            evaluated_rank(&f, &point, cols, nrows)
        }
        Char::Zero => {
            // A denominator divisible by the prime forces a fresh prime.
            let mut last_err = None;
            for _ in 0..16 {
                let p = random_prime(opts.prime_bits, &mut rng)?;
                let f = PrimeField::new(p)?;
                let point: Vec<u64> = (0..desc.nvars).map(|_| rand::Rng::random_range(&mut rng, 1..p)).collect();
                match evaluated_rank(&f, &point, cols, nrows) {
                    Err(e @ Error::DenominatorNotInvertible { .. }) => last_err = Some(e),
                    other => return other,
                }
            }
            Err(last_err.expect("at least one attempt"))
        }
    }
}

fn evaluated_rank<F: Field>(f: &F, point: &[F::Elem], cols: &[Vec<Poly>], nrows: usize) -> Result<usize> {
    let mut rows = vec![Vec::with_capacity(cols.len()); nrows];
    for col in cols {
        for (row, p) in rows.iter_mut().zip(col) {
            row.push(if p.is_zero() { f.zero() } else { p.eval(f, point)? });
        }
    }
    Ok(linalg::rank(f, rows))
}

/// Outcome of [`ChainMap::verify`].
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ChainMapReport {
    pub unital: bool,
    pub commutes: bool,
    /// Unitality plus the chain-map law. `H(K_n(0))` is `k` in degree 0,
    /// spanned by the class of 1, so these two imply that the map lifts the
    /// projection `R/(t^(m+1)) -> k`.
    pub lifts_projection: bool,
    pub failures: Vec<(IndexSet, String)>,
}

impl ChainMapReport {
    pub fn passes(&self) -> bool {
        self.lifts_projection
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ChainMap {
    source: ComplexDescriptor,
    images: BTreeMap<IndexSet, KElem>,
}

impl ChainMap {
    /// Missing images are zero. The target is `source` at level 0.
    pub fn new(source: ComplexDescriptor, images: BTreeMap<IndexSet, KElem>) -> Result<ChainMap> {
        let target = source.with_level(0);
        for (set, img) in &images {
            if set.max_index() > source.nvars {
                return Err(Error::DescriptorMismatch(format!("{set:?} outside 1..={}", source.nvars)));
            }
            if img.descriptor() != target {
                return Err(Error::DescriptorMismatch(format!(
                    "image of {set} lives in {:?}, expected {target:?}",
                    img.descriptor()
                )));
            }
        }
        let images = images.into_iter().filter(|(_, v)| !v.is_zero()).collect();
        Ok(ChainMap { source, images })
    }

    /// The multiplicative map `s_j^m -> t_j^m s_j^0`.
    pub fn iota(source: ComplexDescriptor) -> ChainMap {
        let target = source.with_level(0);
        let images = IndexSet::all(source.nvars)
            .into_iter()
            .map(|set| (set, KElem::term(target, set, monomial_power(source, set))))
            .collect();
        ChainMap { source, images }
    }

    pub fn source(&self) -> ComplexDescriptor {
        self.source
    }

    pub fn target(&self) -> ComplexDescriptor {
        self.source.with_level(0)
    }

    pub fn image(&self, set: IndexSet) -> KElem {
        self.images.get(&set).cloned().unwrap_or_else(|| KElem::zero(self.target()))
    }

    pub fn images(&self) -> &BTreeMap<IndexSet, KElem> {
        &self.images
    }

    pub fn with_image(&self, set: IndexSet, img: KElem) -> Result<ChainMap> {
        let mut images = self.images.clone();
        images.insert(set, img);
        ChainMap::new(self.source, images)
    }

    /// R-linear extension of the generator images.
    pub fn apply(&self, x: &KElem) -> Result<KElem> {
        if x.descriptor() != self.source {
            return Err(Error::DescriptorMismatch(format!(
                "argument lives in {:?}, map source is {:?}",
                x.descriptor(),
                self.source
            )));
        }
        let mut out = KElem::zero(self.target());
        for (set, p) in x.coeffs() {
            if let Some(img) = self.images.get(set) {
                out = out.add(&img.scale(p))?;
            }
        }
        Ok(out)
    }

    pub fn verify(&self) -> ChainMapReport {
        let mut failures = Vec::new();
        let one = KElem::one(self.target());
        let unital = self.image(IndexSet::EMPTY) == one;
        if !unital {
            failures.push((IndexSet::EMPTY, format!("gamma(1) = {} instead of 1", self.image(IndexSet::EMPTY))));
        }
        let mut commutes = true;
        for set in IndexSet::all(self.source.nvars) {
            let lhs = self.image(set).differential();
            let rhs = self.apply(&KElem::basis(self.source, set).differential()).expect("same source");
            if lhs != rhs {
                commutes = false;
                failures.push((set, format!("d(gamma({set})) = {lhs} but gamma(d {set}) = {rhs}")));
            }
        }
        ChainMapReport { unital, commutes, lifts_projection: unital && commutes, failures }
    }

    /// `gamma + d h + h d`.
    pub fn homotopy_perturb(&self, h: &Homotopy) -> Result<ChainMap> {
        if h.source != self.source {
            return Err(Error::DescriptorMismatch("homotopy and map have different sources".into()));
        }
        if !h.value(IndexSet::EMPTY).is_zero() {
            return Err(Error::UnitalityViolation);
        }
        let mut images = BTreeMap::new();
        for set in IndexSet::all(self.source.nvars) {
            let img = self
                .image(set)
                .add(&h.value(set).differential())?
                .add(&h.apply(&KElem::basis(self.source, set).differential())?)?;
            images.insert(set, img);
        }
        ChainMap::new(self.source, images)
    }

    pub fn is_degree_preserving(&self, mode: Grading) -> bool {
        let source = self.source;
        self.images.iter().all(|(set, img)| {
            let want = source.degree_of(*set);
            let degrees = img.term_degrees();
            match mode {
                Grading::Full => degrees.iter().all(|&d| d == want),
                Grading::Parity => degrees.iter().all(|&d| (d - want).rem_euclid(2) == 0),
                Grading::None => true,
            }
        })
    }

    /// Strongest grading hypothesis this map satisfies.
    pub fn grading_class(&self) -> Grading {
        if self.is_degree_preserving(Grading::Full) {
            Grading::Full
        } else if self.is_degree_preserving(Grading::Parity) {
            Grading::Parity
        } else {
            Grading::None
        }
    }

    pub fn rank(&self, method: RankMethod) -> Result<usize> {
        self.rank_with(&RankOptions::with_method(method))
    }

    pub fn rank_with(&self, opts: &RankOptions) -> Result<usize> {
        let cols: Vec<KElem> = IndexSet::all(self.source.nvars).into_iter().map(|s| self.image(s)).collect();
        rank_of_columns(self.target(), &cols, opts)
    }

    /// Rank of `gamma` restricted to the span of `generators`.
    pub fn restricted_rank(&self, generators: &[KElem], opts: &RankOptions) -> Result<usize> {
        let cols = generators.iter().map(|g| self.apply(g)).collect::<Result<Vec<_>>>()?;
        rank_of_columns(self.target(), &cols, opts)
    }

    /// Coefficient of `s_I^0` in `gamma(s_I^m)`.
    pub fn diagonal_coefficient(&self, set: IndexSet) -> Poly {
        self.image(set).coeff(set)
    }

    /// Whether the diagonal coefficient is exactly `t_I^m`.
    pub fn diagonal_is_canonical(&self, set: IndexSet) -> bool {
        self.diagonal_coefficient(set) == monomial_power(self.source, set)
    }

    pub fn to_json(&self) -> String {
        let images = IndexSet::all(self.source.nvars)
            .into_iter()
            .map(|s| (s.to_list(), self.image(s).to_string()))
            .collect();
        let doc = ChainMapJson { n: self.source.nvars, m: self.source.level, char: self.source.char, images };
        serde_json::to_string(&doc).expect("serializable")
    }

    pub fn from_json(text: &str) -> Result<ChainMap> {
        let doc: ChainMapJson = serde_json::from_str(text)?;
        let source = ComplexDescriptor::new(doc.n, doc.m, doc.char)?;
        let target = source.with_level(0);
        let mut images = BTreeMap::new();
        for (key, value) in &doc.images {
            let set = IndexSet::parse_list(key)?;
            images.insert(set, KElem::parse(value, target)?);
        }
        ChainMap::new(source, images)
    }
}

/// `prod_{i in I} t_i^m`.
pub fn monomial_power(desc: ComplexDescriptor, set: IndexSet) -> Poly {
    let mut exps = vec![0u32; desc.nvars];
    for i in set.indices() {
        exps[i - 1] = desc.level;
    }
    Poly::monomial(Mono::from_exponents(exps), num_traits::One::one(), desc.char)
}

#[derive(Serialize, Deserialize)]
struct ChainMapJson {
    n: usize,
    m: u32,
    char: Char,
    images: BTreeMap<String, String>,
}

/// R-linear map `K_n(m) -> K_n(0)` of degree -1, given on generators.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Homotopy {
    source: ComplexDescriptor,
    values: BTreeMap<IndexSet, KElem>,
}

impl Homotopy {
    pub fn zero(source: ComplexDescriptor) -> Homotopy {
        Homotopy { source, values: BTreeMap::new() }
    }

    pub fn new(source: ComplexDescriptor, values: BTreeMap<IndexSet, KElem>) -> Result<Homotopy> {
        let target = source.with_level(0);
        if let Some((set, _)) = values.iter().find(|(_, v)| v.descriptor() != target) {
            return Err(Error::DescriptorMismatch(format!("homotopy value at {set} is not in K_n(0)")));
        }
        let values = values.into_iter().filter(|(_, v)| !v.is_zero()).collect();
        Ok(Homotopy { source, values })
    }

    pub fn source(&self) -> ComplexDescriptor {
        self.source
    }

    pub fn value(&self, set: IndexSet) -> KElem {
        self.values.get(&set).cloned().unwrap_or_else(|| KElem::zero(self.source.with_level(0)))
    }

    pub fn values(&self) -> &BTreeMap<IndexSet, KElem> {
        &self.values
    }

    pub fn apply(&self, x: &KElem) -> Result<KElem> {
        if x.descriptor() != self.source {
            return Err(Error::DescriptorMismatch("homotopy argument".into()));
        }
        let mut out = KElem::zero(self.source.with_level(0));
        for (set, p) in x.coeffs() {
            if let Some(v) = self.values.get(set) {
                out = out.add(&v.scale(p))?;
            }
        }
        Ok(out)
    }
}
