//! Filtered free cochain complexes over `R = k[t1..tn]` and maps between
//! them: `alpha: K_n(m) -> C` and `beta: C -> K_n(0)`, whose composite is a
//! unital chain map `K_n(m) -> K_n(0)` of rank at most the rank of `C`.
//!
//! All cohomology computations are degreewise over `k`, truncated at a
//! caller-supplied maximal degree.

use std::collections::{BTreeMap, HashMap};

use num_rational::BigRational;
use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use crate::chain_map::{monomial_power, ChainMap};
use crate::error::{Error, Result};
use crate::field::{Field, Gf2, Rationals};
use crate::koszul::{compositions, ComplexDescriptor, IndexSet, KElem};
use crate::linalg;
use crate::par::{self, Execution};
use crate::poly::{Char, Mono, Poly};

/// Element `sum_j p_j e_j` of a free complex, zero coefficients omitted.
pub type FreeElem = BTreeMap<usize, Poly>;

fn add_into(x: &mut FreeElem, j: usize, p: Poly) {
    if p.is_zero() {
        return;
    }
    match x.get_mut(&j) {
        Some(q) => {
            *q = &*q + &p;
            if q.is_zero() {
                x.remove(&j);
            }
        }
        None => {
            x.insert(j, p);
        }
    }
}

fn add_scaled(x: &mut FreeElem, y: &FreeElem, p: &Poly) {
    for (j, q) in y {
        add_into(x, *j, p * q);
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Generator {
    pub name: String,
    pub degree: i64,
    /// Filtration level, starting at 1.
    pub level: u32,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FiltComplex {
    nvars: usize,
    char: Char,
    basis: Vec<Generator>,
    /// `diff[j] = d(e_j)`.
    diff: Vec<FreeElem>,
    augmentation: Vec<BigRational>,
    /// Set when the basis is `s_I`, `I` in [`IndexSet::all`] order.
    koszul: Option<ComplexDescriptor>,
}

impl FiltComplex {
    /// `diff` holds triplets `(row, col, p)`: `d(e_col)` has coefficient `p`
    /// at `e_row`.
    pub fn new(
        nvars: usize,
        char: Char,
        basis: Vec<Generator>,
        diff: Vec<(usize, usize, Poly)>,
        augmentation: Vec<BigRational>,
    ) -> Result<FiltComplex> {
        let len = basis.len();
        if augmentation.len() != len {
            return Err(Error::InvalidComplex(format!("{} augmentation values for {len} generators", augmentation.len())));
        }
        let mut cols = vec![FreeElem::new(); len];
        for (row, col, p) in diff {
            if row >= len || col >= len {
                return Err(Error::InvalidComplex(format!("differential entry ({row}, {col}) outside the basis")));
            }
            if p.nvars() != nvars || p.char() != char {
                return Err(Error::InvalidComplex(format!("entry {p} lives in the wrong ring")));
            }
            add_into(&mut cols[col], row, p);
        }
        let augmentation = augmentation
            .into_iter()
            .map(|q| reduce_scalar(char, q))
            .collect::<Result<Vec<_>>>()?;
        Ok(FiltComplex { nvars, char, basis, diff: cols, augmentation, koszul: None })
    }

    /// `K_n(m)` with basis `s_I`, level `|I| + 1` and augmentation `s_{} -> 1`.
    pub fn koszul(desc: ComplexDescriptor) -> FiltComplex {
        let sets = IndexSet::all(desc.nvars);
        let index: BTreeMap<IndexSet, usize> = sets.iter().enumerate().map(|(i, s)| (*s, i)).collect();
        let basis = sets
            .iter()
            .map(|s| Generator { name: s.to_string(), degree: desc.degree_of(*s), level: s.len() as u32 + 1 })
            .collect();
        let diff = sets
            .iter()
            .map(|s| {
                KElem::basis(desc, *s).differential().coeffs().iter().map(|(t, p)| (index[t], p.clone())).collect()
            })
            .collect();
        let augmentation = sets
            .iter()
            .map(|s| if s.is_empty() { BigRational::one() } else { BigRational::zero() })
            .collect();
        FiltComplex { nvars: desc.nvars, char: desc.char, basis, diff, augmentation, koszul: Some(desc) }
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    pub fn char(&self) -> Char {
        self.char
    }

    pub fn len(&self) -> usize {
        self.basis.len()
    }

    pub fn is_empty(&self) -> bool {
        self.basis.is_empty()
    }

    pub fn basis(&self) -> &[Generator] {
        &self.basis
    }

    pub fn diff_of(&self, j: usize) -> &FreeElem {
        &self.diff[j]
    }

    pub fn augmentation(&self) -> &[BigRational] {
        &self.augmentation
    }

    pub fn koszul_descriptor(&self) -> Option<ComplexDescriptor> {
        self.koszul
    }

    pub fn generator(&self, j: usize) -> FreeElem {
        FreeElem::from([(j, Poly::one(self.nvars, self.char))])
    }

    pub fn differential(&self, x: &FreeElem) -> FreeElem {
        let mut out = FreeElem::new();
        for (j, p) in x {
            add_scaled(&mut out, &self.diff[*j], p);
        }
        out
    }

    /// `eps(sum p_j e_j) = sum p_j(0) eps(e_j)`.
    pub fn augment(&self, x: &FreeElem) -> BigRational {
        let origin = Mono::one(self.nvars);
        let total = x.iter().fold(BigRational::zero(), |acc, (j, p)| acc + p.coeff(&origin) * &self.augmentation[*j]);
        reduce_scalar(self.char, total).expect("odd denominators")
    }

    /// Graded degrees of the terms of `x`.
    pub fn term_degrees(&self, x: &FreeElem) -> Vec<i64> {
        let mut out: Vec<i64> = x
            .iter()
            .flat_map(|(j, p)| {
                let base = self.basis[*j].degree;
                p.terms().map(move |(m, _)| base + m.graded_degree(self.char))
            })
            .collect();
        out.sort_unstable();
        out.dedup();
        out
    }

    /// Highest filtration level occurring in `x`.
    pub fn max_level(&self, x: &FreeElem) -> u32 {
        x.keys().map(|j| self.basis[*j].level).max().unwrap_or(0)
    }

    /// Same complex with generator `j` moved to position `perm[j]`.
    pub fn permuted(&self, perm: &[usize]) -> Result<FiltComplex> {
        check_permutation(perm, self.len())?;
        let mut basis = self.basis.clone();
        let mut diff = vec![FreeElem::new(); self.len()];
        let mut augmentation = self.augmentation.clone();
        for j in 0..self.len() {
            basis[perm[j]] = self.basis[j].clone();
            augmentation[perm[j]] = self.augmentation[j].clone();
            diff[perm[j]] = permute_elem(&self.diff[j], perm);
        }
        let identity = perm.iter().enumerate().all(|(i, p)| i == *p);
        Ok(FiltComplex { basis, diff, augmentation, koszul: self.koszul.filter(|_| identity), ..*self })
    }

    pub fn to_kelem(&self, x: &FreeElem) -> Result<KElem> {
        let desc = self.koszul.ok_or_else(|| Error::InvalidArgument("complex is not a Koszul complex".into()))?;
        let sets = IndexSet::all(desc.nvars);
        Ok(KElem::from_terms(desc, x.iter().map(|(j, p)| (sets[*j], p.clone()))))
    }

    pub fn from_kelem(&self, x: &KElem) -> Result<FreeElem> {
        let desc = self.koszul.ok_or_else(|| Error::InvalidArgument("complex is not a Koszul complex".into()))?;
        if x.descriptor() != desc {
            return Err(Error::DescriptorMismatch(format!("{:?} vs {desc:?}", x.descriptor())));
        }
        let sets = IndexSet::all(desc.nvars);
        let index: BTreeMap<IndexSet, usize> = sets.iter().enumerate().map(|(i, s)| (*s, i)).collect();
        Ok(x.coeffs().iter().map(|(s, p)| (index[s], p.clone())).collect())
    }

    /// The `k`-basis `t^a e_j` of the degree-`k` part.
    fn space(&self, k: i64) -> Space {
        let tdeg = self.char.t_degree();
        let mut elems = Vec::new();
        for (j, g) in self.basis.iter().enumerate() {
            let rest = k - g.degree;
            if rest < 0 || rest % tdeg != 0 {
                continue;
            }
            for exps in compositions((rest / tdeg) as u32, self.nvars) {
                elems.push((j, Mono::from_exponents(exps)));
            }
        }
        let index = elems.iter().cloned().enumerate().map(|(i, e)| (e, i)).collect();
        Space { elems, index }
    }

    fn coords<F: Field>(&self, f: &F, space: &Space, x: &FreeElem) -> Result<Vec<F::Elem>> {
        let mut v = vec![f.zero(); space.elems.len()];
        for (j, p) in x {
            for (m, c) in p.terms() {
                let i = space
                    .index
                    .get(&(*j, m.clone()))
                    .ok_or_else(|| Error::InvalidComplex(format!("term {m} e_{j} has the wrong degree")))?;
                v[*i] = f.add(&v[*i], &f.from_rational(c)?);
            }
        }
        Ok(v)
    }

    /// Matrix of `d` from degree `k` to `k+1` (rows index degree `k+1`).
    fn diff_matrix<F: Field>(&self, f: &F, src: &Space, dst: &Space) -> Result<Vec<Vec<F::Elem>>> {
        let mut rows = vec![vec![f.zero(); src.elems.len()]; dst.elems.len()];
        for (col, (j, a)) in src.elems.iter().enumerate() {
            let image: FreeElem = self.diff[*j].iter().map(|(i, p)| (*i, p.mul_mono(a, &BigRational::one()))).collect();
            for (row, c) in self.coords(f, dst, &image)?.into_iter().enumerate() {
                rows[row][col] = c;
            }
        }
        Ok(rows)
    }

    /// `dim_k H^k` for `lo <= k <= hi`.
    pub fn cohomology_dims(&self, lo: i64, hi: i64, exec: Execution) -> Result<BTreeMap<i64, usize>> {
        match self.char {
            Char::Zero => self.cohomology_over(&Rationals, lo, hi, exec),
            Char::Two => self.cohomology_over(&Gf2, lo, hi, exec),
        }
    }

    fn cohomology_over<F: Field>(&self, f: &F, lo: i64, hi: i64, exec: Execution) -> Result<BTreeMap<i64, usize>> {
        if hi < lo {
            return Ok(BTreeMap::new());
        }
        // rank of d leaving degree lo-1+i
        let ranks = par::map_indexed(exec, (hi - lo + 2) as usize, |i| -> Result<usize> {
            let k = lo - 1 + i as i64;
            let (src, dst) = (self.space(k), self.space(k + 1));
            Ok(linalg::rank(f, self.diff_matrix(f, &src, &dst)?))
        });
        let ranks = ranks.into_iter().collect::<Result<Vec<_>>>()?;
        Ok((lo..=hi)
            .map(|k| {
                let i = (k - lo) as usize;
                (k, self.space(k).elems.len() - ranks[i + 1] - ranks[i])
            })
            .collect())
    }

    /// Some `x` of degree `k` with `d x = rhs`.
    pub fn solve_differential(&self, k: i64, rhs: &FreeElem) -> Result<Option<FreeElem>> {
        match self.char {
            Char::Zero => self.solve_over(&Rationals, k, rhs, false),
            Char::Two => self.solve_over(&Gf2, k, rhs, false),
        }
    }

    /// A degree-0 cocycle with augmentation 1.
    pub fn augmented_unit(&self) -> Result<Option<FreeElem>> {
        match self.char {
            Char::Zero => self.solve_over(&Rationals, 0, &FreeElem::new(), true),
            Char::Two => self.solve_over(&Gf2, 0, &FreeElem::new(), true),
        }
    }

    fn solve_over<F: Field + ToRational>(&self, f: &F, k: i64, rhs: &FreeElem, unit: bool) -> Result<Option<FreeElem>> {
        let (src, dst) = (self.space(k), self.space(k + 1));
        let mut a = self.diff_matrix(f, &src, &dst)?;
        let mut b = self.coords(f, &dst, rhs)?;
        if unit {
            a.push(
                src.elems
                    .iter()
                    .map(|(j, m)| if m.is_one() { f.from_rational(&self.augmentation[*j]) } else { Ok(f.zero()) })
                    .collect::<Result<Vec<_>>>()?,
            );
            b.push(f.one());
        }
        let Some(x) = linalg::solve(f, &a, src.elems.len(), &b) else {
            return Ok(None);
        };
        let mut out = FreeElem::new();
        for ((j, m), c) in src.elems.iter().zip(&x) {
            if !f.is_zero(c) {
                add_into(&mut out, *j, Poly::monomial(m.clone(), f.to_rational(c), self.char));
            }
        }
        Ok(Some(out))
    }

    pub fn verify_filtration(&self) -> FiltrationReport {
        let mut failures = Vec::new();
        let mut d_squared_zero = true;
        let mut lowering = true;
        let mut degrees_consistent = true;
        let mut augmentation_chain = true;
        let tdeg = self.char.t_degree();
        for (j, g) in self.basis.iter().enumerate() {
            let dd = self.differential(&self.diff[j]);
            if !dd.is_empty() {
                d_squared_zero = false;
                failures.push(format!("d(d({})) != 0", g.name));
            }
            for (i, p) in &self.diff[j] {
                let target = &self.basis[*i];
                if target.level >= g.level {
                    lowering = false;
                    failures.push(format!("d({}) meets {} at level {} >= {}", g.name, target.name, target.level, g.level));
                }
                for (m, _) in p.terms() {
                    if target.degree + tdeg * m.total_degree() as i64 != g.degree + 1 {
                        degrees_consistent = false;
                        failures.push(format!("d({}) has a term {m} {} of the wrong degree", g.name, target.name));
                    }
                }
            }
            if !self.augment(&self.diff[j]).is_zero() {
                augmentation_chain = false;
                failures.push(format!("eps(d({})) != 0", g.name));
            }
        }
        let mut levels: Vec<u32> = self.basis.iter().map(|g| g.level).collect();
        levels.sort_unstable();
        levels.dedup();
        let levels_proper = levels.first() == Some(&1) && levels.windows(2).all(|w| w[1] == w[0] + 1);
        if !levels_proper {
            failures.push(format!("filtration levels {levels:?} are not 1..=L"));
        }
        let augmentation_surjective = degrees_consistent && matches!(self.augmented_unit(), Ok(Some(_)));
        if !augmentation_surjective {
            failures.push("no degree-0 cocycle has augmentation 1".into());
        }
        FiltrationReport {
            d_squared_zero,
            levels_proper,
            lowering,
            degrees_consistent,
            augmentation_chain,
            augmentation_surjective,
            failures,
        }
    }

    fn to_doc(&self) -> FiltComplexJson {
        let diff = self
            .diff
            .iter()
            .enumerate()
            .flat_map(|(col, x)| x.iter().map(move |(row, p)| (*row, col, p.to_string())))
            .collect();
        FiltComplexJson {
            nvars: self.nvars,
            char: self.char,
            basis: self.basis.clone(),
            diff,
            augmentation: self.augmentation.iter().map(|q| q.to_string()).collect(),
            koszul: self.koszul,
        }
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(&self.to_doc()).expect("serializable")
    }

    /// Parses and checks every invariant of [`FiltComplex::verify_filtration`].
    pub fn from_json(text: &str) -> Result<FiltComplex> {
        FiltComplex::from_doc(serde_json::from_str(text)?)
    }

    fn from_doc(doc: FiltComplexJson) -> Result<FiltComplex> {
        let diff = doc
            .diff
            .iter()
            .map(|(r, c, p)| Ok((*r, *c, Poly::parse(p, doc.nvars, doc.char)?)))
            .collect::<Result<Vec<_>>>()?;
        let augmentation = doc
            .augmentation
            .iter()
            .map(|s| crate::poly::parse_rational(s))
            .collect::<Result<Vec<_>>>()?;
        let mut c = FiltComplex::new(doc.nvars, doc.char, doc.basis, diff, augmentation)?;
        if let Some(desc) = doc.koszul {
            let expected = FiltComplex::koszul(desc);
            if expected != (FiltComplex { koszul: Some(desc), ..c.clone() }) {
                return Err(Error::InvalidComplex("declared Koszul complex does not match its data".into()));
            }
            c.koszul = Some(desc);
        }
        let report = c.verify_filtration();
        if !report.passes() {
            return Err(Error::InvalidComplex(report.failures.join("; ")));
        }
        Ok(c)
    }
}

trait ToRational: Field {
    fn to_rational(&self, e: &Self::Elem) -> BigRational;
}

impl ToRational for Rationals {
    fn to_rational(&self, e: &BigRational) -> BigRational {
        e.clone()
    }
}

impl ToRational for Gf2 {
    fn to_rational(&self, e: &bool) -> BigRational {
        if *e {
            BigRational::one()
        } else {
            BigRational::zero()
        }
    }
}

fn reduce_scalar(ch: Char, q: BigRational) -> Result<BigRational> {
    match ch {
        Char::Zero => Ok(q),
        Char::Two => Ok(Gf2.to_rational(&Gf2.from_rational(&q)?)),
    }
}

fn check_permutation(perm: &[usize], len: usize) -> Result<()> {
    let mut seen = vec![false; len];
    if perm.len() != len || perm.iter().any(|&p| p >= len || std::mem::replace(&mut seen[p], true)) {
        return Err(Error::InvalidArgument(format!("not a permutation of 0..{len}")));
    }
    Ok(())
}

fn permute_elem(x: &FreeElem, perm: &[usize]) -> FreeElem {
    x.iter().map(|(j, p)| (perm[*j], p.clone())).collect()
}

struct Space {
    elems: Vec<(usize, Mono)>,
    index: HashMap<(usize, Mono), usize>,
}

#[derive(Serialize, Deserialize)]
struct FiltComplexJson {
    nvars: usize,
    char: Char,
    basis: Vec<Generator>,
    diff: Vec<(usize, usize, String)>,
    augmentation: Vec<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    koszul: Option<ComplexDescriptor>,
}

#[derive(Serialize, Deserialize)]
struct ComplexMapJson {
    source: FiltComplexJson,
    target: FiltComplexJson,
    images: Vec<BTreeMap<usize, String>>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FiltrationReport {
    pub d_squared_zero: bool,
    pub levels_proper: bool,
    pub lowering: bool,
    pub degrees_consistent: bool,
    /// `eps o d = 0`.
    pub augmentation_chain: bool,
    pub augmentation_surjective: bool,
    pub failures: Vec<String>,
}

impl FiltrationReport {
    pub fn passes(&self) -> bool {
        self.d_squared_zero
            && self.levels_proper
            && self.lowering
            && self.degrees_consistent
            && self.augmentation_chain
            && self.augmentation_surjective
    }
}

/// R-linear map between free complexes, given on the source basis.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ComplexMap {
    source: FiltComplex,
    target: FiltComplex,
    images: Vec<FreeElem>,
}

impl ComplexMap {
    pub fn new(source: FiltComplex, target: FiltComplex, images: Vec<FreeElem>) -> Result<ComplexMap> {
        if images.len() != source.len() {
            return Err(Error::InvalidArgument(format!("{} images for {} generators", images.len(), source.len())));
        }
        if source.nvars != target.nvars || source.char != target.char {
            return Err(Error::DescriptorMismatch("source and target live over different rings".into()));
        }
        if images.iter().flat_map(|x| x.keys()).any(|&j| j >= target.len()) {
            return Err(Error::InvalidArgument("image outside the target basis".into()));
        }
        Ok(ComplexMap { source, target, images })
    }

    /// Source, target and the images as `{target index: polynomial}` maps.
    pub fn to_json(&self) -> String {
        let doc = ComplexMapJson {
            source: self.source.to_doc(),
            target: self.target.to_doc(),
            images: self.images.iter().map(|x| x.iter().map(|(j, p)| (*j, p.to_string())).collect()).collect(),
        };
        serde_json::to_string_pretty(&doc).expect("serializable")
    }

    pub fn from_json(text: &str) -> Result<ComplexMap> {
        let doc: ComplexMapJson = serde_json::from_str(text)?;
        let source = FiltComplex::from_doc(doc.source)?;
        let target = FiltComplex::from_doc(doc.target)?;
        let images = doc
            .images
            .iter()
            .map(|x| x.iter().map(|(j, p)| Ok((*j, Poly::parse(p, source.nvars, source.char)?))).collect())
            .collect::<Result<Vec<FreeElem>>>()?;
        ComplexMap::new(source, target, images)
    }

    pub fn identity(c: &FiltComplex) -> ComplexMap {
        let images = (0..c.len()).map(|j| c.generator(j)).collect();
        ComplexMap { source: c.clone(), target: c.clone(), images }
    }

    pub fn source(&self) -> &FiltComplex {
        &self.source
    }

    pub fn target(&self) -> &FiltComplex {
        &self.target
    }

    pub fn images(&self) -> &[FreeElem] {
        &self.images
    }

    pub fn apply(&self, x: &FreeElem) -> FreeElem {
        let mut out = FreeElem::new();
        for (j, p) in x {
            add_scaled(&mut out, &self.images[*j], p);
        }
        out
    }

    /// Generators where `d f != f d`.
    pub fn chain_failures(&self) -> Vec<String> {
        (0..self.source.len())
            .filter(|&j| self.target.differential(&self.images[j]) != self.apply(self.source.diff_of(j)))
            .map(|j| format!("d f({0}) != f(d {0})", self.source.basis[j].name))
            .collect()
    }

    /// `other o self`.
    pub fn then(&self, other: &ComplexMap) -> Result<ComplexMap> {
        if self.target != other.source {
            return Err(Error::DescriptorMismatch("maps are not composable".into()));
        }
        let images = self.images.iter().map(|x| other.apply(x)).collect();
        ComplexMap::new(self.source.clone(), other.target.clone(), images)
    }

    /// Same map after permuting the target basis (see [`FiltComplex::permuted`]).
    pub fn with_target_permuted(&self, perm: &[usize]) -> Result<ComplexMap> {
        let target = self.target.permuted(perm)?;
        let images = self.images.iter().map(|x| permute_elem(x, perm)).collect();
        ComplexMap::new(self.source.clone(), target, images)
    }

    pub fn with_source_permuted(&self, perm: &[usize]) -> Result<ComplexMap> {
        let source = self.source.permuted(perm)?;
        let mut images = vec![FreeElem::new(); self.images.len()];
        for (j, x) in self.images.iter().enumerate() {
            images[perm[j]] = x.clone();
        }
        ComplexMap::new(source, self.target.clone(), images)
    }
}

/// First degree in which the lifting hypothesis asks cohomology to vanish:
/// `(m+1) deg t`, just above the top of `R/(t^(m+1))`.
pub fn vanishing_threshold(m: u32, ch: Char) -> i64 {
    (m as i64 + 1) * ch.t_degree()
}

/// `(m+2) n deg t`.
pub fn default_max_degree(nvars: usize, m: u32, ch: Char) -> i64 {
    (m as i64 + 2) * nvars as i64 * ch.t_degree()
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AlphaReport {
    pub chain_map: bool,
    /// `eps(alpha(t^a)) = [a = 0]` for all `a` with entries `<= m`.
    pub projection: bool,
    /// Target cohomology vanishes from the threshold up to the truncation.
    pub hypothesis_holds: bool,
    pub failures: Vec<String>,
}

impl AlphaReport {
    /// The map properties; the vanishing hypothesis is reported separately.
    pub fn passes(&self) -> bool {
        self.chain_map && self.projection
    }
}

fn source_koszul(a: &ComplexMap) -> Result<ComplexDescriptor> {
    a.source
        .koszul
        .ok_or_else(|| Error::InvalidArgument("alpha must start at a Koszul complex".into()))
}

/// Degrees in `[threshold, max_degree]` where the target has cohomology.
fn nonvanishing_degrees(c: &FiltComplex, m: u32, max_degree: i64, exec: Execution) -> Result<Vec<(i64, usize)>> {
    let dims = c.cohomology_dims(vanishing_threshold(m, c.char), max_degree, exec)?;
    Ok(dims.into_iter().filter(|(_, h)| *h > 0).collect())
}

pub fn verify_alpha(a: &ComplexMap, max_degree: i64, exec: Execution) -> Result<AlphaReport> {
    let desc = source_koszul(a)?;
    let mut failures = a.chain_failures();
    let chain_map = failures.is_empty();
    let unit = a.apply(&a.source.generator(0));
    let mut projection = true;
    for exps in (0..=desc.level.saturating_mul(desc.nvars as u32)).flat_map(|d| compositions(d, desc.nvars)) {
        if exps.iter().any(|&e| e > desc.level) {
            continue;
        }
        let is_unit = exps.iter().all(|&e| e == 0);
        let shifted: FreeElem =
            unit.iter().map(|(j, p)| (*j, p.mul_mono(&Mono::from_exponents(exps.clone()), &BigRational::one()))).collect();
        let want = if is_unit { BigRational::one() } else { BigRational::zero() };
        if a.target.augment(&shifted) != want {
            projection = false;
            failures.push(format!("eps(alpha(t^{exps:?})) != {want}"));
        }
    }
    let bad = nonvanishing_degrees(&a.target, desc.level, max_degree, exec)?;
    for (k, h) in &bad {
        failures.push(format!("H^{k} of the target has dimension {h}"));
    }
    Ok(AlphaReport { chain_map, projection, hypothesis_holds: bad.is_empty(), failures })
}

/// Checks the vanishing hypothesis, then lifts generator by generator.
pub fn construct_alpha(c: &FiltComplex, m: u32, max_degree: i64, exec: Execution) -> Result<ComplexMap> {
    let bad = nonvanishing_degrees(c, m, max_degree, exec)?;
    if let Some((k, h)) = bad.first() {
        return Err(Error::HypothesisFailure(format!("H^{k} has dimension {h}")));
    }
    lift_alpha(c, m, max_degree)
}

/// `alpha(1)` is a degree-0 cocycle with augmentation 1; each `alpha(s_I)`
/// solves `d x = alpha(d s_I)` in degree `deg s_I`, by increasing `|I|`.
/// Does not check the vanishing hypothesis, so it also applies to targets
/// such as `K_n(m)` itself where the systems happen to be solvable.
pub fn lift_alpha(c: &FiltComplex, m: u32, max_degree: i64) -> Result<ComplexMap> {
    let desc = ComplexDescriptor::new(c.nvars, m, c.char)?;
    let source = FiltComplex::koszul(desc);
    let unit = c
        .augmented_unit()?
        .ok_or_else(|| Error::HypothesisFailure("augmentation is not surjective in cohomology".into()))?;
    let mut images = vec![FreeElem::new(); source.len()];
    images[0] = unit;
    for (j, set) in IndexSet::all(desc.nvars).into_iter().enumerate().skip(1) {
        let k = desc.degree_of(set);
        if k > max_degree {
            return Err(Error::TruncationTooSmall(k));
        }
        let mut rhs = FreeElem::new();
        for (i, p) in source.diff_of(j) {
            add_scaled(&mut rhs, &images[*i], p);
        }
        images[j] = c
            .solve_differential(k, &rhs)?
            .ok_or_else(|| Error::HypothesisFailure(format!("alpha(d {set}) is not a boundary in degree {}", k + 1)))?;
    }
    ComplexMap::new(source, c.clone(), images)
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BetaReport {
    pub chain_map: bool,
    /// Level-`i` generators map into levels `<= i`.
    pub filtration: bool,
    pub augmentation: bool,
    pub failures: Vec<String>,
}

impl BetaReport {
    pub fn passes(&self) -> bool {
        self.chain_map && self.filtration && self.augmentation
    }
}

pub fn verify_beta(b: &ComplexMap) -> BetaReport {
    let mut failures = b.chain_failures();
    let chain_map = failures.is_empty();
    let (mut filtration, mut augmentation) = (true, true);
    for (j, g) in b.source.basis.iter().enumerate() {
        let img = &b.images[j];
        let level = b.target.max_level(img);
        if level > g.level {
            filtration = false;
            failures.push(format!("{} at level {} maps to level {level}", g.name, g.level));
        }
        if b.target.augment(img) != b.source.augmentation[j] {
            augmentation = false;
            failures.push(format!("eps(beta({})) != eps({})", g.name, g.name));
        }
    }
    BetaReport { chain_map, filtration, augmentation, failures }
}

/// `beta o alpha` as a map `K_n(m) -> K_n(0)`.
pub fn compose_to_gamma(a: &ComplexMap, b: &ComplexMap) -> Result<ChainMap> {
    let source = source_koszul(a)?;
    let target = b
        .target
        .koszul
        .ok_or_else(|| Error::InvalidArgument("beta must end at a Koszul complex".into()))?;
    if target != source.with_level(0) {
        return Err(Error::DescriptorMismatch(format!("beta ends at {target:?}, expected level 0 of {source:?}")));
    }
    let composite = a.then(b)?;
    let images = IndexSet::all(source.nvars)
        .into_iter()
        .zip(&composite.images)
        .map(|(set, x)| Ok((set, b.target.to_kelem(x)?)))
        .collect::<Result<BTreeMap<_, _>>>()?;
    ChainMap::new(source, images)
}

/// Fixtures with hand-checkable structure.
pub mod fixtures {
    use super::*;

    /// `beta(s_I^m) = t_I^m s_I^0`.
    pub fn koszul_beta(desc: ComplexDescriptor) -> ComplexMap {
        let source = FiltComplex::koszul(desc);
        let target = FiltComplex::koszul(desc.with_level(0));
        let images = IndexSet::all(desc.nvars)
            .into_iter()
            .enumerate()
            .map(|(j, s)| FreeElem::from([(j, monomial_power(desc, s))]))
            .collect();
        ComplexMap::new(source, target, images).expect("well-formed")
    }

    /// Free on `1, e` with `d e = t1^(m+1)`.
    pub fn one_variable(m: u32, ch: Char) -> FiltComplex {
        let basis = vec![
            Generator { name: "1".into(), degree: 0, level: 1 },
            Generator { name: "e".into(), degree: ch.s_degree(m), level: 2 },
        ];
        let diff = vec![(0, 1, Poly::var_pow(1, 1, m + 1, ch))];
        FiltComplex::new(1, ch, basis, diff, vec![BigRational::one(), BigRational::zero()]).expect("well-formed")
    }

    /// `beta(1) = 1`, `beta(e) = t1^m s1`.
    pub fn one_variable_beta(m: u32, ch: Char) -> ComplexMap {
        let target = FiltComplex::koszul(ComplexDescriptor::new(1, 0, ch).expect("n = 1"));
        let images = vec![
            FreeElem::from([(0, Poly::one(1, ch))]),
            FreeElem::from([(1, Poly::var_pow(1, 1, m, ch))]),
        ];
        ComplexMap::new(one_variable(m, ch), target, images).expect("well-formed")
    }

    /// Free on `1, x, y, xy` with `d x = t1^2`, `d y = t2^2 + t1 t2` and
    /// `d(xy) = t1^2 y - (t2^2 + t1 t2) x`: the Koszul complex of a regular
    /// sequence that is not a set of pure powers.
    pub fn twisted(ch: Char) -> FiltComplex {
        let p = |s: &str| Poly::parse(s, 2, ch).expect("fixture polynomial");
        let odd = ch.s_degree(0) + ch.t_degree();
        let basis = vec![
            Generator { name: "1".into(), degree: 0, level: 1 },
            Generator { name: "x".into(), degree: odd, level: 2 },
            Generator { name: "y".into(), degree: odd, level: 2 },
            Generator { name: "xy".into(), degree: 2 * odd, level: 3 },
        ];
        let diff = vec![
            (0, 1, p("t1^2")),
            (0, 2, p("t2^2 + t1*t2")),
            (2, 3, p("t1^2")),
            (1, 3, p("-t2^2 - t1*t2")),
        ];
        let aug = vec![BigRational::one(), BigRational::zero(), BigRational::zero(), BigRational::zero()];
        FiltComplex::new(2, ch, basis, diff, aug).expect("well-formed")
    }

    /// `x -> t1 s1`, `y -> (t1 + t2) s2`, `xy -> t1 (t1 + t2) s12`.
    pub fn twisted_beta(ch: Char) -> ComplexMap {
        let p = |s: &str| Poly::parse(s, 2, ch).expect("fixture polynomial");
        let target = FiltComplex::koszul(ComplexDescriptor::new(2, 0, ch).expect("n = 2"));
        let images = vec![
            FreeElem::from([(0, p("1"))]),
            FreeElem::from([(1, p("t1"))]),
            FreeElem::from([(2, p("t1 + t2"))]),
            FreeElem::from([(3, p("t1^2 + t1*t2"))]),
        ];
        ComplexMap::new(twisted(ch), target, images).expect("well-formed")
    }

    /// Smallest `m` for which the twisted model admits an `alpha`.
    pub const TWISTED_LEVEL: u32 = 2;
}

#[cfg(test)]
mod tests {
    use super::fixtures::*;
    use super::*;
    use crate::chain_map::RankMethod;

    fn desc(n: usize, m: u32, ch: Char) -> ComplexDescriptor {
        ComplexDescriptor::new(n, m, ch).unwrap()
    }

    #[test]
    fn koszul_complexes_pass_filtration_checks() {
        for ch in [Char::Zero, Char::Two] {
            for m in 0..2 {
                let r = FiltComplex::koszul(desc(3, m, ch)).verify_filtration();
                assert!(r.passes(), "{r:?}");
            }
        }
    }

    #[test]
    fn lowering_violation_is_reported() {
        let basis = vec![
            Generator { name: "1".into(), degree: 0, level: 1 },
            Generator { name: "a".into(), degree: 1, level: 2 },
            Generator { name: "b".into(), degree: 1, level: 2 },
        ];
        let c = FiltComplex::new(1, Char::Two, basis, vec![(1, 2, Poly::var_pow(1, 1, 1, Char::Two))], vec![
            BigRational::one(),
            BigRational::zero(),
            BigRational::zero(),
        ])
        .unwrap();
        let r = c.verify_filtration();
        assert!(!r.lowering && r.d_squared_zero && r.degrees_consistent);
        assert!(!r.passes());
    }

    #[test]
    fn zero_differential_passes_lowering() {
        let basis = vec![Generator { name: "1".into(), degree: 0, level: 1 }, Generator { name: "a".into(), degree: 3, level: 1 }];
        let c = FiltComplex::new(2, Char::Zero, basis, vec![], vec![BigRational::one(), BigRational::zero()]).unwrap();
        assert!(c.verify_filtration().passes());
    }

    #[test]
    fn koszul_cohomology_matches_quotient_ring() {
        let c = FiltComplex::koszul(desc(3, 1, Char::Zero));
        let dims = c.cohomology_dims(0, 8, Execution::Sequential).unwrap();
        let want: BTreeMap<i64, usize> = [(0, 1), (1, 0), (2, 3), (3, 0), (4, 3), (5, 0), (6, 1), (7, 0), (8, 0)].into();
        assert_eq!(dims, want);
    }

    #[test]
    fn identity_alpha_on_koszul() {
        let d = desc(2, 1, Char::Zero);
        let c = FiltComplex::koszul(d);
        let r = verify_alpha(&ComplexMap::identity(&c), 12, Execution::default()).unwrap();
        assert!(r.passes());
        // t1 t2 survives in degree 4 above the threshold 4
        assert!(!r.hypothesis_holds);
    }

    #[test]
    fn alpha_into_augmentation_kernel_fails() {
        let d = desc(1, 1, Char::Zero);
        let c = FiltComplex::koszul(d);
        let mut images = ComplexMap::identity(&c).images().to_vec();
        images[0] = FreeElem::new();
        images[1] = FreeElem::new();
        let a = ComplexMap::new(c.clone(), c, images).unwrap();
        let r = verify_alpha(&a, 8, Execution::default()).unwrap();
        assert!(!r.projection && !r.passes());
    }

    #[test]
    fn one_variable_pipeline() {
        for ch in [Char::Zero, Char::Two] {
            for m in 0..3 {
                let c = one_variable(m, ch);
                assert!(c.verify_filtration().passes());
                let a = construct_alpha(&c, m, default_max_degree(1, m, ch), Execution::default()).unwrap();
                assert_eq!(a.images()[1], c.generator(1));
                assert!(verify_alpha(&a, default_max_degree(1, m, ch), Execution::default()).unwrap().passes());
                let b = one_variable_beta(m, ch);
                assert!(verify_beta(&b).passes());
                let g = compose_to_gamma(&a, &b).unwrap();
                assert_eq!(g, ChainMap::iota(desc(1, m, ch)));
                assert_eq!(g.rank(RankMethod::ExactFractionFree).unwrap(), 2);
            }
        }
    }

    #[test]
    fn twisted_pipeline() {
        for ch in [Char::Zero, Char::Two] {
            let c = twisted(ch);
            assert!(c.verify_filtration().passes(), "{:?}", c.verify_filtration());
            let m = TWISTED_LEVEL;
            let max = default_max_degree(2, m, ch);
            let a = construct_alpha(&c, m, max, Execution::default()).unwrap();
            assert!(verify_alpha(&a, max, Execution::default()).unwrap().passes());
            let b = twisted_beta(ch);
            assert!(verify_beta(&b).passes(), "{:?}", verify_beta(&b));
            let g = compose_to_gamma(&a, &b).unwrap();
            assert!(g.verify().passes());
            let r = g.rank(RankMethod::ExactFractionFree).unwrap();
            assert!(r <= c.len());
            assert_eq!(r, 4);
        }
    }

    #[test]
    fn twisted_model_needs_level_two() {
        let c = twisted(Char::Zero);
        let err = construct_alpha(&c, 1, default_max_degree(2, 1, Char::Zero), Execution::default()).unwrap_err();
        assert!(matches!(err, Error::HypothesisFailure(_)));
    }

    #[test]
    fn engineered_cohomology_blocks_construction() {
        // a lone cocycle generator in degree 6 > threshold 4 for m = 1
        let basis = vec![Generator { name: "1".into(), degree: 0, level: 1 }, Generator { name: "z".into(), degree: 6, level: 1 }];
        let c = FiltComplex::new(1, Char::Zero, basis, vec![], vec![BigRational::one(), BigRational::zero()]).unwrap();
        assert!(matches!(construct_alpha(&c, 1, 8, Execution::default()), Err(Error::HypothesisFailure(_))));
    }

    #[test]
    fn truncation_too_small() {
        let c = one_variable(2, Char::Zero);
        assert_eq!(lift_alpha(&c, 2, 3).unwrap_err(), Error::TruncationTooSmall(5));
    }

    #[test]
    fn beta_filtration_violation() {
        let d = desc(2, 0, Char::Zero);
        let c = FiltComplex::koszul(d);
        let mut b = ComplexMap::identity(&c);
        assert!(verify_beta(&b).passes());
        // s{1} (level 2) to s{1,2} (word-length 2)
        b.images[1] = c.generator(3);
        let r = verify_beta(&b);
        assert!(!r.filtration);
    }

    #[test]
    fn koszul_pipeline_gives_iota() {
        let d = desc(3, 1, Char::Zero);
        let c = FiltComplex::koszul(d);
        let a = lift_alpha(&c, 1, default_max_degree(3, 1, Char::Zero)).unwrap();
        assert!(verify_alpha(&a, 10, Execution::default()).unwrap().passes());
        let g = compose_to_gamma(&a, &koszul_beta(d)).unwrap();
        assert!(g.verify().passes());
        assert_eq!(g.rank(RankMethod::ModularProbabilistic).unwrap(), 8);
    }

    #[test]
    fn json_round_trip() {
        for c in [twisted(Char::Zero), one_variable(1, Char::Two), FiltComplex::koszul(desc(2, 1, Char::Zero))] {
            let text = c.to_json();
            assert_eq!(FiltComplex::from_json(&text).unwrap(), c);
        }
        for b in [twisted_beta(Char::Two), koszul_beta(desc(3, 1, Char::Zero))] {
            assert_eq!(ComplexMap::from_json(&b.to_json()).unwrap(), b);
        }
        let broken = twisted(Char::Zero).to_json().replace("\"t1^2\"", "\"t1^3\"");
        assert!(matches!(FiltComplex::from_json(&broken), Err(Error::InvalidComplex(_))));
    }

    #[test]
    fn permutation_round_trip() {
        let c = twisted(Char::Zero);
        let p = c.permuted(&[2, 0, 3, 1]).unwrap();
        assert!(p.verify_filtration().passes());
        assert_eq!(p.basis()[2].name, "1");
        assert!(c.permuted(&[0, 0, 1, 2]).is_err());
    }
}
