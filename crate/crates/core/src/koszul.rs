//! Koszul complexes `K_n(m) = k[t1..tn] (x) Lambda<s1^m..sn^m>` with
//! `d s_i^m = t_i^(m+1)`.
//!
//! Sign convention: `d s_I = sum_j (-1)^(j-1) t_(i_j)^(m+1) s_(I \ i_j)`
//! where `i_j` is the j-th smallest index of `I`. All signs are `+` in
//! characteristic two.

use std::cmp::Ordering;
use std::collections::BTreeMap;
use std::fmt;

use num_rational::BigRational;
use num_traits::{One, Signed};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::field::{Field, Gf2, Rationals};
use crate::linalg;
use crate::par::{self, Execution};
use crate::poly::{fmt_abs_term, parse_term, split_signed_terms, Char, GradedDegree, Mono, Poly};

/// Largest supported number of variables (index sets are bitmasks).
pub const MAX_VARS: usize = 31;

/// A subset of `{1..n}`, naming the exterior monomial `s_I`.
///
/// Ordered by size first, then lexicographically on the sorted indices.
#[derive(Clone, Copy, PartialEq, Eq, Hash, Default)]
pub struct IndexSet(u32);

impl IndexSet {
    pub const EMPTY: IndexSet = IndexSet(0);

    pub fn from_indices<I: IntoIterator<Item = usize>>(indices: I) -> Result<IndexSet> {
        let mut bits = 0u32;
        for i in indices {
            if !(1..=MAX_VARS).contains(&i) {
                return Err(Error::InvalidArgument(format!("index {i} outside 1..={MAX_VARS}")));
            }
            if bits & (1 << (i - 1)) != 0 {
                return Err(Error::InvalidArgument(format!("duplicate index {i}")));
            }
            bits |= 1 << (i - 1);
        }
        Ok(IndexSet(bits))
    }

    /// Panicking constructor for literals in code and tests.
    pub fn of(indices: &[usize]) -> IndexSet {
        IndexSet::from_indices(indices.iter().copied()).expect("valid index set")
    }

    pub fn singleton(i: usize) -> IndexSet {
        IndexSet::of(&[i])
    }

    /// The block `{start, start+1, .., start+len-1}`.
    pub fn range(start: usize, len: usize) -> IndexSet {
        IndexSet::from_indices(start..start + len).expect("valid block")
    }

    pub fn bits(self) -> u32 {
        self.0
    }

    pub fn len(self) -> usize {
        self.0.count_ones() as usize
    }

    pub fn is_empty(self) -> bool {
        self.0 == 0
    }

    pub fn contains(self, i: usize) -> bool {
        (1..=MAX_VARS).contains(&i) && self.0 & (1 << (i - 1)) != 0
    }

    pub fn max_index(self) -> usize {
        32 - self.0.leading_zeros() as usize
    }

    /// Indices in increasing order.
    pub fn indices(self) -> impl Iterator<Item = usize> {
        let bits = self.0;
        (1..=MAX_VARS).filter(move |i| bits & (1 << (i - 1)) != 0)
    }

    pub fn without(self, i: usize) -> IndexSet {
        IndexSet(self.0 & !(1 << (i - 1)))
    }

    pub fn union(self, other: IndexSet) -> IndexSet {
        IndexSet(self.0 | other.0)
    }

    pub fn is_disjoint(self, other: IndexSet) -> bool {
        self.0 & other.0 == 0
    }

    pub fn is_subset(self, other: IndexSet) -> bool {
        self.0 & !other.0 == 0
    }

    /// All subsets of `{1..n}`, in `IndexSet` order.
    pub fn all(n: usize) -> Vec<IndexSet> {
        assert!(n <= MAX_VARS);
        let mut v: Vec<IndexSet> = (0..(1u64 << n)).map(|b| IndexSet(b as u32)).collect();
        v.sort();
        v
    }

    /// Parses a comma list such as `1,2,5` (empty string for the empty set).
    pub fn parse_list(s: &str) -> Result<IndexSet> {
        let s = s.trim();
        if s.is_empty() {
            return Ok(IndexSet::EMPTY);
        }
        let indices = s
            .split(',')
            .map(|x| x.trim().parse::<usize>().map_err(|_| Error::Parse(format!("bad index list {s:?}"))))
            .collect::<Result<Vec<_>>>()?;
        let mut sorted = indices.clone();
        sorted.sort_unstable();
        sorted.dedup();
        if sorted != indices {
            return Err(Error::Parse(format!("index list {s:?} is not strictly increasing")));
        }
        IndexSet::from_indices(indices)
    }

    pub fn to_list(self) -> String {
        self.indices().map(|i| i.to_string()).collect::<Vec<_>>().join(",")
    }
}

impl Ord for IndexSet {
    fn cmp(&self, other: &Self) -> Ordering {
        self.len().cmp(&other.len()).then_with(|| self.indices().cmp(other.indices()))
    }
}

impl PartialOrd for IndexSet {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Debug for IndexSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{{{}}}", self.to_list())
    }
}

impl fmt::Display for IndexSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "s{{{}}}", self.to_list())
    }
}

/// Which complex `K_n(m)` an element lives in.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct ComplexDescriptor {
    pub nvars: usize,
    pub level: u32,
    pub char: Char,
}

impl ComplexDescriptor {
    pub fn new(nvars: usize, level: u32, char: Char) -> Result<ComplexDescriptor> {
        if nvars == 0 || nvars > MAX_VARS {
            return Err(Error::InvalidArgument(format!("n must lie in 1..={MAX_VARS}, got {nvars}")));
        }
        Ok(ComplexDescriptor { nvars, level, char })
    }

    pub fn with_level(self, level: u32) -> ComplexDescriptor {
        ComplexDescriptor { level, ..self }
    }

    pub fn s_degree(&self) -> i64 {
        self.char.s_degree(self.level)
    }

    /// Degree of the basis monomial `s_I`.
    pub fn degree_of(&self, set: IndexSet) -> i64 {
        set.len() as i64 * self.s_degree()
    }

    pub fn rank(&self) -> usize {
        1 << self.nvars
    }

    /// `(m+1) n deg(t) + deg(s^m)`: the whole quotient ring plus one band.
    pub fn default_max_degree(&self) -> i64 {
        (self.level as i64 + 1) * self.nvars as i64 * self.char.t_degree() + self.s_degree()
    }
}

/// Element of `K_n(m)`: a finite sum `sum_I p_I s_I` with nonzero `p_I`.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct KElem {
    desc: ComplexDescriptor,
    coeffs: BTreeMap<IndexSet, Poly>,
}

impl KElem {
    pub fn zero(desc: ComplexDescriptor) -> KElem {
        KElem { desc, coeffs: BTreeMap::new() }
    }

    pub fn one(desc: ComplexDescriptor) -> KElem {
        KElem::basis(desc, IndexSet::EMPTY)
    }

    pub fn basis(desc: ComplexDescriptor, set: IndexSet) -> KElem {
        KElem::term(desc, set, Poly::one(desc.nvars, desc.char))
    }

    /// `p * s_I`.
    pub fn term(desc: ComplexDescriptor, set: IndexSet, p: Poly) -> KElem {
        let mut x = KElem::zero(desc);
        x.add_term(set, p);
        x
    }

    pub fn from_terms<I: IntoIterator<Item = (IndexSet, Poly)>>(desc: ComplexDescriptor, terms: I) -> KElem {
        let mut x = KElem::zero(desc);
        for (set, p) in terms {
            x.add_term(set, p);
        }
        x
    }

    pub fn descriptor(&self) -> ComplexDescriptor {
        self.desc
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn coeffs(&self) -> &BTreeMap<IndexSet, Poly> {
        &self.coeffs
    }

    pub fn coeff(&self, set: IndexSet) -> Poly {
        self.coeffs.get(&set).cloned().unwrap_or_else(|| Poly::zero(self.desc.nvars, self.desc.char))
    }

    pub fn add_term(&mut self, set: IndexSet, p: Poly) {
        assert!(set.max_index() <= self.desc.nvars, "{set:?} outside 1..={}", self.desc.nvars);
        assert_eq!(p.nvars(), self.desc.nvars, "coefficient arity");
        assert_eq!(p.char(), self.desc.char, "coefficient characteristic");
        if p.is_zero() {
            return;
        }
        match self.coeffs.get_mut(&set) {
            Some(q) => {
                *q = &*q + &p;
                if q.is_zero() {
                    self.coeffs.remove(&set);
                }
            }
            None => {
                self.coeffs.insert(set, p);
            }
        }
    }

    fn check_same(&self, other: &KElem) -> Result<()> {
        if self.desc != other.desc {
            return Err(Error::DescriptorMismatch(format!("{:?} vs {:?}", self.desc, other.desc)));
        }
        Ok(())
    }

    pub fn add(&self, other: &KElem) -> Result<KElem> {
        self.check_same(other)?;
        let mut out = self.clone();
        for (set, p) in &other.coeffs {
            out.add_term(*set, p.clone());
        }
        Ok(out)
    }

    pub fn sub(&self, other: &KElem) -> Result<KElem> {
        self.add(&other.neg())
    }

    pub fn neg(&self) -> KElem {
        KElem { desc: self.desc, coeffs: self.coeffs.iter().map(|(s, p)| (*s, -p)).collect() }
    }

    /// Multiplication by a ring element.
    pub fn scale(&self, p: &Poly) -> KElem {
        KElem::from_terms(self.desc, self.coeffs.iter().map(|(s, q)| (*s, p * q)))
    }

    /// The same coefficients read in another level (used to move between
    /// `K_n(m)` and `K_n(0)`, which share the underlying module).
    pub fn relevel(&self, level: u32) -> KElem {
        KElem { desc: self.desc.with_level(level), coeffs: self.coeffs.clone() }
    }

    pub fn differential(&self) -> KElem {
        let ComplexDescriptor { nvars, level, char } = self.desc;
        let mut out = KElem::zero(self.desc);
        for (set, p) in &self.coeffs {
            for (j, i) in set.indices().enumerate() {
                let mut c = p * &Poly::var_pow(nvars, i, level + 1, char);
                if char == Char::Zero && j % 2 == 1 {
                    c = -&c;
                }
                out.add_term(set.without(i), c);
            }
        }
        out
    }

    /// Graded-commutative product.
    pub fn wedge(&self, other: &KElem) -> Result<KElem> {
        self.check_same(other)?;
        let mut out = KElem::zero(self.desc);
        for (a, p) in &self.coeffs {
            for (b, q) in &other.coeffs {
                if !a.is_disjoint(*b) {
                    continue;
                }
                let mut c = p * q;
                if self.desc.char == Char::Zero && wedge_sign_is_negative(*a, *b) {
                    c = -&c;
                }
                out.add_term(a.union(*b), c);
            }
        }
        Ok(out)
    }

    pub fn project_wordlength(&self, l: usize) -> KElem {
        KElem {
            desc: self.desc,
            coeffs: self.coeffs.iter().filter(|(s, _)| s.len() == l).map(|(s, p)| (*s, p.clone())).collect(),
        }
    }

    /// Word-lengths of the nonzero terms.
    pub fn wordlengths(&self) -> Vec<usize> {
        let mut v: Vec<usize> = self.coeffs.keys().map(|s| s.len()).collect();
        v.dedup();
        v
    }

    pub fn graded_degree(&self) -> Result<GradedDegree> {
        let mut common = None;
        for (set, p) in &self.coeffs {
            match p.graded_degree()? {
                GradedDegree::Nonhomogeneous => return Ok(GradedDegree::Nonhomogeneous),
                GradedDegree::Homogeneous(d) => {
                    let d = d + self.desc.degree_of(*set);
                    if common.is_some_and(|c| c != d) {
                        return Ok(GradedDegree::Nonhomogeneous);
                    }
                    common = Some(d);
                }
            }
        }
        common.map(GradedDegree::Homogeneous).ok_or(Error::ZeroDegree)
    }

    /// Graded degrees of all monomial terms, deduplicated.
    pub fn term_degrees(&self) -> Vec<i64> {
        let mut v: Vec<i64> = self
            .coeffs
            .iter()
            .flat_map(|(set, p)| {
                let base = self.desc.degree_of(*set);
                p.terms().map(move |(m, _)| base + m.graded_degree(self.desc.char))
            })
            .collect();
        v.sort_unstable();
        v.dedup();
        v
    }

    /// Monomial terms `(I, t^a, c)`.
    pub fn monomial_terms(&self) -> impl Iterator<Item = (IndexSet, &Mono, &BigRational)> {
        self.coeffs.iter().flat_map(|(s, p)| p.terms().rev().map(move |(m, c)| (*s, m, c)))
    }

    /// Parses the text form written by `Display`, e.g. `t1^2*t2 * s{2,3} - s{}`.
    pub fn parse(text: &str, desc: ComplexDescriptor) -> Result<KElem> {
        let mut x = KElem::zero(desc);
        if text.trim() == "0" {
            return Ok(x);
        }
        for (negated, body) in split_signed_terms(text)? {
            let open = body
                .rfind("s{")
                .ok_or_else(|| Error::Parse(format!("term {body:?} lacks an s{{..}} factor")))?;
            let close = body[open..]
                .find('}')
                .map(|c| c + open)
                .ok_or_else(|| Error::Parse(format!("unterminated s{{ in {body:?}")))?;
            if !body[close + 1..].trim().is_empty() {
                return Err(Error::Parse(format!("trailing text after s{{..}} in {body:?}")));
            }
            let set = IndexSet::parse_list(&body[open + 2..close])?;
            if set.max_index() > desc.nvars {
                return Err(Error::Parse(format!("{set:?} outside 1..={}", desc.nvars)));
            }
            let poly_part = body[..open].trim().trim_end_matches('*').trim();
            let (m, mut c) = if poly_part.is_empty() {
                (Mono::one(desc.nvars), BigRational::one())
            } else {
                parse_term(poly_part, desc.nvars, desc.char)?
            };
            if negated {
                c = -c;
            }
            x.add_term(set, Poly::monomial(m, c, desc.char));
        }
        Ok(x)
    }
}

/// Sign of `s_a ^ s_b` relative to `s_(a u b)`: the parity of the number of
/// pairs `(i in a, j in b)` with `i > j`.
pub fn wedge_sign_is_negative(a: IndexSet, b: IndexSet) -> bool {
    let mut inversions = 0;
    for j in b.indices() {
        inversions += a.indices().filter(|&i| i > j).count();
    }
    inversions % 2 == 1
}

impl fmt::Display for KElem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        for (i, (set, m, c)) in self.monomial_terms().enumerate() {
            match (i, c.is_negative()) {
                (0, true) => write!(f, "-")?,
                (0, false) => {}
                (_, true) => write!(f, " - ")?,
                (_, false) => write!(f, " + ")?,
            }
            fmt_abs_term(f, m, c)?;
            write!(f, " * {set}")?;
        }
        Ok(())
    }
}

impl fmt::Debug for KElem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "KElem[n={}, m={}, char={}]({})", self.desc.nvars, self.desc.level, self.desc.char, self)
    }
}

/// `dim_k H^k(K_n(m))` for `0 <= k <= max_degree`.
///
/// The differential preserves the multidegree in `N^n` (weight `e_i` for
/// `t_i` and `(m+1) e_i` for `s_i`), so each graded piece splits into small
/// blocks, one per multidegree, each solved by exact dense elimination.
pub fn truncated_homology_dim(desc: ComplexDescriptor, max_degree: i64, exec: Execution) -> BTreeMap<i64, usize> {
    match desc.char {
        Char::Zero => homology_over(&Rationals, desc, max_degree, exec),
        Char::Two => homology_over(&Gf2, desc, max_degree, exec),
    }
}

pub fn homology_total(desc: ComplexDescriptor, max_degree: i64, exec: Execution) -> usize {
    truncated_homology_dim(desc, max_degree, exec).values().sum()
}

fn homology_over<F: Field>(field: &F, desc: ComplexDescriptor, max_degree: i64, exec: Execution) -> BTreeMap<i64, usize> {
    let n = desc.nvars;
    let tdeg = desc.char.t_degree();
    let mut dims: BTreeMap<i64, usize> = (0..=max_degree.max(-1)).map(|k| (k, 0)).collect();
    if max_degree < 0 {
        return dims;
    }
    // Block of multidegree delta sits in degrees |delta| deg(t) - j, j <= n.
    let max_total = ((max_degree + n as i64) / tdeg) as u32;
    let per_total = par::map_indexed(exec, max_total as usize + 1, |total| {
        let mut local: BTreeMap<i64, usize> = BTreeMap::new();
        for delta in compositions(total as u32, n) {
            for (j, h) in block_homology(field, desc, &delta) {
                let k = total as i64 * tdeg - j as i64;
                if h > 0 && k <= max_degree {
                    *local.entry(k).or_default() += h;
                }
            }
        }
        local
    });
    for local in per_total {
        for (k, h) in local {
            *dims.get_mut(&k).expect("degree in range") += h;
        }
    }
    dims
}

/// Homology of one multidegree block, indexed by word-length.
fn block_homology<F: Field>(field: &F, desc: ComplexDescriptor, delta: &[u32]) -> Vec<(usize, usize)> {
    let big: Vec<usize> = (1..=desc.nvars).filter(|&i| delta[i - 1] > desc.level).collect();
    let support = IndexSet::from_indices(big.iter().copied()).expect("valid");
    let subsets: Vec<IndexSet> = IndexSet::all(desc.nvars).into_iter().filter(|s| s.is_subset(support)).collect();
    let by_len = |l: usize| -> Vec<IndexSet> { subsets.iter().copied().filter(|s| s.len() == l).collect() };
    let r = support.len();
    // rank of d: word-length l -> l-1, on the basis elements of this block
    let mut ranks = vec![0usize; r + 2];
    for l in 1..=r {
        let src = by_len(l);
        let dst = by_len(l - 1);
        let rows: Vec<Vec<F::Elem>> = dst
            .iter()
            .map(|target| {
                src.iter()
                    .map(|s| {
                        if !target.is_subset(*s) {
                            return field.zero();
                        }
                        let removed = s.indices().position(|i| !target.contains(i)).expect("one index removed");
                        if desc.char == Char::Zero && removed % 2 == 1 {
                            field.neg(&field.one())
                        } else {
                            field.one()
                        }
                    })
                    .collect()
            })
            .collect();
        ranks[l] = linalg::rank(field, rows);
    }
    (0..=r).map(|l| (l, by_len(l).len() - ranks[l] - ranks[l + 1])).collect()
}

/// All exponent vectors of length `n` with the given sum.
pub(crate) fn compositions(total: u32, n: usize) -> Vec<Vec<u32>> {
    let mut out = Vec::new();
    let mut cur = vec![0u32; n];
    fn rec(i: usize, left: u32, cur: &mut Vec<u32>, out: &mut Vec<Vec<u32>>) {
        if i + 1 == cur.len() {
            cur[i] = left;
            out.push(cur.clone());
            return;
        }
        for e in (0..=left).rev() {
            cur[i] = e;
            rec(i + 1, left - e, cur, out);
        }
    }
    if n == 0 {
        if total == 0 {
            out.push(Vec::new());
        }
        return out;
    }
    rec(0, total, &mut cur, &mut out);
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    fn desc(n: usize, m: u32, ch: Char) -> ComplexDescriptor {
        ComplexDescriptor::new(n, m, ch).unwrap()
    }

    fn k(s: &str, d: ComplexDescriptor) -> KElem {
        KElem::parse(s, d).unwrap()
    }

    #[test]
    fn index_set_order_and_parsing() {
        let all = IndexSet::all(3);
        let lists: Vec<String> = all.iter().map(|s| s.to_list()).collect();
        assert_eq!(lists, ["", "1", "2", "3", "1,2", "1,3", "2,3", "1,2,3"]);
        assert_eq!(IndexSet::parse_list("1,3").unwrap(), IndexSet::of(&[1, 3]));
        assert!(IndexSet::parse_list("3,1").is_err());
        assert!(IndexSet::parse_list("1,1").is_err());
        assert!(IndexSet::from_indices([0]).is_err());
    }

    #[test]
    fn differential_examples() {
        let d3 = desc(3, 1, Char::Zero);
        assert_eq!(KElem::basis(d3, IndexSet::of(&[1])).differential(), k("t1^2 * s{}", d3));
        for m in 0..3 {
            let d = desc(3, m, Char::Zero);
            let s12 = KElem::basis(d, IndexSet::of(&[1, 2]));
            let expected = KElem::from_terms(
                d,
                [
                    (IndexSet::of(&[2]), Poly::var_pow(3, 1, m + 1, Char::Zero)),
                    (IndexSet::of(&[1]), -&Poly::var_pow(3, 2, m + 1, Char::Zero)),
                ],
            );
            assert_eq!(s12.differential(), expected);
            let s123 = KElem::basis(d, IndexSet::of(&[1, 2, 3]));
            assert!(s123.differential().differential().is_zero());
        }
    }

    #[test]
    fn wedge_examples() {
        let d = desc(3, 2, Char::Zero);
        let s1 = KElem::basis(d, IndexSet::of(&[1]));
        let s2 = KElem::basis(d, IndexSet::of(&[2]));
        assert_eq!(s1.wedge(&s2).unwrap(), KElem::basis(d, IndexSet::of(&[1, 2])));
        assert_eq!(s2.wedge(&s1).unwrap(), KElem::basis(d, IndexSet::of(&[1, 2])).neg());
        assert!(s1.wedge(&s1).unwrap().is_zero());
        let other = KElem::one(desc(3, 1, Char::Zero));
        assert!(s1.wedge(&other).is_err());
    }

    #[test]
    fn projection_examples() {
        let d = desc(2, 0, Char::Zero);
        let x = k("t1 * s{2} + s{1,2}", d);
        assert_eq!(x.project_wordlength(1), k("t1 * s{2}", d));
        assert_eq!(x.project_wordlength(1).project_wordlength(1), x.project_wordlength(1));
        let sum = (0..=2).fold(KElem::zero(d), |acc, l| acc.add(&x.project_wordlength(l)).unwrap());
        assert_eq!(sum, x);
    }

    #[test]
    fn degrees_follow_characteristic() {
        let d0 = desc(2, 1, Char::Zero);
        assert_eq!(k("t1 * s{1,2}", d0).graded_degree(), Ok(GradedDegree::Homogeneous(2 + 6)));
        let d2 = desc(2, 1, Char::Two);
        assert_eq!(k("t1 * s{1,2}", d2).graded_degree(), Ok(GradedDegree::Homogeneous(1 + 2)));
        assert_eq!(k("t1 * s{1} + s{}", d2).graded_degree(), Ok(GradedDegree::Nonhomogeneous));
    }

    #[test]
    fn text_round_trip() {
        let d = desc(3, 1, Char::Zero);
        let x = k("t1^2*t2 * s{2,3} - 1/2 * s{} + 3*t3 * s{1}", d);
        assert_eq!(x.to_string(), "-1/2 * s{} + 3*t3 * s{1} + t1^2*t2 * s{2,3}");
        assert_eq!(k(&x.to_string(), d), x);
        assert_eq!(KElem::zero(d).to_string(), "0");
        assert!(KElem::parse("t1 * s{4}", d).is_err());
        assert!(KElem::parse("t1", d).is_err());
    }

    #[test]
    fn homology_examples() {
        assert_eq!(homology_total(desc(1, 0, Char::Two), 10, Execution::Sequential), 1);
        let d = desc(2, 1, Char::Two);
        assert_eq!(homology_total(d, d.default_max_degree(), Execution::Sequential), 4);
        let d = desc(3, 1, Char::Zero);
        let dims = truncated_homology_dim(d, d.default_max_degree(), Execution::Sequential);
        assert_eq!(dims.values().sum::<usize>(), 8);
        // R/(t1^2,t2^2,t3^2) in degrees 0,2,4,6 with dims 1,3,3,1
        let nonzero: Vec<(i64, usize)> = dims.into_iter().filter(|(_, h)| *h > 0).collect();
        assert_eq!(nonzero, vec![(0, 1), (2, 3), (4, 3), (6, 1)]);
    }

    #[test]
    fn compositions_count() {
        assert_eq!(compositions(3, 2).len(), 4);
        assert_eq!(compositions(0, 3), vec![vec![0, 0, 0]]);
        assert_eq!(compositions(4, 3).len(), 15);
    }
}
