//! Exact sparse polynomials in `t1..tn` over the rationals or over GF(2).
//!
//! A [`Poly`] is a map from exponent vectors to nonzero coefficients. In
//! characteristic two the only nonzero coefficient is 1, so a term is stored
//! iff its monomial is present.

use std::cmp::Ordering;
use std::collections::btree_map::Entry;
use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};
use crate::field::{Field, PrimeField};

/// Characteristic of the ground field, which also fixes the degree
/// convention: `deg t_i = 1` in characteristic two, `deg t_i = 2` in
/// characteristic zero.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Char {
    Zero,
    Two,
}

impl Char {
    pub fn t_degree(self) -> i64 {
        match self {
            Char::Zero => 2,
            Char::Two => 1,
        }
    }

    /// Degree of an exterior generator `s_i^level`.
    pub fn s_degree(self, level: u32) -> i64 {
        match self {
            Char::Zero => 2 * level as i64 + 1,
            Char::Two => level as i64,
        }
    }

    pub fn code(self) -> u8 {
        match self {
            Char::Zero => 0,
            Char::Two => 2,
        }
    }

    pub fn from_code(code: u64) -> Result<Char> {
        match code {
            0 => Ok(Char::Zero),
            2 => Ok(Char::Two),
            other => Err(Error::InvalidArgument(format!(
                "characteristic must be 0 or 2, got {other}"
            ))),
        }
    }

    /// Canonical representative of `q` in this characteristic, `None` for zero.
    pub(crate) fn normalize(self, q: BigRational) -> Option<BigRational> {
        match self {
            Char::Zero => (!q.is_zero()).then_some(q),
            Char::Two => {
                debug_assert!(q.denom().is_odd(), "even denominator in characteristic two");
                q.numer().is_odd().then(BigRational::one)
            }
        }
    }
}

impl fmt::Display for Char {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.code())
    }
}

impl Serialize for Char {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_u8(self.code())
    }
}

impl<'de> Deserialize<'de> for Char {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let code = u64::deserialize(d)?;
        Char::from_code(code).map_err(serde::de::Error::custom)
    }
}

/// Monomial `t1^e1 ... tn^en`. Ordered graded-lexicographically: total
/// degree first, then the exponent of `t1`, then `t2`, ...
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Mono {
    degree: u32,
    exps: Box<[u32]>,
}

impl Mono {
    pub fn one(nvars: usize) -> Mono {
        Mono { degree: 0, exps: vec![0; nvars].into_boxed_slice() }
    }

    pub fn from_exponents(exps: Vec<u32>) -> Mono {
        Mono { degree: exps.iter().sum(), exps: exps.into_boxed_slice() }
    }

    /// `t_var^exp`, with `var` counted from 1.
    pub fn var_pow(nvars: usize, var: usize, exp: u32) -> Mono {
        assert!((1..=nvars).contains(&var), "variable t{var} out of range");
        let mut exps = vec![0; nvars];
        exps[var - 1] = exp;
        Mono::from_exponents(exps)
    }

    pub fn nvars(&self) -> usize {
        self.exps.len()
    }

    pub fn exponents(&self) -> &[u32] {
        &self.exps
    }

    /// Exponent of `t_var`, `var` counted from 1.
    pub fn exponent(&self, var: usize) -> u32 {
        self.exps[var - 1]
    }

    pub fn total_degree(&self) -> u32 {
        self.degree
    }

    pub fn graded_degree(&self, ch: Char) -> i64 {
        self.degree as i64 * ch.t_degree()
    }

    pub fn is_one(&self) -> bool {
        self.degree == 0
    }

    pub fn mul(&self, other: &Mono) -> Mono {
        debug_assert_eq!(self.nvars(), other.nvars());
        let exps: Vec<u32> = self.exps.iter().zip(other.exps.iter()).map(|(a, b)| a + b).collect();
        Mono { degree: self.degree + other.degree, exps: exps.into_boxed_slice() }
    }

    pub fn divides(&self, other: &Mono) -> bool {
        self.exps.iter().zip(other.exps.iter()).all(|(a, b)| a <= b)
    }

    /// `other / self` when `self` divides `other`.
    pub fn quotient(&self, other: &Mono) -> Option<Mono> {
        if !self.divides(other) {
            return None;
        }
        let exps: Vec<u32> = other.exps.iter().zip(self.exps.iter()).map(|(b, a)| b - a).collect();
        Some(Mono { degree: other.degree - self.degree, exps: exps.into_boxed_slice() })
    }
}

impl fmt::Display for Mono {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_one() {
            return write!(f, "1");
        }
        let mut first = true;
        for (i, &e) in self.exps.iter().enumerate() {
            if e == 0 {
                continue;
            }
            if !first {
                write!(f, "*")?;
            }
            first = false;
            if e == 1 {
                write!(f, "t{}", i + 1)?;
            } else {
                write!(f, "t{}^{}", i + 1, e)?;
            }
        }
        Ok(())
    }
}

/// Result of [`Poly::graded_degree`].
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum GradedDegree {
    Homogeneous(i64),
    Nonhomogeneous,
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Poly {
    nvars: usize,
    ch: Char,
    terms: BTreeMap<Mono, BigRational>,
}

impl Poly {
    pub fn zero(nvars: usize, ch: Char) -> Poly {
        Poly { nvars, ch, terms: BTreeMap::new() }
    }

    pub fn one(nvars: usize, ch: Char) -> Poly {
        Poly::monomial(Mono::one(nvars), BigRational::one(), ch)
    }

    pub fn constant(q: BigRational, nvars: usize, ch: Char) -> Poly {
        Poly::monomial(Mono::one(nvars), q, ch)
    }

    pub fn from_int(c: i64, nvars: usize, ch: Char) -> Poly {
        Poly::constant(BigRational::from_integer(c.into()), nvars, ch)
    }

    pub fn monomial(m: Mono, coeff: BigRational, ch: Char) -> Poly {
        let nvars = m.nvars();
        let mut terms = BTreeMap::new();
        if let Some(c) = ch.normalize(coeff) {
            terms.insert(m, c);
        }
        Poly { nvars, ch, terms }
    }

    /// `t_var^exp`, `var` counted from 1.
    pub fn var_pow(nvars: usize, var: usize, exp: u32, ch: Char) -> Poly {
        Poly::monomial(Mono::var_pow(nvars, var, exp), BigRational::one(), ch)
    }

    /// Builds a polynomial from arbitrary (possibly repeated or zero) terms.
    pub fn from_terms<I>(nvars: usize, ch: Char, terms: I) -> Poly
    where
        I: IntoIterator<Item = (Mono, BigRational)>,
    {
        let mut p = Poly::zero(nvars, ch);
        for (m, c) in terms {
            assert_eq!(m.nvars(), nvars, "monomial arity");
            p.add_term(m, c);
        }
        p
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    pub fn char(&self) -> Char {
        self.ch
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_one(&self) -> bool {
        self.terms.len() == 1
            && self.terms.iter().next().is_some_and(|(m, c)| m.is_one() && c.is_one())
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    /// Terms in ascending graded-lex order.
    pub fn terms(&self) -> impl DoubleEndedIterator<Item = (&Mono, &BigRational)> {
        self.terms.iter()
    }

    pub fn coeff(&self, m: &Mono) -> BigRational {
        self.terms.get(m).cloned().unwrap_or_else(BigRational::zero)
    }

    pub fn leading_term(&self) -> Option<(&Mono, &BigRational)> {
        self.terms.iter().next_back()
    }

    pub fn max_total_degree(&self) -> u32 {
        self.terms.keys().map(Mono::total_degree).max().unwrap_or(0)
    }

    pub(crate) fn add_term(&mut self, m: Mono, c: BigRational) {
        match self.terms.entry(m) {
            Entry::Vacant(v) => {
                if let Some(c) = self.ch.normalize(c) {
                    v.insert(c);
                }
            }
            Entry::Occupied(mut o) => {
                let sum = o.get() + c;
                match self.ch.normalize(sum) {
                    Some(s) => *o.get_mut() = s,
                    None => {
                        o.remove();
                    }
                }
            }
        }
    }

    fn check_compatible(&self, other: &Poly) -> Result<()> {
        if self.nvars != other.nvars {
            return Err(Error::VarCountMismatch { left: self.nvars, right: other.nvars });
        }
        if self.ch != other.ch {
            return Err(Error::CharMismatch);
        }
        Ok(())
    }

    pub fn checked_add(&self, other: &Poly) -> Result<Poly> {
        self.check_compatible(other)?;
        let mut out = self.clone();
        for (m, c) in &other.terms {
            out.add_term(m.clone(), c.clone());
        }
        Ok(out)
    }

    pub fn checked_mul(&self, other: &Poly) -> Result<Poly> {
        self.check_compatible(other)?;
        let mut out = Poly::zero(self.nvars, self.ch);
        for (ma, ca) in &self.terms {
            for (mb, cb) in &other.terms {
                out.add_term(ma.mul(mb), ca * cb);
            }
        }
        Ok(out)
    }

    pub fn scale(&self, q: &BigRational) -> Poly {
        Poly::from_terms(self.nvars, self.ch, self.terms.iter().map(|(m, c)| (m.clone(), c * q)))
    }

    pub fn mul_mono(&self, m: &Mono, q: &BigRational) -> Poly {
        Poly::from_terms(self.nvars, self.ch, self.terms.iter().map(|(mm, c)| (mm.mul(m), c * q)))
    }

    /// Exact quotient `self / divisor`, failing when the division leaves a
    /// remainder. Long division on graded-lex leading terms.
    pub fn div_exact(&self, divisor: &Poly) -> Result<Poly> {
        self.check_compatible(divisor)?;
        let (lm, lc) = divisor.leading_term().ok_or(Error::InexactDivision)?;
        let lc_inv = lc.recip();
        let mut rem = self.clone();
        let mut quot = Poly::zero(self.nvars, self.ch);
        while let Some((rm, rc)) = rem.leading_term() {
            let qm = lm.quotient(rm).ok_or(Error::InexactDivision)?;
            let qc = rc * &lc_inv;
            rem = &rem - &divisor.mul_mono(&qm, &qc);
            quot.add_term(qm, qc);
        }
        Ok(quot)
    }

    pub fn graded_degree(&self) -> Result<GradedDegree> {
        let mut degrees = self.terms.keys().map(|m| m.graded_degree(self.ch));
        let first = degrees.next().ok_or(Error::ZeroDegree)?;
        if degrees.all(|d| d == first) {
            Ok(GradedDegree::Homogeneous(first))
        } else {
            Ok(GradedDegree::Nonhomogeneous)
        }
    }

    /// Evaluation at `point` in any field of the right characteristic.
    pub fn eval<F: Field>(&self, field: &F, point: &[F::Elem]) -> Result<F::Elem> {
        if point.len() != self.nvars {
            return Err(Error::VarCountMismatch { left: self.nvars, right: point.len() });
        }
        // Cache powers per variable: exponents are small, terms share them.
        let mut acc = field.zero();
        for (m, c) in &self.terms {
            let mut v = field.from_rational(c)?;
            for (x, &e) in point.iter().zip(m.exponents()) {
                for _ in 0..e {
                    v = field.mul(&v, x);
                }
            }
            acc = field.add(&acc, &v);
        }
        Ok(acc)
    }

    /// Evaluation modulo `prime` at a point of residues.
    pub fn eval_mod_p(&self, point: &[u64], prime: u64) -> Result<u64> {
        let f = PrimeField::new(prime)?;
        let reduced: Vec<u64> = point.iter().map(|x| x % prime).collect();
        self.eval(&f, &reduced)
    }

    /// Parses the text form written by `Display`.
    pub fn parse(text: &str, nvars: usize, ch: Char) -> Result<Poly> {
        let mut p = Poly::zero(nvars, ch);
        for (sign, body) in split_signed_terms(text)? {
            let (m, c) = parse_term(body, nvars, ch)?;
            p.add_term(m, if sign { -c } else { c });
        }
        Ok(p)
    }
}

/// Splits `a + b - c` into `(negated, body)` pairs. Signs are only accepted
/// between terms or at the very start.
pub(crate) fn split_signed_terms(text: &str) -> Result<Vec<(bool, &str)>> {
    let s = text.trim();
    if s.is_empty() {
        return Err(Error::Parse("empty expression".into()));
    }
    let dangling = || Error::Parse(format!("dangling sign in {text:?}"));
    let mut out = Vec::new();
    let mut negated = false;
    let mut leading_sign = false;
    let mut start = 0;
    for (i, b) in s.bytes().enumerate() {
        if b != b'+' && b != b'-' {
            continue;
        }
        let body = s[start..i].trim();
        if body.is_empty() {
            if !out.is_empty() || leading_sign {
                return Err(dangling());
            }
            leading_sign = true;
        } else {
            out.push((negated, body));
        }
        negated = b == b'-';
        start = i + 1;
    }
    let body = s[start..].trim();
    if body.is_empty() {
        return Err(dangling());
    }
    out.push((negated, body));
    Ok(out)
}

pub(crate) fn parse_rational(s: &str) -> Result<BigRational> {
    let bad = || Error::Parse(format!("bad coefficient {s:?}"));
    match s.split_once('/') {
        Some((n, d)) => {
            let n: BigInt = n.trim().parse().map_err(|_| bad())?;
            let d: BigInt = d.trim().parse().map_err(|_| bad())?;
            if d.is_zero() {
                return Err(bad());
            }
            Ok(BigRational::new(n, d))
        }
        None => Ok(BigRational::from_integer(s.trim().parse().map_err(|_| bad())?)),
    }
}

/// Parses `c*t1^2*t3` (coefficient optional, factors in any order).
pub(crate) fn parse_term(body: &str, nvars: usize, ch: Char) -> Result<(Mono, BigRational)> {
    let mut exps = vec![0u32; nvars];
    let mut coeff = BigRational::one();
    for factor in body.split('*') {
        let factor = factor.trim();
        if factor.is_empty() {
            return Err(Error::Parse(format!("empty factor in {body:?}")));
        }
        if let Some(rest) = factor.strip_prefix('t') {
            let (idx, exp) = match rest.split_once('^') {
                Some((i, e)) => (i, e.trim().parse::<u32>().map_err(|_| {
                    Error::Parse(format!("bad exponent in {factor:?}"))
                })?),
                None => (rest, 1),
            };
            let idx: usize = idx
                .trim()
                .parse()
                .map_err(|_| Error::Parse(format!("bad variable {factor:?}")))?;
            if !(1..=nvars).contains(&idx) {
                return Err(Error::Parse(format!("variable t{idx} outside t1..t{nvars}")));
            }
            exps[idx - 1] += exp;
        } else {
            coeff *= parse_rational(factor)?;
        }
    }
    if ch == Char::Two && coeff.denom().is_even() {
        return Err(Error::Parse(format!(
            "coefficient {coeff} has no image in characteristic two"
        )));
    }
    Ok((Mono::from_exponents(exps), coeff))
}

/// Writes one term with its sign handled by the caller: `|c|*mono`.
pub(crate) fn fmt_abs_term(f: &mut fmt::Formatter<'_>, m: &Mono, c: &BigRational) -> fmt::Result {
    let a = c.abs();
    if m.is_one() {
        write!(f, "{a}")
    } else if a.is_one() {
        write!(f, "{m}")
    } else {
        write!(f, "{a}*{m}")
    }
}

impl fmt::Display for Poly {
    /// Terms in descending graded-lex order, e.g. `3*t1^2*t2 - 1/2*t3 + 1`.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        for (i, (m, c)) in self.terms.iter().rev().enumerate() {
            match (i, c.is_negative()) {
                (0, true) => write!(f, "-")?,
                (0, false) => {}
                (_, true) => write!(f, " - ")?,
                (_, false) => write!(f, " + ")?,
            }
            fmt_abs_term(f, m, c)?;
        }
        Ok(())
    }
}

impl Ord for Poly {
    /// Arbitrary but deterministic total order (used for pivot tie-breaks).
    fn cmp(&self, other: &Self) -> Ordering {
        self.terms.len().cmp(&other.terms.len()).then_with(|| {
            self.terms.iter().rev().cmp(other.terms.iter().rev())
        })
    }
}

impl PartialOrd for Poly {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl<'a> Add<&'a Poly> for &'a Poly {
    type Output = Poly;
    fn add(self, rhs: &'a Poly) -> Poly {
        self.checked_add(rhs).expect("incompatible polynomials")
    }
}

impl<'a> Sub<&'a Poly> for &'a Poly {
    type Output = Poly;
    fn sub(self, rhs: &'a Poly) -> Poly {
        self.checked_add(&-rhs).expect("incompatible polynomials")
    }
}

impl<'a> Mul<&'a Poly> for &'a Poly {
    type Output = Poly;
    fn mul(self, rhs: &'a Poly) -> Poly {
        self.checked_mul(rhs).expect("incompatible polynomials")
    }
}

impl Neg for &Poly {
    type Output = Poly;
    fn neg(self) -> Poly {
        match self.ch {
            Char::Two => self.clone(),
            Char::Zero => Poly {
                nvars: self.nvars,
                ch: self.ch,
                terms: self.terms.iter().map(|(m, c)| (m.clone(), -c)).collect(),
            },
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(s: &str, n: usize, ch: Char) -> Poly {
        Poly::parse(s, n, ch).unwrap()
    }

    #[test]
    fn products_from_examples() {
        let t1 = p("t1", 2, Char::Zero);
        assert_eq!(&t1 * &t1, p("t1^2", 2, Char::Zero));
        let s = p("t1 + t2", 2, Char::Two);
        assert_eq!(&s * &s, p("t1^2 + t2^2", 2, Char::Two));
        let a = p("t1 + 1", 1, Char::Zero);
        let b = p("t1 - 1", 1, Char::Zero);
        assert_eq!(&a * &b, p("t1^2 - 1", 1, Char::Zero));
    }

    #[test]
    fn mismatched_arity_is_an_error() {
        let a = Poly::one(2, Char::Zero);
        let b = Poly::one(3, Char::Zero);
        assert_eq!(a.checked_mul(&b), Err(Error::VarCountMismatch { left: 2, right: 3 }));
    }

    #[test]
    fn graded_degrees() {
        let m = p("t1^2*t2", 2, Char::Two);
        assert_eq!(m.graded_degree(), Ok(GradedDegree::Homogeneous(3)));
        let m = p("t1^2*t2", 2, Char::Zero);
        assert_eq!(m.graded_degree(), Ok(GradedDegree::Homogeneous(6)));
        for ch in [Char::Zero, Char::Two] {
            assert_eq!(p("t1 + t2^2", 2, ch).graded_degree(), Ok(GradedDegree::Nonhomogeneous));
            assert_eq!(Poly::zero(2, ch).graded_degree(), Err(Error::ZeroDegree));
        }
    }

    #[test]
    fn modular_evaluation() {
        assert_eq!(p("t1*t2", 2, Char::Zero).eval_mod_p(&[2, 3], 10007), Ok(6));
        assert_eq!(Poly::zero(2, Char::Zero).eval_mod_p(&[5, 9], 10007), Ok(0));
        assert_eq!(p("1/2*t1", 1, Char::Zero).eval_mod_p(&[4], 10007), Ok(2));
        assert_eq!(
            p("1/7*t1", 1, Char::Zero).eval_mod_p(&[4], 7),
            Err(Error::DenominatorNotInvertible { prime: 7 })
        );
    }

    #[test]
    fn printing_is_graded_lex_descending() {
        let q = p("1 - 1/2*t3 + 3*t2*t1^2", 3, Char::Zero);
        assert_eq!(q.to_string(), "3*t1^2*t2 - 1/2*t3 + 1");
        assert_eq!(p("-t1 + t2", 2, Char::Zero).to_string(), "-t1 + t2");
        assert_eq!(Poly::zero(1, Char::Two).to_string(), "0");
        // signs vanish in characteristic two
        assert_eq!(p("t1 - t2 - t2", 2, Char::Two).to_string(), "t1");
    }

    #[test]
    fn parse_errors() {
        assert!(Poly::parse("t4", 3, Char::Zero).is_err());
        assert!(Poly::parse("t1 +", 3, Char::Zero).is_err());
        assert!(Poly::parse("", 3, Char::Zero).is_err());
        assert!(Poly::parse("1/2*t1", 3, Char::Two).is_err());
        assert!(Poly::parse("t1 + - t2", 3, Char::Zero).is_err());
    }

    #[test]
    fn exact_division() {
        let a = p("t1^2 - t2^2", 2, Char::Zero);
        let b = p("t1 + t2", 2, Char::Zero);
        assert_eq!(a.div_exact(&b), Ok(p("t1 - t2", 2, Char::Zero)));
        assert_eq!(p("t1^2 + 1", 2, Char::Zero).div_exact(&b), Err(Error::InexactDivision));
    }
}
