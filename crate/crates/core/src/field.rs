//! Coefficient fields for exact linear algebra.
//!
//! Every field is a context object: elements are plain values and all
//! arithmetic goes through the context, so prime moduli can be chosen at
//! runtime without tagging each element.

use std::fmt::Debug;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, ToPrimitive, Zero};
use rand::Rng;

use crate::error::{Error, Result};

pub trait Field: Sync + Send {
    type Elem: Clone + PartialEq + Eq + Debug + Send + Sync;

    fn zero(&self) -> Self::Elem;
    fn one(&self) -> Self::Elem;
    fn is_zero(&self, a: &Self::Elem) -> bool;
    fn add(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem;
    fn sub(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem;
    fn mul(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem;
    fn neg(&self, a: &Self::Elem) -> Self::Elem;
    /// `None` exactly for zero.
    fn inv(&self, a: &Self::Elem) -> Option<Self::Elem>;
    /// Image of an exact rational under the canonical map from the prime field.
    fn from_rational(&self, q: &BigRational) -> Result<Self::Elem>;
}

/// The rationals, with arbitrary-precision numerators and denominators.
#[derive(Clone, Copy, Debug, Default)]
pub struct Rationals;

impl Field for Rationals {
    type Elem = BigRational;

    fn zero(&self) -> BigRational {
        BigRational::zero()
    }
    fn one(&self) -> BigRational {
        BigRational::one()
    }
    fn is_zero(&self, a: &BigRational) -> bool {
        a.is_zero()
    }
    fn add(&self, a: &BigRational, b: &BigRational) -> BigRational {
        a + b
    }
    fn sub(&self, a: &BigRational, b: &BigRational) -> BigRational {
        a - b
    }
    fn mul(&self, a: &BigRational, b: &BigRational) -> BigRational {
        a * b
    }
    fn neg(&self, a: &BigRational) -> BigRational {
        -a
    }
    fn inv(&self, a: &BigRational) -> Option<BigRational> {
        (!a.is_zero()).then(|| a.recip())
    }
    fn from_rational(&self, q: &BigRational) -> Result<BigRational> {
        Ok(q.clone())
    }
}

/// The field with two elements.
#[derive(Clone, Copy, Debug, Default)]
pub struct Gf2;

impl Field for Gf2 {
    type Elem = bool;

    fn zero(&self) -> bool {
        false
    }
    fn one(&self) -> bool {
        true
    }
    fn is_zero(&self, a: &bool) -> bool {
        !*a
    }
    fn add(&self, a: &bool, b: &bool) -> bool {
        a ^ b
    }
    fn sub(&self, a: &bool, b: &bool) -> bool {
        a ^ b
    }
    fn mul(&self, a: &bool, b: &bool) -> bool {
        a & b
    }
    fn neg(&self, a: &bool) -> bool {
        *a
    }
    fn inv(&self, a: &bool) -> Option<bool> {
        a.then_some(true)
    }
    fn from_rational(&self, q: &BigRational) -> Result<bool> {
        let two = BigInt::from(2);
        if q.denom().is_even() {
            return Err(Error::DenominatorNotInvertible { prime: 2 });
        }
        Ok(!q.numer().mod_floor(&two).is_zero())
    }
}

/// Integers modulo a prime `p < 2^63`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct PrimeField {
    p: u64,
}

impl PrimeField {
    pub fn new(p: u64) -> Result<Self> {
        if !(2..1 << 63).contains(&p) || !is_prime(p) {
            return Err(Error::InvalidArgument(format!("{p} is not a prime below 2^63")));
        }
        Ok(PrimeField { p })
    }

    pub fn modulus(&self) -> u64 {
        self.p
    }

    pub fn pow(&self, mut base: u64, mut exp: u64) -> u64 {
        let mut acc = 1 % self.p;
        base %= self.p;
        while exp > 0 {
            if exp & 1 == 1 {
                acc = mul_mod(acc, base, self.p);
            }
            base = mul_mod(base, base, self.p);
            exp >>= 1;
        }
        acc
    }

    pub fn reduce_int(&self, n: &BigInt) -> u64 {
        let r = n.mod_floor(&BigInt::from(self.p));
        r.to_u64().expect("residue fits in u64")
    }
}

impl Field for PrimeField {
    type Elem = u64;

    fn zero(&self) -> u64 {
        0
    }
    fn one(&self) -> u64 {
        1
    }
    fn is_zero(&self, a: &u64) -> bool {
        *a == 0
    }
    fn add(&self, a: &u64, b: &u64) -> u64 {
        let s = a + b;
        if s >= self.p {
            s - self.p
        } else {
            s
        }
    }
    fn sub(&self, a: &u64, b: &u64) -> u64 {
        if a >= b {
            a - b
        } else {
            a + self.p - b
        }
    }
    fn mul(&self, a: &u64, b: &u64) -> u64 {
        mul_mod(*a, *b, self.p)
    }
    fn neg(&self, a: &u64) -> u64 {
        if *a == 0 {
            0
        } else {
            self.p - a
        }
    }
    fn inv(&self, a: &u64) -> Option<u64> {
        (*a != 0).then(|| self.pow(*a, self.p - 2))
    }
    fn from_rational(&self, q: &BigRational) -> Result<u64> {
        let den = self.reduce_int(q.denom());
        if den == 0 {
            return Err(Error::DenominatorNotInvertible { prime: self.p });
        }
        let num = self.reduce_int(q.numer());
        Ok(self.mul(&num, &self.inv(&den).expect("nonzero")))
    }
}

/// GF(2^64) = GF(2)[x] / (x^64 + x^4 + x^3 + x + 1).
///
/// Used as the evaluation field for characteristic-two probabilistic rank:
/// evaluating over a large prime field would change the characteristic.
#[derive(Clone, Copy, Debug, Default)]
pub struct Gf2_64;

const GF2_64_TAIL: u64 = 0b1_1011;

fn clmul(a: u64, b: u64) -> u128 {
    let mut acc = 0u128;
    let a = a as u128;
    let mut b = b;
    let mut shift = 0;
    while b != 0 {
        if b & 1 == 1 {
            acc ^= a << shift;
        }
        b >>= 1;
        shift += 1;
    }
    acc
}

fn gf2_64_reduce(x: u128) -> u64 {
    let mut hi = (x >> 64) as u64;
    let mut lo = x as u64;
    // Fold the high half twice: the tail has degree 4, so the second fold
    // leaves nothing above bit 63.
    while hi != 0 {
        let folded = clmul(hi, GF2_64_TAIL);
        lo ^= folded as u64;
        hi = (folded >> 64) as u64;
    }
    lo
}

impl Gf2_64 {
    pub fn random_nonzero<R: Rng + ?Sized>(&self, rng: &mut R) -> u64 {
        loop {
            let v: u64 = rng.random();
            if v != 0 {
                return v;
            }
        }
    }
}

impl Field for Gf2_64 {
    type Elem = u64;

    fn zero(&self) -> u64 {
        0
    }
    fn one(&self) -> u64 {
        1
    }
    fn is_zero(&self, a: &u64) -> bool {
        *a == 0
    }
    fn add(&self, a: &u64, b: &u64) -> u64 {
        a ^ b
    }
    fn sub(&self, a: &u64, b: &u64) -> u64 {
        a ^ b
    }
    fn mul(&self, a: &u64, b: &u64) -> u64 {
        gf2_64_reduce(clmul(*a, *b))
    }
    fn neg(&self, a: &u64) -> u64 {
        *a
    }
    fn inv(&self, a: &u64) -> Option<u64> {
        if *a == 0 {
            return None;
        }
        // a^(2^64 - 2)
        let mut acc = 1u64;
        let mut base = *a;
        let mut exp = u64::MAX - 1;
        while exp > 0 {
            if exp & 1 == 1 {
                acc = self.mul(&acc, &base);
            }
            base = self.mul(&base, &base);
            exp >>= 1;
        }
        Some(acc)
    }
    fn from_rational(&self, q: &BigRational) -> Result<u64> {
        Gf2.from_rational(q).map(u64::from)
    }
}

pub fn mul_mod(a: u64, b: u64, p: u64) -> u64 {
    ((a as u128 * b as u128) % p as u128) as u64
}

fn pow_mod(mut base: u64, mut exp: u64, p: u64) -> u64 {
    let mut acc = 1 % p;
    base %= p;
    while exp > 0 {
        if exp & 1 == 1 {
            acc = mul_mod(acc, base, p);
        }
        base = mul_mod(base, base, p);
        exp >>= 1;
    }
    acc
}

/// Deterministic Miller-Rabin for all 64-bit inputs.
pub fn is_prime(n: u64) -> bool {
    const BASES: [u64; 12] = [2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37];
    if n < 2 {
        return false;
    }
    for &b in &BASES {
        if n % b == 0 {
            return n == b;
        }
    }
    let mut d = n - 1;
    let mut s = 0;
    while d % 2 == 0 {
        d /= 2;
        s += 1;
    }
    'witness: for &a in &BASES {
        let mut x = pow_mod(a, d, n);
        if x == 1 || x == n - 1 {
            continue;
        }
        for _ in 1..s {
            x = mul_mod(x, x, n);
            if x == n - 1 {
                continue 'witness;
            }
        }
        return false;
    }
    true
}

/// A uniformly chosen prime in `[2^(bits-1), 2^bits)`.
pub fn random_prime<R: Rng + ?Sized>(bits: u32, rng: &mut R) -> Result<u64> {
    if !(31..=62).contains(&bits) {
        return Err(Error::InvalidArgument(format!(
            "prime size must be between 31 and 62 bits, got {bits}"
        )));
    }
    let lo = 1u64 << (bits - 1);
    let hi = 1u64 << bits;
    loop {
        let candidate = rng.random_range(lo..hi) | 1;
        if is_prime(candidate) {
            return Ok(candidate);
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn primality_small_and_large() {
        let primes: Vec<u64> = (0..40).filter(|&n| is_prime(n)).collect();
        assert_eq!(primes, vec![2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37]);
        assert!(is_prime(2_147_483_647));
        assert!(!is_prime(2_147_483_649));
        assert!(is_prime(18_446_744_073_709_551_557));
    }

    #[test]
    fn random_primes_are_in_range() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        for _ in 0..20 {
            let p = random_prime(31, &mut rng).unwrap();
            assert!((1 << 30..1 << 31).contains(&p) && is_prime(p));
        }
        assert!(random_prime(12, &mut rng).is_err());
    }

    #[test]
    fn prime_field_rational_lift() {
        let f = PrimeField::new(10007).unwrap();
        let half = BigRational::new(1.into(), 2.into());
        let h = f.from_rational(&half).unwrap();
        assert_eq!(f.mul(&h, &2), 1);
        let bad = BigRational::new(1.into(), 10007.into());
        assert_eq!(
            f.from_rational(&bad),
            Err(Error::DenominatorNotInvertible { prime: 10007 })
        );
    }

    #[test]
    fn gf2_64_inverse_and_distributivity() {
        let f = Gf2_64;
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        for _ in 0..50 {
            let a = f.random_nonzero(&mut rng);
            let b: u64 = rng.random();
            let c: u64 = rng.random();
            assert_eq!(f.mul(&a, &f.inv(&a).unwrap()), 1);
            assert_eq!(f.mul(&a, &f.add(&b, &c)), f.add(&f.mul(&a, &b), &f.mul(&a, &c)));
            assert_eq!(f.mul(&f.mul(&a, &b), &c), f.mul(&a, &f.mul(&b, &c)));
        }
    }
}
