//! Base fields: the rationals, large prime fields for generic sampling, and
//! small Galois fields `F_q` (q a prime power) for point counting.
//!
//! A [`Field`] value is a *context*: element arithmetic goes through it, so a
//! prime field can carry its modulus at runtime without global state.

use std::fmt::Debug;
use std::hash::Hash;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};
use rand::{Rng, RngCore};

use crate::error::HiggsError;

/// Arithmetic context for a commutative field.
pub trait Field: Clone + Debug + Send + Sync {
    /// Element representation.
    type E: Clone + PartialEq + Eq + Hash + Debug + Send + Sync;

    fn zero(&self) -> Self::E;
    fn one(&self) -> Self::E;
    fn add(&self, a: &Self::E, b: &Self::E) -> Self::E;
    fn sub(&self, a: &Self::E, b: &Self::E) -> Self::E;
    fn mul(&self, a: &Self::E, b: &Self::E) -> Self::E;
    fn neg(&self, a: &Self::E) -> Self::E;
    /// Multiplicative inverse; panics on zero (callers test first).
    fn inv(&self, a: &Self::E) -> Self::E;
    fn is_zero(&self, a: &Self::E) -> bool;
    fn from_i64(&self, v: i64) -> Self::E;
    /// A uniformly random element (bounded height for the rationals).
    fn random(&self, rng: &mut dyn RngCore) -> Self::E;
    /// Characteristic (0 for the rationals).
    fn characteristic(&self) -> u64;
    /// Number of elements, `None` when infinite.
    fn order(&self) -> Option<u64>;
    /// The `i`-th element in a fixed enumeration (finite fields only).
    fn element(&self, i: u64) -> Self::E;
    /// Human-readable rendering of an element.
    fn render(&self, a: &Self::E) -> String;

    fn div(&self, a: &Self::E, b: &Self::E) -> Self::E {
        self.mul(a, &self.inv(b))
    }

    fn is_one(&self, a: &Self::E) -> bool {
        *a == self.one()
    }

    fn random_nonzero(&self, rng: &mut dyn RngCore) -> Self::E {
        loop {
            let x = self.random(rng);
            if !self.is_zero(&x) {
                return x;
            }
        }
    }

    fn pow(&self, a: &Self::E, mut e: u64) -> Self::E {
        let mut base = a.clone();
        let mut acc = self.one();
        while e > 0 {
            if e & 1 == 1 {
                acc = self.mul(&acc, &base);
            }
            base = self.mul(&base, &base);
            e >>= 1;
        }
        acc
    }
}

/// The prime field `F_p` for a word-sized prime `p`, without tables.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PrimeField {
    p: u64,
}

impl PrimeField {
    /// The Mersenne prime 2³¹ − 1, used as the default "generic" field:
    /// large enough that random choices avoid every proper Zariski-closed
    /// condition met at desk scale.
    pub const GENERIC_PRIME: u64 = 2_147_483_647;

    pub fn new(p: u64) -> Result<Self, HiggsError> {
        if !(2..(1 << 62)).contains(&p) || !is_prime(p) {
            return Err(HiggsError::InvalidInput(format!("{p} is not a supported prime")));
        }
        Ok(Self { p })
    }

    /// The default large prime field.
    pub fn generic() -> Self {
        Self { p: Self::GENERIC_PRIME }
    }

    pub fn modulus(&self) -> u64 {
        self.p
    }
}

impl Field for PrimeField {
    type E = u64;

    fn zero(&self) -> u64 {
        0
    }
    fn one(&self) -> u64 {
        1
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
        ((*a as u128 * *b as u128) % self.p as u128) as u64
    }
    fn neg(&self, a: &u64) -> u64 {
        if *a == 0 {
            0
        } else {
            self.p - a
        }
    }
    fn inv(&self, a: &u64) -> u64 {
        assert!(*a != 0, "inverse of zero");
        self.pow(a, self.p - 2)
    }
    fn is_zero(&self, a: &u64) -> bool {
        *a == 0
    }
    fn from_i64(&self, v: i64) -> u64 {
        v.rem_euclid(self.p as i64) as u64
    }
    fn random(&self, rng: &mut dyn RngCore) -> u64 {
        rng.gen_range(0..self.p)
    }
    fn characteristic(&self) -> u64 {
        self.p
    }
    fn order(&self) -> Option<u64> {
        Some(self.p)
    }
    fn element(&self, i: u64) -> u64 {
        i % self.p
    }
    fn render(&self, a: &u64) -> String {
        a.to_string()
    }
}

/// A small Galois field `F_q`, `q = p^k ≤ 4096`, with full lookup tables.
///
/// Elements are integers `0..q` read as base-`p` digit vectors, i.e.
/// polynomials in a root of a fixed irreducible polynomial.
#[derive(Clone, Debug)]
pub struct GaloisField {
    p: u64,
    k: u32,
    q: u64,
    add_t: Vec<u16>,
    mul_t: Vec<u16>,
    neg_t: Vec<u16>,
    inv_t: Vec<u16>,
}

impl PartialEq for GaloisField {
    fn eq(&self, other: &Self) -> bool {
        self.q == other.q
    }
}

impl GaloisField {
    /// Build `F_q`; fails unless `q` is a prime power with `q ≤ 4096`.
    pub fn new(q: u64) -> Result<Self, HiggsError> {
        let (p, k) = prime_power(q)
            .ok_or_else(|| HiggsError::InvalidInput(format!("{q} is not a prime power")))?;
        if q > 4096 {
            return Err(HiggsError::InvalidInput(format!("field order {q} too large for tables")));
        }
        let modulus = irreducible_poly(p, k);
        let qs = q as usize;
        let digits = |x: u64| -> Vec<u64> {
            let mut v = Vec::with_capacity(k as usize);
            let mut y = x;
            for _ in 0..k {
                v.push(y % p);
                y /= p;
            }
            v
        };
        let undigits = |v: &[u64]| -> u64 { v.iter().rev().fold(0, |acc, &d| acc * p + d) };
        let mut add_t = vec![0u16; qs * qs];
        let mut mul_t = vec![0u16; qs * qs];
        for a in 0..q {
            let da = digits(a);
            for b in 0..q {
                let db = digits(b);
                let s: Vec<u64> = da.iter().zip(&db).map(|(x, y)| (x + y) % p).collect();
                add_t[(a * q + b) as usize] = undigits(&s) as u16;
                // schoolbook product then reduction by the monic modulus
                let mut prod = vec![0u64; 2 * k as usize];
                for (i, x) in da.iter().enumerate() {
                    for (j, y) in db.iter().enumerate() {
                        prod[i + j] = (prod[i + j] + x * y) % p;
                    }
                }
                for deg in (k as usize..prod.len()).rev() {
                    let c = prod[deg];
                    if c != 0 {
                        prod[deg] = 0;
                        for (i, m) in modulus.iter().take(k as usize).enumerate() {
                            let idx = deg - k as usize + i;
                            prod[idx] = (prod[idx] + p - (c * m) % p) % p;
                        }
                    }
                }
                mul_t[(a * q + b) as usize] = undigits(&prod[..k as usize]) as u16;
            }
        }
        let mut neg_t = vec![0u16; qs];
        let mut inv_t = vec![0u16; qs];
        for a in 0..q {
            for b in 0..q {
                if add_t[(a * q + b) as usize] == 0 {
                    neg_t[a as usize] = b as u16;
                }
                if mul_t[(a * q + b) as usize] == 1 {
                    inv_t[a as usize] = b as u16;
                }
            }
        }
        Ok(Self { p, k, q, add_t, mul_t, neg_t, inv_t })
    }

    pub fn size(&self) -> u64 {
        self.q
    }

    pub fn degree(&self) -> u32 {
        self.k
    }
}

impl Field for GaloisField {
    type E = u16;

    fn zero(&self) -> u16 {
        0
    }
    fn one(&self) -> u16 {
        1
    }
    fn add(&self, a: &u16, b: &u16) -> u16 {
        self.add_t[*a as usize * self.q as usize + *b as usize]
    }
    fn sub(&self, a: &u16, b: &u16) -> u16 {
        self.add(a, &self.neg_t[*b as usize])
    }
    fn mul(&self, a: &u16, b: &u16) -> u16 {
        self.mul_t[*a as usize * self.q as usize + *b as usize]
    }
    fn neg(&self, a: &u16) -> u16 {
        self.neg_t[*a as usize]
    }
    fn inv(&self, a: &u16) -> u16 {
        assert!(*a != 0, "inverse of zero");
        self.inv_t[*a as usize]
    }
    fn is_zero(&self, a: &u16) -> bool {
        *a == 0
    }
    fn from_i64(&self, v: i64) -> u16 {
        // the prime subfield sits on the constant digit
        v.rem_euclid(self.p as i64) as u16
    }
    fn random(&self, rng: &mut dyn RngCore) -> u16 {
        rng.gen_range(0..self.q) as u16
    }
    fn characteristic(&self) -> u64 {
        self.p
    }
    fn order(&self) -> Option<u64> {
        Some(self.q)
    }
    fn element(&self, i: u64) -> u16 {
        (i % self.q) as u16
    }
    fn render(&self, a: &u16) -> String {
        if self.k == 1 {
            a.to_string()
        } else {
            format!("g{a}")
        }
    }
}

/// The rational numbers with arbitrary-precision entries.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Rationals {
    /// Height bound for random sampling: numerators in `[-h, h]`,
    /// denominators in `[1, h]`.
    pub height: i64,
}

impl Default for Rationals {
    fn default() -> Self {
        Self { height: 1000 }
    }
}

impl Field for Rationals {
    type E = BigRational;

    fn zero(&self) -> BigRational {
        BigRational::zero()
    }
    fn one(&self) -> BigRational {
        BigRational::one()
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
    fn inv(&self, a: &BigRational) -> BigRational {
        assert!(!a.is_zero(), "inverse of zero");
        a.recip()
    }
    fn is_zero(&self, a: &BigRational) -> bool {
        a.is_zero()
    }
    fn from_i64(&self, v: i64) -> BigRational {
        BigRational::from_integer(BigInt::from(v))
    }
    fn random(&self, rng: &mut dyn RngCore) -> BigRational {
        let n = rng.gen_range(-self.height..=self.height);
        let d = rng.gen_range(1..=self.height);
        BigRational::new(BigInt::from(n), BigInt::from(d))
    }
    fn characteristic(&self) -> u64 {
        0
    }
    fn order(&self) -> Option<u64> {
        None
    }
    fn element(&self, i: u64) -> BigRational {
        self.from_i64(i as i64)
    }
    fn render(&self, a: &BigRational) -> String {
        render_rational(a)
    }
}

/// `"num/den"` rendering (integers print without a denominator).
pub fn render_rational(a: &BigRational) -> String {
    if a.denom().is_one() {
        a.numer().to_string()
    } else {
        format!("{}/{}", a.numer(), a.denom())
    }
}

/// Parse `"num/den"` or an integer into a rational.
pub fn parse_rational(s: &str) -> Result<BigRational, HiggsError> {
    let bad = || HiggsError::InvalidInput(format!("not a rational: {s:?}"));
    let s = s.trim();
    match s.split_once('/') {
        Some((n, d)) => {
            let n: BigInt = n.trim().parse().map_err(|_| bad())?;
            let d: BigInt = d.trim().parse().map_err(|_| bad())?;
            if d.is_zero() {
                return Err(bad());
            }
            Ok(BigRational::new(n, d))
        }
        None => Ok(BigRational::from_integer(s.parse().map_err(|_| bad())?)),
    }
}

/// Serde adapter serializing a rational as a `"num/den"` string.
pub mod rational_string {
    use super::*;
    use serde::{Deserialize, Deserializer, Serializer};

    pub fn serialize<S: Serializer>(v: &BigRational, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&render_rational(v))
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<BigRational, D::Error> {
        let s = String::deserialize(d)?;
        parse_rational(&s).map_err(serde::de::Error::custom)
    }
}

/// Trial-division primality (inputs are at most a few billion).
pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    let mut d = 2u64;
    while d * d <= n {
        if n.is_multiple_of(d) {
            return false;
        }
        d += 1;
    }
    true
}

/// Decompose `q = p^k` with `p` prime.
pub fn prime_power(q: u64) -> Option<(u64, u32)> {
    if q < 2 {
        return None;
    }
    let mut p = 2;
    while !q.is_multiple_of(p) {
        p += 1;
    }
    let (mut r, mut k) = (q, 0);
    while r % p == 0 {
        r /= p;
        k += 1;
    }
    (r == 1).then_some((p, k))
}

/// The lexicographically first monic irreducible polynomial of degree `k`
/// over `F_p`, returned as coefficients `c_0..c_{k-1}` (the leading 1 is implicit).
fn irreducible_poly(p: u64, k: u32) -> Vec<u64> {
    if k == 1 {
        return vec![0];
    }
    let count = p.pow(k);
    'cand: for code in 0..count {
        let mut c = Vec::with_capacity(k as usize + 1);
        let mut y = code;
        for _ in 0..k {
            c.push(y % p);
            y /= p;
        }
        c.push(1);
        // A polynomial of degree ≤ 3 is irreducible iff it has no root; for
        // higher degree test divisibility by every monic of degree ≤ k/2.
        for dd in 1..=(k / 2) {
            for code2 in 0..p.pow(dd) {
                let mut g = Vec::with_capacity(dd as usize + 1);
                let mut z = code2;
                for _ in 0..dd {
                    g.push(z % p);
                    z /= p;
                }
                g.push(1);
                if poly_rem_mod(&c, &g, p).iter().all(|&x| x == 0) {
                    continue 'cand;
                }
            }
        }
        c.pop();
        return c;
    }
    unreachable!("irreducible polynomials exist in every degree")
}

fn poly_rem_mod(a: &[u64], b: &[u64], p: u64) -> Vec<u64> {
    let mut r = a.to_vec();
    let db = b.len() - 1;
    while r.len() > db {
        let lead = *r.last().unwrap();
        let shift = r.len() - 1 - db;
        if lead != 0 {
            for (i, bi) in b.iter().enumerate() {
                r[shift + i] = (r[shift + i] + p - (lead * bi) % p) % p;
            }
        }
        r.pop();
    }
    r
}

#[cfg(test)]
mod tests {
    use super::*;

    fn check_axioms<F: Field>(f: &F) {
        let q = f.order().unwrap();
        for i in 0..q {
            let a = f.element(i);
            assert_eq!(f.add(&a, &f.neg(&a)), f.zero());
            if !f.is_zero(&a) {
                assert_eq!(f.mul(&a, &f.inv(&a)), f.one());
            }
            for j in 0..q {
                let b = f.element(j);
                assert_eq!(f.mul(&a, &b), f.mul(&b, &a));
                for k in 0..q.min(7) {
                    let c = f.element(k);
                    let lhs = f.mul(&a, &f.add(&b, &c));
                    let rhs = f.add(&f.mul(&a, &b), &f.mul(&a, &c));
                    assert_eq!(lhs, rhs);
                }
            }
        }
    }

    #[test]
    fn galois_fields_satisfy_field_axioms() {
        for q in [2, 3, 4, 5, 7, 8, 9, 11, 13, 16, 25, 27] {
            let f = GaloisField::new(q).unwrap();
            check_axioms(&f);
            // every nonzero element satisfies x^(q-1) = 1
            for i in 1..q {
                assert_eq!(f.pow(&f.element(i), q - 1), f.one());
            }
        }
    }

    #[test]
    fn prime_power_decomposition() {
        assert_eq!(prime_power(8), Some((2, 3)));
        assert_eq!(prime_power(9), Some((3, 2)));
        assert_eq!(prime_power(12), None);
        assert!(GaloisField::new(6).is_err());
    }

    #[test]
    fn rational_strings_round_trip() {
        let x = parse_rational("-6/4").unwrap();
        assert_eq!(render_rational(&x), "-3/2");
        assert_eq!(render_rational(&parse_rational("7").unwrap()), "7");
        assert!(parse_rational("1/0").is_err());
    }

    #[test]
    fn prime_field_inverse() {
        let f = PrimeField::generic();
        let a = 123_456_789u64;
        assert_eq!(f.mul(&a, &f.inv(&a)), 1);
        assert_eq!(f.from_i64(-1), PrimeField::GENERIC_PRIME - 1);
    }
}
