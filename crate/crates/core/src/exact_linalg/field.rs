//! Exact scalar fields.
//!
//! Arithmetic goes through a field *context* rather than operator traits so that
//! finite fields can carry their tables around.

use alloc::vec;
use alloc::vec::Vec;
use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};

pub type Q = num_rational::BigRational;

pub fn qint(v: i64) -> Q {
    Q::from_integer(BigInt::from(v))
}

pub trait Field {
    type Elem: Clone + PartialEq + core::fmt::Debug;

    fn zero(&self) -> Self::Elem;
    fn one(&self) -> Self::Elem;
    fn is_zero(&self, a: &Self::Elem) -> bool;
    fn add(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem;
    fn sub(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem;
    fn mul(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem;
    fn neg(&self, a: &Self::Elem) -> Self::Elem;
    /// Panics on zero; elimination routines never ask for it.
    fn inv(&self, a: &Self::Elem) -> Self::Elem;
}

/// The rational numbers with arbitrary precision.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct Rationals;

impl Field for Rationals {
    type Elem = Q;

    fn zero(&self) -> Q {
        Q::zero()
    }
    fn one(&self) -> Q {
        Q::one()
    }
    fn is_zero(&self, a: &Q) -> bool {
        a.is_zero()
    }
    fn add(&self, a: &Q, b: &Q) -> Q {
        a + b
    }
    fn sub(&self, a: &Q, b: &Q) -> Q {
        a - b
    }
    fn mul(&self, a: &Q, b: &Q) -> Q {
        a * b
    }
    fn neg(&self, a: &Q) -> Q {
        -a
    }
    fn inv(&self, a: &Q) -> Q {
        assert!(!a.is_zero(), "inverse of zero");
        a.recip()
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
struct Tables {
    add: Vec<u32>,
    mul: Vec<u32>,
    neg: Vec<u32>,
    inv: Vec<u32>,
}

/// A finite field of order q = p^k.
///
/// Prime fields use modular arithmetic directly (p < 2^31). Proper extensions are
/// table driven and limited to q <= 1024; an element is the integer whose base-p
/// digits are its polynomial coefficients, so the prime subfield is 0..p.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GaloisField {
    p: u32,
    k: u32,
    q: u32,
    modulus: Vec<u32>,
    tables: Option<Tables>,
}

const MAX_EXTENSION_ORDER: u64 = 1024;

fn is_prime(p: u64) -> bool {
    if p < 2 {
        return false;
    }
    let mut d = 2;
    while d * d <= p {
        if p.is_multiple_of(d) {
            return false;
        }
        d += 1;
    }
    true
}

/// Splits `q` as `p^k` with `p` prime.
pub fn prime_power(q: u64) -> Option<(u64, u32)> {
    if q < 2 {
        return None;
    }
    let mut p = 2;
    while !q.is_multiple_of(p) {
        p += 1;
    }
    if !is_prime(p) {
        return None;
    }
    let (mut r, mut k) = (q, 0);
    while r % p == 0 {
        r /= p;
        k += 1;
    }
    (r == 1).then_some((p, k))
}

// Polynomials over F_p: coefficient vectors, lowest degree first, no trailing zeros.
fn poly_trim(mut a: Vec<u32>) -> Vec<u32> {
    while a.last() == Some(&0) {
        a.pop();
    }
    a
}

fn poly_rem(a: &[u32], m: &[u32], p: u32) -> Vec<u32> {
    let mut r = poly_trim(a.to_vec());
    let dm = m.len() - 1;
    let lead_inv = pow_mod(m[dm], p - 2, p);
    while r.len() > dm {
        let shift = r.len() - 1 - dm;
        let c = (r[r.len() - 1] as u64 * lead_inv as u64 % p as u64) as u32;
        for (t, &mc) in m.iter().enumerate() {
            let sub = (c as u64 * mc as u64 % p as u64) as u32;
            r[t + shift] = (r[t + shift] + p - sub) % p;
        }
        r = poly_trim(r);
    }
    r
}

fn pow_mod(b: u32, mut e: u32, p: u32) -> u32 {
    let (mut acc, mut base) = (1u64, b as u64 % p as u64);
    while e > 0 {
        if e & 1 == 1 {
            acc = acc * base % p as u64;
        }
        base = base * base % p as u64;
        e >>= 1;
    }
    acc as u32
}

fn digits(x: u32, p: u32, len: usize) -> Vec<u32> {
    let mut out = vec![0; len];
    let mut x = x;
    for d in out.iter_mut() {
        *d = x % p;
        x /= p;
    }
    out
}

fn undigits(d: &[u32], p: u32) -> u32 {
    d.iter().rev().fold(0, |acc, &c| acc * p + c)
}

fn monic(code: u32, p: u32, deg: usize) -> Vec<u32> {
    let mut c = digits(code, p, deg);
    c.push(1);
    c
}

fn irreducible(m: &[u32], p: u32) -> bool {
    let deg = m.len() - 1;
    for d in 1..=deg / 2 {
        for code in 0..p.pow(d as u32) {
            if poly_rem(m, &monic(code, p, d), p).is_empty() {
                return false;
            }
        }
    }
    true
}

impl GaloisField {
    pub fn new(q: u64) -> Result<Self> {
        let (p, k) = prime_power(q).ok_or(Error::NotAPrimePower { q })?;
        if k == 1 {
            if p >= 1 << 31 {
                return Err(Error::UnsupportedField { q });
            }
            return Ok(GaloisField { p: p as u32, k, q: p as u32, modulus: vec![0, 1], tables: None });
        }
        if q > MAX_EXTENSION_ORDER {
            return Err(Error::UnsupportedField { q });
        }
        let (p, q) = (p as u32, q as u32);
        let deg = k as usize;
        let modulus = (0..q)
            .map(|code| monic(code, p, deg))
            .find(|m| irreducible(m, p))
            .expect("irreducible polynomials exist in every degree");
        let n = q as usize;
        let mut add = vec![0; n * n];
        let mut mul = vec![0; n * n];
        for a in 0..q {
            let da = digits(a, p, deg);
            for b in 0..q {
                let db = digits(b, p, deg);
                let s: Vec<u32> = da.iter().zip(&db).map(|(x, y)| (x + y) % p).collect();
                add[(a * q + b) as usize] = undigits(&s, p);
                let mut prod = vec![0u32; 2 * deg];
                for (i, x) in da.iter().enumerate() {
                    for (j, y) in db.iter().enumerate() {
                        prod[i + j] = (prod[i + j] + x * y) % p;
                    }
                }
                let mut r = poly_rem(&prod, &modulus, p);
                r.resize(deg, 0);
                mul[(a * q + b) as usize] = undigits(&r, p);
            }
        }
        let mut neg = vec![0; n];
        let mut inv = vec![0; n];
        for a in 0..q {
            for b in 0..q {
                if add[(a * q + b) as usize] == 0 {
                    neg[a as usize] = b;
                }
                if mul[(a * q + b) as usize] == 1 {
                    inv[a as usize] = b;
                }
            }
        }
        Ok(GaloisField { p, k, q, modulus, tables: Some(Tables { add, mul, neg, inv }) })
    }

    pub fn order(&self) -> u32 {
        self.q
    }

    pub fn characteristic(&self) -> u32 {
        self.p
    }

    pub fn degree(&self) -> u32 {
        self.k
    }

    /// The defining polynomial, lowest coefficient first (`x` for prime fields).
    pub fn modulus(&self) -> &[u32] {
        &self.modulus
    }

    pub fn elements(&self) -> core::ops::Range<u32> {
        0..self.q
    }

    /// Image of a rational number in the prime subfield.
    pub fn from_rational(&self, x: &Q) -> Result<u32> {
        let p = BigInt::from(self.p);
        let num = x.numer().mod_floor(&p).to_u32().expect("reduced below p");
        let den = x.denom().mod_floor(&p).to_u32().expect("reduced below p");
        if den == 0 {
            return Err(Error::NotReducible { p: self.p as u64 });
        }
        debug_assert!(!x.denom().is_negative());
        let v = num as u64 * pow_mod(den, self.p - 2, self.p) as u64 % self.p as u64;
        Ok(v as u32)
    }
}

impl Field for GaloisField {
    type Elem = u32;

    fn zero(&self) -> u32 {
        0
    }
    fn one(&self) -> u32 {
        1
    }
    fn is_zero(&self, a: &u32) -> bool {
        *a == 0
    }
    fn add(&self, a: &u32, b: &u32) -> u32 {
        match &self.tables {
            Some(t) => t.add[(*a * self.q + *b) as usize],
            None => ((*a as u64 + *b as u64) % self.p as u64) as u32,
        }
    }
    fn sub(&self, a: &u32, b: &u32) -> u32 {
        self.add(a, &self.neg(b))
    }
    fn mul(&self, a: &u32, b: &u32) -> u32 {
        match &self.tables {
            Some(t) => t.mul[(*a * self.q + *b) as usize],
            None => (*a as u64 * *b as u64 % self.p as u64) as u32,
        }
    }
    fn neg(&self, a: &u32) -> u32 {
        match &self.tables {
            Some(t) => t.neg[*a as usize],
            None => (self.p - *a) % self.p,
        }
    }
    fn inv(&self, a: &u32) -> u32 {
        assert!(*a != 0, "inverse of zero");
        match &self.tables {
            Some(t) => t.inv[*a as usize],
            None => pow_mod(*a, self.p - 2, self.p),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn splits_prime_powers() {
        assert_eq!(prime_power(8), Some((2, 3)));
        assert_eq!(prime_power(9), Some((3, 2)));
        assert_eq!(prime_power(7), Some((7, 1)));
        assert_eq!(prime_power(6), None);
        assert_eq!(prime_power(1), None);
    }

    #[test]
    fn field_axioms_hold_for_small_orders() {
        for q in [2u64, 3, 4, 5, 7, 8, 9, 16, 25, 27] {
            let f = GaloisField::new(q).unwrap();
            for a in f.elements() {
                assert_eq!(f.add(&a, &f.neg(&a)), 0);
                if a != 0 {
                    assert_eq!(f.mul(&a, &f.inv(&a)), 1, "q={q} a={a}");
                }
                for b in f.elements() {
                    assert_eq!(f.mul(&a, &b), f.mul(&b, &a));
                    for c in [0, 1, f.order() - 1] {
                        let lhs = f.mul(&a, &f.add(&b, &c));
                        let rhs = f.add(&f.mul(&a, &b), &f.mul(&a, &c));
                        assert_eq!(lhs, rhs);
                    }
                }
            }
        }
    }

    #[test]
    fn multiplicative_group_is_cyclic_of_order_q_minus_one() {
        let f = GaloisField::new(9).unwrap();
        let has_generator = (1..9).any(|g| {
            let mut x = 1;
            let mut seen = 0;
            for _ in 0..8 {
                x = f.mul(&x, &g);
                seen += 1;
                if x == 1 {
                    break;
                }
            }
            seen == 8
        });
        assert!(has_generator);
    }

    #[test]
    fn rationals_reduce_into_prime_subfield() {
        let f = GaloisField::new(7).unwrap();
        let half = Q::new(BigInt::from(1), BigInt::from(2));
        assert_eq!(f.from_rational(&half).unwrap(), 4);
        assert_eq!(f.from_rational(&qint(-1)).unwrap(), 6);
        let bad = Q::new(BigInt::from(1), BigInt::from(7));
        assert!(f.from_rational(&bad).is_err());
    }

    #[test]
    fn rejects_non_prime_powers() {
        assert_eq!(GaloisField::new(12), Err(Error::NotAPrimePower { q: 12 }));
        assert!(GaloisField::new(2048).is_err());
    }
}
