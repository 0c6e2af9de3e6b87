//! Exact arithmetic in GF(p^k).
//!
//! Elements are indexed densely by their coefficient vectors, compared
//! lexicographically with the constant coefficient first. Index `0` is
//! always zero. The arithmetic itself is table driven, which is plenty for
//! the field sizes the geometry builders use (`p^k <= 1024`).

use alloc::vec;
use alloc::vec::Vec;
use core::fmt;

use thiserror::Error;

/// Largest field order for which addition and multiplication tables are built.
pub const MAX_FIELD_ORDER: u32 = 1024;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum FieldError {
    #[error("{0} is not a prime")]
    NotPrime(u32),
    #[error("extension degree must be at least 1")]
    ZeroDegree,
    #[error("field of order {0} exceeds the supported bound {MAX_FIELD_ORDER}")]
    TooLarge(u64),
    #[error("{0} is not a prime power")]
    NotPrimePower(u32),
    #[error("zero has no multiplicative inverse")]
    ZeroInverse,
    #[error("operands belong to different fields")]
    FieldMismatch,
    #[error("coefficient vector has length {got}, expected {expected}")]
    BadLength { expected: usize, got: usize },
}

pub fn is_prime(n: u32) -> bool {
    if n < 2 {
        return false;
    }
    let mut d = 2u32;
    while d * d <= n {
        if n.is_multiple_of(d) {
            return false;
        }
        d += 1;
    }
    true
}

/// Splits `q` into `(p, k)` with `q = p^k`, or `None` when `q` is not a prime power.
pub fn prime_power(q: u32) -> Option<(u32, u32)> {
    if q < 2 {
        return None;
    }
    let p = (2..=q).find(|d| q.is_multiple_of(*d))?;
    let mut rest = q;
    let mut k = 0;
    while rest.is_multiple_of(p) {
        rest /= p;
        k += 1;
    }
    (rest == 1).then_some((p, k))
}

/// A finite field GF(p^k) given by a monic irreducible modulus.
#[derive(Clone)]
pub struct Field {
    p: u32,
    k: u32,
    order: u32,
    modulus: Vec<u32>,
    tag: u64,
    add: Vec<u16>,
    mul: Vec<u16>,
    neg: Vec<u16>,
    inv: Vec<u16>,
}

impl fmt::Debug for Field {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("Field")
            .field("p", &self.p)
            .field("k", &self.k)
            .field("modulus", &self.modulus)
            .finish()
    }
}

impl PartialEq for Field {
    fn eq(&self, other: &Self) -> bool {
        self.p == other.p && self.modulus == other.modulus
    }
}

impl Eq for Field {}

/// An element of a specific [`Field`].
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct FieldElement {
    tag: u64,
    index: u16,
}

impl FieldElement {
    /// Dense index of the element inside its field.
    pub fn index(self) -> u16 {
        self.index
    }
}

fn poly_rem(mut a: Vec<u32>, m: &[u32], p: u32) -> Vec<u32> {
    // m is monic
    let dm = m.len() - 1;
    while a.len() > dm {
        let lead = a[a.len() - 1];
        let shift = a.len() - 1 - dm;
        if lead != 0 {
            for (i, &c) in m.iter().enumerate() {
                let idx = shift + i;
                a[idx] = (a[idx] + p - (lead * c) % p) % p;
            }
        }
        a.pop();
    }
    a
}

fn digits(mut t: u32, p: u32, k: u32) -> Vec<u32> {
    // most significant digit is the constant coefficient
    let mut out = vec![0; k as usize];
    for i in (0..k as usize).rev() {
        out[i] = t % p;
        t /= p;
    }
    out
}

fn undigits(c: &[u32], p: u32) -> u32 {
    c.iter().fold(0, |acc, &d| acc * p + d)
}

/// Monic polynomial of degree `deg` whose lower coefficients are the digits of `t`.
fn monic(t: u32, p: u32, deg: u32) -> Vec<u32> {
    let mut m = digits(t, p, deg);
    m.push(1);
    m
}

fn is_irreducible(m: &[u32], p: u32) -> bool {
    let k = (m.len() - 1) as u32;
    for d in 1..=k / 2 {
        for t in 0..p.pow(d) {
            let divisor = monic(t, p, d);
            if poly_rem(m.to_vec(), &divisor, p).iter().all(|&c| c == 0) {
                return false;
            }
        }
    }
    true
}

impl Field {
    /// Builds GF(p^k) with the lexicographically smallest monic irreducible modulus.
    pub fn new(p: u32, k: u32) -> Result<Self, FieldError> {
        if !is_prime(p) {
            return Err(FieldError::NotPrime(p));
        }
        if k == 0 {
            return Err(FieldError::ZeroDegree);
        }
        let order = (p as u64).checked_pow(k).unwrap_or(u64::MAX);
        if order > MAX_FIELD_ORDER as u64 {
            return Err(FieldError::TooLarge(order));
        }
        let modulus = (0..p.pow(k))
            .map(|t| monic(t, p, k))
            .find(|m| is_irreducible(m, p))
            .expect("an irreducible polynomial of every degree exists");
        Ok(Self::with_modulus(p, modulus))
    }

    /// Builds GF(q) for a prime power `q`.
    pub fn of_order(q: u32) -> Result<Self, FieldError> {
        let (p, k) = prime_power(q).ok_or(FieldError::NotPrimePower(q))?;
        Self::new(p, k)
    }

    fn with_modulus(p: u32, modulus: Vec<u32>) -> Self {
        let k = (modulus.len() - 1) as u32;
        let order = p.pow(k);
        let q = order as usize;
        let polys: Vec<Vec<u32>> = (0..order).map(|t| digits(t, p, k)).collect();

        let mut add = vec![0u16; q * q];
        let mut mul = vec![0u16; q * q];
        for a in 0..q {
            for b in 0..q {
                let sum: Vec<u32> = polys[a]
                    .iter()
                    .zip(&polys[b])
                    .map(|(x, y)| (x + y) % p)
                    .collect();
                add[a * q + b] = undigits(&sum, p) as u16;

                let mut prod = vec![0u32; 2 * k as usize - 1];
                for (i, x) in polys[a].iter().enumerate() {
                    for (j, y) in polys[b].iter().enumerate() {
                        prod[i + j] = (prod[i + j] + x * y) % p;
                    }
                }
                let mut r = poly_rem(prod, &modulus, p);
                r.resize(k as usize, 0);
                mul[a * q + b] = undigits(&r, p) as u16;
            }
        }
        let neg = (0..q)
            .map(|a| (0..q).find(|&b| add[a * q + b] == 0).unwrap() as u16)
            .collect();
        let one_idx = {
            let mut c = vec![0u32; k as usize];
            c[0] = 1;
            undigits(&c, p) as u16
        };
        let mut inv = vec![0u16; q];
        for a in 1..q {
            inv[a] = (1..q).find(|&b| mul[a * q + b] == one_idx).unwrap() as u16;
        }

        let mut tag = 0xcbf2_9ce4_8422_2325u64;
        for &c in core::iter::once(&p).chain(&modulus) {
            tag ^= c as u64;
            tag = tag.wrapping_mul(0x0100_0000_01b3);
        }

        Field {
            p,
            k,
            order,
            modulus,
            tag,
            add,
            mul,
            neg,
            inv,
        }
    }

    pub fn characteristic(&self) -> u32 {
        self.p
    }

    pub fn degree(&self) -> u32 {
        self.k
    }

    pub fn order(&self) -> u32 {
        self.order
    }

    /// Modulus coefficients, constant term first; always monic of degree `k`.
    pub fn modulus(&self) -> &[u32] {
        &self.modulus
    }

    pub fn zero(&self) -> FieldElement {
        self.wrap(0)
    }

    pub fn one(&self) -> FieldElement {
        self.wrap(self.one_idx())
    }

    /// All elements in index order.
    pub fn elements(&self) -> impl Iterator<Item = FieldElement> + '_ {
        (0..self.order as u16).map(move |i| self.wrap(i))
    }

    pub fn element(&self, coeffs: &[u32]) -> Result<FieldElement, FieldError> {
        if coeffs.len() != self.k as usize {
            return Err(FieldError::BadLength {
                expected: self.k as usize,
                got: coeffs.len(),
            });
        }
        let reduced: Vec<u32> = coeffs.iter().map(|c| c % self.p).collect();
        Ok(self.wrap(undigits(&reduced, self.p) as u16))
    }

    /// Image of an integer under the prime-field embedding.
    pub fn from_int(&self, n: i64) -> FieldElement {
        let r = n.rem_euclid(self.p as i64) as u32;
        let mut c = vec![0u32; self.k as usize];
        c[0] = r;
        self.wrap(undigits(&c, self.p) as u16)
    }

    pub fn coeffs(&self, a: FieldElement) -> Result<Vec<u32>, FieldError> {
        self.check(a)?;
        Ok(digits(a.index as u32, self.p, self.k))
    }

    pub fn contains(&self, a: FieldElement) -> bool {
        a.tag == self.tag && (a.index as u32) < self.order
    }

    fn check(&self, a: FieldElement) -> Result<(), FieldError> {
        if self.contains(a) {
            Ok(())
        } else {
            Err(FieldError::FieldMismatch)
        }
    }

    fn wrap(&self, index: u16) -> FieldElement {
        FieldElement {
            tag: self.tag,
            index,
        }
    }

    pub fn add(&self, a: FieldElement, b: FieldElement) -> Result<FieldElement, FieldError> {
        self.check(a)?;
        self.check(b)?;
        Ok(self.wrap(self.add_idx(a.index, b.index)))
    }

    pub fn sub(&self, a: FieldElement, b: FieldElement) -> Result<FieldElement, FieldError> {
        self.check(a)?;
        self.check(b)?;
        Ok(self.wrap(self.sub_idx(a.index, b.index)))
    }

    pub fn mul(&self, a: FieldElement, b: FieldElement) -> Result<FieldElement, FieldError> {
        self.check(a)?;
        self.check(b)?;
        Ok(self.wrap(self.mul_idx(a.index, b.index)))
    }

    pub fn neg(&self, a: FieldElement) -> Result<FieldElement, FieldError> {
        self.check(a)?;
        Ok(self.wrap(self.neg_idx(a.index)))
    }

    pub fn inv(&self, a: FieldElement) -> Result<FieldElement, FieldError> {
        self.check(a)?;
        self.inv_idx(a.index).map(|i| self.wrap(i))
    }

    pub fn pow(&self, a: FieldElement, e: u64) -> Result<FieldElement, FieldError> {
        self.check(a)?;
        Ok(self.wrap(self.pow_idx(a.index, e)))
    }

    /// `a^(p^i)`; the exponent `i` is taken modulo `k`.
    pub fn frobenius(&self, a: FieldElement, i: u32) -> Result<FieldElement, FieldError> {
        self.check(a)?;
        Ok(self.wrap(self.frobenius_idx(a.index, i)))
    }

    /// Smallest-index generator of the multiplicative group.
    pub fn primitive_element(&self) -> FieldElement {
        self.wrap(self.primitive_idx())
    }

    // Index-level arithmetic, used on hot paths by the space builders.

    pub fn one_idx(&self) -> u16 {
        self.p.pow(self.k - 1) as u16
    }

    #[inline]
    pub fn add_idx(&self, a: u16, b: u16) -> u16 {
        self.add[a as usize * self.order as usize + b as usize]
    }

    #[inline]
    pub fn sub_idx(&self, a: u16, b: u16) -> u16 {
        self.add_idx(a, self.neg[b as usize])
    }

    #[inline]
    pub fn mul_idx(&self, a: u16, b: u16) -> u16 {
        self.mul[a as usize * self.order as usize + b as usize]
    }

    #[inline]
    pub fn neg_idx(&self, a: u16) -> u16 {
        self.neg[a as usize]
    }

    pub fn inv_idx(&self, a: u16) -> Result<u16, FieldError> {
        if a == 0 {
            Err(FieldError::ZeroInverse)
        } else {
            Ok(self.inv[a as usize])
        }
    }

    pub fn pow_idx(&self, a: u16, mut e: u64) -> u16 {
        let mut base = a;
        let mut acc = self.one_idx();
        while e > 0 {
            if e & 1 == 1 {
                acc = self.mul_idx(acc, base);
            }
            base = self.mul_idx(base, base);
            e >>= 1;
        }
        acc
    }

    pub fn frobenius_idx(&self, a: u16, i: u32) -> u16 {
        self.pow_idx(a, (self.p as u64).pow(i % self.k))
    }

    /// Multiplicative order of a nonzero element.
    pub fn mult_order_idx(&self, a: u16) -> u32 {
        let one = self.one_idx();
        let mut x = a;
        let mut n = 1;
        while x != one {
            x = self.mul_idx(x, a);
            n += 1;
        }
        n
    }

    pub fn primitive_idx(&self) -> u16 {
        (1..self.order as u16)
            .find(|&a| self.mult_order_idx(a) == self.order - 1)
            .expect("multiplicative group of a finite field is cyclic")
    }
}
