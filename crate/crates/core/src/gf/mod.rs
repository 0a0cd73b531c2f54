//! Exact arithmetic in GF(p) and GF(p^N).
//!
//! Elements are stored in the polynomial basis modulo a monic irreducible
//! polynomial. Characteristic two is bit-packed into 64-bit words; odd
//! characteristic keeps one coefficient per word. All arithmetic goes through
//! a [`Field`] handle, which is cheap to clone and safe to share across
//! threads.
//!
//! Elements carry a fingerprint of the field they were created in, so values
//! from different fields can be detected at API boundaries
//! ([`GfError::MixedFields`]). The unchecked operations (`add`, `mul`, ...)
//! are the hot path and only `debug_assert` the fingerprint.

pub mod factor;
mod poly;

use std::fmt;
use std::sync::Arc;

use num_bigint::BigUint;
use num_traits::ToPrimitive;
use serde::{Deserialize, Serialize};
use smallvec::SmallVec;
use thiserror::Error;

pub use factor::DEFAULT_FACTOR_BOUND;

/// Arbitrary-precision nonnegative exponent.
pub type BigExponent = BigUint;

/// Errors raised by field construction and element handling.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum GfError {
    #[error("characteristic {0} is not prime")]
    NonPrimeP(u64),
    #[error("characteristic {0} is too large (must be below 2^32)")]
    CharacteristicTooLarge(u64),
    #[error("extension degree must be at least 1")]
    ZeroDegree,
    #[error("modulus has degree {found}, expected {expected}")]
    ModulusDegree { expected: usize, found: usize },
    #[error("modulus is reducible over GF({0})")]
    ReducibleModulus(u64),
    #[error("cannot verify a primitive element: p^N - 1 does not factor within the trial-division bound {0}")]
    PrimitivityUnverifiable(u64),
    #[error("the supplied element is not primitive")]
    NotPrimitive,
    #[error("zero has no multiplicative inverse")]
    ZeroInverse,
    #[error("elements belong to different fields")]
    MixedFields,
    #[error("coefficient {value} is not reduced modulo {p}")]
    CoefficientOutOfRange { value: u64, p: u64 },
    #[error("expected {expected} coefficients, found {found}")]
    WrongLength { expected: usize, found: usize },
    #[error("field has more than 2^64 elements")]
    FieldTooLarge,
    #[error("cannot parse element {0:?}")]
    Parse(String),
}

type Words = SmallVec<[u64; 4]>;

/// An element of a finite field, in the polynomial basis.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct FieldElement {
    tag: u64,
    repr: Words,
}

impl FieldElement {
    pub fn is_zero(&self) -> bool {
        self.repr.iter().all(|&w| w == 0)
    }
}

impl fmt::Debug for FieldElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "FieldElement({:?})", self.repr.as_slice())
    }
}

struct FieldInner {
    p: u64,
    degree: usize,
    /// Monic modulus, constant term first, length `degree + 1`.
    modulus: Vec<u64>,
    /// Nonzero positions of the modulus below the leading term.
    modulus_tail: Vec<usize>,
    /// Modulus packed into words (characteristic two only).
    modulus_bits: Vec<u64>,
    words: usize,
    order: BigUint,
    tag: u64,
    alpha: FieldElement,
    alpha_verified: bool,
}

/// Handle to a finite field GF(p^N) together with its designated primitive
/// element.
#[derive(Clone)]
pub struct Field {
    inner: Arc<FieldInner>,
}

impl PartialEq for Field {
    fn eq(&self, other: &Self) -> bool {
        Arc::ptr_eq(&self.inner, &other.inner)
            || (self.inner.tag == other.inner.tag
                && self.inner.p == other.inner.p
                && self.inner.modulus == other.inner.modulus)
    }
}

impl Eq for Field {}

impl fmt::Debug for Field {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "GF({}^{}) mod {:?}",
            self.inner.p, self.inner.degree, self.inner.modulus
        )
    }
}

/// Serializable description of a field: enough to rebuild it exactly.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct FieldDescriptor {
    pub p: u64,
    #[serde(alias = "N")]
    pub degree: usize,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub modulus: Option<Vec<u64>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub alpha: Option<String>,
}

/// Builder for [`Field`] with an optional modulus, primitive element and
/// factorization budget.
#[derive(Debug, Clone)]
pub struct FieldBuilder {
    p: u64,
    degree: usize,
    modulus: Option<Vec<u64>>,
    alpha: Option<Vec<u64>>,
    factor_bound: u64,
}

impl FieldBuilder {
    /// Modulus coefficients, constant term first, leading coefficient last.
    /// A non-monic modulus is scaled to monic.
    pub fn modulus(mut self, coeffs: Vec<u64>) -> Self {
        self.modulus = Some(coeffs);
        self
    }

    /// Primitive element in coefficient form. Trusted when the group order
    /// cannot be factored within the budget, verified otherwise.
    pub fn alpha(mut self, coeffs: Vec<u64>) -> Self {
        self.alpha = Some(coeffs);
        self
    }

    pub fn factor_bound(mut self, bound: u64) -> Self {
        self.factor_bound = bound;
        self
    }

    pub fn build(self) -> Result<Field, GfError> {
        let p = self.p;
        if p >= 1 << 32 {
            return Err(GfError::CharacteristicTooLarge(p));
        }
        if !factor::is_prime_u64(p) {
            return Err(GfError::NonPrimeP(p));
        }
        if self.degree == 0 {
            return Err(GfError::ZeroDegree);
        }
        let n = self.degree;
        let modulus = match self.modulus {
            Some(mut m) => {
                if let Some(&c) = m.iter().find(|&&c| c >= p) {
                    return Err(GfError::CoefficientOutOfRange { value: c, p });
                }
                poly::trim(&mut m);
                let found = m.len().saturating_sub(1);
                if m.is_empty() || found != n {
                    return Err(GfError::ModulusDegree { expected: n, found });
                }
                let lead_inv = poly::inv_mod(m[n], p);
                for c in m.iter_mut() {
                    *c = poly::mul_mod(*c, lead_inv, p);
                }
                let field = provisional(p, n, m.clone());
                if !field.modulus_is_irreducible() {
                    return Err(GfError::ReducibleModulus(p));
                }
                m
            }
            None => smallest_irreducible(p, n),
        };
        let field = provisional(p, n, modulus);
        let factors = factor::distinct_prime_factors(&field.inner.order, self.factor_bound);
        let (alpha, verified) = match (self.alpha, factors) {
            (Some(coeffs), Some(factors)) => {
                let a = field.element(&coeffs)?;
                if !field.has_full_order(&a, &factors) {
                    return Err(GfError::NotPrimitive);
                }
                (a, true)
            }
            (Some(coeffs), None) => (field.element(&coeffs)?, false),
            (None, Some(factors)) => (field.find_primitive(&factors), true),
            (None, None) => return Err(GfError::PrimitivityUnverifiable(self.factor_bound)),
        };
        let mut inner = Arc::try_unwrap(field.inner)
            .ok()
            .expect("provisional field is unshared");
        inner.alpha = alpha;
        inner.alpha_verified = verified;
        Ok(Field {
            inner: Arc::new(inner),
        })
    }
}

fn fingerprint(p: u64, modulus: &[u64]) -> u64 {
    // FNV-1a over the characteristic and modulus
    let mut h: u64 = 0xcbf2_9ce4_8422_2325;
    for word in std::iter::once(p).chain(modulus.iter().copied()) {
        for byte in word.to_le_bytes() {
            h ^= byte as u64;
            h = h.wrapping_mul(0x0000_0100_0000_01b3);
        }
    }
    h
}

fn provisional(p: u64, degree: usize, modulus: Vec<u64>) -> Field {
    let words = if p == 2 { degree.div_ceil(64) } else { degree };
    let modulus_tail = (0..degree).filter(|&i| modulus[i] != 0).collect();
    let mut modulus_bits = Vec::new();
    if p == 2 {
        modulus_bits = vec![0u64; (degree + 1).div_ceil(64)];
        for (i, &c) in modulus.iter().enumerate() {
            if c != 0 {
                modulus_bits[i / 64] |= 1 << (i % 64);
            }
        }
    }
    let order = BigUint::from(p).pow(degree as u32) - 1u32;
    let tag = fingerprint(p, &modulus);
    let one = {
        let mut repr: Words = SmallVec::from_elem(0, words);
        repr[0] = 1;
        FieldElement { tag, repr }
    };
    Field {
        inner: Arc::new(FieldInner {
            p,
            degree,
            modulus,
            modulus_tail,
            modulus_bits,
            words,
            order,
            tag,
            alpha: one,
            alpha_verified: false,
        }),
    }
}

/// Lexicographically smallest monic irreducible of the given degree, where
/// polynomials are ordered by the integer `c0 + c1 p + ... + c(N-1) p^(N-1)`.
fn smallest_irreducible(p: u64, degree: usize) -> Vec<u64> {
    let mut tail = vec![0u64; degree];
    loop {
        let plausible = degree == 1
            || (tail[0] != 0 && (p != 2 || tail.iter().filter(|&&c| c != 0).count() % 2 == 0));
        if plausible {
            let mut m = tail.clone();
            m.push(1);
            if provisional(p, degree, m.clone()).modulus_is_irreducible() {
                return m;
            }
        }
        // increment base-p counter, least significant digit first
        let mut i = 0;
        loop {
            tail[i] += 1;
            if tail[i] < p {
                break;
            }
            tail[i] = 0;
            i += 1;
            assert!(i < degree, "every degree has an irreducible polynomial");
        }
    }
}

fn prime_divisors(mut n: usize) -> Vec<usize> {
    let mut out = Vec::new();
    let mut d = 2;
    while d * d <= n {
        if n.is_multiple_of(d) {
            out.push(d);
            while n.is_multiple_of(d) {
                n /= d;
            }
        }
        d += 1;
    }
    if n > 1 {
        out.push(n);
    }
    out
}

// bit helpers for the packed characteristic-two representation

fn bit(v: &[u64], i: usize) -> bool {
    (v[i / 64] >> (i % 64)) & 1 == 1
}

fn flip(v: &mut [u64], i: usize) {
    v[i / 64] ^= 1 << (i % 64);
}

fn bits_degree(v: &[u64]) -> Option<usize> {
    v.iter()
        .rposition(|&w| w != 0)
        .map(|i| i * 64 + 63 - v[i].leading_zeros() as usize)
}

fn xor_shifted(dst: &mut [u64], src: &[u64], shift: usize) {
    let (w, s) = (shift / 64, shift % 64);
    for (j, &x) in src.iter().enumerate() {
        if x == 0 {
            continue;
        }
        if j + w < dst.len() {
            dst[j + w] ^= x << s;
        }
        if s > 0 && j + w + 1 < dst.len() {
            dst[j + w + 1] ^= x >> (64 - s);
        }
    }
}

impl Field {
    pub fn builder(p: u64, degree: usize) -> FieldBuilder {
        FieldBuilder {
            p,
            degree,
            modulus: None,
            alpha: None,
            factor_bound: DEFAULT_FACTOR_BOUND,
        }
    }

    /// GF(p^degree) with the default modulus and primitive element.
    pub fn new(p: u64, degree: usize) -> Result<Field, GfError> {
        Field::builder(p, degree).build()
    }

    /// GF(p^degree) with an explicit modulus.
    pub fn with_modulus(p: u64, degree: usize, modulus: Vec<u64>) -> Result<Field, GfError> {
        Field::builder(p, degree).modulus(modulus).build()
    }

    pub fn from_descriptor(d: &FieldDescriptor) -> Result<Field, GfError> {
        let mut b = Field::builder(d.p, d.degree);
        if let Some(m) = &d.modulus {
            b = b.modulus(m.clone());
        }
        if let Some(text) = &d.alpha {
            let coeffs = parse_coefficient_text(text, d.p, d.degree)?;
            b = b.alpha(coeffs);
        }
        b.build()
    }

    pub fn descriptor(&self) -> FieldDescriptor {
        FieldDescriptor {
            p: self.inner.p,
            degree: self.inner.degree,
            modulus: Some(self.inner.modulus.clone()),
            alpha: Some(self.format_coefficients(&self.inner.alpha)),
        }
    }

    pub fn characteristic(&self) -> u64 {
        self.inner.p
    }

    pub fn degree(&self) -> usize {
        self.inner.degree
    }

    pub fn modulus(&self) -> &[u64] {
        &self.inner.modulus
    }

    /// Order of the multiplicative group, p^N - 1.
    pub fn group_order(&self) -> &BigUint {
        &self.inner.order
    }

    /// Number of elements, when it fits in a `u64`.
    pub fn size(&self) -> Option<u64> {
        (&self.inner.order + 1u32).to_u64()
    }

    pub fn alpha(&self) -> FieldElement {
        self.inner.alpha.clone()
    }

    /// Whether the order of alpha was verified (as opposed to supplied and
    /// trusted because the group order could not be factored).
    pub fn alpha_verified(&self) -> bool {
        self.inner.alpha_verified
    }

    pub fn contains(&self, a: &FieldElement) -> bool {
        a.tag == self.inner.tag && a.repr.len() == self.inner.words
    }

    fn check(&self, a: &FieldElement) -> Result<(), GfError> {
        if self.contains(a) {
            Ok(())
        } else {
            Err(GfError::MixedFields)
        }
    }

    fn raw(&self, repr: Words) -> FieldElement {
        FieldElement {
            tag: self.inner.tag,
            repr,
        }
    }

    pub fn zero(&self) -> FieldElement {
        self.raw(SmallVec::from_elem(0, self.inner.words))
    }

    pub fn one(&self) -> FieldElement {
        let mut r: Words = SmallVec::from_elem(0, self.inner.words);
        r[0] = 1;
        self.raw(r)
    }

    /// The class of `x` (reduced, so it is a constant when N = 1).
    pub fn x(&self) -> FieldElement {
        if self.inner.degree == 1 {
            // x ≡ -m0
            let c = (self.inner.p - self.inner.modulus[0]) % self.inner.p;
            return self.from_u64(c);
        }
        let mut coeffs = vec![0u64; self.inner.degree];
        coeffs[1] = 1;
        self.element(&coeffs).expect("x is a valid element")
    }

    /// Element from the prime subfield.
    pub fn from_u64(&self, c: u64) -> FieldElement {
        let mut r: Words = SmallVec::from_elem(0, self.inner.words);
        r[0] = c % self.inner.p;
        self.raw(r)
    }

    /// Element from its coefficient vector (length N, entries below p).
    pub fn element(&self, coeffs: &[u64]) -> Result<FieldElement, GfError> {
        let n = self.inner.degree;
        let p = self.inner.p;
        if coeffs.len() != n {
            return Err(GfError::WrongLength {
                expected: n,
                found: coeffs.len(),
            });
        }
        if let Some(&c) = coeffs.iter().find(|&&c| c >= p) {
            return Err(GfError::CoefficientOutOfRange { value: c, p });
        }
        let mut r: Words = SmallVec::from_elem(0, self.inner.words);
        if p == 2 {
            for (i, &c) in coeffs.iter().enumerate() {
                if c == 1 {
                    r[i / 64] |= 1 << (i % 64);
                }
            }
        } else {
            r.copy_from_slice(coeffs);
        }
        Ok(self.raw(r))
    }

    pub fn coefficients(&self, a: &FieldElement) -> Vec<u64> {
        let n = self.inner.degree;
        if self.inner.p == 2 {
            (0..n).map(|i| bit(&a.repr, i) as u64).collect()
        } else {
            a.repr.to_vec()
        }
    }

    /// Element whose coefficients are the base-p digits of `index`
    /// (constant term least significant).
    pub fn element_from_index(&self, mut index: u64) -> Result<FieldElement, GfError> {
        let size = self.size().ok_or(GfError::FieldTooLarge)?;
        if index >= size {
            return Err(GfError::CoefficientOutOfRange {
                value: index,
                p: size,
            });
        }
        if self.inner.p == 2 {
            let mut r: Words = SmallVec::from_elem(0, self.inner.words);
            r[0] = index;
            return Ok(self.raw(r));
        }
        let p = self.inner.p;
        let mut r: Words = SmallVec::from_elem(0, self.inner.words);
        for c in r.iter_mut() {
            *c = index % p;
            index /= p;
        }
        Ok(self.raw(r))
    }

    pub fn index_of(&self, a: &FieldElement) -> Option<u64> {
        self.size()?;
        if self.inner.p == 2 {
            return Some(a.repr[0]);
        }
        let p = self.inner.p;
        Some(a.repr.iter().rev().fold(0u64, |acc, &c| acc * p + c))
    }

    /// All elements in index order. Panics if the field has more than 2^64
    /// elements.
    pub fn elements(&self) -> impl Iterator<Item = FieldElement> + '_ {
        let size = self.size().expect("field too large to enumerate");
        (0..size).map(move |i| self.element_from_index(i).unwrap())
    }

    pub fn nonzero_elements(&self) -> impl Iterator<Item = FieldElement> + '_ {
        self.elements().skip(1)
    }

    pub fn add(&self, a: &FieldElement, b: &FieldElement) -> FieldElement {
        debug_assert!(self.contains(a) && self.contains(b));
        let p = self.inner.p;
        let repr: Words = if p == 2 {
            a.repr.iter().zip(&b.repr).map(|(x, y)| x ^ y).collect()
        } else {
            a.repr
                .iter()
                .zip(&b.repr)
                .map(|(x, y)| {
                    let s = x + y;
                    if s >= p {
                        s - p
                    } else {
                        s
                    }
                })
                .collect()
        };
        self.raw(repr)
    }

    pub fn neg(&self, a: &FieldElement) -> FieldElement {
        debug_assert!(self.contains(a));
        if self.inner.p == 2 {
            return a.clone();
        }
        let p = self.inner.p;
        self.raw(
            a.repr
                .iter()
                .map(|&x| if x == 0 { 0 } else { p - x })
                .collect(),
        )
    }

    pub fn sub(&self, a: &FieldElement, b: &FieldElement) -> FieldElement {
        self.add(a, &self.neg(b))
    }

    pub fn mul(&self, a: &FieldElement, b: &FieldElement) -> FieldElement {
        debug_assert!(self.contains(a) && self.contains(b));
        if self.inner.p == 2 {
            self.mul_binary(a, b)
        } else {
            self.mul_odd(a, b)
        }
    }

    pub fn square(&self, a: &FieldElement) -> FieldElement {
        self.mul(a, a)
    }

    fn mul_binary(&self, a: &FieldElement, b: &FieldElement) -> FieldElement {
        let n = self.inner.degree;
        let w = self.inner.words;
        if w == 1 {
            // single-word fast path, product fits in 128 bits
            let (x, y) = (a.repr[0], b.repr[0]);
            let mut prod: u128 = 0;
            let mut bits = x;
            while bits != 0 {
                let i = bits.trailing_zeros();
                prod ^= (y as u128) << i;
                bits &= bits - 1;
            }
            if n < 64 || prod >> 64 != 0 {
                for d in (n..(2 * n).saturating_sub(1)).rev() {
                    if (prod >> d) & 1 == 1 {
                        prod ^= 1u128 << d;
                        for &t in &self.inner.modulus_tail {
                            prod ^= 1u128 << (d - n + t);
                        }
                    }
                }
            }
            let mut r: Words = SmallVec::new();
            r.push(prod as u64);
            return self.raw(r);
        }
        let mut buf: SmallVec<[u64; 9]> = SmallVec::from_elem(0, 2 * w + 1);
        for (wi, &word) in a.repr.iter().enumerate() {
            let mut bits = word;
            while bits != 0 {
                let i = bits.trailing_zeros() as usize;
                xor_shifted(&mut buf, &b.repr, wi * 64 + i);
                bits &= bits - 1;
            }
        }
        self.reduce_bits(&mut buf);
        self.raw(buf[..w].iter().copied().collect())
    }

    fn reduce_bits(&self, buf: &mut [u64]) {
        let n = self.inner.degree;
        let top = match bits_degree(buf) {
            Some(d) if d >= n => d,
            _ => return,
        };
        for d in (n..=top).rev() {
            if bit(buf, d) {
                flip(buf, d);
                for &t in &self.inner.modulus_tail {
                    flip(buf, d - n + t);
                }
            }
        }
    }

    fn mul_odd(&self, a: &FieldElement, b: &FieldElement) -> FieldElement {
        let n = self.inner.degree;
        let p = self.inner.p;
        if n == 1 {
            return self.raw(smallvec::smallvec![(a.repr[0] * b.repr[0]) % p]);
        }
        let mut prod = vec![0u64; 2 * n - 1];
        for (i, &x) in a.repr.iter().enumerate() {
            if x == 0 {
                continue;
            }
            for (j, &y) in b.repr.iter().enumerate() {
                prod[i + j] = (prod[i + j] + x * y) % p;
            }
        }
        let m = &self.inner.modulus;
        for d in (n..2 * n - 1).rev() {
            let c = prod[d];
            if c == 0 {
                continue;
            }
            prod[d] = 0;
            for &t in &self.inner.modulus_tail {
                let sub = (c * m[t]) % p;
                prod[d - n + t] = (prod[d - n + t] + p - sub) % p;
            }
        }
        self.raw(prod[..n].iter().copied().collect())
    }

    pub fn inv(&self, a: &FieldElement) -> Result<FieldElement, GfError> {
        debug_assert!(self.contains(a));
        if a.is_zero() {
            return Err(GfError::ZeroInverse);
        }
        let p = self.inner.p;
        if p == 2 {
            return Ok(self.inv_binary(a));
        }
        if self.inner.degree == 1 {
            return Ok(self.from_u64(poly::inv_mod(a.repr[0], p)));
        }
        let inv = poly::inv_poly(&a.repr, &self.inner.modulus, p).ok_or(GfError::ZeroInverse)?;
        let mut coeffs = vec![0u64; self.inner.degree];
        coeffs[..inv.len()].copy_from_slice(&inv);
        self.element(&coeffs)
    }

    fn inv_binary(&self, a: &FieldElement) -> FieldElement {
        let len = self.inner.modulus_bits.len();
        let mut u = vec![0u64; len];
        u[..a.repr.len()].copy_from_slice(&a.repr);
        let mut v = self.inner.modulus_bits.clone();
        let mut g1 = vec![0u64; len];
        g1[0] = 1;
        let mut g2 = vec![0u64; len];
        loop {
            let du = bits_degree(&u).expect("inverse of a unit");
            if du == 0 {
                break;
            }
            let dv = bits_degree(&v).expect("inverse of a unit");
            let shift = if du < dv {
                std::mem::swap(&mut u, &mut v);
                std::mem::swap(&mut g1, &mut g2);
                dv - du
            } else {
                du - dv
            };
            xor_shifted(&mut u, &v, shift);
            xor_shifted(&mut g1, &g2, shift);
        }
        self.raw(g1[..self.inner.words].iter().copied().collect())
    }

    pub fn checked_add(&self, a: &FieldElement, b: &FieldElement) -> Result<FieldElement, GfError> {
        self.check(a)?;
        self.check(b)?;
        Ok(self.add(a, b))
    }

    pub fn checked_mul(&self, a: &FieldElement, b: &FieldElement) -> Result<FieldElement, GfError> {
        self.check(a)?;
        self.check(b)?;
        Ok(self.mul(a, b))
    }

    pub fn checked_inv(&self, a: &FieldElement) -> Result<FieldElement, GfError> {
        self.check(a)?;
        self.inv(a)
    }

    pub fn pow(&self, a: &FieldElement, e: &BigUint) -> FieldElement {
        let mut acc = self.one();
        let bits = e.bits();
        for i in (0..bits).rev() {
            acc = self.square(&acc);
            if e.bit(i) {
                acc = self.mul(&acc, a);
            }
        }
        acc
    }

    pub fn pow_u64(&self, a: &FieldElement, e: u64) -> FieldElement {
        self.pow(a, &BigUint::from(e))
    }

    /// alpha^(e mod (p^N - 1)).
    pub fn alpha_pow(&self, e: &BigExponent) -> FieldElement {
        let reduced = e % &self.inner.order;
        self.pow(&self.inner.alpha, &reduced)
    }

    fn has_full_order(&self, a: &FieldElement, factors: &[BigUint]) -> bool {
        if a.is_zero() {
            return false;
        }
        let order = &self.inner.order;
        if self.pow(a, order) != self.one() {
            return false;
        }
        factors
            .iter()
            .all(|q| self.pow(a, &(order / q)) != self.one())
    }

    /// Multiplicative order of `a` by walking its powers (small fields).
    pub fn multiplicative_order(&self, a: &FieldElement) -> Option<u64> {
        if a.is_zero() {
            return None;
        }
        let one = self.one();
        let mut x = a.clone();
        let mut k = 1u64;
        while x != one {
            x = self.mul(&x, a);
            k += 1;
        }
        Some(k)
    }

    fn find_primitive(&self, factors: &[BigUint]) -> FieldElement {
        if self.inner.degree > 1 {
            let x = self.x();
            if self.has_full_order(&x, factors) {
                return x;
            }
        }
        let mut index = 1u64;
        loop {
            let candidate = self.index_candidate(index);
            if self.has_full_order(&candidate, factors) {
                return candidate;
            }
            index += 1;
        }
    }

    fn index_candidate(&self, mut index: u64) -> FieldElement {
        // base-p digits, valid even when the field is too large for `size()`
        let p = self.inner.p;
        let mut coeffs = vec![0u64; self.inner.degree];
        for c in coeffs.iter_mut() {
            *c = index % p;
            index /= p;
        }
        self.element(&coeffs).unwrap()
    }

    /// Rabin's test: f | x^(p^N) - x and gcd(f, x^(p^(N/q)) - x) = 1 for
    /// each prime q dividing N.
    fn modulus_is_irreducible(&self) -> bool {
        let n = self.inner.degree;
        if n == 1 {
            return true;
        }
        let p = BigUint::from(self.inner.p);
        let x = self.x();
        let frobenius_power = |k: usize| {
            let mut y = x.clone();
            for _ in 0..k {
                y = self.pow(&y, &p);
            }
            y
        };
        if frobenius_power(n) != x {
            return false;
        }
        for q in prime_divisors(n) {
            let y = self.sub(&frobenius_power(n / q), &x);
            let g = poly::gcd(&self.coefficients(&y), &self.inner.modulus, self.inner.p);
            if g != [1] {
                return false;
            }
        }
        true
    }

    /// Text form: "0", "1", the integer value in a prime field, or the
    /// coefficient vector "[c0,...,c(N-1)]".
    pub fn format_element(&self, a: &FieldElement) -> String {
        if a.is_zero() {
            "0".to_string()
        } else if *a == self.one() {
            "1".to_string()
        } else if self.inner.degree == 1 {
            self.coefficients(a)[0].to_string()
        } else {
            self.format_coefficients(a)
        }
    }

    fn format_coefficients(&self, a: &FieldElement) -> String {
        let parts: Vec<String> = self.coefficients(a).iter().map(|c| c.to_string()).collect();
        format!("[{}]", parts.join(","))
    }

    /// Parses "0", "1", "a^<decimal>", "[c0,...,c(N-1)]" or, in a prime
    /// field, a decimal value below p.
    pub fn parse_element(&self, text: &str) -> Result<FieldElement, GfError> {
        let t = text.trim();
        if let Some(rest) = t.strip_prefix("a^") {
            let e = rest
                .trim()
                .parse::<BigUint>()
                .map_err(|_| GfError::Parse(text.to_string()))?;
            return Ok(self.alpha_pow(&e));
        }
        let coeffs = parse_coefficient_text(t, self.inner.p, self.inner.degree)?;
        self.element(&coeffs)
    }
}

fn parse_coefficient_text(text: &str, p: u64, degree: usize) -> Result<Vec<u64>, GfError> {
    let t = text.trim();
    let bad = || GfError::Parse(text.to_string());
    match t {
        "0" | "1" => {
            let mut c = vec![0u64; degree];
            c[0] = if t == "1" { 1 % p } else { 0 };
            Ok(c)
        }
        _ if degree == 1 && t.bytes().all(|b| b.is_ascii_digit()) => {
            Ok(vec![t.parse::<u64>().map_err(|_| bad())?])
        }
        _ => {
            let inner = t
                .strip_prefix('[')
                .and_then(|s| s.strip_suffix(']'))
                .ok_or_else(bad)?;
            let coeffs = inner
                .split(',')
                .map(|s| s.trim().parse::<u64>().map_err(|_| bad()))
                .collect::<Result<Vec<_>, _>>()?;
            Ok(coeffs)
        }
    }
}

#[cfg(test)]
mod test {
    use super::*;

    fn irreducible_by_trial_division(p: u64, modulus: &[u64]) -> bool {
        // oracle: no monic factor of degree 1..=N/2
        let n = modulus.len() - 1;
        for d in 1..=n / 2 {
            let count = p.pow(d as u32);
            for idx in 0..count {
                let mut f: Vec<u64> = (0..d).map(|i| (idx / p.pow(i as u32)) % p).collect();
                f.push(1);
                if poly::rem(modulus, &f, p).is_empty() {
                    return false;
                }
            }
        }
        true
    }

    #[test]
    fn prime_field_gf2() {
        let f = Field::new(2, 1).unwrap();
        assert_eq!(f.alpha(), f.one());
        assert_eq!(f.size(), Some(2));
    }

    #[test]
    fn gf8_default_modulus_and_alpha() {
        // degree-3 irreducibles over GF(2): x^3+x+1, x^3+x^2+1; integer order
        // picks x^3+x+1 (value 11 < 13)
        let f = Field::new(2, 3).unwrap();
        assert_eq!(f.modulus(), &[1, 1, 0, 1]);
        assert_eq!(f.alpha(), f.x());
        assert_eq!(f.multiplicative_order(&f.alpha()), Some(7));
    }

    #[test]
    fn reducible_modulus_rejected() {
        assert_eq!(
            Field::with_modulus(2, 3, vec![0, 0, 0, 1]).unwrap_err(),
            GfError::ReducibleModulus(2)
        );
        // (x^2+x+1)^2 = x^4+x^2+1 has no roots but is reducible
        assert_eq!(
            Field::with_modulus(2, 4, vec![1, 0, 1, 0, 1]).unwrap_err(),
            GfError::ReducibleModulus(2)
        );
    }

    #[test]
    fn non_prime_characteristic() {
        assert_eq!(Field::new(4, 1).unwrap_err(), GfError::NonPrimeP(4));
        assert_eq!(Field::new(1, 1).unwrap_err(), GfError::NonPrimeP(1));
    }

    #[test]
    fn char_two_doubling_is_zero() {
        let f = Field::new(2, 4).unwrap();
        for a in f.elements() {
            assert!(f.add(&a, &a).is_zero());
        }
    }

    #[test]
    fn inverse_of_one_and_zero() {
        let f = Field::new(3, 2).unwrap();
        assert_eq!(f.inv(&f.one()).unwrap(), f.one());
        assert_eq!(f.inv(&f.zero()).unwrap_err(), GfError::ZeroInverse);
    }

    #[test]
    fn gf8_alpha_times_alpha_squared() {
        // x * x^2 = x^3 = x + 1 mod x^3+x+1
        let f = Field::new(2, 3).unwrap();
        let a = f.alpha();
        let a2 = f.mul(&a, &a);
        assert_eq!(f.mul(&a, &a2), f.element(&[1, 1, 0]).unwrap());
    }

    #[test]
    fn alpha_pow_reduces_exponent() {
        let f = Field::new(2, 3).unwrap();
        assert_eq!(f.alpha_pow(&BigUint::from(0u32)), f.one());
        assert_eq!(f.alpha_pow(&BigUint::from(7u32)), f.one());
        let a = f.alpha();
        assert_eq!(f.alpha_pow(&BigUint::from(9u32)), f.mul(&a, &a));
    }

    #[test]
    fn mixed_fields_detected() {
        let f = Field::new(2, 3).unwrap();
        let g = Field::new(2, 4).unwrap();
        assert_eq!(
            f.checked_add(&f.one(), &g.one()).unwrap_err(),
            GfError::MixedFields
        );
        assert_eq!(
            f.checked_mul(&g.alpha(), &f.one()).unwrap_err(),
            GfError::MixedFields
        );
        // separately created copies of the same field interoperate
        let f2 = Field::new(2, 3).unwrap();
        assert!(f.checked_add(&f.one(), &f2.alpha()).is_ok());
    }

    #[test]
    fn default_moduli_match_trial_division() {
        for &(p, n) in &[
            (2u64, 2usize),
            (2, 3),
            (2, 4),
            (2, 5),
            (2, 6),
            (3, 2),
            (3, 3),
            (5, 2),
            (7, 2),
        ] {
            let f = Field::new(p, n).unwrap();
            assert!(irreducible_by_trial_division(p, f.modulus()), "GF({p}^{n})");
            // and it is the smallest one
            let m = f.modulus();
            let value: u64 = m[..n].iter().rev().fold(0, |acc, &c| acc * p + c);
            for smaller in 0..value {
                let mut cand: Vec<u64> = (0..n).map(|i| (smaller / p.pow(i as u32)) % p).collect();
                cand.push(1);
                assert!(!irreducible_by_trial_division(p, &cand));
            }
        }
    }

    #[test]
    fn rabin_agrees_with_trial_division() {
        for &(p, n) in &[(2u64, 4usize), (2, 6), (3, 3), (3, 4)] {
            for idx in 0..p.pow(n as u32) {
                let mut cand: Vec<u64> = (0..n).map(|i| (idx / p.pow(i as u32)) % p).collect();
                cand.push(1);
                let rabin = provisional(p, n, cand.clone()).modulus_is_irreducible();
                assert_eq!(rabin, irreducible_by_trial_division(p, &cand), "{cand:?}");
            }
        }
    }

    #[test]
    fn text_round_trip() {
        let f = Field::new(3, 2).unwrap();
        for a in f.elements() {
            let s = f.format_element(&a);
            assert_eq!(f.parse_element(&s).unwrap(), a);
        }
        assert_eq!(f.parse_element("a^0").unwrap(), f.one());
        assert_eq!(f.parse_element(" a^1 ").unwrap(), f.alpha());
        assert!(f.parse_element("[1,2,0]").is_err());
        assert!(f.parse_element("[3,0]").is_err());
        assert!(f.parse_element("alpha").is_err());
    }

    #[test]
    fn supplied_alpha_is_verified() {
        // in GF(7), 2 has order 3 and 3 is primitive
        assert_eq!(
            Field::builder(7, 1).alpha(vec![2]).build().unwrap_err(),
            GfError::NotPrimitive
        );
        let f = Field::builder(7, 1).alpha(vec![3]).build().unwrap();
        assert!(f.alpha_verified());
        assert_eq!(f.multiplicative_order(&f.alpha()), Some(6));
    }

    #[test]
    fn unverifiable_without_alpha() {
        // 2^22 - 1 = 3 * 23 * 89 * 683; a bound of 5 leaves 23*89*683 composite
        let err = Field::builder(2, 22).factor_bound(5).build().unwrap_err();
        assert_eq!(err, GfError::PrimitivityUnverifiable(5));
        let f = Field::builder(2, 22)
            .factor_bound(5)
            .alpha({
                let mut c = vec![0; 22];
                c[1] = 1;
                c
            })
            .build()
            .unwrap();
        assert!(!f.alpha_verified());
    }

    #[test]
    fn large_binary_field_inverse() {
        let f = Field::new(2, 281).unwrap();
        let mut a = f.alpha();
        for k in 1..40u64 {
            a = f.mul(&a, &f.alpha_pow(&BigUint::from(k * 1_000_003)));
            let inv = f.inv(&a).unwrap();
            assert_eq!(f.mul(&a, &inv), f.one());
        }
    }
}
