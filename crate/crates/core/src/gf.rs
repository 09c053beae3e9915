//! Small finite fields F_{p^k} with p^k ≤ 2^20.
//!
//! Elements are packed integers: the coefficient vector (c_0, …, c_{k-1}) of
//! c_0 + c_1 t + … + c_{k-1} t^{k-1} is stored as Σ c_j p^j. Arithmetic is a
//! method on [`FieldSpec`], which owns the modulus and (for k > 1) the
//! exponential/logarithm tables of a primitive element.

use std::collections::HashMap;
use std::fmt;
use std::sync::{Arc, Mutex, OnceLock};

use thiserror::Error;

use crate::modp::{self, PrimeField};

pub const MAX_FIELD_SIZE: u64 = 1 << 20;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum FieldError {
    #[error("{0} is not prime")]
    NonPrime(u64),
    #[error("field size {p}^{k} exceeds the 2^20 cap")]
    SizeExceeded { p: u64, k: u32 },
    #[error("extension degree must be at least 1")]
    ZeroDegree,
    #[error("division by zero")]
    DivisionByZero,
    #[error("coefficient vector {0:?} is not an element of the field")]
    BadCoefficients(Vec<u64>),
}

/// A field element as a packed coefficient vector. Only meaningful together
/// with the [`FieldSpec`] that produced it.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Default)]
pub struct FieldElement(u32);

impl FieldElement {
    pub const ZERO: FieldElement = FieldElement(0);
    pub const ONE: FieldElement = FieldElement(1);

    /// Element with the given packed index; callers keep it below the field size.
    pub fn from_index(index: u32) -> Self {
        FieldElement(index)
    }

    pub fn index(self) -> u32 {
        self.0
    }

    pub fn is_zero(self) -> bool {
        self.0 == 0
    }
}

pub struct FieldSpec {
    p: u32,
    k: u32,
    q: u32,
    /// Monic, low-to-high, length k + 1. For k = 1 this is just `x`.
    modulus: Vec<u32>,
    /// p^j for j = 0..k.
    place: Vec<u32>,
    /// exp[i] = g^i for i in 0..2(q-1); empty when k = 1.
    exp: Vec<u32>,
    /// log[a] for a ≠ 0; empty when k = 1.
    log: Vec<u32>,
}

impl fmt::Debug for FieldSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("FieldSpec")
            .field("p", &self.p)
            .field("k", &self.k)
            .field("modulus", &self.modulus)
            .finish()
    }
}

impl PartialEq for FieldSpec {
    fn eq(&self, other: &Self) -> bool {
        self.p == other.p && self.k == other.k && self.modulus == other.modulus
    }
}

impl Eq for FieldSpec {}

impl fmt::Display for FieldSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.k == 1 {
            write!(f, "F_{}", self.p)
        } else {
            write!(f, "F_{}^{}", self.p, self.k)
        }
    }
}

fn checked_size(p: u64, k: u32) -> Result<u32, FieldError> {
    let mut q: u64 = 1;
    for _ in 0..k {
        q = q.saturating_mul(p);
        if q > MAX_FIELD_SIZE {
            return Err(FieldError::SizeExceeded { p, k });
        }
    }
    Ok(q as u32)
}

/// Lexicographically smallest monic irreducible of degree k over F_p, where
/// candidates are ordered by the integer Σ c_j p^j of their lower coefficients.
fn smallest_irreducible(p: u32, k: u32) -> Vec<u32> {
    let fp = PrimeField::new(p as u64);
    let count = (p as u64).pow(k);
    for idx in 0..count {
        let mut cand: Vec<u64> = Vec::with_capacity(k as usize + 1);
        let mut rest = idx;
        for _ in 0..k {
            cand.push(rest % p as u64);
            rest /= p as u64;
        }
        cand.push(1);
        if fp.is_irreducible(&cand) {
            return cand.into_iter().map(|c| c as u32).collect();
        }
    }
    unreachable!("an irreducible polynomial of every degree exists")
}

impl FieldSpec {
    /// F_{p^k} with the canonical modulus.
    pub fn new(p: u64, k: u32) -> Result<Self, FieldError> {
        if !modp::is_prime(p) {
            return Err(FieldError::NonPrime(p));
        }
        if k == 0 {
            return Err(FieldError::ZeroDegree);
        }
        let q = checked_size(p, k)?;
        let p = p as u32;
        let modulus = if k == 1 {
            vec![0, 1]
        } else {
            smallest_irreducible(p, k)
        };
        let place: Vec<u32> = (0..k).map(|j| p.pow(j)).collect();
        let mut spec = FieldSpec {
            p,
            k,
            q,
            modulus,
            place,
            exp: Vec::new(),
            log: Vec::new(),
        };
        if k > 1 {
            spec.build_tables();
        }
        Ok(spec)
    }

    /// Shared instance of F_{p^k}; fields are built once per process.
    pub fn cached(p: u64, k: u32) -> Result<Arc<Self>, FieldError> {
        static CACHE: OnceLock<Mutex<HashMap<(u64, u32), Arc<FieldSpec>>>> = OnceLock::new();
        let cache = CACHE.get_or_init(|| Mutex::new(HashMap::new()));
        if let Some(f) = cache.lock().unwrap().get(&(p, k)) {
            return Ok(Arc::clone(f));
        }
        let field = Arc::new(FieldSpec::new(p, k)?);
        let mut guard = cache.lock().unwrap();
        Ok(Arc::clone(guard.entry((p, k)).or_insert(field)))
    }

    fn build_tables(&mut self) {
        let order = self.q - 1;
        let primes = modp::prime_divisors(order as u64);
        let generator = (2..self.q)
            .map(FieldElement)
            .find(|&a| {
                primes
                    .iter()
                    .all(|&r| self.pow_slow(a, (order as u64) / r) != FieldElement::ONE)
            })
            .expect("the multiplicative group is cyclic");
        let mut exp = vec![0u32; 2 * order as usize];
        let mut log = vec![0u32; self.q as usize];
        let mut cur = FieldElement::ONE;
        for i in 0..order as usize {
            exp[i] = cur.0;
            log[cur.0 as usize] = i as u32;
            cur = self.mul_slow(cur, generator);
        }
        for i in order as usize..exp.len() {
            exp[i] = exp[i - order as usize];
        }
        self.exp = exp;
        self.log = log;
    }

    pub fn p(&self) -> u64 {
        self.p as u64
    }

    pub fn k(&self) -> u32 {
        self.k
    }

    /// Number of elements p^k.
    pub fn size(&self) -> u64 {
        self.q as u64
    }

    pub fn modulus(&self) -> &[u32] {
        &self.modulus
    }

    pub fn zero(&self) -> FieldElement {
        FieldElement::ZERO
    }

    pub fn one(&self) -> FieldElement {
        FieldElement::ONE
    }

    /// Image of an integer in the prime subfield.
    pub fn from_int(&self, n: i64) -> FieldElement {
        FieldElement(n.rem_euclid(self.p as i64) as u32)
    }

    pub fn from_coeffs(&self, coeffs: &[u64]) -> Result<FieldElement, FieldError> {
        if coeffs.len() > self.k as usize || coeffs.iter().any(|&c| c >= self.p as u64) {
            return Err(FieldError::BadCoefficients(coeffs.to_vec()));
        }
        Ok(FieldElement(
            coeffs
                .iter()
                .zip(&self.place)
                .map(|(&c, &w)| c as u32 * w)
                .sum(),
        ))
    }

    /// Coefficient vector of length k.
    pub fn coeffs(&self, a: FieldElement) -> Vec<u64> {
        let mut rest = a.0;
        (0..self.k)
            .map(|_| {
                let c = rest % self.p;
                rest /= self.p;
                c as u64
            })
            .collect()
    }

    /// The class of t in F_p[t]/(modulus). The prime-field modulus is `x`, so
    /// this is zero when k = 1.
    pub fn generator(&self) -> FieldElement {
        if self.k == 1 {
            FieldElement::ZERO
        } else {
            FieldElement(self.p)
        }
    }

    /// All elements in increasing packed order.
    pub fn enumerate(&self) -> impl Iterator<Item = FieldElement> {
        (0..self.q).map(FieldElement)
    }

    #[inline]
    pub fn add(&self, a: FieldElement, b: FieldElement) -> FieldElement {
        if self.k == 1 {
            let s = a.0 + b.0;
            return FieldElement(if s >= self.p { s - self.p } else { s });
        }
        if self.p == 2 {
            return FieldElement(a.0 ^ b.0);
        }
        let (mut x, mut y) = (a.0, b.0);
        let mut out = 0;
        for &w in &self.place {
            let s = x % self.p + y % self.p;
            out += if s >= self.p { s - self.p } else { s } * w;
            x /= self.p;
            y /= self.p;
        }
        FieldElement(out)
    }

    #[inline]
    pub fn neg(&self, a: FieldElement) -> FieldElement {
        if self.k == 1 {
            return FieldElement(if a.0 == 0 { 0 } else { self.p - a.0 });
        }
        if self.p == 2 {
            return a;
        }
        let mut x = a.0;
        let mut out = 0;
        for &w in &self.place {
            let c = x % self.p;
            out += if c == 0 { 0 } else { self.p - c } * w;
            x /= self.p;
        }
        FieldElement(out)
    }

    #[inline]
    pub fn sub(&self, a: FieldElement, b: FieldElement) -> FieldElement {
        self.add(a, self.neg(b))
    }

    #[inline]
    pub fn mul(&self, a: FieldElement, b: FieldElement) -> FieldElement {
        if self.k == 1 {
            return FieldElement(((a.0 as u64 * b.0 as u64) % self.p as u64) as u32);
        }
        if a.0 == 0 || b.0 == 0 {
            return FieldElement::ZERO;
        }
        let i = self.log[a.0 as usize] + self.log[b.0 as usize];
        FieldElement(self.exp[i as usize])
    }

    pub fn square(&self, a: FieldElement) -> FieldElement {
        self.mul(a, a)
    }

    pub fn inv(&self, a: FieldElement) -> Result<FieldElement, FieldError> {
        if a.is_zero() {
            return Err(FieldError::DivisionByZero);
        }
        if self.k == 1 {
            return Ok(self.pow(a, self.q as u64 - 2));
        }
        let order = self.q - 1;
        let l = self.log[a.0 as usize];
        Ok(FieldElement(self.exp[((order - l) % order) as usize]))
    }

    pub fn div(&self, a: FieldElement, b: FieldElement) -> Result<FieldElement, FieldError> {
        Ok(self.mul(a, self.inv(b)?))
    }

    /// a^e with 0^0 = 1.
    pub fn pow(&self, a: FieldElement, e: u64) -> FieldElement {
        if e == 0 {
            return FieldElement::ONE;
        }
        if a.is_zero() {
            return FieldElement::ZERO;
        }
        if self.k == 1 {
            let fp = PrimeField::new(self.p as u64);
            return FieldElement(fp.pow(a.0 as u64, e) as u32);
        }
        let order = (self.q - 1) as u64;
        let l = self.log[a.0 as usize] as u64;
        FieldElement(self.exp[((l * (e % order)) % order) as usize])
    }

    /// Quadratic character: 1 for nonzero squares, -1 for non-squares, 0 at 0.
    /// Only meaningful in odd characteristic.
    pub fn legendre(&self, a: FieldElement) -> i32 {
        if a.is_zero() {
            return 0;
        }
        if self.k == 1 {
            let r = self.pow(a, (self.q as u64 - 1) / 2);
            return if r == FieldElement::ONE { 1 } else { -1 };
        }
        if self.log[a.0 as usize] % 2 == 0 {
            1
        } else {
            -1
        }
    }

    /// Absolute trace to F_p, returned as an integer in [0, p).
    pub fn trace(&self, a: FieldElement) -> u64 {
        let mut acc = a;
        let mut cur = a;
        for _ in 1..self.k {
            cur = self.pow(cur, self.p as u64);
            acc = self.add(acc, cur);
        }
        acc.0 as u64
    }

    // Table-free multiplication, used to build the tables.
    fn mul_slow(&self, a: FieldElement, b: FieldElement) -> FieldElement {
        let fp = PrimeField::new(self.p as u64);
        let modulus: Vec<u64> = self.modulus.iter().map(|&c| c as u64).collect();
        let mut x = self.coeffs(a);
        let mut y = self.coeffs(b);
        fp.trim(&mut x);
        fp.trim(&mut y);
        let r = fp.poly_rem(&fp.poly_mul(&x, &y), &modulus);
        self.from_coeffs(&r).expect("reduced product")
    }

    fn pow_slow(&self, mut a: FieldElement, mut e: u64) -> FieldElement {
        let mut r = FieldElement::ONE;
        while e > 0 {
            if e & 1 == 1 {
                r = self.mul_slow(r, a);
            }
            a = self.mul_slow(a, a);
            e >>= 1;
        }
        r
    }

    /// Human-readable element: an integer for prime fields, else a
    /// parenthesized coefficient tuple.
    pub fn format(&self, a: FieldElement) -> String {
        if self.k == 1 {
            a.0.to_string()
        } else {
            let parts: Vec<String> = self.coeffs(a).iter().map(|c| c.to_string()).collect();
            format!("({})", parts.join(","))
        }
    }
}

/// Polynomials over a [`FieldSpec`], coefficients low-to-high, trimmed.
pub mod poly {
    use super::{FieldElement, FieldSpec};

    pub type FqPoly = Vec<FieldElement>;

    pub fn trim(f: &mut FqPoly) {
        while f.last().is_some_and(|c| c.is_zero()) {
            f.pop();
        }
    }

    pub fn degree(f: &[FieldElement]) -> Option<usize> {
        f.iter().rposition(|c| !c.is_zero())
    }

    pub fn eval(field: &FieldSpec, f: &[FieldElement], x: FieldElement) -> FieldElement {
        f.iter()
            .rev()
            .fold(FieldElement::ZERO, |acc, &c| field.add(field.mul(acc, x), c))
    }

    pub fn derivative(field: &FieldSpec, f: &[FieldElement]) -> FqPoly {
        let mut out: FqPoly = f
            .iter()
            .enumerate()
            .skip(1)
            .map(|(i, &c)| field.mul(c, field.from_int(i as i64)))
            .collect();
        trim(&mut out);
        out
    }

    pub fn add(field: &FieldSpec, a: &[FieldElement], b: &[FieldElement]) -> FqPoly {
        let n = a.len().max(b.len());
        let mut out: FqPoly = (0..n)
            .map(|i| {
                field.add(
                    a.get(i).copied().unwrap_or_default(),
                    b.get(i).copied().unwrap_or_default(),
                )
            })
            .collect();
        trim(&mut out);
        out
    }

    pub fn mul(field: &FieldSpec, a: &[FieldElement], b: &[FieldElement]) -> FqPoly {
        if a.is_empty() || b.is_empty() {
            return Vec::new();
        }
        let mut out = vec![FieldElement::ZERO; a.len() + b.len() - 1];
        for (i, &x) in a.iter().enumerate() {
            for (j, &y) in b.iter().enumerate() {
                out[i + j] = field.add(out[i + j], field.mul(x, y));
            }
        }
        trim(&mut out);
        out
    }

    pub fn rem(field: &FieldSpec, a: &[FieldElement], b: &[FieldElement]) -> FqPoly {
        let db = degree(b).expect("division by zero polynomial");
        let lc_inv = field.inv(b[db]).expect("nonzero leading coefficient");
        let mut r: FqPoly = a.to_vec();
        trim(&mut r);
        while r.len() > db {
            let shift = r.len() - 1 - db;
            let c = field.mul(*r.last().unwrap(), lc_inv);
            for (j, &bj) in b[..=db].iter().enumerate() {
                r[shift + j] = field.sub(r[shift + j], field.mul(c, bj));
            }
            trim(&mut r);
        }
        r
    }

    /// Monic gcd.
    pub fn gcd(field: &FieldSpec, a: &[FieldElement], b: &[FieldElement]) -> FqPoly {
        let mut x: FqPoly = a.to_vec();
        let mut y: FqPoly = b.to_vec();
        trim(&mut x);
        trim(&mut y);
        while !y.is_empty() {
            let r = rem(field, &x, &y);
            x = std::mem::replace(&mut y, r);
        }
        if let Some(&lc) = x.last() {
            let c = field.inv(lc).expect("nonzero");
            x.iter_mut().for_each(|v| *v = field.mul(*v, c));
        }
        x
    }
}
