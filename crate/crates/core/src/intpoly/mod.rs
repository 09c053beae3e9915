//! Exact univariate polynomials with arbitrary-precision integer coefficients.

mod cyclotomic;
mod factor;
mod resultant;

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use thiserror::Error;

pub use cyclotomic::{cyclotomic, euler_phi};
pub use factor::{factor, factor_with, Factorization, FactorOptions};
pub use resultant::{resultant, resultant_y, sylvester_determinant, BivariatePoly};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum PolyError {
    #[error("operation undefined on the zero polynomial")]
    ZeroPolynomial,
}

/// Coefficients low-to-high; the highest stored coefficient is nonzero, and
/// the zero polynomial has no coefficients.
#[derive(Clone, PartialEq, Eq, Hash, Default)]
pub struct IntPolynomial {
    coeffs: Vec<BigInt>,
}

impl IntPolynomial {
    pub fn new(mut coeffs: Vec<BigInt>) -> Self {
        while coeffs.last().is_some_and(|c| c.is_zero()) {
            coeffs.pop();
        }
        Self { coeffs }
    }

    pub fn from_i64(coeffs: &[i64]) -> Self {
        Self::new(coeffs.iter().map(|&c| BigInt::from(c)).collect())
    }

    pub fn zero() -> Self {
        Self { coeffs: Vec::new() }
    }

    pub fn one() -> Self {
        Self::constant(BigInt::one())
    }

    pub fn constant(c: BigInt) -> Self {
        Self::new(vec![c])
    }

    /// c·x^d
    pub fn monomial(c: BigInt, d: usize) -> Self {
        let mut coeffs = vec![BigInt::zero(); d];
        coeffs.push(c);
        Self::new(coeffs)
    }

    pub fn coeffs(&self) -> &[BigInt] {
        &self.coeffs
    }

    /// Coefficient of x^i (zero past the degree).
    pub fn coeff(&self, i: usize) -> BigInt {
        self.coeffs.get(i).cloned().unwrap_or_default()
    }

    pub fn into_coeffs(self) -> Vec<BigInt> {
        self.coeffs
    }

    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn is_constant(&self) -> bool {
        self.coeffs.len() <= 1
    }

    pub fn lc(&self) -> Option<&BigInt> {
        self.coeffs.last()
    }

    pub fn is_monic(&self) -> bool {
        self.lc().is_some_and(|c| c.is_one())
    }

    pub fn eval(&self, x: &BigInt) -> BigInt {
        self.coeffs
            .iter()
            .rev()
            .fold(BigInt::zero(), |acc, c| acc * x + c)
    }

    pub fn derivative(&self) -> Self {
        Self::new(
            self.coeffs
                .iter()
                .enumerate()
                .skip(1)
                .map(|(i, c)| c * BigInt::from(i))
                .collect(),
        )
    }

    /// Nonnegative gcd of the coefficients (zero for the zero polynomial).
    pub fn content(&self) -> BigInt {
        self.coeffs
            .iter()
            .fold(BigInt::zero(), |acc, c| acc.gcd(c))
    }

    /// Divides out the content and makes the leading coefficient positive.
    pub fn primitive_part(&self) -> Self {
        if self.is_zero() {
            return Self::zero();
        }
        let mut c = self.content();
        if self.lc().unwrap().is_negative() {
            c = -c;
        }
        Self::new(self.coeffs.iter().map(|x| x / &c).collect())
    }

    pub fn scale(&self, c: &BigInt) -> Self {
        Self::new(self.coeffs.iter().map(|x| x * c).collect())
    }

    /// Divides every coefficient by `c`, which must divide them all.
    pub fn div_scalar_exact(&self, c: &BigInt) -> Self {
        Self::new(
            self.coeffs
                .iter()
                .map(|x| {
                    debug_assert!((x % c).is_zero());
                    x / c
                })
                .collect(),
        )
    }

    pub fn pow(&self, e: u32) -> Self {
        let mut r = Self::one();
        for _ in 0..e {
            r = &r * self;
        }
        r
    }

    /// f(x^k)
    pub fn compose_power(&self, k: usize) -> Self {
        let mut coeffs = vec![BigInt::zero(); self.coeffs.len().saturating_sub(1) * k + 1];
        for (i, c) in self.coeffs.iter().enumerate() {
            coeffs[i * k] = c.clone();
        }
        Self::new(coeffs)
    }

    /// Exact quotient over Z, or `None` if `d` does not divide `self` in Z[x].
    pub fn div_exact(&self, d: &Self) -> Option<Self> {
        let dd = d.degree()?;
        let lc = d.lc().unwrap();
        let mut rem = self.coeffs.clone();
        if rem.len() < d.coeffs.len() {
            return if rem.is_empty() { Some(Self::zero()) } else { None };
        }
        let mut quot = vec![BigInt::zero(); rem.len() - dd];
        for shift in (0..quot.len()).rev() {
            let top = &rem[shift + dd];
            if top.is_zero() {
                continue;
            }
            let (c, r) = top.div_rem(lc);
            if !r.is_zero() {
                return None;
            }
            for (j, dj) in d.coeffs.iter().enumerate() {
                rem[shift + j] -= &c * dj;
            }
            quot[shift] = c;
        }
        if rem.iter().all(|c| c.is_zero()) {
            Some(Self::new(quot))
        } else {
            None
        }
    }

    /// Remainder of division by a monic polynomial.
    pub fn rem_monic(&self, m: &Self) -> Self {
        debug_assert!(m.is_monic());
        let dm = m.degree().expect("nonzero modulus");
        let mut rem = self.coeffs.clone();
        while rem.len() > dm {
            let top = rem.pop().unwrap();
            if top.is_zero() {
                continue;
            }
            let shift = rem.len() - dm;
            for (j, mj) in m.coeffs[..dm].iter().enumerate() {
                rem[shift + j] -= &top * mj;
            }
        }
        Self::new(rem)
    }

    /// Pseudo-remainder: lc(b)^(deg a - deg b + 1) · a mod b.
    pub fn pseudo_rem(&self, b: &Self) -> Self {
        let db = b.degree().expect("nonzero divisor");
        let lc = b.lc().unwrap();
        let mut rem = self.clone();
        let Some(da) = self.degree() else {
            return rem;
        };
        if da < db {
            return rem;
        }
        let mut steps = da - db + 1;
        while let Some(dr) = rem.degree() {
            if dr < db {
                break;
            }
            let top = rem.lc().unwrap().clone();
            let mut coeffs: Vec<BigInt> = rem.coeffs.iter().map(|c| c * lc).collect();
            let shift = dr - db;
            for (j, bj) in b.coeffs.iter().enumerate() {
                coeffs[shift + j] -= &top * bj;
            }
            rem = Self::new(coeffs);
            steps -= 1;
        }
        if steps > 0 {
            rem = rem.scale(&lc.pow(steps as u32));
        }
        rem
    }

    /// Gcd in Z[x], with positive leading coefficient.
    pub fn gcd(&self, other: &Self) -> Self {
        if self.is_zero() {
            return other.primitive_part().scale(&other.content());
        }
        if other.is_zero() {
            return self.primitive_part().scale(&self.content());
        }
        let c = self.content().gcd(&other.content());
        let (mut a, mut b) = (self.primitive_part(), other.primitive_part());
        if a.degree() < b.degree() {
            std::mem::swap(&mut a, &mut b);
        }
        while !b.is_zero() {
            let r = a.pseudo_rem(&b);
            a = b;
            b = r.primitive_part();
        }
        a.primitive_part().scale(&c)
    }

    /// f / gcd(f, f'), primitive with positive leading coefficient.
    pub fn squarefree_part(&self) -> Result<Self, PolyError> {
        if self.is_zero() {
            return Err(PolyError::ZeroPolynomial);
        }
        if self.is_constant() {
            return Ok(Self::one());
        }
        let f = self.primitive_part();
        let g = f.gcd(&f.derivative()).primitive_part();
        Ok(f.div_exact(&g).expect("gcd divides").primitive_part())
    }

    /// Yun's decomposition of the primitive part: pairs (a_i, i) with
    /// primitive f = Π a_i^i, each a_i squarefree and pairwise coprime.
    pub fn squarefree_decomposition(&self) -> Result<Vec<(Self, usize)>, PolyError> {
        if self.is_zero() {
            return Err(PolyError::ZeroPolynomial);
        }
        let f = self.primitive_part();
        if f.is_constant() {
            return Ok(Vec::new());
        }
        let df = f.derivative();
        let b = f.gcd(&df).primitive_part();
        let mut c = f.div_exact(&b).expect("gcd divides f");
        let mut d = &df.div_exact(&b).expect("gcd divides f'") - &c.derivative();
        let mut out = Vec::new();
        let mut i = 1;
        while !c.is_constant() {
            let a = c.gcd(&d).primitive_part();
            c = c.div_exact(&a).expect("a divides c");
            d = &d.div_exact(&a).expect("a divides d") - &c.derivative();
            if !a.is_constant() {
                out.push((a, i));
            }
            i += 1;
        }
        Ok(out)
    }

    /// Coefficients reduced into [0, p).
    pub fn reduce_mod(&self, p: u64) -> Vec<u64> {
        let pb = BigInt::from(p);
        let mut out: Vec<u64> = self
            .coeffs
            .iter()
            .map(|c| {
                let r = c.mod_floor(&pb);
                u64::try_from(r).expect("residue fits")
            })
            .collect();
        while out.last() == Some(&0) {
            out.pop();
        }
        out
    }

    /// Reduces coefficients into the symmetric range (-m/2, m/2].
    pub fn symmetric_mod(&self, m: &BigInt) -> Self {
        let half = m >> 1usize;
        Self::new(
            self.coeffs
                .iter()
                .map(|c| {
                    let r = c.mod_floor(m);
                    if r > half {
                        r - m
                    } else {
                        r
                    }
                })
                .collect(),
        )
    }

    /// Largest absolute coefficient.
    pub fn max_norm(&self) -> BigInt {
        self.coeffs
            .iter()
            .map(|c| c.abs())
            .max()
            .unwrap_or_default()
    }

    /// Squared Euclidean norm of the coefficient vector.
    pub fn norm_squared(&self) -> BigInt {
        self.coeffs.iter().map(|c| c * c).sum()
    }
}

impl fmt::Display for IntPolynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        for (i, c) in self.coeffs.iter().enumerate().rev() {
            if c.is_zero() {
                continue;
            }
            let mag = c.abs();
            if first {
                if c.is_negative() {
                    write!(f, "-")?;
                }
            } else {
                write!(f, " {} ", if c.is_negative() { '-' } else { '+' })?;
            }
            first = false;
            let show_coeff = i == 0 || !mag.is_one();
            if show_coeff {
                write!(f, "{mag}")?;
            }
            match i {
                0 => {}
                1 => write!(f, "T")?,
                _ => write!(f, "T^{i}")?,
            }
        }
        Ok(())
    }
}

impl fmt::Debug for IntPolynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "IntPolynomial({self})")
    }
}

impl Add for &IntPolynomial {
    type Output = IntPolynomial;
    fn add(self, rhs: &IntPolynomial) -> IntPolynomial {
        let n = self.coeffs.len().max(rhs.coeffs.len());
        IntPolynomial::new(
            (0..n)
                .map(|i| self.coeff(i) + rhs.coeff(i))
                .collect(),
        )
    }
}

impl Sub for &IntPolynomial {
    type Output = IntPolynomial;
    fn sub(self, rhs: &IntPolynomial) -> IntPolynomial {
        let n = self.coeffs.len().max(rhs.coeffs.len());
        IntPolynomial::new(
            (0..n)
                .map(|i| self.coeff(i) - rhs.coeff(i))
                .collect(),
        )
    }
}

impl Mul for &IntPolynomial {
    type Output = IntPolynomial;
    fn mul(self, rhs: &IntPolynomial) -> IntPolynomial {
        if self.is_zero() || rhs.is_zero() {
            return IntPolynomial::zero();
        }
        let mut out = vec![BigInt::zero(); self.coeffs.len() + rhs.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in rhs.coeffs.iter().enumerate() {
                out[i + j] += a * b;
            }
        }
        IntPolynomial::new(out)
    }
}

impl Neg for &IntPolynomial {
    type Output = IntPolynomial;
    fn neg(self) -> IntPolynomial {
        IntPolynomial::new(self.coeffs.iter().map(|c| -c).collect())
    }
}
