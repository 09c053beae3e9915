//! Weil polynomials of Jacobians, reconstructed from point counts through
//! power sums, Newton's identities and the functional equation.

use num_bigint::BigInt;
use num_complex::Complex64;
use num_integer::Integer;
use num_traits::{One, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::curves::PointCounts;
use crate::intpoly::IntPolynomial;

/// Relative tolerance for the numeric root-modulus diagnostic.
pub const ROOT_MODULUS_TOLERANCE: f64 = 1e-9;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ZetaError {
    #[error("Newton identity for a_{index} is not integral; the point counts are inconsistent")]
    NonIntegralCoefficient { index: usize },
    #[error("Weil polynomial invariant violated: {0}")]
    InvariantViolation(String),
}

/// P(T) = Σ c_i T^i: monic of degree 2g, c_0 = q^g, and
/// c_i = q^(g-i) · c_(2g-i) for i ≤ g.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "RawWeil", into = "RawWeil")]
pub struct WeilPolynomial {
    q: BigInt,
    g: usize,
    coeffs: Vec<BigInt>,
}

#[derive(Serialize, Deserialize)]
struct RawWeil {
    #[serde(with = "crate::json")]
    q: BigInt,
    g: usize,
    #[serde(with = "crate::json::vec")]
    coeffs: Vec<BigInt>,
}

impl TryFrom<RawWeil> for WeilPolynomial {
    type Error = ZetaError;
    fn try_from(raw: RawWeil) -> Result<Self, ZetaError> {
        WeilPolynomial::new(raw.q, raw.g, raw.coeffs)
    }
}

impl From<WeilPolynomial> for RawWeil {
    fn from(w: WeilPolynomial) -> Self {
        RawWeil {
            q: w.q,
            g: w.g,
            coeffs: w.coeffs,
        }
    }
}

impl WeilPolynomial {
    /// Validates the structural invariants with exact integer arithmetic.
    pub fn new(q: BigInt, g: usize, coeffs: Vec<BigInt>) -> Result<Self, ZetaError> {
        let bad = |m: String| Err(ZetaError::InvariantViolation(m));
        if g == 0 {
            return bad("genus must be at least 1".into());
        }
        if q < BigInt::from(2) {
            return bad(format!("q = {q} is not a prime power"));
        }
        if coeffs.len() != 2 * g + 1 {
            return bad(format!("expected {} coefficients, got {}", 2 * g + 1, coeffs.len()));
        }
        if !coeffs[2 * g].is_one() {
            return bad("not monic".into());
        }
        if coeffs[0] != q.pow(g as u32) {
            return bad(format!("constant term {} differs from q^g", coeffs[0]));
        }
        for i in 0..=g {
            if coeffs[i] != q.pow((g - i) as u32) * &coeffs[2 * g - i] {
                return bad(format!("functional equation fails at index {i}"));
            }
        }
        Ok(Self { q, g, coeffs })
    }

    pub fn from_poly(q: BigInt, g: usize, poly: &IntPolynomial) -> Result<Self, ZetaError> {
        let mut coeffs = poly.coeffs().to_vec();
        coeffs.resize(2 * g + 1, BigInt::zero());
        if poly.degree() != Some(2 * g) {
            return Err(ZetaError::InvariantViolation(format!(
                "degree {:?} is not 2g = {}",
                poly.degree(),
                2 * g
            )));
        }
        Self::new(q, g, coeffs)
    }

    pub fn q(&self) -> &BigInt {
        &self.q
    }

    pub fn genus(&self) -> usize {
        self.g
    }

    pub fn coeffs(&self) -> &[BigInt] {
        &self.coeffs
    }

    pub fn poly(&self) -> IntPolynomial {
        IntPolynomial::new(self.coeffs.clone())
    }

    /// The prime p with q = p^k.
    pub fn characteristic(&self) -> BigInt {
        smallest_prime_factor(&self.q)
    }
}

impl std::fmt::Display for WeilPolynomial {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "{} (q = {})", self.poly(), self.q)
    }
}

fn smallest_prime_factor(n: &BigInt) -> BigInt {
    let mut d = BigInt::from(2);
    while &d * &d <= *n {
        if n.is_multiple_of(&d) {
            return d;
        }
        d += 1;
    }
    n.clone()
}

/// s_i = q^i + 1 - N_i: power sums of the inverse roots of L(T).
pub fn power_sums(counts: &PointCounts) -> Vec<BigInt> {
    let q = BigInt::from(counts.q);
    counts
        .counts
        .iter()
        .enumerate()
        .map(|(i, &n)| q.pow(i as u32 + 1) + 1 - BigInt::from(n))
        .collect()
}

/// Rebuilds P(T) = T^2g · L(1/T) from N_1..N_g.
pub fn weil_from_counts(counts: &PointCounts) -> Result<WeilPolynomial, ZetaError> {
    let g = counts.genus;
    if counts.counts.len() != g {
        return Err(ZetaError::InvariantViolation(format!(
            "{} counts for genus {g}",
            counts.counts.len()
        )));
    }
    let q = BigInt::from(counts.q);
    let s = power_sums(counts);
    let mut a = vec![BigInt::zero(); 2 * g + 1];
    a[0] = BigInt::one();
    for i in 1..=g {
        let sum: BigInt = (1..=i).map(|j| &s[j - 1] * &a[i - j]).sum();
        let (quot, rem) = sum.div_rem(&BigInt::from(i));
        if !rem.is_zero() {
            return Err(ZetaError::NonIntegralCoefficient { index: i });
        }
        a[i] = -quot;
    }
    for i in g + 1..=2 * g {
        a[i] = q.pow((i - g) as u32) * &a[2 * g - i];
    }
    a.reverse();
    WeilPolynomial::new(q, g, a)
}

/// Outcome of the numeric root-modulus check.
#[derive(Debug, Clone, PartialEq)]
pub struct WeilCheck {
    pub ok: bool,
    /// max over roots of | |z| / √q - 1 |
    pub max_deviation: f64,
    /// The worst root when the check fails.
    pub offending_root: Option<Complex64>,
}

/// Checks numerically that every complex root has modulus √q. A diagnostic
/// only; verdicts never depend on it.
pub fn is_weil(p: &WeilPolynomial) -> WeilCheck {
    let sqf = p.poly().squarefree_part().expect("nonzero");
    let d = sqf.degree().unwrap();
    let sqrt_q = p.q.to_f64().expect("finite").sqrt();
    // Roots of the rescaled polynomial P(√q·z) / √q^d lie on the unit circle.
    let scaled: Vec<f64> = sqf
        .coeffs()
        .iter()
        .enumerate()
        .map(|(i, c)| c.to_f64().unwrap() / sqrt_q.powi((d - i) as i32))
        .collect();
    let roots = polynomial_roots(&scaled);
    let (worst, dev) = roots
        .iter()
        .map(|z| (*z, (z.norm() - 1.0).abs()))
        .fold((Complex64::new(1.0, 0.0), 0.0f64), |acc, cur| {
            if cur.1 > acc.1 {
                cur
            } else {
                acc
            }
        });
    let ok = dev <= ROOT_MODULUS_TOLERANCE;
    WeilCheck {
        ok,
        max_deviation: dev,
        offending_root: (!ok).then(|| worst * sqrt_q),
    }
}

/// All complex roots of a real polynomial (low-to-high coefficients, nonzero
/// leading term) by the Aberth-Ehrlich iteration, then Newton polishing.
fn polynomial_roots(coeffs: &[f64]) -> Vec<Complex64> {
    let d = coeffs.len() - 1;
    if d == 0 {
        return Vec::new();
    }
    let lc = coeffs[d];
    let monic: Vec<Complex64> = coeffs.iter().map(|&c| Complex64::new(c / lc, 0.0)).collect();
    let eval = |z: Complex64| -> (Complex64, Complex64) {
        let mut v = Complex64::new(0.0, 0.0);
        let mut dv = Complex64::new(0.0, 0.0);
        for c in monic.iter().rev() {
            dv = dv * z + v;
            v = v * z + c;
        }
        (v, dv)
    };
    let radius = 1.0 + monic[..d].iter().map(|c| c.norm()).fold(0.0, f64::max);
    let mut z: Vec<Complex64> = (0..d)
        .map(|k| {
            let theta = 2.0 * std::f64::consts::PI * (k as f64 + 0.25) / d as f64 + 0.4;
            Complex64::from_polar(radius.min(2.0), theta)
        })
        .collect();
    for _ in 0..500 {
        let mut max_step: f64 = 0.0;
        for i in 0..d {
            let (v, dv) = eval(z[i]);
            if v.norm() == 0.0 {
                continue;
            }
            let ratio = v / dv;
            let repulsion: Complex64 = (0..d)
                .filter(|&j| j != i)
                .map(|j| (z[i] - z[j]).inv())
                .sum();
            let step = ratio / (Complex64::new(1.0, 0.0) - ratio * repulsion);
            z[i] -= step;
            max_step = max_step.max(step.norm());
        }
        if max_step < 1e-15 {
            break;
        }
    }
    for zi in z.iter_mut() {
        for _ in 0..3 {
            let (v, dv) = eval(*zi);
            if dv.norm() > 0.0 {
                *zi -= v / dv;
            }
        }
    }
    z
}

/// Ordinary iff the middle coefficient c_g is prime to p.
pub fn is_ordinary(p: &WeilPolynomial) -> bool {
    let char_p = p.characteristic();
    !p.coeffs[p.g].is_multiple_of(&char_p)
}

/// The same middle-coefficient rule for an arbitrary factor `h` of a Weil
/// polynomial: even degree d and c_(d/2) prime to p. Odd degree counts as
/// not ordinary.
pub fn is_ordinary_factor(h: &IntPolynomial, p: &BigInt) -> bool {
    match h.degree() {
        Some(d) if d % 2 == 0 && d > 0 => !h.coeff(d / 2).is_multiple_of(p),
        _ => false,
    }
}

/// Exact check that the curve counts are consistent with the polynomial:
/// recomputes the power sums of its inverse roots.
pub fn counts_from_weil(p: &WeilPolynomial, n: usize) -> Vec<BigInt> {
    // Newton's identities on L(T) = Σ a_i T^i, a_i = c_(2g-i).
    let g2 = 2 * p.g;
    let a: Vec<BigInt> = (0..=g2).map(|i| p.coeffs[g2 - i].clone()).collect();
    let mut s: Vec<BigInt> = Vec::with_capacity(n);
    for k in 1..=n {
        // s_k = -k a_k - Σ_{j=1}^{k-1} s_j a_(k-j)
        let mut v = if k <= g2 {
            -BigInt::from(k) * &a[k]
        } else {
            BigInt::zero()
        };
        for j in 1..k {
            if k - j <= g2 {
                v -= &s[j - 1] * &a[k - j];
            }
        }
        s.push(v);
    }
    s.iter()
        .enumerate()
        .map(|(i, sk)| p.q.pow(i as u32 + 1) + 1 - sk)
        .collect()
}
