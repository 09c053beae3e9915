//! Factorization over Q of integer polynomials (Zassenhaus): squarefree
//! decomposition, modular factorization, Hensel lifting, subset recombination.

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use super::{IntPolynomial, PolyError};
use crate::modp::{self, PrimeField};

/// Smallest prime tried for modular factorization.
const FIRST_PRIME: u64 = 17;

/// Number of good primes whose degree patterns are intersected before lifting.
const PATTERN_PRIMES: usize = 3;

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct FactorOptions {
    /// Skip this many good primes. Distinct values drive distinct modular
    /// images, which is how a factorization is cross-checked.
    pub prime_skip: usize,
}

/// f = unit · Π factor^multiplicity, each factor primitive, irreducible over Q,
/// with positive leading coefficient. Factors are sorted by degree and then
/// coefficients.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Factorization {
    pub unit: BigInt,
    pub factors: Vec<(IntPolynomial, usize)>,
}

impl Factorization {
    pub fn product(&self) -> IntPolynomial {
        self.factors
            .iter()
            .fold(IntPolynomial::constant(self.unit.clone()), |acc, (g, e)| {
                &acc * &g.pow(*e as u32)
            })
    }

    pub fn distinct_factors(&self) -> usize {
        self.factors.len()
    }

    /// True for a single irreducible factor of multiplicity one.
    pub fn is_irreducible(&self) -> bool {
        matches!(self.factors.as_slice(), [(_, 1)])
    }
}

pub fn factor(f: &IntPolynomial) -> Result<Factorization, PolyError> {
    factor_with(f, FactorOptions::default())
}

pub fn factor_with(f: &IntPolynomial, opts: FactorOptions) -> Result<Factorization, PolyError> {
    if f.is_zero() {
        return Err(PolyError::ZeroPolynomial);
    }
    let mut unit = f.content();
    if f.lc().unwrap().is_negative() {
        unit = -unit;
    }
    let mut factors = Vec::new();
    for (part, mult) in f.squarefree_decomposition()? {
        for g in factor_squarefree(&part, opts) {
            factors.push((g, mult));
        }
    }
    factors.sort_by(|(a, _), (b, _)| {
        a.degree()
            .cmp(&b.degree())
            .then_with(|| a.coeffs().cmp(b.coeffs()))
    });
    let result = Factorization { unit, factors };
    assert_eq!(&result.product(), f, "factorization does not reproduce its input");
    Ok(result)
}

/// Factors a primitive squarefree polynomial with positive leading coefficient.
fn factor_squarefree(f: &IntPolynomial, opts: FactorOptions) -> Vec<IntPolynomial> {
    let n = f.degree().expect("nonzero");
    if n <= 1 {
        return vec![f.clone()];
    }
    let lc = f.lc().unwrap().clone();
    if lc.is_one() {
        return factor_monic_squarefree(f, opts);
    }
    // F(x) = lc^(n-1) f(x / lc) is monic; its factors G map back to
    // primitive parts of G(lc · x).
    let mut scaled: Vec<BigInt> = f
        .coeffs()
        .iter()
        .enumerate()
        .map(|(j, c)| if j == n { BigInt::one() } else { c * lc.pow((n - 1 - j) as u32) })
        .collect();
    scaled[n] = BigInt::one();
    let monic = IntPolynomial::new(scaled);
    factor_monic_squarefree(&monic, opts)
        .into_iter()
        .map(|g| {
            let mut pw = BigInt::one();
            let coeffs = g
                .coeffs()
                .iter()
                .map(|c| {
                    let v = c * &pw;
                    pw *= &lc;
                    v
                })
                .collect();
            IntPolynomial::new(coeffs).primitive_part()
        })
        .collect()
}

/// Primes ≥ 17 modulo which `f` (monic) stays squarefree.
fn good_primes(f: &IntPolynomial) -> impl Iterator<Item = u64> + '_ {
    (FIRST_PRIME..).filter(modp::is_prime_ref).filter(move |&p| {
        let fp = PrimeField::new(p);
        let red = f.reduce_mod(p);
        let d = fp.derivative(&red);
        fp.poly_gcd(&red, &d).len() == 1
    })
}

/// Degrees reachable as sums of sub-multisets of the modular factor degrees.
fn reachable_degrees(fp: &PrimeField, f: &modp::Poly, n: usize) -> Vec<bool> {
    let mut reach = vec![false; n + 1];
    reach[0] = true;
    for (g, d) in fp.distinct_degree(f) {
        let count = (g.len() - 1) / d;
        for _ in 0..count {
            for s in (d..=n).rev() {
                if reach[s - d] {
                    reach[s] = true;
                }
            }
        }
    }
    reach
}

fn factor_monic_squarefree(f: &IntPolynomial, opts: FactorOptions) -> Vec<IntPolynomial> {
    let n = f.degree().unwrap();
    let primes: Vec<u64> = good_primes(f)
        .skip(opts.prime_skip)
        .take(PATTERN_PRIMES)
        .collect();

    // Degree-pattern pre-pass: if no proper degree is compatible with every
    // modular pattern, f is irreducible.
    let mut common = vec![true; n + 1];
    for &p in &primes {
        let fp = PrimeField::new(p);
        let reach = reachable_degrees(&fp, &f.reduce_mod(p), n);
        for (c, r) in common.iter_mut().zip(reach) {
            *c &= r;
        }
    }
    if (1..n).all(|d| !common[d]) {
        return vec![f.clone()];
    }

    let p = primes[0];
    let fp = PrimeField::new(p);
    let mut rng = ChaCha8Rng::seed_from_u64(p);
    let modular = fp.factor_squarefree(&f.reduce_mod(p), &mut rng);
    if modular.len() == 1 {
        return vec![f.clone()];
    }

    // Factor coefficients are bounded by 2^n · ‖f‖₂; lift past twice that.
    let bound = (BigInt::one() << n) * (f.norm_squared().sqrt() + BigInt::one());
    let target = bound * 2;
    let pb = BigInt::from(p);
    let mut modulus = pb.clone();
    let mut steps = 1;
    while modulus <= target {
        modulus *= &pb;
        steps += 1;
    }
    let lifted = hensel_lift(f, &modular, &fp, steps);
    recombine(f, lifted, &modulus)
}

/// Lifts the monic modular factorization `f ≡ Π factors (mod p)` to one
/// modulo p^steps.
fn hensel_lift(
    f: &IntPolynomial,
    factors: &[modp::Poly],
    fp: &PrimeField,
    steps: u32,
) -> Vec<IntPolynomial> {
    let modulus = BigInt::from(fp.p()).pow(steps);
    if factors.len() == 1 {
        return vec![f.symmetric_mod(&modulus)];
    }
    let mid = factors.len() / 2;
    let (left, right) = factors.split_at(mid);
    let g0 = left.iter().fold(vec![1], |acc, u| fp.poly_mul(&acc, u));
    let h0 = right.iter().fold(vec![1], |acc, u| fp.poly_mul(&acc, u));
    let (g, h) = lift_pair(f, &g0, &h0, fp, steps);
    let mut out = hensel_lift(&g, left, fp, steps);
    out.extend(hensel_lift(&h, right, fp, steps));
    out
}

fn to_int_poly(a: &modp::Poly) -> IntPolynomial {
    IntPolynomial::new(a.iter().map(|&c| BigInt::from(c)).collect())
}

/// Linear Hensel lifting of f ≡ g0·h0 (mod p), g0 and h0 monic and coprime.
fn lift_pair(
    f: &IntPolynomial,
    g0: &modp::Poly,
    h0: &modp::Poly,
    fp: &PrimeField,
    steps: u32,
) -> (IntPolynomial, IntPolynomial) {
    let (gcd, s, t) = fp.poly_ext_gcd(g0, h0);
    debug_assert_eq!(gcd, vec![1]);
    let pb = BigInt::from(fp.p());
    let mut g = to_int_poly(g0);
    let mut h = to_int_poly(h0);
    let mut m = pb.clone();
    for _ in 1..steps {
        let diff = f - &(&g * &h);
        let e = diff.div_scalar_exact(&m).reduce_mod(fp.p());
        let (c, dh) = fp.poly_divrem(&fp.poly_mul(&e, &s), h0);
        let dg = fp.poly_add(&fp.poly_mul(&e, &t), &fp.poly_mul(&c, g0));
        g = &g + &to_int_poly(&dg).scale(&m);
        h = &h + &to_int_poly(&dh).scale(&m);
        m *= &pb;
    }
    (g.symmetric_mod(&m), h.symmetric_mod(&m))
}

/// Exhaustive subset recombination of lifted monic factors.
fn recombine(f: &IntPolynomial, mut lifted: Vec<IntPolynomial>, modulus: &BigInt) -> Vec<IntPolynomial> {
    let mut rest = f.clone();
    let mut found = Vec::new();
    let mut size = 1;
    while 2 * size <= lifted.len() {
        let hit = subsets(lifted.len(), size).find_map(|subset| {
            let cand = subset
                .iter()
                .fold(IntPolynomial::one(), |acc, &i| &acc * &lifted[i])
                .symmetric_mod(modulus);
            let c0 = cand.coeff(0);
            let r0 = rest.coeff(0);
            if !c0.is_zero() && !(&r0 % &c0).is_zero() {
                return None;
            }
            rest.div_exact(&cand).map(|quot| (subset, cand, quot))
        });
        match hit {
            Some((subset, cand, quot)) => {
                found.push(cand);
                rest = quot;
                for &i in subset.iter().rev() {
                    lifted.remove(i);
                }
            }
            None => size += 1,
        }
    }
    if !rest.is_constant() {
        found.push(rest);
    }
    found
}

/// All increasing index vectors of length k drawn from 0..n.
fn subsets(n: usize, k: usize) -> impl Iterator<Item = Vec<usize>> {
    let mut idx: Vec<usize> = (0..k).collect();
    let mut done = k > n;
    std::iter::from_fn(move || {
        if done {
            return None;
        }
        let out = idx.clone();
        // advance
        let mut i = k;
        loop {
            if i == 0 {
                done = true;
                break;
            }
            i -= 1;
            if idx[i] < n - k + i {
                idx[i] += 1;
                for j in i + 1..k {
                    idx[j] = idx[j - 1] + 1;
                }
                break;
            }
        }
        Some(out)
    })
}
