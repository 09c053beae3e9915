//! Absolute simplicity from the Weil polynomial.
//!
//! P irreducible makes Q(π) a field of degree 2g. The degree of Q(π^n) drops
//! exactly when two distinct roots have a ratio that is an n-th root of unity,
//! so the question "for every n" reduces to finding the cyclotomic factors of
//! the ratio polynomial R(x) = Π_{i,j} (α_i - x α_j).

use std::collections::BTreeSet;

use num_bigint::BigInt;
use num_traits::One;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::intpoly::{
    cyclotomic, euler_phi, factor, factor_with, resultant_y, BivariatePoly, FactorOptions,
    Factorization, IntPolynomial,
};
use crate::zeta::{is_ordinary_factor, WeilPolynomial};

/// Data for π^n.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FrobeniusPowerReport {
    pub n: u64,
    pub charpoly_n: IntPolynomial,
    pub minpoly_n: IntPolynomial,
    pub degree_n: usize,
}

/// The Weil polynomial of π^n over F_{q^n}. Structural invariants are
/// re-validated on every call; a failure is a bug and panics.
pub fn frobenius_power(p: &WeilPolynomial, n: u64) -> WeilPolynomial {
    assert!(n >= 1, "exponent must be positive");
    let poly = p.poly();
    if n == 1 {
        return p.clone();
    }
    // Res_y(P(y), T - y^n) = Π (T - α_i^n) for monic P. Reducing y^n modulo P
    // first leaves the resultant unchanged and keeps the y-degree below 2g.
    let yn = IntPolynomial::monomial(BigInt::one(), n as usize).rem_monic(&poly);
    let mut rows: Vec<IntPolynomial> = yn
        .coeffs()
        .iter()
        .map(|c| IntPolynomial::constant(-c))
        .collect();
    if rows.is_empty() {
        rows.push(IntPolynomial::zero());
    }
    rows[0] = &rows[0] + &IntPolynomial::monomial(BigInt::one(), 1);
    let res = resultant_y(&poly, &BivariatePoly::new(rows)).expect("nonzero inputs");
    let qn = p.q().pow(n as u32);
    match WeilPolynomial::from_poly(qn, p.genus(), &res) {
        Ok(w) => w,
        Err(e) => panic!("charpoly of π^{n} for {p} broke the Weil invariants: {e}"),
    }
}

pub fn charpoly_power(p: &WeilPolynomial, n: u64) -> IntPolynomial {
    frobenius_power(p, n).poly()
}

pub fn minpoly_power(p: &WeilPolynomial, n: u64) -> IntPolynomial {
    charpoly_power(p, n)
        .squarefree_part()
        .expect("charpoly is nonzero")
}

pub fn frobenius_power_report(p: &WeilPolynomial, n: u64) -> FrobeniusPowerReport {
    let charpoly_n = charpoly_power(p, n);
    let minpoly_n = charpoly_n.squarefree_part().expect("nonzero");
    let degree_n = minpoly_n.degree().unwrap();
    FrobeniusPowerReport {
        n,
        charpoly_n,
        minpoly_n,
        degree_n,
    }
}

/// R(x) = Res_y(P(y), Σ c_i x^(2g-i) y^i), of degree 4g², vanishing at every
/// ratio α_i/α_j. Includes the diagonal factor (x - 1)^(2g).
pub fn ratio_poly(p: &WeilPolynomial) -> IntPolynomial {
    let d = 2 * p.genus();
    let rows = p
        .coeffs()
        .iter()
        .enumerate()
        .map(|(i, c)| IntPolynomial::monomial(c.clone(), d - i))
        .collect();
    resultant_y(&p.poly(), &BivariatePoly::new(rows)).expect("nonzero inputs")
}

/// Largest m with φ(m) ≤ bound is at most 2·bound², since φ(m) ≥ √(m/2).
fn torsion_candidates(bound: u64) -> impl Iterator<Item = u64> {
    (2..=2 * bound * bound).filter(move |&m| euler_phi(m) <= bound)
}

/// Orders m ≥ 2 of the roots of unity among the ratios α_i/α_j.
pub fn ratio_torsion_orders(p: &WeilPolynomial) -> Vec<u64> {
    let r = ratio_poly(p);
    let bound = r.degree().unwrap() as u64;
    torsion_candidates(bound)
        .filter(|&m| r.rem_monic(&cyclotomic(m)).is_zero())
        .collect()
}

/// True iff P is irreducible over Q, i.e. Q[π] is a field of degree 2g.
pub fn elliptic_torus_test(p: &WeilPolynomial) -> bool {
    factor(&p.poly()).expect("nonzero").is_irreducible()
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct FactorEntry {
    #[serde(with = "crate::json::vec")]
    pub coeffs: Vec<BigInt>,
    pub multiplicity: usize,
}

impl FactorEntry {
    pub fn poly(&self) -> IntPolynomial {
        IntPolynomial::new(self.coeffs.clone())
    }
}

fn entries(f: &Factorization) -> Vec<FactorEntry> {
    f.factors
        .iter()
        .map(|(h, e)| FactorEntry {
            coeffs: h.coeffs().to_vec(),
            multiplicity: *e,
        })
        .collect()
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum InconclusiveReason {
    /// P = h^e, e ≥ 2, h not ordinary.
    RepeatedFactorBase,
    /// Q(π^n) drops in degree but charpoly_n is a pure power of a
    /// non-ordinary factor for every torsion order.
    NonOrdinaryPowerDrop,
}

impl std::fmt::Display for InconclusiveReason {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            Self::RepeatedFactorBase => "repeated-factor-base",
            Self::NonOrdinaryPowerDrop => "non-ordinary-power-drop",
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum VerdictKind {
    AbsolutelySimple,
    NotSimple,
    NotAbsolutelySimple,
    Inconclusive,
}

impl VerdictKind {
    pub const ALL: [VerdictKind; 4] = [
        Self::AbsolutelySimple,
        Self::NotSimple,
        Self::NotAbsolutelySimple,
        Self::Inconclusive,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            Self::AbsolutelySimple => "AbsolutelySimple",
            Self::NotSimple => "NotSimple",
            Self::NotAbsolutelySimple => "NotAbsolutelySimple",
            Self::Inconclusive => "Inconclusive",
        }
    }
}

/// Verdict with its certificate.
///
/// * AbsolutelySimple: `factors` is P itself (irreducible) and
///   `torsion_orders` is empty.
/// * NotSimple: the factorization of P, two or more distinct factors.
/// * NotAbsolutelySimple: the factorization of charpoly_n for n = `witness_n`,
///   either with two distinct factors or one ordinary factor to a power ≥ 2.
/// * Inconclusive: a reason code, plus the torsion orders when P is
///   irreducible.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind")]
pub enum SimplicityVerdict {
    AbsolutelySimple {
        factors: Vec<FactorEntry>,
        torsion_orders: Vec<u64>,
    },
    NotSimple {
        factors: Vec<FactorEntry>,
    },
    NotAbsolutelySimple {
        witness_n: u64,
        factors: Vec<FactorEntry>,
    },
    Inconclusive {
        reason: InconclusiveReason,
        #[serde(default, skip_serializing_if = "Vec::is_empty")]
        torsion_orders: Vec<u64>,
    },
}

impl SimplicityVerdict {
    pub fn kind(&self) -> VerdictKind {
        match self {
            Self::AbsolutelySimple { .. } => VerdictKind::AbsolutelySimple,
            Self::NotSimple { .. } => VerdictKind::NotSimple,
            Self::NotAbsolutelySimple { .. } => VerdictKind::NotAbsolutelySimple,
            Self::Inconclusive { .. } => VerdictKind::Inconclusive,
        }
    }
}

/// h^e with e ≥ 2 and h ordinary.
fn ordinary_power(f: &Factorization, p: &BigInt) -> bool {
    matches!(f.factors.as_slice(), [(h, e)] if *e >= 2 && is_ordinary_factor(h, p))
}

pub fn classify(p: &WeilPolynomial) -> SimplicityVerdict {
    let char_p = p.characteristic();
    let fac = factor(&p.poly()).expect("nonzero");
    if fac.distinct_factors() >= 2 {
        return SimplicityVerdict::NotSimple {
            factors: entries(&fac),
        };
    }
    if !fac.is_irreducible() {
        if ordinary_power(&fac, &char_p) {
            return SimplicityVerdict::NotAbsolutelySimple {
                witness_n: 1,
                factors: entries(&fac),
            };
        }
        return SimplicityVerdict::Inconclusive {
            reason: InconclusiveReason::RepeatedFactorBase,
            torsion_orders: Vec::new(),
        };
    }
    let orders = ratio_torsion_orders(p);
    if orders.is_empty() {
        return SimplicityVerdict::AbsolutelySimple {
            factors: entries(&fac),
            torsion_orders: orders,
        };
    }
    for &m in &orders {
        let fm = factor(&charpoly_power(p, m)).expect("nonzero");
        if fm.distinct_factors() >= 2 || ordinary_power(&fm, &char_p) {
            return SimplicityVerdict::NotAbsolutelySimple {
                witness_n: m,
                factors: entries(&fm),
            };
        }
    }
    SimplicityVerdict::Inconclusive {
        reason: InconclusiveReason::NonOrdinaryPowerDrop,
        torsion_orders: orders,
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ReplayError {
    #[error("certified factors do not multiply back to the polynomial")]
    ProductMismatch,
    #[error("certified factor {0} is not irreducible")]
    Reducible(String),
    #[error("certificate shape does not support a {0:?} verdict")]
    Shape(VerdictKind),
    #[error("recomputed torsion orders {found:?} differ from the certificate {claimed:?}")]
    TorsionMismatch { claimed: Vec<u64>, found: Vec<u64> },
    #[error("recomputed verdict differs from the recorded one")]
    VerdictMismatch,
}

/// Checks a certified factorization of `target` independently: the product
/// must match, and each factor must be irreducible when factored through a
/// different modular prime.
fn check_factors(target: &IntPolynomial, factors: &[FactorEntry]) -> Result<(), ReplayError> {
    let product = factors.iter().fold(IntPolynomial::one(), |acc, e| {
        &acc * &e.poly().pow(e.multiplicity as u32)
    });
    if &product != target {
        return Err(ReplayError::ProductMismatch);
    }
    let distinct: BTreeSet<&Vec<BigInt>> = factors.iter().map(|e| &e.coeffs).collect();
    if distinct.len() != factors.len() {
        return Err(ReplayError::Shape(VerdictKind::NotSimple));
    }
    for e in factors {
        let h = e.poly();
        let again = factor_with(&h, FactorOptions { prime_skip: 1 }).expect("nonzero");
        if h.degree().unwrap_or(0) == 0 || !again.is_irreducible() {
            return Err(ReplayError::Reducible(h.to_string()));
        }
    }
    Ok(())
}

fn power_witness_holds(factors: &[FactorEntry], p: &BigInt) -> bool {
    match factors {
        [e] => e.multiplicity >= 2 && is_ordinary_factor(&e.poly(), p),
        _ => factors.len() >= 2,
    }
}

/// Re-runs the checks recorded in a certificate.
pub fn replay(p: &WeilPolynomial, verdict: &SimplicityVerdict) -> Result<(), ReplayError> {
    let char_p = p.characteristic();
    match verdict {
        SimplicityVerdict::AbsolutelySimple {
            factors,
            torsion_orders,
        } => {
            if factors.len() != 1 || factors[0].multiplicity != 1 || !torsion_orders.is_empty() {
                return Err(ReplayError::Shape(verdict.kind()));
            }
            check_factors(&p.poly(), factors)?;
            let found = ratio_torsion_orders(p);
            if !found.is_empty() {
                return Err(ReplayError::TorsionMismatch {
                    claimed: torsion_orders.clone(),
                    found,
                });
            }
        }
        SimplicityVerdict::NotSimple { factors } => {
            if factors.len() < 2 {
                return Err(ReplayError::Shape(verdict.kind()));
            }
            check_factors(&p.poly(), factors)?;
        }
        SimplicityVerdict::NotAbsolutelySimple { witness_n, factors } => {
            if *witness_n == 0 || !power_witness_holds(factors, &char_p) {
                return Err(ReplayError::Shape(verdict.kind()));
            }
            check_factors(&charpoly_power(p, *witness_n), factors)?;
        }
        SimplicityVerdict::Inconclusive { .. } => {
            if &classify(p) != verdict {
                return Err(ReplayError::VerdictMismatch);
            }
        }
    }
    Ok(())
}

/// [Q(π^n) : Q].
pub fn field_degree(p: &WeilPolynomial, n: u64) -> usize {
    frobenius_power_report(p, n).degree_n
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_traits::Zero;
    use proptest::prelude::*;

    fn weil(q: i64, g: usize, c: &[i64]) -> WeilPolynomial {
        WeilPolynomial::new(
            BigInt::from(q),
            g,
            c.iter().map(|&v| BigInt::from(v)).collect(),
        )
        .unwrap()
    }

    fn ip(c: &[i64]) -> IntPolynomial {
        IntPolynomial::from_i64(c)
    }

    /// Independent route to charpoly(π^n): power sums of the roots via
    /// Newton's identities, then back to elementary symmetric functions.
    fn charpoly_power_newton(p: &WeilPolynomial, n: usize) -> IntPolynomial {
        let d = 2 * p.genus();
        // e_k of the roots: P = Σ (-1)^k e_k T^(d-k)
        let c = p.coeffs();
        let e: Vec<BigInt> = (0..=d)
            .map(|k| if k % 2 == 0 { c[d - k].clone() } else { -c[d - k].clone() })
            .collect();
        let mut s = vec![BigInt::zero(); d * n + 1];
        s[0] = BigInt::from(d);
        for k in 1..=d * n {
            let mut v = BigInt::zero();
            for i in 1..k.min(d + 1) {
                let term = &e[i] * &s[k - i];
                if i % 2 == 1 {
                    v += term;
                } else {
                    v -= term;
                }
            }
            if k <= d {
                let term = BigInt::from(k) * &e[k];
                if k % 2 == 1 {
                    v += term;
                } else {
                    v -= term;
                }
            }
            s[k] = v;
        }
        // power sums of α^n are s_{n j}; rebuild the elementary functions
        let t: Vec<BigInt> = (0..=d).map(|j| s[n * j].clone()).collect();
        let mut f = vec![BigInt::one()];
        for k in 1..=d {
            let mut v = BigInt::zero();
            for i in 1..=k {
                let term = &f[k - i] * &t[i];
                if i % 2 == 1 {
                    v += term;
                } else {
                    v -= term;
                }
            }
            assert!((&v % BigInt::from(k)).is_zero());
            f.push(v / BigInt::from(k));
        }
        let coeffs = (0..=d)
            .map(|i| {
                let k = d - i;
                if k % 2 == 0 {
                    f[k].clone()
                } else {
                    -f[k].clone()
                }
            })
            .collect();
        IntPolynomial::new(coeffs)
    }

    #[test]
    fn charpoly_power_examples() {
        let p = weil(5, 1, &[5, -2, 1]);
        assert_eq!(charpoly_power(&p, 2), ip(&[25, 6, 1]));
        assert_eq!(charpoly_power(&p, 1), p.poly());
        assert_eq!(charpoly_power(&weil(5, 1, &[5, 0, 1]), 2), ip(&[25, 10, 1]));
        assert_eq!(
            charpoly_power(&weil(5, 2, &[25, 0, 2, 0, 1]), 2),
            ip(&[25, 2, 1]).pow(2)
        );
    }

    #[test]
    fn charpoly_power_matches_newton_route() {
        let corpus = [
            weil(5, 1, &[5, -2, 1]),
            weil(3, 2, &[9, 0, 2, 0, 1]),
            weil(3, 2, &[9, 3, 1, 1, 1]),
            weil(5, 2, &[25, 0, 2, 0, 1]),
            weil(3, 3, &[27, -27, 9, 1, 3, -3, 1]),
        ];
        for p in &corpus {
            for n in 1..=7 {
                assert_eq!(charpoly_power(p, n as u64), charpoly_power_newton(p, n), "{p} n={n}");
            }
        }
    }

    #[test]
    fn minpoly_examples() {
        assert_eq!(minpoly_power(&weil(5, 1, &[5, 0, 1]), 2), ip(&[5, 1]));
        let p = weil(5, 1, &[5, -2, 1]);
        assert_eq!(minpoly_power(&p, 2), ip(&[25, 6, 1]));
        assert_eq!(minpoly_power(&p, 1), p.poly());
        assert_eq!(field_degree(&weil(3, 2, &[9, 0, 0, 0, 1]), 2), 2);
    }

    #[test]
    fn ratio_poly_examples() {
        let r = ratio_poly(&weil(5, 1, &[5, 0, 1]));
        assert_eq!(r.degree(), Some(4));
        assert_eq!(r.primitive_part(), ip(&[1, 0, -2, 0, 1]));

        let r = ratio_poly(&weil(5, 1, &[5, -2, 1]));
        let diag = ip(&[-1, 1]).pow(2);
        let rest = r.div_exact(&diag).unwrap().primitive_part();
        assert_eq!(rest, ip(&[5, 6, 5]));

        let r = ratio_poly(&weil(3, 3, &[27, -27, 9, 1, 3, -3, 1]));
        assert_eq!(r.degree(), Some(36));
        assert!(r.div_exact(&ip(&[-1, 1]).pow(6)).is_some());
    }

    #[test]
    fn torsion_examples() {
        assert_eq!(ratio_torsion_orders(&weil(5, 1, &[5, 0, 1])), vec![2]);
        assert!(ratio_torsion_orders(&weil(5, 1, &[5, -2, 1])).is_empty());
        assert_eq!(ratio_torsion_orders(&weil(3, 2, &[9, 0, 0, 0, 1])), vec![2, 4]);
        assert_eq!(ratio_torsion_orders(&weil(5, 2, &[25, 0, 2, 0, 1])), vec![2]);
    }

    #[test]
    fn candidate_range_is_complete() {
        // brute force over a generous range
        for bound in [4u64, 16, 36] {
            let fast: Vec<u64> = torsion_candidates(bound).collect();
            let slow: Vec<u64> = (2..20_000).filter(|&m| euler_phi(m) <= bound).collect();
            assert_eq!(fast, slow);
        }
    }

    #[test]
    fn elliptic_examples() {
        assert!(elliptic_torus_test(&weil(5, 1, &[5, -2, 1])));
        let prod = &ip(&[5, 0, 1]) * &ip(&[5, -2, 1]);
        let w = WeilPolynomial::from_poly(BigInt::from(5), 2, &prod).unwrap();
        assert!(!elliptic_torus_test(&w));
        assert!(elliptic_torus_test(&weil(5, 2, &[25, 0, 2, 0, 1])));
    }

    #[test]
    fn classify_anchors() {
        let v = classify(&weil(5, 1, &[5, -2, 1]));
        assert_eq!(v.kind(), VerdictKind::AbsolutelySimple);

        let prod = &ip(&[5, 0, 1]) * &ip(&[5, -2, 1]);
        let w = WeilPolynomial::from_poly(BigInt::from(5), 2, &prod).unwrap();
        assert_eq!(classify(&w).kind(), VerdictKind::NotSimple);

        match classify(&weil(5, 2, &[25, 0, 2, 0, 1])) {
            SimplicityVerdict::NotAbsolutelySimple { witness_n, factors } => {
                assert_eq!(witness_n, 2);
                assert_eq!(factors.len(), 1);
                assert_eq!(factors[0].poly(), ip(&[25, 2, 1]));
                assert_eq!(factors[0].multiplicity, 2);
            }
            other => panic!("{other:?}"),
        }

        assert_eq!(
            classify(&weil(3, 2, &[9, 0, 0, 0, 1])),
            SimplicityVerdict::Inconclusive {
                reason: InconclusiveReason::NonOrdinaryPowerDrop,
                torsion_orders: vec![2, 4],
            }
        );
        assert_eq!(
            classify(&weil(5, 1, &[5, 0, 1])).kind(),
            VerdictKind::Inconclusive
        );
    }

    #[test]
    fn repeated_base_arms() {
        // (T^2 - 2T + 5)^2 over q = 5: ordinary base
        let sq = ip(&[5, -2, 1]).pow(2);
        let w = WeilPolynomial::from_poly(BigInt::from(5), 2, &sq).unwrap();
        let v = classify(&w);
        assert!(matches!(v, SimplicityVerdict::NotAbsolutelySimple { witness_n: 1, .. }));
        replay(&w, &v).unwrap();
        // (T^2 + 5)^2: supersingular base
        let sq = ip(&[5, 0, 1]).pow(2);
        let w = WeilPolynomial::from_poly(BigInt::from(5), 2, &sq).unwrap();
        assert_eq!(
            classify(&w),
            SimplicityVerdict::Inconclusive {
                reason: InconclusiveReason::RepeatedFactorBase,
                torsion_orders: vec![],
            }
        );
    }

    #[test]
    fn verdict_json() {
        let v = classify(&weil(5, 2, &[25, 0, 2, 0, 1]));
        let text = serde_json::to_string(&v).unwrap();
        assert_eq!(
            text,
            r#"{"kind":"NotAbsolutelySimple","witness_n":2,"factors":[{"coeffs":[25,2,1],"multiplicity":2}]}"#
        );
        assert_eq!(serde_json::from_str::<SimplicityVerdict>(&text).unwrap(), v);
        let v = classify(&weil(3, 2, &[9, 0, 0, 0, 1]));
        let text = serde_json::to_string(&v).unwrap();
        assert_eq!(
            text,
            r#"{"kind":"Inconclusive","reason":"non-ordinary-power-drop","torsion_orders":[2,4]}"#
        );
    }

    #[test]
    fn tampered_certificates_fail() {
        let p = weil(5, 2, &[25, 0, 2, 0, 1]);
        let good = classify(&p);
        replay(&p, &good).unwrap();
        let wrong_n = SimplicityVerdict::NotAbsolutelySimple {
            witness_n: 3,
            factors: match &good {
                SimplicityVerdict::NotAbsolutelySimple { factors, .. } => factors.clone(),
                _ => unreachable!(),
            },
        };
        assert!(replay(&p, &wrong_n).is_err());
        let fake = SimplicityVerdict::AbsolutelySimple {
            factors: vec![FactorEntry {
                coeffs: p.coeffs().to_vec(),
                multiplicity: 1,
            }],
            torsion_orders: vec![],
        };
        assert!(matches!(replay(&p, &fake), Err(ReplayError::TorsionMismatch { .. })));
        let q = weil(3, 2, &[9, 0, 0, 0, 1]);
        assert!(replay(&q, &good).is_err());
    }

    #[test]
    fn soundness_spot_checks() {
        // products of non-isogenous elliptic curves over F_7
        let traces: Vec<i64> = (-5..=5).collect();
        for &a in &traces {
            for &b in &traces {
                if a >= b {
                    continue;
                }
                let prod = &ip(&[7, -a, 1]) * &ip(&[7, -b, 1]);
                let w = WeilPolynomial::from_poly(BigInt::from(7), 2, &prod).unwrap();
                let v = classify(&w);
                assert_eq!(v.kind(), VerdictKind::NotSimple);
                replay(&w, &v).unwrap();
            }
        }
        // Weil restrictions of ordinary curves over F_49: P(T) = P_E(T^2)
        for a in -13i64..=13 {
            if a % 7 == 0 {
                continue;
            }
            let pe = ip(&[49, -a, 1]);
            let w = WeilPolynomial::from_poly(BigInt::from(7), 2, &pe.compose_power(2)).unwrap();
            if !elliptic_torus_test(&w) {
                continue;
            }
            let v = classify(&w);
            assert_eq!(v.kind(), VerdictKind::NotAbsolutelySimple, "a = {a}");
            replay(&w, &v).unwrap();
        }
    }

    fn genus_two_weil() -> impl Strategy<Value = WeilPolynomial> {
        // T^4 + a T^3 + b T^2 + q a T + q^2 within the coefficient bounds
        (prop::sample::select(vec![2i64, 3, 5, 7]), -20i64..=20, -60i64..=60).prop_filter_map(
            "outside Weil bounds",
            |(q, a, b)| {
                let w = weil(q, 2, &[q * q, q * a, b, a, 1]);
                crate::zeta::is_weil(&w).ok.then_some(w)
            },
        )
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(48))]

        #[test]
        fn multiplicativity(p in genus_two_weil(), m in 1u64..=4, n in 1u64..=4) {
            let pm = frobenius_power(&p, m);
            prop_assert_eq!(charpoly_power(&pm, n), charpoly_power(&p, m * n));
        }

        #[test]
        fn torsion_agrees_with_brute_force(p in genus_two_weil()) {
            prop_assume!(elliptic_torus_test(&p));
            let empty = ratio_torsion_orders(&p).is_empty();
            let full = (1..=60).all(|n| minpoly_power(&p, n).degree() == Some(4));
            prop_assert_eq!(empty, full);
        }

        #[test]
        fn classify_replays(p in genus_two_weil()) {
            let v = classify(&p);
            prop_assert!(replay(&p, &v).is_ok());
        }
    }
}
