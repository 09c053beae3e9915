//! Cyclotomic polynomials Φ_m and Euler's totient.

use std::collections::HashMap;
use std::sync::{Arc, Mutex, OnceLock};

use num_bigint::BigInt;

use super::IntPolynomial;

pub fn euler_phi(mut m: u64) -> u64 {
    let mut result = m;
    let mut d = 2;
    while d * d <= m {
        if m % d == 0 {
            while m % d == 0 {
                m /= d;
            }
            result -= result / d;
        }
        d += 1;
    }
    if m > 1 {
        result -= result / m;
    }
    result
}

/// Φ_m, by dividing x^m - 1 by Φ_d for every proper divisor d of m.
/// Results are memoized process-wide.
pub fn cyclotomic(m: u64) -> Arc<IntPolynomial> {
    assert!(m >= 1, "cyclotomic index must be positive");
    static CACHE: OnceLock<Mutex<HashMap<u64, Arc<IntPolynomial>>>> = OnceLock::new();
    let cache = CACHE.get_or_init(|| Mutex::new(HashMap::new()));
    if let Some(phi) = cache.lock().unwrap().get(&m) {
        return Arc::clone(phi);
    }
    let mut poly = IntPolynomial::monomial(BigInt::from(1), m as usize);
    poly = &poly - &IntPolynomial::one();
    for d in (1..m).filter(|d| m % d == 0) {
        poly = poly
            .div_exact(&cyclotomic(d))
            .expect("Φ_d divides x^m - 1");
    }
    let phi = Arc::new(poly);
    cache.lock().unwrap().insert(m, Arc::clone(&phi));
    phi
}
