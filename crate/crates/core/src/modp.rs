//! Dense univariate polynomials over a prime field F_p with `u64` coefficients.
//!
//! Used for two things: searching irreducible moduli when building extension
//! fields, and the modular stage of integer factorization. The prime must be
//! below 2^32 so that products of reduced residues fit in a `u64`.

use rand::Rng;

/// Coefficients low-to-high, no trailing zeros. The zero polynomial is empty.
pub type Poly = Vec<u64>;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct PrimeField {
    p: u64,
}

impl PrimeField {
    pub fn new(p: u64) -> Self {
        assert!((2..1 << 32).contains(&p), "prime out of range: {p}");
        Self { p }
    }

    pub fn p(&self) -> u64 {
        self.p
    }

    #[inline]
    pub fn add(&self, a: u64, b: u64) -> u64 {
        let s = a + b;
        if s >= self.p {
            s - self.p
        } else {
            s
        }
    }

    #[inline]
    pub fn sub(&self, a: u64, b: u64) -> u64 {
        if a >= b {
            a - b
        } else {
            a + self.p - b
        }
    }

    #[inline]
    pub fn mul(&self, a: u64, b: u64) -> u64 {
        a * b % self.p
    }

    pub fn pow(&self, mut a: u64, mut e: u64) -> u64 {
        let mut r = 1 % self.p;
        a %= self.p;
        while e > 0 {
            if e & 1 == 1 {
                r = self.mul(r, a);
            }
            a = self.mul(a, a);
            e >>= 1;
        }
        r
    }

    /// Inverse of a nonzero residue.
    pub fn inv(&self, a: u64) -> u64 {
        debug_assert!(a % self.p != 0);
        self.pow(a, self.p - 2)
    }

    /// Reduce a signed integer into [0, p).
    pub fn reduce_i64(&self, a: i64) -> u64 {
        a.rem_euclid(self.p as i64) as u64
    }

    // ---- polynomial operations ----

    pub fn trim(&self, f: &mut Poly) {
        while f.last() == Some(&0) {
            f.pop();
        }
    }

    pub fn degree(f: &Poly) -> Option<usize> {
        if f.is_empty() {
            None
        } else {
            Some(f.len() - 1)
        }
    }

    pub fn poly_add(&self, a: &Poly, b: &Poly) -> Poly {
        let n = a.len().max(b.len());
        let mut out: Poly = (0..n)
            .map(|i| self.add(*a.get(i).unwrap_or(&0), *b.get(i).unwrap_or(&0)))
            .collect();
        self.trim(&mut out);
        out
    }

    pub fn poly_sub(&self, a: &Poly, b: &Poly) -> Poly {
        let n = a.len().max(b.len());
        let mut out: Poly = (0..n)
            .map(|i| self.sub(*a.get(i).unwrap_or(&0), *b.get(i).unwrap_or(&0)))
            .collect();
        self.trim(&mut out);
        out
    }

    pub fn poly_mul(&self, a: &Poly, b: &Poly) -> Poly {
        if a.is_empty() || b.is_empty() {
            return Vec::new();
        }
        let mut out = vec![0u64; a.len() + b.len() - 1];
        for (i, &x) in a.iter().enumerate() {
            if x == 0 {
                continue;
            }
            for (j, &y) in b.iter().enumerate() {
                out[i + j] = self.add(out[i + j], self.mul(x, y));
            }
        }
        self.trim(&mut out);
        out
    }

    pub fn poly_scale(&self, a: &Poly, c: u64) -> Poly {
        let mut out: Poly = a.iter().map(|&x| self.mul(x, c)).collect();
        self.trim(&mut out);
        out
    }

    /// Quotient and remainder; panics on division by the zero polynomial.
    pub fn poly_divrem(&self, a: &Poly, b: &Poly) -> (Poly, Poly) {
        let db = Self::degree(b).expect("division by zero polynomial");
        let mut rem = a.clone();
        self.trim(&mut rem);
        if rem.len() < b.len() {
            return (Vec::new(), rem);
        }
        let lc_inv = self.inv(b[db]);
        let mut quot = vec![0u64; rem.len() - db];
        while rem.len() > db && !rem.is_empty() {
            let shift = rem.len() - 1 - db;
            let c = self.mul(*rem.last().unwrap(), lc_inv);
            quot[shift] = c;
            for (j, &bj) in b.iter().enumerate() {
                rem[shift + j] = self.sub(rem[shift + j], self.mul(c, bj));
            }
            self.trim(&mut rem);
        }
        self.trim(&mut quot);
        (quot, rem)
    }

    pub fn poly_rem(&self, a: &Poly, b: &Poly) -> Poly {
        self.poly_divrem(a, b).1
    }

    pub fn monic(&self, a: &Poly) -> Poly {
        match a.last() {
            None => Vec::new(),
            Some(&lc) => self.poly_scale(a, self.inv(lc)),
        }
    }

    /// Monic gcd (zero if both inputs are zero).
    pub fn poly_gcd(&self, a: &Poly, b: &Poly) -> Poly {
        let mut x = a.clone();
        let mut y = b.clone();
        self.trim(&mut x);
        self.trim(&mut y);
        while !y.is_empty() {
            let r = self.poly_rem(&x, &y);
            x = y;
            y = r;
        }
        self.monic(&x)
    }

    /// Returns (g, s, t) with s·a + t·b = g, g monic.
    pub fn poly_ext_gcd(&self, a: &Poly, b: &Poly) -> (Poly, Poly, Poly) {
        let (mut r0, mut r1) = (a.clone(), b.clone());
        self.trim(&mut r0);
        self.trim(&mut r1);
        let (mut s0, mut s1): (Poly, Poly) = (vec![1], Vec::new());
        let (mut t0, mut t1): (Poly, Poly) = (Vec::new(), vec![1]);
        while !r1.is_empty() {
            let (q, r) = self.poly_divrem(&r0, &r1);
            let s2 = self.poly_sub(&s0, &self.poly_mul(&q, &s1));
            let t2 = self.poly_sub(&t0, &self.poly_mul(&q, &t1));
            r0 = std::mem::replace(&mut r1, r);
            s0 = std::mem::replace(&mut s1, s2);
            t0 = std::mem::replace(&mut t1, t2);
        }
        match r0.last() {
            None => (r0, s0, t0),
            Some(&lc) => {
                let c = self.inv(lc);
                (
                    self.poly_scale(&r0, c),
                    self.poly_scale(&s0, c),
                    self.poly_scale(&t0, c),
                )
            }
        }
    }

    pub fn derivative(&self, a: &Poly) -> Poly {
        let mut out: Poly = a
            .iter()
            .enumerate()
            .skip(1)
            .map(|(i, &c)| self.mul(c, i as u64 % self.p))
            .collect();
        self.trim(&mut out);
        out
    }

    /// base^e mod m.
    pub fn poly_powmod(&self, base: &Poly, mut e: u64, m: &Poly) -> Poly {
        let mut result: Poly = self.poly_rem(&vec![1], m);
        let mut b = self.poly_rem(base, m);
        while e > 0 {
            if e & 1 == 1 {
                result = self.poly_rem(&self.poly_mul(&result, &b), m);
            }
            b = self.poly_rem(&self.poly_mul(&b, &b), m);
            e >>= 1;
        }
        result
    }

    /// x^(p^d) mod m, by d successive p-th powers.
    fn frobenius_x(&self, d: usize, m: &Poly) -> Poly {
        let mut r = self.poly_rem(&vec![0, 1], m);
        for _ in 0..d {
            r = self.poly_powmod(&r, self.p, m);
        }
        r
    }

    /// Rabin's irreducibility test.
    pub fn is_irreducible(&self, f: &Poly) -> bool {
        let n = match Self::degree(f) {
            None | Some(0) => return false,
            Some(1) => return true,
            Some(n) => n,
        };
        let f = self.monic(f);
        let x: Poly = vec![0, 1];
        if self.frobenius_x(n, &f) != x {
            return false;
        }
        for r in prime_divisors(n as u64) {
            let d = n / r as usize;
            let h = self.poly_sub(&self.frobenius_x(d, &f), &x);
            if self.poly_gcd(&h, &f).len() != 1 {
                return false;
            }
        }
        true
    }

    /// Distinct-degree factorization of a monic squarefree polynomial:
    /// returns (product of all irreducible factors of degree d, d).
    pub fn distinct_degree(&self, f: &Poly) -> Vec<(Poly, usize)> {
        let mut out = Vec::new();
        let mut rest = self.monic(f);
        let x: Poly = vec![0, 1];
        let mut h = self.poly_rem(&x, &rest);
        let mut d = 0;
        while Self::degree(&rest).unwrap_or(0) >= 2 * (d + 1) {
            d += 1;
            h = self.poly_powmod(&h, self.p, &rest);
            let g = self.poly_gcd(&self.poly_sub(&h, &x), &rest);
            if g.len() > 1 {
                rest = self.poly_divrem(&rest, &g).0;
                h = self.poly_rem(&h, &rest);
                out.push((g, d));
            }
        }
        if rest.len() > 1 {
            let deg = rest.len() - 1;
            out.push((rest, deg));
        }
        out
    }

    /// Split a monic squarefree product of irreducibles of common degree d
    /// (Cantor-Zassenhaus, odd p).
    pub fn equal_degree<R: Rng>(&self, f: &Poly, d: usize, rng: &mut R) -> Vec<Poly> {
        let n = Self::degree(f).unwrap_or(0);
        if n == d {
            return vec![self.monic(f)];
        }
        assert!(self.p % 2 == 1, "equal-degree splitting needs odd p");
        loop {
            let a: Poly = {
                let mut a: Poly = (0..n).map(|_| rng.gen_range(0..self.p)).collect();
                self.trim(&mut a);
                a
            };
            if a.len() < 2 {
                continue;
            }
            // a^((p^d - 1)/2) = (a · a^p · … · a^(p^(d-1)))^((p-1)/2)
            let mut t = a.clone();
            let mut acc = a.clone();
            for _ in 1..d {
                t = self.poly_powmod(&t, self.p, f);
                acc = self.poly_rem(&self.poly_mul(&acc, &t), f);
            }
            let b = self.poly_powmod(&acc, (self.p - 1) / 2, f);
            let g = self.poly_gcd(&self.poly_sub(&b, &vec![1]), f);
            let dg = g.len().saturating_sub(1);
            if dg > 0 && dg < n {
                let h = self.poly_divrem(f, &g).0;
                let mut out = self.equal_degree(&g, d, rng);
                out.extend(self.equal_degree(&h, d, rng));
                return out;
            }
        }
    }

    /// Complete factorization of a monic squarefree polynomial into monic
    /// irreducibles, sorted by (degree, coefficients).
    pub fn factor_squarefree<R: Rng>(&self, f: &Poly, rng: &mut R) -> Vec<Poly> {
        let mut out = Vec::new();
        for (g, d) in self.distinct_degree(f) {
            out.extend(self.equal_degree(&g, d, rng));
        }
        out.sort_by(|a, b| a.len().cmp(&b.len()).then_with(|| a.cmp(b)));
        out
    }
}

/// Distinct prime divisors by trial division.
pub fn prime_divisors(mut n: u64) -> Vec<u64> {
    let mut out = Vec::new();
    let mut d = 2;
    while d * d <= n {
        if n % d == 0 {
            out.push(d);
            while n % d == 0 {
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

pub fn is_prime_ref(n: &u64) -> bool {
    is_prime(*n)
}

pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    let mut d = 2;
    while d * d <= n {
        if n % d == 0 {
            return false;
        }
        d += 1;
    }
    true
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn irreducibility_small_cases() {
        let f3 = PrimeField::new(3);
        assert!(!f3.is_irreducible(&vec![0, 0, 1]));
        assert!(f3.is_irreducible(&vec![1, 0, 1]));
        assert!(!f3.is_irreducible(&vec![2, 0, 1]));
        let f2 = PrimeField::new(2);
        assert!(f2.is_irreducible(&vec![1, 1, 1]));
        assert!(f2.is_irreducible(&vec![1, 1, 0, 1]));
        // x^4 + x^2 + 1 = (x^2 + x + 1)^2 over F_2
        assert!(!f2.is_irreducible(&vec![1, 0, 1, 0, 1]));
    }

    #[test]
    fn factor_reproduces_input() {
        let fp = PrimeField::new(17);
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        // (x-1)(x-2)(x^2-3)
        let f = fp.poly_mul(
            &fp.poly_mul(&vec![16, 1], &vec![15, 1]),
            &vec![14, 0, 1],
        );
        let factors = fp.factor_squarefree(&f, &mut rng);
        assert_eq!(factors, vec![vec![15, 1], vec![16, 1], vec![14, 0, 1]]);
        let prod = factors.iter().fold(vec![1], |acc, g| fp.poly_mul(&acc, g));
        assert_eq!(prod, f);
    }

    #[test]
    fn ext_gcd_bezout() {
        let fp = PrimeField::new(19);
        let a = vec![3, 0, 1, 5];
        let b = vec![1, 7, 2];
        let (g, s, t) = fp.poly_ext_gcd(&a, &b);
        let lhs = fp.poly_add(&fp.poly_mul(&s, &a), &fp.poly_mul(&t, &b));
        assert_eq!(lhs, g);
    }
}
