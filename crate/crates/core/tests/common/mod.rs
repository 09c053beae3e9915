//! Shared test helpers: a deliberately naive finite field and point counter,
//! sharing no code with the library.

#![allow(dead_code)]

use rand::Rng;

/// F_{p^k} as coefficient vectors modulo a monic irreducible found by the
/// no-roots test (valid for k ≤ 3).
pub struct NaiveField {
    p: u64,
    k: usize,
    modulus: Vec<u64>,
}

impl NaiveField {
    pub fn new(p: u64, k: usize) -> Self {
        assert!((1..=3).contains(&k));
        let mut modulus = vec![0; k + 1];
        modulus[k] = 1;
        if k > 1 {
            'search: for n in 0..p.pow(k as u32) {
                let mut rest = n;
                for c in modulus.iter_mut().take(k) {
                    *c = rest % p;
                    rest /= p;
                }
                for x in 0..p {
                    let v = modulus.iter().rev().fold(0, |acc, &c| (acc * x + c) % p);
                    if v == 0 {
                        continue 'search;
                    }
                }
                break;
            }
        }
        Self { p, k, modulus }
    }

    pub fn elements(&self) -> Vec<Vec<u64>> {
        (0..self.p.pow(self.k as u32))
            .map(|mut n| {
                (0..self.k)
                    .map(|_| {
                        let c = n % self.p;
                        n /= self.p;
                        c
                    })
                    .collect()
            })
            .collect()
    }

    pub fn constant(&self, c: u64) -> Vec<u64> {
        let mut v = vec![0; self.k];
        v[0] = c % self.p;
        v
    }

    pub fn add(&self, a: &[u64], b: &[u64]) -> Vec<u64> {
        a.iter().zip(b).map(|(x, y)| (x + y) % self.p).collect()
    }

    pub fn mul(&self, a: &[u64], b: &[u64]) -> Vec<u64> {
        let mut prod = vec![0; 2 * self.k];
        for (i, x) in a.iter().enumerate() {
            for (j, y) in b.iter().enumerate() {
                prod[i + j] = (prod[i + j] + x * y) % self.p;
            }
        }
        for top in (self.k..2 * self.k).rev() {
            let c = prod[top];
            if c == 0 {
                continue;
            }
            prod[top] = 0;
            for (j, m) in self.modulus.iter().enumerate().take(self.k) {
                let idx = top - self.k + j;
                prod[idx] = (prod[idx] + self.p * self.p - c * m % self.p) % self.p;
            }
        }
        prod.truncate(self.k);
        prod
    }

    fn eval(&self, poly: &[u64], x: &[u64]) -> Vec<u64> {
        poly.iter().rev().fold(self.constant(0), |acc, &c| {
            self.add(&self.mul(&acc, x), &self.constant(c))
        })
    }
}

/// #C(F_{p^k}) for y² + h y = f over F_p by trying every (x, y), plus the
/// points at infinity of the smooth model.
pub fn naive_count(p: u64, h: &[u64], f: &[u64], k: usize) -> u64 {
    let field = NaiveField::new(p, k);
    let elems = field.elements();
    let mut n = 0;
    for x in &elems {
        let hx = field.eval(h, x);
        let fx = field.eval(f, x);
        for y in &elems {
            let lhs = field.add(&field.mul(y, y), &field.mul(&hx, y));
            if lhs == fx {
                n += 1;
            }
        }
    }
    let deg_f = f.len() - 1;
    if deg_f % 2 == 1 {
        return n + 1;
    }
    let g = deg_f / 2 - 1;
    let top_h = field.constant(h.get(g + 1).copied().unwrap_or(0));
    let lead_f = field.constant(f[deg_f]);
    n + elems
        .iter()
        .filter(|z| field.add(&field.mul(z, z), &field.mul(&top_h, z)) == lead_f)
        .count() as u64
}

pub fn curve_text(p: u64, h: &[u64], f: &[u64]) -> String {
    let list = |v: &[u64]| v.iter().map(u64::to_string).collect::<Vec<_>>().join(",");
    format!("{p}; h = {}; f = {}", list(h), list(f))
}

/// A random equation y² + h y = f of genus g over F_p, monic f of degree
/// 2g+1 or 2g+2; h is zero for odd p and nonzero of degree ≤ g+1 for p = 2.
pub fn random_equation(rng: &mut impl Rng, p: u64, g: usize) -> (Vec<u64>, Vec<u64>) {
    let deg = 2 * g + 1 + rng.gen_range(0..2);
    let mut f: Vec<u64> = (0..deg).map(|_| rng.gen_range(0..p)).collect();
    f.push(1);
    let h = if p == 2 {
        loop {
            let mut h: Vec<u64> = (0..g + 2).map(|_| rng.gen_range(0..2)).collect();
            while h.last() == Some(&0) {
                h.pop();
            }
            if !h.is_empty() {
                break h;
            }
        }
    } else {
        Vec::new()
    };
    (h, f)
}
