//! Resultants over Z: univariate by the subresultant PRS, and the bivariate
//! form Res_y(f(y), G(x, y)) by evaluation at integer points followed by exact
//! interpolation.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};
use rayon::prelude::*;

use super::{IntPolynomial, PolyError};

/// Res(f, g) = lc(f)^deg g · Π_{f(α)=0} g(α).
pub fn resultant(f: &IntPolynomial, g: &IntPolynomial) -> Result<BigInt, PolyError> {
    let (Some(df), Some(dg)) = (f.degree(), g.degree()) else {
        return Err(PolyError::ZeroPolynomial);
    };
    if dg == 0 {
        return Ok(g.lc().unwrap().pow(df as u32));
    }
    if df == 0 {
        return Ok(f.lc().unwrap().pow(dg as u32));
    }

    let ca = f.content();
    let cb = g.content();
    let mut a = f.div_scalar_exact(&ca);
    let mut b = g.div_scalar_exact(&cb);
    let t = ca.pow(dg as u32) * cb.pow(df as u32);
    let mut s = BigInt::one();
    if df < dg {
        std::mem::swap(&mut a, &mut b);
        if df % 2 == 1 && dg % 2 == 1 {
            s = -s;
        }
    }
    let mut gg = BigInt::one();
    let mut h = BigInt::one();
    loop {
        let da = a.degree().unwrap();
        let db = b.degree().unwrap();
        let delta = (da - db) as u32;
        if da % 2 == 1 && db % 2 == 1 {
            s = -s;
        }
        let r = a.pseudo_rem(&b);
        a = b;
        if r.is_zero() {
            return Ok(BigInt::zero());
        }
        let divisor = &gg * h.pow(delta);
        b = r.div_scalar_exact(&divisor);
        gg = a.lc().unwrap().clone();
        // h <- h^(1-δ) g^δ
        h = if delta == 0 {
            h
        } else {
            gg.pow(delta) / h.pow(delta - 1)
        };
        if b.degree() == Some(0) {
            break;
        }
    }
    let da = a.degree().unwrap() as u32;
    let lb = b.lc().unwrap().clone();
    // h <- h^(1-deg a) lc(b)^deg a
    let h = if da == 0 {
        h
    } else {
        lb.pow(da) / h.pow(da - 1)
    };
    Ok(s * t * h)
}

/// Determinant of the Sylvester matrix by fraction-free Bareiss elimination.
/// An independent route to the resultant, kept for cross-checking.
pub fn sylvester_determinant(f: &IntPolynomial, g: &IntPolynomial) -> BigInt {
    let m = f.degree().unwrap_or(0);
    let n = g.degree().unwrap_or(0);
    let size = m + n;
    if size == 0 {
        return BigInt::one();
    }
    let mut mat = vec![vec![BigInt::zero(); size]; size];
    for i in 0..n {
        for (j, c) in f.coeffs().iter().rev().enumerate() {
            mat[i][i + j] = c.clone();
        }
    }
    for i in 0..m {
        for (j, c) in g.coeffs().iter().rev().enumerate() {
            mat[n + i][i + j] = c.clone();
        }
    }
    let mut sign = BigInt::one();
    let mut prev = BigInt::one();
    for k in 0..size {
        if mat[k][k].is_zero() {
            match (k + 1..size).find(|&r| !mat[r][k].is_zero()) {
                Some(r) => {
                    mat.swap(k, r);
                    sign = -sign;
                }
                None => return BigInt::zero(),
            }
        }
        for i in k + 1..size {
            for j in k + 1..size {
                let v = &mat[i][j] * &mat[k][k] - &mat[i][k] * &mat[k][j];
                mat[i][j] = v / &prev;
            }
        }
        prev = mat[k][k].clone();
    }
    sign * &mat[size - 1][size - 1]
}

/// A polynomial in y whose coefficients are polynomials in x:
/// `G(x, y) = Σ_j coeffs[j](x) · y^j`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BivariatePoly {
    coeffs: Vec<IntPolynomial>,
}

impl BivariatePoly {
    pub fn new(mut coeffs: Vec<IntPolynomial>) -> Self {
        while coeffs.last().is_some_and(|c| c.is_zero()) {
            coeffs.pop();
        }
        Self { coeffs }
    }

    pub fn y_degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    /// Maximum x-degree over the coefficients.
    pub fn x_degree(&self) -> usize {
        self.coeffs
            .iter()
            .filter_map(IntPolynomial::degree)
            .max()
            .unwrap_or(0)
    }

    /// G(x0, y) as a polynomial in y.
    pub fn eval_x(&self, x0: &BigInt) -> IntPolynomial {
        IntPolynomial::new(self.coeffs.iter().map(|c| c.eval(x0)).collect())
    }
}

/// Res_y(f(y), G(x, y)) as a polynomial in x.
///
/// The resultant is taken with G's formal y-degree, so evaluation points where
/// the leading y-coefficient vanishes are corrected by a power of lc(f).
pub fn resultant_y(f: &IntPolynomial, g: &BivariatePoly) -> Result<IntPolynomial, PolyError> {
    let df = f.degree().ok_or(PolyError::ZeroPolynomial)?;
    let dy = g.y_degree().ok_or(PolyError::ZeroPolynomial)?;
    let bound = df * g.x_degree();
    let lc = f.lc().unwrap().clone();
    let points: Vec<BigInt> = (0..=bound).map(interpolation_point).collect();
    let values: Vec<BigInt> = points
        .par_iter()
        .map(|x0| {
            let gx = g.eval_x(x0);
            match gx.degree() {
                None => BigInt::zero(),
                Some(d0) => {
                    let r = resultant(f, &gx).expect("nonzero inputs");
                    r * lc.pow((dy - d0) as u32)
                }
            }
        })
        .collect();
    Ok(interpolate(&points, &values))
}

/// 0, 1, -1, 2, -2, …
fn interpolation_point(i: usize) -> BigInt {
    let k = i.div_ceil(2) as i64;
    BigInt::from(if i % 2 == 1 { k } else { -k })
}

/// Newton interpolation through (points[i], values[i]); the result must have
/// integer coefficients.
fn interpolate(points: &[BigInt], values: &[BigInt]) -> IntPolynomial {
    let n = points.len();
    let mut dd: Vec<BigRational> = values.iter().cloned().map(BigRational::from_integer).collect();
    for level in 1..n {
        for i in (level..n).rev() {
            let num = &dd[i] - &dd[i - 1];
            let den = BigRational::from_integer(&points[i] - &points[i - level]);
            dd[i] = num / den;
        }
    }
    // Horner on the Newton form.
    let mut acc: Vec<BigRational> = vec![dd[n - 1].clone()];
    for i in (0..n - 1).rev() {
        // acc <- acc·(x - points[i]) + dd[i]
        let mut next = vec![BigRational::zero(); acc.len() + 1];
        let xi = BigRational::from_integer(points[i].clone());
        for (j, c) in acc.iter().enumerate() {
            next[j + 1] += c;
            next[j] -= c * &xi;
        }
        next[0] += &dd[i];
        acc = next;
    }
    IntPolynomial::new(
        acc.into_iter()
            .map(|c| {
                assert!(c.is_integer(), "interpolated resultant is not integral");
                c.to_integer()
            })
            .collect(),
    )
}
