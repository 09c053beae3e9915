//! Hyperelliptic curves y² + h(x)y = f(x) over small finite fields and
//! exhaustive point counting over their extensions.

use std::fmt;
use std::sync::Arc;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::gf::poly::{self, FqPoly};
use crate::gf::{FieldElement, FieldError, FieldSpec};

/// Fields at least this large are counted in parallel chunks.
const PARALLEL_COUNT_THRESHOLD: u64 = 1 << 14;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum CurveError {
    #[error("bad degrees: {0}")]
    BadDegrees(String),
    #[error("h must be zero in odd characteristic")]
    NonzeroHOddCharacteristic,
    #[error("h must be nonzero in characteristic 2")]
    ZeroHCharacteristicTwo,
    #[error("singular curve{}", .witness.as_ref().map(|w| format!(" (singular point {w})")).unwrap_or_default())]
    Singular { witness: Option<String> },
    #[error(transparent)]
    Field(#[from] FieldError),
    #[error("point count N_{index} = {count} violates the Weil bound")]
    WeilBoundViolated { index: usize, count: u64 },
    #[error("cannot parse curve: {0}")]
    Parse(String),
}

#[derive(Clone, PartialEq, Eq)]
pub struct HyperellipticCurve {
    base: Arc<FieldSpec>,
    h: FqPoly,
    f: FqPoly,
    genus: usize,
}

/// Rational point counts N_1..N_g over F_q, F_{q^2}, …, F_{q^g}.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct PointCounts {
    pub q: u64,
    pub genus: usize,
    pub counts: Vec<u64>,
}

impl PointCounts {
    /// Checks |N_i - (q^i + 1)| ≤ 2g·√(q^i) exactly, by squaring.
    pub fn check_weil_bound(&self) -> Result<(), CurveError> {
        let g = self.genus as i128;
        let mut qi: i128 = 1;
        for (idx, &n) in self.counts.iter().enumerate() {
            qi *= self.q as i128;
            let dev = n as i128 - qi - 1;
            if dev * dev > 4 * g * g * qi {
                return Err(CurveError::WeilBoundViolated {
                    index: idx + 1,
                    count: n,
                });
            }
        }
        Ok(())
    }
}

/// Number of y in the field with y² + b·y = c.
#[inline]
fn quadratic_solutions(field: &FieldSpec, b: FieldElement, c: FieldElement) -> u64 {
    if field.p() == 2 {
        if b.is_zero() {
            // squaring is a bijection
            return 1;
        }
        // y = b·z turns this into z² + z = c / b², solvable iff the trace vanishes
        let b2 = field.square(b);
        let t = field.mul(c, field.inv(b2).expect("nonzero"));
        if field.trace(t) == 0 {
            2
        } else {
            0
        }
    } else {
        let four = field.from_int(4);
        let disc = field.add(field.square(b), field.mul(four, c));
        (1 + field.legendre(disc)) as u64
    }
}

impl HyperellipticCurve {
    /// Validates degrees, the characteristic-specific shape of `h`, and
    /// nonsingularity. Polynomials are low-to-high coefficient vectors.
    pub fn new(
        base: Arc<FieldSpec>,
        h: FqPoly,
        f: FqPoly,
        genus: usize,
    ) -> Result<Self, CurveError> {
        let mut h = h;
        let mut f = f;
        poly::trim(&mut h);
        poly::trim(&mut f);
        if genus == 0 {
            return Err(CurveError::BadDegrees("genus must be at least 1".into()));
        }
        let deg_f = poly::degree(&f);
        if deg_f != Some(2 * genus + 1) && deg_f != Some(2 * genus + 2) {
            return Err(CurveError::BadDegrees(format!(
                "deg f = {} but genus {genus} needs {} or {}",
                deg_f.map_or("-inf".to_string(), |d| d.to_string()),
                2 * genus + 1,
                2 * genus + 2
            )));
        }
        if *f.last().unwrap() != FieldElement::ONE {
            return Err(CurveError::BadDegrees("f must be monic".into()));
        }
        if let Some(dh) = poly::degree(&h) {
            if dh > genus + 1 {
                return Err(CurveError::BadDegrees(format!(
                    "deg h = {dh} exceeds genus + 1 = {}",
                    genus + 1
                )));
            }
        }
        let curve = Self { base, h, f, genus };
        if curve.base.p() == 2 {
            curve.check_smooth_char2()?;
        } else {
            curve.check_smooth_odd()?;
        }
        Ok(curve)
    }

    /// Parses `p^k; h = <coeffs>; f = <coeffs>` (coefficients low-to-high).
    /// The genus is read off deg f.
    pub fn parse(text: &str) -> Result<Self, CurveError> {
        let parts: Vec<&str> = text.split(';').map(str::trim).collect();
        if parts.len() != 3 {
            return Err(CurveError::Parse(format!(
                "expected `p^k; h = ...; f = ...`, got {text:?}"
            )));
        }
        let (p, k) = match parts[0].split_once('^') {
            Some((p, k)) => (parse_int(p)?, parse_int(k)?),
            None => (parse_int(parts[0])?, 1),
        };
        if p < 2 || !(1..=32).contains(&k) {
            return Err(CurveError::Parse(format!("bad field {:?}", parts[0])));
        }
        let base = FieldSpec::cached(p as u64, k as u32)?;
        let h = parse_coeff_list(&base, parts[1], "h")?;
        let f = parse_coeff_list(&base, parts[2], "f")?;
        let deg_f = poly::degree(&f)
            .ok_or_else(|| CurveError::BadDegrees("f must be nonzero".into()))?;
        if deg_f < 3 {
            return Err(CurveError::BadDegrees(format!("deg f = {deg_f} is below 3")));
        }
        let genus = deg_f.div_ceil(2) - 1;
        Self::new(base, h, f, genus)
    }

    /// Canonical text form, inverse of [`HyperellipticCurve::parse`].
    pub fn to_text(&self) -> String {
        let field = if self.base.k() == 1 {
            self.base.p().to_string()
        } else {
            format!("{}^{}", self.base.p(), self.base.k())
        };
        let list = |v: &FqPoly| {
            v.iter()
                .map(|&c| self.base.format(c))
                .collect::<Vec<_>>()
                .join(",")
        };
        format!("{field}; h = {}; f = {}", list(&self.h), list(&self.f))
    }

    pub fn base(&self) -> &Arc<FieldSpec> {
        &self.base
    }

    pub fn h(&self) -> &[FieldElement] {
        &self.h
    }

    pub fn f(&self) -> &[FieldElement] {
        &self.f
    }

    pub fn genus(&self) -> usize {
        self.genus
    }

    pub fn q(&self) -> u64 {
        self.base.size()
    }

    fn deg_f(&self) -> usize {
        self.f.len() - 1
    }

    fn check_smooth_odd(&self) -> Result<(), CurveError> {
        if !self.h.is_empty() {
            return Err(CurveError::NonzeroHOddCharacteristic);
        }
        let field = &self.base;
        let df = poly::derivative(field, &self.f);
        let g = poly::gcd(field, &self.f, &df);
        if g.len() <= 1 {
            return Ok(());
        }
        // A repeated root of f is a singular point (x0, 0); look for it.
        let witness = self.search_extensions(poly::degree(&g).unwrap(), |ext, embed| {
            let ge: FqPoly = g.iter().map(|&c| embed(c)).collect();
            ext.enumerate()
                .find(|&x| poly::eval(ext, &ge, x).is_zero())
                .map(|x| format!("({}, 0) over {ext}", ext.format(x)))
        });
        Err(CurveError::Singular { witness })
    }

    /// In characteristic 2, an affine singular point (x0, y0) has h(x0) = 0,
    /// y0² = f(x0) and h'(x0)·y0 = f'(x0). Squaring the last condition gives
    /// the exact test gcd(h, h'²·f + f'²) = 1.
    fn check_smooth_char2(&self) -> Result<(), CurveError> {
        if self.h.is_empty() {
            return Err(CurveError::ZeroHCharacteristicTwo);
        }
        let field = &self.base;
        let dh = poly::derivative(field, &self.h);
        let df = poly::derivative(field, &self.f);
        let test = poly::add(
            field,
            &poly::mul(field, &poly::mul(field, &dh, &dh), &self.f),
            &poly::mul(field, &df, &df),
        );
        let g = poly::gcd(field, &self.h, &test);
        if g.len() > 1 {
            let (h, f) = (&self.h, &self.f);
            let witness = self.search_extensions(poly::degree(&self.h).unwrap(), |ext, embed| {
                let he: FqPoly = h.iter().map(|&c| embed(c)).collect();
                let fe: FqPoly = f.iter().map(|&c| embed(c)).collect();
                let dhe = poly::derivative(ext, &he);
                let dfe = poly::derivative(ext, &fe);
                ext.enumerate().find_map(|x| {
                    if !poly::eval(ext, &he, x).is_zero() {
                        return None;
                    }
                    let fx = poly::eval(ext, &fe, x);
                    let y = ext.pow(fx, ext.size() / 2);
                    let lhs = ext.mul(poly::eval(ext, &dhe, x), y);
                    (lhs == poly::eval(ext, &dfe, x))
                        .then(|| format!("({}, {}) over {ext}", ext.format(x), ext.format(y)))
                })
            });
            return Err(CurveError::Singular { witness });
        }
        // At infinity (even degree only): with H = coefficient of x^(g+1) in h,
        // the chart v² + H(u)v = F(u) is singular at u = 0 iff H(0) = 0 and
        // H'(0) = F'(0), i.e. h_{g+1} = 0 and h_g = f_{2g+1}.
        if self.deg_f() == 2 * self.genus + 2 {
            let coeff = |v: &FqPoly, i: usize| v.get(i).copied().unwrap_or_default();
            if coeff(&self.h, self.genus + 1).is_zero()
                && coeff(&self.h, self.genus) == coeff(&self.f, 2 * self.genus + 1)
            {
                return Err(CurveError::Singular {
                    witness: Some("point at infinity".into()),
                });
            }
        }
        Ok(())
    }

    /// Runs `probe` over F_{q^m} for m = 1..=max_m while the field fits the cap.
    fn search_extensions<F>(&self, max_m: usize, probe: F) -> Option<String>
    where
        F: Fn(&FieldSpec, &dyn Fn(FieldElement) -> FieldElement) -> Option<String>,
    {
        for m in 1..=max_m.max(1) {
            let Ok((ext, root)) = self.extension(m as u32) else {
                break;
            };
            let embed = |c: FieldElement| embed_element(&self.base, &ext, root, c);
            if let Some(w) = probe(&ext, &embed) {
                return Some(w);
            }
        }
        None
    }

    /// F_{q^i} together with the image of the base generator.
    fn extension(&self, i: u32) -> Result<(Arc<FieldSpec>, FieldElement), FieldError> {
        let k = self.base.k();
        let ext = FieldSpec::cached(self.base.p(), k * i)?;
        let root = if k == 1 {
            FieldElement::ZERO
        } else {
            let m: FqPoly = self
                .base
                .modulus()
                .iter()
                .map(|&c| ext.from_int(c as i64))
                .collect();
            ext.enumerate()
                .find(|&x| poly::eval(&ext, &m, x).is_zero())
                .expect("the base field embeds in its extension")
        };
        Ok((ext, root))
    }

    /// N_i = #C(F_{q^i}), including points at infinity.
    pub fn count_points(&self, i: usize) -> Result<u64, CurveError> {
        assert!(i >= 1, "extension index starts at 1");
        let (ext, root) = self.extension(i as u32)?;
        let h: FqPoly = self
            .h
            .iter()
            .map(|&c| embed_element(&self.base, &ext, root, c))
            .collect();
        let f: FqPoly = self
            .f
            .iter()
            .map(|&c| embed_element(&self.base, &ext, root, c))
            .collect();
        let count_x = |x: FieldElement| {
            quadratic_solutions(&ext, poly::eval(&ext, &h, x), poly::eval(&ext, &f, x))
        };
        let size = ext.size();
        let affine: u64 = if size >= PARALLEL_COUNT_THRESHOLD {
            let chunk = 1 << 12;
            (0..size.div_ceil(chunk))
                .into_par_iter()
                .map(|c| {
                    (c * chunk..((c + 1) * chunk).min(size))
                        .map(|x| count_x(FieldElement::from_index(x as u32)))
                        .sum::<u64>()
                })
                .sum()
        } else {
            ext.enumerate().map(count_x).sum()
        };
        let infinity = if self.deg_f() == 2 * self.genus + 1 {
            1
        } else {
            let top_h = h.get(self.genus + 1).copied().unwrap_or_default();
            let lead_f = *f.last().unwrap();
            quadratic_solutions(&ext, top_h, lead_f)
        };
        Ok(affine + infinity)
    }

    /// (N_1, …, N_g), checked against the Weil bound.
    pub fn counts_up_to_genus(&self) -> Result<PointCounts, CurveError> {
        let counts = (1..=self.genus)
            .map(|i| self.count_points(i))
            .collect::<Result<Vec<_>, _>>()?;
        let pc = PointCounts {
            q: self.q(),
            genus: self.genus,
            counts,
        };
        pc.check_weil_bound()?;
        Ok(pc)
    }
}

fn embed_element(
    base: &FieldSpec,
    ext: &FieldSpec,
    root: FieldElement,
    c: FieldElement,
) -> FieldElement {
    if base.k() == 1 {
        return c;
    }
    base.coeffs(c)
        .iter()
        .rev()
        .fold(FieldElement::ZERO, |acc, &cj| {
            ext.add(ext.mul(acc, root), ext.from_int(cj as i64))
        })
}

fn parse_int(s: &str) -> Result<i64, CurveError> {
    s.trim()
        .parse::<i64>()
        .map_err(|_| CurveError::Parse(format!("not an integer: {s:?}")))
}

fn parse_coeff_list(field: &FieldSpec, part: &str, name: &str) -> Result<FqPoly, CurveError> {
    let (lhs, rhs) = part
        .split_once('=')
        .ok_or_else(|| CurveError::Parse(format!("expected `{name} = ...`, got {part:?}")))?;
    if lhs.trim() != name {
        return Err(CurveError::Parse(format!("expected `{name} = ...`, got {part:?}")));
    }
    let rhs = rhs.trim();
    if rhs.is_empty() {
        return Ok(Vec::new());
    }
    // split on commas outside parentheses
    let mut items = Vec::new();
    let mut depth = 0i32;
    let mut start = 0;
    for (i, ch) in rhs.char_indices() {
        match ch {
            '(' => depth += 1,
            ')' => depth -= 1,
            ',' if depth == 0 => {
                items.push(&rhs[start..i]);
                start = i + 1;
            }
            _ => {}
        }
        if depth < 0 {
            return Err(CurveError::Parse(format!("unbalanced parentheses in {rhs:?}")));
        }
    }
    if depth != 0 {
        return Err(CurveError::Parse(format!("unbalanced parentheses in {rhs:?}")));
    }
    items.push(&rhs[start..]);
    let mut out: FqPoly = items
        .into_iter()
        .map(|item| parse_element(field, item.trim()))
        .collect::<Result<_, _>>()?;
    poly::trim(&mut out);
    Ok(out)
}

fn parse_element(field: &FieldSpec, item: &str) -> Result<FieldElement, CurveError> {
    if let Some(inner) = item.strip_prefix('(').and_then(|s| s.strip_suffix(')')) {
        let coeffs: Vec<u64> = inner
            .split(',')
            .map(|c| parse_int(c).map(|v| v.rem_euclid(field.p() as i64) as u64))
            .collect::<Result<_, _>>()?;
        Ok(field.from_coeffs(&coeffs)?)
    } else {
        Ok(field.from_int(parse_int(item)?))
    }
}

impl fmt::Display for HyperellipticCurve {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.to_text())
    }
}

impl fmt::Debug for HyperellipticCurve {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "HyperellipticCurve({})", self.to_text())
    }
}
