//! Curve families over prime fields: enumeration, the per-curve pipeline,
//! JSONL persistence and summary reports.
//!
//! Surveys count equations, not isomorphism classes.

mod store;

use std::path::PathBuf;
use std::time::Instant;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::curves::{CurveError, HyperellipticCurve, PointCounts};
use crate::gf::{FieldElement, FieldSpec};
use crate::modp;
use crate::simplicity::{classify, replay, ReplayError, SimplicityVerdict, VerdictKind};
use crate::zeta::{is_ordinary, is_weil, weil_from_counts, WeilCheck, WeilPolynomial, ZetaError};

pub use store::{report, strip_timing, Header, SummaryReport};

/// Curves analyzed per parallel batch; records are written batch by batch.
const BATCH: usize = 64;

#[derive(Debug, Error)]
pub enum SurveyError {
    #[error("invalid survey configuration: {0}")]
    InvalidConfig(String),
    #[error("{path} holds records for {found}, not {expected}")]
    ResumeMismatch {
        path: String,
        expected: String,
        found: String,
    },
    #[error("corrupt record at line {line}: {reason}")]
    CorruptRecord { line: usize, reason: String },
    #[error(transparent)]
    Curve(#[from] CurveError),
    #[error(transparent)]
    Zeta(#[from] ZetaError),
    #[error("certificate replay failed: {0}")]
    Replay(#[from] ReplayError),
    #[error("cannot parse Weil polynomial: {0}")]
    WeilParse(String),
    #[error(transparent)]
    Io(#[from] std::io::Error),
}

impl SurveyError {
    /// True for errors caused by bad user input rather than a failed check.
    pub fn is_input_error(&self) -> bool {
        match self {
            SurveyError::InvalidConfig(_)
            | SurveyError::ResumeMismatch { .. }
            | SurveyError::WeilParse(_)
            | SurveyError::Io(_) => true,
            SurveyError::Curve(e) => !matches!(e, CurveError::WeilBoundViolated { .. }),
            SurveyError::Zeta(ZetaError::InvariantViolation(_)) => true,
            _ => false,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Mode {
    Full,
    /// Stop once this many AbsolutelySimple curves have been found.
    FindFirst(usize),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SurveyConfig {
    pub p: u64,
    pub genus: usize,
    pub degree: usize,
    /// Caps the number of enumerated equations (singular ones included).
    pub limit: Option<u64>,
    pub mode: Mode,
    pub out: Option<PathBuf>,
}

impl SurveyConfig {
    pub fn full(p: u64, genus: usize, degree: usize) -> Self {
        Self {
            p,
            genus,
            degree,
            limit: None,
            mode: Mode::Full,
            out: None,
        }
    }

    pub fn validate(&self) -> Result<(), SurveyError> {
        let bad = |m: String| Err(SurveyError::InvalidConfig(m));
        if !modp::is_prime(self.p) {
            return bad(format!("{} is not prime", self.p));
        }
        if self.genus == 0 {
            return bad("genus must be at least 1".into());
        }
        if self.degree != 2 * self.genus + 1 && self.degree != 2 * self.genus + 2 {
            return bad(format!(
                "degree {} must be {} or {} for genus {}",
                self.degree,
                2 * self.genus + 1,
                2 * self.genus + 2,
                self.genus
            ));
        }
        // Counting needs F_{p^g}.
        FieldSpec::cached(self.p, self.genus as u32)
            .map_err(|e| SurveyError::InvalidConfig(e.to_string()))?;
        if self.family_size().is_none() {
            return bad("family too large to enumerate".into());
        }
        if let Mode::FindFirst(0) = self.mode {
            return bad("count must be positive".into());
        }
        Ok(())
    }

    /// Number of nonzero h allowed in characteristic 2 (deg h ≤ g + 1); one
    /// (h = 0) otherwise.
    fn h_choices(&self) -> u64 {
        if self.p == 2 {
            (1u64 << (self.genus + 2)) - 1
        } else {
            1
        }
    }

    /// Equations in the family: p^deg monic f, times the choices of h.
    pub fn family_size(&self) -> Option<u64> {
        self.p
            .checked_pow(self.degree as u32)?
            .checked_mul(self.h_choices())
    }

    /// Indices to enumerate, honoring the limit.
    pub fn end_index(&self) -> u64 {
        let total = self.family_size().unwrap_or(0);
        self.limit.map_or(total, |l| l.min(total))
    }

    /// Coefficients (h, f) of equation number `index`. f runs through monic
    /// polynomials in lexicographic order of (f_0, …, f_(d-1)); in
    /// characteristic 2 the nonzero h run fastest, lexicographic in
    /// (h_0, …, h_(g+1)).
    pub fn equation(&self, index: u64) -> (Vec<u64>, Vec<u64>) {
        let hc = self.h_choices();
        let f_idx = index / hc;
        let h = if self.p == 2 {
            lex_digits(index % hc + 1, 2, self.genus + 2)
        } else {
            Vec::new()
        };
        let mut f = lex_digits(f_idx, self.p, self.degree);
        f.push(1);
        (h, f)
    }

    fn fingerprint(&self) -> Header {
        Header {
            frobtorus_survey: store::FORMAT_VERSION,
            p: self.p,
            genus: self.genus,
            degree: self.degree,
        }
    }
}

/// `len` base-`p` digits of `n`, most significant first.
fn lex_digits(mut n: u64, p: u64, len: usize) -> Vec<u64> {
    let mut out = vec![0; len];
    for slot in out.iter_mut().rev() {
        *slot = n % p;
        n /= p;
    }
    out
}

fn equation_text(p: u64, h: &[u64], f: &[u64]) -> String {
    let trimmed = |v: &[u64]| {
        let end = v.iter().rposition(|&c| c != 0).map_or(0, |i| i + 1);
        v[..end]
            .iter()
            .map(u64::to_string)
            .collect::<Vec<_>>()
            .join(",")
    };
    format!("{p}; h = {}; f = {}", trimmed(h), trimmed(f))
}

/// Per-stage wall time in microseconds.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct Timing {
    pub count_us: u64,
    pub zeta_us: u64,
    pub classify_us: u64,
}

/// One analyzed curve. `timing` is serialized last and is the only
/// nondeterministic field.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CurveRecord {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub index: Option<u64>,
    pub curve: String,
    pub counts: PointCounts,
    pub weil: WeilPolynomial,
    pub verdict: SimplicityVerdict,
    pub timing: Timing,
}

/// A singular equation, kept so that resumed runs see every index.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SkipRecord {
    pub index: u64,
    pub curve: String,
    pub skipped: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum Entry {
    Skip(SkipRecord),
    Record(CurveRecord),
}

impl Entry {
    pub fn index(&self) -> Option<u64> {
        match self {
            Entry::Skip(s) => Some(s.index),
            Entry::Record(r) => r.index,
        }
    }

    pub fn kind(&self) -> Option<VerdictKind> {
        match self {
            Entry::Skip(_) => None,
            Entry::Record(r) => Some(r.verdict.kind()),
        }
    }
}

fn micros(t: Instant) -> u64 {
    t.elapsed().as_micros() as u64
}

/// Counts, Weil polynomial and verdict for a validated curve.
pub fn analyze_curve(curve: &HyperellipticCurve) -> Result<CurveRecord, SurveyError> {
    let t0 = Instant::now();
    let counts = curve.counts_up_to_genus()?;
    let count_us = micros(t0);
    let t1 = Instant::now();
    let weil = weil_from_counts(&counts)?;
    let zeta_us = micros(t1);
    let t2 = Instant::now();
    let verdict = classify(&weil);
    let classify_us = micros(t2);
    Ok(CurveRecord {
        index: None,
        curve: curve.to_text(),
        counts,
        weil,
        verdict,
        timing: Timing {
            count_us,
            zeta_us,
            classify_us,
        },
    })
}

/// Single-curve entry point on the text form `p^k; h = …; f = …`.
pub fn analyze_one(text: &str) -> Result<CurveRecord, SurveyError> {
    analyze_curve(&HyperellipticCurve::parse(text)?)
}

/// Analysis of a bare Weil polynomial, skipping the curve.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct WeilAnalysis {
    pub weil: WeilPolynomial,
    pub ordinary: bool,
    pub root_modulus_ok: bool,
    pub root_modulus_deviation: f64,
    pub verdict: SimplicityVerdict,
}

pub fn analyze_weil(json: &str) -> Result<WeilAnalysis, SurveyError> {
    let weil: WeilPolynomial =
        serde_json::from_str(json).map_err(|e| SurveyError::WeilParse(e.to_string()))?;
    let WeilCheck {
        ok, max_deviation, ..
    } = is_weil(&weil);
    let verdict = classify(&weil);
    Ok(WeilAnalysis {
        ordinary: is_ordinary(&weil),
        root_modulus_ok: ok,
        root_modulus_deviation: max_deviation,
        verdict,
        weil,
    })
}

/// Full pipeline for equation `index` of the family.
pub fn analyze_index(cfg: &SurveyConfig, index: u64) -> Result<Entry, SurveyError> {
    let base = FieldSpec::cached(cfg.p, 1).map_err(CurveError::from)?;
    let (h, f) = cfg.equation(index);
    let lift = |v: &[u64]| -> Vec<FieldElement> { v.iter().map(|&c| base.from_int(c as i64)).collect() };
    match HyperellipticCurve::new(base.clone(), lift(&h), lift(&f), cfg.genus) {
        Ok(curve) => {
            let mut rec = analyze_curve(&curve)?;
            rec.index = Some(index);
            Ok(Entry::Record(rec))
        }
        Err(CurveError::Singular { .. }) => Ok(Entry::Skip(SkipRecord {
            index,
            curve: equation_text(cfg.p, &h, &f),
            skipped: "singular".into(),
        })),
        Err(e) => Err(e.into()),
    }
}

/// Result of a survey run: the summary over every entry in the output
/// (including resumed ones), and in find mode the curves found.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SurveyOutcome {
    pub summary: SummaryReport,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub found: Option<Vec<CurveRecord>>,
}

/// Runs the survey. With an output path, existing records are kept and the
/// run resumes after the last complete one.
pub fn survey_run(cfg: &SurveyConfig) -> Result<SurveyOutcome, SurveyError> {
    cfg.validate()?;
    let mut sink = match &cfg.out {
        Some(path) => Some(store::Sink::open(path, &cfg.fingerprint())?),
        None => None,
    };
    let mut entries: Vec<Entry> = sink.as_ref().map_or(Vec::new(), |s| s.existing().to_vec());
    let target = match cfg.mode {
        Mode::Full => None,
        Mode::FindFirst(n) => Some(n),
    };
    let found_count = |entries: &[Entry]| {
        entries
            .iter()
            .filter(|e| e.kind() == Some(VerdictKind::AbsolutelySimple))
            .count()
    };
    let end = cfg.end_index();
    let mut next = entries.len() as u64;
    let done = |entries: &[Entry]| target.is_some_and(|t| found_count(entries) >= t);
    while next < end && !done(&entries) {
        let stop = (next + (BATCH * rayon::current_num_threads()) as u64).min(end);
        let batch: Vec<Entry> = (next..stop)
            .into_par_iter()
            .map(|i| analyze_index(cfg, i))
            .collect::<Result<_, _>>()?;
        let mut fresh = Vec::with_capacity(batch.len());
        for e in batch {
            let hit = e.kind() == Some(VerdictKind::AbsolutelySimple);
            fresh.push(e);
            if hit && done_after(&entries, &fresh, target) {
                break;
            }
        }
        if let Some(s) = sink.as_mut() {
            s.append(&fresh)?;
        }
        next += fresh.len() as u64;
        entries.extend(fresh);
    }
    let summary = SummaryReport::from_entries(Some(cfg.fingerprint()), &entries);
    let found = target.map(|t| {
        entries
            .iter()
            .filter_map(|e| match e {
                Entry::Record(r) if r.verdict.kind() == VerdictKind::AbsolutelySimple => {
                    Some(r.clone())
                }
                _ => None,
            })
            .take(t)
            .collect()
    });
    Ok(SurveyOutcome { summary, found })
}

fn done_after(old: &[Entry], fresh: &[Entry], target: Option<usize>) -> bool {
    let Some(t) = target else { return false };
    old.iter()
        .chain(fresh)
        .filter(|e| e.kind() == Some(VerdictKind::AbsolutelySimple))
        .count()
        >= t
}

/// Re-derives everything a record claims: the curve parses and recounts to
/// the stored counts, the Weil polynomial rebuilds from them, and the
/// verdict certificate replays.
pub fn verify_entry(entry: &Entry) -> Result<(), String> {
    match entry {
        Entry::Skip(s) => match HyperellipticCurve::parse(&s.curve) {
            Err(CurveError::Singular { .. }) => Ok(()),
            Ok(_) => Err("skipped equation is nonsingular".into()),
            Err(e) => Err(e.to_string()),
        },
        Entry::Record(r) => {
            let curve = HyperellipticCurve::parse(&r.curve).map_err(|e| e.to_string())?;
            let counts = curve.counts_up_to_genus().map_err(|e| e.to_string())?;
            if counts != r.counts {
                return Err("point counts do not match the curve".into());
            }
            let weil = weil_from_counts(&counts).map_err(|e| e.to_string())?;
            if weil != r.weil {
                return Err("Weil polynomial does not match the counts".into());
            }
            replay(&weil, &r.verdict).map_err(|e| e.to_string())
        }
    }
}
