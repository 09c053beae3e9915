//! JSONL persistence: a header line with the family fingerprint, then one
//! entry per enumerated equation in index order.

use std::collections::BTreeMap;
use std::fs::{File, OpenOptions};
use std::io::{BufRead, BufReader, BufWriter, Read, Seek, SeekFrom, Write};
use std::path::Path;

use serde::{Deserialize, Serialize};

use super::{verify_entry, Entry, SurveyError};
use crate::simplicity::VerdictKind;

pub const FORMAT_VERSION: u32 = 1;

const NOTE: &str = "counts equations, not isomorphism classes; the fraction is an empirical \
                    fraction over one field, not a density";

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct Header {
    pub frobtorus_survey: u32,
    pub p: u64,
    pub genus: usize,
    pub degree: usize,
}

impl std::fmt::Display for Header {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "p={} genus={} deg={}", self.p, self.genus, self.degree)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SummaryReport {
    pub family: Option<Header>,
    pub enumerated: u64,
    pub valid: u64,
    pub singular_skipped: u64,
    pub totals: BTreeMap<String, u64>,
    pub absolutely_simple_fraction: f64,
    pub note: String,
}

impl SummaryReport {
    pub fn from_entries(family: Option<Header>, entries: &[Entry]) -> Self {
        let mut totals: BTreeMap<String, u64> = VerdictKind::ALL
            .iter()
            .map(|k| (k.as_str().to_string(), 0))
            .collect();
        let mut skipped = 0;
        for e in entries {
            match e.kind() {
                Some(k) => *totals.get_mut(k.as_str()).unwrap() += 1,
                None => skipped += 1,
            }
        }
        let valid = entries.len() as u64 - skipped;
        let simple = totals[VerdictKind::AbsolutelySimple.as_str()];
        Self {
            family,
            enumerated: entries.len() as u64,
            valid,
            singular_skipped: skipped,
            totals,
            absolutely_simple_fraction: if valid == 0 {
                0.0
            } else {
                simple as f64 / valid as f64
            },
            note: NOTE.to_string(),
        }
    }
}

/// The line without its `timing` object, for determinism comparisons.
pub fn strip_timing(line: &str) -> String {
    match serde_json::from_str::<serde_json::Value>(line) {
        Ok(serde_json::Value::Object(mut m)) => {
            m.remove("timing");
            serde_json::Value::Object(m).to_string()
        }
        _ => line.to_string(),
    }
}

fn corrupt(line: usize, reason: impl Into<String>) -> SurveyError {
    SurveyError::CorruptRecord {
        line,
        reason: reason.into(),
    }
}

fn parse_entry(text: &str, line: usize, expected_index: u64) -> Result<Entry, SurveyError> {
    let entry: Entry = serde_json::from_str(text).map_err(|e| corrupt(line, e.to_string()))?;
    if entry.index() != Some(expected_index) {
        return Err(corrupt(
            line,
            format!("expected index {expected_index}, found {:?}", entry.index()),
        ));
    }
    Ok(entry)
}

/// Reads, verifies and summarizes a survey file. An empty file gives an
/// all-zero report.
pub fn report(path: &Path) -> Result<SummaryReport, SurveyError> {
    let reader = BufReader::new(File::open(path)?);
    let mut header = None;
    let mut entries = Vec::new();
    for (i, line) in reader.lines().enumerate() {
        let line = line?;
        let lineno = i + 1;
        if i == 0 {
            let h: Header = serde_json::from_str(&line)
                .map_err(|e| corrupt(lineno, format!("bad header: {e}")))?;
            header = Some(h);
            continue;
        }
        let entry = parse_entry(&line, lineno, entries.len() as u64)?;
        verify_entry(&entry).map_err(|r| corrupt(lineno, r))?;
        entries.push(entry);
    }
    Ok(SummaryReport::from_entries(header, &entries))
}

/// Append-only writer that first recovers what an earlier run left behind.
pub(super) struct Sink {
    out: BufWriter<File>,
    existing: Vec<Entry>,
}

impl Sink {
    pub fn open(path: &Path, header: &Header) -> Result<Self, SurveyError> {
        let mut file = OpenOptions::new()
            .read(true)
            .write(true)
            .create(true)
            .truncate(false)
            .open(path)?;
        let mut text = String::new();
        file.read_to_string(&mut text)?;
        // A killed run may leave a partial last line; drop it.
        let complete = text.rfind('\n').map_or(0, |i| i + 1);
        if complete < text.len() {
            file.set_len(complete as u64)?;
        }
        file.seek(SeekFrom::Start(complete as u64))?;
        let mut existing = Vec::new();
        let mut out = BufWriter::new(file);
        let mut lines = text[..complete].lines();
        match lines.next() {
            None => {
                serde_json::to_writer(&mut out, header).map_err(std::io::Error::from)?;
                out.write_all(b"\n")?;
                out.flush()?;
            }
            Some(first) => {
                let found: Header = serde_json::from_str(first)
                    .map_err(|e| corrupt(1, format!("bad header: {e}")))?;
                if found != *header {
                    return Err(SurveyError::ResumeMismatch {
                        path: path.display().to_string(),
                        expected: header.to_string(),
                        found: found.to_string(),
                    });
                }
                for (i, line) in lines.enumerate() {
                    existing.push(parse_entry(line, i + 2, i as u64)?);
                }
            }
        }
        Ok(Self { out, existing })
    }

    pub fn existing(&self) -> &[Entry] {
        &self.existing
    }

    pub fn append(&mut self, entries: &[Entry]) -> Result<(), SurveyError> {
        for e in entries {
            serde_json::to_writer(&mut self.out, e).map_err(std::io::Error::from)?;
            self.out.write_all(b"\n")?;
        }
        self.out.flush()?;
        Ok(())
    }
}
