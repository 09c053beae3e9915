//! Acceptance gate: one PASS/FAIL line per criterion, nonzero exit if any
//! criterion fails.

mod common;

use std::collections::BTreeSet;
use std::path::{Path, PathBuf};
use std::process::{Command, Stdio};
use std::time::{Duration, Instant};

use num_bigint::BigInt;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use frobtorus::curves::{CurveError, HyperellipticCurve};
use frobtorus::intpoly::{factor, factor_with, FactorOptions, IntPolynomial};
use frobtorus::simplicity::{
    charpoly_power, classify, frobenius_power, minpoly_power, ratio_torsion_orders,
    SimplicityVerdict, VerdictKind,
};
use frobtorus::survey::{
    self, strip_timing, verify_entry, CurveRecord, Entry, SummaryReport, SurveyConfig,
};
use frobtorus::zeta::{is_weil, WeilPolynomial};

type Outcome = Result<String, String>;

fn bin() -> &'static str {
    env!("CARGO_BIN_EXE_frobtorus")
}

fn scratch(name: &str) -> PathBuf {
    let dir = std::env::temp_dir().join(format!("frobtorus-acceptance-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let p = dir.join(name);
    let _ = std::fs::remove_file(&p);
    p
}

fn golden(name: &str) -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("tests/golden").join(name)
}

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

/// Every Weil polynomial produced along the way, for criterion 6.
#[derive(Default)]
struct Corpus {
    weil: Vec<WeilPolynomial>,
}

fn criterion_1(corpus: &mut Corpus) -> Outcome {
    let mut notes = Vec::new();
    for (g, p) in [(2usize, 3u64), (2, 5), (3, 3)] {
        let start = Instant::now();
        let out = Command::new(bin())
            .args(["find", "--p", &p.to_string(), "--genus", &g.to_string(), "--count", "10"])
            .output()
            .map_err(|e| e.to_string())?;
        let elapsed = start.elapsed();
        ensure(out.status.success(), || format!("find (g={g}, p={p}) exited {}", out.status))?;
        let value: serde_json::Value =
            serde_json::from_slice(&out.stdout).map_err(|e| e.to_string())?;
        let found: Vec<CurveRecord> =
            serde_json::from_value(value["found"].clone()).map_err(|e| e.to_string())?;
        let distinct: BTreeSet<&str> = found.iter().map(|r| r.curve.as_str()).collect();
        ensure(found.len() == 10 && distinct.len() == 10, || {
            format!("(g={g}, p={p}): {} curves, {} distinct", found.len(), distinct.len())
        })?;
        for r in &found {
            ensure(r.verdict.kind() == VerdictKind::AbsolutelySimple, || {
                format!("{} has verdict {:?}", r.curve, r.verdict.kind())
            })?;
            verify_entry(&Entry::Record(r.clone())).map_err(|e| format!("{}: {e}", r.curve))?;
            corpus.weil.push(r.weil.clone());
        }
        ensure(elapsed < Duration::from_secs(60), || {
            format!("(g={g}, p={p}) took {elapsed:?}")
        })?;
        notes.push(format!("(g={g},p={p}) {:.2}s", elapsed.as_secs_f64()));
    }
    Ok(format!("10 replayed AbsolutelySimple curves each: {}", notes.join(", ")))
}

fn read_stripped(path: &Path) -> Vec<String> {
    std::fs::read_to_string(path)
        .unwrap()
        .lines()
        .map(strip_timing)
        .collect()
}

fn criterion_2(corpus: &mut Corpus, records: &mut Vec<CurveRecord>) -> Outcome {
    let mut cfg = SurveyConfig::full(3, 2, 5);
    let first = scratch("p3g2d5-a.jsonl");
    cfg.out = Some(first.clone());
    let start = Instant::now();
    let outcome = survey::survey_run(&cfg).map_err(|e| e.to_string())?;
    let elapsed = start.elapsed();
    let summary = outcome.summary;
    ensure(elapsed < Duration::from_secs(10), || format!("survey took {elapsed:?}"))?;
    ensure(summary.enumerated == 243, || format!("{} equations", summary.enumerated))?;
    ensure(summary.valid + summary.singular_skipped == 243, || "totals do not add up".into())?;
    ensure(summary.absolutely_simple_fraction > 0.0, || "fraction is zero".into())?;

    let want: SummaryReport = serde_json::from_str(
        &std::fs::read_to_string(golden("survey_p3_g2_d5.summary.json")).unwrap(),
    )
    .map_err(|e| e.to_string())?;
    ensure(summary == want, || format!("summary differs from golden: {summary:?}"))?;

    let second = scratch("p3g2d5-b.jsonl");
    cfg.out = Some(second.clone());
    survey::survey_run(&cfg).map_err(|e| e.to_string())?;
    let a = read_stripped(&first);
    ensure(a == read_stripped(&second), || "two runs differ".into())?;
    let golden_lines: Vec<String> = std::fs::read_to_string(golden("survey_p3_g2_d5.jsonl"))
        .unwrap()
        .lines()
        .map(str::to_string)
        .collect();
    ensure(a == golden_lines, || "records differ from the golden JSONL".into())?;
    let reread = survey::report(&first).map_err(|e| e.to_string())?;
    ensure(reread == summary, || "report on the file disagrees with the run".into())?;

    for line in std::fs::read_to_string(&first).unwrap().lines().skip(1) {
        if let Entry::Record(r) = serde_json::from_str::<Entry>(line).unwrap() {
            corpus.weil.push(r.weil.clone());
            records.push(r);
        }
    }
    Ok(format!(
        "243 equations in {:.2}s, AbsolutelySimple {}/{} = {:.4}, matches golden",
        elapsed.as_secs_f64(),
        summary.totals["AbsolutelySimple"],
        summary.valid,
        summary.absolutely_simple_fraction
    ))
}

fn criterion_3(corpus: &mut Corpus) -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(20261019);
    let mut checked = 0usize;
    let mut values = 0usize;
    while checked < 500 {
        let p = [3u64, 5, 7][rng.gen_range(0..3)];
        let g = rng.gen_range(1..=2);
        let (h, f) = common::random_equation(&mut rng, p, g);
        let text = common::curve_text(p, &h, &f);
        let curve = match HyperellipticCurve::parse(&text) {
            Ok(c) => c,
            Err(CurveError::Singular { .. }) => continue,
            Err(e) => return Err(format!("{text}: {e}")),
        };
        let counts = curve.counts_up_to_genus().map_err(|e| e.to_string())?;
        for i in 1..=g {
            let naive = common::naive_count(p, &h, &f, i);
            ensure(counts.counts[i - 1] == naive, || {
                format!("{text}: N_{i} fast {} naive {naive}", counts.counts[i - 1])
            })?;
            values += 1;
        }
        corpus
            .weil
            .push(frobtorus::zeta::weil_from_counts(&counts).map_err(|e| e.to_string())?);
        checked += 1;
    }
    Ok(format!("{checked} curves, {values} counts agree with naive enumeration"))
}

fn weil(q: i64, g: usize, c: &[i64]) -> WeilPolynomial {
    WeilPolynomial::new(BigInt::from(q), g, c.iter().map(|&v| BigInt::from(v)).collect()).unwrap()
}

fn criterion_4() -> Outcome {
    let r = survey::analyze_one("5; h=; f=0,1,0,1").map_err(|e| e.to_string())?;
    ensure(r.counts.counts == [4], || format!("y²=x³+x: N_1 = {:?}", r.counts.counts))?;
    ensure(r.weil == weil(5, 1, &[5, -2, 1]), || format!("y²=x³+x: P = {}", r.weil))?;
    ensure(r.verdict.kind() == VerdictKind::AbsolutelySimple, || format!("{:?}", r.verdict))?;

    let r = survey::analyze_one("5; h=; f=1,0,0,1").map_err(|e| e.to_string())?;
    ensure(r.counts.counts == [6], || format!("y²=x³+1: N_1 = {:?}", r.counts.counts))?;
    ensure(r.weil == weil(5, 1, &[5, 0, 1]), || format!("y²=x³+1: P = {}", r.weil))?;
    ensure(r.verdict.kind() == VerdictKind::Inconclusive, || format!("{:?}", r.verdict))?;

    match classify(&weil(5, 2, &[25, 0, 2, 0, 1])) {
        SimplicityVerdict::NotAbsolutelySimple { witness_n: 2, .. } => {}
        other => return Err(format!("T⁴+2T²+25: {other:?}")),
    }
    let v = classify(&weil(3, 2, &[9, 0, 0, 0, 1]));
    ensure(v.kind() == VerdictKind::Inconclusive, || format!("T⁴+9: {v:?}"))?;
    Ok("all four anchors match exactly".into())
}

fn criterion_5(records: &[CurveRecord]) -> Outcome {
    let mut compared = 0;
    let mut not_squarefree = 0;
    let mut disagreements = Vec::new();
    let mut seen = BTreeSet::new();
    for r in records {
        let p = &r.weil;
        if !seen.insert(p.coeffs().to_vec()) {
            continue;
        }
        let poly = p.poly();
        if poly.squarefree_part().unwrap() != poly {
            // ratio_poly needs distinct roots
            not_squarefree += 1;
            continue;
        }
        let empty = ratio_torsion_orders(p).is_empty();
        let two_g = 2 * p.genus();
        let brute = (1..=60u64).all(|n| minpoly_power(p, n).degree() == Some(two_g));
        if empty != brute {
            disagreements.push(p.to_string());
        }
        compared += 1;
    }
    ensure(disagreements.is_empty(), || format!("disagreements: {disagreements:?}"))?;
    Ok(format!(
        "{compared} distinct squarefree P agree with the n ≤ 60 loop ({not_squarefree} non-squarefree P outside the precondition)"
    ))
}

fn criterion_6(corpus: &Corpus) -> Outcome {
    for p in &corpus.weil {
        let g = p.genus();
        let c = p.coeffs();
        ensure(c[0] == p.q().pow(g as u32), || format!("{p}: constant term"))?;
        for i in 0..=g {
            ensure(c[i] == p.q().pow((g - i) as u32) * &c[2 * g - i], || {
                format!("{p}: functional equation at {i}")
            })?;
        }
        let check = is_weil(p);
        ensure(check.ok, || format!("{p}: root modulus deviation {:e}", check.max_deviation))?;
    }
    let mut rng = ChaCha8Rng::seed_from_u64(6);
    for _ in 0..200 {
        let p = &corpus.weil[rng.gen_range(0..corpus.weil.len())];
        let m = rng.gen_range(1..=4u64);
        let n = rng.gen_range(1..=4u64);
        let lhs = charpoly_power(&frobenius_power(p, m), n);
        ensure(lhs == charpoly_power(p, m * n), || format!("{p}: m={m} n={n}"))?;
    }
    Ok(format!(
        "{} Weil polynomials pass exact and 1e-9 root checks; 200 multiplicativity triples hold",
        corpus.weil.len()
    ))
}

fn criterion_7() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    let mut factors_seen = 0;
    for _ in 0..1000 {
        let deg = rng.gen_range(1..=8);
        let mut c: Vec<i64> = (0..deg).map(|_| rng.gen_range(-50..=50)).collect();
        c.push(1);
        let f = IntPolynomial::from_i64(&c);
        let fac = factor(&f).map_err(|e| e.to_string())?;
        ensure(fac.product() == f, || format!("{f}: product mismatch"))?;
        for (h, _) in &fac.factors {
            let again = factor_with(h, FactorOptions { prime_skip: 1 }).map_err(|e| e.to_string())?;
            ensure(again.is_irreducible(), || format!("{h} (from {f}) splits again"))?;
            factors_seen += 1;
        }
    }
    Ok(format!("1000 polynomials, {factors_seen} irreducible factors reconfirmed"))
}

fn line_count(path: &Path) -> usize {
    std::fs::read_to_string(path).map_or(0, |t| t.matches('\n').count())
}

/// Starts a genus-3 survey and kills it once `after` lines are on disk.
/// Returns whether the process was still running when killed.
fn run_and_kill(out: &Path, limit: &str, after: usize) -> Result<bool, String> {
    let mut child = Command::new(bin())
        .args(["survey", "--p", "3", "--genus", "3", "--deg", "7", "--limit", limit])
        .arg("--out")
        .arg(out)
        .stdout(Stdio::null())
        .spawn()
        .map_err(|e| e.to_string())?;
    loop {
        if child.try_wait().map_err(|e| e.to_string())?.is_some() {
            return Ok(false);
        }
        if line_count(out) >= after {
            child.kill().map_err(|e| e.to_string())?;
            child.wait().map_err(|e| e.to_string())?;
            return Ok(true);
        }
        std::thread::sleep(Duration::from_millis(2));
    }
}

fn criterion_8() -> Outcome {
    let limit = "1500";
    let reference = scratch("g3-reference.jsonl");
    let status = Command::new(bin())
        .args(["survey", "--p", "3", "--genus", "3", "--deg", "7", "--limit", limit])
        .arg("--out")
        .arg(&reference)
        .stdout(Stdio::null())
        .status()
        .map_err(|e| e.to_string())?;
    ensure(status.success(), || "uninterrupted run failed".into())?;

    let resumed = scratch("g3-resumed.jsonl");
    let mut rng = ChaCha8Rng::seed_from_u64(8);
    let first = rng.gen_range(50..500);
    let second = rng.gen_range(first + 50..1200);
    let mut kills = 0;
    for at in [first, second] {
        if run_and_kill(&resumed, limit, at)? {
            kills += 1;
        }
    }
    ensure(kills > 0, || "the survey finished before it could be killed".into())?;
    let lines_at_kill = line_count(&resumed);
    let status = Command::new(bin())
        .args(["survey", "--p", "3", "--genus", "3", "--deg", "7", "--limit", limit])
        .arg("--out")
        .arg(&resumed)
        .stdout(Stdio::null())
        .status()
        .map_err(|e| e.to_string())?;
    ensure(status.success(), || "resumed run failed".into())?;
    let a = read_stripped(&reference);
    let b = read_stripped(&resumed);
    ensure(a == b, || format!("record sets differ ({} vs {} lines)", a.len(), b.len()))?;
    survey::report(&resumed).map_err(|e| e.to_string())?;
    Ok(format!(
        "{kills} kill(s) near lines {first} and {second} ({lines_at_kill} on disk), resumed file equals the uninterrupted run ({} lines)",
        a.len()
    ))
}

fn main() {
    let mut corpus = Corpus::default();
    let mut records = Vec::new();
    let results: Vec<(&str, Outcome)> = vec![
        ("1 existence", criterion_1(&mut corpus)),
        ("2 empirical fraction", criterion_2(&mut corpus, &mut records)),
        ("3 counting oracle", criterion_3(&mut corpus)),
        ("4 anchors", criterion_4()),
        ("5 ratio torsion vs brute force", criterion_5(&records)),
        ("6 structural invariants", criterion_6(&corpus)),
        ("7 factorization self-check", criterion_7()),
        ("8 persistence", criterion_8()),
    ];
    let mut failed = 0;
    for (name, outcome) in &results {
        match outcome {
            Ok(msg) => println!("criterion {name}: PASS ({msg})"),
            Err(msg) => {
                failed += 1;
                println!("criterion {name}: FAIL ({msg})");
            }
        }
    }
    if failed > 0 {
        println!("{failed} acceptance criteria failed");
        std::process::exit(1);
    }
    println!("all {} acceptance criteria passed", results.len());
}
