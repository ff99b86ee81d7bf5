//! Acceptance suite. Prints one PASS/FAIL line per criterion and exits
//! non-zero when any criterion fails.
//!
//! `STLOCUS_ACCEPT=1,5` restricts the run to the listed criteria and
//! `STLOCUS_ACCEPT_VERBOSE=1` prints the measurements behind each line.
//!
//! Each probe and space measurement runs in a child process whose address
//! space is capped at the memory available when the child starts. A
//! measurement that cannot complete under the cap is reported as
//! unmeasured and fails criteria 5 and 6.

mod common;

use common::{rotation_doc, Family, ALL};
use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};
use serde::{Deserialize, Serialize};
use std::collections::HashMap;
use std::process::Command;
use std::time::Instant;
use stlocus::apps::{substring_hash, SubstringHash};
use stlocus::bitvec::PackedRankSelect;
use stlocus::long_retrieval::{build_long_instance_checked, InvariantReport, LongOptions};
use stlocus::nested_pred::{naive_predecessor, PinsIndex, PisnsIndex, SetCollection};
use stlocus::probe;
use stlocus::space::SpaceUsage;
use stlocus::strcore::Interval;
use stlocus::suffix_tree::DocumentSet;
use stlocus::wa_index::{instance_keys, BuildOptions, InstanceBuilder, Mode, WaIndex, MIN_LONG_QUERY};

/// Largest number of probes allowed for one substring locus query.
const PROBE_BOUND_C: u64 = 96;
/// Standard mode: words <= C1 * n * log2(n).
const SPACE_C1_STANDARD: f64 = 700.0;
/// Compact mode: words <= C2 * n.
const SPACE_C2_COMPACT: f64 = 1200.0;
/// Compact mode, per instance of nominal length l:
/// words <= C3 * (n / 64 + n / l + s_l).
const SPACE_C3_PER_ELL: f64 = 400.0;

/// Text lengths with exhaustive oracle checks.
const EXHAUSTIVE_N: [usize; 14] = [1, 2, 3, 5, 6, 7, 12, 31, 64, 100, 128, 255, 384, 512];
/// Extra lengths with exhaustive mode cross-checks.
const MODE_ONLY_N: [usize; 2] = [1024, 2048];
/// Length of the sampled oracle run and its query count.
const SAMPLED_N: usize = 1 << 15;
const SAMPLED_QUERIES: usize = 100_000;
/// Lengths of the probe and space runs.
const SCALE_N: [usize; 6] = [1 << 10, 1 << 12, 1 << 14, 1 << 16, 1 << 18, 1 << 20];
/// Largest length at which standard mode is profiled.
const SCALE_STANDARD_MAX_N: usize = 1 << 16;
/// Random queries per instance in the probe runs, and how many of them
/// are also checked against the oracle.
const SCALE_QUERIES_PER_KEY: usize = 300;
const SCALE_CHECKED_PER_KEY: usize = 10;
const SCALE_SHORT_QUERIES: usize = 2_000;

fn verbose() -> bool {
    std::env::var("STLOCUS_ACCEPT_VERBOSE").is_ok_and(|v| v != "0")
}

macro_rules! note {
    ($($t:tt)*) => {
        if verbose() {
            println!("    {}", format!($($t)*));
        }
    };
}

struct Outcome {
    pass: bool,
    detail: String,
}

impl Outcome {
    fn new(pass: bool, detail: impl Into<String>) -> Outcome {
        Outcome { pass, detail: detail.into() }
    }
}

/// Results of the shared end-to-end corpus run.
#[derive(Default)]
struct CorpusRun {
    texts: usize,
    oracle_queries: u64,
    oracle_failures: Vec<String>,
    mode_queries: u64,
    mode_failures: Vec<String>,
    persisted: usize,
    persist_failures: Vec<String>,
    report: InvariantReport,
    sampled_queries: u64,
    seconds_exhaustive: f64,
    seconds_sampled: f64,
}

fn build_checked(text: &[u8], mode: Mode, run: &mut CorpusRun, tag: &str) -> Option<WaIndex> {
    match WaIndex::build_with(text, &BuildOptions { mode, check: true, only: None }) {
        Ok((idx, rep)) => {
            run.report.absorb(rep);
            Some(idx)
        }
        Err(e) => {
            run.oracle_failures.push(format!("{tag} {mode}: build failed: {e}"));
            None
        }
    }
}

fn persist_check(idx: &WaIndex, answers: &[stlocus::suffix_tree::Locus], tag: &str, run: &mut CorpusRun) {
    let n = idx.len();
    let bytes = match idx.to_bytes() {
        Ok(b) => b,
        Err(e) => return run.persist_failures.push(format!("{tag}: serialize: {e}")),
    };
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("index.stwa");
    if let Err(e) = std::fs::write(&path, &bytes) {
        return run.persist_failures.push(format!("{tag}: write: {e}"));
    }
    let back = match WaIndex::load(&path) {
        Ok(b) => b,
        Err(e) => return run.persist_failures.push(format!("{tag}: load: {e}")),
    };
    run.persisted += 1;
    if back.to_bytes().ok().as_deref() != Some(&bytes[..]) {
        run.persist_failures.push(format!("{tag}: bytes differ after reload"));
    }
    let mut q = 0;
    for i in 1..=n {
        for j in i..=n {
            if back.substring_locus(i, j).ok() != Some(answers[q]) {
                run.persist_failures.push(format!("{tag}: ({i}, {j}) differs after reload"));
                return;
            }
            q += 1;
        }
    }
}

fn corpus_run() -> CorpusRun {
    let mut run = CorpusRun::default();
    let t0 = Instant::now();
    for fam in ALL {
        for &n in EXHAUSTIVE_N.iter().chain(&MODE_ONLY_N) {
            let text = fam.text(n, 7);
            let tag = format!("{} n={n}", fam.name());
            run.texts += 1;
            let oracle = n <= 512;
            let mut answers: Vec<Vec<stlocus::suffix_tree::Locus>> = Vec::new();
            for mode in [Mode::Standard, Mode::Compact] {
                let Some(idx) = build_checked(&text, mode, &mut run, &tag) else { continue };
                let mut got = Vec::with_capacity(n * (n + 1) / 2);
                for i in 1..=n {
                    for j in i..=n {
                        let r = idx.substring_locus(i, j);
                        if oracle {
                            run.oracle_queries += 1;
                            let want = idx.tree().naive_locus(0, i, j).unwrap();
                            if r.as_ref().ok() != Some(&want) && run.oracle_failures.len() < 20 {
                                run.oracle_failures.push(format!("{tag} {mode} ({i}, {j}): {r:?} vs {want:?}"));
                            }
                        }
                        match r {
                            Ok(l) => got.push(l),
                            Err(e) => {
                                run.mode_failures.push(format!("{tag} {mode} ({i}, {j}): {e}"));
                                got.push(stlocus::suffix_tree::Locus::Explicit(u32::MAX));
                            }
                        }
                    }
                }
                if oracle {
                    persist_check(&idx, &got, &format!("{tag} {mode}"), &mut run);
                }
                answers.push(got);
            }
            if answers.len() == 2 {
                run.mode_queries += answers[0].len() as u64;
                if let Some(p) = answers[0].iter().zip(&answers[1]).position(|(a, b)| a != b) {
                    run.mode_failures.push(format!("{tag}: modes differ at query #{p}"));
                }
            }
        }
    }
    run.seconds_exhaustive = t0.elapsed().as_secs_f64();
    let t1 = Instant::now();
    let mut rng = StdRng::seed_from_u64(15);
    for fam in ALL {
        let text = fam.text(SAMPLED_N, 7);
        let tag = format!("{} n={SAMPLED_N}", fam.name());
        let Some(idx) = build_checked(&text, Mode::Compact, &mut run, &tag) else { continue };
        let n = text.len();
        let mut sampled = Vec::with_capacity(SAMPLED_QUERIES);
        for q in 0..SAMPLED_QUERIES {
            let i = rng.gen_range(1..=n);
            let max_l = if q % 2 == 0 { n - i + 1 } else { (n - i + 1).min(64) };
            let j = i + rng.gen_range(0..max_l);
            let r = idx.substring_locus(i, j);
            let want = idx.tree().naive_locus(0, i, j).unwrap();
            run.sampled_queries += 1;
            if r.as_ref().ok() != Some(&want) && run.oracle_failures.len() < 20 {
                run.oracle_failures.push(format!("{tag} compact ({i}, {j}): {r:?} vs {want:?}"));
            }
            sampled.push((i, j, want));
        }
        let bytes = idx.to_bytes().unwrap();
        match WaIndex::from_bytes(&bytes) {
            Ok(back) => {
                run.persisted += 1;
                if sampled.iter().any(|&(i, j, want)| back.substring_locus(i, j).ok() != Some(want)) {
                    run.persist_failures.push(format!("{tag}: sampled answers differ after reload"));
                }
            }
            Err(e) => run.persist_failures.push(format!("{tag}: {e}")),
        }
    }
    run.seconds_sampled = t1.elapsed().as_secs_f64();
    run
}

fn first(v: &[String]) -> String {
    v.first().cloned().unwrap_or_default()
}

fn criterion1(run: &CorpusRun) -> Outcome {
    note!("exhaustive part {:.1}s, sampled part {:.1}s", run.seconds_exhaustive, run.seconds_sampled);
    let pass = run.oracle_failures.is_empty();
    Outcome::new(
        pass,
        format!(
            "{} exhaustive + {} sampled queries over {} families, mismatches={} {}",
            run.oracle_queries,
            run.sampled_queries,
            ALL.len(),
            run.oracle_failures.len(),
            first(&run.oracle_failures)
        ),
    )
}

fn random_nested(rng: &mut StdRng, n: u64, k: usize) -> Vec<Vec<u64>> {
    let mut sets = Vec::with_capacity(k);
    let mut cur: Vec<u64> = Vec::new();
    let empties = rng.gen_range(0..3usize).min(k);
    let step = rng.gen_range(1..=(n as usize / k).max(2));
    for i in 0..k {
        if i >= empties {
            for _ in 0..rng.gen_range(0..step) {
                cur.push(rng.gen_range(1..=n));
            }
            cur.sort_unstable();
            cur.dedup();
        }
        sets.push(cur.clone());
    }
    sets
}

fn random_shrinking(rng: &mut StdRng, n: u64, k: usize) -> SetCollection {
    let mut lower: Vec<u64> = (0..k).map(|_| rng.gen_range(1..=n)).collect();
    lower.sort_unstable();
    let dens = rng.gen_range(0.001..0.3);
    let mut sets: Vec<Vec<u64>> = Vec::with_capacity(k);
    for &lo in &lower {
        let mut s: Vec<u64> = match sets.last() {
            Some(prev) => prev.iter().copied().filter(|&x| x >= lo).collect(),
            None => Vec::new(),
        };
        let extra = ((n - lo + 1) as f64 * dens * 0.1) as usize + 1;
        for _ in 0..extra {
            s.push(rng.gen_range(lo..=n));
        }
        s.sort_unstable();
        s.dedup();
        sets.push(s);
    }
    SetCollection::shrinking(n, sets, lower)
}

fn criterion2() -> Outcome {
    let mut rng = StdRng::seed_from_u64(2);
    let queries = 100_000;
    let mut failures: Vec<String> = Vec::new();
    let mut total = 0u64;
    for inst in 0..100 {
        let n = rng.gen_range(1..=1u64 << 14);
        let k = rng.gen_range(1..=64usize);
        let c = SetCollection::nested(n, random_nested(&mut rng, n, k));
        let built = [("baseline", PinsIndex::build(&c)), ("compact", PinsIndex::build_compact(&c, 2))];
        for (name, b) in built {
            let idx = match b {
                Ok(x) => x,
                Err(e) => {
                    failures.push(format!("nested #{inst} {name}: {e}"));
                    continue;
                }
            };
            let mut rq = StdRng::seed_from_u64(inst);
            for _ in 0..queries {
                let i = rq.gen_range(1..=k);
                let x = rq.gen_range(1..=n);
                total += 1;
                if idx.predecessor(i, x).ok() != Some(naive_predecessor(&c.sets[i - 1], x)) {
                    failures.push(format!("nested #{inst} {name}: set {i} x {x}"));
                    break;
                }
            }
        }
    }
    for inst in 0..100 {
        let n = rng.gen_range(1..=1u64 << 14);
        let k = rng.gen_range(1..=64usize);
        let c = random_shrinking(&mut rng, n, k);
        let total_elems: u64 = c.sets.iter().map(|s| s.len() as u64).sum();
        for (name, compact) in [("baseline", false), ("compact", true)] {
            let idx = match PisnsIndex::build(&c, compact, 1) {
                Ok(x) => x,
                Err(e) => {
                    failures.push(format!("shrinking #{inst} {name}: {e}"));
                    continue;
                }
            };
            if idx.stored_elements() != total_elems {
                failures.push(format!("shrinking #{inst} {name}: stored {} of {total_elems}", idx.stored_elements()));
            }
            let mut rq = StdRng::seed_from_u64(1000 + inst);
            for _ in 0..queries {
                let i = rq.gen_range(1..=k);
                let x = rq.gen_range(1..=n);
                total += 1;
                if idx.predecessor(i, x).ok() != Some(naive_predecessor(&c.sets[i - 1], x)) {
                    failures.push(format!("shrinking #{inst} {name}: set {i} x {x}"));
                    break;
                }
            }
        }
    }
    Outcome::new(
        failures.is_empty(),
        format!("400 structures, {total} queries, failures={} {}", failures.len(), first(&failures)),
    )
}

fn criterion3(run: &CorpusRun) -> Outcome {
    let r = &run.report;
    let cost_fail = r.costs.iter().filter(|c| !c.pass).count();
    note!(
        "checked={} paths={} chains={} cycles={} families={} level-cost rows={}",
        r.checked,
        r.paths,
        r.chains,
        r.cycles,
        r.families,
        r.costs.len()
    );
    Outcome::new(
        r.is_clean() && cost_fail == 0,
        format!(
            "{} facts over every criterion-1 build, violations={} (level bounds failing: {cost_fail}) {}",
            r.checked,
            r.violations.len(),
            first(&r.violations)
        ),
    )
}

fn criterion4() -> Outcome {
    let ell = 8;
    let docs: Vec<Vec<u8>> = (1..=ell).map(|i| rotation_doc(ell, i)).collect();
    let mut master = Vec::new();
    let mut ivs = Vec::new();
    for d in &docs {
        ivs.push(Interval::new(master.len() + 1, master.len() + d.len()));
        master.extend_from_slice(d);
    }
    let nominal = 4 * ell;
    let opts = LongOptions { compact: false, keep_text: true, truncate: true, check: true };
    match build_long_instance_checked(&master, DocumentSet::new(ivs, nominal), opts) {
        Ok((inst, rep)) => Outcome::new(
            rep.cycles >= 1 && rep.is_clean(),
            format!(
                "cycles={} chains={} paths={} families={} violations={}",
                rep.cycles,
                rep.chains,
                rep.paths,
                inst.families().len(),
                rep.violations.len()
            ),
        ),
        Err(e) => Outcome::new(false, format!("build failed: {e}")),
    }
}

/// Probe and space measurements of one text, one instance at a time.
#[derive(Serialize, Deserialize)]
struct Profile {
    max_probes: u64,
    max_short_probes: u64,
    queries: u64,
    mismatches: Vec<String>,
    total_words: u64,
    per_ell: Vec<(usize, u64, u64)>,
}

/// Words of one instance over n / 64 + n / l + s_l.
fn per_ell_ratio(n: usize, ell: usize, words: u64, s_ell: u64) -> f64 {
    words as f64 / (n as f64 / 64.0 + n as f64 / ell as f64 + s_ell as f64)
}

impl Profile {
    fn worst_per_ell(&self, n: usize) -> f64 {
        self.per_ell.iter().map(|&(ell, w, s)| per_ell_ratio(n, ell, w, s)).fold(0.0, f64::max)
    }
}

fn profile(text: &[u8], mode: Mode, seed: u64) -> Profile {
    let n = text.len();
    let mut rng = StdRng::seed_from_u64(seed);
    let mut idx = WaIndex::skeleton(text, mode).unwrap();
    let builder = InstanceBuilder::new(&idx, false).unwrap();
    let mut depths: Vec<u32> = (1..idx.tree().num_nodes() as u32).map(|v| idx.tree().string_depth(v)).collect();
    depths.sort_unstable();
    let mut p = Profile {
        max_probes: 0,
        max_short_probes: 0,
        queries: 0,
        mismatches: Vec::new(),
        total_words: idx.words(),
        per_ell: Vec::new(),
    };
    for _ in 0..SCALE_SHORT_QUERIES {
        let l = rng.gen_range(1..MIN_LONG_QUERY.min(n + 1));
        let i = rng.gen_range(1..=n - l + 1);
        let (r, c) = probe::measure(|| idx.substring_locus(i, i + l - 1));
        p.queries += 1;
        p.max_short_probes = p.max_short_probes.max(c);
        p.max_probes = p.max_probes.max(c);
        if r.is_err() {
            p.mismatches.push(format!("short ({i}, {})", i + l - 1));
        }
    }
    for (k, a) in instance_keys(n) {
        let (inst, _) = builder.build(&idx, text, k, a).unwrap();
        let w = inst.words();
        p.total_words += w;
        let ell = inst.ell();
        let lo = depths.partition_point(|&d| (d as usize) * 2 < ell);
        let hi = depths.partition_point(|&d| d as usize <= ell);
        p.per_ell.push((ell, w, (hi - lo) as u64));
        idx.set_instance(inst);
        let lmin = (a as usize - 2) << k;
        let lmax = (((a as usize - 1) << k) - 1).min(n);
        for q in 0..SCALE_QUERIES_PER_KEY {
            let l = rng.gen_range(lmin..=lmax);
            let i = rng.gen_range(1..=n - l + 1);
            let (r, c) = probe::measure(|| idx.substring_locus(i, i + l - 1));
            p.queries += 1;
            p.max_probes = p.max_probes.max(c);
            let bad = match &r {
                Err(_) => true,
                Ok(got) => q < SCALE_CHECKED_PER_KEY && idx.tree().naive_locus(0, i, i + l - 1).ok().as_ref() != Some(got),
            };
            if bad {
                p.mismatches.push(format!("({k}, {a}) query ({i}, {}): {r:?}", i + l - 1));
            }
        }
        idx.take_instance(k, a);
    }
    p
}

struct ScaleRow {
    family: String,
    mode: Mode,
    n: usize,
    profile: Result<Profile, String>,
}

fn scale_families() -> Vec<Family> {
    ALL.iter().copied().filter(|f| *f != Family::Random(1)).collect()
}

/// Child entry point: `STLOCUS_ACCEPT_ROW=family|n|mode` profiles one
/// text and prints the profile as JSON.
const ROW_VAR: &str = "STLOCUS_ACCEPT_ROW";

fn parse_mode(s: &str) -> Mode {
    match s {
        "standard" => Mode::Standard,
        _ => Mode::Compact,
    }
}

fn run_row(spec: &str) {
    let parts: Vec<&str> = spec.split('|').collect();
    let fam = scale_families().into_iter().find(|f| f.name() == parts[0]).expect("family");
    let n: usize = parts[1].parse().expect("length");
    let text = fam.text(n, 5);
    let p = profile(&text, parse_mode(parts[2]), n as u64);
    println!("{}", serde_json::to_string(&p).unwrap());
}

/// Bytes of memory available right now, from `/proc/meminfo`.
fn available_memory() -> Option<u64> {
    let info = std::fs::read_to_string("/proc/meminfo").ok()?;
    let line = info.lines().find(|l| l.starts_with("MemAvailable:"))?;
    let kb: u64 = line.split_whitespace().nth(1)?.parse().ok()?;
    Some(kb * 1024)
}

fn profile_in_child(fam: Family, n: usize, mode: Mode) -> Result<Profile, String> {
    let cap = available_memory().map(|b| b / 10 * 9);
    let exe = std::env::current_exe().map_err(|e| e.to_string())?;
    let mut cmd = match cap {
        Some(bytes) if Command::new("prlimit").arg("--version").output().is_ok() => {
            let mut c = Command::new("prlimit");
            c.arg(format!("--as={bytes}")).arg(&exe);
            c
        }
        _ => Command::new(&exe),
    };
    let out = cmd
        .env(ROW_VAR, format!("{}|{n}|{mode}", fam.name()))
        .env_remove("STLOCUS_ACCEPT")
        .env_remove("STLOCUS_ACCEPT_VERBOSE")
        .output()
        .map_err(|e| e.to_string())?;
    if !out.status.success() {
        let cap = cap.map_or("none".to_string(), |b| format!("{} MiB", b >> 20));
        return Err(format!("unmeasured ({}, memory cap {cap})", out.status));
    }
    serde_json::from_slice(&out.stdout).map_err(|e| e.to_string())
}

fn scale_run() -> Vec<ScaleRow> {
    let mut rows = Vec::new();
    for &n in &SCALE_N {
        for fam in scale_families() {
            for mode in [Mode::Standard, Mode::Compact] {
                if mode == Mode::Standard && n > SCALE_STANDARD_MAX_N {
                    continue;
                }
                let t = Instant::now();
                let profile = profile_in_child(fam, n, mode);
                match &profile {
                    Ok(profile) => note!(
                        "{:>10} {:>8} n=2^{:<2} max_probes={:>3} short={:>2} words/n={:>8.1} words/(n lg n)={:>7.2} per_l={:>7.1} {:.1}s",
                        fam.name(),
                        mode.to_string(),
                        n.trailing_zeros(),
                        profile.max_probes,
                        profile.max_short_probes,
                        profile.total_words as f64 / n as f64,
                        profile.total_words as f64 / (n as f64 * (n as f64).log2()),
                        profile.worst_per_ell(n),
                        t.elapsed().as_secs_f64()
                    ),
                    Err(e) => note!("{:>10} {:>8} n=2^{:<2} {e}", fam.name(), mode.to_string(), n.trailing_zeros()),
                }
                rows.push(ScaleRow { family: fam.name(), mode, n, profile });
            }
        }
    }
    rows
}

fn criterion5(rows: &[ScaleRow]) -> Outcome {
    let mut worst = 0;
    let mut failures = Vec::new();
    let mut per_n: Vec<(usize, u64)> = SCALE_N.iter().map(|&n| (n, 0)).collect();
    for r in rows {
        let p = match &r.profile {
            Ok(p) => p,
            Err(e) => {
                failures.push(format!("{} {} n={}: {e}", r.family, r.mode, r.n));
                continue;
            }
        };
        worst = worst.max(p.max_probes);
        if let Some(e) = per_n.iter_mut().find(|e| e.0 == r.n) {
            e.1 = e.1.max(p.max_probes);
        }
        if p.max_probes > PROBE_BOUND_C {
            failures.push(format!("{} {} n={}: {} probes", r.family, r.mode, r.n, p.max_probes));
        }
        for m in p.mismatches.iter().take(1) {
            failures.push(format!("{} {} n={}: wrong answer {m}", r.family, r.mode, r.n));
        }
    }
    let curve: Vec<String> = per_n.iter().map(|(n, m)| format!("2^{}:{m}", n.trailing_zeros())).collect();
    let queries: u64 = rows.iter().filter_map(|r| r.profile.as_ref().ok()).map(|p| p.queries).sum();
    Outcome::new(
        failures.is_empty(),
        format!("C={PROBE_BOUND_C}, max={worst}, {queries} queries, max per n [{}] {}", curve.join(" "), first(&failures)),
    )
}

fn criterion6(rows: &[ScaleRow]) -> Outcome {
    let mut failures = Vec::new();
    let (mut worst1, mut worst2, mut worst3) = (0f64, 0f64, 0f64);
    for r in rows {
        let p = match &r.profile {
            Ok(p) => p,
            Err(e) => {
                failures.push(format!("{} {} n={}: {e}", r.family, r.mode, r.n));
                continue;
            }
        };
        let n = r.n as f64;
        let w = p.total_words as f64;
        match r.mode {
            Mode::Standard => {
                let c = w / (n * n.log2());
                worst1 = worst1.max(c);
                if c > SPACE_C1_STANDARD {
                    failures.push(format!("{} standard n={}: {c:.1} n lg n words", r.family, r.n));
                }
            }
            Mode::Compact => {
                let c = w / n;
                worst2 = worst2.max(c);
                if c > SPACE_C2_COMPACT {
                    failures.push(format!("{} compact n={}: {c:.1} n words", r.family, r.n));
                }
                for &(ell, words, s_ell) in &p.per_ell {
                    let c3 = per_ell_ratio(r.n, ell, words, s_ell);
                    worst3 = worst3.max(c3);
                    if c3 > SPACE_C3_PER_ELL {
                        failures.push(format!("{} compact n={} l={ell}: {c3:.1} x (n/W + n/l + s_l)", r.family, r.n));
                    }
                }
            }
        }
    }
    Outcome::new(
        failures.is_empty(),
        format!(
            "C1={SPACE_C1_STANDARD} (max {worst1:.1}), C2={SPACE_C2_COMPACT} (max {worst2:.1}), C3={SPACE_C3_PER_ELL} (max {worst3:.1}), violations={} {}",
            failures.len(),
            first(&failures)
        ),
    )
}

fn criterion7() -> Outcome {
    let mut rng = StdRng::seed_from_u64(7);
    let mut failures: Vec<String> = Vec::new();
    let mut checks = 0u64;
    let mut check_one = |ones: &[u64], n: u64, t: u32, probes: Option<usize>, rng: &mut StdRng, failures: &mut Vec<String>| {
        let rs = match PackedRankSelect::build(ones, n, t) {
            Ok(x) => x,
            Err(e) => return failures.push(format!("N={n} t={t}: {e}")),
        };
        let m = ones.len() as u64;
        let rank_of = |i: u64| ones.partition_point(|&x| x <= i) as u64;
        let xs: Vec<u64> = match probes {
            None => (0..=n).collect(),
            Some(q) => (0..q).map(|_| rng.gen_range(0..=n)).collect(),
        };
        for x in xs {
            checks += 1;
            let r = rs.rank(x).unwrap();
            if r != rank_of(x) {
                return failures.push(format!("N={n} t={t}: rank({x})"));
            }
            if m > 0 && ones[0] <= x && rs.select(r).unwrap() > x {
                return failures.push(format!("N={n} t={t}: select(rank({x})) > {x}"));
            }
        }
        for k in 1..=m {
            checks += 1;
            let s = rs.select(k).unwrap();
            if s != ones[k as usize - 1] || rs.rank(s).unwrap() != k {
                return failures.push(format!("N={n} t={t}: select({k})"));
            }
        }
        if rs.rank(n).unwrap() != m || rs.ones() != m || rs.len() != n {
            failures.push(format!("N={n} t={t}: totals"));
        }
    };
    for n in 1..=512u64 {
        for t in 1..=3 {
            let dens = [0.0, 0.02, 0.3, 0.9, 1.0][(n as usize + t as usize) % 5];
            let ones: Vec<u64> = (1..=n).filter(|_| rng.gen_bool(dens)).collect();
            check_one(&ones, n, t, None, &mut rng, &mut failures);
        }
    }
    for t in 1..=3 {
        let mut ones: Vec<u64> = (0..1000).map(|_| rng.gen_range(1..=1_000_000)).collect();
        ones.sort_unstable();
        ones.dedup();
        check_one(&ones, 1_000_000, t, Some(100_000), &mut rng, &mut failures);
    }
    Outcome::new(failures.is_empty(), format!("{checks} checks, failures={} {}", failures.len(), first(&failures)))
}

fn criterion8() -> Outcome {
    let mut rng = StdRng::seed_from_u64(8);
    let mut failures = Vec::new();
    let mut substrings = 0u64;
    for s in 0..20 {
        let n = if s < 10 { 256 } else { rng.gen_range(1..=256) };
        let sigma = [1u8, 2, 3, 4, 26][s % 5];
        let text: Vec<u8> = (0..n).map(|_| b'a' + rng.gen_range(0..sigma)).collect();
        for mode in [Mode::Standard, Mode::Compact] {
            let idx = WaIndex::build(&text, mode).unwrap();
            let mut by_hash: HashMap<SubstringHash, &[u8]> = HashMap::new();
            let mut by_string: HashMap<&[u8], SubstringHash> = HashMap::new();
            let mut by_packed: HashMap<u64, &[u8]> = HashMap::new();
            for i in 1..=n {
                for j in i..=n {
                    substrings += 1;
                    let h = substring_hash(&idx, i, j).unwrap();
                    let sub = &text[i - 1..j];
                    let a = *by_hash.entry(h).or_insert(sub);
                    let b = *by_string.entry(sub).or_insert(h);
                    let c = *by_packed.entry(h.packed(n)).or_insert(sub);
                    if a != sub || b != h || c != sub {
                        failures.push(format!("string {s} {mode} ({i}, {j})"));
                    }
                }
            }
        }
    }
    Outcome::new(
        failures.is_empty(),
        format!("20 strings, {substrings} substrings, both modes, failures={} {}", failures.len(), first(&failures)),
    )
}

fn criterion9(run: &CorpusRun) -> Outcome {
    Outcome::new(
        run.mode_failures.is_empty(),
        format!("{} query pairs compared, n <= 2048, differences={} {}", run.mode_queries, run.mode_failures.len(), first(&run.mode_failures)),
    )
}

fn criterion10(run: &CorpusRun) -> Outcome {
    Outcome::new(
        run.persist_failures.is_empty(),
        format!("{} indexes reloaded, failures={} {}", run.persisted, run.persist_failures.len(), first(&run.persist_failures)),
    )
}

fn main() {
    if let Ok(spec) = std::env::var(ROW_VAR) {
        run_row(&spec);
        return;
    }
    let wanted: Option<Vec<u32>> =
        std::env::var("STLOCUS_ACCEPT").ok().map(|s| s.split(',').filter_map(|x| x.trim().parse().ok()).collect());
    let want = |c: u32| wanted.as_ref().is_none_or(|w| w.contains(&c));
    let names = [
        "oracle equivalence",
        "nested-set predecessor",
        "structural invariants",
        "cycle in the rotation family",
        "bounded probes",
        "space accounting",
        "rank/select",
        "hash iff equality",
        "mode equivalence",
        "persistence round trip",
    ];
    let scale = if want(5) || want(6) { Some(scale_run()) } else { None };
    let corpus = if [1, 3, 9, 10].iter().any(|&c| want(c)) { Some(corpus_run()) } else { None };
    let mut failed = 0;
    for c in 1..=10u32 {
        if !want(c) {
            continue;
        }
        let t = Instant::now();
        let o = match c {
            1 => criterion1(corpus.as_ref().unwrap()),
            2 => criterion2(),
            3 => criterion3(corpus.as_ref().unwrap()),
            4 => criterion4(),
            5 => criterion5(scale.as_ref().unwrap()),
            6 => criterion6(scale.as_ref().unwrap()),
            7 => criterion7(),
            8 => criterion8(),
            9 => criterion9(corpus.as_ref().unwrap()),
            _ => criterion10(corpus.as_ref().unwrap()),
        };
        if !o.pass {
            failed += 1;
        }
        note!("criterion {c} evaluated in {:.1}s", t.elapsed().as_secs_f64());
        println!("criterion {c:>2} {} {}: {}", if o.pass { "PASS" } else { "FAIL" }, names[c as usize - 1], o.detail);
    }
    if failed > 0 {
        println!("{failed} criteria failed");
        std::process::exit(1);
    }
}
