//! Command-line front end: build and save indexes, run query batches,
//! verify against the walking oracle and measure probes and space.

use crate::apps::{locus_id, occurrences};
use crate::error::Error;
use crate::probe;
use crate::suffix_tree::Locus;
use crate::wa_index::{BuildOptions, Mode, WaIndex};
use clap::{Parser, Subcommand};
use serde_json::{json, Map, Value};
use std::io::Write;
use std::path::{Path, PathBuf};

/// Exit code for a failed verification.
pub const EXIT_VERIFY: i32 = 1;
/// Exit code for I/O and parse errors.
pub const EXIT_IO: i32 = 2;

#[derive(Parser, Debug)]
#[command(name = "stlocus", version, about = "Constant-time substring locus queries over suffix trees")]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Subcommand, Debug)]
enum Cmd {
    /// Build an index of a text file and save it.
    Build {
        /// Text file, read as raw bytes.
        text: PathBuf,
        /// Output index file.
        #[arg(short = 'o', long = "output")]
        output: PathBuf,
        /// Storage mode.
        #[arg(long, default_value = "standard")]
        mode: Mode,
        /// Write word counts per component as JSON to this file.
        #[arg(long)]
        stats: Option<PathBuf>,
    },
    /// Answer a batch of `i j` pairs against a saved index.
    Query {
        /// Index file.
        index: PathBuf,
        /// File with one `i j` pair per line (1-based, inclusive).
        #[arg(long)]
        pairs: PathBuf,
        /// Append the sorted occurrence positions as a sixth column.
        #[arg(long)]
        report_occurrences: bool,
    },
    /// Check every query of a text (or its prefix) against the walking
    /// oracle and run the structural checks in both modes.
    Verify {
        /// Text file, read as raw bytes.
        text: PathBuf,
        /// Only the first `max_n` bytes are verified.
        #[arg(long, default_value_t = 512)]
        max_n: usize,
    },
    /// Probe-count histogram and word counts for a batch of queries.
    Bench {
        /// Index file.
        index: PathBuf,
        /// File with one `i j` pair per line.
        #[arg(long)]
        pairs: PathBuf,
    },
}

/// One line of a query batch.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct QueryLine {
    /// 1-based line number in the batch file.
    pub line: usize,
    /// Start position.
    pub i: usize,
    /// End position.
    pub j: usize,
}

/// Parses a batch of `i j` pairs. Blank lines and lines starting with
/// `#` are skipped. Errors carry the line number.
pub fn parse_pairs(src: &str) -> Result<Vec<QueryLine>, String> {
    let mut out = Vec::new();
    for (n, raw) in src.lines().enumerate() {
        let s = raw.trim();
        if s.is_empty() || s.starts_with('#') {
            continue;
        }
        let f: Vec<&str> = s.split_whitespace().collect();
        let num = |x: &str| x.parse::<usize>().map_err(|_| format!("line {}: '{x}' is not a position", n + 1));
        if f.len() != 2 {
            return Err(format!("line {}: expected two positions, found {}", n + 1, f.len()));
        }
        out.push(QueryLine { line: n + 1, i: num(f[0])?, j: num(f[1])? });
    }
    Ok(out)
}

/// Formats a locus as `explicit|implicit<TAB>id<TAB>depth`.
pub fn format_locus(idx: &WaIndex, l: &Locus) -> String {
    let kind = if l.is_explicit() { "explicit" } else { "implicit" };
    format!("{kind}\t{}\t{}", locus_id(l), idx.tree().locus_depth(l))
}

fn read_bytes(p: &Path) -> Result<Vec<u8>, String> {
    std::fs::read(p).map_err(|e| format!("{}: {e}", p.display()))
}

fn read_string(p: &Path) -> Result<String, String> {
    std::fs::read_to_string(p).map_err(|e| format!("{}: {e}", p.display()))
}

fn load(p: &Path) -> Result<WaIndex, String> {
    WaIndex::load(p).map_err(|e| format!("{}: {e}", p.display()))
}

fn stats_json(idx: &WaIndex) -> Map<String, Value> {
    let s = idx.stats();
    let mut m = Map::new();
    for (k, v) in &s.words {
        m.insert(k.clone(), json!(v));
    }
    m.insert("total_words".into(), json!(s.total_words));
    m.insert("n".into(), json!(s.n));
    m.insert("mode".into(), json!(s.mode.to_string()));
    m
}

fn cmd_build(text: &Path, output: &Path, mode: Mode, stats: Option<&Path>, out: &mut dyn Write) -> Result<i32, String> {
    let w = read_bytes(text)?;
    let idx = WaIndex::build(&w, mode).map_err(|e| e.to_string())?;
    idx.save(output).map_err(|e| format!("{}: {e}", output.display()))?;
    if let Some(p) = stats {
        let s = serde_json::to_string_pretty(&Value::Object(stats_json(&idx))).map_err(|e| e.to_string())?;
        std::fs::write(p, s).map_err(|e| format!("{}: {e}", p.display()))?;
    }
    writeln!(out, "built {} index of {} bytes, {} words", mode, w.len(), idx.stats().total_words).map_err(|e| e.to_string())?;
    Ok(0)
}

fn cmd_query(index: &Path, pairs: &Path, report: bool, out: &mut dyn Write, err: &mut dyn Write) -> Result<i32, String> {
    let idx = load(index)?;
    let batch = parse_pairs(&read_string(pairs)?)?;
    let mut ok = 0usize;
    let io = |e: std::io::Error| e.to_string();
    for q in &batch {
        match idx.substring_locus(q.i, q.j) {
            Ok(l) => {
                ok += 1;
                write!(out, "{}\t{}\t{}", q.i, q.j, format_locus(&idx, &l)).map_err(io)?;
                if report {
                    let occ: Vec<String> = occurrences(idx.tree(), &l).iter().map(|p| p.to_string()).collect();
                    write!(out, "\t{}", occ.join(",")).map_err(io)?;
                }
                writeln!(out).map_err(io)?;
            }
            Err(e) => {
                writeln!(out, "{}\t{}\terror\t{}", q.i, q.j, e).map_err(io)?;
                writeln!(err, "line {}: {e}", q.line).map_err(io)?;
            }
        }
    }
    Ok(if ok > 0 || batch.is_empty() { 0 } else { EXIT_VERIFY })
}

/// Outcome of [`verify_text`].
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct VerifyReport {
    /// Queries compared with the walking oracle.
    pub queries: u64,
    /// Query mismatches or errors.
    pub mismatches: Vec<String>,
    /// Structural check violations.
    pub violations: Vec<String>,
}

impl VerifyReport {
    /// True when nothing failed.
    pub fn passed(&self) -> bool {
        self.mismatches.is_empty() && self.violations.is_empty()
    }
}

/// Builds both modes with structural checks and compares every query
/// of `text` with the walking oracle.
pub fn verify_text(text: &[u8]) -> Result<VerifyReport, Error> {
    let mut rep = VerifyReport::default();
    let n = text.len();
    for mode in [Mode::Standard, Mode::Compact] {
        let (idx, checks) = WaIndex::build_with(text, &BuildOptions { mode, check: true, only: None })?;
        rep.violations.extend(checks.violations.iter().map(|v| format!("{mode}: {v}")));
        for i in 1..=n {
            for j in i..=n {
                rep.queries += 1;
                let want = idx.tree().naive_locus(0, i, j)?;
                match idx.substring_locus(i, j) {
                    Ok(got) if got == want => {}
                    Ok(got) => rep.mismatches.push(format!("{mode} ({i}, {j}): got {got:?}, expected {want:?}")),
                    Err(e) => rep.mismatches.push(format!("{mode} ({i}, {j}): {e}")),
                }
            }
        }
    }
    Ok(rep)
}

fn cmd_verify(text: &Path, max_n: usize, out: &mut dyn Write) -> Result<i32, String> {
    let mut w = read_bytes(text)?;
    w.truncate(max_n);
    if w.is_empty() {
        return Err(format!("{}: empty text", text.display()));
    }
    let rep = verify_text(&w).map_err(|e| e.to_string())?;
    let io = |e: std::io::Error| e.to_string();
    for m in rep.mismatches.iter().chain(&rep.violations).take(20) {
        writeln!(out, "FAIL {m}").map_err(io)?;
    }
    writeln!(
        out,
        "{}: n={} queries={} mismatches={} violations={}",
        if rep.passed() { "PASS" } else { "FAIL" },
        w.len(),
        rep.queries,
        rep.mismatches.len(),
        rep.violations.len()
    )
    .map_err(io)?;
    Ok(if rep.passed() { 0 } else { EXIT_VERIFY })
}

fn cmd_bench(index: &Path, pairs: &Path, out: &mut dyn Write, err: &mut dyn Write) -> Result<i32, String> {
    let idx = load(index)?;
    let batch = parse_pairs(&read_string(pairs)?)?;
    let mut hist: Vec<u64> = Vec::new();
    let mut failed = 0u64;
    for q in &batch {
        let (r, p) = probe::measure(|| idx.substring_locus(q.i, q.j));
        match r {
            Ok(_) => {
                if hist.len() <= p as usize {
                    hist.resize(p as usize + 1, 0);
                }
                hist[p as usize] += 1;
            }
            Err(e) => {
                failed += 1;
                writeln!(err, "line {}: {e}", q.line).map_err(|e| e.to_string())?;
            }
        }
    }
    let mut m = stats_json(&idx);
    m.insert("queries".into(), json!(batch.len() as u64 - failed));
    m.insert("max_probes".into(), json!(hist.len().saturating_sub(1)));
    m.insert("probe_histogram".into(), json!(hist));
    let s = serde_json::to_string_pretty(&Value::Object(m)).map_err(|e| e.to_string())?;
    writeln!(out, "{s}").map_err(|e| e.to_string())?;
    Ok(0)
}

/// Runs the command line `args` (including the program name), writing
/// results to `out` and diagnostics to `err`. Returns the exit code.
pub fn run_cli_with<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_IO } else { 0 };
            let _ = if code == 0 { write!(out, "{e}") } else { write!(err, "{e}") };
            return code;
        }
    };
    let r = match &cli.cmd {
        Cmd::Build { text, output, mode, stats } => cmd_build(text, output, *mode, stats.as_deref(), out),
        Cmd::Query { index, pairs, report_occurrences } => cmd_query(index, pairs, *report_occurrences, out, err),
        Cmd::Verify { text, max_n } => cmd_verify(text, *max_n, out),
        Cmd::Bench { index, pairs } => cmd_bench(index, pairs, out, err),
    };
    match r {
        Ok(c) => c,
        Err(m) => {
            let _ = writeln!(err, "error: {m}");
            EXIT_IO
        }
    }
}

/// Runs the command line `args` against the process's standard streams.
pub fn run_cli<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let (stdout, stderr) = (std::io::stdout(), std::io::stderr());
    let mut out = std::io::BufWriter::new(stdout.lock());
    let code = run_cli_with(args, &mut out, &mut stderr.lock());
    let _ = out.flush();
    code
}
