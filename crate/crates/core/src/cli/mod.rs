//! Command-line front end: classify, prune, search, verify, fingerprint and
//! report.
//!
//! Artifacts live under `--dir` (default `.`): `n{N}/classes.json`,
//! `n{N}/verdicts.json`, `n{N}/class{C}/{solutions.txt,report.json,groups.json}`
//! and the shared append-only `manifest.jsonl`. Checkpoints go to
//! `$APN_CHECKPOINT_DIR` if set, else `{dir}/checkpoints`.

mod manifest;

use std::fs;
use std::io::{self, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::sync::atomic::AtomicBool;
use std::sync::Arc;
use std::time::{Duration, SystemTime, UNIX_EPOCH};

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::{Deserialize, Serialize};

pub use manifest::{Artifacts, Manifest, ManifestEntry, Outcome, MANIFEST_SCHEMA};

use crate::classify::{
    blocks_to_matrix, enumerate_classes, enumerate_degenerate_classes, AutoTuple, ClassesFile,
};
use crate::dedup::{group, known_fixtures, GroupsFile};
use crate::error::{Error, Result};
use crate::gf2::{check_dimension, Gf2Matrix};
use crate::prune::{admissibility, render_table1, table1_rows, VerdictsFile};
use crate::search::{
    parallel_search, RunOptions, SearchConfig, SearchContext, SearchMode, SearchReport, StopReason,
};
use crate::vbf::{apn_violation, fingerprint, verify_le_automorphism, FiniteField, Lut};

pub const EXIT_OK: u8 = 0;
pub const EXIT_BUDGET: u8 = 2;
pub const EXIT_VERIFY: u8 = 3;
pub const EXIT_INPUT: u8 = 4;

pub const CHECKPOINT_ENV: &str = "APN_CHECKPOINT_DIR";
pub const REPORT_SCHEMA: u32 = 1;

/// Default wall-clock budget for exhaustive runs with n >= 7.
const LARGE_N_BUDGET: Duration = Duration::from_secs(24 * 3600);

#[derive(Debug, Parser)]
#[command(name = "apn-search", version, about = "Search for APN permutations with linear self-equivalences")]
pub struct Cli {
    /// Directory for artifacts and the run manifest.
    #[arg(long, global = true, default_value = ".")]
    pub dir: PathBuf,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Enumerate tuple classes and write classes.json.
    Classify {
        #[arg(long)]
        n: usize,
        /// Also list tuples whose matrices have different fixed-space dimensions.
        #[arg(long)]
        degenerate: bool,
    },
    /// Apply the pruning filters and write verdicts.json.
    Prune {
        #[arg(long)]
        n: usize,
        /// Print the comparison with the published verdicts (n = 6, 7, 8).
        #[arg(long)]
        table1: bool,
    },
    /// Search one or more classes.
    Search(SearchArgs),
    /// Check LUTs for bijectivity, APN-ness and a self-equivalence.
    Verify(VerifyArgs),
    /// Print fingerprints of LUTs, optionally writing groups.json.
    Fingerprint {
        /// File with one LUT per line.
        lut: PathBuf,
        /// Write a groups file here.
        #[arg(long)]
        groups: Option<PathBuf>,
    },
    /// Summarize manifest entries and group all solutions found for `n`.
    Report {
        #[arg(long)]
        n: usize,
    },
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum ModeArg {
    Exhaustive,
    Random,
}

#[derive(Debug, Args)]
pub struct SearchArgs {
    #[arg(long)]
    pub n: usize,
    /// Class id, comma-separated list, or `*` for all.
    #[arg(long)]
    pub class: String,
    #[arg(long, value_enum, default_value = "exhaustive")]
    pub mode: ModeArg,
    /// Wall-clock budget in seconds.
    #[arg(long)]
    pub budget: Option<f64>,
    /// Node budget.
    #[arg(long)]
    pub nodes: Option<u64>,
    /// Worker threads (0 = all cores).
    #[arg(long, default_value_t = 0)]
    pub jobs: usize,
    /// Canonical-check depth; -1 disables.
    #[arg(long, allow_hyphen_values = true)]
    pub threshold: Option<i32>,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    #[arg(long, default_value_t = 2)]
    pub split_depth: usize,
    /// Pre-fill the fixed space of A with x^3 (requires a 3-dimensional fixed space).
    #[arg(long)]
    pub seed_fixed_points: bool,
    /// Stop after this many solutions.
    #[arg(long)]
    pub max_solutions: Option<usize>,
    #[arg(long, default_value_t = 32)]
    pub commutant_budget: usize,
    /// Search pruned classes and re-run completed ones.
    #[arg(long)]
    pub force: bool,
    /// Do not print solutions to stdout.
    #[arg(long)]
    pub quiet: bool,
}

#[derive(Debug, Args)]
pub struct VerifyArgs {
    /// File with one LUT per line.
    pub lut: PathBuf,
    /// Matrix A: comma-separated hex rows, or `;`-separated blocks such as `I1;x^2+1`.
    #[arg(long, requires = "b")]
    pub a: Option<String>,
    #[arg(long, requires = "a")]
    pub b: Option<String>,
    /// Take A and B from an enumerated class (with --n).
    #[arg(long, requires = "n", conflicts_with_all = ["a", "power"])]
    pub class: Option<usize>,
    /// Take A = multiplication by a generator and B = multiplication by its
    /// d-th power in the default field (with --n).
    #[arg(long, requires = "n", conflicts_with = "a")]
    pub power: Option<u64>,
    #[arg(long)]
    pub n: Option<usize>,
}

/// Parses a matrix given as hex rows (`1,2,4`) or blocks (`I1;x^2+1`).
pub fn parse_matrix(s: &str) -> Result<Gf2Matrix> {
    let s = s.trim();
    if s.chars().all(|c| c.is_ascii_hexdigit() || c == ',' || c.is_whitespace()) {
        let rows: Vec<&str> = s.split(',').map(str::trim).collect();
        Gf2Matrix::from_hex_rows(&rows)
    } else {
        let blocks: Vec<&str> = s.split(';').map(str::trim).collect();
        blocks_to_matrix(&blocks)
    }
}

/// Reads a LUT file; blank lines and lines starting with `#` are skipped.
pub fn read_luts(path: &Path) -> Result<Vec<Lut>> {
    let text = fs::read_to_string(path)?;
    let luts: Vec<Lut> = text
        .lines()
        .enumerate()
        .filter(|(_, l)| !l.trim().is_empty() && !l.trim_start().starts_with('#'))
        .map(|(i, l)| Lut::parse_hex_line(l, i + 1))
        .collect::<Result<_>>()?;
    if luts.is_empty() {
        return Err(Error::InvalidInput(format!("{} contains no LUT", path.display())));
    }
    Ok(luts)
}

pub fn write_luts(path: &Path, luts: &[Lut]) -> Result<()> {
    let mut s = String::new();
    for l in luts {
        s.push_str(&l.to_hex_line());
        s.push('\n');
    }
    write_atomic(path, s.as_bytes())
}

fn write_atomic(path: &Path, bytes: &[u8]) -> Result<()> {
    if let Some(d) = path.parent() {
        fs::create_dir_all(d)?;
    }
    let tmp = path.with_extension("tmp");
    fs::write(&tmp, bytes)?;
    fs::rename(&tmp, path)?;
    Ok(())
}

fn write_json<T: Serialize>(path: &Path, value: &T) -> Result<()> {
    let mut s = serde_json::to_string_pretty(value)?;
    s.push('\n');
    write_atomic(path, s.as_bytes())
}

fn dim_dir(dir: &Path, n: usize) -> PathBuf {
    dir.join(format!("n{n}"))
}

fn class_dir(dir: &Path, n: usize, class_id: usize) -> PathBuf {
    dim_dir(dir, n).join(format!("class{class_id}"))
}

pub fn checkpoint_dir(dir: &Path) -> PathBuf {
    std::env::var_os(CHECKPOINT_ENV)
        .map(PathBuf::from)
        .unwrap_or_else(|| dir.join("checkpoints"))
}

/// Classes from `n{N}/classes.json` if present, else freshly enumerated.
pub fn load_classes(dir: &Path, n: usize) -> Result<Vec<AutoTuple>> {
    check_dimension(n)?;
    let path = dim_dir(dir, n).join("classes.json");
    match fs::read_to_string(&path) {
        Ok(text) => {
            let file: ClassesFile = serde_json::from_str(&text)?;
            if file.n != n {
                return Err(Error::InvalidInput(format!(
                    "{} is for n = {}",
                    path.display(),
                    file.n
                )));
            }
            file.tuples()
        }
        Err(e) if e.kind() == io::ErrorKind::NotFound => Ok(enumerate_classes(n)),
        Err(e) => Err(e.into()),
    }
}

fn select_classes(spec: &str, tuples: &[AutoTuple]) -> Result<Vec<AutoTuple>> {
    if spec.trim() == "*" {
        return Ok(tuples.to_vec());
    }
    spec.split(',')
        .map(|s| {
            let id: usize = s
                .trim()
                .parse()
                .map_err(|_| Error::InvalidInput(format!("bad class id {s:?}")))?;
            tuples
                .iter()
                .find(|t| t.class_id == id)
                .cloned()
                .ok_or_else(|| Error::InvalidInput(format!("no class {id} (have 1..={})", tuples.len())))
        })
        .collect()
}

/// Schema-versioned JSON view of a [`SearchReport`].
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ReportRecord {
    pub schema: u32,
    pub n: usize,
    pub class_id: usize,
    pub paper_class: Option<usize>,
    pub mode: SearchMode,
    pub solution_count: usize,
    pub nodes_visited: u64,
    pub max_depth_reached: usize,
    pub elapsed_secs: f64,
    pub exhausted: bool,
    pub stop: StopReason,
    pub verification_failures: u64,
}

impl ReportRecord {
    pub fn new(t: &AutoTuple, mode: SearchMode, r: &SearchReport) -> Self {
        ReportRecord {
            schema: REPORT_SCHEMA,
            n: t.n,
            class_id: t.class_id,
            paper_class: t.paper_class,
            mode,
            solution_count: r.solutions.len(),
            nodes_visited: r.nodes_visited,
            max_depth_reached: r.max_depth_reached,
            elapsed_secs: r.elapsed.as_secs_f64(),
            exhausted: r.exhausted,
            stop: r.stop,
            verification_failures: r.verification_failures,
        }
    }
}

/// Parses `args` and runs the command, mapping errors to exit code 4.
pub fn main_with_args<I, T>(args: I) -> ExitCode
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { EXIT_INPUT } else { EXIT_OK });
        }
    };
    match run(&cli) {
        Ok(code) => ExitCode::from(code),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(EXIT_INPUT)
        }
    }
}

pub fn run(cli: &Cli) -> Result<u8> {
    match &cli.command {
        Command::Classify { n, degenerate } => cmd_classify(&cli.dir, *n, *degenerate),
        Command::Prune { n, table1 } => cmd_prune(&cli.dir, *n, *table1),
        Command::Search(a) => cmd_search(&cli.dir, a),
        Command::Verify(a) => cmd_verify(a),
        Command::Fingerprint { lut, groups } => cmd_fingerprint(lut, groups.as_deref()),
        Command::Report { n } => cmd_report(&cli.dir, *n),
    }
}

fn cmd_classify(dir: &Path, n: usize, degenerate: bool) -> Result<u8> {
    check_dimension(n)?;
    let tuples = enumerate_classes(n);
    let path = dim_dir(dir, n).join("classes.json");
    write_json(&path, &ClassesFile::new(n, &tuples))?;
    let mut out = io::stdout().lock();
    for t in &tuples {
        let paper = t.paper_class.map_or(String::new(), |c| format!(" [published {c}]"));
        writeln!(out, "{:>3}  p={:<4} {}{}", t.class_id, t.p, t.describe(), paper)?;
    }
    if degenerate {
        let extra = enumerate_degenerate_classes(n);
        let dpath = dim_dir(dir, n).join("degenerate.json");
        write_json(&dpath, &ClassesFile::new(n, &extra))?;
        eprintln!("{} degenerate classes written to {}", extra.len(), dpath.display());
    }
    eprintln!("{} classes written to {}", tuples.len(), path.display());
    Ok(EXIT_OK)
}

fn cmd_prune(dir: &Path, n: usize, table1: bool) -> Result<u8> {
    let tuples = load_classes(dir, n)?;
    let file = VerdictsFile::new(n, &tuples);
    let path = dim_dir(dir, n).join("verdicts.json");
    write_json(&path, &file)?;
    let mut out = io::stdout().lock();
    if table1 {
        let rows = table1_rows(n, &tuples)?;
        write!(out, "{}", render_table1(n, &rows))?;
        if rows.iter().any(|r| !r.matches()) {
            return Ok(EXIT_VERIFY);
        }
    } else {
        for v in &file.verdicts {
            writeln!(out, "{:>3}  {}", v.class_id, serde_json::to_string(&v.verdict)?.trim_matches('"'))?;
        }
    }
    let pruned = file.verdicts.iter().filter(|v| v.witness.is_some()).count();
    eprintln!("{pruned} of {} classes pruned; verdicts written to {}", file.verdicts.len(), path.display());
    Ok(EXIT_OK)
}

fn unix_now() -> u64 {
    SystemTime::now()
        .duration_since(UNIX_EPOCH)
        .map_or(0, |d| d.as_secs())
}

fn search_config(a: &SearchArgs) -> Result<SearchConfig> {
    let time_budget = match a.budget {
        Some(s) if !(s.is_finite() && s >= 0.0) => {
            return Err(Error::InvalidInput(format!("bad budget {s}")))
        }
        Some(s) => Some(Duration::from_secs_f64(s)),
        None if a.mode == ModeArg::Random => {
            return Err(Error::InvalidInput("random mode needs --budget".into()))
        }
        None if a.n >= 7 => Some(LARGE_N_BUDGET),
        None => None,
    };
    let (mode, default_t) = match a.mode {
        ModeArg::Exhaustive => (SearchMode::Exhaustive, 2),
        ModeArg::Random => (SearchMode::Randomized, -1),
    };
    let cfg = SearchConfig {
        threshold_t: a.threshold.unwrap_or(default_t),
        mode,
        time_budget,
        node_budget: a.nodes,
        rng_seed: a.seed,
        commutant_budget: a.commutant_budget,
        seed_fixed_points: a.seed_fixed_points,
        split_depth: a.split_depth,
        max_solutions: a.max_solutions,
        ..SearchConfig::default()
    };
    cfg.validate()?;
    Ok(cfg)
}

fn cmd_search(dir: &Path, a: &SearchArgs) -> Result<u8> {
    let tuples = load_classes(dir, a.n)?;
    let selected = select_classes(&a.class, &tuples)?;
    let cfg = search_config(a)?;
    let manifest = Manifest::new(dir.join("manifest.jsonl"));
    let cancel = Arc::new(AtomicBool::new(false));
    for sig in [signal_hook::consts::SIGTERM, signal_hook::consts::SIGINT] {
        signal_hook::flag::register(sig, Arc::clone(&cancel))?;
    }
    let run_started = unix_now();
    let mut exit = EXIT_OK;
    let mut stdout = io::stdout().lock();
    for t in &selected {
        let entry = |outcome: Outcome, r: Option<&SearchReport>, artifacts: Artifacts| ManifestEntry {
            schema: MANIFEST_SCHEMA,
            run_started,
            n: t.n,
            class_id: t.class_id,
            paper_class: t.paper_class,
            mode: cfg.mode,
            config: cfg.clone(),
            outcome,
            nodes_visited: r.map_or(0, |r| r.nodes_visited),
            elapsed_secs: r.map_or(0.0, |r| r.elapsed.as_secs_f64()),
            artifacts,
        };
        let verdict = admissibility(t);
        if verdict.is_rejected() && !a.force {
            let outcome = Outcome::Pruned { kind: verdict.kind };
            eprintln!("class {}: {}", t.class_id, outcome.label());
            manifest.append(&entry(outcome, None, Artifacts::default()))?;
            continue;
        }
        if !a.force {
            if let Some(done) = manifest.completed(t.n, t.class_id, cfg.mode)? {
                eprintln!("class {}: already {} (use --force to re-run)", t.class_id, done.outcome.label());
                continue;
            }
        }
        let ckpt = (cfg.mode == SearchMode::Exhaustive)
            .then(|| checkpoint_dir(dir).join(format!("n{}-class{}.ckpt", t.n, t.class_id)));
        if let (true, Some(p)) = (a.force, &ckpt) {
            if p.exists() {
                fs::remove_file(p)?;
            }
        }
        if let Some(p) = ckpt.as_ref().and_then(|p| p.parent()) {
            fs::create_dir_all(p)?;
        }
        let ctx = SearchContext::new(t, &cfg)?;
        let opts = RunOptions {
            threads: a.jobs,
            checkpoint: ckpt.clone(),
            cancel: Some(&cancel),
        };
        eprintln!("class {}: searching {}", t.class_id, t.describe());
        let report = parallel_search(&ctx, &cfg, &opts)?;
        if !a.quiet {
            for s in &report.solutions {
                writeln!(stdout, "{}", s.to_hex_line())?;
            }
            stdout.flush()?;
        }
        let cdir = class_dir(dir, t.n, t.class_id);
        let artifacts = Artifacts {
            solutions: Some(cdir.join("solutions.txt")),
            report: Some(cdir.join("report.json")),
            groups: Some(cdir.join("groups.json")),
            checkpoint: ckpt.clone(),
        };
        write_luts(artifacts.solutions.as_ref().unwrap(), &report.solutions)?;
        write_json(artifacts.report.as_ref().unwrap(), &ReportRecord::new(t, cfg.mode, &report))?;
        let groups = group(&report.solutions, known_fixtures(t.n))?;
        write_json(artifacts.groups.as_ref().unwrap(), &GroupsFile::new(t.n, &groups))?;
        let count = report.solutions.len();
        let outcome = if report.exhausted {
            Outcome::Exhausted { count }
        } else if ckpt.is_some() {
            Outcome::RunningCheckpointed { count }
        } else {
            Outcome::BudgetExpired { count }
        };
        eprintln!(
            "class {}: {} after {} nodes in {:.1}s",
            t.class_id,
            outcome.label(),
            report.nodes_visited,
            report.elapsed.as_secs_f64()
        );
        for g in &groups {
            eprintln!(
                "  {} member(s), fingerprint {}: {}",
                g.members.len(),
                &g.fingerprint.digest()[..16],
                g.known_match.as_deref().unwrap_or("inequivalent to all known")
            );
        }
        if !report.exhausted {
            exit = exit.max(EXIT_BUDGET);
        }
        if report.verification_failures > 0 {
            exit = EXIT_VERIFY;
        }
        manifest.append(&entry(outcome, Some(&report), artifacts))?;
        if cancel.load(std::sync::atomic::Ordering::Relaxed) {
            eprintln!("interrupted; progress is checkpointed");
            break;
        }
    }
    Ok(exit)
}

fn verify_matrices(a: &VerifyArgs) -> Result<Option<(Gf2Matrix, Gf2Matrix)>> {
    if let (Some(sa), Some(sb)) = (&a.a, &a.b) {
        return Ok(Some((parse_matrix(sa)?, parse_matrix(sb)?)));
    }
    let n = match a.n {
        Some(n) => n,
        None => return Ok(None),
    };
    if let Some(c) = a.class {
        let t = select_classes(&c.to_string(), &enumerate_classes(n))?.remove(0);
        return Ok(Some((t.a, t.b)));
    }
    if let Some(d) = a.power {
        let f = FiniteField::with_default_modulus(n)?;
        let g = f.generator();
        return Ok(Some((f.mult_matrix(g), f.mult_matrix(f.pow(g, d)))));
    }
    Ok(None)
}

#[derive(Serialize)]
struct VerifyLine {
    line: usize,
    permutation: bool,
    apn: bool,
    /// `(alpha, beta, count)` of a DDT entry above 2.
    apn_witness: Option<(u16, u16, u32)>,
    self_equivalence: Option<bool>,
    fingerprint: String,
    known_match: Option<String>,
}

fn known_label(lut: &Lut, fp: &crate::vbf::CczFingerprint) -> Option<String> {
    let labels: Vec<&str> = known_fixtures(lut.n())
        .iter()
        .filter(|k| &k.fingerprint == fp)
        .map(|k| k.label.as_str())
        .collect();
    (!labels.is_empty()).then(|| labels.join(" / "))
}

fn cmd_verify(a: &VerifyArgs) -> Result<u8> {
    let luts = read_luts(&a.lut)?;
    let mats = verify_matrices(a)?;
    let mut out = io::stdout().lock();
    let mut ok = true;
    for (i, lut) in luts.iter().enumerate() {
        let witness = apn_violation(lut);
        let se = match &mats {
            Some((ma, mb)) => Some(verify_le_automorphism(lut, ma, mb)?),
            None => None,
        };
        let fp = fingerprint(lut);
        let line = VerifyLine {
            line: i + 1,
            permutation: lut.is_permutation(),
            apn: witness.is_none(),
            apn_witness: witness,
            self_equivalence: se,
            fingerprint: fp.digest(),
            known_match: known_label(lut, &fp),
        };
        ok &= line.permutation && line.apn && se != Some(false);
        writeln!(out, "{}", serde_json::to_string(&line)?)?;
    }
    Ok(if ok { EXIT_OK } else { EXIT_VERIFY })
}

fn cmd_fingerprint(path: &Path, groups_out: Option<&Path>) -> Result<u8> {
    let luts = read_luts(path)?;
    let mut out = io::stdout().lock();
    for (i, lut) in luts.iter().enumerate() {
        let fp = fingerprint(lut);
        let v = serde_json::json!({
            "line": i + 1,
            "digest": fp.digest(),
            "known_match": known_label(lut, &fp),
            "fingerprint": fp,
        });
        writeln!(out, "{v}")?;
    }
    if let Some(g) = groups_out {
        let n = luts[0].n();
        let groups = group(&luts, known_fixtures(n))?;
        write_json(g, &GroupsFile::new(n, &groups))?;
    }
    Ok(EXIT_OK)
}

fn cmd_report(dir: &Path, n: usize) -> Result<u8> {
    check_dimension(n)?;
    let manifest = Manifest::new(dir.join("manifest.jsonl"));
    let latest = manifest.latest(n)?;
    let mut out = io::stdout().lock();
    writeln!(out, "n = {n}: {} classes in the manifest", latest.len())?;
    let mut all = Vec::new();
    for e in &latest {
        writeln!(
            out,
            "{:>3}  {:<40} {:>14} nodes {:>10.1}s",
            e.class_id,
            e.outcome.label(),
            e.nodes_visited,
            e.elapsed_secs
        )?;
        if let Some(p) = &e.artifacts.solutions {
            if p.exists() && fs::metadata(p)?.len() > 0 {
                all.extend(read_luts(p)?);
            }
        }
    }
    let groups = group(&all, known_fixtures(n))?;
    let path = dim_dir(dir, n).join("groups.json");
    write_json(&path, &GroupsFile::new(n, &groups))?;
    writeln!(out, "{} solutions in {} fingerprint group(s)", all.len(), groups.len())?;
    for g in &groups {
        writeln!(
            out,
            "  {:>5} member(s)  {}  {}",
            g.members.len(),
            &g.fingerprint.digest()[..16],
            g.known_match.as_deref().unwrap_or("inequivalent-to-all-known")
        )?;
    }
    let incomplete = latest.iter().any(|e| !e.outcome.is_final());
    Ok(if incomplete { EXIT_BUDGET } else { EXIT_OK })
}
