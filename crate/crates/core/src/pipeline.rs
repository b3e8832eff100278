//! Phase orchestration, artifact files, sharding and verification.
//!
//! Artifacts for length `n` live in one output directory:
//!
//! - `L_even_<n>.txt`, `L_odd_<n>.txt`: surviving half-sequences, `z` at
//!   suppressed positions
//! - `L_A_<n>.txt` (and `L_A_<n>.shard<k>.txt` per shard): stage-1 output
//! - `pairs_<n>.txt`: stage-2 pairs, `<A> <B>` per line
//! - `omega_all_<n>.txt`, `omega_inequiv_<n>.txt`, `omega_seqs_<n>.txt`
//! - `counts.tsv`: one row per length
//! - `manifest_<n>.json`: parameters, timings and counters of a pipeline run

use std::collections::BTreeMap;
use std::fmt::{self, Display};
use std::fs;
use std::io::{BufRead, BufReader, BufWriter, Write};
use std::path::{Path, PathBuf};
use std::str::FromStr;
use std::time::Instant;

use rayon::prelude::*;
use serde::Serialize;

use crate::classify::{classify_all, counts, ClassificationResult};
use crate::error::{Error, Result};
use crate::join::{stage1_on, JoinOptions, JoinStats, Stage1Input};
use crate::preprocess::{enumerate_half, support_len, HalfSequence, HalfStats, Parity};
use crate::reference;
use crate::search::enumerate_partners;
use crate::seq::{PairRecord, Sequence};
use crate::spectral::FilterSchedule;

#[derive(Clone, Debug, Serialize)]
pub struct RunConfig {
    pub n: usize,
    pub shards: usize,
    pub shard_index: Option<usize>,
    pub out_dir: PathBuf,
    pub schedule: FilterSchedule,
    pub low_memory: bool,
}

impl RunConfig {
    pub fn new(n: usize, out_dir: impl Into<PathBuf>) -> Self {
        RunConfig {
            n,
            shards: 1,
            shard_index: None,
            out_dir: out_dir.into(),
            schedule: FilterSchedule::default(),
            low_memory: false,
        }
    }

    pub fn validate(&self) -> Result<()> {
        if self.n == 0 {
            return Err(Error::domain("length must be at least 1"));
        }
        if self.shards == 0 {
            return Err(Error::domain("shard count must be at least 1"));
        }
        if let Some(k) = self.shard_index {
            if k >= self.shards {
                return Err(Error::domain(format!(
                    "shard index {k} out of range for {} shards",
                    self.shards
                )));
            }
        }
        self.schedule.validate()
    }

    fn join_options(&self) -> JoinOptions {
        JoinOptions {
            schedule: self.schedule,
            low_memory: self.low_memory,
        }
    }

    fn path(&self, name: String) -> PathBuf {
        self.out_dir.join(name)
    }

    pub fn l_even_path(&self) -> PathBuf {
        self.path(format!("L_even_{}.txt", self.n))
    }

    pub fn l_odd_path(&self) -> PathBuf {
        self.path(format!("L_odd_{}.txt", self.n))
    }

    pub fn l_a_path(&self) -> PathBuf {
        self.path(format!("L_A_{}.txt", self.n))
    }

    pub fn shard_path(&self, k: usize) -> PathBuf {
        self.path(format!("L_A_{}.shard{k}.txt", self.n))
    }

    pub fn pairs_path(&self) -> PathBuf {
        self.path(format!("pairs_{}.txt", self.n))
    }

    pub fn omega_path(&self, which: &str) -> PathBuf {
        self.path(format!("omega_{which}_{}.txt", self.n))
    }

    pub fn counts_path(&self) -> PathBuf {
        self.out_dir.join("counts.tsv")
    }

    pub fn manifest_path(&self) -> PathBuf {
        self.path(format!("manifest_{}.json", self.n))
    }
}

/// One row of `counts.tsv`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct CountsRow {
    pub n: usize,
    pub l_even: u64,
    /// `None` when the odd half has no entries (n = 1).
    pub l_odd: Option<u64>,
    pub l_a: u64,
    pub seqs: u64,
    pub all: u64,
    pub inequiv: u64,
}

pub const COUNTS_HEADER: &str = "n\tL_even\tL_odd\tL_A\tseqs\tall\tinequiv";

impl Display for CountsRow {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let odd = self
            .l_odd
            .map_or_else(|| "-".to_string(), |v| v.to_string());
        write!(
            f,
            "{}\t{}\t{}\t{}\t{}\t{}\t{}",
            self.n, self.l_even, odd, self.l_a, self.seqs, self.all, self.inequiv
        )
    }
}

impl FromStr for CountsRow {
    type Err = Error;

    fn from_str(line: &str) -> Result<Self> {
        let bad = || Error::Parse(format!("malformed counts row {line:?}"));
        let fields: Vec<&str> = line.split('\t').collect();
        if fields.len() != 7 {
            return Err(bad());
        }
        let num = |s: &str| s.trim().parse::<u64>().map_err(|_| bad());
        Ok(CountsRow {
            n: num(fields[0])? as usize,
            l_even: num(fields[1])?,
            l_odd: match fields[2].trim() {
                "-" => None,
                s => Some(num(s)?),
            },
            l_a: num(fields[3])?,
            seqs: num(fields[4])?,
            all: num(fields[5])?,
            inequiv: num(fields[6])?,
        })
    }
}

fn write_lines<T: Display>(path: &Path, items: impl IntoIterator<Item = T>) -> Result<()> {
    if let Some(dir) = path.parent() {
        fs::create_dir_all(dir).map_err(|e| Error::io(dir, e))?;
    }
    let file = fs::File::create(path).map_err(|e| Error::io(path, e))?;
    let mut w = BufWriter::new(file);
    for item in items {
        writeln!(w, "{item}").map_err(|e| Error::io(path, e))?;
    }
    w.flush().map_err(|e| Error::io(path, e))
}

fn read_lines<T: FromStr<Err = Error>>(path: &Path) -> Result<Vec<T>> {
    let file = fs::File::open(path).map_err(|e| Error::io(path, e))?;
    let mut out = Vec::new();
    for (i, line) in BufReader::new(file).lines().enumerate() {
        let line = line.map_err(|e| Error::io(path, e))?;
        let line = line.trim_end();
        if line.is_empty() {
            continue;
        }
        out.push(
            line.parse()
                .map_err(|e| Error::Parse(format!("{}:{}: {e}", path.display(), i + 1)))?,
        );
    }
    Ok(out)
}

/// Outputs of the preprocessing phase.
#[derive(Clone, Debug)]
pub struct HalfLists {
    pub even: Vec<HalfSequence>,
    pub odd: Vec<HalfSequence>,
    pub even_stats: HalfStats,
    pub odd_stats: HalfStats,
}

pub fn preprocess_lists(n: usize, schedule: &FilterSchedule) -> Result<HalfLists> {
    let (even, even_stats) = enumerate_half(n, Parity::Even, schedule)?;
    let (odd, odd_stats) = enumerate_half(n, Parity::Odd, schedule)?;
    Ok(HalfLists {
        even,
        odd,
        even_stats,
        odd_stats,
    })
}

/// Stage 1 split over `shards` contiguous pieces of the sorted odd list.
pub fn join_sharded(
    input: &Stage1Input,
    shards: usize,
    options: &JoinOptions,
) -> Result<Vec<(Vec<Sequence>, JoinStats)>> {
    (0..shards)
        .into_par_iter()
        .map(|k| stage1_on(input, input.odd_shard(shards, k), options))
        .collect()
}

/// Concatenates, sorts and deduplicates shard outputs.
pub fn merge_sequences(parts: impl IntoIterator<Item = Vec<Sequence>>) -> Vec<Sequence> {
    let mut all: Vec<Sequence> = parts.into_iter().flatten().collect();
    all.sort();
    all.dedup();
    all
}

/// All stage-2 pairs for the given first sequences, sorted.
pub fn find_pairs(l_a: &[Sequence]) -> (Vec<PairRecord>, SearchTotals) {
    let per: Vec<(Vec<PairRecord>, crate::search::PartnerStats)> = l_a
        .par_iter()
        .map(|a| {
            let (partners, stats) = enumerate_partners(a);
            let pairs = partners
                .into_iter()
                .map(|b| PairRecord { a: a.clone(), b })
                .collect();
            (pairs, stats)
        })
        .collect();
    let mut totals = SearchTotals::default();
    let mut pairs = Vec::new();
    for (p, s) in per {
        totals.instances += 1;
        totals.decisions += s.solver.decisions;
        totals.conflicts += s.solver.programmatic_conflicts + s.solver.clause_conflicts;
        totals.learned += s.solver.learned;
        pairs.extend(p);
    }
    pairs.sort();
    totals.pairs = pairs.len() as u64;
    (pairs, totals)
}

#[derive(Clone, Copy, Debug, Default, Serialize, PartialEq, Eq)]
pub struct SearchTotals {
    pub instances: u64,
    pub decisions: u64,
    pub conflicts: u64,
    pub learned: u64,
    pub pairs: u64,
}

/// Everything one in-memory search produces.
#[derive(Debug)]
pub struct SearchOutcome {
    pub n: usize,
    pub lists: HalfLists,
    pub l_a: Vec<Sequence>,
    pub join_stats: JoinStats,
    pub pairs: Vec<PairRecord>,
    pub search_totals: SearchTotals,
    pub classes: ClassificationResult,
}

impl SearchOutcome {
    pub fn counts_row(&self) -> CountsRow {
        let c = counts(self.n, &self.classes);
        CountsRow {
            n: self.n,
            l_even: self.lists.even.len() as u64,
            l_odd: odd_count(self.n, self.lists.odd.len()),
            l_a: self.l_a.len() as u64,
            seqs: c.seqs,
            all: c.all,
            inequiv: c.inequiv,
        }
    }
}

fn odd_count(n: usize, len: usize) -> Option<u64> {
    (support_len(n, Parity::Odd) > 0).then_some(len as u64)
}

/// Runs every phase in memory without touching the filesystem.
pub fn search(
    n: usize,
    schedule: &FilterSchedule,
    shards: usize,
    low_memory: bool,
) -> Result<SearchOutcome> {
    let mut cfg = RunConfig::new(n, ".");
    cfg.schedule = *schedule;
    cfg.shards = shards;
    cfg.low_memory = low_memory;
    cfg.validate()?;
    let options = cfg.join_options();

    let lists = preprocess_lists(n, schedule)?;
    let input = Stage1Input::new(n, &lists.odd, &lists.even, &options)?;
    let mut join_stats = JoinStats::default();
    let mut parts = Vec::new();
    for (part, stats) in join_sharded(&input, shards, &options)? {
        join_stats.merge(&stats);
        parts.push(part);
    }
    let l_a = merge_sequences(parts);
    join_stats.emitted = l_a.len() as u64;
    drop(input);
    let (pairs, search_totals) = find_pairs(&l_a);
    let classes = classify_all(&pairs)?;
    Ok(SearchOutcome {
        n,
        lists,
        l_a,
        join_stats,
        pairs,
        search_totals,
        classes,
    })
}

/// `preprocess` subcommand.
pub fn run_preprocess(cfg: &RunConfig) -> Result<HalfLists> {
    cfg.validate()?;
    let lists = preprocess_lists(cfg.n, &cfg.schedule)?;
    write_lines(&cfg.l_even_path(), &lists.even)?;
    write_lines(&cfg.l_odd_path(), &lists.odd)?;
    Ok(lists)
}

fn load_stage1_input(cfg: &RunConfig) -> Result<Stage1Input> {
    let even: Vec<HalfSequence> = read_lines(&cfg.l_even_path())?;
    let odd: Vec<HalfSequence> = read_lines(&cfg.l_odd_path())?;
    Stage1Input::new(cfg.n, &odd, &even, &cfg.join_options())
}

/// `join` subcommand. With `shard_index` set only that shard's file is
/// written; otherwise every shard is computed, written and merged.
pub fn run_join(cfg: &RunConfig) -> Result<(Vec<Sequence>, JoinStats)> {
    cfg.validate()?;
    let input = load_stage1_input(cfg)?;
    let options = cfg.join_options();
    if let Some(k) = cfg.shard_index {
        let (found, stats) = stage1_on(&input, input.odd_shard(cfg.shards, k), &options)?;
        write_lines(&cfg.shard_path(k), &found)?;
        return Ok((found, stats));
    }
    let mut total = JoinStats::default();
    if cfg.shards == 1 {
        let (found, stats) = stage1_on(&input, &input.odd, &options)?;
        write_lines(&cfg.l_a_path(), &found)?;
        return Ok((found, stats));
    }
    for (k, (found, stats)) in join_sharded(&input, cfg.shards, &options)?
        .into_iter()
        .enumerate()
    {
        write_lines(&cfg.shard_path(k), &found)?;
        total.merge(&stats);
    }
    let merged = merge_shards(cfg)?;
    total.emitted = merged.len() as u64;
    Ok((merged, total))
}

/// Merges `L_A_<n>.shard<k>.txt` for every k into `L_A_<n>.txt`.
pub fn merge_shards(cfg: &RunConfig) -> Result<Vec<Sequence>> {
    let missing: Vec<usize> = (0..cfg.shards)
        .filter(|&k| !cfg.shard_path(k).is_file())
        .collect();
    if !missing.is_empty() {
        return Err(Error::MissingShards {
            missing,
            shards: cfg.shards,
        });
    }
    let parts = (0..cfg.shards)
        .map(|k| read_lines::<Sequence>(&cfg.shard_path(k)))
        .collect::<Result<Vec<_>>>()?;
    let merged = merge_sequences(parts);
    write_lines(&cfg.l_a_path(), &merged)?;
    Ok(merged)
}

/// `pairs` subcommand.
pub fn run_pairs(cfg: &RunConfig) -> Result<(Vec<PairRecord>, SearchTotals)> {
    cfg.validate()?;
    let l_a: Vec<Sequence> = read_lines(&cfg.l_a_path())?;
    if let Some(a) = l_a.iter().find(|a| a.len() != cfg.n) {
        return Err(Error::domain(format!(
            "{a} in L_A does not have length {}",
            cfg.n
        )));
    }
    let (pairs, totals) = find_pairs(&l_a);
    write_lines(&cfg.pairs_path(), &pairs)?;
    Ok((pairs, totals))
}

fn write_classification(cfg: &RunConfig, r: &ClassificationResult) -> Result<()> {
    let mut all: Vec<&PairRecord> = r.omega_all.iter().collect();
    all.sort();
    write_lines(&cfg.omega_path("all"), all)?;
    let mut reps: Vec<&PairRecord> = r.omega_inequiv.iter().collect();
    reps.sort();
    write_lines(&cfg.omega_path("inequiv"), reps)?;
    write_lines(&cfg.omega_path("seqs"), &r.omega_seqs)
}

fn count_lines(path: &Path) -> Result<u64> {
    let file = fs::File::open(path).map_err(|e| Error::io(path, e))?;
    let mut count = 0;
    for line in BufReader::new(file).lines() {
        if !line.map_err(|e| Error::io(path, e))?.trim().is_empty() {
            count += 1;
        }
    }
    Ok(count)
}

/// `classify` subcommand: reads the pairs, writes the omega files and
/// records the counts row (list sizes are taken from the list files).
pub fn run_classify(cfg: &RunConfig) -> Result<CountsRow> {
    cfg.validate()?;
    let pairs: Vec<PairRecord> = read_lines(&cfg.pairs_path())?;
    let classes = classify_all(&pairs)?;
    write_classification(cfg, &classes)?;
    let c = counts(cfg.n, &classes);
    let row = CountsRow {
        n: cfg.n,
        l_even: count_lines(&cfg.l_even_path())?,
        l_odd: odd_count(cfg.n, count_lines(&cfg.l_odd_path())? as usize),
        l_a: count_lines(&cfg.l_a_path())?,
        seqs: c.seqs,
        all: c.all,
        inequiv: c.inequiv,
    };
    upsert_counts(&cfg.counts_path(), row)?;
    Ok(row)
}

/// Replaces (or adds) the row for `row.n`, keeping rows ordered by n.
pub fn upsert_counts(path: &Path, row: CountsRow) -> Result<()> {
    let mut rows = if path.is_file() {
        read_counts(path)?
    } else {
        BTreeMap::new()
    };
    rows.insert(row.n, row);
    write_lines(
        path,
        std::iter::once(COUNTS_HEADER.to_string()).chain(rows.values().map(|r| r.to_string())),
    )
}

pub fn read_counts(path: &Path) -> Result<BTreeMap<usize, CountsRow>> {
    let text = fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
    let mut rows = BTreeMap::new();
    for line in text.lines() {
        if line.trim().is_empty() || line.starts_with("n\t") {
            continue;
        }
        let row: CountsRow = line.parse()?;
        rows.insert(row.n, row);
    }
    Ok(rows)
}

#[derive(Debug, Serialize)]
struct Manifest<'a> {
    config: &'a RunConfig,
    counts: CountsRow,
    seconds: BTreeMap<&'static str, f64>,
    preprocess: BTreeMap<&'static str, HalfStats>,
    join: JoinStats,
    pairs: SearchTotals,
}

/// `pipeline` subcommand: every phase plus merge, counts row and manifest.
pub fn run_pipeline(cfg: &RunConfig) -> Result<CountsRow> {
    cfg.validate()?;
    let mut seconds = BTreeMap::new();

    let t = Instant::now();
    let lists = run_preprocess(cfg)?;
    seconds.insert("preprocess", t.elapsed().as_secs_f64());

    let t = Instant::now();
    let join_cfg = RunConfig {
        shard_index: None,
        ..cfg.clone()
    };
    let (_, join_stats) = run_join(&join_cfg)?;
    seconds.insert("join", t.elapsed().as_secs_f64());

    let t = Instant::now();
    let (_, totals) = run_pairs(cfg)?;
    seconds.insert("pairs", t.elapsed().as_secs_f64());

    let t = Instant::now();
    let row = run_classify(cfg)?;
    seconds.insert("classify", t.elapsed().as_secs_f64());

    let manifest = Manifest {
        config: cfg,
        counts: row,
        seconds,
        preprocess: BTreeMap::from([("even", lists.even_stats), ("odd", lists.odd_stats)]),
        join: join_stats,
        pairs: totals,
    };
    let path = cfg.manifest_path();
    let json = serde_json::to_string_pretty(&manifest)?;
    fs::write(&path, json + "\n").map_err(|e| Error::io(&path, e))?;
    Ok(row)
}

/// Comparison of a counts row with the published tables.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct VerifyReport {
    pub n: usize,
    /// Mismatches in the pair-count columns, e.g. `+1 inequiv`.
    pub diffs: Vec<String>,
    /// Deviations in the list-size columns (informational).
    pub list_notes: Vec<String>,
    pub reference_known: bool,
}

impl VerifyReport {
    pub fn passed(&self) -> bool {
        self.reference_known && self.diffs.is_empty()
    }
}

fn signed_diff(got: u64, want: u64, column: &str) -> Option<String> {
    (got != want).then(|| format!("{:+} {column}", got as i128 - want as i128))
}

/// Compares a row against the embedded tables.
pub fn verify_row(row: &CountsRow) -> VerifyReport {
    let mut diffs = Vec::new();
    let mut list_notes = Vec::new();
    let mut reference_known = false;
    if let Some(want) = reference::pair_counts(row.n) {
        reference_known = true;
        diffs.extend(signed_diff(row.seqs, want.seqs, "seqs"));
        diffs.extend(signed_diff(row.all, want.all, "all"));
        diffs.extend(signed_diff(row.inequiv, want.inequiv, "inequiv"));
    }
    if let Some(want) = reference::list_sizes(row.n) {
        list_notes.extend(signed_diff(row.l_even, want.l_even, "L_even"));
        match (row.l_odd, want.l_odd) {
            (Some(got), Some(want)) => list_notes.extend(signed_diff(got, want, "L_odd")),
            (None, None) => {}
            (got, want) => list_notes.push(format!("L_odd {got:?} vs {want:?}")),
        }
        list_notes.extend(signed_diff(row.l_a, want.l_a, "L_A"));
    }
    VerifyReport {
        n: row.n,
        diffs,
        list_notes,
        reference_known,
    }
}

/// `verify` subcommand.
pub fn verify(n: usize, counts_file: &Path) -> Result<VerifyReport> {
    let rows = read_counts(counts_file)?;
    let row = rows.get(&n).ok_or(Error::MissingRow(n))?;
    Ok(verify_row(row))
}
