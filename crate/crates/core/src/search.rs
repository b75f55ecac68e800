//! Exhaustive backtracking search for shortest covering words and PdB words.
//!
//! Words are extended letter by letter. Each new letter moves the current
//! window one step through the grid, which a precomputed transition table
//! turns into a single lookup. Only words whose letters first appear in
//! alphabet order are generated; every word is a relabeling of exactly one
//! such word, and the lexicographically smallest word of any relabeling
//! class is of this form.
//!
//! Pruning rules, each of which can be switched off:
//!
//! * duplicate window: at the PdB length no window may repeat a vector;
//! * unreachable: every window that repeats a vector costs one of the
//!   `L - k + 1 - V` spare windows, and a prefix that has used more spare
//!   windows than there are can never cover all `V` vectors;
//! * letter budget: every letter must occur at least `⌈C(σ+k-1, k-1)/k⌉`
//!   times, so the missing occurrences must fit in the remaining positions;
//! * distance: each window moves at most one step in the grid, so every
//!   uncovered vector must lie within the number of remaining windows.
//!
//! Parallel runs split the tree at a fixed prefix length into tasks taken in
//! lexicographic order. The witness reported is always the one from the
//! first task that has one, which makes the result independent of the
//! number of workers and of scheduling.

use std::fmt;
use std::sync::atomic::{AtomicBool, AtomicU64, AtomicUsize, Ordering};
use std::sync::{Arc, Mutex};
use std::time::Instant;

use serde::{Deserialize, Serialize};

use crate::covering::{bounds, letter_count_bound, pdb_length, verify};
use crate::error::{Error, Result};
use crate::grid::PdbGrid;
use crate::parikh::{rank_counts, Alphabet, Letter, Shape};

pub const DEFAULT_NODE_BUDGET: u64 = 100_000_000;
pub const DEFAULT_CHECKPOINT_INTERVAL: u64 = 10_000_000;

/// Largest grid the search will take on.
pub const MAX_SEARCH_VERTICES: u64 = 1 << 20;

/// Distance pruning keeps a `V × V` table up to this many vertices.
const MAX_DISTANCE_TABLE: usize = 4096;

/// How often a worker publishes its node count and checks for cancellation.
const FLUSH_EVERY: u64 = 1 << 12;

/// Default cap on the number of PdB positions for [`enumerate_all_pdb`].
pub const ENUMERATION_GATE: u64 = 20;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Target {
    /// Deepen from the lower bound until a covering word is found.
    ShortestCovering,
    /// Only the PdB length, only words without repeated windows.
    PdbOnly,
    /// Covering words of exactly this length.
    ExistenceAtLength(usize),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct Pruning {
    pub duplicate_window: bool,
    pub unreachable: bool,
    pub letter_budget: bool,
    pub distance: bool,
}

impl Default for Pruning {
    fn default() -> Self {
        Pruning { duplicate_window: true, unreachable: true, letter_budget: true, distance: true }
    }
}

impl Pruning {
    pub fn none() -> Self {
        Pruning { duplicate_window: false, unreachable: false, letter_budget: false, distance: false }
    }
}

/// A checkpoint emitted every `checkpoint_interval` explored nodes.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct ProgressRecord {
    pub target_length: usize,
    pub depth: usize,
    pub nodes: u64,
}

pub type ProgressSink = Arc<dyn Fn(&ProgressRecord) + Send + Sync>;

#[derive(Clone)]
pub struct SearchConfig {
    pub k: usize,
    pub sigma: usize,
    pub target: Target,
    pub max_len: Option<usize>,
    pub worker_count: usize,
    pub node_budget: Option<u64>,
    pub pruning: Pruning,
    /// Prefix length at which the tree is cut into tasks; `k + 2` by default.
    pub split_depth: Option<usize>,
    pub checkpoint_interval: u64,
    pub progress: Option<ProgressSink>,
}

impl SearchConfig {
    pub fn new(k: usize, sigma: usize) -> Self {
        SearchConfig {
            k,
            sigma,
            target: Target::ShortestCovering,
            max_len: None,
            worker_count: 1,
            node_budget: Some(DEFAULT_NODE_BUDGET),
            pruning: Pruning::default(),
            split_depth: None,
            checkpoint_interval: DEFAULT_CHECKPOINT_INTERVAL,
            progress: None,
        }
    }

    pub fn target(mut self, target: Target) -> Self {
        self.target = target;
        self
    }

    pub fn workers(mut self, n: usize) -> Self {
        self.worker_count = n;
        self
    }

    pub fn budget(mut self, budget: Option<u64>) -> Self {
        self.node_budget = budget;
        self
    }

    pub fn max_len(mut self, max_len: Option<usize>) -> Self {
        self.max_len = max_len;
        self
    }

    pub fn pruning(mut self, pruning: Pruning) -> Self {
        self.pruning = pruning;
        self
    }

    fn validate(&self) -> Result<()> {
        if self.k == 0 {
            return Err(Error::invalid("k must be at least 1"));
        }
        let n = Shape::new(self.k, self.sigma)?.vertex_count();
        if n > MAX_SEARCH_VERTICES {
            return Err(Error::capacity(format!(
                "({}, {}) has {n} Parikh vectors; the search handles at most {MAX_SEARCH_VERTICES}",
                self.k, self.sigma
            )));
        }
        if let Some(m) = self.max_len {
            if m < self.k {
                return Err(Error::invalid(format!("max_len {m} is shorter than k = {}", self.k)));
            }
        }
        Ok(())
    }
}

impl fmt::Debug for SearchConfig {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("SearchConfig")
            .field("k", &self.k)
            .field("sigma", &self.sigma)
            .field("target", &self.target)
            .field("max_len", &self.max_len)
            .field("worker_count", &self.worker_count)
            .field("node_budget", &self.node_budget)
            .field("pruning", &self.pruning)
            .field("split_depth", &self.split_depth)
            .finish_non_exhaustive()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SearchStatus {
    Found,
    /// Every length up to and including this one was refuted.
    RefutedUpTo(usize),
    BudgetExhausted,
}

#[derive(Debug, Clone, PartialEq, Eq, Default, Serialize, Deserialize)]
pub struct SearchStats {
    pub nodes: u64,
    pub elapsed_ms: u64,
    pub max_depth: usize,
    /// Lengths exhaustively shown to admit no word.
    pub refuted_lengths: Vec<usize>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SearchOutcome {
    pub k: usize,
    pub sigma: usize,
    pub target: Target,
    pub status: SearchStatus,
    pub witness: Option<String>,
    /// No shorter word exists: lengths below the lower bound are excluded
    /// by counting, and every length from the bound up to the witness was
    /// refuted by exhaustion.
    pub minimal: bool,
    pub stats: SearchStats,
}

impl SearchOutcome {
    pub fn witness_letters(&self) -> Option<Vec<Letter>> {
        let alphabet = Alphabet::new(self.sigma).ok()?;
        self.witness.as_deref().and_then(|w| alphabet.parse(w).ok())
    }
}

struct Tables {
    k: usize,
    sigma: usize,
    vertices: usize,
    next: Vec<u32>,
    distance: Vec<u8>,
    per_letter: u32,
}

impl Tables {
    fn new(k: usize, sigma: usize) -> Result<Self> {
        let grid = PdbGrid::build(k, sigma)?;
        let vertices = grid.vertex_count();
        let distance = if vertices <= MAX_DISTANCE_TABLE {
            let vs = grid.vertices();
            let mut d = Vec::with_capacity(vertices * vertices);
            for p in vs {
                for q in vs {
                    d.push(p.distance(q).min(u8::MAX as usize) as u8);
                }
            }
            d
        } else {
            Vec::new()
        };
        let per_letter = letter_count_bound(k, sigma)?.min(u32::MAX as u64) as u32;
        Ok(Tables { k, sigma, vertices, next: grid.transition_table(), distance, per_letter })
    }
}

struct Shared<'a> {
    budget: u64,
    nodes: AtomicU64,
    stop: AtomicBool,
    first_task: AtomicUsize,
    target_length: usize,
    interval: u64,
    progress: Option<&'a ProgressSink>,
}

impl Shared<'_> {
    fn exhausted(&self) -> bool {
        self.stop.load(Ordering::Relaxed)
    }
}

enum Sink<'a> {
    First(&'a Mutex<Option<(usize, Vec<Letter>)>>),
    All(&'a (dyn Fn(&[Letter]) + Sync)),
    Prefixes(usize, Vec<Vec<Letter>>),
}

struct Worker<'t> {
    t: &'t Tables,
    len: usize,
    pruning: Pruning,
    spare: usize,
    word: Vec<Letter>,
    ranks: Vec<u32>,
    cover: Vec<u32>,
    uncovered: usize,
    wasted: usize,
    letters: Vec<u32>,
    deficit: usize,
    distinct: usize,
    pending: u64,
    max_depth: usize,
}

impl<'t> Worker<'t> {
    fn new(t: &'t Tables, len: usize, pruning: Pruning) -> Self {
        let windows = len + 1 - t.k;
        Worker {
            t,
            len,
            pruning,
            spare: windows - t.vertices,
            word: Vec::with_capacity(len),
            ranks: vec![0; len],
            cover: vec![0; t.vertices],
            uncovered: t.vertices,
            wasted: 0,
            letters: vec![0; t.sigma],
            deficit: t.per_letter as usize * t.sigma,
            distinct: 0,
            pending: 0,
            max_depth: 0,
        }
    }

    /// Appends `x` and reports whether the prefix survives pruning. The
    /// caller undoes it with [`Worker::unplace`] either way.
    fn place(&mut self, x: Letter) -> bool {
        let t = self.t;
        let (k, sigma) = (t.k, t.sigma);
        let pos = self.word.len();
        let xi = x as usize;
        self.word.push(x);
        if self.letters[xi] < t.per_letter {
            self.deficit -= 1;
        }
        if self.letters[xi] == 0 {
            self.distinct += 1;
        }
        self.letters[xi] += 1;

        let mut ok = true;
        if pos + 1 >= k {
            let r = if pos + 1 == k {
                rank_counts(&self.letters) as u32
            } else {
                let prev = self.ranks[pos - 1] as usize;
                let out = self.word[pos - k] as usize;
                t.next[(prev * sigma + out) * sigma + xi]
            };
            self.ranks[pos] = r;
            let slot = &mut self.cover[r as usize];
            *slot += 1;
            if *slot == 1 {
                self.uncovered -= 1;
            } else {
                self.wasted += 1;
                if self.pruning.duplicate_window && self.spare == 0 {
                    ok = false;
                }
            }
            if self.pruning.unreachable && self.wasted > self.spare {
                ok = false;
            }
            let remaining = self.len - 1 - pos;
            if ok && self.pruning.distance && self.uncovered > 0 && remaining < k && !t.distance.is_empty() {
                let row = &t.distance[r as usize * t.vertices..(r as usize + 1) * t.vertices];
                ok = row.iter().zip(&self.cover).all(|(&d, &c)| c > 0 || (d as usize) <= remaining);
            }
        }
        if ok && self.pruning.letter_budget && self.deficit > self.len - pos - 1 {
            ok = false;
        }
        ok
    }

    fn unplace(&mut self) {
        let k = self.t.k;
        let pos = self.word.len() - 1;
        let xi = self.word.pop().expect("non-empty") as usize;
        if pos + 1 >= k {
            let slot = &mut self.cover[self.ranks[pos] as usize];
            *slot -= 1;
            if *slot == 0 {
                self.uncovered += 1;
            } else {
                self.wasted -= 1;
            }
        }
        self.letters[xi] -= 1;
        if self.letters[xi] < self.t.per_letter {
            self.deficit += 1;
        }
        if self.letters[xi] == 0 {
            self.distinct -= 1;
        }
    }

    /// Counts a node; returns `false` when this worker should stop.
    fn tick(&mut self, shared: &Shared<'_>, task: usize) -> bool {
        self.pending += 1;
        self.max_depth = self.max_depth.max(self.word.len() + 1);
        if self.pending < FLUSH_EVERY {
            return true;
        }
        self.flush(shared);
        !(shared.exhausted() || shared.first_task.load(Ordering::Relaxed) < task)
    }

    fn flush(&mut self, shared: &Shared<'_>) {
        let before = shared.nodes.fetch_add(self.pending, Ordering::Relaxed);
        let after = before + self.pending;
        self.pending = 0;
        if after > shared.budget {
            shared.stop.store(true, Ordering::Relaxed);
        }
        if let Some(sink) = shared.progress {
            if shared.interval > 0 && before / shared.interval != after / shared.interval {
                sink(&ProgressRecord { target_length: shared.target_length, depth: self.word.len(), nodes: after });
            }
        }
    }

    /// Depth-first extension; returns `false` to unwind the whole search.
    fn dfs(&mut self, shared: &Shared<'_>, sink: &mut Sink<'_>, task: usize) -> bool {
        let pos = self.word.len();
        if let Sink::Prefixes(depth, out) = sink {
            if pos == *depth {
                out.push(self.word.clone());
                return true;
            }
        }
        if pos == self.len {
            if self.uncovered == 0 {
                match sink {
                    Sink::First(best) => {
                        let mut best = best.lock().expect("poisoned");
                        if best.as_ref().is_none_or(|(t, _)| task < *t) {
                            *best = Some((task, self.word.clone()));
                            shared.first_task.fetch_min(task, Ordering::Relaxed);
                        }
                        return false;
                    }
                    Sink::All(visit) => visit(&self.word),
                    Sink::Prefixes(..) => unreachable!("prefix depth never exceeds the length"),
                }
            }
            return true;
        }
        let limit = (self.distinct + 1).min(self.t.sigma);
        for x in 0..limit {
            if !self.tick(shared, task) {
                return false;
            }
            let ok = self.place(x as Letter);
            let go = !ok || self.dfs(shared, sink, task);
            self.unplace();
            if !go {
                return false;
            }
        }
        true
    }
}

enum LevelMode<'a> {
    First,
    All(&'a (dyn Fn(&[Letter]) + Sync)),
}

struct LevelResult {
    witness: Option<Vec<Letter>>,
    complete: bool,
    nodes: u64,
    max_depth: usize,
}

fn run_level(t: &Tables, cfg: &SearchConfig, len: usize, mode: LevelMode<'_>, spent: u64) -> LevelResult {
    let mut result = LevelResult { witness: None, complete: true, nodes: 0, max_depth: 0 };
    if len < t.k || len + 1 - t.k < t.vertices {
        return result;
    }
    let shared = Shared {
        budget: cfg.node_budget.unwrap_or(u64::MAX).saturating_sub(spent),
        nodes: AtomicU64::new(0),
        stop: AtomicBool::new(false),
        first_task: AtomicUsize::new(usize::MAX),
        target_length: len,
        interval: cfg.checkpoint_interval,
        progress: cfg.progress.as_ref(),
    };

    let depth = cfg.split_depth.unwrap_or(t.k + 2).clamp(1, len);
    let mut splitter = Worker::new(t, len, cfg.pruning);
    let mut sink = Sink::Prefixes(depth, Vec::new());
    splitter.dfs(&shared, &mut sink, 0);
    splitter.flush(&shared);
    let mut max_depth = splitter.max_depth;
    let tasks = match sink {
        Sink::Prefixes(_, tasks) => tasks,
        _ => unreachable!(),
    };

    let best: Mutex<Option<(usize, Vec<Letter>)>> = Mutex::new(None);
    let next = AtomicUsize::new(0);
    let first_mode = matches!(mode, LevelMode::First);
    let work = || -> usize {
        let mut w = Worker::new(t, len, cfg.pruning);
        loop {
            let i = next.fetch_add(1, Ordering::Relaxed);
            if i >= tasks.len() || shared.exhausted() || (first_mode && shared.first_task.load(Ordering::Relaxed) < i) {
                break;
            }
            let prefix = &tasks[i];
            for &x in prefix {
                w.place(x);
            }
            let mut sink = match mode {
                LevelMode::First => Sink::First(&best),
                LevelMode::All(visit) => Sink::All(visit),
            };
            w.dfs(&shared, &mut sink, i);
            for _ in prefix {
                w.unplace();
            }
        }
        w.flush(&shared);
        w.max_depth
    };
    if !shared.exhausted() {
        let workers = cfg.worker_count.max(1).min(tasks.len().max(1));
        if workers == 1 {
            max_depth = max_depth.max(work());
        } else {
            std::thread::scope(|s| {
                let handles: Vec<_> = (0..workers).map(|_| s.spawn(work)).collect();
                for h in handles {
                    max_depth = max_depth.max(h.join().expect("search worker panicked"));
                }
            });
        }
    }

    result.witness = best.into_inner().expect("poisoned").map(|(_, w)| w);
    result.complete = !shared.exhausted();
    result.nodes = shared.nodes.load(Ordering::Relaxed);
    result.max_depth = max_depth;
    result
}

/// Runs the search described by `cfg`.
///
/// With [`Target::ShortestCovering`] the length is deepened from the
/// counting lower bound until a covering word is found, `max_len` is
/// passed, or the node budget runs out.
pub fn search(cfg: &SearchConfig) -> Result<SearchOutcome> {
    cfg.validate()?;
    let (k, sigma) = (cfg.k, cfg.sigma);
    let started = Instant::now();
    let tables = Tables::new(k, sigma)?;
    let alphabet = Alphabet::new(sigma)?;
    let lower = bounds(k, sigma)?.shortest_lower_bound as usize;
    let pdb_len = pdb_length(k, sigma)? as usize;

    let (first, last) = match cfg.target {
        Target::ShortestCovering => (lower, cfg.max_len.unwrap_or(usize::MAX)),
        Target::PdbOnly => (pdb_len, pdb_len),
        Target::ExistenceAtLength(l) => (l, l),
    };

    let mut stats = SearchStats::default();
    let mut status = SearchStatus::RefutedUpTo(last.min(first.max(k)));
    let mut witness = None;
    let mut minimal = false;
    let mut len = first;
    while len <= last {
        let level = run_level(&tables, cfg, len, LevelMode::First, stats.nodes);
        stats.nodes += level.nodes;
        stats.max_depth = stats.max_depth.max(level.max_depth);
        if let Some(w) = level.witness {
            let report = verify(&w, k, sigma)?;
            let holds = report.is_covering && (cfg.target != Target::PdbOnly || report.is_pdb);
            if !holds {
                return Err(Error::SelfCheck(format!("search witness {} fails verification", report.word)));
            }
            minimal = len <= lower || (first <= lower && stats.refuted_lengths.len() == len - first);
            witness = Some(alphabet.render(&w));
            status = SearchStatus::Found;
            break;
        }
        if !level.complete {
            status = SearchStatus::BudgetExhausted;
            break;
        }
        stats.refuted_lengths.push(len);
        status = SearchStatus::RefutedUpTo(len);
        if len == last {
            break;
        }
        len += 1;
    }
    stats.elapsed_ms = started.elapsed().as_millis() as u64;
    Ok(SearchOutcome { k, sigma, target: cfg.target, status, witness, minimal, stats })
}

/// Shortest covering word (or the length fixed by the configured target).
pub fn search_shortest_covering(cfg: &SearchConfig) -> Result<SearchOutcome> {
    search(cfg)
}

/// Searches only the PdB length, without repeated windows.
pub fn search_pdb_existence(cfg: &SearchConfig) -> Result<SearchOutcome> {
    search(&cfg.clone().target(Target::PdbOnly))
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Enumeration {
    /// Whether the whole space was explored within the node budget.
    pub complete: bool,
    pub nodes: u64,
}

/// Calls `visit` on every covering word of length `len` whose letters first
/// appear in alphabet order.
pub fn enumerate_covering(cfg: &SearchConfig, len: usize, visit: &(dyn Fn(&[Letter]) + Sync)) -> Result<Enumeration> {
    cfg.validate()?;
    let tables = Tables::new(cfg.k, cfg.sigma)?;
    let level = run_level(&tables, cfg, len, LevelMode::All(visit), 0);
    Ok(Enumeration { complete: level.complete, nodes: level.nodes })
}

/// Relabels letters in order of first appearance (`a` first, then `b`, …):
/// the lexicographically smallest word among all relabelings.
pub fn normalize_letters(word: &[Letter]) -> Vec<Letter> {
    let mut map = [u8::MAX; 256];
    let mut next = 0u8;
    word.iter()
        .map(|&l| {
            if map[l as usize] == u8::MAX {
                map[l as usize] = next;
                next = next.wrapping_add(1);
            }
            map[l as usize]
        })
        .collect()
}

/// Smallest word among all relabelings of `word` and of its reversal.
pub fn canonical_form(word: &[Letter]) -> Vec<Letter> {
    let forward = normalize_letters(word);
    let rev: Vec<Letter> = word.iter().rev().copied().collect();
    forward.min(normalize_letters(&rev))
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct PdbEnumeration {
    pub k: usize,
    pub sigma: usize,
    /// Canonical representatives, one per class under reversal and relabeling.
    pub classes: Vec<String>,
    pub complete: bool,
    pub nodes: u64,
}

/// All PdB words up to reversal and relabeling of the alphabet.
///
/// Refuses grids with more than [`ENUMERATION_GATE`] vectors unless `force`.
pub fn enumerate_all_pdb(cfg: &SearchConfig, force: bool) -> Result<PdbEnumeration> {
    cfg.validate()?;
    let (k, sigma) = (cfg.k, cfg.sigma);
    let n = Shape::new(k, sigma)?.vertex_count();
    if n > ENUMERATION_GATE && !force {
        return Err(Error::capacity(format!(
            "({k}, {sigma}) has {n} Parikh vectors; enumeration is limited to {ENUMERATION_GATE} unless forced"
        )));
    }
    let len = pdb_length(k, sigma)? as usize;
    let found: Mutex<std::collections::BTreeSet<Vec<Letter>>> = Mutex::new(Default::default());
    let visit = |w: &[Letter]| {
        found.lock().expect("poisoned").insert(canonical_form(w));
    };
    let e = enumerate_covering(&cfg.clone().target(Target::PdbOnly), len, &visit)?;
    let alphabet = Alphabet::new(sigma)?;
    let classes = found.into_inner().expect("poisoned").iter().map(|w| alphabet.render(w)).collect();
    Ok(PdbEnumeration { k, sigma, classes, complete: e.complete, nodes: e.nodes })
}
