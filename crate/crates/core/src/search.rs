//! Exhaustive search for L(r)-colorings of `[1, n]` and exact values of
//! `g(m, r)` for small parameters.
//!
//! Colors are assigned left to right, lowest color first. A partial
//! assignment is rejected as soon as the new position completes a violation
//! (an `O(1)` check through [`IncrementalChecker`]). Color permutations
//! preserve the violation predicate, so each position may only use a color
//! at most one larger than the largest color used so far.
//!
//! With pruning enabled, prefixes in which some color occurs `m` times
//! within `[1, r(m-1)]` are cut. No L(r)-coloring of `[1, g(m, r) - 1]`
//! has such a prefix. For `n < g(m, r)` its restriction to `[1, n]` is an
//! uncut L(r)-coloring, and for larger `n` none exist, so the cut never
//! changes whether a coloring of `[1, n]` exists (only which one is found).
//!
//! The top of the tree can be split into independent subtree tasks run on a
//! rayon pool. Tasks share an atomic node counter and the index of the
//! leftmost subtree known to hold a witness; the returned witness is the
//! lexicographically first canonical one regardless of thread count.

use std::sync::atomic::{AtomicBool, AtomicU64, AtomicUsize, Ordering};
use std::time::{Duration, Instant};

use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::coloring::{is_l_coloring, Color, Coloring, IncrementalChecker, Pos};
use crate::format::to_rle;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SearchConfig {
    /// Worker threads; 1 runs serially on the calling thread.
    pub threads: usize,
    /// Ceiling on visited nodes (positions assigned) over the whole call.
    pub node_budget: Option<u64>,
    /// Wall-clock ceiling over the whole call.
    pub time_budget: Option<Duration>,
    /// Cut prefixes with `m` equal colors inside `[1, r(m-1)]`.
    pub prune: bool,
    /// Depth at which the tree is split into tasks; chosen automatically when absent.
    pub split_depth: Option<usize>,
}

impl Default for SearchConfig {
    fn default() -> Self {
        SearchConfig { threads: 1, node_budget: None, time_budget: None, prune: true, split_depth: None }
    }
}

impl SearchConfig {
    pub fn with_threads(mut self, threads: usize) -> Self {
        self.threads = threads.max(1);
        self
    }

    pub fn with_prune(mut self, prune: bool) -> Self {
        self.prune = prune;
        self
    }

    pub fn with_node_budget(mut self, nodes: u64) -> Self {
        self.node_budget = Some(nodes);
        self
    }

    pub fn with_time_budget(mut self, t: Duration) -> Self {
        self.time_budget = Some(t);
        self
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum BudgetKind {
    Nodes,
    Time,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SearchError {
    #[error("{kind:?} budget exhausted after {nodes} nodes")]
    BudgetExhausted { kind: BudgetKind, nodes: u64 },
    #[error("invalid parameters: {0}")]
    BadParams(String),
    #[error("thread pool: {0}")]
    Pool(String),
}

struct Control {
    nodes: AtomicU64,
    node_budget: u64,
    deadline: Option<Instant>,
    exhausted: AtomicBool,
    time_out: AtomicBool,
    best: AtomicUsize,
}

impl Control {
    fn new(config: &SearchConfig, deadline: Option<Instant>, used: u64) -> Self {
        Control {
            nodes: AtomicU64::new(used),
            node_budget: config.node_budget.unwrap_or(u64::MAX),
            deadline,
            exhausted: AtomicBool::new(false),
            time_out: AtomicBool::new(false),
            best: AtomicUsize::new(usize::MAX),
        }
    }

    /// Adds `k` nodes; false once any budget is gone.
    fn charge(&self, k: u64) -> bool {
        let total = self.nodes.fetch_add(k, Ordering::Relaxed) + k;
        if total > self.node_budget {
            self.exhausted.store(true, Ordering::Relaxed);
        }
        if let Some(d) = self.deadline {
            if Instant::now() >= d {
                self.time_out.store(true, Ordering::Relaxed);
                self.exhausted.store(true, Ordering::Relaxed);
            }
        }
        !self.exhausted.load(Ordering::Relaxed)
    }

    fn error(&self) -> SearchError {
        let kind = if self.time_out.load(Ordering::Relaxed) { BudgetKind::Time } else { BudgetKind::Nodes };
        SearchError::BudgetExhausted { kind, nodes: self.nodes.load(Ordering::Relaxed) }
    }
}

#[derive(Debug, PartialEq, Eq)]
enum Step {
    Found,
    Done,
    Stop,
}

const FLUSH: u64 = 1 << 12;

struct Dfs<'a> {
    m: usize,
    r: Color,
    n: usize,
    prune_upto: usize,
    checker: IncrementalChecker,
    max_used: Color,
    ctrl: &'a Control,
    index: usize,
    pending: u64,
}

impl<'a> Dfs<'a> {
    fn new(m: usize, r: Color, n: usize, prune: bool, ctrl: &'a Control, index: usize) -> Self {
        let prune_upto = if prune && m >= 2 { r as usize * (m - 1) } else { 0 };
        Dfs { m, r, n, prune_upto, checker: IncrementalChecker::new(m, r), max_used: 0, ctrl, index, pending: 0 }
    }

    #[inline]
    fn allowed(&self, color: Color) -> bool {
        let p = self.checker.len() + 1;
        if p <= self.prune_upto && self.checker.count(color) + 1 >= self.m {
            return false;
        }
        !self.checker.violates(color)
    }

    fn push(&mut self, color: Color) {
        self.checker.push(color);
        self.max_used = self.max_used.max(color);
    }

    /// Replays a prefix; false if it is not a valid canonical prefix.
    fn load(&mut self, prefix: &[Color]) -> bool {
        for &c in prefix {
            if c > self.max_used + 1 || c > self.r || !self.allowed(c) {
                return false;
            }
            self.push(c);
        }
        true
    }

    fn rec(&mut self) -> Step {
        if self.checker.len() == self.n {
            return Step::Found;
        }
        let top = self.r.min(self.max_used + 1);
        for color in 1..=top {
            if !self.allowed(color) {
                continue;
            }
            self.pending += 1;
            if self.pending >= FLUSH {
                let ok = self.ctrl.charge(self.pending);
                self.pending = 0;
                if !ok || self.ctrl.best.load(Ordering::Relaxed) < self.index {
                    return Step::Stop;
                }
            }
            let saved = self.max_used;
            self.push(color);
            match self.rec() {
                Step::Done => {}
                other => return other,
            }
            self.checker.pop();
            self.max_used = saved;
        }
        Step::Done
    }

    fn finish(&mut self) {
        if self.pending > 0 {
            self.ctrl.charge(self.pending);
            self.pending = 0;
        }
    }
}

/// Canonical valid prefixes of length exactly `depth`, in search order.
fn prefixes(m: usize, r: Color, depth: usize, prune: bool, ctrl: &Control) -> Vec<Vec<Color>> {
    fn walk(d: &mut Dfs<'_>, depth: usize, out: &mut Vec<Vec<Color>>) {
        if d.checker.len() == depth {
            out.push(d.checker.colors().to_vec());
            return;
        }
        for color in 1..=d.r.min(d.max_used + 1) {
            if d.allowed(color) {
                let saved = d.max_used;
                d.push(color);
                walk(d, depth, out);
                d.checker.pop();
                d.max_used = saved;
            }
        }
    }
    let mut d = Dfs::new(m, r, depth, prune, ctrl, 0);
    let mut out = Vec::new();
    walk(&mut d, depth, &mut out);
    out
}

fn validate(m: usize, r: Color, n: usize) -> Result<(), SearchError> {
    if m < 1 || r < 1 || n < 1 {
        return Err(SearchError::BadParams(format!("need m, r, n >= 1 (m = {m}, r = {r}, n = {n})")));
    }
    Ok(())
}

fn search_with(m: usize, r: Color, n: usize, config: &SearchConfig, ctrl: &Control) -> Result<Option<Coloring>, SearchError> {
    let threads = config.threads.max(1);
    let depth = config
        .split_depth
        .unwrap_or(if threads == 1 { 0 } else { 6 + (threads as f64).log2().ceil() as usize })
        .min(n);

    if depth == 0 {
        let mut d = Dfs::new(m, r, n, config.prune, ctrl, 0);
        let step = d.rec();
        d.finish();
        return match step {
            Step::Found => Ok(Some(d.checker.to_coloring(r).expect("nonempty"))),
            Step::Done => Ok(None),
            Step::Stop => Err(ctrl.error()),
        };
    }

    let tasks = prefixes(m, r, depth, config.prune, ctrl);
    let run = |(index, prefix): (usize, &Vec<Color>)| -> Option<(usize, Vec<Color>)> {
        if ctrl.best.load(Ordering::Relaxed) < index || ctrl.exhausted.load(Ordering::Relaxed) {
            return None;
        }
        let mut d = Dfs::new(m, r, n, config.prune, ctrl, index);
        let loaded = d.load(prefix);
        debug_assert!(loaded, "prefix enumeration yields valid prefixes");
        let step = d.rec();
        d.finish();
        if step == Step::Found {
            ctrl.best.fetch_min(index, Ordering::Relaxed);
            Some((index, d.checker.colors().to_vec()))
        } else {
            None
        }
    };
    let found = if threads == 1 {
        tasks.iter().enumerate().find_map(run)
    } else {
        let pool = rayon::ThreadPoolBuilder::new()
            .num_threads(threads)
            .build()
            .map_err(|e| SearchError::Pool(e.to_string()))?;
        pool.install(|| tasks.par_iter().enumerate().filter_map(run).min_by_key(|(i, _)| *i))
    };
    match found {
        // a witness is valid even if the budget ran out in another subtree
        Some((_, colors)) => Ok(Some(Coloring::new(1, colors, r).expect("nonempty"))),
        None if ctrl.exhausted.load(Ordering::Relaxed) => Err(ctrl.error()),
        None => Ok(None),
    }
}

/// Finds an L(r)-coloring of `[1, n]` for `m`, or proves none exists.
pub fn exists_l_coloring(m: usize, r: Color, n: usize, config: &SearchConfig) -> Result<Option<Coloring>, SearchError> {
    validate(m, r, n)?;
    let deadline = config.time_budget.map(|t| Instant::now() + t);
    let ctrl = Control::new(config, deadline, 0);
    search_with(m, r, n, config, &ctrl)
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum SearchStatus {
    /// `g` is exact: a witness of length `g - 1` exists and `[1, g]` has no L(r)-coloring.
    Exact,
    /// Only `g > n_reached` was established.
    LowerBoundOnly { n_reached: Pos, reason: String },
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SearchResult {
    pub m: usize,
    pub r: Color,
    pub g: Option<Pos>,
    pub witness: Option<Coloring>,
    pub status: SearchStatus,
    pub nodes: u64,
}

impl SearchResult {
    pub fn witness_rle(&self) -> Option<String> {
        self.witness.as_ref().map(to_rle)
    }

    pub fn is_exact(&self) -> bool {
        self.status == SearchStatus::Exact
    }
}

/// Tries to extend `prev` by one position without a full search.
fn extend_by_one(prev: &Coloring, m: usize, r: Color) -> Option<Coloring> {
    let mut checker = IncrementalChecker::new(m, r);
    for &c in prev.colors() {
        checker.push(c);
    }
    let used = prev.colors().iter().copied().max().unwrap_or(0);
    (1..=r.min(used + 1)).find(|&c| !checker.violates(c)).map(|c| prev.pushed(c).expect("color in range"))
}

/// Computes `g(m, r)` by scanning `n = 1, 2, …, n_max` until `[1, n]`
/// admits no L(r)-coloring.
pub fn compute_g(m: usize, r: Color, n_max: usize, config: &SearchConfig) -> SearchResult {
    let deadline = config.time_budget.map(|t| Instant::now() + t);
    let mut nodes = 0u64;
    let mut witness: Option<Coloring> = None;
    let lower_only = |n: usize, w: Option<Coloring>, nodes: u64, reason: String| SearchResult {
        m,
        r,
        g: None,
        witness: w,
        status: SearchStatus::LowerBoundOnly { n_reached: n as Pos, reason },
        nodes,
    };
    if validate(m, r, n_max.max(1)).is_err() {
        return lower_only(0, None, 0, "invalid parameters".into());
    }
    for n in 1..=n_max {
        if let Some(w) = witness.as_ref().and_then(|w| extend_by_one(w, m, r)) {
            witness = Some(w);
            continue;
        }
        let ctrl = Control::new(config, deadline, nodes);
        let out = search_with(m, r, n, config, &ctrl);
        nodes = ctrl.nodes.load(Ordering::Relaxed);
        match out {
            Ok(Some(w)) => witness = Some(w),
            Ok(None) => {
                debug_assert!(witness.as_ref().is_none_or(|w| is_l_coloring(w, m)));
                return SearchResult { m, r, g: Some(n as Pos), witness, status: SearchStatus::Exact, nodes };
            }
            Err(e) => return lower_only(n - 1, witness, nodes, e.to_string()),
        }
    }
    lower_only(n_max, witness, nodes, format!("no failure up to n_max = {n_max}"))
}

/// False when `partial` has some color with at least `m` positions inside
/// `[1, r(m-1)]`; such a prefix never extends to an L(r)-coloring of
/// `[1, g(m, r) - 1]`.
pub fn prune_hints(m: usize, r: Color, partial: &Coloring) -> bool {
    if m < 2 {
        return true;
    }
    let limit = r as Pos * (m as Pos - 1);
    let mut counts = vec![0usize; partial.r().max(r) as usize];
    for (i, &c) in partial.colors().iter().enumerate() {
        if partial.start() + i as Pos > limit {
            break;
        }
        counts[(c - 1) as usize] += 1;
    }
    counts.iter().all(|&k| k < m)
}
