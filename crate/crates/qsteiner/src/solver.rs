//! Exact-cover search over 0/1 systems, in the row/column orientation of the
//! Kramer-Mesner matrix: *rows* are constraints to cover exactly once,
//! *columns* are selectable choices.
//!
//! The search is dancing links over Knuth's array layout. Branching always
//! picks the row with the fewest remaining incident columns (ties broken by
//! lowest row id) and tries its columns in ascending id order, so a run is a
//! pure function of the instance, the forced/excluded sets and the budget.
//! Node counts are "columns committed": the root costs nothing, each branch
//! edge costs one. That convention makes prefix-split node accounting exact:
//! splitter nodes plus the sum of per-job nodes equals the monolithic count.
//!
//! A prefix job is a stored decision path; replaying it (validated against
//! the deterministic branching rule) re-creates the exact solver state at
//! that node, which is what makes file-based parallelization sound.

use std::collections::BTreeSet;
use std::fmt;
use std::time::{Duration, Instant};

use crate::km::KMMatrix;
use crate::rng::SplitMix64;

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum SolverError {
    /// A column id is out of range for the instance.
    BadColumn(u32),
    /// Forced and excluded sets overlap.
    ForcedExcludedOverlap(u32),
    /// A column covers no rows (not representable in the link structure).
    EmptyColumn(u32),
    /// A column lists a row id out of range or twice.
    BadIncidence { column: u32, row: u32 },
    /// The instance was built from a matrix with entries > 1.
    EntryTooLarge { row: u32, column: u32, value: u16 },
    /// A stored decision path does not replay against this instance.
    CorruptJob(String),
    Parse(String),
}

impl fmt::Display for SolverError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            SolverError::BadColumn(c) => write!(f, "column id {c} out of range"),
            SolverError::ForcedExcludedOverlap(c) => {
                write!(f, "column {c} is both forced and excluded")
            }
            SolverError::EmptyColumn(c) => write!(f, "column {c} covers no rows"),
            SolverError::BadIncidence { column, row } => {
                write!(f, "column {column} has a bad row incidence {row}")
            }
            SolverError::EntryTooLarge { row, column, value } => {
                write!(f, "entry {value} at ({row},{column}); filter the matrix to 0/1 first")
            }
            SolverError::CorruptJob(msg) => write!(f, "corrupt job: {msg}"),
            SolverError::Parse(msg) => write!(f, "parse error: {msg}"),
        }
    }
}

impl std::error::Error for SolverError {}

/// A 0/1 exact-cover instance: which rows each column covers, plus columns
/// forced into every solution and columns removed from consideration.
#[derive(Clone, Debug)]
pub struct ExactCoverInstance {
    num_rows: u32,
    columns: Vec<Vec<u32>>,
    forced: BTreeSet<u32>,
    excluded: BTreeSet<u32>,
}

impl ExactCoverInstance {
    pub fn new(num_rows: u32, columns: Vec<Vec<u32>>) -> Result<Self, SolverError> {
        for (c, covers) in columns.iter().enumerate() {
            if covers.is_empty() {
                return Err(SolverError::EmptyColumn(c as u32));
            }
            for w in covers.windows(2) {
                if w[0] >= w[1] {
                    return Err(SolverError::BadIncidence { column: c as u32, row: w[1] });
                }
            }
            if let Some(&last) = covers.last() {
                if last >= num_rows {
                    return Err(SolverError::BadIncidence { column: c as u32, row: last });
                }
            }
        }
        Ok(ExactCoverInstance {
            num_rows,
            columns,
            forced: BTreeSet::new(),
            excluded: BTreeSet::new(),
        })
    }

    /// Instance view of a 0/1 (filtered) KM matrix.
    pub fn from_km(m: &KMMatrix) -> Result<Self, SolverError> {
        let mut columns: Vec<Vec<u32>> = vec![Vec::new(); m.ncols()];
        for &(r, c, val) in m.entries() {
            if val > 1 {
                return Err(SolverError::EntryTooLarge { row: r, column: c, value: val });
            }
            if val == 1 {
                columns[c as usize].push(r);
            }
        }
        ExactCoverInstance::new(m.nrows() as u32, columns)
    }

    pub fn num_rows(&self) -> u32 {
        self.num_rows
    }

    pub fn num_columns(&self) -> usize {
        self.columns.len()
    }

    pub fn column(&self, c: u32) -> &[u32] {
        &self.columns[c as usize]
    }

    pub fn forced(&self) -> &BTreeSet<u32> {
        &self.forced
    }

    pub fn excluded(&self) -> &BTreeSet<u32> {
        &self.excluded
    }

    pub fn with_forced(mut self, forced: impl IntoIterator<Item = u32>) -> Result<Self, SolverError> {
        for c in forced {
            if c as usize >= self.columns.len() {
                return Err(SolverError::BadColumn(c));
            }
            if self.excluded.contains(&c) {
                return Err(SolverError::ForcedExcludedOverlap(c));
            }
            self.forced.insert(c);
        }
        Ok(self)
    }

    pub fn with_excluded(
        mut self,
        excluded: impl IntoIterator<Item = u32>,
    ) -> Result<Self, SolverError> {
        for c in excluded {
            if c as usize >= self.columns.len() {
                return Err(SolverError::BadColumn(c));
            }
            if self.forced.contains(&c) {
                return Err(SolverError::ForcedExcludedOverlap(c));
            }
            self.excluded.insert(c);
        }
        Ok(self)
    }
}

/// Node and/or wall-clock limits. Wall limits make outcomes timing-dependent;
/// node limits keep them deterministic.
#[derive(Clone, Debug, Default)]
pub struct Budget {
    pub max_nodes: Option<u64>,
    pub max_wall: Option<Duration>,
}

impl Budget {
    pub const UNLIMITED: Budget = Budget { max_nodes: None, max_wall: None };

    pub fn nodes(n: u64) -> Budget {
        Budget { max_nodes: Some(n), max_wall: None }
    }

    pub fn wall(d: Duration) -> Budget {
        Budget { max_nodes: None, max_wall: Some(d) }
    }
}

#[derive(Copy, Clone, Debug, PartialEq, Eq)]
pub enum SolveStatus {
    /// The whole tree was searched and no solution exists.
    ExhaustedNoSolution,
    /// At least one solution was found (all of them, if `want_all` and the
    /// budget was not hit).
    SolutionsFound,
    /// The budget ran out first; never conflated with a no-solution proof.
    BudgetExhausted,
}

impl SolveStatus {
    pub fn token(&self) -> &'static str {
        match self {
            SolveStatus::ExhaustedNoSolution => "exhausted-no-solution",
            SolveStatus::SolutionsFound => "solutions-found",
            SolveStatus::BudgetExhausted => "budget-exhausted",
        }
    }

    pub fn from_token(s: &str) -> Option<SolveStatus> {
        match s {
            "exhausted-no-solution" => Some(SolveStatus::ExhaustedNoSolution),
            "solutions-found" => Some(SolveStatus::SolutionsFound),
            "budget-exhausted" => Some(SolveStatus::BudgetExhausted),
            _ => None,
        }
    }
}

#[derive(Clone, Debug)]
pub struct SolveOutcome {
    pub status: SolveStatus,
    /// Each solution as a sorted list of column ids (forced columns included).
    pub solutions: Vec<Vec<u32>>,
    pub nodes: u64,
    pub wall: Duration,
    /// Diagnostic, e.g. for an immediate forced-column conflict.
    pub note: Option<String>,
}

/// A stored decision path: replaying it from the root re-creates a partial
/// cover, so the subtree below can run as an independent job.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PrefixJob {
    pub id: u64,
    /// (row branched on, column chosen), from the root downwards.
    pub path: Vec<(u32, u32)>,
    /// Excluded columns inherited from the instance at split time.
    pub excluded: BTreeSet<u32>,
}

/// Result of prefix splitting: the jobs, and the nodes the splitter itself
/// committed (the prefix edges, each counted exactly once).
#[derive(Clone, Debug)]
pub struct SplitResult {
    pub jobs: Vec<PrefixJob>,
    pub nodes: u64,
}

#[derive(Clone, Debug)]
pub struct TreeEstimate {
    pub mean: f64,
    pub std_error: f64,
    pub probes: u64,
}

// ---------------------------------------------------------------------------
// dancing links core
// ---------------------------------------------------------------------------

const SPACER: u32 = u32::MAX;

struct Dlx {
    // row (item) lists; index 0 is the header
    llink: Vec<u32>,
    rlink: Vec<u32>,
    len: Vec<u32>,
    covered: Vec<bool>,
    // node arrays; nodes 1..=num_rows anchor the vertical lists
    top: Vec<u32>, // row id for body nodes, SPACER for spacers
    ulink: Vec<u32>,
    dlink: Vec<u32>,
    column_of: Vec<u32>,
    // first body node of each live column; SPACER for excluded columns
    column_start: Vec<u32>,
}

impl Dlx {
    fn build(inst: &ExactCoverInstance, extra_excluded: &BTreeSet<u32>) -> Dlx {
        let r = inst.num_rows as usize;
        let live: Vec<u32> = (0..inst.columns.len() as u32)
            .filter(|c| !inst.excluded.contains(c) && !extra_excluded.contains(c))
            .collect();
        let body: usize = live.iter().map(|&c| inst.columns[c as usize].len()).sum();
        let total = r + 1 + body + live.len() + 1;

        let mut dlx = Dlx {
            llink: (0..=r as u32).map(|i| if i == 0 { r as u32 } else { i - 1 }).collect(),
            rlink: (0..=r as u32).map(|i| if i == r as u32 { 0 } else { i + 1 }).collect(),
            len: vec![0; r + 1],
            covered: vec![false; r + 1],
            top: vec![SPACER; total],
            ulink: vec![0; total],
            dlink: vec![0; total],
            column_of: vec![SPACER; total],
            column_start: vec![SPACER; inst.columns.len()],
        };
        for i in 1..=r {
            dlx.ulink[i] = i as u32;
            dlx.dlink[i] = i as u32;
        }
        let mut node = r + 1; // leading spacer
        let mut prev_spacer = node;
        node += 1;
        for &c in &live {
            dlx.column_start[c as usize] = node as u32;
            for &row in &inst.columns[c as usize] {
                let item = (row + 1) as usize; // rows are 0-based, items 1-based
                let bottom = dlx.ulink[item];
                dlx.top[node] = item as u32;
                dlx.column_of[node] = c;
                dlx.ulink[node] = bottom;
                dlx.dlink[node] = item as u32;
                dlx.dlink[bottom as usize] = node as u32;
                dlx.ulink[item] = node as u32;
                dlx.len[item] += 1;
                node += 1;
            }
            // close the previous spacer and open a new one
            dlx.dlink[prev_spacer] = (node - 1) as u32;
            dlx.ulink[node] = dlx.column_start[c as usize];
            prev_spacer = node;
            node += 1;
        }
        debug_assert_eq!(node, total);
        dlx
    }

    #[inline]
    fn hide(&mut self, p: u32) {
        let mut q = p + 1;
        while q != p {
            let t = self.top[q as usize];
            if t == SPACER {
                q = self.ulink[q as usize];
            } else {
                let u = self.ulink[q as usize];
                let d = self.dlink[q as usize];
                self.dlink[u as usize] = d;
                self.ulink[d as usize] = u;
                self.len[t as usize] -= 1;
                q += 1;
            }
        }
    }

    #[inline]
    fn unhide(&mut self, p: u32) {
        let mut q = p - 1;
        while q != p {
            let t = self.top[q as usize];
            if t == SPACER {
                q = self.dlink[q as usize];
            } else {
                let u = self.ulink[q as usize];
                let d = self.dlink[q as usize];
                self.dlink[u as usize] = q;
                self.ulink[d as usize] = q;
                self.len[t as usize] += 1;
                q -= 1;
            }
        }
    }

    fn cover(&mut self, item: u32) {
        let mut p = self.dlink[item as usize];
        while p != item {
            self.hide(p);
            p = self.dlink[p as usize];
        }
        let l = self.llink[item as usize];
        let rt = self.rlink[item as usize];
        self.rlink[l as usize] = rt;
        self.llink[rt as usize] = l;
        self.covered[item as usize] = true;
    }

    fn uncover(&mut self, item: u32) {
        let l = self.llink[item as usize];
        let rt = self.rlink[item as usize];
        self.rlink[l as usize] = item;
        self.llink[rt as usize] = item;
        self.covered[item as usize] = false;
        let mut p = self.ulink[item as usize];
        while p != item {
            self.unhide(p);
            p = self.ulink[p as usize];
        }
    }

    /// Covers the other items of the column whose body node `p` belongs to,
    /// walking rightwards with spacer wrap-around.
    fn commit(&mut self, p: u32) {
        let mut q = p + 1;
        while q != p {
            let t = self.top[q as usize];
            if t == SPACER {
                q = self.ulink[q as usize];
            } else {
                self.cover(t);
                q += 1;
            }
        }
    }

    fn uncommit(&mut self, p: u32) {
        let mut q = p - 1;
        while q != p {
            let t = self.top[q as usize];
            if t == SPACER {
                q = self.dlink[q as usize];
            } else {
                self.uncover(t);
                q -= 1;
            }
        }
    }

    /// Deterministic branching rule: the live row with the fewest remaining
    /// columns; the header list preserves ascending row order, so ties fall
    /// to the lowest row id. `None` when every row is covered (a solution).
    fn choose_item(&self) -> Option<u32> {
        let mut best: Option<u32> = None;
        let mut best_len = u32::MAX;
        let mut i = self.rlink[0];
        while i != 0 {
            let l = self.len[i as usize];
            if l < best_len {
                best_len = l;
                best = Some(i);
                if l == 0 {
                    break;
                }
            }
            i = self.rlink[i as usize];
        }
        best
    }

    /// Selects a whole column (used for forced columns and path replay):
    /// covers every item it touches, in node order. Fails if an item is
    /// already covered (conflicting selection).
    fn select_column(&mut self, c: u32) -> Result<(), u32> {
        let start = self.column_start[c as usize];
        debug_assert_ne!(start, SPACER, "selecting an excluded column");
        let mut q = start;
        while self.top[q as usize] != SPACER {
            let t = self.top[q as usize];
            if self.covered[t as usize] {
                // roll back what this call covered
                let mut back = q;
                while back != start {
                    back -= 1;
                    self.uncover(self.top[back as usize]);
                }
                return Err(t - 1); // back to 0-based row id
            }
            self.cover(t);
            q += 1;
        }
        Ok(())
    }

    fn deselect_column(&mut self, c: u32) {
        let start = self.column_start[c as usize];
        let mut end = start;
        while self.top[end as usize] != SPACER {
            end += 1;
        }
        while end != start {
            end -= 1;
            self.uncover(self.top[end as usize]);
        }
    }
}

// ---------------------------------------------------------------------------
// search driver
// ---------------------------------------------------------------------------

struct Search<'a> {
    dlx: Dlx,
    budget: &'a Budget,
    want_all: bool,
    started: Instant,
    nodes: u64,
    budget_hit: bool,
    partial: Vec<u32>,
    solutions: Vec<Vec<u32>>,
    wall_check: u64,
}

enum Flow {
    Continue,
    Stop,
}

impl<'a> Search<'a> {
    fn out_of_budget(&mut self) -> bool {
        if let Some(max) = self.budget.max_nodes {
            if self.nodes >= max {
                return true;
            }
        }
        if let Some(max) = self.budget.max_wall {
            self.wall_check += 1;
            if self.wall_check.is_multiple_of(1024) && self.started.elapsed() >= max {
                return true;
            }
        }
        false
    }

    fn record_solution(&mut self) -> Flow {
        let mut sol = self.partial.clone();
        sol.sort_unstable();
        self.solutions.push(sol);
        if self.want_all {
            Flow::Continue
        } else {
            Flow::Stop
        }
    }

    fn search(&mut self) -> Flow {
        let Some(item) = self.dlx.choose_item() else {
            return self.record_solution();
        };
        if self.dlx.len[item as usize] == 0 {
            return Flow::Continue; // dead end
        }
        self.dlx.cover(item);
        let mut p = self.dlx.dlink[item as usize];
        let mut flow = Flow::Continue;
        while p != item {
            if self.out_of_budget() {
                self.budget_hit = true;
                flow = Flow::Stop;
                break;
            }
            self.nodes += 1;
            self.dlx.commit(p);
            self.partial.push(self.dlx.column_of[p as usize]);
            flow = self.search();
            self.partial.pop();
            self.dlx.uncommit(p);
            if matches!(flow, Flow::Stop) {
                break;
            }
            p = self.dlx.dlink[p as usize];
        }
        self.dlx.uncover(item);
        flow
    }

    fn into_outcome(self, note: Option<String>) -> SolveOutcome {
        let status = if self.budget_hit {
            SolveStatus::BudgetExhausted
        } else if !self.solutions.is_empty() {
            SolveStatus::SolutionsFound
        } else {
            SolveStatus::ExhaustedNoSolution
        };
        SolveOutcome {
            status,
            solutions: self.solutions,
            nodes: self.nodes,
            wall: self.started.elapsed(),
            note,
        }
    }
}

fn new_search<'a>(
    inst: &ExactCoverInstance,
    extra_excluded: &BTreeSet<u32>,
    budget: &'a Budget,
    want_all: bool,
) -> Search<'a> {
    Search {
        dlx: Dlx::build(inst, extra_excluded),
        budget,
        want_all,
        started: Instant::now(),
        nodes: 0,
        budget_hit: false,
        partial: Vec::new(),
        solutions: Vec::new(),
        wall_check: 0,
    }
}

/// Exhaustive (or budgeted) dancing-links search.
///
/// With no budget the outcome is a certificate: either every solution, or
/// exhaustion with none. Forced columns are selected up front; two forced
/// columns sharing a row yield an immediate no-solution outcome with a
/// diagnostic note, since no solution can contain both.
pub fn solve(inst: &ExactCoverInstance, budget: &Budget, want_all: bool) -> SolveOutcome {
    let mut s = new_search(inst, &BTreeSet::new(), budget, want_all);
    for &c in &inst.forced {
        match s.dlx.select_column(c) {
            Ok(()) => s.partial.push(c),
            Err(row) => {
                // unwind previously selected forced columns for tidiness
                for &done in s.partial.iter().rev() {
                    s.dlx.deselect_column(done);
                }
                return SolveOutcome {
                    status: SolveStatus::ExhaustedNoSolution,
                    solutions: Vec::new(),
                    nodes: 0,
                    wall: s.started.elapsed(),
                    note: Some(format!(
                        "forced column {c} conflicts on row {row} with another forced column"
                    )),
                };
            }
        }
    }
    s.search();
    s.into_outcome(None)
}

/// Replays a prefix job and searches the subtree below it.
///
/// Replay is validated step by step: the recorded row must be exactly what
/// the deterministic branching rule selects, and the recorded column must be
/// live and incident to it. Replayed decisions do not count as nodes.
pub fn solve_job(
    inst: &ExactCoverInstance,
    job: &PrefixJob,
    budget: &Budget,
    want_all: bool,
) -> Result<SolveOutcome, SolverError> {
    let mut s = new_search(inst, &job.excluded, budget, want_all);
    for &c in &inst.forced {
        if job.excluded.contains(&c) {
            return Err(SolverError::CorruptJob(format!(
                "job excludes the instance's forced column {c}"
            )));
        }
        if s.dlx.select_column(c).is_err() {
            return Err(SolverError::CorruptJob(format!(
                "forced column {c} conflicts before replay"
            )));
        }
        s.partial.push(c);
    }
    for (step, &(row, col)) in job.path.iter().enumerate() {
        let item = row + 1;
        match s.dlx.choose_item() {
            Some(chosen) if chosen == item => {}
            chosen => {
                return Err(SolverError::CorruptJob(format!(
                    "step {step}: path branches on row {row}, solver branches on {:?}",
                    chosen.map(|i| i - 1)
                )));
            }
        }
        s.dlx.cover(item);
        // find the recorded column in the item's live list
        let mut p = s.dlx.dlink[item as usize];
        loop {
            if p == item {
                s.dlx.uncover(item);
                return Err(SolverError::CorruptJob(format!(
                    "step {step}: column {col} is not live on row {row}"
                )));
            }
            if s.dlx.column_of[p as usize] == col {
                break;
            }
            p = s.dlx.dlink[p as usize];
        }
        s.dlx.commit(p);
        s.partial.push(col);
    }
    s.search();
    Ok(s.into_outcome(None))
}

/// Enumerates the live search nodes at depth `level` as prefix jobs, in the
/// deterministic search order. Solutions encountered above that depth are
/// emitted as jobs too (their replay finds the solution immediately), so
/// solving every job reproduces exactly the monolithic solution multiset.
pub fn split_prefixes(inst: &ExactCoverInstance, level: u32) -> Result<SplitResult, SolverError> {
    let budget = Budget::UNLIMITED;
    let mut s = new_search(inst, &BTreeSet::new(), &budget, true);
    for &c in &inst.forced {
        if s.dlx.select_column(c).is_err() {
            // conflicting forced columns: the tree is empty, nothing to split
            return Ok(SplitResult { jobs: Vec::new(), nodes: 0 });
        }
        s.partial.push(c);
    }
    let mut jobs: Vec<PrefixJob> = Vec::new();
    let mut path: Vec<(u32, u32)> = Vec::new();

    fn descend(
        s: &mut Search<'_>,
        path: &mut Vec<(u32, u32)>,
        jobs: &mut Vec<PrefixJob>,
        excluded: &BTreeSet<u32>,
        level: u32,
    ) {
        if path.len() as u32 == level {
            jobs.push(PrefixJob { id: jobs.len() as u64, path: path.clone(), excluded: excluded.clone() });
            return;
        }
        let Some(item) = s.dlx.choose_item() else {
            // solution above the split level
            jobs.push(PrefixJob { id: jobs.len() as u64, path: path.clone(), excluded: excluded.clone() });
            return;
        };
        if s.dlx.len[item as usize] == 0 {
            return;
        }
        s.dlx.cover(item);
        let mut p = s.dlx.dlink[item as usize];
        while p != item {
            s.nodes += 1;
            s.dlx.commit(p);
            path.push((item - 1, s.dlx.column_of[p as usize]));
            descend(s, path, jobs, excluded, level);
            path.pop();
            s.dlx.uncommit(p);
            p = s.dlx.dlink[p as usize];
        }
        s.dlx.uncover(item);
    }

    let excluded = inst.excluded.clone();
    descend(&mut s, &mut path, &mut jobs, &excluded, level);
    Ok(SplitResult { jobs, nodes: s.nodes })
}

/// Knuth-style random-descent estimator of the search tree size (in nodes,
/// i.e. branch edges), using the same branching rule as the real search so
/// the estimate describes the actual tree. Unbiased; reproducible per seed.
pub fn estimate_tree_size(inst: &ExactCoverInstance, probes: u64, seed: u64) -> TreeEstimate {
    assert!(probes >= 1);
    let budget = Budget::UNLIMITED;
    let mut s = new_search(inst, &BTreeSet::new(), &budget, true);
    let mut forced_ok = true;
    for &c in &inst.forced {
        if s.dlx.select_column(c).is_err() {
            forced_ok = false;
            break;
        }
        s.partial.push(c);
    }
    if !forced_ok {
        // conflicting forced columns: the tree is empty
        return TreeEstimate { mean: 0.0, std_error: 0.0, probes };
    }
    let mut rng = SplitMix64::new(seed);
    let mut sum = 0.0f64;
    let mut sum_sq = 0.0f64;
    for _ in 0..probes {
        let mut estimate = 0.0f64;
        let mut weight = 1.0f64;
        let mut committed: Vec<(u32, u32)> = Vec::new(); // (item, node)
        // descend until a solution leaf (no item) or a dead leaf (d = 0)
        while let Some(item) = s.dlx.choose_item() {
            let d = s.dlx.len[item as usize];
            if d == 0 {
                break;
            }
            weight *= f64::from(d);
            estimate += weight;
            let idx = rng.below(u64::from(d));
            s.dlx.cover(item);
            let mut p = s.dlx.dlink[item as usize];
            for _ in 0..idx {
                p = s.dlx.dlink[p as usize];
            }
            s.dlx.commit(p);
            committed.push((item, p));
        }
        for &(item, p) in committed.iter().rev() {
            s.dlx.uncommit(p);
            s.dlx.uncover(item);
        }
        sum += estimate;
        sum_sq += estimate * estimate;
    }
    let n = probes as f64;
    let mean = sum / n;
    let variance = if probes > 1 { (sum_sq - sum * sum / n).max(0.0) / (n - 1.0) } else { 0.0 };
    TreeEstimate { mean, std_error: (variance / n).sqrt(), probes }
}

// ---------------------------------------------------------------------------
// job and outcome files
// ---------------------------------------------------------------------------

fn list_or_dash<T: fmt::Display>(items: impl ExactSizeIterator<Item = T>) -> String {
    if items.len() == 0 {
        "-".to_string()
    } else {
        items.map(|x| x.to_string()).collect::<Vec<_>>().join(",")
    }
}

/// Job file: one line per job,
/// `job <id> path <row:col,...> exclude <col,...>` with `-` for empty lists.
pub fn write_jobs_file(jobs: &[PrefixJob]) -> String {
    let mut s = String::new();
    for job in jobs {
        let path = list_or_dash(job.path.iter().map(|(r, c)| format!("{r}:{c}")));
        let excl = list_or_dash(job.excluded.iter());
        s.push_str(&format!("job {} path {} exclude {}\n", job.id, path, excl));
    }
    s
}

pub fn parse_jobs_file(text: &str) -> Result<Vec<PrefixJob>, SolverError> {
    let mut jobs = Vec::new();
    for line in text.lines().map(str::trim).filter(|l| !l.is_empty() && !l.starts_with('#')) {
        let toks: Vec<&str> = line.split_whitespace().collect();
        if toks.len() != 6 || toks[0] != "job" || toks[2] != "path" || toks[4] != "exclude" {
            return Err(SolverError::Parse(format!("bad job line {line:?}")));
        }
        let id: u64 =
            toks[1].parse().map_err(|_| SolverError::Parse(format!("bad job id {:?}", toks[1])))?;
        let mut path = Vec::new();
        if toks[3] != "-" {
            for pair in toks[3].split(',') {
                let (r, c) = pair
                    .split_once(':')
                    .ok_or_else(|| SolverError::Parse(format!("bad path step {pair:?}")))?;
                path.push((
                    r.parse().map_err(|_| SolverError::Parse(format!("bad row {r:?}")))?,
                    c.parse().map_err(|_| SolverError::Parse(format!("bad col {c:?}")))?,
                ));
            }
        }
        let mut excluded = BTreeSet::new();
        if toks[5] != "-" {
            for c in toks[5].split(',') {
                excluded
                    .insert(c.parse().map_err(|_| SolverError::Parse(format!("bad col {c:?}")))?);
            }
        }
        jobs.push(PrefixJob { id, path, excluded });
    }
    Ok(jobs)
}

/// One completed job in an outcome file.
#[derive(Clone, Debug)]
pub struct JobOutcome {
    pub job_id: u64,
    pub status: SolveStatus,
    pub nodes: u64,
    pub solutions: Vec<Vec<u32>>,
}

/// Outcome file: per job a `job <id> status <s> nodes <n> solutions <k>`
/// line followed by `k` `solution <col ...>` lines.
pub fn write_outcomes_file(outcomes: &[JobOutcome]) -> String {
    let mut s = String::new();
    for o in outcomes {
        s.push_str(&format!(
            "job {} status {} nodes {} solutions {}\n",
            o.job_id,
            o.status.token(),
            o.nodes,
            o.solutions.len()
        ));
        for sol in &o.solutions {
            s.push_str("solution");
            for c in sol {
                s.push_str(&format!(" {c}"));
            }
            s.push('\n');
        }
    }
    s
}

pub fn parse_outcomes_file(text: &str) -> Result<Vec<JobOutcome>, SolverError> {
    let mut out: Vec<JobOutcome> = Vec::new();
    for line in text.lines().map(str::trim).filter(|l| !l.is_empty() && !l.starts_with('#')) {
        let toks: Vec<&str> = line.split_whitespace().collect();
        if toks[0] == "job" {
            if toks.len() != 8 || toks[2] != "status" || toks[4] != "nodes" || toks[6] != "solutions" {
                return Err(SolverError::Parse(format!("bad outcome line {line:?}")));
            }
            out.push(JobOutcome {
                job_id: toks[1]
                    .parse()
                    .map_err(|_| SolverError::Parse(format!("bad job id {:?}", toks[1])))?,
                status: SolveStatus::from_token(toks[3])
                    .ok_or_else(|| SolverError::Parse(format!("bad status {:?}", toks[3])))?,
                nodes: toks[5]
                    .parse()
                    .map_err(|_| SolverError::Parse(format!("bad node count {:?}", toks[5])))?,
                solutions: Vec::new(),
            });
        } else if toks[0] == "solution" {
            let last = out
                .last_mut()
                .ok_or_else(|| SolverError::Parse("solution line before any job".into()))?;
            let sol: Result<Vec<u32>, _> = toks[1..].iter().map(|t| t.parse()).collect();
            last.solutions
                .push(sol.map_err(|_| SolverError::Parse(format!("bad solution line {line:?}")))?);
        } else {
            return Err(SolverError::Parse(format!("bad outcome line {line:?}")));
        }
    }
    Ok(out)
}

/// Reference enumerator used by the test suites as an independent oracle.
///
/// Plain include/exclude recursion over columns in id order with bitmask row
/// accounting; shares nothing with the dancing-links machinery. Only
/// suitable for small instances (up to 64 rows).
pub mod reference {
    use super::ExactCoverInstance;
    use crate::rng::SplitMix64;

    /// Seeded random instance in the shape the oracle tests use: up to
    /// `max_rows` x `max_cols`, mixed densities so both solvable and
    /// unsolvable instances occur.
    pub fn random_instance(
        rng: &mut SplitMix64,
        max_rows: u32,
        max_cols: u32,
    ) -> ExactCoverInstance {
        let rows = 1 + rng.below(u64::from(max_rows)) as u32;
        let cols = 1 + rng.below(u64::from(max_cols)) as usize;
        let density = 0.1 + rng.f64() * 0.4;
        let mut columns = Vec::with_capacity(cols);
        for _ in 0..cols {
            let mut covers: Vec<u32> = (0..rows).filter(|_| rng.chance(density)).collect();
            if covers.is_empty() {
                covers.push(rng.below(u64::from(rows)) as u32);
            }
            columns.push(covers);
        }
        ExactCoverInstance::new(rows, columns).expect("generated instance is well-formed")
    }

    pub fn solve_all(inst: &ExactCoverInstance) -> Vec<Vec<u32>> {
        assert!(inst.num_rows() <= 64, "reference oracle is for small instances");
        let full: u64 = if inst.num_rows() == 64 { !0 } else { (1 << inst.num_rows()) - 1 };
        let masks: Vec<Option<u64>> = (0..inst.num_columns() as u32)
            .map(|c| {
                if inst.excluded().contains(&c) {
                    None
                } else {
                    Some(inst.column(c).iter().fold(0u64, |m, &r| m | (1 << r)))
                }
            })
            .collect();
        let mut out = Vec::new();
        let mut chosen = Vec::new();
        recurse(&masks, full, 0, 0, &mut chosen, &mut out);
        // keep only solutions containing every forced column
        out.retain(|sol| inst.forced().iter().all(|c| sol.contains(c)));
        out
    }

    fn recurse(
        masks: &[Option<u64>],
        full: u64,
        covered: u64,
        next: usize,
        chosen: &mut Vec<u32>,
        out: &mut Vec<Vec<u32>>,
    ) {
        if covered == full {
            out.push(chosen.clone());
            // a further column would overlap; no proper superset can cover exactly
        }
        for c in next..masks.len() {
            if let Some(m) = masks[c] {
                if m & covered == 0 {
                    chosen.push(c as u32);
                    recurse(masks, full, covered | m, c + 1, chosen, out);
                    chosen.pop();
                }
            }
        }
    }
}
