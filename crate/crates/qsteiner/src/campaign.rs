//! The symmetry-breaking search campaign.
//!
//! The normalizer N of the prescribed group G permutes the columns of the
//! Kramer-Mesner matrix (the G-orbits of blocks), so the column set splits
//! into N-classes. Forcing one column of a class into the design and proving
//! the forced system unsolvable excludes the *whole* class: any solution
//! through an N-image of the column would map back to a solution through the
//! column itself. Classes that resist the probe budget get a second round of
//! *pair fixing*: with the class representative pinned, candidate partner
//! columns are grouped under the stabilizer of the representative's orbit,
//! and each (anchor, partner) pair is probed the same way. Whatever still
//! resists is split into prefix jobs for brute parallel search.
//!
//! Exclusions are applied as column deletions, always whole classes, never
//! fragments; every decision lands in an append-only ledger. A probe that
//! *finds* solutions surfaces them immediately - the campaign never discards
//! a design.

use std::collections::{BTreeSet, HashMap};
use std::fmt;
use std::io::Write as _;
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::path::Path;
use std::sync::atomic::{AtomicUsize, Ordering};
use std::sync::Mutex;
use std::time::{SystemTime, UNIX_EPOCH};

use crate::action::{canonical_in_orbit, orbit, stabilizer_of_orbit, ActionError};
use crate::gf2::Subspace;
use crate::group::{is_normalizing, GroupError, MatrixGroup};
use crate::km::{KMMatrix, KmError};
use crate::solver::{
    solve, solve_job, split_prefixes, Budget, ExactCoverInstance, JobOutcome, PrefixJob,
    SolveStatus, SolverError,
};

#[derive(Debug)]
pub enum CampaignError {
    Group(GroupError),
    Action(ActionError),
    Km(KmError),
    Solver(SolverError),
    /// The KM matrix must be lambda = 1 filtered before a campaign.
    NotFiltered,
    /// A checkpoint records a different outcome for an already-completed job.
    CheckpointConflict { job_id: u64 },
    /// A job panicked twice in a row.
    JobFailed { job_id: u64, message: String },
    Io(std::io::Error),
    Config(String),
}

impl fmt::Display for CampaignError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CampaignError::Group(e) => write!(f, "{e}"),
            CampaignError::Action(e) => write!(f, "{e}"),
            CampaignError::Km(e) => write!(f, "{e}"),
            CampaignError::Solver(e) => write!(f, "{e}"),
            CampaignError::NotFiltered => write!(f, "campaign requires a lambda=1 filtered matrix"),
            CampaignError::CheckpointConflict { job_id } => {
                write!(f, "checkpoint already records a different outcome for job {job_id}")
            }
            CampaignError::JobFailed { job_id, message } => {
                write!(f, "job {job_id} failed after retry: {message}")
            }
            CampaignError::Io(e) => write!(f, "io error: {e}"),
            CampaignError::Config(msg) => write!(f, "config error: {msg}"),
        }
    }
}

impl std::error::Error for CampaignError {}

impl From<GroupError> for CampaignError {
    fn from(e: GroupError) -> Self {
        CampaignError::Group(e)
    }
}
impl From<ActionError> for CampaignError {
    fn from(e: ActionError) -> Self {
        CampaignError::Action(e)
    }
}
impl From<KmError> for CampaignError {
    fn from(e: KmError) -> Self {
        CampaignError::Km(e)
    }
}
impl From<SolverError> for CampaignError {
    fn from(e: SolverError) -> Self {
        CampaignError::Solver(e)
    }
}
impl From<std::io::Error> for CampaignError {
    fn from(e: std::io::Error) -> Self {
        CampaignError::Io(e)
    }
}

/// Append-only decision ledger. Every line is timestamped on disk; the
/// deterministic view strips the timestamps so runs can be compared.
#[derive(Clone, Debug, Default)]
pub struct Ledger {
    events: Vec<(u64, String)>,
}

impl Ledger {
    fn log(&mut self, text: String) {
        let ts = SystemTime::now().duration_since(UNIX_EPOCH).map_or(0, |d| d.as_secs());
        self.events.push((ts, text));
    }

    pub fn to_text(&self) -> String {
        self.events.iter().map(|(ts, e)| format!("{ts} {e}\n")).collect()
    }

    /// Ledger content without timestamps; equal across identical runs.
    pub fn deterministic_text(&self) -> String {
        self.events.iter().map(|(_, e)| format!("{e}\n")).collect()
    }

    pub fn len(&self) -> usize {
        self.events.len()
    }

    pub fn is_empty(&self) -> bool {
        self.events.is_empty()
    }
}

/// One N-class of filtered KM columns.
#[derive(Clone, Debug)]
pub struct ColumnClass {
    pub id: usize,
    /// Filtered column ids, ascending.
    pub columns: Vec<u32>,
    /// The probing representative: the member whose orbit representative is
    /// canonically least (= lowest column id, since columns are rep-sorted).
    pub representative: u32,
}

/// Final disposition of a column when the campaign ends.
#[derive(Copy, Clone, Debug, PartialEq, Eq)]
pub enum ColumnState {
    ExcludedByClass,
    ExcludedByPair,
    /// The column's class is pinned under split jobs that have not finished.
    CoveredByHardSplit,
    /// Untouched or unresolved (only when budgets ran out).
    Open,
}

impl ColumnState {
    pub fn token(&self) -> &'static str {
        match self {
            ColumnState::ExcludedByClass => "excluded-by-class",
            ColumnState::ExcludedByPair => "excluded-by-pair",
            ColumnState::CoveredByHardSplit => "covered-by-hard-split",
            ColumnState::Open => "open",
        }
    }
}

#[derive(Copy, Clone, Debug, PartialEq, Eq)]
enum ClassStatus {
    Open,
    Hard,
    ExcludedByClass,
    ExcludedByPair,
    HardSplit,
}

/// Campaign state: the filtered system, the symmetry data, and what has been
/// excluded so far. Excluded columns always form unions of whole classes.
pub struct CampaignState {
    km: KMMatrix,
    base_instance: ExactCoverInstance,
    group: MatrixGroup,
    normalizer: MatrixGroup,
    classes: Vec<ColumnClass>,
    status: Vec<ClassStatus>,
    excluded_columns: BTreeSet<u32>,
    pub ledger: Ledger,
    /// Solutions surfaced by any probe, as filtered column id sets.
    pub solutions: Vec<Vec<u32>>,
}

impl CampaignState {
    /// Builds the state: verifies the normalizer, computes the induced
    /// column classes, and orders them ascending by (size, lowest column).
    pub fn new(
        km: KMMatrix,
        group: MatrixGroup,
        normalizer: MatrixGroup,
    ) -> Result<Self, CampaignError> {
        if !km.is_filtered() && km.entries().iter().any(|&(_, _, v)| v > 1) {
            return Err(CampaignError::NotFiltered);
        }
        for n in normalizer.generators() {
            if !is_normalizing(n, &group)? {
                return Err(CampaignError::Action(ActionError::NonNormalizing));
            }
        }
        let classes = column_classes(&km, &group, &normalizer)?;
        let status = vec![ClassStatus::Open; classes.len()];
        let base_instance = ExactCoverInstance::from_km(&km)?;
        Ok(CampaignState {
            km,
            base_instance,
            group,
            normalizer,
            classes,
            status,
            excluded_columns: BTreeSet::new(),
            ledger: Ledger::default(),
            solutions: Vec::new(),
        })
    }

    pub fn classes(&self) -> &[ColumnClass] {
        &self.classes
    }

    pub fn excluded_columns(&self) -> &BTreeSet<u32> {
        &self.excluded_columns
    }

    pub fn km(&self) -> &KMMatrix {
        &self.km
    }

    fn instance(&self) -> Result<ExactCoverInstance, CampaignError> {
        Ok(self
            .base_instance
            .clone()
            .with_excluded(self.excluded_columns.iter().copied())?)
    }

    /// Per-column final states for the ledger-completeness report.
    pub fn column_states(&self) -> Vec<ColumnState> {
        let mut states = vec![ColumnState::Open; self.km.ncols()];
        for (class, &st) in self.classes.iter().zip(&self.status) {
            let s = match st {
                ClassStatus::ExcludedByClass => ColumnState::ExcludedByClass,
                ClassStatus::ExcludedByPair => ColumnState::ExcludedByPair,
                ClassStatus::HardSplit => ColumnState::CoveredByHardSplit,
                ClassStatus::Open | ClassStatus::Hard => ColumnState::Open,
            };
            for &c in &class.columns {
                states[c as usize] = s;
            }
        }
        states
    }
}

/// Computes the partition of filtered columns under the induced normalizer
/// action, ordered ascending by (class size, lowest column id).
fn column_classes(
    km: &KMMatrix,
    group: &MatrixGroup,
    normalizer: &MatrixGroup,
) -> Result<Vec<ColumnClass>, CampaignError> {
    let index: HashMap<&Subspace, u32> = km
        .cols()
        .iter()
        .enumerate()
        .map(|(i, meta)| (&meta.representative, i as u32))
        .collect();
    let ncols = km.ncols();
    let mut parent: Vec<u32> = (0..ncols as u32).collect();
    fn find(parent: &mut [u32], mut x: u32) -> u32 {
        while parent[x as usize] != x {
            parent[x as usize] = parent[parent[x as usize] as usize];
            x = parent[x as usize];
        }
        x
    }
    for c in 0..ncols as u32 {
        for n in normalizer.generators() {
            let image = km.cols()[c as usize].representative.apply(n.matrix());
            let canon = canonical_in_orbit(&image, group)?;
            let Some(&j) = index.get(&canon) else {
                // the normalizer must permute the filtered column set
                return Err(CampaignError::Action(ActionError::NonNormalizing));
            };
            let (a, b) = (find(&mut parent, c), find(&mut parent, j));
            if a != b {
                parent[a.max(b) as usize] = a.min(b);
            }
        }
    }
    let mut groups: HashMap<u32, Vec<u32>> = HashMap::new();
    for c in 0..ncols as u32 {
        let root = find(&mut parent, c);
        groups.entry(root).or_default().push(c);
    }
    let mut classes: Vec<ColumnClass> = groups
        .into_values()
        .map(|mut columns| {
            columns.sort_unstable();
            ColumnClass { id: 0, columns: columns.clone(), representative: columns[0] }
        })
        .collect();
    classes.sort_by_key(|c| (c.columns.len(), c.representative));
    for (i, c) in classes.iter_mut().enumerate() {
        c.id = i;
    }
    Ok(classes)
}

/// Probe settings for the force-then-exclude loop and pair fixing.
#[derive(Clone, Debug)]
pub struct ProbeConfig {
    pub budget: Budget,
    /// Stop the whole campaign at the first surfaced design (the production
    /// setting); `false` keeps enumerating, which the equivalence tests use.
    pub stop_on_solution: bool,
}

#[derive(Clone, Debug)]
pub struct ClassProbe {
    pub class_id: usize,
    pub forced_column: u32,
    pub status: SolveStatus,
    pub nodes: u64,
    pub solutions_found: usize,
}

#[derive(Clone, Debug, Default)]
pub struct ExclusionReport {
    pub probes: Vec<ClassProbe>,
    pub newly_excluded: usize,
    pub stopped_on_solution: bool,
}

/// One pass of the force-then-exclude loop over all unresolved classes in
/// deterministic order.
///
/// For each class, the representative column is forced. An exhaustive
/// no-solution probe excludes the entire class (deleting its columns from
/// later probes); a budget-exhausted probe marks the class hard; solutions
/// are recorded - and, in enumeration mode, the class is excluded afterwards,
/// since every solution meeting the class is an N-image of a recorded one.
pub fn exclusion_loop(
    state: &mut CampaignState,
    config: &ProbeConfig,
) -> Result<ExclusionReport, CampaignError> {
    let mut report = ExclusionReport::default();
    for class_id in 0..state.classes.len() {
        if !matches!(state.status[class_id], ClassStatus::Open | ClassStatus::Hard) {
            continue;
        }
        let rep = state.classes[class_id].representative;
        let inst = state.instance()?.with_forced([rep])?;
        let out = solve(&inst, &config.budget, !config.stop_on_solution);
        report.probes.push(ClassProbe {
            class_id,
            forced_column: rep,
            status: out.status,
            nodes: out.nodes,
            solutions_found: out.solutions.len(),
        });
        match out.status {
            SolveStatus::ExhaustedNoSolution => {
                exclude_class(state, class_id, ClassStatus::ExcludedByClass);
                report.newly_excluded += 1;
            }
            SolveStatus::SolutionsFound => {
                state.ledger.log(format!("class {class_id} solutions {}", out.solutions.len()));
                state.solutions.extend(out.solutions);
                if config.stop_on_solution {
                    report.stopped_on_solution = true;
                    return Ok(report);
                }
                // exhaustive enumeration through the representative: all
                // other solutions meeting this class are N-images
                exclude_class(state, class_id, ClassStatus::ExcludedByClass);
                report.newly_excluded += 1;
            }
            SolveStatus::BudgetExhausted => {
                state.status[class_id] = ClassStatus::Hard;
                state.ledger.log(format!("class {class_id} hard"));
            }
        }
    }
    Ok(report)
}

fn exclude_class(state: &mut CampaignState, class_id: usize, how: ClassStatus) {
    debug_assert!(matches!(how, ClassStatus::ExcludedByClass | ClassStatus::ExcludedByPair));
    for &c in &state.classes[class_id].columns {
        state.excluded_columns.insert(c);
    }
    state.status[class_id] = how;
    state.ledger.log(format!("class {class_id} excluded"));
}

/// A pair-fixing task: the anchored column plus one stabilizer-class of
/// partner columns, probed through its least member.
#[derive(Clone, Debug)]
pub struct PairTask {
    pub anchor_column: u32,
    pub partner_column: u32,
    pub stabilizer_class_id: usize,
    /// All partner columns equivalent to `partner_column` under the
    /// stabilizer of the anchor's orbit.
    pub partner_class: Vec<u32>,
}

#[derive(Clone, Debug)]
pub struct PairProbe {
    pub task: PairTask,
    pub status: SolveStatus,
    pub nodes: u64,
    pub solutions_found: usize,
}

#[derive(Clone, Debug)]
pub struct PairReport {
    pub class_id: usize,
    pub anchor_column: u32,
    pub stabilizer_order: usize,
    pub task_count: usize,
    pub probes: Vec<PairProbe>,
    /// Pair tasks that exhausted their budget, with the column exclusions
    /// accumulated by the time the loop finished (sound to apply to all of
    /// them: those partners pair with the anchor in no solution).
    pub hard_tasks: Vec<(PairTask, BTreeSet<u32>)>,
    /// True when pair fixing resolved the class outright.
    pub class_excluded: bool,
    pub stopped_on_solution: bool,
}

/// Pair fixing for one hard class.
///
/// Partner columns (every unexcluded column except the anchor) are
/// partitioned under the stabilizer in N of the anchor's orbit; one probe per
/// stabilizer class, forcing both the anchor and the partner. An exhaustive
/// no-solution probe kills the whole stabilizer class of pairs, whose columns
/// are then dead *within the anchored subproblem* and are excluded from the
/// remaining probes. If every task exhausts (and the anchor alone is not a
/// solution), no solution contains the anchor, so the hard class itself is
/// excluded.
pub fn pair_fixing(
    state: &mut CampaignState,
    class_id: usize,
    config: &ProbeConfig,
) -> Result<PairReport, CampaignError> {
    let anchor = state.classes[class_id].representative;
    let anchor_orbit = orbit(&state.km.cols()[anchor as usize].representative, &state.group);
    let stab = stabilizer_of_orbit(&state.normalizer, &anchor_orbit, &state.group)?;

    // partition eligible partners under the stabilizer
    let index: HashMap<&Subspace, u32> = state
        .km
        .cols()
        .iter()
        .enumerate()
        .map(|(i, meta)| (&meta.representative, i as u32))
        .collect();
    let eligible: Vec<u32> = (0..state.km.ncols() as u32)
        .filter(|c| *c != anchor && !state.excluded_columns.contains(c))
        .collect();
    let eligible_set: BTreeSet<u32> = eligible.iter().copied().collect();
    let mut class_of: HashMap<u32, usize> = HashMap::new();
    let mut partner_classes: Vec<Vec<u32>> = Vec::new();
    for &p in &eligible {
        if class_of.contains_key(&p) {
            continue;
        }
        let mut members = BTreeSet::new();
        for s in stab.elements()? {
            let image = state.km.cols()[p as usize].representative.apply(s.matrix());
            let canon = canonical_in_orbit(&image, &state.group)?;
            let &q = index
                .get(&canon)
                .ok_or(CampaignError::Action(ActionError::NonNormalizing))?;
            debug_assert!(eligible_set.contains(&q) || q == anchor);
            if q != anchor {
                members.insert(q);
            }
        }
        let id = partner_classes.len();
        for &m in &members {
            class_of.insert(m, id);
        }
        partner_classes.push(members.into_iter().collect());
    }
    // deterministic task order: ascending (class size, least partner)
    let mut order: Vec<usize> = (0..partner_classes.len()).collect();
    order.sort_by_key(|&i| (partner_classes[i].len(), partner_classes[i][0]));

    let mut report = PairReport {
        class_id,
        anchor_column: anchor,
        stabilizer_order: stab.order().unwrap_or(0),
        task_count: order.len(),
        probes: Vec::new(),
        hard_tasks: Vec::new(),
        class_excluded: false,
        stopped_on_solution: false,
    };

    // degenerate case: the anchor alone already covers everything
    let anchor_alone_solves =
        state.km.column_incidences(anchor).len() == state.km.nrows();
    if anchor_alone_solves {
        state.ledger.log(format!("pair anchor {anchor} alone is a solution"));
        state.solutions.push(vec![anchor]);
        if config.stop_on_solution {
            report.stopped_on_solution = true;
            return Ok(report);
        }
    }

    // columns proven dead within the anchored subproblem
    let mut dead_partners: BTreeSet<u32> = BTreeSet::new();
    let mut all_exhausted = true;
    for (rank, &pc) in order.iter().enumerate() {
        let partner = partner_classes[pc][0];
        let task = PairTask {
            anchor_column: anchor,
            partner_column: partner,
            stabilizer_class_id: rank,
            partner_class: partner_classes[pc].clone(),
        };
        if dead_partners.contains(&partner) {
            // already excluded inside this subproblem by an earlier task
            continue;
        }
        let inst = state
            .instance()?
            .with_excluded(dead_partners.iter().copied())?
            .with_forced([anchor, partner])?;
        let out = solve(&inst, &config.budget, !config.stop_on_solution);
        report.probes.push(PairProbe {
            task: task.clone(),
            status: out.status,
            nodes: out.nodes,
            solutions_found: out.solutions.len(),
        });
        match out.status {
            SolveStatus::ExhaustedNoSolution => {
                state.ledger.log(format!("pair {anchor},{partner} excluded"));
                dead_partners.extend(task.partner_class.iter().copied());
            }
            SolveStatus::SolutionsFound => {
                state
                    .ledger
                    .log(format!("pair {anchor},{partner} solutions {}", out.solutions.len()));
                state.solutions.extend(out.solutions);
                all_exhausted = false;
                if config.stop_on_solution {
                    report.stopped_on_solution = true;
                    return Ok(report);
                }
                // enumeration mode: solutions through (anchor, partner-class)
                // are all recorded up to stabilizer action; the class of
                // pairs is done
                dead_partners.extend(task.partner_class.iter().copied());
            }
            SolveStatus::BudgetExhausted => {
                state.ledger.log(format!("pair {anchor},{partner} hard"));
                all_exhausted = false;
                report.hard_tasks.push((task, BTreeSet::new()));
            }
        }
    }
    // hard tasks inherit the final dead-partner set
    for (_, excl) in &mut report.hard_tasks {
        *excl = dead_partners.clone();
    }

    if all_exhausted && !anchor_alone_solves {
        // no solution contains the anchor column at all, hence none contains
        // any column of its N-class
        exclude_class(state, class_id, ClassStatus::ExcludedByPair);
        report.class_excluded = true;
    } else if !report.hard_tasks.is_empty() {
        state.status[class_id] = ClassStatus::HardSplit;
        state.ledger.log(format!("class {class_id} split"));
    }
    Ok(report)
}

// ---------------------------------------------------------------------------
// parallel job runner
// ---------------------------------------------------------------------------

/// Aggregate of a job batch, deterministic given the jobs and budgets.
#[derive(Clone, Debug)]
pub struct RunAggregate {
    /// Per-job outcomes sorted by job id.
    pub outcomes: Vec<JobOutcome>,
    pub total_nodes: u64,
    pub status: SolveStatus,
    /// Solutions concatenated in job-id order.
    pub solutions: Vec<Vec<u32>>,
    /// Jobs skipped because the checkpoint already had them.
    pub resumed: usize,
}

/// Executes prefix jobs on an in-process work queue.
///
/// Jobs share the immutable instance and nothing else; aggregation sorts by
/// job id, so the outcome is identical for any worker count. A checkpoint
/// file (outcome-file format) is appended as jobs finish; on resume, already
/// recorded jobs are skipped, and a conflicting record for the same job id is
/// an error. A job that panics is re-queued once, then reported as failed.
pub fn run_jobs(
    inst: &ExactCoverInstance,
    jobs: &[PrefixJob],
    workers: usize,
    budget: &Budget,
    want_all: bool,
    checkpoint: Option<&Path>,
) -> Result<RunAggregate, CampaignError> {
    let workers = workers.max(1);
    let mut done: HashMap<u64, JobOutcome> = HashMap::new();
    if let Some(path) = checkpoint {
        if path.exists() {
            let text = std::fs::read_to_string(path)?;
            for outcome in crate::solver::parse_outcomes_file(&text)? {
                if let Some(prev) = done.get(&outcome.job_id) {
                    if prev.nodes != outcome.nodes
                        || prev.status != outcome.status
                        || prev.solutions != outcome.solutions
                    {
                        return Err(CampaignError::CheckpointConflict { job_id: outcome.job_id });
                    }
                    continue;
                }
                done.insert(outcome.job_id, outcome);
            }
        }
    }
    let resumed = jobs.iter().filter(|j| done.contains_key(&j.id)).count();
    let pending: Vec<&PrefixJob> = jobs.iter().filter(|j| !done.contains_key(&j.id)).collect();

    let next = AtomicUsize::new(0);
    let retry: Mutex<Vec<usize>> = Mutex::new(Vec::new());
    let failures: Mutex<Vec<(u64, String)>> = Mutex::new(Vec::new());
    let results: Mutex<Vec<JobOutcome>> = Mutex::new(Vec::new());
    let checkpoint_file: Option<Mutex<std::fs::File>> = match checkpoint {
        Some(path) => Some(Mutex::new(
            std::fs::OpenOptions::new().create(true).append(true).open(path)?,
        )),
        None => None,
    };
    let retried: Mutex<BTreeSet<usize>> = Mutex::new(BTreeSet::new());

    std::thread::scope(|scope| {
        for _ in 0..workers {
            scope.spawn(|| loop {
                let idx = {
                    let from_retry = retry.lock().unwrap().pop();
                    match from_retry {
                        Some(i) => i,
                        None => {
                            let i = next.fetch_add(1, Ordering::SeqCst);
                            if i >= pending.len() {
                                return;
                            }
                            i
                        }
                    }
                };
                let job = pending[idx];
                let run = catch_unwind(AssertUnwindSafe(|| solve_job(inst, job, budget, want_all)));
                match run {
                    Ok(Ok(outcome)) => {
                        let job_outcome = JobOutcome {
                            job_id: job.id,
                            status: outcome.status,
                            nodes: outcome.nodes,
                            solutions: outcome.solutions,
                        };
                        if let Some(file) = &checkpoint_file {
                            let mut f = file.lock().unwrap();
                            let _ = f.write_all(
                                crate::solver::write_outcomes_file(std::slice::from_ref(
                                    &job_outcome,
                                ))
                                .as_bytes(),
                            );
                            let _ = f.flush();
                        }
                        results.lock().unwrap().push(job_outcome);
                    }
                    Ok(Err(e)) => {
                        failures.lock().unwrap().push((job.id, e.to_string()));
                    }
                    Err(panic) => {
                        let msg = panic
                            .downcast_ref::<&str>()
                            .map(|s| s.to_string())
                            .or_else(|| panic.downcast_ref::<String>().cloned())
                            .unwrap_or_else(|| "panic".to_string());
                        let mut retried = retried.lock().unwrap();
                        if retried.insert(idx) {
                            retry.lock().unwrap().push(idx);
                        } else {
                            failures.lock().unwrap().push((job.id, msg));
                        }
                    }
                }
            });
        }
    });

    let failures = failures.into_inner().unwrap();
    if let Some(&(job_id, ref message)) = failures.first() {
        return Err(CampaignError::JobFailed { job_id, message: message.clone() });
    }
    let mut outcomes: Vec<JobOutcome> = results.into_inner().unwrap();
    outcomes.extend(jobs.iter().filter_map(|j| done.get(&j.id).cloned()));
    outcomes.sort_by_key(|o| o.job_id);

    let total_nodes = outcomes.iter().map(|o| o.nodes).sum();
    let any_budget = outcomes.iter().any(|o| o.status == SolveStatus::BudgetExhausted);
    let solutions: Vec<Vec<u32>> =
        outcomes.iter().flat_map(|o| o.solutions.iter().cloned()).collect();
    let status = if any_budget {
        SolveStatus::BudgetExhausted
    } else if solutions.is_empty() {
        SolveStatus::ExhaustedNoSolution
    } else {
        SolveStatus::SolutionsFound
    };
    Ok(RunAggregate { outcomes, total_nodes, status, solutions, resumed })
}

// ---------------------------------------------------------------------------
// campaign driver
// ---------------------------------------------------------------------------

/// Driver settings; all limits are deterministic when the probe budget is a
/// node budget.
#[derive(Clone, Debug)]
pub struct CampaignConfig {
    pub probe: ProbeConfig,
    /// Maximum alternations of exclusion pass and pair fixing.
    pub rounds: usize,
    /// Prefix-split depth for hard pair tasks.
    pub level: u32,
    /// How many hard pair tasks to split and run (0 = none).
    pub split_tasks: usize,
    /// Per-job budget for split runs.
    pub job_budget: Budget,
    pub workers: usize,
    /// Directory for per-split checkpoint files, enabling resume.
    pub checkpoint_dir: Option<std::path::PathBuf>,
}

#[derive(Copy, Clone, Debug, PartialEq, Eq)]
pub enum CampaignVerdict {
    /// At least one design was found and surfaced.
    DesignsFound,
    /// Every class was excluded by an exhaustive argument: no design exists.
    NoDesignExists,
    /// Budgets ran out with classes still open.
    Inconclusive,
}

/// One hard pair task that was prefix-split and run.
#[derive(Clone, Debug)]
pub struct SplitRun {
    pub anchor_column: u32,
    pub partner_column: u32,
    pub level: u32,
    pub jobs: Vec<PrefixJob>,
    pub aggregate: RunAggregate,
}

#[derive(Clone, Debug)]
pub struct CampaignReport {
    pub class_sizes: Vec<usize>,
    pub exclusion_reports: Vec<ExclusionReport>,
    pub pair_reports: Vec<PairReport>,
    pub split_runs: Vec<SplitRun>,
    pub column_states: Vec<ColumnState>,
    pub solutions: Vec<Vec<u32>>,
    pub verdict: CampaignVerdict,
    pub ledger_text: String,
    pub deterministic_ledger: String,
}

/// Runs the full campaign: alternating exclusion passes and pair fixing on
/// the first hard class, then prefix-splitting whatever pairs remain hard.
pub fn run_campaign(
    km: KMMatrix,
    group: MatrixGroup,
    normalizer: MatrixGroup,
    config: &CampaignConfig,
) -> Result<CampaignReport, CampaignError> {
    let mut state = CampaignState::new(km, group, normalizer)?;
    let class_sizes: Vec<usize> = state.classes().iter().map(|c| c.columns.len()).collect();
    let mut exclusion_reports = Vec::new();
    let mut pair_reports: Vec<PairReport> = Vec::new();
    let mut split_runs = Vec::new();
    let mut stopped = false;

    'rounds: for _ in 0..config.rounds.max(1) {
        let report = exclusion_loop(&mut state, &config.probe)?;
        let stopped_now = report.stopped_on_solution;
        let progress = report.newly_excluded > 0;
        exclusion_reports.push(report);
        if stopped_now {
            stopped = true;
            break 'rounds;
        }
        let Some(hard) =
            (0..state.classes.len()).find(|&i| state.status[i] == ClassStatus::Hard)
        else {
            break 'rounds; // nothing hard left
        };
        let pr = pair_fixing(&mut state, hard, &config.probe)?;
        let stopped_now = pr.stopped_on_solution;
        let resolved = pr.class_excluded;
        pair_reports.push(pr);
        if stopped_now {
            stopped = true;
            break 'rounds;
        }
        if !resolved && !progress {
            break 'rounds; // no movement; splitting is the only option left
        }
    }

    // split and run hard pair tasks
    if !stopped && config.split_tasks > 0 {
        let hard_tasks: Vec<(PairTask, BTreeSet<u32>)> = pair_reports
            .iter()
            .flat_map(|r| r.hard_tasks.iter().cloned())
            .take(config.split_tasks)
            .collect();
        for (task, dead) in hard_tasks {
            let inst = state
                .instance()?
                .with_excluded(dead.iter().copied())?
                .with_forced([task.anchor_column, task.partner_column])?;
            let split = split_prefixes(&inst, config.level)?;
            state.ledger.log(format!(
                "pair {},{} split level {} jobs {}",
                task.anchor_column,
                task.partner_column,
                config.level,
                split.jobs.len()
            ));
            let checkpoint = config.checkpoint_dir.as_ref().map(|dir| {
                dir.join(format!(
                    "checkpoint-pair-{}-{}.txt",
                    task.anchor_column, task.partner_column
                ))
            });
            let agg = run_jobs(
                &inst,
                &split.jobs,
                config.workers,
                &config.job_budget,
                !config.probe.stop_on_solution,
                checkpoint.as_deref(),
            )?;
            for o in &agg.outcomes {
                state
                    .ledger
                    .log(format!("job {} done status {} nodes {}", o.job_id, o.status.token(), o.nodes));
            }
            if !agg.solutions.is_empty() {
                state
                    .ledger
                    .log(format!("pair {},{} solutions {}", task.anchor_column, task.partner_column, agg.solutions.len()));
                state.solutions.extend(agg.solutions.iter().cloned());
            }
            split_runs.push(SplitRun {
                anchor_column: task.anchor_column,
                partner_column: task.partner_column,
                level: config.level,
                jobs: split.jobs,
                aggregate: agg,
            });
        }
    }

    let column_states = state.column_states();
    let verdict = if !state.solutions.is_empty() {
        CampaignVerdict::DesignsFound
    } else if column_states.iter().all(|s| {
        matches!(s, ColumnState::ExcludedByClass | ColumnState::ExcludedByPair)
    }) {
        CampaignVerdict::NoDesignExists
    } else {
        CampaignVerdict::Inconclusive
    };
    Ok(CampaignReport {
        class_sizes,
        exclusion_reports,
        pair_reports,
        split_runs,
        column_states,
        solutions: state.solutions.clone(),
        verdict,
        ledger_text: state.ledger.to_text(),
        deterministic_ledger: state.ledger.deterministic_text(),
    })
}

// ---------------------------------------------------------------------------
// campaign config files
// ---------------------------------------------------------------------------

/// Key-value campaign configuration as read from disk. Paths are resolved by
/// the caller.
#[derive(Clone, Debug, Default, PartialEq)]
pub struct CampaignFileConfig {
    pub group: String,
    pub normalizer: String,
    pub v: u32,
    pub t: u32,
    pub k: u32,
    pub lambda: u64,
    pub probe_nodes: Option<u64>,
    pub probe_seconds: Option<u64>,
    pub job_nodes: Option<u64>,
    pub level: u32,
    pub workers: usize,
    pub split_tasks: usize,
    pub rounds: usize,
    pub stop_on_solution: bool,
    pub out_dir: String,
}

pub fn parse_campaign_config(text: &str) -> Result<CampaignFileConfig, CampaignError> {
    let mut cfg = CampaignFileConfig {
        lambda: 1,
        level: 2,
        workers: 1,
        split_tasks: 1,
        rounds: 2,
        stop_on_solution: true,
        out_dir: ".".to_string(),
        ..Default::default()
    };
    let mut seen_required = [false; 5];
    for line in text.lines().map(str::trim).filter(|l| !l.is_empty() && !l.starts_with('#')) {
        let (key, value) = line
            .split_once('=')
            .ok_or_else(|| CampaignError::Config(format!("bad config line {line:?}")))?;
        let (key, value) = (key.trim(), value.trim());
        let parse_u64 = |v: &str| {
            v.parse::<u64>().map_err(|_| CampaignError::Config(format!("bad number {v:?} for {key}")))
        };
        match key {
            "group" => {
                cfg.group = value.to_string();
                seen_required[0] = true;
            }
            "normalizer" => {
                cfg.normalizer = value.to_string();
                seen_required[1] = true;
            }
            "v" => {
                cfg.v = parse_u64(value)? as u32;
                seen_required[2] = true;
            }
            "t" => {
                cfg.t = parse_u64(value)? as u32;
                seen_required[3] = true;
            }
            "k" => {
                cfg.k = parse_u64(value)? as u32;
                seen_required[4] = true;
            }
            "lambda" => cfg.lambda = parse_u64(value)?,
            "probe_nodes" => cfg.probe_nodes = Some(parse_u64(value)?),
            "probe_seconds" => cfg.probe_seconds = Some(parse_u64(value)?),
            "job_nodes" => cfg.job_nodes = Some(parse_u64(value)?),
            "level" => cfg.level = parse_u64(value)? as u32,
            "workers" => cfg.workers = parse_u64(value)? as usize,
            "split_tasks" => cfg.split_tasks = parse_u64(value)? as usize,
            "rounds" => cfg.rounds = parse_u64(value)? as usize,
            "stop_on_solution" => cfg.stop_on_solution = parse_u64(value)? != 0,
            "out" => cfg.out_dir = value.to_string(),
            _ => return Err(CampaignError::Config(format!("unknown config key {key:?}"))),
        }
    }
    if seen_required.iter().any(|&s| !s) {
        return Err(CampaignError::Config(
            "config requires group=, normalizer=, v=, t=, k=".to_string(),
        ));
    }
    Ok(cfg)
}
