//! Turning solver runs into trainable objectives.
//!
//! A training session fixes a problem suite, derives per-problem convergence
//! cut-offs from a baseline run of the starting configuration, and then lets
//! the deterministic meta-search adjust the solver parameters against one of
//! four objectives:
//!
//! - `average`: total evaluations to cut-off, failures charged at the budget
//!   (minimized);
//! - `robust`: the worst `average` value over a small box around the
//!   candidate, a guard against brittle parameter choices (minimized);
//! - `data-profile`: area under the candidate's data profile over a budget
//!   window (maximized);
//! - `perf-profile`: area under the candidate's performance profile minus
//!   the baseline's, both computed from the pairwise comparison (maximized).
//!
//! Every piece here is a pure function of its inputs, so training runs are
//! reproducible and cached solver runs can be substituted freely for fresh
//! ones.

use std::fmt;
use std::str::FromStr;

use crate::error::Error;
use crate::exec::Executor;
use crate::profiles::{
    data_profile, performance_profile, staircase_area, MeasureTable, ProblemTag,
};
use crate::solver::{
    evals_to_target, meta_solve, solve, ParamConfig, ParamSpace, RunTrace, SolverSettings,
};
use crate::store::{RunKey, Store};
use crate::testbed::{builtin_suite, Problem, ProblemSuite};

const SESSION_HEADER: &str = "proftune-session v1";

/// Objective used by [`train`].
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Strategy {
    Average,
    Robust,
    DataProfile,
    PerfProfile,
}

impl Strategy {
    pub const ALL: [Strategy; 4] = [
        Strategy::Average,
        Strategy::Robust,
        Strategy::DataProfile,
        Strategy::PerfProfile,
    ];

    /// Whether larger objective values are better.
    pub fn maximizes(self) -> bool {
        matches!(self, Strategy::DataProfile | Strategy::PerfProfile)
    }

    /// How the reported gain is computed: minimizing strategies report the
    /// relative reduction against the start, maximizing ones the raw area
    /// improvement.
    pub fn gain_kind(self) -> &'static str {
        if self.maximizes() {
            "area-improvement"
        } else {
            "relative-reduction"
        }
    }
}

impl fmt::Display for Strategy {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Strategy::Average => "average",
            Strategy::Robust => "robust",
            Strategy::DataProfile => "data-profile",
            Strategy::PerfProfile => "perf-profile",
        })
    }
}

impl FromStr for Strategy {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self, Error> {
        match s {
            "average" => Ok(Strategy::Average),
            "robust" => Ok(Strategy::Robust),
            "data" | "data-profile" => Ok(Strategy::DataProfile),
            "perf" | "perf-profile" => Ok(Strategy::PerfProfile),
            other => Err(Error::InvalidArgument(format!(
                "unknown strategy `{other}` (expected average, robust, data-profile, or perf-profile)"
            ))),
        }
    }
}

/// Convergence cut-off for one problem.
#[derive(Debug, Clone, PartialEq)]
pub struct CutoffEntry {
    pub problem: String,
    pub dimension: usize,
    /// Objective at the problem's start point.
    pub f_start: f64,
    /// Best value the baseline run reached.
    pub f_star: f64,
    /// Target a run must reach to count as converged.
    pub cutoff: f64,
}

/// Cut-offs for a whole suite, in suite order.
#[derive(Debug, Clone, PartialEq)]
pub struct CutoffTable {
    pub chi: f64,
    pub entries: Vec<CutoffEntry>,
}

impl CutoffTable {
    pub fn entry(&self, problem: &str) -> Option<&CutoffEntry> {
        self.entries.iter().find(|e| e.problem == problem)
    }
}

/// Interpolates between the baseline's best value (`chi` = 0) and the start
/// value (`chi` = 1). The endpoints are returned verbatim so that cut-offs at
/// them are bitwise exact.
fn convex_cutoff(f_start: f64, f_star: f64, chi: f64) -> f64 {
    if chi == 0.0 {
        f_star
    } else if chi == 1.0 {
        f_start
    } else {
        f_star + chi * (f_start - f_star)
    }
}

/// Runs a trace through the store when one is given, otherwise solves
/// directly. Either path yields the identical trace: runs are deterministic
/// and the trace text format is lossless.
pub fn obtain_trace(
    store: Option<&Store>,
    problem: &Problem,
    config: &ParamConfig,
    settings: &SolverSettings,
) -> Result<RunTrace, Error> {
    match store {
        Some(store) => store.get_or_run(&RunKey::new(problem, config, settings), || {
            solve(problem, config, settings)
        }),
        None => Ok(solve(problem, config, settings)),
    }
}

/// Derives the cut-off table for a suite from baseline runs of `config` at
/// `settings`. Because the baseline run itself reaches `f_star`, measuring
/// the same configuration at the same settings afterwards always succeeds on
/// every problem.
pub fn compute_cutoffs(
    suite: &ProblemSuite,
    config: &ParamConfig,
    settings: &SolverSettings,
    chi: f64,
    exec: &Executor,
    store: Option<&Store>,
) -> Result<CutoffTable, Error> {
    if !(chi.is_finite() && (0.0..=1.0).contains(&chi)) {
        return Err(Error::InvalidArgument(format!(
            "chi must lie in [0, 1], got {chi}"
        )));
    }
    let entries = exec
        .map(suite.problems(), |problem| {
            let trace = obtain_trace(store, problem, config, settings)?;
            let f_start = trace.start_value();
            let f_star = trace.final_best();
            Ok(CutoffEntry {
                problem: problem.name().to_string(),
                dimension: problem.dimension(),
                f_start,
                f_star,
                cutoff: convex_cutoff(f_start, f_star, chi),
            })
        })
        .into_iter()
        .collect::<Result<Vec<_>, Error>>()?;
    Ok(CutoffTable { chi, entries })
}

/// Per-problem evaluation counts for one configuration: `None` where the run
/// never reached the cut-off.
#[derive(Debug, Clone, PartialEq)]
pub struct MeasureRow {
    tags: Vec<ProblemTag>,
    measures: Vec<Option<u64>>,
}

impl MeasureRow {
    pub fn new(tags: Vec<ProblemTag>, measures: Vec<Option<u64>>) -> Self {
        assert_eq!(tags.len(), measures.len(), "ragged measure row");
        MeasureRow { tags, measures }
    }

    pub fn tags(&self) -> &[ProblemTag] {
        &self.tags
    }

    pub fn measures(&self) -> &[Option<u64>] {
        &self.measures
    }

    /// Single-solver table, for data profiles.
    pub fn to_table(&self, label: &str) -> MeasureTable {
        MeasureTable::from_columns(
            self.tags.clone(),
            vec![(label.to_string(), self.measures.clone())],
        )
    }
}

/// Two-solver table over the same problems, baseline first.
pub fn pair_table(baseline: &MeasureRow, candidate: &MeasureRow) -> MeasureTable {
    assert_eq!(
        baseline.tags, candidate.tags,
        "rows measure different problem sets"
    );
    MeasureTable::from_columns(
        baseline.tags.clone(),
        vec![
            ("baseline".to_string(), baseline.measures.clone()),
            ("candidate".to_string(), candidate.measures.clone()),
        ],
    )
}

/// Measures one configuration against a cut-off table: runs every problem at
/// `settings` and records the evaluations needed to reach its cut-off.
pub fn measure_config(
    suite: &ProblemSuite,
    cutoffs: &CutoffTable,
    config: &ParamConfig,
    settings: &SolverSettings,
    exec: &Executor,
    store: Option<&Store>,
) -> Result<MeasureRow, Error> {
    assert_eq!(
        suite.len(),
        cutoffs.entries.len(),
        "cut-off table does not match the suite"
    );
    let indices: Vec<usize> = (0..suite.len()).collect();
    let measures = exec
        .map(&indices, |&i| {
            let problem = &suite.problems()[i];
            let entry = &cutoffs.entries[i];
            assert_eq!(problem.name(), entry.problem, "cut-off table out of order");
            let trace = obtain_trace(store, problem, config, settings)?;
            Ok(evals_to_target(&trace, entry.cutoff))
        })
        .into_iter()
        .collect::<Result<Vec<_>, Error>>()?;
    let tags = suite
        .problems()
        .iter()
        .map(|p| ProblemTag {
            name: p.name().to_string(),
            dimension: p.dimension(),
        })
        .collect();
    Ok(MeasureRow::new(tags, measures))
}

/// Total evaluations to cut-off across the row, charging failures at the
/// full budget. Lower is better; the value is always finite and positive.
pub fn phi_average(row: &MeasureRow, budget: u64) -> f64 {
    row.measures
        .iter()
        .map(|t| t.unwrap_or(budget) as f64)
        .sum()
}

/// Area under the row's data profile over `window`. Higher is better.
pub fn phi_data(row: &MeasureRow, window: (f64, f64)) -> Result<f64, Error> {
    let table = row.to_table("candidate");
    let curve = data_profile(&table, "candidate");
    staircase_area(&curve, window.0, window.1)
}

/// Area under the candidate's performance profile minus the baseline's, both
/// from the pairwise table. Higher is better; a candidate measuring exactly
/// like the baseline scores exactly 0.
pub fn phi_perf(row: &MeasureRow, baseline: &MeasureRow, window: (f64, f64)) -> Result<f64, Error> {
    let table = pair_table(baseline, row);
    let candidate = staircase_area(
        &performance_profile(&table, "candidate"),
        window.0,
        window.1,
    )?;
    let base = staircase_area(&performance_profile(&table, "baseline"), window.0, window.1)?;
    Ok(candidate - base)
}

/// Perturbation box probed by the robust objective: each continuous
/// parameter varies by five percent of its value (clipped to `space`), the
/// integer one not at all.
pub fn robust_box(center: &ParamConfig, space: &ParamSpace) -> ParamSpace {
    let mut lower = *center;
    let mut upper = *center;
    for i in 0..5 {
        let v = center.continuous(i);
        lower.set_continuous(i, (v * 0.95).max(space.lower.continuous(i)));
        upper.set_continuous(i, (v * 1.05).min(space.upper.continuous(i)));
    }
    ParamSpace { lower, upper }
}

/// Trials spent searching the perturbation box for each robust evaluation.
pub const ROBUST_INNER_CAP: u64 = 20;

/// Worst `average` objective over the perturbation box around `center`,
/// found by an inner meta-search. The center is evaluated first, so the
/// result is never below the center's own `average` value.
#[allow(clippy::too_many_arguments)]
pub fn phi_robust(
    center: &ParamConfig,
    suite: &ProblemSuite,
    cutoffs: &CutoffTable,
    space: &ParamSpace,
    settings: &SolverSettings,
    eps_inner: f64,
    exec: &Executor,
    store: Option<&Store>,
) -> Result<f64, Error> {
    let perturbations = robust_box(center, space);
    let worst = meta_solve(
        |q| {
            let row = measure_config(suite, cutoffs, q, settings, exec, store)?;
            Ok(-phi_average(&row, settings.budget))
        },
        &perturbations,
        center,
        ROBUST_INNER_CAP,
        eps_inner,
    )?;
    Ok(-worst.1)
}

/// Everything a training session depends on.
#[derive(Debug, Clone, PartialEq)]
pub struct TrainingSpec {
    pub strategy: Strategy,
    pub suite: String,
    pub start: ParamConfig,
    pub space: ParamSpace,
    /// Cut-off looseness: 0 demands the baseline's final value, 1 accepts
    /// the start value.
    pub chi: f64,
    /// Data-profile window, in budget units of `dimension + 1` evaluations.
    pub data_window: (f64, f64),
    /// Performance-profile window, in performance ratios.
    pub perf_window: (f64, f64),
    /// Objective evaluations granted to the meta-search.
    pub trial_cap: u64,
    /// Convergence threshold of the measured solver runs.
    pub eps_run: f64,
    /// Convergence threshold of the meta-search.
    pub eps_meta: f64,
    /// Convergence threshold of the robust objective's inner search.
    pub eps_inner: f64,
    /// Evaluation budget of each measured run.
    pub budget: u64,
    pub seed: u64,
}

impl Default for TrainingSpec {
    fn default() -> Self {
        TrainingSpec {
            strategy: Strategy::Average,
            suite: "default".to_string(),
            start: ParamConfig::default(),
            space: ParamSpace::default(),
            chi: 1e-4,
            data_window: (0.0, 2000.0),
            perf_window: (1.0, 20.0),
            trial_cap: 200,
            eps_run: 1e-12,
            eps_meta: 1e-2,
            eps_inner: 1e-1,
            budget: 10_000,
            seed: 42,
        }
    }
}

impl TrainingSpec {
    pub fn validate(&self) -> Result<(), Error> {
        self.space.validate()?;
        if !self.space.contains(&self.start) {
            return Err(Error::InvalidConfig(
                "start configuration lies outside the search box".to_string(),
            ));
        }
        if !(self.chi.is_finite() && (0.0..=1.0).contains(&self.chi)) {
            return Err(Error::InvalidArgument(format!(
                "chi must lie in [0, 1], got {}",
                self.chi
            )));
        }
        let (dlo, dhi) = self.data_window;
        if !(dlo.is_finite() && dhi.is_finite() && dlo >= 0.0 && dlo < dhi) {
            return Err(Error::InvalidWindow {
                lo: dlo,
                hi: dhi,
                reason: "data window needs 0 <= lower < upper".to_string(),
            });
        }
        let (plo, phi) = self.perf_window;
        if !(plo.is_finite() && phi.is_finite() && plo >= 1.0 && plo < phi) {
            return Err(Error::InvalidWindow {
                lo: plo,
                hi: phi,
                reason: "performance window needs 1 <= lower < upper".to_string(),
            });
        }
        if self.trial_cap == 0 {
            return Err(Error::InvalidArgument(
                "trial cap must be at least 1".to_string(),
            ));
        }
        for (label, eps) in [
            ("run", self.eps_run),
            ("meta", self.eps_meta),
            ("inner", self.eps_inner),
        ] {
            if !(eps.is_finite() && eps > 0.0) {
                return Err(Error::InvalidArgument(format!(
                    "{label} epsilon must be finite and > 0, got {eps}"
                )));
            }
        }
        if self.budget == 0 {
            return Err(Error::InvalidArgument(
                "budget must be at least 1".to_string(),
            ));
        }
        Ok(())
    }

    fn run_settings(&self) -> Result<SolverSettings, Error> {
        SolverSettings::new(self.eps_run, self.budget, self.seed)
    }
}

/// One meta-search evaluation: which configuration was tried and what the
/// objective came out to, in the objective's natural sign.
#[derive(Debug, Clone, PartialEq)]
pub struct TrialRecord {
    pub index: u64,
    pub config: ParamConfig,
    pub objective: f64,
}

/// Outcome of a training session.
#[derive(Debug, Clone, PartialEq)]
pub struct TrainingResult {
    pub spec: TrainingSpec,
    pub best: ParamConfig,
    /// Objective of the starting configuration.
    pub objective_q0: f64,
    /// Objective of the returned configuration.
    pub objective_best: f64,
    /// Relative reduction for minimizing strategies, raw area improvement
    /// for maximizing ones; never negative.
    pub gain: f64,
    pub trials: Vec<TrialRecord>,
}

impl TrainingResult {
    pub fn gain_kind(&self) -> &'static str {
        self.spec.strategy.gain_kind()
    }
}

/// Runs one training session. The start configuration is always the first
/// trial, and the returned configuration is never worse than it under the
/// session's objective.
pub fn train(
    spec: &TrainingSpec,
    exec: &Executor,
    store: Option<&Store>,
) -> Result<TrainingResult, Error> {
    spec.validate()?;
    let suite = builtin_suite(&spec.suite)?;
    let settings = spec.run_settings()?;
    let cutoffs = compute_cutoffs(&suite, &spec.start, &settings, spec.chi, exec, store)?;
    let baseline = match spec.strategy {
        Strategy::PerfProfile => Some(measure_config(
            &suite,
            &cutoffs,
            &spec.start,
            &settings,
            exec,
            store,
        )?),
        _ => None,
    };

    let mut trials: Vec<TrialRecord> = Vec::new();
    let (best, best_meta_value) = meta_solve(
        |q| {
            let natural = match spec.strategy {
                Strategy::Average => {
                    let row = measure_config(&suite, &cutoffs, q, &settings, exec, store)?;
                    phi_average(&row, spec.budget)
                }
                Strategy::Robust => phi_robust(
                    q,
                    &suite,
                    &cutoffs,
                    &spec.space,
                    &settings,
                    spec.eps_inner,
                    exec,
                    store,
                )?,
                Strategy::DataProfile => {
                    let row = measure_config(&suite, &cutoffs, q, &settings, exec, store)?;
                    phi_data(&row, spec.data_window)?
                }
                Strategy::PerfProfile => {
                    let row = measure_config(&suite, &cutoffs, q, &settings, exec, store)?;
                    phi_perf(&row, baseline.as_ref().unwrap(), spec.perf_window)?
                }
            };
            trials.push(TrialRecord {
                index: trials.len() as u64 + 1,
                config: *q,
                objective: natural,
            });
            Ok(if spec.strategy.maximizes() {
                -natural
            } else {
                natural
            })
        },
        &spec.space,
        &spec.start,
        spec.trial_cap,
        spec.eps_meta,
    )?;

    let objective_best = if spec.strategy.maximizes() {
        -best_meta_value
    } else {
        best_meta_value
    };
    let objective_q0 = trials
        .first()
        .expect("the start configuration is always evaluated")
        .objective;
    let gain = if spec.strategy.maximizes() {
        objective_best - objective_q0
    } else if objective_q0 == 0.0 {
        0.0
    } else {
        (objective_q0 - objective_best) / objective_q0
    };

    Ok(TrainingResult {
        spec: spec.clone(),
        best,
        objective_q0,
        objective_best,
        gain,
        trials,
    })
}

fn config_fields(q: &ParamConfig) -> String {
    format!(
        "{} {} {} {} {} {}",
        q.alpha, q.beta, q.gamma, q.delta, q.eta, q.inertia
    )
}

/// Serializes a training result as a line-oriented text record. Floats use
/// the shortest representation that parses back to the identical value, so
/// the round-trip through [`parse_session_text`] is lossless.
pub fn session_text(result: &TrainingResult) -> String {
    let spec = &result.spec;
    let mut out = String::new();
    out.push_str(SESSION_HEADER);
    out.push('\n');
    out.push_str(&format!("strategy {}\n", spec.strategy));
    out.push_str(&format!("suite {}\n", spec.suite));
    out.push_str(&format!("chi {}\n", spec.chi));
    out.push_str(&format!(
        "data-window {} {}\n",
        spec.data_window.0, spec.data_window.1
    ));
    out.push_str(&format!(
        "perf-window {} {}\n",
        spec.perf_window.0, spec.perf_window.1
    ));
    out.push_str(&format!("trial-cap {}\n", spec.trial_cap));
    out.push_str(&format!("eps-run {}\n", spec.eps_run));
    out.push_str(&format!("eps-meta {}\n", spec.eps_meta));
    out.push_str(&format!("eps-inner {}\n", spec.eps_inner));
    out.push_str(&format!("budget {}\n", spec.budget));
    out.push_str(&format!("seed {}\n", spec.seed));
    out.push_str(&format!("start {}\n", config_fields(&spec.start)));
    out.push_str(&format!("lower {}\n", config_fields(&spec.space.lower)));
    out.push_str(&format!("upper {}\n", config_fields(&spec.space.upper)));
    out.push_str(&format!("objective-q0 {}\n", result.objective_q0));
    out.push_str(&format!("objective-best {}\n", result.objective_best));
    out.push_str(&format!("gain {}\n", result.gain));
    out.push_str(&format!("best {}\n", config_fields(&result.best)));
    out.push_str(&format!("trials {}\n", result.trials.len()));
    for trial in &result.trials {
        out.push_str(&format!(
            "trial {} {} {}\n",
            trial.index,
            config_fields(&trial.config),
            trial.objective
        ));
    }
    out
}

struct SessionLines<'a> {
    lines: std::str::Lines<'a>,
    lineno: usize,
}

impl<'a> SessionLines<'a> {
    fn take(&mut self, key: &str) -> Result<&'a str, Error> {
        self.lineno += 1;
        let line = self.lines.next().ok_or_else(|| {
            Error::SessionFormat(format!("line {}: expected `{key}`, found end", self.lineno))
        })?;
        line.strip_prefix(key)
            .and_then(|rest| {
                rest.strip_prefix(' ')
                    .or(Some(rest).filter(|r| r.is_empty()))
            })
            .ok_or_else(|| {
                Error::SessionFormat(format!(
                    "line {}: expected `{key} ...`, got `{line}`",
                    self.lineno
                ))
            })
    }
}

fn parse_scalar<T: FromStr>(what: &str, field: &str) -> Result<T, Error>
where
    T::Err: fmt::Display,
{
    field
        .parse()
        .map_err(|e| Error::SessionFormat(format!("bad {what} `{field}`: {e}")))
}

fn parse_config(what: &str, text: &str) -> Result<ParamConfig, Error> {
    let fields: Vec<&str> = text.split_whitespace().collect();
    if fields.len() != 6 {
        return Err(Error::SessionFormat(format!(
            "{what} must have 6 fields, got {}",
            fields.len()
        )));
    }
    ParamConfig::new(
        parse_scalar(what, fields[0])?,
        parse_scalar(what, fields[1])?,
        parse_scalar(what, fields[2])?,
        parse_scalar(what, fields[3])?,
        parse_scalar(what, fields[4])?,
        parse_scalar(what, fields[5])?,
    )
    .map_err(|e| Error::SessionFormat(format!("{what}: {e}")))
}

fn parse_pair(what: &str, text: &str) -> Result<(f64, f64), Error> {
    let fields: Vec<&str> = text.split_whitespace().collect();
    if fields.len() != 2 {
        return Err(Error::SessionFormat(format!(
            "{what} must have 2 fields, got {}",
            fields.len()
        )));
    }
    Ok((
        parse_scalar(what, fields[0])?,
        parse_scalar(what, fields[1])?,
    ))
}

/// Parses the text produced by [`session_text`].
pub fn parse_session_text(text: &str) -> Result<TrainingResult, Error> {
    let mut lines = SessionLines {
        lines: text.lines(),
        lineno: 0,
    };
    let header = lines
        .lines
        .next()
        .ok_or_else(|| Error::SessionFormat("empty session".to_string()))?;
    lines.lineno = 1;
    if header != SESSION_HEADER {
        return Err(Error::SessionFormat(format!(
            "unrecognized header `{header}`"
        )));
    }

    let strategy: Strategy = lines.take("strategy")?.parse()?;
    let suite = lines.take("suite")?.to_string();
    let chi: f64 = parse_scalar("chi", lines.take("chi")?)?;
    let data_window = parse_pair("data-window", lines.take("data-window")?)?;
    let perf_window = parse_pair("perf-window", lines.take("perf-window")?)?;
    let trial_cap: u64 = parse_scalar("trial-cap", lines.take("trial-cap")?)?;
    let eps_run: f64 = parse_scalar("eps-run", lines.take("eps-run")?)?;
    let eps_meta: f64 = parse_scalar("eps-meta", lines.take("eps-meta")?)?;
    let eps_inner: f64 = parse_scalar("eps-inner", lines.take("eps-inner")?)?;
    let budget: u64 = parse_scalar("budget", lines.take("budget")?)?;
    let seed: u64 = parse_scalar("seed", lines.take("seed")?)?;
    let start = parse_config("start", lines.take("start")?)?;
    let lower = parse_config("lower", lines.take("lower")?)?;
    let upper = parse_config("upper", lines.take("upper")?)?;
    let objective_q0: f64 = parse_scalar("objective-q0", lines.take("objective-q0")?)?;
    let objective_best: f64 = parse_scalar("objective-best", lines.take("objective-best")?)?;
    let gain: f64 = parse_scalar("gain", lines.take("gain")?)?;
    let best = parse_config("best", lines.take("best")?)?;
    let count: usize = parse_scalar("trials", lines.take("trials")?)?;

    let mut trials = Vec::with_capacity(count);
    for _ in 0..count {
        let rest = lines.take("trial")?;
        let fields: Vec<&str> = rest.split_whitespace().collect();
        if fields.len() != 8 {
            return Err(Error::SessionFormat(format!(
                "trial line must have 8 fields, got {}",
                fields.len()
            )));
        }
        trials.push(TrialRecord {
            index: parse_scalar("trial index", fields[0])?,
            config: parse_config("trial config", &fields[1..7].join(" "))?,
            objective: parse_scalar("trial objective", fields[7])?,
        });
    }
    if lines.lines.next().is_some() {
        return Err(Error::SessionFormat(
            "trailing content after the last trial".to_string(),
        ));
    }

    let space = ParamSpace::new(lower, upper).map_err(|e| Error::SessionFormat(e.to_string()))?;
    let spec = TrainingSpec {
        strategy,
        suite,
        start,
        space,
        chi,
        data_window,
        perf_window,
        trial_cap,
        eps_run,
        eps_meta,
        eps_inner,
        budget,
        seed,
    };
    spec.validate()
        .map_err(|e| Error::SessionFormat(e.to_string()))?;
    Ok(TrainingResult {
        spec,
        best,
        objective_q0,
        objective_best,
        gain,
        trials,
    })
}
