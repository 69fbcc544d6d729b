//! Randomized direct search over box-constrained problems.
//!
//! [`solve`] runs a poll-based direct search: each iteration draws a random
//! orthonormal basis, polls the 2n signed directions opportunistically, and
//! accepts a candidate on sufficient decrease. The mesh expands on success
//! (capped at `gamma` times its initial size) and shrinks on failure, and the
//! run stops when the mesh falls below the convergence threshold or the
//! evaluation budget runs out. Recent successful steps are averaged into an
//! inertia direction that seeds the next basis, privileging continued moves
//! along a productive trajectory.
//!
//! Runs are pure functions of (problem, configuration, settings): the RNG
//! stream is derived from a stable hash of the seed, the problem name, and
//! the configuration fingerprint, so the same triple always replays the same
//! trajectory, and two runs differing only in the convergence threshold share
//! a trajectory prefix.
//!
//! [`meta_solve`] is the deterministic mixed-integer coordinate search used
//! one level up, when the solver's own parameters are the unknowns.

use std::collections::VecDeque;
use std::fmt;
use std::str::FromStr;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};

use crate::error::Error;
use crate::hash;
use crate::testbed::Problem;

/// Algorithmic parameters of the direct-search solver.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ParamConfig {
    /// Mesh expansion factor applied after a successful poll; at least 1.
    pub alpha: f64,
    /// Mesh shrink factor applied after a failed poll; strictly inside (0, 1).
    pub beta: f64,
    /// Growth cap: the mesh never exceeds `gamma` times its initial size; at least 1.
    pub gamma: f64,
    /// Initial mesh size; positive.
    pub delta: f64,
    /// Sufficient-decrease coefficient: a candidate is accepted when it
    /// improves the incumbent by at least `eta * mesh^2`; positive.
    pub eta: f64,
    /// How many recent successful steps are averaged into the inertia
    /// direction; integer, at least 1.
    pub inertia: u32,
}

impl Default for ParamConfig {
    /// The published default parameter vector.
    fn default() -> Self {
        ParamConfig {
            alpha: 1.5,
            beta: 1.0 / 3.0,
            gamma: 5.0,
            delta: 1.0,
            eta: 0.1,
            inertia: 10,
        }
    }
}

impl ParamConfig {
    pub fn new(
        alpha: f64,
        beta: f64,
        gamma: f64,
        delta: f64,
        eta: f64,
        inertia: u32,
    ) -> Result<Self, Error> {
        let config = ParamConfig {
            alpha,
            beta,
            gamma,
            delta,
            eta,
            inertia,
        };
        config.validate()?;
        Ok(config)
    }

    pub fn validate(&self) -> Result<(), Error> {
        let fail = |msg: String| Err(Error::InvalidConfig(msg));
        if !self.alpha.is_finite() || self.alpha < 1.0 {
            return fail(format!("alpha must be finite and >= 1, got {}", self.alpha));
        }
        if !self.beta.is_finite() || self.beta <= 0.0 || self.beta >= 1.0 {
            return fail(format!(
                "beta must lie strictly in (0, 1), got {}",
                self.beta
            ));
        }
        if !self.gamma.is_finite() || self.gamma < 1.0 {
            return fail(format!("gamma must be finite and >= 1, got {}", self.gamma));
        }
        if !self.delta.is_finite() || self.delta <= 0.0 {
            return fail(format!("delta must be finite and > 0, got {}", self.delta));
        }
        if !self.eta.is_finite() || self.eta <= 0.0 {
            return fail(format!("eta must be finite and > 0, got {}", self.eta));
        }
        if self.inertia < 1 {
            return fail("inertia must be at least 1".to_string());
        }
        Ok(())
    }

    /// Stable fingerprint of the six parameters. Values are rounded to 12
    /// significant digits first, so configurations differing only below that
    /// resolution share an identity (and therefore cached runs).
    pub fn fingerprint(&self) -> u64 {
        hash::fnv1a64(self.canonical_text().as_bytes())
    }

    fn canonical_text(&self) -> String {
        format!(
            "a={:.11e};b={:.11e};g={:.11e};d={:.11e};e={:.11e};i={}",
            self.alpha, self.beta, self.gamma, self.delta, self.eta, self.inertia
        )
    }

    pub(crate) fn continuous(&self, index: usize) -> f64 {
        match index {
            0 => self.alpha,
            1 => self.beta,
            2 => self.gamma,
            3 => self.delta,
            4 => self.eta,
            _ => unreachable!("continuous coordinate index out of range"),
        }
    }

    pub(crate) fn set_continuous(&mut self, index: usize, value: f64) {
        match index {
            0 => self.alpha = value,
            1 => self.beta = value,
            2 => self.gamma = value,
            3 => self.delta = value,
            4 => self.eta = value,
            _ => unreachable!("continuous coordinate index out of range"),
        }
    }
}

/// Box bounds for trainable parameters. `inertia` is the only integer
/// coordinate; all others vary continuously.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ParamSpace {
    pub lower: ParamConfig,
    pub upper: ParamConfig,
}

impl Default for ParamSpace {
    /// The published training box.
    fn default() -> Self {
        ParamSpace {
            lower: ParamConfig {
                alpha: 1.0,
                beta: 0.01,
                gamma: 1.0,
                delta: 0.25,
                eta: 1e-4,
                inertia: 5,
            },
            upper: ParamConfig {
                alpha: 2.0,
                beta: 0.95,
                gamma: 10.0,
                delta: 10.0,
                eta: 0.5,
                inertia: 30,
            },
        }
    }
}

impl ParamSpace {
    pub fn new(lower: ParamConfig, upper: ParamConfig) -> Result<Self, Error> {
        let space = ParamSpace { lower, upper };
        space.validate()?;
        Ok(space)
    }

    pub fn validate(&self) -> Result<(), Error> {
        self.lower
            .validate()
            .map_err(|e| Error::InvalidSpace(format!("lower bound: {e}")))?;
        self.upper
            .validate()
            .map_err(|e| Error::InvalidSpace(format!("upper bound: {e}")))?;
        for i in 0..5 {
            if self.lower.continuous(i) > self.upper.continuous(i) {
                return Err(Error::InvalidSpace(format!(
                    "lower bound exceeds upper bound on coordinate {i}"
                )));
            }
        }
        if self.lower.inertia > self.upper.inertia {
            return Err(Error::InvalidSpace(
                "lower bound exceeds upper bound on inertia".to_string(),
            ));
        }
        Ok(())
    }

    pub fn contains(&self, q: &ParamConfig) -> bool {
        (0..5).all(|i| {
            q.continuous(i) >= self.lower.continuous(i)
                && q.continuous(i) <= self.upper.continuous(i)
        }) && q.inertia >= self.lower.inertia
            && q.inertia <= self.upper.inertia
    }

    pub fn clamp(&self, q: &ParamConfig) -> ParamConfig {
        let mut out = *q;
        for i in 0..5 {
            out.set_continuous(
                i,
                q.continuous(i)
                    .clamp(self.lower.continuous(i), self.upper.continuous(i)),
            );
        }
        out.inertia = q.inertia.clamp(self.lower.inertia, self.upper.inertia);
        out
    }
}

/// Per-run solver settings.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SolverSettings {
    /// Convergence threshold: the run stops once the mesh falls below it.
    pub epsilon: f64,
    /// Maximum number of objective evaluations.
    pub budget: u64,
    /// Session seed; combined with the problem name and the configuration
    /// fingerprint into the per-run RNG stream.
    pub seed: u64,
}

impl SolverSettings {
    pub fn new(epsilon: f64, budget: u64, seed: u64) -> Result<Self, Error> {
        if !epsilon.is_finite() || epsilon <= 0.0 {
            return Err(Error::InvalidArgument(format!(
                "epsilon must be finite and > 0, got {epsilon}"
            )));
        }
        if budget == 0 {
            return Err(Error::InvalidArgument(
                "budget must be at least 1".to_string(),
            ));
        }
        Ok(SolverSettings {
            epsilon,
            budget,
            seed,
        })
    }

    /// Stable fingerprint of (epsilon, budget, seed), with epsilon rounded to
    /// 12 significant digits like configuration parameters.
    pub fn fingerprint(&self) -> u64 {
        hash::fnv1a64(
            format!("e={:.11e};n={};s={}", self.epsilon, self.budget, self.seed).as_bytes(),
        )
    }
}

/// Why a run stopped.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Termination {
    MeshConverged,
    BudgetExhausted,
}

impl fmt::Display for Termination {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Termination::MeshConverged => "mesh-converged",
            Termination::BudgetExhausted => "budget-exhausted",
        })
    }
}

impl FromStr for Termination {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self, Error> {
        match s {
            "mesh-converged" => Ok(Termination::MeshConverged),
            "budget-exhausted" => Ok(Termination::BudgetExhausted),
            other => Err(Error::TraceFormat(format!("unknown termination `{other}`"))),
        }
    }
}

/// Best-so-far history of one solver run.
///
/// Breakpoints are `(evaluation index, best value)` pairs recorded whenever
/// the best observed objective strictly improves. The first evaluation always
/// produces a breakpoint, so a trace is never empty; indices strictly
/// increase starting at 1 and values strictly decrease.
#[derive(Debug, Clone, PartialEq)]
pub struct RunTrace {
    problem: String,
    config_fingerprint: u64,
    seed: u64,
    breakpoints: Vec<(u64, f64)>,
    total_evaluations: u64,
    termination: Termination,
}

impl RunTrace {
    pub fn new(
        problem: String,
        config_fingerprint: u64,
        seed: u64,
        breakpoints: Vec<(u64, f64)>,
        total_evaluations: u64,
        termination: Termination,
    ) -> Result<Self, Error> {
        if breakpoints.is_empty() {
            return Err(Error::TraceFormat("trace has no breakpoints".to_string()));
        }
        if breakpoints[0].0 != 1 {
            return Err(Error::TraceFormat(format!(
                "first breakpoint index must be 1, got {}",
                breakpoints[0].0
            )));
        }
        for pair in breakpoints.windows(2) {
            if pair[1].0 <= pair[0].0 {
                return Err(Error::TraceFormat(
                    "breakpoint indices must strictly increase".to_string(),
                ));
            }
            // NaN values fail the comparison too, which is what we want.
            if pair[1].1.partial_cmp(&pair[0].1) != Some(std::cmp::Ordering::Less) {
                return Err(Error::TraceFormat(
                    "best-so-far values must strictly decrease".to_string(),
                ));
            }
        }
        let last = breakpoints.last().unwrap().0;
        if total_evaluations < last {
            return Err(Error::TraceFormat(format!(
                "total evaluations {total_evaluations} below last breakpoint index {last}"
            )));
        }
        Ok(RunTrace {
            problem,
            config_fingerprint,
            seed,
            breakpoints,
            total_evaluations,
            termination,
        })
    }

    pub fn problem(&self) -> &str {
        &self.problem
    }

    pub fn config_fingerprint(&self) -> u64 {
        self.config_fingerprint
    }

    pub fn seed(&self) -> u64 {
        self.seed
    }

    pub fn breakpoints(&self) -> &[(u64, f64)] {
        &self.breakpoints
    }

    pub fn total_evaluations(&self) -> u64 {
        self.total_evaluations
    }

    pub fn final_best(&self) -> f64 {
        self.breakpoints.last().unwrap().1
    }

    pub fn termination(&self) -> Termination {
        self.termination
    }

    /// Value of the objective at the start point (the first evaluation).
    pub fn start_value(&self) -> f64 {
        self.breakpoints[0].1
    }

    /// Text record: a header line
    /// `problem,config_hash,seed,total_evals,termination` followed by one
    /// `eval_index,best_f` line per breakpoint. Objective values carry 17
    /// significant digits so parsing them back is lossless.
    pub fn to_text(&self) -> String {
        let mut out = String::with_capacity(64 + 32 * self.breakpoints.len());
        out.push_str(&format!(
            "{},{:016x},{},{},{}\n",
            self.problem,
            self.config_fingerprint,
            self.seed,
            self.total_evaluations,
            self.termination
        ));
        for (index, value) in &self.breakpoints {
            out.push_str(&format!("{index},{value:.16e}\n"));
        }
        out
    }

    pub fn from_text(text: &str) -> Result<Self, Error> {
        let mut lines = text.lines();
        let header = lines
            .next()
            .ok_or_else(|| Error::TraceFormat("empty trace".to_string()))?;
        let fields: Vec<&str> = header.split(',').collect();
        if fields.len() != 5 {
            return Err(Error::TraceFormat(format!(
                "header must have 5 fields, got {}",
                fields.len()
            )));
        }
        let problem = fields[0].to_string();
        let config_fingerprint = u64::from_str_radix(fields[1], 16)
            .map_err(|e| Error::TraceFormat(format!("bad config hash: {e}")))?;
        let seed: u64 = fields[2]
            .parse()
            .map_err(|e| Error::TraceFormat(format!("bad seed: {e}")))?;
        let total_evaluations: u64 = fields[3]
            .parse()
            .map_err(|e| Error::TraceFormat(format!("bad evaluation count: {e}")))?;
        let termination: Termination = fields[4].parse()?;
        let mut breakpoints = Vec::new();
        for line in lines {
            if line.is_empty() {
                continue;
            }
            let (index, value) = line
                .split_once(',')
                .ok_or_else(|| Error::TraceFormat(format!("bad breakpoint line `{line}`")))?;
            let index: u64 = index
                .parse()
                .map_err(|e| Error::TraceFormat(format!("bad breakpoint index: {e}")))?;
            let value: f64 = value
                .parse()
                .map_err(|e| Error::TraceFormat(format!("bad breakpoint value: {e}")))?;
            breakpoints.push((index, value));
        }
        RunTrace::new(
            problem,
            config_fingerprint,
            seed,
            breakpoints,
            total_evaluations,
            termination,
        )
    }
}

/// Smallest evaluation count after which the best-so-far value is at or
/// below `target`, or `None` when the run never reaches it. Non-increasing
/// in `target` by construction.
pub fn evals_to_target(trace: &RunTrace, target: f64) -> Option<u64> {
    trace
        .breakpoints
        .iter()
        .find(|(_, value)| *value <= target)
        .map(|(index, _)| *index)
}

fn run_rng(seed: u64, problem: &str, config_fingerprint: u64) -> ChaCha8Rng {
    let mut buf = Vec::with_capacity(problem.len() + 18);
    buf.extend_from_slice(&seed.to_le_bytes());
    buf.push(0x1f);
    buf.extend_from_slice(problem.as_bytes());
    buf.push(0x1f);
    buf.extend_from_slice(&config_fingerprint.to_le_bytes());
    ChaCha8Rng::seed_from_u64(hash::fnv1a64(&buf))
}

/// Normalized average of the recent successful steps, or `None` while no
/// informative average exists.
fn inertia_direction(steps: &VecDeque<Vec<f64>>, n: usize) -> Option<Vec<f64>> {
    if steps.is_empty() {
        return None;
    }
    let mut avg = vec![0.0; n];
    for step in steps {
        for i in 0..n {
            avg[i] += step[i];
        }
    }
    let count = steps.len() as f64;
    let mut norm_sq = 0.0;
    for v in &mut avg {
        *v /= count;
        norm_sq += *v * *v;
    }
    let norm = norm_sq.sqrt();
    if norm > 0.0 && norm.is_finite() {
        for v in &mut avg {
            *v /= norm;
        }
        Some(avg)
    } else {
        None
    }
}

/// Random orthonormal basis of R^n, optionally seeded with a first vector.
/// Gaussian draws are orthogonalized against the accepted vectors and kept
/// when their residual is well-conditioned, so the result is orthonormal up
/// to rounding; degenerate draws are simply rejected and redrawn.
fn poll_basis(rng: &mut ChaCha8Rng, n: usize, seed_dir: Option<Vec<f64>>) -> Vec<Vec<f64>> {
    let mut basis: Vec<Vec<f64>> = Vec::with_capacity(n);
    if let Some(dir) = seed_dir {
        basis.push(dir);
    }
    let normal = StandardNormal;
    while basis.len() < n {
        let mut v: Vec<f64> = (0..n).map(|_| normal.sample(rng)).collect();
        for b in &basis {
            let dot: f64 = v.iter().zip(b.iter()).map(|(a, c)| a * c).sum();
            for i in 0..n {
                v[i] -= dot * b[i];
            }
        }
        let norm = v.iter().map(|c| c * c).sum::<f64>().sqrt();
        if norm > 1e-8 {
            for c in &mut v {
                *c /= norm;
            }
            basis.push(v);
        }
    }
    basis
}

/// Runs the direct search on one problem and returns its trace.
///
/// The best-so-far history counts every evaluation, including candidates the
/// sufficient-decrease test rejects: the evaluation happened, and a consumer
/// of the trace is entitled to the best value seen so far. Candidates are
/// projected onto the bound box before evaluation, and the per-coordinate
/// step is `mesh * (upper - lower) / 10`, so the mesh is expressed in tenths
/// of each coordinate's range.
pub fn solve(problem: &Problem, config: &ParamConfig, settings: &SolverSettings) -> RunTrace {
    config
        .validate()
        .expect("solver parameters violate their invariants");
    assert!(settings.budget >= 1, "evaluation budget must be positive");
    assert!(
        settings.epsilon.is_finite() && settings.epsilon > 0.0,
        "convergence threshold must be positive"
    );

    let n = problem.dimension();
    let (lower, upper) = problem.bounds();
    let scale: Vec<f64> = (0..n).map(|i| (upper[i] - lower[i]) / 10.0).collect();
    let mut rng = run_rng(settings.seed, problem.name(), config.fingerprint());

    let mut x = problem.start().to_vec();
    let mut fx = problem.value(&x);
    let mut evals: u64 = 1;
    let mut best = fx;
    let mut breakpoints = vec![(1u64, fx)];

    let mut mesh = config.delta;
    let mesh_cap = config.gamma * config.delta;
    let mut recent_steps: VecDeque<Vec<f64>> = VecDeque::with_capacity(config.inertia as usize);
    let mut candidate = vec![0.0; n];

    let termination = 'run: loop {
        if mesh < settings.epsilon {
            break Termination::MeshConverged;
        }
        if evals >= settings.budget {
            break Termination::BudgetExhausted;
        }
        let basis = poll_basis(&mut rng, n, inertia_direction(&recent_steps, n));
        let mut improved = false;
        'poll: for direction in &basis {
            for sign in [1.0f64, -1.0] {
                if evals >= settings.budget {
                    break 'run Termination::BudgetExhausted;
                }
                for i in 0..n {
                    candidate[i] =
                        (x[i] + sign * mesh * scale[i] * direction[i]).clamp(lower[i], upper[i]);
                }
                let fc = problem.value(&candidate);
                evals += 1;
                if fc < best {
                    best = fc;
                    breakpoints.push((evals, fc));
                }
                if fx - fc >= config.eta * mesh * mesh {
                    let step: Vec<f64> = (0..n).map(|i| candidate[i] - x[i]).collect();
                    if recent_steps.len() == config.inertia as usize {
                        recent_steps.pop_front();
                    }
                    recent_steps.push_back(step);
                    x.copy_from_slice(&candidate);
                    fx = fc;
                    mesh = (config.alpha * mesh).min(mesh_cap);
                    improved = true;
                    break 'poll;
                }
            }
        }
        if !improved {
            mesh *= config.beta;
        }
    };

    RunTrace {
        problem: problem.name().to_string(),
        config_fingerprint: config.fingerprint(),
        seed: settings.seed,
        breakpoints,
        total_evaluations: evals,
        termination,
    }
}

// Meta-level search constants: the default parameter vector's expansion,
// shrink, growth-cap, and sufficient-decrease values.
const META_EXPAND: f64 = 1.5;
const META_SHRINK: f64 = 1.0 / 3.0;
const META_MESH_CAP: f64 = 5.0;
const META_SUFFICIENT: f64 = 0.1;

/// Minimizes `objective` over a mixed-integer parameter box.
///
/// Coordinates are polled in a fixed order (the five continuous parameters,
/// then the integer one), opportunistically accepting the first candidate
/// with sufficient decrease, so the search is a pure function of its
/// arguments. Continuous coordinates move by a tenth of their range times a
/// shared mesh that starts at 1 and stops below `epsilon`; the integer
/// coordinate keeps its own mesh starting at a quarter of its range
/// (rounded, at least 1), shrinking with the continuous mesh but never below
/// 1, and moves by the rounded mesh. Candidates are clamped to the box.
///
/// The objective is evaluated at most `trial_cap` times; `start` is always
/// evaluated first. A failure at `start` aborts; failures at later trial
/// points count as infinitely bad and the search continues. Returns the best
/// evaluated pair, ties resolved in favor of the earliest trial, so the
/// result is never worse than the start value.
pub fn meta_solve<F>(
    mut objective: F,
    space: &ParamSpace,
    start: &ParamConfig,
    trial_cap: u64,
    epsilon: f64,
) -> Result<(ParamConfig, f64), Error>
where
    F: FnMut(&ParamConfig) -> Result<f64, Error>,
{
    space.validate()?;
    if !space.contains(start) {
        return Err(Error::InvalidSpace(
            "start configuration lies outside the search box".to_string(),
        ));
    }
    if trial_cap == 0 {
        return Err(Error::InvalidArgument(
            "trial cap must be at least 1".to_string(),
        ));
    }
    if !epsilon.is_finite() || epsilon <= 0.0 {
        return Err(Error::InvalidArgument(format!(
            "epsilon must be finite and > 0, got {epsilon}"
        )));
    }

    let start_value = objective(start).map_err(|e| Error::StartFailed(e.to_string()))?;
    let mut best = (*start, start_value);
    let mut current = *start;
    let mut current_value = start_value;
    let mut trials: u64 = 1;

    let mut mesh = 1.0f64;
    let int_range = space.upper.inertia - space.lower.inertia;
    let mut int_mesh = (f64::from(int_range) / 4.0).round().max(1.0);

    'search: loop {
        if mesh < epsilon || trials >= trial_cap {
            break;
        }
        let mut improved = false;
        'poll: for coord in 0..6 {
            for sign in [1.0f64, -1.0] {
                let candidate = meta_candidate(&current, coord, sign, mesh, int_mesh, space);
                if candidate == current {
                    continue;
                }
                if trials >= trial_cap {
                    break 'search;
                }
                let value = objective(&candidate).unwrap_or(f64::INFINITY);
                trials += 1;
                if value < best.1 {
                    best = (candidate, value);
                }
                if current_value - value >= META_SUFFICIENT * mesh * mesh {
                    current = candidate;
                    current_value = value;
                    mesh = (META_EXPAND * mesh).min(META_MESH_CAP);
                    improved = true;
                    break 'poll;
                }
            }
        }
        if !improved {
            mesh *= META_SHRINK;
            int_mesh = (META_SHRINK * int_mesh).max(1.0);
        }
    }
    Ok(best)
}

fn meta_candidate(
    current: &ParamConfig,
    coord: usize,
    sign: f64,
    mesh: f64,
    int_mesh: f64,
    space: &ParamSpace,
) -> ParamConfig {
    let mut next = *current;
    if coord < 5 {
        let lo = space.lower.continuous(coord);
        let hi = space.upper.continuous(coord);
        let step = mesh * (hi - lo) / 10.0;
        next.set_continuous(
            coord,
            (current.continuous(coord) + sign * step).clamp(lo, hi),
        );
    } else {
        let step = int_mesh.round().max(1.0) as i64;
        let moved = i64::from(current.inertia) + if sign > 0.0 { step } else { -step };
        let clamped = moved.clamp(
            i64::from(space.lower.inertia),
            i64::from(space.upper.inertia),
        );
        next.inertia = clamped as u32;
    }
    next
}
