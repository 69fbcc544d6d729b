//! Subcommand definitions and handlers.

use std::fs;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand};

use proftune_core::exec::Executor;
use proftune_core::profiles::{
    data_profile, overlay_csv, overlay_svg, performance_profile, MeasureTable, ProblemTag,
    ProfileCurve, ProfileKind,
};
use proftune_core::solver::{evals_to_target, ParamConfig, RunTrace, SolverSettings};
use proftune_core::store::{self, RunKey, Store};
use proftune_core::testbed::{builtin_suite, Problem};
use proftune_core::training::{
    compute_cutoffs, measure_config, obtain_trace, train, CutoffEntry, CutoffTable, Strategy,
    TrainingResult, TrainingSpec,
};

use crate::config::{parse_window, resolve_store, CliError, FileConfig};

#[derive(Parser)]
#[command(
    name = "proftune",
    version,
    about = "Train and benchmark a derivative-free direct-search solver",
    long_about = "Runs a randomized direct-search solver over built-in problem suites, caches \
                  every run in a content-addressed store, and tunes the solver's six algorithmic \
                  parameters against average-cost, robust, or profile-area objectives. All \
                  commands are deterministic for a fixed seed."
)]
struct Cli {
    /// Key=value config file; explicit flags override its entries.
    #[arg(long, global = true, value_name = "PATH")]
    config: Option<PathBuf>,
    /// Store root for cached runs and sessions [default: $PROFTUNE_STORE or ./proftune-store].
    #[arg(long, global = true, value_name = "DIR")]
    store: Option<PathBuf>,
    /// Concurrent runs per measurement: 0 = all cores, 1 = sequential; results are identical either way [default: 0].
    #[arg(long, global = true, value_name = "N")]
    jobs: Option<usize>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Inspect the built-in problem suites.
    Suite {
        #[command(subcommand)]
        action: SuiteAction,
    },
    /// Derive per-problem convergence cut-offs and write them as CSV.
    Cutoffs(CutoffsArgs),
    /// Run one parameter configuration over a suite and record a run set.
    Run(RunArgs),
    /// Train the solver parameters against a suite-level objective.
    Train(TrainArgs),
    /// Emit profile curves from recorded run sets.
    Profile(ProfileArgs),
    /// Re-run a canned end-to-end experiment.
    Reproduce(ReproduceArgs),
}

#[derive(Subcommand)]
enum SuiteAction {
    /// List the available suites, or the problems of one suite.
    List {
        /// Suite to describe; omit to list all suites.
        suite: Option<String>,
    },
}

#[derive(Args)]
struct CutoffsArgs {
    /// Problem suite [default: default].
    #[arg(long)]
    suite: Option<String>,
    /// Cut-off looseness in [0, 1]: 0 demands the baseline's best value, 1 only its start value [default: 0.0001].
    #[arg(long)]
    chi: Option<f64>,
    /// Convergence threshold of the baseline runs [default: 1e-12].
    #[arg(long)]
    eps: Option<f64>,
    /// Evaluation budget per run [default: 10000].
    #[arg(long)]
    budget: Option<u64>,
    /// Run seed [default: 42].
    #[arg(long)]
    seed: Option<u64>,
    /// Output CSV path [default: cutoffs.csv].
    #[arg(long, value_name = "PATH")]
    out: Option<PathBuf>,
    /// Run fresh instead of using the trace cache.
    #[arg(long)]
    no_cache: bool,
}

#[derive(Args)]
struct RunArgs {
    /// Variant label recorded in the run set; becomes the profile column name.
    #[arg(long)]
    label: String,
    /// Problem suite [default: default].
    #[arg(long)]
    suite: Option<String>,
    /// Take the configuration from a session file's trained result.
    #[arg(long, value_name = "PATH", conflicts_with_all = ["alpha", "beta", "gamma", "delta", "eta", "inertia"])]
    from_session: Option<PathBuf>,
    /// Mesh expansion factor [default: 1.5].
    #[arg(long)]
    alpha: Option<f64>,
    /// Mesh shrink factor [default: 1/3].
    #[arg(long)]
    beta: Option<f64>,
    /// Mesh growth cap [default: 5].
    #[arg(long)]
    gamma: Option<f64>,
    /// Initial mesh size [default: 1].
    #[arg(long)]
    delta: Option<f64>,
    /// Sufficient-decrease coefficient [default: 0.1].
    #[arg(long)]
    eta: Option<f64>,
    /// Inertia history length [default: 10].
    #[arg(long)]
    inertia: Option<u32>,
    /// Convergence threshold per run [default: 1e-12].
    #[arg(long)]
    eps: Option<f64>,
    /// Evaluation budget per run [default: 10000].
    #[arg(long)]
    budget: Option<u64>,
    /// Run seed [default: 42].
    #[arg(long)]
    seed: Option<u64>,
    /// Run-set output path [default: <label>.runset.txt].
    #[arg(long, value_name = "PATH")]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct TrainArgs {
    /// Objective: average, robust, data-profile, or perf-profile [default: average].
    #[arg(long)]
    strategy: Option<String>,
    /// Problem suite [default: default].
    #[arg(long)]
    suite: Option<String>,
    /// Objective window; only the profile objectives accept one [defaults: 0,2000 data / 1,20 perf].
    #[arg(long, value_name = "LO,HI")]
    window: Option<String>,
    /// Cut-off looseness in [0, 1] [default: 0.0001].
    #[arg(long)]
    chi: Option<f64>,
    /// Meta-search trial cap [default: 200].
    #[arg(long)]
    trials: Option<u64>,
    /// Convergence threshold of measured runs [default: 1e-12].
    #[arg(long)]
    eps_run: Option<f64>,
    /// Convergence threshold of the meta-search [default: 0.01].
    #[arg(long)]
    eps_meta: Option<f64>,
    /// Convergence threshold of the robust objective's inner search [default: 0.1].
    #[arg(long)]
    eps_inner: Option<f64>,
    /// Evaluation budget per measured run [default: 10000].
    #[arg(long)]
    budget: Option<u64>,
    /// Session seed [default: 42].
    #[arg(long)]
    seed: Option<u64>,
    /// Session name within the store [default: <strategy>-<suite>-s<seed>].
    #[arg(long)]
    session: Option<String>,
    /// Write the session to this path instead of the store.
    #[arg(long, value_name = "PATH", conflicts_with = "session")]
    out: Option<PathBuf>,
    /// Overwrite an existing session.
    #[arg(long)]
    force: bool,
    /// Measure every run fresh instead of using the trace cache.
    #[arg(long)]
    no_cache: bool,
}

#[derive(Args)]
struct ProfileArgs {
    /// Profile kind: perf or data.
    #[arg(long)]
    kind: String,
    /// Cut-off CSV produced by `cutoffs`.
    #[arg(long, value_name = "PATH")]
    cutoffs: PathBuf,
    /// Curve window [defaults: 1,20 perf / 0,2000 data].
    #[arg(long, value_name = "LO,HI")]
    window: Option<String>,
    /// Output CSV path [default: <kind>-profile.csv].
    #[arg(long, value_name = "PATH")]
    out: Option<PathBuf>,
    /// Also write an SVG step plot next to the CSV.
    #[arg(long)]
    svg: bool,
    /// Run-set files, one per variant.
    #[arg(required = true, value_name = "RUNSET")]
    runsets: Vec<PathBuf>,
}

#[derive(Args)]
struct ReproduceArgs {
    /// Experiment id: table4-analogue (train all four objectives and summarize)
    /// or window-study (train the data objective over three windows and emit
    /// the zoomed curve comparisons).
    id: String,
    /// Problem suite [default: default].
    #[arg(long)]
    suite: Option<String>,
    /// Session seed [default: 42].
    #[arg(long)]
    seed: Option<u64>,
    /// Meta-search trial cap [default: 200].
    #[arg(long)]
    trials: Option<u64>,
    /// Evaluation budget per measured run [default: 10000].
    #[arg(long)]
    budget: Option<u64>,
    /// Bundle output directory [default: ./<id>].
    #[arg(long, value_name = "DIR")]
    out: Option<PathBuf>,
    /// Also write SVG step plots for emitted curves.
    #[arg(long)]
    svg: bool,
    /// Measure every run fresh instead of using the trace cache.
    #[arg(long)]
    no_cache: bool,
}

struct Context {
    file: FileConfig,
    store_root: PathBuf,
    exec: Executor,
}

impl Context {
    fn open_store(&self) -> Result<Store, CliError> {
        Ok(Store::open(&self.store_root)?)
    }
}

/// Parses the command line, runs the command, and returns the process exit
/// code: 0 success, 1 runtime failure, 2 usage error.
pub fn run() -> i32 {
    let cli = Cli::parse();
    match dispatch(cli) {
        Ok(()) => 0,
        Err(e) => {
            eprintln!("error: {e}");
            e.code()
        }
    }
}

fn dispatch(cli: Cli) -> Result<(), CliError> {
    let file = FileConfig::load(cli.config.as_deref())?;
    let store_root = resolve_store(cli.store, file.store.clone());
    let jobs = cli.jobs.or(file.jobs).unwrap_or(0);
    let ctx = Context {
        file,
        store_root,
        exec: Executor::new(jobs),
    };
    match cli.command {
        Command::Suite { action } => match action {
            SuiteAction::List { suite } => cmd_suite_list(suite.as_deref()),
        },
        Command::Cutoffs(args) => cmd_cutoffs(&ctx, args),
        Command::Run(args) => cmd_run(&ctx, args),
        Command::Train(args) => cmd_train(&ctx, args),
        Command::Profile(args) => cmd_profile(&ctx, args),
        Command::Reproduce(args) => cmd_reproduce(&ctx, args),
    }
}

fn cmd_suite_list(name: Option<&str>) -> Result<(), CliError> {
    match name {
        None => {
            for suite_name in ["default", "smoke"] {
                let suite = builtin_suite(suite_name)?;
                println!("{suite_name} ({} problems)", suite.len());
            }
        }
        Some(name) => {
            let suite = builtin_suite(name)?;
            println!("{:<22} {:>3}  bounds", "name", "n");
            for problem in suite.problems() {
                println!(
                    "{:<22} {:>3}  {}",
                    problem.name(),
                    problem.dimension(),
                    bounds_text(problem)
                );
            }
        }
    }
    Ok(())
}

fn bounds_text(problem: &Problem) -> String {
    let (lower, upper) = problem.bounds();
    let uniform = lower.windows(2).all(|w| w[0] == w[1]) && upper.windows(2).all(|w| w[0] == w[1]);
    if uniform && problem.dimension() > 1 {
        format!("[{}, {}]^{}", lower[0], upper[0], problem.dimension())
    } else {
        (0..problem.dimension())
            .map(|i| format!("[{}, {}]", lower[i], upper[i]))
            .collect::<Vec<_>>()
            .join(" x ")
    }
}

fn cmd_cutoffs(ctx: &Context, args: CutoffsArgs) -> Result<(), CliError> {
    let suite_name = pick(args.suite, ctx.file.suite.clone(), "default".to_string());
    let suite = builtin_suite(&suite_name)?;
    let chi = pick(args.chi, ctx.file.chi, 1e-4);
    let settings = SolverSettings::new(
        pick(args.eps, ctx.file.eps_run, 1e-12),
        pick(args.budget, ctx.file.budget, 10_000),
        pick(args.seed, ctx.file.seed, 42),
    )?;
    let store = if args.no_cache {
        None
    } else {
        Some(ctx.open_store()?)
    };
    let table = compute_cutoffs(
        &suite,
        &ParamConfig::default(),
        &settings,
        chi,
        &ctx.exec,
        store.as_ref(),
    )?;
    let out = args.out.unwrap_or_else(|| PathBuf::from("cutoffs.csv"));
    write_file(&out, &cutoff_csv(&table))?;
    println!(
        "wrote {} cut-offs for suite {} to {}",
        table.entries.len(),
        suite_name,
        out.display()
    );
    Ok(())
}

fn cmd_run(ctx: &Context, args: RunArgs) -> Result<(), CliError> {
    validate_label(&args.label)?;
    let suite_name = pick(args.suite, ctx.file.suite.clone(), "default".to_string());
    let suite = builtin_suite(&suite_name)?;
    let config = match &args.from_session {
        Some(path) => store::read_session_file(path)?.best,
        None => {
            let d = ParamConfig::default();
            ParamConfig::new(
                args.alpha.unwrap_or(d.alpha),
                args.beta.unwrap_or(d.beta),
                args.gamma.unwrap_or(d.gamma),
                args.delta.unwrap_or(d.delta),
                args.eta.unwrap_or(d.eta),
                args.inertia.unwrap_or(d.inertia),
            )?
        }
    };
    let settings = SolverSettings::new(
        pick(args.eps, ctx.file.eps_run, 1e-12),
        pick(args.budget, ctx.file.budget, 10_000),
        pick(args.seed, ctx.file.seed, 42),
    )?;
    let store = ctx.open_store()?;
    ctx.exec
        .map(suite.problems(), |problem| {
            obtain_trace(Some(&store), problem, &config, &settings).map(|_| ())
        })
        .into_iter()
        .collect::<Result<Vec<_>, _>>()?;

    let mut text = String::from("proftune-runset v1\n");
    text.push_str(&format!("label {}\n", args.label));
    text.push_str(&format!("suite {suite_name}\n"));
    text.push_str(&format!("config {}\n", param_fields(&config)));
    text.push_str(&format!("eps {}\n", settings.epsilon));
    text.push_str(&format!("budget {}\n", settings.budget));
    text.push_str(&format!("seed {}\n", settings.seed));
    for problem in suite.problems() {
        let key = RunKey::new(problem, &config, &settings);
        // Absolute paths keep the run set usable from any directory.
        let path = std::path::absolute(store.trace_path(&key))
            .map_err(|e| CliError::runtime(format!("resolving trace path: {e}")))?;
        text.push_str(&format!("trace {} {}\n", problem.name(), path.display()));
    }
    let out = args
        .out
        .unwrap_or_else(|| PathBuf::from(format!("{}.runset.txt", args.label)));
    write_file(&out, &text)?;
    println!(
        "recorded {} traces for variant `{}` in {}",
        suite.len(),
        args.label,
        out.display()
    );
    Ok(())
}

fn cmd_train(ctx: &Context, args: TrainArgs) -> Result<(), CliError> {
    let strategy: Strategy = pick(
        args.strategy,
        ctx.file.strategy.clone(),
        "average".to_string(),
    )
    .parse()?;
    let mut spec = TrainingSpec {
        strategy,
        suite: pick(args.suite, ctx.file.suite.clone(), "default".to_string()),
        chi: pick(args.chi, ctx.file.chi, 1e-4),
        trial_cap: pick(args.trials, ctx.file.trials, 200),
        eps_run: pick(args.eps_run, ctx.file.eps_run, 1e-12),
        eps_meta: pick(args.eps_meta, ctx.file.eps_meta, 1e-2),
        eps_inner: pick(args.eps_inner, ctx.file.eps_inner, 1e-1),
        budget: pick(args.budget, ctx.file.budget, 10_000),
        seed: pick(args.seed, ctx.file.seed, 42),
        ..TrainingSpec::default()
    };
    let window = match args.window {
        Some(text) => Some(parse_window(&text)?),
        None => ctx.file.window,
    };
    if let Some(window) = window {
        match strategy {
            Strategy::DataProfile => spec.data_window = window,
            Strategy::PerfProfile => spec.perf_window = window,
            other => {
                return Err(CliError::usage(format!(
                    "--window does not apply to the {other} objective"
                )));
            }
        }
    }
    spec.validate()?;

    let store = if args.no_cache && args.out.is_some() {
        None
    } else {
        Some(ctx.open_store()?)
    };
    let trace_store = if args.no_cache { None } else { store.as_ref() };
    let result = train(&spec, &ctx.exec, trace_store)?;
    print_training_result(&result);

    let path = match args.out {
        Some(out) => {
            store::write_session_file(&out, &result, args.force)?;
            out
        }
        None => {
            let name = args
                .session
                .unwrap_or_else(|| format!("{strategy}-{}-s{}", spec.suite, spec.seed));
            store
                .as_ref()
                .expect("store is always open when saving by name")
                .save_session(&name, &result, args.force)?
        }
    };
    println!("session {}", path.display());
    Ok(())
}

fn print_training_result(result: &TrainingResult) {
    let spec = &result.spec;
    println!("strategy     {}", spec.strategy);
    println!("suite        {}", spec.suite);
    println!("trials-used  {}", result.trials.len());
    println!("{:<10} {:>22} {:>22}", "parameter", "start", "trained");
    let rows = [
        (
            "alpha",
            spec.start.alpha.to_string(),
            result.best.alpha.to_string(),
        ),
        (
            "beta",
            spec.start.beta.to_string(),
            result.best.beta.to_string(),
        ),
        (
            "gamma",
            spec.start.gamma.to_string(),
            result.best.gamma.to_string(),
        ),
        (
            "delta",
            spec.start.delta.to_string(),
            result.best.delta.to_string(),
        ),
        (
            "eta",
            spec.start.eta.to_string(),
            result.best.eta.to_string(),
        ),
        (
            "inertia",
            spec.start.inertia.to_string(),
            result.best.inertia.to_string(),
        ),
    ];
    for (name, start, trained) in rows {
        println!("{name:<10} {start:>22} {trained:>22}");
    }
    println!("objective(start)    {}", result.objective_q0);
    println!("objective(trained)  {}", result.objective_best);
    println!(
        "gain                {} ({})",
        result.gain,
        result.gain_kind()
    );
}

fn cmd_profile(ctx: &Context, args: ProfileArgs) -> Result<(), CliError> {
    let kind = match args.kind.as_str() {
        "perf" | "performance" => ProfileKind::Performance,
        "data" => ProfileKind::Data,
        other => {
            return Err(CliError::usage(format!(
                "unknown profile kind `{other}` (expected perf or data)"
            )));
        }
    };
    if kind == ProfileKind::Performance && args.runsets.len() < 2 {
        return Err(CliError::runtime(
            "performance profiles are pairwise: give at least two run sets",
        ));
    }
    let entries = parse_cutoff_csv(&args.cutoffs)?;
    if entries.is_empty() {
        return Err(CliError::runtime(format!(
            "cut-off table {} has no rows",
            args.cutoffs.display()
        )));
    }
    let runsets: Vec<RunSet> = args
        .runsets
        .iter()
        .map(|p| parse_runset(p))
        .collect::<Result<_, _>>()?;
    for (i, a) in runsets.iter().enumerate() {
        for b in &runsets[i + 1..] {
            if a.label == b.label {
                return Err(CliError::usage(format!(
                    "run sets share the label `{}`; labels must be unique",
                    a.label
                )));
            }
        }
    }

    let tags: Vec<ProblemTag> = entries
        .iter()
        .map(|e| ProblemTag {
            name: e.problem.clone(),
            dimension: e.dimension,
        })
        .collect();
    let mut columns = Vec::with_capacity(runsets.len());
    for runset in &runsets {
        for (problem, _) in &runset.traces {
            if !entries.iter().any(|e| &e.problem == problem) {
                return Err(CliError::runtime(format!(
                    "run set `{}` covers problem {problem}, which is not in the cut-off table",
                    runset.label
                )));
            }
        }
        let mut measures = Vec::with_capacity(entries.len());
        for entry in &entries {
            let Some((_, path)) = runset.traces.iter().find(|(p, _)| *p == entry.problem) else {
                return Err(CliError::runtime(format!(
                    "missing trace for problem {} in variant `{}`",
                    entry.problem, runset.label
                )));
            };
            let text = fs::read_to_string(path).map_err(|e| {
                CliError::runtime(format!(
                    "missing trace for problem {} in variant `{}`: {e}",
                    entry.problem, runset.label
                ))
            })?;
            let trace = RunTrace::from_text(&text).map_err(|e| {
                CliError::runtime(format!(
                    "corrupt trace for problem {} in variant `{}`: {e}",
                    entry.problem, runset.label
                ))
            })?;
            if trace.problem() != entry.problem {
                return Err(CliError::runtime(format!(
                    "trace at {} records problem {}, expected {}",
                    path.display(),
                    trace.problem(),
                    entry.problem
                )));
            }
            measures.push(evals_to_target(&trace, entry.cutoff));
        }
        columns.push((runset.label.clone(), measures));
    }
    let table = MeasureTable::from_columns(tags, columns);

    let window = match args.window {
        Some(text) => Some(parse_window(&text)?),
        None => ctx.file.window,
    }
    .unwrap_or(match kind {
        ProfileKind::Performance => (1.0, 20.0),
        ProfileKind::Data => (0.0, 2000.0),
    });
    let curves: Vec<(String, ProfileCurve)> = runsets
        .iter()
        .map(|runset| {
            let curve = match kind {
                ProfileKind::Performance => performance_profile(&table, &runset.label),
                ProfileKind::Data => data_profile(&table, &runset.label),
            };
            (runset.label.clone(), curve)
        })
        .collect();
    let refs: Vec<(&str, &ProfileCurve)> = curves.iter().map(|(l, c)| (l.as_str(), c)).collect();

    let slug = match kind {
        ProfileKind::Performance => "perf",
        ProfileKind::Data => "data",
    };
    let out = args
        .out
        .unwrap_or_else(|| PathBuf::from(format!("{slug}-profile.csv")));
    write_file(&out, &overlay_csv(&refs, window.0, window.1)?)?;
    println!("wrote {}", out.display());
    if args.svg {
        let svg_path = out.with_extension("svg");
        write_file(&svg_path, &overlay_svg(&refs, window.0, window.1)?)?;
        println!("wrote {}", svg_path.display());
    }
    Ok(())
}

fn cmd_reproduce(ctx: &Context, args: ReproduceArgs) -> Result<(), CliError> {
    let suite_name = pick(args.suite, ctx.file.suite.clone(), "default".to_string());
    let seed = pick(args.seed, ctx.file.seed, 42);
    let trials = pick(args.trials, ctx.file.trials, 200);
    let budget = pick(args.budget, ctx.file.budget, 10_000);
    let out_dir = args.out.unwrap_or_else(|| PathBuf::from(&args.id));
    let store = if args.no_cache {
        None
    } else {
        Some(ctx.open_store()?)
    };
    let store = store.as_ref();
    match args.id.as_str() {
        "table4-analogue" => {
            reproduce_strategy_summary(ctx, store, &out_dir, &suite_name, seed, trials, budget)
        }
        "window-study" => reproduce_window_study(
            ctx,
            store,
            &out_dir,
            &suite_name,
            seed,
            trials,
            budget,
            args.svg,
        ),
        other => Err(CliError::usage(format!(
            "unknown experiment id `{other}` (expected table4-analogue or window-study)"
        ))),
    }
}

/// Trains all four objectives with shared settings and writes one session
/// per objective plus a summary table.
fn reproduce_strategy_summary(
    ctx: &Context,
    store: Option<&Store>,
    out_dir: &Path,
    suite: &str,
    seed: u64,
    trials: u64,
    budget: u64,
) -> Result<(), CliError> {
    let rows = [
        (Strategy::Average, "q_A"),
        (Strategy::Robust, "q_R"),
        (Strategy::PerfProfile, "q_P"),
        (Strategy::DataProfile, "q_D"),
    ];
    let mut summary = format!(
        "{:<4} {:<13} {:>22} {:>22} {:>22}  {}\n",
        "row", "strategy", "objective-start", "objective-trained", "gain", "gain-kind"
    );
    for (strategy, label) in rows {
        let spec = TrainingSpec {
            strategy,
            suite: suite.to_string(),
            trial_cap: trials,
            budget,
            seed,
            ..TrainingSpec::default()
        };
        let result = train(&spec, &ctx.exec, store)?;
        store::write_session_file(&out_dir.join(format!("{strategy}.txt")), &result, true)?;
        let line = format!(
            "{:<4} {:<13} {:>22} {:>22} {:>22}  {}\n",
            label,
            strategy.to_string(),
            result.objective_q0,
            result.objective_best,
            result.gain,
            result.gain_kind()
        );
        print!("{line}");
        summary.push_str(&line);
    }
    write_file(&out_dir.join("summary.txt"), &summary)?;
    println!("bundle written to {}", out_dir.display());
    Ok(())
}

/// Trains the data objective over the full window and two sub-windows, then
/// emits zoomed baseline-vs-trained curve comparisons.
#[allow(clippy::too_many_arguments)]
fn reproduce_window_study(
    ctx: &Context,
    store: Option<&Store>,
    out_dir: &Path,
    suite_name: &str,
    seed: u64,
    trials: u64,
    budget: u64,
    svg: bool,
) -> Result<(), CliError> {
    let studies = [
        ("data-0-2000", (0.0, 2000.0)),
        ("data-0-300", (0.0, 300.0)),
        ("data-1500-2000", (1500.0, 2000.0)),
    ];
    let mut results = Vec::with_capacity(studies.len());
    for (name, window) in studies {
        let spec = TrainingSpec {
            strategy: Strategy::DataProfile,
            suite: suite_name.to_string(),
            data_window: window,
            trial_cap: trials,
            budget,
            seed,
            ..TrainingSpec::default()
        };
        let result = train(&spec, &ctx.exec, store)?;
        store::write_session_file(&out_dir.join(format!("{name}.txt")), &result, true)?;
        println!(
            "{name}: area {} -> {} ({})",
            result.objective_q0,
            result.objective_best,
            result.gain_kind()
        );
        results.push(result);
    }

    // Measurement for the comparison curves, at the same settings the
    // training itself used, so runs come straight from the cache.
    let suite = builtin_suite(suite_name)?;
    let defaults = TrainingSpec::default();
    let settings = SolverSettings::new(defaults.eps_run, budget, seed)?;
    let q0 = ParamConfig::default();
    let cutoffs = compute_cutoffs(&suite, &q0, &settings, defaults.chi, &ctx.exec, store)?;
    let baseline_curve = {
        let row = measure_config(&suite, &cutoffs, &q0, &settings, &ctx.exec, store)?;
        data_profile(&row.to_table("q0"), "q0")
    };
    let mut trained_curves = Vec::with_capacity(results.len());
    for result in &results {
        let row = measure_config(&suite, &cutoffs, &result.best, &settings, &ctx.exec, store)?;
        trained_curves.push(data_profile(&row.to_table("trained"), "trained"));
    }

    let comparisons = [
        ("zoom-0-300-vs-0-2000", (0.0, 300.0), &trained_curves[0]),
        ("zoom-0-300-vs-0-300", (0.0, 300.0), &trained_curves[1]),
        (
            "zoom-1500-2000-vs-0-2000",
            (1500.0, 2000.0),
            &trained_curves[0],
        ),
        (
            "zoom-1500-2000-vs-1500-2000",
            (1500.0, 2000.0),
            &trained_curves[2],
        ),
    ];
    for (name, (lo, hi), trained) in comparisons {
        let curves = [("q0", &baseline_curve), ("trained", trained)];
        write_file(
            &out_dir.join(format!("{name}.csv")),
            &overlay_csv(&curves, lo, hi)?,
        )?;
        if svg {
            write_file(
                &out_dir.join(format!("{name}.svg")),
                &overlay_svg(&curves, lo, hi)?,
            )?;
        }
    }
    println!("bundle written to {}", out_dir.display());
    Ok(())
}

/// Flag, then config file, then built-in default.
fn pick<T>(flag: Option<T>, file: Option<T>, default: T) -> T {
    flag.or(file).unwrap_or(default)
}

fn validate_label(label: &str) -> Result<(), CliError> {
    let ok = !label.is_empty()
        && label
            .chars()
            .all(|c| c.is_ascii_alphanumeric() || matches!(c, '-' | '_' | '.'));
    if ok {
        Ok(())
    } else {
        Err(CliError::usage(format!(
            "label `{label}` must be non-empty and use only letters, digits, `-`, `_`, `.`"
        )))
    }
}

fn param_fields(q: &ParamConfig) -> String {
    format!(
        "{} {} {} {} {} {}",
        q.alpha, q.beta, q.gamma, q.delta, q.eta, q.inertia
    )
}

fn write_file(path: &Path, contents: &str) -> Result<(), CliError> {
    if let Some(dir) = path.parent() {
        if !dir.as_os_str().is_empty() {
            fs::create_dir_all(dir)
                .map_err(|e| CliError::runtime(format!("creating {}: {e}", dir.display())))?;
        }
    }
    fs::write(path, contents)
        .map_err(|e| CliError::runtime(format!("writing {}: {e}", path.display())))
}

const CUTOFF_HEADER: &str = "name,n_p,f_start,f_star,c_p";

fn cutoff_csv(table: &CutoffTable) -> String {
    let mut out = String::from(CUTOFF_HEADER);
    out.push('\n');
    for e in &table.entries {
        out.push_str(&format!(
            "{},{},{},{},{}\n",
            e.problem, e.dimension, e.f_start, e.f_star, e.cutoff
        ));
    }
    out
}

fn parse_cutoff_csv(path: &Path) -> Result<Vec<CutoffEntry>, CliError> {
    let text = fs::read_to_string(path)
        .map_err(|e| CliError::runtime(format!("cannot read {}: {e}", path.display())))?;
    let mut lines = text.lines();
    match lines.next() {
        Some(CUTOFF_HEADER) => {}
        other => {
            return Err(CliError::runtime(format!(
                "{} is not a cut-off table (header {:?})",
                path.display(),
                other.unwrap_or("")
            )));
        }
    }
    let mut entries = Vec::new();
    for (lineno, line) in lines.enumerate() {
        if line.is_empty() {
            continue;
        }
        let fields: Vec<&str> = line.split(',').collect();
        let parse = |what: &str, field: &str| -> Result<f64, CliError> {
            field.parse().map_err(|e| {
                CliError::runtime(format!(
                    "{}:{}: bad {what} `{field}`: {e}",
                    path.display(),
                    lineno + 2
                ))
            })
        };
        if fields.len() != 5 {
            return Err(CliError::runtime(format!(
                "{}:{}: expected 5 fields, got {}",
                path.display(),
                lineno + 2,
                fields.len()
            )));
        }
        entries.push(CutoffEntry {
            problem: fields[0].to_string(),
            dimension: fields[1].parse().map_err(|e| {
                CliError::runtime(format!(
                    "{}:{}: bad dimension `{}`: {e}",
                    path.display(),
                    lineno + 2,
                    fields[1]
                ))
            })?,
            f_start: parse("f_start", fields[2])?,
            f_star: parse("f_star", fields[3])?,
            cutoff: parse("c_p", fields[4])?,
        });
    }
    Ok(entries)
}

struct RunSet {
    label: String,
    traces: Vec<(String, PathBuf)>,
}

fn parse_runset(path: &Path) -> Result<RunSet, CliError> {
    let text = fs::read_to_string(path)
        .map_err(|e| CliError::runtime(format!("cannot read {}: {e}", path.display())))?;
    let mut lines = text.lines().enumerate();
    let header = lines
        .next()
        .map(|(_, l)| l)
        .ok_or_else(|| CliError::runtime(format!("{} is empty", path.display())))?;
    if header != "proftune-runset v1" {
        return Err(CliError::runtime(format!(
            "{} is not a run set (header `{header}`)",
            path.display()
        )));
    }
    let mut take = |key: &str| -> Result<String, CliError> {
        let (lineno, line) = lines.next().ok_or_else(|| {
            CliError::runtime(format!(
                "{}: truncated run set (expected `{key}`)",
                path.display()
            ))
        })?;
        line.strip_prefix(key)
            .and_then(|rest| rest.strip_prefix(' '))
            .map(str::to_string)
            .ok_or_else(|| {
                CliError::runtime(format!(
                    "{}:{}: expected `{key} ...`, got `{line}`",
                    path.display(),
                    lineno + 1
                ))
            })
    };
    let label = take("label")?;
    take("suite")?;
    take("config")?;
    take("eps")?;
    take("budget")?;
    take("seed")?;

    let mut traces = Vec::new();
    for (lineno, line) in lines {
        if line.is_empty() {
            continue;
        }
        let entry = line.strip_prefix("trace ").ok_or_else(|| {
            CliError::runtime(format!(
                "{}:{}: expected `trace <problem> <path>`, got `{line}`",
                path.display(),
                lineno + 1
            ))
        })?;
        let (problem, trace_path) = entry.split_once(' ').ok_or_else(|| {
            CliError::runtime(format!(
                "{}:{}: expected `trace <problem> <path>`, got `{line}`",
                path.display(),
                lineno + 1
            ))
        })?;
        // Relative entries are taken relative to the run set itself.
        let trace_path = match (PathBuf::from(trace_path), path.parent()) {
            (p, Some(dir)) if p.is_relative() && !dir.as_os_str().is_empty() => dir.join(p),
            (p, _) => p,
        };
        traces.push((problem.to_string(), trace_path));
    }
    if traces.is_empty() {
        return Err(CliError::runtime(format!(
            "{} lists no traces",
            path.display()
        )));
    }
    Ok(RunSet { label, traces })
}
