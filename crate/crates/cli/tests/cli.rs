//! End-to-end checks of the command-line interface, driving the real binary.

use std::fs;
use std::path::Path;
use std::process::{Command, Output};

use tempfile::TempDir;

/// Runs the binary in `dir` with the store at `dir/store`.
fn proftune(dir: &Path, args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_proftune"))
        .current_dir(dir)
        .env("PROFTUNE_STORE", dir.join("store"))
        .args(args)
        .output()
        .expect("binary should start")
}

fn assert_code(out: &Output, code: i32) {
    assert_eq!(
        out.status.code(),
        Some(code),
        "stdout:\n{}\nstderr:\n{}",
        String::from_utf8_lossy(&out.stdout),
        String::from_utf8_lossy(&out.stderr)
    );
}

fn stdout(out: &Output) -> String {
    String::from_utf8_lossy(&out.stdout).into_owned()
}

fn stderr(out: &Output) -> String {
    String::from_utf8_lossy(&out.stderr).into_owned()
}

/// Small shared settings so each test finishes in well under a second.
const FAST: &[&str] = &["--suite", "smoke", "--budget", "2000"];

fn with_fast<'a>(args: &[&'a str]) -> Vec<&'a str> {
    let mut v = args.to_vec();
    v.extend_from_slice(FAST);
    v
}

#[test]
fn suite_list_covers_every_builtin() {
    let dir = TempDir::new().unwrap();
    let out = proftune(dir.path(), &["suite", "list"]);
    assert_code(&out, 0);
    let text = stdout(&out);
    assert!(text.contains("default (24 problems)"), "{text}");
    assert!(text.contains("smoke (4 problems)"), "{text}");

    let out = proftune(dir.path(), &["suite", "list", "smoke"]);
    assert_code(&out, 0);
    let text = stdout(&out);
    for name in ["sphere-2", "rosenbrock-2", "booth-2", "ackley-3"] {
        assert!(text.contains(name), "{text}");
    }
    assert!(text.contains("[-5.12, 5.12]^2"), "{text}");
}

#[test]
fn cutoff_derivation_is_reproducible() {
    let dir = TempDir::new().unwrap();
    let out = proftune(dir.path(), &with_fast(&["cutoffs", "--out", "a.csv"]));
    assert_code(&out, 0);
    let out = proftune(dir.path(), &with_fast(&["cutoffs", "--out", "b.csv"]));
    assert_code(&out, 0);
    // A fresh store must reproduce the same bytes as the cached rerun.
    let out = proftune(
        dir.path(),
        &with_fast(&["cutoffs", "--out", "c.csv", "--no-cache"]),
    );
    assert_code(&out, 0);
    let a = fs::read(dir.path().join("a.csv")).unwrap();
    let b = fs::read(dir.path().join("b.csv")).unwrap();
    let c = fs::read(dir.path().join("c.csv")).unwrap();
    assert_eq!(a, b);
    assert_eq!(a, c);
    assert!(a.starts_with(b"name,n_p,f_start,f_star,c_p\n"));
}

#[test]
fn zero_looseness_pins_cutoffs_to_the_best_value() {
    let dir = TempDir::new().unwrap();
    let out = proftune(
        dir.path(),
        &with_fast(&["cutoffs", "--chi", "0", "--out", "zero.csv"]),
    );
    assert_code(&out, 0);
    let text = fs::read_to_string(dir.path().join("zero.csv")).unwrap();
    for row in text.lines().skip(1) {
        let fields: Vec<&str> = row.split(',').collect();
        assert_eq!(fields[3], fields[4], "c_p must equal f_star in {row}");
    }
}

#[test]
fn training_writes_a_session_and_reports_the_gain() {
    let dir = TempDir::new().unwrap();
    let out = proftune(dir.path(), &with_fast(&["train", "--trials", "12"]));
    assert_code(&out, 0);
    let text = stdout(&out);
    assert!(text.contains("objective(start)"), "{text}");
    assert!(text.contains("gain"), "{text}");
    let session = dir.path().join("store/sessions/average-smoke-s42.txt");
    assert!(session.exists());
    let body = fs::read_to_string(session).unwrap();
    assert!(body.starts_with("proftune-session v1\n"), "{body}");
    assert_eq!(body.matches("\ntrial ").count(), 12, "{body}");
}

#[test]
fn existing_sessions_are_not_clobbered() {
    let dir = TempDir::new().unwrap();
    let args = with_fast(&["train", "--trials", "4"]);
    assert_code(&proftune(dir.path(), &args), 0);
    let out = proftune(dir.path(), &args);
    assert_code(&out, 1);
    assert!(stderr(&out).contains("already exists"), "{}", stderr(&out));
    let mut forced = args.clone();
    forced.push("--force");
    assert_code(&proftune(dir.path(), &forced), 0);
}

#[test]
fn cache_bypass_changes_no_results() {
    let dir = TempDir::new().unwrap();
    let cached = with_fast(&["train", "--trials", "6", "--out", "cached.txt"]);
    assert_code(&proftune(dir.path(), &cached), 0);
    let fresh = with_fast(&["train", "--trials", "6", "--out", "fresh.txt", "--no-cache"]);
    assert_code(&proftune(dir.path(), &fresh), 0);
    let a = fs::read(dir.path().join("cached.txt")).unwrap();
    let b = fs::read(dir.path().join("fresh.txt")).unwrap();
    assert_eq!(a, b);
}

#[test]
fn usage_errors_exit_with_code_two() {
    let dir = TempDir::new().unwrap();
    let cases: Vec<Vec<&str>> = vec![
        vec!["train", "--strategy", "nonsense"],
        vec!["train", "--suite", "nosuch"],
        vec!["train", "--strategy", "data-profile", "--window", "300,0"],
        vec!["train", "--strategy", "average", "--window", "0,10"],
        vec!["train", "--window", "backwards"],
        vec!["cutoffs", "--suite", "nosuch"],
        vec!["run", "--label", "has space", "--suite", "smoke"],
        vec!["reproduce", "no-such-experiment"],
    ];
    for case in cases {
        let out = proftune(dir.path(), &case);
        assert_code(&out, 2);
        assert!(!stderr(&out).is_empty(), "case {case:?} printed nothing");
    }
}

#[test]
fn run_and_profile_emit_overlay_curves() {
    let dir = TempDir::new().unwrap();
    assert_code(
        &proftune(dir.path(), &with_fast(&["cutoffs", "--out", "cut.csv"])),
        0,
    );
    assert_code(
        &proftune(dir.path(), &with_fast(&["run", "--label", "base"])),
        0,
    );
    assert_code(
        &proftune(
            dir.path(),
            &with_fast(&["run", "--label", "wide", "--delta", "2.5"]),
        ),
        0,
    );

    let out = proftune(
        dir.path(),
        &[
            "profile",
            "--kind",
            "perf",
            "--cutoffs",
            "cut.csv",
            "--svg",
            "base.runset.txt",
            "wide.runset.txt",
        ],
    );
    assert_code(&out, 0);
    let csv = fs::read_to_string(dir.path().join("perf-profile.csv")).unwrap();
    let mut lines = csv.lines();
    assert_eq!(lines.next(), Some("tau,value_base,value_wide"));
    let mut last = (f64::NEG_INFINITY, f64::NEG_INFINITY, f64::NEG_INFINITY);
    for line in lines {
        let v: Vec<f64> = line.split(',').map(|f| f.parse().unwrap()).collect();
        assert_eq!(v.len(), 3);
        assert!(v[0] > last.0, "abscissae must increase");
        assert!(v[1] >= last.1 && v[2] >= last.2, "curves must be monotone");
        assert!(v[1] <= 1.0 && v[2] <= 1.0);
        last = (v[0], v[1], v[2]);
    }
    let svg = fs::read_to_string(dir.path().join("perf-profile.svg")).unwrap();
    assert_eq!(
        svg.matches("<polyline").count(),
        2,
        "one polyline per curve"
    );

    // Data profiles accept a single run set.
    let out = proftune(
        dir.path(),
        &[
            "profile",
            "--kind",
            "data",
            "--cutoffs",
            "cut.csv",
            "--window",
            "0,500",
            "base.runset.txt",
        ],
    );
    assert_code(&out, 0);
    let csv = fs::read_to_string(dir.path().join("data-profile.csv")).unwrap();
    assert!(csv.starts_with("nu,value_base\n0,"), "{csv}");
}

#[test]
fn performance_profiles_need_a_comparison() {
    let dir = TempDir::new().unwrap();
    assert_code(
        &proftune(dir.path(), &with_fast(&["cutoffs", "--out", "cut.csv"])),
        0,
    );
    assert_code(
        &proftune(dir.path(), &with_fast(&["run", "--label", "only"])),
        0,
    );
    let out = proftune(
        dir.path(),
        &[
            "profile",
            "--kind",
            "perf",
            "--cutoffs",
            "cut.csv",
            "only.runset.txt",
        ],
    );
    assert_code(&out, 1);
    assert!(stderr(&out).contains("pairwise"), "{}", stderr(&out));
}

#[test]
fn profiles_reject_duplicate_labels() {
    let dir = TempDir::new().unwrap();
    assert_code(
        &proftune(dir.path(), &with_fast(&["cutoffs", "--out", "cut.csv"])),
        0,
    );
    assert_code(
        &proftune(dir.path(), &with_fast(&["run", "--label", "same"])),
        0,
    );
    let out = proftune(
        dir.path(),
        &[
            "profile",
            "--kind",
            "perf",
            "--cutoffs",
            "cut.csv",
            "same.runset.txt",
            "same.runset.txt",
        ],
    );
    assert_code(&out, 2);
    assert!(stderr(&out).contains("unique"), "{}", stderr(&out));
}

#[test]
fn missing_traces_are_reported_by_name() {
    let dir = TempDir::new().unwrap();
    assert_code(
        &proftune(dir.path(), &with_fast(&["cutoffs", "--out", "cut.csv"])),
        0,
    );
    assert_code(
        &proftune(dir.path(), &with_fast(&["run", "--label", "gappy"])),
        0,
    );
    // Remove one cached trace behind the run set's back.
    let runset = fs::read_to_string(dir.path().join("gappy.runset.txt")).unwrap();
    let victim = runset
        .lines()
        .find_map(|l| l.strip_prefix("trace booth-2 "))
        .expect("run set lists booth-2");
    fs::remove_file(victim).unwrap();

    let out = proftune(
        dir.path(),
        &[
            "profile",
            "--kind",
            "data",
            "--cutoffs",
            "cut.csv",
            "gappy.runset.txt",
        ],
    );
    assert_code(&out, 1);
    let err = stderr(&out);
    assert!(err.contains("booth-2"), "{err}");
    assert!(err.contains("gappy"), "{err}");
}

#[test]
fn sessions_feed_runs_through_from_session() {
    let dir = TempDir::new().unwrap();
    assert_code(
        &proftune(
            dir.path(),
            &with_fast(&["train", "--trials", "8", "--out", "tuned.txt"]),
        ),
        0,
    );
    let out = proftune(
        dir.path(),
        &with_fast(&["run", "--label", "tuned", "--from-session", "tuned.txt"]),
    );
    assert_code(&out, 0);
    let runset = fs::read_to_string(dir.path().join("tuned.runset.txt")).unwrap();
    let session = fs::read_to_string(dir.path().join("tuned.txt")).unwrap();
    let best = session
        .lines()
        .find_map(|l| l.strip_prefix("best "))
        .unwrap();
    let config = runset
        .lines()
        .find_map(|l| l.strip_prefix("config "))
        .unwrap();
    assert_eq!(best, config, "run must use the session's trained values");

    // The trained configuration conflicts with explicit parameter flags.
    let out = proftune(
        dir.path(),
        &with_fast(&[
            "run",
            "--label",
            "x",
            "--from-session",
            "tuned.txt",
            "--alpha",
            "1.9",
        ]),
    );
    assert_code(&out, 2);
}

#[test]
fn config_files_fill_in_defaults_and_flags_win() {
    let dir = TempDir::new().unwrap();
    fs::write(
        dir.path().join("cfg.txt"),
        "# shared settings\nsuite=smoke\ntrials=3\nbudget=2000\nseed=9\n",
    )
    .unwrap();
    let out = proftune(
        dir.path(),
        &[
            "train", "--config", "cfg.txt", "--trials", "5", "--out", "s.txt",
        ],
    );
    assert_code(&out, 0);
    let session = fs::read_to_string(dir.path().join("s.txt")).unwrap();
    assert!(session.contains("\nsuite smoke\n"), "{session}");
    assert!(session.contains("\ntrial-cap 5\n"), "flags beat the file");
    assert!(session.contains("\nseed 9\n"), "{session}");
    assert!(session.contains("\nbudget 2000\n"), "{session}");

    let out = proftune(dir.path(), &["train", "--config", "cfg.txt", "--junk"]);
    assert_code(&out, 2);
    fs::write(dir.path().join("bad.txt"), "no-such-key=1\n").unwrap();
    let out = proftune(dir.path(), &["train", "--config", "bad.txt"]);
    assert_code(&out, 2);
    assert!(stderr(&out).contains("no-such-key"), "{}", stderr(&out));
}

#[test]
fn the_store_flag_beats_the_environment() {
    let dir = TempDir::new().unwrap();
    let out = Command::new(env!("CARGO_BIN_EXE_proftune"))
        .current_dir(dir.path())
        .env("PROFTUNE_STORE", dir.path().join("env-store"))
        .args([
            "cutoffs", "--suite", "smoke", "--budget", "2000", "--out", "a.csv",
        ])
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(0));
    assert!(dir.path().join("env-store/manifest.txt").exists());

    let out = Command::new(env!("CARGO_BIN_EXE_proftune"))
        .current_dir(dir.path())
        .env("PROFTUNE_STORE", dir.path().join("env-store"))
        .args([
            "--store",
            "flag-store",
            "cutoffs",
            "--suite",
            "smoke",
            "--budget",
            "2000",
            "--out",
            "b.csv",
        ])
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(0));
    assert!(dir.path().join("flag-store/manifest.txt").exists());
}

#[test]
fn reproduce_writes_a_self_contained_bundle() {
    let dir = TempDir::new().unwrap();
    let out = proftune(
        dir.path(),
        &[
            "reproduce",
            "table4-analogue",
            "--suite",
            "smoke",
            "--trials",
            "6",
            "--budget",
            "2000",
            "--out",
            "bundle",
        ],
    );
    assert_code(&out, 0);
    for name in [
        "average.txt",
        "robust.txt",
        "perf-profile.txt",
        "data-profile.txt",
        "summary.txt",
    ] {
        assert!(dir.path().join("bundle").join(name).exists(), "{name}");
    }
    let summary = fs::read_to_string(dir.path().join("bundle/summary.txt")).unwrap();
    for row in ["q_A", "q_R", "q_P", "q_D"] {
        assert!(summary.contains(row), "{summary}");
    }
    // Bundles must not leak machine-local paths.
    let root = dir.path().to_string_lossy().into_owned();
    for name in ["average.txt", "summary.txt"] {
        let body = fs::read_to_string(dir.path().join("bundle").join(name)).unwrap();
        assert!(!body.contains(&root), "{name} embeds a local path");
    }
}
