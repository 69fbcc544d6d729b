//! Disk cache for solver runs and training sessions.
//!
//! Layout under the store root:
//!
//! ```text
//! traces/<16-hex>.csv   one solver run, addressed by its run key
//! sessions/<name>.txt   one saved training session
//! manifest.txt          sorted snapshot of everything above
//! ```
//!
//! All writes go through a temp file plus rename, and the manifest is
//! rewritten as a full sorted snapshot after every mutation, so the on-disk
//! bytes do not depend on the order in which parallel workers finish.

use std::collections::BTreeSet;
use std::fs;
use std::io::Write as _;
use std::path::{Path, PathBuf};
use std::sync::atomic::{AtomicU64, Ordering};
use std::sync::Mutex;

use crate::error::Error;
use crate::hash;
use crate::solver::{ParamConfig, RunTrace, SolverSettings};
use crate::testbed::Problem;
use crate::training::TrainingResult;

const MANIFEST_HEADER: &str = "proftune-manifest v1";

/// Identity of one solver run: problem, solver parameters, run settings.
/// Two runs with equal keys produce identical traces, which is what makes
/// the cache sound.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct RunKey {
    pub problem: String,
    pub config_fingerprint: u64,
    pub settings_fingerprint: u64,
    pub seed: u64,
}

impl RunKey {
    pub fn new(problem: &Problem, config: &ParamConfig, settings: &SolverSettings) -> Self {
        RunKey {
            problem: problem.name().to_string(),
            config_fingerprint: config.fingerprint(),
            settings_fingerprint: settings.fingerprint(),
            seed: settings.seed,
        }
    }

    /// File stem of the cached trace.
    pub fn file_stem(&self) -> String {
        let mut bytes = Vec::new();
        bytes.extend_from_slice(self.problem.as_bytes());
        bytes.push(0x1f);
        bytes.extend_from_slice(&self.config_fingerprint.to_le_bytes());
        bytes.push(0x1f);
        bytes.extend_from_slice(&self.settings_fingerprint.to_le_bytes());
        bytes.push(0x1f);
        bytes.extend_from_slice(&self.seed.to_le_bytes());
        format!("{:016x}", hash::fnv1a64(&bytes))
    }
}

#[derive(Debug, Default)]
struct Index {
    traces: BTreeSet<String>,
    sessions: BTreeSet<String>,
}

/// An open store rooted at a directory.
#[derive(Debug)]
pub struct Store {
    root: PathBuf,
    index: Mutex<Index>,
}

static TMP_COUNTER: AtomicU64 = AtomicU64::new(0);

fn atomic_write(path: &Path, contents: &str) -> Result<(), Error> {
    let dir = path.parent().expect("store paths have parents");
    let tmp = dir.join(format!(
        ".tmp-{}-{}",
        std::process::id(),
        TMP_COUNTER.fetch_add(1, Ordering::Relaxed)
    ));
    let write = || -> std::io::Result<()> {
        let mut file = fs::File::create(&tmp)?;
        file.write_all(contents.as_bytes())?;
        file.sync_all()?;
        fs::rename(&tmp, path)
    };
    write().map_err(|e| {
        let _ = fs::remove_file(&tmp);
        Error::io(format!("writing {}", path.display()), e)
    })
}

impl Store {
    /// Opens (creating if needed) a store at `root`. An existing manifest is
    /// loaded; entries whose files have gone missing are dropped with a
    /// warning on stderr.
    pub fn open(root: impl Into<PathBuf>) -> Result<Self, Error> {
        let root = root.into();
        fs::create_dir_all(root.join("traces"))
            .map_err(|e| Error::io(format!("creating {}/traces", root.display()), e))?;
        fs::create_dir_all(root.join("sessions"))
            .map_err(|e| Error::io(format!("creating {}/sessions", root.display()), e))?;

        let mut index = Index::default();
        let manifest = root.join("manifest.txt");
        if manifest.exists() {
            let text = fs::read_to_string(&manifest)
                .map_err(|e| Error::io(format!("reading {}", manifest.display()), e))?;
            for (lineno, line) in text.lines().enumerate() {
                if lineno == 0 {
                    if line != MANIFEST_HEADER {
                        eprintln!(
                            "warning: {} has unrecognized header `{line}`, rebuilding index",
                            manifest.display()
                        );
                        break;
                    }
                    continue;
                }
                if line.is_empty() {
                    continue;
                }
                match line.split_once(' ') {
                    Some(("trace", stem)) => {
                        if root.join("traces").join(format!("{stem}.csv")).exists() {
                            index.traces.insert(stem.to_string());
                        } else {
                            eprintln!("warning: manifest lists missing trace {stem}, dropping it");
                        }
                    }
                    Some(("session", name)) => {
                        if root.join("sessions").join(format!("{name}.txt")).exists() {
                            index.sessions.insert(name.to_string());
                        } else {
                            eprintln!(
                                "warning: manifest lists missing session {name}, dropping it"
                            );
                        }
                    }
                    _ => {
                        eprintln!("warning: ignoring malformed manifest line `{line}`");
                    }
                }
            }
        }

        let store = Store {
            root,
            index: Mutex::new(index),
        };
        store.rewrite_manifest()?;
        Ok(store)
    }

    pub fn root(&self) -> &Path {
        &self.root
    }

    pub fn trace_path(&self, key: &RunKey) -> PathBuf {
        self.root
            .join("traces")
            .join(format!("{}.csv", key.file_stem()))
    }

    pub fn session_path(&self, name: &str) -> PathBuf {
        self.root.join("sessions").join(format!("{name}.txt"))
    }

    fn rewrite_manifest(&self) -> Result<(), Error> {
        let index = self.index.lock().unwrap();
        let mut text = String::from(MANIFEST_HEADER);
        text.push('\n');
        for stem in &index.traces {
            text.push_str(&format!("trace {stem}\n"));
        }
        for name in &index.sessions {
            text.push_str(&format!("session {name}\n"));
        }
        atomic_write(&self.root.join("manifest.txt"), &text)
    }

    /// Returns the cached trace for `key`, or runs `run`, stores the result,
    /// and returns it. A cached file that fails to parse, or whose header
    /// does not match the key, is treated as a miss and overwritten.
    pub fn get_or_run(
        &self,
        key: &RunKey,
        run: impl FnOnce() -> RunTrace,
    ) -> Result<RunTrace, Error> {
        let path = self.trace_path(key);
        if path.exists() {
            match fs::read_to_string(&path) {
                Ok(text) => match RunTrace::from_text(&text) {
                    Ok(trace)
                        if trace.problem() == key.problem
                            && trace.config_fingerprint() == key.config_fingerprint
                            && trace.seed() == key.seed =>
                    {
                        return Ok(trace);
                    }
                    Ok(_) => {
                        eprintln!(
                            "warning: cached trace {} does not match its key, re-running",
                            path.display()
                        );
                    }
                    Err(e) => {
                        eprintln!(
                            "warning: cached trace {} is corrupt ({e}), re-running",
                            path.display()
                        );
                    }
                },
                Err(e) => {
                    eprintln!(
                        "warning: cached trace {} is unreadable ({e}), re-running",
                        path.display()
                    );
                }
            }
        }
        let trace = run();
        self.put_trace(key, &trace)?;
        Ok(trace)
    }

    /// Stores a trace under its key, overwriting any existing file.
    pub fn put_trace(&self, key: &RunKey, trace: &RunTrace) -> Result<(), Error> {
        let path = self.trace_path(key);
        atomic_write(&path, &trace.to_text())?;
        self.index.lock().unwrap().traces.insert(key.file_stem());
        self.rewrite_manifest()
    }

    /// Saves a training session under `name`. Refuses to overwrite unless
    /// `force` is set.
    pub fn save_session(
        &self,
        name: &str,
        result: &TrainingResult,
        force: bool,
    ) -> Result<PathBuf, Error> {
        let path = self.session_path(name);
        if path.exists() && !force {
            return Err(Error::SessionExists(path));
        }
        atomic_write(&path, &crate::training::session_text(result))?;
        self.index.lock().unwrap().sessions.insert(name.to_string());
        self.rewrite_manifest()?;
        Ok(path)
    }

    pub fn load_session(&self, name: &str) -> Result<TrainingResult, Error> {
        read_session_file(&self.session_path(name))
    }

    pub fn session_names(&self) -> Vec<String> {
        self.index
            .lock()
            .unwrap()
            .sessions
            .iter()
            .cloned()
            .collect()
    }
}

/// Writes a session file at an arbitrary path (outside any store). Refuses
/// to overwrite unless `force` is set.
pub fn write_session_file(path: &Path, result: &TrainingResult, force: bool) -> Result<(), Error> {
    if path.exists() && !force {
        return Err(Error::SessionExists(path.to_path_buf()));
    }
    if let Some(dir) = path.parent() {
        if !dir.as_os_str().is_empty() {
            fs::create_dir_all(dir)
                .map_err(|e| Error::io(format!("creating {}", dir.display()), e))?;
        }
    }
    atomic_write(path, &crate::training::session_text(result))
}

/// Reads a session file from an arbitrary path.
pub fn read_session_file(path: &Path) -> Result<TrainingResult, Error> {
    let text = fs::read_to_string(path)
        .map_err(|e| Error::io(format!("reading {}", path.display()), e))?;
    crate::training::parse_session_text(&text)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::solver::{solve, ParamConfig, SolverSettings};
    use crate::testbed::builtin_suite;
    use std::cell::Cell;

    fn smoke_problem() -> crate::testbed::Problem {
        builtin_suite("smoke").unwrap().problems()[0].clone()
    }

    fn quick_settings() -> SolverSettings {
        SolverSettings::new(1e-2, 200, 42).unwrap()
    }

    #[test]
    fn miss_then_hit_runs_the_closure_once() {
        let dir = tempfile::tempdir().unwrap();
        let store = Store::open(dir.path()).unwrap();
        let problem = smoke_problem();
        let config = ParamConfig::default();
        let settings = quick_settings();
        let key = RunKey::new(&problem, &config, &settings);

        let calls = Cell::new(0);
        let first = store
            .get_or_run(&key, || {
                calls.set(calls.get() + 1);
                solve(&problem, &config, &settings)
            })
            .unwrap();
        let second = store
            .get_or_run(&key, || {
                calls.set(calls.get() + 1);
                solve(&problem, &config, &settings)
            })
            .unwrap();
        assert_eq!(calls.get(), 1);
        assert_eq!(first, second);
    }

    #[test]
    fn corrupt_cache_entry_is_replaced() {
        let dir = tempfile::tempdir().unwrap();
        let store = Store::open(dir.path()).unwrap();
        let problem = smoke_problem();
        let config = ParamConfig::default();
        let settings = quick_settings();
        let key = RunKey::new(&problem, &config, &settings);

        let trace = store
            .get_or_run(&key, || solve(&problem, &config, &settings))
            .unwrap();
        fs::write(store.trace_path(&key), "not a trace\n").unwrap();
        let healed = store
            .get_or_run(&key, || solve(&problem, &config, &settings))
            .unwrap();
        assert_eq!(trace, healed);
        // The healed bytes parse again.
        let reread = RunTrace::from_text(&fs::read_to_string(store.trace_path(&key)).unwrap());
        assert!(reread.is_ok());
    }

    #[test]
    fn manifest_is_sorted_and_complete() {
        let dir = tempfile::tempdir().unwrap();
        let store = Store::open(dir.path()).unwrap();
        let problems = builtin_suite("smoke").unwrap();
        let config = ParamConfig::default();
        let settings = quick_settings();
        // Insert in suite order; manifest must come out sorted regardless.
        for problem in problems.problems() {
            let key = RunKey::new(problem, &config, &settings);
            store
                .get_or_run(&key, || solve(problem, &config, &settings))
                .unwrap();
        }
        let manifest = fs::read_to_string(dir.path().join("manifest.txt")).unwrap();
        let lines: Vec<&str> = manifest.lines().collect();
        assert_eq!(lines[0], MANIFEST_HEADER);
        let stems: Vec<&str> = lines[1..]
            .iter()
            .map(|l| l.strip_prefix("trace ").unwrap())
            .collect();
        assert_eq!(stems.len(), problems.len());
        let mut sorted = stems.clone();
        sorted.sort_unstable();
        assert_eq!(stems, sorted);
    }

    #[test]
    fn reopening_picks_up_existing_entries() {
        let dir = tempfile::tempdir().unwrap();
        let problem = smoke_problem();
        let config = ParamConfig::default();
        let settings = quick_settings();
        let key = RunKey::new(&problem, &config, &settings);
        {
            let store = Store::open(dir.path()).unwrap();
            store
                .get_or_run(&key, || solve(&problem, &config, &settings))
                .unwrap();
        }
        let store = Store::open(dir.path()).unwrap();
        let hit = store
            .get_or_run(&key, || panic!("should be cached"))
            .unwrap();
        assert_eq!(hit.problem(), problem.name());
    }

    #[test]
    fn manifest_drops_entries_whose_files_vanished() {
        let dir = tempfile::tempdir().unwrap();
        let problem = smoke_problem();
        let config = ParamConfig::default();
        let settings = quick_settings();
        let key = RunKey::new(&problem, &config, &settings);
        {
            let store = Store::open(dir.path()).unwrap();
            store
                .get_or_run(&key, || solve(&problem, &config, &settings))
                .unwrap();
        }
        fs::remove_file(
            dir.path()
                .join("traces")
                .join(format!("{}.csv", key.file_stem())),
        )
        .unwrap();
        let _store = Store::open(dir.path()).unwrap();
        let manifest = fs::read_to_string(dir.path().join("manifest.txt")).unwrap();
        assert_eq!(manifest, format!("{MANIFEST_HEADER}\n"));
    }
}
