//! Flag resolution: config file, environment, and built-in defaults.
//!
//! Every tunable accepted on the command line can also come from a key=value
//! config file. Precedence, highest first: explicit flag, config file,
//! environment (store root only), built-in default.

use std::fmt;
use std::path::{Path, PathBuf};

use proftune_core::Error;

/// A command failure with its process exit code: usage errors exit 2,
/// runtime failures exit 1.
#[derive(Debug)]
pub enum CliError {
    Usage(String),
    Runtime(String),
}

impl CliError {
    pub fn usage(msg: impl Into<String>) -> Self {
        CliError::Usage(msg.into())
    }

    pub fn runtime(msg: impl Into<String>) -> Self {
        CliError::Runtime(msg.into())
    }

    pub fn code(&self) -> i32 {
        match self {
            CliError::Usage(_) => 2,
            CliError::Runtime(_) => 1,
        }
    }
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CliError::Usage(msg) | CliError::Runtime(msg) => f.write_str(msg),
        }
    }
}

impl From<Error> for CliError {
    fn from(e: Error) -> Self {
        match e {
            Error::UnknownSuite { .. }
            | Error::InvalidConfig(_)
            | Error::InvalidSpace(_)
            | Error::InvalidWindow { .. }
            | Error::InvalidArgument(_) => CliError::Usage(e.to_string()),
            other => CliError::Runtime(other.to_string()),
        }
    }
}

/// Values read from a `--config` file. Every field is optional; flags win.
#[derive(Debug, Default)]
pub struct FileConfig {
    pub store: Option<PathBuf>,
    pub jobs: Option<usize>,
    pub suite: Option<String>,
    pub strategy: Option<String>,
    pub seed: Option<u64>,
    pub trials: Option<u64>,
    pub chi: Option<f64>,
    pub budget: Option<u64>,
    pub eps_run: Option<f64>,
    pub eps_meta: Option<f64>,
    pub eps_inner: Option<f64>,
    pub window: Option<(f64, f64)>,
}

impl FileConfig {
    /// Loads a config file, or returns the empty config when no path was
    /// given. Lines are `key = value`; blank lines and `#` comments are
    /// skipped; unknown keys are usage errors.
    pub fn load(path: Option<&Path>) -> Result<Self, CliError> {
        let Some(path) = path else {
            return Ok(FileConfig::default());
        };
        let text = std::fs::read_to_string(path)
            .map_err(|e| CliError::runtime(format!("cannot read {}: {e}", path.display())))?;
        let mut config = FileConfig::default();
        for (lineno, raw) in text.lines().enumerate() {
            let line = raw.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let (key, value) = line.split_once('=').ok_or_else(|| {
                CliError::usage(format!(
                    "{}:{}: expected `key = value`, got `{raw}`",
                    path.display(),
                    lineno + 1
                ))
            })?;
            let key = key.trim();
            let value = value.trim();
            let parse_err = |e: &dyn fmt::Display| {
                CliError::usage(format!(
                    "{}:{}: bad value for `{key}`: {e}",
                    path.display(),
                    lineno + 1
                ))
            };
            match key {
                "store" => config.store = Some(PathBuf::from(value)),
                "jobs" => config.jobs = Some(value.parse().map_err(|e| parse_err(&e))?),
                "suite" => config.suite = Some(value.to_string()),
                "strategy" => config.strategy = Some(value.to_string()),
                "seed" => config.seed = Some(value.parse().map_err(|e| parse_err(&e))?),
                "trials" => config.trials = Some(value.parse().map_err(|e| parse_err(&e))?),
                "chi" => config.chi = Some(value.parse().map_err(|e| parse_err(&e))?),
                "budget" => config.budget = Some(value.parse().map_err(|e| parse_err(&e))?),
                "eps-run" => config.eps_run = Some(value.parse().map_err(|e| parse_err(&e))?),
                "eps-meta" => config.eps_meta = Some(value.parse().map_err(|e| parse_err(&e))?),
                "eps-inner" => config.eps_inner = Some(value.parse().map_err(|e| parse_err(&e))?),
                "window" => config.window = Some(parse_window(value)?),
                other => {
                    return Err(CliError::usage(format!(
                        "{}:{}: unknown config key `{other}`",
                        path.display(),
                        lineno + 1
                    )));
                }
            }
        }
        Ok(config)
    }
}

/// Parses a `LO,HI` window argument.
pub fn parse_window(text: &str) -> Result<(f64, f64), CliError> {
    let bad = || CliError::usage(format!("expected a window of the form LO,HI, got `{text}`"));
    let (lo, hi) = text.split_once(',').ok_or_else(bad)?;
    let lo: f64 = lo.trim().parse().map_err(|_| bad())?;
    let hi: f64 = hi.trim().parse().map_err(|_| bad())?;
    Ok((lo, hi))
}

/// Store root: flag beats config file beats `PROFTUNE_STORE` beats
/// `./proftune-store`.
pub fn resolve_store(flag: Option<PathBuf>, file: Option<PathBuf>) -> PathBuf {
    flag.or(file)
        .or_else(|| std::env::var_os("PROFTUNE_STORE").map(PathBuf::from))
        .unwrap_or_else(|| PathBuf::from("proftune-store"))
}
