//! Config file in, report files out, exit status back.

use std::path::{Path, PathBuf};

use thiserror::Error;

use crate::config::{parse_config, Command, ConfigError};
use crate::report::{assemble_report, write_outputs};
use crate::run::execute;

pub const EXIT_OK: i32 = 0;
pub const EXIT_USAGE: i32 = 1;
pub const EXIT_PROPERTY: i32 = 2;

#[derive(Debug, Error)]
pub enum AppError {
    #[error("{path}: {source}")]
    Read {
        path: String,
        source: std::io::Error,
    },
    #[error("{path}: invalid configuration:\n{}", list(.errors))]
    Config {
        path: String,
        errors: Vec<ConfigError>,
    },
    #[error("config asks for command `{in_file}` but `{requested}` was requested")]
    CommandMismatch { in_file: String, requested: String },
    #[error("thread pool: {0}")]
    Pool(String),
    #[error(transparent)]
    Compute(#[from] hyposym_core::Error),
    #[error("writing outputs: {0}")]
    Write(std::io::Error),
}

fn list(errors: &[ConfigError]) -> String {
    errors
        .iter()
        .map(|e| format!("  {e}"))
        .collect::<Vec<_>>()
        .join("\n")
}

#[derive(Debug, Clone, Default)]
pub struct Options {
    pub out: Option<PathBuf>,
    pub seed: Option<u64>,
    pub jobs: Option<usize>,
}

#[derive(Debug, Clone)]
pub struct Summary {
    pub exit_code: i32,
    pub files: Vec<String>,
    pub violations: Vec<String>,
}

pub fn run_file(command: Command, config: &Path, opts: &Options) -> Result<Summary, AppError> {
    let path = config.display().to_string();
    let text = std::fs::read_to_string(config).map_err(|source| AppError::Read {
        path: path.clone(),
        source,
    })?;
    let mut cfg = parse_config(&text).map_err(|errors| AppError::Config { path, errors })?;
    if let Some(c) = cfg.command {
        if c != command {
            return Err(AppError::CommandMismatch {
                in_file: c.as_str().into(),
                requested: command.as_str().into(),
            });
        }
    }
    cfg.command = Some(command);
    if let Some(seed) = opts.seed {
        cfg.output.seed = seed;
    }
    let out_dir = opts
        .out
        .clone()
        .unwrap_or_else(|| PathBuf::from(&cfg.output.dir));
    cfg.output.dir = out_dir.display().to_string();

    let mut pool = rayon::ThreadPoolBuilder::new();
    if let Some(j) = opts.jobs {
        pool = pool.num_threads(j);
    }
    let pool = pool.build().map_err(|e| AppError::Pool(e.to_string()))?;
    let outcome = pool.install(|| execute(command, &cfg))?;

    let report = assemble_report(command.as_str(), &cfg, &outcome);
    let stem = command.as_str().replace('-', "_");
    let files =
        write_outputs(&out_dir, &stem, &report, &outcome.tables).map_err(AppError::Write)?;
    let violations: Vec<String> = outcome
        .violations
        .iter()
        .map(|v| format!("{}: {}", v.property, v.detail))
        .collect();
    Ok(Summary {
        exit_code: if violations.is_empty() {
            EXIT_OK
        } else {
            EXIT_PROPERTY
        },
        files,
        violations,
    })
}
