//! `key = value` settings files. Command-line flags take precedence.

use std::path::Path;

use crate::error::{CliError, Result};

#[derive(Debug, Clone, Default, PartialEq)]
pub struct Config {
    /// Evaluation grid for `apply` and `study`.
    pub grid: Option<usize>,
    /// Sampling grid for norm estimates.
    pub norm_grid: Option<usize>,
    pub refine: Option<usize>,
    pub iterations: Option<usize>,
    pub seed: Option<u64>,
    pub tolerance: Option<f64>,
}

fn value<T: std::str::FromStr>(line: usize, key: &str, v: &str) -> Result<T> {
    v.parse()
        .map_err(|_| CliError::Config(format!("line {line}: bad value '{v}' for '{key}'")))
}

impl Config {
    /// Blank lines and `#` comments are ignored; unknown keys are errors.
    pub fn parse(text: &str) -> Result<Config> {
        let mut c = Config::default();
        for (i, raw) in text.lines().enumerate() {
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let n = i + 1;
            let (k, v) = line
                .split_once('=')
                .ok_or_else(|| CliError::Config(format!("line {n}: expected key = value")))?;
            let (k, v) = (k.trim(), v.trim());
            match k {
                "grid" => c.grid = Some(value(n, k, v)?),
                "norm_grid" => c.norm_grid = Some(value(n, k, v)?),
                "refine" => c.refine = Some(value(n, k, v)?),
                "iterations" => c.iterations = Some(value(n, k, v)?),
                "seed" => c.seed = Some(value(n, k, v)?),
                "tolerance" => c.tolerance = Some(value(n, k, v)?),
                _ => return Err(CliError::Config(format!("line {n}: unknown key '{k}'"))),
            }
        }
        Ok(c)
    }

    pub fn load(path: &Path) -> Result<Config> {
        let text = std::fs::read_to_string(path).map_err(|e| CliError::Io {
            path: path.display().to_string(),
            message: e.to_string(),
        })?;
        Config::parse(&text)
    }
}
