//! Run configuration and the flat `key = value` config file format.

use std::path::{Path, PathBuf};
use std::str::FromStr;

use crate::adversary::AdversaryKind;
use crate::error::{Error, Result};
use crate::estimate::EstimatorKind;
use crate::simplex::RegularizerKind;

/// Learner under test.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Algorithm {
    /// HDA with negentropy and the plain importance-weighted estimator.
    Hew,
    /// HDA with a configurable regularizer and estimator.
    Hda,
    /// EXP3 on a fixed cell-centre grid.
    Grid,
}

impl Algorithm {
    pub fn label(self) -> &'static str {
        match self {
            Algorithm::Hew => "hew",
            Algorithm::Hda => "hda",
            Algorithm::Grid => "grid",
        }
    }
}

impl FromStr for Algorithm {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, String> {
        match s.trim().to_ascii_lowercase().as_str() {
            "hew" => Ok(Algorithm::Hew),
            "hda" => Ok(Algorithm::Hda),
            "grid" | "exp3" => Ok(Algorithm::Grid),
            other => Err(format!("unknown algorithm `{other}` (expected hew, hda or grid)")),
        }
    }
}

/// Estimator family for `Algorithm::Hda`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum EstimatorChoice {
    Iwe,
    Iwe3,
}

impl FromStr for EstimatorChoice {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, String> {
        match s.trim().to_ascii_lowercase().as_str() {
            "iwe" => Ok(EstimatorChoice::Iwe),
            "iwe3" => Ok(EstimatorChoice::Iwe3),
            other => Err(format!("unknown estimator `{other}` (expected iwe or iwe3)")),
        }
    }
}

fn iwe3_defaults() -> (f64, f64) {
    match EstimatorKind::DEFAULT_IWE3 {
        EstimatorKind::Iwe3 { scale, decay } => (scale, decay),
        EstimatorKind::Iwe { .. } => unreachable!(),
    }
}

/// Everything needed to reproduce a set of seeded runs of one learner.
#[derive(Debug, Clone, PartialEq)]
pub struct RunConfig {
    pub algorithm: Algorithm,
    pub adversary: AdversaryKind,
    /// Seed of the adversary family (fixes Sine2D's terms).
    pub adversary_seed: u64,
    pub horizon: u64,
    pub seeds: usize,
    pub base_seed: u64,
    /// Schedule overrides; `None` keeps the preset value.
    pub p: Option<f64>,
    pub a: Option<f64>,
    pub gamma0: Option<f64>,
    /// Use the dynamic-regret preset with this `rho` instead of the static one.
    pub rho: Option<f64>,
    /// Arms of the grid baseline.
    pub arms: usize,
    pub regularizer: RegularizerKind,
    pub estimator: EstimatorChoice,
    pub gamma_e: f64,
    pub gamma_decay: f64,
    /// Oracle grid points per axis; `None` picks a dimension default.
    pub oracle_grid: Option<usize>,
    pub checkpoints: usize,
    pub parallel: bool,
    pub out_dir: PathBuf,
}

impl Default for RunConfig {
    fn default() -> Self {
        let (gamma_e, gamma_decay) = iwe3_defaults();
        RunConfig {
            algorithm: Algorithm::Hew,
            adversary: AdversaryKind::Sine1d,
            adversary_seed: crate::adversary::SINE2D_SEED,
            horizon: 10_000,
            seeds: 10,
            base_seed: 0,
            p: None,
            a: None,
            gamma0: None,
            rho: None,
            arms: 64,
            regularizer: RegularizerKind::Negentropy,
            estimator: EstimatorChoice::Iwe,
            gamma_e,
            gamma_decay,
            oracle_grid: None,
            checkpoints: 100,
            parallel: true,
            out_dir: super::default_out_dir(),
        }
    }
}

impl RunConfig {
    pub fn oracle_grid_for(&self, d: usize) -> usize {
        self.oracle_grid.unwrap_or_else(|| super::default_oracle_grid(d))
    }

    pub fn validate(&self) -> Result<()> {
        if self.horizon == 0 {
            return Err(Error::config("horizon", "must be at least 1"));
        }
        if self.seeds == 0 {
            return Err(Error::config("seeds", "must be at least 1"));
        }
        if let Some(p) = self.p {
            if !(p > 0.0 && p < 1.0) {
                return Err(Error::config("p", format!("{p} is outside (0, 1)")));
            }
        }
        if let Some(a) = self.a {
            if !(0.0..=1.0).contains(&a) {
                return Err(Error::config("a", format!("{a} is outside [0, 1]")));
            }
        }
        if let Some(g) = self.gamma0 {
            if !(g.is_finite() && g > 0.0) {
                return Err(Error::config("gamma0", format!("{g} is not a positive number")));
            }
        }
        if let Some(rho) = self.rho {
            if !(0.0..1.0).contains(&rho) {
                return Err(Error::config("rho", format!("{rho} is outside [0, 1)")));
            }
        }
        if self.arms == 0 {
            return Err(Error::config("arms", "must be at least 1"));
        }
        if !(self.gamma_e > 0.0 && self.gamma_e <= 1.0) {
            return Err(Error::config("gamma_e", format!("{} is outside (0, 1]", self.gamma_e)));
        }
        if !(self.gamma_decay.is_finite() && self.gamma_decay >= 0.0) {
            return Err(Error::config("gamma_decay", format!("{} is negative", self.gamma_decay)));
        }
        if let Some(n) = self.oracle_grid {
            if n < 2 {
                return Err(Error::config("oracle_grid", "needs at least 2 points per axis"));
            }
        }
        if self.checkpoints == 0 {
            return Err(Error::config("checkpoints", "must be at least 1"));
        }
        Ok(())
    }
}

/// A run configuration swept over one or more algorithms.
#[derive(Debug, Clone, PartialEq)]
pub struct Sweep {
    pub algorithms: Vec<Algorithm>,
    pub base: RunConfig,
}

impl Default for Sweep {
    fn default() -> Self {
        Sweep {
            algorithms: vec![Algorithm::Hew],
            base: RunConfig::default(),
        }
    }
}

impl Sweep {
    pub fn configs(&self) -> Vec<RunConfig> {
        self.algorithms
            .iter()
            .map(|&algorithm| RunConfig {
                algorithm,
                ..self.base.clone()
            })
            .collect()
    }

    /// File stem of the aggregate CSV, e.g. `hew-grid_sine1d`.
    pub fn label(&self) -> String {
        let algos: Vec<&str> = self.algorithms.iter().map(|a| a.label()).collect();
        format!("{}_{}", algos.join("-"), self.base.adversary.label())
    }

    pub fn validate(&self) -> Result<()> {
        if self.algorithms.is_empty() {
            return Err(Error::config("algo", "no algorithm given"));
        }
        self.base.validate()
    }

    /// Sets one option by its canonical key.
    pub fn set(&mut self, key: &str, value: &str) -> Result<()> {
        let c = &mut self.base;
        match key {
            "algo" => {
                self.algorithms = value
                    .split(',')
                    .filter(|s| !s.trim().is_empty())
                    .map(|s| s.parse().map_err(|e: String| Error::config(key, e)))
                    .collect::<Result<_>>()?;
            }
            "adversary" => c.adversary = value.parse().map_err(|e: String| Error::config(key, e))?,
            "adversary_seed" => c.adversary_seed = parse(key, value)?,
            "horizon" => c.horizon = parse(key, value)?,
            "seeds" => c.seeds = parse(key, value)?,
            "base_seed" => c.base_seed = parse(key, value)?,
            "p" => c.p = Some(parse(key, value)?),
            "a" => c.a = Some(parse(key, value)?),
            "gamma0" => c.gamma0 = Some(parse(key, value)?),
            "rho" => c.rho = Some(parse(key, value)?),
            "arms" => c.arms = parse(key, value)?,
            "regularizer" => c.regularizer = value.parse().map_err(|e: String| Error::config(key, e))?,
            "estimator" => c.estimator = value.parse().map_err(|e: String| Error::config(key, e))?,
            "gamma_e" => c.gamma_e = parse(key, value)?,
            "gamma_decay" => c.gamma_decay = parse(key, value)?,
            "oracle_grid" => c.oracle_grid = Some(parse(key, value)?),
            "checkpoints" => c.checkpoints = parse(key, value)?,
            "parallel" => c.parallel = parse(key, value)?,
            "out" => c.out_dir = PathBuf::from(value),
            _ => return Err(Error::config(key, "unknown key")),
        }
        Ok(())
    }

    /// Applies a config file on top of the current settings.
    pub fn apply_file(&mut self, path: &Path) -> Result<()> {
        let text = std::fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
        for (key, value) in parse_config(&text).map_err(|(line, msg)| {
            Error::config("config", format!("{}:{line}: {msg}", path.display()))
        })? {
            self.set(&key, &value)?;
        }
        Ok(())
    }
}

fn parse<T: FromStr>(key: &str, value: &str) -> Result<T>
where
    T::Err: std::fmt::Display,
{
    value
        .trim()
        .parse()
        .map_err(|e| Error::config(key, format!("cannot parse `{value}`: {e}")))
}

/// Maps a (section, key) pair of the config file to a canonical key.
fn canonical_key(section: &str, key: &str) -> String {
    let key = key.replace('-', "_");
    let resolved = match (section, key.as_str()) {
        (_, "algorithm" | "algorithms" | "algos") => "algo",
        ("adversary", "kind" | "name") => "adversary",
        ("adversary", "seed") => "adversary_seed",
        ("oracle", "grid") => "oracle_grid",
        ("output", "dir") | (_, "out_dir") => "out",
        ("grid", "n_arms") | (_, "n_arms") => "arms",
        _ => return key,
    };
    resolved.to_string()
}

/// Parses `key = value` lines; `#` starts a comment, `[section]` headers
/// scope the keys that follow, quotes around values are stripped and later
/// assignments win when applied in order.
pub fn parse_config(text: &str) -> std::result::Result<Vec<(String, String)>, (usize, String)> {
    let mut section = String::new();
    let mut out = Vec::new();
    for (i, raw) in text.lines().enumerate() {
        let line = strip_comment(raw).trim();
        if line.is_empty() {
            continue;
        }
        if let Some(name) = line.strip_prefix('[') {
            let name = name
                .strip_suffix(']')
                .ok_or_else(|| (i + 1, format!("malformed section header `{line}`")))?;
            section = name.trim().to_ascii_lowercase();
            continue;
        }
        let (key, value) = line
            .split_once('=')
            .ok_or_else(|| (i + 1, format!("expected `key = value`, found `{line}`")))?;
        let key = key.trim().to_ascii_lowercase();
        if key.is_empty() {
            return Err((i + 1, "empty key".to_string()));
        }
        out.push((canonical_key(&section, &key), unquote(value.trim()).to_string()));
    }
    Ok(out)
}

fn strip_comment(line: &str) -> &str {
    let mut in_quotes = false;
    for (i, ch) in line.char_indices() {
        match ch {
            '"' => in_quotes = !in_quotes,
            '#' if !in_quotes => return &line[..i],
            _ => {}
        }
    }
    line
}

fn unquote(v: &str) -> &str {
    for q in ['"', '\''] {
        if v.len() >= 2 && v.starts_with(q) && v.ends_with(q) {
            return &v[1..v.len() - 1];
        }
    }
    v
}
