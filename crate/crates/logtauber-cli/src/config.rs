//! Run configuration: defaults, JSON config files, and the `e^<expr>`
//! numeric literal sugar (every interesting horizon is doubly exponential).

// `!(a > b)` deliberately rejects NaN where `a <= b` would let it through
#![allow(clippy::neg_cmp_op_on_partial_ord)]

use std::path::Path;

use anyhow::{bail, Context, Result};
use serde::{Deserialize, Serialize};

use logtauber::defaults;

/// Parses an extended numeric literal: plain floats, `pi`, `e`, `inf`,
/// `a^b`, and nested `e^…` such as `e^e^4`.
pub fn parse_ext(s: &str) -> Result<f64, String> {
    let s = s.trim();
    match s {
        "pi" => return Ok(std::f64::consts::PI),
        "e" => return Ok(std::f64::consts::E),
        "inf" => return Ok(f64::INFINITY),
        _ => {}
    }
    if let Some(rest) = s.strip_prefix("e^") {
        return Ok(parse_ext(rest)?.exp());
    }
    if let Some((base, exp)) = s.split_once('^') {
        return Ok(parse_ext(base)?.powf(parse_ext(exp)?));
    }
    s.parse::<f64>().map_err(|_| format!("cannot parse number '{s}'"))
}

/// Parses a literal into log space: `e^20000` stays finite as `20000`.
pub fn parse_log_ext(s: &str) -> Result<f64, String> {
    let s = s.trim();
    if let Some(rest) = s.strip_prefix("e^") {
        return parse_ext(rest);
    }
    let v = parse_ext(s)?;
    if !(v > 0.0) {
        return Err(format!("'{s}' is not a positive number"));
    }
    Ok(v.ln())
}

#[derive(Debug, Clone, Deserialize)]
#[serde(untagged)]
enum NumOrStr {
    Num(f64),
    Str(String),
}

impl NumOrStr {
    fn value(&self) -> Result<f64> {
        match self {
            NumOrStr::Num(v) => Ok(*v),
            NumOrStr::Str(s) => parse_ext(s).map_err(|e| anyhow::anyhow!(e)),
        }
    }
}

/// JSON config file; every field optional, numbers may use `e^` sugar as
/// strings. Command-line flags override these values.
#[derive(Debug, Clone, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FileConfig {
    abs_tol: Option<NumOrStr>,
    horizon: Option<NumOrStr>,
    epsilons: Option<Vec<NumOrStr>>,
    window_epsilons: Option<Vec<NumOrStr>>,
    decay_threshold: Option<NumOrStr>,
    ordinary_tol: Option<NumOrStr>,
    grid_density: Option<NumOrStr>,
    curve_points: Option<usize>,
    window_budget: Option<usize>,
    seed: Option<u64>,
    jobs: Option<usize>,
    corpus: Option<Vec<String>>,
}

/// Fully resolved configuration echoed into every JSON report.
#[derive(Debug, Clone, Serialize)]
pub struct RunConfig {
    pub abs_tol: f64,
    pub horizon: f64,
    pub epsilons: Vec<f64>,
    pub window_epsilons: Vec<f64>,
    pub decay_threshold: f64,
    pub ordinary_tol: f64,
    pub grid_density: f64,
    pub curve_points: usize,
    pub window_budget: usize,
    pub seed: u64,
    pub jobs: Option<usize>,
    pub corpus: Option<Vec<String>>,
}

impl Default for RunConfig {
    fn default() -> Self {
        RunConfig {
            abs_tol: defaults::ABS_TOL,
            horizon: 32f64.exp(),
            epsilons: defaults::EPSILONS.to_vec(),
            window_epsilons: defaults::EPSILONS.to_vec(),
            decay_threshold: defaults::DECAY_THRESHOLD,
            ordinary_tol: defaults::ORDINARY_TOL,
            grid_density: defaults::GRID_DENSITY,
            curve_points: 513,
            window_budget: defaults::SEARCH_BUDGET,
            seed: 42,
            jobs: None,
            corpus: None,
        }
    }
}

impl RunConfig {
    pub fn load(path: Option<&Path>) -> Result<Self> {
        let mut cfg = RunConfig::default();
        let Some(path) = path else { return Ok(cfg) };
        let text = std::fs::read_to_string(path)
            .with_context(|| format!("reading config {}", path.display()))?;
        let file: FileConfig = serde_json::from_str(&text)
            .with_context(|| format!("parsing config {}", path.display()))?;
        if let Some(v) = &file.abs_tol {
            cfg.abs_tol = v.value()?;
        }
        if let Some(v) = &file.horizon {
            cfg.horizon = v.value()?;
        }
        if let Some(v) = &file.epsilons {
            cfg.epsilons = v.iter().map(|x| x.value()).collect::<Result<_>>()?;
        }
        if let Some(v) = &file.window_epsilons {
            cfg.window_epsilons = v.iter().map(|x| x.value()).collect::<Result<_>>()?;
        }
        if let Some(v) = &file.decay_threshold {
            cfg.decay_threshold = v.value()?;
        }
        if let Some(v) = &file.ordinary_tol {
            cfg.ordinary_tol = v.value()?;
        }
        if let Some(v) = &file.grid_density {
            cfg.grid_density = v.value()?;
        }
        if let Some(v) = file.curve_points {
            cfg.curve_points = v;
        }
        if let Some(v) = file.window_budget {
            cfg.window_budget = v;
        }
        if let Some(v) = file.seed {
            cfg.seed = v;
        }
        if let Some(v) = file.jobs {
            cfg.jobs = Some(v);
        }
        cfg.corpus = file.corpus;
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn validate(&self) -> Result<()> {
        for (name, v) in [
            ("abs_tol", self.abs_tol),
            ("decay_threshold", self.decay_threshold),
            ("ordinary_tol", self.ordinary_tol),
            ("grid_density", self.grid_density),
        ] {
            if !(v > 0.0) {
                bail!("config: {name} must be positive");
            }
        }
        if !(self.horizon > 1.0) {
            bail!("config: horizon must exceed 1");
        }
        for eps in self.epsilons.iter().chain(&self.window_epsilons) {
            if !(*eps > 0.0) {
                bail!("config: epsilons must be positive");
            }
        }
        if !self.epsilons.windows(2).all(|w| w[0] > w[1]) {
            bail!("config: epsilons must be strictly decreasing");
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn extended_literals() {
        assert_eq!(parse_ext("2").unwrap(), 2.0);
        assert_eq!(parse_ext("e^2").unwrap(), 2f64.exp());
        assert_eq!(parse_ext("e^pi").unwrap(), std::f64::consts::PI.exp());
        assert_eq!(parse_ext("e^e^2").unwrap(), (2f64.exp()).exp());
        assert_eq!(parse_ext("2^10").unwrap(), 1024.0);
        assert_eq!(parse_log_ext("e^20000").unwrap(), 20000.0);
        assert!((parse_log_ext("1000").unwrap() - 1000f64.ln()).abs() < 1e-15);
        assert!(parse_ext("two").is_err());
    }
}
