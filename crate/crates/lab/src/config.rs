//! Flat `key = value` experiment configuration.

use std::collections::BTreeMap;
use std::fmt;
use std::path::Path;
use std::str::FromStr;

use sha2::{Digest, Sha256};

use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Experiment {
    MapScaling,
    FlowScaling,
    SkewScaling,
    CorrDim,
    Gamma,
}

impl Experiment {
    pub fn name(self) -> &'static str {
        match self {
            Experiment::MapScaling => "map_scaling",
            Experiment::FlowScaling => "flow_scaling",
            Experiment::SkewScaling => "skew_scaling",
            Experiment::CorrDim => "corr_dim",
            Experiment::Gamma => "gamma",
        }
    }

    fn keys(self) -> &'static [&'static str] {
        const MAP: &[&str] = &[
            "pairs", "grid.min_exp", "grid.max_exp", "system", "lsv.alpha", "rotation.alpha", "burn_in",
            "inject_identical",
        ];
        const FLOW: &[&str] = &[
            "pairs", "flow.base", "roof.offset", "roof.slope", "flow.tmin_exp", "flow.tmax_exp", "flow.delta",
            "flow.method", "inject_identical",
        ];
        const SKEW: &[&str] = &[
            "pairs", "grid.min_exp", "grid.max_exp", "skew.base", "skew.cylinders", "skew.gamma", "skew.alpha",
            "gamma.k", "inject_identical",
        ];
        const CORR: &[&str] = &["measure", "measure.alpha", "m", "metric.scale", "flow.base", "roof.offset", "roof.slope"];
        const GAMMA: &[&str] = &["gamma.source", "gamma.target", "gamma.k", "gamma.quotients", "gamma.rational"];
        match self {
            Experiment::MapScaling => MAP,
            Experiment::FlowScaling => FLOW,
            Experiment::SkewScaling => SKEW,
            Experiment::CorrDim => CORR,
            Experiment::Gamma => GAMMA,
        }
    }

    fn knows(self, key: &str) -> bool {
        ["seed", "out", "threads"].contains(&key) || self.keys().contains(&key)
    }
}

impl FromStr for Experiment {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.replace('-', "_").as_str() {
            "map_scaling" => Ok(Experiment::MapScaling),
            "flow_scaling" => Ok(Experiment::FlowScaling),
            "skew_scaling" => Ok(Experiment::SkewScaling),
            "corr_dim" => Ok(Experiment::CorrDim),
            "gamma" => Ok(Experiment::Gamma),
            other => Err(Error::config(format!("unknown experiment {other:?}"))),
        }
    }
}

impl fmt::Display for Experiment {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// Keys that do not affect results and are left out of the hash.
const UNHASHED: &[&str] = &["out", "threads"];

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Config {
    experiment: Experiment,
    entries: BTreeMap<String, String>,
}

impl Config {
    pub fn new(experiment: Experiment) -> Self {
        Config { experiment, entries: BTreeMap::new() }
    }

    /// Parse `key = value` lines; `#` starts a comment.
    pub fn parse(experiment: Experiment, text: &str) -> Result<Self> {
        let mut cfg = Config::new(experiment);
        for (lineno, raw) in text.lines().enumerate() {
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let Some((k, v)) = line.split_once('=') else {
                return Err(Error::config(format!("line {}: expected key = value", lineno + 1)));
            };
            let (k, v) = (k.trim(), v.trim());
            if k == "experiment" {
                let named: Experiment = v.parse()?;
                if named != experiment {
                    return Err(Error::config(format!("config is for {named}, not {experiment}")));
                }
                continue;
            }
            cfg.set(k, v)?;
        }
        Ok(cfg)
    }

    pub fn load(experiment: Experiment, path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| Error::config(format!("cannot read {}: {e}", path.display())))?;
        Self::parse(experiment, &text)
    }

    pub fn experiment(&self) -> Experiment {
        self.experiment
    }

    pub fn set(&mut self, key: &str, value: impl Into<String>) -> Result<()> {
        if !self.experiment.knows(key) {
            return Err(Error::config(format!("unknown key {key:?} for {}", self.experiment)));
        }
        self.entries.insert(key.to_string(), value.into());
        Ok(())
    }

    pub fn with(mut self, key: &str, value: impl ToString) -> Result<Self> {
        self.set(key, value.to_string())?;
        Ok(self)
    }

    pub fn raw(&self, key: &str) -> Option<&str> {
        self.entries.get(key).map(String::as_str)
    }

    pub fn str_or<'a>(&'a self, key: &str, default: &'a str) -> &'a str {
        self.raw(key).unwrap_or(default)
    }

    pub fn get<T: FromStr>(&self, key: &str, default: T) -> Result<T> {
        match self.raw(key) {
            None => Ok(default),
            Some(v) => v.parse().map_err(|_| Error::config(format!("bad value {v:?} for {key}"))),
        }
    }

    pub fn seed(&self) -> Result<u64> {
        self.get("seed", 1)
    }

    pub fn threads(&self) -> Result<usize> {
        let t: usize = self.get("threads", 1)?;
        if t == 0 {
            return Err(Error::config("threads must be at least 1"));
        }
        Ok(t)
    }

    /// Sorted `key=value` lines of every result-affecting entry.
    pub fn canonical(&self) -> String {
        let mut s = format!("experiment={}\n", self.experiment);
        for (k, v) in &self.entries {
            if !UNHASHED.contains(&k.as_str()) {
                s.push_str(&format!("{k}={v}\n"));
            }
        }
        s
    }

    /// First 16 hex digits of the SHA-256 of [`Config::canonical`].
    pub fn hash(&self) -> String {
        let digest = Sha256::digest(self.canonical().as_bytes());
        hex::encode(&digest[..8])
    }
}
