//! CSV and JSON-lines writers. Reals are written with 17 significant digits.

use std::fmt::Write as _;
use std::fs;
use std::path::{Path, PathBuf};

use num_bigint::BigUint;
use serde::{Deserialize, Serialize};

use crate::config::Experiment;
use crate::error::Result;
use crate::experiments::{CorrelationReport, GammaReport, ScalingReport};

pub fn real(x: f64) -> String {
    format!("{x:.16e}")
}

fn opt_real(x: Option<f64>) -> String {
    x.map(real).unwrap_or_default()
}

/// Per-pair line of a scaling summary.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PairSummary {
    pub pair_id: u64,
    pub final_e: Option<f64>,
    pub running_min: Option<f64>,
    pub running_max: Option<f64>,
    pub exact_hit: bool,
}

/// Closing line of a scaling summary.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ScalingSummary {
    pub experiment: String,
    pub config_hash: String,
    pub system: String,
    pub pairs_used: usize,
    pub exact_hit_pairs: usize,
    pub median_final_e: Option<f64>,
    pub median_running_min: Option<f64>,
    pub median_running_max: Option<f64>,
    pub predicted: f64,
    pub provenance: String,
    pub extra: std::collections::BTreeMap<String, f64>,
    pub notes: Vec<String>,
}

pub fn scaling_csv(report: &ScalingReport) -> String {
    let var = if report.experiment == Experiment::FlowScaling { ("t", "M_t", "e_t") } else { ("n", "M_n", "e_n") };
    let mut s = format!("pair_id,{},{},{}\n", var.0, var.1, var.2);
    for p in &report.pairs {
        for ((n, m), e) in p.trace.grid.iter().zip(&p.values).zip(&p.trace.exponents) {
            writeln!(s, "{},{},{},{}", p.pair_id, n, real(*m), opt_real(*e)).expect("string write");
        }
    }
    s
}

pub fn scaling_jsonl(report: &ScalingReport) -> Result<String> {
    let mut s = String::new();
    for p in &report.pairs {
        let line = PairSummary {
            pair_id: p.pair_id,
            final_e: p.trace.final_exponent(),
            running_min: p.trace.tail_min(),
            running_max: p.trace.tail_max(),
            exact_hit: p.exact_hit(),
        };
        s.push_str(&serde_json::to_string(&line)?);
        s.push('\n');
    }
    let a = &report.aggregate;
    let summary = ScalingSummary {
        experiment: report.experiment.name().into(),
        config_hash: report.config_hash.clone(),
        system: report.system.clone(),
        pairs_used: a.pairs_used,
        exact_hit_pairs: a.exact_hit_pairs,
        median_final_e: a.median_final,
        median_running_min: a.median_running_min,
        median_running_max: a.median_running_max,
        predicted: report.predicted,
        provenance: report.provenance.clone(),
        extra: report.extra.iter().filter(|(_, v)| v.is_finite()).map(|(k, v)| (k.clone(), *v)).collect(),
        notes: report.notes.clone(),
    };
    s.push_str(&serde_json::to_string(&summary)?);
    s.push('\n');
    Ok(s)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CorrelationSummary {
    pub config_hash: String,
    pub measure: String,
    pub slope: f64,
    pub stderr: f64,
    pub window: (f64, f64),
    pub m: usize,
    pub reference: f64,
    pub gap: f64,
    pub base_slope: Option<f64>,
}

pub fn correlation_csv(report: &CorrelationReport) -> String {
    let mut s = String::from("r,C_hat\n");
    for (r, c) in report.estimate.radii.iter().zip(&report.estimate.chat) {
        writeln!(s, "{},{}", real(*r), real(*c)).expect("string write");
    }
    s
}

pub fn correlation_json(report: &CorrelationReport) -> Result<String> {
    let est = &report.estimate;
    let range = est.fit_window.clone().unwrap_or(0..0);
    let window = if range.is_empty() { (f64::NAN, f64::NAN) } else { (est.radii[range.end - 1], est.radii[range.start]) };
    let summary = CorrelationSummary {
        config_hash: report.config_hash.clone(),
        measure: report.measure.clone(),
        slope: report.slope,
        stderr: report.stderr,
        window,
        m: est.m,
        reference: report.reference,
        gap: report.gap,
        base_slope: report.base.as_ref().and_then(|b| b.slope),
    };
    Ok(serde_json::to_string(&summary)? + "\n")
}

/// Exact decimal for moderate integers, otherwise a 17-digit mantissa.
fn big_decimal(a: &BigUint) -> String {
    if a.bits() <= 128 {
        return a.to_string();
    }
    let ln10 = orbclose::diophantine::ln_big(a) / std::f64::consts::LN_10;
    let exp = ln10.floor();
    format!("{:.16}e{}", 10f64.powf(ln10 - exp), exp as u64)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GammaSummary {
    pub config_hash: String,
    pub source: String,
    pub k: usize,
    pub summary: f64,
    pub target: Option<f64>,
    pub alpha: f64,
    pub bounds_verified: bool,
    pub warning: Option<String>,
}

pub fn gamma_csv(report: &GammaReport) -> String {
    let mut s = String::from("k,a_k,q_k_digits,gamma_hat_k\n");
    for r in &report.rows {
        writeln!(s, "{},{},{},{}", r.k, big_decimal(&r.a_k), r.q_k_digits, opt_real(r.gamma_hat)).expect("string write");
    }
    s
}

pub fn gamma_json(report: &GammaReport) -> Result<String> {
    let summary = GammaSummary {
        config_hash: report.config_hash.clone(),
        source: report.source.clone(),
        k: report.rows.len(),
        summary: report.summary,
        target: report.target,
        alpha: report.alpha,
        bounds_verified: report.bounds_verified,
        warning: report.warning.clone(),
    };
    Ok(serde_json::to_string(&summary)? + "\n")
}

fn write(dir: &Path, name: &str, content: &str) -> Result<PathBuf> {
    fs::create_dir_all(dir)?;
    let path = dir.join(name);
    fs::write(&path, content)?;
    Ok(path)
}

/// Writes `pairs.csv` and `summary.jsonl`.
pub fn write_scaling(report: &ScalingReport, dir: &Path) -> Result<Vec<PathBuf>> {
    Ok(vec![write(dir, "pairs.csv", &scaling_csv(report))?, write(dir, "summary.jsonl", &scaling_jsonl(report)?)?])
}

/// Writes `correlation.csv` and `summary.json`.
pub fn write_correlation(report: &CorrelationReport, dir: &Path) -> Result<Vec<PathBuf>> {
    Ok(vec![
        write(dir, "correlation.csv", &correlation_csv(report))?,
        write(dir, "summary.json", &correlation_json(report)?)?,
    ])
}

/// Writes `gamma.csv` and `summary.json`.
pub fn write_gamma(report: &GammaReport, dir: &Path) -> Result<Vec<PathBuf>> {
    Ok(vec![write(dir, "gamma.csv", &gamma_csv(report))?, write(dir, "summary.json", &gamma_json(report)?)?])
}
