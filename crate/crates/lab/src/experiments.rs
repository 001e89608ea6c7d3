//! Experiment drivers: each turns a [`Config`] into a report.

use std::collections::BTreeMap;

use orbclose::closeness::{dyadic_grid, exponent_trace, exponent_trace_from, mn_accelerated, mn_rotation, ExponentTrace};
use orbclose::dimension::{
    auto_radii, correlation_integral, fit_dimension, reference_dimension, CorrelationEstimate, DimensionModel, FitWindow,
};
use orbclose::diophantine::{
    construct_alpha_with_gamma, convergent_bounds_hold, decimal_digits, estimate_gamma, ContinuedFraction,
};
use orbclose::dynamics::{
    invariant_sampler, Cylinders, ExpandingBase, MapKind, MapSystem, MeasureSampler, Metric, Point,
    RotationNumber, SamplerKind, Space,
};
use num_bigint::BigUint;
use orbclose::rng::StreamId;
use orbclose::suspension::{
    auto_radii_dpi, correlation_integral_dpi, mt_flow_exact_trace, mt_flow_trace, sample_flow_measure, FlowPoint,
    Roof, SuspensionFlow,
};
use rayon::prelude::*;

use crate::config::{Config, Experiment};
use crate::error::{Error, Result};

/// One pair's statistic along the time grid and its exponent trace.
#[derive(Debug, Clone, PartialEq)]
pub struct PairTrace {
    pub pair_id: u64,
    pub values: Vec<f64>,
    pub trace: ExponentTrace,
}

impl PairTrace {
    pub fn exact_hit(&self) -> bool {
        self.trace.has_exact_hit()
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Aggregate {
    /// Pairs entering the medians (those without exact hits).
    pub pairs_used: usize,
    pub exact_hit_pairs: usize,
    pub median_final: Option<f64>,
    pub median_running_min: Option<f64>,
    pub median_running_max: Option<f64>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ScalingReport {
    pub experiment: Experiment,
    pub config_hash: String,
    pub system: String,
    pub predicted: f64,
    pub provenance: String,
    pub pairs: Vec<PairTrace>,
    pub aggregate: Aggregate,
    /// Additional named quantities (bounds, cross-checks).
    pub extra: BTreeMap<String, f64>,
    pub notes: Vec<String>,
}

pub fn median(mut v: Vec<f64>) -> Option<f64> {
    if v.is_empty() {
        return None;
    }
    v.sort_by(f64::total_cmp);
    let n = v.len();
    Some(if n % 2 == 1 { v[n / 2] } else { (v[n / 2 - 1] + v[n / 2]) / 2.0 })
}

/// Medians over the pairs without exact hits, using the tail extremes.
pub fn aggregate(pairs: &[PairTrace]) -> Aggregate {
    let clean: Vec<&PairTrace> = pairs.iter().filter(|p| !p.exact_hit()).collect();
    let collect = |f: &dyn Fn(&ExponentTrace) -> Option<f64>| clean.iter().filter_map(|p| f(&p.trace)).collect::<Vec<_>>();
    Aggregate {
        pairs_used: clean.len(),
        exact_hit_pairs: pairs.len() - clean.len(),
        median_final: median(collect(&|t| t.final_exponent())),
        median_running_min: median(collect(&|t| t.tail_min())),
        median_running_max: median(collect(&|t| t.tail_max())),
    }
}

fn pool(cfg: &Config) -> Result<rayon::ThreadPool> {
    rayon::ThreadPoolBuilder::new()
        .num_threads(cfg.threads()?)
        .build()
        .map_err(|e| Error::config(format!("thread pool: {e}")))
}

/// Run `task` for every pair id on the configured pool, in pair order.
fn fan_out<T: Send>(cfg: &Config, count: u64, task: impl Fn(u64) -> Result<T> + Sync) -> Result<Vec<T>> {
    pool(cfg)?.install(|| (0..count).into_par_iter().map(&task).collect())
}

fn stream(cfg: &Config, index: u64) -> Result<StreamId> {
    Ok(StreamId::new(cfg.seed()?, 0).child(index))
}

fn exp_grid(cfg: &Config, lo_key: &str, hi_key: &str, lo: u32, hi: u32) -> Result<Vec<u64>> {
    let lo: u32 = cfg.get(lo_key, lo)?;
    let hi: u32 = cfg.get(hi_key, hi)?;
    if lo == 0 {
        return Err(Error::config(format!("{lo_key} must be at least 1")));
    }
    dyadic_grid(lo, hi).map_err(|e| Error::config(e.to_string()))
}

fn rotation_number(text: &str) -> Result<RotationNumber> {
    if text == "golden" {
        return Ok(RotationNumber::golden());
    }
    let v: f64 = text.parse().map_err(|_| Error::config(format!("bad rotation number {text:?}")))?;
    Ok(RotationNumber::from_f64(v)?)
}

pub fn build_map_system(cfg: &Config) -> Result<MapSystem> {
    Ok(match cfg.str_or("system", "doubling") {
        "doubling" => MapSystem::doubling(),
        "tripling" => MapSystem::tripling(),
        "lsv" => MapSystem::lsv(cfg.get("lsv.alpha", 0.25)?)?,
        "rotation" => MapSystem::rotation(rotation_number(cfg.str_or("rotation.alpha", "golden"))?),
        other => return Err(Error::config(format!("unsupported map system {other:?}"))),
    })
}

fn expanding_base(name: &str) -> Result<ExpandingBase> {
    match name {
        "doubling" => Ok(ExpandingBase::Doubling),
        "tripling" => Ok(ExpandingBase::Tripling),
        other => Err(Error::config(format!("unsupported expanding base {other:?}"))),
    }
}

/// Per-pair exponent traces for a map, `x` and `y` drawn independently.
fn map_pairs(cfg: &Config, system: &MapSystem, grid: &[u64]) -> Result<Vec<PairTrace>> {
    let pairs: u64 = cfg.get("pairs", 100)?;
    let burn_in: u64 = cfg.get("burn_in", 1000)?;
    let draw = |index: u64| -> Result<Point> {
        let sampler = invariant_sampler(system, stream(cfg, index)?, burn_in)?;
        Ok(sampler.sample(1)?[0])
    };
    let mut out = fan_out(cfg, pairs, |i| {
        let (x, y) = (draw(2 * i)?, draw(2 * i + 1)?);
        let mn = mn_accelerated(system, x, y, grid)?;
        Ok(PairTrace { pair_id: i, trace: exponent_trace(&mn)?, values: mn.values })
    })?;
    if cfg.get("inject_identical", false)? {
        let x = draw(0)?;
        let mn = mn_accelerated(system, x, x, grid)?;
        out.push(PairTrace { pair_id: pairs, trace: exponent_trace(&mn)?, values: mn.values });
    }
    Ok(out)
}

pub fn run_map_scaling(cfg: &Config) -> Result<ScalingReport> {
    let system = build_map_system(cfg)?;
    let grid = exp_grid(cfg, "grid.min_exp", "grid.max_exp", 4, 20)?;
    let mut notes = Vec::new();
    let (predicted, provenance) = match system.kind() {
        MapKind::Rotation { .. } => (1.0, "rotation upper bound: limsup <= min(2/C_mu, 1) with C_mu = 1"),
        _ => (2.0, "exponentially mixing acip law: lim = 2/C_mu with C_mu = 1"),
    };
    if let MapKind::Lsv { alpha } = system.kind() {
        if *alpha >= 0.5 {
            notes.push(format!(
                "lsv alpha = {alpha} >= 1/2: the lower and upper exponent bounds need not coincide; 2 is not a prediction"
            ));
        }
    }
    let pairs = map_pairs(cfg, &system, &grid)?;
    Ok(ScalingReport {
        experiment: Experiment::MapScaling,
        config_hash: cfg.hash(),
        system: system.name(),
        predicted,
        provenance: provenance.into(),
        aggregate: aggregate(&pairs),
        pairs,
        extra: BTreeMap::new(),
        notes,
    })
}

/// The skew system and the exponent of its rotation number (if known).
pub fn build_skew_system(cfg: &Config) -> Result<(MapSystem, Option<f64>, Vec<String>)> {
    let base = expanding_base(cfg.str_or("skew.base", "tripling"))?;
    let cylinders = Cylinders::parse(cfg.str_or("skew.cylinders", "[0,1/3)"), base)?;
    let mut notes = Vec::new();
    let (alpha, gamma) = match cfg.raw("skew.alpha") {
        Some(a) => {
            let gamma = (a == "golden").then_some(1.0);
            (rotation_number(a)?, gamma)
        }
        None => {
            let gamma: f64 = cfg.get("skew.gamma", 4.0)?;
            let k: usize = cfg.get("gamma.k", 12)?;
            let built = construct_alpha_with_gamma(gamma, k)?;
            if let Some(w) = built.warning {
                notes.push(w);
            }
            (RotationNumber::from_continued_fraction(built.cf)?, Some(gamma))
        }
    };
    Ok((MapSystem::skew(base, alpha, cylinders)?, gamma, notes))
}

pub fn run_skew_scaling(cfg: &Config) -> Result<ScalingReport> {
    let (system, gamma, notes) = build_skew_system(cfg)?;
    let grid = exp_grid(cfg, "grid.min_exp", "grid.max_exp", 4, 20)?;
    let pairs = map_pairs(cfg, &system, &grid)?;
    let MapKind::Skew { alpha, .. } = system.kind() else { unreachable!("skew system") };
    // the fiber coordinates differ by (t - s) + k alpha with |k| < n
    let mut violations = 0.0;
    let draw = |index: u64| -> Result<Point> { Ok(invariant_sampler(&system, stream(cfg, index)?, 0)?.sample(1)?[0]) };
    for p in pairs.iter().filter(|p| !p.exact_hit()) {
        let (x, y) = (draw(2 * p.pair_id)?, draw(2 * p.pair_id + 1)?);
        let delta = y.coords()[1] - x.coords()[1];
        for (&n, &m) in grid.iter().zip(&p.values) {
            if mn_rotation(alpha.value(), delta, n)? > m + 1e-9 {
                violations += 1.0;
            }
        }
    }
    let c_mu: f64 = 1.0;
    let inv_gamma = gamma.map_or(f64::NAN, |g| 1.0 / g);
    let predicted = (2.0 / (c_mu + 1.0)).min(inv_gamma);
    let mut extra = BTreeMap::new();
    extra.insert("inverse_gamma".into(), inv_gamma);
    extra.insert("limsup_bound".into(), (2.0 / (c_mu + 1.0)).min(1.0));
    extra.insert("alpha".into(), alpha.value());
    extra.insert("rotation_bound_violations".into(), violations);
    Ok(ScalingReport {
        experiment: Experiment::SkewScaling,
        config_hash: cfg.hash(),
        system: system.name(),
        predicted,
        provenance: "skew-product degeneracy: liminf <= min(2/(C_mu+1), 1/gamma), C_mu = 1".into(),
        aggregate: aggregate(&pairs),
        pairs,
        extra,
        notes,
    })
}

pub fn build_flow(cfg: &Config) -> Result<SuspensionFlow> {
    let base = match cfg.str_or("flow.base", "doubling") {
        "doubling" => MapSystem::doubling(),
        "tripling" => MapSystem::tripling(),
        other => return Err(Error::config(format!("unsupported flow base {other:?}"))),
    };
    let roof = Roof::affine(cfg.get("roof.offset", 1.0)?, cfg.get("roof.slope", 0.5)?)?;
    Ok(SuspensionFlow::new(base, roof)?)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum FlowMethod {
    /// Continuous-time infimum over fiber segments.
    Exact,
    /// Minimum over the time grid `{0, delta, 2 delta, ...}`.
    Grid,
}

fn flow_method(cfg: &Config) -> Result<FlowMethod> {
    match cfg.str_or("flow.method", "exact") {
        "exact" => Ok(FlowMethod::Exact),
        "grid" => Ok(FlowMethod::Grid),
        other => Err(Error::config(format!("flow.method must be exact or grid, got {other:?}"))),
    }
}

fn draw_flow_point(cfg: &Config, flow: &SuspensionFlow, index: u64) -> Result<FlowPoint> {
    let base = invariant_sampler(flow.base(), stream(cfg, index)?, 0)?;
    Ok(sample_flow_measure(flow, &base, 1)?.points[0])
}

pub fn run_flow_scaling(cfg: &Config) -> Result<ScalingReport> {
    let flow = build_flow(cfg)?;
    let method = flow_method(cfg)?;
    let delta: f64 = cfg.get("flow.delta", flow.roof().min() / 10.0)?;
    let cap = flow.roof().min() / 4.0;
    if !(delta > 0.0 && delta <= cap) {
        return Err(Error::config(format!("flow.delta = {delta} must lie in (0, {cap}]")));
    }
    let grid = exp_grid(cfg, "flow.tmin_exp", "flow.tmax_exp", 4, 14)?;
    let times: Vec<f64> = grid.iter().map(|&t| t as f64).collect();
    let pairs_n: u64 = cfg.get("pairs", 50)?;
    let trace_for = |pair_id: u64, p: &FlowPoint, q: &FlowPoint| -> Result<PairTrace> {
        let values = match method {
            FlowMethod::Exact => mt_flow_exact_trace(&flow, p, q, &times)?,
            FlowMethod::Grid => mt_flow_trace(&flow, p, q, &times, delta)?,
        };
        Ok(PairTrace { pair_id, trace: exponent_trace_from(&grid, &values)?, values })
    };
    let mut pairs = fan_out(cfg, pairs_n, |i| {
        let p = draw_flow_point(cfg, &flow, 2 * i)?;
        let q = draw_flow_point(cfg, &flow, 2 * i + 1)?;
        trace_for(i, &p, &q)
    })?;
    if cfg.get("inject_identical", false)? {
        let p = draw_flow_point(cfg, &flow, 0)?;
        pairs.push(trace_for(pairs_n, &p, &p)?);
    }
    let mut notes = Vec::new();
    if flow.roof().is_constant() {
        notes.push("constant roof: the flow is a product of the base map with a circle translation".into());
    }
    let mut extra = BTreeMap::new();
    extra.insert("delta".into(), delta);
    extra.insert("grid_bias_bound".into(), 2.0 * flow.k0() * delta);
    let method_name = match method {
        FlowMethod::Exact => "exact",
        FlowMethod::Grid => "grid",
    };
    Ok(ScalingReport {
        experiment: Experiment::FlowScaling,
        config_hash: cfg.hash(),
        system: format!("suspension({}, roof {}, {method_name})", flow.base().name(), flow.roof()),
        predicted: 2.0,
        provenance: "suspension-flow law: lim = 2/(C_nu - 1), C_nu = C_mu + 1, C_mu = 1".into(),
        aggregate: aggregate(&pairs),
        pairs,
        extra,
        notes,
    })
}

#[derive(Debug, Clone, PartialEq)]
pub struct CorrelationReport {
    pub config_hash: String,
    pub measure: String,
    pub estimate: CorrelationEstimate,
    pub slope: f64,
    pub stderr: f64,
    pub reference: f64,
    pub gap: f64,
    /// For flow measures: the fitted dimension of the base measure.
    pub base: Option<CorrelationEstimate>,
}

fn fitted(est: CorrelationEstimate) -> Result<(CorrelationEstimate, f64, f64)> {
    let fit = fit_dimension(&est, FitWindow::Auto)?;
    let (s, e) = (fit.slope.expect("fitted"), fit.slope_stderr.expect("fitted"));
    Ok((fit, s, e))
}

pub fn run_corr_dim(cfg: &Config) -> Result<CorrelationReport> {
    let m: usize = cfg.get("m", 10_000)?;
    if m < 2 {
        return Err(Error::config("m must be at least 2"));
    }
    let measure = cfg.str_or("measure", "uniform");
    let sampler = |kind: SamplerKind, index: u64| -> Result<Vec<Point>> {
        Ok(MeasureSampler::new(kind, stream(cfg, index)?)?.sample(m)?)
    };
    let plain = |samples: Vec<Point>, metric: Metric| -> Result<(CorrelationEstimate, f64, f64)> {
        let radii = auto_radii(&samples, metric)?;
        fitted(correlation_integral(&samples, metric, &radii)?)
    };
    let (model, (estimate, slope, stderr), base) = match measure {
        "uniform" => (
            DimensionModel::Uniform(1),
            plain(sampler(SamplerKind::Lebesgue(Space::Interval), 0)?, Metric::EuclideanInterval)?,
            None,
        ),
        "power_density" => {
            let alpha: f64 = cfg.get("measure.alpha", 0.75)?;
            (
                DimensionModel::PowerDensity(alpha),
                plain(sampler(SamplerKind::PowerDensity { alpha }, 0)?, Metric::EuclideanInterval)?,
                None,
            )
        }
        "product" => (
            DimensionModel::Uniform(2),
            plain(sampler(SamplerKind::Lebesgue(Space::IntervalTorus), 0)?, Metric::SupProduct)?,
            None,
        ),
        "flow" => {
            let flow = build_flow(cfg)?;
            let scale: f64 = cfg.get("metric.scale", 1.0)?;
            let base_sampler = invariant_sampler(flow.base(), stream(cfg, 0)?, 0)?;
            let points = sample_flow_measure(&flow, &base_sampler, m)?.points;
            let radii = auto_radii_dpi(&flow, &points, scale)?;
            let flow_fit = fitted(correlation_integral_dpi(&flow, &points, &radii, scale)?)?;
            let base_points = invariant_sampler(flow.base(), stream(cfg, 1)?, 0)?.sample(m)?;
            let base_fit = plain(base_points, flow.base().metric())?;
            (DimensionModel::ProductPlusOne(Box::new(DimensionModel::Uniform(1))), flow_fit, Some(base_fit.0))
        }
        other => return Err(Error::config(format!("unknown measure {other:?}"))),
    };
    let reference = reference_dimension(&model)?;
    Ok(CorrelationReport {
        config_hash: cfg.hash(),
        measure: measure.to_string(),
        estimate,
        slope,
        stderr,
        reference,
        gap: (slope - reference).abs(),
        base,
    })
}

#[derive(Debug, Clone, PartialEq)]
pub struct GammaRow {
    pub k: usize,
    pub a_k: BigUint,
    pub q_k_digits: u64,
    pub gamma_hat: Option<f64>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct GammaReport {
    pub config_hash: String,
    pub source: String,
    pub rows: Vec<GammaRow>,
    pub summary: f64,
    pub target: Option<f64>,
    pub alpha: f64,
    pub bounds_verified: bool,
    pub warning: Option<String>,
}

fn parse_quotients(text: &str) -> Result<Vec<BigUint>> {
    text.split(',')
        .map(|t| t.trim().parse::<BigUint>().map_err(|_| Error::config(format!("bad partial quotient {t:?}"))))
        .collect()
}

pub fn run_gamma(cfg: &Config) -> Result<GammaReport> {
    let source = cfg.str_or("gamma.source", "construct");
    let mut warning = None;
    let mut target = None;
    let cf = match source {
        "golden" => ContinuedFraction::golden(cfg.get("gamma.k", 20)?)?,
        "construct" => {
            let g: f64 = cfg.get("gamma.target", 3.0)?;
            target = Some(g);
            let built = construct_alpha_with_gamma(g, cfg.get("gamma.k", 12)?)?;
            warning = built.warning;
            built.cf
        }
        "quotients" => ContinuedFraction::new(parse_quotients(cfg.str_or("gamma.quotients", ""))?)?,
        "rational" => {
            let text = cfg.str_or("gamma.rational", "");
            let (p, q) = text
                .split_once('/')
                .ok_or_else(|| Error::config(format!("gamma.rational must be p/q, got {text:?}")))?;
            let parse = |s: &str| s.trim().parse::<BigUint>().map_err(|_| Error::config(format!("bad integer {s:?}")));
            ContinuedFraction::from_ratio(&parse(p)?, &parse(q)?)?
        }
        other => return Err(Error::config(format!("unknown gamma.source {other:?}"))),
    };
    let est = estimate_gamma(&cf)?;
    let hats: BTreeMap<usize, f64> = est.per_k.iter().copied().collect();
    let rows = (1..=cf.len())
        .map(|k| GammaRow {
            k,
            a_k: cf.quotient(k).clone(),
            q_k_digits: decimal_digits(cf.convergent(k).1),
            gamma_hat: hats.get(&k).copied(),
        })
        .collect();
    Ok(GammaReport {
        config_hash: cfg.hash(),
        source: source.to_string(),
        rows,
        summary: est.summary,
        target,
        alpha: cf.value_f64(),
        bounds_verified: convergent_bounds_hold(&cf),
        warning,
    })
}
