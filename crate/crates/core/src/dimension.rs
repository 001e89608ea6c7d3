//! Correlation integral `C(r) = P(d(z, z') < r)` from samples, its log-log
//! slope (the correlation dimension) and analytic reference dimensions.

use std::ops::Range;

use rand::Rng;

use crate::dynamics::{Metric, Point};
use crate::error::{Error, Result};
use crate::grid::{level_for, SpatialHash};
use crate::rng::stream_rng;

/// Number of radii when none are given.
pub const DEFAULT_RADII: usize = 24;
/// Distance quantiles bounding the automatic fit window.
pub const AUTO_QUANTILES: (f64, f64) = (0.001, 0.05);

const QUANTILE_PAIRS: usize = 200_000;
const QUANTILE_SEED: u64 = 0x5eed_c0de;

#[derive(Debug, Clone, PartialEq)]
pub struct CorrelationEstimate {
    /// Strictly decreasing.
    pub radii: Vec<f64>,
    pub chat: Vec<f64>,
    /// Ordered pairs `m (m - 1)`.
    pub pairs_used: u64,
    pub m: usize,
    /// Estimated `AUTO_QUANTILES` of the pairwise distance distribution.
    pub distance_quantiles: (f64, f64),
    pub fit_window: Option<Range<usize>>,
    pub slope: Option<f64>,
    pub slope_stderr: Option<f64>,
}

impl CorrelationEstimate {
    pub fn is_monotone(&self) -> bool {
        // radii decrease, so C must not increase along the vector
        self.chat.windows(2).all(|w| w[1] <= w[0]) && self.chat.iter().all(|&c| (0.0..=1.0).contains(&c))
    }
}

fn check_radii(radii: &[f64]) -> Result<()> {
    if radii.is_empty() {
        return Err(Error::input("no radii"));
    }
    if radii.iter().any(|&r| !(r > 0.0 && r.is_finite())) || radii.windows(2).any(|w| w[1] >= w[0]) {
        return Err(Error::input("radii must be positive and strictly decreasing"));
    }
    Ok(())
}

/// Accumulates unordered pair distances into counts for every radius.
#[derive(Debug, Clone)]
pub struct PairCounter {
    radii: Vec<f64>,
    /// `hist[k]` = pairs below exactly the first `k` radii.
    hist: Vec<u64>,
}

impl PairCounter {
    pub fn new(radii: &[f64]) -> Result<Self> {
        check_radii(radii)?;
        Ok(PairCounter { radii: radii.to_vec(), hist: vec![0; radii.len() + 1] })
    }

    /// Largest radius; pairs at or beyond it need not be reported.
    pub fn reach(&self) -> f64 {
        self.radii[0]
    }

    #[inline]
    pub fn add(&mut self, d: f64) {
        // radii are decreasing, so `d < r` holds on a prefix
        let k = self.radii.partition_point(|&r| d < r);
        self.hist[k] += 1;
    }

    fn add_count(&mut self, below: usize, count: u64) {
        self.hist[below] += count;
    }

    /// Unordered pair counts `#{d < r_k}`.
    pub fn counts(&self) -> Vec<u64> {
        let mut out = vec![0u64; self.radii.len()];
        let mut acc = 0u64;
        for k in (0..self.radii.len()).rev() {
            acc += self.hist[k + 1];
            out[k] = acc;
        }
        out
    }

    pub fn finish(&self, m: usize, distance_quantiles: (f64, f64)) -> CorrelationEstimate {
        let ordered = m as u64 * (m as u64 - 1);
        let chat = self.counts().iter().map(|&c| 2.0 * c as f64 / ordered as f64).collect();
        CorrelationEstimate {
            radii: self.radii.clone(),
            chat,
            pairs_used: ordered,
            m,
            distance_quantiles,
            fit_window: None,
            slope: None,
            slope_stderr: None,
        }
    }
}

/// Quantiles of `d(z_i, z_j)` over random pairs `i != j` drawn from a fixed
/// internal stream, so they depend only on the samples.
pub fn distance_quantiles(m: usize, dist: impl Fn(usize, usize) -> f64, q: (f64, f64)) -> Result<(f64, f64)> {
    if m < 2 {
        return Err(Error::input("need at least two samples"));
    }
    let mut rng = stream_rng(QUANTILE_SEED, m as u64);
    let mut d: Vec<f64> = (0..QUANTILE_PAIRS)
        .map(|_| {
            let i = rng.random_range(0..m);
            let mut j = rng.random_range(0..m - 1);
            if j >= i {
                j += 1;
            }
            dist(i, j)
        })
        .collect();
    d.sort_by(f64::total_cmp);
    let at = |p: f64| d[((p * d.len() as f64) as usize).min(d.len() - 1)];
    Ok((at(q.0), at(q.1)))
}

/// `count` radii, log-spaced from `hi` down to `lo`.
pub fn log_radii(lo: f64, hi: f64, count: usize) -> Result<Vec<f64>> {
    if !(lo > 0.0 && hi > lo) || count < 2 {
        return Err(Error::Undersampled(format!("degenerate radius range [{lo}, {hi}]")));
    }
    let ratio = lo / hi;
    let radii: Vec<f64> = (0..count).map(|k| hi * ratio.powf(k as f64 / (count - 1) as f64)).collect();
    check_radii(&radii)?;
    Ok(radii)
}

/// Radii spanning the automatic fit window of the samples.
pub fn auto_radii(samples: &[Point], metric: Metric) -> Result<Vec<f64>> {
    let (lo, hi) = distance_quantiles(samples.len(), |i, j| metric.between(&samples[i], &samples[j]), AUTO_QUANTILES)?;
    log_radii(lo, hi, DEFAULT_RADII)
}

/// `C(r)` for every radius, counting ordered pairs `i != j` with
/// `d(z_i, z_j) < r`, normalized by `m (m - 1)`.
pub fn correlation_integral(samples: &[Point], metric: Metric, radii: &[f64]) -> Result<CorrelationEstimate> {
    let m = samples.len();
    if m < 2 {
        return Err(Error::input("need at least two samples"));
    }
    if let Some(p) = samples.iter().find(|p| p.space().dim() != metric.dim()) {
        return Err(Error::input(format!("{} samples under {}", p.space().name(), metric.name())));
    }
    let mut counter = PairCounter::new(radii)?;
    match metric {
        Metric::EuclideanInterval | Metric::Torus => count_sorted(samples, metric, &mut counter),
        Metric::SupProduct => count_cells(samples, metric, &mut counter),
    }
    let q = distance_quantiles(m, |i, j| metric.between(&samples[i], &samples[j]), AUTO_QUANTILES)?;
    Ok(counter.finish(m, q))
}

/// Two-pointer counting over sorted coordinates.
fn count_sorted(samples: &[Point], metric: Metric, counter: &mut PairCounter) {
    let mut xs: Vec<f64> = samples.iter().map(|p| p.x()).collect();
    xs.sort_by(f64::total_cmp);
    let m = xs.len();
    let radii = counter.radii.clone();
    let mut counts = Vec::with_capacity(radii.len());
    for &r in &radii {
        // pairs i < j with x_j - x_i < r
        let mut near = 0u64;
        let mut j = 0;
        for i in 0..m {
            j = j.max(i);
            while j + 1 < m && xs[j + 1] - xs[i] < r {
                j += 1;
            }
            near += (j - i) as u64;
        }
        if metric == Metric::Torus {
            if r > 0.5 {
                near = (m as u64 * (m as u64 - 1)) / 2;
            } else {
                // wrapped pairs: 1 - (x_j - x_i) < r, i.e. the difference is large
                let mut j = 0;
                for i in 0..m {
                    j = j.max(i + 1);
                    while j < m && 1.0 - (xs[j] - xs[i]) >= r {
                        j += 1;
                    }
                    near += (m - j) as u64;
                }
            }
        }
        counts.push(near);
    }
    // convert cumulative counts per radius into histogram form
    for (k, &c) in counts.iter().enumerate() {
        let next = counts.get(k + 1).copied().unwrap_or(0);
        counter.add_count(k + 1, c - next);
    }
}

/// Pair enumeration restricted to neighbouring cells of width `r_max`.
fn count_cells(samples: &[Point], metric: Metric, counter: &mut PairCounter) {
    let reach = counter.reach();
    let mut grid = SpatialHash::new(metric.dim(), [metric.wraps(0), metric.wraps(1)]);
    grid.set_level(level_for(reach * (1.0 + 1.0 / 1024.0) + 1e-12));
    for (j, p) in samples.iter().enumerate() {
        let c = p.raw();
        grid.for_each_near(&c, |i| {
            let d = metric.distance(&c, grid.coords(i));
            if d < reach {
                counter.add(d);
            }
        });
        grid.insert(c, j as u32);
    }
}

/// Which radii enter the slope fit.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum FitWindow {
    /// Radii between the estimated distance quantiles.
    Auto,
    Indices(Range<usize>),
}

/// Least-squares slope of `log C` against `log r`, with its standard error.
pub fn fit_dimension(est: &CorrelationEstimate, window: FitWindow) -> Result<CorrelationEstimate> {
    let range = match window {
        FitWindow::Indices(r) => {
            if r.end > est.radii.len() || r.start >= r.end {
                return Err(Error::input(format!("window {r:?} outside {} radii", est.radii.len())));
            }
            r
        }
        FitWindow::Auto => {
            let (lo, hi) = est.distance_quantiles;
            let tol = 1e-12 * hi;
            let start = est.radii.iter().position(|&r| r <= hi + tol).unwrap_or(est.radii.len());
            let end = est.radii.iter().rposition(|&r| r >= lo - tol).map_or(0, |i| i + 1);
            start..end.max(start)
        }
    };
    let pts: Vec<(f64, f64)> = range
        .clone()
        .filter(|&k| est.chat[k] > 0.0)
        .map(|k| (est.radii[k].ln(), est.chat[k].ln()))
        .collect();
    if pts.len() < 4 {
        return Err(Error::Undersampled(format!(
            "{} radii with C > 0 in window {range:?}; need 4",
            pts.len()
        )));
    }
    let (slope, stderr) = least_squares(&pts);
    let mut out = est.clone();
    out.fit_window = Some(range);
    out.slope = Some(slope);
    out.slope_stderr = Some(stderr);
    Ok(out)
}

/// Slope and its standard error for `y = a + b x`.
pub fn least_squares(pts: &[(f64, f64)]) -> (f64, f64) {
    let n = pts.len() as f64;
    let mx = pts.iter().map(|p| p.0).sum::<f64>() / n;
    let my = pts.iter().map(|p| p.1).sum::<f64>() / n;
    let sxx: f64 = pts.iter().map(|p| (p.0 - mx).powi(2)).sum();
    let sxy: f64 = pts.iter().map(|p| (p.0 - mx) * (p.1 - my)).sum();
    let slope = sxy / sxx;
    let sse: f64 = pts.iter().map(|p| (p.1 - my - slope * (p.0 - mx)).powi(2)).sum();
    let stderr = if pts.len() > 2 { (sse / (n - 2.0) / sxx).sqrt() } else { f64::NAN };
    (slope, stderr)
}

/// Measures with a known correlation dimension.
#[derive(Debug, Clone, PartialEq)]
pub enum DimensionModel {
    /// Lebesgue measure (or any square-integrable density) in dimension `d`.
    Uniform(u32),
    /// Density proportional to `x^-alpha` on `[0, 1]`.
    PowerDensity(f64),
    /// A suspension flow's measure over the given base measure.
    ProductPlusOne(Box<DimensionModel>),
}

pub fn reference_dimension(model: &DimensionModel) -> Result<f64> {
    match model {
        DimensionModel::Uniform(d) if *d >= 1 => Ok(*d as f64),
        DimensionModel::Uniform(_) => Err(Error::input("dimension must be at least 1")),
        DimensionModel::PowerDensity(a) if *a > 0.5 && *a < 1.0 => Ok(2.0 * (1.0 - a)),
        DimensionModel::PowerDensity(a) => Err(Error::input(format!("power density exponent {a} not in (1/2, 1)"))),
        DimensionModel::ProductPlusOne(inner) => Ok(reference_dimension(inner)? + 1.0),
    }
}
