//! Suspension flows over an interval or circle map: points move upward at
//! unit speed under a roof `phi` and `(x, phi(x))` is identified with
//! `(T x, 0)`.

use std::fmt;

use rand::Rng;

use crate::closeness::ClosestPair;
use crate::dimension::{distance_quantiles, log_radii, CorrelationEstimate, PairCounter, AUTO_QUANTILES, DEFAULT_RADII};
use crate::dynamics::{MapSystem, MeasureSampler, Metric, OrbitIter, Point};
use crate::error::{Error, Result};
use crate::grid::{level_for, SpatialHash};

const WIDTH_FACTOR: f64 = 1.0 + 1.0 / 1024.0;
/// Absolute cell widening for sums of heights and distances.
const FLOW_SLACK: f64 = 1.0 / (1u64 << 45) as f64;

/// `phi(x) = offset + slope * x` on `[0, 1]`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Roof {
    offset: f64,
    slope: f64,
}

impl Roof {
    pub fn affine(offset: f64, slope: f64) -> Result<Self> {
        if !(offset.is_finite() && slope.is_finite()) || offset <= 0.0 || offset + slope <= 0.0 {
            return Err(Error::config(format!("roof {offset} + {slope} x must be positive on [0,1]")));
        }
        Ok(Roof { offset, slope })
    }

    pub fn constant(c: f64) -> Result<Self> {
        Self::affine(c, 0.0)
    }

    #[inline]
    pub fn eval(&self, x: f64) -> f64 {
        self.offset + self.slope * x
    }

    pub fn lipschitz(&self) -> f64 {
        self.slope.abs()
    }

    pub fn min(&self) -> f64 {
        self.offset.min(self.offset + self.slope)
    }

    pub fn max(&self) -> f64 {
        self.offset.max(self.offset + self.slope)
    }

    /// `int_0^1 phi(x) dx`.
    pub fn lebesgue_mean(&self) -> f64 {
        self.offset + self.slope / 2.0
    }

    pub fn is_constant(&self) -> bool {
        self.slope == 0.0
    }
}

impl Default for Roof {
    fn default() -> Self {
        Roof { offset: 1.0, slope: 0.5 }
    }
}

impl fmt::Display for Roof {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_constant() {
            write!(f, "{}", self.offset)
        } else {
            write!(f, "{}+{}x", self.offset, self.slope)
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SuspensionFlow {
    base: MapSystem,
    roof: Roof,
}

/// Unit vertical speed.
pub const SPEED_BOUND: f64 = 1.0;

impl SuspensionFlow {
    pub fn new(base: MapSystem, roof: Roof) -> Result<Self> {
        if base.space().dim() != 1 {
            return Err(Error::config(format!("suspension base must be one-dimensional, got {}", base.name())));
        }
        Ok(SuspensionFlow { base, roof })
    }

    pub fn base(&self) -> &MapSystem {
        &self.base
    }

    pub fn roof(&self) -> Roof {
        self.roof
    }

    pub fn metric(&self) -> Metric {
        self.base.metric()
    }

    #[inline]
    pub fn phi(&self, x: &Point) -> f64 {
        self.roof.eval(x.x())
    }

    /// `K + max(1, L)`: bounds how far a flow point moves in `d_pi` per unit
    /// time shift.
    pub fn k0(&self) -> f64 {
        SPEED_BOUND + self.roof.lipschitz().max(1.0)
    }

    pub fn point(&self, base: Point, height: f64) -> Result<FlowPoint> {
        FlowPoint::new(self, base, height)
    }
}

/// `(x, s)` with `0 <= s < phi(x)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FlowPoint {
    pub base: Point,
    pub height: f64,
}

impl FlowPoint {
    /// Roof points `(x, phi(x))` become `(T x, 0)`.
    pub fn new(flow: &SuspensionFlow, base: Point, height: f64) -> Result<Self> {
        let base_point = if base.space() == flow.base.space() {
            base
        } else {
            return Err(Error::input(format!("base point in {}", base.space().name())));
        };
        base_point.validate()?;
        let phi = flow.phi(&base_point);
        if !(0.0..=phi).contains(&height) {
            return Err(Error::input(format!("height {height} outside [0, {phi}]")));
        }
        if height == phi {
            return Ok(FlowPoint { base: flow.base.evaluate(&base_point)?, height: 0.0 });
        }
        Ok(FlowPoint { base: base_point, height })
    }
}

/// `Psi_t(p)` for `t >= 0`.
pub fn flow_evolve(flow: &SuspensionFlow, p: &FlowPoint, t: f64) -> Result<FlowPoint> {
    if !(t >= 0.0) || !t.is_finite() {
        return Err(Error::input(format!("flow time must be finite and >= 0, got {t}")));
    }
    Ok(evolve_unchecked(flow, p, t))
}

fn evolve_unchecked(flow: &SuspensionFlow, p: &FlowPoint, t: f64) -> FlowPoint {
    let mut x = p.base;
    let mut h = p.height + t;
    let mut phi = flow.phi(&x);
    while h >= phi {
        h -= phi;
        x = flow.base.evaluate(&x).expect("orbit stays in the domain");
        phi = flow.phi(&x);
    }
    FlowPoint { base: x, height: h }
}

/// A flow point with the data `d_pi` needs.
#[derive(Debug, Clone, Copy)]
struct Lifted {
    x: [f64; 2],
    tx: [f64; 2],
    s: f64,
    phi: f64,
}

impl Lifted {
    fn new(flow: &SuspensionFlow, p: &FlowPoint) -> Self {
        let tx = flow.base.evaluate(&p.base).expect("valid flow point");
        Lifted { x: raw(&p.base), tx: raw(&tx), s: p.height, phi: flow.phi(&p.base) }
    }
}

fn raw(p: &Point) -> [f64; 2] {
    [p.x(), 0.0]
}

#[inline]
fn dpi_lifted(metric: Metric, a: &Lifted, b: &Lifted) -> f64 {
    let direct = metric.distance(&a.x, &b.x) + (a.s - b.s).abs();
    let over_a = metric.distance(&a.tx, &b.x) + (a.phi - a.s) + b.s;
    let over_b = metric.distance(&a.x, &b.tx) + (b.phi - b.s) + a.s;
    direct.min(over_a).min(over_b)
}

/// `min(d(x,y) + |s-t|, d(Tx,y) + phi(x) - s + t, d(x,Ty) + phi(y) - t + s)`.
pub fn d_pi(flow: &SuspensionFlow, p: &FlowPoint, q: &FlowPoint) -> f64 {
    dpi_lifted(flow.metric(), &Lifted::new(flow, p), &Lifted::new(flow, q))
}

/// Samples from the flow-invariant measure with their acceptance rate.
#[derive(Debug, Clone, PartialEq)]
pub struct FlowSample {
    pub points: Vec<FlowPoint>,
    pub acceptance_rate: f64,
}

/// Rejection sampling: `x ~ mu`, `s ~ U[0, phi_max]`, keep when `s <= phi(x)`.
pub fn sample_flow_measure(flow: &SuspensionFlow, base: &MeasureSampler, m: usize) -> Result<FlowSample> {
    let mut rng = base.stream().rng();
    sample_flow_measure_with(flow, base, &mut rng, m)
}

pub fn sample_flow_measure_with<R: Rng + ?Sized>(
    flow: &SuspensionFlow,
    base: &MeasureSampler,
    rng: &mut R,
    m: usize,
) -> Result<FlowSample> {
    if m == 0 {
        return Err(Error::input("sample size must be at least 1"));
    }
    let phi_max = flow.roof.max();
    let mut points = Vec::with_capacity(m);
    let mut drawn = 0u64;
    while points.len() < m {
        let batch = (m - points.len()).max(16);
        for x in base.sample_with(rng, batch)? {
            if points.len() == m {
                break;
            }
            drawn += 1;
            let s = rng.random::<f64>() * phi_max;
            if s <= flow.phi(&x) {
                points.push(FlowPoint::new(flow, x, s)?);
            }
        }
    }
    Ok(FlowSample { points, acceptance_rate: m as f64 / drawn as f64 })
}

fn check_delta(flow: &SuspensionFlow, delta: f64) -> Result<()> {
    let cap = flow.roof.min() / 4.0;
    if !(delta > 0.0 && delta <= cap) {
        return Err(Error::config(format!("delta {delta} not in (0, {cap}]")));
    }
    Ok(())
}

fn check_times(times: &[f64]) -> Result<()> {
    if times.is_empty() || times.iter().any(|t| !(t.is_finite() && *t > 0.0)) || times.windows(2).any(|w| w[1] <= w[0]) {
        return Err(Error::input("times must be positive and strictly increasing"));
    }
    Ok(())
}

/// Number of grid times `k delta` below `t`.
fn steps_below(t: f64, delta: f64) -> usize {
    let mut k = (t / delta).ceil().max(0.0) as usize;
    while k > 0 && (k - 1) as f64 * delta >= t {
        k -= 1;
    }
    while (k as f64) * delta < t {
        k += 1;
    }
    k
}

fn lifted_grid_orbit(flow: &SuspensionFlow, p: &FlowPoint, delta: f64, count: usize) -> Vec<Lifted> {
    let mut out = Vec::with_capacity(count);
    let mut cur = *p;
    for k in 0..count {
        if k > 0 {
            cur = evolve_unchecked(flow, &cur, delta);
        }
        out.push(Lifted::new(flow, &cur));
    }
    out
}

/// `min d_pi(Psi_a p, Psi_b q)` over grid times `a, b in {0, delta, ...}`
/// below each `t`; exceeds the continuous minimum by at most `2 K0 delta`.
pub fn mt_flow_trace(flow: &SuspensionFlow, p: &FlowPoint, q: &FlowPoint, times: &[f64], delta: f64) -> Result<Vec<f64>> {
    check_delta(flow, delta)?;
    check_times(times)?;
    let n = steps_below(*times.last().expect("nonempty"), delta);
    let a = lifted_grid_orbit(flow, p, delta, n);
    let b = lifted_grid_orbit(flow, q, delta, n);
    let marks: Vec<usize> = times.iter().map(|&t| steps_below(t, delta)).collect();
    let metric = flow.metric();
    let wraps = [metric.wraps(0), false];
    let mut grids = [SpatialHash::new(2, wraps), SpatialHash::new(2, wraps)];
    let orbits = [&a, &b];
    let mut best = f64::INFINITY;
    let mut out = Vec::with_capacity(times.len());
    let mut next_mark = 0;
    let mut candidates: Vec<u32> = Vec::new();
    for k in 0..n {
        for side in 0..2 {
            let me = &orbits[side][k];
            let other = &grids[1 - side];
            let other_pts = orbits[1 - side];
            candidates.clear();
            if best > other.width() {
                other.for_each(|i| candidates.push(other.tag(i) >> 1));
            } else {
                let prim = [me.x[0], me.s];
                let shifted = [me.tx[0], me.s - me.phi];
                // direct and over-the-other's-roof terms
                other.for_each_near(&prim, |i| candidates.push(other.tag(i) >> 1));
                // over-my-roof term: only the other's primary entries
                other.for_each_near(&shifted, |i| {
                    if other.tag(i) & 1 == 0 {
                        candidates.push(other.tag(i) >> 1);
                    }
                });
            }
            for &j in &candidates {
                let d = if side == 0 {
                    dpi_lifted(metric, me, &other_pts[j as usize])
                } else {
                    dpi_lifted(metric, &other_pts[j as usize], me)
                };
                best = best.min(d);
            }
            let g = &mut grids[side];
            g.insert([me.x[0], me.s], (k as u32) << 1);
            g.insert([me.tx[0], me.s - me.phi], ((k as u32) << 1) | 1);
            let level = level_for(best * WIDTH_FACTOR + FLOW_SLACK);
            if level > grids[0].level() {
                grids[0].set_level(level);
                grids[1].set_level(level);
            }
        }
        while next_mark < marks.len() && marks[next_mark] == k + 1 {
            out.push(best);
            next_mark += 1;
        }
    }
    while out.len() < times.len() {
        out.push(best);
    }
    Ok(out)
}

pub fn mt_flow(flow: &SuspensionFlow, p: &FlowPoint, q: &FlowPoint, t: f64, delta: f64) -> Result<f64> {
    Ok(mt_flow_trace(flow, p, q, &[t], delta)?[0])
}

/// Quadratic-time reference for [`mt_flow`].
pub fn mt_flow_oracle(flow: &SuspensionFlow, p: &FlowPoint, q: &FlowPoint, t: f64, delta: f64) -> Result<f64> {
    check_delta(flow, delta)?;
    check_times(&[t])?;
    let n = steps_below(t, delta);
    let a = lifted_grid_orbit(flow, p, delta, n);
    let b = lifted_grid_orbit(flow, q, delta, n);
    let metric = flow.metric();
    Ok(a.iter()
        .flat_map(|u| b.iter().map(move |v| dpi_lifted(metric, u, v)))
        .fold(f64::INFINITY, f64::min))
}

/// The part of one fiber `{x_k} x [lo, phi)` that the orbit crosses.
#[derive(Debug, Clone, Copy)]
struct Segment {
    x: [f64; 2],
    /// Base point of the next fiber.
    tx: [f64; 2],
    /// Time at which the orbit is at height `lo` on this fiber.
    start: f64,
    lo: f64,
    phi: f64,
}

impl Segment {
    /// Top of the part visited before time `t` (exclusive).
    #[inline]
    fn hi(&self, t: f64) -> f64 {
        self.phi.min(self.lo + (t - self.start))
    }
}

fn segments(flow: &SuspensionFlow, p: &FlowPoint, t_max: f64) -> Result<Vec<Segment>> {
    let mut iter = OrbitIter::new(&flow.base, p.base)?;
    let mut x = iter.next().expect("orbit iterator is infinite");
    let mut out = Vec::new();
    let mut start = 0.0;
    let mut lo = p.height;
    while start < t_max {
        let tx = iter.next().expect("orbit iterator is infinite");
        let phi = flow.phi(&x);
        out.push(Segment { x: raw(&x), tx: raw(&tx), start, lo, phi });
        start = if out.len() == 1 { phi - lo } else { start + phi };
        lo = 0.0;
        x = tx;
    }
    Ok(out)
}

#[inline]
fn gap(a: (f64, f64), b: (f64, f64)) -> f64 {
    0.0f64.max(b.0 - a.1).max(a.0 - b.1)
}

/// Infimum of `d_pi` over the two visited fiber parts at time `t`.
#[inline]
fn segment_pair(metric: Metric, a: &Segment, b: &Segment, t: f64) -> f64 {
    let (ha, hb) = (a.hi(t), b.hi(t));
    let direct = metric.distance(&a.x, &b.x) + gap((a.lo, ha), (b.lo, hb));
    let over_a = metric.distance(&a.tx, &b.x) + (a.phi - ha) + b.lo;
    let over_b = metric.distance(&a.x, &b.tx) + (b.phi - hb) + a.lo;
    direct.min(over_a).min(over_b)
}

fn visible(segs: &[Segment], t: f64) -> usize {
    segs.partition_point(|s| s.start < t)
}

/// Continuous-time `M_t = inf_{0 <= a, b < t} d_pi(Psi_a p, Psi_b q)`,
/// quadratic-time reference.
pub fn mt_flow_exact_oracle(flow: &SuspensionFlow, p: &FlowPoint, q: &FlowPoint, t: f64) -> Result<f64> {
    check_times(&[t])?;
    let a = segments(flow, p, t)?;
    let b = segments(flow, q, t)?;
    let metric = flow.metric();
    Ok(a.iter()
        .flat_map(|u| b.iter().map(move |v| segment_pair(metric, u, v, t)))
        .fold(f64::INFINITY, f64::min))
}

/// Continuous-time `M_t` at each time, equal to [`mt_flow_exact_oracle`].
///
/// Between two complete fibers `d_pi` reduces to the base distance, so the
/// interior fibers go through the incremental closest-pair grid; the first
/// and the current fiber of each orbit are compared against everything.
pub fn mt_flow_exact_trace(flow: &SuspensionFlow, p: &FlowPoint, q: &FlowPoint, times: &[f64]) -> Result<Vec<f64>> {
    check_times(times)?;
    let t_max = *times.last().expect("nonempty");
    let a = segments(flow, p, t_max)?;
    let b = segments(flow, q, t_max)?;
    let metric = flow.metric();
    let mut interior = ClosestPair::new(metric);
    // fiber k is interior once fiber k + 1 has started
    let (mut na, mut nb) = (1usize, 1usize);
    let mut out = Vec::with_capacity(times.len());
    for &t in times {
        let (va, vb) = (visible(&a, t), visible(&b, t));
        while na + 1 < va {
            interior.add(0, a[na].x);
            na += 1;
        }
        while nb + 1 < vb {
            interior.add(1, b[nb].x);
            nb += 1;
        }
        let mut best = interior.best();
        let special_a = [0, va - 1];
        let special_b = [0, vb - 1];
        for &i in &special_a {
            for v in &b[..vb] {
                best = best.min(segment_pair(metric, &a[i], v, t));
            }
        }
        for &j in &special_b {
            for u in &a[..va] {
                best = best.min(segment_pair(metric, u, &b[j], t));
            }
        }
        out.push(best);
    }
    Ok(out)
}

pub fn mt_flow_exact(flow: &SuspensionFlow, p: &FlowPoint, q: &FlowPoint, t: f64) -> Result<f64> {
    Ok(mt_flow_exact_trace(flow, p, q, &[t])?[0])
}

/// `scale * d_pi` between flow samples.
struct ScaledDpi {
    lifted: Vec<Lifted>,
    metric: Metric,
    scale: f64,
}

impl ScaledDpi {
    fn new(flow: &SuspensionFlow, points: &[FlowPoint], scale: f64) -> Result<Self> {
        if !(scale > 0.0 && scale.is_finite()) {
            return Err(Error::input(format!("metric scale must be positive, got {scale}")));
        }
        let lifted = points.iter().map(|p| Lifted::new(flow, p)).collect();
        Ok(ScaledDpi { lifted, metric: flow.metric(), scale })
    }

    #[inline]
    fn dist(&self, i: usize, j: usize) -> f64 {
        self.scale * dpi_lifted(self.metric, &self.lifted[i], &self.lifted[j])
    }
}

/// Log-spaced radii over the automatic fit window of `scale * d_pi`.
pub fn auto_radii_dpi(flow: &SuspensionFlow, points: &[FlowPoint], scale: f64) -> Result<Vec<f64>> {
    let table = ScaledDpi::new(flow, points, scale)?;
    let (lo, hi) = distance_quantiles(points.len(), |i, j| table.dist(i, j), AUTO_QUANTILES)?;
    log_radii(lo, hi, DEFAULT_RADII)
}

/// Correlation integral of flow samples under `scale * d_pi`.
pub fn correlation_integral_dpi(
    flow: &SuspensionFlow,
    points: &[FlowPoint],
    radii: &[f64],
    scale: f64,
) -> Result<CorrelationEstimate> {
    let m = points.len();
    if m < 2 {
        return Err(Error::input("need at least two samples"));
    }
    let mut counter = PairCounter::new(radii)?;
    let table = ScaledDpi::new(flow, points, scale)?;
    let reach = counter.reach();
    // every term of d_pi dominates a sup distance between (x, s) or its
    // shifted copy (Tx, s - phi(x)), so cells of width reach / scale suffice
    let mut grid = SpatialHash::new(2, [flow.metric().wraps(0), false]);
    grid.set_level(level_for(reach / scale * WIDTH_FACTOR + FLOW_SLACK));
    let mut candidates: Vec<u32> = Vec::new();
    for (j, p) in table.lifted.iter().enumerate() {
        candidates.clear();
        grid.for_each_near(&[p.x[0], p.s], |i| candidates.push(grid.tag(i) >> 1));
        grid.for_each_near(&[p.tx[0], p.s - p.phi], |i| {
            if grid.tag(i) & 1 == 0 {
                candidates.push(grid.tag(i) >> 1);
            }
        });
        candidates.sort_unstable();
        candidates.dedup();
        for &i in &candidates {
            let d = table.dist(i as usize, j);
            if d < reach {
                counter.add(d);
            }
        }
        grid.insert([p.x[0], p.s], (j as u32) << 1);
        grid.insert([p.tx[0], p.s - p.phi], ((j as u32) << 1) | 1);
    }
    let q = distance_quantiles(m, |i, j| table.dist(i, j), AUTO_QUANTILES)?;
    Ok(counter.finish(m, q))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn doubling_flow(roof: Roof) -> SuspensionFlow {
        SuspensionFlow::new(MapSystem::doubling(), roof).unwrap()
    }

    fn fp(flow: &SuspensionFlow, x: f64, s: f64) -> FlowPoint {
        flow.point(Point::interval(x).unwrap(), s).unwrap()
    }

    #[test]
    fn roof_properties() {
        let r = Roof::default();
        assert_eq!((r.min(), r.max(), r.lipschitz()), (1.0, 1.5, 0.5));
        assert!(Roof::affine(1.0, -1.0).is_err());
        assert!(Roof::constant(0.0).is_err());
        assert!(SuspensionFlow::new(MapSystem::default_skew(crate::dynamics::RotationNumber::golden()), r).is_err());
    }

    #[test]
    fn evolve_examples() {
        let flow = doubling_flow(Roof::default());
        let p = fp(&flow, 0.2, 0.1);
        let q = flow_evolve(&flow, &p, 0.5).unwrap();
        assert_eq!(q.base.x(), 0.2);
        assert!((q.height - 0.6).abs() < 1e-15);
        // phi(0.5) = 1.25
        let p = fp(&flow, 0.5, 0.25);
        let q = flow_evolve(&flow, &p, 1.0).unwrap();
        assert_eq!((q.base.x(), q.height), (0.0, 0.0));
        assert!(flow_evolve(&flow, &p, -1.0).is_err());
    }

    #[test]
    fn unit_roof_repeated_subtraction() {
        let flow = doubling_flow(Roof::constant(1.0).unwrap());
        let p = fp(&flow, 0.3, 0.0);
        let q = flow_evolve(&flow, &p, 2.5).unwrap();
        assert!((q.base.x() - 0.2).abs() < 1e-15);
        assert_eq!(q.height, 0.5);
    }

    #[test]
    fn roof_points_are_identified() {
        let flow = doubling_flow(Roof::default());
        let p = fp(&flow, 0.25, 1.125);
        assert_eq!((p.base.x(), p.height), (0.5, 0.0));
        assert!(flow.point(Point::interval(0.25).unwrap(), 1.2).is_err());
    }

    #[test]
    fn dpi_examples() {
        let flow = doubling_flow(Roof::default());
        let p = fp(&flow, 0.1, 0.3);
        let q = fp(&flow, 0.1, 0.4);
        assert_eq!(d_pi(&flow, &p, &p), 0.0);
        assert!((d_pi(&flow, &p, &q) - 0.1).abs() < 1e-15);
        let eps = 1e-9;
        let near_roof = fp(&flow, 0.1, 1.05 - eps);
        let image = fp(&flow, 0.2, 0.0);
        assert!(d_pi(&flow, &near_roof, &image) < 2.0 * eps);
    }

    #[test]
    fn delta_bounds() {
        let flow = doubling_flow(Roof::default());
        let p = fp(&flow, 0.1, 0.3);
        assert!(mt_flow(&flow, &p, &p, 10.0, 0.3).is_err());
        assert!(mt_flow(&flow, &p, &p, 10.0, 0.0).is_err());
        assert_eq!(mt_flow(&flow, &p, &p, 10.0, 0.25).unwrap(), 0.0);
    }

    #[test]
    fn short_times_use_the_start_points() {
        let flow = doubling_flow(Roof::default());
        let p = fp(&flow, 0.1, 0.3);
        let q = fp(&flow, 0.7, 0.9);
        assert_eq!(mt_flow(&flow, &p, &q, 0.05, 0.1).unwrap(), d_pi(&flow, &p, &q));
    }

    #[test]
    fn dpi_correlation_matches_brute_force() {
        let flow = doubling_flow(Roof::default());
        let mut rng = crate::rng::stream_rng(12, 0);
        let pts: Vec<FlowPoint> = (0..300)
            .map(|_| {
                let x = Point::random_expansion(rng.random(), crate::dynamics::DigitBase::Binary);
                let s = rng.random::<f64>() * flow.phi(&x);
                flow.point(x, s).unwrap()
            })
            .collect();
        let radii = [0.8, 0.3, 0.1, 0.03];
        for scale in [1.0, 2.0] {
            let est = correlation_integral_dpi(&flow, &pts, &radii, scale).unwrap();
            for (k, &r) in radii.iter().enumerate() {
                let mut n = 0;
                for i in 0..pts.len() {
                    for j in 0..pts.len() {
                        if i != j && scale * d_pi(&flow, &pts[i], &pts[j]) < r {
                            n += 1;
                        }
                    }
                }
                assert_eq!(est.chat[k], n as f64 / (300.0 * 299.0), "r = {r}");
            }
        }
    }

    #[test]
    fn segment_gap() {
        assert_eq!(gap((0.0, 1.0), (0.5, 2.0)), 0.0);
        assert_eq!(gap((0.0, 1.0), (1.5, 2.0)), 0.5);
        assert_eq!(gap((1.5, 2.0), (0.0, 1.0)), 0.5);
    }

    #[test]
    fn steps_below_counts_grid_times() {
        assert_eq!(steps_below(1.0, 0.1), 10);
        assert_eq!(steps_below(0.05, 0.1), 1);
        assert_eq!(steps_below(0.1, 0.1), 1);
        assert_eq!(steps_below(0.3, 0.1), 3);
    }
}
