//! Shortest distance between two orbits, `M_n(x, y) = min_{i,j<n} d(T^i x, T^j y)`,
//! its exponent `log M_n / (-log n)`, and related statistics.

use crate::dynamics::{MapSystem, Metric, Orbit, OrbitIter, Point};
use crate::error::{Error, Result};
use crate::grid::{level_for, SpatialHash};

/// Relative widening of grid cells over the current minimum.
const WIDTH_FACTOR: f64 = 1.0 + 1.0 / 1024.0;
/// Absolute widening, covering rounding in `1 - |a - b|` on periodic axes.
const MAP_SLACK: f64 = 1.0 / (1u64 << 50) as f64;

/// `M_n` along an increasing grid of orbit lengths.
#[derive(Debug, Clone, PartialEq)]
pub struct MnSequence {
    pub grid: Vec<u64>,
    pub values: Vec<f64>,
    pub metric: Metric,
}

impl MnSequence {
    pub fn len(&self) -> usize {
        self.grid.len()
    }

    pub fn is_empty(&self) -> bool {
        self.grid.is_empty()
    }

    pub fn is_nonincreasing(&self) -> bool {
        self.values.windows(2).all(|w| w[1] <= w[0])
    }
}

/// `2^lo, 2^(lo+1), ..., 2^hi`.
pub fn dyadic_grid(lo: u32, hi: u32) -> Result<Vec<u64>> {
    if lo > hi || hi > 40 {
        return Err(Error::input(format!("bad dyadic range 2^{lo}..2^{hi}")));
    }
    Ok((lo..=hi).map(|k| 1u64 << k).collect())
}

fn check_grid(grid: &[u64]) -> Result<()> {
    if grid.is_empty() {
        return Err(Error::input("empty grid"));
    }
    if grid[0] == 0 || grid.windows(2).any(|w| w[1] <= w[0]) {
        return Err(Error::input("grid must be positive and strictly increasing"));
    }
    Ok(())
}

/// Exact `M_n` by enumerating every pair; quadratic time.
pub fn mn_oracle(ox: &Orbit, oy: &Orbit, metric: Metric, grid: &[u64]) -> Result<MnSequence> {
    if ox.system.metric() != metric || oy.system.metric() != metric {
        return Err(Error::input(format!(
            "orbits under {} / {} compared with {}",
            ox.system.metric().name(),
            oy.system.metric().name(),
            metric.name()
        )));
    }
    if ox.len() != oy.len() {
        return Err(Error::input("orbits have different lengths"));
    }
    check_grid(grid)?;
    let n_max = *grid.last().expect("nonempty") as usize;
    if n_max > ox.len() {
        return Err(Error::input(format!("grid reaches {n_max} but orbits have {} points", ox.len())));
    }
    let xs: Vec<[f64; 2]> = ox.points.iter().map(Point::raw).collect();
    let ys: Vec<[f64; 2]> = oy.points.iter().map(Point::raw).collect();
    let mut best = f64::INFINITY;
    let mut values = Vec::with_capacity(grid.len());
    let mut g = grid.iter().peekable();
    for k in 0..n_max {
        for j in 0..=k {
            best = best.min(metric.distance(&xs[k], &ys[j]));
        }
        for i in 0..k {
            best = best.min(metric.distance(&xs[i], &ys[k]));
        }
        if g.peek() == Some(&&(k as u64 + 1)) {
            values.push(best);
            g.next();
        }
    }
    Ok(MnSequence { grid: grid.to_vec(), values, metric })
}

/// Incremental bichromatic closest pair over two growing point sets.
#[derive(Debug, Clone)]
pub(crate) struct ClosestPair {
    metric: Metric,
    best: f64,
    grids: [SpatialHash; 2],
}

impl ClosestPair {
    pub(crate) fn new(metric: Metric) -> Self {
        let wraps = [metric.wraps(0), metric.wraps(1)];
        let g = SpatialHash::new(metric.dim(), wraps);
        ClosestPair { metric, best: f64::INFINITY, grids: [g.clone(), g] }
    }

    pub(crate) fn best(&self) -> f64 {
        self.best
    }

    /// Add a point to set `side` (0 or 1) and return the new minimum.
    pub(crate) fn add(&mut self, side: usize, c: [f64; 2]) -> f64 {
        let other = &self.grids[1 - side];
        let metric = self.metric;
        let mut best = self.best;
        let full_scan = best > other.width();
        let mut visit = |i: usize| {
            best = best.min(metric.distance(&c, other.coords(i)));
        };
        if full_scan {
            other.for_each(&mut visit);
        } else {
            other.for_each_near(&c, &mut visit);
        }
        self.best = best;
        self.grids[side].insert(c, 0);
        let level = level_for(best * WIDTH_FACTOR + MAP_SLACK);
        if level > self.grids[0].level() {
            self.grids[0].set_level(level);
            self.grids[1].set_level(level);
        }
        best
    }
}

/// `M_n` from two point streams using an incremental spatial grid.
pub fn mn_streams(
    metric: Metric,
    xs: impl IntoIterator<Item = Point>,
    ys: impl IntoIterator<Item = Point>,
    grid: &[u64],
) -> Result<MnSequence> {
    check_grid(grid)?;
    let n_max = *grid.last().expect("nonempty");
    let mut cp = ClosestPair::new(metric);
    let mut values = Vec::with_capacity(grid.len());
    let mut g = grid.iter().peekable();
    let mut xs = xs.into_iter();
    let mut ys = ys.into_iter();
    for k in 1..=n_max {
        let (Some(x), Some(y)) = (xs.next(), ys.next()) else {
            return Err(Error::input(format!("orbit streams ended before {n_max} points")));
        };
        cp.add(0, x.raw());
        cp.add(1, y.raw());
        if g.peek() == Some(&&k) {
            values.push(cp.best());
            g.next();
        }
    }
    Ok(MnSequence { grid: grid.to_vec(), values, metric })
}

/// `M_n` for the orbits of `x` and `y` in near-linear expected time. The
/// values equal [`mn_oracle`] exactly.
pub fn mn_accelerated(system: &MapSystem, x: Point, y: Point, grid: &[u64]) -> Result<MnSequence> {
    let ix = OrbitIter::new(system, x)?;
    let iy = OrbitIter::new(system, y)?;
    mn_streams(system.metric(), ix, iy, grid)
}

/// `min_{|i| < n} ||delta + i alpha||`, the closest return of two circle
/// rotation orbits whose starting points differ by `delta`.
pub fn mn_rotation(alpha: f64, delta: f64, n: u64) -> Result<f64> {
    if n == 0 {
        return Err(Error::input("n must be at least 1"));
    }
    let span = (n - 1) as i64;
    let best = (-span..=span)
        .map(|i| {
            let t = (delta + i as f64 * alpha).rem_euclid(1.0);
            t.min(1.0 - t)
        })
        .fold(f64::INFINITY, f64::min);
    Ok(best)
}

/// First `k` in `1..=n_max` with `d(T^k x, y) < r`.
pub fn hitting_time(system: &MapSystem, x: Point, y: Point, r: f64, n_max: u64) -> Result<Option<u64>> {
    if !(r > 0.0) {
        return Err(Error::input(format!("radius must be positive, got {r}")));
    }
    let metric = system.metric();
    let target = y.raw();
    let hit = OrbitIter::new(system, x)?
        .skip(1)
        .take(n_max as usize)
        .position(|p| metric.distance(&p.raw(), &target) < r);
    Ok(hit.map(|k| k as u64 + 1))
}

/// `e_n = log M_n / (-log n)` with running extremes. `None` marks exact hits
/// (`M_n = 0`), which are excluded from the extremes.
#[derive(Debug, Clone, PartialEq)]
pub struct ExponentTrace {
    pub grid: Vec<u64>,
    pub exponents: Vec<Option<f64>>,
    pub running_min: Vec<Option<f64>>,
    pub running_max: Vec<Option<f64>>,
}

/// Exponents along `M_n`; every grid entry must be at least 2.
pub fn exponent_trace(mn: &MnSequence) -> Result<ExponentTrace> {
    exponent_trace_from(&mn.grid, &mn.values)
}

/// Exponents of any positive-time statistic `M_t`, `t >= 2`.
pub fn exponent_trace_from(grid: &[u64], values: &[f64]) -> Result<ExponentTrace> {
    if grid.len() != values.len() {
        return Err(Error::input("grid and values differ in length"));
    }
    if grid.iter().any(|&n| n < 2) {
        return Err(Error::input("exponents need grid entries >= 2"));
    }
    let exponents: Vec<Option<f64>> = grid
        .iter()
        .zip(values)
        .map(|(&n, &m)| (m > 0.0).then(|| m.ln() / -(n as f64).ln()))
        .collect();
    let running = |pick: fn(f64, f64) -> f64| {
        let mut acc: Option<f64> = None;
        exponents
            .iter()
            .map(|e| {
                if let Some(e) = e {
                    acc = Some(acc.map_or(*e, |a| pick(a, *e)));
                }
                acc
            })
            .collect::<Vec<_>>()
    };
    Ok(ExponentTrace {
        grid: grid.to_vec(),
        running_min: running(f64::min),
        running_max: running(f64::max),
        exponents,
    })
}

impl ExponentTrace {
    pub fn len(&self) -> usize {
        self.grid.len()
    }

    pub fn is_empty(&self) -> bool {
        self.grid.is_empty()
    }

    pub fn has_exact_hit(&self) -> bool {
        self.exponents.iter().any(Option::is_none)
    }

    /// Exponent at the largest grid point.
    pub fn final_exponent(&self) -> Option<f64> {
        self.exponents.last().copied().flatten()
    }

    /// `(min, max)` of the exponents over the tail of the grid (its second
    /// half), restricted to entries `<= n_max`: the finite-data proxies for
    /// liminf and limsup as read at `n_max`.
    pub fn tail_extremes_upto(&self, n_max: u64) -> Option<(f64, f64)> {
        let start = self.grid.len() / 2;
        let end = self.grid.iter().take_while(|&&n| n <= n_max).count();
        let tail = &self.exponents[start.min(end)..end];
        tail.iter().flatten().fold(None, |acc, &e| match acc {
            None => Some((e, e)),
            Some((lo, hi)) => Some((f64::min(lo, e), f64::max(hi, e))),
        })
    }

    pub fn tail_extremes(&self) -> Option<(f64, f64)> {
        self.tail_extremes_upto(u64::MAX)
    }

    pub fn tail_min(&self) -> Option<f64> {
        self.tail_extremes().map(|e| e.0)
    }

    pub fn tail_max(&self) -> Option<f64> {
        self.tail_extremes().map(|e| e.1)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dynamics::{generate_orbit, RotationNumber};

    fn oracle_for(system: &MapSystem, x: Point, y: Point, grid: &[u64]) -> MnSequence {
        let n = *grid.last().unwrap() as usize;
        let ox = generate_orbit(system, x, n).unwrap();
        let oy = generate_orbit(system, y, n).unwrap();
        mn_oracle(&ox, &oy, system.metric(), grid).unwrap()
    }

    #[test]
    fn doubling_pair_example() {
        let sys = MapSystem::doubling();
        let x = Point::interval(0.1).unwrap();
        let y = Point::interval(0.7).unwrap();
        let mn = oracle_for(&sys, x, y, &[1, 2]);
        assert!((mn.values[0] - 0.6).abs() < 1e-15);
        assert!((mn.values[1] - 0.2).abs() < 1e-15);
        let acc = mn_accelerated(&sys, x, y, &[1, 2]).unwrap();
        assert_eq!(acc, mn);
        let tr = exponent_trace_from(&[2], &[mn.values[1]]).unwrap();
        assert!((tr.exponents[0].unwrap() - 2.321928094887362).abs() < 1e-9);
    }

    #[test]
    fn identical_orbits_are_zero() {
        let sys = MapSystem::lsv(0.25).unwrap();
        let x = Point::interval(0.3).unwrap();
        let mn = mn_accelerated(&sys, x, x, &[1, 4, 16]).unwrap();
        assert!(mn.values.iter().all(|&v| v == 0.0));
        let tr = exponent_trace(&MnSequence { grid: vec![4, 16], values: vec![0.0, 0.0], metric: mn.metric }).unwrap();
        assert!(tr.has_exact_hit());
        assert_eq!(tr.tail_extremes(), None);
    }

    #[test]
    fn oracle_rejects_metric_mismatch() {
        let sys = MapSystem::doubling();
        let ox = generate_orbit(&sys, Point::interval(0.1).unwrap(), 4).unwrap();
        assert!(mn_oracle(&ox, &ox, Metric::Torus, &[4]).is_err());
        assert!(mn_oracle(&ox, &ox, Metric::EuclideanInterval, &[8]).is_err());
    }

    #[test]
    fn rotation_examples() {
        assert_eq!(mn_rotation(0.3, 0.0, 7).unwrap(), 0.0);
        assert_eq!(mn_rotation(0.3, 0.5, 1).unwrap(), 0.5);
        let v = mn_rotation(0.6180339887, 0.5, 2).unwrap();
        assert!((v - 0.1180339887).abs() < 1e-12);
    }

    #[test]
    fn rotation_cross_check() {
        let sys = MapSystem::rotation(RotationNumber::golden());
        let (s, t) = (0.137, 0.802);
        let grid = dyadic_grid(1, 10).unwrap();
        let mn = mn_accelerated(&sys, Point::torus(s).unwrap(), Point::torus(t).unwrap(), &grid).unwrap();
        for (&n, &m) in grid.iter().zip(&mn.values) {
            let r = mn_rotation(RotationNumber::golden().value(), t - s, n).unwrap();
            assert!((m - r).abs() < 1e-9, "n={n}: {m} vs {r}");
        }
    }

    #[test]
    fn hitting_time_examples() {
        let sys = MapSystem::doubling();
        let x = Point::interval(0.1).unwrap();
        let y = Point::interval(0.2).unwrap();
        assert_eq!(hitting_time(&sys, x, y, 0.01, 10).unwrap(), Some(1));
        assert_eq!(hitting_time(&sys, x, Point::interval(0.9).unwrap(), 2.0, 10).unwrap(), Some(1));
        assert_eq!(hitting_time(&sys, x, Point::interval(0.99).unwrap(), 1e-6, 3).unwrap(), None);
        assert!(hitting_time(&sys, x, y, 0.0, 3).is_err());
    }

    #[test]
    fn exponent_identities() {
        let grid = dyadic_grid(1, 8).unwrap();
        let values: Vec<f64> = grid.iter().map(|&n| (n as f64).powi(-2)).collect();
        let tr = exponent_trace_from(&grid, &values).unwrap();
        assert!(tr.exponents.iter().all(|e| (e.unwrap() - 2.0).abs() < 1e-12));
        let tr = exponent_trace_from(&grid, &vec![0.3; grid.len()]).unwrap();
        let e: Vec<f64> = tr.exponents.iter().map(|e| e.unwrap()).collect();
        assert!(e.windows(2).all(|w| w[1] < w[0]));
        assert!((e[0] - 0.3f64.ln() / -(2f64.ln())).abs() < 1e-15);
        assert!(exponent_trace_from(&[1, 2], &[0.5, 0.5]).is_err());
    }

    #[test]
    fn tail_uses_second_half() {
        let grid = vec![2, 4, 8, 16];
        let tr = exponent_trace_from(&grid, &[0.5, 0.5, 0.01, 0.001]).unwrap();
        let (lo, hi) = tr.tail_extremes().unwrap();
        assert_eq!(lo, tr.exponents[2].unwrap().min(tr.exponents[3].unwrap()));
        assert_eq!(hi, tr.exponents[2].unwrap().max(tr.exponents[3].unwrap()));
        assert_eq!(tr.tail_extremes_upto(4), None);
        let (lo, hi) = tr.tail_extremes_upto(8).unwrap();
        assert_eq!((lo, hi), (tr.exponents[2].unwrap(), tr.exponents[2].unwrap()));
        for i in 0..4 {
            let e = tr.exponents[i].unwrap();
            assert!(tr.running_min[i].unwrap() <= e && e <= tr.running_max[i].unwrap());
        }
    }
}
