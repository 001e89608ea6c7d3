use std::fmt;
use std::sync::Arc;

use rand::Rng;

use super::expansion::{DigitBase, Expansion};
use super::point::{reduce_mod1, Point, Space};
use crate::diophantine::ContinuedFraction;
use crate::error::{Error, Result};

/// Distance functions on the supported spaces.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Metric {
    /// `|a - b|` on `[0, 1]`.
    EuclideanInterval,
    /// `min(|a - b|, 1 - |a - b|)` on the circle.
    Torus,
    /// `max(|a0 - b0|, torus(a1, b1))` on `[0, 1] x T`.
    SupProduct,
}

impl Metric {
    #[inline]
    pub fn distance(self, a: &[f64; 2], b: &[f64; 2]) -> f64 {
        match self {
            Metric::EuclideanInterval => (a[0] - b[0]).abs(),
            Metric::Torus => torus_distance(a[0], b[0]),
            Metric::SupProduct => (a[0] - b[0]).abs().max(torus_distance(a[1], b[1])),
        }
    }

    pub fn between(self, a: &Point, b: &Point) -> f64 {
        self.distance(&a.raw(), &b.raw())
    }

    pub fn dim(self) -> usize {
        match self {
            Metric::EuclideanInterval | Metric::Torus => 1,
            Metric::SupProduct => 2,
        }
    }

    /// Whether coordinate `axis` is periodic under this metric.
    pub fn wraps(self, axis: usize) -> bool {
        matches!((self, axis), (Metric::Torus, 0) | (Metric::SupProduct, 1))
    }

    pub fn name(self) -> &'static str {
        match self {
            Metric::EuclideanInterval => "euclidean_interval",
            Metric::Torus => "torus_distance",
            Metric::SupProduct => "sup_product",
        }
    }

    /// Largest possible distance.
    pub fn diameter(self) -> f64 {
        match self {
            Metric::EuclideanInterval | Metric::SupProduct => 1.0,
            Metric::Torus => 0.5,
        }
    }
}

#[inline]
pub fn torus_distance(a: f64, b: f64) -> f64 {
    let d = (a - b).abs();
    d.min(1.0 - d)
}

/// An irrational rotation number, optionally with the continued fraction it
/// was built from.
#[derive(Debug, Clone, PartialEq)]
pub struct RotationNumber {
    value: f64,
    cf: Option<Arc<ContinuedFraction>>,
}

impl RotationNumber {
    /// Any value in `(0, 1)`; rational values are accepted for testing.
    pub fn from_f64(value: f64) -> Result<Self> {
        if value > 0.0 && value < 1.0 {
            Ok(RotationNumber { value, cf: None })
        } else {
            Err(Error::config(format!("rotation number {value} not in (0,1)")))
        }
    }

    pub fn from_continued_fraction(cf: ContinuedFraction) -> Result<Self> {
        let value = cf.value_f64();
        let mut r = Self::from_f64(value)?;
        r.cf = Some(Arc::new(cf));
        Ok(r)
    }

    /// `(sqrt 5 - 1) / 2`, all partial quotients equal to 1.
    pub fn golden() -> Self {
        RotationNumber { value: (5f64.sqrt() - 1.0) / 2.0, cf: None }
    }

    pub fn value(&self) -> f64 {
        self.value
    }

    pub fn continued_fraction(&self) -> Option<&ContinuedFraction> {
        self.cf.as_deref()
    }
}

/// Base of a skew product: an expanding Markov map with full branches.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum ExpandingBase {
    Doubling,
    Tripling,
}

impl ExpandingBase {
    pub fn digits(self) -> DigitBase {
        match self {
            ExpandingBase::Doubling => DigitBase::Binary,
            ExpandingBase::Tripling => DigitBase::Ternary,
        }
    }

    pub fn branches(self) -> u64 {
        self.digits().radix()
    }

    #[inline]
    fn apply(self, x: f64) -> f64 {
        reduce_mod1(self.branches() as f64 * x)
    }
}

/// A union of branch cylinders `[k/b, (k+1)/b)` of a full-branch map, stored
/// as a bit mask over `k`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Cylinders {
    mask: u8,
    branches: u8,
}

impl Cylinders {
    pub fn new(indices: &[u64], base: ExpandingBase) -> Result<Self> {
        let b = base.branches();
        let mut mask = 0u8;
        for &k in indices {
            if k >= b {
                return Err(Error::config(format!("cylinder index {k} out of range for {b} branches")));
            }
            mask |= 1 << k;
        }
        let full = (1u8 << b) - 1;
        if mask == 0 || mask == full {
            return Err(Error::config("I must be a nonempty proper union of branch cylinders"));
        }
        Ok(Cylinders { mask, branches: b as u8 })
    }

    /// Parse either an index list (`"0"`, `"0,2"`) or a union of intervals
    /// with endpoints on the branch grid (`"[0,1/3)"`, `"[0,1/3)u[2/3,1)"`).
    pub fn parse(text: &str, base: ExpandingBase) -> Result<Self> {
        let text = text.trim();
        if !text.starts_with('[') {
            let indices = text
                .split(',')
                .map(|s| s.trim().parse::<u64>().map_err(|_| Error::config(format!("bad cylinder index {s:?}"))))
                .collect::<Result<Vec<_>>>()?;
            return Self::new(&indices, base);
        }
        let b = base.branches() as f64;
        let mut indices = Vec::new();
        for part in text.split(['u', 'U', '∪']) {
            let inner = part.trim().trim_start_matches('[').trim_end_matches([')', ']']);
            let (lo, hi) = inner
                .split_once(',')
                .ok_or_else(|| Error::config(format!("bad interval {part:?}")))?;
            let lo = parse_fraction(lo)? * b;
            let hi = parse_fraction(hi)? * b;
            let (klo, khi) = (lo.round(), hi.round());
            if (lo - klo).abs() > 1e-9 || (hi - khi).abs() > 1e-9 || khi <= klo {
                return Err(Error::config(format!("interval {part:?} is not a union of branch cylinders")));
            }
            indices.extend(klo as u64..khi as u64);
        }
        Self::new(&indices, base)
    }

    #[inline]
    pub fn contains_digit(&self, digit: u64) -> bool {
        digit < 8 && self.mask & (1 << digit) != 0
    }

    #[inline]
    pub fn contains(&self, x: f64) -> bool {
        let b = self.branches as f64;
        let digit = ((x * b).floor() as u64).min(self.branches as u64 - 1);
        self.contains_digit(digit)
    }

    pub fn indices(&self) -> Vec<u64> {
        (0..self.branches as u64).filter(|&k| self.contains_digit(k)).collect()
    }
}

fn parse_fraction(s: &str) -> Result<f64> {
    let s = s.trim();
    let bad = || Error::config(format!("bad number {s:?}"));
    match s.split_once('/') {
        Some((n, d)) => {
            let n: f64 = n.trim().parse().map_err(|_| bad())?;
            let d: f64 = d.trim().parse().map_err(|_| bad())?;
            Ok(n / d)
        }
        None => s.parse().map_err(|_| bad()),
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum MapKind {
    /// Liverani-Saussol-Vaienti map with a neutral fixed point at 0.
    Lsv { alpha: f64 },
    Doubling,
    Tripling,
    Rotation { alpha: RotationNumber },
    /// `S(w, t) = (T w, t + alpha * 1_I(w))`.
    Skew { base: ExpandingBase, alpha: RotationNumber, cylinders: Cylinders },
}

/// Left branch of the LSV map, `x (1 + 2^a x^a)`.
#[inline]
pub fn lsv_left_branch(x: f64, alpha: f64) -> f64 {
    x * (1.0 + (2.0 * x).powf(alpha))
}

#[inline]
fn lsv(x: f64, alpha: f64) -> f64 {
    if x < 0.5 {
        lsv_left_branch(x, alpha).min(1.0)
    } else {
        2.0 * x - 1.0
    }
}

/// A discrete-time system together with the metric used on its space.
#[derive(Debug, Clone, PartialEq)]
pub struct MapSystem {
    kind: MapKind,
    metric: Metric,
}

impl MapSystem {
    pub fn lsv(alpha: f64) -> Result<Self> {
        if !(alpha > 0.0 && alpha < 1.0) {
            return Err(Error::config(format!("LSV parameter {alpha} not in (0,1)")));
        }
        Ok(MapSystem { kind: MapKind::Lsv { alpha }, metric: Metric::EuclideanInterval })
    }

    pub fn doubling() -> Self {
        MapSystem { kind: MapKind::Doubling, metric: Metric::EuclideanInterval }
    }

    pub fn tripling() -> Self {
        MapSystem { kind: MapKind::Tripling, metric: Metric::EuclideanInterval }
    }

    pub fn rotation(alpha: RotationNumber) -> Self {
        MapSystem { kind: MapKind::Rotation { alpha }, metric: Metric::Torus }
    }

    pub fn skew(base: ExpandingBase, alpha: RotationNumber, cylinders: Cylinders) -> Result<Self> {
        if cylinders.branches as u64 != base.branches() {
            return Err(Error::config("cylinders do not match the base map"));
        }
        Ok(MapSystem { kind: MapKind::Skew { base, alpha, cylinders }, metric: Metric::SupProduct })
    }

    /// Tripling base with `I = [0, 1/3)`: both `I` and its complement contain
    /// a fixed point (0 and 1/2).
    pub fn default_skew(alpha: RotationNumber) -> Self {
        let cylinders = Cylinders::new(&[0], ExpandingBase::Tripling).expect("valid cylinder");
        MapSystem::skew(ExpandingBase::Tripling, alpha, cylinders).expect("valid skew")
    }

    pub fn with_metric(mut self, metric: Metric) -> Result<Self> {
        if metric.dim() != self.space().dim() {
            return Err(Error::config(format!(
                "metric {} incompatible with space {}",
                metric.name(),
                self.space().name()
            )));
        }
        self.metric = metric;
        Ok(self)
    }

    pub fn kind(&self) -> &MapKind {
        &self.kind
    }

    pub fn metric(&self) -> Metric {
        self.metric
    }

    pub fn space(&self) -> Space {
        match self.kind {
            MapKind::Lsv { .. } | MapKind::Doubling | MapKind::Tripling => Space::Interval,
            MapKind::Rotation { .. } => Space::Torus1,
            MapKind::Skew { .. } => Space::IntervalTorus,
        }
    }

    /// Digit base for exact expansion points, for full-branch maps.
    pub fn expansion_base(&self) -> Option<DigitBase> {
        match &self.kind {
            MapKind::Doubling => Some(DigitBase::Binary),
            MapKind::Tripling => Some(DigitBase::Ternary),
            MapKind::Skew { base, .. } => Some(base.digits()),
            _ => None,
        }
    }

    /// Apply the map to `x`, rejecting points outside the system's space.
    pub fn evaluate(&self, x: &Point) -> Result<Point> {
        if x.space() != self.space() {
            return Err(Error::input(format!(
                "point in {} fed to a system on {}",
                x.space().name(),
                self.space().name()
            )));
        }
        x.validate()?;
        Ok(self.step(x))
    }

    /// The map without domain checks.
    pub(crate) fn step(&self, p: &Point) -> Point {
        let c = p.raw();
        match &self.kind {
            MapKind::Lsv { alpha } => Point::with_coords(Space::Interval, [lsv(c[0], *alpha), 0.0], None),
            MapKind::Doubling => self.step_expanding(ExpandingBase::Doubling, p),
            MapKind::Tripling => self.step_expanding(ExpandingBase::Tripling, p),
            MapKind::Rotation { alpha } => {
                Point::with_coords(Space::Torus1, [reduce_mod1(c[0] + alpha.value), 0.0], None)
            }
            MapKind::Skew { base, alpha, cylinders } => {
                let in_i = match p.expansion() {
                    Some(e) if e.base == base.digits() => cylinders.contains_digit(e.leading_digit()),
                    _ => cylinders.contains(c[0]),
                };
                let t = if in_i { reduce_mod1(c[1] + alpha.value) } else { c[1] };
                let (omega, expansion) = step_base(*base, p);
                Point::with_coords(Space::IntervalTorus, [omega, t], expansion)
            }
        }
    }

    fn step_expanding(&self, base: ExpandingBase, p: &Point) -> Point {
        let (x, expansion) = step_base(base, p);
        Point::with_coords(Space::Interval, [x, 0.0], expansion)
    }

    /// A Lebesgue-distributed point in the representation suited to
    /// iterating this system (digit expansions for full-branch maps).
    pub fn lebesgue_point<R: Rng + ?Sized>(&self, rng: &mut R) -> Point {
        match (&self.kind, self.expansion_base()) {
            (MapKind::Skew { .. }, Some(b)) => {
                let e = Expansion::new(rng.random(), b);
                let t: f64 = rng.random();
                Point::product_from_expansion(e, t).expect("uniform fiber coordinate")
            }
            (_, Some(b)) => Point::from_expansion(Expansion::new(rng.random(), b)),
            (MapKind::Rotation { .. }, None) => Point::torus(rng.random()).expect("uniform"),
            _ => Point::interval(rng.random()).expect("uniform"),
        }
    }

    pub fn name(&self) -> String {
        self.to_string()
    }
}

fn step_base(base: ExpandingBase, p: &Point) -> (f64, Option<Expansion>) {
    match p.expansion() {
        Some(e) if e.base == base.digits() => {
            let e = e.shifted(1);
            (e.value(), Some(e))
        }
        _ => (base.apply(p.raw()[0]), None),
    }
}

impl fmt::Display for MapSystem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &self.kind {
            MapKind::Lsv { alpha } => write!(f, "lsv({alpha})"),
            MapKind::Doubling => write!(f, "doubling"),
            MapKind::Tripling => write!(f, "tripling"),
            MapKind::Rotation { alpha } => write!(f, "rotation({})", alpha.value),
            MapKind::Skew { base, alpha, cylinders } => {
                let b = match base {
                    ExpandingBase::Doubling => "doubling",
                    ExpandingBase::Tripling => "tripling",
                };
                write!(f, "skew({b},{},I={:?})", alpha.value, cylinders.indices())
            }
        }
    }
}

/// `T(x)` for a system; torus coordinates come back reduced mod 1.
pub fn evaluate_map(system: &MapSystem, x: &Point) -> Result<Point> {
    system.evaluate(x)
}
