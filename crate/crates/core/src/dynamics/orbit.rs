use super::expansion::ShiftWindow;
use super::point::{reduce_mod1, Point, Space};
use super::system::{MapKind, MapSystem};
use crate::error::{Error, Result};

/// The first `length` points `x, T x, ..., T^{length-1} x` of an orbit.
#[derive(Debug, Clone, PartialEq)]
pub struct Orbit {
    pub points: Vec<Point>,
    pub system: MapSystem,
    pub seed: Point,
}

impl Orbit {
    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    pub fn xs(&self) -> Vec<f64> {
        self.points.iter().map(|p| p.x()).collect()
    }
}

/// Streams an orbit without materializing it.
///
/// Expansion points are shifted through a sequential digit reader; the
/// emitted points equal repeated [`MapSystem::evaluate`] exactly.
#[derive(Debug, Clone)]
pub struct OrbitIter<'a> {
    system: &'a MapSystem,
    current: Point,
    window: Option<ShiftWindow>,
}

impl<'a> OrbitIter<'a> {
    pub fn new(system: &'a MapSystem, seed: Point) -> Result<Self> {
        if seed.space() != system.space() {
            return Err(Error::input(format!(
                "seed in {} for a system on {}",
                seed.space().name(),
                system.space().name()
            )));
        }
        seed.validate()?;
        let window = match (seed.expansion(), system.expansion_base()) {
            (Some(e), Some(b)) if e.base == b => Some(ShiftWindow::new(&e)),
            _ => None,
        };
        Ok(OrbitIter { system, current: seed, window })
    }

    fn advance(&mut self) {
        let Some(window) = self.window.as_mut() else {
            self.current = self.system.step(&self.current);
            return;
        };
        let c = self.current.raw();
        let e = self.current.expansion().expect("window implies expansion");
        let next = match self.system.kind() {
            MapKind::Skew { alpha, cylinders, .. } => {
                let t = if cylinders.contains_digit(window.leading_digit()) {
                    reduce_mod1(c[1] + alpha.value())
                } else {
                    c[1]
                };
                window.shift();
                Point::with_coords(Space::IntervalTorus, [window.value(), t], Some(e.shifted(1)))
            }
            _ => {
                window.shift();
                Point::with_coords(Space::Interval, [window.value(), 0.0], Some(e.shifted(1)))
            }
        };
        self.current = next;
    }
}

impl Iterator for OrbitIter<'_> {
    type Item = Point;

    fn next(&mut self) -> Option<Point> {
        let out = self.current;
        self.advance();
        Some(out)
    }
}

/// Materialize `n >= 1` orbit points starting at `x0`.
pub fn generate_orbit(system: &MapSystem, x0: Point, n: usize) -> Result<Orbit> {
    if n == 0 {
        return Err(Error::input("orbit length must be at least 1"));
    }
    let points: Vec<Point> = OrbitIter::new(system, x0)?.take(n).collect();
    Ok(Orbit { points, system: system.clone(), seed: x0 })
}
