use super::expansion::{DigitBase, Expansion};
use crate::error::{Error, Result};

/// The state space a point lives in.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Space {
    /// `[0, 1]`.
    Interval,
    /// The circle `[0, 1)` with coordinates reduced mod 1.
    Torus1,
    /// `[0, 1] x T`: base coordinate first, circle coordinate second.
    IntervalTorus,
}

impl Space {
    pub fn dim(self) -> usize {
        match self {
            Space::Interval | Space::Torus1 => 1,
            Space::IntervalTorus => 2,
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            Space::Interval => "interval",
            Space::Torus1 => "torus1",
            Space::IntervalTorus => "product_interval_torus",
        }
    }
}

/// Reduce a real number into `[0, 1)`.
#[inline]
pub fn reduce_mod1(t: f64) -> f64 {
    let r = t - t.floor();
    if r >= 1.0 {
        0.0
    } else {
        r
    }
}

/// A point of one of the supported spaces.
///
/// Interval coordinates may carry an exact digit expansion (see
/// [`Expansion`]); `coords[0]` is then the value of its leading window.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Point {
    coords: [f64; 2],
    space: Space,
    expansion: Option<Expansion>,
}

fn check_interval(x: f64) -> Result<f64> {
    if (0.0..=1.0).contains(&x) {
        Ok(x)
    } else {
        Err(Error::Domain { value: x, space: "interval" })
    }
}

fn check_finite(t: f64) -> Result<f64> {
    if t.is_finite() {
        Ok(t)
    } else {
        Err(Error::Domain { value: t, space: "torus1" })
    }
}

impl Point {
    pub fn interval(x: f64) -> Result<Self> {
        Ok(Point { coords: [check_interval(x)?, 0.0], space: Space::Interval, expansion: None })
    }

    pub fn torus(t: f64) -> Result<Self> {
        let t = reduce_mod1(check_finite(t)?);
        Ok(Point { coords: [t, 0.0], space: Space::Torus1, expansion: None })
    }

    pub fn product(omega: f64, t: f64) -> Result<Self> {
        let omega = check_interval(omega)?;
        let t = reduce_mod1(check_finite(t)?);
        Ok(Point { coords: [omega, t], space: Space::IntervalTorus, expansion: None })
    }

    pub fn from_expansion(e: Expansion) -> Self {
        Point { coords: [e.value(), 0.0], space: Space::Interval, expansion: Some(e) }
    }

    pub fn product_from_expansion(e: Expansion, t: f64) -> Result<Self> {
        let t = reduce_mod1(check_finite(t)?);
        Ok(Point { coords: [e.value(), t], space: Space::IntervalTorus, expansion: Some(e) })
    }

    /// Lebesgue-typical expansion point for a digit key.
    pub fn random_expansion(key: u64, base: DigitBase) -> Self {
        Point::from_expansion(Expansion::new(key, base))
    }

    /// Rebuild with new coordinates in the same space; no validation.
    pub(crate) fn with_coords(space: Space, coords: [f64; 2], expansion: Option<Expansion>) -> Self {
        Point { coords, space, expansion }
    }

    pub fn coords(&self) -> &[f64] {
        &self.coords[..self.space.dim()]
    }

    pub(crate) fn raw(&self) -> [f64; 2] {
        self.coords
    }

    pub fn x(&self) -> f64 {
        self.coords[0]
    }

    pub fn space(&self) -> Space {
        self.space
    }

    pub fn expansion(&self) -> Option<Expansion> {
        self.expansion
    }

    /// Check that the stored coordinates are valid for the space.
    pub fn validate(&self) -> Result<()> {
        match self.space {
            Space::Interval => {
                check_interval(self.coords[0])?;
            }
            Space::Torus1 => {
                if !(0.0..1.0).contains(&self.coords[0]) {
                    return Err(Error::Domain { value: self.coords[0], space: "torus1" });
                }
            }
            Space::IntervalTorus => {
                check_interval(self.coords[0])?;
                if !(0.0..1.0).contains(&self.coords[1]) {
                    return Err(Error::Domain { value: self.coords[1], space: "torus1" });
                }
            }
        }
        Ok(())
    }
}
