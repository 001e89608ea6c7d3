use super::point::Point;
use super::system::{MapKind, MapSystem};
use crate::error::{Error, Result};

/// Cap on first-return times.
pub const DEFAULT_MAX_TAU: u64 = 10_000_000;

/// First-return map `F = T^tau` on an interval `Y = [a, b]`.
#[derive(Debug, Clone, PartialEq)]
pub struct InducedSystem {
    base: MapSystem,
    lo: f64,
    hi: f64,
    max_tau: u64,
}

/// Build the first-return system of an LSV or doubling map on `[lo, hi]`.
pub fn first_return_system(base: &MapSystem, y: (f64, f64), max_tau: u64) -> Result<InducedSystem> {
    if !matches!(base.kind(), MapKind::Lsv { .. } | MapKind::Doubling) {
        return Err(Error::config(format!("inducing is provided for LSV and doubling maps, not {base}")));
    }
    let (lo, hi) = y;
    if !(0.0 <= lo && lo < hi && hi <= 1.0) {
        return Err(Error::config(format!("bad inducing interval [{lo}, {hi}]")));
    }
    if max_tau == 0 {
        return Err(Error::config("max_tau must be positive"));
    }
    Ok(InducedSystem { base: base.clone(), lo, hi, max_tau })
}

impl InducedSystem {
    /// `Y = [1/2, 1]`.
    pub fn standard(base: &MapSystem) -> Result<Self> {
        first_return_system(base, (0.5, 1.0), DEFAULT_MAX_TAU)
    }

    pub fn contains(&self, x: f64) -> bool {
        self.lo <= x && x <= self.hi
    }

    pub fn base(&self) -> &MapSystem {
        &self.base
    }

    /// `(F(x), tau(x))` for `x` in `Y`.
    pub fn evaluate(&self, x: &Point) -> Result<(Point, u64)> {
        if !self.contains(x.x()) {
            return Err(Error::input(format!("{} not in Y = [{}, {}]", x.x(), self.lo, self.hi)));
        }
        let mut p = self.base.evaluate(x)?;
        let mut tau = 1u64;
        while !self.contains(p.x()) {
            if tau >= self.max_tau {
                return Err(Error::ReturnTimeTruncated { x: x.x(), max_tau: self.max_tau });
            }
            p = self.base.step(&p);
            tau += 1;
        }
        Ok((p, tau))
    }

    /// Birkhoff sums `tau_1(x), ..., tau_n(x)` of the return time along `F`.
    pub fn tau_sums(&self, x: &Point, n: usize) -> Result<Vec<u64>> {
        let mut sums = Vec::with_capacity(n);
        let mut p = *x;
        let mut total = 0u64;
        for _ in 0..n {
            let (next, tau) = self.evaluate(&p)?;
            total += tau;
            sums.push(total);
            p = next;
        }
        Ok(sums)
    }
}
