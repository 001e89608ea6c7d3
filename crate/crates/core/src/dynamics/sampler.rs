use rand::Rng;

use super::expansion::{DigitBase, Expansion};
use super::orbit::OrbitIter;
use super::point::{Point, Space};
use super::system::MapSystem;
use crate::error::{Error, Result};
use crate::rng::StreamId;

#[derive(Debug, Clone, PartialEq)]
pub enum SamplerKind {
    /// Uniform floating-point coordinates on a space.
    Lebesgue(Space),
    /// Lebesgue measure on `[0, 1]` realized by random digit expansions.
    LebesgueDigits(DigitBase),
    /// Density proportional to `x^{-alpha}` on `[0, 1]`, `alpha in (1/2, 1)`.
    PowerDensity { alpha: f64 },
    /// Consecutive orbit points after `burn_in` iterates from a Lebesgue start.
    Birkhoff { system: MapSystem, burn_in: u64 },
    /// `inner x Leb` on `[0, 1] x T`.
    Product(Box<SamplerKind>),
}

/// A measure together with the random stream it draws from.
#[derive(Debug, Clone, PartialEq)]
pub struct MeasureSampler {
    kind: SamplerKind,
    stream: StreamId,
}

impl MeasureSampler {
    pub fn new(kind: SamplerKind, stream: StreamId) -> Result<Self> {
        validate(&kind)?;
        Ok(MeasureSampler { kind, stream })
    }

    pub fn kind(&self) -> &SamplerKind {
        &self.kind
    }

    pub fn stream(&self) -> StreamId {
        self.stream
    }

    /// `m` points from the sampler's own stream.
    pub fn sample(&self, m: usize) -> Result<Vec<Point>> {
        self.sample_with(&mut self.stream.rng(), m)
    }

    /// `m` points drawn from an external generator.
    pub fn sample_with<R: Rng + ?Sized>(&self, rng: &mut R, m: usize) -> Result<Vec<Point>> {
        if m == 0 {
            return Err(Error::input("sample size must be at least 1"));
        }
        draw(&self.kind, rng, m)
    }
}

fn validate(kind: &SamplerKind) -> Result<()> {
    match kind {
        SamplerKind::PowerDensity { alpha } if !(*alpha > 0.5 && *alpha < 1.0) => {
            Err(Error::config(format!("power density needs alpha in (1/2,1), got {alpha}")))
        }
        SamplerKind::Product(inner) => {
            if matches!(**inner, SamplerKind::Product(_)) {
                return Err(Error::config("nested product samplers are not supported"));
            }
            validate(inner)
        }
        SamplerKind::Lebesgue(Space::IntervalTorus) => Ok(()),
        SamplerKind::Birkhoff { system, .. } if system.space() != Space::Interval && system.space() != Space::Torus1 => {
            Err(Error::config("Birkhoff sampling is provided for one-dimensional systems"))
        }
        _ => Ok(()),
    }
}

/// Inverse CDF of the `x^{-alpha}` density: `u^{1/(1-alpha)}`.
#[inline]
pub fn power_density_inverse_cdf(u: f64, alpha: f64) -> f64 {
    u.powf(1.0 / (1.0 - alpha))
}

fn draw<R: Rng + ?Sized>(kind: &SamplerKind, rng: &mut R, m: usize) -> Result<Vec<Point>> {
    let out = match kind {
        SamplerKind::Lebesgue(space) => (0..m)
            .map(|_| match space {
                Space::Interval => Point::interval(rng.random()),
                Space::Torus1 => Point::torus(rng.random()),
                Space::IntervalTorus => {
                    let w: f64 = rng.random();
                    Point::product(w, rng.random())
                }
            })
            .collect::<Result<Vec<_>>>()?,
        SamplerKind::LebesgueDigits(base) => {
            (0..m).map(|_| Point::from_expansion(Expansion::new(rng.random(), *base))).collect()
        }
        SamplerKind::PowerDensity { alpha } => (0..m)
            .map(|_| Point::interval(power_density_inverse_cdf(rng.random(), *alpha)))
            .collect::<Result<Vec<_>>>()?,
        SamplerKind::Birkhoff { system, burn_in } => {
            let start = system.lebesgue_point(rng);
            OrbitIter::new(system, start)?.skip(*burn_in as usize).take(m).collect()
        }
        SamplerKind::Product(inner) => {
            let base = draw(inner, rng, m)?;
            base.into_iter()
                .map(|p| {
                    let t: f64 = rng.random();
                    match p.expansion() {
                        Some(e) => Point::product_from_expansion(e, t),
                        None => Point::product(p.x(), t),
                    }
                })
                .collect::<Result<Vec<_>>>()?
        }
    };
    Ok(out)
}

/// The invariant measure used for typical points of each system: Lebesgue
/// for the full-branch maps and rotations, `Leb x Leb` for skew products,
/// and Birkhoff sampling with `burn_in` for LSV maps.
pub fn invariant_sampler(system: &MapSystem, stream: StreamId, burn_in: u64) -> Result<MeasureSampler> {
    use super::system::MapKind;
    let kind = match system.kind() {
        MapKind::Doubling => SamplerKind::LebesgueDigits(DigitBase::Binary),
        MapKind::Tripling => SamplerKind::LebesgueDigits(DigitBase::Ternary),
        MapKind::Rotation { .. } => SamplerKind::Lebesgue(Space::Torus1),
        MapKind::Skew { base, .. } => SamplerKind::Product(Box::new(SamplerKind::LebesgueDigits(base.digits()))),
        MapKind::Lsv { .. } => SamplerKind::Birkhoff { system: system.clone(), burn_in },
    };
    MeasureSampler::new(kind, stream)
}

/// `m` points of the sampler's measure.
pub fn sample_measure(sampler: &MeasureSampler, m: usize) -> Result<Vec<Point>> {
    sampler.sample(m)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn lebesgue_is_identity_transform() {
        let s = MeasureSampler::new(SamplerKind::Lebesgue(Space::Interval), StreamId::new(1, 2)).unwrap();
        let u: f64 = StreamId::new(1, 2).rng().random();
        assert_eq!(s.sample(1).unwrap()[0].x(), u);
    }

    #[test]
    fn power_density_inverse() {
        assert_eq!(power_density_inverse_cdf(0.0625, 0.75), 1.52587890625e-5);
    }

    #[test]
    fn power_density_checks_alpha() {
        for a in [0.5, 0.25, 1.0, 1.2] {
            assert!(MeasureSampler::new(SamplerKind::PowerDensity { alpha: a }, StreamId::new(0, 0)).is_err());
        }
    }

    #[test]
    fn reproducible() {
        let s = MeasureSampler::new(SamplerKind::PowerDensity { alpha: 0.6 }, StreamId::new(9, 1)).unwrap();
        assert_eq!(s.sample(50).unwrap(), s.sample(50).unwrap());
        let t = MeasureSampler::new(SamplerKind::PowerDensity { alpha: 0.6 }, StreamId::new(9, 2)).unwrap();
        assert_ne!(s.sample(5).unwrap(), t.sample(5).unwrap());
    }

    #[test]
    fn zero_samples_rejected() {
        let s = MeasureSampler::new(SamplerKind::Lebesgue(Space::Torus1), StreamId::new(0, 0)).unwrap();
        assert!(s.sample(0).is_err());
    }

    #[test]
    fn power_density_ks() {
        let alpha = 0.75;
        let s = MeasureSampler::new(SamplerKind::PowerDensity { alpha }, StreamId::new(2024, 0)).unwrap();
        let mut xs: Vec<f64> = s.sample(100_000).unwrap().iter().map(|p| p.x()).collect();
        xs.sort_by(f64::total_cmp);
        let m = xs.len() as f64;
        let ks = xs
            .iter()
            .enumerate()
            .map(|(i, &x)| {
                let f = x.powf(1.0 - alpha);
                (f - i as f64 / m).abs().max(((i + 1) as f64 / m - f).abs())
            })
            .fold(0.0, f64::max);
        assert!(ks < 0.01, "KS distance {ks}");
    }

    #[test]
    fn product_keeps_expansions() {
        let s = MeasureSampler::new(
            SamplerKind::Product(Box::new(SamplerKind::LebesgueDigits(DigitBase::Ternary))),
            StreamId::new(1, 1),
        )
        .unwrap();
        let pts = s.sample(3).unwrap();
        assert!(pts.iter().all(|p| p.expansion().is_some() && p.space() == Space::IntervalTorus));
    }
}
