use orbclose::dimension::{
    auto_radii, correlation_integral, fit_dimension, log_radii, reference_dimension, DimensionModel, FitWindow,
};
use orbclose::dynamics::{DigitBase, MeasureSampler, Metric, Point, SamplerKind, Space};
use orbclose::rng::StreamId;

fn sample(kind: SamplerKind, seed: u64, m: usize) -> Vec<Point> {
    MeasureSampler::new(kind, StreamId::new(seed, 0)).unwrap().sample(m).unwrap()
}

fn fitted_slope(samples: &[Point], metric: Metric) -> (f64, f64) {
    let radii = auto_radii(samples, metric).unwrap();
    let est = correlation_integral(samples, metric, &radii).unwrap();
    assert!(est.is_monotone());
    let fit = fit_dimension(&est, FitWindow::Auto).unwrap();
    (fit.slope.unwrap(), fit.slope_stderr.unwrap())
}

/// Standard deviation of the ordered-pair U-statistic for Lebesgue on [0,1]:
/// `g(x) = P(|x - Y| < r)` is `2r` in the bulk and `x + r` near the ends.
fn uniform_u_stat_sd(r: f64, m: usize) -> f64 {
    let p = 2.0 * r - r * r;
    let eg2 = (1.0 - 2.0 * r) * 4.0 * r * r + 2.0 * (8.0 * r.powi(3) - r.powi(3)) / 3.0;
    let zeta1 = eg2 - p * p;
    let zeta2 = p * (1.0 - p);
    let m = m as f64;
    (4.0 * (m - 2.0) / (m * (m - 1.0)) * zeta1 + 2.0 / (m * (m - 1.0)) * zeta2).sqrt()
}

#[test]
fn uniform_integral_matches_analytic_law() {
    let m = 10_000;
    let s = sample(SamplerKind::Lebesgue(Space::Interval), 1, m);
    let radii = [0.3, 0.1, 0.03, 0.01, 0.003, 0.001];
    let est = correlation_integral(&s, Metric::EuclideanInterval, &radii).unwrap();
    for (k, &r) in radii.iter().enumerate() {
        let exact = 2.0 * r - r * r;
        let sd = uniform_u_stat_sd(r, m);
        assert!((est.chat[k] - exact).abs() < 3.0 * sd, "r={r}: {} vs {exact} (sd {sd})", est.chat[k]);
    }
}

#[test]
fn uniform_slope_is_one() {
    let s = sample(SamplerKind::LebesgueDigits(DigitBase::Binary), 2, 10_000);
    let (slope, _) = fitted_slope(&s, Metric::EuclideanInterval);
    assert!((slope - 1.0).abs() < 0.1, "{slope}");
}

#[test]
fn power_density_slope() {
    let s = sample(SamplerKind::PowerDensity { alpha: 0.75 }, 3, 100_000);
    let (slope, _) = fitted_slope(&s, Metric::EuclideanInterval);
    let expected = reference_dimension(&DimensionModel::PowerDensity(0.75)).unwrap();
    assert!((slope - expected).abs() < 0.1, "{slope}");
}

#[test]
fn product_slope_is_two() {
    let s = sample(SamplerKind::Lebesgue(Space::IntervalTorus), 4, 10_000);
    let (slope, _) = fitted_slope(&s, Metric::SupProduct);
    assert!((slope - 2.0).abs() < 0.15, "{slope}");
}

#[test]
fn torus_slope_is_one() {
    let s = sample(SamplerKind::Lebesgue(Space::Torus1), 5, 10_000);
    let (slope, _) = fitted_slope(&s, Metric::Torus);
    assert!((slope - 1.0).abs() < 0.1, "{slope}");
}

#[test]
fn stderr_shrinks_with_more_samples() {
    // fixed radii so only the sample size changes
    let radii = log_radii(1e-4, 1e-2, 24).unwrap();
    let mean_stderr = |m: usize| {
        let runs = 6;
        (0..runs)
            .map(|seed| {
                let s = sample(SamplerKind::Lebesgue(Space::Interval), 100 + seed, m);
                let est = correlation_integral(&s, Metric::EuclideanInterval, &radii).unwrap();
                fit_dimension(&est, FitWindow::Indices(0..24)).unwrap().slope_stderr.unwrap()
            })
            .sum::<f64>()
            / runs as f64
    };
    let ratio = mean_stderr(5_000) / mean_stderr(10_000);
    assert!((1.0..=4.0).contains(&ratio), "stderr ratio {ratio}");
}
