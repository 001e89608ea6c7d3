use std::time::Instant;

use orbclose::closeness::{
    dyadic_grid, exponent_trace, hitting_time, mn_accelerated, mn_oracle, mn_rotation, mn_streams,
};
use orbclose::dynamics::{generate_orbit, DigitBase, MapSystem, Metric, Point, RotationNumber};
use orbclose::rng::stream_rng;
use proptest::prelude::*;
use rand::Rng;

fn systems() -> Vec<MapSystem> {
    vec![
        MapSystem::doubling(),
        MapSystem::tripling(),
        MapSystem::lsv(0.25).unwrap(),
        MapSystem::rotation(RotationNumber::golden()),
        MapSystem::default_skew(RotationNumber::golden()),
    ]
}

fn random_pair(system: &MapSystem, seed: u64) -> (Point, Point) {
    let mut rng = stream_rng(seed, 0);
    (system.lebesgue_point(&mut rng), system.lebesgue_point(&mut rng))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn accelerated_matches_oracle(which in 0usize..5, seed in any::<u64>(), log_n in 1u32..10) {
        let system = &systems()[which];
        let (x, y) = random_pair(system, seed);
        let grid = dyadic_grid(0, log_n).unwrap();
        let n = 1usize << log_n;
        let ox = generate_orbit(system, x, n).unwrap();
        let oy = generate_orbit(system, y, n).unwrap();
        let oracle = mn_oracle(&ox, &oy, system.metric(), &grid).unwrap();
        let fast = mn_accelerated(system, x, y, &grid).unwrap();
        prop_assert_eq!(&fast, &oracle);
        prop_assert!(oracle.is_nonincreasing());
        prop_assert!(oracle.values.iter().all(|&v| v >= 0.0));
        let swapped = mn_oracle(&oy, &ox, system.metric(), &grid).unwrap();
        prop_assert_eq!(swapped, oracle);
    }

    #[test]
    fn arbitrary_grids_agree(seed in any::<u64>(), mut grid in prop::collection::btree_set(1u64..300, 1..8)) {
        let system = MapSystem::doubling();
        let (x, y) = random_pair(&system, seed);
        let grid: Vec<u64> = std::mem::take(&mut grid).into_iter().collect();
        let n = *grid.last().unwrap() as usize;
        let ox = generate_orbit(&system, x, n).unwrap();
        let oy = generate_orbit(&system, y, n).unwrap();
        let oracle = mn_oracle(&ox, &oy, system.metric(), &grid).unwrap();
        prop_assert_eq!(mn_accelerated(&system, x, y, &grid).unwrap(), oracle);
    }

    #[test]
    fn running_extremes_bracket(seed in any::<u64>()) {
        let system = MapSystem::tripling();
        let (x, y) = random_pair(&system, seed);
        let mn = mn_accelerated(&system, x, y, &dyadic_grid(1, 12).unwrap()).unwrap();
        let tr = exponent_trace(&mn).unwrap();
        for i in 0..tr.len() {
            if let Some(e) = tr.exponents[i] {
                prop_assert!(tr.running_min[i].unwrap() <= e && e <= tr.running_max[i].unwrap());
            }
        }
    }
}

#[test]
fn dense_float_orbits_with_exact_ties() {
    // float doubling orbits collapse onto 0, producing many exact ties and hits
    let system = MapSystem::doubling();
    for seed in 0..20u64 {
        let mut rng = stream_rng(seed, 7);
        let x = Point::interval(rng.random()).unwrap();
        let y = Point::interval(rng.random()).unwrap();
        let grid = dyadic_grid(0, 7).unwrap();
        let ox = generate_orbit(&system, x, 128).unwrap();
        let oy = generate_orbit(&system, y, 128).unwrap();
        let oracle = mn_oracle(&ox, &oy, Metric::EuclideanInterval, &grid).unwrap();
        assert_eq!(mn_accelerated(&system, x, y, &grid).unwrap(), oracle);
        assert_eq!(*oracle.values.last().unwrap(), 0.0);
    }
}

#[test]
fn rotation_matches_closest_return_formula() {
    let golden = RotationNumber::golden();
    let system = MapSystem::rotation(golden.clone());
    let grid = dyadic_grid(1, 12).unwrap();
    for seed in 0..20 {
        let (x, y) = random_pair(&system, seed);
        let mn = mn_accelerated(&system, x, y, &grid).unwrap();
        for (&n, &m) in grid.iter().zip(&mn.values) {
            let r = mn_rotation(golden.value(), y.x() - x.x(), n).unwrap();
            assert!((m - r).abs() < 1e-9);
        }
    }
}

#[test]
fn hitting_time_matches_scan() {
    let system = MapSystem::default_skew(RotationNumber::golden());
    for seed in 0..10 {
        let (x, y) = random_pair(&system, seed);
        let r = 1e-3;
        let found = hitting_time(&system, x, y, r, 100_000).unwrap();
        let orbit = generate_orbit(&system, x, 100_001).unwrap();
        let scan = (1..orbit.len())
            .find(|&k| system.metric().between(&orbit.points[k], &y) < r)
            .map(|k| k as u64);
        assert_eq!(found, scan);
    }
}

#[test]
fn streams_accept_sampled_points() {
    let a = [Point::interval(0.2).unwrap(), Point::interval(0.9).unwrap()];
    let b = [Point::interval(0.5).unwrap(), Point::interval(0.85).unwrap()];
    let mn = mn_streams(Metric::EuclideanInterval, a, b, &[1, 2]).unwrap();
    assert!((mn.values[0] - 0.3).abs() < 1e-15);
    assert!((mn.values[1] - 0.05).abs() < 1e-15);
    assert!(mn_streams(Metric::EuclideanInterval, a, b, &[3]).is_err());
}

#[test]
fn expansion_orbits_do_not_collapse() {
    let system = MapSystem::doubling();
    let x = Point::random_expansion(11, DigitBase::Binary);
    let y = Point::random_expansion(12, DigitBase::Binary);
    let mn = mn_accelerated(&system, x, y, &dyadic_grid(4, 16).unwrap()).unwrap();
    assert!(mn.values.iter().all(|&v| v > 0.0));
}

fn time_pair(system: &MapSystem, n_log: u32, seed: u64) -> f64 {
    let (x, y) = random_pair(system, seed);
    let grid = dyadic_grid(4, n_log).unwrap();
    let start = Instant::now();
    mn_accelerated(system, x, y, &grid).unwrap();
    start.elapsed().as_secs_f64()
}

#[test]
fn near_linear_scaling() {
    let system = MapSystem::doubling();
    // best of three damps scheduler noise
    let t = |n_log| (0..3).map(|s| time_pair(&system, n_log, 100 + s)).fold(f64::INFINITY, f64::min);
    let small = t(17);
    let large = t(18);
    let ratio = large / small;
    assert!(ratio < 3.0, "time(2n)/time(n) = {ratio}");
}
