mod common;

use common::{grid, minor_rank, subsets};
use gridpos_core::budget::binomial;
use gridpos_core::constructions::{
    auto_probability, count_flat_tuples, deletion_construct, is_prime, moment_curve, C6Mode, DeletionConfig,
    Probability,
};
use gridpos_core::exact::ratio;
use gridpos_core::{Budget, Error, Point};
use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{Pow, ToPrimitive};

fn b() -> Budget {
    Budget::unlimited()
}

fn count_flat(points: &[Point], size: usize, r: usize) -> u64 {
    subsets(points.len(), size)
        .iter()
        .filter(|s| {
            let sub: Vec<Point> = s.iter().map(|&i| points[i].clone()).collect();
            minor_rank(&sub) <= r
        })
        .count() as u64
}

#[test]
fn moment_curve_matches_definition() {
    for p in [2u64, 3, 5, 7, 11] {
        for d in 1..=3 {
            let c = moment_curve(d, p).unwrap();
            assert_eq!(c.len() as u64, p);
            let mut want: Vec<Point> = (0..p as i64)
                .map(|t| Point::new((1..=d as u32).map(|i| t.pow(i) % p as i64 + 1).collect()))
                .collect();
            want.sort();
            assert_eq!(c.points(), &want[..]);
            if d >= 2 {
                assert_eq!(count_flat(c.points(), d + 1, d - 1), 0, "d={d} p={p}");
            }
        }
    }
    assert_eq!(moment_curve(2, 2).unwrap().len(), 2);
    assert!(matches!(moment_curve(2, 1), Err(Error::NotPrime(1))));
    assert!(matches!(moment_curve(3, 91), Err(Error::NotPrime(91))));
}

#[test]
fn primality() {
    let by_division = |p: u64| p >= 2 && (2..p).all(|q| p % q != 0);
    for p in 0..500 {
        assert_eq!(is_prime(p), by_division(p), "{p}");
    }
}

#[test]
fn flat_tuple_counts_match_brute_force() {
    assert_eq!(count_flat_tuples(3, 2, 1, 3, &b()).unwrap(), 8);
    assert_eq!(count_flat_tuples(2, 2, 1, 3, &b()).unwrap(), 0);
    for (n, d, r, size) in [(4, 2, 1, 3), (4, 2, 1, 4), (3, 3, 1, 3), (3, 3, 2, 4), (2, 3, 2, 5)] {
        assert_eq!(count_flat_tuples(n, d, r, size, &b()).unwrap(), count_flat(&grid(d, n), size, r));
    }
    for size in 1..=2 {
        assert_eq!(
            count_flat_tuples(3, 2, 1, size, &b()).unwrap() as u128,
            binomial(9, size as u64)
        );
    }
}

#[test]
fn certain_sampling_keeps_the_square() {
    let mut cfg = DeletionConfig::new(2, 1, 3, 2);
    cfg.p = Probability::Fixed(ratio(1, 1));
    let run = deletion_construct(&cfg, &b()).unwrap();
    let t = &run.trials[0];
    assert_eq!((t.sampled_size, t.violations_found, t.final_size), (4, 0, 4));
}

#[test]
fn outputs_are_verified_and_consistent() {
    for (d, r, s, n, p) in [(2, 1, 3, 8, (1, 2)), (2, 1, 2, 6, (2, 3)), (3, 1, 2, 4, (1, 2)), (3, 2, 2, 3, (3, 4))] {
        let mut cfg = DeletionConfig::new(d, r, s, n);
        cfg.p = Probability::Fixed(ratio(p.0, p.1));
        cfg.trials = 5;
        let run = deletion_construct(&cfg, &b()).unwrap();
        for t in &run.trials {
            assert_eq!(count_flat(t.output.points(), r + s, r), 0);
            assert!(t.final_size + t.violations_found as usize >= t.sampled_size);
            assert_eq!(t.final_size + t.deleted, t.sampled_size);
            assert!(t.output.iter().all(|x| x.coords().iter().all(|&c| 1 <= c && c <= n as i64)));
        }
    }
}

#[test]
fn construction_is_reproducible_and_thread_independent() {
    let mut cfg = DeletionConfig::new(2, 1, 3, 12);
    cfg.trials = 8;
    cfg.seed = 42;
    let a = deletion_construct(&cfg, &b()).unwrap();
    let one = rayon::ThreadPoolBuilder::new().num_threads(1).build().unwrap();
    let again = one.install(|| deletion_construct(&cfg, &b()).unwrap());
    assert_eq!(a, again);
    cfg.seed = 43;
    let other = deletion_construct(&cfg, &b()).unwrap();
    assert_ne!(a.trials, other.trials);
}

#[test]
fn sampled_size_has_the_right_mean() {
    let mut cfg = DeletionConfig::new(2, 1, 3, 15);
    cfg.p = Probability::Fixed(ratio(1, 5));
    cfg.trials = 200;
    let run = deletion_construct(&cfg, &b()).unwrap();
    let sizes: Vec<f64> = run.trials.iter().map(|t| t.sampled_size as f64).collect();
    let m = sizes.len() as f64;
    let mean = sizes.iter().sum::<f64>() / m;
    let var = sizes.iter().map(|x| (x - mean).powi(2)).sum::<f64>() / (m - 1.0);
    let se = (var / m).sqrt();
    let expected = 0.2 * 225.0;
    assert!((mean - expected).abs() <= 5.0 * se, "mean {mean}, expected {expected}, se {se}");
}

#[test]
fn automatic_probability_solves_the_balance_equation() {
    for (d, r, s, n) in [(2, 1, 3, 20), (2, 1, 2, 10), (3, 1, 3, 6), (3, 2, 2, 4)] {
        let cfg = DeletionConfig::new(d, r, s, n);
        let count = count_flat_tuples(n, d, r, r + s, &b()).unwrap();
        let (p, clamped) = auto_probability(&cfg, count, n);
        let half = ratio(1, 2);
        if clamped {
            assert_eq!(p, half);
            continue;
        }
        // p^(r+s-1) <= n^d / (2 count) < (p + 2^-32)^(r+s-1)
        let m = (r + s - 1) as u32;
        let target = BigRational::new(BigInt::from(n).pow(d as u32), BigInt::from(2 * count));
        let step = BigRational::new(BigInt::from(1), BigInt::from(1u64 << 32));
        assert!(p.clone().pow(m as i32) <= target);
        assert!((p.clone() + step).pow(m as i32) > target);
        assert!(p < half);
    }
    let cfg = DeletionConfig::new(2, 1, 3, 2);
    assert_eq!(auto_probability(&cfg, 0, 2), (ratio(1, 2), true));
}

#[test]
fn expected_size_bound_formula() {
    let mut cfg = DeletionConfig::new(2, 1, 3, 10);
    cfg.trials = 1;
    let run = deletion_construct(&cfg, &b()).unwrap();
    let p = &run.p;
    let nd = BigRational::from_integer(BigInt::from(100));
    let flat = BigRational::from_integer(BigInt::from(run.tuple_count));
    let want = p * &nd - p.clone().pow(4) * flat;
    assert_eq!(run.trials[0].expected_size_bound, want);
    let approx = (p * &nd / BigRational::from_integer(2.into())).to_f64().unwrap();
    assert!((run.trials[0].expected_size_bound.to_f64().unwrap() - approx).abs() < 1e-6);
}

#[test]
fn estimate_mode_uses_a_smaller_grid() {
    let mut cfg = DeletionConfig::new(2, 1, 3, 12);
    cfg.c6_mode = C6Mode::Estimate;
    cfg.estimate_side = Some(6);
    let run = deletion_construct(&cfg, &b()).unwrap();
    assert_eq!(run.count_side, 6);
    assert_eq!(run.tuple_count, count_flat_tuples(6, 2, 1, 4, &b()).unwrap());
    assert_eq!(run.c6, BigRational::new(BigInt::from(run.tuple_count), BigInt::from(6u64.pow(6))));
}

#[test]
fn invalid_deletion_configs() {
    let mut cfg = DeletionConfig::new(2, 1, 3, 5);
    cfg.p = Probability::Fixed(ratio(3, 2));
    assert!(matches!(deletion_construct(&cfg, &b()), Err(Error::ProbabilityOutOfRange)));
    let cfg = DeletionConfig::new(2, 2, 3, 5);
    assert!(matches!(deletion_construct(&cfg, &b()), Err(Error::InvalidConfig(_))));
}
