mod common;

use common::{minor_rank, naive_nondegenerate, rational_rank, subsets};
use gridpos_core::geom::enumerate::count_flat_subsets;
use gridpos_core::geom::format::{parse_any, write_point_set};
use gridpos_core::geom::{affine_rank, classify_tuple, lies_on_flat, LatticePoint, TupleClass};
use gridpos_core::{Budget, Point, Points};
use proptest::prelude::*;
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn point(d: usize, lo: i64, hi: i64) -> impl Strategy<Value = Point> {
    prop::collection::vec(lo..=hi, d).prop_map(Point::new)
}

fn points(d: usize, max: usize) -> impl Strategy<Value = Vec<Point>> {
    prop::collection::vec(point(d, -6, 6), 1..=max)
}

fn dim_and_points() -> impl Strategy<Value = (usize, Vec<Point>)> {
    (1usize..=4).prop_flat_map(|d| (Just(d), points(d, 6)))
}

proptest! {
    #[test]
    fn rank_matches_rational_elimination((_d, pts) in dim_and_points()) {
        prop_assert_eq!(affine_rank(&pts).unwrap(), rational_rank(&pts));
    }

    #[test]
    fn rank_is_translation_invariant((d, pts) in dim_and_points(), shift in prop::collection::vec(-50i64..=50, 4)) {
        let v = Point::new(shift[..d].to_vec());
        let moved: Vec<Point> = pts.iter().map(|p| p.checked_add(&v).unwrap()).collect();
        prop_assert_eq!(affine_rank(&pts).unwrap(), affine_rank(&moved).unwrap());
    }

    #[test]
    fn rank_is_permutation_invariant((_d, pts) in dim_and_points(), seed in any::<u64>()) {
        let mut shuffled = pts.clone();
        shuffled.shuffle(&mut ChaCha8Rng::seed_from_u64(seed));
        prop_assert_eq!(affine_rank(&pts).unwrap(), affine_rank(&shuffled).unwrap());
    }

    #[test]
    fn rank_is_monotone((_d, pts) in dim_and_points(), cut in 1usize..6) {
        let cut = cut.min(pts.len());
        let r_sub = affine_rank(&pts[..cut]).unwrap();
        let r_all = affine_rank(&pts).unwrap();
        prop_assert!(r_sub <= r_all);
        prop_assert!(r_all <= pts.len() - 1);
    }

    #[test]
    fn full_rank_iff_affinely_independent((_d, pts) in dim_and_points()) {
        let r = affine_rank(&pts).unwrap();
        let independent = minor_rank(&pts) == pts.len() - 1;
        prop_assert_eq!(r == pts.len() - 1, independent);
    }

    #[test]
    fn rank_is_scalar_independent((_d, pts) in dim_and_points()) {
        let narrow: Vec<LatticePoint<i32>> = pts
            .iter()
            .map(|p| LatticePoint::new(p.coords().iter().map(|&c| c as i32).collect()))
            .collect();
        let wide: Vec<LatticePoint<i128>> = pts
            .iter()
            .map(|p| LatticePoint::new(p.coords().iter().map(|&c| c as i128).collect()))
            .collect();
        let r = affine_rank(&pts).unwrap();
        prop_assert_eq!(affine_rank(&narrow).unwrap(), r);
        prop_assert_eq!(affine_rank(&wide).unwrap(), r);
    }

    #[test]
    fn lies_on_flat_agrees_with_rank((_d, pts) in dim_and_points(), k in 0usize..4) {
        prop_assert_eq!(lies_on_flat(&pts, k).unwrap(), minor_rank(&pts) <= k);
    }
}

fn distinct_tuple(rng: &mut ChaCha8Rng, d: usize, size: usize, side: i64) -> Vec<Point> {
    let mut t: Vec<Point> = Vec::with_capacity(size);
    while t.len() < size {
        let p = Point::new((0..d).map(|_| rng.gen_range(1..=side)).collect());
        if !t.contains(&p) {
            t.push(p);
        }
    }
    t
}

/// Tuples forced onto a k-flat by taking integer combinations of k+1 base
/// points, so the flat case is exercised often.
fn flat_tuple(rng: &mut ChaCha8Rng, d: usize, k: usize) -> Option<Vec<Point>> {
    let base = distinct_tuple(rng, d, k + 1, 4);
    let mut t = base.clone();
    for _ in 0..100 {
        if t.len() == k + 2 {
            return Some(t);
        }
        let w: Vec<i64> = (0..k).map(|_| rng.gen_range(-2..=2)).collect();
        let anchor = &base[0];
        let mut p = anchor.clone();
        for (i, &c) in w.iter().enumerate() {
            let dir = base[i + 1].checked_sub(anchor).unwrap();
            p = p.checked_add(&dir.checked_scale(c).unwrap()).unwrap();
        }
        if !t.contains(&p) {
            t.push(p);
        }
    }
    None
}

#[test]
fn reduction_matches_full_definition() {
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    for k in [2usize, 4] {
        for d in 2..=4 {
            let mut seen = [0usize; 3];
            for trial in 0..1500 {
                let t = if trial % 2 == 0 {
                    match flat_tuple(&mut rng, d, k) {
                        Some(t) => t,
                        None => continue,
                    }
                } else {
                    distinct_tuple(&mut rng, d, k + 2, 3)
                };
                let class = classify_tuple(&t, k).unwrap();
                let on_flat = minor_rank(&t) <= k;
                let nondeg = naive_nondegenerate(&t, k, minor_rank);
                match &class {
                    TupleClass::OffFlat => {
                        assert!(!on_flat, "{t:?}");
                        seen[0] += 1;
                    }
                    TupleClass::NonDegenerate => {
                        assert!(nondeg, "{t:?}");
                        seen[1] += 1;
                    }
                    TupleClass::Degenerate { witness } => {
                        assert!(on_flat && !nondeg, "{t:?}");
                        let j = witness.len();
                        assert!((3..=k + 1).contains(&j));
                        assert!(minor_rank(witness) <= j - 2);
                        assert!(witness.iter().all(|w| t.contains(w)));
                        seen[2] += 1;
                    }
                }
            }
            assert!(seen[2] > 0, "k={k} d={d} {seen:?}");
            assert_eq!(seen[1] > 0, d >= k, "k={k} d={d} {seen:?}");
            assert_eq!(seen[0] > 0, d > k, "k={k} d={d} {seen:?}");
        }
    }
}

#[test]
fn classification_matches_rational_oracle() {
    let mut rng = ChaCha8Rng::seed_from_u64(12);
    for d in 2..=4 {
        for k in 1..d {
            for trial in 0..1000 {
                let t = if trial % 2 == 0 {
                    flat_tuple(&mut rng, d, k).unwrap_or_else(|| distinct_tuple(&mut rng, d, k + 2, 3))
                } else {
                    distinct_tuple(&mut rng, d, k + 2, 3)
                };
                let class = classify_tuple(&t, k).unwrap();
                let expect_off = rational_rank(&t) > k;
                let expect_nondeg = naive_nondegenerate(&t, k, rational_rank);
                assert_eq!(matches!(class, TupleClass::OffFlat), expect_off, "{t:?}");
                assert_eq!(class.is_nondegenerate(), expect_nondeg, "{t:?}");
            }
        }
    }
}

#[test]
fn witness_is_smallest_dependent_subset() {
    let t: Vec<Point> = [[1, 1, 1], [2, 2, 2], [3, 3, 3], [1, 2, 1], [1, 1, 2], [2, 1, 1]]
        .into_iter()
        .map(Point::from)
        .collect();
    for (k, len) in [(4, 6), (2, 4)] {
        let TupleClass::Degenerate { witness } = classify_tuple(&t[..len], k).unwrap() else {
            panic!("expected degenerate");
        };
        assert_eq!(witness, t[..3].to_vec());
    }
}

#[test]
fn flat_subset_count_matches_brute_force() {
    let mut rng = ChaCha8Rng::seed_from_u64(13);
    for _ in 0..30 {
        let d = rng.gen_range(2..=3);
        let n = rng.gen_range(8..=14);
        let pts = distinct_tuple(&mut rng, d, n, 4);
        let set = Points::new(d, 4, pts.clone()).unwrap();
        for (size, max_rank) in [(3, 1), (4, 2), (4, 1)] {
            let got = count_flat_subsets(set.points(), size, max_rank, &Budget::unlimited()).unwrap();
            let want = subsets(set.len(), size)
                .iter()
                .filter(|s| {
                    let sub: Vec<Point> = s.iter().map(|&i| set.points()[i].clone()).collect();
                    minor_rank(&sub) <= max_rank
                })
                .count() as u64;
            assert_eq!(got, want);
        }
    }
}

#[test]
fn point_set_files_round_trip() {
    let canonical = "2 3\n1 1\n1 3\n2 2\n3 1\n";
    let parsed = parse_any::<i64>(canonical).unwrap();
    assert!(parsed.warnings.is_empty());
    assert_eq!(write_point_set(&parsed.set), canonical);

    let commented = "# a comment\n2 3\n\n1 1\n# another\n2 2\n";
    assert_eq!(write_point_set(&parse_any::<i64>(commented).unwrap().set), "2 3\n1 1\n2 2\n");

    let shuffled = "2 3\n2 2\n1 1\n";
    let parsed = parse_any::<i64>(shuffled).unwrap();
    assert_eq!(parsed.warnings.len(), 1);
    assert_eq!(write_point_set(&parsed.set), "2 3\n1 1\n2 2\n");

    let err = parse_any::<i64>("2 3\n1 1\n1 4\n").unwrap_err().to_string();
    assert!(err.contains("line 3"), "{err}");
    assert!(parse_any::<i64>("2 3\n1\n").is_err());
}

#[test]
fn generic_point_sets_round_trip() {
    let parsed = parse_any::<i32>("3 5\n1 2 3\n5 5 5\n").unwrap();
    assert_eq!(write_point_set(&parsed.set), "3 5\n1 2 3\n5 5 5\n");
    let ints = parse_any::<i64>("4\n1\n9\n").unwrap();
    assert_eq!(ints.set.dim(), 1);
    assert_eq!(ints.set.len(), 3);
}
