//! Supersaturation counting for non-degenerate flat tuples.
//!
//! Two `r`-subsets with the same coordinate sum span, together, at most a
//! `(2r-2)`-flat. Bucketing the `r`-subsets of `V` by sum therefore yields
//! `(k+2)`-point configurations on `k`-flats for `k = 2r - 2` without any
//! rank computation. The pair-based census follows that route and reports a
//! lower bound on the number of non-degenerate tuples; the exhaustive census
//! enumerates every flat `(k+2)`-subset and is the exact count.

mod degree;
mod trend;

use std::collections::{BTreeMap, HashSet};
use std::ops::ControlFlow;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::budget::{binomial, Budget};
use crate::combin::{for_each_combination, sorted_intersection_len};
use crate::error::{Error, Result};
use crate::geom::{
    affine_rank_of, classify_tuple, enumerate::fold_flat_subsets, has_dependent_facet, point_sum,
    LatticePoint, TupleClass,
};
use crate::{Point, Points};

pub use degree::{
    compute_delta, container_params, degree_bound, degree_profile, ContainerParams, DegreeBound,
    DegreeProfile,
};
pub use trend::{log_log_slope, supersaturation_trend, TrendRow, TrendTable};

/// The `r`-subsets of a point set bucketed by coordinate sum. Subsets are
/// stored as increasing index vectors into the point set; buckets iterate in
/// lexicographic order of their sum vector.
#[derive(Clone, Debug)]
pub struct SumIndex {
    r: usize,
    buckets: BTreeMap<Point, Vec<Vec<usize>>>,
}

impl SumIndex {
    pub fn r(&self) -> usize {
        self.r
    }

    pub fn buckets(&self) -> &BTreeMap<Point, Vec<Vec<usize>>> {
        &self.buckets
    }

    pub fn bucket(&self, sum: &Point) -> &[Vec<usize>] {
        self.buckets.get(sum).map_or(&[], Vec::as_slice)
    }

    pub fn num_subsets(&self) -> u64 {
        self.buckets.values().map(|b| b.len() as u64).sum()
    }

    pub fn num_buckets(&self) -> usize {
        self.buckets.len()
    }
}

pub fn build_sum_index(v: &Points, r: usize, budget: &Budget) -> Result<SumIndex> {
    if r == 0 {
        return Err(Error::InvalidConfig("r must be positive".into()));
    }
    if r > v.len() {
        return Err(Error::ArityTooLarge(r, v.len()));
    }
    budget.require(binomial(v.len() as u64, r as u64))?;
    let pts = v.points();
    let mut buckets: BTreeMap<Point, Vec<Vec<usize>>> = BTreeMap::new();
    let mut err = None;
    let _ = for_each_combination(pts.len(), r, |idx| {
        match point_sum(v.dim(), idx.iter().map(|&i| &pts[i])) {
            Ok(s) => {
                buckets.entry(s).or_default().push(idx.to_vec());
                ControlFlow::Continue(())
            }
            Err(e) => {
                err = Some(e);
                ControlFlow::Break(())
            }
        }
    });
    if let Some(e) = err {
        return Err(e);
    }
    budget.charge(binomial(v.len() as u64, r as u64) as u64)?;
    Ok(SumIndex { r, buckets })
}

/// Number of unordered pairs of distinct `r`-subsets with equal sum.
pub fn count_colliding_pairs(index: &SumIndex) -> u64 {
    index
        .buckets
        .values()
        .map(|b| {
            let m = b.len() as u64;
            m * m.saturating_sub(1) / 2
        })
        .sum()
}

/// Exact check of the convexity bound `sum_v C(b_v, 2) >= B * C(M/B, 2)`
/// where `M` is the number of subsets and `B` the number of non-empty
/// buckets, in the cleared form `2B * sum_v C(b_v, 2) >= M (M - B)`.
pub fn jensen_bound_holds(index: &SumIndex) -> bool {
    let b = index.num_buckets() as i128;
    if b == 0 {
        return true;
    }
    let m = index.num_subsets() as i128;
    let lhs = 2 * b * count_colliding_pairs(index) as i128;
    lhs >= m * (m - b)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum PairClass {
    Good,
    Bad,
}

/// Good iff the two equal-sum `r`-subsets are disjoint and their union is a
/// non-degenerate `(k+2)`-tuple, with `r = k/2 + 1`.
///
/// Every bad pair's union is asserted to lie on a `(k-1)`-flat.
pub fn classify_pair(t1: &[Point], t2: &[Point], k: usize) -> Result<PairClass> {
    if k == 0 || k % 2 == 1 {
        return Err(Error::OddKInPairMode(k));
    }
    let r = k / 2 + 1;
    for t in [t1, t2] {
        if t.len() != r {
            return Err(Error::WrongArity(r, t.len()));
        }
    }
    let (mut a, mut b) = (t1.to_vec(), t2.to_vec());
    a.sort();
    b.sort();
    for t in [&a, &b] {
        if t.windows(2).any(|w| w[0] == w[1]) {
            return Err(Error::DuplicatePoints);
        }
    }
    if a == b {
        return Err(Error::InvalidConfig("the two subsets must differ".into()));
    }
    let dim = a[0].dim();
    if point_sum(dim, &a)? != point_sum(dim, &b)? {
        return Err(Error::SumMismatch);
    }
    let shared = sorted_intersection_len(&a, &b);
    let mut union: Vec<Point> = a.into_iter().chain(b).collect();
    union.sort();
    union.dedup();
    let class = if shared == 0 && classify_tuple(&union, k)? == TupleClass::NonDegenerate {
        PairClass::Good
    } else {
        PairClass::Bad
    };
    if class == PairClass::Bad {
        let rank = affine_rank_of(&union)?;
        assert!(
            rank < k,
            "bad pair spans a {rank}-flat, expected at most a {}-flat",
            k - 1
        );
    }
    Ok(class)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum CensusMode {
    PairBased,
    Exhaustive,
    /// Both counts, with the cross-check `pairwise_lower_bound <= nondegenerate_tuples`.
    Both,
}

/// Counts for one census run. Fields a mode does not compute stay `None`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CensusReport {
    pub d: usize,
    pub n: u64,
    pub k: usize,
    pub num_points: usize,
    /// Subset size of the sum buckets, `k/2 + 1`.
    pub r: Option<usize>,
    pub colliding_pairs: Option<u64>,
    pub good_pairs: Option<u64>,
    pub bad_pairs: Option<u64>,
    /// Distinct unions over good pairs.
    pub pairwise_lower_bound: Option<u64>,
    pub nondegenerate_tuples: Option<u64>,
    pub jensen_bound_holds: Option<bool>,
}

struct PairCounts {
    colliding: u64,
    good: u64,
    bad: u64,
    distinct: u64,
    jensen: bool,
}

fn pair_census(v: &Points, k: usize, budget: &Budget) -> Result<PairCounts> {
    let r = k / 2 + 1;
    let index = build_sum_index(v, r, budget)?;
    let pts = v.points();
    let buckets: Vec<&Vec<Vec<usize>>> = index.buckets.values().filter(|b| b.len() > 1).collect();
    let per_bucket = buckets
        .par_iter()
        .map(|bucket| -> Result<(u64, u64, u64)> {
            let (mut good, mut bad) = (0u64, 0u64);
            let mut unions: HashSet<Vec<usize>> = HashSet::new();
            let m = bucket.len() as u64;
            budget.charge(m * (m - 1) / 2)?;
            for i in 0..bucket.len() {
                for j in i + 1..bucket.len() {
                    let (a, b) = (&bucket[i], &bucket[j]);
                    let mut union: Vec<usize> = a.iter().chain(b).copied().collect();
                    union.sort_unstable();
                    union.dedup();
                    let refs: Vec<&Point> = union.iter().map(|&x| &pts[x]).collect();
                    let is_good = union.len() == k + 2 && !has_dependent_facet(&refs, k)?;
                    if is_good {
                        good += 1;
                        unions.insert(union);
                    } else {
                        bad += 1;
                        let rank = affine_rank_of(refs.iter().copied())?;
                        assert!(rank < k, "bad pair spans a {rank}-flat with k = {k}");
                    }
                }
            }
            Ok((good, bad, unions.len() as u64))
        })
        .collect::<Result<Vec<_>>>()?;
    // every split of a tuple into two equal-sum halves lands in the same
    // bucket (half the tuple's sum), so per-bucket dedup is global dedup
    let (good, bad, distinct) = per_bucket
        .into_iter()
        .fold((0, 0, 0), |acc, x| (acc.0 + x.0, acc.1 + x.1, acc.2 + x.2));
    Ok(PairCounts {
        colliding: count_colliding_pairs(&index),
        good,
        bad,
        distinct,
        jensen: jensen_bound_holds(&index),
    })
}

/// Index vectors of every non-degenerate `(k+2)`-subset of `V` lying on a
/// `k`-flat, in lexicographic order.
pub fn nondegenerate_tuples(v: &Points, k: usize, budget: &Budget) -> Result<Vec<Vec<usize>>> {
    let size = k + 2;
    if v.len() < size {
        return Ok(Vec::new());
    }
    budget.require(binomial(v.len() as u64, size as u64))?;
    let pts = v.points();
    let parts = fold_flat_subsets(pts, size, k, budget, Vec::new, |acc: &mut Vec<Vec<usize>>, idx| {
        let refs: Vec<&LatticePoint> = idx.iter().map(|&i| &pts[i]).collect();
        if !has_dependent_facet(&refs, k)? {
            acc.push(idx.to_vec());
        }
        Ok(())
    })?;
    Ok(parts.into_iter().flatten().collect())
}

/// Exact number of non-degenerate `(k+2)`-subsets on a `k`-flat.
pub fn count_nondegenerate(v: &Points, k: usize, budget: &Budget) -> Result<u64> {
    let size = k + 2;
    if v.len() < size {
        return Ok(0);
    }
    budget.require(binomial(v.len() as u64, size as u64))?;
    let pts = v.points();
    let parts = fold_flat_subsets(pts, size, k, budget, || 0u64, |acc, idx| {
        let mut refs: [&LatticePoint; 16] = [&pts[0]; 16];
        for (slot, &i) in refs.iter_mut().zip(idx) {
            *slot = &pts[i];
        }
        if !has_dependent_facet(&refs[..size], k)? {
            *acc += 1;
        }
        Ok(())
    })?;
    Ok(parts.into_iter().sum())
}

pub fn census(v: &Points, k: usize, mode: CensusMode, budget: &Budget) -> Result<CensusReport> {
    if k == 0 {
        return Err(Error::InvalidConfig("k must be positive".into()));
    }
    if k + 2 > 16 {
        return Err(Error::InvalidConfig("k + 2 must not exceed 16".into()));
    }
    let pairs = matches!(mode, CensusMode::PairBased | CensusMode::Both);
    let exhaustive = matches!(mode, CensusMode::Exhaustive | CensusMode::Both);
    if pairs && k % 2 == 1 {
        return Err(Error::OddKInPairMode(k));
    }
    let mut report = CensusReport {
        d: v.dim(),
        n: v.side(),
        k,
        num_points: v.len(),
        r: None,
        colliding_pairs: None,
        good_pairs: None,
        bad_pairs: None,
        pairwise_lower_bound: None,
        nondegenerate_tuples: None,
        jensen_bound_holds: None,
    };
    if pairs {
        report.r = Some(k / 2 + 1);
        let c = if v.len() < k + 2 {
            PairCounts {
                colliding: 0,
                good: 0,
                bad: 0,
                distinct: 0,
                jensen: true,
            }
        } else {
            pair_census(v, k, budget)?
        };
        assert!(c.jensen, "sum-bucket collision count violates the convexity bound");
        report.colliding_pairs = Some(c.colliding);
        report.good_pairs = Some(c.good);
        report.bad_pairs = Some(c.bad);
        report.pairwise_lower_bound = Some(c.distinct);
        report.jensen_bound_holds = Some(c.jensen);
    }
    if exhaustive {
        report.nondegenerate_tuples = Some(count_nondegenerate(v, k, budget)?);
    }
    if let (Some(lb), Some(exact)) = (report.pairwise_lower_bound, report.nondegenerate_tuples) {
        assert!(lb <= exact, "pair-based lower bound {lb} exceeds exact count {exact}");
    }
    Ok(report)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn grid(d: usize, n: u64) -> Points {
        Points::full_grid(d, n).unwrap()
    }

    fn p(c: [i64; 2]) -> Point {
        c.into()
    }

    #[test]
    fn sum_index_of_2x2() {
        let v = grid(2, 2);
        let idx = build_sum_index(&v, 2, &Budget::unlimited()).unwrap();
        assert_eq!(idx.num_subsets(), 6);
        assert_eq!(idx.num_buckets(), 5);
        let b: Vec<Vec<Point>> = idx
            .bucket(&p([3, 3]))
            .iter()
            .map(|s| s.iter().map(|&i| v.points()[i].clone()).collect())
            .collect();
        assert_eq!(b, vec![vec![p([1, 1]), p([2, 2])], vec![p([1, 2]), p([2, 1])]]);
        assert_eq!(count_colliding_pairs(&idx), 1);
        assert!(jensen_bound_holds(&idx));
    }

    #[test]
    fn singleton_buckets_for_r1() {
        let v = grid(2, 3);
        let idx = build_sum_index(&v, 1, &Budget::unlimited()).unwrap();
        assert!(idx.buckets().values().all(|b| b.len() == 1));
        assert_eq!(count_colliding_pairs(&idx), 0);
        let v = Points::new(2, 3, vec![p([1, 1]), p([1, 3]), p([2, 2])]).unwrap();
        let idx = build_sum_index(&v, 1, &Budget::unlimited()).unwrap();
        assert_eq!(count_colliding_pairs(&idx), 0);
    }

    #[test]
    fn two_point_index() {
        let v = Points::new(2, 2, vec![p([1, 1]), p([2, 2])]).unwrap();
        let idx = build_sum_index(&v, 2, &Budget::unlimited()).unwrap();
        assert_eq!(idx.num_buckets(), 1);
        assert_eq!(idx.bucket(&p([3, 3])).len(), 1);
        assert_eq!(
            build_sum_index(&v, 3, &Budget::unlimited()).unwrap_err(),
            Error::ArityTooLarge(3, 2)
        );
    }

    #[test]
    fn pair_classification() {
        let good = classify_pair(&[p([1, 1]), p([2, 2])], &[p([1, 2]), p([2, 1])], 2).unwrap();
        assert_eq!(good, PairClass::Good);
        let shared = classify_pair(&[p([1, 1]), p([3, 3])], &[p([1, 1]), p([3, 3])], 2);
        assert!(shared.is_err());
        // disjoint but all four points collinear
        let bad = classify_pair(&[p([1, 1]), p([4, 4])], &[p([2, 2]), p([3, 3])], 2).unwrap();
        assert_eq!(bad, PairClass::Bad);
        assert_eq!(
            classify_pair(&[p([1, 1]), p([2, 2])], &[p([1, 2]), p([2, 2])], 2).unwrap_err(),
            Error::SumMismatch
        );
        assert_eq!(
            classify_pair(&[p([1, 1])], &[p([1, 2]), p([2, 1])], 2).unwrap_err(),
            Error::WrongArity(2, 1)
        );
    }

    #[test]
    fn overlapping_pair_is_bad() {
        // r = 3 (k = 4): {a, b, c} and {a, d, e} with b + c = d + e
        let t1 = [p([1, 1]), p([1, 2]), p([3, 3])];
        let t2 = [p([1, 1]), p([2, 1]), p([2, 4])];
        assert_eq!(classify_pair(&t1, &t2, 4).unwrap(), PairClass::Bad);
    }

    #[test]
    fn census_of_2x2() {
        let r = census(&grid(2, 2), 2, CensusMode::Both, &Budget::unlimited()).unwrap();
        assert_eq!(r.nondegenerate_tuples, Some(1));
        assert_eq!(r.good_pairs, Some(1));
        assert_eq!(r.bad_pairs, Some(0));
        assert_eq!(r.colliding_pairs, Some(1));
        assert_eq!(r.pairwise_lower_bound, Some(1));
    }

    #[test]
    fn collinear_triples_of_3x3() {
        let r = census(&grid(2, 3), 1, CensusMode::Exhaustive, &Budget::unlimited()).unwrap();
        assert_eq!(r.nondegenerate_tuples, Some(8));
        assert_eq!(
            census(&grid(2, 3), 1, CensusMode::PairBased, &Budget::unlimited()).unwrap_err(),
            Error::OddKInPairMode(1)
        );
    }

    #[test]
    fn tiny_sets_count_zero() {
        let v = Points::new(2, 3, vec![p([1, 1]), p([2, 3])]).unwrap();
        let r = census(&v, 2, CensusMode::Both, &Budget::unlimited()).unwrap();
        assert_eq!(r.nondegenerate_tuples, Some(0));
        assert_eq!(r.colliding_pairs, Some(0));
        assert_eq!(r.pairwise_lower_bound, Some(0));
    }

    #[test]
    fn exhaustive_budget_is_checked_up_front() {
        let err = census(&grid(2, 6), 2, CensusMode::Exhaustive, &Budget::new(100)).unwrap_err();
        assert!(matches!(err, Error::BudgetExceeded { .. }));
    }

    #[test]
    fn tuple_listing_agrees_with_classify_tuple() {
        let v = grid(2, 3);
        let tuples = nondegenerate_tuples(&v, 2, &Budget::unlimited()).unwrap();
        let mut slow = 0;
        let _ = for_each_combination(v.len(), 4, |idx| {
            let t: Vec<Point> = idx.iter().map(|&i| v.points()[i].clone()).collect();
            if classify_tuple(&t, 2).unwrap().is_nondegenerate() {
                slow += 1;
            }
            ControlFlow::Continue(())
        });
        assert_eq!(tuples.len(), slow);
    }
}
