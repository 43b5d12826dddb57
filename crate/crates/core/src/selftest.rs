//! Quick invariant suite across all modules, run by `gridpos --selftest`.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::additive::{self, bg_check, check_cs, dissect, phi, sum_profile, verify_eq5};
use crate::budget::Budget;
use crate::census::{census, degree_profile, CensusMode};
use crate::constructions::{count_flat_tuples, deletion_construct, moment_curve, DeletionConfig};
use crate::error::Result;
use crate::exact::ratio;
use crate::geom::enumerate::first_flat_subset;
use crate::geom::{affine_rank, classify_tuple, TupleClass};
use crate::search::{greedy_general_position, max_grid_set, SearchConfig};
use crate::{Point, Points};

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Check {
    pub name: &'static str,
    pub passed: bool,
    pub detail: String,
}

fn line(xs: &[i64]) -> Result<Points> {
    let n = xs.iter().copied().max().unwrap_or(1) as u64;
    Points::new(1, n, xs.iter().map(|&x| Point::from([x])).collect())
}

type Case = (&'static str, fn(&Budget) -> Result<(bool, String)>);

const CASES: &[Case] = &[
    ("affine rank of collinear and spanning sets", |_| {
        let col = affine_rank(&[Point::from([1, 1]), Point::from([2, 2]), Point::from([3, 3])])?;
        let tri = affine_rank(&[Point::from([1, 1]), Point::from([2, 1]), Point::from([1, 2])])?;
        Ok((col == 1 && tri == 2, format!("ranks {col} and {tri}")))
    }),
    ("tuple classification", |_| {
        let t: Vec<Point> = [[1, 1], [2, 2], [3, 3], [1, 2]].into_iter().map(Point::from).collect();
        let c = classify_tuple(&t, 2)?;
        Ok((matches!(c, TupleClass::Degenerate { .. }), format!("{c:?}")))
    }),
    ("census known values", |b| {
        let lines = census(&Points::full_grid(2, 3)?, 1, CensusMode::Exhaustive, b)?;
        let quad = census(&Points::full_grid(2, 2)?, 2, CensusMode::Both, b)?;
        let ok = lines.nondegenerate_tuples == Some(8) && quad.nondegenerate_tuples == Some(1);
        Ok((ok, format!("{:?} {:?}", lines.nondegenerate_tuples, quad.nondegenerate_tuples)))
    }),
    ("pair lower bound below exhaustive count", |b| {
        let r = census(&Points::full_grid(3, 3)?, 2, CensusMode::Both, b)?;
        let ok = r.pairwise_lower_bound <= r.nondegenerate_tuples;
        Ok((ok, format!("{:?} <= {:?}", r.pairwise_lower_bound, r.nondegenerate_tuples)))
    }),
    ("degree bounds", |b| {
        let p = degree_profile(&Points::full_grid(3, 3)?, 2, b)?;
        Ok((p.bounds.iter().all(|x| x.holds), format!("{:?}", p.delta)))
    }),
    ("no-three-in-line values", |_| {
        let sizes: Vec<usize> = (2..=4)
            .map(|n| max_grid_set(&SearchConfig::new(2, 1, 3, n)).map(|r| r.size()))
            .collect::<Result<_>>()?;
        Ok((sizes == [4, 6, 8], format!("{sizes:?}")))
    }),
    ("greedy certificate", |b| {
        let (sub, cert) = greedy_general_position(&Points::full_grid(2, 3)?, 2, 2, b)?;
        Ok((cert.holds, format!("{} points, lhs {}", sub.len(), cert.lhs)))
    }),
    ("moment curves avoid hyperplanes", |b| {
        for p in [2, 3, 5, 7, 11, 13] {
            for d in [2, 3] {
                let c = moment_curve(d, p)?;
                if first_flat_subset(c.points(), d + 1, d - 1, b)?.is_some() {
                    return Ok((false, format!("d={d} p={p}")));
                }
            }
        }
        Ok((true, "p <= 13, d in {2,3}".into()))
    }),
    ("flat tuple counts", |b| {
        let c = count_flat_tuples(3, 2, 1, 3, b)?;
        Ok((c == 8, format!("{c}")))
    }),
    ("deletion output verified and reproducible", |b| {
        let mut cfg = DeletionConfig::new(2, 1, 3, 10);
        cfg.trials = 3;
        let a = deletion_construct(&cfg, b)?;
        let again = deletion_construct(&cfg, b)?;
        let sizes: Vec<usize> = a.trials.iter().map(|t| t.final_size).collect();
        Ok((a == again, format!("final sizes {sizes:?}")))
    }),
    ("B_2 examples", |b| {
        let yes = bg_check(&line(&[1, 2, 5, 11])?, 2, 1, b)?.holds;
        let no = bg_check(&line(&[1, 2, 3, 4])?, 2, 1, b)?.holds;
        Ok((yes && !no, format!("{yes} {no}")))
    }),
    ("two-coefficient family", |b| {
        let rep = verify_eq5(&line(&[1, 2, 5, 11])?, 1, Some(1), b)?;
        Ok((rep.holds, format!("M = {}", rep.m)))
    }),
    ("difference table mass and symmetry", |_| {
        let u: Vec<Point> = [0, 1, 4, 9].iter().map(|&x| Point::from([x])).collect();
        let t = phi(&u, &u)?;
        let sym = t.counts.iter().all(|(x, &c)| x.neg().map(|y| t.get(&y) == c).unwrap_or(false));
        Ok((t.total() == 16 && sym && t.get(&Point::from([0])) == 4, format!("{} entries", t.counts.len())))
    }),
    ("sumset lemma on random sets", |_| {
        let mut rng = ChaCha8Rng::seed_from_u64(0);
        for _ in 0..20 {
            let gen = |rng: &mut ChaCha8Rng| -> Vec<Point> {
                let m = rng.gen_range(1..12);
                (0..m).map(|_| Point::from([rng.gen_range(-15..15)])).collect()
            };
            let (u, t) = (gen(&mut rng), gen(&mut rng));
            let r = check_cs(&u, &t)?;
            if !r.holds {
                return Ok((false, format!("{u:?} {t:?}")));
            }
        }
        Ok((true, "20 instances".into()))
    }),
    ("dissection partitions the sums", |b| {
        let s = sum_profile(&line(&[1, 2, 5, 11, 20])?, 2, b)?;
        let ok = (1..6).all(|j| dissect(&s.sums(), j).map(|d| d.total() == s.num_sums()).unwrap_or(false));
        Ok((ok, format!("{} sums", s.num_sums())))
    }),
    ("multifold exponent for a(4,2,n)", |_| {
        let m = additive::multifold_bound_for_k(4, 2, None)?;
        Ok((m.exponent == ratio(16, 9), crate::exact::ratio_string(&m.exponent)))
    }),
];

/// Runs every check; a failing operation counts as a failed check.
pub fn selftest(budget: &Budget) -> Vec<Check> {
    CASES
        .iter()
        .map(|(name, f)| match f(budget) {
            Ok((passed, detail)) => Check { name, passed, detail },
            Err(e) => Check {
                name,
                passed: false,
                detail: e.to_string(),
            },
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn all_checks_pass() {
        for c in selftest(&Budget::default()) {
            assert!(c.passed, "{}: {}", c.name, c.detail);
        }
    }
}
