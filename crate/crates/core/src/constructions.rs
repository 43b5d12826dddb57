//! Explicit and random point sets: the modular moment curve and the
//! random-sampling-with-deletion construction.

use num_bigint::{BigInt, BigUint};
use num_rational::BigRational;
use num_traits::{One, ToPrimitive, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

use crate::budget::{binomial, Budget};
use crate::error::{Error, Result};
use crate::exact::{big_pow, ratio_to_f64, serialize_ratio};
use crate::geom::enumerate::{count_flat_subsets, first_flat_subset, fold_flat_subsets};
use crate::{Point, Points};

pub fn is_prime(p: u64) -> bool {
    if p < 2 {
        return false;
    }
    let mut q = 2u64;
    while q * q <= p {
        if p % q == 0 {
            return false;
        }
        q += 1;
    }
    true
}

/// `{(t, t^2 mod p, ..., t^d mod p) + (1, ..., 1) : t in Z_p}` inside `[p]^d`.
pub fn moment_curve(d: usize, p: u64) -> Result<Points> {
    if d == 0 {
        return Err(Error::InvalidConfig("dimension must be positive".into()));
    }
    if !is_prime(p) {
        return Err(Error::NotPrime(p));
    }
    let pts = (0..p)
        .map(|t| {
            let mut c = Vec::with_capacity(d);
            let mut pow = 1u128;
            for _ in 0..d {
                pow = pow * t as u128 % p as u128;
                c.push(pow as i64 + 1);
            }
            Point::new(c)
        })
        .collect();
    Points::new(d, p, pts)
}

/// Number of `size`-subsets of `[n]^d` with affine rank at most `r`.
pub fn count_flat_tuples(n: u64, d: usize, r: usize, size: usize, budget: &Budget) -> Result<u64> {
    let total = (n as u128).pow(d as u32);
    if size <= r + 1 {
        let c = binomial(total as u64, size as u64);
        return c.to_u64().ok_or(Error::ArithmeticOverflow);
    }
    let grid = Points::full_grid(d, n)?;
    count_flat_subsets(grid.points(), size, r, budget)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum C6Mode {
    Exact,
    Estimate,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Probability {
    Fixed(BigRational),
    Auto,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DeletionConfig {
    pub d: usize,
    pub r: usize,
    pub s: usize,
    pub n: u64,
    pub p: Probability,
    pub c6_mode: C6Mode,
    pub seed: u64,
    pub trials: usize,
    /// Grid side used for the tuple count in `Estimate` mode; by default the
    /// largest side whose `(r+1)`-subsets number at most ten million.
    pub estimate_side: Option<u64>,
}

impl DeletionConfig {
    pub fn new(d: usize, r: usize, s: usize, n: u64) -> Self {
        DeletionConfig {
            d,
            r,
            s,
            n,
            p: Probability::Auto,
            c6_mode: C6Mode::Exact,
            seed: 0,
            trials: 1,
            estimate_side: None,
        }
    }

    pub fn validate(&self) -> Result<()> {
        if self.r == 0 || self.s < 2 || self.d <= self.r || self.n == 0 || self.trials == 0 {
            return Err(Error::InvalidConfig(format!(
                "deletion needs r >= 1, s >= 2, d > r, n >= 1 and trials >= 1 (got d={}, r={}, s={}, n={}, trials={})",
                self.d, self.r, self.s, self.n, self.trials
            )));
        }
        if let Probability::Fixed(p) = &self.p {
            if *p <= BigRational::zero() || *p > BigRational::one() {
                return Err(Error::ProbabilityOutOfRange);
            }
        }
        Ok(())
    }

    /// `(r+1) d + (s-1) r`.
    pub fn count_exponent(&self) -> u32 {
        ((self.r + 1) * self.d + (self.s - 1) * self.r) as u32
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct DeletionReport {
    pub trial: usize,
    pub output: Points,
    pub sampled_size: usize,
    pub violations_found: u64,
    pub deleted: usize,
    pub final_size: usize,
    /// `p n^d - c6 p^(r+s) n^((r+1)d+(s-1)r)`.
    #[serde(serialize_with = "serialize_ratio")]
    pub expected_size_bound: BigRational,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct DeletionRun {
    pub d: usize,
    pub r: usize,
    pub s: usize,
    pub n: u64,
    pub seed: u64,
    pub c6_mode: C6Mode,
    #[serde(serialize_with = "serialize_ratio")]
    pub p: BigRational,
    pub p_clamped: bool,
    /// Flat `(r+s)`-tuple count and the grid side it was taken at.
    pub tuple_count: u64,
    pub count_side: u64,
    #[serde(serialize_with = "serialize_ratio")]
    pub c6: BigRational,
    pub trials: Vec<DeletionReport>,
    #[serde(serialize_with = "serialize_ratio")]
    pub mean_final_size: BigRational,
    /// Unbiased sample variance of the final sizes (zero for one trial).
    #[serde(serialize_with = "serialize_ratio")]
    pub final_size_variance: BigRational,
}

impl DeletionRun {
    pub fn standard_error(&self) -> f64 {
        (ratio_to_f64(&self.final_size_variance) / self.trials.len() as f64).sqrt()
    }
}

const AUTO_P_BITS: u32 = 32;

fn big(x: impl Into<BigInt>) -> BigRational {
    BigRational::from_integer(x.into())
}

/// The automatic sampling probability, rounded down to a multiple of
/// `2^-32` and capped at `1/2`. With `c6 = count / m^E` the formula
/// `p = (2 c6)^(-1/(r+s-1)) n^(-r(d+s-1)/(r+s-1))` becomes
/// `p^(r+s-1) = m^E / (2 count n^(r(d+s-1)))`.
pub fn auto_probability(cfg: &DeletionConfig, count: u64, count_side: u64) -> (BigRational, bool) {
    let half = BigRational::new(BigInt::one(), BigInt::from(2));
    if count == 0 {
        return (half, true);
    }
    let m = (cfg.r + cfg.s - 1) as u32;
    let q = BigRational::new(
        BigInt::from(big_pow(count_side, cfg.count_exponent())),
        BigInt::from(2u32)
            * BigInt::from(count)
            * BigInt::from(big_pow(cfg.n, (cfg.r * (cfg.d + cfg.s - 1)) as u32)),
    );
    if q >= num_traits::pow(half.clone(), m as usize) {
        return (half, true);
    }
    // largest a with (a / 2^32)^m <= q
    let num = q.numer().to_biguint().expect("positive") << (AUTO_P_BITS * m) as usize;
    let den = q.denom().to_biguint().expect("positive");
    let fits = |a: u64| num_traits::pow(BigUint::from(a), m as usize) * &den <= num;
    let guess = ratio_to_f64(&q).powf(1.0 / m as f64) * (1u64 << AUTO_P_BITS) as f64;
    let mut a = if guess.is_finite() { guess as u64 } else { 0 };
    while a > 0 && !fits(a) {
        a -= 1;
    }
    while fits(a + 1) {
        a += 1;
    }
    if a == 0 {
        a = 1;
    }
    (BigRational::new(BigInt::from(a), BigInt::one() << AUTO_P_BITS as usize), false)
}

fn default_estimate_side(cfg: &DeletionConfig) -> u64 {
    let mut side = 1;
    while side < cfg.n && binomial(((side + 1) as u128).pow(cfg.d as u32) as u64, cfg.r as u64 + 1) <= 10_000_000 {
        side += 1;
    }
    side
}

pub fn deletion_construct(cfg: &DeletionConfig, budget: &Budget) -> Result<DeletionRun> {
    cfg.validate()?;
    let size = cfg.r + cfg.s;
    let count_side = match cfg.c6_mode {
        C6Mode::Exact => cfg.n,
        C6Mode::Estimate => cfg.estimate_side.unwrap_or_else(|| default_estimate_side(cfg)).min(cfg.n),
    };
    let count = count_flat_tuples(count_side, cfg.d, cfg.r, size, budget)?;
    let e = cfg.count_exponent();
    let c6 = BigRational::new(BigInt::from(count), BigInt::from(big_pow(count_side, e)));
    let (p, p_clamped) = match &cfg.p {
        Probability::Fixed(p) => (p.clone(), false),
        Probability::Auto => auto_probability(cfg, count, count_side),
    };
    if p_clamped {
        log::warn!("automatic p exceeds 1/2 at n = {}; clamped to 1/2", cfg.n);
    }
    let num = p.numer().to_u64().ok_or(Error::ProbabilityOutOfRange)?;
    let den = p.denom().to_u64().ok_or(Error::ProbabilityOutOfRange)?;

    let nd = big(big_pow(cfg.n, cfg.d as u32));
    let flat_total = &c6 * big(big_pow(cfg.n, e));
    let expected_size_bound = &p * nd - num_traits::pow(p.clone(), size) * flat_total;

    let grid = Points::full_grid(cfg.d, cfg.n)?;
    let run_trial = |trial: usize| -> Result<DeletionReport> {
        let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
        rng.set_stream(trial as u64);
        let sample: Vec<Point> = grid
            .iter()
            .filter(|_| rng.gen_range(0..den) < num)
            .cloned()
            .collect();
        let sampled = grid.with_points(sample)?;
        let (output, violations, deleted) = delete_flat_tuples(&sampled, cfg.r, size, budget)?;
        assert!(
            first_flat_subset(output.points(), size, cfg.r, budget)?.is_none(),
            "deletion left {size} points on an {}-flat",
            cfg.r
        );
        assert!(deleted as u64 <= violations);
        Ok(DeletionReport {
            trial,
            sampled_size: sampled.len(),
            violations_found: violations,
            deleted,
            final_size: output.len(),
            output,
            expected_size_bound: expected_size_bound.clone(),
        })
    };
    let trials: Vec<DeletionReport> = (0..cfg.trials)
        .into_par_iter()
        .map(run_trial)
        .collect::<Result<_>>()?;

    let t = trials.len() as i64;
    let sum: i64 = trials.iter().map(|r| r.final_size as i64).sum();
    let mean = BigRational::new(sum.into(), t.into());
    let variance = if t > 1 {
        let ss = trials
            .iter()
            .map(|r| {
                let dev = big(r.final_size as i64) - &mean;
                &dev * &dev
            })
            .fold(BigRational::zero(), |a, b| a + b);
        ss / big(t - 1)
    } else {
        BigRational::zero()
    };
    Ok(DeletionRun {
        d: cfg.d,
        r: cfg.r,
        s: cfg.s,
        n: cfg.n,
        seed: cfg.seed,
        c6_mode: cfg.c6_mode,
        p,
        p_clamped,
        tuple_count: count,
        count_side,
        c6,
        trials,
        mean_final_size: mean,
        final_size_variance: variance,
    })
}

/// Removes one point from every `size`-subset of rank at most `r`. Tuples are
/// taken in lexicographic order; an unresolved tuple loses the point lying on
/// the most unresolved tuples (smallest index on ties). Returns the remaining
/// set, the number of flat tuples and the number of deleted points.
pub fn delete_flat_tuples(v: &Points, r: usize, size: usize, budget: &Budget) -> Result<(Points, u64, usize)> {
    let tuples: Vec<Vec<usize>> = fold_flat_subsets(v.points(), size, r, budget, Vec::new, |acc, idx| {
        acc.push(idx.to_vec());
        Ok(())
    })?
    .into_iter()
    .flatten()
    .collect();
    let mut on: Vec<Vec<usize>> = vec![Vec::new(); v.len()];
    for (t, tuple) in tuples.iter().enumerate() {
        for &i in tuple {
            on[i].push(t);
        }
    }
    let mut live: Vec<usize> = on.iter().map(Vec::len).collect();
    let mut resolved = vec![false; tuples.len()];
    let mut removed = vec![false; v.len()];
    for t in 0..tuples.len() {
        if resolved[t] {
            continue;
        }
        let victim = *tuples[t]
            .iter()
            .max_by_key(|&&i| (live[i], std::cmp::Reverse(i)))
            .expect("tuples are non-empty");
        removed[victim] = true;
        for &u in &on[victim] {
            if !resolved[u] {
                resolved[u] = true;
                for &i in &tuples[u] {
                    live[i] -= 1;
                }
            }
        }
    }
    let keep: Vec<usize> = (0..v.len()).filter(|&i| !removed[i]).collect();
    let deleted = v.len() - keep.len();
    Ok((v.select(&keep), tuples.len() as u64, deleted))
}
