//! Degree profile of the hypergraph whose edges are the non-degenerate
//! `(k+2)`-tuples on `k`-flats, and the weighted degree functional used as
//! the container-lemma hypothesis.

use std::collections::{BTreeMap, HashMap};

use num_bigint::{BigInt, BigUint};
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use rayon::prelude::*;
use serde::Serialize;

use super::nondegenerate_tuples;
use crate::budget::Budget;
use crate::combin::combinations;
use crate::error::{Error, Result};
use crate::exact::{big_pow, serialize_biguint, serialize_ratio};
use crate::Points;

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct DegreeBound {
    pub ell: usize,
    pub delta: u64,
    /// `|V|^(k+1-ell) * n^k`, which equals `n^((k+1-ell)(d-gamma)+k)` for
    /// `|V| = n^(d-gamma)`.
    #[serde(serialize_with = "serialize_biguint")]
    pub bound: BigUint,
    pub holds: bool,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct DegreeProfile {
    pub k: usize,
    pub num_vertices: usize,
    pub side: u64,
    pub num_edges: u64,
    /// `ell -> Delta_ell` for `ell = 2..=k+2`.
    pub delta: BTreeMap<usize, u64>,
    pub bounds: Vec<DegreeBound>,
}

impl DegreeProfile {
    pub fn get(&self, ell: usize) -> u64 {
        self.delta.get(&ell).copied().unwrap_or(0)
    }
}

/// Upper bound on the degree of an `ell`-set: `|V|^(k+1-ell) * n^k`.
pub fn degree_bound(num_vertices: u64, side: u64, k: usize, ell: usize) -> BigUint {
    assert!(ell < k + 2, "the degree bound needs ell < k + 2");
    big_pow(num_vertices, (k + 1 - ell) as u32) * big_pow(side, k as u32)
}

const KEY_BITS: usize = 16;

fn pack(edge: &[u32], pos: &[usize]) -> u128 {
    pos.iter()
        .fold(0u128, |key, &p| (key << KEY_BITS) | edge[p] as u128)
}

/// Exact `Delta_ell` for every `ell` from 2 to `k+2`.
pub fn degree_profile(v: &Points, k: usize, budget: &Budget) -> Result<DegreeProfile> {
    if k == 0 {
        return Err(Error::InvalidConfig("k must be positive".into()));
    }
    if v.len() > 1 << KEY_BITS || (k + 1) * KEY_BITS > 128 {
        return Err(Error::InvalidConfig(format!(
            "degree profile supports at most {} points and k <= 7",
            1u32 << KEY_BITS
        )));
    }
    let edges: Vec<Vec<u32>> = nondegenerate_tuples(v, k, budget)?
        .into_iter()
        .map(|e| e.into_iter().map(|i| i as u32).collect())
        .collect();
    let mut delta: BTreeMap<usize, u64> = (2..=k + 1)
        .into_par_iter()
        .map(|ell| {
            let positions = combinations(k + 2, ell);
            let mut deg: HashMap<u128, u64> = HashMap::new();
            for e in &edges {
                for pos in &positions {
                    *deg.entry(pack(e, pos)).or_insert(0) += 1;
                }
            }
            (ell, deg.values().copied().max().unwrap_or(0))
        })
        .collect();
    delta.insert(k + 2, u64::from(!edges.is_empty()));
    debug_assert!(delta.values().zip(delta.values().skip(1)).all(|(a, b)| a >= b));

    let bounds: Vec<DegreeBound> = (2..k + 2)
        .map(|ell| {
            let bound = degree_bound(v.len() as u64, v.side(), k, ell);
            let d = delta[&ell];
            DegreeBound {
                ell,
                delta: d,
                holds: BigUint::from(d) <= bound,
                bound,
            }
        })
        .collect();
    for b in &bounds {
        assert!(b.holds, "Delta_{} = {} exceeds its bound {}", b.ell, b.delta, b.bound);
    }
    Ok(DegreeProfile {
        k,
        num_vertices: v.len(),
        side: v.side(),
        num_edges: edges.len() as u64,
        delta,
        bounds,
    })
}

fn pow2(e: usize) -> BigInt {
    BigInt::one() << e
}

fn choose2(m: usize) -> usize {
    m * m.saturating_sub(1) / 2
}

/// The container functional
/// `2^(C(k+2,2)-1) |V| / ((k+2) |E|) * sum_{ell=2}^{k+2} Delta_ell / (tau^(ell-1) 2^C(ell-1,2))`,
/// exactly.
pub fn compute_delta(
    profile: &DegreeProfile,
    num_vertices: u64,
    num_edges: u64,
    tau: &BigRational,
) -> Result<BigRational> {
    if num_edges == 0 {
        return Err(Error::ZeroEdges);
    }
    let half = BigRational::new(BigInt::one(), BigInt::from(2));
    if !tau.is_positive() || *tau >= half {
        return Err(Error::TauOutOfRange);
    }
    let k = profile.k;
    let prefactor = BigRational::new(
        pow2(choose2(k + 2) - 1) * BigInt::from(num_vertices),
        BigInt::from((k as u64 + 2) * num_edges),
    );
    let mut sum = BigRational::zero();
    for ell in 2..=k + 2 {
        let d = profile.get(ell);
        if d == 0 {
            continue;
        }
        let denom = num_traits::pow(tau.clone(), ell - 1)
            * BigRational::from_integer(pow2(choose2(ell - 1)));
        sum += BigRational::from_integer(BigInt::from(d)) / denom;
    }
    Ok(prefactor * sum)
}

/// Container-lemma hypotheses evaluated at one `(tau, epsilon)`.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ContainerParams {
    pub k: usize,
    /// `gamma` is kept as the pair `(|V|, n)` with `|V| = n^(d-gamma)`.
    pub gamma_num_vertices: u64,
    pub gamma_side: u64,
    pub d: usize,
    #[serde(serialize_with = "serialize_ratio")]
    pub tau: BigRational,
    #[serde(serialize_with = "serialize_ratio")]
    pub epsilon: BigRational,
    #[serde(serialize_with = "serialize_ratio")]
    pub delta_h_tau: BigRational,
    /// `epsilon / (12 (k+2)!)`.
    #[serde(serialize_with = "serialize_ratio")]
    pub threshold: BigRational,
    /// `delta_h_tau / threshold`; the hypothesis asks for at most 1.
    #[serde(serialize_with = "serialize_ratio")]
    pub ratio: BigRational,
    pub delta_condition_met: bool,
    /// `tau < 1 / (200 (k+2) (k+2)!)`.
    pub tau_condition_met: bool,
}

fn factorial(m: usize) -> BigInt {
    (1..=m).fold(BigInt::one(), |acc, i| acc * BigInt::from(i))
}

pub fn container_params(
    profile: &DegreeProfile,
    v: &Points,
    tau: &BigRational,
    epsilon: &BigRational,
) -> Result<ContainerParams> {
    let half = BigRational::new(BigInt::one(), BigInt::from(2));
    if !epsilon.is_positive() || *epsilon >= half {
        return Err(Error::InvalidConfig("epsilon must lie strictly between 0 and 1/2".into()));
    }
    let k = profile.k;
    let delta_h_tau = compute_delta(profile, v.len() as u64, profile.num_edges, tau)?;
    let fact = factorial(k + 2);
    let threshold = epsilon / BigRational::from_integer(BigInt::from(12) * &fact);
    let ratio = &delta_h_tau / &threshold;
    let tau_cap = BigRational::new(BigInt::one(), BigInt::from(200 * (k + 2)) * fact);
    Ok(ContainerParams {
        k,
        gamma_num_vertices: v.len() as u64,
        gamma_side: v.side(),
        d: v.dim(),
        tau: tau.clone(),
        epsilon: epsilon.clone(),
        delta_condition_met: delta_h_tau <= threshold,
        delta_h_tau,
        threshold,
        ratio,
        tau_condition_met: *tau < tau_cap,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::ratio;

    fn profile(k: usize, delta: &[(usize, u64)]) -> DegreeProfile {
        DegreeProfile {
            k,
            num_vertices: 0,
            side: 1,
            num_edges: 1,
            delta: delta.iter().copied().collect(),
            bounds: Vec::new(),
        }
    }

    #[test]
    fn profile_of_2x2() {
        let p = degree_profile(&Points::full_grid(2, 2).unwrap(), 2, &Budget::unlimited()).unwrap();
        assert_eq!(p.num_edges, 1);
        assert_eq!((p.get(2), p.get(3), p.get(4)), (1, 1, 1));
        assert!(p.bounds.iter().all(|b| b.holds));
    }

    #[test]
    fn profile_of_3x3_lines() {
        let p = degree_profile(&Points::full_grid(2, 3).unwrap(), 1, &Budget::unlimited()).unwrap();
        assert_eq!(p.num_edges, 8);
        assert_eq!((p.get(2), p.get(3)), (1, 1));
    }

    #[test]
    fn empty_hypergraph() {
        let v = Points::new(2, 3, vec![[1, 1].into(), [1, 2].into(), [2, 1].into()]).unwrap();
        let p = degree_profile(&v, 1, &Budget::unlimited()).unwrap();
        assert!(p.delta.values().all(|&d| d == 0));
        assert_eq!(compute_delta(&p, 3, 0, &ratio(1, 4)).unwrap_err(), Error::ZeroEdges);
    }

    #[test]
    fn delta_formula_value() {
        let p = profile(2, &[(2, 0), (3, 0), (4, 1)]);
        assert_eq!(compute_delta(&p, 16, 1, &ratio(1, 2)), Err(Error::TauOutOfRange));
        // at tau = 1/2 the formula gives 128; just inside the range the
        // single term is (2^5 * 16 / 4) / (tau^3 * 8)
        let t = ratio(1, 4);
        let got = compute_delta(&p, 16, 1, &t).unwrap();
        assert_eq!(got, ratio(128 * 8, 1));
        assert_eq!(compute_delta(&p, 16, 1, &ratio(0, 1)), Err(Error::TauOutOfRange));
    }

    #[test]
    fn zero_profile_gives_zero() {
        let p = profile(3, &[(2, 0), (3, 0), (4, 0), (5, 0)]);
        assert!(compute_delta(&p, 10, 5, &ratio(1, 3)).unwrap().is_zero());
    }

    #[test]
    fn scaling_edges_scales_result() {
        let p = profile(2, &[(2, 3), (3, 2), (4, 1)]);
        let t = ratio(1, 5);
        let a = compute_delta(&p, 20, 7, &t).unwrap();
        let b = compute_delta(&p, 20, 21, &t).unwrap();
        assert_eq!(a, b * BigRational::from_integer(3.into()));
    }

    #[test]
    fn bound_values() {
        assert_eq!(degree_bound(4, 2, 2, 2), BigUint::from(16u32));
        assert_eq!(degree_bound(9, 3, 1, 2), BigUint::from(3u32));
    }
}
