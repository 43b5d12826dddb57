//! Linear equations over point sets: trivial solutions, `B_g` and m-fold
//! `B_g` checks, the two-coefficient family behind the multifold bound, and
//! `r`-subset sums.

mod phi;

pub use phi::{
    check_cs, dissect, phi, stratified_phi, stratify, up1_sum, up2_check, CsReport, Dissection, PhiTable,
    Up2Report,
};

use std::collections::{BTreeMap, HashMap};

use num_rational::BigRational;
use num_bigint::BigInt;
use rayon::prelude::*;
use serde::Serialize;

use crate::budget::Budget;
use crate::census::build_sum_index;
use crate::error::{Error, Result};
use crate::exact::{floor_root_of_power, serialize_ratio};
use crate::{Point, Points};

/// `c_1 x_1 + ... + c_g x_g = 0` over `Z^d`, with the coefficient range of
/// an m-fold family.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct EquationSpec {
    pub coeffs: Vec<i64>,
    pub fold_bound: u64,
    pub ambient_dim: usize,
}

impl EquationSpec {
    pub fn new(coeffs: Vec<i64>, ambient_dim: usize) -> Result<Self> {
        if coeffs.is_empty() || coeffs.contains(&0) {
            return Err(Error::InvalidConfig("coefficients must be non-empty and nonzero".into()));
        }
        let fold_bound = coeffs.iter().map(|c| c.unsigned_abs()).max().unwrap_or(1);
        Ok(EquationSpec {
            coeffs,
            fold_bound,
            ambient_dim,
        })
    }

    pub fn is_homogeneous(&self) -> bool {
        self.coeffs.iter().sum::<i64>() == 0
    }
}

#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Serialize)]
#[serde(transparent)]
pub struct SolutionTuple {
    pub values: Vec<Point>,
}

fn evaluate(values: &[Point], coeffs: &[i64]) -> Result<Point> {
    let dim = values.first().map_or(0, Point::dim);
    let mut acc = Point::zero(dim);
    for (x, &c) in values.iter().zip(coeffs) {
        if x.dim() != dim {
            return Err(Error::DimensionMismatch(dim, x.dim()));
        }
        acc = acc.checked_add(&x.checked_scale(c)?)?;
    }
    Ok(acc)
}

/// Whether combining like terms leaves every coefficient zero.
pub fn is_trivial_solution(values: &[Point], coeffs: &[i64]) -> Result<bool> {
    if values.len() != coeffs.len() {
        return Err(Error::LengthMismatch(values.len(), coeffs.len()));
    }
    if !evaluate(values, coeffs)?.is_zero() {
        return Err(Error::NotASolution);
    }
    let mut groups: BTreeMap<&Point, i64> = BTreeMap::new();
    for (x, &c) in values.iter().zip(coeffs) {
        *groups.entry(x).or_insert(0) += c;
    }
    Ok(groups.values().all(|&s| s == 0))
}

fn trivial_by_index(idx: &[u32], coeffs: &[i64]) -> bool {
    let mut groups: HashMap<u32, i64> = HashMap::new();
    for (&i, &c) in idx.iter().zip(coeffs) {
        *groups.entry(i).or_insert(0) += c;
    }
    groups.values().all(|&s| s == 0)
}

/// All assignments of the given weighted positions to points of `v`, grouped
/// by weighted sum; assignments are listed in lexicographic index order.
fn side_sums(v: &[Point], dim: usize, weights: &[i64], budget: &Budget) -> Result<HashMap<Point, Vec<Vec<u32>>>> {
    let total = (v.len() as u128).checked_pow(weights.len() as u32).unwrap_or(u128::MAX);
    budget.require(total)?;
    let mut out: HashMap<Point, Vec<Vec<u32>>> = HashMap::new();
    if v.is_empty() && !weights.is_empty() {
        return Ok(out);
    }
    let scaled: Vec<Vec<Point>> = weights
        .iter()
        .map(|&w| v.iter().map(|x| x.checked_scale(w)).collect::<Result<_>>())
        .collect::<Result<_>>()?;
    let mut idx = vec![0u32; weights.len()];
    loop {
        let mut s = Point::zero(dim);
        for (pos, &i) in idx.iter().enumerate() {
            s = s.checked_add(&scaled[pos][i as usize])?;
        }
        out.entry(s).or_default().push(idx.clone());
        let mut pos = weights.len();
        loop {
            if pos == 0 {
                budget.charge(total as u64)?;
                return Ok(out);
            }
            pos -= 1;
            if (idx[pos] as usize) + 1 < v.len() {
                idx[pos] += 1;
                break;
            }
            idx[pos] = 0;
        }
    }
}

/// Lexicographically first non-trivial solution with all values in `v`.
/// Positive-coefficient positions are enumerated against the negated
/// negative-coefficient positions and matched on equal sums.
pub fn find_nontrivial_solution(v: &Points, spec: &EquationSpec, budget: &Budget) -> Result<Option<SolutionTuple>> {
    if spec.ambient_dim != v.dim() {
        return Err(Error::DimensionMismatch(spec.ambient_dim, v.dim()));
    }
    let coeffs = &spec.coeffs;
    let pos: Vec<usize> = (0..coeffs.len()).filter(|&i| coeffs[i] > 0).collect();
    let neg: Vec<usize> = (0..coeffs.len()).filter(|&i| coeffs[i] < 0).collect();
    let pts = v.points();
    let left = side_sums(pts, v.dim(), &pos.iter().map(|&i| coeffs[i]).collect::<Vec<_>>(), budget)?;
    let right = side_sums(pts, v.dim(), &neg.iter().map(|&i| -coeffs[i]).collect::<Vec<_>>(), budget)?;
    // with every positive position ahead of every negative one the scan
    // order below is already lexicographic in the full tuple
    let ordered = pos.iter().zip(0..).all(|(&p, i)| p == i);

    let mut firsts: Vec<(&Vec<u32>, &Point)> = left
        .iter()
        .filter(|(s, _)| right.contains_key(*s))
        .flat_map(|(s, ls)| ls.iter().map(move |l| (l, s)))
        .collect();
    firsts.sort();
    let mut best: Option<Vec<u32>> = None;
    let mut full = vec![0u32; coeffs.len()];
    let mut pairs = 0u64;
    'scan: for (l, s) in firsts {
        for r in &right[s] {
            pairs += 1;
            if pairs % 4096 == 0 {
                budget.charge(4096)?;
            }
            for (k, &p) in pos.iter().enumerate() {
                full[p] = l[k];
            }
            for (k, &p) in neg.iter().enumerate() {
                full[p] = r[k];
            }
            if !trivial_by_index(&full, coeffs) && best.as_ref().map_or(true, |b| full < *b) {
                best = Some(full.clone());
                if ordered {
                    break 'scan;
                }
            }
        }
    }
    Ok(best.map(|idx| SolutionTuple {
        values: idx.iter().map(|&i| pts[i as usize].clone()).collect(),
    }))
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct BgWitness {
    pub coeffs: Vec<i64>,
    pub left: Vec<Point>,
    pub right: Vec<Point>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct BgReport {
    pub g: usize,
    pub m: u64,
    pub holds: bool,
    pub witness: Option<BgWitness>,
}

/// m-fold `B_g` check: only trivial solutions to
/// `c_1 x_1 + ... + c_g x_g = c_1 x'_1 + ... + c_g x'_g` for every `c` in
/// `[m]^g`. The witness is the first in lexicographic order of
/// `(c, x, x')`.
pub fn bg_check(v: &Points, g: usize, m: u64, budget: &Budget) -> Result<BgReport> {
    if g == 0 || m == 0 {
        return Err(Error::InvalidConfig("g and m must be positive".into()));
    }
    let mut c = vec![1i64; g];
    loop {
        let mut coeffs = c.clone();
        coeffs.extend(c.iter().map(|x| -x));
        let spec = EquationSpec::new(coeffs, v.dim())?;
        if let Some(sol) = find_nontrivial_solution(v, &spec, budget)? {
            let (left, right) = sol.values.split_at(g);
            return Ok(BgReport {
                g,
                m,
                holds: false,
                witness: Some(BgWitness {
                    coeffs: c,
                    left: left.to_vec(),
                    right: right.to_vec(),
                }),
            });
        }
        let mut pos = g;
        loop {
            if pos == 0 {
                return Ok(BgReport {
                    g,
                    m,
                    holds: true,
                    witness: None,
                });
            }
            pos -= 1;
            if (c[pos] as u64) < m {
                c[pos] += 1;
                break;
            }
            c[pos] = 1;
        }
    }
}

/// Coefficient vector `(c1 x r, -c1 x r, -c2 x r, c2 x r)` of
/// `c1 (x_1 + .. + x_r - x_{r+1} - .. - x_{2r}) = c2 (x_{2r+1} + .. - x_{4r})`.
pub fn eq5_coeffs(r: usize, c1: i64, c2: i64) -> Vec<i64> {
    [c1, -c1, -c2, c2]
        .iter()
        .flat_map(|&c| std::iter::repeat(c).take(r))
        .collect()
}

/// `floor(n^(d / (2rd + 1)))`, exactly.
pub fn eq5_coefficient_bound(n: u64, d: usize, r: usize) -> u64 {
    floor_root_of_power(n, d as u32, (2 * r * d + 1) as u32)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Eq5Witness {
    pub c1: u64,
    pub c2: u64,
    pub solution: SolutionTuple,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Eq5Report {
    pub r: usize,
    /// Largest coefficient tried.
    pub m: u64,
    pub holds: bool,
    pub witness: Option<Eq5Witness>,
}

/// Checks the two-coefficient family for all `1 <= c1, c2 <= M`, where
/// `M = floor(n^(d/(2rd+1)))` unless overridden. Coefficient pairs run in
/// parallel; the reported witness is the first in `(c1, c2, tuple)` order.
pub fn verify_eq5(v: &Points, r: usize, m_override: Option<u64>, budget: &Budget) -> Result<Eq5Report> {
    if r == 0 {
        return Err(Error::InvalidConfig("r must be positive".into()));
    }
    let m = m_override.unwrap_or_else(|| eq5_coefficient_bound(v.side(), v.dim(), r));
    if v.len() < 2 {
        return Ok(Eq5Report {
            r,
            m,
            holds: true,
            witness: None,
        });
    }
    let pairs: Vec<(u64, u64)> = (1..=m).flat_map(|a| (1..=m).map(move |b| (a, b))).collect();
    let found = pairs.par_iter().find_map_first(|&(c1, c2)| {
        let spec = match EquationSpec::new(eq5_coeffs(r, c1 as i64, c2 as i64), v.dim()) {
            Ok(s) => s,
            Err(e) => return Some(Err(e)),
        };
        match find_nontrivial_solution(v, &spec, budget) {
            Ok(None) => None,
            Ok(Some(solution)) => Some(Ok(Eq5Witness { c1, c2, solution })),
            Err(e) => Some(Err(e)),
        }
    });
    let witness = found.transpose()?;
    Ok(Eq5Report {
        r,
        m,
        holds: witness.is_none(),
        witness,
    })
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SumCollision {
    pub sum: Point,
    pub first: Vec<Point>,
    pub second: Vec<Point>,
}

/// The set `S_r` of sums of `r` distinct points and the map back to subsets.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SumProfile {
    pub r: usize,
    pub num_subsets: u64,
    /// Each distinct sum with the first `r`-subset (as indices into the
    /// point set) reaching it.
    pub preimage: BTreeMap<Point, Vec<usize>>,
    pub bijective: bool,
    /// The equal-sum pair whose later subset comes first lexicographically.
    pub collision: Option<SumCollision>,
}

impl SumProfile {
    pub fn num_sums(&self) -> usize {
        self.preimage.len()
    }

    pub fn sums(&self) -> Vec<Point> {
        self.preimage.keys().cloned().collect()
    }
}

pub fn sum_profile(v: &Points, r: usize, budget: &Budget) -> Result<SumProfile> {
    if r == 0 {
        return Err(Error::InvalidConfig("r must be positive".into()));
    }
    if r > v.len() {
        return Ok(SumProfile {
            r,
            num_subsets: 0,
            preimage: BTreeMap::new(),
            bijective: true,
            collision: None,
        });
    }
    let index = build_sum_index(v, r, budget)?;
    let pts = v.points();
    let collision = index
        .buckets()
        .iter()
        .filter(|(_, b)| b.len() > 1)
        .min_by(|a, b| a.1[1].cmp(&b.1[1]))
        .map(|(s, b)| SumCollision {
            sum: s.clone(),
            first: b[0].iter().map(|&i| pts[i].clone()).collect(),
            second: b[1].iter().map(|&i| pts[i].clone()).collect(),
        });
    Ok(SumProfile {
        r,
        num_subsets: index.num_subsets(),
        preimage: index
            .buckets()
            .iter()
            .map(|(s, b)| (s.clone(), b[0].clone()))
            .collect(),
        bijective: collision.is_none(),
        collision,
    })
}

/// Exponent of the multifold bound and the parameter choices behind it.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct MultifoldBound {
    pub d: usize,
    pub r: usize,
    /// `(d / 2r) (1 - 1 / (2rd + 1))`, which equals `d^2 / (2rd + 1)`.
    #[serde(serialize_with = "serialize_ratio")]
    pub exponent: BigRational,
    /// `d / (2rd + 1)`, the exponent of the coefficient range `m`.
    #[serde(serialize_with = "serialize_ratio")]
    pub m_exponent: BigRational,
    /// `1 - d / (2rd + 1)`, the exponent of the box side `ell`.
    #[serde(serialize_with = "serialize_ratio")]
    pub ell_exponent: BigRational,
    pub n: Option<u64>,
    /// `floor(n^exponent)`, `floor(n^m_exponent)`, `floor(n^ell_exponent)`.
    pub bound_floor: Option<u64>,
    pub m: Option<u64>,
    pub ell: Option<u64>,
}

fn rat(a: usize, b: usize) -> BigRational {
    BigRational::new(BigInt::from(a), BigInt::from(b))
}

pub fn multifold_bound(d: usize, r: usize, n: Option<u64>) -> Result<MultifoldBound> {
    if d == 0 || r == 0 {
        return Err(Error::InvalidConfig("d and r must be positive".into()));
    }
    let q = 2 * r * d + 1;
    let exponent = rat(d, 2 * r) * (BigRational::from_integer(1.into()) - rat(1, q));
    debug_assert_eq!(exponent, rat(d * d, q));
    Ok(MultifoldBound {
        d,
        r,
        exponent,
        m_exponent: rat(d, q),
        ell_exponent: rat(q - d, q),
        n,
        bound_floor: n.map(|n| floor_root_of_power(n, (d * d) as u32, q as u32)),
        m: n.map(|n| floor_root_of_power(n, d as u32, q as u32)),
        ell: n.map(|n| floor_root_of_power(n, (q - d) as u32, q as u32)),
    })
}

/// The bound for `a(d, k, n)` with `r = floor((k + 2) / 4)`.
pub fn multifold_bound_for_k(d: usize, k: usize, n: Option<u64>) -> Result<MultifoldBound> {
    let r = (k + 2) / 4;
    if r == 0 {
        return Err(Error::InvalidConfig(format!("k = {k} gives r = floor((k+2)/4) = 0; need k >= 2")));
    }
    multifold_bound(d, r, n)
}
