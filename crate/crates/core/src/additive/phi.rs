//! Difference counts `Phi_{U-T}(x)`, the sumset lemma check, residue
//! dissections of `S_r` and their stratification by subset overlap.

use std::collections::{BTreeMap, BTreeSet, HashSet};

use num_bigint::{BigInt, BigUint};
use num_rational::BigRational;
use serde::ser::SerializeSeq;
use serde::{Serialize, Serializer};

use super::SumProfile;
use crate::combin::sorted_intersection_len;
use crate::error::{Error, Result};
use crate::exact::{serialize_biguint, serialize_ratio};
use crate::Point;

/// Non-zero entries of `x -> |Phi_{U-T}(x)|`.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct PhiTable {
    pub counts: BTreeMap<Point, u64>,
}

impl PhiTable {
    pub fn get(&self, x: &Point) -> u64 {
        self.counts.get(x).copied().unwrap_or(0)
    }

    pub fn total(&self) -> u64 {
        self.counts.values().sum()
    }

    fn add(&mut self, x: Point, c: u64) {
        if c > 0 {
            *self.counts.entry(x).or_insert(0) += c;
        }
    }

    pub fn merge(&mut self, other: &PhiTable) {
        for (x, &c) in &other.counts {
            self.add(x.clone(), c);
        }
    }
}

impl Serialize for PhiTable {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        #[derive(Serialize)]
        struct Entry<'a> {
            x: &'a Point,
            count: u64,
        }
        let mut seq = s.serialize_seq(Some(self.counts.len()))?;
        for (x, &count) in &self.counts {
            seq.serialize_element(&Entry { x, count })?;
        }
        seq.end()
    }
}

fn as_set(points: &[Point]) -> Result<BTreeSet<Point>> {
    let dim = points.first().map_or(0, Point::dim);
    if let Some(p) = points.iter().find(|p| p.dim() != dim) {
        return Err(Error::DimensionMismatch(dim, p.dim()));
    }
    Ok(points.iter().cloned().collect())
}

fn same_dim(u: &BTreeSet<Point>, t: &BTreeSet<Point>) -> Result<()> {
    match (u.first(), t.first()) {
        (Some(a), Some(b)) if a.dim() != b.dim() => Err(Error::DimensionMismatch(a.dim(), b.dim())),
        _ => Ok(()),
    }
}

/// Exact table of `|{(u, t) in U x T : u - t = x}|`. Inputs are read as sets.
pub fn phi(u: &[Point], t: &[Point]) -> Result<PhiTable> {
    let (u, t) = (as_set(u)?, as_set(t)?);
    same_dim(&u, &t)?;
    let mut table = PhiTable::default();
    for a in &u {
        for b in &t {
            table.add(a.checked_sub(b)?, 1);
        }
    }
    Ok(table)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CsReport {
    pub size_u: usize,
    pub size_t: usize,
    pub sumset_size: usize,
    /// `(|U| |T|)^2 / |U + T|`.
    #[serde(serialize_with = "serialize_ratio")]
    pub lhs: BigRational,
    /// `sum_x Phi_{U-U}(x) Phi_{T-T}(x)`.
    #[serde(serialize_with = "serialize_biguint")]
    pub rhs: BigUint,
    pub holds: bool,
}

pub fn check_cs(u: &[Point], t: &[Point]) -> Result<CsReport> {
    let (us, ts) = (as_set(u)?, as_set(t)?);
    same_dim(&us, &ts)?;
    if us.is_empty() || ts.is_empty() {
        return Err(Error::EmptyInput);
    }
    let mut sumset = HashSet::new();
    for a in &us {
        for b in &ts {
            sumset.insert(a.checked_add(b)?);
        }
    }
    let uu = phi(u, u)?;
    let tt = phi(t, t)?;
    let rhs: BigUint = uu
        .counts
        .iter()
        .map(|(x, &c)| BigUint::from(c) * BigUint::from(tt.get(x)))
        .sum();
    let prod = BigInt::from(us.len() as u64 * ts.len() as u64);
    let lhs = BigRational::new(&prod * &prod, BigInt::from(sumset.len()));
    let holds = lhs <= BigRational::from_integer(BigInt::from(rhs.clone()));
    Ok(CsReport {
        size_u: us.len(),
        size_t: ts.len(),
        sumset_size: sumset.len(),
        lhs,
        rhs,
        holds,
    })
}

/// `U_{j,w} = {u : j u + w in S}` for every residue class `w` of `S` modulo
/// `j`, with `w` taken in `{0, .., j-1}^d`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Dissection {
    pub j: u64,
    pub parts: BTreeMap<Vec<i64>, Vec<Point>>,
}

impl Dissection {
    pub fn part(&self, w: &[i64]) -> &[Point] {
        self.parts.get(w).map_or(&[], Vec::as_slice)
    }

    pub fn total(&self) -> usize {
        self.parts.values().map(Vec::len).sum()
    }

    /// `j u + w`.
    pub fn lift(&self, w: &[i64], u: &Point) -> Point {
        let j = self.j as i64;
        Point::new(u.coords().iter().zip(w).map(|(&a, &b)| j * a + b).collect())
    }
}

impl Serialize for Dissection {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        #[derive(Serialize)]
        struct Part<'a> {
            w: &'a [i64],
            u: &'a [Point],
        }
        #[derive(Serialize)]
        struct Out<'a> {
            j: u64,
            parts: Vec<Part<'a>>,
        }
        Out {
            j: self.j,
            parts: self.parts.iter().map(|(w, u)| Part { w, u }).collect(),
        }
        .serialize(s)
    }
}

pub fn dissect(sums: &[Point], j: u64) -> Result<Dissection> {
    if j == 0 {
        return Err(Error::InvalidConfig("j must be positive".into()));
    }
    let set = as_set(sums)?;
    let jj = j as i64;
    let mut parts: BTreeMap<Vec<i64>, Vec<Point>> = BTreeMap::new();
    for s in &set {
        let w: Vec<i64> = s.coords().iter().map(|c| c.rem_euclid(jj)).collect();
        let u = Point::new(s.coords().iter().zip(&w).map(|(c, r)| (c - r) / jj).collect());
        parts.entry(w).or_default().push(u);
    }
    let dis = Dissection { j, parts };
    assert_eq!(dis.total(), set.len(), "residue classes must partition the sums");
    Ok(dis)
}

/// `Phi^i_{U_{j,w} - U_{j,w}}` for `i = 0..=r`: ordered pairs in the part
/// split by how many points the `r`-subsets behind `j u_1 + w` and
/// `j u_2 + w` share.
pub fn stratify(dis: &Dissection, w: &[i64], sigma: &SumProfile) -> Result<Vec<PhiTable>> {
    if !sigma.bijective {
        return Err(Error::NonBijectiveSigma);
    }
    let part = dis.part(w);
    let pre: Vec<&Vec<usize>> = part
        .iter()
        .map(|u| {
            sigma.preimage.get(&dis.lift(w, u)).ok_or_else(|| {
                Error::InvalidConfig(format!("{} is not an r-subset sum", dis.lift(w, u)))
            })
        })
        .collect::<Result<_>>()?;
    let mut out = vec![PhiTable::default(); sigma.r + 1];
    for (a, u1) in part.iter().enumerate() {
        for (b, u2) in part.iter().enumerate() {
            let i = sorted_intersection_len(pre[a], pre[b]);
            out[i].add(u1.checked_sub(u2)?, 1);
        }
    }
    Ok(out)
}

/// The stratum `i` of [`stratify`].
pub fn stratified_phi(dis: &Dissection, w: &[i64], sigma: &SumProfile, i: usize) -> Result<PhiTable> {
    let mut all = stratify(dis, w, sigma)?;
    Ok(if i < all.len() { all.swap_remove(i) } else { PhiTable::default() })
}

/// `x -> sum_{j in [m]} sum_w |Phi^0_{U_{j,w} - U_{j,w}}(x)|`. For sets
/// with only trivial solutions to the two-coefficient family up to `m`
/// every entry is at most 1.
pub fn up1_sum(sigma: &SumProfile, m: u64) -> Result<PhiTable> {
    let sums = sigma.sums();
    let mut acc = PhiTable::default();
    for j in 1..=m {
        let dis = dissect(&sums, j)?;
        for w in dis.parts.keys() {
            acc.merge(&stratify(&dis, w, sigma)?[0]);
        }
    }
    Ok(acc)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Up2Report {
    pub j: u64,
    pub i: usize,
    pub ell: u64,
    /// `sum_w sum_x Phi^i(x) Phi_{T-T}(x)` with `T = {0, .., ell-1}^d`.
    #[serde(serialize_with = "serialize_biguint")]
    pub lhs: BigUint,
    /// `|V|^(2r-i) |T|`.
    #[serde(serialize_with = "serialize_biguint")]
    pub rhs: BigUint,
    pub holds: bool,
}

/// `|Phi_{T-T}(x)|` for the box `T = {0, .., ell-1}^d`.
pub fn box_difference_count(x: &Point, ell: u64) -> u64 {
    x.coords()
        .iter()
        .map(|&c| (ell as i64 - c.abs()).max(0) as u64)
        .product()
}

pub fn up2_check(sigma: &SumProfile, num_points: usize, dim: usize, j: u64, i: usize, ell: u64) -> Result<Up2Report> {
    if i == 0 || i > sigma.r || ell == 0 {
        return Err(Error::InvalidConfig("need 1 <= i <= r and ell >= 1".into()));
    }
    let dis = dissect(&sigma.sums(), j)?;
    let mut lhs = BigUint::default();
    for w in dis.parts.keys() {
        let strata = stratify(&dis, w, sigma)?;
        for (x, &c) in &strata[i].counts {
            lhs += BigUint::from(c) * BigUint::from(box_difference_count(x, ell));
        }
    }
    let rhs = num_traits::pow(BigUint::from(num_points), 2 * sigma.r - i) * num_traits::pow(BigUint::from(ell), dim);
    Ok(Up2Report {
        j,
        i,
        ell,
        holds: lhs <= rhs,
        lhs,
        rhs,
    })
}
