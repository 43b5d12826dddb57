use std::fmt::{self, Debug, Display};
use std::hash::Hash;
use std::str::FromStr;

use num_integer::Integer;
use num_traits::{PrimInt, Signed};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Signed machine integers usable as exact lattice coordinates.
///
/// All arithmetic on coordinates goes through the checked operations of
/// [`PrimInt`]; an overflow surfaces as [`Error::ArithmeticOverflow`].
pub trait Coord:
    PrimInt + Signed + Integer + Hash + Debug + Display + FromStr + Default + Send + Sync + 'static
{
}

impl<T> Coord for T where
    T: PrimInt + Signed + Integer + Hash + Debug + Display + FromStr + Default + Send + Sync + 'static
{
}

/// An integer point. Points order lexicographically by coordinates.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct LatticePoint<T = i64> {
    coords: Vec<T>,
}

impl<T: Coord> LatticePoint<T> {
    pub fn new(coords: Vec<T>) -> Self {
        LatticePoint { coords }
    }

    pub fn dim(&self) -> usize {
        self.coords.len()
    }

    pub fn coords(&self) -> &[T] {
        &self.coords
    }

    pub fn into_coords(self) -> Vec<T> {
        self.coords
    }

    pub fn checked_add(&self, other: &Self) -> Result<Self> {
        self.zip_with(other, |a, b| a.checked_add(&b))
    }

    pub fn checked_sub(&self, other: &Self) -> Result<Self> {
        self.zip_with(other, |a, b| a.checked_sub(&b))
    }

    pub fn checked_scale(&self, c: T) -> Result<Self> {
        self.coords
            .iter()
            .map(|&a| a.checked_mul(&c).ok_or(Error::ArithmeticOverflow))
            .collect::<Result<Vec<_>>>()
            .map(LatticePoint::new)
    }

    pub fn neg(&self) -> Result<Self> {
        self.checked_scale(-T::one())
    }

    pub fn zero(dim: usize) -> Self {
        LatticePoint::new(vec![T::zero(); dim])
    }

    pub fn is_zero(&self) -> bool {
        self.coords.iter().all(|c| c.is_zero())
    }

    fn zip_with(&self, other: &Self, f: impl Fn(T, T) -> Option<T>) -> Result<Self> {
        if self.dim() != other.dim() {
            return Err(Error::DimensionMismatch(self.dim(), other.dim()));
        }
        self.coords
            .iter()
            .zip(&other.coords)
            .map(|(&a, &b)| f(a, b).ok_or(Error::ArithmeticOverflow))
            .collect::<Result<Vec<_>>>()
            .map(LatticePoint::new)
    }
}

impl<T: Coord> From<Vec<T>> for LatticePoint<T> {
    fn from(coords: Vec<T>) -> Self {
        LatticePoint::new(coords)
    }
}

impl<T: Coord, const N: usize> From<[T; N]> for LatticePoint<T> {
    fn from(coords: [T; N]) -> Self {
        LatticePoint::new(coords.to_vec())
    }
}

impl<T: Debug> Debug for LatticePoint<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(")?;
        for (i, c) in self.coords.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{c:?}")?;
        }
        write!(f, ")")
    }
}

impl<T: Debug> Display for LatticePoint<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        Debug::fmt(self, f)
    }
}

/// Sum of a collection of points of a common dimension.
pub fn point_sum<'a, T: Coord>(
    dim: usize,
    points: impl IntoIterator<Item = &'a LatticePoint<T>>,
) -> Result<LatticePoint<T>> {
    let mut acc = LatticePoint::zero(dim);
    for p in points {
        acc = acc.checked_add(p)?;
    }
    Ok(acc)
}

/// A finite set of distinct points of the grid `[n]^d`, kept in canonical
/// (lexicographically sorted) order.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct PointSet<T = i64> {
    dim: usize,
    side: u64,
    points: Vec<LatticePoint<T>>,
}

impl<T: Coord> PointSet<T> {
    /// Validates and canonicalizes. Points must be distinct, of dimension
    /// `dim`, with every coordinate in `[1, side]`.
    pub fn new(dim: usize, side: u64, mut points: Vec<LatticePoint<T>>) -> Result<Self> {
        if dim == 0 {
            return Err(Error::InvalidConfig("dimension must be positive".into()));
        }
        if side == 0 {
            return Err(Error::InvalidConfig("side must be positive".into()));
        }
        let hi = T::from(side).ok_or(Error::ArithmeticOverflow)?;
        for p in &points {
            if p.dim() != dim {
                return Err(Error::DimensionMismatch(dim, p.dim()));
            }
            if let Some(c) = p.coords().iter().find(|&&c| c < T::one() || c > hi) {
                return Err(Error::InvalidConfig(format!(
                    "coordinate {c} of point {p} outside [1, {side}]"
                )));
            }
        }
        points.sort();
        if points.windows(2).any(|w| w[0] == w[1]) {
            return Err(Error::DuplicatePoints);
        }
        Ok(PointSet { dim, side, points })
    }

    /// The full grid `[n]^d` in lexicographic order.
    pub fn full_grid(dim: usize, side: u64) -> Result<Self> {
        if dim == 0 || side == 0 {
            return Err(Error::InvalidConfig("grid needs positive d and n".into()));
        }
        let total = (side as u128)
            .checked_pow(dim as u32)
            .filter(|&t| t <= u32::MAX as u128)
            .ok_or_else(|| Error::InvalidConfig(format!("grid [{side}]^{dim} is too large")))?;
        let mut points = Vec::with_capacity(total as usize);
        let mut cur = vec![1u64; dim];
        loop {
            let coords = cur
                .iter()
                .map(|&c| T::from(c).ok_or(Error::ArithmeticOverflow))
                .collect::<Result<Vec<_>>>()?;
            points.push(LatticePoint::new(coords));
            // odometer increment, last coordinate fastest
            let mut i = dim;
            loop {
                if i == 0 {
                    return Ok(PointSet { dim, side, points });
                }
                i -= 1;
                if cur[i] < side {
                    cur[i] += 1;
                    break;
                }
                cur[i] = 1;
            }
        }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn side(&self) -> u64 {
        self.side
    }

    pub fn points(&self) -> &[LatticePoint<T>] {
        &self.points
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    pub fn contains(&self, p: &LatticePoint<T>) -> bool {
        self.points.binary_search(p).is_ok()
    }

    pub fn iter(&self) -> std::slice::Iter<'_, LatticePoint<T>> {
        self.points.iter()
    }

    /// Subset by indices into `points()`; stays canonical if indices do.
    pub fn select(&self, indices: &[usize]) -> Self {
        let mut points: Vec<_> = indices.iter().map(|&i| self.points[i].clone()).collect();
        points.sort();
        points.dedup();
        PointSet {
            dim: self.dim,
            side: self.side,
            points,
        }
    }

    /// Same grid metadata, different points (validated).
    pub fn with_points(&self, points: Vec<LatticePoint<T>>) -> Result<Self> {
        PointSet::new(self.dim, self.side, points)
    }
}

impl<'a, T> IntoIterator for &'a PointSet<T> {
    type Item = &'a LatticePoint<T>;
    type IntoIter = std::slice::Iter<'a, LatticePoint<T>>;

    fn into_iter(self) -> Self::IntoIter {
        self.points.iter()
    }
}
