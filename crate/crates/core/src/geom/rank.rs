//! Exact affine rank by fraction-free integer elimination.
//!
//! Difference vectors `p - anchor` are reduced one at a time against an
//! echelon basis. A reduction step replaces `v` by `row[c] * v - v[c] * row`
//! for the pivot column `c` of `row`, then divides `v` by the gcd of its
//! entries. Every row is zero at the pivot columns of the rows inserted
//! before it, so reducing in insertion order leaves `v` zero at all pivots.
//! The basis is a stack: depth-first enumerations push a point, recurse, and
//! pop it again without rebuilding anything.

use super::point::{Coord, LatticePoint};
use crate::error::{Error, Result};

/// Largest supported ambient dimension.
pub const MAX_DIM: usize = 16;

type Row<T> = [T; MAX_DIM];

/// Echelon basis of the direction space of an affine flat.
#[derive(Clone, Debug)]
pub struct FlatBasis<T: Coord = i64> {
    dim: usize,
    anchor: Row<T>,
    rows: Vec<Row<T>>,
    pivots: Vec<usize>,
}

impl<T: Coord> FlatBasis<T> {
    /// The 0-flat consisting of `anchor` alone.
    pub fn new(anchor: &LatticePoint<T>) -> Result<Self> {
        let dim = anchor.dim();
        if dim == 0 {
            return Err(Error::EmptyInput);
        }
        if dim > MAX_DIM {
            return Err(Error::InvalidConfig(format!(
                "dimension {dim} exceeds the supported maximum {MAX_DIM}"
            )));
        }
        let mut a = [T::zero(); MAX_DIM];
        a[..dim].copy_from_slice(anchor.coords());
        Ok(FlatBasis {
            dim,
            anchor: a,
            rows: Vec::with_capacity(dim),
            pivots: Vec::with_capacity(dim),
        })
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    /// Dimension of the flat spanned so far.
    pub fn rank(&self) -> usize {
        self.rows.len()
    }

    fn reduce(&self, p: &LatticePoint<T>) -> Result<Row<T>> {
        if p.dim() != self.dim {
            return Err(Error::DimensionMismatch(self.dim, p.dim()));
        }
        let mut v = [T::zero(); MAX_DIM];
        for (i, (&c, &a)) in p.coords().iter().zip(&self.anchor[..self.dim]).enumerate() {
            v[i] = c.checked_sub(&a).ok_or(Error::ArithmeticOverflow)?;
        }
        for (row, &c) in self.rows.iter().zip(&self.pivots) {
            let vc = v[c];
            if vc.is_zero() {
                continue;
            }
            let rc = row[c];
            let g = rc.gcd(&vc);
            let (rs, vs) = (rc / g, vc / g);
            for i in 0..self.dim {
                let a = v[i].checked_mul(&rs).ok_or(Error::ArithmeticOverflow)?;
                let b = row[i].checked_mul(&vs).ok_or(Error::ArithmeticOverflow)?;
                v[i] = a.checked_sub(&b).ok_or(Error::ArithmeticOverflow)?;
            }
            normalize(&mut v[..self.dim]);
        }
        Ok(v)
    }

    /// Whether `p` lies on the current flat.
    pub fn contains(&self, p: &LatticePoint<T>) -> Result<bool> {
        if self.rows.len() == self.dim {
            if p.dim() != self.dim {
                return Err(Error::DimensionMismatch(self.dim, p.dim()));
            }
            return Ok(true);
        }
        let v = self.reduce(p)?;
        Ok(v[..self.dim].iter().all(|c| c.is_zero()))
    }

    /// Extends the flat by `p`. Returns whether the rank grew; the basis
    /// only changes when it did.
    pub fn push(&mut self, p: &LatticePoint<T>) -> Result<bool> {
        if self.rows.len() == self.dim {
            if p.dim() != self.dim {
                return Err(Error::DimensionMismatch(self.dim, p.dim()));
            }
            return Ok(false);
        }
        let v = self.reduce(p)?;
        match v[..self.dim].iter().position(|c| !c.is_zero()) {
            Some(c) => {
                self.rows.push(v);
                self.pivots.push(c);
                Ok(true)
            }
            None => Ok(false),
        }
    }

    /// Drops the most recently added direction.
    pub fn pop(&mut self) {
        self.rows.pop();
        self.pivots.pop();
    }

    /// Truncates back to a previous rank.
    pub fn truncate(&mut self, rank: usize) {
        self.rows.truncate(rank);
        self.pivots.truncate(rank);
    }
}

fn normalize<T: Coord>(v: &mut [T]) {
    let g = v.iter().fold(T::zero(), |g, c| g.gcd(c));
    if g > T::one() {
        for c in v.iter_mut() {
            *c = *c / g;
        }
    }
}

/// Dimension of the affine hull of `points`: 0 for a single point.
pub fn affine_rank<T: Coord>(points: &[LatticePoint<T>]) -> Result<usize> {
    affine_rank_of(points.iter())
}

/// [`affine_rank`] over any iterator of point references.
pub fn affine_rank_of<'a, T: Coord>(
    points: impl IntoIterator<Item = &'a LatticePoint<T>>,
) -> Result<usize> {
    let mut it = points.into_iter();
    let first = it.next().ok_or(Error::EmptyInput)?;
    let mut basis = FlatBasis::new(first)?;
    for p in it {
        if basis.rank() == basis.dim() {
            // still validate dimensions
            if p.dim() != basis.dim() {
                return Err(Error::DimensionMismatch(basis.dim(), p.dim()));
            }
            continue;
        }
        basis.push(p)?;
    }
    Ok(basis.rank())
}

/// Whether all of `points` lie on a common `k`-flat.
pub fn lies_on_flat<T: Coord>(points: &[LatticePoint<T>], k: usize) -> Result<bool> {
    Ok(affine_rank(points)? <= k)
}
