use serde::{Deserialize, Serialize};

use super::point::{Coord, LatticePoint};
use super::rank::{affine_rank_of, FlatBasis};
use crate::error::{Error, Result};

/// Classification of a `(k+2)`-point set relative to `k`-flats.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum TupleClass<T = i64> {
    /// The points span more than a `k`-flat.
    OffFlat,
    /// On a `k`-flat, with a `j`-subset (`3 <= j <= k+1`) lying on a
    /// `(j-2)`-flat. The witness is a smallest such subset, first in
    /// lexicographic order among those of its size.
    Degenerate { witness: Vec<LatticePoint<T>> },
    NonDegenerate,
}

impl<T> TupleClass<T> {
    pub fn is_nondegenerate(&self) -> bool {
        matches!(self, TupleClass::NonDegenerate)
    }
}

/// Classifies a set of `k+2` distinct points.
pub fn classify_tuple<T: Coord>(tuple: &[LatticePoint<T>], k: usize) -> Result<TupleClass<T>> {
    if k == 0 {
        return Err(Error::InvalidConfig("k must be positive".into()));
    }
    if tuple.len() != k + 2 {
        return Err(Error::WrongArity(k + 2, tuple.len()));
    }
    let mut sorted: Vec<&LatticePoint<T>> = tuple.iter().collect();
    sorted.sort();
    if sorted.windows(2).any(|w| w[0] == w[1]) {
        return Err(Error::DuplicatePoints);
    }
    if affine_rank_of(sorted.iter().copied())? > k {
        return Ok(TupleClass::OffFlat);
    }
    if !has_dependent_facet(&sorted, k)? {
        return Ok(TupleClass::NonDegenerate);
    }
    for j in 3..=k + 1 {
        if let Some(w) = first_dependent_subset(&sorted, j)? {
            return Ok(TupleClass::Degenerate { witness: w });
        }
    }
    unreachable!("a dependent (k+1)-subset is itself a witness")
}

/// For a tuple already known to lie on a `k`-flat: whether some `(k+1)`-subset
/// has affine rank at most `k-1`. This is equivalent to degeneracy: a
/// `j`-subset on a `(j-2)`-flat extends, by any `k+1-j` further points, to a
/// `(k+1)`-subset on a `(k-1)`-flat.
pub(crate) fn has_dependent_facet<T: Coord>(tuple: &[&LatticePoint<T>], k: usize) -> Result<bool> {
    if k < 2 {
        return Ok(false);
    }
    for skip in 0..tuple.len() {
        let rank = affine_rank_of(
            tuple
                .iter()
                .enumerate()
                .filter(|&(i, _)| i != skip)
                .map(|(_, p)| *p),
        )?;
        if rank < k {
            return Ok(true);
        }
    }
    Ok(false)
}

/// First `j`-subset (lexicographic in index order) of rank `<= j-2`.
fn first_dependent_subset<T: Coord>(
    pts: &[&LatticePoint<T>],
    j: usize,
) -> Result<Option<Vec<LatticePoint<T>>>> {
    let mut idx: Vec<usize> = (0..j).collect();
    let n = pts.len();
    loop {
        let mut basis = FlatBasis::new(pts[idx[0]])?;
        for &i in &idx[1..] {
            basis.push(pts[i])?;
        }
        if basis.rank() + 2 <= j {
            return Ok(Some(idx.iter().map(|&i| pts[i].clone()).collect()));
        }
        // next combination
        let mut pos = j;
        loop {
            if pos == 0 {
                return Ok(None);
            }
            pos -= 1;
            if idx[pos] < n - j + pos {
                idx[pos] += 1;
                for q in pos + 1..j {
                    idx[q] = idx[q - 1] + 1;
                }
                break;
            }
        }
    }
}
