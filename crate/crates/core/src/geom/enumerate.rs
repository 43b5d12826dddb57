//! Depth-first enumeration of the subsets of a point list that lie on a flat
//! of bounded dimension.
//!
//! Affine rank is monotone under inclusion, so a prefix whose rank already
//! exceeds the bound is never extended. Subsets are produced as increasing
//! index vectors in lexicographic order.

use std::ops::{ControlFlow, Range};

use rayon::prelude::*;

use super::point::{Coord, LatticePoint};
use super::rank::FlatBasis;
use crate::budget::Budget;
use crate::error::Result;

const CHARGE_CHUNK: u64 = 1 << 14;

struct Walker<'a, T: Coord, F> {
    points: &'a [LatticePoint<T>],
    size: usize,
    max_rank: usize,
    budget: &'a Budget,
    pending: u64,
    idx: Vec<usize>,
    visit: F,
}

impl<T, F> Walker<'_, T, F>
where
    T: Coord,
    F: FnMut(&[usize]) -> Result<ControlFlow<()>>,
{
    fn tick(&mut self) -> Result<()> {
        self.pending += 1;
        if self.pending == CHARGE_CHUNK {
            self.budget.charge(self.pending)?;
            self.pending = 0;
        }
        Ok(())
    }

    fn descend(&mut self, basis: &mut FlatBasis<T>) -> Result<ControlFlow<()>> {
        if self.idx.len() == self.size {
            return (self.visit)(&self.idx);
        }
        let start = self.idx.last().map_or(0, |&i| i + 1);
        let need = self.size - self.idx.len();
        if self.points.len() < need || start > self.points.len() - need {
            return Ok(ControlFlow::Continue(()));
        }
        for i in start..=self.points.len() - need {
            self.tick()?;
            let grew = basis.push(&self.points[i])?;
            if basis.rank() <= self.max_rank {
                self.idx.push(i);
                let flow = self.descend(basis)?;
                self.idx.pop();
                if flow.is_break() {
                    if grew {
                        basis.pop();
                    }
                    return Ok(flow);
                }
            }
            if grew {
                basis.pop();
            }
        }
        Ok(ControlFlow::Continue(()))
    }
}

/// Visits every `size`-subset of `points` with affine rank `<= max_rank`
/// whose smallest index lies in `first`. The visitor may stop the walk.
pub fn visit_flat_subsets<T, F>(
    points: &[LatticePoint<T>],
    size: usize,
    max_rank: usize,
    first: Range<usize>,
    budget: &Budget,
    visit: F,
) -> Result<ControlFlow<()>>
where
    T: Coord,
    F: FnMut(&[usize]) -> Result<ControlFlow<()>>,
{
    if size == 0 || size > points.len() {
        return Ok(ControlFlow::Continue(()));
    }
    let mut w = Walker {
        points,
        size,
        max_rank,
        budget,
        pending: 0,
        idx: Vec::with_capacity(size),
        visit,
    };
    let last_first = points.len() - size;
    for i in first.start..first.end.min(last_first + 1) {
        let mut basis = FlatBasis::new(&points[i])?;
        w.idx.push(i);
        let flow = w.descend(&mut basis)?;
        w.idx.pop();
        if flow.is_break() {
            budget.charge(w.pending)?;
            return Ok(flow);
        }
    }
    budget.charge(w.pending)?;
    Ok(ControlFlow::Continue(()))
}

/// Parallel fold over all flat subsets. Work is split by smallest index;
/// each split folds into its own accumulator and the accumulators come back
/// in index order, so the merge is independent of the worker count.
pub fn fold_flat_subsets<T, R, I, F>(
    points: &[LatticePoint<T>],
    size: usize,
    max_rank: usize,
    budget: &Budget,
    init: I,
    visit: F,
) -> Result<Vec<R>>
where
    T: Coord,
    R: Send,
    I: Fn() -> R + Sync,
    F: Fn(&mut R, &[usize]) -> Result<()> + Sync,
{
    if size == 0 || size > points.len() {
        return Ok(Vec::new());
    }
    (0..=points.len() - size)
        .into_par_iter()
        .map(|i| {
            let mut acc = init();
            let _ = visit_flat_subsets(points, size, max_rank, i..i + 1, budget, |idx| {
                visit(&mut acc, idx)?;
                Ok(ControlFlow::Continue(()))
            })?;
            Ok(acc)
        })
        .collect()
}

/// Number of `size`-subsets with affine rank `<= max_rank`.
pub fn count_flat_subsets<T: Coord>(
    points: &[LatticePoint<T>],
    size: usize,
    max_rank: usize,
    budget: &Budget,
) -> Result<u64> {
    let parts = fold_flat_subsets(points, size, max_rank, budget, || 0u64, |c, _| {
        *c += 1;
        Ok(())
    })?;
    Ok(parts.into_iter().sum())
}

/// First flat subset in lexicographic index order, if any.
pub fn first_flat_subset<T: Coord>(
    points: &[LatticePoint<T>],
    size: usize,
    max_rank: usize,
    budget: &Budget,
) -> Result<Option<Vec<usize>>> {
    let mut found = None;
    let _ = visit_flat_subsets(points, size, max_rank, 0..points.len(), budget, |idx| {
        found = Some(idx.to_vec());
        Ok(ControlFlow::Break(()))
    })?;
    Ok(found)
}
