//! Exact affine geometry on integer lattice points.

mod classify;
pub mod enumerate;
pub mod format;
mod point;
mod rank;

pub use classify::{classify_tuple, TupleClass};
pub(crate) use classify::has_dependent_facet;
pub use point::{point_sum, Coord, LatticePoint, PointSet};
pub use rank::{affine_rank, affine_rank_of, lies_on_flat, FlatBasis, MAX_DIM};
