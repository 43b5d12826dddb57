//! Exact enumeration toolkit for flat incidences in integer grids.
//!
//! The library covers affine rank and tuple classification on lattice points
//! ([`geom`]), sum-bucket censuses and degree profiles of the hypergraph of
//! non-degenerate flat tuples ([`census`]), exact extremal search for grid
//! sets avoiding `r` points on a `k`-flat ([`search`]), explicit and random
//! constructions ([`constructions`]) and the additive machinery around
//! `B_g`-sets and difference counts ([`additive`]).
//!
//! The geometric kernels are generic over the coordinate scalar through
//! [`geom::Coord`]; the rest of the crate works with 64-bit coordinates via
//! the aliases below.

pub mod additive;
pub mod budget;
pub mod census;
pub mod combin;
pub mod constructions;
pub mod error;
pub mod exact;
pub mod geom;
pub mod search;
pub mod selftest;

pub use budget::Budget;
pub use error::{Error, Result};

/// Grid point with 64-bit coordinates.
pub type Point = geom::LatticePoint<i64>;
/// Grid point set with 64-bit coordinates.
pub type Points = geom::PointSet<i64>;
