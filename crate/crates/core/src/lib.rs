//! Exact-arithmetic kernel for the upper-half-plane model attached to a
//! degree-2d, Picard-rank-1 K3 lattice.
//!
//! The numerical lattice is `Z^3` with the pairing
//! `<(r,n,s),(r',n',s')> = 2d*nn' - rs' - r's`. Every geometric object this
//! crate manipulates — spherical points, excluded segments, Moebius maps
//! induced by lattice isometries, wall geodesics, bounded regions — lives in
//! the "rational model" of the half plane: a point `(x, t)` with `x, t`
//! rational stands for `x + i*t/sqrt(d)`, and all of the maps and incidence
//! predicates close over that coordinate system. Arithmetic is exact
//! (arbitrary-precision integers and rationals); floating point appears only
//! when converting a hyperbolic distance or a rendering coordinate at the
//! very end.
//!
//! Module layout:
//!
//! - [`lattice`]: the lattice `Z^3`, pairing, reflections, central charges.
//! - [`qcomplex`]: the exact complex coordinate fields used throughout.
//! - [`spherical`]: enumeration of (-2)-classes and membership tests for the
//!   region cut out by their excluded segments.
//! - [`halfplane`]: half-plane points, geodesics, Moebius maps and the
//!   symbolic oracle that derives the map induced by a lattice isometry.
//! - [`walls`]: wall geodesics with their marked points, diameter bounds,
//!   bounded regions, large-volume rays and tangent disks.
//! - [`deckgroup`]: word calculus in the free product of loop generators and
//!   its image acting on the lattice and the half plane.

pub mod deckgroup;
pub mod halfplane;
pub mod lattice;
pub mod qcomplex;
pub mod spherical;
pub mod walls;

mod error;
mod ratio;

pub use error::Error;
pub use ratio::{parse_rat, rat, rat_int, Rat};

/// Crate-wide result alias.
pub type Result<T> = std::result::Result<T, Error>;
