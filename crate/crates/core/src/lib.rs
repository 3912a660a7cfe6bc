//! Matroids built from triangle-free point/line configurations, and the
//! machinery to count joints in them.
//!
//! The crate is organised bottom-up:
//!
//! * [`matroid`] is a generic finite matroid over an independence oracle
//!   (rank, closure, flats, joints, axiom and theorem checkers).
//! * [`affine`] provides exact affine independence over the rationals and
//!   the axis-parallel grid in three dimensions.
//! * [`planar`] holds integer point/line configurations in the plane.
//! * [`behrend`] builds large subsets of `1..=N` without 3-term progressions.
//! * [`construction`] combines the previous two into a simple matroid of
//!   rank at most 4 with many joints.
//! * [`analysis`] measures the plane-pruning / degree / triangle statistics
//!   used by the upper-bound argument, and drives parameter sweeps.

pub mod affine;
pub mod analysis;
pub mod behrend;
pub mod construction;
pub mod error;
pub mod matroid;
pub mod planar;
pub mod rational;
pub mod subset;

pub use error::{Error, Result};
pub use matroid::{FnOracle, Flat, GroundSet, IndependenceOracle, Matroid};
pub use planar::{Configuration, IntLine, IntPoint};
pub use rational::Epsilon;
