//! Third-order positivity-preserving, discretely divergence-free
//! active-flux (PAMPA) scheme for two-dimensional ideal MHD on Cartesian
//! grids.
//!
//! The unknowns are cell averages of the conserved variables, evolved
//! conservatively, and point values at edge midpoints and vertices of a
//! nonconservative reformulation, evolved by upwind finite differences.
//! See [`scheme::Solver`] for the time stepper and [`problems`] for the
//! benchmark registry.

#![allow(clippy::needless_range_loop)]

pub mod coe;
pub mod ddf;
pub mod error;
pub mod flux;
pub mod gql;
pub mod indicator;
pub mod io;
pub mod limiting;
pub mod mesh;
pub mod point;
pub mod problems;
pub mod scheme;
pub mod selftest;
pub mod state;

pub use error::{Error, Result};
pub use mesh::{Boundary, DofField, Mesh};
pub use state::{ConservedState, Direction, GasParams, Primitive, QForm, ReformState};
