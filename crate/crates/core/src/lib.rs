//! Surface codes on general periodic 2D lattices.
//!
//! The crate builds torus lattices (square, Kagome, hexagonal, tri-hexa,
//! their duals and stellated refinements), samples independent Pauli errors
//! and qubit loss, decodes with exact minimum-weight perfect matching and
//! estimates error, loss and bond-percolation thresholds.

pub mod analysis;
pub mod cli;
pub mod decoder;
pub mod error;
pub mod lattice;
pub mod loss;
pub mod noise;
pub mod stabilizer;
pub mod wrap;

pub use error::{Error, Result};
pub use lattice::{Lattice, LatticeKind};
