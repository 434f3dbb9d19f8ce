//! Exact orbit counting, Hilbert polynomials and coloring statistics for
//! finite quandles.
//!
//! The average number of `Q`-colorings of the closure of a random braid on
//! `n` strands equals the number of orbits of `B_n` on `Q^n`. This crate
//! computes those orbit counts exactly, fits the eventual polynomial they
//! follow, packages them as rational generating functions and cross-checks
//! everything against independent routes (Burnside averages, Monte Carlo
//! walks, product and disjoint-union identities).

pub mod braid;
pub mod catalog;
pub mod error;
pub mod invariants;
pub mod perm;
pub mod polyfit;
pub mod quandle;
pub mod series;
pub mod stats;

pub use error::{Error, Result};
pub use quandle::Quandle;
