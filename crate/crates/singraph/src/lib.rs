//! Exact combinatorics of resolution graphs of rational surface
//! singularities: fundamental cycles, positive roots, multiplicity and
//! blow-up profiles, classification against the known template lists,
//! deformation data of star-shaped graphs, and the sandwiched-singularity
//! correspondence between graphs and decorated curve germs.
//!
//! All arithmetic is exact: cycle coefficients and intersection numbers are
//! machine integers, determinants use arbitrary-precision integers.

pub mod canon;
pub mod classify;
pub mod cycles;
pub mod deform;
pub mod enumerate;
pub mod error;
pub mod graph;
pub mod par;
pub mod sandwich;

pub use error::{Error, Result};
pub use graph::{arithmetic_genus, canonical_dot, dot, Cycle, WeightedDualGraph};
