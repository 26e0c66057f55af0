//! Exact clique polynomials of simple graphs.
//!
//! The crate computes `C(G, x) = 1 + sum_k c_k(G) x^k` by clique enumeration,
//! decomposes chordal graphs into clique pastings, and decides real-rootedness
//! exactly with Sturm chains. On top of that sit seeded graph generators, a
//! per-graph analysis report, and resumable batch scans.

pub mod analyze;
pub mod catalog;
pub mod chordal;
pub mod clique;
pub mod error;
pub mod gen;
pub mod graph;
pub mod par;
pub mod poly;
pub mod reduce;
pub mod rng;
pub mod scan;

pub use error::{Error, Precondition, Result};
pub use graph::{Graph, VertexSet};
pub use poly::{IntPolynomial, Rational, RootAnalysis};
