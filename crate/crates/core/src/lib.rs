//! Kontsevich graph complexes in the even and odd conventions.
//!
//! The crate provides canonical forms for oriented graphs, the pre-Lie and Lie
//! structure, the differentials `δ` and `∇`, the odd Maurer-Cartan twist with
//! its dotted and waved auxiliary complexes, exact sparse linear algebra, and
//! the cohomology and spectral-sequence computations built on top of them.

pub mod calculus;
pub mod chromatic;
pub mod error;
pub mod graphcore;
pub mod homology;
pub mod linalg;
pub mod oddtwist;
pub mod rigidity;
pub mod specseq;

pub use error::{Error, Result};
