//! Graphs, orientations, canonical forms and enumeration.

mod automorphism;
pub(crate) mod canon;
pub mod codec;
mod enumerate;
mod graph;

pub use automorphism::{automorphism_group, Automorphism, AutomorphismGroup};
pub use codec::{decode, decode_signed, encode, encode_labeled, parse_labeled};
pub use enumerate::{enumerate_graphs, enumerate_graphs_with_limit, GradedBasis, DEFAULT_STRUCTURE_LIMIT};
pub(crate) use graph::canonicalize_raw;
pub use graph::{canonicalize, CanonicalGraph, GraphConstraints, LabeledGraph, Parity, MAX_VERTICES};
