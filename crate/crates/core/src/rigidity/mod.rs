//! Rigidity of the associative operad at small arity: the word complex with
//! its contracting homotopy, and the graphical Moyal map `F: Assoc → Gra_1`.

mod moyal;
mod words;

pub use moyal::{
    associativity_residuals, compose, moyal_bracketed, moyal_commutator, moyal_f, moyal_m2, Bracketing, GraGraph,
    GraVector,
};
pub use words::{
    all_words, homotopy_defect, word_cohomology_dim, word_d, word_d_matrix, word_homotopy, Word, WordVector,
};
