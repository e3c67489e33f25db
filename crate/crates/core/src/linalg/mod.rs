//! Exact coefficients, graph vectors, sparse matrices, rank and linear solves.

pub mod io;
mod matrix;
mod rank;
mod scalar;
mod solve;
mod vector;

pub use matrix::{coordinates, from_coordinates, matrix_of, matrix_of_int, SparseMatrix};
pub use rank::{rank, rank_mod_p, rank_rational, rank_rational_bounded};
pub use scalar::{
    factorial, inv_mod, is_prime, mul_mod, parse_rational, q, qq, reduce_i64, Field, Rational, Scalar, PRIME_A, PRIME_B,
};
pub use solve::solve;
pub use vector::{coeff, vec_add, vec_scale, GraphVector};
