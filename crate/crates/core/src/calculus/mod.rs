//! Insertion, the pre-Lie product and Lie bracket, the differentials `δ` and `∇`,
//! their duals, and the homotopies on the labeled space `V_n`.

pub(crate) mod insert;
pub mod labeled;
mod ops;

pub use labeled::{homotopy_h, homotopy_htilde, homotopy_htilde_classes, nabla_labeled};
pub use ops::*;
