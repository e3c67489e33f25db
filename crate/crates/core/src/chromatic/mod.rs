//! The three-edge-colouring invariant of trivalent graphs and the explicit
//! partner of the loop `L_7` in the odd spectral sequence.

mod pipeline;
mod ribbon;

pub use pipeline::{
    chain_lengths, explicit_r1, explicit_w1, explicit_w2, explicit_w2_ribbon, in_chain_space, l7_pipeline, ratio,
    L7Report,
};
pub use ribbon::{f_coboundary_check, f_odd, f_ribbon_vector, is_trivalent, to_ribbon, ColoringValue, RibbonGraph};
