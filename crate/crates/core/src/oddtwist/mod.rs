//! The odd Maurer-Cartan twist: the element `m`, the dotted complex with `δ₁`
//! and `p`, and the waved complex with its contracting homotopy and the map `g`.

mod dotted;
mod series;
mod waved;

pub use dotted::{
    bracket_p, check_mc_tilde, cocycle_c_tilde, delta1, dotted_bracket, grading_generator, lie_degree,
    loop_dotted_grading, mc_tilde, project_undotted, tilde_delta, twisted_dotted_delta, zeta, DottedElement, PairCell,
};
pub use series::{
    check_mc, cocycle_c, mc_m, mc_m_prime, total_edges, twisted_delta, IdentityReport, Truncated, TruncationLevel,
};
pub use waved::{
    g_map, g_map_labeled, g_map_vec, waved_apply, waved_d, waved_h, WavedGraph, WavedVector, MAX_WAVED_VERTICES,
};
