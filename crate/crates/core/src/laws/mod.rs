//! Closed-form limit objects: the semicircle family, theoretical moment
//! sequences, Hankel positivity and Bessel-type characteristic functions.

mod bessel;
mod hankel;
mod moments;
mod semicircle;

pub use bessel::{
    bessel_i1, bessel_j1, find_negativity_witness, pseudo_char, pseudo_char_unnormalised,
    WITNESS_GRID_STEP,
};
pub use hankel::{hankel_matrix, hankel_report, HankelReport};
pub use moments::{
    catalan, catalan_by_recursion, gamma_bipartite_printed, gamma_main, gamma_main_exact,
    gamma_proposition_printed, gamma_uniform, gamma_uniform_exact, mixing_radius,
    MomentSequence, Provenance,
};
pub use semicircle::{
    semicircle_abs_mean, semicircle_cdf, semicircle_density, semicircle_moment,
    semicircle_stieltjes, SemicircleLaw,
};
