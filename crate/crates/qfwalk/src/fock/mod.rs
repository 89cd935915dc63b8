//! Truncated Boson Fock spaces, Weyl operators and sliced simple integrals.

mod sliced;
mod space;
mod step;

pub use sliced::{kron_vec, qs_integral_operator, SlicedFock};
pub use space::{
    quasifree_ladder, tail_bound, weyl, weyl_matrix, weyl_sigma, weyl_sigma_generator, DoubleFock, FockSpace, Weyl,
};
pub use step::{hat, integrand_blocks, merge_grids, sandwich, SimpleIntegrand, StepFunction};
