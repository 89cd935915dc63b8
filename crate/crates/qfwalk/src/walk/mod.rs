//! Repeated quantum interactions with a faithful particle state and their
//! quasifree stochastic limit.

mod gns;
mod model;

pub use gns::{from_eigendata, gns_build, GNSModel, PairIndex, CLUSTER_REL_TOL};
pub use model::{
    convergence_study, interaction_generator, limit_generator, scale_blocks, total_hamiltonian, toy_embedding,
    walk_element, ConvergenceRow, ConvergenceStudy, InteractionGenerator, LimitGenerator, WalkModel,
};
