//! Quasifree generators, their lifts to Gaussian HP generators, and uniqueness questions.

mod generator;
mod uniqueness;

pub use generator::{doubled_kernel_margin, lift_integrand, lift_parts, sigma_hat, square_form, QFGenerator};
pub use uniqueness::{
    amplitude_set, change_of_variables, change_of_variables_residual, recognize_quasifree, same_flow_qf,
    same_flow_qf_witness, squeezed_sigma, AmplitudeSet,
};
