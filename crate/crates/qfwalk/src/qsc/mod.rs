//! Hudson–Parthasarathy cocycles and their inner flows at matrix-element level.

mod generator;
mod propagator;

pub use generator::{
    assemble, ito_projection, minimality_check, minimality_margin, product_with_noise, same_flow, same_flow_witness,
    structure_residuals, HPGenerator, NoiseData,
};
pub use propagator::{
    cocycle_element, cocycle_propagator, flow_element, flow_propagator, integral_element, lindblad, lindblad_semigroup,
    lindblad_superop, theta, theta_from_f, theta_slice_superop,
};
