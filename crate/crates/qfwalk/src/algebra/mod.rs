//! Real-linear maps, conjugations, symplectic automorphisms, partial
//! conjugation and AW amplitudes.

mod amplitude;
mod partial;
mod reallinear;
mod symplectic;

pub use amplitude::{compose_squeeze, covariance_to_amplitude, doubled_pair, doubling, make_amplitude, squeezing_matrix, AWAmplitude};
pub use partial::{degeneracy_singular_values, degeneracy_space, partial_conj, partial_conjugate, pc, ConjDims};
pub use reallinear::{is_symplectic, split_parts, RealLinearOp};
pub use symplectic::{
    build_inverse, build_symplectic, decompose_symplectic, Conjugation, SymplecticTriple, KERNEL_REL_TOL,
};
