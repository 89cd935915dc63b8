//! Partial conjugation and degeneracy spaces of operators into tensor products.

use crate::error::{invalid, Result};
use crate::linalg::{conj, null_space, op_norm, singular_values, CMat};

/// Dimensions `(dim h, dim h₁, dim h₂)` of `Y ∈ B(h₁; h ⊗ h₂)`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct ConjDims {
    pub h: usize,
    pub h1: usize,
    pub h2: usize,
}

impl ConjDims {
    pub fn new(h: usize, h1: usize, h2: usize) -> Self {
        Self { h, h1, h2 }
    }

    /// Dimensions of `Y^c ∈ B(h₂; h̄ ⊗ h₁)`.
    pub fn swapped(self) -> Self {
        Self { h: self.h, h1: self.h2, h2: self.h1 }
    }
}

/// `Y^c u = Σᵢ conj(eᵢ) ⊗ Y*(eᵢ ⊗ u)`, so `Y^c[(i,a), b] = conj(Y[(i,b), a])`.
pub fn partial_conj(y: &CMat, dims: ConjDims) -> CMat {
    let ConjDims { h, h1, h2 } = dims;
    let mut out = CMat::zeros(h * h1, h2);
    for i in 0..h {
        for a in 0..h1 {
            for b in 0..h2 {
                out[(i * h1 + a, b)] = y[(i * h2 + b, a)].conj();
            }
        }
    }
    out
}

/// Checked partial conjugate together with `c(Y) = ‖Y^c‖`.
pub fn partial_conjugate(y: &CMat, dims: ConjDims) -> Result<(CMat, f64)> {
    if y.nrows() != dims.h * dims.h2 || y.ncols() != dims.h1 {
        return Err(invalid(format!(
            "operator is {}x{} but dims (h={}, h1={}, h2={}) need {}x{}",
            y.nrows(),
            y.ncols(),
            dims.h,
            dims.h1,
            dims.h2,
            dims.h * dims.h2,
            dims.h1
        )));
    }
    let yc = partial_conj(y, dims);
    let n = op_norm(&yc);
    Ok((yc, n))
}

/// Shorthand for the square case `Y ∈ B(h; k ⊗ h)`, returning `Y^c ∈ B(h; k̄ ⊗ h)`.
pub fn pc(y: &CMat, dim_k: usize) -> CMat {
    let dh = y.ncols();
    partial_conj(y, ConjDims::new(dim_k, dh, dh))
}

/// Matrix of the complex-linear map `w ↦ Σᵢ wᵢ Xᵢ` (flattened), where
/// `Xᵢ = (⟨eᵢ| ⊗ I)X`; its kernel is the conjugate of `k^X`.
fn slice_map(x: &CMat, dim_k: usize) -> CMat {
    let rows = x.nrows() / dim_k;
    let cols = x.ncols();
    let mut m = CMat::zeros(rows * cols, dim_k);
    for i in 0..dim_k {
        let xi = x.rows(i * rows, rows);
        for (n, z) in xi.iter().enumerate() {
            m[(n, i)] = *z;
        }
    }
    m
}

/// Orthonormal basis (columns) of `k^X = {z : (⟨z| ⊗ I) X = 0}`.
pub fn degeneracy_space(x: &CMat, dim_k: usize, tol: f64) -> CMat {
    conj(&null_space(&slice_map(x, dim_k), tol))
}

/// Singular values of `z ↦ (⟨z| ⊗ I) X`, descending.
pub fn degeneracy_singular_values(x: &CMat, dim_k: usize) -> Vec<f64> {
    let m = slice_map(x, dim_k);
    let mut s = singular_values(&m);
    s.resize(dim_k, 0.0);
    s
}
