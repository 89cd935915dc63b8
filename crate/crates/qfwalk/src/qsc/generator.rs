//! HP generators `F ~ (H, L, W)`, noise products and flow-equality witnesses.

use crate::error::{invalid, Result};
use crate::linalg::{
    block, bra_tensor, eye, herm_defect, ket_tensor, kron, max_abs, r, row_slice, singular_values, trace, unitary_defect,
    vec_mat, CMat, CVec, I,
};

/// Stochastic generator on `K̂ ⊗ h`, `K̂ = ℂ ⊕ K`.
#[derive(Clone, Debug, PartialEq)]
pub struct HPGenerator {
    pub dim_k: usize,
    pub dim_h: usize,
    pub h: CMat,
    pub l: CMat,
    pub w: CMat,
    pub f: CMat,
}

/// `Δ = diag(0, I_K) ⊗ I_h`.
pub fn ito_projection(dim_k: usize, dim_h: usize) -> CMat {
    let mut d = eye((1 + dim_k) * dim_h);
    for i in 0..dim_h {
        d[(i, i)] = r(0.0);
    }
    d
}

/// `[[iH − ½L*L, −L*W], [L, W − I]]`.
pub fn assemble(h: &CMat, l: &CMat, w: &CMat) -> CMat {
    let dh = h.nrows();
    let n = dh + l.nrows();
    let mut f = CMat::zeros(n, n);
    let k = h * I - l.adjoint() * l * r(0.5);
    f.view_mut((0, 0), (dh, dh)).copy_from(&k);
    f.view_mut((0, dh), (dh, l.nrows())).copy_from(&(-(l.adjoint() * w)));
    f.view_mut((dh, 0), (l.nrows(), dh)).copy_from(l);
    f.view_mut((dh, dh), (l.nrows(), l.nrows())).copy_from(&(w - eye(l.nrows())));
    f
}

impl HPGenerator {
    pub fn new(h: CMat, l: CMat, w: CMat, tol: f64) -> Result<Self> {
        let dh = h.nrows();
        if !h.is_square() || dh == 0 || l.ncols() != dh || !l.nrows().is_multiple_of(dh) {
            return Err(invalid(format!("H is {:?} and L is {:?}; need L ∈ B(h; K ⊗ h)", h.shape(), l.shape())));
        }
        let dk = l.nrows() / dh;
        if w.shape() != (dk * dh, dk * dh) {
            return Err(invalid(format!("W is {:?}, expected {0}x{0}", dk * dh)));
        }
        let hd = herm_defect(&h);
        if hd > tol {
            return Err(invalid(format!("H is not self-adjoint (defect {hd:e})")));
        }
        let ud = unitary_defect(&w);
        if ud > tol {
            return Err(invalid(format!("W is not unitary (defect {ud:e})")));
        }
        let f = assemble(&h, &l, &w);
        Ok(Self { dim_k: dk, dim_h: dh, h, l, w, f })
    }

    /// Gaussian generator `(H, L, I)`.
    pub fn gaussian(h: CMat, l: CMat, tol: f64) -> Result<Self> {
        let n = l.nrows();
        Self::new(h, l, eye(n), tol)
    }

    /// `K = iH − ½L*L`.
    pub fn k(&self) -> CMat {
        block(&self.f, 0, 0, self.dim_h)
    }

    pub fn delta(&self) -> CMat {
        ito_projection(self.dim_k, self.dim_h)
    }

    /// `(‖F* + F + F*ΔF‖, ‖F + F* + FΔF*‖)` entrywise.
    pub fn structure_residuals(&self) -> (f64, f64) {
        structure_residuals(&self.f, self.dim_k, self.dim_h)
    }

    pub fn is_gaussian(&self, tol: f64) -> bool {
        max_abs(&(&self.w - eye(self.w.nrows()))) <= tol
    }

    /// Generator of the cocycle with stochastic generator `F*`: `(−H, −W*L, W*)`.
    pub fn adjoint(&self) -> Self {
        let w = self.w.adjoint();
        let l = -(&w * &self.l);
        let h = -&self.h;
        let f = assemble(&h, &l, &w);
        Self { dim_k: self.dim_k, dim_h: self.dim_h, h, l, w, f }
    }

    /// `(⟨e_i| ⊗ I)L`.
    pub fn l_slice(&self, i: usize) -> CMat {
        row_slice(&self.l, i, self.dim_h)
    }
}

pub fn structure_residuals(f: &CMat, dim_k: usize, dim_h: usize) -> (f64, f64) {
    let d = ito_projection(dim_k, dim_h);
    let fa = f.adjoint();
    (max_abs(&(&fa + f + &fa * &d * f)), max_abs(&(f + &fa + f * &d * &fa)))
}

/// Data `(α, z, w)` of a pure-noise cocycle.
#[derive(Clone, Debug, PartialEq)]
pub struct NoiseData {
    pub alpha: f64,
    pub z: CVec,
    pub w: CMat,
}

impl NoiseData {
    pub fn trivial(dim_k: usize) -> Self {
        Self { alpha: 0.0, z: CVec::zeros(dim_k), w: eye(dim_k) }
    }

    /// `[[iα − ½‖z‖², −⟨z|w], [|z⟩, w − I]]` on `K̂`.
    pub fn generator(&self) -> CMat {
        let h = eye(1) * r(self.alpha);
        let l = CMat::from_column_slice(self.z.len(), 1, self.z.as_slice());
        assemble(&h, &l, &self.w)
    }
}

/// `(⟨w*z| ⊗ I)L − L*(|w*z⟩ ⊗ I)` times `i/2`.
fn noise_shift(l: &CMat, z: &CVec, w: &CMat, dh: usize) -> CMat {
    let wz = w.adjoint() * z;
    (bra_tensor(&wz, dh) * l - l.adjoint() * ket_tensor(&wz, dh)) * (I * 0.5)
}

/// Generator of `(I ⊗ u_t)U_t` for the pure-noise cocycle `u` with data `noise`.
pub fn product_with_noise(gen: &HPGenerator, noise: &NoiseData) -> Result<HPGenerator> {
    let dh = gen.dim_h;
    if noise.z.len() != gen.dim_k || noise.w.shape() != (gen.dim_k, gen.dim_k) {
        return Err(invalid("noise data and generator have different noise dimension"));
    }
    if unitary_defect(&noise.w) > 1e-10 {
        return Err(invalid("noise operator w is not unitary"));
    }
    let wi = kron(&noise.w, &eye(dh));
    let w = &wi * &gen.w;
    let l = &wi * &gen.l + ket_tensor(&noise.z, dh);
    let h = &gen.h + noise_shift(&gen.l, &noise.z, &noise.w, dh) + eye(dh) * r(noise.alpha);
    let f = assemble(&h, &l, &w);
    Ok(HPGenerator { dim_k: gen.dim_k, dim_h: dh, h, l, w, f })
}

/// Witness `(α, z, w)` that two generators induce the same flow, with the worst residual.
pub fn same_flow_witness(gen: &HPGenerator, other: &HPGenerator) -> Option<(NoiseData, f64)> {
    if gen.dim_k != other.dim_k || gen.dim_h != other.dim_h {
        return None;
    }
    let dh = gen.dim_h;
    let dk = gen.dim_k;
    let scale = r(1.0 / dh as f64);
    let x = &other.w * gen.w.adjoint();
    let w = CMat::from_fn(dk, dk, |i, k| trace(&block(&x, i, k, dh)) * scale);
    let res_w = max_abs(&(&x - kron(&w, &eye(dh)))).max(unitary_defect(&w));
    let zl = &other.l - kron(&w, &eye(dh)) * &gen.l;
    let z = CVec::from_fn(dk, |i, _| trace(&row_slice(&zl, i, dh)) * scale);
    let res_z = max_abs(&(&zl - ket_tensor(&z, dh)));
    let a = &other.h - &gen.h - noise_shift(&gen.l, &z, &w, dh);
    let alpha = trace(&a) * scale;
    let res_a = max_abs(&(&a - eye(dh) * r(alpha.re))).max(alpha.im.abs());
    Some((NoiseData { alpha: alpha.re, z, w }, res_w.max(res_z).max(res_a)))
}

/// The witness of flow equality, or nothing if any residual exceeds `tol`.
pub fn same_flow(gen: &HPGenerator, other: &HPGenerator, tol: f64) -> Option<NoiseData> {
    same_flow_witness(gen, other).and_then(|(n, res)| (res <= tol).then_some(n))
}

/// Smallest singular value of `(w, λ) ↦ Σ w_i L_i − λI`.
pub fn minimality_margin(l: &CMat, dim_h: usize) -> f64 {
    let dk = l.nrows() / dim_h;
    let mut m = CMat::zeros(dim_h * dim_h, dk + 1);
    for i in 0..dk {
        m.set_column(i, &vec_mat(&row_slice(l, i, dim_h)));
    }
    m.set_column(dk, &(-vec_mat(&eye(dim_h))));
    singular_values(&m).last().cloned().unwrap_or(0.0)
}

/// No nonzero `z` makes `(⟨z| ⊗ I)L` scalar, i.e. the induced flow is minimal.
pub fn minimality_check(l: &CMat, dim_h: usize, tol: f64) -> bool {
    if dim_h * dim_h < l.nrows() / dim_h + 1 {
        return false;
    }
    minimality_margin(l, dim_h) > tol
}
