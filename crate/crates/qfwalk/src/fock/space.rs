//! Boson Fock space over `ℂ^d`, truncated by total particle number.

use super::sliced::kron_vec;
use crate::algebra::AWAmplitude;
use crate::linalg::{conj_vec, expm, kron, r, CMat, CVec};
use std::collections::HashMap;

#[derive(Clone, Debug)]
pub struct FockSpace {
    dim_one: usize,
    cutoff: usize,
    basis: Vec<Vec<usize>>,
    index: HashMap<Vec<usize>, usize>,
}

fn enumerate(d: usize, total: usize, prefix: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
    if prefix.len() + 1 == d {
        prefix.push(total);
        out.push(prefix.clone());
        prefix.pop();
        return;
    }
    for k in (0..=total).rev() {
        prefix.push(k);
        enumerate(d, total - k, prefix, out);
        prefix.pop();
    }
}

impl FockSpace {
    /// Occupation-number basis with `|n| ≤ cutoff`, ordered by level; the vacuum is index 0.
    pub fn new(dim_one: usize, cutoff: usize) -> Self {
        let mut basis = Vec::new();
        if dim_one == 0 {
            basis.push(Vec::new());
        } else {
            for level in 0..=cutoff {
                enumerate(dim_one, level, &mut Vec::new(), &mut basis);
            }
        }
        let index = basis.iter().enumerate().map(|(i, n)| (n.clone(), i)).collect();
        Self { dim_one, cutoff, basis, index }
    }

    pub fn one_particle_dim(&self) -> usize {
        self.dim_one
    }

    pub fn cutoff(&self) -> usize {
        self.cutoff
    }

    /// `C(d + N, N)`.
    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    pub fn basis(&self) -> &[Vec<usize>] {
        &self.basis
    }

    pub fn index_of(&self, occ: &[usize]) -> Option<usize> {
        self.index.get(occ).copied()
    }

    pub fn level(&self, i: usize) -> usize {
        self.basis[i].iter().sum()
    }

    pub fn vacuum(&self) -> CVec {
        let mut v = CVec::zeros(self.dim());
        v[0] = r(1.0);
        v
    }

    /// Annihilator of mode `j`: `a_j|n⟩ = √n_j |n − e_j⟩`.
    pub fn mode_annihilator(&self, j: usize) -> CMat {
        let mut a = CMat::zeros(self.dim(), self.dim());
        for (col, occ) in self.basis.iter().enumerate() {
            if occ[j] > 0 {
                let mut lower = occ.clone();
                lower[j] -= 1;
                a[(self.index[&lower], col)] = r((occ[j] as f64).sqrt());
            }
        }
        a
    }

    /// `(a⁺(x), a⁻(x))` with `a⁻(x) = Σ conj(x_j) a_j`; the top level of `a⁺` is dropped.
    pub fn ladder(&self, x: &CVec) -> (CMat, CMat) {
        let mut am = CMat::zeros(self.dim(), self.dim());
        for j in 0..self.dim_one {
            if x[j] != r(0.0) {
                am += self.mode_annihilator(j) * x[j].conj();
            }
        }
        (am.adjoint(), am)
    }

    /// `ε(x)` with components `Π x_j^{n_j} / √(n_j!)`.
    pub fn exponential_vector(&self, x: &CVec) -> CVec {
        CVec::from_iterator(
            self.dim(),
            self.basis.iter().map(|occ| {
                occ.iter().enumerate().fold(r(1.0), |acc, (j, &n)| {
                    let mut term = acc;
                    for k in 1..=n {
                        term *= x[j] / r((k as f64).sqrt());
                    }
                    term
                })
            }),
        )
    }

    /// Normalised coherent vector `e^{−‖x‖²/2} ε(x)`.
    pub fn coherent(&self, x: &CVec) -> CVec {
        self.exponential_vector(x) * r((-0.5 * x.norm_squared()).exp())
    }

    /// Norm of the discarded part of `ε(x)`: `(Σ_{n>N} ‖x‖^{2n}/n!)^{1/2}`.
    pub fn tail_bound(&self, norm: f64) -> f64 {
        tail_bound(norm, self.cutoff)
    }
}

pub fn tail_bound(norm: f64, cutoff: usize) -> f64 {
    let s = norm * norm;
    let mut term = 1.0;
    for n in 1..=cutoff {
        term *= s / n as f64;
    }
    let mut sum = 0.0;
    let mut n = cutoff + 1;
    loop {
        term *= s / n as f64;
        sum += term;
        if term <= 1e-18 * sum.max(1e-300) || n > cutoff + 10_000 {
            break;
        }
        n += 1;
    }
    sum.sqrt()
}

/// Truncated Weyl operator together with the tail bound it was built under.
#[derive(Clone, Debug)]
pub struct Weyl {
    pub matrix: CMat,
    pub tail_bound: f64,
    pub within_tolerance: bool,
}

/// `W(x) = exp(a⁺(x) − a⁻(x))` on the truncated space.
pub fn weyl_matrix(space: &FockSpace, x: &CVec) -> CMat {
    let (ap, am) = space.ladder(x);
    expm(&(ap - am))
}

/// Weyl operator with a flag recording whether the exponential-vector tail is below `tol`.
pub fn weyl(space: &FockSpace, x: &CVec, tol: f64) -> Weyl {
    let tail = space.tail_bound(x.norm());
    Weyl { matrix: weyl_matrix(space, x), tail_bound: tail, within_tolerance: tail <= tol }
}

/// `Γ(k) ⊗ Γ(k̄)` with a cutoff on each factor.
#[derive(Clone, Debug)]
pub struct DoubleFock {
    pub factor: FockSpace,
}

impl DoubleFock {
    pub fn new(dim_k: usize, cutoff: usize) -> Self {
        Self { factor: FockSpace::new(dim_k, cutoff) }
    }

    pub fn dim(&self) -> usize {
        self.factor.dim() * self.factor.dim()
    }

    pub fn vacuum(&self) -> CVec {
        let v = self.factor.vacuum();
        kron_vec(&v, &v)
    }

    /// `a^±_{k⊕k̄}(u, w) = a^±(u) ⊗ I + I ⊗ a^±(w)`.
    pub fn ladder(&self, u: &CVec, w: &CVec) -> (CMat, CMat) {
        let id = CMat::identity(self.factor.dim(), self.factor.dim());
        let (pu, mu) = self.factor.ladder(u);
        let (pw, mw) = self.factor.ladder(w);
        (kron(&pu, &id) + kron(&id, &pw), kron(&mu, &id) + kron(&id, &mw))
    }
}

/// The two translation vectors `(Σ⁰₀x − Σ⁰₁x̄, Σ¹₀x − Σ¹₁x̄) = Σι(x)`.
fn sigma_shift(sigma: &AWAmplitude, x: &CVec) -> (CVec, CVec) {
    let y = sigma.apply_doubled(x);
    let d = sigma.dim_k;
    (y.rows(0, d).into_owned(), y.rows(d, d).into_owned())
}

/// `W_Σ(x) = W(Σ⁰₀x − Σ⁰₁x̄) ⊗ W(Σ¹₀x − Σ¹₁x̄)`.
pub fn weyl_sigma(sigma: &AWAmplitude, space: &DoubleFock, x: &CVec) -> CMat {
    let (y0, y1) = sigma_shift(sigma, x);
    kron(&weyl_matrix(&space.factor, &y0), &weyl_matrix(&space.factor, &y1))
}

/// Anti-self-adjoint generator `G` of `t ↦ W_Σ(t x)`.
pub fn weyl_sigma_generator(sigma: &AWAmplitude, space: &DoubleFock, x: &CVec) -> CMat {
    let (y0, y1) = sigma_shift(sigma, x);
    let (p, m) = space.ladder(&y0, &y1);
    p - m
}

/// Quasifree creation and annihilation operators from the block form of `Σ`:
/// `a^±_Σ(x) = a^±(Σ⁰₀x, Σ¹₀x) + a^∓(Σ⁰₁x̄, Σ¹₁x̄)`.
pub fn quasifree_ladder(sigma: &AWAmplitude, space: &DoubleFock, x: &CVec) -> (CMat, CMat) {
    let xb = conj_vec(x);
    let u0 = sigma.block(0, 0) * x;
    let u1 = sigma.block(1, 0) * x;
    let w0 = sigma.block(0, 1) * &xb;
    let w1 = sigma.block(1, 1) * &xb;
    let (p1, m1) = space.ladder(&u0, &u1);
    let (p2, m2) = space.ladder(&w0, &w1);
    (p1 + m2, m1 + p2)
}
