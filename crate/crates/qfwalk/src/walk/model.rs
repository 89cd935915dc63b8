//! Repeated-interaction walks and their quasifree diffusion limit.

use super::gns::GNSModel;
use crate::algebra::{degeneracy_singular_values, degeneracy_space};
use crate::error::{invalid, QfError, Result};
use crate::fock::{sandwich, SlicedFock, StepFunction};
use crate::linalg::{eye, expm, herm_defect, kron, max_abs, r, vstack, C64, CMat, CVec, I};
use crate::qsc::{cocycle_element, HPGenerator};
use crate::quasifree::{amplitude_set, QFGenerator};
use rayon::prelude::*;

/// Particle dimension `p`, system dimension `h`, state and Hamiltonians.
#[derive(Clone, Debug)]
pub struct WalkModel {
    pub dim_p: usize,
    pub dim_h: usize,
    pub rho: CMat,
    pub h_s: CMat,
    pub h_p: CMat,
    /// On `p ⊗ h`, particle factor first.
    pub h_i: CMat,
}

impl WalkModel {
    pub fn new(rho: CMat, h_s: CMat, h_p: CMat, h_i: CMat, tol: f64) -> Result<Self> {
        let p = rho.nrows();
        let dh = h_s.nrows();
        if h_p.shape() != (p, p) || h_s.shape() != (dh, dh) || h_i.shape() != (p * dh, p * dh) {
            return Err(invalid(format!(
                "shapes ρ {:?}, H_S {:?}, H_P {:?}, H_I {:?} are inconsistent",
                rho.shape(),
                h_s.shape(),
                h_p.shape(),
                h_i.shape()
            )));
        }
        for (name, m) in [("H_S", &h_s), ("H_P", &h_p), ("H_I", &h_i)] {
            let d = herm_defect(m);
            if d > tol {
                return Err(invalid(format!("{name} is not self-adjoint (defect {d:e})")));
            }
        }
        Ok(Self { dim_p: p, dim_h: dh, rho, h_s, h_p, h_i })
    }

    /// A qubit particle in state `diag(γ₀, 1 − γ₀)` exchanging excitations with a
    /// `d`-level system: `H_I = g(σ_x ⊗ X)` with `X` the symmetric nearest-neighbour
    /// hopping matrix, `H_S = ω_S diag(j − (d − 1)/2)` and `H_P = ω_P σ_z / 2`.
    pub fn thermal_qubit(gamma0: f64, system_dim: usize, coupling: f64, omega_s: f64, omega_p: f64) -> Result<Self> {
        if !(gamma0 > 0.0 && gamma0 < 1.0) || system_dim == 0 {
            return Err(invalid("thermal qubit needs 0 < γ₀ < 1 and a non-empty system"));
        }
        let d = system_dim;
        let rho = CMat::from_diagonal(&CVec::from_vec(vec![r(gamma0), r(1.0 - gamma0)]));
        let h_s = CMat::from_diagonal(&CVec::from_fn(d, |j, _| r(omega_s * (j as f64 - (d as f64 - 1.0) / 2.0))));
        let h_p = CMat::from_diagonal(&CVec::from_vec(vec![r(0.5 * omega_p), r(-0.5 * omega_p)]));
        let sx = CMat::from_row_slice(2, 2, &[r(0.0), r(1.0), r(1.0), r(0.0)]);
        let hop = if d == 1 { eye(1) } else { CMat::from_fn(d, d, |i, j| r(if i.abs_diff(j) == 1 { 1.0 } else { 0.0 })) };
        Self::new(rho, h_s, h_p, kron(&sx, &hop) * r(coupling), 1e-12)
    }
}

/// `U = exp(iτ H̃_T)` on `K̂ ⊗ h` with `s_τ(U − I)`.
#[derive(Clone, Debug)]
pub struct InteractionGenerator {
    pub tau: f64,
    pub g: CMat,
    pub scaled_residual: CMat,
}

/// `s_τ([[A, B], [C, D]]) = [[A/τ, B/√τ], [C/√τ, D]]`, with the `ω` block first.
pub fn scale_blocks(x: &CMat, dim_h: usize, tau: f64) -> CMat {
    let mut out = x.clone();
    let n = x.nrows();
    let st = tau.sqrt();
    for i in 0..n {
        for j in 0..n {
            let w = match (i < dim_h, j < dim_h) {
                (true, true) => 1.0 / tau,
                (false, false) => 1.0,
                _ => 1.0 / st,
            };
            out[(i, j)] *= w;
        }
    }
    out
}

/// `H̃_T(τ) = I ⊗ H_S + π(H_P) ⊗ I + τ^{-1/2} π̃(H_I)`.
pub fn total_hamiltonian(model: &WalkModel, gns: &GNSModel, tau: f64) -> CMat {
    let dh = model.dim_h;
    kron(&eye(gns.dim_hat()), &model.h_s)
        + kron(&gns.pi(&model.h_p), &eye(dh))
        + gns.pi_tilde(&model.h_i, dh) * r(1.0 / tau.sqrt())
}

pub fn interaction_generator(model: &WalkModel, gns: &GNSModel, tau: f64) -> Result<InteractionGenerator> {
    if tau.is_nan() || tau <= 0.0 {
        return Err(invalid("step length τ must be positive"));
    }
    let ht = total_hamiltonian(model, gns, tau);
    let g = expm(&(ht * (I * tau)));
    let n = g.nrows();
    let scaled_residual = scale_blocks(&(&g - eye(n)), model.dim_h, tau);
    Ok(InteractionGenerator { tau, g, scaled_residual })
}

/// `⟨u ⊗ ⊗_j(1, √τ f_j), U_n v ⊗ ⊗_j(1, √τ g_j)⟩`, i.e. the walk matrix element on
/// exponential vectors seen through the toy-space embedding.
///
/// Slot `j` covers `[jτ, (j+1)τ)`; `f` and `g` must be constant on every slot
/// and take values in `K = K̂ ⊖ ℂω`.
#[allow(clippy::too_many_arguments)]
pub fn walk_element(
    g: &CMat,
    dim_h: usize,
    f: &StepFunction,
    gf: &StepFunction,
    u: &CVec,
    v: &CVec,
    n: usize,
    tau: f64,
) -> Result<C64> {
    let dk = f.dim();
    if gf.dim() != dk || g.nrows() != (dk + 1) * dim_h || u.len() != dim_h || v.len() != dim_h {
        return Err(invalid("walk generator, test functions and vectors have inconsistent dimensions"));
    }
    let end = f.support_end().max(gf.support_end());
    let slots = n.max((end / tau - 1e-9).ceil() as usize);
    let grid: Vec<f64> = (0..=slots).map(|j| j as f64 * tau).collect();
    if !f.is_aligned_to(&grid) || !gf.is_aligned_to(&grid) {
        return Err(invalid("test functions are not constant on the walk slots"));
    }
    let st = r(tau.sqrt());
    let mut m = eye(dim_h);
    for &t in grid.iter().take(n) {
        m = sandwich(g, &(f.value_at(t) * st), &(gf.value_at(t) * st), dim_h) * m;
    }
    let mut tail = r(1.0);
    for &t in &grid[n..slots] {
        tail *= r(1.0) + f.value_at(t).dotc(&gf.value_at(t)) * tau;
    }
    Ok(u.dotc(&(m * v)) * tail)
}

/// Isometry `(ℂ ⊕ K)^{⊗n} → Γ(L²([0, nτ); K))`, slotwise `(c, x) ↦ cΩ + x` with `x`
/// placed in the one-particle level of the slot.
pub fn toy_embedding(dim_k: usize, slots: usize, tau: f64, cutoff: usize) -> Result<(SlicedFock, CMat)> {
    let sliced = SlicedFock::new(vec![tau; slots], dim_k, cutoff.max(1))?;
    let space = sliced.slot_space();
    let mut local = CMat::zeros(space.dim(), dim_k + 1);
    local[(0, 0)] = r(1.0);
    for i in 0..dim_k {
        let mut occ = vec![0; dim_k];
        occ[i] = 1;
        local[(space.index_of(&occ).expect("one-particle state"), i + 1)] = r(1.0);
    }
    let mut d = CMat::from_element(1, 1, r(1.0));
    for _ in 0..slots {
        d = kron(&d, &local);
    }
    Ok((sliced, d))
}

/// The limit `F̃ = F ⊕ 0` together with its quasifree form and uniqueness data.
#[derive(Clone, Debug)]
pub struct LimitGenerator {
    /// Gaussian generator over `K = k ⊕ k̄ ⊕ K₀`.
    pub f_tilde: HPGenerator,
    /// Gaussian generator over `k ⊕ k̄`.
    pub f: HPGenerator,
    pub qf: QFGenerator,
    /// `‖L − (Σ(ρ) ⊗ I)[Q; −Q^c]‖_max` with `Q = iφ_ρ(H_I)`.
    pub quasifree_residual: f64,
    /// `‖L_{K₀}‖_max`, zero under off-diagonality.
    pub k0_residual: f64,
    /// `‖L*L − ρ̃(H_I²)‖_max`.
    pub dissipation_residual: f64,
    /// Smallest singular value of `z ↦ (⟨z| ⊗ I)L₁`.
    pub independence_margin: f64,
    /// Orthonormal basis of `k^{L₁}`.
    pub degeneracy: CMat,
    /// Whether `Ξ(U)` reduces to `{Σ(ρ)}`.
    pub unique: bool,
}

/// Limit generator `K = iH_S + iρ(H_P) − ½ρ̃(H_I²)`, `L = iJ*π̃(H_I)(|ω⟩ ⊗ I)`.
pub fn limit_generator(model: &WalkModel, gns: &GNSModel, tol: f64) -> Result<LimitGenerator> {
    let dh = model.dim_h;
    let (alpha, residual) = gns.diagonal_block_defect(&model.h_i, dh);
    if residual > tol {
        return Err(QfError::Hypothesis { alpha, residual });
    }
    let dk = gns.dim_k();
    let pit = gns.pi_tilde(&model.h_i, dh);
    let n_noise = gns.dim_noise();
    let l_full = pit.view((dh, 0), (n_noise * dh, dh)).into_owned() * I;
    let l_kk = l_full.rows(0, 2 * dk * dh).into_owned();
    let l_k0 = l_full.rows(2 * dk * dh, gns.dim_k0 * dh).into_owned();
    let h_lim = &model.h_s + eye(dh) * r(gns.rho(&model.h_p));
    let h_lim = (&h_lim + h_lim.adjoint()) * r(0.5);

    let ltilde = vstack(&[&l_kk, &CMat::zeros(gns.dim_k0 * dh, dh)]);
    let f_tilde = HPGenerator::gaussian(h_lim.clone(), ltilde, tol.max(1e-10))?;
    let f = HPGenerator::gaussian(h_lim.clone(), l_kk.clone(), tol.max(1e-10))?;
    let (qhat, _) = gns.phi_rho(&model.h_i, dh);
    let qf = QFGenerator::new(h_lim, qhat * I, gns.sigma.clone(), tol.max(1e-10))?;
    let quasifree_residual = max_abs(&(&qf.l - &l_kk));
    let h2 = &model.h_i * &model.h_i;
    let dissipation_residual = max_abs(&(l_full.adjoint() * &l_full - gns.rho_tilde(&h2, dh)));

    let l1 = l_kk.rows(0, dk * dh).into_owned();
    let independence_margin = if dk == 0 {
        f64::INFINITY
    } else {
        degeneracy_singular_values(&l1, dk).last().copied().unwrap_or(0.0)
    };
    let degeneracy = degeneracy_space(&l1, dk, 1e-8);
    let unique = match amplitude_set(&f, &gns.sigma.a, 1e-8)? {
        Some(set) => set.is_singleton(),
        None => false,
    };
    Ok(LimitGenerator {
        f_tilde,
        f,
        qf,
        quasifree_residual,
        k0_residual: max_abs(&l_k0),
        dissipation_residual,
        independence_margin,
        degeneracy,
        unique,
    })
}

#[derive(Clone, Debug, PartialEq)]
pub struct ConvergenceRow {
    pub n: usize,
    pub tau: f64,
    pub abs_error: f64,
    /// Error of the previous row divided by this one.
    pub ratio: Option<f64>,
}

#[derive(Clone, Debug)]
pub struct ConvergenceStudy {
    pub reference: C64,
    pub rows: Vec<ConvergenceRow>,
    /// Least-squares slope of `log error` against `log τ`.
    pub slope: f64,
    pub strictly_decreasing: bool,
}

/// Walk matrix elements at `τ = t/n` against the limit cocycle at time `t`.
#[allow(clippy::too_many_arguments)]
pub fn convergence_study(
    model: &WalkModel,
    gns: &GNSModel,
    limit: &LimitGenerator,
    f: &StepFunction,
    g: &StepFunction,
    u: &CVec,
    v: &CVec,
    t: f64,
    ns: &[usize],
) -> Result<ConvergenceStudy> {
    if ns.is_empty() || ns.contains(&0) {
        return Err(invalid("step counts must be positive"));
    }
    let reference = cocycle_element(&limit.f_tilde, f, g, u, v, t)?;
    let errors: Vec<Result<(usize, f64, f64)>> = ns
        .par_iter()
        .map(|&n| {
            let tau = t / n as f64;
            let ig = interaction_generator(model, gns, tau)?;
            let slots = n.max((f.support_end().max(g.support_end()) / tau - 1e-9).ceil() as usize);
            let walk = walk_element(&ig.g, model.dim_h, &f.resample(tau, slots), &g.resample(tau, slots), u, v, n, tau)?;
            Ok((n, tau, (walk - reference).norm()))
        })
        .collect();
    let mut rows: Vec<ConvergenceRow> = Vec::with_capacity(ns.len());
    for e in errors {
        let (n, tau, abs_error) = e?;
        let ratio = rows.last().map(|p| p.abs_error / abs_error);
        rows.push(ConvergenceRow { n, tau, abs_error, ratio });
    }
    let strictly_decreasing = rows.windows(2).all(|w| w[1].abs_error < w[0].abs_error);
    Ok(ConvergenceStudy { reference, slope: log_slope(&rows), rows, strictly_decreasing })
}

fn log_slope(rows: &[ConvergenceRow]) -> f64 {
    let pts: Vec<(f64, f64)> = rows
        .iter()
        .filter(|row| row.abs_error > 0.0)
        .map(|row| (row.tau.ln(), row.abs_error.ln()))
        .collect();
    if pts.len() < 2 {
        return f64::NAN;
    }
    let m = pts.len() as f64;
    let mx = pts.iter().map(|p| p.0).sum::<f64>() / m;
    let my = pts.iter().map(|p| p.1).sum::<f64>() / m;
    let sxy: f64 = pts.iter().map(|p| (p.0 - mx) * (p.1 - my)).sum();
    let sxx: f64 = pts.iter().map(|p| (p.0 - mx).powi(2)).sum();
    sxy / sxx
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::{c, op_norm, unitary_defect};
    use crate::sample;
    use crate::walk::gns_build;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn qubit() -> (WalkModel, GNSModel) {
        let m = WalkModel::thermal_qubit(0.8, 2, 1.0, 1.0, 1.0).unwrap();
        let g = gns_build(&m.rho, 1e-10).unwrap();
        (m, g)
    }

    #[test]
    fn generator_is_unitary_and_scaled_residual_converges() {
        let (m, gns) = qubit();
        let lim = limit_generator(&m, &gns, 1e-10).unwrap();
        let mut prev = f64::INFINITY;
        for &tau in &[1e-2, 1e-3, 1e-4] {
            let ig = interaction_generator(&m, &gns, tau).unwrap();
            assert!(unitary_defect(&ig.g) < 1e-12);
            let err = op_norm(&(&ig.scaled_residual - &lim.f_tilde.f));
            assert!(err < prev);
            prev = err;
        }
        assert!(prev < 0.05);
    }

    #[test]
    fn limit_is_quasifree_and_unique() {
        let (m, gns) = qubit();
        let lim = limit_generator(&m, &gns, 1e-10).unwrap();
        assert!(lim.quasifree_residual < 1e-12);
        assert!(lim.k0_residual < 1e-12);
        assert!(lim.dissipation_residual < 1e-12);
        assert!(lim.unique);
        assert_eq!(lim.degeneracy.ncols(), 0);
        assert!(lim.independence_margin > 1e-8);
        let lift = lim.qf.sigma_lift();
        assert!(max_abs(&(&lift.f - &lim.f.f)) < 1e-12);
        // L₁ = i√γ₁ (coupling slice), with γ = (0.8, 0.2) and slice σ_x
        let l1 = lim.f.l.rows(0, 2).into_owned();
        let sx = CMat::from_row_slice(2, 2, &[r(0.0), r(1.0), r(1.0), r(0.0)]);
        assert!(max_abs(&(l1 - sx * c(0.0, 0.8f64.sqrt()))) < 1e-12);
    }

    #[test]
    fn diagonal_coupling_is_rejected() {
        let rho = CMat::from_diagonal(&CVec::from_vec(vec![r(0.7), r(0.3)]));
        let sz = CMat::from_diagonal(&CVec::from_vec(vec![r(1.0), r(-1.0)]));
        let m = WalkModel::new(rho, sz.clone(), sz.clone(), kron(&sz, &sz), 1e-12).unwrap();
        let gns = gns_build(&m.rho, 1e-10).unwrap();
        assert!(matches!(limit_generator(&m, &gns, 1e-10), Err(QfError::Hypothesis { .. })));
    }

    #[test]
    fn walk_matches_dense_two_slot_product() {
        let (m, gns) = qubit();
        let tau = 0.05;
        let ig = interaction_generator(&m, &gns, tau).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let d = gns.dim_noise();
        let f = StepFunction::new(d, vec![(tau, sample::complex_vector(&mut rng, d)), (tau, sample::complex_vector(&mut rng, d))]).unwrap();
        let g = StepFunction::new(d, vec![(tau, sample::complex_vector(&mut rng, d)), (tau, sample::complex_vector(&mut rng, d))]).unwrap();
        let u = sample::complex_vector(&mut rng, 2);
        let v = sample::complex_vector(&mut rng, 2);
        let got = walk_element(&ig.g, 2, &f, &g, &u, &v, 2, tau).unwrap();

        // U₂ = σ₁(G)σ₀(G) on K̂ ⊗ K̂ ⊗ h, slot 0 first
        let dhat = gns.dim_hat();
        let on_slot1 = kron(&eye(dhat), &ig.g);
        let mut on_slot0 = CMat::zeros(dhat * dhat * 2, dhat * dhat * 2);
        for a in 0..dhat {
            for b in 0..dhat {
                for x in 0..dhat {
                    for y in 0..dhat {
                        for s in 0..2 {
                            for t in 0..2 {
                                on_slot0[((a * dhat + x) * 2 + s, (b * dhat + y) * 2 + t)] =
                                    if x == y { ig.g[(a * 2 + s, b * 2 + t)] } else { r(0.0) };
                            }
                        }
                    }
                }
            }
        }
        let st = r(tau.sqrt());
        let toy = |h: &StepFunction| {
            let x0 = crate::fock::hat(&(h.value_at(0.0) * st));
            let x1 = crate::fock::hat(&(h.value_at(tau) * st));
            crate::fock::kron_vec(&x0, &x1)
        };
        let lhs = crate::fock::kron_vec(&toy(&f), &u);
        let rhs = crate::fock::kron_vec(&toy(&g), &v);
        let dense = lhs.dotc(&(on_slot1 * on_slot0 * rhs));
        assert!((dense - got).norm() < 1e-12);
        // a slot beyond n contributes 1 + τ⟨f_j, g_j⟩
        let one = walk_element(&ig.g, 2, &f, &g, &u, &v, 1, tau).unwrap();
        let x0 = sandwich(&ig.g, &(f.value_at(0.0) * st), &(g.value_at(0.0) * st), 2);
        let expect = u.dotc(&(x0 * &v)) * (r(1.0) + f.value_at(tau).dotc(&g.value_at(tau)) * tau);
        assert!((one - expect).norm() < 1e-12);
    }

    #[test]
    fn toy_embedding_is_isometric_and_pairs_with_exponentials() {
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        let (d, tau) = (2, 0.3);
        let (sliced, emb) = toy_embedding(d, 2, tau, 3).unwrap();
        assert!(max_abs(&(emb.adjoint() * &emb - eye(9))) < 1e-15);
        let f = StepFunction::new(d, vec![(tau, sample::complex_vector(&mut rng, d)), (tau, sample::complex_vector(&mut rng, d))]).unwrap();
        let xi = sample::complex_vector(&mut rng, 9);
        let lhs = (&emb * &xi).dotc(&sliced.exponential_vector(&f).unwrap());
        let st = r(tau.sqrt());
        let toy = crate::fock::kron_vec(&crate::fock::hat(&(f.value_at(0.0) * st)), &crate::fock::hat(&(f.value_at(tau) * st)));
        assert!((lhs - xi.dotc(&toy)).norm() < 1e-13);
    }

    #[test]
    fn misaligned_test_function_rejected() {
        let (m, gns) = qubit();
        let ig = interaction_generator(&m, &gns, 0.1).unwrap();
        let f = StepFunction::constant(CVec::from_element(3, r(1.0)), 0.15);
        let u = CVec::from_element(2, r(1.0));
        assert!(walk_element(&ig.g, 2, &f, &f, &u, &u, 2, 0.1).is_err());
    }
}
