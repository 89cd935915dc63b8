//! Recognising quasifree cocycles, squeezing changes of variables and amplitude uniqueness.

use super::generator::QFGenerator;
use crate::algebra::{build_symplectic, degeneracy_space, make_amplitude, pc, AWAmplitude, SymplecticTriple};
use crate::error::{invalid, Result};
use crate::linalg::{
    bra_tensor, conj, eye, herm_eig, herm_fn, ket_tensor, kron, max_abs, r, row_slice, trace, vstack, CMat, CVec, I,
};
use crate::qsc::HPGenerator;

/// `Q` with `L = (Σ_A ⊗ I)[Q; −Q^c]`, or nothing when `L₂ + (conj(tanh A) ⊗ I)L₁^c` exceeds `tol`.
pub fn recognize_quasifree(gen: &HPGenerator, sigma: &AWAmplitude, tol: f64) -> Result<Option<CMat>> {
    let dk = sigma.dim_k;
    let dh = gen.dim_h;
    if !sigma.is_gauge_invariant() {
        return Err(invalid("recognition needs a gauge-invariant amplitude"));
    }
    if gen.dim_k != 2 * dk {
        return Err(invalid(format!("noise dimension {} is not 2 × dim k = {}", gen.dim_k, 2 * dk)));
    }
    if !gen.is_gaussian(tol) {
        return Ok(None);
    }
    let l1 = gen.l.rows(0, dk * dh).into_owned();
    let l2 = gen.l.rows(dk * dh, dk * dh).into_owned();
    let tanh_bar = kron(&conj(&sigma.tanh_a()), &eye(dh));
    let residual = max_abs(&(&l2 + tanh_bar * pc(&l1, dk)));
    if residual > tol {
        return Ok(None);
    }
    let cosh_inv = herm_fn(&sigma.a, |x| 1.0 / x.cosh());
    Ok(Some(kron(&cosh_inv, &eye(dh)) * l1))
}

/// `(Q̃, R̃)` with `Λ^{ΣM}(K, Q̃, R̃) = Λ^Σ(K, Q, R)` for `M = M^{V,C,P}`.
pub fn change_of_variables(q: &CMat, rr: &CMat, t: &SymplecticTriple) -> (CMat, CMat) {
    let dh = q.ncols();
    let dk = t.dim();
    let id = eye(dh);
    let c = t.cosh_p();
    let s = t.sinh_p();
    let cv = &t.c.mat;
    let r_star_c = pc(&rr.adjoint(), dk);
    let q_c_star = pc(q, dk).adjoint();
    let qt = kron(&(&c * t.v.adjoint()), &id) * q - kron(&(cv * conj(&s) * t.v.transpose()), &id) * r_star_c;
    let rt = rr * kron(&(&t.v * &c), &id) - q_c_star * kron(&(conj(&t.v) * conj(cv) * &s), &id);
    (qt, rt)
}

/// `(Σ̃ ⊗ I)[[Q̃, R̃*], [R̃^{*c}, Q̃^c]] − (Σ ⊗ I)[[Q, R*], [R^{*c}, Q^c]]`, entrywise max.
pub fn change_of_variables_residual(
    q: &CMat,
    rr: &CMat,
    qt: &CMat,
    rt: &CMat,
    sigma: &CMat,
    sigma_tilde: &CMat,
) -> f64 {
    let dh = q.ncols();
    let dk = q.nrows() / dh;
    let doubled = |q: &CMat, rr: &CMat| {
        let left = vstack(&[q, &pc(&rr.adjoint(), dk)]);
        let right = vstack(&[&rr.adjoint(), &pc(q, dk)]);
        crate::linalg::hstack(&[&left, &right])
    };
    let lhs = kron(sigma_tilde, &eye(dh)) * doubled(qt, rt);
    let rhs = kron(sigma, &eye(dh)) * doubled(q, rr);
    max_abs(&(lhs - rhs))
}

/// `Σ̃ = Σ M^{V,C,P}` as a matrix.
pub fn squeezed_sigma(sigma: &AWAmplitude, t: &SymplecticTriple) -> CMat {
    sigma.with_squeeze(&crate::algebra::squeezing_matrix(&build_symplectic(t)))
}

/// The gauge-invariant amplitudes for which a recognised cocycle is quasifree.
#[derive(Clone, Debug)]
pub struct AmplitudeSet {
    pub a0: CMat,
    /// Orthonormal basis of `k^{L₁}` as columns.
    pub degeneracy: CMat,
    /// Orthonormal basis of `k^Q`.
    pub q_degeneracy: CMat,
    pub tol: f64,
}

impl AmplitudeSet {
    pub fn is_singleton(&self) -> bool {
        self.degeneracy.ncols() == 0
    }

    /// `k^{L₁} = {0} ⇔ k^Q = {0}`.
    pub fn degeneracies_agree(&self) -> bool {
        (self.degeneracy.ncols() == 0) == (self.q_degeneracy.ncols() == 0)
    }

    /// `Ã ⪰ 0` and `Ran(tanh Ã − tanh A₀) ⊆ k^{L₁}`.
    pub fn contains(&self, a: &CMat) -> bool {
        if a.shape() != self.a0.shape() || max_abs(&(a - a.adjoint())) > self.tol {
            return false;
        }
        let (vals, _) = herm_eig(a);
        if vals.first().is_some_and(|&m| m < -self.tol) {
            return false;
        }
        let d = herm_fn(a, f64::tanh) - herm_fn(&self.a0, f64::tanh);
        let proj = &self.degeneracy * self.degeneracy.adjoint();
        let outside = (eye(d.nrows()) - proj) * d;
        max_abs(&outside) <= self.tol
    }
}

/// Degeneracy data describing `Ξ(U)`, given one amplitude `Σ_{A₀}` for which `gen` is recognised.
pub fn amplitude_set(gen: &HPGenerator, a0: &CMat, tol: f64) -> Result<Option<AmplitudeSet>> {
    let sigma = make_amplitude(a0, None)?;
    let q = match recognize_quasifree(gen, &sigma, tol)? {
        Some(q) => q,
        None => return Ok(None),
    };
    let dk = sigma.dim_k;
    let l1 = gen.l.rows(0, dk * gen.dim_h).into_owned();
    Ok(Some(AmplitudeSet {
        a0: sigma.a.clone(),
        degeneracy: degeneracy_space(&l1, dk, tol),
        q_degeneracy: degeneracy_space(&q, dk, tol),
        tol,
    }))
}

/// `(x, α)` with `Q̃ − Q = |x⟩ ⊗ I` and `H̃ − H − (i/2)((⟨x| ⊗ I)Q − Q*(|x⟩ ⊗ I)) = αI`, with the worst residual.
pub fn same_flow_qf_witness(g: &QFGenerator, gt: &QFGenerator) -> Option<(CVec, f64, f64)> {
    if g.dim_k != gt.dim_k || g.dim_h != gt.dim_h || max_abs(&(&g.sigma.sigma - &gt.sigma.sigma)) > 1e-12 {
        return None;
    }
    let dh = g.dim_h;
    let scale = r(1.0 / dh as f64);
    let dq = &gt.q - &g.q;
    let x = CVec::from_fn(g.dim_k, |i, _| trace(&row_slice(&dq, i, dh)) * scale);
    let res_x = max_abs(&(&dq - ket_tensor(&x, dh)));
    let shift = (bra_tensor(&x, dh) * &g.q - g.q.adjoint() * ket_tensor(&x, dh)) * (I * 0.5);
    let a = &gt.h - &g.h - shift;
    let alpha = trace(&a) * scale;
    let res_a = max_abs(&(&a - eye(dh) * r(alpha.re))).max(alpha.im.abs());
    Some((x, alpha.re, res_x.max(res_a)))
}

pub fn same_flow_qf(g: &QFGenerator, gt: &QFGenerator, tol: f64) -> Option<(CVec, f64)> {
    same_flow_qf_witness(g, gt).and_then(|(x, a, res)| (res <= tol).then_some((x, a)))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::{compose_squeeze, Conjugation};
    use crate::qsc::same_flow;
    use crate::sample;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn triple(rng: &mut ChaCha8Rng, d: usize) -> SymplecticTriple {
        let u = sample::unitary(rng, d);
        let pd: Vec<_> = (0..d).map(|_| r(0.2 + rand::Rng::gen::<f64>(rng))).collect();
        let p = &u * CMat::from_diagonal(&CVec::from_vec(pd)) * u.adjoint();
        let cm = &u * u.transpose();
        SymplecticTriple::new(sample::unitary(rng, d), Conjugation::new(cm, 1e-12).unwrap(), p, 1e-10).unwrap()
    }

    fn random_qf(rng: &mut ChaCha8Rng, dk: usize, dh: usize) -> QFGenerator {
        let s = make_amplitude(&sample::positive(rng, dk, 1.0), None).unwrap();
        QFGenerator::new(sample::hermitian(rng, dh), sample::complex_matrix(rng, dk * dh, dh), s, 1e-12).unwrap()
    }

    #[test]
    fn recognition_inverts_the_lift() {
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        let g = random_qf(&mut rng, 2, 2);
        let q = recognize_quasifree(&g.sigma_lift(), &g.sigma, 1e-10).unwrap().unwrap();
        assert!(max_abs(&(q - &g.q)) < 1e-12);

        let mut bad = g.sigma_lift();
        bad.l[(5, 1)] += r(1e-3);
        let bad = HPGenerator::gaussian(bad.h.clone(), bad.l.clone(), 1e-12).unwrap();
        assert!(recognize_quasifree(&bad, &g.sigma, 1e-10).unwrap().is_none());
    }

    #[test]
    fn vacuum_amplitude_needs_vanishing_lower_block() {
        let s0 = make_amplitude(&CMat::zeros(1, 1), None).unwrap();
        let top = vstack(&[&eye(2), &CMat::zeros(2, 2)]);
        let g = HPGenerator::gaussian(CMat::zeros(2, 2), top, 1e-12).unwrap();
        assert!(recognize_quasifree(&g, &s0, 1e-10).unwrap().is_some());
        let both = vstack(&[&eye(2), &eye(2)]);
        let g = HPGenerator::gaussian(CMat::zeros(2, 2), both, 1e-12).unwrap();
        assert!(recognize_quasifree(&g, &s0, 1e-10).unwrap().is_none());
    }

    #[test]
    fn squeezing_change_of_variables() {
        let mut rng = ChaCha8Rng::seed_from_u64(2);
        let g = random_qf(&mut rng, 2, 2);
        let t = triple(&mut rng, 2);
        let rr = -g.q.adjoint();
        let (qt, rt) = change_of_variables(&g.q, &rr, &t);
        let st = squeezed_sigma(&g.sigma, &t);
        assert!(change_of_variables_residual(&g.q, &rr, &qt, &rt, &g.sigma.sigma, &st) < 1e-12);
        assert!(max_abs(&(&qt + rt.adjoint())) < 1e-12);

        let sigma_t = compose_squeeze(&g.sigma, &t, 1e-9).unwrap();
        let gt = QFGenerator::new(g.h.clone(), qt, sigma_t, 1e-12).unwrap();
        assert!(max_abs(&(gt.sigma_lift().f - g.sigma_lift().f)) < 1e-12);

        let id = SymplecticTriple::identity(2);
        let (q1, r1) = change_of_variables(&g.q, &rr, &id);
        assert!(max_abs(&(q1 - &g.q)) < 1e-15 && max_abs(&(r1 - &rr)) < 1e-15);
    }

    #[test]
    fn amplitude_sets() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let g = random_qf(&mut rng, 2, 2);
        let set = amplitude_set(&g.sigma_lift(), &g.sigma.a, 1e-10).unwrap().unwrap();
        assert!(set.is_singleton() && set.degeneracies_agree());
        assert!(set.contains(&g.sigma.a));
        assert!(!set.contains(&(&g.sigma.a + eye(2) * r(0.1))));

        let s = make_amplitude(&sample::positive(&mut rng, 2, 1.0), None).unwrap();
        let zero = QFGenerator::new(eye(1), CMat::zeros(2, 1), s, 1e-12).unwrap();
        let set = amplitude_set(&zero.sigma_lift(), &zero.sigma.a, 1e-10).unwrap().unwrap();
        assert_eq!(set.degeneracy.ncols(), 2);
        assert!(set.contains(&(eye(2) * r(3.0))));
    }

    #[test]
    fn one_dimensional_degeneracy_admits_perturbations() {
        let mut rng = ChaCha8Rng::seed_from_u64(4);
        let s = make_amplitude(&sample::positive(&mut rng, 2, 0.5), None).unwrap();
        // Q = |e₀⟩ ⊗ X leaves the direction orthogonal to cosh A e₀ degenerate in L₁
        let x = sample::complex_matrix(&mut rng, 2, 2);
        let e0 = CVec::from_vec(vec![r(1.0), r(0.0)]);
        let q = kron(&crate::linalg::ket(&e0), &x);
        let g = QFGenerator::new(sample::hermitian(&mut rng, 2), q, s.clone(), 1e-12).unwrap();
        let set = amplitude_set(&g.sigma_lift(), &s.a, 1e-10).unwrap().unwrap();
        assert_eq!(set.degeneracy.ncols(), 1);
        assert!(set.degeneracies_agree());
        let z = set.degeneracy.column(0).into_owned();
        let proj = &z * z.adjoint();
        let tanh_new = herm_fn(&s.a, f64::tanh) + proj * r(0.05);
        let a_new = herm_fn(&tanh_new, f64::atanh);
        assert!(set.contains(&a_new));
        let s_new = make_amplitude(&a_new, None).unwrap();
        assert!(recognize_quasifree(&g.sigma_lift(), &s_new, 1e-10).unwrap().is_some());
    }

    #[test]
    fn quasifree_flow_equality() {
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        let g = random_qf(&mut rng, 2, 2);
        let (x0, a0) = same_flow_qf(&g, &g, 1e-12).unwrap();
        assert!(x0.norm() < 1e-12 && a0.abs() < 1e-12);

        let x = sample::complex_vector(&mut rng, 2);
        let alpha = -0.4;
        let qt = &g.q + ket_tensor(&x, 2);
        let shift = (bra_tensor(&x, 2) * &g.q - g.q.adjoint() * ket_tensor(&x, 2)) * (I * 0.5);
        let ht = &g.h + shift + eye(2) * r(alpha);
        let gt = QFGenerator::new(ht, qt, g.sigma.clone(), 1e-12).unwrap();
        let (xf, af) = same_flow_qf(&g, &gt, 1e-10).unwrap();
        assert!((xf - &x).norm() < 1e-12 && (af - alpha).abs() < 1e-12);

        let noise = same_flow(&g.sigma_lift(), &gt.sigma_lift(), 1e-10).unwrap();
        assert!((noise.z - g.sigma.apply_doubled(&x)).norm() < 1e-10);
        assert!((noise.alpha - alpha).abs() < 1e-10);
    }
}
