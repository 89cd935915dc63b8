//! Σ-generators `[[K, −Q*], [Q, 0]]` and their lifts to HP generators on `(k ⊕ k̄)^ ⊗ h`.

use crate::algebra::{pc, AWAmplitude};
use crate::error::{QfError, Result};
use crate::linalg::{
    eye, herm_defect, kron, max_abs, r, singular_values, vstack, CMat, CVec, I,
};
use crate::qsc::HPGenerator;

/// `Σ ⊗ I_h`.
fn sigma_tensor(sigma: &CMat, dim_h: usize) -> CMat {
    kron(sigma, &eye(dim_h))
}

/// `L = (Σ ⊗ I)[Q; R^{*c}]` and `M = [R, Q^{c*}](Σ* ⊗ I)` of a Σ-integrand `(K, Q, R)`.
pub fn lift_parts(q: &CMat, rr: &CMat, sigma: &CMat) -> (CMat, CMat) {
    let dh = q.ncols();
    let dk = q.nrows() / dh;
    let st = sigma_tensor(sigma, dh);
    let l = &st * vstack(&[q, &pc(&rr.adjoint(), dk)]);
    let m = crate::linalg::hstack(&[rr, &pc(q, dk).adjoint()]) * st.adjoint();
    (l, m)
}

/// `G^Σ = [[K, M], [L, 0]]` on `(ℂ ⊕ k ⊕ k̄) ⊗ h`.
pub fn lift_integrand(k: &CMat, q: &CMat, rr: &CMat, sigma: &AWAmplitude) -> CMat {
    let (l, m) = lift_parts(q, rr, &sigma.sigma);
    crate::fock::integrand_blocks(k, &l, &m, &CMat::zeros(l.nrows(), l.nrows()))
}

/// `G^□ = [[K, R, Q^{c*}], [Q, 0, 0], [R^{*c}, 0, 0]]`.
pub fn square_form(k: &CMat, q: &CMat, rr: &CMat) -> CMat {
    let dh = k.nrows();
    let dk = q.nrows() / dh;
    let l = vstack(&[q, &pc(&rr.adjoint(), dk)]);
    let m = crate::linalg::hstack(&[rr, &pc(q, dk).adjoint()]);
    crate::fock::integrand_blocks(k, &l, &m, &CMat::zeros(l.nrows(), l.nrows()))
}

/// `Σ̂ = diag(1, Σ) ⊗ I_h`.
pub fn sigma_hat(sigma: &AWAmplitude, dim_h: usize) -> CMat {
    kron(&crate::linalg::direct_sum(&eye(1), &sigma.sigma), &eye(dim_h))
}

/// A Σ-quasifree generator with its derived `L = (Σ ⊗ I)[Q; −Q^c]`.
#[derive(Clone, Debug, PartialEq)]
pub struct QFGenerator {
    pub dim_k: usize,
    pub dim_h: usize,
    pub h: CMat,
    pub k: CMat,
    pub q: CMat,
    pub sigma: AWAmplitude,
    pub l: CMat,
}

impl QFGenerator {
    /// From `H = H*` and `Q`, with `K = iH − ½L*L`.
    pub fn new(h: CMat, q: CMat, sigma: AWAmplitude, tol: f64) -> Result<Self> {
        let dh = h.nrows();
        if !h.is_square() || q.ncols() != dh || q.nrows() != sigma.dim_k * dh {
            return Err(QfError::InvalidGenerator(format!(
                "H is {:?}, Q is {:?} and dim k is {}",
                h.shape(),
                q.shape(),
                sigma.dim_k
            )));
        }
        let hd = herm_defect(&h);
        if hd > tol {
            return Err(QfError::InvalidGenerator(format!("H is not self-adjoint (defect {hd:e})")));
        }
        let l = &sigma_tensor(&sigma.sigma, dh) * vstack(&[&q, &(-pc(&q, sigma.dim_k))]);
        let k = &h * I - l.adjoint() * &l * r(0.5);
        Ok(Self { dim_k: sigma.dim_k, dim_h: dh, h, k, q, sigma, l })
    }

    /// From integrand blocks `(K, Q, R)`; a generator forces `R = −Q*` and `K + K* + L*L = 0`.
    pub fn from_blocks(k: CMat, q: CMat, rr: CMat, sigma: AWAmplitude, tol: f64) -> Result<Self> {
        let x = max_abs(&(&q + rr.adjoint()));
        if x > tol {
            return Err(QfError::InvalidGenerator(format!("Q + R* does not vanish (residual {x:e})")));
        }
        let h = (&k - k.adjoint()) * (-I * 0.5);
        let gen = Self::new(h, q, sigma, tol)?;
        let res = max_abs(&(&k - &gen.k));
        if res > tol * (1.0 + max_abs(&k)) {
            return Err(QfError::InvalidGenerator(format!("K + K* + L*L does not vanish (residual {res:e})")));
        }
        Ok(gen)
    }

    /// Quasifree pure noise on `h = ℂ`: `H = α`, `Q = |x⟩`.
    pub fn pure_noise(x: &CVec, alpha: f64, sigma: AWAmplitude) -> Result<Self> {
        Self::new(eye(1) * r(alpha), CMat::from_column_slice(x.len(), 1, x.as_slice()), sigma, 1e-12)
    }

    /// `‖K + K* + L*L‖`.
    pub fn structure_residual(&self) -> f64 {
        max_abs(&(&self.k + self.k.adjoint() + self.l.adjoint() * &self.l))
    }

    /// `[[K, −Q*], [Q, 0]]` on `k̂ ⊗ h`.
    pub fn block_form(&self) -> CMat {
        let z = CMat::zeros(self.q.nrows(), self.q.nrows());
        crate::fock::integrand_blocks(&self.k, &self.q, &(-self.q.adjoint()), &z)
    }

    /// `Q^c`.
    pub fn q_conj(&self) -> CMat {
        pc(&self.q, self.dim_k)
    }

    /// The Gaussian HP generator `G^Σ = [[K, −L*], [L, 0]]`.
    pub fn sigma_lift(&self) -> HPGenerator {
        HPGenerator::gaussian(self.h.clone(), self.l.clone(), f64::INFINITY).expect("shapes were checked")
    }

    /// `ψ(a)` as integrand blocks `(K_ψ, Q_ψ, R_ψ)`.
    pub fn psi(&self, a: &CMat) -> (CMat, CMat, CMat) {
        let ll = self.l.adjoint() * &self.l;
        let ia = kron(&eye(self.dim_k), a);
        let ib = kron(&eye(2 * self.dim_k), a);
        let k = (&self.h * a - a * &self.h) * (-I) - (&ll * a + a * &ll) * r(0.5) + self.l.adjoint() * ib * &self.l;
        let q = &ia * &self.q - &self.q * a;
        let rr = self.q.adjoint() * &ia - a * self.q.adjoint();
        (k, q, rr)
    }
}

/// Smallest singular value of the real-linear map `X ↦ (Σ ⊗ I)[X; X^c]` on `B(h; k ⊗ h)`.
pub fn doubled_kernel_margin(sigma: &AWAmplitude, dim_h: usize) -> f64 {
    let dk = sigma.dim_k;
    let st = sigma_tensor(&sigma.sigma, dim_h);
    let n = dk * dim_h * dim_h;
    let mut real = nalgebra::DMatrix::<f64>::zeros(4 * n, 2 * n);
    let mut col = 0;
    for scale in [r(1.0), I] {
        for idx in 0..n {
            let mut x = CMat::zeros(dk * dim_h, dim_h);
            x[(idx % (dk * dim_h), idx / (dk * dim_h))] = scale;
            let img = &st * vstack(&[&x, &pc(&x, dk)]);
            for (i, z) in img.iter().enumerate() {
                real[(i, col)] = z.re;
                real[(2 * n + i, col)] = z.im;
            }
            col += 1;
        }
    }
    singular_values(&real.map(r)).last().cloned().unwrap_or(0.0)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::{make_amplitude, Conjugation, SymplecticTriple};
    use crate::linalg::c;
    use crate::qsc::theta;
    use crate::sample;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn gauge(rng: &mut ChaCha8Rng, dk: usize) -> AWAmplitude {
        make_amplitude(&sample::positive(rng, dk, 1.0), None).unwrap()
    }

    #[test]
    fn zero_generator() {
        let s = make_amplitude(&CMat::zeros(2, 2), None).unwrap();
        let g = QFGenerator::new(CMat::zeros(2, 2), CMat::zeros(4, 2), s, 1e-12).unwrap();
        assert_eq!(max_abs(&g.block_form()), 0.0);
        assert_eq!(max_abs(&g.sigma_lift().f), 0.0);
    }

    #[test]
    fn structure_and_lift() {
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        for _ in 0..5 {
            let s = gauge(&mut rng, 2);
            let g = QFGenerator::new(sample::hermitian(&mut rng, 2), sample::complex_matrix(&mut rng, 4, 2), s.clone(), 1e-12)
                .unwrap();
            assert!(g.structure_residual() < 1e-13);
            let f = g.sigma_lift();
            let (a, b) = f.structure_residuals();
            assert!(a < 1e-12 && b < 1e-12);
            let lifted = lift_integrand(&g.k, &g.q, &(-g.q.adjoint()), &s);
            assert!(max_abs(&(&lifted - &f.f)) < 1e-13);
            let sh = sigma_hat(&s, 2);
            let sandwich = &sh * square_form(&g.k, &g.q, &(-g.q.adjoint())) * sh.adjoint();
            assert!(max_abs(&(sandwich - &f.f)) < 1e-13);
        }
    }

    #[test]
    fn vacuum_amplitude_compresses() {
        let mut rng = ChaCha8Rng::seed_from_u64(2);
        let s = make_amplitude(&CMat::zeros(1, 1), None).unwrap();
        let q = sample::complex_matrix(&mut rng, 2, 2);
        let g = QFGenerator::new(sample::hermitian(&mut rng, 2), q.clone(), s, 1e-12).unwrap();
        let f = g.sigma_lift().f;
        assert!(max_abs(&(f.view((2, 0), (2, 2)) - &q)) < 1e-15);
        assert!(max_abs(&f.view((4, 0), (2, 2)).into_owned()) < 1e-15);
        assert!(max_abs(&f.view((0, 4), (2, 2)).into_owned()) < 1e-15);
    }

    #[test]
    fn pure_noise_time_part() {
        let a = 0.4;
        let s = make_amplitude(&(eye(1) * r(a)), None).unwrap();
        let x = CVec::from_vec(vec![c(0.3, -0.2)]);
        let g = QFGenerator::pure_noise(&x, 0.5, s).unwrap();
        let expected = c(0.0, 0.5) - r(0.5 * (2.0 * a).cosh() * x.norm_squared());
        assert!((g.k[(0, 0)] - expected).norm() < 1e-14);
    }

    #[test]
    fn forced_vanishing_of_q_plus_r_star() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let s = gauge(&mut rng, 1);
        let g = QFGenerator::new(sample::hermitian(&mut rng, 2), sample::complex_matrix(&mut rng, 2, 2), s.clone(), 1e-12)
            .unwrap();
        let ok = QFGenerator::from_blocks(g.k.clone(), g.q.clone(), -g.q.adjoint(), s.clone(), 1e-10).unwrap();
        assert!(max_abs(&(ok.h - &g.h)) < 1e-12);
        let bad = -g.q.adjoint() + CMat::from_element(2, 2, r(1e-3));
        assert!(matches!(QFGenerator::from_blocks(g.k.clone(), g.q.clone(), bad, s, 1e-10), Err(QfError::InvalidGenerator(_))));
    }

    #[test]
    fn psi_lifts_to_theta() {
        let mut rng = ChaCha8Rng::seed_from_u64(4);
        let s = gauge(&mut rng, 2);
        let g = QFGenerator::new(sample::hermitian(&mut rng, 2), sample::complex_matrix(&mut rng, 4, 2), s.clone(), 1e-12)
            .unwrap();
        let a = sample::complex_matrix(&mut rng, 2, 2);
        let (k, q, rr) = g.psi(&a);
        let lifted = lift_integrand(&k, &q, &rr, &s);
        assert!(max_abs(&(lifted - theta(&g.sigma_lift(), &a))) < 1e-12);
    }

    #[test]
    fn doubled_map_is_injective() {
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        let u = sample::unitary(&mut rng, 2);
        let p = &u * CMat::from_diagonal(&CVec::from_vec(vec![r(0.5), r(1.2)])) * u.adjoint();
        let t = SymplecticTriple::new(sample::unitary(&mut rng, 2), Conjugation::new(&u * u.transpose(), 1e-12).unwrap(), p, 1e-10)
            .unwrap();
        let s = make_amplitude(&sample::positive(&mut rng, 2, 1.0), Some(t)).unwrap();
        assert!(doubled_kernel_margin(&s, 2) > 1e-6);
    }
}
