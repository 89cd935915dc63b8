//! Doubling map, squeezing matrices and AW amplitudes on `k ⊕ k̄`.
//!
//! Vectors of `k̄` are stored in the same coordinates as `k`; the canonical
//! map `k → k̄` is entrywise conjugation.

use super::reallinear::RealLinearOp;
use super::symplectic::{build_symplectic, decompose_symplectic, SymplecticTriple};
use crate::error::{invalid, Result};
use crate::linalg::{conj, conj_vec, direct_sum, herm_defect, herm_eig, herm_fn, r, CMat, CVec};

/// `ι(x) = (x, −conj(x))`.
pub fn doubling(x: &CVec) -> CVec {
    let d = x.len();
    CVec::from_fn(2 * d, |i, _| if i < d { x[i] } else { -x[i - d].conj() })
}

/// `M_B = [[L, −Â], [−conj(Â), conj(L)]]`, the unique linear map with `M_B ι = ι B`.
pub fn squeezing_matrix(b: &RealLinearOp) -> CMat {
    let d = b.dim_in();
    let mut m = CMat::zeros(2 * d, 2 * d);
    m.view_mut((0, 0), (d, d)).copy_from(&b.linear);
    m.view_mut((0, d), (d, d)).copy_from(&(-&b.conj_linear));
    m.view_mut((d, 0), (d, d)).copy_from(&(-conj(&b.conj_linear)));
    m.view_mut((d, d), (d, d)).copy_from(&conj(&b.linear));
    m
}

/// `Σ_{A,B} = diag(cosh A, conj(sinh A)) · M_B` on `k ⊕ k̄`.
#[derive(Clone, Debug, PartialEq)]
pub struct AWAmplitude {
    pub dim_k: usize,
    pub a: CMat,
    pub squeeze: Option<SymplecticTriple>,
    pub sigma: CMat,
}

impl AWAmplitude {
    pub fn block(&self, i: usize, j: usize) -> CMat {
        let d = self.dim_k;
        self.sigma.view((i * d, j * d), (d, d)).into_owned()
    }

    pub fn cosh_a(&self) -> CMat {
        herm_fn(&self.a, f64::cosh)
    }

    pub fn sinh_a(&self) -> CMat {
        herm_fn(&self.a, f64::sinh)
    }

    pub fn tanh_a(&self) -> CMat {
        herm_fn(&self.a, f64::tanh)
    }

    pub fn is_gauge_invariant(&self) -> bool {
        self.squeeze.is_none()
    }

    /// `x ↦ Σι(x)` as a real-linear map `k → k ⊕ k̄`.
    pub fn sigma_iota(&self) -> RealLinearOp {
        let d = self.dim_k;
        RealLinearOp {
            linear: self.sigma.columns(0, d).into_owned(),
            conj_linear: -self.sigma.columns(d, d).into_owned(),
        }
    }

    pub fn apply_doubled(&self, x: &CVec) -> CVec {
        &self.sigma * doubling(x)
    }

    /// `‖Σι(x)‖²`.
    pub fn covariance(&self, x: &CVec) -> f64 {
        self.apply_doubled(x).norm_squared()
    }

    /// The same amplitude composed with a further squeeze, `Σ ↦ Σ M`.
    pub fn with_squeeze(&self, m: &CMat) -> CMat {
        &self.sigma * m
    }
}

/// `Σ_A` or `Σ_A M_B` from `A ⪰ 0` and optional squeezing data.
pub fn make_amplitude(a: &CMat, squeeze: Option<SymplecticTriple>) -> Result<AWAmplitude> {
    if !a.is_square() {
        return Err(invalid("amplitude A must be square"));
    }
    let d = a.nrows();
    let hd = herm_defect(a);
    if hd > 1e-10 {
        return Err(invalid(format!("amplitude A is not self-adjoint (defect {hd:e})")));
    }
    let (vals, _) = herm_eig(a);
    if let Some(&m) = vals.first() {
        if m < -1e-10 {
            return Err(invalid(format!("amplitude A is not non-negative (eigenvalue {m:e})")));
        }
    }
    let a = (a + a.adjoint()) * r(0.5);
    let gauge = direct_sum(&herm_fn(&a, f64::cosh), &conj(&herm_fn(&a, f64::sinh)));
    let sigma = match &squeeze {
        None => gauge,
        Some(t) => {
            if t.dim() != d {
                return Err(invalid("squeezing triple acts on a different space than A"));
            }
            gauge * squeezing_matrix(&build_symplectic(t))
        }
    };
    Ok(AWAmplitude { dim_k: d, a, squeeze, sigma })
}

/// `Σ M` for a further squeeze `M = M^{V,C,P}`, keeping the generating data consistent.
pub fn compose_squeeze(sigma: &AWAmplitude, t: &SymplecticTriple, tol: f64) -> Result<AWAmplitude> {
    if t.dim() != sigma.dim_k {
        return Err(invalid("squeezing triple acts on a different space than the amplitude"));
    }
    let bt = build_symplectic(t);
    let squeeze = match &sigma.squeeze {
        None => t.clone(),
        Some(s) => decompose_symplectic(&build_symplectic(s).compose(&bt), tol)?,
    };
    Ok(AWAmplitude {
        dim_k: sigma.dim_k,
        a: sigma.a.clone(),
        squeeze: Some(squeeze),
        sigma: &sigma.sigma * squeezing_matrix(&bt),
    })
}

/// `A = ½ arccosh R` for `R ⪰ I`.
pub fn covariance_to_amplitude(rmat: &CMat, tol: f64) -> Result<CMat> {
    if herm_defect(rmat) > tol {
        return Err(invalid("covariance operator is not self-adjoint"));
    }
    let (vals, _) = herm_eig(rmat);
    if let Some(&m) = vals.first() {
        if m < 1.0 - tol {
            return Err(invalid(format!("covariance operator is not ⪰ I (eigenvalue {m})")));
        }
    }
    Ok(herm_fn(rmat, |x| 0.5 * x.max(1.0).acosh()))
}

/// `(x, conj z)` in `k ⊕ k̄` coordinates.
pub fn doubled_pair(x: &CVec, z: &CVec) -> CVec {
    let d = x.len();
    let zc = conj_vec(z);
    CVec::from_fn(2 * d, |i, _| if i < d { x[i] } else { zc[i - d] })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::symplectic::Conjugation;
    use crate::linalg::{c, eye, max_abs, I};
    use crate::sample;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn random_triple(rng: &mut ChaCha8Rng, d: usize) -> SymplecticTriple {
        let u = sample::unitary(rng, d);
        let pd: Vec<_> = (0..d).map(|_| r(rand::Rng::gen::<f64>(rng))).collect();
        let p = &u * CMat::from_diagonal(&CVec::from_vec(pd)) * u.adjoint();
        let cm = &u * u.transpose();
        SymplecticTriple::new(sample::unitary(rng, d), Conjugation::new(cm, 1e-12).unwrap(), p, 1e-10).unwrap()
    }

    #[test]
    fn doubling_is_not_complex_linear() {
        let x = CVec::from_vec(vec![c(1.0, 2.0)]);
        let ix = x.map(|z| z * I);
        assert!((doubling(&ix) - doubling(&x).map(|z| z * I)).norm() > 1.0);
        assert_eq!(doubling(&CVec::from_vec(vec![r(1.0), r(0.0)]))[2], r(-1.0));
    }

    #[test]
    fn doubling_range_is_total() {
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        let x = sample::complex_vector(&mut rng, 3);
        let z = sample::complex_vector(&mut rng, 3);
        let ix = x.map(|v| v * I);
        let iz = z.map(|v| v * I);
        let rhs = (doubling(&(&x - &z)) - doubling(&(ix + iz)).map(|v| v * I)) * r(0.5);
        assert!((doubled_pair(&x, &z) - rhs).norm() < 1e-14);
    }

    #[test]
    fn gauge_amplitudes() {
        let s = make_amplitude(&CMat::zeros(2, 2), None).unwrap();
        assert!(max_abs(&(&s.sigma - direct_sum(&eye(2), &CMat::zeros(2, 2)))) < 1e-15);
        let a = 0.4;
        let s = make_amplitude(&(eye(1) * r(a)), None).unwrap();
        assert!((s.sigma[(0, 0)].re - a.cosh()).abs() < 1e-15);
        assert!((s.sigma[(1, 1)].re - a.sinh()).abs() < 1e-15);
        assert!(make_amplitude(&(eye(1) * r(-1.0)), None).is_err());
    }

    #[test]
    fn squeezing_intertwines_doubling_and_group_law() {
        let mut rng = ChaCha8Rng::seed_from_u64(2);
        let t1 = random_triple(&mut rng, 3);
        let t2 = random_triple(&mut rng, 3);
        let b1 = build_symplectic(&t1);
        let b2 = build_symplectic(&t2);
        let m1 = squeezing_matrix(&b1);
        for _ in 0..4 {
            let x = sample::complex_vector(&mut rng, 3);
            assert!((&m1 * doubling(&x) - doubling(&b1.apply(&x))).norm() < 1e-12);
        }
        let lhs = &m1 * squeezing_matrix(&b2);
        let rhs = squeezing_matrix(&b1.compose(&b2));
        assert!(max_abs(&(lhs - rhs)) < 1e-12);
    }

    #[test]
    fn squeezed_amplitude_is_product_and_symplectic() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let a = sample::positive(&mut rng, 2, 1.0);
        let t = random_triple(&mut rng, 2);
        let s = make_amplitude(&a, Some(t.clone())).unwrap();
        let gauge = make_amplitude(&a, None).unwrap();
        let oracle = &gauge.sigma * squeezing_matrix(&build_symplectic(&t));
        assert!(max_abs(&(&s.sigma - oracle)) < 1e-13);
        assert!(s.sigma_iota().symplectic_residual() < 1e-12);
        assert!(gauge.sigma_iota().symplectic_residual() < 1e-12);

        let t2 = random_triple(&mut rng, 2);
        let twice = compose_squeeze(&s, &t2, 1e-9).unwrap();
        let rebuilt = make_amplitude(&a, twice.squeeze.clone()).unwrap();
        assert!(max_abs(&(&twice.sigma - &rebuilt.sigma)) < 1e-10);
    }

    #[test]
    fn covariance_values() {
        let x = CVec::from_vec(vec![c(0.3, 0.4)]);
        let s0 = make_amplitude(&CMat::zeros(1, 1), None).unwrap();
        assert!((s0.covariance(&x) - 0.25).abs() < 1e-15);
        let a = (1.0f64 / 3.0).sqrt().asinh();
        let s = make_amplitude(&(eye(1) * r(a)), None).unwrap();
        let one = CVec::from_vec(vec![r(1.0)]);
        assert!((s.covariance(&one) - 5.0 / 3.0).abs() < 1e-14);
    }

    #[test]
    fn covariance_inverse() {
        let a = covariance_to_amplitude(&eye(2), 1e-12).unwrap();
        assert!(max_abs(&a) < 1e-15);
        let a = covariance_to_amplitude(&(eye(1) * r(5.0 / 3.0)), 1e-12).unwrap();
        assert!((a[(0, 0)].re - 0.5 * 3f64.ln()).abs() < 1e-14);
        assert!((a[(0, 0)].re.sinh() - (1.0f64 / 3.0).sqrt()).abs() < 1e-14);
        assert!(covariance_to_amplitude(&(eye(1) * r(0.5)), 1e-12).is_err());

        let mut rng = ChaCha8Rng::seed_from_u64(4);
        let a0 = sample::positive(&mut rng, 3, 1.5);
        let rm = herm_fn(&a0, |x| (2.0 * x).cosh());
        let a1 = covariance_to_amplitude(&rm, 1e-10).unwrap();
        assert!(max_abs(&(a1 - a0)) < 1e-10);
    }
}
