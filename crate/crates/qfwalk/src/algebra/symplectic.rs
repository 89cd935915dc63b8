//! Symplectic automorphisms `B = V(cosh P − C sinh P)` and their decomposition.

use super::reallinear::{is_symplectic, RealLinearOp};
use crate::error::{invalid, QfError, Result};
use crate::linalg::{conj, eye, herm_defect, herm_eig, herm_fn, max_abs, op_norm, polar, r, unitary_defect, CMat, CVec};

/// Self-adjoint anti-unitary map `x ↦ Ĉ·conj(x)`; requires `Ĉ` unitary and `Ĉᵀ = Ĉ`.
#[derive(Clone, Debug, PartialEq)]
pub struct Conjugation {
    pub mat: CMat,
}

impl Conjugation {
    pub fn new(mat: CMat, tol: f64) -> Result<Self> {
        if !mat.is_square() {
            return Err(invalid("conjugation matrix must be square"));
        }
        let u = unitary_defect(&mat);
        let s = max_abs(&(&mat - mat.transpose()));
        if u > tol || s > tol {
            return Err(invalid(format!(
                "conjugation matrix must be unitary and symmetric (defects {u:e}, {s:e})"
            )));
        }
        Ok(Self { mat })
    }

    /// Entrywise conjugation in the standard basis.
    pub fn standard(d: usize) -> Self {
        Self { mat: eye(d) }
    }

    /// Entrywise conjugation in the orthonormal basis given by the columns of `basis`.
    pub fn in_basis(basis: &CMat) -> Self {
        Self { mat: basis * basis.transpose() }
    }

    pub fn apply(&self, x: &CVec) -> CVec {
        &self.mat * x.map(|z| z.conj())
    }

    pub fn dim(&self) -> usize {
        self.mat.nrows()
    }
}

/// Generating data `(V, C, P)`: `V` unitary, `P ⪰ 0`, `CP = PC`.
#[derive(Clone, Debug, PartialEq)]
pub struct SymplecticTriple {
    pub v: CMat,
    pub c: Conjugation,
    pub p: CMat,
}

impl SymplecticTriple {
    pub fn new(v: CMat, c: Conjugation, p: CMat, tol: f64) -> Result<Self> {
        let d = v.nrows();
        if !v.is_square() || c.dim() != d || p.shape() != (d, d) {
            return Err(QfError::InvalidTriple("V, C and P must act on the same space".into()));
        }
        if unitary_defect(&v) > tol {
            return Err(QfError::InvalidTriple("V is not unitary".into()));
        }
        if herm_defect(&p) > tol {
            return Err(QfError::InvalidTriple("P is not self-adjoint".into()));
        }
        let (vals, _) = herm_eig(&p);
        if vals.first().is_some_and(|&m| m < -tol) {
            return Err(QfError::InvalidTriple("P is not non-negative".into()));
        }
        let comm = max_abs(&(&c.mat * conj(&p) - &p * &c.mat));
        if comm > tol * (1.0 + op_norm(&p)) {
            return Err(QfError::InvalidTriple(format!("C and P do not commute (residual {comm:e})")));
        }
        Ok(Self { v, c, p })
    }

    pub fn identity(d: usize) -> Self {
        Self { v: eye(d), c: Conjugation::standard(d), p: CMat::zeros(d, d) }
    }

    pub fn dim(&self) -> usize {
        self.v.nrows()
    }

    pub fn cosh_p(&self) -> CMat {
        herm_fn(&self.p, f64::cosh)
    }

    pub fn sinh_p(&self) -> CMat {
        herm_fn(&self.p, f64::sinh)
    }

    /// Orthogonal projection onto `Ran P`.
    pub fn range_projection(&self, rel_tol: f64) -> CMat {
        let (vals, vecs) = herm_eig(&self.p);
        let top = vals.iter().cloned().fold(0.0, f64::max);
        let mut proj = CMat::zeros(self.dim(), self.dim());
        for (j, &lam) in vals.iter().enumerate() {
            if top > 0.0 && lam > rel_tol * top {
                let col = vecs.column(j);
                proj += col * col.adjoint();
            }
        }
        proj
    }
}

/// `B = V(cosh P − C sinh P)`: linear part `V cosh P`, conjugate-linear part `−V Ĉ conj(sinh P)`.
pub fn build_symplectic(t: &SymplecticTriple) -> RealLinearOp {
    let ch = t.cosh_p();
    let sh = t.sinh_p();
    RealLinearOp {
        linear: &t.v * ch,
        conj_linear: -(&t.v * &t.c.mat * conj(&sh)),
    }
}

/// `(cosh P + C sinh P) V*`.
pub fn build_inverse(t: &SymplecticTriple) -> RealLinearOp {
    let ch = t.cosh_p();
    let sh = t.sinh_p();
    RealLinearOp {
        linear: ch * t.v.adjoint(),
        conj_linear: &t.c.mat * conj(&sh) * t.v.transpose(),
    }
}

/// Relative singular-value threshold separating `ker|A|` from its complement.
pub const KERNEL_REL_TOL: f64 = 1e-10;

/// Recover `(V, C, P)` from a symplectic automorphism.
///
/// `V` and `P` come from the polar decompositions of the two parts; `C` is
/// determined on `Ran P` and set to entrywise conjugation in a computed
/// orthonormal basis of `ker P`.
pub fn decompose_symplectic(b: &RealLinearOp, tol: f64) -> Result<SymplecticTriple> {
    let d = b.dim_in();
    if b.dim_out() != d {
        return Err(invalid("symplectic decomposition needs a square map"));
    }
    let l = &b.linear;
    let ahat = &b.conj_linear;
    let scale = 1.0 + op_norm(l).powi(2);
    let res = b.symplectic_residual();
    if !is_symplectic(b, tol * scale) {
        return Err(invalid(format!("map is not symplectic (residual {res:e})")));
    }

    let (v, abs_l) = polar(l);
    // |A| = conj(|Â|) for the conjugate-linear map x ↦ Â conj(x).
    let (_, abs_ahat) = polar(ahat);
    let abs_a = conj(&abs_ahat);
    let (svals, svecs) = herm_eig(&abs_a);
    let smax = svals.iter().cloned().fold(0.0, f64::max);
    let cut = KERNEL_REL_TOL * smax;

    let mut p = CMat::zeros(d, d);
    let mut s_pinv = CMat::zeros(d, d);
    let mut kernel: Vec<usize> = Vec::new();
    for (j, &s) in svals.iter().enumerate() {
        let col = svecs.column(j).into_owned();
        if smax > 0.0 && s > cut {
            p += &col * col.adjoint() * r(s.asinh());
            s_pinv += &col * col.adjoint() * r(1.0 / s);
        } else {
            kernel.push(j);
        }
    }
    let cosh_defect = max_abs(&(herm_fn(&p, f64::cosh) - &abs_l));
    if cosh_defect > tol * scale.sqrt() {
        return Err(invalid(format!("|L| and |A| are inconsistent (defect {cosh_defect:e})")));
    }

    let mut c_mat = -(v.adjoint() * ahat * conj(&s_pinv));
    if kernel.len() == d {
        c_mat += eye(d);
    } else if !kernel.is_empty() {
        let mut basis = CMat::zeros(d, kernel.len());
        for (dst, &src) in kernel.iter().enumerate() {
            basis.set_column(dst, &svecs.column(src));
        }
        c_mat += &basis * basis.transpose();
    }
    Ok(SymplecticTriple { v, c: Conjugation { mat: c_mat }, p })
}
