//! Real-linear maps between complex coordinate spaces.

use crate::error::{invalid, Result};
use crate::linalg::{c, conj, conj_vec, CMat, CVec};
use nalgebra::DMatrix;

/// `x ↦ L x + A·conj(x)`, conjugation taken entrywise in the standard basis.
#[derive(Clone, Debug, PartialEq)]
pub struct RealLinearOp {
    pub linear: CMat,
    pub conj_linear: CMat,
}

impl RealLinearOp {
    pub fn new(linear: CMat, conj_linear: CMat) -> Result<Self> {
        if linear.shape() != conj_linear.shape() {
            return Err(invalid(format!(
                "linear part is {:?} but conjugate-linear part is {:?}",
                linear.shape(),
                conj_linear.shape()
            )));
        }
        Ok(Self { linear, conj_linear })
    }

    pub fn linear_only(linear: CMat) -> Self {
        let z = CMat::zeros(linear.nrows(), linear.ncols());
        Self { linear, conj_linear: z }
    }

    pub fn identity(d: usize) -> Self {
        Self::linear_only(CMat::identity(d, d))
    }

    pub fn dim_in(&self) -> usize {
        self.linear.ncols()
    }

    pub fn dim_out(&self) -> usize {
        self.linear.nrows()
    }

    pub fn apply(&self, x: &CVec) -> CVec {
        &self.linear * x + &self.conj_linear * conj_vec(x)
    }

    /// `self ∘ other`.
    pub fn compose(&self, other: &RealLinearOp) -> RealLinearOp {
        RealLinearOp {
            linear: &self.linear * &other.linear + &self.conj_linear * conj(&other.conj_linear),
            conj_linear: &self.linear * &other.conj_linear + &self.conj_linear * conj(&other.linear),
        }
    }

    /// Matrix on realified coordinates `(Re x, Im x)`.
    pub fn realify(&self) -> DMatrix<f64> {
        let (m, n) = self.linear.shape();
        let l = &self.linear;
        let a = &self.conj_linear;
        let mut t = DMatrix::zeros(2 * m, 2 * n);
        for i in 0..m {
            for j in 0..n {
                t[(i, j)] = l[(i, j)].re + a[(i, j)].re;
                t[(i, n + j)] = -l[(i, j)].im + a[(i, j)].im;
                t[(m + i, j)] = l[(i, j)].im + a[(i, j)].im;
                t[(m + i, n + j)] = l[(i, j)].re - a[(i, j)].re;
            }
        }
        t
    }

    /// Largest deviation of `Im⟨Ze_a, Ze_b⟩` from `Im⟨e_a, e_b⟩` over the real basis `{e_j, i e_j}`.
    pub fn symplectic_residual(&self) -> f64 {
        let t = self.realify();
        let n = self.dim_in();
        let m = self.dim_out();
        let om_m = omega(m);
        let om_n = omega(n);
        let lhs = t.transpose() * om_m * &t;
        (lhs - om_n).iter().fold(0.0f64, |acc, x| acc.max(x.abs()))
    }
}

fn omega(n: usize) -> DMatrix<f64> {
    let mut o = DMatrix::zeros(2 * n, 2 * n);
    for j in 0..n {
        o[(j, n + j)] = 1.0;
        o[(n + j, j)] = -1.0;
    }
    o
}

/// Linear and conjugate-linear parts `L = ½(T − iT i)`, `A = ½(T + iT i)` of a
/// real-linear map given on realified coordinates.
pub fn split_parts(t: &DMatrix<f64>) -> Result<RealLinearOp> {
    let (rows, cols) = t.shape();
    if rows % 2 != 0 || cols % 2 != 0 {
        return Err(invalid(format!("realified matrix must have even dimensions, got {rows}x{cols}")));
    }
    let (m, n) = (rows / 2, cols / 2);
    let mut l = CMat::zeros(m, n);
    let mut a = CMat::zeros(m, n);
    for i in 0..m {
        for j in 0..n {
            let t11 = t[(i, j)];
            let t12 = t[(i, n + j)];
            let t21 = t[(m + i, j)];
            let t22 = t[(m + i, n + j)];
            l[(i, j)] = c(0.5 * (t11 + t22), 0.5 * (t21 - t12));
            a[(i, j)] = c(0.5 * (t11 - t22), 0.5 * (t21 + t12));
        }
    }
    RealLinearOp::new(l, a)
}

/// True iff `Z` preserves `Im⟨·,·⟩` on the real basis to within `tol`.
pub fn is_symplectic(z: &RealLinearOp, tol: f64) -> bool {
    z.symplectic_residual() <= tol
}
