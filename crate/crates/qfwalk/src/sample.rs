//! Random test data: Gaussian matrices, Haar-like unitaries, positive operators.

use crate::linalg::{c, herm_fn, CMat, CVec};
use nalgebra::QR;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;

/// Portable seeded generator: identical streams on every platform.
pub fn seeded(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn gaussian<R: Rng + ?Sized>(rng: &mut R) -> f64 {
    rng.sample(StandardNormal)
}

pub fn complex_matrix<R: Rng + ?Sized>(rng: &mut R, rows: usize, cols: usize) -> CMat {
    CMat::from_fn(rows, cols, |_, _| c(gaussian(rng), gaussian(rng)) * std::f64::consts::FRAC_1_SQRT_2)
}

pub fn complex_vector<R: Rng + ?Sized>(rng: &mut R, n: usize) -> CVec {
    CVec::from_fn(n, |_, _| c(gaussian(rng), gaussian(rng)) * std::f64::consts::FRAC_1_SQRT_2)
}

pub fn hermitian<R: Rng + ?Sized>(rng: &mut R, n: usize) -> CMat {
    let a = complex_matrix(rng, n, n);
    (&a + a.adjoint()) * c(0.5, 0.0)
}

/// QR of a Gaussian matrix with the phases of `R`'s diagonal moved into `Q`.
pub fn unitary<R: Rng + ?Sized>(rng: &mut R, n: usize) -> CMat {
    let a = complex_matrix(rng, n, n);
    let qr = QR::new(a);
    let mut q = qr.q();
    let rm = qr.r();
    for j in 0..n {
        let d = rm[(j, j)];
        let ph = if d.norm() > 0.0 { d / d.norm() } else { c(1.0, 0.0) };
        let mut col = q.column_mut(j);
        col *= ph;
    }
    q
}

/// Positive semidefinite operator with spectrum drawn from `[0, scale)`.
pub fn positive<R: Rng + ?Sized>(rng: &mut R, n: usize, scale: f64) -> CMat {
    let u = unitary(rng, n);
    let d: Vec<f64> = (0..n).map(|_| rng.gen::<f64>() * scale).collect();
    let diag = CMat::from_diagonal(&CVec::from_iterator(n, d.iter().map(|&x| c(x, 0.0))));
    &u * diag * u.adjoint()
}

/// Hermitian matrix rescaled to unit operator norm.
pub fn unit_hermitian<R: Rng + ?Sized>(rng: &mut R, n: usize) -> CMat {
    let h = hermitian(rng, n);
    let s = crate::linalg::op_norm(&h).max(1e-300);
    herm_fn(&h, |x| x / s)
}
