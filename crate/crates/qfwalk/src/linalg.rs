//! Dense complex linear algebra helpers shared by every module.
//!
//! Tensor products are ordered with the left factor as the outer (slow) index,
//! so `kron(a, b)` acts on `K ⊗ h` with `K`-index major.

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;

pub type C64 = Complex64;
pub type CMat = DMatrix<C64>;
pub type CVec = DVector<C64>;

pub const I: C64 = C64 { re: 0.0, im: 1.0 };

#[inline]
pub fn c(re: f64, im: f64) -> C64 {
    C64::new(re, im)
}

#[inline]
pub fn r(re: f64) -> C64 {
    C64::new(re, 0.0)
}

pub fn eye(n: usize) -> CMat {
    CMat::identity(n, n)
}

pub fn zeros(rows: usize, cols: usize) -> CMat {
    CMat::zeros(rows, cols)
}

/// Kronecker product with `a` as the outer factor.
pub fn kron(a: &CMat, b: &CMat) -> CMat {
    let (ar, ac) = a.shape();
    let (br, bc) = b.shape();
    let mut out = CMat::zeros(ar * br, ac * bc);
    for i in 0..ar {
        for j in 0..ac {
            let aij = a[(i, j)];
            if aij == C64::new(0.0, 0.0) {
                continue;
            }
            for k in 0..br {
                for l in 0..bc {
                    out[(i * br + k, j * bc + l)] = aij * b[(k, l)];
                }
            }
        }
    }
    out
}

/// Entrywise complex conjugate.
pub fn conj(a: &CMat) -> CMat {
    a.map(|z| z.conj())
}

pub fn conj_vec(x: &CVec) -> CVec {
    x.map(|z| z.conj())
}

/// `|x⟩` as a column matrix.
pub fn ket(x: &CVec) -> CMat {
    CMat::from_column_slice(x.len(), 1, x.as_slice())
}

/// `|x⟩ ⊗ I_n`.
pub fn ket_tensor(x: &CVec, n: usize) -> CMat {
    kron(&ket(x), &eye(n))
}

/// `⟨x| ⊗ I_n`.
pub fn bra_tensor(x: &CVec, n: usize) -> CMat {
    kron(&ket(x).adjoint(), &eye(n))
}

/// The slice `(⟨e_i| ⊗ I_n) X` of an operator `X` into `K ⊗ h` with `dim h = n`.
pub fn row_slice(x: &CMat, i: usize, n: usize) -> CMat {
    x.rows(i * n, n).into_owned()
}

/// The slice `(⟨e_i| ⊗ I) X (|e_j⟩ ⊗ I)` of an operator on `K ⊗ h`.
pub fn block(x: &CMat, i: usize, j: usize, n: usize) -> CMat {
    x.view((i * n, j * n), (n, n)).into_owned()
}

/// Largest singular value, from the smaller Gram matrix.
pub fn op_norm(a: &CMat) -> f64 {
    if a.is_empty() {
        return 0.0;
    }
    let g = if a.nrows() < a.ncols() { a * a.adjoint() } else { a.adjoint() * a };
    let (vals, _) = herm_eig(&g);
    vals.last().cloned().unwrap_or(0.0).max(0.0).sqrt()
}

/// Frobenius norm.
pub fn hs_norm(a: &CMat) -> f64 {
    a.norm()
}

/// Largest absolute entry.
pub fn max_abs(a: &CMat) -> f64 {
    a.iter().map(|z| z.norm()).fold(0.0, f64::max)
}

/// Singular values, descending, `min(rows, cols)` of them.
pub fn singular_values(a: &CMat) -> Vec<f64> {
    if a.is_empty() {
        return Vec::new();
    }
    svd_full(a).1
}

/// One-sided Jacobi on the columns of a tall matrix. Returns the rotated
/// columns (mutually orthogonal) and the accumulated unitary.
fn jacobi_columns(mut u: CMat) -> (CMat, CMat) {
    let n = u.ncols();
    let mut v = eye(n);
    for _sweep in 0..80 {
        let mut rotated = false;
        for p in 0..n {
            for q in (p + 1)..n {
                let alpha = u.column(p).norm_squared();
                let beta = u.column(q).norm_squared();
                let gamma = u.column(p).dotc(&u.column(q));
                let g = gamma.norm();
                // columns below 1e-32 of the (unit-scaled) matrix are treated as zero
                if alpha.min(beta) < 1e-64 || g <= 1e-15 * (alpha * beta).sqrt() {
                    continue;
                }
                rotated = true;
                let phase = gamma / g;
                let phase = phase / phase.norm();
                let zeta = (beta - alpha) / (2.0 * g);
                let t = if zeta >= 0.0 {
                    1.0 / (zeta + (1.0 + zeta * zeta).sqrt())
                } else {
                    -1.0 / (-zeta + (1.0 + zeta * zeta).sqrt())
                };
                let cs = 1.0 / (1.0 + t * t).sqrt();
                let sn = cs * t;
                let ph = phase.conj();
                for m in [&mut u, &mut v] {
                    for row in 0..m.nrows() {
                        let xp = m[(row, p)];
                        let xq = m[(row, q)] * ph;
                        m[(row, p)] = xp * cs - xq * sn;
                        m[(row, q)] = xp * sn + xq * cs;
                    }
                }
            }
        }
        if !rotated {
            break;
        }
    }
    (u, v)
}

/// Extend orthonormal columns (zero columns marked in `missing`) to an
/// orthonormal set by Gram–Schmidt against the standard basis.
fn complete_columns(u: &mut CMat, missing: &[usize]) {
    let m = u.nrows();
    let mut cand = 0;
    for &j in missing {
        loop {
            let mut x = CVec::zeros(m);
            x[cand % m] = r(1.0);
            cand += 1;
            for _ in 0..2 {
                for k in 0..u.ncols() {
                    let unset = missing.contains(&k) && k >= j;
                    if unset {
                        continue;
                    }
                    let col = u.column(k).into_owned();
                    let proj = col.dotc(&x);
                    x -= col * proj;
                }
            }
            let nx = x.norm();
            if nx > 1e-8 {
                u.set_column(j, &(x / r(nx)));
                break;
            }
        }
    }
}

/// SVD `a = U diag(s) V*` with `s` sorted descending and `V` square (`U` is
/// thin when `a` is tall). Computed by one-sided Jacobi rotations.
pub fn svd_full(a: &CMat) -> (CMat, Vec<f64>, CMat) {
    let (m, n) = a.shape();
    let mut padded = CMat::zeros(m.max(n), n);
    padded.view_mut((0, 0), (m, n)).copy_from(a);
    let scale = max_abs(a);
    if scale == 0.0 {
        let u = CMat::identity(m.max(n), n);
        return (u.rows(0, m).into_owned(), vec![0.0; m.min(n)], eye(n));
    }
    let (w, v) = jacobi_columns(padded / r(scale));
    let norms: Vec<f64> = (0..n).map(|j| w.column(j).norm()).collect();
    let mut idx: Vec<usize> = (0..n).collect();
    idx.sort_by(|&x, &y| norms[y].partial_cmp(&norms[x]).unwrap());
    let top = norms[idx[0]];
    let mut us = CMat::zeros(w.nrows(), n);
    let mut vs = CMat::zeros(n, n);
    let mut missing = Vec::new();
    for (dst, &src) in idx.iter().enumerate() {
        vs.set_column(dst, &v.column(src));
        if norms[src] > 1e-250 * top {
            us.set_column(dst, &(w.column(src) / r(norms[src])));
        } else {
            missing.push(dst);
        }
    }
    complete_columns(&mut us, &missing);
    let sv: Vec<f64> = idx.iter().map(|&i| norms[i] * scale).collect();
    (us.rows(0, m).into_owned(), sv[..m.min(n)].to_vec(), vs)
}

/// Orthonormal basis (as columns) of `{x : a x = 0}`; singular values at or
/// below `rel_tol · σ_max` count as zero.
pub fn null_space(a: &CMat, rel_tol: f64) -> CMat {
    let n = a.ncols();
    if n == 0 {
        return CMat::zeros(0, 0);
    }
    if a.nrows() == 0 {
        return eye(n);
    }
    let (_, s, v) = svd_full(a);
    let smax = s.first().cloned().unwrap_or(0.0);
    let cut = rel_tol * smax;
    let rank = s.iter().filter(|&&x| smax > 0.0 && x > cut).count();
    v.columns(rank, n - rank).into_owned()
}

/// Hermitian eigendecomposition with eigenvalues sorted ascending, by cyclic
/// complex Jacobi rotations.
pub fn herm_eig(h: &CMat) -> (Vec<f64>, CMat) {
    let n = h.nrows();
    if n == 0 {
        return (Vec::new(), CMat::zeros(0, 0));
    }
    let mut a = (h + h.adjoint()) * r(0.5);
    let mut v = eye(n);
    let total = a.norm();
    for _sweep in 0..100 {
        let mut off = 0.0;
        for p in 0..n {
            for q in 0..n {
                if p != q {
                    off += a[(p, q)].norm_sqr();
                }
            }
        }
        if off.sqrt() <= 1e-16 * total || off == 0.0 {
            break;
        }
        for p in 0..n {
            for q in (p + 1)..n {
                let apq = a[(p, q)];
                let g = apq.norm();
                if g < 1e-300 {
                    continue;
                }
                let phase = apq / g;
                let phase = phase / phase.norm();
                let zeta = (a[(q, q)].re - a[(p, p)].re) / (2.0 * g);
                let t = if zeta >= 0.0 {
                    1.0 / (zeta + (1.0 + zeta * zeta).sqrt())
                } else {
                    -1.0 / (-zeta + (1.0 + zeta * zeta).sqrt())
                };
                let cs = 1.0 / (1.0 + t * t).sqrt();
                let sn = cs * t;
                let ph = phase.conj();
                for m in [&mut a, &mut v] {
                    for k in 0..n {
                        let x = m[(k, p)];
                        let y = m[(k, q)] * ph;
                        m[(k, p)] = x * cs - y * sn;
                        m[(k, q)] = x * sn + y * cs;
                    }
                }
                for k in 0..n {
                    let x = a[(p, k)];
                    let y = a[(q, k)] * phase;
                    a[(p, k)] = x * cs - y * sn;
                    a[(q, k)] = x * sn + y * cs;
                }
                a[(p, q)] = r(0.0);
                a[(q, p)] = r(0.0);
                a[(p, p)] = r(a[(p, p)].re);
                a[(q, q)] = r(a[(q, q)].re);
            }
        }
    }
    let mut idx: Vec<usize> = (0..n).collect();
    idx.sort_by(|&x, &y| a[(x, x)].re.partial_cmp(&a[(y, y)].re).unwrap());
    let mut vecs = CMat::zeros(n, n);
    for (dst, &src) in idx.iter().enumerate() {
        vecs.set_column(dst, &v.column(src));
    }
    (idx.iter().map(|&i| a[(i, i)].re).collect(), vecs)
}

/// `f(h)` for Hermitian `h` through its eigendecomposition.
pub fn herm_fn(h: &CMat, f: impl Fn(f64) -> f64) -> CMat {
    let (vals, vecs) = herm_eig(h);
    let d = CVec::from_iterator(vals.len(), vals.iter().map(|&x| r(f(x))));
    &vecs * CMat::from_diagonal(&d) * vecs.adjoint()
}

/// Polar decomposition `a = U |a|` of a square matrix, `U` unitary.
pub fn polar(a: &CMat) -> (CMat, CMat) {
    let (u, s, v) = svd_full(a);
    let sd = CVec::from_iterator(s.len(), s.iter().map(|&x| r(x)));
    let unitary = &u * v.adjoint();
    let abs = &v * CMat::from_diagonal(&sd) * v.adjoint();
    (unitary, abs)
}

pub fn expm(a: &CMat) -> CMat {
    a.exp()
}

/// Matrix of a linear map on `d × d` matrices, acting on column-stacked vectors.
pub fn superop(d: usize, f: impl Fn(&CMat) -> CMat) -> CMat {
    let mut s = CMat::zeros(d * d, d * d);
    for j in 0..d {
        for i in 0..d {
            let mut e = CMat::zeros(d, d);
            e[(i, j)] = r(1.0);
            let img = f(&e);
            s.set_column(j * d + i, &vec_mat(&img));
        }
    }
    s
}

/// Column-stacking vectorisation.
pub fn vec_mat(a: &CMat) -> CVec {
    CVec::from_column_slice(a.as_slice())
}

pub fn unvec(v: &CVec, d: usize) -> CMat {
    CMat::from_column_slice(d, d, v.as_slice())
}

pub fn trace(a: &CMat) -> C64 {
    a.trace()
}

/// Stack operators vertically (all with the same column count).
pub fn vstack(parts: &[&CMat]) -> CMat {
    let cols = parts[0].ncols();
    let rows: usize = parts.iter().map(|p| p.nrows()).sum();
    let mut out = CMat::zeros(rows, cols);
    let mut at = 0;
    for p in parts {
        out.view_mut((at, 0), (p.nrows(), cols)).copy_from(*p);
        at += p.nrows();
    }
    out
}

/// Place operators side by side (all with the same row count).
pub fn hstack(parts: &[&CMat]) -> CMat {
    let rows = parts[0].nrows();
    let cols: usize = parts.iter().map(|p| p.ncols()).sum();
    let mut out = CMat::zeros(rows, cols);
    let mut at = 0;
    for p in parts {
        out.view_mut((0, at), (rows, p.ncols())).copy_from(*p);
        at += p.ncols();
    }
    out
}

/// Block diagonal sum.
pub fn direct_sum(a: &CMat, b: &CMat) -> CMat {
    let mut out = CMat::zeros(a.nrows() + b.nrows(), a.ncols() + b.ncols());
    out.view_mut((0, 0), a.shape()).copy_from(a);
    out.view_mut(a.shape(), b.shape()).copy_from(b);
    out
}

/// `‖a − a*‖` relative to nothing; zero for Hermitian input.
pub fn herm_defect(a: &CMat) -> f64 {
    max_abs(&(a - a.adjoint()))
}

pub fn unitary_defect(u: &CMat) -> f64 {
    max_abs(&(u.adjoint() * u - eye(u.ncols())))
}
