//! GNS representation of a faithful state on `B(p)` realised on `HS(p)`.
//!
//! Coordinates of `K̂ = HS(p)` are ordered `[ω, k, k̄, K₀]`: `k` is spanned by
//! matrix units `|e^i_α⟩⟨e^j_β|` with `α > β` (eigenvalue index, descending
//! eigenvalues), `k̄` by their adjoints in the same order, and `K₀` is a
//! Gram–Schmidt basis of the diagonal blocks orthogonal to `ω = ϱ^{1/2}`.

use crate::algebra::{make_amplitude, AWAmplitude};
use crate::error::{invalid, QfError, Result};
use crate::linalg::{herm_defect, herm_eig, kron, r, trace, CMat, CVec};

/// Relative gap below which eigenvalues of `ϱ` are merged into one eigenspace.
pub const CLUSTER_REL_TOL: f64 = 1e-8;

/// Index data of one `k` basis vector `|e_a⟩⟨e_b|`, `a ∈ k_α`, `b ∈ k_β`, `α > β`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct PairIndex {
    pub a: usize,
    pub b: usize,
    pub alpha: usize,
    pub beta: usize,
}

#[derive(Clone, Debug)]
pub struct GNSModel {
    pub dim_p: usize,
    /// Distinct eigenvalues `γ_α`, strictly decreasing.
    pub gammas: Vec<f64>,
    pub multiplicities: Vec<usize>,
    /// Eigenvalue of each eigenvector, in column order of `eigvecs`.
    pub point_gammas: Vec<f64>,
    /// Cluster index `α` of each eigenvector.
    pub cluster_of: Vec<usize>,
    /// Orthonormal eigenvectors of `ϱ` as columns, grouped by cluster.
    pub eigvecs: CMat,
    pub pairs: Vec<PairIndex>,
    /// Columns are the new basis of `HS(p)` in row-major eigen coordinates.
    pub basis: CMat,
    pub dim_k0: usize,
    pub sigma: AWAmplitude,
    pub m_rho: f64,
}

/// Eigendecomposition, faithfulness and trace checks, clustering and basis assembly.
pub fn gns_build(rho: &CMat, tol: f64) -> Result<GNSModel> {
    let p = rho.nrows();
    if !rho.is_square() || p == 0 {
        return Err(invalid("density matrix must be square and non-empty"));
    }
    if herm_defect(rho) > tol.max(1e-12) {
        return Err(invalid("density matrix is not self-adjoint"));
    }
    let tr = trace(rho);
    if (tr.re - 1.0).abs() > tol.max(1e-12) || tr.im.abs() > tol.max(1e-12) {
        return Err(invalid(format!("density matrix has trace {tr}, not 1")));
    }
    let (vals, vecs) = herm_eig(rho);
    if vals[0] <= 0.0 || vals[0] < tol * vals[p - 1] {
        return Err(QfError::NotFaithful(vals[0]));
    }
    let order: Vec<usize> = (0..p).rev().collect();
    let point: Vec<f64> = order.iter().map(|&i| vals[i]).collect();
    let mut v = CMat::zeros(p, p);
    for (dst, &src) in order.iter().enumerate() {
        v.set_column(dst, &vecs.column(src));
    }
    from_eigendata(&point, v, CLUSTER_REL_TOL)
}

/// Build the model from descending eigenvalues and matching orthonormal eigenvectors.
pub fn from_eigendata(point: &[f64], eigvecs: CMat, rel_tol: f64) -> Result<GNSModel> {
    let p = point.len();
    let mut cluster_of = vec![0usize; p];
    let mut members: Vec<Vec<usize>> = vec![vec![0]];
    for i in 1..p {
        if point[i - 1] - point[i] <= rel_tol * point[i - 1] {
            members.last_mut().unwrap().push(i);
        } else {
            members.push(vec![i]);
        }
        cluster_of[i] = members.len() - 1;
    }
    let mut gammas = Vec::new();
    for (alpha, m) in members.iter().enumerate() {
        let hi = point[m[0]];
        let lo = point[m[m.len() - 1]];
        if hi - lo > 10.0 * rel_tol * hi {
            return Err(QfError::Clustering(format!(
                "eigenspace {alpha} spreads over [{lo}, {hi}]; eigenvalues are too close to separate"
            )));
        }
        gammas.push(m.iter().map(|&i| point[i]).sum::<f64>() / m.len() as f64);
    }
    let multiplicities: Vec<usize> = members.iter().map(|m| m.len()).collect();
    let m_rho = gammas.windows(2).map(|w| w[0] / w[1]).fold(f64::INFINITY, f64::min);

    let mut pairs = Vec::new();
    for a in 0..p {
        for b in 0..p {
            if cluster_of[a] > cluster_of[b] {
                pairs.push(PairIndex { a, b, alpha: cluster_of[a], beta: cluster_of[b] });
            }
        }
    }
    let dk = pairs.len();
    let unit = |a: usize, b: usize| {
        let mut e = CVec::zeros(p * p);
        e[a * p + b] = r(1.0);
        e
    };
    let mut omega = CVec::zeros(p * p);
    for a in 0..p {
        omega[a * p + a] = r(point[a].sqrt());
    }
    let mut cols: Vec<CVec> = vec![omega.clone()];
    cols.extend(pairs.iter().map(|q| unit(q.a, q.b)));
    cols.extend(pairs.iter().map(|q| unit(q.b, q.a)));
    // K₀: diagonal blocks orthogonal to ω
    let mut k0: Vec<CVec> = Vec::new();
    for a in 0..p {
        for b in 0..p {
            if cluster_of[a] != cluster_of[b] {
                continue;
            }
            let mut x = unit(a, b);
            for q in std::iter::once(&omega).chain(k0.iter()) {
                let proj = q.dotc(&x);
                x -= q * proj;
            }
            let n = x.norm();
            if n > 1e-10 {
                k0.push(x / r(n));
            }
        }
    }
    let dim_k0 = k0.len();
    cols.extend(k0);
    let basis = CMat::from_columns(&cols);

    let s: Vec<f64> = pairs.iter().map(|q| (gammas[q.alpha] / (gammas[q.beta] - gammas[q.alpha])).sqrt()).collect();
    let a = CMat::from_diagonal(&CVec::from_iterator(dk, s.iter().map(|x| r(x.asinh()))));
    let sigma = make_amplitude(&a, None)?;
    let point_gammas = point.iter().enumerate().map(|(i, _)| gammas[cluster_of[i]]).collect();
    Ok(GNSModel {
        dim_p: p,
        gammas,
        multiplicities,
        point_gammas,
        cluster_of,
        eigvecs,
        pairs,
        basis,
        dim_k0,
        sigma,
        m_rho,
    })
}

impl GNSModel {
    pub fn dim_k(&self) -> usize {
        self.pairs.len()
    }

    /// `dim K̂ = p²`.
    pub fn dim_hat(&self) -> usize {
        self.dim_p * self.dim_p
    }

    /// `dim K = dim K̂ − 1`.
    pub fn dim_noise(&self) -> usize {
        self.dim_hat() - 1
    }

    /// `ϱ` rebuilt from the clustered eigendata.
    pub fn density(&self) -> CMat {
        let d = CMat::from_diagonal(&CVec::from_iterator(self.dim_p, self.point_gammas.iter().map(|&g| r(g))));
        &self.eigvecs * d * self.eigvecs.adjoint()
    }

    fn to_eigen(&self, x: &CMat) -> CMat {
        self.eigvecs.adjoint() * x * &self.eigvecs
    }

    fn to_eigen_tensor(&self, a: &CMat, dh: usize) -> CMat {
        let v = kron(&self.eigvecs, &CMat::identity(dh, dh));
        v.adjoint() * a * v
    }

    /// `π(X) = L_X` on `K̂` in the `[ω, k, k̄, K₀]` basis.
    pub fn pi(&self, x: &CMat) -> CMat {
        let m = kron(&self.to_eigen(x), &CMat::identity(self.dim_p, self.dim_p));
        self.basis.adjoint() * m * &self.basis
    }

    /// `π̃(A) = (π ⊗ id)(A)` on `K̂ ⊗ h` for `A ∈ B(p ⊗ h)`.
    pub fn pi_tilde(&self, a: &CMat, dh: usize) -> CMat {
        let p = self.dim_p;
        let ae = self.to_eigen_tensor(a, dh);
        let n = p * p * dh;
        let mut m = CMat::zeros(n, n);
        for x in 0..p {
            for y in 0..p {
                for c in 0..p {
                    for u in 0..dh {
                        for w in 0..dh {
                            m[((x * p + c) * dh + u, (y * p + c) * dh + w)] = ae[(x * dh + u, y * dh + w)];
                        }
                    }
                }
            }
        }
        let bh = kron(&self.basis, &CMat::identity(dh, dh));
        bh.adjoint() * m * bh
    }

    /// `η(X) = X ϱ^{1/2} = π(X)ω`.
    pub fn eta(&self, x: &CMat) -> CVec {
        self.pi(x).column(0).into_owned()
    }

    /// `ρ(X) = tr(ϱX)`.
    pub fn rho(&self, x: &CMat) -> f64 {
        trace(&(self.density() * x)).re
    }

    /// `ρ̃(A) = (ρ ⊗ id)(A) = (⟨ω| ⊗ I)π̃(A)(|ω⟩ ⊗ I)`.
    pub fn rho_tilde(&self, a: &CMat, dh: usize) -> CMat {
        let ae = self.to_eigen_tensor(a, dh);
        let mut out = CMat::zeros(dh, dh);
        for (i, &g) in self.point_gammas.iter().enumerate() {
            out += ae.view((i * dh, i * dh), (dh, dh)) * r(g);
        }
        out
    }

    /// `Σ(ρ) = diag(C(ρ), conj(S(ρ)))`.
    pub fn sigma_rho(&self) -> &AWAmplitude {
        &self.sigma
    }

    /// Diagonal entries of `S(ρ)` on the `k` basis.
    pub fn s_values(&self) -> Vec<f64> {
        self.pairs
            .iter()
            .map(|q| (self.gammas[q.alpha] / (self.gammas[q.beta] - self.gammas[q.alpha])).sqrt())
            .collect()
    }

    /// `(⟨e_x| ⊗ I)A(|e_y⟩ ⊗ I)` in eigen coordinates.
    fn slice(&self, ae: &CMat, x: usize, y: usize, dh: usize) -> CMat {
        ae.view((x * dh, y * dh), (dh, dh)).into_owned()
    }

    /// `(φ^h_ρ(A), φ̄^h_ρ(A))` in the `k` and `k̄` bases.
    pub fn phi_rho(&self, a: &CMat, dh: usize) -> (CMat, CMat) {
        let ae = self.to_eigen_tensor(a, dh);
        let dk = self.dim_k();
        let mut qh = CMat::zeros(dk * dh, dh);
        let mut qb = CMat::zeros(dk * dh, dh);
        for (m, q) in self.pairs.iter().enumerate() {
            let w = r((self.gammas[q.beta] - self.gammas[q.alpha]).sqrt());
            qh.view_mut((m * dh, 0), (dh, dh)).copy_from(&(self.slice(&ae, q.a, q.b, dh) * w));
            qb.view_mut((m * dh, 0), (dh, dh)).copy_from(&(self.slice(&ae, q.b, q.a, dh) * w));
        }
        (qh, qb)
    }

    /// Vectorised `|e_a⟩⟨e_b|` for each `k` basis vector, in the original coordinates of `p` (row-major).
    pub fn k_embedding(&self) -> CMat {
        let p = self.dim_p;
        let mut out = CMat::zeros(p * p, self.dim_k());
        for (m, q) in self.pairs.iter().enumerate() {
            let ea = self.eigvecs.column(q.a);
            let eb = self.eigvecs.column(q.b);
            for x in 0..p {
                for y in 0..p {
                    out[(x * p + y, m)] = ea[x] * eb[y].conj();
                }
            }
        }
        out
    }

    /// Largest `‖(P_α ⊗ I)A(P_α ⊗ I)‖` over eigenspaces, with its index.
    pub fn diagonal_block_defect(&self, a: &CMat, dh: usize) -> (usize, f64) {
        let ae = self.to_eigen_tensor(a, dh);
        let mut worst = (0, 0.0);
        for alpha in 0..self.gammas.len() {
            let mut m: f64 = 0.0;
            for x in 0..self.dim_p {
                for y in 0..self.dim_p {
                    if self.cluster_of[x] == alpha && self.cluster_of[y] == alpha {
                        m = m.max(crate::linalg::max_abs(&self.slice(&ae, x, y, dh)));
                    }
                }
            }
            if m > worst.1 {
                worst = (alpha, m);
            }
        }
        worst
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::pc;
    use crate::linalg::{c, eye, max_abs, unitary_defect};
    use crate::sample;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn diag(v: &[f64]) -> CMat {
        CMat::from_diagonal(&CVec::from_iterator(v.len(), v.iter().map(|&x| r(x))))
    }

    #[test]
    fn maximally_mixed_state() {
        let m = gns_build(&(eye(3) * r(1.0 / 3.0)), 1e-10).unwrap();
        assert_eq!(m.dim_k(), 0);
        assert_eq!(m.dim_k0, 8);
        assert!(unitary_defect(&m.basis) < 1e-12);
        assert!(m.m_rho.is_infinite());
    }

    #[test]
    fn thermal_qubit() {
        let m = gns_build(&diag(&[0.2, 0.8]), 1e-10).unwrap();
        assert_eq!(m.dim_hat(), 4);
        assert_eq!(m.dim_k(), 1);
        assert_eq!(m.dim_k0, 1);
        assert_eq!(m.gammas, vec![0.8, 0.2]);
        let s = m.s_values()[0];
        assert!((s - (1.0f64 / 3.0).sqrt()).abs() < 1e-12);
        let ch = m.sigma.cosh_a()[(0, 0)].re;
        assert!((ch - (4.0f64 / 3.0).sqrt()).abs() < 1e-12);
        assert!((m.sigma.sinh_a()[(0, 0)].re - s).abs() < 1e-12);
        // ω = diag(√0.8, √0.2) in the original coordinates
        let eta_i = m.basis.column(0).into_owned();
        let w: Vec<f64> = (0..2).map(|a| eta_i[a * 2 + a].norm()).collect();
        assert!((w[0] - 0.8f64.sqrt()).abs() < 1e-12 && (w[1] - 0.2f64.sqrt()).abs() < 1e-12);
        assert!(unitary_defect(&m.basis) < 1e-12);
        assert!((m.m_rho - 4.0).abs() < 1e-12);
    }

    #[test]
    fn three_level_s_values() {
        let m = gns_build(&diag(&[0.1, 0.7, 0.2]), 1e-10).unwrap();
        let mut s = m.s_values();
        s.sort_by(|a, b| a.partial_cmp(b).unwrap());
        let mut expected = vec![(0.2f64 / 0.5).sqrt(), (0.1f64 / 0.6).sqrt(), 1.0];
        expected.sort_by(|a, b| a.partial_cmp(b).unwrap());
        for (x, y) in s.iter().zip(&expected) {
            assert!((x - y).abs() < 1e-12);
        }
        let cs = m.sigma.cosh_a();
        let sn = m.sigma.sinh_a();
        assert!(max_abs(&(&cs * &cs - &sn * &sn - eye(3))) < 1e-12);
    }

    #[test]
    fn rejects_bad_states() {
        assert!(matches!(gns_build(&diag(&[1.0, 0.0]), 1e-10), Err(QfError::NotFaithful(_))));
        assert!(gns_build(&diag(&[0.5, 0.6]), 1e-10).is_err());
    }

    #[test]
    fn gns_identity() {
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        let x0 = sample::complex_matrix(&mut rng, 3, 3);
        let rho = &x0 * x0.adjoint();
        let rho = &rho / trace(&rho);
        let m = gns_build(&rho, 1e-10).unwrap();
        for _ in 0..5 {
            let x = sample::complex_matrix(&mut rng, 3, 3);
            let y = sample::complex_matrix(&mut rng, 3, 3);
            let z = sample::complex_matrix(&mut rng, 3, 3);
            let lhs = m.eta(&z).dotc(&(m.pi(&x) * m.eta(&y)));
            let rhs = trace(&(&rho * z.adjoint() * &x * &y));
            assert!((lhs - rhs).norm() < 1e-10);
        }
        let a = sample::hermitian(&mut rng, 6);
        let via_pi = m.pi_tilde(&a, 2).view((0, 0), (2, 2)).into_owned();
        assert!(max_abs(&(via_pi - m.rho_tilde(&a, 2))) < 1e-12);
        assert!(max_abs(&(m.pi(&(eye(3) * c(2.0, 0.0))) - eye(9) * r(2.0))) < 1e-12);
    }

    #[test]
    fn phi_rho_conjugation_and_bounds() {
        let mut rng = ChaCha8Rng::seed_from_u64(2);
        let m = gns_build(&diag(&[0.5, 0.3, 0.2]), 1e-10).unwrap();
        let a = sample::hermitian(&mut rng, 6);
        let (qh, qb) = m.phi_rho(&a, 2);
        assert!(max_abs(&(pc(&qh, m.dim_k()) - &qb)) < 1e-12);
        let (_, cstar) = crate::algebra::partial_conjugate(&a.adjoint(), crate::algebra::ConjDims::new(3, 6, 2)).unwrap();
        assert!(crate::linalg::op_norm(&qh) <= cstar + 1e-12);
        assert!(crate::linalg::op_norm(&qb) <= cstar + 1e-12);
        let (z1, z2) = m.phi_rho(&CMat::zeros(6, 6), 2);
        assert_eq!(max_abs(&z1) + max_abs(&z2), 0.0);
    }
}
