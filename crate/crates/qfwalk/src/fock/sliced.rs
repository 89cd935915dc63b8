//! Fock space over `L²([0,t); K)` restricted to slot-wise constant functions.
//!
//! Slot `j` of duration `Δ_j` carries its own copy of `Γ(K)`; the constant
//! function `x·1_{slot}` corresponds to `√Δ_j x`. Operators act on
//! `h ⊗ slot₁ ⊗ … ⊗ slot_n`.

use super::space::FockSpace;
use super::step::{SimpleIntegrand, StepFunction};
use crate::error::{invalid, Result};
use crate::linalg::{block, eye, kron, r, CMat, CVec};

#[derive(Clone, Debug)]
pub struct SlicedFock {
    durations: Vec<f64>,
    slot: FockSpace,
}

impl SlicedFock {
    pub fn new(durations: Vec<f64>, dim_k: usize, slot_cutoff: usize) -> Result<Self> {
        if durations.iter().any(|&d| !(d > 0.0 && d.is_finite())) {
            return Err(invalid("slot durations must be positive"));
        }
        Ok(Self { durations, slot: FockSpace::new(dim_k, slot_cutoff) })
    }

    pub fn slot_count(&self) -> usize {
        self.durations.len()
    }

    pub fn durations(&self) -> &[f64] {
        &self.durations
    }

    pub fn slot_space(&self) -> &FockSpace {
        &self.slot
    }

    /// `0 = t₀ < t₁ < … < t_n`.
    pub fn grid(&self) -> Vec<f64> {
        let mut g = vec![0.0];
        for d in &self.durations {
            g.push(g[g.len() - 1] + d);
        }
        g
    }

    pub fn horizon(&self) -> f64 {
        self.durations.iter().sum()
    }

    pub fn dim(&self) -> usize {
        self.slot.dim().pow(self.slot_count() as u32)
    }

    /// `ε(f 1_{[0,t)}) = ⊗_j ε(√Δ_j f(t_j))`.
    pub fn exponential_vector(&self, f: &StepFunction) -> Result<CVec> {
        let grid = self.grid();
        if !f.is_aligned_to(&grid) {
            return Err(invalid("step function is not constant on the slots"));
        }
        let mut out = CVec::from_element(1, r(1.0));
        for (j, d) in self.durations.iter().enumerate() {
            let e = self.slot.exponential_vector(&(f.value_at(grid[j]) * r(d.sqrt())));
            out = kron_vec(&out, &e);
        }
        Ok(out)
    }

    /// `h_op ⊗ I ⊗ … ⊗ slot_op ⊗ … ⊗ I` with `slot_op` in position `j`.
    pub fn embed(&self, h_op: &CMat, j: usize, slot_op: &CMat) -> CMat {
        let before = self.slot.dim().pow(j as u32);
        let after = self.slot.dim().pow((self.slot_count() - j - 1) as u32);
        kron(h_op, &kron(&kron(&eye(before), slot_op), &eye(after)))
    }
}

pub fn kron_vec(a: &CVec, b: &CVec) -> CVec {
    CVec::from_fn(a.len() * b.len(), |i, _| a[i / b.len()] * b[i % b.len()])
}

/// `Λ(F)_t` for a deterministic simple integrand, as an operator on `h ⊗ slots`.
///
/// On slot `j` the four parts become `K ⊗ Δ_j`, `Σ_i L_i ⊗ √Δ_j a⁺_i`,
/// `Σ_i M_i ⊗ √Δ_j a_i` and `Σ_{ik} N_{ik} ⊗ a⁺_i a_k`. `F` must be constant
/// on every slot.
pub fn qs_integral_operator(f: &SimpleIntegrand, sliced: &SlicedFock) -> Result<CMat> {
    let grid = sliced.grid();
    for &b in &f.breakpoints() {
        let inside = b < sliced.horizon() - 1e-12;
        if inside && !grid.iter().any(|&g| (g - b).abs() <= 1e-12) {
            return Err(invalid(format!("integrand jumps at {b}, which is not a slot boundary")));
        }
    }
    let dk = f.dim_k;
    let dh = f.dim_h;
    if sliced.slot_space().one_particle_dim() != dk {
        return Err(invalid("slot space and integrand disagree on dim K"));
    }
    let space = sliced.slot_space();
    let ann: Vec<CMat> = (0..dk).map(|i| space.mode_annihilator(i)).collect();
    let cre: Vec<CMat> = ann.iter().map(|a| a.adjoint()).collect();
    let slot_id = eye(space.dim());

    let mut total = CMat::zeros(dh * sliced.dim(), dh * sliced.dim());
    for (j, &dur) in sliced.durations().iter().enumerate() {
        let fj = f.value_at(grid[j]);
        let sd = r(dur.sqrt());
        let mut local = kron(&block(&fj, 0, 0, dh), &slot_id) * r(dur);
        for i in 0..dk {
            local += kron(&block(&fj, 1 + i, 0, dh), &(&cre[i] * sd));
            local += kron(&block(&fj, 0, 1 + i, dh), &(&ann[i] * sd));
            #[allow(clippy::needless_range_loop)]
            for k in 0..dk {
                let nik = block(&fj, 1 + i, 1 + k, dh);
                if nik.iter().any(|z| z.norm() > 0.0) {
                    local += kron(&nik, &(&cre[i] * &ann[k]));
                }
            }
        }
        total += embed_local(sliced, dh, j, &local);
    }
    Ok(total)
}

/// Lift an operator on `h ⊗ slot_j` to `h ⊗ slots`.
fn embed_local(sliced: &SlicedFock, dh: usize, j: usize, local: &CMat) -> CMat {
    let sd = sliced.slot_space().dim();
    let before = sd.pow(j as u32);
    let after = sd.pow((sliced.slot_count() - j - 1) as u32);
    let n = dh * sliced.dim();
    let mut out = CMat::zeros(n, n);
    // index (a, p, s, q) with a ∈ h, p < before, s < sd, q < after
    for a in 0..dh {
        for s in 0..sd {
            for b in 0..dh {
                for t in 0..sd {
                    let z = local[(a * sd + s, b * sd + t)];
                    if z.norm() == 0.0 {
                        continue;
                    }
                    for p in 0..before {
                        for q in 0..after {
                            let row = ((a * before + p) * sd + s) * after + q;
                            let col = ((b * before + p) * sd + t) * after + q;
                            out[(row, col)] = z;
                        }
                    }
                }
            }
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fock::step::integrand_blocks;
    use crate::linalg::{c, max_abs};

    #[test]
    fn embedding_matches_kron() {
        let s = SlicedFock::new(vec![0.5, 0.5], 1, 2).unwrap();
        let h = CMat::from_row_slice(2, 2, &[r(1.0), c(0.0, 2.0), r(3.0), r(4.0)]);
        let a = s.slot_space().mode_annihilator(0);
        let local = kron(&h, &a);
        for j in 0..2 {
            assert!(max_abs(&(embed_local(&s, 2, j, &local) - s.embed(&h, j, &a))) == 0.0);
        }
    }

    #[test]
    fn time_part_only() {
        let s = SlicedFock::new(vec![0.3, 0.2], 1, 3).unwrap();
        let k = CMat::from_row_slice(2, 2, &[r(1.0), c(0.5, 0.5), r(0.0), r(-1.0)]);
        let z = CMat::zeros(2, 2);
        let f = SimpleIntegrand::constant(1, 2, integrand_blocks(&k, &z, &z, &z), 0.5).unwrap();
        let op = qs_integral_operator(&f, &s).unwrap();
        assert!(max_abs(&(op - kron(&(&k * r(0.5)), &eye(s.dim())))) < 1e-15);
    }

    #[test]
    fn misaligned_integrand_rejected() {
        let s = SlicedFock::new(vec![0.5, 0.5], 1, 2).unwrap();
        let f = SimpleIntegrand::new(1, 1, vec![(0.3, eye(2)), (0.7, eye(2))]).unwrap();
        assert!(qs_integral_operator(&f, &s).is_err());
    }

    #[test]
    fn creation_places_slot_weights() {
        let s = SlicedFock::new(vec![0.36, 0.64], 1, 2).unwrap();
        let z = CMat::zeros(1, 1);
        let f = SimpleIntegrand::constant(1, 1, integrand_blocks(&z, &eye(1), &z, &z), 1.0).unwrap();
        let op = qs_integral_operator(&f, &s).unwrap();
        let vac = s.exponential_vector(&StepFunction::zero(1)).unwrap();
        let out = op * vac;
        // one particle in slot 1: index 1·3 + 0; in slot 2: index 0·3 + 1
        assert!((out[3] - r(0.6)).norm() < 1e-15);
        assert!((out[1] - r(0.8)).norm() < 1e-15);
        assert!((out.norm_squared() - 1.0).abs() < 1e-14);
    }
}
