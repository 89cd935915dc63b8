//! Exact matrix elements on exponential vectors of step functions.
//!
//! Between breakpoints the test functions are constant, so the
//! quantum Langevin equation reduces to an ordinary linear ODE on `B(h)`
//! (cocycles) or on `B(B(h))` (flows).

use super::generator::HPGenerator;
use crate::error::{invalid, Result};
use crate::fock::{merge_grids, sandwich, SimpleIntegrand, StepFunction};
use crate::linalg::{eye, expm, kron, r, superop, unvec, vec_mat, C64, CMat, CVec, I};

fn check_dims(dim_k: usize, dim_h: usize, f: &StepFunction, g: &StepFunction, u: &CVec, v: &CVec) -> Result<()> {
    if f.dim() != dim_k || g.dim() != dim_k {
        return Err(invalid(format!("test functions must take values in a {dim_k}-dimensional space")));
    }
    if u.len() != dim_h || v.len() != dim_h {
        return Err(invalid(format!("initial vectors must have length {dim_h}")));
    }
    Ok(())
}

/// `∫₀ᵗ ⟨f̂(s) ⊗ u ε(f), F_s (ĝ(s) ⊗ v ε(g))⟩ ds` for a deterministic simple integrand.
pub fn integral_element(
    fint: &SimpleIntegrand,
    f: &StepFunction,
    g: &StepFunction,
    u: &CVec,
    v: &CVec,
    t: f64,
) -> Result<C64> {
    check_dims(fint.dim_k, fint.dim_h, f, g, u, v)?;
    let grid = merge_grids(&[fint.breakpoints(), f.breakpoints(), g.breakpoints()], t);
    let mut acc = r(0.0);
    for w in grid.windows(2) {
        let fx = sandwich(&fint.value_at(w[0]), &f.value_at(w[0]), &g.value_at(w[0]), fint.dim_h);
        acc += u.dotc(&(fx * v)) * (w[1] - w[0]);
    }
    Ok(acc * f.inner(g).exp())
}

/// `M_t` with `⟨u ε(f), Y_t v ε(g)⟩ = ⟨u, M_t v⟩ exp(∫_t^∞ ⟨f, g⟩)`; later slots multiply on the left.
pub fn cocycle_propagator(gen: &HPGenerator, f: &StepFunction, g: &StepFunction, t0: f64, t1: f64) -> CMat {
    let mut m = eye(gen.dim_h);
    for w in merge_grids(&[f.breakpoints(), g.breakpoints(), vec![t0]], t1).windows(2) {
        if w[0] < t0 - 1e-12 {
            continue;
        }
        let x = f.value_at(w[0]);
        let y = g.value_at(w[0]);
        let step = sandwich(&gen.f, &x, &y, gen.dim_h) + eye(gen.dim_h) * x.dotc(&y);
        m = expm(&(step * r(w[1] - w[0]))) * m;
    }
    m
}

/// `⟨u ε(f), Y^F_t v ε(g)⟩`.
pub fn cocycle_element(
    gen: &HPGenerator,
    f: &StepFunction,
    g: &StepFunction,
    u: &CVec,
    v: &CVec,
    t: f64,
) -> Result<C64> {
    check_dims(gen.dim_k, gen.dim_h, f, g, u, v)?;
    let m = cocycle_propagator(gen, f, g, 0.0, t);
    let tail = f.inner_on(g, t, f.support_end().max(g.support_end()));
    Ok(u.dotc(&(m * v)) * tail.exp())
}

/// `I_{K̂} ⊗ a` on `K̂ ⊗ h`.
fn ampliate(a: &CMat, dim_k: usize) -> CMat {
    kron(&eye(1 + dim_k), a)
}

/// The flow generator `θ(a)` on `K̂ ⊗ h`.
pub fn theta(gen: &HPGenerator, a: &CMat) -> CMat {
    let dh = gen.dim_h;
    let n = gen.l.nrows();
    let ia = kron(&eye(gen.dim_k), a);
    let (l, w) = (&gen.l, &gen.w);
    let mut out = CMat::zeros(dh + n, dh + n);
    out.view_mut((0, 0), (dh, dh)).copy_from(&lindblad(gen, a));
    out.view_mut((dh, 0), (n, dh)).copy_from(&(w.adjoint() * (&ia * l - l * a)));
    out.view_mut((0, dh), (dh, n)).copy_from(&((l.adjoint() * &ia - a * l.adjoint()) * w));
    out.view_mut((dh, dh), (n, n)).copy_from(&(w.adjoint() * &ia * w - &ia));
    out
}

/// `θ(a) = F*(I ⊗ a) + (I ⊗ a)F + F*Δ(I ⊗ a)ΔF`, used as an independent check on [`theta`].
pub fn theta_from_f(gen: &HPGenerator, a: &CMat) -> CMat {
    let ia = ampliate(a, gen.dim_k);
    let d = gen.delta();
    let fa = gen.f.adjoint();
    &fa * &ia + &ia * &gen.f + &fa * &d * &ia * &d * &gen.f
}

/// `𝓛(a) = −i[H, a] − ½{L*L, a} + L*(I ⊗ a)L`.
pub fn lindblad(gen: &HPGenerator, a: &CMat) -> CMat {
    let h = &gen.h;
    let ll = gen.l.adjoint() * &gen.l;
    let ia = kron(&eye(gen.dim_k), a);
    (h * a - a * h) * (-I) - (&ll * a + a * &ll) * r(0.5) + gen.l.adjoint() * ia * &gen.l
}

/// Matrix of `𝓛` on column-stacked `B(h)`.
pub fn lindblad_superop(gen: &HPGenerator) -> CMat {
    superop(gen.dim_h, |a| lindblad(gen, a))
}

/// `e^{t𝓛}(a)`.
pub fn lindblad_semigroup(gen: &HPGenerator, a: &CMat, t: f64) -> CMat {
    let s = expm(&(lindblad_superop(gen) * r(t)));
    unvec(&(s * vec_mat(a)), gen.dim_h)
}

/// Matrix of `b ↦ (⟨x̂| ⊗ I)θ(b)(|ŷ⟩ ⊗ I)` on column-stacked `B(h)`.
pub fn theta_slice_superop(gen: &HPGenerator, x: &CVec, y: &CVec) -> CMat {
    superop(gen.dim_h, |b| sandwich(&theta(gen, b), x, y, gen.dim_h))
}

/// `Φ_t(a)` with `⟨u ε(f), j_t(a) v ε(g)⟩ = ⟨u, Φ_t(a) v⟩ exp(∫_t^∞ ⟨f, g⟩)`.
pub fn flow_propagator(gen: &HPGenerator, a: &CMat, f: &StepFunction, g: &StepFunction, t: f64) -> CMat {
    let d2 = gen.dim_h * gen.dim_h;
    let mut s = eye(d2);
    for w in merge_grids(&[f.breakpoints(), g.breakpoints()], t).windows(2) {
        let x = f.value_at(w[0]);
        let y = g.value_at(w[0]);
        let step = theta_slice_superop(gen, &x, &y) + eye(d2) * x.dotc(&y);
        // the earliest slot is applied last
        s *= expm(&(step * r(w[1] - w[0])));
    }
    unvec(&(s * vec_mat(a)), gen.dim_h)
}

/// `⟨u ε(f), j_t(a) v ε(g)⟩`.
pub fn flow_element(
    gen: &HPGenerator,
    a: &CMat,
    f: &StepFunction,
    g: &StepFunction,
    u: &CVec,
    v: &CVec,
    t: f64,
) -> Result<C64> {
    check_dims(gen.dim_k, gen.dim_h, f, g, u, v)?;
    if a.shape() != (gen.dim_h, gen.dim_h) {
        return Err(invalid("observable must act on the initial space"));
    }
    let phi = flow_propagator(gen, a, f, g, t);
    let tail = f.inner_on(g, t, f.support_end().max(g.support_end()));
    Ok(u.dotc(&(phi * v)) * tail.exp())
}
