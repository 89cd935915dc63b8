//! Compactly supported step functions and deterministic simple integrands.
//!
//! Both are right-continuous: a segment `[t_j, t_{j+1})` carries its value at
//! the left endpoint, and everything past the last segment is zero.

use crate::error::{invalid, Result};
use crate::linalg::{bra_tensor, ket_tensor, r, C64, CMat, CVec};

const GRID_EPS: f64 = 1e-12;

/// Merge breakpoint lists into one grid `0 = p₀ < … < p_m = t`, dropping points outside `(0, t)`.
pub fn merge_grids(grids: &[Vec<f64>], t: f64) -> Vec<f64> {
    let mut pts: Vec<f64> = grids.iter().flatten().cloned().filter(|&p| p > GRID_EPS && p < t - GRID_EPS).collect();
    pts.push(0.0);
    pts.push(t);
    pts.sort_by(|a, b| a.partial_cmp(b).unwrap());
    pts.dedup_by(|a, b| (*a - *b).abs() <= GRID_EPS);
    pts
}

fn cumulative(durations: impl Iterator<Item = f64>) -> Vec<f64> {
    let mut acc = 0.0;
    durations
        .map(|d| {
            acc += d;
            acc
        })
        .collect()
}

fn segment_at(ends: &[f64], t: f64) -> Option<usize> {
    ends.iter().position(|&e| t < e - GRID_EPS)
}

#[derive(Clone, Debug, PartialEq)]
pub struct StepFunction {
    dim: usize,
    segments: Vec<(f64, CVec)>,
}

impl StepFunction {
    pub fn new(dim: usize, segments: Vec<(f64, CVec)>) -> Result<Self> {
        for (j, (dur, val)) in segments.iter().enumerate() {
            if !(*dur > 0.0 && dur.is_finite()) {
                return Err(invalid(format!("step function segment {j} has non-positive duration {dur}")));
            }
            if val.len() != dim {
                return Err(invalid(format!("step function segment {j} has length {} but dim is {dim}", val.len())));
            }
        }
        Ok(Self { dim, segments })
    }

    pub fn zero(dim: usize) -> Self {
        Self { dim, segments: Vec::new() }
    }

    pub fn constant(value: CVec, duration: f64) -> Self {
        Self { dim: value.len(), segments: vec![(duration, value)] }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn segments(&self) -> &[(f64, CVec)] {
        &self.segments
    }

    /// Right endpoints of the segments.
    pub fn breakpoints(&self) -> Vec<f64> {
        cumulative(self.segments.iter().map(|s| s.0))
    }

    pub fn support_end(&self) -> f64 {
        self.segments.iter().map(|s| s.0).sum()
    }

    pub fn value_at(&self, t: f64) -> CVec {
        if t < 0.0 {
            return CVec::zeros(self.dim);
        }
        match segment_at(&self.breakpoints(), t) {
            Some(j) => self.segments[j].1.clone(),
            None => CVec::zeros(self.dim),
        }
    }

    /// `∫_a^b ⟨f(s), g(s)⟩ ds`.
    pub fn inner_on(&self, other: &StepFunction, a: f64, b: f64) -> C64 {
        if b <= a {
            return r(0.0);
        }
        let grid = merge_grids(&[self.breakpoints(), other.breakpoints(), vec![a]], b);
        grid.windows(2)
            .filter(|w| w[0] >= a - GRID_EPS)
            .map(|w| self.value_at(w[0]).dotc(&other.value_at(w[0])) * (w[1] - w[0]))
            .sum()
    }

    /// `⟨f, g⟩` in `L²(ℝ₊; K)`.
    pub fn inner(&self, other: &StepFunction) -> C64 {
        self.inner_on(other, 0.0, self.support_end().max(other.support_end()))
    }

    /// Restriction to `[0, t)`.
    pub fn truncate(&self, t: f64) -> StepFunction {
        let grid = merge_grids(&[self.breakpoints()], t.min(self.support_end()));
        let segs = grid.windows(2).map(|w| (w[1] - w[0], self.value_at(w[0]))).collect();
        Self { dim: self.dim, segments: segs }
    }

    /// Left-endpoint samples on the grid `[jτ, (j+1)τ)`, `j < n`.
    pub fn resample(&self, tau: f64, n: usize) -> StepFunction {
        let segs = (0..n).map(|j| (tau, self.value_at(j as f64 * tau))).collect();
        Self { dim: self.dim, segments: segs }
    }

    pub fn is_aligned_to(&self, grid: &[f64]) -> bool {
        self.breakpoints().iter().all(|&b| b >= grid[grid.len() - 1] - GRID_EPS || grid.iter().any(|&g| (g - b).abs() <= GRID_EPS))
    }
}

/// `x̂ = (1, x)` in `K̂ = ℂ ⊕ K`.
pub fn hat(x: &CVec) -> CVec {
    let mut v = CVec::zeros(x.len() + 1);
    v[0] = r(1.0);
    v.rows_mut(1, x.len()).copy_from(x);
    v
}

/// `F^x_y = (⟨x̂| ⊗ I) F (|ŷ⟩ ⊗ I)` for `F` on `K̂ ⊗ h`.
pub fn sandwich(f: &CMat, x: &CVec, y: &CVec, dim_h: usize) -> CMat {
    bra_tensor(&hat(x), dim_h) * f * ket_tensor(&hat(y), dim_h)
}

/// Piecewise-constant operator-valued integrand on `K̂ ⊗ h`, laid out as
/// `[[K, M], [L, N]]` with the `ℂ` component of `K̂` first.
#[derive(Clone, Debug, PartialEq)]
pub struct SimpleIntegrand {
    pub dim_k: usize,
    pub dim_h: usize,
    segments: Vec<(f64, CMat)>,
}

impl SimpleIntegrand {
    pub fn new(dim_k: usize, dim_h: usize, segments: Vec<(f64, CMat)>) -> Result<Self> {
        let n = (1 + dim_k) * dim_h;
        for (j, (dur, f)) in segments.iter().enumerate() {
            if !(*dur > 0.0 && dur.is_finite()) {
                return Err(invalid(format!("integrand segment {j} has non-positive duration {dur}")));
            }
            if f.shape() != (n, n) {
                return Err(invalid(format!("integrand segment {j} is {:?}, expected {n}x{n}", f.shape())));
            }
        }
        Ok(Self { dim_k, dim_h, segments })
    }

    pub fn constant(dim_k: usize, dim_h: usize, f: CMat, duration: f64) -> Result<Self> {
        Self::new(dim_k, dim_h, vec![(duration, f)])
    }

    pub fn segments(&self) -> &[(f64, CMat)] {
        &self.segments
    }

    pub fn breakpoints(&self) -> Vec<f64> {
        cumulative(self.segments.iter().map(|s| s.0))
    }

    pub fn value_at(&self, t: f64) -> CMat {
        let n = (1 + self.dim_k) * self.dim_h;
        match segment_at(&self.breakpoints(), t) {
            Some(j) if t >= 0.0 => self.segments[j].1.clone(),
            _ => CMat::zeros(n, n),
        }
    }

    /// Pointwise adjoint `F*`.
    pub fn adjoint(&self) -> Self {
        Self {
            dim_k: self.dim_k,
            dim_h: self.dim_h,
            segments: self.segments.iter().map(|(d, f)| (*d, f.adjoint())).collect(),
        }
    }
}

/// Assemble `[[K, M], [L, N]]` on `K̂ ⊗ h`.
pub fn integrand_blocks(k: &CMat, l: &CMat, m: &CMat, n: &CMat) -> CMat {
    let dh = k.nrows();
    let dk = l.nrows() / dh.max(1);
    let size = (1 + dk) * dh;
    let mut f = CMat::zeros(size, size);
    f.view_mut((0, 0), (dh, dh)).copy_from(k);
    f.view_mut((0, dh), (dh, dk * dh)).copy_from(m);
    f.view_mut((dh, 0), (dk * dh, dh)).copy_from(l);
    f.view_mut((dh, dh), (dk * dh, dk * dh)).copy_from(n);
    f
}
