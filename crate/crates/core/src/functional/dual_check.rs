use num_complex::Complex64;
use serde::Serialize;
use std::sync::Arc;

use super::Functional;
use crate::bundle::{is_saturated, FellBundle};
use crate::error::Result;
use crate::linalg::{hs_inner, operator_norm, pinv, polar_decompose, trace_norm, zeros, ComplexMatrix, ComplexVector};
use crate::section::Section;

/// Sampled lower estimate of the dual norm of one functional.
#[derive(Debug, Clone, Serialize)]
pub struct DualProbe {
    /// Block trace-norm formula.
    pub bnorm: f64,
    /// Trace norm of the representer of `φ` inside `λ(ℓ¹(B))`.
    pub representer_norm: f64,
    /// Largest `|φ(f)|/‖f‖_*` over the probed sections.
    pub best_sample: f64,
    /// Largest excess of a sample over `bnorm`, relative to `1 + bnorm`.
    pub worst_excess: f64,
    pub samples: usize,
}

/// Probes `sup{|φ(f)| : ‖f‖_* ≤ 1}` without the block decomposition: the
/// functional is written as `x ↦ tr(Y†x)` for `Y` in the image of `λ`, the
/// maximizer is the polar part of `Y`, and random sections are added on top.
pub fn dual_probe<R: rand::Rng + ?Sized>(phi: &Functional, random_samples: usize, rng: &mut R) -> Result<DualProbe> {
    let b = phi.bundle();
    let bnorm = phi.bnorm()?;
    let rep = b.presentation()?.rep();
    let dim = rep.dim();

    let mut y = zeros(dim, dim);
    for s in b.group().elements() {
        let basis = b.fiber(s).basis();
        if basis.is_empty() {
            continue;
        }
        let images: Vec<ComplexMatrix> = basis.iter().map(|e| rep.fiber_operator(s, e)).collect();
        let d = images.len();
        let gram = ComplexMatrix::from_fn(d, d, |i, j| hs_inner(&images[i], &images[j]));
        let v = ComplexVector::from_iterator(d, basis.iter().map(|e| phi.eval(s, e).conj()));
        let coeffs = pinv(&gram) * v;
        for (img, c) in images.iter().zip(coeffs.iter()) {
            y += img * *c;
        }
    }
    let representer_norm = trace_norm(&y);

    let mut candidates = Vec::with_capacity(random_samples + 1);
    let (w, _) = polar_decompose(&y)?;
    candidates.push(sections_from_operator(b, &w)?);
    for _ in 0..random_samples {
        candidates.push(Section::random(b, rng));
    }

    let mut best: f64 = 0.0;
    let mut worst_excess = f64::NEG_INFINITY;
    for f in &candidates {
        let norm = operator_norm(&rep.matrix(f)?);
        if norm <= 0.0 {
            continue;
        }
        let value = phi.pair(f)?.norm() / norm;
        best = best.max(value);
        worst_excess = worst_excess.max((value - bnorm) / (1.0 + bnorm));
    }
    Ok(DualProbe { bnorm, representer_norm, best_sample: best, worst_excess, samples: candidates.len() })
}

/// The section with `λ(f) = x`, solved fiber by fiber from the HS inner
/// products against the images of the fiber bases.
fn sections_from_operator(b: &Arc<FellBundle>, x: &ComplexMatrix) -> Result<Section> {
    let rep = b.presentation()?.rep();
    let mut coords = Vec::with_capacity(b.order());
    for s in b.group().elements() {
        let basis = b.fiber(s).basis();
        let images: Vec<ComplexMatrix> = basis.iter().map(|e| rep.fiber_operator(s, e)).collect();
        let d = images.len();
        let gram = ComplexMatrix::from_fn(d, d, |i, j| hs_inner(&images[i], &images[j]));
        let rhs = ComplexVector::from_iterator(d, images.iter().map(|e| hs_inner(e, x)));
        coords.push((pinv(&gram) * rhs).iter().copied().collect::<Vec<Complex64>>());
    }
    Section::from_coordinates(b, &coords)
}

#[derive(Debug, Clone, Serialize)]
pub struct DualIsoReport {
    pub saturated: bool,
    pub trials: usize,
    /// Largest `bnorm − best sample` over the trials.
    pub worst_gap: f64,
    /// Largest relative excess of any sample over `bnorm`.
    pub worst_excess: f64,
    pub passed: bool,
}

/// Allowed shortfall of the sampled sup below the block formula.
pub const DUAL_GAP_TOL: f64 = 1e-4;
/// Allowed relative excess of a sample over the block formula.
pub const DUAL_EXCESS_TOL: f64 = 1e-9;

/// Compares the block dual norm with the probed sup on random functionals.
/// Bundles that are not saturated are still checked and flagged.
pub fn dual_iso_check(b: &Arc<FellBundle>, trials: usize, seed: u64) -> Result<DualIsoReport> {
    let mut worst_gap: f64 = 0.0;
    let mut worst_excess = f64::NEG_INFINITY;
    for trial in 0..trials {
        let mut rng = crate::seeded_rng(seed.wrapping_add(trial as u64));
        let phi = Functional::random(b, &mut rng);
        let probe = dual_probe(&phi, 4, &mut rng)?;
        worst_gap = worst_gap.max(probe.bnorm - probe.best_sample);
        worst_excess = worst_excess.max(probe.worst_excess);
    }
    if trials == 0 {
        worst_excess = 0.0;
    }
    let passed = worst_gap <= DUAL_GAP_TOL && worst_excess <= DUAL_EXCESS_TOL;
    Ok(DualIsoReport { saturated: is_saturated(b), trials, worst_gap, worst_excess, passed })
}
