use num_complex::Complex64;
use serde::Serialize;
use std::sync::Arc;

use super::{anorm_bounds, right_multiplier_action, vanishing_check, Coefficient, FourierElement};
use crate::bundle::FellBundle;
use crate::error::{Error, Result};
use crate::functional::{Comultiplication, Functional, Positivity, UnitalDynamicalDelta, POSITIVITY_TOL};
use crate::group::folner_certificate;
use crate::linalg::{hermitian_eigen, hs_inner, max_abs_diff, operator_norm, ComplexMatrix};
use crate::section::Section;

fn require_dynamics(b: &Arc<FellBundle>) -> Result<&crate::bundle::Dynamics> {
    b.dynamics().ok_or_else(|| Error::WrongFamily("a bundle built from a unital dynamical system is required".into()))
}

fn check_set(b: &FellBundle, k: &[usize]) -> Result<()> {
    if k.is_empty() {
        return Err(Error::EmptySet);
    }
    if let Some(&bad) = k.iter().find(|&&s| s >= b.order()) {
        return Err(Error::InvalidParameter(format!("element {bad} out of range")));
    }
    Ok(())
}

/// `λ_{1_{K⁻¹}, 1_{e}}`, for which `u_s(s, a) = (e, a†)` when `s ∈ K` and
/// `u_s = 0` otherwise.
pub fn eymard_element(b: &Arc<FellBundle>, k: &[usize]) -> Result<Coefficient> {
    require_dynamics(b)?;
    check_set(b, k)?;
    let g = b.group();
    let xi = Section::indicator(b, &g.set_inverse(k))?;
    let eta = Section::indicator(b, &[g.identity()])?;
    Coefficient::new(xi, eta)
}

/// `u_{K,ε} = (1/((1+ε)|C|))·λ_{1_C, 1_{KC}}` with `C` from the Følner certificate.
///
/// With `C = G` this evaluates to `u_s(s, a) = (e, (1/((1+ε)|G|)) Σ_t γ_{t⁻¹}(a†))`,
/// so `u_s(s, 1) = 1/(1+ε)` for every `s`.
pub fn folner_approx_identity(b: &Arc<FellBundle>, k: &[usize], eps: f64) -> Result<Coefficient> {
    require_dynamics(b)?;
    check_set(b, k)?;
    let g = b.group();
    let c = folner_certificate(g, k, eps)?;
    let kc = g.set_product(k, &c);
    let scale = 1.0 / ((1.0 + eps) * c.len() as f64);
    let xi = Section::indicator(b, &c)?.scale(Complex64::new(scale, 0.0));
    let eta = Section::indicator(b, &kc)?;
    Coefficient::new(xi, eta)
}

/// `√|KC| / ((1+ε)√|C|)`, the product `‖ξ‖₂‖η‖₂` of the Følner element.
pub fn folner_norm_bound(b: &FellBundle, k: &[usize], eps: f64) -> Result<f64> {
    check_set(b, k)?;
    let g = b.group();
    let c = folner_certificate(g, k, eps)?;
    let kc = g.set_product(k, &c);
    Ok((kc.len() as f64).sqrt() / ((1.0 + eps) * (c.len() as f64).sqrt()))
}

/// `‖uv − v‖/‖v‖` with both norms taken as the lower ends of `anorm_bounds`
/// under the same budget and seed. `v` must vanish outside `k`.
pub fn approx_identity_defect(
    u: &Coefficient,
    v: &Coefficient,
    k: &[usize],
    delta: &dyn Comultiplication,
    budget: usize,
    seed: u64,
) -> Result<f64> {
    let report = vanishing_check(v);
    if let Some(s) = report.observed_support.iter().find(|s| !k.contains(s)) {
        return Err(Error::SupportViolation(format!("v does not vanish at {s}")));
    }
    let ve = v.tabulate();
    let uv = u.tabulate().product(&ve, delta)?;
    let defect = uv.sub(&ve)?;
    let denom = anorm_bounds(&ve, budget, seed)?.lower;
    if denom <= 0.0 {
        return Err(Error::InvalidParameter("v has zero norm".into()));
    }
    Ok(anorm_bounds(&defect, budget, seed)?.lower / denom)
}

/// `T(φ) = u_φ·φ`, with `u_φ` the Eymard element of the support of `φ`
/// acting through the unital dynamical comultiplication. On the support
/// this is `T(φ)_s(b) = (e, 1)·conj(φ_s(b))`.
pub fn t_map(phi: &Functional) -> Result<FourierElement> {
    let b = phi.bundle();
    let support: Vec<usize> = b.group().elements().filter(|&s| phi.component(s).norm() > 0.0).collect();
    let delta = UnitalDynamicalDelta::new(b)?;
    let u = if support.is_empty() {
        FourierElement::from_fn(b, |_, _| crate::linalg::zeros(b.ambient_dim(), b.ambient_dim()))
    } else {
        eymard_element(b, &support)?.tabulate()
    };
    right_multiplier_action(phi, &u, &delta)
}

/// Checks that `psi` is a density for a state on `B_e`: hermitian, positive
/// semidefinite and `tr(Ψ·1_e) = 1`.
fn check_state(b: &FellBundle, psi: &ComplexMatrix) -> Result<()> {
    let n = b.ambient_dim();
    if psi.shape() != (n, n) {
        return Err(Error::NotAState(format!("expected a {n}x{n} density")));
    }
    let scale = 1.0 + operator_norm(psi);
    if operator_norm(&(psi - psi.adjoint())) > POSITIVITY_TOL * scale {
        return Err(Error::NotAState("density is not hermitian".into()));
    }
    if hermitian_eigen(psi).0.first().copied().unwrap_or(0.0) < -POSITIVITY_TOL * scale {
        return Err(Error::NotAState("density is not positive".into()));
    }
    let unit = b.unit_of_unit_fiber();
    let value = hs_inner(&psi.adjoint(), &unit);
    if (value - Complex64::new(1.0, 0.0)).norm() > 1e-9 {
        return Err(Error::NotAState(format!("ψ(1) = {value}, expected 1")));
    }
    Ok(())
}

/// `T_ψ(v)_s(b) = ψ(v_s(b)†)` for the state `ψ(x) = tr(Ψx)` on `B_e`.
pub fn t_psi(psi: &ComplexMatrix, v: &FourierElement) -> Result<Functional> {
    let b = v.bundle();
    check_state(b, psi)?;
    let values: Vec<Vec<Complex64>> =
        v.values().iter().map(|list| list.iter().map(|x| (psi * x.adjoint()).trace()).collect()).collect();
    Functional::from_basis_values(b, &values)
}

#[derive(Debug, Clone, Serialize)]
pub struct SpanPdReport {
    /// Worst deviation of `T(φ)_s(b)` from `(e,1)·conj(φ_s(b))` on basis elements.
    pub t_residual: f64,
    /// Worst deviation of `T_ψ(T(φ))` from `φ`.
    pub round_trip_residual: f64,
    /// Positivity of `T_ψ(λ_{ξ,ξ})` for a random `ξ` supported on the support of `φ`.
    pub positive_image: Positivity,
}

pub fn span_pd_maps(phi: &Functional, psi: &ComplexMatrix, seed: u64) -> Result<SpanPdReport> {
    let b = phi.bundle();
    require_dynamics(b)?;
    let t = t_map(phi)?;
    let mut t_residual: f64 = 0.0;
    for s in b.group().elements() {
        for (i, e) in b.fiber(s).basis().iter().enumerate() {
            let expected = b.unit_of_unit_fiber() * phi.eval(s, e).conj();
            t_residual = t_residual.max(max_abs_diff(&t.values()[s][i], &expected));
        }
    }
    let back = t_psi(psi, &t)?;
    let round_trip_residual = back.max_diff(phi);
    let support: Vec<usize> = b.group().elements().filter(|&s| phi.component(s).norm() > 0.0).collect();
    let mut rng = crate::seeded_rng(seed);
    let xi = Section::random_supported(b, &support, &mut rng);
    let image = t_psi(psi, &Coefficient::new(xi.clone(), xi)?.tabulate())?;
    Ok(SpanPdReport { t_residual, round_trip_residual, positive_image: image.positivity(POSITIVITY_TOL) })
}

#[derive(Debug, Clone, Serialize)]
pub struct LeptinRow {
    pub eps: f64,
    pub norm_upper: f64,
    pub worst_defect: f64,
}

/// Search for a bounded approximate identity: Følner elements with `K = G`
/// over a list of `ε`, with the worst defect over random elements of `A(B)`.
/// Every finite group is amenable, so this always finds one.
#[derive(Debug, Clone, Serialize)]
pub struct LeptinProbe {
    pub rows: Vec<LeptinRow>,
    /// Whether norms stay below 1 while the defects decrease with `ε`.
    pub bounded_approximate_identity: bool,
}

pub fn leptin_converse_probe(b: &Arc<FellBundle>, eps_list: &[f64], samples: usize, seed: u64) -> Result<LeptinProbe> {
    let all: Vec<usize> = b.group().elements().collect();
    let delta = UnitalDynamicalDelta::new(b)?;
    let mut rows = Vec::new();
    for &eps in eps_list {
        let u = folner_approx_identity(b, &all, eps)?;
        let mut worst: f64 = 0.0;
        for i in 0..samples {
            let mut rng = crate::seeded_rng(seed.wrapping_add(i as u64));
            let v = Coefficient::random(b, &mut rng);
            worst = worst.max(approx_identity_defect(&u, &v, &all, &delta, 2, seed)?);
        }
        rows.push(LeptinRow { eps, norm_upper: u.norm_upper(), worst_defect: worst });
    }
    let mut sorted = rows.clone();
    sorted.sort_by(|a, c| a.eps.total_cmp(&c.eps));
    let bounded = sorted.iter().all(|r| r.norm_upper <= 1.0 + 1e-12)
        && sorted.windows(2).all(|w| w[0].worst_defect <= w[1].worst_defect + 1e-12);
    Ok(LeptinProbe { rows, bounded_approximate_identity: bounded })
}
