//! The Fourier space `A(B)`: `B_e`-valued coefficients `u_s(b) = ⟨λ_s(b)ξ, η⟩`
//! of the regular representation, with the inner product of `ℓ²(B)` taken
//! conjugate-linear in the first slot, so `u_s` is conjugate-linear in `b`.

mod norm;
mod special;

pub use norm::{anorm_bounds, NormBounds};
pub use special::{
    approx_identity_defect, eymard_element, folner_approx_identity, folner_norm_bound, leptin_converse_probe,
    span_pd_maps, t_map, t_psi, LeptinProbe, LeptinRow, SpanPdReport,
};

use num_complex::Complex64;
use rand::Rng;
use serde::Serialize;
use std::sync::Arc;

use crate::bundle::{FellBundle, AXIOM_TOL};
use crate::error::{Error, Result};
use crate::functional::{Comultiplication, Functional};
use crate::linalg::{operator_norm, zeros, ComplexMatrix};
use crate::section::Section;

/// `λ_{ξ,η}` for sections `ξ, η ∈ ℓ²(B)`.
#[derive(Debug, Clone)]
pub struct Coefficient {
    xi: Section,
    eta: Section,
}

impl Coefficient {
    pub fn new(xi: Section, eta: Section) -> Result<Self> {
        if xi.bundle().id() != eta.bundle().id() {
            return Err(Error::BundleMismatch);
        }
        Ok(Self { xi, eta })
    }

    pub fn random<R: Rng + ?Sized>(bundle: &Arc<FellBundle>, rng: &mut R) -> Self {
        Self { xi: Section::random(bundle, rng), eta: Section::random(bundle, rng) }
    }

    pub fn bundle(&self) -> &Arc<FellBundle> {
        self.xi.bundle()
    }

    pub fn xi(&self) -> &Section {
        &self.xi
    }

    pub fn eta(&self) -> &Section {
        &self.eta
    }

    /// `Σ_t (b·ξ_{s⁻¹t})† η_t ∈ B_e` for `b ∈ B_s`.
    pub fn evaluate(&self, s: usize, b: &ComplexMatrix) -> Result<ComplexMatrix> {
        let bundle = self.bundle();
        check_member(bundle, s, b)?;
        Ok(self.evaluate_unchecked(s, b))
    }

    fn evaluate_unchecked(&self, s: usize, b: &ComplexMatrix) -> ComplexMatrix {
        let bundle = self.bundle();
        let g = bundle.group();
        let n = bundle.ambient_dim();
        let si = g.inv(s);
        let mut out = zeros(n, n);
        for t in g.elements() {
            let x = self.xi.value(g.mul(si, t));
            let y = self.eta.value(t);
            out += (b * x).adjoint() * y;
        }
        out
    }

    /// `‖ξ‖₂·‖η‖₂`, an upper bound for the norm in `A(B)`.
    pub fn norm_upper(&self) -> f64 {
        self.xi.l2_norm() * self.eta.l2_norm()
    }

    /// `λ_{η,ξ}`, which is `u*` for `u = λ_{ξ,η}`.
    pub fn star(&self) -> Coefficient {
        Self { xi: self.eta.clone(), eta: self.xi.clone() }
    }

    pub fn scale_xi(&self, k: Complex64) -> Coefficient {
        Self { xi: self.xi.scale(k), eta: self.eta.clone() }
    }

    pub fn tabulate(&self) -> FourierElement {
        let b = self.bundle();
        let values = b
            .group()
            .elements()
            .map(|s| b.fiber(s).basis().iter().map(|e| self.evaluate_unchecked(s, e)).collect())
            .collect();
        FourierElement { bundle: b.clone(), values }
    }
}

fn check_member(bundle: &FellBundle, s: usize, b: &ComplexMatrix) -> Result<()> {
    if s >= bundle.order() {
        return Err(Error::InvalidParameter(format!("element {s} out of range")));
    }
    let n = bundle.ambient_dim();
    if b.shape() != (n, n) {
        return Err(Error::Shape(format!("expected {n}x{n}, got {}x{}", b.nrows(), b.ncols())));
    }
    let residual = bundle.fiber(s).residual(b);
    if residual > AXIOM_TOL * (1.0 + b.norm()) {
        return Err(Error::Membership { fiber: s, residual });
    }
    Ok(())
}

/// An element of `A(B)` (or any conjugate-linear `B_e`-valued family) stored
/// by its values `u_s(e_{s,i})` on the fiber bases.
#[derive(Debug, Clone)]
pub struct FourierElement {
    bundle: Arc<FellBundle>,
    values: Vec<Vec<ComplexMatrix>>,
}

impl FourierElement {
    pub fn from_values(bundle: &Arc<FellBundle>, values: Vec<Vec<ComplexMatrix>>) -> Result<Self> {
        if values.len() != bundle.order() {
            return Err(Error::Dimension("one value list per fiber expected".into()));
        }
        for (s, list) in values.iter().enumerate() {
            if list.len() != bundle.fiber(s).dim() {
                return Err(Error::Dimension(format!("fiber {s} has dimension {}", bundle.fiber(s).dim())));
            }
            for v in list {
                check_member(bundle, 0, v)?;
            }
        }
        Ok(Self { bundle: bundle.clone(), values })
    }

    /// Tabulates `b ↦ f(s, b)` on the fiber bases.
    fn from_fn(bundle: &Arc<FellBundle>, f: impl Fn(usize, &ComplexMatrix) -> ComplexMatrix) -> Self {
        let values =
            bundle.group().elements().map(|s| bundle.fiber(s).basis().iter().map(|e| f(s, e)).collect()).collect();
        Self { bundle: bundle.clone(), values }
    }

    pub fn bundle(&self) -> &Arc<FellBundle> {
        &self.bundle
    }

    pub fn values(&self) -> &[Vec<ComplexMatrix>] {
        &self.values
    }

    /// `u_s(b) = Σ_i conj(c_i) u_s(e_{s,i})` for `b = Σ_i c_i e_{s,i}`.
    pub fn evaluate(&self, s: usize, b: &ComplexMatrix) -> Result<ComplexMatrix> {
        check_member(&self.bundle, s, b)?;
        Ok(self.evaluate_unchecked(s, b))
    }

    fn evaluate_unchecked(&self, s: usize, b: &ComplexMatrix) -> ComplexMatrix {
        let n = self.bundle.ambient_dim();
        let coords = self.bundle.fiber(s).coordinates(b);
        let mut out = zeros(n, n);
        for (v, c) in self.values[s].iter().zip(coords.iter()) {
            out += v * c.conj();
        }
        out
    }

    fn same_bundle(&self, other: &FourierElement) -> Result<()> {
        if self.bundle.id() != other.bundle.id() {
            return Err(Error::BundleMismatch);
        }
        Ok(())
    }

    pub fn add(&self, other: &FourierElement) -> Result<FourierElement> {
        self.same_bundle(other)?;
        let values =
            self.values.iter().zip(&other.values).map(|(a, b)| a.iter().zip(b).map(|(x, y)| x + y).collect()).collect();
        Ok(Self { bundle: self.bundle.clone(), values })
    }

    pub fn sub(&self, other: &FourierElement) -> Result<FourierElement> {
        self.add(&other.scale(Complex64::new(-1.0, 0.0)))
    }

    pub fn scale(&self, k: Complex64) -> FourierElement {
        let values = self.values.iter().map(|l| l.iter().map(|v| v * k).collect()).collect();
        Self { bundle: self.bundle.clone(), values }
    }

    /// `u*_s(b) = u_{s⁻¹}(b†)†`.
    pub fn star(&self) -> FourierElement {
        let g = self.bundle.group().clone();
        let this = self.clone();
        Self::from_fn(&self.bundle, move |s, b| this.evaluate_unchecked(g.inv(s), &b.adjoint()).adjoint())
    }

    /// Largest entry difference of the tabulated values.
    pub fn max_diff(&self, other: &FourierElement) -> f64 {
        self.values
            .iter()
            .zip(&other.values)
            .flat_map(|(a, b)| a.iter().zip(b).map(|(x, y)| crate::linalg::max_abs_diff(x, y)))
            .fold(0.0, f64::max)
    }

    /// Elements `s` where some `u_s(e_{s,i})` exceeds `tol`.
    pub fn support(&self, tol: f64) -> Vec<usize> {
        (0..self.values.len()).filter(|&s| self.values[s].iter().any(|v| v.norm() > tol)).collect()
    }

    /// `(uv)_s(b) = Σ_i v_s(u_s(x_i)† y_i)` with `Δ_{s,s}(b·b₀ˢ) = Σ_i x_i ⊗ y_i`.
    pub fn product(&self, v: &FourierElement, delta: &dyn Comultiplication) -> Result<FourierElement> {
        self.same_bundle(v)?;
        check_delta(delta, &self.bundle)?;
        Ok(Self::from_fn(&self.bundle, |s, b| {
            let n = self.bundle.ambient_dim();
            let mut out = zeros(n, n);
            for (x, y) in delta.split(s, b) {
                let c = self.evaluate_unchecked(s, &x).adjoint() * y;
                out += v.evaluate_unchecked(s, &self.bundle.fiber(s).project(&c));
            }
            out
        }))
    }
}

fn check_delta(delta: &dyn Comultiplication, bundle: &FellBundle) -> Result<()> {
    if delta.bundle().id() != bundle.id() {
        return Err(Error::IncompatibleDelta("comultiplication belongs to a different bundle".into()));
    }
    Ok(())
}

/// `L_φ(u)_s(b) = Σ_i conj(φ_s(x_i))·u_s(y_i)` with `Δ_{s,s}(b·b₀ˢ) = Σ_i x_i ⊗ y_i`.
pub fn multiplier_action(phi: &Functional, u: &FourierElement, delta: &dyn Comultiplication) -> Result<FourierElement> {
    if phi.bundle().id() != u.bundle.id() {
        return Err(Error::BundleMismatch);
    }
    check_delta(delta, &u.bundle)?;
    let n = u.bundle.ambient_dim();
    Ok(FourierElement::from_fn(&u.bundle, |s, b| {
        let mut out = zeros(n, n);
        for (x, y) in delta.split(s, b) {
            out += u.evaluate_unchecked(s, &y) * phi.eval(s, &x).conj();
        }
        out
    }))
}

/// `R_φ(u)_s(b) = Σ_i u_s(x_i)·conj(φ_s(y_i))`.
pub fn right_multiplier_action(
    phi: &Functional,
    u: &FourierElement,
    delta: &dyn Comultiplication,
) -> Result<FourierElement> {
    if phi.bundle().id() != u.bundle.id() {
        return Err(Error::BundleMismatch);
    }
    check_delta(delta, &u.bundle)?;
    let n = u.bundle.ambient_dim();
    Ok(FourierElement::from_fn(&u.bundle, |s, b| {
        let mut out = zeros(n, n);
        for (x, y) in delta.split(s, b) {
            out += u.evaluate_unchecked(s, &x) * phi.eval(s, &y).conj();
        }
        out
    }))
}

/// Per-element behavior of a coefficient: the size of `b ↦ u_s(b)` and
/// whether it vanishes off the predicted support `L·K⁻¹`.
#[derive(Debug, Clone, Serialize)]
pub struct VanishingReport {
    /// Operator norm of `b ↦ u_s(b)` from `(B_s, ‖·‖_HS)` to `(B_e, ‖·‖_HS)`.
    pub map_norms: Vec<f64>,
    pub predicted_support: Vec<usize>,
    pub observed_support: Vec<usize>,
    /// Elements outside the predicted support where the map is nonzero.
    pub violations: Vec<usize>,
}

/// Tolerance for treating an evaluation map as zero.
pub const VANISHING_TOL: f64 = 1e-12;

pub fn vanishing_check(c: &Coefficient) -> VanishingReport {
    let b = c.bundle();
    let g = b.group();
    let k = c.xi().support(0.0);
    let l = c.eta().support(0.0);
    let predicted_support = g.set_product(&l, &g.set_inverse(&k));
    let u = c.tabulate();
    let mut map_norms = Vec::with_capacity(g.order());
    for s in g.elements() {
        let fe = b.fiber(0);
        let cols: Vec<Vec<Complex64>> =
            u.values[s].iter().map(|v| fe.coordinates(v).iter().copied().collect()).collect();
        let m = ComplexMatrix::from_fn(fe.dim(), cols.len(), |i, j| cols[j][i]);
        map_norms.push(if m.is_empty() { 0.0 } else { operator_norm(&m) });
    }
    let scale = 1.0 + c.norm_upper();
    let observed_support: Vec<usize> = g.elements().filter(|&s| map_norms[s] > VANISHING_TOL * scale).collect();
    let violations = observed_support.iter().copied().filter(|s| !predicted_support.contains(s)).collect();
    VanishingReport { map_norms, predicted_support, observed_support, violations }
}
