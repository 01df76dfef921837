use num_complex::Complex64;
use std::sync::Arc;

use super::Functional;
use crate::bundle::{DynamicalSystem, FellBundle};
use crate::classical::{left_regular, ClassicalFunction};
use crate::error::{Error, Result};
use crate::group::FiniteGroup;
use crate::linalg::{identity, zeros, ComplexMatrix, MatrixSubspace};

/// A family of maps `Δ_{s,t}: B_st → B_s ⊗ B_t`, returned as finite sums of
/// simple tensors, together with the fixed elements `b₀ˢ ∈ B_s` used to form
/// products.
pub trait Comultiplication {
    fn bundle(&self) -> &Arc<FellBundle>;

    fn delta(&self, s: usize, t: usize, x: &ComplexMatrix) -> Vec<(ComplexMatrix, ComplexMatrix)>;

    fn anchor(&self, s: usize) -> &ComplexMatrix;

    fn name(&self) -> &'static str;

    /// `Δ_{s,s}(b·b₀ˢ)` for `b ∈ B_s`.
    fn split(&self, s: usize, b: &ComplexMatrix) -> Vec<(ComplexMatrix, ComplexMatrix)> {
        self.delta(s, s, &(b * self.anchor(s)))
    }
}

fn dynamics_of(bundle: &Arc<FellBundle>) -> Result<&crate::bundle::Dynamics> {
    bundle
        .dynamics()
        .ok_or_else(|| Error::WrongFamily("a bundle built from a unital dynamical system is required".into()))
}

/// `Δ_{s,t}(st, a) = (s, 1) ⊗ (t, a)` on a unital crossed-product bundle,
/// with `b₀ˢ = (s, 1)`.
#[derive(Debug, Clone)]
pub struct UnitalDynamicalDelta {
    bundle: Arc<FellBundle>,
}

impl UnitalDynamicalDelta {
    pub fn new(bundle: &Arc<FellBundle>) -> Result<Self> {
        dynamics_of(bundle)?;
        Ok(Self { bundle: bundle.clone() })
    }
}

impl Comultiplication for UnitalDynamicalDelta {
    fn bundle(&self) -> &Arc<FellBundle> {
        &self.bundle
    }

    fn delta(&self, s: usize, t: usize, x: &ComplexMatrix) -> Vec<(ComplexMatrix, ComplexMatrix)> {
        let d = self.bundle.dynamics().expect("checked on construction");
        let g = self.bundle.group();
        let st = g.mul(s, t);
        // (t, a) = π(a)u_t and x = π(a)u_st
        let right = x * d.unitary(st).adjoint() * d.unitary(t);
        vec![(d.unitary(s).clone(), right)]
    }

    fn anchor(&self, s: usize) -> &ComplexMatrix {
        self.bundle.dynamics().expect("checked on construction").unitary(s)
    }

    fn name(&self) -> &'static str {
        "unital-dynamical"
    }
}

/// `Δ_{s,t}(st, a) = Σ_h a_h (s, λ_h) ⊗ (t, λ_h)` on a crossed product of the
/// group algebra `A = ℂ[H] = span{λ^H_h}`, whose own comultiplication is
/// `λ_h ↦ λ_h ⊗ λ_h`; `b₀ˢ = (s, 1)`.
#[derive(Debug, Clone)]
pub struct HopfFiberDelta {
    bundle: Arc<FellBundle>,
    fiber_group: FiniteGroup,
}

impl HopfFiberDelta {
    /// Checks that the coefficient algebra is the group algebra of `h` in its
    /// left-regular picture.
    pub fn new(bundle: &Arc<FellBundle>, h: &FiniteGroup) -> Result<Self> {
        let d = dynamics_of(bundle)?;
        let alg = d.system().algebra();
        if alg.ambient_dim() != h.order() || alg.dim() != h.order() {
            return Err(Error::IncompatibleDelta(format!(
                "coefficient algebra has dimension {} in M_{}, expected the group algebra of order {}",
                alg.dim(),
                alg.ambient_dim(),
                h.order()
            )));
        }
        for k in h.elements() {
            if !alg.contains(&left_regular(h, k), crate::bundle::AXIOM_TOL) {
                return Err(Error::IncompatibleDelta(format!("λ_{k} is not in the coefficient algebra")));
            }
        }
        Ok(Self { bundle: bundle.clone(), fiber_group: h.clone() })
    }

    pub fn fiber_group(&self) -> &FiniteGroup {
        &self.fiber_group
    }

    /// `ℂ[H] ⋊ G` for `G` acting on `H` by automorphisms; `action[s][k]` is the
    /// image of `k` under the automorphism of `s`.
    pub fn group_algebra_system(h: &FiniteGroup, g: &FiniteGroup, action: &[Vec<usize>]) -> Result<DynamicalSystem> {
        if action.len() != g.order() || action.iter().any(|a| a.len() != h.order()) {
            return Err(Error::InvalidSystem("one permutation of H per element of G expected".into()));
        }
        let regular: Vec<ComplexMatrix> = h.elements().map(|k| left_regular(h, k)).collect();
        let algebra = MatrixSubspace::from_spanning(h.order(), &regular)?;
        let mut unitaries = Vec::with_capacity(g.order());
        for perm in action {
            if !h.is_isomorphism(h, perm) {
                return Err(Error::InvalidSystem("the action is not by automorphisms of H".into()));
            }
            let mut p = zeros(h.order(), h.order());
            for (k, &img) in perm.iter().enumerate() {
                p[(img, k)] = Complex64::new(1.0, 0.0);
            }
            unitaries.push(p);
        }
        DynamicalSystem::spatial(algebra, g.clone(), &unitaries)
    }
}

impl Comultiplication for HopfFiberDelta {
    fn bundle(&self) -> &Arc<FellBundle> {
        &self.bundle
    }

    fn delta(&self, s: usize, t: usize, x: &ComplexMatrix) -> Vec<(ComplexMatrix, ComplexMatrix)> {
        let d = self.bundle.dynamics().expect("checked on construction");
        let g = self.bundle.group();
        let a = d.coefficient(g.mul(s, t), x);
        let h = &self.fiber_group;
        // λ_h δ_e = δ_h, so the first column of a holds its coordinates
        h.elements()
            .filter(|&k| a[(k, 0)].norm() > 0.0)
            .map(|k| {
                let l = left_regular(h, k);
                (d.element(s, &l) * a[(k, 0)], d.element(t, &l))
            })
            .collect()
    }

    fn anchor(&self, s: usize) -> &ComplexMatrix {
        self.bundle.dynamics().expect("checked on construction").unitary(s)
    }

    fn name(&self) -> &'static str {
        "hopf-fiber"
    }
}

fn check_compatible(delta: &dyn Comultiplication, bundle: &FellBundle) -> Result<()> {
    if delta.bundle().id() != bundle.id() {
        return Err(Error::IncompatibleDelta("comultiplication belongs to a different bundle".into()));
    }
    Ok(())
}

/// `(φψ)_s(b) = Σ_i φ_s(x_i)ψ_s(y_i)` where `Δ_{s,s}(b·b₀ˢ) = Σ_i x_i ⊗ y_i`.
pub fn multiply(phi: &Functional, psi: &Functional, delta: &dyn Comultiplication) -> Result<Functional> {
    check_compatible(delta, phi.bundle())?;
    check_compatible(delta, psi.bundle())?;
    let b = phi.bundle();
    let values: Vec<Vec<Complex64>> = b
        .group()
        .elements()
        .map(|s| {
            b.fiber(s)
                .basis()
                .iter()
                .map(|e| delta.split(s, e).iter().map(|(x, y)| phi.eval(s, x) * psi.eval(s, y)).sum())
                .collect()
        })
        .collect();
    Functional::from_basis_values(b, &values)
}

/// Coordinates of `Σ x_i ⊗ y_i ⊗ z_i` in the product of fiber bases.
fn tensor3(
    b: &FellBundle,
    (r, s, t): (usize, usize, usize),
    terms: &[(ComplexMatrix, ComplexMatrix, ComplexMatrix)],
) -> Vec<Complex64> {
    let (fr, fs, ft) = (b.fiber(r), b.fiber(s), b.fiber(t));
    let (dr, ds, dt) = (fr.dim(), fs.dim(), ft.dim());
    let mut out = vec![Complex64::new(0.0, 0.0); dr * ds * dt];
    for (x, y, z) in terms {
        let (cx, cy, cz) = (fr.coordinates(x), fs.coordinates(y), ft.coordinates(z));
        for i in 0..dr {
            for j in 0..ds {
                for k in 0..dt {
                    out[(i * ds + j) * dt + k] += cx[i] * cy[j] * cz[k];
                }
            }
        }
    }
    out
}

/// Worst coefficient of `(Δ_{r,s}⊗id)Δ_{rs,t} − (id⊗Δ_{s,t})Δ_{r,st}` over all
/// triples and fiber basis elements of `B_rst`.
pub fn coassociativity_residual(delta: &dyn Comultiplication) -> f64 {
    let b = delta.bundle();
    let g = b.group();
    let mut worst: f64 = 0.0;
    for r in g.elements() {
        for s in g.elements() {
            for t in g.elements() {
                let rs = g.mul(r, s);
                let st = g.mul(s, t);
                for x in b.fiber(g.mul(rs, t)).basis() {
                    let mut left = Vec::new();
                    for (p, z) in delta.delta(rs, t, x) {
                        for (u, v) in delta.delta(r, s, &p) {
                            left.push((u, v, z.clone()));
                        }
                    }
                    let mut right = Vec::new();
                    for (u, q) in delta.delta(r, st, x) {
                        for (v, z) in delta.delta(s, t, &q) {
                            right.push((u.clone(), v, z));
                        }
                    }
                    let a = tensor3(b, (r, s, t), &left);
                    let c = tensor3(b, (r, s, t), &right);
                    for (p, q) in a.iter().zip(&c) {
                        worst = worst.max((p - q).norm());
                    }
                }
            }
        }
    }
    worst
}

/// `(u·φ)_s(b) = u(s)φ_s(b)` for a classical `u ∈ B(G)`.
pub fn bg_module_action(u: &ClassicalFunction, phi: &Functional) -> Result<Functional> {
    let b = phi.bundle();
    if u.group().cayley() != b.group().cayley() {
        return Err(Error::Dimension("function and bundle live on different groups".into()));
    }
    let components = b.group().elements().map(|s| phi.component(s) * u.value(s).conj()).collect();
    Functional::new(b, components)
}

/// `Σ_s φ_s(u_s)` with `u_s = (s, 1)`: the functional is unit-like when every
/// term equals one.
pub fn unit_values(phi: &Functional) -> Result<Vec<Complex64>> {
    let d = dynamics_of(phi.bundle())?;
    Ok(phi.bundle().group().elements().map(|s| phi.eval(s, d.unitary(s))).collect())
}

/// The functional with `φ_s(s, a) = τ(a)` for the normalized trace `τ` of `M_m`,
/// which has `φ_s(s, 1) = 1` for every `s`.
pub fn unit_like(bundle: &Arc<FellBundle>) -> Result<Functional> {
    let d = dynamics_of(bundle)?;
    let m = d.system().matrix_dim();
    let one = identity(m);
    let values: Vec<Vec<Complex64>> = bundle
        .group()
        .elements()
        .map(|s| {
            bundle
                .fiber(s)
                .basis()
                .iter()
                .map(|e| {
                    let a = d.coefficient(s, e);
                    crate::linalg::hs_inner(&one, &a) / m as f64
                })
                .collect()
        })
        .collect();
    Functional::from_basis_values(bundle, &values)
}
