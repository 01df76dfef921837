//! Crossed-product bundles of finite dynamical systems.

use num_complex::Complex64;
use serde::Serialize;

use super::{FellBundle, AXIOM_TOL};
use crate::error::{Error, Result};
use crate::group::{dual_group, dual_group_table, FiniteGroup};
use crate::linalg::{block_decompose, identity, kron, max_abs_diff, zeros, ComplexMatrix, MatrixSubspace};

/// A *-subalgebra `A ⊆ M_m` with an action of a finite group by
/// *-automorphisms, stored as coordinate matrices in the basis of `A`.
#[derive(Debug, Clone)]
pub struct DynamicalSystem {
    algebra: MatrixSubspace,
    group: FiniteGroup,
    action: Vec<ComplexMatrix>,
}

impl DynamicalSystem {
    /// Validates `γ_e = id`, `γ_sγ_t = γ_st`, and that each `γ_s` preserves
    /// products, adjoints and (when present) the unit.
    pub fn new(algebra: MatrixSubspace, group: FiniteGroup, action: Vec<ComplexMatrix>) -> Result<Self> {
        let d = algebra.dim();
        if action.len() != group.order() || action.iter().any(|a| a.shape() != (d, d)) {
            return Err(Error::InvalidSystem("one d×d coordinate matrix per group element expected".into()));
        }
        let closure = algebra.closure_residual();
        if closure > AXIOM_TOL {
            return Err(Error::InvalidSystem(format!("algebra not closed (residual {closure:.2e})")));
        }
        let sys = Self { algebra, group, action };
        sys.validate()?;
        Ok(sys)
    }

    /// `γ_s(a) = V_s a V_s†` for unitaries `V_s` normalizing the algebra.
    pub fn spatial(algebra: MatrixSubspace, group: FiniteGroup, unitaries: &[ComplexMatrix]) -> Result<Self> {
        if unitaries.len() != group.order() {
            return Err(Error::InvalidSystem("one unitary per group element expected".into()));
        }
        let mut action = Vec::with_capacity(unitaries.len());
        for v in unitaries {
            let d = algebra.dim();
            let mut coords = zeros(d, d);
            for (j, e) in algebra.basis().iter().enumerate() {
                let image = v * e * v.adjoint();
                let res = algebra.residual(&image);
                if res > AXIOM_TOL {
                    return Err(Error::InvalidSystem(format!("conjugation leaves the algebra (residual {res:.2e})")));
                }
                coords.set_column(j, &algebra.coordinates(&image));
            }
            action.push(coords);
        }
        Self::new(algebra, group, action)
    }

    pub fn trivial(algebra: MatrixSubspace, group: FiniteGroup) -> Result<Self> {
        let d = algebra.dim();
        let action = vec![identity(d); group.order()];
        Self::new(algebra, group, action)
    }

    fn validate(&self) -> Result<()> {
        let d = self.algebra.dim();
        let g = &self.group;
        if max_abs_diff(&self.action[0], &identity(d)) > AXIOM_TOL {
            return Err(Error::InvalidSystem("γ_e is not the identity".into()));
        }
        for s in g.elements() {
            for t in g.elements() {
                let lhs = &self.action[s] * &self.action[t];
                if max_abs_diff(&lhs, &self.action[g.mul(s, t)]) > AXIOM_TOL {
                    return Err(Error::InvalidSystem(format!("γ_{s}γ_{t} ≠ γ_st")));
                }
            }
        }
        let basis = self.algebra.basis();
        let one = identity(self.algebra.ambient_dim());
        let unital = self.is_unital();
        for s in g.elements() {
            for x in basis {
                let gx = self.apply(s, x);
                if max_abs_diff(&self.apply(s, &x.adjoint()), &gx.adjoint()) > AXIOM_TOL {
                    return Err(Error::InvalidSystem(format!("γ_{s} does not preserve adjoints")));
                }
                for y in basis {
                    if max_abs_diff(&self.apply(s, &(x * y)), &(&gx * self.apply(s, y))) > AXIOM_TOL {
                        return Err(Error::InvalidSystem(format!("γ_{s} is not multiplicative")));
                    }
                }
            }
            if unital && max_abs_diff(&self.apply(s, &one), &one) > AXIOM_TOL {
                return Err(Error::InvalidSystem(format!("γ_{s} does not fix the unit")));
            }
        }
        Ok(())
    }

    pub fn algebra(&self) -> &MatrixSubspace {
        &self.algebra
    }

    pub fn group(&self) -> &FiniteGroup {
        &self.group
    }

    /// Size `m` of the matrices in `A`.
    pub fn matrix_dim(&self) -> usize {
        self.algebra.ambient_dim()
    }

    /// Whether `A` contains the identity of `M_m`.
    pub fn is_unital(&self) -> bool {
        self.algebra.dim() > 0 && self.algebra.contains(&identity(self.algebra.ambient_dim()), AXIOM_TOL)
    }

    pub fn coordinate_action(&self, s: usize) -> &ComplexMatrix {
        &self.action[s]
    }

    pub fn apply(&self, s: usize, a: &ComplexMatrix) -> ComplexMatrix {
        let coords = &self.action[s] * self.algebra.coordinates(a);
        self.algebra.from_coordinates(coords.as_slice())
    }
}

/// The regular covariant pair of a unital system, kept with its crossed-product bundle.
#[derive(Debug, Clone)]
pub struct Dynamics {
    system: DynamicalSystem,
    unitaries: Vec<ComplexMatrix>,
}

impl Dynamics {
    pub fn system(&self) -> &DynamicalSystem {
        &self.system
    }

    /// `π(a) = ⊕_t γ_{t⁻¹}(a)` on `ℂ^m ⊗ ℓ²(G)`.
    pub fn pi(&self, a: &ComplexMatrix) -> ComplexMatrix {
        let g = self.system.group();
        let m = self.system.matrix_dim();
        let mut out = zeros(m * g.order(), m * g.order());
        for t in g.elements() {
            out.view_mut((t * m, t * m), (m, m)).copy_from(&self.system.apply(g.inv(t), a));
        }
        out
    }

    /// `u_s = λ_s ⊗ 1`, which is the element `(s, 1)` of `B_s`.
    pub fn unitary(&self, s: usize) -> &ComplexMatrix {
        &self.unitaries[s]
    }

    /// The element `(s, a) = π(a)u_s` of `B_s`.
    pub fn element(&self, s: usize, a: &ComplexMatrix) -> ComplexMatrix {
        self.pi(a) * &self.unitaries[s]
    }

    /// Recovers `a` from `b = (s, a)`.
    pub fn coefficient(&self, s: usize, b: &ComplexMatrix) -> ComplexMatrix {
        let m = self.system.matrix_dim();
        let full = b * self.unitaries[s].adjoint();
        full.view((0, 0), (m, m)).into_owned()
    }
}

/// Left-regular permutation matrix `λ_s δ_t = δ_st`.
pub fn regular_permutation(g: &FiniteGroup, s: usize) -> ComplexMatrix {
    let n = g.order();
    let mut m = zeros(n, n);
    for t in g.elements() {
        m[(g.mul(s, t), t)] = Complex64::new(1.0, 0.0);
    }
    m
}

/// The bundle `B_s = {π(a)u_s}` of a unital system inside `M_{m|G|}`.
pub fn dynamical_bundle(sys: &DynamicalSystem) -> Result<FellBundle> {
    if !sys.is_unital() {
        return Err(Error::Unsupported("dynamical bundles require A to contain the identity".into()));
    }
    let g = sys.group().clone();
    let m = sys.matrix_dim();
    let unitaries: Vec<ComplexMatrix> = g.elements().map(|s| kron(&regular_permutation(&g, s), &identity(m))).collect();
    let dynamics = Dynamics { system: sys.clone(), unitaries };
    let mut fibers = Vec::with_capacity(g.order());
    for s in g.elements() {
        let mats: Vec<ComplexMatrix> = sys.algebra().basis().iter().map(|a| dynamics.element(s, a)).collect();
        fibers.push(MatrixSubspace::from_spanning(m * g.order(), &mats)?);
    }
    FellBundle::build(g, m * dynamics.system.group().order(), fibers, Some(dynamics))
}

/// The trivial bundle `B_s = ℂλ_s` inside `M_|G|` (the crossed product of `ℂ`
/// by the trivial action).
pub fn trivial_bundle(g: &FiniteGroup) -> FellBundle {
    let scalars = MatrixSubspace::from_orthonormal(1, vec![identity(1)]);
    let sys = DynamicalSystem::trivial(scalars, g.clone()).expect("trivial action is valid");
    dynamical_bundle(&sys).expect("ℂ is unital")
}

#[derive(Debug, Clone, Serialize)]
pub struct TakaiReport {
    /// Irreducible block sizes of the double crossed product.
    pub double_crossed: Vec<usize>,
    /// Irreducible block sizes of `A ⊗ M_|G|`.
    pub stabilized: Vec<usize>,
    pub equal: bool,
}

/// Builds `(A ⋊ G) ⋊ Ĝ` through the dual action `χ·(π(a)u_s) = χ(s)π(a)u_s`
/// and compares its irreducible block sizes with those of `A ⊗ M_|G|`.
pub fn takai_check(sys: &DynamicalSystem, seed: u64) -> Result<TakaiReport> {
    let g = sys.group();
    if !g.is_abelian() {
        return Err(Error::NotAbelian);
    }
    let first = dynamical_bundle(sys)?;
    let n1 = first.ambient_dim();
    let spanning: Vec<ComplexMatrix> = first.fibers().iter().flat_map(|f| f.basis().iter().cloned()).collect();
    let crossed = MatrixSubspace::from_spanning(n1, &spanning)?;
    let chars = dual_group(g)?;
    let dual = dual_group_table(&chars)?;
    let m = sys.matrix_dim();
    let implementers: Vec<ComplexMatrix> = chars
        .iter()
        .map(|chi| {
            let d: Vec<Complex64> = g.elements().map(|t| chi.value(t)).collect();
            kron(&crate::linalg::diag(&d), &identity(m))
        })
        .collect();
    let dual_sys = DynamicalSystem::spatial(crossed, dual, &implementers)?;
    let second = dynamical_bundle(&dual_sys)?;
    let mut double_crossed = second.presentation()?.blocks().sizes();
    double_crossed.sort_unstable();

    let size = g.order();
    let mut stab = Vec::new();
    for a in sys.algebra().basis() {
        for i in 0..size {
            for j in 0..size {
                stab.push(kron(a, &crate::linalg::unit(size, i, j)));
            }
        }
    }
    let stab = MatrixSubspace::from_spanning(m * size, &stab)?;
    let mut stabilized = block_decompose(&stab, seed)?.sizes();
    stabilized.sort_unstable();
    let equal = double_crossed == stabilized;
    Ok(TakaiReport { double_crossed, stabilized, equal })
}
