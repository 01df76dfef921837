//! Fell bundles over finite groups, realized as families of subspaces of one
//! matrix algebra `M_n`.

mod dynamical;

pub use dynamical::{dynamical_bundle, takai_check, trivial_bundle, DynamicalSystem, Dynamics, TakaiReport};

use serde::Serialize;
use std::sync::atomic::{AtomicU64, Ordering};
use std::sync::OnceLock;

use crate::error::{Error, Result};
use crate::group::{dual_group, dual_group_table, Character, FiniteGroup};
use crate::linalg::{null_space, unit, vectorize, ComplexMatrix, MatrixSubspace};
use crate::regular::CStarPresentation;

/// Membership and axiom residual threshold.
pub const AXIOM_TOL: f64 = 1e-9;

static NEXT_ID: AtomicU64 = AtomicU64::new(1);

#[derive(Debug)]
pub struct FellBundle {
    id: u64,
    group: FiniteGroup,
    n: usize,
    fibers: Vec<MatrixSubspace>,
    dynamics: Option<Dynamics>,
    presentation: OnceLock<Result<CStarPresentation>>,
}

#[derive(Debug, Clone, Serialize)]
pub struct AxiomCheck {
    pub name: &'static str,
    pub passed: bool,
    pub residual: f64,
}

#[derive(Debug, Clone, Serialize)]
pub struct ValidationReport {
    pub checks: Vec<AxiomCheck>,
}

impl ValidationReport {
    pub fn passed(&self) -> bool {
        self.checks.iter().all(|c| c.passed)
    }

    pub fn worst_residual(&self) -> f64 {
        self.checks.iter().map(|c| c.residual).fold(0.0, f64::max)
    }

    pub fn failed(&self) -> Vec<&'static str> {
        self.checks.iter().filter(|c| !c.passed).map(|c| c.name).collect()
    }
}

impl FellBundle {
    /// Assembles a bundle from one subspace per group element. The axioms are
    /// not enforced here; see [`verify_bundle_axioms`].
    pub fn new(group: FiniteGroup, n: usize, fibers: Vec<MatrixSubspace>) -> Result<Self> {
        Self::build(group, n, fibers, None)
    }

    pub(crate) fn build(
        group: FiniteGroup,
        n: usize,
        fibers: Vec<MatrixSubspace>,
        dynamics: Option<Dynamics>,
    ) -> Result<Self> {
        if fibers.len() != group.order() {
            return Err(Error::Dimension(format!("{} fibers for a group of order {}", fibers.len(), group.order())));
        }
        if let Some(f) = fibers.iter().find(|f| f.ambient_dim() != n) {
            return Err(Error::Dimension(format!(
                "fiber lives in M_{} but the ambient algebra is M_{n}",
                f.ambient_dim()
            )));
        }
        Ok(Self {
            id: NEXT_ID.fetch_add(1, Ordering::Relaxed),
            group,
            n,
            fibers,
            dynamics,
            presentation: OnceLock::new(),
        })
    }

    /// From spanning sets per fiber (orthonormalized on load).
    pub fn from_spanning(group: FiniteGroup, n: usize, spans: &[Vec<ComplexMatrix>]) -> Result<Self> {
        let fibers = spans.iter().map(|s| MatrixSubspace::from_spanning(n, s)).collect::<Result<Vec<_>>>()?;
        Self::new(group, n, fibers)
    }

    /// Identifier used to detect operands from different bundles.
    pub fn id(&self) -> u64 {
        self.id
    }

    pub fn group(&self) -> &FiniteGroup {
        &self.group
    }

    pub fn order(&self) -> usize {
        self.group.order()
    }

    pub fn ambient_dim(&self) -> usize {
        self.n
    }

    pub fn fiber(&self, s: usize) -> &MatrixSubspace {
        &self.fibers[s]
    }

    pub fn fibers(&self) -> &[MatrixSubspace] {
        &self.fibers
    }

    pub fn fiber_dims(&self) -> Vec<usize> {
        self.fibers.iter().map(|f| f.dim()).collect()
    }

    /// `Σ_s dim B_s`.
    pub fn total_dim(&self) -> usize {
        self.fibers.iter().map(|f| f.dim()).sum()
    }

    /// Crossed-product data when the bundle comes from a unital dynamical system.
    pub fn dynamics(&self) -> Option<&Dynamics> {
        self.dynamics.as_ref()
    }

    /// The concrete presentation of `C*(B)`, computed once.
    pub fn presentation(&self) -> Result<&CStarPresentation> {
        self.presentation.get_or_init(|| CStarPresentation::new(self)).as_ref().map_err(|e| e.clone())
    }

    /// The unit of the unit fiber `B_e` (the projection onto its range).
    pub fn unit_of_unit_fiber(&self) -> ComplexMatrix {
        let be = self.fiber(0);
        if be.dim() == 0 {
            return ComplexMatrix::zeros(self.n, self.n);
        }
        let mut wide = ComplexMatrix::zeros(self.n, self.n * be.dim());
        for (i, a) in be.basis().iter().enumerate() {
            wide.view_mut((0, i * self.n), (self.n, self.n)).copy_from(a);
        }
        let q = crate::linalg::column_space(&wide);
        &q * q.adjoint()
    }
}

/// Checks `B_sB_t ⊆ B_st`, `B_s* = B_{s⁻¹}`, and that `B_e` is a *-subalgebra.
/// Failures are reported, not raised.
pub fn verify_bundle_axioms(b: &FellBundle) -> ValidationReport {
    let g = b.group();
    let mut grading: f64 = 0.0;
    for s in g.elements() {
        for t in g.elements() {
            let target = b.fiber(g.mul(s, t));
            for x in b.fiber(s).basis() {
                for y in b.fiber(t).basis() {
                    grading = grading.max(target.residual(&(x * y)));
                }
            }
        }
    }
    let mut involution: f64 = 0.0;
    for s in g.elements() {
        let target = b.fiber(g.inv(s));
        for x in b.fiber(s).basis() {
            involution = involution.max(target.residual(&x.adjoint()));
        }
    }
    let unit_fiber = b.fiber(0).closure_residual();
    let check = |name, residual: f64| AxiomCheck { name, passed: residual < AXIOM_TOL, residual };
    ValidationReport {
        checks: vec![
            check("grading", grading),
            check("involution", involution),
            check("unit-fiber-algebra", unit_fiber),
        ],
    }
}

/// `span(B_sB_t) = B_st` for all `s, t` (exact dimension comparison).
pub fn is_saturated(b: &FellBundle) -> bool {
    saturation_defects(b).is_empty()
}

/// Pairs `(s, t)` where `span(B_sB_t)` is strictly smaller than `B_st`.
pub fn saturation_defects(b: &FellBundle) -> Vec<(usize, usize)> {
    let g = b.group();
    let mut out = Vec::new();
    for s in g.elements() {
        for t in g.elements() {
            let products: Vec<ComplexMatrix> =
                b.fiber(s).basis().iter().flat_map(|x| b.fiber(t).basis().iter().map(move |y| x * y)).collect();
            let dim = MatrixSubspace::from_spanning(b.ambient_dim(), &products).map(|m| m.dim()).unwrap_or(0);
            if dim != b.fiber(g.mul(s, t)).dim() {
                out.push((s, t));
            }
        }
    }
    out
}

/// Grading of `M_n` by a table `grade[i][j] ∈ G`; the fiber at `s` is the
/// part of `algebra` spanned by matrix units of grade `s`.
pub fn graded_bundle(algebra: &MatrixSubspace, g: &FiniteGroup, grade: &[Vec<usize>]) -> Result<FellBundle> {
    let n = algebra.ambient_dim();
    if grade.len() != n || grade.iter().any(|r| r.len() != n) {
        return Err(Error::InvalidGrading(format!("grade table must be {n}x{n}")));
    }
    if grade.iter().flatten().any(|&s| s >= g.order()) {
        return Err(Error::InvalidGrading("grade out of range".into()));
    }
    for i in 0..n {
        if grade[i][i] != 0 {
            return Err(Error::InvalidGrading(format!("grade({i},{i}) is not the identity")));
        }
        for j in 0..n {
            for k in 0..n {
                if g.mul(grade[i][j], grade[j][k]) != grade[i][k] {
                    return Err(Error::InvalidGrading(format!("grade is not multiplicative at ({i},{j},{k})")));
                }
            }
        }
    }
    let frame = {
        let vecs: Vec<_> = algebra.basis().iter().map(vectorize).collect();
        if vecs.is_empty() {
            ComplexMatrix::zeros(n * n, 0)
        } else {
            ComplexMatrix::from_columns(&vecs)
        }
    };
    let mut fibers = Vec::with_capacity(g.order());
    for s in g.elements() {
        // algebra elements with no weight outside grade s
        let mut off = frame.clone();
        for i in 0..n {
            for j in 0..n {
                if grade[i][j] == s {
                    off.row_mut(j * n + i).fill(num_complex::Complex64::new(0.0, 0.0));
                }
            }
        }
        let kernel = null_space(&off, 1e-12);
        let mats: Vec<ComplexMatrix> =
            (0..kernel.ncols()).map(|k| algebra.from_coordinates(kernel.column(k).as_slice())).collect();
        fibers.push(MatrixSubspace::from_spanning(n, &mats)?);
    }
    let found: usize = fibers.iter().map(|f| f.dim()).sum();
    if found != algebra.dim() {
        return Err(Error::NotGraded { found, expected: algebra.dim() });
    }
    FellBundle::new(g.clone(), n, fibers)
}

/// The bundle over the dual group whose fiber at `χ` is
/// `{a : γ_s(a) = χ(s)a for all s}`.
pub fn spectral_bundle(sys: &DynamicalSystem) -> Result<(FellBundle, Vec<Character>)> {
    let g = sys.group();
    let chars = dual_group(g)?;
    let dual = dual_group_table(&chars)?;
    let alg = sys.algebra();
    let d = alg.dim();
    let mut fibers = Vec::new();
    for chi in &chars {
        let mut p = ComplexMatrix::zeros(d, d);
        for s in g.elements() {
            p += sys.coordinate_action(s) * chi.value(s).conj();
        }
        p /= num_complex::Complex64::new(g.order() as f64, 0.0);
        let range = crate::linalg::column_space(&p);
        let mats: Vec<ComplexMatrix> =
            (0..range.ncols()).map(|k| alg.from_coordinates(range.column(k).as_slice())).collect();
        fibers.push(MatrixSubspace::from_spanning(alg.ambient_dim(), &mats)?);
    }
    let found: usize = fibers.iter().map(|f| f.dim()).sum();
    if found != d {
        return Err(Error::Degenerate(format!("eigenspaces span {found} of {d} dimensions")));
    }
    Ok((FellBundle::new(dual, alg.ambient_dim(), fibers)?, chars))
}

/// `grade(i,j) = labels[i]·labels[j]⁻¹`, the standard multiplicative grading
/// induced by a labelling of basis vectors.
pub fn grading_from_labels(g: &FiniteGroup, labels: &[usize]) -> Vec<Vec<usize>> {
    labels.iter().map(|&a| labels.iter().map(|&b| g.mul(a, g.inv(b))).collect()).collect()
}

/// The full matrix algebra `M_n` as a subspace.
pub fn full_matrix_algebra(n: usize) -> MatrixSubspace {
    let basis = (0..n).flat_map(|j| (0..n).map(move |i| unit(n, i, j))).collect();
    MatrixSubspace::from_orthonormal(n, basis)
}

#[cfg(test)]
mod tests;
