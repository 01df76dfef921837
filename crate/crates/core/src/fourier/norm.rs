use num_complex::Complex64;
use rand::Rng;
use serde::Serialize;

use super::{Coefficient, FourierElement};
use crate::error::Result;
use crate::functional::Functional;
use crate::linalg::{
    block_decompose, operator_norm, polar_decompose, random_vector, zeros, ComplexMatrix, ComplexVector, Svd,
};

/// A certified interval for the norm of an element of `A(B)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct NormBounds {
    pub lower: f64,
    pub upper: f64,
}

impl NormBounds {
    pub fn width(&self) -> f64 {
        self.upper - self.lower
    }
}

const ASCENT_STEPS: usize = 40;

/// Bounds for `‖u‖ = sup{‖Σ_s u_s(f_s)‖ : ‖f‖_* ≤ 1}`.
///
/// For unit vectors `p, q` in one irreducible block of `B_e`, the map
/// `f ↦ p†M(f)†q` with `M(f) = Σ_s u_s(f_s)` is a linear functional on
/// `C*(B)` whose exact dual norm is a lower bound; its supremum over `p, q`
/// is the norm. One-dimensional blocks need no search. Larger blocks use
/// `budget` multi-start alternating ascents for the lower bound, and the
/// operator norm of the matrix of dual norms over basis pairs `(e_a, e_b)`
/// for the upper bound.
pub fn anorm_bounds(u: &FourierElement, budget: usize, seed: u64) -> Result<NormBounds> {
    let b = u.bundle();
    let be = b.fiber(0);
    if be.dim() == 0 {
        return Ok(NormBounds { lower: 0.0, upper: 0.0 });
    }
    let bd = block_decompose(be, crate::DEFAULT_SEED)?;
    let mut rng = crate::seeded_rng(seed);
    let mut lower: f64 = 0.0;
    let mut upper: f64 = 0.0;
    for k in 0..bd.num_kinds() {
        let q = bd.first_copy(k);
        let size = q.ncols();
        if size == 1 {
            let v = q.column(0).into_owned();
            let exact = scalar_functional(u, &v, &v)?.bnorm()?;
            lower = lower.max(exact);
            upper = upper.max(exact);
            continue;
        }
        let mut table = zeros(size, size);
        for a in 0..size {
            for c in 0..size {
                let nrm = scalar_functional(u, &q.column(a).into_owned(), &q.column(c).into_owned())?.bnorm()?;
                table[(a, c)] = Complex64::new(nrm, 0.0);
            }
        }
        upper = upper.max(operator_norm(&table));
        for _ in 0..budget.max(1) {
            lower = lower.max(ascend(u, &q, &mut rng)?);
        }
    }
    Ok(NormBounds { lower, upper })
}

/// The functional `f ↦ p† M(f)† q`, with values `p† u_s(e_{s,i})† q` on the basis.
fn scalar_functional(u: &FourierElement, p: &ComplexVector, q: &ComplexVector) -> Result<Functional> {
    let values: Vec<Vec<Complex64>> =
        u.values().iter().map(|list| list.iter().map(|v| p.dotc(&(v.adjoint() * q))).collect()).collect();
    Functional::from_basis_values(u.bundle(), &values)
}

fn ascend<R: Rng + ?Sized>(u: &FourierElement, frame: &ComplexMatrix, rng: &mut R) -> Result<f64> {
    let b = u.bundle();
    let pres = b.presentation()?;
    let size = frame.ncols();
    let mut p = frame * random_vector(size, rng).normalize();
    let mut q = frame * random_vector(size, rng).normalize();
    let mut best: f64 = 0.0;
    for _ in 0..ASCENT_STEPS {
        let phi = scalar_functional(u, &p, &q)?;
        let blocks = phi.blocks()?;
        let value: f64 = blocks.iter().map(crate::linalg::trace_norm).sum();
        if value <= best * (1.0 + 1e-13) && best > 0.0 {
            break;
        }
        best = best.max(value);
        // the unit-ball maximizer of φ is the polar part of its blocks
        let mut iso = Vec::with_capacity(blocks.len());
        for d in &blocks {
            iso.push(polar_decompose(d)?.0);
        }
        let f = pres.section_of(b, &pres.element_from_blocks(&iso))?;
        let n = b.ambient_dim();
        let mut m = zeros(n, n);
        for s in b.group().elements() {
            m += u.evaluate_unchecked(s, f.value(s));
        }
        let restricted = frame.adjoint() * m * frame;
        let svd = Svd::new(&restricted);
        // |p†M†q| is maximized by p = v₁, q = u₁ for M = UΣV†
        let u1 = svd.u.column(0).into_owned();
        let v1 = svd.v.column(0).into_owned();
        p = frame * v1;
        q = frame * u1;
    }
    Ok(best)
}

impl Coefficient {
    /// The interval of `anorm_bounds`, with the upper end capped by `‖ξ‖₂‖η‖₂`.
    pub fn anorm_bounds(&self, budget: usize, seed: u64) -> Result<NormBounds> {
        let mut bounds = anorm_bounds(&self.tabulate(), budget, seed)?;
        bounds.upper = bounds.upper.min(self.norm_upper());
        Ok(bounds)
    }
}
