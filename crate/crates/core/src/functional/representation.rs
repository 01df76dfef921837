use num_complex::Complex64;
use rand::Rng;
use std::sync::Arc;

use super::Functional;
use crate::bundle::FellBundle;
use crate::error::{Error, Result};
use crate::linalg::{identity, kron, max_abs_diff, zeros, ComplexMatrix, ComplexVector};

/// A representation of a bundle on `ℂ^dim`, stored as the operators of the
/// fiber basis elements.
#[derive(Debug, Clone)]
pub struct BundleRep {
    bundle_id: u64,
    dim: usize,
    ops: Vec<Vec<ComplexMatrix>>,
}

impl BundleRep {
    pub fn new(bundle: &FellBundle, dim: usize, ops: Vec<Vec<ComplexMatrix>>) -> Result<Self> {
        if ops.len() != bundle.order() {
            return Err(Error::Dimension("one operator list per fiber expected".into()));
        }
        for (s, list) in ops.iter().enumerate() {
            if list.len() != bundle.fiber(s).dim() || list.iter().any(|m| m.shape() != (dim, dim)) {
                return Err(Error::Dimension(format!("operators of fiber {s} do not match")));
            }
        }
        Ok(Self { bundle_id: bundle.id(), dim, ops })
    }

    /// The regular representation.
    pub fn regular(bundle: &FellBundle) -> Result<Self> {
        let p = bundle.presentation()?;
        let ops = bundle
            .group()
            .elements()
            .map(|s| (0..bundle.fiber(s).dim()).map(|i| p.image(s, i).clone()).collect())
            .collect();
        Self::new(bundle, p.rep().dim(), ops)
    }

    /// `x ↦ V (⊕_k x_k ⊗ 1_{mult_k}) V†` through the block structure of `C*(B)`.
    pub fn from_block_multiplicities(bundle: &FellBundle, mults: &[usize], v: Option<&ComplexMatrix>) -> Result<Self> {
        let p = bundle.presentation()?;
        let sizes = p.blocks().sizes();
        if mults.len() != sizes.len() {
            return Err(Error::Dimension(format!("{} multiplicities for {} blocks", mults.len(), sizes.len())));
        }
        let dim: usize = sizes.iter().zip(mults).map(|(s, m)| s * m).sum();
        if let Some(v) = v {
            if v.shape() != (dim, dim) {
                return Err(Error::Dimension("conjugating unitary has the wrong size".into()));
            }
        }
        let mut ops = Vec::new();
        for s in bundle.group().elements() {
            let mut list = Vec::new();
            for i in 0..bundle.fiber(s).dim() {
                let comps = p.blocks().components(p.image(s, i));
                let parts: Vec<ComplexMatrix> =
                    comps.iter().zip(mults).filter(|(_, &m)| m > 0).map(|(c, &m)| kron(c, &identity(m))).collect();
                let mut op = crate::linalg::block_diag(&parts);
                if let Some(v) = v {
                    op = v * op * v.adjoint();
                }
                list.push(op);
            }
            ops.push(list);
        }
        Self::new(bundle, dim, ops)
    }

    /// A random representation: random block multiplicities in `0..=2` (at
    /// least one nonzero), conjugated by a random unitary.
    pub fn random<R: Rng + ?Sized>(bundle: &FellBundle, rng: &mut R) -> Result<Self> {
        let k = bundle.presentation()?.blocks().num_kinds();
        let mut mults: Vec<usize> = (0..k).map(|_| rng.random_range(0..=2)).collect();
        if mults.iter().all(|&m| m == 0) && k > 0 {
            mults[rng.random_range(0..k)] = 1;
        }
        let sizes = bundle.presentation()?.blocks().sizes();
        let dim: usize = sizes.iter().zip(&mults).map(|(s, m)| s * m).sum();
        let v = crate::linalg::random_unitary(dim, rng);
        Self::from_block_multiplicities(bundle, &mults, Some(&v))
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn basis_op(&self, s: usize, i: usize) -> &ComplexMatrix {
        &self.ops[s][i]
    }

    /// `π_s(b)` for `b ∈ B_s`.
    pub fn op(&self, bundle: &FellBundle, s: usize, b: &ComplexMatrix) -> ComplexMatrix {
        let coords = bundle.fiber(s).coordinates(b);
        let mut out = zeros(self.dim, self.dim);
        for (op, &c) in self.ops[s].iter().zip(coords.iter()) {
            out += op * c;
        }
        out
    }

    /// `Σ_s π_s(f_s)`.
    pub fn section_op(&self, f: &crate::section::Section) -> Result<ComplexMatrix> {
        if f.bundle().id() != self.bundle_id {
            return Err(Error::BundleMismatch);
        }
        let b = f.bundle();
        let mut out = zeros(self.dim, self.dim);
        for s in b.group().elements() {
            out += self.op(b, s, f.value(s));
        }
        Ok(out)
    }

    /// Worst residual of `π_s(x)π_t(y) = π_st(xy)` and `π_s(x)† = π_{s⁻¹}(x†)`
    /// over fiber basis elements.
    pub fn verify(&self, bundle: &FellBundle) -> f64 {
        let g = bundle.group();
        let mut worst: f64 = 0.0;
        for s in g.elements() {
            for (i, x) in bundle.fiber(s).basis().iter().enumerate() {
                let px = &self.ops[s][i];
                worst = worst.max(max_abs_diff(&px.adjoint(), &self.op(bundle, g.inv(s), &x.adjoint())));
                for t in g.elements() {
                    for (j, y) in bundle.fiber(t).basis().iter().enumerate() {
                        let lhs = px * &self.ops[t][j];
                        worst = worst.max(max_abs_diff(&lhs, &self.op(bundle, g.mul(s, t), &(x * y))));
                    }
                }
            }
        }
        worst
    }
}

/// The coefficient functional `φ_s(b) = ⟨π_s(b)ξ, η⟩ = η†π_s(b)ξ`.
pub fn from_representation(
    bundle: &Arc<FellBundle>,
    rep: &BundleRep,
    xi: &ComplexVector,
    eta: &ComplexVector,
) -> Result<Functional> {
    if rep.bundle_id != bundle.id() {
        return Err(Error::BundleMismatch);
    }
    if xi.len() != rep.dim || eta.len() != rep.dim {
        return Err(Error::Dimension(format!(
            "vectors of length {} and {} for a representation of dimension {}",
            xi.len(),
            eta.len(),
            rep.dim
        )));
    }
    let values: Vec<Vec<Complex64>> =
        rep.ops.iter().map(|list| list.iter().map(|op| eta.dotc(&(op * xi))).collect()).collect();
    Functional::from_basis_values(bundle, &values)
}
