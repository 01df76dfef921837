//! The regular representation on `ℓ²(B)` and the concrete presentation of `C*(B)`.
//!
//! `ℓ²(B) ⊗_{B_e} H₀` is realized as `⊕_t B_t·H₀ ⊆ ⊕_t ℂⁿ`, where `H₀ ⊆ ℂⁿ` is
//! a minimal subspace on which `B_e` still acts faithfully (one copy of each
//! irreducible block of `B_e`). The inner product of `b⊗v` and `c⊗w` is then
//! `⟨bv, cw⟩`, and the operator norm of the localized representation equals
//! the Hilbert-module operator norm.
//!
//! For a finite group `ℓ¹(B)` is finite dimensional and `λ` is faithful
//! (checked on construction), so the C*-norm of `λ` is the universal norm.

use num_complex::Complex64;
use std::sync::Arc;

use crate::bundle::FellBundle;
use crate::error::{Error, Result};
use crate::group::FiniteGroup;
use crate::linalg::{
    block_decompose, column_space, hs_inner, operator_norm, pinv, unvectorize, vectorize, zeros, BlockDecomposition,
    ComplexMatrix, ComplexVector, MatrixSubspace,
};
use crate::section::Section;

#[derive(Debug, Clone)]
pub struct RegularRep {
    bundle_id: u64,
    group: FiniteGroup,
    /// `n × h` isometry onto `H₀`.
    h0: ComplexMatrix,
    /// Per fiber `t`, an orthonormal basis of `B_t·H₀`.
    frames: Vec<ComplexMatrix>,
    offsets: Vec<usize>,
    dim: usize,
}

impl RegularRep {
    pub fn new(b: &FellBundle) -> Result<Self> {
        let n = b.ambient_dim();
        let be = b.fiber(0);
        let h0 = if be.dim() == 0 {
            zeros(n, 0)
        } else {
            let bd = block_decompose(be, crate::DEFAULT_SEED)?;
            let cols: Vec<ComplexMatrix> = (0..bd.num_kinds()).map(|k| bd.first_copy(k)).collect();
            let h: usize = cols.iter().map(|c| c.ncols()).sum();
            let mut m = zeros(n, h);
            let mut off = 0;
            for c in cols {
                m.view_mut((0, off), (n, c.ncols())).copy_from(&c);
                off += c.ncols();
            }
            m
        };
        let h = h0.ncols();
        let mut frames = Vec::with_capacity(b.order());
        let mut offsets = Vec::with_capacity(b.order());
        let mut dim = 0;
        for fiber in b.fibers() {
            let mut wide = zeros(n, h * fiber.dim());
            for (i, e) in fiber.basis().iter().enumerate() {
                wide.view_mut((0, i * h), (n, h)).copy_from(&(e * &h0));
            }
            let q = column_space(&wide);
            offsets.push(dim);
            dim += q.ncols();
            frames.push(q);
        }
        Ok(Self { bundle_id: b.id(), group: b.group().clone(), h0, frames, offsets, dim })
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    /// Dimension of the localizing space `H₀`.
    pub fn local_dim(&self) -> usize {
        self.h0.ncols()
    }

    pub fn h0(&self) -> &ComplexMatrix {
        &self.h0
    }

    /// `λ(j_s(x))`: the `(st, t)` block is `Q_{st}† x Q_t`.
    pub fn fiber_operator(&self, s: usize, x: &ComplexMatrix) -> ComplexMatrix {
        let mut out = zeros(self.dim, self.dim);
        for t in self.group.elements() {
            let st = self.group.mul(s, t);
            let (qa, qb) = (&self.frames[st], &self.frames[t]);
            if qa.ncols() == 0 || qb.ncols() == 0 {
                continue;
            }
            let block = qa.adjoint() * x * qb;
            out.view_mut((self.offsets[st], self.offsets[t]), block.shape()).copy_from(&block);
        }
        out
    }

    /// `λ(f) = Σ_s λ_s(f_s)`.
    pub fn matrix(&self, f: &Section) -> Result<ComplexMatrix> {
        if f.bundle().id() != self.bundle_id {
            return Err(Error::BundleMismatch);
        }
        let mut out = zeros(self.dim, self.dim);
        for s in self.group.elements() {
            if f.value(s).norm() > 0.0 {
                out += self.fiber_operator(s, f.value(s));
            }
        }
        Ok(out)
    }

    /// The vector of `y ⊗ v` for `v ∈ H₀` given in coordinates of `H₀`.
    pub fn localize(&self, y: &Section, v: &ComplexVector) -> Result<ComplexVector> {
        if y.bundle().id() != self.bundle_id {
            return Err(Error::BundleMismatch);
        }
        let hv = &self.h0 * v;
        let mut out = ComplexVector::zeros(self.dim);
        for t in self.group.elements() {
            let q = &self.frames[t];
            if q.ncols() == 0 {
                continue;
            }
            let part = q.adjoint() * (y.value(t) * &hv);
            out.rows_mut(self.offsets[t], q.ncols()).copy_from(&part);
        }
        Ok(out)
    }
}

/// `‖f‖_*`, the operator norm of the regular representation.
pub fn universal_norm(f: &Section) -> Result<f64> {
    let p = f.bundle().presentation()?;
    Ok(operator_norm(&p.rep().matrix(f)?))
}

pub fn regular_rep_matrix(f: &Section) -> Result<ComplexMatrix> {
    f.bundle().presentation()?.rep().matrix(f)
}

/// `C*(B)` as the matrix algebra `λ(ℓ¹(B))` together with its block structure.
#[derive(Debug, Clone)]
pub struct CStarPresentation {
    rep: RegularRep,
    /// `λ(e_{s,i})` for each fiber basis element.
    images: Vec<Vec<ComplexMatrix>>,
    algebra: MatrixSubspace,
    blocks: BlockDecomposition,
    /// Per fiber, the inverse Gram matrix of the images (to invert `λ`).
    gram_inv: Vec<ComplexMatrix>,
    /// Inverse of the map from conjugated block entries to basis values.
    pairing_inv: ComplexMatrix,
}

impl CStarPresentation {
    pub fn new(b: &FellBundle) -> Result<Self> {
        let rep = RegularRep::new(b)?;
        let images: Vec<Vec<ComplexMatrix>> = b
            .group()
            .elements()
            .map(|s| b.fiber(s).basis().iter().map(|e| rep.fiber_operator(s, e)).collect())
            .collect();
        let all: Vec<ComplexMatrix> = images.iter().flatten().cloned().collect();
        let algebra = MatrixSubspace::from_spanning(rep.dim(), &all)?;
        if algebra.dim() != b.total_dim() {
            return Err(Error::Degenerate(format!(
                "regular representation is not faithful ({} of {} dimensions)",
                algebra.dim(),
                b.total_dim()
            )));
        }
        let blocks = block_decompose(&algebra, crate::DEFAULT_SEED)?;
        let gram_inv = images
            .iter()
            .map(|imgs| {
                let d = imgs.len();
                let g = ComplexMatrix::from_fn(d, d, |i, j| hs_inner(&imgs[i], &imgs[j]));
                pinv(&g)
            })
            .collect();
        let total = b.total_dim();
        let mut pairing = zeros(total, total);
        for (row, img) in all.iter().enumerate() {
            let mut col = 0;
            for comp in blocks.components(img) {
                for v in vectorize(&comp).iter() {
                    pairing[(row, col)] = *v;
                    col += 1;
                }
            }
        }
        let pairing_inv = pinv(&pairing);
        Ok(Self { rep, images, algebra, blocks, gram_inv, pairing_inv })
    }

    pub fn rep(&self) -> &RegularRep {
        &self.rep
    }

    pub fn algebra(&self) -> &MatrixSubspace {
        &self.algebra
    }

    pub fn blocks(&self) -> &BlockDecomposition {
        &self.blocks
    }

    pub fn image(&self, s: usize, i: usize) -> &ComplexMatrix {
        &self.images[s][i]
    }

    /// Inverse of `λ` on the algebra: the section whose image is the
    /// HS-closest element to `x`.
    pub fn section_of(&self, bundle: &Arc<FellBundle>, x: &ComplexMatrix) -> Result<Section> {
        let mut coords = Vec::with_capacity(self.images.len());
        for (imgs, ginv) in self.images.iter().zip(&self.gram_inv) {
            let rhs = ComplexVector::from_iterator(imgs.len(), imgs.iter().map(|e| hs_inner(e, x)));
            coords.push((ginv * rhs).iter().copied().collect::<Vec<_>>());
        }
        Section::from_coordinates(bundle, &coords)
    }

    /// Block matrices `D_k` with `φ(x) = Σ_k tr(D_k† x_k)`, from the values
    /// `φ(λ(e_{s,i}))` listed in fiber order.
    pub fn functional_blocks(&self, values: &[Complex64]) -> Vec<ComplexMatrix> {
        let d = &self.pairing_inv * ComplexVector::from_column_slice(values);
        let mut out = Vec::new();
        let mut off = 0;
        for (_, size) in self.blocks.block_dims() {
            let seg: Vec<Complex64> = d.rows(off, size * size).iter().map(|z| z.conj()).collect();
            out.push(unvectorize(&seg, size, size));
            off += size * size;
        }
        out
    }

    /// Values `Σ_k tr(D_k† λ(e_{s,i})_k)` in fiber order.
    pub fn values_from_blocks(&self, blocks: &[ComplexMatrix]) -> Vec<Complex64> {
        self.images
            .iter()
            .flatten()
            .map(|img| self.blocks.components(img).iter().zip(blocks).map(|(x, d)| hs_inner(d, x)).sum())
            .collect()
    }

    /// The algebra element with the given blocks.
    pub fn element_from_blocks(&self, blocks: &[ComplexMatrix]) -> ComplexMatrix {
        self.blocks.assemble(blocks)
    }
}

#[cfg(test)]
mod tests;
