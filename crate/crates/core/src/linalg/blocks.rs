//! Block (Wedderburn) decomposition of finite-dimensional *-algebras of matrices.

use rand::Rng;
use rand_distr::StandardNormal;

use super::{
    block_diag, c, column_space, hermitian_eigen, hermitian_part, null_space, operator_norm, skew_part, vectorize,
    zeros, ComplexMatrix, MatrixSubspace,
};
use crate::error::{Error, Result};
use crate::seeded_rng;

/// Eigenvalues closer than this (after normalization) belong to one cluster.
pub const CLUSTER_TOL: f64 = 1e-7;
const ATTEMPTS: u64 = 8;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
struct Kind {
    multiplicity: usize,
    size: usize,
    offset: usize,
}

/// A unitary `U` such that `U† a U` is block diagonal for every element `a` of
/// the algebra: kind `k` contributes `multiplicity_k` identical copies of an
/// arbitrary `size_k × size_k` block. Columns of kind `k` are ordered copy-major
/// (`offset + copy·size + index`). Columns past the last block span the common
/// kernel of the algebra (`null_dim` of them).
#[derive(Debug, Clone)]
pub struct BlockDecomposition {
    unitary: ComplexMatrix,
    kinds: Vec<Kind>,
    null_dim: usize,
}

impl BlockDecomposition {
    pub fn unitary(&self) -> &ComplexMatrix {
        &self.unitary
    }

    /// `(multiplicity, size)` per block kind, sorted by size then multiplicity.
    pub fn block_dims(&self) -> Vec<(usize, usize)> {
        self.kinds.iter().map(|k| (k.multiplicity, k.size)).collect()
    }

    /// Sizes of the irreducible blocks, one entry per kind.
    pub fn sizes(&self) -> Vec<usize> {
        self.kinds.iter().map(|k| k.size).collect()
    }

    pub fn num_kinds(&self) -> usize {
        self.kinds.len()
    }

    pub fn null_dim(&self) -> usize {
        self.null_dim
    }

    /// `Σ size²`, the linear dimension of the algebra.
    pub fn algebra_dim(&self) -> usize {
        self.kinds.iter().map(|k| k.size * k.size).sum()
    }

    pub fn ambient_dim(&self) -> usize {
        self.unitary.nrows()
    }

    /// Columns of the first copy of kind `k` (an `n × size_k` isometry).
    pub fn first_copy(&self, k: usize) -> ComplexMatrix {
        let kind = self.kinds[k];
        self.unitary.columns(kind.offset, kind.size).into_owned()
    }

    pub fn conjugate(&self, a: &ComplexMatrix) -> ComplexMatrix {
        self.unitary.adjoint() * a * &self.unitary
    }

    /// The block of `a` in kind `k` (read from the first copy).
    pub fn component(&self, a: &ComplexMatrix, k: usize) -> ComplexMatrix {
        let v = self.first_copy(k);
        v.adjoint() * a * v
    }

    pub fn components(&self, a: &ComplexMatrix) -> Vec<ComplexMatrix> {
        (0..self.kinds.len()).map(|k| self.component(a, k)).collect()
    }

    /// Inverse of `components`: places each block on all its copies.
    pub fn assemble(&self, blocks: &[ComplexMatrix]) -> ComplexMatrix {
        let mut diag_blocks = Vec::new();
        for (kind, b) in self.kinds.iter().zip(blocks) {
            for _ in 0..kind.multiplicity {
                diag_blocks.push(b.clone());
            }
        }
        diag_blocks.push(zeros(self.null_dim, self.null_dim));
        &self.unitary * block_diag(&diag_blocks) * self.unitary.adjoint()
    }

    /// Largest entry of `U†aU` outside the block pattern, including
    /// disagreement between copies.
    pub fn block_residual(&self, a: &ComplexMatrix) -> f64 {
        let blocks = self.components(a);
        let rebuilt = self.assemble(&blocks);
        super::max_abs_diff(&self.conjugate(a), &self.conjugate(&rebuilt))
    }

    /// Worst `‖assemble(components(a)) − a‖` over the algebra basis.
    pub fn reassembly_residual(&self, algebra: &MatrixSubspace) -> f64 {
        algebra.basis().iter().map(|a| super::max_abs_diff(&self.assemble(&self.components(a)), a)).fold(0.0, f64::max)
    }
}

/// Decomposes a *-subalgebra of `M_n` into irreducible blocks.
///
/// Minimal central projections come from the eigenspaces of a random
/// self-adjoint central element; inside each central summand the eigenspaces
/// of a random self-adjoint element give the matrix-unit directions, and the
/// copies are aligned through an off-diagonal corner of a random element.
pub fn block_decompose(algebra: &MatrixSubspace, seed: u64) -> Result<BlockDecomposition> {
    let n = algebra.ambient_dim();
    let closure = algebra.closure_residual();
    if closure > 1e-8 {
        return Err(Error::NotClosed(closure));
    }
    if algebra.dim() == 0 {
        return Ok(BlockDecomposition { unitary: super::identity(n), kinds: Vec::new(), null_dim: n });
    }
    // range of the algebra (= range of its unit)
    let mut wide = zeros(n, n * algebra.dim());
    for (i, a) in algebra.basis().iter().enumerate() {
        wide.view_mut((0, i * n), (n, n)).copy_from(a);
    }
    let range = column_space(&wide);
    let r = range.ncols();
    let restricted: Vec<ComplexMatrix> = algebra.basis().iter().map(|a| range.adjoint() * a * &range).collect();
    let center = center_basis(&restricted);

    let mut last_err = None;
    for attempt in 0..ATTEMPTS {
        let mut rng = seeded_rng(seed.wrapping_add(attempt.wrapping_mul(0x9e37_79b9)));
        match decompose_restricted(&restricted, &center, r, &mut rng) {
            Ok(mut pieces) => {
                pieces.sort_by_key(|p| (p.size, p.multiplicity));
                let mut cols: Vec<ComplexMatrix> = Vec::new();
                let mut kinds = Vec::new();
                let mut offset = 0;
                for p in &pieces {
                    kinds.push(Kind { multiplicity: p.multiplicity, size: p.size, offset });
                    offset += p.multiplicity * p.size;
                    cols.push(&range * &p.columns);
                }
                let complement = null_space(&range.adjoint(), 0.0);
                let null_dim = n - r;
                if complement.ncols() != null_dim {
                    return Err(Error::Degenerate("range complement has wrong dimension".into()));
                }
                cols.push(complement);
                let unitary = hcat(n, &cols);
                let bd = BlockDecomposition { unitary, kinds, null_dim };
                let unitarity = super::max_abs_diff(&(bd.unitary.adjoint() * &bd.unitary), &super::identity(n));
                let worst = algebra.basis().iter().map(|a| bd.block_residual(a)).fold(0.0, f64::max);
                if unitarity <= 1e-9 && worst <= 1e-8 && bd.algebra_dim() == algebra.dim() {
                    return Ok(bd);
                }
                last_err = Some(Error::Degenerate(format!(
                    "block check failed (unitarity {unitarity:.2e}, off-block {worst:.2e})"
                )));
            }
            Err(e) => last_err = Some(e),
        }
    }
    Err(last_err.unwrap_or_else(|| Error::Degenerate("no attempt succeeded".into())))
}

struct Piece {
    multiplicity: usize,
    size: usize,
    /// `r × (multiplicity·size)` columns in the restricted space.
    columns: ComplexMatrix,
}

fn hcat(rows: usize, parts: &[ComplexMatrix]) -> ComplexMatrix {
    let total: usize = parts.iter().map(|p| p.ncols()).sum();
    let mut out = zeros(rows, total);
    let mut off = 0;
    for p in parts {
        out.view_mut((0, off), (rows, p.ncols())).copy_from(p);
        off += p.ncols();
    }
    out
}

/// Basis of the center, as matrices, from the commutation system against the basis.
fn center_basis(basis: &[ComplexMatrix]) -> Vec<ComplexMatrix> {
    let d = basis.len();
    let r = basis[0].nrows();
    let mut system = zeros(d * r * r, d);
    for (i, bi) in basis.iter().enumerate() {
        for (j, bj) in basis.iter().enumerate() {
            let comm = vectorize(&(bj * bi - bi * bj));
            system.view_mut((i * r * r, j), (r * r, 1)).copy_from(&comm);
        }
    }
    let kernel = null_space(&system, 1e-12);
    (0..kernel.ncols())
        .map(|k| {
            let mut z = zeros(r, r);
            for j in 0..d {
                z += &basis[j] * kernel[(j, k)];
            }
            z
        })
        .collect()
}

/// Random real combination of the hermitian and skew parts of `mats`,
/// normalized to operator norm 1.
fn random_self_adjoint<R: Rng>(mats: &[ComplexMatrix], rng: &mut R) -> ComplexMatrix {
    let r = mats[0].nrows();
    let mut h = zeros(r, r);
    for m in mats {
        let a: f64 = rng.sample(StandardNormal);
        let b: f64 = rng.sample(StandardNormal);
        h += hermitian_part(m) * c(a, 0.0) + skew_part(m) * c(b, 0.0);
    }
    let norm = operator_norm(&h);
    if norm > 0.0 {
        h /= c(norm, 0.0);
    }
    hermitian_part(&h)
}

/// Groups ascending eigenvalues into clusters; errors if two clusters are
/// closer than ten times the clustering tolerance.
fn cluster(values: &[f64]) -> Result<Vec<std::ops::Range<usize>>> {
    let mut out = Vec::new();
    let mut start = 0;
    for i in 1..=values.len() {
        if i == values.len() || values[i] - values[i - 1] > CLUSTER_TOL {
            if i < values.len() && values[i] - values[i - 1] < 10.0 * CLUSTER_TOL {
                return Err(Error::Degenerate(format!("eigenvalue clusters {:.3e} apart", values[i] - values[i - 1])));
            }
            out.push(start..i);
            start = i;
        }
    }
    Ok(out)
}

fn decompose_restricted<R: Rng>(
    basis: &[ComplexMatrix],
    center: &[ComplexMatrix],
    r: usize,
    rng: &mut R,
) -> Result<Vec<Piece>> {
    let z = random_self_adjoint(center, rng);
    let (values, vectors) = hermitian_eigen(&z);
    let clusters = cluster(&values)?;
    if clusters.len() != center.len() {
        return Err(Error::Degenerate(format!(
            "{} eigenvalue clusters for a {}-dimensional center",
            clusters.len(),
            center.len()
        )));
    }
    let mut pieces = Vec::new();
    for cl in clusters {
        let w = vectors.columns(cl.start, cl.len()).into_owned();
        let dk = w.ncols();
        let compressed: Vec<ComplexMatrix> = basis.iter().map(|b| w.adjoint() * b * &w).collect();
        let sub = MatrixSubspace::from_spanning(dk, &compressed)?;
        let size = (sub.dim() as f64).sqrt().round() as usize;
        if size == 0 || size * size != sub.dim() || dk % size != 0 {
            return Err(Error::Degenerate(format!(
                "central summand of dimension {} on a {dk}-dimensional space",
                sub.dim()
            )));
        }
        let multiplicity = dk / size;
        let local = if size == 1 { w.clone() } else { &w * matrix_unit_frame(sub.basis(), size, multiplicity, rng)? };
        debug_assert_eq!(local.nrows(), r);
        pieces.push(Piece { multiplicity, size, columns: local });
    }
    Ok(pieces)
}

/// Inside one central summand `M_size ⊗ 1_multiplicity`, returns a unitary whose
/// columns are ordered copy-major so the algebra becomes `multiplicity` equal blocks.
fn matrix_unit_frame<R: Rng>(
    basis: &[ComplexMatrix],
    size: usize,
    multiplicity: usize,
    rng: &mut R,
) -> Result<ComplexMatrix> {
    let dk = size * multiplicity;
    let h = random_self_adjoint(basis, rng);
    let (values, vectors) = hermitian_eigen(&h);
    let clusters = cluster(&values)?;
    if clusters.len() != size || clusters.iter().any(|cl| cl.len() != multiplicity) {
        return Err(Error::Degenerate("irreducible block spectrum is not uniform".into()));
    }
    let eig: Vec<ComplexMatrix> = clusters.iter().map(|cl| vectors.columns(cl.start, cl.len()).into_owned()).collect();
    let mut x = zeros(dk, dk);
    for b in basis {
        x += b * super::random_complex(rng);
    }
    let xnorm = operator_norm(&x);
    let mut aligned = vec![eig[0].clone()];
    for e in eig.iter().skip(1) {
        let t = e.adjoint() * &x * &eig[0];
        let s = operator_norm(&t);
        if s < 1e-6 * xnorm {
            return Err(Error::Degenerate("vanishing off-diagonal corner".into()));
        }
        let t = t / c(s, 0.0);
        if super::max_abs_diff(&(t.adjoint() * &t), &super::identity(multiplicity)) > 1e-8 {
            return Err(Error::Degenerate("corner is not a multiple of a unitary".into()));
        }
        aligned.push(e * t);
    }
    let mut frame = zeros(dk, dk);
    for copy in 0..multiplicity {
        for (i, f) in aligned.iter().enumerate() {
            frame.set_column(copy * size + i, &f.column(copy));
        }
    }
    Ok(frame)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::{algebra_closure, diag, identity, kron, unit};

    #[test]
    fn full_matrix_algebra() {
        let m2 = algebra_closure(2, &[unit(2, 0, 1)]).unwrap();
        let bd = block_decompose(&m2, 0).unwrap();
        assert_eq!(bd.block_dims(), vec![(1, 2)]);
        assert!(bd.reassembly_residual(&m2) < 1e-10);
    }

    #[test]
    fn diagonal_algebra() {
        let d = algebra_closure(2, &[diag(&[c(1.0, 0.0), c(-1.0, 0.0)])]).unwrap();
        let bd = block_decompose(&d, 0).unwrap();
        assert_eq!(bd.block_dims(), vec![(1, 1), (1, 1)]);
    }

    #[test]
    fn amplified_and_nonunital() {
        // M_2 ⊗ 1_3 inside M_6
        let gens: Vec<_> = [unit(2, 0, 1), unit(2, 1, 1)].iter().map(|g| kron(g, &identity(3))).collect();
        let alg = algebra_closure(6, &gens).unwrap();
        let bd = block_decompose(&alg, 3).unwrap();
        assert_eq!(bd.block_dims(), vec![(3, 2)]);
        assert!(bd.reassembly_residual(&alg) < 1e-10);
        // M_2 in the corner of M_3
        let corner = algebra_closure(3, &[unit(3, 0, 1)]).unwrap();
        let bd = block_decompose(&corner, 0).unwrap();
        assert_eq!(bd.block_dims(), vec![(1, 2)]);
        assert_eq!(bd.null_dim(), 1);
        assert!(bd.reassembly_residual(&corner) < 1e-10);
    }

    #[test]
    fn rejects_non_algebra() {
        let s = MatrixSubspace::from_spanning(2, &[unit(2, 0, 1)]).unwrap();
        assert!(matches!(block_decompose(&s, 0), Err(Error::NotClosed(_))));
    }
}
