//! Classical `A(G)`, `B(G)` and `C*(G)` of a finite group, built directly from
//! the left-regular permutation matrices and never through bundle types.

use num_complex::Complex64;
use rand::Rng;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::fourier::FourierElement;
use crate::group::{Character, FiniteGroup};
use crate::linalg::{
    block_decompose, hs_inner, pinv, random_complex, trace_norm, unvectorize, vectorize, zeros, BlockDecomposition,
    ComplexMatrix, ComplexVector, MatrixSubspace,
};

/// A complex function on a finite group.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ClassicalFunction {
    #[serde(skip)]
    group: FiniteGroup,
    values: Vec<Complex64>,
}

impl ClassicalFunction {
    pub fn new(group: &FiniteGroup, values: Vec<Complex64>) -> Result<Self> {
        if values.len() != group.order() {
            return Err(Error::Dimension(format!("{} values for a group of order {}", values.len(), group.order())));
        }
        if values.iter().any(|z| !z.re.is_finite() || !z.im.is_finite()) {
            return Err(Error::InvalidParameter("non-finite function value".into()));
        }
        Ok(Self { group: group.clone(), values })
    }

    pub fn constant(group: &FiniteGroup, z: Complex64) -> Self {
        Self { group: group.clone(), values: vec![z; group.order()] }
    }

    /// Indicator of a single element.
    pub fn delta(group: &FiniteGroup, s: usize) -> Self {
        let mut values = vec![Complex64::new(0.0, 0.0); group.order()];
        values[s] = Complex64::new(1.0, 0.0);
        Self { group: group.clone(), values }
    }

    pub fn from_character(group: &FiniteGroup, chi: &Character) -> Self {
        Self { group: group.clone(), values: chi.values().to_vec() }
    }

    /// `s ↦ ⟨π_s α, β⟩ = β†π_s α` for a unitary representation given by its matrices.
    pub fn coefficient(
        group: &FiniteGroup,
        rep: &[ComplexMatrix],
        alpha: &ComplexVector,
        beta: &ComplexVector,
    ) -> Self {
        let values = rep.iter().map(|m| beta.dotc(&(m * alpha))).collect();
        Self { group: group.clone(), values }
    }

    pub fn random<R: Rng + ?Sized>(group: &FiniteGroup, rng: &mut R) -> Self {
        let values = (0..group.order()).map(|_| random_complex(rng)).collect();
        Self { group: group.clone(), values }
    }

    pub fn group(&self) -> &FiniteGroup {
        &self.group
    }

    pub fn values(&self) -> &[Complex64] {
        &self.values
    }

    pub fn value(&self, s: usize) -> Complex64 {
        self.values[s]
    }

    pub fn mul(&self, other: &ClassicalFunction) -> ClassicalFunction {
        let values = self.values.iter().zip(&other.values).map(|(a, b)| a * b).collect();
        Self { group: self.group.clone(), values }
    }

    pub fn add(&self, other: &ClassicalFunction) -> ClassicalFunction {
        let values = self.values.iter().zip(&other.values).map(|(a, b)| a + b).collect();
        Self { group: self.group.clone(), values }
    }

    pub fn scale(&self, k: Complex64) -> ClassicalFunction {
        Self { group: self.group.clone(), values: self.values.iter().map(|v| v * k).collect() }
    }

    /// `ũ(s) = conj(u(s⁻¹))`, the involution of `A(G)`.
    pub fn flip_conj(&self) -> ClassicalFunction {
        let values = self.group.elements().map(|s| self.values[self.group.inv(s)].conj()).collect();
        Self { group: self.group.clone(), values }
    }

    pub fn max_diff(&self, other: &ClassicalFunction) -> f64 {
        self.values.iter().zip(&other.values).map(|(a, b)| (a - b).norm()).fold(0.0, f64::max)
    }
}

/// `λ^G_s δ_t = δ_{st}`, built from the Cayley table.
pub fn left_regular(g: &FiniteGroup, s: usize) -> ComplexMatrix {
    let n = g.order();
    let mut m = zeros(n, n);
    for t in 0..n {
        m[(g.cayley()[s][t], t)] = Complex64::new(1.0, 0.0);
    }
    m
}

/// `C*(G)` as `span{λ^G_s}` with its block structure.
#[derive(Debug, Clone)]
pub struct GroupCStar {
    group: FiniteGroup,
    regular: Vec<ComplexMatrix>,
    blocks: BlockDecomposition,
    pairing_inv: ComplexMatrix,
}

pub fn group_cstar(g: &FiniteGroup) -> Result<GroupCStar> {
    let regular: Vec<ComplexMatrix> = g.elements().map(|s| left_regular(g, s)).collect();
    let span = MatrixSubspace::from_spanning(g.order(), &regular)?;
    let blocks = block_decompose(&span, crate::DEFAULT_SEED)?;
    let n = g.order();
    let mut pairing = zeros(n, n);
    for (s, l) in regular.iter().enumerate() {
        let entries: Vec<Complex64> =
            blocks.components(l).iter().flat_map(|c| vectorize(c).iter().copied().collect::<Vec<_>>()).collect();
        if entries.len() != n {
            return Err(Error::Degenerate("block data of the group algebra has the wrong dimension".into()));
        }
        for (col, v) in entries.into_iter().enumerate() {
            pairing[(s, col)] = v;
        }
    }
    let pairing_inv = pinv(&pairing);
    Ok(GroupCStar { group: g.clone(), regular, blocks, pairing_inv })
}

impl GroupCStar {
    pub fn group(&self) -> &FiniteGroup {
        &self.group
    }

    /// Irreducible dimensions, one per kind.
    pub fn sizes(&self) -> Vec<usize> {
        let mut s = self.blocks.sizes();
        s.sort_unstable();
        s
    }

    /// `(multiplicity, size)` of each kind in the regular representation.
    pub fn block_dims(&self) -> Vec<(usize, usize)> {
        self.blocks.block_dims()
    }

    pub fn regular(&self, s: usize) -> &ComplexMatrix {
        &self.regular[s]
    }

    /// Blocks `D_k` with `Σ_k tr(D_k† λ_s|_k) = u(s)`.
    pub fn functional_blocks(&self, u: &ClassicalFunction) -> Vec<ComplexMatrix> {
        let d = &self.pairing_inv * ComplexVector::from_column_slice(u.values());
        let mut out = Vec::new();
        let mut off = 0;
        for size in self.blocks.sizes() {
            let seg: Vec<Complex64> = d.rows(off, size * size).iter().map(|z| z.conj()).collect();
            out.push(unvectorize(&seg, size, size));
            off += size * size;
        }
        out
    }

    /// The norm of `f ↦ Σ_s u(s)f(s)` against the C*-norm.
    pub fn bg_norm(&self, u: &ClassicalFunction) -> f64 {
        self.functional_blocks(u).iter().map(trace_norm).sum()
    }

    /// Residual of the block representation of `u` on every `δ_s`.
    pub fn pairing_residual(&self, u: &ClassicalFunction) -> f64 {
        let d = self.functional_blocks(u);
        self.regular
            .iter()
            .enumerate()
            .map(|(s, l)| {
                let v: Complex64 = self.blocks.components(l).iter().zip(&d).map(|(x, dk)| hs_inner(dk, x)).sum();
                (v - u.value(s)).norm()
            })
            .fold(0.0, f64::max)
    }
}

pub fn bg_norm(u: &ClassicalFunction) -> Result<f64> {
    Ok(group_cstar(u.group())?.bg_norm(u))
}

/// For a finite group `A(G) = B(G)` with the same norm.
pub fn ag_norm(u: &ClassicalFunction) -> Result<f64> {
    bg_norm(u)
}

/// `T_b(u)(s) = θ(u_s(λ_s))` on the trivial bundle, where `θ` reads off the
/// scalar of `B_e = ℂ·1`.
pub fn tb_isomorphism(u: &FourierElement) -> Result<ClassicalFunction> {
    let b = u.bundle();
    let dynamics = b
        .dynamics()
        .filter(|d| d.system().matrix_dim() == 1 && d.system().algebra().dim() == 1)
        .ok_or_else(|| Error::WrongFamily("the trivial bundle of a group is required".into()))?;
    let g = b.group();
    let mut values = Vec::with_capacity(g.order());
    for s in g.elements() {
        let v = u.evaluate(s, dynamics.unitary(s))?;
        values.push(v[(0, 0)]);
    }
    ClassicalFunction::new(g, values)
}
