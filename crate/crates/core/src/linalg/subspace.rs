use num_complex::Complex64;

use super::{c, hs_inner, unvectorize, vectorize, ComplexMatrix, ComplexVector, RANK_TOL};
use crate::error::{Error, Result};

/// A subspace of `M_n` with a Hilbert–Schmidt orthonormal basis.
#[derive(Debug, Clone)]
pub struct MatrixSubspace {
    n: usize,
    basis: Vec<ComplexMatrix>,
    /// `n² × dim`, columns are the vectorized basis.
    frame: ComplexMatrix,
}

impl MatrixSubspace {
    pub fn zero(n: usize) -> Self {
        Self { n, basis: Vec::new(), frame: ComplexMatrix::zeros(n * n, 0) }
    }

    /// Orthonormalizes a spanning set by pivoted Gram–Schmidt (with one
    /// reorthogonalization pass). A candidate is dropped once its residual
    /// falls below `RANK_TOL` times the largest input norm.
    pub fn from_spanning(n: usize, mats: &[ComplexMatrix]) -> Result<Self> {
        for m in mats {
            if m.shape() != (n, n) {
                return Err(Error::Shape(format!("expected {n}x{n}, got {}x{}", m.nrows(), m.ncols())));
            }
        }
        let scale = mats.iter().map(|m| m.norm()).fold(0.0, f64::max);
        let mut pending: Vec<ComplexVector> = mats.iter().map(vectorize).collect();
        let mut chosen: Vec<ComplexVector> = Vec::new();
        while !pending.is_empty() {
            let (best, norm) =
                pending.iter().enumerate().map(|(i, v)| (i, v.norm())).max_by(|a, b| a.1.total_cmp(&b.1)).unwrap();
            if norm <= RANK_TOL * scale || norm == 0.0 {
                break;
            }
            let mut q = pending.swap_remove(best);
            for prev in &chosen {
                let p = prev.dotc(&q);
                q -= prev * p;
            }
            let qn = q.norm();
            if qn <= RANK_TOL * scale {
                continue;
            }
            q /= c(qn, 0.0);
            for v in pending.iter_mut() {
                for _ in 0..2 {
                    let p = q.dotc(v);
                    *v -= &q * p;
                }
            }
            chosen.push(q);
        }
        Ok(Self::from_vectors(n, chosen))
    }

    /// Wraps a basis already known to be orthonormal.
    pub fn from_orthonormal(n: usize, basis: Vec<ComplexMatrix>) -> Self {
        let vecs = basis.iter().map(vectorize).collect();
        Self::from_vectors(n, vecs)
    }

    fn from_vectors(n: usize, vecs: Vec<ComplexVector>) -> Self {
        let d = vecs.len();
        let frame = if d == 0 { ComplexMatrix::zeros(n * n, 0) } else { ComplexMatrix::from_columns(&vecs) };
        let basis = vecs.iter().map(|v| unvectorize(v.as_slice(), n, n)).collect();
        Self { n, basis, frame }
    }

    pub fn ambient_dim(&self) -> usize {
        self.n
    }

    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    pub fn basis(&self) -> &[ComplexMatrix] {
        &self.basis
    }

    /// HS coordinates `⟨e_i, x⟩` of the orthogonal projection of `x`.
    pub fn coordinates(&self, x: &ComplexMatrix) -> ComplexVector {
        self.frame.adjoint() * vectorize(x)
    }

    pub fn from_coordinates(&self, coords: &[Complex64]) -> ComplexMatrix {
        let mut out = ComplexMatrix::zeros(self.n, self.n);
        for (e, &k) in self.basis.iter().zip(coords) {
            out += e * k;
        }
        out
    }

    pub fn project(&self, x: &ComplexMatrix) -> ComplexMatrix {
        let v = &self.frame * self.coordinates(x);
        unvectorize(v.as_slice(), self.n, self.n)
    }

    /// HS distance from `x` to the subspace.
    pub fn residual(&self, x: &ComplexMatrix) -> f64 {
        (x - self.project(x)).norm()
    }

    pub fn contains(&self, x: &ComplexMatrix, tol: f64) -> bool {
        self.residual(x) <= tol * (1.0 + x.norm())
    }

    /// Largest entry of `|Gram − I|` for the stored basis.
    pub fn gram_residual(&self) -> f64 {
        let g = self.frame.adjoint() * &self.frame;
        let d = self.dim();
        let mut worst: f64 = 0.0;
        for i in 0..d {
            for j in 0..d {
                let target = if i == j { 1.0 } else { 0.0 };
                worst = worst.max((g[(i, j)] - c(target, 0.0)).norm());
            }
        }
        worst
    }

    /// Worst residual of `self ⊆ other`.
    pub fn inclusion_residual(&self, other: &MatrixSubspace) -> f64 {
        self.basis.iter().map(|e| other.residual(e)).fold(0.0, f64::max)
    }

    pub fn adjoint(&self) -> MatrixSubspace {
        Self::from_orthonormal(self.n, self.basis.iter().map(|e| e.adjoint()).collect())
    }

    /// Span of the union.
    pub fn join(&self, other: &MatrixSubspace) -> Result<MatrixSubspace> {
        let mut all = self.basis.clone();
        all.extend(other.basis.iter().cloned());
        Self::from_spanning(self.n, &all)
    }

    /// Worst residual of `xy ∈ self` over basis pairs, and of `x† ∈ self`.
    pub fn closure_residual(&self) -> f64 {
        let mut worst: f64 = 0.0;
        for x in &self.basis {
            worst = worst.max(self.residual(&x.adjoint()));
            for y in &self.basis {
                worst = worst.max(self.residual(&(x * y)));
            }
        }
        worst
    }

    /// HS inner product in coordinates (the basis is orthonormal).
    pub fn inner(&self, x: &ComplexMatrix, y: &ComplexMatrix) -> Complex64 {
        hs_inner(x, y)
    }
}

/// The smallest *-subalgebra of `M_n` containing the generators.
pub fn algebra_closure(n: usize, generators: &[ComplexMatrix]) -> Result<MatrixSubspace> {
    let mut spanning: Vec<ComplexMatrix> = generators.to_vec();
    spanning.extend(generators.iter().map(|g| g.adjoint()));
    let mut current = MatrixSubspace::from_spanning(n, &spanning)?;
    loop {
        let mut next = current.basis().to_vec();
        for x in current.basis() {
            for y in current.basis() {
                next.push(x * y);
            }
        }
        let grown = MatrixSubspace::from_spanning(n, &next)?;
        if grown.dim() == current.dim() {
            return Ok(grown);
        }
        current = grown;
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::{diag, from_real, identity, unit};

    #[test]
    fn spanning_set_is_orthonormalized() {
        let mats = vec![identity(2), unit(2, 0, 0), unit(2, 0, 0) * c(3.0, 1.0)];
        let s = MatrixSubspace::from_spanning(2, &mats).unwrap();
        assert_eq!(s.dim(), 2);
        assert!(s.gram_residual() < 1e-12);
        assert!(s.contains(&unit(2, 1, 1), 1e-12));
        assert!(!s.contains(&unit(2, 0, 1), 1e-6));
    }

    #[test]
    fn closures() {
        assert_eq!(algebra_closure(2, &[identity(2)]).unwrap().dim(), 1);
        let m2 = algebra_closure(2, &[unit(2, 0, 1)]).unwrap();
        assert_eq!(m2.dim(), 4);
        let d = algebra_closure(2, &[diag(&[c(1.0, 0.0), c(-1.0, 0.0)])]).unwrap();
        assert_eq!(d.dim(), 2);
        assert!(d.closure_residual() < 1e-12);
        let swap = from_real(2, 2, &[0.0, 1.0, 1.0, 0.0]);
        assert_eq!(algebra_closure(2, &[swap]).unwrap().dim(), 2);
    }
}
