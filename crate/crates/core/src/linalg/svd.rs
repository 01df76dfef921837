//! One-sided Jacobi SVD for complex matrices.
//!
//! nalgebra's complex SVD loses accuracy on rank-deficient inputs (its
//! reconstruction error can reach the size of the entries), so every
//! factorization in this crate goes through this routine instead.

use num_complex::Complex64;

use super::{zeros, ComplexMatrix};

const MAX_SWEEPS: usize = 80;

/// Thin factorization `m = U·diag(s)·V†` with `k = min(rows, cols)` columns,
/// singular values descending. `U` and `V` have orthonormal columns; columns
/// for zero singular values are an arbitrary orthonormal completion.
#[derive(Debug, Clone)]
pub struct Svd {
    pub u: ComplexMatrix,
    pub s: Vec<f64>,
    pub v: ComplexMatrix,
}

impl Svd {
    pub fn new(m: &ComplexMatrix) -> Self {
        let (r, c) = m.shape();
        if r < c {
            let t = jacobi(&m.adjoint());
            return Svd { u: t.v, s: t.s, v: t.u };
        }
        jacobi(m)
    }

    pub fn recompose(&self) -> ComplexMatrix {
        let mut scaled = self.u.clone();
        for (j, &s) in self.s.iter().enumerate() {
            scaled.column_mut(j).scale_mut(s);
        }
        scaled * self.v.adjoint()
    }
}

/// Requires `rows ≥ cols`.
fn jacobi(m: &ComplexMatrix) -> Svd {
    let (rows, n) = m.shape();
    let mut w = m.clone();
    let mut v = ComplexMatrix::identity(n, n);
    for _ in 0..MAX_SWEEPS {
        let mut rotated = false;
        for p in 0..n {
            for q in (p + 1)..n {
                let alpha = w.column(p).norm_squared();
                let beta = w.column(q).norm_squared();
                let gamma = w.column(p).dotc(&w.column(q));
                let g = gamma.norm();
                if g == 0.0 || g <= f64::EPSILON * (alpha * beta).sqrt() {
                    continue;
                }
                rotated = true;
                let phase = gamma / g;
                let zeta = (beta - alpha) / (2.0 * g);
                let t = zeta.signum() / (zeta.abs() + (1.0 + zeta * zeta).sqrt());
                let cs = 1.0 / (1.0 + t * t).sqrt();
                let sn = cs * t;
                rotate(&mut w, p, q, phase, cs, sn);
                rotate(&mut v, p, q, phase, cs, sn);
            }
        }
        if !rotated {
            break;
        }
    }
    let norms: Vec<f64> = (0..n).map(|j| w.column(j).norm()).collect();
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&a, &b| norms[b].total_cmp(&norms[a]));
    let smax = norms.iter().copied().fold(0.0, f64::max);
    let mut u = zeros(rows, n);
    let mut vs = zeros(n, n);
    let mut s = Vec::with_capacity(n);
    let mut filled = Vec::new();
    for (k, &j) in order.iter().enumerate() {
        vs.set_column(k, &v.column(j));
        let nj = norms[j];
        s.push(nj);
        // directions of columns at roundoff level carry no information
        if nj > 0.0 && nj > 64.0 * (n as f64) * f64::EPSILON * smax {
            u.set_column(k, &(w.column(j) / Complex64::new(nj, 0.0)));
            filled.push(k);
        }
    }
    complete(&mut u, &filled);
    Svd { u, s, v: vs }
}

/// Column `p ← c·w_p − s·conj(phase)·w_q` and `q ← s·phase·w_p + c·w_q`,
/// which orthogonalizes the pair for the Jacobi choice of `c, s`.
fn rotate(m: &mut ComplexMatrix, p: usize, q: usize, phase: Complex64, cs: f64, sn: f64) {
    for i in 0..m.nrows() {
        let a = m[(i, p)];
        let b = m[(i, q)] * phase.conj();
        m[(i, p)] = a * cs - b * sn;
        m[(i, q)] = (a * sn + b * cs) * phase;
    }
}

/// Fills the columns of `u` not listed in `filled` with an orthonormal
/// completion: each new column is the standard basis vector with the largest
/// component outside the current span, orthogonalized (Gram–Schmidt, two passes).
fn complete(u: &mut ComplexMatrix, filled: &[usize]) {
    let (rows, cols) = u.shape();
    let mut have: Vec<usize> = filled.to_vec();
    for k in 0..cols {
        if filled.contains(&k) {
            continue;
        }
        let mut best: Option<(f64, ComplexMatrix)> = None;
        for e in 0..rows {
            let mut x = zeros(rows, 1);
            x[(e, 0)] = Complex64::new(1.0, 0.0);
            for _ in 0..2 {
                for &j in &have {
                    let col = u.column(j).into_owned();
                    let proj = col.dotc(&x.column(0));
                    x.column_mut(0).axpy(-proj, &col, Complex64::new(1.0, 0.0));
                }
            }
            let nx = x.norm();
            if best.as_ref().is_none_or(|(b, _)| nx > *b) {
                best = Some((nx, x));
            }
        }
        let (nx, x) = best.expect("at least one row");
        u.set_column(k, &(x.column(0) / Complex64::new(nx, 0.0)));
        have.push(k);
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::{identity, max_abs_diff, random_matrix};

    #[test]
    fn reconstructs_rank_deficient_products() {
        let mut rng = crate::seeded_rng(3);
        for n in 1..9 {
            for r in 1..=n {
                for cols in [n, n + 2] {
                    let m = random_matrix(n, r, &mut rng) * random_matrix(r, cols, &mut rng);
                    let f = Svd::new(&m);
                    assert!(max_abs_diff(&f.recompose(), &m) < 1e-12);
                    let k = f.s.len();
                    let e = max_abs_diff(&(f.u.adjoint() * &f.u), &identity(k));
                    assert!(e < 1e-12, "n{n} r{r} c{cols} {e:e} {:?}", f.s);
                    assert!(max_abs_diff(&(f.v.adjoint() * &f.v), &identity(k)) < 1e-12);
                    assert!(f.s.windows(2).all(|w| w[0] >= w[1]));
                    assert!(f.s.iter().skip(r).all(|&s| s < 1e-12));
                }
            }
        }
    }

    #[test]
    fn zero_matrix_has_unitary_factors() {
        let f = Svd::new(&zeros(3, 3));
        assert!(f.s.iter().all(|&s| s == 0.0));
        assert!(max_abs_diff(&(f.u.adjoint() * &f.u), &identity(3)) < 1e-15);
    }
}
