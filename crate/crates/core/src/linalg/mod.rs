//! Dense complex matrix kernels.

mod blocks;
mod subspace;
mod svd;

pub use blocks::{block_decompose, BlockDecomposition};
pub use subspace::{algebra_closure, MatrixSubspace};
pub use svd::Svd;

use nalgebra::{DMatrix, DVector, SymmetricEigen};
use num_complex::Complex64;
use rand::Rng;
use rand_distr::StandardNormal;

use crate::error::{Error, Result};

pub type ComplexMatrix = DMatrix<Complex64>;
pub type ComplexVector = DVector<Complex64>;

/// Singular values below this fraction of the largest one are treated as zero.
pub const RANK_TOL: f64 = 1e-10;

pub fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

pub fn identity(n: usize) -> ComplexMatrix {
    ComplexMatrix::identity(n, n)
}

pub fn zeros(r: usize, c: usize) -> ComplexMatrix {
    ComplexMatrix::zeros(r, c)
}

/// Matrix unit `E_ij` in `M_n`.
pub fn unit(n: usize, i: usize, j: usize) -> ComplexMatrix {
    let mut m = zeros(n, n);
    m[(i, j)] = c(1.0, 0.0);
    m
}

pub fn from_real(rows: usize, cols: usize, data: &[f64]) -> ComplexMatrix {
    ComplexMatrix::from_row_iterator(rows, cols, data.iter().map(|&x| c(x, 0.0)))
}

pub fn diag(entries: &[Complex64]) -> ComplexMatrix {
    ComplexMatrix::from_diagonal(&ComplexVector::from_column_slice(entries))
}

pub fn singular_values(m: &ComplexMatrix) -> Vec<f64> {
    if m.is_empty() {
        return Vec::new();
    }
    Svd::new(m).s
}

/// Largest singular value.
pub fn operator_norm(m: &ComplexMatrix) -> f64 {
    singular_values(m).into_iter().fold(0.0, f64::max)
}

/// Sum of singular values.
pub fn trace_norm(m: &ComplexMatrix) -> f64 {
    singular_values(m).into_iter().sum()
}

/// Hilbert–Schmidt (Frobenius) norm.
pub fn hs_norm(m: &ComplexMatrix) -> f64 {
    m.norm()
}

/// `trace(x† y)`, conjugate-linear in `x`.
pub fn hs_inner(x: &ComplexMatrix, y: &ComplexMatrix) -> Complex64 {
    x.iter().zip(y.iter()).map(|(a, b)| a.conj() * b).sum()
}

pub fn trace(m: &ComplexMatrix) -> Complex64 {
    m.trace()
}

pub fn hermitian_part(m: &ComplexMatrix) -> ComplexMatrix {
    (m + m.adjoint()) * c(0.5, 0.0)
}

/// `(m − m†)/(2i)`, so that `m = hermitian_part(m) + i·skew_part(m)`.
pub fn skew_part(m: &ComplexMatrix) -> ComplexMatrix {
    (m - m.adjoint()) * c(0.0, -0.5)
}

fn require_square(m: &ComplexMatrix) -> Result<()> {
    if m.nrows() != m.ncols() {
        return Err(Error::Shape(format!("expected a square matrix, got {}x{}", m.nrows(), m.ncols())));
    }
    Ok(())
}

/// Eigen-decomposition of the hermitian part of `m`, eigenvalues ascending.
pub fn hermitian_eigen(m: &ComplexMatrix) -> (Vec<f64>, ComplexMatrix) {
    let n = m.nrows();
    if n == 0 {
        return (Vec::new(), zeros(0, 0));
    }
    let eig = SymmetricEigen::new(hermitian_part(m));
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&a, &b| eig.eigenvalues[a].total_cmp(&eig.eigenvalues[b]));
    let values = order.iter().map(|&i| eig.eigenvalues[i]).collect();
    let vectors = ComplexMatrix::from_fn(n, n, |r, k| eig.eigenvectors[(r, order[k])]);
    (values, vectors)
}

pub fn min_eigenvalue(m: &ComplexMatrix) -> f64 {
    hermitian_eigen(m).0.first().copied().unwrap_or(0.0)
}

/// True iff `m` is hermitian and has no eigenvalue below `−tol·(1+‖m‖)`.
pub fn psd_check(m: &ComplexMatrix, tol: f64) -> Result<bool> {
    require_square(m)?;
    let scale = 1.0 + operator_norm(m);
    if operator_norm(&(m - m.adjoint())) > tol * scale {
        return Ok(false);
    }
    Ok(min_eigenvalue(m) >= -tol * scale)
}

/// Applies `f` to the eigenvalues of the hermitian part of `m`.
pub fn hermitian_function(m: &ComplexMatrix, f: impl Fn(f64) -> f64) -> ComplexMatrix {
    let (values, vectors) = hermitian_eigen(m);
    let d: Vec<Complex64> = values.iter().map(|&x| c(f(x), 0.0)).collect();
    &vectors * diag(&d) * vectors.adjoint()
}

/// Splits a hermitian matrix into `(positive part, negative part)` with `h = p − n`.
pub fn spectral_split(h: &ComplexMatrix) -> (ComplexMatrix, ComplexMatrix) {
    (hermitian_function(h, |x| x.max(0.0)), hermitian_function(h, |x| (-x).max(0.0)))
}

/// Polar decomposition `m = U·P` with `P = (m†m)^{1/2}` and `U` a partial
/// isometry from the range of `P` onto the range of `m`.
pub fn polar_decompose(m: &ComplexMatrix) -> Result<(ComplexMatrix, ComplexMatrix)> {
    require_square(m)?;
    let n = m.nrows();
    if n == 0 {
        return Ok((zeros(0, 0), zeros(0, 0)));
    }
    let svd = Svd::new(m);
    let smax = svd.s.first().copied().unwrap_or(0.0);
    let mut iso = zeros(n, n);
    let mut pos = zeros(n, n);
    for (k, &s) in svd.s.iter().enumerate() {
        let uk = svd.u.column(k);
        let vk = svd.v.column(k);
        pos += &vk * vk.adjoint() * c(s, 0.0);
        if s > RANK_TOL * smax {
            iso += uk * vk.adjoint();
        }
    }
    Ok((iso, pos))
}

/// Unitary factor of the polar decomposition, extended to a full unitary.
pub fn polar_unitary(m: &ComplexMatrix) -> ComplexMatrix {
    let n = m.nrows();
    if n == 0 {
        return zeros(0, 0);
    }
    let svd = Svd::new(m);
    svd.u * svd.v.adjoint()
}

/// Orthonormal basis (as columns) of the column space of `m`.
pub fn column_space(m: &ComplexMatrix) -> ComplexMatrix {
    let (r, cols) = m.shape();
    if r == 0 || cols == 0 {
        return zeros(r, 0);
    }
    let svd = Svd::new(m);
    let smax = svd.s.first().copied().unwrap_or(0.0);
    let keep = svd.s.iter().filter(|&&s| smax > 0.0 && s > RANK_TOL * smax).count();
    svd.u.columns(0, keep).into_owned()
}

pub fn rank(m: &ComplexMatrix) -> usize {
    column_space(m).ncols()
}

/// Orthonormal basis (as columns) of the kernel of `m`, using the global rank
/// policy with `abs_floor` as a lower bound on the zero threshold.
pub fn null_space(m: &ComplexMatrix, abs_floor: f64) -> ComplexMatrix {
    let (r, cols) = m.shape();
    if cols == 0 {
        return zeros(0, 0);
    }
    // pad to at least as many rows as columns so the SVD returns a full V
    let padded = if r < cols {
        let mut p = zeros(cols, cols);
        p.view_mut((0, 0), (r, cols)).copy_from(m);
        p
    } else {
        m.clone()
    };
    let svd = Svd::new(&padded);
    let smax = svd.s.first().copied().unwrap_or(0.0);
    let thresh = (RANK_TOL * smax).max(abs_floor);
    let keep: Vec<usize> = (0..svd.s.len()).filter(|&k| svd.s[k] <= thresh).collect();
    ComplexMatrix::from_fn(cols, keep.len(), |i, j| svd.v[(i, keep[j])])
}

/// Moore–Penrose pseudo-inverse under the global rank policy.
pub fn pinv(m: &ComplexMatrix) -> ComplexMatrix {
    let (r, cols) = m.shape();
    if r == 0 || cols == 0 {
        return zeros(cols, r);
    }
    let svd = Svd::new(m);
    let smax = svd.s.first().copied().unwrap_or(0.0);
    let mut out = zeros(cols, r);
    for (k, &s) in svd.s.iter().enumerate() {
        if s > RANK_TOL * smax {
            out += svd.v.column(k) * svd.u.column(k).adjoint() * c(1.0 / s, 0.0);
        }
    }
    out
}

pub fn kron(a: &ComplexMatrix, b: &ComplexMatrix) -> ComplexMatrix {
    a.kronecker(b)
}

/// Block-diagonal matrix with the given square blocks.
pub fn block_diag(blocks: &[ComplexMatrix]) -> ComplexMatrix {
    let n: usize = blocks.iter().map(|b| b.nrows()).sum();
    let mut out = zeros(n, n);
    let mut off = 0;
    for b in blocks {
        out.view_mut((off, off), b.shape()).copy_from(b);
        off += b.nrows();
    }
    out
}

/// Flattens a matrix to a vector (column-major, matching the HS inner product).
pub fn vectorize(m: &ComplexMatrix) -> ComplexVector {
    ComplexVector::from_column_slice(m.as_slice())
}

pub fn unvectorize(v: &[Complex64], rows: usize, cols: usize) -> ComplexMatrix {
    ComplexMatrix::from_column_slice(rows, cols, v)
}

pub fn random_complex<R: Rng + ?Sized>(rng: &mut R) -> Complex64 {
    let re: f64 = rng.sample(StandardNormal);
    let im: f64 = rng.sample(StandardNormal);
    c(re, im) * std::f64::consts::FRAC_1_SQRT_2
}

/// Matrix with independent standard complex Gaussian entries.
pub fn random_matrix<R: Rng + ?Sized>(rows: usize, cols: usize, rng: &mut R) -> ComplexMatrix {
    ComplexMatrix::from_fn(rows, cols, |_, _| random_complex(rng))
}

pub fn random_vector<R: Rng + ?Sized>(n: usize, rng: &mut R) -> ComplexVector {
    ComplexVector::from_fn(n, |_, _| random_complex(rng))
}

pub fn random_hermitian<R: Rng + ?Sized>(n: usize, rng: &mut R) -> ComplexMatrix {
    hermitian_part(&random_matrix(n, n, rng))
}

pub fn random_unitary<R: Rng + ?Sized>(n: usize, rng: &mut R) -> ComplexMatrix {
    polar_unitary(&random_matrix(n, n, rng))
}

/// Largest singular value via power iteration on `m†m`; used as an
/// independent reference for `operator_norm`.
pub fn power_iteration_norm<R: Rng + ?Sized>(m: &ComplexMatrix, iters: usize, rng: &mut R) -> f64 {
    let g = m.adjoint() * m;
    let mut v = random_vector(m.ncols(), rng);
    let mut value = 0.0;
    for _ in 0..iters {
        let w = &g * &v;
        let nw = w.norm();
        if nw == 0.0 {
            return 0.0;
        }
        value = nw / v.norm();
        v = w / c(nw, 0.0);
    }
    value.sqrt()
}

/// Maximum absolute entry difference.
pub fn max_abs_diff(a: &ComplexMatrix, b: &ComplexMatrix) -> f64 {
    a.iter().zip(b.iter()).map(|(x, y)| (x - y).norm()).fold(0.0, f64::max)
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn rng() -> ChaCha8Rng {
        ChaCha8Rng::seed_from_u64(7)
    }

    #[test]
    fn norms_of_small_matrices() {
        assert!((operator_norm(&identity(3)) - 1.0).abs() < 1e-14);
        let m = from_real(2, 2, &[0.0, 2.0, 0.0, 0.0]);
        assert!((operator_norm(&m) - 2.0).abs() < 1e-14);
        assert!((trace_norm(&identity(3)) - 3.0).abs() < 1e-14);
        let mut r = rng();
        let u = random_vector(4, &mut r).normalize();
        let v = random_vector(4, &mut r).normalize();
        assert!((trace_norm(&(&u * v.adjoint())) - 1.0).abs() < 1e-12);
    }

    #[test]
    fn operator_norm_matches_power_iteration() {
        let mut r = rng();
        let m = random_matrix(6, 6, &mut r);
        let reference = power_iteration_norm(&m, 2000, &mut r);
        assert!((operator_norm(&m) - reference).abs() < 1e-8);
    }

    #[test]
    fn trace_norm_is_attained_at_polar_unitary() {
        let mut r = rng();
        let m = random_matrix(5, 5, &mut r);
        let tn = trace_norm(&m);
        for _ in 0..200 {
            let u = random_unitary(5, &mut r);
            assert!(trace(&(u.adjoint() * &m)).norm() <= tn + 1e-10);
        }
        let w = polar_unitary(&m);
        assert!((trace(&(w.adjoint() * &m)).norm() - tn).abs() < 1e-10);
    }

    #[test]
    fn psd() {
        assert!(psd_check(&identity(3), 1e-9).unwrap());
        assert!(!psd_check(&from_real(2, 2, &[1.0, 2.0, 2.0, 1.0]), 1e-9).unwrap());
        let x = random_matrix(4, 3, &mut rng());
        assert!(psd_check(&(x.adjoint() * &x), 1e-9).unwrap());
        assert!(psd_check(&zeros(2, 3), 1e-9).is_err());
    }

    #[test]
    fn polar_examples() {
        let m = from_real(2, 2, &[0.0, 2.0, 0.0, 0.0]);
        let (u, p) = polar_decompose(&m).unwrap();
        assert!(max_abs_diff(&p, &from_real(2, 2, &[0.0, 0.0, 0.0, 2.0])) < 1e-12);
        assert!(max_abs_diff(&u, &from_real(2, 2, &[0.0, 1.0, 0.0, 0.0])) < 1e-12);
        let pos = from_real(2, 2, &[2.0, 1.0, 1.0, 2.0]);
        let (u, _) = polar_decompose(&pos).unwrap();
        assert!(max_abs_diff(&u, &identity(2)) < 1e-12);
        let w = random_unitary(3, &mut rng());
        let (_, p) = polar_decompose(&w).unwrap();
        assert!(max_abs_diff(&p, &identity(3)) < 1e-12);
    }

    #[test]
    fn null_space_of_wide_matrix() {
        let m = from_real(1, 3, &[1.0, 1.0, 0.0]);
        let k = null_space(&m, 0.0);
        assert_eq!(k.ncols(), 2);
        assert!((&m * &k).norm() < 1e-14);
    }
}
