//! Sections of a bundle: the convolution *-algebra `c_c(B)`, which for a
//! finite group is also `ℓ¹(B)` and the Hilbert `B_e`-module `ℓ²(B)`.

use num_complex::Complex64;
use rand::Rng;
use std::sync::Arc;

use crate::bundle::{FellBundle, AXIOM_TOL};
use crate::error::{Error, Result};
use crate::linalg::{operator_norm, random_complex, zeros, ComplexMatrix, ComplexVector};

#[derive(Debug, Clone)]
pub struct Section {
    bundle: Arc<FellBundle>,
    values: Vec<ComplexMatrix>,
}

impl Section {
    /// Checks every value against its fiber (residual ≤ 1e−9·(1+‖v‖)) and
    /// stores the projections.
    pub fn new(bundle: &Arc<FellBundle>, values: Vec<ComplexMatrix>) -> Result<Self> {
        if values.len() != bundle.order() {
            return Err(Error::Dimension(format!("{} values for {} fibers", values.len(), bundle.order())));
        }
        let n = bundle.ambient_dim();
        let mut projected = Vec::with_capacity(values.len());
        for (s, v) in values.iter().enumerate() {
            if v.shape() != (n, n) {
                return Err(Error::Shape(format!("value at {s} is {}x{}, expected {n}x{n}", v.nrows(), v.ncols())));
            }
            let p = bundle.fiber(s).project(v);
            let residual = (v - &p).norm();
            if residual > AXIOM_TOL * (1.0 + v.norm()) {
                return Err(Error::Membership { fiber: s, residual });
            }
            projected.push(p);
        }
        Ok(Self { bundle: bundle.clone(), values: projected })
    }

    pub(crate) fn unchecked(bundle: &Arc<FellBundle>, values: Vec<ComplexMatrix>) -> Self {
        Self { bundle: bundle.clone(), values }
    }

    pub fn zero(bundle: &Arc<FellBundle>) -> Self {
        let n = bundle.ambient_dim();
        Self::unchecked(bundle, vec![zeros(n, n); bundle.order()])
    }

    /// `j_s(m)`: the section supported at `s` with value `m`.
    pub fn j_embed(bundle: &Arc<FellBundle>, s: usize, m: &ComplexMatrix) -> Result<Self> {
        if s >= bundle.order() {
            return Err(Error::InvalidParameter(format!("element {s} out of range")));
        }
        let n = bundle.ambient_dim();
        let mut values = vec![zeros(n, n); bundle.order()];
        values[s] = m.clone();
        Self::new(bundle, values)
    }

    /// From HS coordinates on each fiber basis.
    pub fn from_coordinates(bundle: &Arc<FellBundle>, coords: &[Vec<Complex64>]) -> Result<Self> {
        if coords.len() != bundle.order() {
            return Err(Error::Dimension("one coordinate list per fiber expected".into()));
        }
        let mut values = Vec::with_capacity(coords.len());
        for (s, c) in coords.iter().enumerate() {
            if c.len() != bundle.fiber(s).dim() {
                return Err(Error::Dimension(format!("fiber {s} has dimension {}", bundle.fiber(s).dim())));
            }
            values.push(bundle.fiber(s).from_coordinates(c));
        }
        Ok(Self::unchecked(bundle, values))
    }

    /// Coordinates concatenated over fibers in group order.
    pub fn flat_coordinates(&self) -> Vec<Complex64> {
        self.values
            .iter()
            .enumerate()
            .flat_map(|(s, v)| self.bundle.fiber(s).coordinates(v).iter().copied().collect::<Vec<_>>())
            .collect()
    }

    pub fn from_flat_coordinates(bundle: &Arc<FellBundle>, flat: &[Complex64]) -> Result<Self> {
        if flat.len() != bundle.total_dim() {
            return Err(Error::Dimension(format!(
                "{} coordinates for total dimension {}",
                flat.len(),
                bundle.total_dim()
            )));
        }
        let mut off = 0;
        let mut coords = Vec::new();
        for f in bundle.fibers() {
            coords.push(flat[off..off + f.dim()].to_vec());
            off += f.dim();
        }
        Self::from_coordinates(bundle, &coords)
    }

    /// Independent standard complex Gaussian coordinates on every fiber.
    pub fn random<R: Rng + ?Sized>(bundle: &Arc<FellBundle>, rng: &mut R) -> Self {
        let coords: Vec<Vec<Complex64>> =
            bundle.fibers().iter().map(|f| (0..f.dim()).map(|_| random_complex(rng)).collect()).collect();
        Self::from_coordinates(bundle, &coords).expect("dimensions match")
    }

    /// Random section supported in `support`.
    pub fn random_supported<R: Rng + ?Sized>(bundle: &Arc<FellBundle>, support: &[usize], rng: &mut R) -> Self {
        let mut y = Self::random(bundle, rng);
        for s in bundle.group().elements() {
            if !support.contains(&s) {
                y.values[s].fill(Complex64::new(0.0, 0.0));
            }
        }
        y
    }

    /// `1_C`: the section `t ↦ (t, 1)` on `C`, zero elsewhere (crossed-product bundles only).
    pub fn indicator(bundle: &Arc<FellBundle>, set: &[usize]) -> Result<Self> {
        let dyn_ = bundle
            .dynamics()
            .ok_or_else(|| Error::WrongFamily("indicator sections need a crossed-product bundle".into()))?;
        let mut y = Self::zero(bundle);
        for &t in set {
            if t >= bundle.order() {
                return Err(Error::InvalidParameter(format!("element {t} out of range")));
            }
            y.values[t] = dyn_.unitary(t).clone();
        }
        Ok(y)
    }

    pub fn bundle(&self) -> &Arc<FellBundle> {
        &self.bundle
    }

    pub fn value(&self, s: usize) -> &ComplexMatrix {
        &self.values[s]
    }

    pub fn values(&self) -> &[ComplexMatrix] {
        &self.values
    }

    pub fn support(&self, tol: f64) -> Vec<usize> {
        (0..self.values.len()).filter(|&s| self.values[s].norm() > tol).collect()
    }

    fn same_bundle(&self, other: &Section) -> Result<()> {
        if self.bundle.id() != other.bundle.id() {
            return Err(Error::BundleMismatch);
        }
        Ok(())
    }

    /// `(y⋆z)_s = Σ_t y_t z_{t⁻¹s}`.
    pub fn convolve(&self, other: &Section) -> Result<Section> {
        self.same_bundle(other)?;
        let g = self.bundle.group();
        let n = self.bundle.ambient_dim();
        let mut values = vec![zeros(n, n); g.order()];
        for t in g.elements() {
            for r in g.elements() {
                values[g.mul(t, r)] += &self.values[t] * &other.values[r];
            }
        }
        Ok(Self::unchecked(&self.bundle, values))
    }

    /// `y*_s = (y_{s⁻¹})†`.
    pub fn involute(&self) -> Section {
        let g = self.bundle.group();
        let values = g.elements().map(|s| self.values[g.inv(s)].adjoint()).collect();
        Self::unchecked(&self.bundle, values)
    }

    pub fn add(&self, other: &Section) -> Result<Section> {
        self.same_bundle(other)?;
        let values = self.values.iter().zip(&other.values).map(|(a, b)| a + b).collect();
        Ok(Self::unchecked(&self.bundle, values))
    }

    pub fn sub(&self, other: &Section) -> Result<Section> {
        self.same_bundle(other)?;
        let values = self.values.iter().zip(&other.values).map(|(a, b)| a - b).collect();
        Ok(Self::unchecked(&self.bundle, values))
    }

    pub fn scale(&self, k: Complex64) -> Section {
        Self::unchecked(&self.bundle, self.values.iter().map(|v| v * k).collect())
    }

    /// Right module action `(y·a)_s = y_s a` for `a ∈ B_e`.
    pub fn right_mul(&self, a: &ComplexMatrix) -> Result<Section> {
        let res = self.bundle.fiber(0).residual(a);
        if res > AXIOM_TOL * (1.0 + a.norm()) {
            return Err(Error::Membership { fiber: 0, residual: res });
        }
        Ok(Self::unchecked(&self.bundle, self.values.iter().map(|v| v * a).collect()))
    }

    /// Left action `(a·y)_s = a y_s` for `a ∈ B_e` (this is `λ_e(a)`).
    pub fn left_mul(&self, a: &ComplexMatrix) -> Result<Section> {
        let res = self.bundle.fiber(0).residual(a);
        if res > AXIOM_TOL * (1.0 + a.norm()) {
            return Err(Error::Membership { fiber: 0, residual: res });
        }
        Ok(Self::unchecked(&self.bundle, self.values.iter().map(|v| a * v).collect()))
    }

    /// `‖f‖₁ = Σ_s ‖f_s‖`.
    pub fn l1_norm(&self) -> f64 {
        self.values.iter().map(operator_norm).sum()
    }

    /// `‖y‖₂ = ‖⟨y,y⟩‖^{1/2}`.
    pub fn l2_norm(&self) -> f64 {
        let ip = self.module_inner_product(self).expect("same bundle");
        operator_norm(&ip).sqrt()
    }

    /// `⟨y,z⟩ = Σ_s y_s† z_s ∈ B_e`, conjugate-linear in `y`.
    pub fn module_inner_product(&self, other: &Section) -> Result<ComplexMatrix> {
        self.same_bundle(other)?;
        let n = self.bundle.ambient_dim();
        let mut out = zeros(n, n);
        for (y, z) in self.values.iter().zip(&other.values) {
            out += y.adjoint() * z;
        }
        Ok(out)
    }

    /// Flat Hilbert–Schmidt norm `(Σ_s ‖y_s‖²_HS)^{1/2}`.
    pub fn hs_norm(&self) -> f64 {
        self.values.iter().map(|v| v.norm_squared()).sum::<f64>().sqrt()
    }

    /// Largest entry difference against another section.
    pub fn max_diff(&self, other: &Section) -> f64 {
        self.values.iter().zip(&other.values).map(|(a, b)| crate::linalg::max_abs_diff(a, b)).fold(0.0, f64::max)
    }

    pub fn flat_vector(&self) -> ComplexVector {
        ComplexVector::from_vec(self.flat_coordinates())
    }
}

#[cfg(test)]
mod tests;
