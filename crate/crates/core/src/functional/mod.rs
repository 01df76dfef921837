//! The Fourier–Stieltjes space `B(B)`: functionals on `C*(B)` stored fiberwise
//! under the trace pairing `φ_s(b) = tr(F_s† b)`.

mod decompose;
mod dual_check;
mod gns;
mod product;
mod representation;

pub use decompose::{jordan_decompose, polar_factorization, random_factorization, Factorization};
pub use dual_check::{dual_iso_check, dual_probe, DualIsoReport, DualProbe};
pub use gns::{check_eta_norm, gns, GnsData};
pub use product::{
    bg_module_action, coassociativity_residual, multiply, unit_like, unit_values, Comultiplication, HopfFiberDelta,
    UnitalDynamicalDelta,
};
pub use representation::{from_representation, BundleRep};

use num_complex::Complex64;
use rand::Rng;
use serde::Serialize;
use std::sync::Arc;

use crate::bundle::FellBundle;
use crate::error::{Error, Result};
use crate::linalg::{hermitian_eigen, hs_inner, operator_norm, random_complex, trace_norm, zeros, ComplexMatrix};
use crate::section::Section;

/// Default tolerance of the positivity test.
pub const POSITIVITY_TOL: f64 = 1e-9;

#[derive(Debug, Clone)]
pub struct Functional {
    bundle: Arc<FellBundle>,
    components: Vec<ComplexMatrix>,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
#[serde(tag = "status", content = "min_eigenvalue", rename_all = "snake_case")]
pub enum Positivity {
    Positive(f64),
    NotPositive(f64),
    Indeterminate(f64),
}

impl Functional {
    /// Projects each component onto its fiber, which makes the representing
    /// matrices unique.
    pub fn new(bundle: &Arc<FellBundle>, components: Vec<ComplexMatrix>) -> Result<Self> {
        if components.len() != bundle.order() {
            return Err(Error::Dimension(format!("{} components for {} fibers", components.len(), bundle.order())));
        }
        let n = bundle.ambient_dim();
        let mut projected = Vec::with_capacity(components.len());
        for (s, f) in components.iter().enumerate() {
            if f.shape() != (n, n) {
                return Err(Error::Shape(format!("component {s} is {}x{}, expected {n}x{n}", f.nrows(), f.ncols())));
            }
            projected.push(bundle.fiber(s).project(f));
        }
        Ok(Self { bundle: bundle.clone(), components: projected })
    }

    pub fn zero(bundle: &Arc<FellBundle>) -> Self {
        let n = bundle.ambient_dim();
        Self { bundle: bundle.clone(), components: vec![zeros(n, n); bundle.order()] }
    }

    /// From the values `φ_s(e_{s,i})` on each fiber basis.
    pub fn from_basis_values(bundle: &Arc<FellBundle>, values: &[Vec<Complex64>]) -> Result<Self> {
        if values.len() != bundle.order() {
            return Err(Error::Dimension("one value list per fiber expected".into()));
        }
        let mut components = Vec::with_capacity(values.len());
        for (s, v) in values.iter().enumerate() {
            let fiber = bundle.fiber(s);
            if v.len() != fiber.dim() {
                return Err(Error::Dimension(format!("fiber {s} has dimension {}", fiber.dim())));
            }
            let conj: Vec<Complex64> = v.iter().map(|z| z.conj()).collect();
            components.push(fiber.from_coordinates(&conj));
        }
        Ok(Self { bundle: bundle.clone(), components })
    }

    pub fn from_flat_values(bundle: &Arc<FellBundle>, flat: &[Complex64]) -> Result<Self> {
        if flat.len() != bundle.total_dim() {
            return Err(Error::Dimension(format!("{} values for total dimension {}", flat.len(), bundle.total_dim())));
        }
        let mut off = 0;
        let mut values = Vec::new();
        for f in bundle.fibers() {
            values.push(flat[off..off + f.dim()].to_vec());
            off += f.dim();
        }
        Self::from_basis_values(bundle, &values)
    }

    /// Functional with the given block matrices on `C*(B)`.
    pub fn from_blocks(bundle: &Arc<FellBundle>, blocks: &[ComplexMatrix]) -> Result<Self> {
        let p = bundle.presentation()?;
        Self::from_flat_values(bundle, &p.values_from_blocks(blocks))
    }

    /// Independent standard complex Gaussian values on every fiber basis element.
    pub fn random<R: Rng + ?Sized>(bundle: &Arc<FellBundle>, rng: &mut R) -> Self {
        let values: Vec<Vec<Complex64>> =
            bundle.fibers().iter().map(|f| (0..f.dim()).map(|_| random_complex(rng)).collect()).collect();
        Self::from_basis_values(bundle, &values).expect("dimensions match")
    }

    pub fn bundle(&self) -> &Arc<FellBundle> {
        &self.bundle
    }

    pub fn components(&self) -> &[ComplexMatrix] {
        &self.components
    }

    pub fn component(&self, s: usize) -> &ComplexMatrix {
        &self.components[s]
    }

    /// `φ_s(b) = tr(F_s† b)`.
    pub fn eval(&self, s: usize, b: &ComplexMatrix) -> Complex64 {
        hs_inner(&self.components[s], b)
    }

    pub fn basis_values(&self) -> Vec<Vec<Complex64>> {
        self.bundle
            .fibers()
            .iter()
            .enumerate()
            .map(|(s, f)| f.basis().iter().map(|e| self.eval(s, e)).collect())
            .collect()
    }

    pub fn flat_values(&self) -> Vec<Complex64> {
        self.basis_values().into_iter().flatten().collect()
    }

    fn same_bundle(&self, bundle: &FellBundle) -> Result<()> {
        if self.bundle.id() != bundle.id() {
            return Err(Error::BundleMismatch);
        }
        Ok(())
    }

    /// `Σ_s tr(F_s† f_s)`.
    pub fn pair(&self, f: &Section) -> Result<Complex64> {
        self.same_bundle(f.bundle())?;
        Ok(self.components.iter().zip(f.values()).map(|(a, b)| hs_inner(a, b)).sum())
    }

    pub fn add(&self, other: &Functional) -> Result<Functional> {
        self.same_bundle(&other.bundle)?;
        let components = self.components.iter().zip(&other.components).map(|(a, b)| a + b).collect();
        Ok(Self { bundle: self.bundle.clone(), components })
    }

    pub fn sub(&self, other: &Functional) -> Result<Functional> {
        self.add(&other.scale(Complex64::new(-1.0, 0.0)))
    }

    /// `(kφ)_s = kφ_s`; the representing matrices scale by `conj(k)`.
    pub fn scale(&self, k: Complex64) -> Functional {
        let components = self.components.iter().map(|f| f * k.conj()).collect();
        Self { bundle: self.bundle.clone(), components }
    }

    pub fn max_diff(&self, other: &Functional) -> f64 {
        self.components
            .iter()
            .zip(&other.components)
            .map(|(a, b)| crate::linalg::max_abs_diff(a, b))
            .fold(0.0, f64::max)
    }

    /// Block matrices `D_k` on `C*(B)` with `φ(x) = Σ_k tr(D_k† x_k)`.
    pub fn blocks(&self) -> Result<Vec<ComplexMatrix>> {
        let p = self.bundle.presentation()?;
        Ok(p.functional_blocks(&self.flat_values()))
    }

    /// The dual norm on `C*(B)`: the sum of the trace norms of the blocks.
    pub fn bnorm(&self) -> Result<f64> {
        Ok(self.blocks()?.iter().map(trace_norm).sum())
    }

    /// `M_{(s,i),(t,j)} = φ_{s⁻¹t}(e_{s,i}† e_{t,j})`, i.e. `φ(x_a* ⋆ x_b)` over
    /// single-fiber basis sections.
    pub fn gram_matrix(&self) -> ComplexMatrix {
        let b = &self.bundle;
        let g = b.group();
        let index: Vec<(usize, &ComplexMatrix)> =
            g.elements().flat_map(|s| b.fiber(s).basis().iter().map(move |e| (s, e))).collect();
        let d = index.len();
        ComplexMatrix::from_fn(d, d, |a, c| {
            let (s, x) = index[a];
            let (t, y) = index[c];
            self.eval(g.mul(g.inv(s), t), &(x.adjoint() * y))
        })
    }

    /// Positivity of the Gram matrix at the given tolerance; minimum
    /// eigenvalues within ten times the tolerance of the cutoff are reported
    /// as indeterminate.
    pub fn positivity(&self, tol: f64) -> Positivity {
        let m = self.gram_matrix();
        if m.nrows() == 0 {
            return Positivity::Positive(0.0);
        }
        let scale = 1.0 + operator_norm(&m);
        let herm_defect = operator_norm(&(&m - m.adjoint()));
        let min = hermitian_eigen(&m).0[0];
        if herm_defect > 10.0 * tol * scale || min < -10.0 * tol * scale {
            Positivity::NotPositive(min)
        } else if herm_defect > tol * scale || min < -tol * scale {
            Positivity::Indeterminate(min)
        } else {
            Positivity::Positive(min)
        }
    }

    pub fn is_positive_definite(&self) -> bool {
        matches!(self.positivity(POSITIVITY_TOL), Positivity::Positive(_))
    }
}

#[cfg(test)]
mod tests;
