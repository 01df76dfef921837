//! The catalogue of small bundles used by the test suite and the CLI.

use num_complex::Complex64;
use std::sync::Arc;

use crate::bundle::{
    dynamical_bundle, full_matrix_algebra, graded_bundle, grading_from_labels, spectral_bundle, trivial_bundle,
    DynamicalSystem, FellBundle,
};
use crate::error::{Error, Result};
use crate::functional::HopfFiberDelta;
use crate::group::{cyclic, dihedral, direct_product, symmetric, FiniteGroup};
use crate::linalg::{block_diag, diag, from_real, unit, ComplexMatrix, MatrixSubspace};

#[derive(Debug, Clone, Copy, PartialEq, Eq, serde::Serialize)]
#[serde(rename_all = "lowercase")]
pub enum FamilyKind {
    Trivial,
    Dynamical,
    Graded,
    Spectral,
}

#[derive(Debug, Clone)]
pub struct Family {
    pub name: &'static str,
    pub kind: FamilyKind,
    pub bundle: Arc<FellBundle>,
}

pub const FAMILY_NAMES: &[&str] = &[
    "trivial-z2",
    "trivial-z4",
    "trivial-klein",
    "trivial-s3",
    "trivial-d4",
    "dynamical-diag-m2-z2",
    "dynamical-m2-inner-z2",
    "dynamical-group-algebra-z3-z2",
    "graded-m2-z2",
    "graded-m3-z3",
    "spectral-m2-z2",
    "spectral-m2m2-z2",
];

pub fn klein() -> FiniteGroup {
    let z2 = cyclic(2).expect("order 2 is valid");
    direct_product(&z2, &z2)
}

fn c(re: f64) -> Complex64 {
    Complex64::new(re, 0.0)
}

/// `diag(M₂) ≅ ℂ²` with `ℤ₂` swapping the coordinates.
pub fn diag_swap_system() -> Result<DynamicalSystem> {
    let algebra = MatrixSubspace::from_spanning(2, &[unit(2, 0, 0), unit(2, 1, 1)])?;
    let swap = from_real(2, 2, &[0.0, 1.0, 1.0, 0.0]);
    DynamicalSystem::spatial(algebra, cyclic(2)?, &[crate::linalg::identity(2), swap])
}

/// `M₂` with `ℤ₂` acting by `Ad diag(1, −1)`.
pub fn m2_inner_system() -> Result<DynamicalSystem> {
    let d = diag(&[c(1.0), c(-1.0)]);
    DynamicalSystem::spatial(full_matrix_algebra(2), cyclic(2)?, &[crate::linalg::identity(2), d])
}

/// `M₂ ⊕ M₂` with `ℤ₂` acting by `Ad(diag(1, −1) ⊕ diag(1, −1))`.
pub fn m2m2_inner_system() -> Result<DynamicalSystem> {
    let mut basis = Vec::new();
    for k in 0..2 {
        for i in 0..2 {
            for j in 0..2 {
                basis.push(unit(4, 2 * k + i, 2 * k + j));
            }
        }
    }
    let algebra = MatrixSubspace::from_spanning(4, &basis)?;
    let d = diag(&[c(1.0), c(-1.0)]);
    let v: ComplexMatrix = block_diag(&[d.clone(), d]);
    DynamicalSystem::spatial(algebra, cyclic(2)?, &[crate::linalg::identity(4), v])
}

/// `ℂ[ℤ₃]` with `ℤ₂` acting by inversion on `ℤ₃`.
pub fn group_algebra_system() -> Result<(DynamicalSystem, FiniteGroup)> {
    let h = cyclic(3)?;
    let action = vec![vec![0, 1, 2], vec![0, 2, 1]];
    Ok((HopfFiberDelta::group_algebra_system(&h, &cyclic(2)?, &action)?, h))
}

/// The systems used for the duality instances: `ℂ` with trivial `ℤ₂`,
/// `ℂ²` with the swap, and `M₂` with trivial `ℤ₂`.
pub fn takai_systems() -> Result<Vec<(&'static str, DynamicalSystem)>> {
    let z2 = cyclic(2)?;
    let scalars = MatrixSubspace::from_orthonormal(1, vec![crate::linalg::identity(1)]);
    Ok(vec![
        ("c-trivial-z2", DynamicalSystem::trivial(scalars, z2.clone())?),
        ("c2-swap-z2", diag_swap_system()?),
        ("m2-trivial-z2", DynamicalSystem::trivial(full_matrix_algebra(2), z2)?),
    ])
}

pub fn family(name: &str) -> Result<Family> {
    let (kind, bundle) = match name {
        "trivial-z2" => (FamilyKind::Trivial, trivial_bundle(&cyclic(2)?)),
        "trivial-z4" => (FamilyKind::Trivial, trivial_bundle(&cyclic(4)?)),
        "trivial-klein" => (FamilyKind::Trivial, trivial_bundle(&klein())),
        "trivial-s3" => (FamilyKind::Trivial, trivial_bundle(&symmetric(3)?)),
        "trivial-d4" => (FamilyKind::Trivial, trivial_bundle(&dihedral(4)?)),
        "dynamical-diag-m2-z2" => (FamilyKind::Dynamical, dynamical_bundle(&diag_swap_system()?)?),
        "dynamical-m2-inner-z2" => (FamilyKind::Dynamical, dynamical_bundle(&m2_inner_system()?)?),
        "dynamical-group-algebra-z3-z2" => (FamilyKind::Dynamical, dynamical_bundle(&group_algebra_system()?.0)?),
        "graded-m2-z2" => {
            let g = cyclic(2)?;
            (FamilyKind::Graded, graded_bundle(&full_matrix_algebra(2), &g, &grading_from_labels(&g, &[0, 1]))?)
        }
        "graded-m3-z3" => {
            let g = cyclic(3)?;
            (FamilyKind::Graded, graded_bundle(&full_matrix_algebra(3), &g, &grading_from_labels(&g, &[0, 1, 2]))?)
        }
        "spectral-m2-z2" => (FamilyKind::Spectral, spectral_bundle(&m2_inner_system()?)?.0),
        "spectral-m2m2-z2" => (FamilyKind::Spectral, spectral_bundle(&m2m2_inner_system()?)?.0),
        other => return Err(Error::InvalidParameter(format!("unknown bundle family `{other}`"))),
    };
    Ok(Family {
        name: FAMILY_NAMES.iter().find(|n| **n == name).copied().unwrap_or("custom"),
        kind,
        bundle: Arc::new(bundle),
    })
}

pub fn catalogue() -> Result<Vec<Family>> {
    FAMILY_NAMES.iter().map(|n| family(n)).collect()
}

/// The crossed-product families.
pub fn dynamical_families() -> Result<Vec<Family>> {
    Ok(catalogue()?.into_iter().filter(|f| matches!(f.kind, FamilyKind::Trivial | FamilyKind::Dynamical)).collect())
}
