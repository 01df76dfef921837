use super::*;
use crate::bundle::trivial_bundle;
use crate::families::family;
use crate::group::cyclic;
use crate::linalg::{from_real, identity, power_iteration_norm};

fn swap() -> ComplexMatrix {
    from_real(2, 2, &[0.0, 1.0, 1.0, 0.0])
}

#[test]
fn universal_norm_of_point_masses_on_z2() {
    // C*(ℤ₂) ≅ ℂ²: δ_e ± δ_1 has Fourier transform (1 ± 1, 1 ∓ 1)
    let b = Arc::new(trivial_bundle(&cyclic(2).unwrap()));
    let plus = Section::new(&b, vec![identity(2), swap()]).unwrap();
    let minus = Section::new(&b, vec![identity(2), -swap()]).unwrap();
    assert!((universal_norm(&plus).unwrap() - 2.0).abs() < 1e-12);
    assert!((universal_norm(&minus).unwrap() - 2.0).abs() < 1e-12);
    let e = Section::j_embed(&b, 0, &identity(2)).unwrap();
    assert!((universal_norm(&e).unwrap() - 1.0).abs() < 1e-12);
}

#[test]
fn localized_dimension_matches_the_fibers() {
    // B_e of the trivial bundle is one-dimensional, so ℓ²(B) ⊗ H₀ ≅ ℂ^|G|
    let b = trivial_bundle(&cyclic(4).unwrap());
    let rep = RegularRep::new(&b).unwrap();
    assert_eq!(rep.local_dim(), 1);
    assert_eq!(rep.dim(), 4);
}

#[test]
fn regular_norm_agrees_with_power_iteration() {
    let f = family("dynamical-m2-inner-z2").unwrap();
    let mut rng = crate::seeded_rng(9);
    for _ in 0..10 {
        let s = Section::random(&f.bundle, &mut rng);
        let m = regular_rep_matrix(&s).unwrap();
        let reference = power_iteration_norm(&m, 2000, &mut rng);
        assert!((universal_norm(&s).unwrap() - reference).abs() < 1e-6 * (1.0 + reference));
    }
}

#[test]
fn presentation_inverts_lambda() {
    let f = family("graded-m3-z3").unwrap();
    let p = f.bundle.presentation().unwrap();
    let mut rng = crate::seeded_rng(4);
    let s = Section::random(&f.bundle, &mut rng);
    let back = p.section_of(&f.bundle, &p.rep().matrix(&s).unwrap()).unwrap();
    assert!(back.max_diff(&s) < 1e-10);
}

#[test]
fn block_data_of_the_spectral_bundle() {
    // M₂ ⊕ M₂ with an inner ℤ₂ action: C* of the spectral bundle is (M₂ ⊕ M₂)
    let f = family("spectral-m2m2-z2").unwrap();
    let mut sizes = f.bundle.presentation().unwrap().blocks().sizes();
    sizes.sort_unstable();
    assert_eq!(sizes, vec![2, 2]);
}

#[test]
fn foreign_sections_are_rejected() {
    let a = trivial_bundle(&cyclic(2).unwrap());
    let b = Arc::new(trivial_bundle(&cyclic(2).unwrap()));
    let rep = RegularRep::new(&a).unwrap();
    assert!(matches!(rep.matrix(&Section::zero(&b)), Err(Error::BundleMismatch)));
}
