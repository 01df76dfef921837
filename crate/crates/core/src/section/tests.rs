use super::*;
use crate::bundle::trivial_bundle;
use crate::group::{cyclic, symmetric};
use crate::linalg::{identity, max_abs_diff};

fn z2() -> Arc<FellBundle> {
    Arc::new(trivial_bundle(&cyclic(2).unwrap()))
}

fn swap() -> ComplexMatrix {
    crate::linalg::from_real(2, 2, &[0.0, 1.0, 1.0, 0.0])
}

#[test]
fn values_outside_the_fiber_are_rejected() {
    let b = z2();
    let bad = crate::linalg::unit(2, 0, 0);
    assert!(matches!(Section::j_embed(&b, 0, &bad), Err(Error::Membership { fiber: 0, .. })));
    assert!(matches!(Section::j_embed(&b, 2, &identity(2)), Err(Error::InvalidParameter(_))));
}

#[test]
fn convolution_of_point_masses_follows_the_group_law() {
    let b = z2();
    let f = Section::j_embed(&b, 1, &swap()).unwrap();
    let ff = f.convolve(&f).unwrap();
    assert!(max_abs_diff(ff.value(0), &identity(2)) < 1e-15);
    assert!(ff.value(1).norm() < 1e-15);
}

#[test]
fn involution_reverses_convolution() {
    let b = Arc::new(trivial_bundle(&symmetric(3).unwrap()));
    let mut rng = crate::seeded_rng(5);
    let f = Section::random(&b, &mut rng);
    let g = Section::random(&b, &mut rng);
    let lhs = f.convolve(&g).unwrap().involute();
    let rhs = g.involute().convolve(&f.involute()).unwrap();
    assert!(lhs.max_diff(&rhs) < 1e-12);
    assert!(f.involute().involute().max_diff(&f) < 1e-15);
}

#[test]
fn norms_of_the_sum_of_point_masses() {
    // δ_e + δ_1 on ℤ₂: ‖·‖₁ = 2 and ⟨y,y⟩ = 2·1
    let b = z2();
    let f = Section::new(&b, vec![identity(2), swap()]).unwrap();
    assert!((f.l1_norm() - 2.0).abs() < 1e-14);
    assert!((f.l2_norm() - 2f64.sqrt()).abs() < 1e-14);
    assert!((f.hs_norm() - 2.0).abs() < 1e-14);
}

#[test]
fn coordinates_round_trip() {
    let b = Arc::new(trivial_bundle(&cyclic(3).unwrap()));
    let mut rng = crate::seeded_rng(1);
    let f = Section::random(&b, &mut rng);
    let back = Section::from_flat_coordinates(&b, &f.flat_coordinates()).unwrap();
    assert!(back.max_diff(&f) < 1e-14);
}

#[test]
fn mixing_bundles_is_an_error() {
    let (a, b) = (z2(), z2());
    assert!(matches!(Section::zero(&a).convolve(&Section::zero(&b)), Err(Error::BundleMismatch)));
}
