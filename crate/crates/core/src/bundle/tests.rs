use super::*;
use crate::families::{self, takai_systems};
use crate::group::{cyclic, symmetric};
use crate::linalg::{identity, zeros};

#[test]
fn trivial_bundles_have_line_fibers() {
    let b = trivial_bundle(&symmetric(3).unwrap());
    assert_eq!(b.fiber_dims(), vec![1; 6]);
    assert!(verify_bundle_axioms(&b).passed());
    assert!(is_saturated(&b));
}

#[test]
fn catalogue_passes_the_axioms() {
    for f in families::catalogue().unwrap() {
        let r = verify_bundle_axioms(&f.bundle);
        assert!(r.passed(), "{}: {:?}", f.name, r.failed());
    }
}

#[test]
fn a_stray_matrix_breaks_the_grading() {
    // ℤ₂-graded diag(M₂) with E₁₂ put in the odd fiber but E₂₁ missing
    let g = cyclic(2).unwrap();
    let spans = vec![vec![unit(2, 0, 0), unit(2, 1, 1)], vec![unit(2, 0, 1)]];
    let b = FellBundle::from_spanning(g, 2, &spans).unwrap();
    let r = verify_bundle_axioms(&b);
    assert_eq!(r.failed(), vec!["involution"]);
}

#[test]
fn zero_odd_fiber_is_not_saturated() {
    let g = cyclic(2).unwrap();
    let spans = vec![vec![identity(2)], vec![]];
    let b = FellBundle::from_spanning(g, 2, &spans).unwrap();
    assert!(verify_bundle_axioms(&b).passed());
    assert!(!is_saturated(&b));
    assert!(saturation_defects(&b).contains(&(1, 1)));
}

#[test]
fn graded_m2_fibers() {
    let g = cyclic(2).unwrap();
    let b = graded_bundle(&full_matrix_algebra(2), &g, &grading_from_labels(&g, &[0, 1])).unwrap();
    // diagonal units are even, off-diagonal units odd
    assert_eq!(b.fiber_dims(), vec![2, 2]);
    assert!(b.fiber(1).residual(&unit(2, 0, 1)) < 1e-14);
    assert!(b.fiber(0).residual(&unit(2, 1, 1)) < 1e-14);
}

#[test]
fn dynamical_bundles_require_a_unit() {
    let g = cyclic(2).unwrap();
    let corner = MatrixSubspace::from_spanning(2, &[unit(2, 0, 0)]).unwrap();
    let sys = DynamicalSystem::trivial(corner, g).unwrap();
    assert!(matches!(dynamical_bundle(&sys), Err(Error::Unsupported(_))));
}

#[test]
fn takai_instances_match() {
    for (name, sys) in takai_systems().unwrap() {
        let r = takai_check(&sys, 0).unwrap();
        assert!(r.equal, "{name}: {:?} vs {:?}", r.double_crossed, r.stabilized);
    }
    // ℂ² with the swap: (ℂ² ⋊ ℤ₂) ⋊ ℤ̂₂ ≅ ℂ² ⊗ M₂
    let r = takai_check(&families::diag_swap_system().unwrap(), 0).unwrap();
    assert_eq!(r.stabilized, vec![2, 2]);
}

#[test]
fn takai_rejects_nonabelian_groups() {
    let scalars = MatrixSubspace::from_orthonormal(1, vec![identity(1)]);
    let sys = DynamicalSystem::trivial(scalars, symmetric(3).unwrap()).unwrap();
    assert!(matches!(takai_check(&sys, 0), Err(Error::NotAbelian)));
}

#[test]
fn wrong_fiber_count_is_rejected() {
    let g = cyclic(3).unwrap();
    let fibers = vec![MatrixSubspace::from_spanning(2, &[zeros(2, 2)]).unwrap(); 2];
    assert!(matches!(FellBundle::new(g, 2, fibers), Err(Error::Dimension(_))));
}
