use super::*;
use crate::bundle::trivial_bundle;
use crate::classical::{bg_norm, ClassicalFunction};
use crate::families::family;
use crate::group::{cyclic, dihedral};
use crate::linalg::{c, identity};

fn z2() -> Arc<FellBundle> {
    Arc::new(trivial_bundle(&cyclic(2).unwrap()))
}

/// On the trivial bundle `φ_s(λ_s) = u(s)` is met by `F_s = u(s)·λ_s/n`.
fn from_function(b: &Arc<FellBundle>, u: &[Complex64]) -> Functional {
    let d = b.dynamics().unwrap();
    let n = b.ambient_dim() as f64;
    let comps = (0..b.order()).map(|s| d.unitary(s) * (u[s].conj() / n)).collect();
    Functional::new(b, comps).unwrap()
}

#[test]
fn point_mass_at_identity_has_norm_one() {
    let phi = from_function(&z2(), &[c(1.0, 0.0), c(0.0, 0.0)]);
    assert!((phi.eval(0, &identity(2)) - c(1.0, 0.0)).norm() < 1e-15);
    assert!((phi.bnorm().unwrap() - 1.0).abs() < 1e-12);
    assert!(phi.is_positive_definite());
}

#[test]
fn trivial_character_is_a_state() {
    let phi = from_function(&z2(), &[c(1.0, 0.0), c(1.0, 0.0)]);
    assert!((phi.bnorm().unwrap() - 1.0).abs() < 1e-12);
    assert_eq!(gns(&phi).unwrap().dim(), 1);
}

#[test]
fn non_positive_definite_function() {
    // u = (1, 2): Gram ½[[1,2],[2,1]] has eigenvalue −½; ‖u‖ = (|3| + |−1|)/2
    let phi = from_function(&z2(), &[c(1.0, 0.0), c(2.0, 0.0)]);
    match phi.positivity(POSITIVITY_TOL) {
        Positivity::NotPositive(m) => assert!((m + 0.5).abs() < 1e-12),
        other => panic!("{other:?}"),
    }
    assert!((phi.bnorm().unwrap() - 2.0).abs() < 1e-12);
    assert!(matches!(gns(&phi), Err(Error::NotPositive(_))));
}

#[test]
fn gns_of_the_point_mass_is_regular() {
    let b = Arc::new(trivial_bundle(&dihedral(4).unwrap()));
    let mut u = vec![c(0.0, 0.0); 8];
    u[0] = c(1.0, 0.0);
    let data = gns(&from_function(&b, &u)).unwrap();
    assert_eq!(data.dim(), 8);
    assert!((data.eta.norm_squared() - 1.0).abs() < 1e-12);
}

#[test]
fn bnorm_matches_the_classical_dual_norm() {
    let g = dihedral(4).unwrap();
    let b = Arc::new(trivial_bundle(&g));
    let mut rng = crate::seeded_rng(8);
    for _ in 0..5 {
        let u = ClassicalFunction::random(&g, &mut rng);
        let phi = from_function(&b, u.values());
        assert!((phi.bnorm().unwrap() - bg_norm(&u).unwrap()).abs() < 1e-10);
    }
}

#[test]
fn dynamical_product_is_pointwise_on_trivial_bundles() {
    let g = cyclic(4).unwrap();
    let b = Arc::new(trivial_bundle(&g));
    let delta = UnitalDynamicalDelta::new(&b).unwrap();
    let mut rng = crate::seeded_rng(2);
    let (u, v) = (ClassicalFunction::random(&g, &mut rng), ClassicalFunction::random(&g, &mut rng));
    let prod = multiply(&from_function(&b, u.values()), &from_function(&b, v.values()), &delta).unwrap();
    let expected = from_function(&b, u.mul(&v).values());
    assert!(prod.max_diff(&expected) < 1e-12);
}

#[test]
fn unit_like_functional_is_a_left_identity() {
    let f = family("dynamical-m2-inner-z2").unwrap();
    let delta = UnitalDynamicalDelta::new(&f.bundle).unwrap();
    let one = unit_like(&f.bundle).unwrap();
    let mut rng = crate::seeded_rng(6);
    let phi = Functional::random(&f.bundle, &mut rng);
    assert!(multiply(&one, &phi, &delta).unwrap().max_diff(&phi) < 1e-12);
    // on the right the product only keeps φ_s(U_s): (φ·1)_s(b) = φ_s(U_s)·tr(θ(b))/m
    let right = multiply(&phi, &one, &delta).unwrap();
    for s in 0..2 {
        let k = phi.eval(s, delta.anchor(s));
        for e in f.bundle.fiber(s).basis() {
            assert!((right.eval(s, e) - k * one.eval(s, e)).norm() < 1e-12);
        }
    }
}

#[test]
fn jordan_parts_recombine() {
    let f = family("graded-m2-z2").unwrap();
    let mut rng = crate::seeded_rng(7);
    let phi = Functional::random(&f.bundle, &mut rng);
    let [p1, p2, p3, p4] = jordan_decompose(&phi).unwrap();
    let rec = p1.sub(&p2).unwrap().add(&p3.sub(&p4).unwrap().scale(c(0.0, 1.0))).unwrap();
    assert!(rec.max_diff(&phi) < 1e-12);
    for p in [p1, p2, p3, p4] {
        assert!(p.is_positive_definite());
    }
}

#[test]
fn hopf_delta_requires_a_group_algebra_fiber() {
    let f = family("dynamical-m2-inner-z2").unwrap();
    assert!(HopfFiberDelta::new(&f.bundle, &cyclic(3).unwrap()).is_err());
}
