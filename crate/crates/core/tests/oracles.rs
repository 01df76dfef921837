//! Values checked against references computed here by independent means:
//! discrete Fourier transforms, conjugacy-class counts, and closed forms.

use num_complex::Complex64;
use std::f64::consts::PI;
use std::sync::Arc;

use fellb_core::bundle::trivial_bundle;
use fellb_core::classical::{ag_norm, bg_norm, group_cstar, tb_isomorphism, ClassicalFunction};
use fellb_core::families::{self, family, klein};
use fellb_core::fourier::{approx_identity_defect, eymard_element, folner_approx_identity, Coefficient};
use fellb_core::functional::{gns, Functional, UnitalDynamicalDelta};
use fellb_core::group::{cyclic, dihedral, symmetric, FiniteGroup};
use fellb_core::linalg::{identity, max_abs_diff};
use fellb_core::regular::universal_norm;
use fellb_core::section::Section;

fn c(re: f64) -> Complex64 {
    Complex64::new(re, 0.0)
}

/// `‖u‖_{A(ℤ_n)} = Σ_k |û_k|` with `û_k = (1/n) Σ_s u(s) e^{−2πiks/n}`.
fn cyclic_fourier_norm(u: &[Complex64]) -> f64 {
    let n = u.len();
    (0..n)
        .map(|k| {
            let sum: Complex64 = u
                .iter()
                .enumerate()
                .map(|(s, v)| v * Complex64::from_polar(1.0, -2.0 * PI * (k * s) as f64 / n as f64))
                .sum();
            sum.norm() / n as f64
        })
        .sum()
}

fn conjugacy_classes(g: &FiniteGroup) -> usize {
    let mut seen = vec![false; g.order()];
    let mut count = 0;
    for x in g.elements() {
        if seen[x] {
            continue;
        }
        count += 1;
        for s in g.elements() {
            seen[g.mul(g.mul(s, x), g.inv(s))] = true;
        }
    }
    count
}

/// `F_s = conj(u(s))·U_s/n` gives `φ_s(U_s) = u(s)` on a trivial bundle.
fn functional_from(b: &Arc<fellb_core::bundle::FellBundle>, u: &[Complex64]) -> Functional {
    let d = b.dynamics().unwrap();
    let n = b.ambient_dim() as f64;
    Functional::new(b, (0..b.order()).map(|s| d.unitary(s) * (u[s].conj() / n)).collect()).unwrap()
}

#[test]
fn classical_norm_matches_the_discrete_fourier_transform() {
    let mut rng = fellb_core::seeded_rng(11);
    for n in [2, 3, 4, 6] {
        let g = cyclic(n).unwrap();
        for _ in 0..10 {
            let u = ClassicalFunction::random(&g, &mut rng);
            assert!((bg_norm(&u).unwrap() - cyclic_fourier_norm(u.values())).abs() < 1e-10);
        }
    }
}

#[test]
fn bundle_norm_matches_the_discrete_fourier_transform() {
    let mut rng = fellb_core::seeded_rng(12);
    let g = cyclic(4).unwrap();
    let b = Arc::new(trivial_bundle(&g));
    for _ in 0..10 {
        let u = ClassicalFunction::random(&g, &mut rng);
        let phi = functional_from(&b, u.values());
        assert!((phi.bnorm().unwrap() - cyclic_fourier_norm(u.values())).abs() < 1e-10);
    }
}

#[test]
fn coefficient_norm_on_trivial_z4_matches_the_transform() {
    let mut rng = fellb_core::seeded_rng(13);
    let b = Arc::new(trivial_bundle(&cyclic(4).unwrap()));
    for _ in 0..10 {
        let coef = Coefficient::random(&b, &mut rng);
        let u = tb_isomorphism(&coef.tabulate()).unwrap();
        let bounds = coef.anorm_bounds(2, 0).unwrap();
        let reference = cyclic_fourier_norm(u.values());
        assert!((bounds.lower - reference).abs() < 1e-9 && (bounds.upper - reference).abs() < 1e-9);
    }
}

#[test]
fn plancherel_examples() {
    // δ_e: Σ_π dim(π)·‖id/|G|‖₁ = Σ dim²/|G| = 1; a character has norm 1; 0 has norm 0
    for g in [cyclic(5).unwrap(), symmetric(3).unwrap(), dihedral(4).unwrap()] {
        assert!((bg_norm(&ClassicalFunction::delta(&g, 0)).unwrap() - 1.0).abs() < 1e-10);
        assert!((ag_norm(&ClassicalFunction::constant(&g, c(1.0))).unwrap() - 1.0).abs() < 1e-10);
        assert!(bg_norm(&ClassicalFunction::constant(&g, c(0.0))).unwrap().abs() < 1e-14);
    }
}

#[test]
fn block_counts_equal_class_counts() {
    let groups = [cyclic(6).unwrap(), klein(), symmetric(3).unwrap(), dihedral(4).unwrap(), dihedral(6).unwrap()];
    for g in &groups {
        let sizes = group_cstar(g).unwrap().sizes();
        assert_eq!(sizes.len(), conjugacy_classes(g));
        assert_eq!(sizes.iter().map(|d| d * d).sum::<usize>(), g.order());
    }
    assert_eq!(group_cstar(&symmetric(3).unwrap()).unwrap().sizes(), vec![1, 1, 2]);
    assert_eq!(group_cstar(&dihedral(4).unwrap()).unwrap().sizes(), vec![1, 1, 1, 1, 2]);
}

#[test]
fn tb_of_the_unit_coefficient_is_the_point_mass() {
    let g = symmetric(3).unwrap();
    let b = Arc::new(trivial_bundle(&g));
    let one = Section::j_embed(&b, 0, &identity(6)).unwrap();
    let u = tb_isomorphism(&Coefficient::new(one.clone(), one).unwrap().tabulate()).unwrap();
    assert!(u.max_diff(&ClassicalFunction::delta(&g, 0)) < 1e-14);
}

#[test]
fn tb_rejects_other_bundles() {
    let f = family("dynamical-m2-inner-z2").unwrap();
    let mut rng = fellb_core::seeded_rng(1);
    assert!(tb_isomorphism(&Coefficient::random(&f.bundle, &mut rng).tabulate()).is_err());
}

#[test]
fn universal_norm_of_the_sum_of_point_masses() {
    // ‖δ_0 + δ_1‖ on ℤ₂ is the larger Fourier coefficient 1 + 1
    let b = Arc::new(trivial_bundle(&cyclic(2).unwrap()));
    let swap = fellb_core::linalg::from_real(2, 2, &[0.0, 1.0, 1.0, 0.0]);
    let f = Section::new(&b, vec![identity(2), swap]).unwrap();
    assert!((universal_norm(&f).unwrap() - 2.0).abs() < 1e-12);
}

#[test]
fn eymard_vanishes_off_the_set() {
    let f = family("dynamical-diag-m2-z2").unwrap();
    let u = eymard_element(&f.bundle, &[1]).unwrap();
    let d = f.bundle.dynamics().unwrap();
    for a in d.system().algebra().basis() {
        assert!(u.evaluate(0, &d.element(0, a)).unwrap().norm() < 1e-14);
        let expected = d.element(0, &a.adjoint());
        assert!(max_abs_diff(&u.evaluate(1, &d.element(1, a)).unwrap(), &expected) < 1e-14);
    }
}

#[test]
fn eymard_requires_a_nonempty_set() {
    let f = family("dynamical-diag-m2-z2").unwrap();
    assert!(eymard_element(&f.bundle, &[]).is_err());
}

#[test]
fn folner_defect_at_one_half_is_one_third() {
    let f = family("dynamical-m2-inner-z2").unwrap();
    let b = &f.bundle;
    let delta = UnitalDynamicalDelta::new(b).unwrap();
    let all = [0, 1];
    let u = folner_approx_identity(b, &all, 0.5).unwrap();
    let mut rng = fellb_core::seeded_rng(3);
    let v = Coefficient::random(b, &mut rng);
    let ratio = approx_identity_defect(&u, &v, &all, &delta, 2, 0).unwrap();
    assert!((ratio - 1.0 / 3.0).abs() < 1e-10);
    // ‖u‖ ≤ ‖ξ‖₂‖η‖₂ = 1/(1+ε) with C = KC = G
    assert!((u.norm_upper() - 1.0 / 1.5).abs() < 1e-12);
}

#[test]
fn defect_refuses_elements_outside_the_set() {
    let f = family("dynamical-m2-inner-z2").unwrap();
    let b = &f.bundle;
    let delta = UnitalDynamicalDelta::new(b).unwrap();
    let u = folner_approx_identity(b, &[0], 0.5).unwrap();
    let mut rng = fellb_core::seeded_rng(4);
    let v = Coefficient::random(b, &mut rng);
    assert!(approx_identity_defect(&u, &v, &[0], &delta, 1, 0).is_err());
}

#[test]
fn gns_of_the_trace_state_on_s3_is_regular() {
    let g = symmetric(3).unwrap();
    let b = Arc::new(trivial_bundle(&g));
    let mut u = vec![c(0.0); 6];
    u[0] = c(1.0);
    let data = gns(&functional_from(&b, &u)).unwrap();
    assert_eq!(data.dim(), 6);
}

#[test]
fn every_family_has_a_faithful_regular_representation() {
    for f in families::catalogue().unwrap() {
        let p = f.bundle.presentation().unwrap();
        assert_eq!(p.algebra().dim(), f.bundle.total_dim(), "{}", f.name);
    }
}
