//! Structural invariants over random inputs drawn from seeded generators.

use num_complex::Complex64;
use proptest::prelude::*;
use std::sync::Arc;

use fellb_core::bundle::FellBundle;
use fellb_core::classical::{bg_norm, ClassicalFunction};
use fellb_core::families::{catalogue, dynamical_families, Family};
use fellb_core::fourier::{approx_identity_defect, folner_approx_identity, Coefficient};
use fellb_core::functional::{from_representation, BundleRep, Functional, UnitalDynamicalDelta};
use fellb_core::group::{cyclic, dihedral, symmetric};
use fellb_core::regular::universal_norm;
use fellb_core::section::Section;

fn pick(families: &[Family], i: usize) -> Arc<FellBundle> {
    families[i % families.len()].bundle.clone()
}

fn config() -> ProptestConfig {
    ProptestConfig { cases: 24, ..ProptestConfig::default() }
}

proptest! {
    #![proptest_config(config())]

    #[test]
    fn bnorm_is_a_norm(i in 0usize..12, seed in any::<u64>(), re in -3.0f64..3.0, im in -3.0f64..3.0) {
        let b = pick(&catalogue().unwrap(), i);
        let mut rng = fellb_core::seeded_rng(seed);
        let phi = Functional::random(&b, &mut rng);
        let psi = Functional::random(&b, &mut rng);
        let (np, nq) = (phi.bnorm().unwrap(), psi.bnorm().unwrap());
        prop_assert!(phi.add(&psi).unwrap().bnorm().unwrap() <= np + nq + 1e-10);
        let k = Complex64::new(re, im);
        prop_assert!((phi.scale(k).bnorm().unwrap() - k.norm() * np).abs() <= 1e-10 * (1.0 + np));
    }

    #[test]
    fn universal_norm_sits_between_l2_and_l1(i in 0usize..12, seed in any::<u64>()) {
        let b = pick(&catalogue().unwrap(), i);
        let mut rng = fellb_core::seeded_rng(seed);
        let f = Section::random(&b, &mut rng);
        let u = universal_norm(&f).unwrap();
        prop_assert!(u <= f.l1_norm() + 1e-10);
        // ‖f‖_* ≥ ‖f‖₂ on the trivial bundles, where B_e = ℂ
        if b.fiber(0).dim() == 1 {
            prop_assert!(u + 1e-10 >= f.l2_norm());
        }
    }

    #[test]
    fn cstar_identity(i in 0usize..12, seed in any::<u64>()) {
        let b = pick(&catalogue().unwrap(), i);
        let mut rng = fellb_core::seeded_rng(seed);
        let f = Section::random(&b, &mut rng);
        let n = universal_norm(&f).unwrap();
        let n2 = universal_norm(&f.involute().convolve(&f).unwrap()).unwrap();
        prop_assert!((n2 - n * n).abs() <= 1e-9 * (1.0 + n * n));
    }

    #[test]
    fn diagonal_coefficients_are_positive(i in 0usize..12, seed in any::<u64>()) {
        let b = pick(&catalogue().unwrap(), i);
        let mut rng = fellb_core::seeded_rng(seed);
        let pi = BundleRep::random(&b, &mut rng).unwrap();
        let xi = fellb_core::linalg::random_vector(pi.dim(), &mut rng);
        let phi = from_representation(&b, &pi, &xi, &xi).unwrap();
        prop_assert!(phi.is_positive_definite());
        // ‖φ‖ = φ(1) = ‖ξ‖² for a positive functional
        prop_assert!((phi.bnorm().unwrap() - xi.norm_squared()).abs() <= 1e-8 * (1.0 + xi.norm_squared()));
    }

    #[test]
    fn classical_norm_is_submultiplicative(g in 0usize..3, seed in any::<u64>()) {
        let group = [cyclic(5).unwrap(), symmetric(3).unwrap(), dihedral(4).unwrap()][g].clone();
        let mut rng = fellb_core::seeded_rng(seed);
        let u = ClassicalFunction::random(&group, &mut rng);
        let v = ClassicalFunction::random(&group, &mut rng);
        prop_assert!(bg_norm(&u.mul(&v)).unwrap() <= bg_norm(&u).unwrap() * bg_norm(&v).unwrap() + 1e-10);
        prop_assert!((bg_norm(&u.flip_conj()).unwrap() - bg_norm(&u).unwrap()).abs() < 1e-10);
    }

    #[test]
    fn star_is_an_involution(i in 0usize..8, seed in any::<u64>()) {
        let b = pick(&dynamical_families().unwrap(), i);
        let mut rng = fellb_core::seeded_rng(seed);
        let u = Coefficient::random(&b, &mut rng).tabulate();
        prop_assert!(u.star().star().max_diff(&u) < 1e-12);
        let c = Coefficient::random(&b, &mut rng);
        prop_assert!(c.star().tabulate().max_diff(&c.tabulate().star()) < 1e-12);
    }

    #[test]
    fn folner_defect_ratio(i in 0usize..8, seed in any::<u64>(), eps in 1e-3f64..10.0) {
        let b = pick(&dynamical_families().unwrap(), i);
        let all: Vec<usize> = b.group().elements().collect();
        let delta = UnitalDynamicalDelta::new(&b).unwrap();
        let u = folner_approx_identity(&b, &all, eps).unwrap();
        prop_assert!(u.norm_upper() <= 1.0);
        let mut rng = fellb_core::seeded_rng(seed);
        let v = Coefficient::random(&b, &mut rng);
        let ratio = approx_identity_defect(&u, &v, &all, &delta, 1, seed).unwrap();
        prop_assert!((ratio - eps / (1.0 + eps)).abs() < 1e-8);
    }
}
