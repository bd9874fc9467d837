use std::collections::BTreeMap;
use std::sync::Arc;

use proptest::prelude::*;

use opstar::algebra::{groups, StarAlgebra};
use opstar::gelfand::{characters, gelfand_transform, wiener_inverse, FourierElement};
use opstar::linalg::{hausdorff, C64};
use opstar::random;
use opstar::spectrum::{spectral_radius, spectrum};

fn commutative(kind: usize, seed: u64) -> Arc<StarAlgebra> {
    match kind % 4 {
        0 => StarAlgebra::diagonal(1 + (seed % 5) as usize),
        1 => groups::cyclic(1 + (seed % 8) as usize),
        2 => groups::center(&groups::GroupTable::symmetric(3)).unwrap(),
        _ => {
            let n = 1 + (seed % 4) as usize;
            let b = random::normal_matrix(&mut random::rng(seed), n);
            StarAlgebra::generate_matrix_algebra(&[b], 1e-9).unwrap()
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn transform_sup_is_radius(kind in 0usize..4, seed in any::<u64>()) {
        let alg = commutative(kind, seed);
        let cs = characters(&alg, seed).unwrap();
        let a = random::element(&mut random::rng(seed ^ 7), &alg);
        let hat = gelfand_transform(&a, &cs).unwrap();
        let sup = hat.iter().map(|z| z.norm()).fold(0.0, f64::max);
        let r = spectral_radius(&a).unwrap();
        prop_assert!((sup - r).abs() <= 1e-8 * (1.0 + r));
        let sp = spectrum(&a).unwrap().points;
        prop_assert!(hausdorff(&sp, &hat) <= 1e-8 * (1.0 + r));
    }

    #[test]
    fn transform_is_star_homomorphism(kind in 0usize..4, seed in any::<u64>()) {
        let alg = commutative(kind, seed);
        let cs = characters(&alg, seed).unwrap();
        prop_assert!(cs.all_hermitian());
        let mut rng = random::rng(seed ^ 11);
        let a = random::element(&mut rng, &alg);
        let b = random::element(&mut rng, &alg);
        let (ha, hb) = (gelfand_transform(&a, &cs).unwrap(), gelfand_transform(&b, &cs).unwrap());
        let hab = gelfand_transform(&a.mul(&b).unwrap(), &cs).unwrap();
        let hstar = gelfand_transform(&a.adjoint(), &cs).unwrap();
        let scale = 1e-9 * (1.0 + a.norm()) * (1.0 + b.norm());
        for j in 0..cs.len() {
            prop_assert!((hab[j] - ha[j] * hb[j]).norm() <= scale);
            prop_assert!((hstar[j] - ha[j].conj()).norm() <= scale);
        }
    }

    #[test]
    fn transform_is_isometric_on_operator_algebras(kind in prop::sample::select(vec![0usize, 2, 3]), seed in any::<u64>()) {
        let alg = commutative(kind, seed);
        let cs = characters(&alg, seed).unwrap();
        let a = random::element(&mut random::rng(seed ^ 3), &alg);
        let sup = gelfand_transform(&a, &cs).unwrap().iter().map(|z| z.norm()).fold(0.0, f64::max);
        prop_assert!((sup - a.norm()).abs() <= 1e-9 * (1.0 + a.norm()));
    }

    #[test]
    fn wiener_inverse_of_dominant_symbols(a0 in 2.5f64..6.0, c1 in -1.0f64..1.0, c2 in -1.0f64..1.0, s in -0.2f64..0.2) {
        // |a0| > Σ|a_k| keeps the symbol away from zero
        let mut coeffs = BTreeMap::new();
        coeffs.insert(0, C64::new(a0, 0.0));
        coeffs.insert(1, C64::new(c1, s));
        coeffs.insert(-2, C64::new(c2, -s));
        let f = FourierElement::new(coeffs).unwrap();
        let r = wiener_inverse(&f, 64, 1e-9).unwrap();
        prop_assert!(r.max_pointwise_residual <= 1e-6);
        prop_assert!(r.tail_l1 <= 1e-6);
        prop_assert!(r.convolution_residual <= 1e-6);
        for t in [0.0, 0.7, 2.0, 4.5] {
            let g = r.inverse.eval(t);
            prop_assert!((g * f.eval(t) - C64::new(1.0, 0.0)).norm() <= 1e-6);
        }
    }
}
