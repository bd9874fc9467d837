use proptest::prelude::*;

use opstar::algebra::{groups, AlgebraElement, StarAlgebra};
use opstar::linalg::{hausdorff, op_norm, CMatrix, C64};
use opstar::random;
use opstar::spectrum::{ptak, spectral_radius, spectrum};

fn pair(seed: u64, n: usize) -> (AlgebraElement, AlgebraElement) {
    let alg = StarAlgebra::full_matrix(n);
    let mut rng = random::rng(seed);
    (random::element(&mut rng, &alg), random::element(&mut rng, &alg))
}

fn nonzero(points: &[C64], scale: f64) -> Vec<C64> {
    points.iter().copied().filter(|z| z.norm() > 1e-6 * scale).collect()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn powers_dominate_radius(seed in any::<u64>(), n in 1usize..5, k in 1u32..12) {
        let (a, _) = pair(seed, n);
        let r = spectral_radius(&a).unwrap();
        let ak = a.pow(k).unwrap().norm();
        prop_assert!(ak.powf(1.0 / k as f64) >= r - 1e-9 * (1.0 + r));
    }

    #[test]
    fn radius_of_powers(seed in any::<u64>(), n in 1usize..5, k in 1u32..6) {
        let (a, _) = pair(seed, n);
        let r = spectral_radius(&a).unwrap();
        let rk = spectral_radius(&a.pow(k).unwrap()).unwrap();
        prop_assert!((rk - r.powi(k as i32)).abs() <= 1e-9 * r.powi(k as i32).max(1e-300) * 10.0);
    }

    #[test]
    fn radius_of_products_commutes(seed in any::<u64>(), n in 1usize..5) {
        let (a, b) = pair(seed, n);
        let ab = spectral_radius(&a.mul(&b).unwrap()).unwrap();
        let ba = spectral_radius(&b.mul(&a).unwrap()).unwrap();
        prop_assert!((ab - ba).abs() <= 1e-9 * (1.0 + ab));
    }

    #[test]
    fn commuting_radius_inequalities(seed in any::<u64>(), k in 1usize..9) {
        // elements of ℂ[ℤ_k] commute
        let alg = groups::cyclic(k);
        let mut rng = random::rng(seed);
        let a = random::element(&mut rng, &alg);
        let b = random::element(&mut rng, &alg);
        let (ra, rb) = (spectral_radius(&a).unwrap(), spectral_radius(&b).unwrap());
        prop_assert!(spectral_radius(&a.plus(&b).unwrap()).unwrap() <= ra + rb + 1e-9);
        prop_assert!(spectral_radius(&a.mul(&b).unwrap()).unwrap() <= ra * rb + 1e-9);
    }

    #[test]
    fn adjoint_spectrum_is_conjugate(seed in any::<u64>(), n in 1usize..6) {
        let (a, _) = pair(seed, n);
        let sp = spectrum(&a).unwrap().points;
        let conj: Vec<C64> = sp.iter().map(|z| z.conj()).collect();
        let star = spectrum(&a.adjoint()).unwrap().points;
        prop_assert!(hausdorff(&star, &conj) <= 1e-8 * (1.0 + a.norm()));
    }

    #[test]
    fn nonzero_spectra_of_ab_and_ba(seed in any::<u64>(), n in 1usize..5, r in 1usize..5) {
        // rank-deficient factors make 0 an eigenvalue on one side only
        let mut rng = random::rng(seed);
        let r = r.min(n);
        let x = random::gaussian_matrix(&mut rng, n, r);
        let y = random::gaussian_matrix(&mut rng, r, n);
        let alg = StarAlgebra::full_matrix(n);
        let proj = CMatrix::from_fn(n, n, |i, j| if i == j && i < r { C64::new(1.0, 0.0) } else { C64::new(0.0, 0.0) });
        let a = AlgebraElement::from_matrix(&alg, &(&x * &y)).unwrap();
        let b = AlgebraElement::from_matrix(&alg, &(&proj * &random::gaussian_matrix(&mut rng, n, n))).unwrap();
        let scale = 1.0 + a.norm() * b.norm();
        let ab = nonzero(&spectrum(&a.mul(&b).unwrap()).unwrap().points, scale);
        let ba = nonzero(&spectrum(&b.mul(&a).unwrap()).unwrap().points, scale);
        prop_assert_eq!(ab.len(), ba.len());
        prop_assert!(hausdorff(&ab, &ba) <= 1e-7 * scale);
    }

    #[test]
    fn operator_norm_is_ptak(seed in any::<u64>(), n in 1usize..7) {
        let (a, _) = pair(seed, n);
        let norm = a.norm();
        prop_assert!((norm - ptak(&a).unwrap()).abs() <= 1e-9 * norm);
        let star = ptak(&a.adjoint()).unwrap();
        let asa = ptak(&a.adjoint().mul(&a).unwrap()).unwrap();
        prop_assert!((star - norm).abs() <= 1e-9 * norm);
        prop_assert!((asa - norm * norm).abs() <= 1e-9 * norm * norm);
    }

    #[test]
    fn group_ring_spectra_converge(seed in any::<u64>()) {
        // the regular representation of S3 has doubled eigenvalues
        let alg = groups::symmetric(3);
        let a = random::element(&mut random::rng(seed), &alg);
        for x in [a.clone(), a.adjoint(), a.adjoint().mul(&a).unwrap(), a.mul(&a.adjoint()).unwrap()] {
            let sp = spectrum(&x).unwrap();
            prop_assert!(!sp.points.is_empty());
        }
    }

    #[test]
    fn normal_powers_are_isometric(seed in any::<u64>(), n in 1usize..6, k in 1u32..6) {
        let b = random::normal_matrix(&mut random::rng(seed), n);
        let nb = op_norm(&b);
        prop_assert!((op_norm(&b.pow(k)) - nb.powi(k as i32)).abs() <= 1e-9 * nb.powi(k as i32));
    }
}
