use std::sync::Arc;

use super::{AlgebraElement, Representation, StarAlgebra};
use crate::error::Error;
use crate::linalg::{eps_rank, vec_norm, CMatrix, C64};
use crate::random;
use crate::report::{Check, CheckReport};

const RANDOM_PAIRS: usize = 100;

/// Axiom checks with the default sampling seed.
pub fn validate(algebra: &Arc<StarAlgebra>) -> CheckReport {
    validate_seeded(algebra, random::DEFAULT_SEED)
}

/// Associativity, involution, unit, realisation and submultiplicativity
/// checks; failures are entries of the report, never errors.
pub fn validate_seeded(algebra: &Arc<StarAlgebra>, seed: u64) -> CheckReport {
    let mut report = CheckReport::new("algebra axioms").with_seed(seed);
    let d = algebra.dim();
    let basis: Vec<AlgebraElement> = (0..d).map(|i| AlgebraElement::basis(algebra, i)).collect();
    let products: Vec<Vec<Option<AlgebraElement>>> =
        basis.iter().map(|a| basis.iter().map(|b| a.mul(b).ok()).collect()).collect();

    let coeff_dist = |x: &AlgebraElement, y: &AlgebraElement| {
        let diff: Vec<C64> = x.coeffs().iter().zip(y.coeffs()).map(|(a, b)| a - b).collect();
        vec_norm(&diff)
    };

    let mut assoc: f64 = 0.0;
    for i in 0..d {
        for (j, ij) in products[i].iter().enumerate() {
            let Some(ij) = ij else { continue };
            for k in 0..d {
                let Some(jk) = &products[j][k] else { continue };
                if let (Ok(l), Ok(r)) = (ij.mul(&basis[k]), basis[i].mul(jk)) {
                    assoc = assoc.max(coeff_dist(&l, &r));
                }
            }
        }
    }
    report.push(Check::at_most("associativity", assoc, 1e-12));

    let s = algebra.involution();
    let twice = &s.conj() * s;
    report.push(Check::at_most("involution.involutive", twice.dist(&CMatrix::identity(d)), 1e-12));

    let mut anti: f64 = 0.0;
    for i in 0..d {
        for j in 0..d {
            let Some(ij) = &products[i][j] else { continue };
            if let Ok(rhs) = basis[j].adjoint().mul(&basis[i].adjoint()) {
                anti = anti.max(coeff_dist(&ij.adjoint(), &rhs));
            }
        }
    }
    report.push(Check::at_most("involution.anti_multiplicative", anti, 1e-12));

    let mut rng = random::rng(seed);
    let mut semi: f64 = 0.0;
    for _ in 0..10 {
        let a = random::element(&mut rng, algebra);
        let b = random::element(&mut rng, algebra);
        let z = random::gaussian(&mut rng);
        let lhs = a.scale(z).plus(&b).expect("same algebra").adjoint();
        let rhs = a.adjoint().scale(z.conj()).plus(&b.adjoint()).expect("same algebra");
        semi = semi.max(coeff_dist(&lhs, &rhs) / (1.0 + vec_norm(lhs.coeffs())));
    }
    report.push(Check::at_most("involution.conjugate_linear", semi, 1e-12));

    if let Some(u) = algebra.unit_coords() {
        let e = AlgebraElement::new(algebra, u.to_vec()).expect("unit has the right length");
        let mut worst: f64 = 0.0;
        for b in &basis {
            for prod in [e.mul(b), b.mul(&e)].into_iter().flatten() {
                worst = worst.max(coeff_dist(&prod, b));
            }
        }
        report.push(Check::at_most("unit", worst, 1e-10));
    }

    if let Some(r) = algebra.realization() {
        let rep = Representation::unchecked(algebra, r.to_vec());
        report.push(Check::at_most("realization.homomorphism", rep.hom_residual(), 1e-10));
        report.push(Check::at_most("realization.star", rep.star_residual(), 1e-10));
        let n = r[0].rows();
        let vecs = CMatrix::from_fn(n * n, d, |p, i| r[i][(p / n, p % n)]);
        report.push(Check::equals("realization.faithful_rank", eps_rank(&vecs, 1e-10) as f64, d as f64));
    }

    let mut worst: f64 = 0.0;
    let mut pair = |a: &AlgebraElement, b: &AlgebraElement| match a.mul(b) {
        Ok(ab) => {
            let bound = a.norm() * b.norm();
            if bound > 0.0 {
                worst = worst.max((ab.norm() - bound) / bound);
            } else {
                worst = worst.max(ab.norm());
            }
        }
        Err(Error::WindowOverflow { .. }) => {}
        Err(_) => worst = f64::INFINITY,
    };
    for a in &basis {
        for b in &basis {
            pair(a, b);
        }
    }
    for _ in 0..RANDOM_PAIRS {
        let a = random::element(&mut rng, algebra);
        let b = random::element(&mut rng, algebra);
        pair(&a, &b);
    }
    report.push(Check::at_most("norm.submultiplicative", worst, 1e-10));
    report
}
