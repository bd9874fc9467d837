//! Characters and the Gelfand transform of commutative algebras, measures
//! representing states, Wiener inversion on ℓ¹(ℤ) and a discontinuous
//! character on a weighted group ring.

mod counterexample;
mod fourier;

use std::sync::Arc;

use serde::Serialize;

use crate::algebra::{AlgebraElement, StarAlgebra};
use crate::error::{Error, Result};
use crate::linalg::{eigenvalues, lex_cmp, lstsq, svd, vec_norm, CMatrix, C64};
use crate::random;
use crate::states::{variation, LinearFunctional};

pub use counterexample::{discontinuous_character_demo, CounterexampleReport, CounterexampleRow};
pub use fourier::{wiener_inverse, FourierElement, WienerResult, TORUS_GRID};

const MAX_ATTEMPTS: usize = 20;
const MIN_GAP: f64 = 1e-6;

/// Characters `τ_j`, stored as `τ_j(e_i)` rows, sorted lexicographically.
#[derive(Debug, Clone, Serialize)]
pub struct CharacterSet {
    #[serde(skip)]
    pub algebra: Option<Arc<StarAlgebra>>,
    pub characters: Vec<Vec<C64>>,
    pub hermitian: Vec<bool>,
}

impl CharacterSet {
    pub fn len(&self) -> usize {
        self.characters.len()
    }

    pub fn is_empty(&self) -> bool {
        self.characters.is_empty()
    }

    pub fn functional(&self, j: usize) -> Result<LinearFunctional> {
        let alg = self.algebra.as_ref().ok_or(Error::AlgebraMismatch)?;
        LinearFunctional::new(alg, self.characters[j].clone())
    }

    pub fn all_hermitian(&self) -> bool {
        self.hermitian.iter().all(|&h| h)
    }
}

fn regular_matrices(alg: &Arc<StarAlgebra>) -> Result<Vec<CMatrix>> {
    (0..alg.dim()).map(|i| alg.left_mult_matrix(i)).collect()
}

fn combine(mats: &[CMatrix], x: &[C64]) -> CMatrix {
    let n = mats[0].rows();
    let mut m = CMatrix::zeros(n, n);
    for (z, l) in x.iter().zip(mats) {
        m += &l.scale(*z);
    }
    m
}

fn min_gap(values: &[C64]) -> f64 {
    let mut gap = f64::INFINITY;
    for (i, a) in values.iter().enumerate() {
        for b in &values[i + 1..] {
            gap = gap.min((a - b).norm());
        }
    }
    gap
}

/// Characters of a commutative unital semisimple algebra from the common
/// eigenvectors of the regular representation.
///
/// A random element with simple spectrum has one eigenvector per minimal
/// idempotent; every basis element acts on it by its character value.
pub fn characters(alg: &Arc<StarAlgebra>, seed: u64) -> Result<CharacterSet> {
    let residual = alg.commutativity_residual();
    if residual > 1e-9 {
        return Err(Error::NotCommutative { residual });
    }
    if !alg.is_unital() {
        return Err(Error::NotUnital);
    }
    let d = alg.dim();
    let mats = regular_matrices(alg)?;
    let mut rng = random::rng(seed);
    let mut witness: Vec<C64> = Vec::new();
    for _ in 0..MAX_ATTEMPTS {
        let x = random::gaussian_vector(&mut rng, d);
        let lx = combine(&mats, &x);
        let lambdas = eigenvalues(&lx)?;
        let scale = 1.0 + lambdas.iter().map(|z| z.norm()).fold(0.0, f64::max);
        if min_gap(&lambdas) < MIN_GAP * scale {
            witness = nilpotent_witness(alg, &x, &lambdas, scale)?;
            continue;
        }
        let mut chars = Vec::with_capacity(d);
        for &lambda in &lambdas {
            let shifted = &lx - &CMatrix::identity(d).scale(lambda);
            let v = svd(&shifted).v.column(d - 1);
            let vv = vec_norm(&v).powi(2);
            let row: Vec<C64> = mats.iter().map(|l| crate::linalg::inner(&l.mul_vec(&v), &v) / vv).collect();
            chars.push(row);
        }
        chars.sort_by(|a, b| a.iter().zip(b).map(|(x, y)| lex_cmp(x, y)).find(|o| o.is_ne()).unwrap_or(std::cmp::Ordering::Equal));
        let worst = multiplicativity_residual(alg, &chars)?;
        if worst > 1e-8 * scale * scale {
            continue;
        }
        let hermitian = chars.iter().map(|row| is_hermitian_character(alg, row)).collect();
        return Ok(CharacterSet { algebra: Some(Arc::clone(alg)), characters: chars, hermitian });
    }
    let witness_norm = vec_norm(&witness);
    Err(Error::DegenerateAfterRetries { attempts: MAX_ATTEMPTS, witness, witness_norm })
}

/// `Π_μ (x − μe)` over the distinct eigenvalues of `L_x`: zero on a
/// semisimple algebra, a nonzero nilpotent otherwise.
fn nilpotent_witness(alg: &Arc<StarAlgebra>, x: &[C64], lambdas: &[C64], scale: f64) -> Result<Vec<C64>> {
    let distinct = crate::linalg::cluster_points(lambdas, MIN_GAP * scale);
    let x = AlgebraElement::new(alg, x.to_vec())?;
    let e = AlgebraElement::unit(alg)?;
    let mut w = e.clone();
    for (mu, _) in distinct {
        w = w.mul(&x.minus(&e.scale(mu))?)?;
    }
    Ok(w.into_coeffs())
}

fn multiplicativity_residual(alg: &Arc<StarAlgebra>, chars: &[Vec<C64>]) -> Result<f64> {
    let d = alg.dim();
    let mut worst: f64 = 0.0;
    for row in chars {
        for i in 0..d {
            for j in 0..d {
                let p = AlgebraElement::basis(alg, i).mul(&AlgebraElement::basis(alg, j))?;
                let lhs: C64 = p.coeffs().iter().zip(row).map(|(a, t)| a * t).sum();
                worst = worst.max((lhs - row[i] * row[j]).norm());
            }
        }
    }
    Ok(worst)
}

fn is_hermitian_character(alg: &Arc<StarAlgebra>, row: &[C64]) -> bool {
    (0..alg.dim()).all(|i| {
        let adj = AlgebraElement::basis(alg, i).adjoint();
        let v: C64 = adj.coeffs().iter().zip(row).map(|(a, t)| a * t).sum();
        (v - row[i].conj()).norm() <= 1e-9 * (1.0 + row[i].norm())
    })
}

/// `â_j = τ_j(a)`.
pub fn gelfand_transform(a: &AlgebraElement, cs: &CharacterSet) -> Result<Vec<C64>> {
    match &cs.algebra {
        Some(alg) if Arc::ptr_eq(alg, a.algebra()) => {}
        _ => return Err(Error::AlgebraMismatch),
    }
    Ok(cs.characters.iter().map(|row| row.iter().zip(a.coeffs()).map(|(t, x)| t * x).sum()).collect())
}

/// Probability vector `μ` with `ψ = Σ_j μ_j τ_j`.
pub fn bochner_measure(psi: &LinearFunctional, cs: &CharacterSet, tol: f64) -> Result<Vec<f64>> {
    match &cs.algebra {
        Some(alg) if Arc::ptr_eq(alg, psi.algebra()) => {}
        _ => return Err(Error::AlgebraMismatch),
    }
    let v = variation(psi, tol).map_err(|e| match e {
        Error::NotPositiveFunctional { min_eigenvalue } => Error::NotAState(format!("Gram eigenvalue {min_eigenvalue:.3e}")),
        other => other,
    })?;
    if (v - 1.0).abs() > tol {
        return Err(Error::NotAState(format!("variation {v}")));
    }
    let d = psi.algebra().dim();
    let k = cs.len();
    let m = CMatrix::from_fn(d, k, |i, j| cs.characters[j][i]);
    let rhs = CMatrix::column_vector(psi.row());
    let mu = lstsq(&m, &rhs, 1e-12);
    let residual = (&(&m * &mu) - &rhs).frobenius_norm();
    if residual > tol * (1.0 + vec_norm(psi.row())) {
        return Err(Error::InconsistentSystem { residual });
    }
    let mu = mu.column(0);
    if let Some(bad) = mu.iter().find(|z| z.re < -tol || z.im.abs() > tol) {
        return Err(Error::NotAState(format!("weight {bad}")));
    }
    let clamped: Vec<f64> = mu.iter().map(|z| z.re.max(0.0)).collect();
    let total: f64 = clamped.iter().sum();
    if (total - 1.0).abs() > tol {
        return Err(Error::NotAState(format!("total mass {total}")));
    }
    Ok(clamped.into_iter().map(|w| w / total).collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::{groups, NormSpec};
    use crate::linalg::{c, ONE, ZERO};
    use crate::spectrum::spectral_radius;
    use std::f64::consts::PI;

    #[test]
    fn diagonal_characters_are_coordinates() {
        let d3 = StarAlgebra::diagonal(3);
        let cs = characters(&d3, 1).unwrap();
        assert_eq!(cs.len(), 3);
        let mut rows = cs.characters.clone();
        rows.sort_by_key(|r| r.iter().position(|z| *z != ZERO));
        for (j, row) in rows.iter().enumerate() {
            for (i, z) in row.iter().enumerate() {
                assert!((z - if i == j { ONE } else { ZERO }).norm() < 1e-12);
            }
        }
        assert!(cs.all_hermitian());
    }

    #[test]
    fn cyclic_group_gives_dft() {
        // τ(δ₁)³ = τ(δ₀) = 1, so τ(δ₁) runs over the cube roots of unity
        let z3 = groups::cyclic(3);
        let cs = characters(&z3, 4).unwrap();
        let mut values: Vec<C64> = cs.characters.iter().map(|r| r[1]).collect();
        values.sort_by(|a, b| a.arg().total_cmp(&b.arg()));
        let expect = [C64::from_polar(1.0, -2.0 * PI / 3.0), ONE, C64::from_polar(1.0, 2.0 * PI / 3.0)];
        for (v, e) in values.iter().zip(expect) {
            assert!((v - e).norm() < 1e-10);
        }
        for r in &cs.characters {
            assert!((r[0] - ONE).norm() < 1e-12);
            assert!((r[2] - r[1] * r[1]).norm() < 1e-10);
        }
    }

    #[test]
    fn transform_examples() {
        let z3 = groups::cyclic(3);
        let cs = characters(&z3, 4).unwrap();
        let e = AlgebraElement::unit(&z3).unwrap();
        for v in gelfand_transform(&e, &cs).unwrap() {
            assert!((v - ONE).norm() < 1e-12);
        }
        let mut rng = random::rng(8);
        let a = random::element(&mut rng, &z3);
        let b = random::element(&mut rng, &z3);
        let ab = gelfand_transform(&a.mul(&b).unwrap(), &cs).unwrap();
        let ha = gelfand_transform(&a, &cs).unwrap();
        let hb = gelfand_transform(&b, &cs).unwrap();
        for k in 0..3 {
            assert!((ab[k] - ha[k] * hb[k]).norm() < 1e-10);
        }
        let sup = ha.iter().map(|z| z.norm()).fold(0.0, f64::max);
        assert!((sup - spectral_radius(&a).unwrap()).abs() < 1e-8);
    }

    #[test]
    fn nilpotent_extension_is_degenerate() {
        // basis {e, n}: e unit, n² = 0, n* = n
        let mut cs = vec![ZERO; 8];
        let idx = |i: usize, j: usize, k: usize| (i * 2 + j) * 2 + k;
        cs[idx(0, 0, 0)] = ONE;
        cs[idx(0, 1, 1)] = ONE;
        cs[idx(1, 0, 1)] = ONE;
        let alg = StarAlgebra::from_structure(vec!["e".into(), "n".into()], cs, CMatrix::identity(2), NormSpec::L1, None)
            .unwrap();
        match characters(&alg, 1) {
            Err(Error::DegenerateAfterRetries { attempts, witness, witness_norm }) => {
                assert_eq!(attempts, 20);
                assert!(witness_norm > 0.0);
                assert!(witness[0].norm() < 1e-10, "witness is a multiple of n");
            }
            other => panic!("expected degeneracy, got {other:?}"),
        }
    }

    #[test]
    fn bochner_examples() {
        let d3 = StarAlgebra::diagonal(3);
        let cs = characters(&d3, 1).unwrap();
        let uniform = LinearFunctional::new(&d3, vec![c(1.0 / 3.0, 0.0); 3]).unwrap();
        for w in bochner_measure(&uniform, &cs, 1e-9).unwrap() {
            assert!((w - 1.0 / 3.0).abs() < 1e-12);
        }
        let tau0 = cs.functional(0).unwrap();
        let mu = bochner_measure(&tau0, &cs, 1e-9).unwrap();
        assert!((mu[0] - 1.0).abs() < 1e-12 && mu[1].abs() < 1e-12 && mu[2].abs() < 1e-12);
    }

    #[test]
    fn bochner_on_cyclic_group() {
        // ψ(δ_k) = 0.5 + 0.5 cos(2πk/3) = Σ_j μ_j ω^{jk}: μ₀ = 0.5, μ₁ = μ₂ = 0.25
        let z3 = groups::cyclic(3);
        let cs = characters(&z3, 2).unwrap();
        let row: Vec<C64> = (0..3).map(|k| c(0.5 + 0.5 * (2.0 * PI * k as f64 / 3.0).cos(), 0.0)).collect();
        let psi = LinearFunctional::new(&z3, row).unwrap();
        let mu = bochner_measure(&psi, &cs, 1e-9).unwrap();
        for (row, w) in cs.characters.iter().zip(&mu) {
            let expect = if (row[1] - ONE).norm() < 1e-9 { 0.5 } else { 0.25 };
            assert!((w - expect).abs() < 1e-10);
        }
    }

    #[test]
    fn bochner_rejects_non_states() {
        let d3 = StarAlgebra::diagonal(3);
        let cs = characters(&d3, 1).unwrap();
        let twice = LinearFunctional::new(&d3, vec![c(2.0, 0.0), ZERO, ZERO]).unwrap();
        assert!(matches!(bochner_measure(&twice, &cs, 1e-9), Err(Error::NotAState(_))));
        let signed = LinearFunctional::new(&d3, vec![c(2.0, 0.0), c(-1.0, 0.0), ZERO]).unwrap();
        assert!(matches!(bochner_measure(&signed, &cs, 1e-9), Err(Error::NotAState(_))));
    }
}
