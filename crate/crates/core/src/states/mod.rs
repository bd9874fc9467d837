//! Linear functionals on a *-algebra: positivity, variation, the GNS
//! construction, purity, the Gelfand–Naimark seminorm and cyclic
//! decomposition of representations.

mod cyclic;
mod gns;
mod seminorm;

use std::sync::Arc;

use rand::Rng;
use serde::Serialize;

use crate::algebra::{AlgebraElement, StarAlgebra};
use crate::error::{Error, Result};
use crate::linalg::{herm_eig, lstsq, CMatrix, C64, ZERO};
use crate::random;

pub use cyclic::{decompose_cyclic, invariance_residual, CyclicPiece};
pub use gns::{gns, intertwiner, is_pure, GnsResult, Intertwiner, PurityVerdict};
pub use seminorm::{enveloping_seminorm, universal_norm_check, EnvelopingSeminorm, SeminormResult};

/// `φ(a) = Σ_i row_i a_i`.
#[derive(Debug, Clone)]
pub struct LinearFunctional {
    algebra: Arc<StarAlgebra>,
    row: Vec<C64>,
}

impl LinearFunctional {
    pub fn new(algebra: &Arc<StarAlgebra>, row: Vec<C64>) -> Result<Self> {
        if row.len() != algebra.dim() {
            return Err(Error::DimensionMismatch {
                expected: format!("{} entries", algebra.dim()),
                found: row.len().to_string(),
            });
        }
        if row.iter().any(|z| !z.re.is_finite() || !z.im.is_finite()) {
            return Err(Error::NonFinite);
        }
        Ok(Self { algebra: Arc::clone(algebra), row })
    }

    pub fn zero(algebra: &Arc<StarAlgebra>) -> Self {
        Self { algebra: Arc::clone(algebra), row: vec![ZERO; algebra.dim()] }
    }

    /// `φ(e_i) = tr(ρ π(e_i))` for the realisation `π`.
    pub fn from_density(algebra: &Arc<StarAlgebra>, rho: &CMatrix) -> Result<Self> {
        let r = algebra.realization().ok_or(Error::NoRealization)?;
        let row = r.iter().map(|ri| (rho * ri).trace()).collect();
        Self::new(algebra, row)
    }

    /// Vector functional `a ↦ ⟨π(a)x, x⟩` of the realisation.
    pub fn vector_state(algebra: &Arc<StarAlgebra>, x: &[C64]) -> Result<Self> {
        let rho = CMatrix::from_fn(x.len(), x.len(), |i, j| x[i] * x[j].conj());
        Self::from_density(algebra, &rho)
    }

    pub fn algebra(&self) -> &Arc<StarAlgebra> {
        &self.algebra
    }

    pub fn row(&self) -> &[C64] {
        &self.row
    }

    pub fn eval(&self, a: &AlgebraElement) -> Result<C64> {
        if !Arc::ptr_eq(a.algebra(), &self.algebra) {
            return Err(Error::AlgebraMismatch);
        }
        Ok(self.eval_coeffs(a.coeffs()))
    }

    pub(crate) fn eval_coeffs(&self, coeffs: &[C64]) -> C64 {
        self.row.iter().zip(coeffs).map(|(r, a)| r * a).sum()
    }

    pub fn plus(&self, other: &Self) -> Result<Self> {
        if !Arc::ptr_eq(&self.algebra, &other.algebra) {
            return Err(Error::AlgebraMismatch);
        }
        Ok(Self { algebra: Arc::clone(&self.algebra), row: self.row.iter().zip(&other.row).map(|(a, b)| a + b).collect() })
    }

    pub fn scale(&self, z: C64) -> Self {
        Self { algebra: Arc::clone(&self.algebra), row: self.row.iter().map(|r| r * z).collect() }
    }

    /// `G[i][j] = φ(e_j* e_i)`.
    pub fn gram(&self) -> Result<CMatrix> {
        Ok(self.inner_matrix()?.transpose())
    }

    /// `H[i][j] = φ(e_i* e_j)`, so that `⟨x, y⟩_φ = φ(y*x) = y* H x` in coordinates.
    pub(crate) fn inner_matrix(&self) -> Result<CMatrix> {
        let d = self.algebra.dim();
        let adj: Vec<AlgebraElement> = (0..d).map(|i| AlgebraElement::basis(&self.algebra, i).adjoint()).collect();
        let mut h = CMatrix::zeros(d, d);
        for (i, ai) in adj.iter().enumerate() {
            for j in 0..d {
                let p = ai.mul(&AlgebraElement::basis(&self.algebra, j))?;
                h[(i, j)] = self.eval_coeffs(p.coeffs());
            }
        }
        Ok(h)
    }

    /// `max_i |φ(e_i*) − conj(φ(e_i))|`.
    pub fn hermitian_residual(&self) -> f64 {
        (0..self.algebra.dim())
            .map(|i| {
                let adj = AlgebraElement::basis(&self.algebra, i).adjoint();
                (self.eval_coeffs(adj.coeffs()) - self.row[i].conj()).norm()
            })
            .fold(0.0, f64::max)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct FunctionalPositivity {
    pub positive: bool,
    /// Most negative eigenvalue of the Hermitian part of the Gram matrix.
    pub min_eigenvalue: f64,
    pub gram_hermitian_residual: f64,
}

/// Whether the Gram matrix `φ(e_j* e_i)` is Hermitian positive semidefinite.
pub fn is_positive_functional(phi: &LinearFunctional, tol: f64) -> Result<FunctionalPositivity> {
    let g = phi.gram()?;
    let scale = 1.0 + g.frobenius_norm();
    let gram_hermitian_residual = g.hermitian_residual();
    let eig = herm_eig(&g.hermitian_part(), tol)?;
    let min_eigenvalue = eig.real_eigenvalues().into_iter().fold(f64::INFINITY, f64::min);
    let positive = gram_hermitian_residual <= tol * scale && min_eigenvalue >= -tol * scale;
    Ok(FunctionalPositivity { positive, min_eigenvalue, gram_hermitian_residual })
}

pub(crate) fn require_positive(phi: &LinearFunctional, tol: f64) -> Result<()> {
    let p = is_positive_functional(phi, tol)?;
    if p.positive {
        Ok(())
    } else {
        Err(Error::NotPositiveFunctional { min_eigenvalue: p.min_eigenvalue })
    }
}

/// Smallest `v` with `|φ(a)|² ≤ v φ(a*a)`.
///
/// Unital algebras give `φ(e)`. Otherwise, with `w = conj(row)`, the
/// supremum of `|w* x|² / x* H x` is `w* H⁺ w`, finite exactly when `w`
/// lies in the range of `H`.
pub fn variation(phi: &LinearFunctional, tol: f64) -> Result<f64> {
    require_positive(phi, tol)?;
    if let Some(u) = phi.algebra.unit_coords() {
        return Ok(phi.eval_coeffs(u).re);
    }
    let h = phi.inner_matrix()?.hermitian_part();
    let w: Vec<C64> = phi.row.iter().map(|z| z.conj()).collect();
    let wn = crate::linalg::vec_norm(&w);
    if wn == 0.0 {
        return Ok(0.0);
    }
    let x = lstsq(&h, &CMatrix::column_vector(&w), tol);
    let back = &h * &x;
    let miss: f64 = back.column(0).iter().zip(&w).map(|(a, b)| (a - b).norm_sqr()).sum::<f64>().sqrt();
    if miss > 1e-8 * wn {
        return Err(Error::InfiniteVariation);
    }
    Ok(crate::linalg::inner(&x.column(0), &w).re)
}

/// Random positive functional `tr(ρ π(·))` of the realisation with `ρ` of the
/// given rank supported on the essential subspace, normalised to `tr ρ = 1`.
pub fn random_positive_functional(rng: &mut impl Rng, algebra: &Arc<StarAlgebra>, rank: usize) -> Result<LinearFunctional> {
    let q = algebra.essential_basis().ok_or(Error::NoRealization)?;
    let n = q.rows();
    let mut rho = CMatrix::zeros(n, n);
    for _ in 0..rank.max(1) {
        let x = q.mul_vec(&random::gaussian_vector(rng, q.cols()));
        let w = random::uniform(rng, 0.1, 1.0);
        rho += &CMatrix::from_fn(n, n, |i, j| x[i] * x[j].conj() * w);
    }
    let t = rho.trace().re;
    LinearFunctional::from_density(algebra, &rho.scale_real(1.0 / t))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::{groups, NormSpec};
    use crate::linalg::ONE;

    fn entry_functional(alg: &Arc<StarAlgebra>, label: &str, value: C64) -> LinearFunctional {
        let mut row = vec![ZERO; alg.dim()];
        row[alg.label_index(label).unwrap()] = value;
        LinearFunctional::new(alg, row).unwrap()
    }

    #[test]
    fn positivity_examples() {
        let m2 = StarAlgebra::full_matrix(2);
        let trace = LinearFunctional::from_density(&m2, &CMatrix::identity(2)).unwrap();
        assert!(is_positive_functional(&trace, 1e-9).unwrap().positive);

        // φ(a) = a₁₂ reads the coefficient of e12
        let off = entry_functional(&m2, "e12", ONE);
        let p = is_positive_functional(&off, 1e-9).unwrap();
        assert!(!p.positive);

        assert!(is_positive_functional(&LinearFunctional::zero(&m2), 1e-9).unwrap().positive);
    }

    #[test]
    fn off_diagonal_gram_oracle() {
        // G[i][j] = φ(e_j* e_i) with e_j* e_i = e_{ba} e_{cd} = δ_{ac} e_{bd} for e_j = e_{ab}, e_i = e_{cd}.
        // φ picks the (1,2) entry, so G[i][j] = 1 iff j = e_{a1}, i = e_{a2}: pairs (e12,e11) and (e22,e21).
        let m2 = StarAlgebra::full_matrix(2);
        let g = entry_functional(&m2, "e12", ONE).gram().unwrap();
        let idx = |l: &str| m2.label_index(l).unwrap();
        for i in 0..4 {
            for j in 0..4 {
                let expect = (i == idx("e12") && j == idx("e11")) || (i == idx("e22") && j == idx("e21"));
                assert_eq!(g[(i, j)], if expect { ONE } else { ZERO });
            }
        }
    }

    #[test]
    fn variation_examples() {
        let m2 = StarAlgebra::full_matrix(2);
        assert_eq!(variation(&entry_functional(&m2, "e11", ONE), 1e-9).unwrap(), 1.0);
        let trace = LinearFunctional::from_density(&m2, &CMatrix::identity(2)).unwrap();
        assert_eq!(variation(&trace, 1e-9).unwrap(), 2.0);
        assert_eq!(variation(&LinearFunctional::zero(&m2), 1e-9).unwrap(), 0.0);
    }

    #[test]
    fn non_unital_variation() {
        // ℂn with n² = 0: φ(n) = 1 but φ(n*n) = 0
        let nil = StarAlgebra::from_structure(vec!["n".into()], vec![ZERO], CMatrix::identity(1), NormSpec::L1, None)
            .unwrap();
        let phi = LinearFunctional::new(&nil, vec![ONE]).unwrap();
        assert_eq!(variation(&phi, 1e-9).unwrap_err(), Error::InfiniteVariation);
        let zero = LinearFunctional::new(&nil, vec![ZERO]).unwrap();
        assert_eq!(variation(&zero, 1e-9).unwrap(), 0.0);
    }

    #[test]
    fn positive_functionals_are_hermitian() {
        let mut rng = random::rng(3);
        for alg in [StarAlgebra::full_matrix(3), groups::symmetric(3)] {
            for rank in 1..4 {
                let phi = random_positive_functional(&mut rng, &alg, rank).unwrap();
                assert!(phi.hermitian_residual() < 1e-12);
                assert!(is_positive_functional(&phi, 1e-9).unwrap().positive);
                assert!((variation(&phi, 1e-9).unwrap() - 1.0).abs() < 1e-12);
            }
        }
    }
}
