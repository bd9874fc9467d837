use std::sync::Arc;

use super::{AlgebraElement, Product, StarAlgebra};
use crate::error::{Error, Result};
use crate::linalg::{eps_rank, op_norm, CMatrix, ZERO};

/// Relative residual allowed in the homomorphism and adjoint identities.
const REP_TOL: f64 = 1e-9;

/// Basis element ↦ square matrix, multiplicative and *-preserving.
#[derive(Debug, Clone)]
pub struct Representation {
    algebra: Arc<StarAlgebra>,
    matrices: Vec<CMatrix>,
    space_dim: usize,
    nondegenerate: bool,
}

impl Representation {
    /// Validates `π(e_i e_j) = π(e_i)π(e_j)` and `π(e_i*) = π(e_i)*`.
    pub fn new(algebra: &Arc<StarAlgebra>, matrices: Vec<CMatrix>) -> Result<Self> {
        if matrices.len() != algebra.dim() {
            return Err(Error::DimensionMismatch {
                expected: format!("{} matrices", algebra.dim()),
                found: matrices.len().to_string(),
            });
        }
        let n = matrices[0].rows();
        if matrices.iter().any(|m| m.rows() != n || m.cols() != n) {
            return Err(Error::DimensionMismatch { expected: format!("{n}x{n} matrices"), found: "mixed shapes".into() });
        }
        let rep = Self::unchecked(algebra, matrices);
        let scale = rep.matrices.iter().map(op_norm).fold(1.0, f64::max);
        let residual = rep.hom_residual().max(rep.star_residual());
        if residual > REP_TOL * scale * scale {
            return Err(Error::NotARepresentation { residual });
        }
        Ok(rep)
    }

    pub(crate) fn unchecked(algebra: &Arc<StarAlgebra>, matrices: Vec<CMatrix>) -> Self {
        let n = matrices.first().map_or(0, CMatrix::rows);
        let stacked = CMatrix::from_fn(n, n * matrices.len(), |i, j| matrices[j / n][(i, j % n)]);
        let nondegenerate = n > 0 && eps_rank(&stacked, 1e-10) == n;
        Self { algebra: Arc::clone(algebra), matrices, space_dim: n, nondegenerate }
    }

    pub fn algebra(&self) -> &Arc<StarAlgebra> {
        &self.algebra
    }

    pub fn matrices(&self) -> &[CMatrix] {
        &self.matrices
    }

    pub fn space_dim(&self) -> usize {
        self.space_dim
    }

    /// Whether the ranges of the `π(e_i)` span the whole space.
    pub fn is_nondegenerate(&self) -> bool {
        self.nondegenerate
    }

    pub fn apply(&self, a: &AlgebraElement) -> Result<CMatrix> {
        if !Arc::ptr_eq(a.algebra(), &self.algebra) {
            return Err(Error::AlgebraMismatch);
        }
        let mut m = CMatrix::zeros(self.space_dim, self.space_dim);
        for (z, pi) in a.coeffs().iter().zip(&self.matrices) {
            if *z != ZERO {
                m += &pi.scale(*z);
            }
        }
        Ok(m)
    }

    /// Conjugate by a unitary: `π'(a) = u π(a) u*`.
    pub fn conjugated(&self, u: &CMatrix) -> Self {
        let matrices = self.matrices.iter().map(|m| &(u * m) * &u.adjoint()).collect();
        Self::unchecked(&self.algebra, matrices)
    }

    /// `max_{i,j} ‖π(e_i)π(e_j) − π(e_i e_j)‖`, skipping products outside a ℤ window.
    pub fn hom_residual(&self) -> f64 {
        let d = self.algebra.dim();
        let n = self.space_dim;
        let mut worst: f64 = 0.0;
        for i in 0..d {
            for j in 0..d {
                let lhs = &self.matrices[i] * &self.matrices[j];
                let mut rhs = CMatrix::zeros(n, n);
                match self.algebra.product() {
                    Product::Dense(_) => {
                        for k in 0..d {
                            let c = self.algebra.structure_constant(i, j, k).expect("dense");
                            if c != ZERO {
                                rhs += &self.matrices[k].scale(c);
                            }
                        }
                    }
                    Product::IntWindow { .. } => {
                        let Some(k) = (0..d).find(|&k| self.algebra.structure_constant(i, j, k) == Some(crate::linalg::ONE))
                        else {
                            continue;
                        };
                        rhs = self.matrices[k].clone();
                    }
                }
                worst = worst.max((&lhs - &rhs).frobenius_norm());
            }
        }
        worst
    }

    /// `max_i ‖π(e_i*) − π(e_i)*‖`.
    pub fn star_residual(&self) -> f64 {
        let d = self.algebra.dim();
        (0..d)
            .map(|i| {
                let adj = AlgebraElement::basis(&self.algebra, i).adjoint();
                let lhs = self.apply(&adj).expect("same algebra");
                (&lhs - &self.matrices[i].adjoint()).frobenius_norm()
            })
            .fold(0.0, f64::max)
    }
}

/// Left regular representation `L_a x = ax` on ℂ^dim.
///
/// This is a *-representation only when the basis is orthonormal for an
/// invariant inner product (group rings, matrix units); it is returned
/// without the adjoint check.
pub fn regular_rep(algebra: &Arc<StarAlgebra>) -> Result<Representation> {
    if !algebra.is_unital() {
        return Err(Error::NotUnital);
    }
    let matrices = (0..algebra.dim()).map(|i| algebra.left_mult_matrix(i)).collect::<Result<Vec<_>>>()?;
    let rep = Representation::unchecked(algebra, matrices);
    let scale = rep.matrices.iter().map(op_norm).fold(1.0, f64::max);
    let residual = rep.hom_residual();
    if residual > REP_TOL * scale * scale {
        return Err(Error::NotARepresentation { residual });
    }
    Ok(rep)
}
