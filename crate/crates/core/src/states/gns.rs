use std::sync::Arc;

use serde::Serialize;

use super::{require_positive, variation, LinearFunctional};
use crate::algebra::{Representation, StarAlgebra};
use crate::error::{Error, Result};
use crate::linalg::{eps_rank, herm_eig, inner, lstsq, op_norm, CMatrix, C64};
use crate::spectral::commutant;

/// Hilbert space `H_φ`, the representation `π_φ` on it and the cyclic vector.
#[derive(Debug, Clone)]
pub struct GnsResult {
    pub rep: Representation,
    pub cyclic_vector: Vec<C64>,
    pub gram_rank: usize,
    pub variation: f64,
    /// `max_i |φ(e_i) − ⟨π(e_i)c, c⟩|`.
    pub reconstruction_residual: f64,
}

/// GNS construction in coordinates.
///
/// The quotient by the isotropic subspace is represented by the Gram
/// eigenvectors with eigenvalue above `tol·λ_max`, rescaled to be
/// orthonormal for `⟨x, y⟩ = φ(y*x)`.
pub fn gns(phi: &LinearFunctional, tol: f64) -> Result<GnsResult> {
    require_positive(phi, tol)?;
    let variation = variation(phi, tol)?;
    let alg = phi.algebra();
    let d = alg.dim();
    let h = phi.inner_matrix()?.hermitian_part();
    let eig = herm_eig(&h, tol)?;
    let lambdas = eig.real_eigenvalues();
    let top = lambdas.iter().cloned().fold(0.0, f64::max);
    let keep: Vec<usize> = (0..d).filter(|&k| top > 0.0 && lambdas[k] > tol * top).collect();
    let r = keep.len();
    let f = CMatrix::from_fn(d, r, |i, m| eig.basis[(i, keep[m])] / lambdas[keep[m]].sqrt());
    let fh = f.adjoint();
    let fh_h = &fh * &h;

    let mut matrices = Vec::with_capacity(d);
    for i in 0..d {
        let l = alg.left_mult_matrix(i)?;
        matrices.push(&(&fh_h * &l) * &f);
    }
    let cyclic_vector: Vec<C64> = (0..r).map(|m| phi.eval_coeffs(&f.column(m)).conj()).collect();
    let rep = if r == 0 { Representation::unchecked(alg, matrices) } else { Representation::new(alg, matrices)? };

    let reconstruction_residual = rep
        .matrices()
        .iter()
        .zip(phi.row())
        .map(|(p, v)| (inner(&p.mul_vec(&cyclic_vector), &cyclic_vector) - v).norm())
        .fold(0.0, f64::max);
    Ok(GnsResult { rep, cyclic_vector, gram_rank: r, variation, reconstruction_residual })
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct PurityVerdict {
    pub pure: bool,
    pub commutant_dim: usize,
}

/// A state is pure iff its GNS representation has trivial commutant.
pub fn is_pure(phi: &LinearFunctional, tol: f64) -> Result<PurityVerdict> {
    let v = variation(phi, tol)?;
    if (v - 1.0).abs() > tol.max(1e-9) {
        return Err(Error::NotAState(format!("variation {v}")));
    }
    let g = gns(phi, tol)?;
    let commutant_dim = commutant(g.rep.matrices(), tol)?.basis.len();
    Ok(PurityVerdict { pure: commutant_dim == 1, commutant_dim })
}

/// Unitary `U` with `U π₁(a) c₁ = π₂(a) c₂`, built on the cyclic spans.
#[derive(Debug, Clone)]
pub struct Intertwiner {
    pub unitary: CMatrix,
    pub unitary_residual: f64,
    /// `max_i ‖U π₁(e_i) − π₂(e_i) U‖`.
    pub intertwining_residual: f64,
}

/// Spatial equivalence of two cyclic representations with equal vector
/// states. `c₁`, `c₂` must be cyclic.
pub fn intertwiner(pi1: &Representation, c1: &[C64], pi2: &Representation, c2: &[C64], tol: f64) -> Result<Intertwiner> {
    if !Arc::ptr_eq(pi1.algebra(), pi2.algebra()) {
        return Err(Error::AlgebraMismatch);
    }
    let alg: &Arc<StarAlgebra> = pi1.algebra();
    let orbit = |pi: &Representation, c: &[C64]| {
        let mut cols: Vec<Vec<C64>> = pi.matrices().iter().map(|m| m.mul_vec(c)).collect();
        if !alg.is_unital() {
            cols.push(c.to_vec());
        }
        CMatrix::from_columns(&cols, pi.space_dim())
    };
    let x1 = orbit(pi1, c1);
    let x2 = orbit(pi2, c2);
    for (x, n) in [(&x1, pi1.space_dim()), (&x2, pi2.space_dim())] {
        let rank = eps_rank(x, tol);
        if rank != n {
            return Err(Error::NotCyclic { rank, dim: n });
        }
    }
    // U X₁ = X₂  ⇔  X₁* U* = X₂*
    let u = lstsq(&x1.adjoint(), &x2.adjoint(), tol).adjoint();
    let intertwining_residual = pi1
        .matrices()
        .iter()
        .zip(pi2.matrices())
        .map(|(a, b)| op_norm(&(&(&u * a) - &(b * &u))))
        .fold(0.0, f64::max);
    let unitary_residual = u.unitary_residual();
    Ok(Intertwiner { unitary: u, unitary_residual, intertwining_residual })
}
