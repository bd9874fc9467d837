use crate::algebra::Representation;
use crate::error::{Error, Result};
use crate::linalg::{op_norm, range_basis, vec_norm, CMatrix, C64};

/// Invariant subspace `closure(π(A)c)` with its orthogonal projection.
#[derive(Debug, Clone)]
pub struct CyclicPiece {
    pub projection: CMatrix,
    /// Orthonormal basis of the subspace, as columns.
    pub basis: CMatrix,
    pub cyclic_vector: Vec<C64>,
}

/// Orthogonal decomposition of a non-degenerate representation into cyclic
/// subrepresentations, seeded greedily by standard basis vectors.
pub fn decompose_cyclic(pi: &Representation, tol: f64) -> Result<Vec<CyclicPiece>> {
    let n = pi.space_dim();
    if !pi.is_nondegenerate() {
        let stacked = CMatrix::from_fn(n, n * pi.matrices().len(), |i, j| pi.matrices()[j / n][(i, j % n)]);
        return Err(Error::Degenerate { rank: range_basis(&stacked, 1e-10).cols(), dim: n });
    }
    let mut pieces: Vec<CyclicPiece> = Vec::new();
    let mut rest = CMatrix::identity(n);
    let mut covered = 0;
    while covered < n {
        let Some(c) = (0..n).map(|k| rest.column(k)).find(|v| vec_norm(v) > 1e-6) else {
            break;
        };
        let nrm = vec_norm(&c);
        let c: Vec<C64> = c.into_iter().map(|z| z / nrm).collect();
        let orbit: Vec<Vec<C64>> = pi.matrices().iter().map(|m| m.mul_vec(&c)).collect();
        let basis = range_basis(&CMatrix::from_columns(&orbit, n), tol);
        if basis.cols() == 0 {
            return Err(Error::Degenerate { rank: covered, dim: n });
        }
        let projection = &basis * &basis.adjoint();
        rest = &rest - &projection;
        covered += basis.cols();
        pieces.push(CyclicPiece { projection, basis, cyclic_vector: c });
    }
    Ok(pieces)
}

/// `max_{piece, i} ‖(1 − p) π(e_i) p‖`.
pub fn invariance_residual(pi: &Representation, pieces: &[CyclicPiece]) -> f64 {
    let n = pi.space_dim();
    let mut worst: f64 = 0.0;
    for piece in pieces {
        let comp = &CMatrix::identity(n) - &piece.projection;
        for m in pi.matrices() {
            worst = worst.max(op_norm(&(&(&comp * m) * &piece.projection)));
        }
    }
    worst
}
