use super::{c, cluster_points, lex_cmp, require_square, CMatrix, C64, ZERO};
use crate::error::{Error, Result};

const MAX_SWEEPS: usize = 100;

/// Eigenvalues sorted lexicographically on (re, im) with a unitary matrix of
/// column eigenvectors in the same order.
#[derive(Debug, Clone)]
pub struct EigenSystem {
    pub eigenvalues: Vec<C64>,
    pub basis: CMatrix,
}

impl EigenSystem {
    /// `U diag(λ) U*`.
    pub fn reconstruct(&self) -> CMatrix {
        self.apply(|z| z)
    }

    /// `U diag(f(λ)) U*`.
    pub fn apply(&self, f: impl Fn(C64) -> C64) -> CMatrix {
        let n = self.basis.rows();
        let u = &self.basis;
        let vals: Vec<C64> = self.eigenvalues.iter().map(|&z| f(z)).collect();
        CMatrix::from_fn(n, n, |i, j| {
            (0..vals.len()).map(|k| u[(i, k)] * vals[k] * u[(j, k)].conj()).sum()
        })
    }

    pub fn real_eigenvalues(&self) -> Vec<f64> {
        self.eigenvalues.iter().map(|z| z.re).collect()
    }
}

/// Hermitian eigendecomposition by cyclic complex Jacobi rotations.
pub fn herm_eig(a: &CMatrix, tol: f64) -> Result<EigenSystem> {
    let n = require_square(a)?;
    if !a.is_finite() {
        return Err(Error::NonFinite);
    }
    let norm = a.frobenius_norm();
    let residual = (a - &a.adjoint()).frobenius_norm();
    if residual > tol * norm.max(f64::MIN_POSITIVE) && residual > 0.0 {
        return Err(Error::NotHermitian { residual });
    }
    let mut m = a.hermitian_part();
    let mut v = CMatrix::identity(n);
    if n == 0 || norm == 0.0 {
        return Ok(EigenSystem { eigenvalues: vec![ZERO; n], basis: v });
    }

    let mut converged = false;
    for _ in 0..MAX_SWEEPS {
        let off: f64 = (0..n)
            .flat_map(|i| (0..n).filter(move |&j| j != i).map(move |j| (i, j)))
            .map(|(i, j)| m[(i, j)].norm_sqr())
            .sum::<f64>()
            .sqrt();
        if off <= f64::EPSILON * 1e-2 * norm {
            converged = true;
            break;
        }
        for p in 0..n {
            for q in p + 1..n {
                rotate(&mut m, &mut v, p, q);
            }
        }
    }
    if !converged {
        // One more check: Jacobi stalls only at rounding level.
        let off: f64 = (0..n)
            .flat_map(|i| (0..n).filter(move |&j| j != i).map(move |j| (i, j)))
            .map(|(i, j)| m[(i, j)].norm_sqr())
            .sum::<f64>()
            .sqrt();
        if off > 1e-13 * norm {
            return Err(Error::NoConvergence { iterations: MAX_SWEEPS });
        }
    }

    let mut pairs: Vec<(f64, Vec<C64>)> = (0..n).map(|k| (m[(k, k)].re, v.column(k))).collect();
    pairs.sort_by(|x, y| x.0.total_cmp(&y.0));
    let eigenvalues = pairs.iter().map(|(l, _)| c(*l, 0.0)).collect();
    let cols: Vec<Vec<C64>> = pairs.into_iter().map(|(_, col)| col).collect();
    Ok(EigenSystem { eigenvalues, basis: CMatrix::from_columns(&cols, n) })
}

/// Annihilates `m[p][q]` with a unitary rotation acting on rows/columns p, q.
fn rotate(m: &mut CMatrix, v: &mut CMatrix, p: usize, q: usize) {
    let apq = m[(p, q)];
    let r = apq.norm();
    let small = f64::EPSILON * 1e-3 * (m[(p, p)].norm() + m[(q, q)].norm());
    if r == 0.0 || r < small {
        if r != 0.0 {
            m[(p, q)] = ZERO;
            m[(q, p)] = ZERO;
        }
        return;
    }
    let phase = apq / r;
    let app = m[(p, p)].re;
    let aqq = m[(q, q)].re;
    let tau = (aqq - app) / (2.0 * r);
    let t = if tau >= 0.0 {
        1.0 / (tau + (1.0 + tau * tau).sqrt())
    } else {
        -1.0 / (-tau + (1.0 + tau * tau).sqrt())
    };
    let cs = 1.0 / (1.0 + t * t).sqrt();
    let sn = t * cs;
    // G = diag(1, conj(phase)) · [[c, s], [-s, c]]
    let g_pp = c(cs, 0.0);
    let g_pq = c(sn, 0.0);
    let g_qp = -phase.conj() * sn;
    let g_qq = phase.conj() * cs;

    let n = m.rows();
    // m <- m G (columns p, q)
    for i in 0..n {
        let mp = m[(i, p)];
        let mq = m[(i, q)];
        m[(i, p)] = mp * g_pp + mq * g_qp;
        m[(i, q)] = mp * g_pq + mq * g_qq;
    }
    // m <- G* m (rows p, q)
    for j in 0..n {
        let mp = m[(p, j)];
        let mq = m[(q, j)];
        m[(p, j)] = g_pp.conj() * mp + g_qp.conj() * mq;
        m[(q, j)] = g_pq.conj() * mp + g_qq.conj() * mq;
    }
    m[(p, q)] = ZERO;
    m[(q, p)] = ZERO;
    m[(p, p)] = c(m[(p, p)].re, 0.0);
    m[(q, q)] = c(m[(q, q)].re, 0.0);
    for i in 0..n {
        let vp = v[(i, p)];
        let vq = v[(i, q)];
        v[(i, p)] = vp * g_pp + vq * g_qp;
        v[(i, q)] = vp * g_pq + vq * g_qq;
    }
}

/// Unitary diagonalisation of a normal matrix.
///
/// The Hermitian parts `(c + c*)/2` and `(c − c*)/2i` of `c = e^{-iθ} b`
/// commute; the first is diagonalised, and each of its eigenspaces is split
/// by the second restricted to it. The small rotation θ keeps accidental
/// real-part ties away from the clustering threshold.
pub fn normal_diag(b: &CMatrix, tol: f64) -> Result<EigenSystem> {
    let n = require_square(b)?;
    if !b.is_finite() {
        return Err(Error::NonFinite);
    }
    let norm = b.frobenius_norm();
    if n == 0 || norm == 0.0 {
        return Ok(EigenSystem { eigenvalues: vec![ZERO; n], basis: CMatrix::identity(n) });
    }
    let adj = b.adjoint();
    let residual = (&(b * &adj) - &(&adj * b)).frobenius_norm();
    if residual > tol * norm * norm {
        return Err(Error::NotNormal { residual });
    }

    const THETA: f64 = 0.3141592653589793 * 0.7;
    let rot = C64::from_polar(1.0, -THETA);
    let cmat = b.scale(rot);
    let h1 = cmat.hermitian_part();
    let h2 = (&cmat - &cmat.adjoint()).scale(c(0.0, -0.5));

    let first = herm_eig(&h1, 1e-8)?;
    let radius = 1e-7 * (1.0 + norm);
    let lambdas: Vec<C64> = first.eigenvalues.clone();
    let clusters = cluster_points(&lambdas, radius);

    let mut columns: Vec<Vec<C64>> = Vec::with_capacity(n);
    for (_, members) in clusters {
        let q = CMatrix::from_columns(&members.iter().map(|&k| first.basis.column(k)).collect::<Vec<_>>(), n);
        if members.len() == 1 {
            columns.push(q.column(0));
            continue;
        }
        let sub = h2.compress(&q).hermitian_part();
        let inner = herm_eig(&sub, 1e-6)?;
        let refined = &q * &inner.basis;
        for k in 0..members.len() {
            columns.push(refined.column(k));
        }
    }

    let basis = CMatrix::from_columns(&columns, n);
    let mut pairs: Vec<(C64, Vec<C64>)> = (0..n)
        .map(|k| {
            let v = basis.column(k);
            let bv = b.mul_vec(&v);
            let lambda: C64 = v.iter().zip(&bv).map(|(x, y)| x.conj() * y).sum();
            (lambda, v)
        })
        .collect();
    pairs.sort_by(|x, y| lex_cmp(&x.0, &y.0));
    let eigenvalues = pairs.iter().map(|p| p.0).collect();
    let cols: Vec<Vec<C64>> = pairs.into_iter().map(|p| p.1).collect();
    Ok(EigenSystem { eigenvalues, basis: CMatrix::from_columns(&cols, n) })
}
