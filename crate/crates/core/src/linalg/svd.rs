use super::{require_square, vec_norm, CMatrix, C64, ONE, ZERO};
use crate::error::{Error, Result};

const MAX_SWEEPS: usize = 80;

/// Thin singular value decomposition `a = u · diag(sigma) · v*`, singular
/// values descending.
#[derive(Debug, Clone)]
pub struct Svd {
    pub u: CMatrix,
    pub sigma: Vec<f64>,
    pub v: CMatrix,
}

impl Svd {
    /// Numerical rank relative to the largest singular value.
    pub fn rank(&self, tol: f64) -> usize {
        let top = self.sigma.first().copied().unwrap_or(0.0);
        if top == 0.0 {
            return 0;
        }
        self.sigma.iter().filter(|&&s| s > tol * top).count()
    }
}

/// Singular value decomposition by one-sided (Hestenes) Jacobi rotations,
/// after a Householder QR step when the matrix is tall.
pub fn svd(a: &CMatrix) -> Svd {
    let (m, n) = (a.rows(), a.cols());
    if m < n {
        let t = svd(&a.adjoint());
        return Svd { u: t.v, sigma: t.sigma, v: t.u };
    }
    if n == 0 {
        return Svd { u: CMatrix::zeros(m, 0), sigma: vec![], v: CMatrix::zeros(0, 0) };
    }
    if m > n {
        let (q, r) = householder_qr(a);
        let inner = svd(&r);
        return Svd { u: &q * &inner.u, sigma: inner.sigma, v: inner.v };
    }
    one_sided_jacobi(a)
}

fn one_sided_jacobi(a: &CMatrix) -> Svd {
    let (m, n) = (a.rows(), a.cols());
    // Work on columns stored contiguously.
    let mut w: Vec<Vec<C64>> = (0..n).map(|j| a.column(j)).collect();
    let mut v: Vec<Vec<C64>> = (0..n)
        .map(|j| {
            let mut e = vec![ZERO; n];
            e[j] = ONE;
            e
        })
        .collect();

    for _ in 0..MAX_SWEEPS {
        let mut rotated = false;
        for p in 0..n {
            for q in p + 1..n {
                let alpha: f64 = w[p].iter().map(|z| z.norm_sqr()).sum();
                let beta: f64 = w[q].iter().map(|z| z.norm_sqr()).sum();
                let gamma: C64 = w[p].iter().zip(&w[q]).map(|(x, y)| x.conj() * y).sum();
                let g = gamma.norm();
                if g == 0.0 || g <= f64::EPSILON * (alpha * beta).sqrt() {
                    continue;
                }
                rotated = true;
                let phase = gamma / g;
                let zeta = (beta - alpha) / (2.0 * g);
                let t = if zeta >= 0.0 {
                    1.0 / (zeta + (1.0 + zeta * zeta).sqrt())
                } else {
                    -1.0 / (-zeta + (1.0 + zeta * zeta).sqrt())
                };
                let cs = 1.0 / (1.0 + t * t).sqrt();
                let sn = cs * t;
                let ph = phase.conj();
                // J = diag(1, conj(phase)) · [[c, s], [-s, c]]
                rotate(&mut w, p, q, cs, sn, ph);
                rotate(&mut v, p, q, cs, sn, ph);
            }
        }
        if !rotated {
            break;
        }
    }

    let mut order: Vec<(f64, usize)> = w.iter().enumerate().map(|(j, col)| (vec_norm(col), j)).collect();
    order.sort_by(|x, y| y.0.total_cmp(&x.0));
    let sigma: Vec<f64> = order.iter().map(|o| o.0).collect();
    let top = sigma.first().copied().unwrap_or(0.0);

    let mut ucols: Vec<Vec<C64>> = Vec::with_capacity(n);
    for &(s, j) in &order {
        if s > f64::EPSILON * top * 1e-3 && s > 0.0 {
            ucols.push(w[j].iter().map(|z| z / s).collect());
        } else {
            ucols.push(vec![ZERO; m]);
        }
    }
    complete_orthonormal(&mut ucols, m);
    let vcols: Vec<Vec<C64>> = order.iter().map(|&(_, j)| v[j].clone()).collect();
    Svd { u: CMatrix::from_columns(&ucols, m), sigma, v: CMatrix::from_columns(&vcols, n) }
}

/// Replaces zero columns with unit vectors orthogonal to the rest.
/// Applies the rotation to columns `p < q` of `cols`.
fn rotate(cols: &mut [Vec<C64>], p: usize, q: usize, cs: f64, sn: f64, ph: C64) {
    let (lo, hi) = cols.split_at_mut(q);
    for (xp, xq) in lo[p].iter_mut().zip(hi[0].iter_mut()) {
        let (a, b) = (*xp, *xq * ph);
        *xp = a * cs - b * sn;
        *xq = a * sn + b * cs;
    }
}

fn complete_orthonormal(cols: &mut [Vec<C64>], m: usize) {
    let mut candidate = 0;
    for j in 0..cols.len() {
        if vec_norm(&cols[j]) > 0.5 {
            continue;
        }
        while candidate < m {
            let mut e = vec![ZERO; m];
            e[candidate] = ONE;
            candidate += 1;
            for _ in 0..2 {
                for (k, other) in cols.iter().enumerate() {
                    if k == j || vec_norm(other) < 0.5 {
                        continue;
                    }
                    let proj: C64 = other.iter().zip(&e).map(|(x, y)| x.conj() * y).sum();
                    for (ei, oi) in e.iter_mut().zip(other) {
                        *ei -= proj * oi;
                    }
                }
            }
            let nrm = vec_norm(&e);
            if nrm > 0.5 {
                cols[j] = e.iter().map(|z| z / nrm).collect();
                break;
            }
        }
    }
}

/// Householder QR of a tall matrix; returns thin `q` (m×n) and `r` (n×n).
fn householder_qr(a: &CMatrix) -> (CMatrix, CMatrix) {
    let (m, n) = (a.rows(), a.cols());
    let mut r = a.clone();
    let mut reflectors: Vec<Vec<C64>> = Vec::with_capacity(n);
    for k in 0..n {
        let x: Vec<C64> = (k..m).map(|i| r[(i, k)]).collect();
        let xn = vec_norm(&x);
        let mut v = x.clone();
        if xn == 0.0 {
            reflectors.push(vec![ZERO; m - k]);
            continue;
        }
        let phase = if x[0].norm() > 0.0 { x[0] / x[0].norm() } else { ONE };
        v[0] += phase * xn;
        let vn = vec_norm(&v);
        for z in v.iter_mut() {
            *z /= vn;
        }
        // r <- (I − 2 v v*) r on rows k..m
        for j in k..n {
            let dot: C64 = (k..m).map(|i| v[i - k].conj() * r[(i, j)]).sum();
            for i in k..m {
                let upd = v[i - k] * dot * 2.0;
                r[(i, j)] -= upd;
            }
        }
        reflectors.push(v);
    }
    // q = H_0 H_1 ... H_{n-1} applied to the first n columns of the identity.
    let mut q = CMatrix::from_fn(m, n, |i, j| if i == j { ONE } else { ZERO });
    for k in (0..n).rev() {
        let v = &reflectors[k];
        for j in 0..n {
            let dot: C64 = (k..m).map(|i| v[i - k].conj() * q[(i, j)]).sum();
            for i in k..m {
                let upd = v[i - k] * dot * 2.0;
                q[(i, j)] -= upd;
            }
        }
    }
    let r_top = CMatrix::from_fn(n, n, |i, j| if i <= j { r[(i, j)] } else { ZERO });
    (q, r_top)
}

pub fn singular_values(a: &CMatrix) -> Vec<f64> {
    svd(a).sigma
}

/// Number of singular values above `tol` times the largest one.
pub fn eps_rank(a: &CMatrix, tol: f64) -> usize {
    svd(a).rank(tol)
}

/// Orthonormal basis (as columns) of the null space of `a`.
pub fn null_space(a: &CMatrix, tol: f64) -> CMatrix {
    let n = a.cols();
    let s = svd(a);
    let rank = s.rank(tol);
    let cols: Vec<Vec<C64>> = (rank..n).map(|j| s.v.column(j)).collect();
    CMatrix::from_columns(&cols, n)
}

/// Orthonormal basis (as columns) of the column space of `a`.
pub fn range_basis(a: &CMatrix, tol: f64) -> CMatrix {
    let m = a.rows();
    let s = svd(a);
    let rank = s.rank(tol);
    let cols: Vec<Vec<C64>> = (0..rank).map(|j| s.u.column(j)).collect();
    CMatrix::from_columns(&cols, m)
}

/// Minimum-norm least-squares solution of `a x = b` (b with one or more
/// columns), discarding singular values below `tol` relative.
pub fn lstsq(a: &CMatrix, b: &CMatrix, tol: f64) -> CMatrix {
    let s = svd(a);
    let rank = s.rank(tol);
    let uhb = &s.u.adjoint() * b;
    let mut scaled = CMatrix::zeros(a.cols(), b.cols());
    for i in 0..rank {
        for j in 0..b.cols() {
            scaled[(i, j)] = uhb[(i, j)] / s.sigma[i];
        }
    }
    // v[:, :rank] · scaled[:rank]
    CMatrix::from_fn(a.cols(), b.cols(), |i, j| (0..rank).map(|k| s.v[(i, k)] * scaled[(k, j)]).sum())
}

/// Inverse with the default singularity threshold.
pub fn mat_inv(a: &CMatrix) -> Result<CMatrix> {
    mat_inv_tol(a, 1e-13)
}

/// Inverse by Gaussian elimination with partial pivoting; rejects matrices
/// whose smallest singular value is below `tol` times the largest.
pub fn mat_inv_tol(a: &CMatrix, tol: f64) -> Result<CMatrix> {
    let n = require_square(a)?;
    let sv = singular_values(a);
    let top = sv.first().copied().unwrap_or(0.0);
    let bottom = sv.last().copied().unwrap_or(0.0);
    if n == 0 {
        return Ok(CMatrix::zeros(0, 0));
    }
    if top == 0.0 || bottom <= tol * top {
        return Err(Error::Singular);
    }
    let mut m = a.clone();
    let mut inv = CMatrix::identity(n);
    for col in 0..n {
        let pivot = (col..n)
            .max_by(|&i, &j| m[(i, col)].norm().total_cmp(&m[(j, col)].norm()))
            .expect("non-empty range");
        if m[(pivot, col)].norm() == 0.0 {
            return Err(Error::Singular);
        }
        if pivot != col {
            for j in 0..n {
                let t = m[(col, j)];
                m[(col, j)] = m[(pivot, j)];
                m[(pivot, j)] = t;
                let t = inv[(col, j)];
                inv[(col, j)] = inv[(pivot, j)];
                inv[(pivot, j)] = t;
            }
        }
        let p = ONE / m[(col, col)];
        for j in 0..n {
            m[(col, j)] *= p;
            inv[(col, j)] *= p;
        }
        for i in 0..n {
            if i == col {
                continue;
            }
            let f = m[(i, col)];
            if f == ZERO {
                continue;
            }
            for j in 0..n {
                let mv = m[(col, j)];
                let iv = inv[(col, j)];
                m[(i, j)] -= f * mv;
                inv[(i, j)] -= f * iv;
            }
        }
    }
    Ok(inv)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::{c, op_norm};

    #[test]
    fn rank_examples() {
        assert_eq!(eps_rank(&CMatrix::identity(3), 1e-9), 3);
        assert_eq!(eps_rank(&CMatrix::from_real_rows(&[&[1.0, 1.0], &[1.0, 1.0]]), 1e-9), 1);
        assert_eq!(eps_rank(&CMatrix::zeros(2, 2), 1e-9), 0);
    }

    #[test]
    fn svd_reconstructs_rectangular() {
        let a = CMatrix::from_rows(&[
            vec![c(1.0, 0.5), c(2.0, 0.0)],
            vec![c(0.0, 1.0), c(-1.0, 1.0)],
            vec![c(3.0, 0.0), c(0.5, -0.5)],
        ])
        .unwrap();
        for m in [a.clone(), a.adjoint()] {
            let s = svd(&m);
            let d = CMatrix::diag_real(&s.sigma);
            let rec = &(&s.u * &d) * &s.v.adjoint();
            assert!(rec.dist(&m) < 1e-13);
            let k = s.v.cols();
            assert!((&s.v.adjoint() * &s.v).dist(&CMatrix::identity(k)) < 1e-13);
        }
    }

    #[test]
    fn inverse_examples() {
        assert!(mat_inv(&CMatrix::identity(3)).unwrap().dist(&CMatrix::identity(3)) < 1e-15);
        let d = mat_inv(&CMatrix::diag_real(&[2.0, 4.0])).unwrap();
        assert!(d.dist(&CMatrix::diag_real(&[0.5, 0.25])) < 1e-15);
        // 2×2 inverse formula: [[a,b],[c,d]]⁻¹ = [[d,−b],[−c,a]]/(ad−bc)
        let a = CMatrix::from_real_rows(&[&[1.0, 1.0], &[0.0, 1.0]]);
        let inv = mat_inv(&a).unwrap();
        assert!(inv.dist(&CMatrix::from_real_rows(&[&[1.0, -1.0], &[0.0, 1.0]])) < 1e-15);
        assert!(op_norm(&(&(&a * &inv) - &CMatrix::identity(2))) <= 1e-9);
    }

    #[test]
    fn inverse_rejects_singular() {
        let a = CMatrix::from_real_rows(&[&[1.0, 2.0], &[2.0, 4.0]]);
        assert_eq!(mat_inv(&a), Err(Error::Singular));
    }

    #[test]
    fn null_space_of_rank_one() {
        let a = CMatrix::from_real_rows(&[&[1.0, 1.0], &[1.0, 1.0]]);
        let ns = null_space(&a, 1e-9);
        assert_eq!(ns.cols(), 1);
        let v = ns.column(0);
        assert!(vec_norm(&a.mul_vec(&v)) < 1e-14);
    }

    #[test]
    fn lstsq_solves_consistent_system() {
        let a = CMatrix::from_real_rows(&[&[2.0, 0.0], &[0.0, 3.0], &[1.0, 1.0]]);
        let x = CMatrix::column_vector(&[c(1.0, -1.0), c(0.5, 0.0)]);
        let b = &a * &x;
        let sol = lstsq(&a, &b, 1e-12);
        assert!(sol.dist(&x) < 1e-13);
    }
}
