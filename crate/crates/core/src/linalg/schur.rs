use super::{c, lex_cmp, require_square, CMatrix, C64, ZERO};
use crate::error::{Error, Result};

const MAX_ITER_PER_EIGENVALUE: usize = 60;

/// Eigenvalues of an arbitrary square matrix, sorted lexicographically.
///
/// Householder reduction to upper Hessenberg form followed by single-shift
/// complex QR with Wilkinson shifts and deflation. Only the eigenvalues are
/// accumulated; no Schur vectors.
pub fn eigenvalues(a: &CMatrix) -> Result<Vec<C64>> {
    let n = require_square(a)?;
    if !a.is_finite() {
        return Err(Error::NonFinite);
    }
    if n == 0 {
        return Ok(vec![]);
    }
    let scale = a.max_abs();
    if scale == 0.0 {
        return Ok(vec![ZERO; n]);
    }
    let mut h = a.scale_real(1.0 / scale);
    hessenberg(&mut h);
    let floor = f64::EPSILON * h.frobenius_norm();

    let mut out = vec![ZERO; n];
    let mut hi = n - 1;
    let mut iter = 0usize;
    let mut total = 0usize;
    loop {
        if hi == 0 {
            out[0] = h[(0, 0)];
            break;
        }
        // find the start of the active unreduced block
        let mut lo = hi;
        while lo > 0 {
            let sub = h[(lo, lo - 1)].norm();
            let diag = h[(lo, lo)].norm() + h[(lo - 1, lo - 1)].norm();
            if sub <= f64::EPSILON * diag || sub <= floor {
                h[(lo, lo - 1)] = ZERO;
                break;
            }
            lo -= 1;
        }
        if lo == hi {
            out[hi] = h[(hi, hi)];
            hi -= 1;
            iter = 0;
            continue;
        }
        if hi - lo == 1 {
            // a 2x2 block is solved directly; iterating on one with a
            // double eigenvalue can stall just above the deflation threshold
            let (l1, l2) = eig2(h[(lo, lo)], h[(lo, hi)], h[(hi, lo)], h[(hi, hi)]);
            out[lo] = l1;
            out[hi] = l2;
            if lo == 0 {
                break;
            }
            hi = lo - 1;
            iter = 0;
            continue;
        }
        iter += 1;
        total += 1;
        if iter > MAX_ITER_PER_EIGENVALUE {
            return Err(Error::NoConvergence { iterations: total });
        }
        let shift = if iter.is_multiple_of(11) {
            // exceptional shift
            h[(hi, hi)] + c(h[(hi, hi - 1)].norm() * 0.75, h[(hi, hi - 1)].norm() * 0.4)
        } else {
            wilkinson(h[(hi - 1, hi - 1)], h[(hi - 1, hi)], h[(hi, hi - 1)], h[(hi, hi)])
        };
        qr_step(&mut h, lo, hi, shift);
    }
    let mut vals: Vec<C64> = out.into_iter().map(|z| z * scale).collect();
    vals.sort_by(lex_cmp);
    Ok(vals)
}

/// Both eigenvalues of [[a, b], [c, d]].
fn eig2(a: C64, b: C64, cc: C64, d: C64) -> (C64, C64) {
    // centred form avoids cancellation when a ≈ d
    let half = (a - d) * 0.5;
    let disc = (half * half + b * cc).sqrt();
    let mid = (a + d) * 0.5;
    (mid + disc, mid - disc)
}

/// Eigenvalue of [[a, b], [c, d]] closest to d.
fn wilkinson(a: C64, b: C64, cc: C64, d: C64) -> C64 {
    let (l1, l2) = eig2(a, b, cc, d);
    if (l1 - d).norm() <= (l2 - d).norm() {
        l1
    } else {
        l2
    }
}

/// One shifted QR sweep on the window `lo..=hi` by Givens rotations.
fn qr_step(h: &mut CMatrix, lo: usize, hi: usize, shift: C64) {
    let n = h.rows();
    for k in lo..=hi {
        h[(k, k)] -= shift;
    }
    let mut rots: Vec<(f64, C64)> = Vec::with_capacity(hi - lo);
    for k in lo..hi {
        let x = h[(k, k)];
        let y = h[(k + 1, k)];
        let (cs, sn) = givens(x, y);
        // rows k, k+1: [c, s; -conj(s), c]
        for j in k..n {
            let a = h[(k, j)];
            let b = h[(k + 1, j)];
            h[(k, j)] = a * cs + sn * b;
            h[(k + 1, j)] = -sn.conj() * a + b * cs;
        }
        rots.push((cs, sn));
    }
    for (idx, k) in (lo..hi).enumerate() {
        let (cs, sn) = rots[idx];
        // columns k, k+1 multiplied by the adjoint rotation
        let top = (k + 2).min(hi) + 1;
        for i in 0..top.min(n) {
            let a = h[(i, k)];
            let b = h[(i, k + 1)];
            h[(i, k)] = a * cs + b * sn.conj();
            h[(i, k + 1)] = -a * sn + b * cs;
        }
    }
    for k in lo..=hi {
        h[(k, k)] += shift;
    }
}

/// Rotation with `c` real such that [c, s; -conj(s), c]·[x; y] = [r; 0].
fn givens(x: C64, y: C64) -> (f64, C64) {
    let ny = y.norm();
    if ny == 0.0 {
        return (1.0, ZERO);
    }
    let nx = x.norm();
    if nx == 0.0 {
        return (0.0, y.conj() / ny);
    }
    let r = nx.hypot(ny);
    let cs = nx / r;
    let sn = (x / nx) * y.conj() / r;
    (cs, sn)
}

fn hessenberg(h: &mut CMatrix) {
    let n = h.rows();
    if n < 3 {
        return;
    }
    for k in 0..n - 2 {
        let x: Vec<C64> = (k + 1..n).map(|i| h[(i, k)]).collect();
        let xn = super::vec_norm(&x);
        if xn == 0.0 {
            continue;
        }
        let phase = if x[0].norm() > 0.0 { x[0] / x[0].norm() } else { c(1.0, 0.0) };
        let mut v = x;
        v[0] += phase * xn;
        let vn = super::vec_norm(&v);
        for z in v.iter_mut() {
            *z /= vn;
        }
        // left: rows k+1..n
        for j in 0..n {
            let dot: C64 = (k + 1..n).map(|i| v[i - k - 1].conj() * h[(i, j)]).sum();
            for i in k + 1..n {
                let upd = v[i - k - 1] * dot * 2.0;
                h[(i, j)] -= upd;
            }
        }
        // right: columns k+1..n
        for i in 0..n {
            let dot: C64 = (k + 1..n).map(|j| h[(i, j)] * v[j - k - 1]).sum();
            for j in k + 1..n {
                let upd = dot * v[j - k - 1].conj() * 2.0;
                h[(i, j)] -= upd;
            }
        }
        for i in k + 2..n {
            h[(i, k)] = ZERO;
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn close(a: &[C64], b: &[C64], tol: f64) -> bool {
        a.len() == b.len() && a.iter().zip(b).all(|(x, y)| (x - y).norm() < tol)
    }

    #[test]
    fn triangular_matrix_eigenvalues() {
        let a = CMatrix::from_real_rows(&[&[1.0, 5.0, 2.0], &[0.0, 3.0, 1.0], &[0.0, 0.0, -2.0]]);
        let ev = eigenvalues(&a).unwrap();
        assert!(close(&ev, &[c(-2.0, 0.0), c(1.0, 0.0), c(3.0, 0.0)], 1e-12));
    }

    #[test]
    fn rotation_has_complex_pair() {
        let a = CMatrix::from_real_rows(&[&[0.0, 1.0], &[-1.0, 0.0]]);
        let ev = eigenvalues(&a).unwrap();
        assert!(close(&ev, &[c(0.0, -1.0), c(0.0, 1.0)], 1e-14));
    }

    #[test]
    fn cyclic_shift_roots_of_unity() {
        let a = CMatrix::from_real_rows(&[&[0.0, 0.0, 1.0], &[1.0, 0.0, 0.0], &[0.0, 1.0, 0.0]]);
        let ev = eigenvalues(&a).unwrap();
        let s = 3f64.sqrt() / 2.0;
        assert!(close(&ev, &[c(-0.5, -s), c(-0.5, s), c(1.0, 0.0)], 1e-13));
    }

    #[test]
    fn companion_matrix_of_known_polynomial() {
        // (x−1)(x−2)(x−3)(x−4) = x⁴ −10x³ +35x² −50x +24
        let a = CMatrix::from_real_rows(&[
            &[10.0, -35.0, 50.0, -24.0],
            &[1.0, 0.0, 0.0, 0.0],
            &[0.0, 1.0, 0.0, 0.0],
            &[0.0, 0.0, 1.0, 0.0],
        ]);
        let ev = eigenvalues(&a).unwrap();
        assert!(close(&ev, &[c(1.0, 0.0), c(2.0, 0.0), c(3.0, 0.0), c(4.0, 0.0)], 1e-10));
    }

    #[test]
    fn nilpotent_is_zero() {
        let a = CMatrix::from_real_rows(&[&[0.0, 1.0], &[0.0, 0.0]]);
        assert_eq!(eigenvalues(&a).unwrap(), vec![ZERO, ZERO]);
    }

    #[test]
    fn repeated_eigenvalues_of_normal_matrices_converge() {
        // clustered spectra exercise deflation of exactly repeated eigenvalues
        let mut rng = crate::random::rng(7);
        for _ in 0..2000 {
            let n = 2 + crate::random::index(&mut rng, 7);
            let pool: Vec<C64> = (0..1 + crate::random::index(&mut rng, n)).map(|_| crate::random::gaussian(&mut rng)).collect();
            let spec: Vec<C64> = (0..n).map(|_| pool[crate::random::index(&mut rng, pool.len())]).collect();
            let a = crate::random::normal_with_spectrum(&mut rng, &spec);
            let ev = eigenvalues(&a).unwrap();
            assert!(crate::linalg::hausdorff(&ev, &spec) < 1e-9, "{ev:?} vs {spec:?}");
        }
    }

    #[test]
    fn stalled_double_eigenvalue_case() {
        // normal 6x6 with a double eigenvalue that once ended as an
        // undeflatable 2x2 block; entries are re, im pairs row by row
        #[rustfmt::skip]
        let raw = [
            1.5575127118319743, -0.7915675085358785, -0.1771514092144333, 0.08053638822267387, -0.08500124014796456, -0.283585045232545,
            -0.38562539402303364, -0.045934617510637876, -0.07573047134120456, 0.16553343119272496, -0.14770031711911175, -0.08367295657900009,
            0.1879981831139434, 0.050253504957055994, 1.5534554112637067, -0.8404902493284925, 0.37173305040630955, -0.04294490469351514,
            -0.11566888729866069, -0.06979376730445908, 0.3318556042474861, -0.1078775417739587, -0.06880687016216339, 0.17248066732245876,
            0.037124267338388084, -0.2937132572439051, -0.3737289569002775, 0.01887835739003313, 1.5584324028003174, -0.7804779177854471,
            -0.13801991153821855, 0.08791503570658832, 0.0677381425711642, -0.1650449842371247, 0.013980290047590327, -0.2189455590452136,
            0.37279015022388284, -0.10883215286542253, 0.1025913387801439, -0.08789470206307692, 0.15061679372528636, 0.06397758148150803,
            1.5473695020556169, -0.9138738583722498, -0.32411421781009997, 0.05062408023751558, -0.24220991807719455, -0.049075693854778224,
            0.10196461743896718, 0.1507966774253426, -0.3450928295786637, -0.0517363031443846, -0.0940010146381759, -0.15163150077677576,
            0.32802569112893065, -0.003459717609069546, 1.5322466507858525, -1.096224492806929, -0.17602096955911825, 0.14968132993605016,
            0.13189880830167783, -0.10686089887491296, 0.0962800411195853, 0.15878954519591187, -0.04985677091232141, -0.21365137193482334,
            0.23081654146613223, -0.08830510929670238, 0.19827361475687874, 0.118640026749817, 1.5125993574809316, -1.3331306380283303,
        ];
        let z: Vec<C64> = raw.chunks(2).map(|p| c(p[0], p[1])).collect();
        let a = CMatrix::from_vec(6, 6, z).unwrap();
        let ev = eigenvalues(&a).unwrap();
        let sum: C64 = ev.iter().sum();
        let sq: C64 = ev.iter().map(|l| l * l).sum();
        assert!((sum - a.trace()).norm() < 1e-12);
        assert!((sq - (&a * &a).trace()).norm() < 1e-12);
    }
}
