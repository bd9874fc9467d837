//! Square roots, absolute values, polar factorisation and the order on
//! Hermitian elements.

use serde::Serialize;

use crate::algebra::AlgebraElement;
use crate::error::{Error, Result};
use crate::linalg::{herm_eig, inner, mat_inv, op_norm, svd, vec_norm, CMatrix, EigenSystem, C64, ZERO};
use crate::report::{Check, CheckReport};
use crate::spectrum::{spectral_radius, spectrum};

/// Largest spectral radius accepted by [`sqrt_series`].
const SERIES_RADIUS_LIMIT: f64 = 0.999;
const SERIES_TERM_CAP: usize = 10_000;

/// `(Q, Q* π(a) Q)` with `Q` an orthonormal basis of the essential subspace.
fn compressed(a: &AlgebraElement) -> Result<(CMatrix, CMatrix)> {
    let q = a.algebra().essential_basis().ok_or(Error::NoRealization)?.clone();
    let m = a.realize()?.compress(&q);
    Ok((q, m))
}

fn lift(a: &AlgebraElement, q: &CMatrix, m: &CMatrix) -> Result<AlgebraElement> {
    let full = &(q * m) * &q.adjoint();
    AlgebraElement::from_matrix(a.algebra(), &full)
}

/// Eigendecomposition of the compressed realisation of a Hermitian element.
fn hermitian_eigen(a: &AlgebraElement, tol: f64) -> Result<(CMatrix, EigenSystem, f64)> {
    let (q, m) = compressed(a)?;
    let scale = op_norm(&m);
    let residual = op_norm(&(&m - &m.adjoint()));
    if residual > tol * scale.max(f64::MIN_POSITIVE) {
        return Err(Error::NotHermitian { residual });
    }
    let eig = herm_eig(&m.hermitian_part(), tol)?;
    Ok((q, eig, scale))
}

#[derive(Debug, Clone)]
pub struct SeriesSqrt {
    /// `b = Σ_{n≥1} binom(1/2, n) aⁿ`.
    pub b: AlgebraElement,
    pub terms: usize,
    /// `‖(e + b)² − (e + a)‖` in the unitisation.
    pub residual: f64,
}

/// Binomial series for `√(e + a) − e`.
///
/// Stops when the scalar majorant tail `Σ_{k>n} |binom(1/2,k)| tᵏ` at
/// `t = ‖a‖ < 1` drops below `tol`; for `‖a‖ ≥ 1` when two consecutive
/// terms, inflated by `1/(1 − r_λ(a))`, are below `tol`.
pub fn sqrt_series(a: &AlgebraElement, tol: f64) -> Result<SeriesSqrt> {
    let r = spectral_radius(a)?;
    if r >= SERIES_RADIUS_LIMIT {
        return Err(Error::RadiusTooLarge { radius: r });
    }
    let t = a.norm();
    let majorant_total = if t < 1.0 { 1.0 - (1.0 - t).sqrt() } else { f64::INFINITY };
    let mut coef = 0.5;
    let mut power = a.clone();
    let mut b = a.scale_real(coef);
    let mut majorant = coef * t;
    let mut tpow = t;
    let mut small_terms = 0;
    let mut n = 1;
    loop {
        let done = if t < 1.0 {
            majorant_total - majorant < tol
        } else {
            let term = coef.abs() * power.norm();
            small_terms = if term / (1.0 - r) < tol { small_terms + 1 } else { 0 };
            small_terms >= 2
        };
        if done || power.coeffs().iter().all(|z| *z == ZERO) {
            break;
        }
        if n >= SERIES_TERM_CAP {
            return Err(Error::NonConvergent { terms: n });
        }
        n += 1;
        coef *= (0.5 - (n - 1) as f64) / n as f64;
        power = power.mul(a)?;
        tpow *= t;
        majorant += coef.abs() * tpow;
        b = b.plus(&power.scale_real(coef))?;
    }
    let unitised = a.algebra().unitise()?;
    let au = a.embed(&unitised)?;
    let bu = b.embed(&unitised)?;
    let e = AlgebraElement::unit(&unitised)?;
    let eb = e.plus(&bu)?;
    let residual = eb.mul(&eb)?.minus(&e.plus(&au)?)?.norm();
    Ok(SeriesSqrt { b, terms: n, residual })
}

/// Unique positive square root via the eigendecomposition of the realisation.
///
/// Eigenvalues in `[−√tol·‖a‖, 0)` are treated as rounding noise and
/// clamped to zero; anything more negative is rejected.
pub fn positive_sqrt(a: &AlgebraElement, tol: f64) -> Result<AlgebraElement> {
    let (q, eig, scale) = hermitian_eigen(a, tol)?;
    let min = eig.real_eigenvalues().into_iter().fold(f64::INFINITY, f64::min);
    if min < -tol.sqrt() * scale {
        return Err(Error::NotPositive { min_point: min });
    }
    let root = eig.apply(|z| C64::new(z.re.max(0.0).sqrt(), 0.0));
    lift(a, &q, &root.hermitian_part())
}

/// Relative distance of `root` from the span of `e, a, a², …, a^dim`.
pub fn polynomial_span_residual(a: &AlgebraElement, root: &AlgebraElement) -> Result<f64> {
    root.same_algebra(a)?;
    let d = a.algebra().dim();
    let mut basis: Vec<Vec<C64>> = Vec::new();
    let mut power = match AlgebraElement::unit(a.algebra()) {
        Ok(e) => e,
        Err(_) => a.clone(),
    };
    for _ in 0..=d {
        let mut v = power.realize()?.to_vec();
        let nrm = vec_norm(&v);
        if nrm > 0.0 {
            v.iter_mut().for_each(|z| *z /= nrm);
            for _ in 0..2 {
                for b in &basis {
                    let p = inner(&v, b);
                    v.iter_mut().zip(b).for_each(|(x, y)| *x -= p * y);
                }
            }
            let rn = vec_norm(&v);
            if rn > 1e-10 {
                v.iter_mut().for_each(|z| *z /= rn);
                basis.push(v);
            }
        }
        power = power.mul(a)?;
    }
    let target = root.realize()?.to_vec();
    let tn = vec_norm(&target);
    if tn == 0.0 {
        return Ok(0.0);
    }
    let mut resid = target.clone();
    for b in &basis {
        let p = inner(&resid, b);
        resid.iter_mut().zip(b).for_each(|(x, y)| *x -= p * y);
    }
    Ok(vec_norm(&resid) / tn)
}

/// `|a| = (a*a)^{1/2}`.
pub fn abs_value(a: &AlgebraElement, tol: f64) -> Result<AlgebraElement> {
    positive_sqrt(&a.adjoint().mul(a)?, tol)
}

#[derive(Debug, Clone)]
pub struct PolarPair {
    pub unitary_part: AlgebraElement,
    pub positive_part: AlgebraElement,
}

/// `a = u|a|` for `a` invertible on the essential subspace; computed from the
/// singular value decomposition `a = W Σ V*` as `u = W V*`, `|a| = V Σ V*`.
pub fn polar(a: &AlgebraElement) -> Result<PolarPair> {
    let (q, m) = compressed(a)?;
    let s = svd(&m);
    let smax = s.sigma.first().copied().unwrap_or(0.0);
    let smin = s.sigma.last().copied().unwrap_or(0.0);
    if smax == 0.0 || smin <= 1e-12 * smax {
        return Err(Error::NotInvertible);
    }
    let u = &s.u * &s.v.adjoint();
    let sig: Vec<C64> = s.sigma.iter().map(|&x| C64::new(x, 0.0)).collect();
    let abs = &(&s.v * &CMatrix::diag(&sig)) * &s.v.adjoint();
    Ok(PolarPair { unitary_part: lift(a, &q, &u)?, positive_part: lift(a, &q, &abs.hermitian_part())? })
}

/// `a₊ = ½(|a| + a)` and `a₋ = ½(|a| − a)`, read off the eigendecomposition.
pub fn pos_neg_parts(a: &AlgebraElement, tol: f64) -> Result<(AlgebraElement, AlgebraElement)> {
    let (q, eig, _) = hermitian_eigen(a, tol)?;
    let plus = eig.apply(|z| C64::new(z.re.max(0.0), 0.0)).hermitian_part();
    let minus = eig.apply(|z| C64::new((-z.re).max(0.0), 0.0)).hermitian_part();
    Ok((lift(a, &q, &plus)?, lift(a, &q, &minus)?))
}

#[derive(Debug, Clone)]
pub struct PositivityVerdict {
    pub positive: bool,
    /// Smallest real part over the spectrum.
    pub min_point: f64,
    /// Positive square root when `positive`.
    pub witness: Option<AlgebraElement>,
}

/// Hermitian within `tol` and spectrum in `[−tol·‖a‖, ∞)`.
pub fn is_positive(a: &AlgebraElement, tol: f64) -> Result<PositivityVerdict> {
    match hermitian_eigen(a, tol) {
        Ok((_, eig, scale)) => {
            let min_point = eig.real_eigenvalues().into_iter().fold(f64::INFINITY, f64::min);
            let positive = min_point >= -tol * scale;
            let witness = if positive { Some(positive_sqrt(a, tol)?) } else { None };
            Ok(PositivityVerdict { positive, min_point, witness })
        }
        Err(Error::NotHermitian { .. }) => {
            let min_point = spectrum(a)?.min_real();
            Ok(PositivityVerdict { positive: false, min_point, witness: None })
        }
        Err(e) => Err(e),
    }
}

/// Smallest eigenvalue of a Hermitian element and its norm.
fn min_eig(a: &AlgebraElement, tol: f64) -> Result<(f64, f64)> {
    let (_, eig, scale) = hermitian_eigen(a, tol)?;
    Ok((eig.real_eigenvalues().into_iter().fold(f64::INFINITY, f64::min), scale))
}

fn inverse_on_essential(a: &AlgebraElement) -> Result<AlgebraElement> {
    let (q, m) = compressed(a)?;
    let inv = mat_inv(&m).map_err(|_| Error::NotInvertible)?;
    lift(a, &q, &inv)
}

/// For `0 ≤ a ≤ b` with `a` invertible: `b` is invertible and
/// `0 ≤ b⁻¹ ≤ a⁻¹`.
pub fn inverse_monotone_check(a: &AlgebraElement, b: &AlgebraElement, tol: f64) -> Result<CheckReport> {
    let pre = |msg: &str| Error::PreconditionFailed(msg.to_string());
    let (amin, ascale) = min_eig(a, tol).map_err(|_| pre("a is not Hermitian"))?;
    let diff = b.minus(a)?;
    let (dmin, dscale) = min_eig(&diff, tol).map_err(|_| pre("b is not Hermitian"))?;
    if amin < -tol * ascale {
        return Err(pre("a is not positive"));
    }
    if dmin < -tol * dscale.max(ascale) {
        return Err(pre("b - a is not positive"));
    }
    if amin <= tol * ascale {
        return Err(pre("a is not invertible"));
    }
    let mut report = CheckReport::new("inverse monotone");
    let ainv = inverse_on_essential(a)?;
    let binv = match inverse_on_essential(b) {
        Ok(x) => x,
        Err(_) => {
            report.push(Check::flag("b invertible", false));
            return Ok(report);
        }
    };
    report.push(Check::flag("b invertible", true));
    let (bmin, bscale) = min_eig(&binv, tol)?;
    report.push(Check::at_least("min eig(b^-1) / |b^-1|", bmin / bscale, -tol));
    let (gap, _) = min_eig(&ainv.minus(&binv)?, tol)?;
    let ainv_norm = ainv.norm().max(f64::MIN_POSITIVE);
    report.push(Check::at_least("min eig(a^-1 - b^-1) / |a^-1|", gap / ainv_norm, -tol));
    Ok(report)
}

/// Residuals of the positive/negative decomposition.
#[derive(Debug, Clone, Copy, Serialize)]
pub struct PartsResiduals {
    pub reconstruction: f64,
    pub product: f64,
    pub min_plus: f64,
    pub min_minus: f64,
}

pub fn parts_residuals(a: &AlgebraElement, plus: &AlgebraElement, minus: &AlgebraElement, tol: f64) -> Result<PartsResiduals> {
    let reconstruction = plus.minus(minus)?.minus(a)?.norm();
    let product = plus.mul(minus)?.norm().max(minus.mul(plus)?.norm());
    let (min_plus, _) = min_eig(plus, tol)?;
    let (min_minus, _) = min_eig(minus, tol)?;
    Ok(PartsResiduals { reconstruction, product, min_plus, min_minus })
}
