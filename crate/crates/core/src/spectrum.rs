//! Spectra, spectral radius by eigenvalues and by the power limit, the Pták
//! function, rational spectral mapping and algebra-wide spectral checks.

use std::collections::BTreeMap;
use std::sync::Arc;

use serde::Serialize;

use crate::algebra::{AlgebraElement, NormSpec, StarAlgebra};
use crate::error::{Error, Result};
use crate::linalg::{c, cluster_points, eigenvalues, hausdorff, lex_cmp, CMatrix, C64, ONE, ZERO};
use crate::random;
use crate::report::{Check, CheckReport};

/// Eigenvalues closer than `SPECTRUM_CLUSTER·(1 + max modulus)` are one point.
pub const SPECTRUM_CLUSTER: f64 = 1e-7;

/// Powers used for the limit formula on ℤ-window algebras.
const WINDOW_LIMIT_POWER: u64 = 1024;

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SpectrumResult {
    pub points: Vec<C64>,
    pub includes_zero_by_nonunitality: bool,
}

impl SpectrumResult {
    pub fn max_modulus(&self) -> f64 {
        self.points.iter().map(|z| z.norm()).fold(0.0, f64::max)
    }

    pub fn min_real(&self) -> f64 {
        self.points.iter().map(|z| z.re).fold(f64::INFINITY, f64::min)
    }

    pub fn max_abs_imag(&self) -> f64 {
        self.points.iter().map(|z| z.im.abs()).fold(0.0, f64::max)
    }

    pub fn distance_to(&self, mu: C64) -> f64 {
        self.points.iter().map(|z| (z - mu).norm()).fold(f64::INFINITY, f64::min)
    }
}

/// Merges eigenvalues within the clustering radius and sorts them.
pub fn dedup_spectrum(values: &[C64]) -> Vec<C64> {
    let scale = values.iter().map(|z| z.norm()).fold(0.0, f64::max);
    let mut pts: Vec<C64> =
        cluster_points(values, SPECTRUM_CLUSTER * (1.0 + scale)).into_iter().map(|(mean, _)| mean).collect();
    pts.sort_by(lex_cmp);
    pts
}

/// A matrix whose eigenvalues are the spectrum of `a`, and whether 0 has to
/// be adjoined because the algebra has no unit.
///
/// Realised algebras use the realisation compressed to its essential
/// subspace; otherwise the left regular representation of the unitisation.
pub fn spectral_matrix(a: &AlgebraElement) -> Result<(CMatrix, bool)> {
    let alg = a.algebra();
    if alg.exponents().is_some() {
        return Err(Error::NoRealization);
    }
    match alg.essential_basis() {
        Some(q) => Ok((a.realize()?.compress(q), !alg.is_unital())),
        None => {
            let u = a.into_unitisation()?;
            Ok((u.left_mult()?, !alg.is_unital()))
        }
    }
}

pub fn spectrum(a: &AlgebraElement) -> Result<SpectrumResult> {
    let (m, adjoin_zero) = spectral_matrix(a)?;
    let mut values = if m.rows() == 0 { Vec::new() } else { eigenvalues(&m)? };
    if adjoin_zero {
        values.push(ZERO);
    }
    Ok(SpectrumResult { points: dedup_spectrum(&values), includes_zero_by_nonunitality: adjoin_zero })
}

/// `max |λ|` over the spectrum. On ℤ-window algebras, whose spectrum is not
/// computable from a finite realisation, the infimum `inf_n |aⁿ|^{1/n}` over
/// doubling `n ≤ 1024` is returned instead.
pub fn spectral_radius(a: &AlgebraElement) -> Result<f64> {
    if a.algebra().exponents().is_some() {
        return Ok(spectral_radius_limit(a, WINDOW_LIMIT_POWER)?.value);
    }
    Ok(spectrum(a)?.max_modulus())
}

/// `r_σ(a) = r_λ(a*a)^{1/2}`.
pub fn ptak(a: &AlgebraElement) -> Result<f64> {
    Ok(spectral_radius(&a.adjoint().mul(a)?)?.sqrt())
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RadiusLimit {
    /// Minimum of `|aⁿ|^{1/n}` over the computed `n`.
    pub value: f64,
    /// `(n, |aⁿ|^{1/n})` for `n = 1, 2, 4, …`.
    pub trace: Vec<(u64, f64)>,
}

/// Powers that can be squared and normalised; on a ℤ window the powers are
/// carried in ℂ[ℤ] itself with weighted coefficients `a(n)γⁿ`, for which the
/// product is plain convolution and the norm plain ℓ¹.
enum PowerState {
    Element(AlgebraElement),
    Laurent(BTreeMap<i64, C64>),
}

impl PowerState {
    fn norm(&self) -> f64 {
        match self {
            PowerState::Element(x) => x.norm(),
            PowerState::Laurent(m) => m.values().map(|z| z.norm()).sum(),
        }
    }

    fn square(&self) -> Result<Self> {
        match self {
            PowerState::Element(x) => Ok(PowerState::Element(x.mul(x)?)),
            PowerState::Laurent(m) => {
                let mut out: BTreeMap<i64, C64> = BTreeMap::new();
                for (i, a) in m {
                    for (j, b) in m {
                        *out.entry(i + j).or_insert(ZERO) += a * b;
                    }
                }
                out.retain(|_, z| *z != ZERO);
                Ok(PowerState::Laurent(out))
            }
        }
    }

    fn scale(&mut self, s: f64) {
        match self {
            PowerState::Element(x) => *x = x.scale_real(s),
            PowerState::Laurent(m) => m.values_mut().for_each(|z| *z *= s),
        }
    }
}

/// `inf |aⁿ|^{1/n}` over `n = 1, 2, 4, … ≤ n_max`, by repeated squaring with
/// renormalisation so that only logarithms of norms grow.
pub fn spectral_radius_limit(a: &AlgebraElement, n_max: u64) -> Result<RadiusLimit> {
    if n_max == 0 {
        return Err(Error::InvalidParameter("n_max must be positive".into()));
    }
    let mut state = match (a.algebra().norm_spec(), a.algebra().exponents()) {
        (NormSpec::Weighted { gamma }, Some(exps)) => PowerState::Laurent(
            exps.iter()
                .zip(a.coeffs())
                .filter(|(_, z)| **z != ZERO)
                .map(|(&n, z)| (n, z * gamma.powi(n as i32)))
                .collect(),
        ),
        _ => PowerState::Element(a.clone()),
    };
    let mut log_scale: f64 = 0.0;
    let mut n: u64 = 1;
    let mut trace = Vec::new();
    loop {
        let nrm = state.norm();
        if !nrm.is_finite() || !log_scale.is_finite() {
            return Err(Error::Overflow { power: n });
        }
        if nrm == 0.0 {
            trace.push((n, 0.0));
            break;
        }
        trace.push((n, ((nrm.ln() + log_scale) / n as f64).exp()));
        if n * 2 > n_max {
            break;
        }
        state.scale(1.0 / nrm);
        log_scale += nrm.ln();
        state = state.square()?;
        log_scale *= 2.0;
        n *= 2;
    }
    let value = trace.iter().map(|t| t.1).fold(f64::INFINITY, f64::min);
    Ok(RadiusLimit { value, trace })
}

/// `p/q` with coefficients in ascending powers.
#[derive(Debug, Clone, PartialEq)]
pub struct RationalFunction {
    pub num: Vec<C64>,
    pub den: Vec<C64>,
}

impl RationalFunction {
    pub fn new(num: Vec<C64>, den: Vec<C64>) -> Result<Self> {
        if den.iter().all(|z| *z == ZERO) {
            return Err(Error::InvalidParameter("denominator is the zero polynomial".into()));
        }
        Ok(Self { num, den })
    }

    pub fn polynomial(num: Vec<C64>) -> Self {
        Self { num, den: vec![ONE] }
    }

    pub fn eval(&self, z: C64) -> Option<C64> {
        let q = horner(&self.den, z);
        if q == ZERO {
            None
        } else {
            Some(horner(&self.num, z) / q)
        }
    }

    fn den_scale(&self, z: C64) -> f64 {
        self.den.iter().enumerate().map(|(k, c)| c.norm() * z.norm().powi(k as i32)).sum()
    }
}

fn horner(coeffs: &[C64], z: C64) -> C64 {
    coeffs.iter().rev().fold(ZERO, |acc, c| acc * z + c)
}

fn poly_element(coeffs: &[C64], a: &AlgebraElement) -> Result<AlgebraElement> {
    let e = AlgebraElement::unit(a.algebra())?;
    let mut acc = AlgebraElement::zero(a.algebra());
    for c in coeffs.iter().rev() {
        acc = acc.mul(a)?.plus(&e.scale(*c))?;
    }
    Ok(acc)
}

#[derive(Debug, Clone)]
pub struct RationalMapResult {
    /// `r(a)`, in the unitisation when the algebra has no unit.
    pub element: AlgebraElement,
    pub spectrum: SpectrumResult,
    /// `r` applied pointwise to `sp(a)`.
    pub mapped: Vec<C64>,
    pub hausdorff: f64,
}

/// `r(a) = p(a) q(a)⁻¹` together with `sp(r(a))` and `r(sp(a))`.
pub fn rational_map_spectrum(a: &AlgebraElement, r: &RationalFunction) -> Result<RationalMapResult> {
    let sp = spectrum(a)?;
    for &lam in &sp.points {
        let q = horner(&r.den, lam);
        if q.norm() <= 1e-7 * r.den_scale(lam).max(f64::MIN_POSITIVE) {
            return Err(Error::PoleOnSpectrum { point: format!("{} {}", lam.re, lam.im) });
        }
    }
    let au = a.into_unitisation()?;
    let p = poly_element(&r.num, &au)?;
    let q = poly_element(&r.den, &au)?;
    let element = p.mul(&q.inverse()?)?;
    let image = spectrum(&element)?;
    let mapped = dedup_spectrum(&sp.points.iter().map(|&z| r.eval(z).expect("no pole on sp(a)")).collect::<Vec<_>>());
    let hausdorff = hausdorff(&image.points, &mapped);
    Ok(RationalMapResult { element, spectrum: image, mapped, hausdorff })
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ResolventDistance {
    /// `min |μ − λ|` over the spectrum.
    pub direct: f64,
    /// `r_λ((μe − a)⁻¹)⁻¹`.
    pub via_resolvent: f64,
}

pub fn resolvent_distance(a: &AlgebraElement, mu: C64) -> Result<ResolventDistance> {
    let sp = spectrum(a)?;
    let direct = sp.distance_to(mu);
    if direct <= SPECTRUM_CLUSTER * (1.0 + sp.max_modulus() + mu.norm()) {
        return Err(Error::MuInSpectrum { distance: direct });
    }
    let au = a.into_unitisation()?;
    let shifted = AlgebraElement::scalar(au.algebra(), mu)?.minus(&au)?;
    let resolvent = shifted.inverse()?;
    let via_resolvent = 1.0 / spectral_radius(&resolvent)?;
    Ok(ResolventDistance { direct, via_resolvent })
}

/// Hermitian elements spanned by the basis: `e_i + e_i*` and `i(e_i − e_i*)`.
fn basis_hermitians(alg: &Arc<StarAlgebra>) -> Vec<AlgebraElement> {
    let mut out = Vec::new();
    for i in 0..alg.dim() {
        let e = AlgebraElement::basis(alg, i);
        let es = e.adjoint();
        out.push(e.plus(&es).expect("same algebra"));
        out.push(e.minus(&es).expect("same algebra").scale(c(0.0, 1.0)));
    }
    out.retain(|h| h.coeffs().iter().any(|z| z.norm() > 0.0));
    out
}

/// Whether Hermitian elements have real spectrum, and `r_λ ≤ r_σ`, over the
/// basis Hermitians and random samples.
///
/// On a ℤ window the check reduces to the normal element `δ₁`, whose radii
/// from the limit formula are compared with those of `δ₁*`.
pub fn is_hermitian_algebra(alg: &Arc<StarAlgebra>, samples: usize, seed: u64) -> Result<CheckReport> {
    let mut report = CheckReport::new("hermitian algebra").with_seed(seed);
    if let Some(exps) = alg.exponents() {
        let Some(i1) = exps.iter().position(|&n| n == 1) else {
            return Err(Error::InvalidParameter("window does not contain δ₁".into()));
        };
        let d1 = AlgebraElement::basis(alg, i1);
        let r = spectral_radius(&d1)?;
        let r_star = spectral_radius(&d1.adjoint())?;
        let r_sigma = ptak(&d1)?;
        report.push(Check::at_most("r_lambda(d1*) - r_lambda(d1)", (r_star - r).abs(), 1e-9));
        report.push(Check::at_most("r_lambda(d1) - r_sigma(d1)", (r - r_sigma).abs(), 1e-9));
        return Ok(report);
    }
    let mut rng = random::rng(seed);
    let mut hermitians = basis_hermitians(alg);
    for _ in 0..samples {
        hermitians.push(random::hermitian_element(&mut rng, alg));
    }
    let mut imag: f64 = 0.0;
    for h in &hermitians {
        let sp = spectrum(h)?;
        imag = imag.max(sp.max_abs_imag() / (1.0 + sp.max_modulus()));
    }
    report.push(Check::at_most("hermitian spectra real", imag, 1e-9));
    let mut excess: f64 = f64::NEG_INFINITY;
    for _ in 0..samples.max(1) {
        let a = random::element(&mut rng, alg);
        let rl = spectral_radius(&a)?;
        let rs = ptak(&a)?;
        excess = excess.max((rl - rs) / (1.0 + rs));
    }
    report.push(Check::at_most("r_lambda - r_sigma", excess, 1e-9));
    Ok(report)
}

/// `sp(a*a) ⊂ [0, ∞)` for sampled `a`; the reported value is the minimum
/// relative spectral point.
pub fn shirali_ford_check(alg: &Arc<StarAlgebra>, samples: usize, seed: u64) -> Result<CheckReport> {
    let mut report = CheckReport::new("shirali-ford").with_seed(seed);
    let mut rng = random::rng(seed);
    let mut min_point = f64::INFINITY;
    let mut imag: f64 = 0.0;
    for _ in 0..samples {
        let a = random::element(&mut rng, alg);
        let sp = spectrum(&a.adjoint().mul(&a)?)?;
        let scale = 1.0 + sp.max_modulus();
        min_point = min_point.min(sp.min_real() / scale);
        imag = imag.max(sp.max_abs_imag() / scale);
    }
    report.push(Check::at_least("min spectral point of a*a", min_point, -1e-10));
    report.push(Check::at_most("imaginary part of sp(a*a)", imag, 1e-10));
    Ok(report)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::groups;
    use crate::linalg::I;

    fn diag_elem(values: &[C64]) -> AlgebraElement {
        let alg = StarAlgebra::diagonal(values.len());
        AlgebraElement::new(&alg, values.to_vec()).unwrap()
    }

    fn matrix_elem(m: &CMatrix) -> AlgebraElement {
        AlgebraElement::from_matrix(&StarAlgebra::full_matrix(m.rows()), m).unwrap()
    }

    fn close(a: &[C64], b: &[C64], tol: f64) -> bool {
        a.len() == b.len() && a.iter().zip(b).all(|(x, y)| (x - y).norm() < tol)
    }

    #[test]
    fn spectrum_examples() {
        let sp = spectrum(&diag_elem(&[c(1.0, 0.0), c(2.0, 0.0)])).unwrap();
        assert!(close(&sp.points, &[c(1.0, 0.0), c(2.0, 0.0)], 1e-12));
        assert!(!sp.includes_zero_by_nonunitality);

        let sp = spectrum(&matrix_elem(&CMatrix::unit(2, 0, 1))).unwrap();
        assert!(close(&sp.points, &[ZERO], 1e-12));

        let z3 = groups::cyclic(3);
        let sp = spectrum(&AlgebraElement::basis(&z3, 1)).unwrap();
        let s = 3f64.sqrt() / 2.0;
        assert!(close(&sp.points, &[c(-0.5, -s), c(-0.5, s), c(1.0, 0.0)], 1e-12));
    }

    #[test]
    fn non_unital_spectrum_gains_zero() {
        let nil = StarAlgebra::from_structure(vec!["n".into()], vec![ZERO], CMatrix::identity(1), NormSpec::L1, None)
            .unwrap();
        let sp = spectrum(&AlgebraElement::basis(&nil, 0)).unwrap();
        assert_eq!(sp.points, vec![ZERO]);
        assert!(sp.includes_zero_by_nonunitality);
    }

    #[test]
    fn corner_algebra_spectrum_has_no_spurious_zero() {
        let alg = StarAlgebra::generate_matrix_algebra(&[CMatrix::unit(2, 0, 0)], 1e-9).unwrap();
        let p = AlgebraElement::from_matrix(&alg, &CMatrix::unit(2, 0, 0)).unwrap();
        assert!(close(&spectrum(&p).unwrap().points, &[ONE], 1e-12));
    }

    #[test]
    fn spectral_radius_examples() {
        assert!((spectral_radius(&diag_elem(&[ONE, c(0.0, 3.0)])).unwrap() - 3.0).abs() < 1e-12);
        let a = matrix_elem(&CMatrix::from_real_rows(&[&[2.0, 1.0], &[1.0, 2.0]]));
        assert!((spectral_radius(&a).unwrap() - 3.0).abs() < 1e-12);
        assert!((spectral_radius(&AlgebraElement::basis(&groups::cyclic(3), 1)).unwrap() - 1.0).abs() < 1e-12);
    }

    #[test]
    fn limit_examples() {
        let m2 = StarAlgebra::full_matrix(2);
        let two_e = AlgebraElement::scalar(&m2, c(2.0, 0.0)).unwrap();
        let lim = spectral_radius_limit(&two_e, 64).unwrap();
        assert!(lim.trace.iter().all(|t| (t.1 - 2.0).abs() < 1e-12));

        let e12 = AlgebraElement::labelled(&m2, "e12").unwrap();
        let lim = spectral_radius_limit(&e12, 64).unwrap();
        assert_eq!(lim.trace, vec![(1, 1.0), (2, 0.0)]);
        assert_eq!(lim.value, 0.0);

        let w = StarAlgebra::weighted_int_ring(&[-1, 0, 1], 2.0).unwrap();
        let d1 = AlgebraElement::labelled(&w, "d1").unwrap();
        let lim = spectral_radius_limit(&d1, 512).unwrap();
        assert_eq!(lim.trace.len(), 10);
        assert!(lim.trace.iter().all(|t| t.1 == 2.0));
    }

    #[test]
    fn ptak_examples() {
        assert!((ptak(&diag_elem(&[c(2.0, 0.0), c(-5.0, 0.0)])).unwrap() - 5.0).abs() < 1e-12);
        let e12 = matrix_elem(&CMatrix::unit(2, 0, 1));
        assert!((ptak(&e12).unwrap() - 1.0).abs() < 1e-12);
        assert!(spectral_radius(&e12).unwrap() < 1e-12);
        let w = StarAlgebra::weighted_int_ring(&[-2, -1, 0, 1, 2], 2.0).unwrap();
        let d1 = AlgebraElement::labelled(&w, "d1").unwrap();
        assert_eq!(ptak(&d1).unwrap(), 1.0);
    }

    #[test]
    fn rational_map_examples() {
        let a = diag_elem(&[ONE, c(2.0, 0.0)]);
        let sq = RationalFunction::polynomial(vec![ZERO, ZERO, ONE]);
        let res = rational_map_spectrum(&a, &sq).unwrap();
        assert!(close(&res.spectrum.points, &[ONE, c(4.0, 0.0)], 1e-12));

        let b = diag_elem(&[c(2.0, 0.0), c(4.0, 0.0)]);
        let recip = RationalFunction::new(vec![ONE], vec![ZERO, ONE]).unwrap();
        let res = rational_map_spectrum(&b, &recip).unwrap();
        assert!(close(&res.spectrum.points, &[c(0.25, 0.0), c(0.5, 0.0)], 1e-12));

        let h = diag_elem(&[ONE, -ONE]);
        let cayley = RationalFunction::new(vec![-I, ONE], vec![I, ONE]).unwrap();
        let res = rational_map_spectrum(&h, &cayley).unwrap();
        assert!(close(&res.spectrum.points, &[-I, I], 1e-12));
        assert!(res.hausdorff < 1e-12);

        let pole = RationalFunction::new(vec![ONE], vec![-ONE, ONE]).unwrap();
        assert!(matches!(rational_map_spectrum(&h, &pole), Err(Error::PoleOnSpectrum { .. })));
    }

    #[test]
    fn resolvent_examples() {
        let r = resolvent_distance(&diag_elem(&[ZERO, ONE]), c(3.0, 0.0)).unwrap();
        assert!((r.direct - 2.0).abs() < 1e-12 && (r.via_resolvent - 2.0).abs() < 1e-12);
        let r = resolvent_distance(&diag_elem(&[ZERO, c(4.0, 0.0)]), ONE).unwrap();
        assert!((r.via_resolvent - 1.0).abs() < 1e-12);
        let a = matrix_elem(&CMatrix::from_real_rows(&[&[2.0, 1.0], &[1.0, 2.0]]));
        let r = resolvent_distance(&a, ZERO).unwrap();
        assert!((r.via_resolvent - 1.0).abs() < 1e-12);
        assert!(matches!(resolvent_distance(&a, ONE), Err(Error::MuInSpectrum { .. })));
    }

    #[test]
    fn hermitian_algebra_examples() {
        assert!(is_hermitian_algebra(&StarAlgebra::full_matrix(2), 20, 1).unwrap().all_passed());
        assert!(is_hermitian_algebra(&groups::symmetric(3), 20, 1).unwrap().all_passed());
        let w = StarAlgebra::weighted_int_ring(&[-2, -1, 0, 1, 2], 2.0).unwrap();
        let r = is_hermitian_algebra(&w, 0, 1).unwrap();
        let c0 = &r.checks[0];
        assert_eq!(c0.value, 1.5);
        assert!(!r.all_passed());
    }

    #[test]
    fn shirali_ford_examples() {
        assert!(shirali_ford_check(&StarAlgebra::full_matrix(2), 100, 7).unwrap().all_passed());
        assert!(shirali_ford_check(&groups::cyclic(4), 100, 7).unwrap().all_passed());
        let e12 = matrix_elem(&CMatrix::unit(2, 0, 1));
        let sp = spectrum(&e12.adjoint().mul(&e12).unwrap()).unwrap();
        assert!(close(&sp.points, &[ZERO, ONE], 1e-12));
    }
}
