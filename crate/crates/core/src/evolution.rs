//! Cayley transform, functions of self-adjoint matrices and the unitary
//! group `U_t = exp(−ita)` with its generator.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::linalg::{eigenvalues, hausdorff, mat_inv, op_norm, singular_values, vec_norm, CMatrix, C64, I, ONE};
use crate::report::{Check, CheckReport};
use crate::spectral::{resolution_of_normal, spectral_integral, SpectralMeasure};

/// Times at which paths are sampled unless the caller chooses otherwise.
pub const DEFAULT_TIMES: [f64; 8] = [
    0.0,
    0.1,
    -0.1,
    1.0,
    -1.0,
    std::f64::consts::PI,
    -std::f64::consts::PI,
    std::f64::consts::TAU,
];

/// Difference steps for the generator check.
pub const DEFAULT_STEPS: [f64; 3] = [1e-2, 1e-3, 1e-4];

/// Distance below which 1 counts as an eigenvalue of a unitary.
pub const ONE_GAP: f64 = 1e-7;

fn require_hermitian(a: &CMatrix, tol: f64) -> Result<()> {
    let residual = a.hermitian_residual();
    if residual > tol * (1.0 + op_norm(a)) {
        return Err(Error::NotHermitian { residual });
    }
    Ok(())
}

/// `κ(λ) = (λ − i)/(λ + i)`.
pub fn kappa(lambda: f64) -> C64 {
    (C64::new(lambda, 0.0) - I) / (C64::new(lambda, 0.0) + I)
}

/// Tridiagonal `[-1, 2, -1]` matrix of size `n`.
pub fn laplacian_1d(n: usize) -> CMatrix {
    CMatrix::from_fn(n, n, |i, j| {
        if i == j {
            C64::new(2.0, 0.0)
        } else if i.abs_diff(j) == 1 {
            C64::new(-1.0, 0.0)
        } else {
            C64::new(0.0, 0.0)
        }
    })
}

/// `u = (a − i)(a + i)⁻¹`.
pub fn cayley(a: &CMatrix, tol: f64) -> Result<CMatrix> {
    require_hermitian(a, tol)?;
    let id = CMatrix::identity(a.rows()).scale(I);
    Ok(&(a - &id) * &mat_inv(&(a + &id))?)
}

/// `a = i(1 + u)(1 − u)⁻¹`.
pub fn inverse_cayley(u: &CMatrix, tol: f64) -> Result<CMatrix> {
    let residual = u.unitary_residual();
    if residual > tol.max(1e-9) {
        return Err(Error::NotUnitary { residual });
    }
    let n = u.rows();
    let id = CMatrix::identity(n);
    let gap = &id - u;
    let distance = singular_values(&gap).last().copied().unwrap_or(0.0);
    if distance <= ONE_GAP {
        return Err(Error::OneInSpectrum { distance });
    }
    Ok(&(&id + u).scale(I) * &mat_inv(&gap)?)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct CayleyDiagnostics {
    pub unitary_residual: f64,
    /// Distance from 1 to `sp(u)`.
    pub gap_to_one: f64,
    /// Hausdorff distance between `sp(u)` and `κ(sp(a))`.
    pub spectral_mapping: f64,
    /// `max | |ν| − 1 |` over `sp(u)`.
    pub off_circle: f64,
}

pub fn cayley_diagnostics(a: &CMatrix, u: &CMatrix) -> Result<CayleyDiagnostics> {
    let sp_u = eigenvalues(u)?;
    let mapped: Vec<C64> = eigenvalues(a)?.iter().map(|l| kappa(l.re)).collect();
    Ok(CayleyDiagnostics {
        unitary_residual: u.unitary_residual(),
        gap_to_one: sp_u.iter().map(|z| (z - ONE).norm()).fold(f64::INFINITY, f64::min),
        spectral_mapping: hausdorff(&sp_u, &mapped),
        off_circle: sp_u.iter().map(|z| (z.norm() - 1.0).abs()).fold(0.0, f64::max),
    })
}

/// `f(a) = ∫ f dP` over the spectral resolution of a Hermitian `a`.
pub fn fn_selfadjoint(a: &CMatrix, f: impl Fn(f64) -> C64, tol: f64) -> Result<CMatrix> {
    require_hermitian(a, tol)?;
    let p = resolution_of_normal(a, tol)?;
    spectral_integral(&p, |z| Some(f(z.re)))
}

/// `t ↦ U_t = exp(−ita)`, evaluated through the spectral resolution of `a`.
#[derive(Debug, Clone)]
pub struct UnitaryPath {
    generator: CMatrix,
    resolution: SpectralMeasure<C64>,
}

pub fn unitary_group(a: &CMatrix, tol: f64) -> Result<UnitaryPath> {
    require_hermitian(a, tol)?;
    Ok(UnitaryPath { generator: a.clone(), resolution: resolution_of_normal(a, tol)? })
}

impl UnitaryPath {
    pub fn generator(&self) -> &CMatrix {
        &self.generator
    }

    pub fn at(&self, t: f64) -> CMatrix {
        spectral_integral(&self.resolution, |z| Some(C64::from_polar(1.0, -t * z.re))).expect("total function")
    }

    /// `max ‖U_{t+s} − U_t U_s‖` over all pairs from `times`.
    pub fn group_law_residual(&self, times: &[f64]) -> f64 {
        let mut worst: f64 = 0.0;
        for &t in times {
            for &s in times {
                worst = worst.max((&self.at(t + s) - &(&self.at(t) * &self.at(s))).max_abs());
            }
        }
        worst
    }

    pub fn unitarity_residual(&self, times: &[f64]) -> f64 {
        times.iter().map(|&t| self.at(t).unitary_residual()).fold(0.0, f64::max)
    }

    /// `max_t | ‖U_t x‖ − ‖x‖ |`.
    pub fn energy_drift(&self, x: &[C64], times: &[f64]) -> f64 {
        let n0 = vec_norm(x);
        times.iter().map(|&t| (vec_norm(&self.at(t).mul_vec(x)) - n0).abs()).fold(0.0, f64::max)
    }

    /// `max_t ‖(U_{t+h}x − U_{t−h}x)/2h + i a U_t x‖`, which is `O(h²)`.
    pub fn schrodinger_residual(&self, x: &[C64], times: &[f64], h: f64) -> f64 {
        let mut worst: f64 = 0.0;
        for &t in times {
            let fwd = self.at(t + h).mul_vec(x);
            let bwd = self.at(t - h).mul_vec(x);
            let ax = self.generator.mul_vec(&self.at(t).mul_vec(x));
            let r: Vec<C64> = fwd.iter().zip(&bwd).zip(&ax).map(|((f, b), y)| (f - b) / (2.0 * h) + I * y).collect();
            worst = worst.max(vec_norm(&r));
        }
        worst
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct GeneratorRow {
    pub h: f64,
    /// `‖(U_h x − x)/(−ih) − a x‖`.
    pub error: f64,
    /// `h ‖a‖² ‖x‖`.
    pub bound: f64,
}

#[derive(Debug, Clone, Serialize)]
pub struct GeneratorCheck {
    pub rows: Vec<GeneratorRow>,
    pub report: CheckReport,
}

/// Finite-difference recovery of the generator from the path.
///
/// Errors below this are treated as exact zeros and skip the ratio test.
const NEGLIGIBLE: f64 = 1e-13;

pub fn generator_check(path: &UnitaryPath, x: &[C64], h_list: &[f64]) -> GeneratorCheck {
    let a = &path.generator;
    let ax = a.mul_vec(x);
    let c = op_norm(a).powi(2) * vec_norm(x);
    let mut steps = h_list.to_vec();
    steps.sort_by(|p, q| q.total_cmp(p));
    let rows: Vec<GeneratorRow> = steps
        .iter()
        .map(|&h| {
            let uh = path.at(h).mul_vec(x);
            let diff: Vec<C64> = uh.iter().zip(x).zip(&ax).map(|((u, x0), y)| (u - x0) / C64::new(0.0, -h) - y).collect();
            GeneratorRow { h, error: vec_norm(&diff), bound: h * c }
        })
        .collect();

    let mut report = CheckReport::new("generator");
    for r in &rows {
        report.push(Check::at_most(format!("err(h={:e})", r.h), r.error, r.bound));
    }
    for w in rows.windows(2) {
        let (big, small) = (w[0], w[1]);
        report.push(Check::at_most(format!("monotone {:e} -> {:e}", big.h, small.h), small.error, big.error));
        if big.error > NEGLIGIBLE && small.error > NEGLIGIBLE {
            let ratio = (big.error / small.error) / (big.h / small.h);
            report.push(Check::at_most(format!("first order {:e} -> {:e}", big.h, small.h), (ratio - 1.0).abs(), 0.1));
        }
    }
    GeneratorCheck { rows, report }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::{c, herm_eig, ZERO};
    use crate::random;
    use std::f64::consts::PI;

    #[test]
    fn cayley_examples() {
        let u = cayley(&CMatrix::zeros(2, 2), 1e-9).unwrap();
        assert!(u.dist(&CMatrix::identity(2).scale_real(-1.0)) < 1e-15);
        let u = cayley(&CMatrix::diag_real(&[1.0, -1.0]), 1e-9).unwrap();
        assert!(u.dist(&CMatrix::diag(&[-I, I])) < 1e-15);
        let mut bad = CMatrix::zeros(2, 2);
        bad[(0, 1)] = ONE;
        assert!(matches!(cayley(&bad, 1e-9), Err(Error::NotHermitian { .. })));
    }

    #[test]
    fn laplacian_spectral_mapping() {
        let a = laplacian_1d(8);
        let u = cayley(&a, 1e-9).unwrap();
        let d = cayley_diagnostics(&a, &u).unwrap();
        assert!(d.unitary_residual < 1e-9);
        assert!(d.gap_to_one > 1e-7);
        assert!(d.off_circle < 1e-9);
        // oracle: κ applied to the Jacobi eigenvalues
        let lambdas = herm_eig(&a, 1e-12).unwrap().real_eigenvalues();
        let mapped: Vec<C64> = lambdas.iter().map(|&l| kappa(l)).collect();
        assert!(hausdorff(&eigenvalues(&u).unwrap(), &mapped) < 1e-8);
    }

    #[test]
    fn inverse_examples() {
        let a = inverse_cayley(&CMatrix::identity(2).scale_real(-1.0), 1e-9).unwrap();
        assert!(a.max_abs() < 1e-15);
        let a = inverse_cayley(&CMatrix::diag(&[-I, I]), 1e-9).unwrap();
        assert!(a.dist(&CMatrix::diag_real(&[1.0, -1.0])) < 1e-15);
        assert!(matches!(inverse_cayley(&CMatrix::identity(2), 1e-9), Err(Error::OneInSpectrum { .. })));
        let mut rng = random::rng(4);
        for n in 1..6 {
            let a = random::hermitian_matrix(&mut rng, n);
            let back = inverse_cayley(&cayley(&a, 1e-9).unwrap(), 1e-9).unwrap();
            assert!(back.dist(&a) < 1e-8 * (1.0 + op_norm(&a)));
            assert!(back.hermitian_residual() < 1e-8);
        }
    }

    #[test]
    fn functions_of_selfadjoint() {
        let flip = CMatrix::from_real_rows(&[&[0.0, 1.0], &[1.0, 0.0]]);
        assert!(fn_selfadjoint(&flip, |l| c(l, 0.0), 1e-9).unwrap().dist(&flip) < 1e-14);
        assert!(fn_selfadjoint(&flip, |l| c(l * l, 0.0), 1e-9).unwrap().dist(&CMatrix::identity(2)) < 1e-14);
        let a = laplacian_1d(5);
        assert!(fn_selfadjoint(&a, kappa, 1e-9).unwrap().dist(&cayley(&a, 1e-9).unwrap()) < 1e-12);
    }

    #[test]
    fn unitary_group_examples() {
        let path = unitary_group(&CMatrix::diag_real(&[1.0, 3.0]), 1e-9).unwrap();
        let t = 0.7;
        let expect = CMatrix::diag(&[C64::from_polar(1.0, -t), C64::from_polar(1.0, -3.0 * t)]);
        assert!(path.at(t).dist(&expect) < 1e-14);
        assert!(path.at(0.0).dist(&CMatrix::identity(2)) < 1e-15);

        let zero = unitary_group(&CMatrix::zeros(3, 3), 1e-9).unwrap();
        assert!(zero.at(5.0).dist(&CMatrix::identity(3)) < 1e-15);

        // a² = 1 gives exp(−ita) = cos t − i sin t · a
        let flip = CMatrix::from_real_rows(&[&[0.0, 1.0], &[1.0, 0.0]]);
        let path = unitary_group(&flip, 1e-9).unwrap();
        assert!(path.at(PI).dist(&CMatrix::identity(2).scale_real(-1.0)) < 1e-14);
        assert!(path.group_law_residual(&DEFAULT_TIMES) < 1e-9);
    }

    #[test]
    fn generator_two_level_oracle() {
        // exact: err(h) = ‖((e^{−ihλ} − 1)/(−ih) − λ) x_λ‖ per eigenvalue
        let path = unitary_group(&CMatrix::diag_real(&[1.0, 2.0]), 1e-9).unwrap();
        let s = 0.5f64.sqrt();
        let x = [c(s, 0.0), c(s, 0.0)];
        let g = generator_check(&path, &x, &[1e-3]);
        let h = 1e-3;
        let exact: f64 = [1.0f64, 2.0]
            .iter()
            .map(|&l| ((C64::from_polar(1.0, -h * l) - ONE) / c(0.0, -h) - l).norm_sqr() * 0.5)
            .sum::<f64>()
            .sqrt();
        assert!((g.rows[0].error - exact).abs() < 1e-12);
        // leading order h‖a²x‖/2
        assert!((g.rows[0].error - h * (8.5f64).sqrt() / 2.0).abs() < 1e-5);
        assert!(g.report.all_passed());
    }

    #[test]
    fn generator_zero_and_laplacian() {
        let zero = unitary_group(&CMatrix::zeros(2, 2), 1e-9).unwrap();
        let g = generator_check(&zero, &[ONE, ZERO], &DEFAULT_STEPS);
        assert!(g.rows.iter().all(|r| r.error == 0.0));
        assert!(g.report.all_passed());

        let a = laplacian_1d(8);
        let path = unitary_group(&a, 1e-9).unwrap();
        let mut rng = random::rng(3);
        let x = random::unit_vector(&mut rng, 8);
        let g = generator_check(&path, &x, &[1e-3, 5e-4, 2.5e-4]);
        assert!(g.report.all_passed(), "{:?}", g.report);
        assert!(path.energy_drift(&x, &DEFAULT_TIMES) < 1e-10);
        let r1 = path.schrodinger_residual(&x, &[0.3, 1.0], 1e-3);
        let r2 = path.schrodinger_residual(&x, &[0.3, 1.0], 5e-4);
        assert!((r1 / r2 - 4.0).abs() < 0.4);
    }
}
