use std::collections::BTreeMap;
use std::fmt::Write as _;

use rustfft::FftPlanner;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::linalg::{C64, ONE, ZERO};

/// Equispaced quadrature points on the torus.
pub const TORUS_GRID: usize = 4096;

/// Finitely supported element of ℓ¹(ℤ), `f(t) = Σ_k a(k) e^{ikt}`.
#[derive(Debug, Clone, Default, PartialEq, Serialize)]
pub struct FourierElement {
    pub coeffs: BTreeMap<i64, C64>,
}

impl FourierElement {
    pub fn new(coeffs: BTreeMap<i64, C64>) -> Result<Self> {
        if coeffs.values().any(|z| !z.re.is_finite() || !z.im.is_finite()) {
            return Err(Error::NonFinite);
        }
        Ok(Self { coeffs })
    }

    pub fn from_pairs(pairs: &[(i64, C64)]) -> Result<Self> {
        let mut coeffs = BTreeMap::new();
        for &(k, z) in pairs {
            *coeffs.entry(k).or_insert(ZERO) += z;
        }
        Self::new(coeffs)
    }

    pub fn get(&self, k: i64) -> C64 {
        self.coeffs.get(&k).copied().unwrap_or(ZERO)
    }

    pub fn l1_norm(&self) -> f64 {
        self.coeffs.values().map(|z| z.norm()).sum()
    }

    pub fn max_degree(&self) -> i64 {
        self.coeffs.keys().map(|k| k.abs()).max().unwrap_or(0)
    }

    pub fn eval(&self, t: f64) -> C64 {
        self.coeffs.iter().map(|(&k, a)| a * C64::from_polar(1.0, k as f64 * t)).sum()
    }

    /// Exact convolution product.
    pub fn convolve(&self, other: &Self) -> Self {
        let mut out: BTreeMap<i64, C64> = BTreeMap::new();
        for (&j, a) in &self.coeffs {
            for (&k, b) in &other.coeffs {
                *out.entry(j + k).or_insert(ZERO) += a * b;
            }
        }
        Self { coeffs: out }
    }

    /// Lines `k re im`; blank lines and `#` comments are skipped.
    pub fn parse(text: &str) -> Result<Self> {
        let mut pairs = Vec::new();
        for (lineno, line) in text.lines().enumerate() {
            let line = line.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let fields: Vec<&str> = line.split_whitespace().collect();
            let bad = || Error::Parse(format!("line {}: expected `k re im`, got `{line}`", lineno + 1));
            if fields.len() != 3 {
                return Err(bad());
            }
            let k: i64 = fields[0].parse().map_err(|_| bad())?;
            let re: f64 = fields[1].parse().map_err(|_| bad())?;
            let im: f64 = fields[2].parse().map_err(|_| bad())?;
            pairs.push((k, C64::new(re, im)));
        }
        Self::from_pairs(&pairs)
    }

    pub fn to_text(&self) -> String {
        let mut s = String::new();
        for (k, z) in &self.coeffs {
            let _ = writeln!(s, "{k} {:e} {:e}", z.re, z.im);
        }
        s
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct WienerResult {
    /// Coefficients of `1/f` for `|k| ≤ n_out`.
    pub inverse: FourierElement,
    pub min_abs: f64,
    /// ℓ¹ norm of `g` over `|k| ≤ n`, for `n = 0..=n_out`.
    pub partial_sums: Vec<f64>,
    /// `max_t |f(t) g(t) − 1|` on the grid, with `g` truncated.
    pub max_pointwise_residual: f64,
    /// ℓ¹ mass of the grid coefficients beyond `n_out`.
    pub tail_l1: f64,
    /// `‖f ⋆ g − δ₀‖₁`, computed exactly from the truncated coefficients.
    pub convolution_residual: f64,
}

/// Fourier coefficients of `1/f` by trapezoidal quadrature on the torus grid.
pub fn wiener_inverse(f: &FourierElement, n_out: usize, tol: f64) -> Result<WienerResult> {
    let m = TORUS_GRID;
    let half = (m / 2) as i64;
    if f.max_degree() >= half || n_out as i64 >= half {
        return Err(Error::InvalidParameter(format!("degrees must stay below {half}")));
    }
    let wrap = |k: i64| k.rem_euclid(m as i64) as usize;
    let mut planner = FftPlanner::<f64>::new();

    // F_m = Σ_k a(k) e^{2πikm/M}
    let mut values = vec![ZERO; m];
    for (&k, a) in &f.coeffs {
        values[wrap(k)] += a;
    }
    planner.plan_fft_inverse(m).process(&mut values);
    let min_abs = values.iter().map(|z| z.norm()).fold(f64::INFINITY, f64::min);
    if min_abs < tol {
        return Err(Error::ZeroOnTorus { min_abs });
    }

    // g(k) = (1/M) Σ_m e^{−2πikm/M} / F_m
    let mut g: Vec<C64> = values.iter().map(|v| ONE / v).collect();
    planner.plan_fft_forward(m).process(&mut g);
    for z in &mut g {
        *z /= m as f64;
    }

    let n = n_out as i64;
    let inverse = FourierElement { coeffs: (-n..=n).map(|k| (k, g[wrap(k)])).collect() };
    let partial_sums = (0..=n)
        .map(|r| (-r..=r).map(|k| g[wrap(k)].norm()).sum())
        .collect();
    let tail_l1 = (-half + 1..half).filter(|k| k.abs() > n).map(|k| g[wrap(k)].norm()).sum();

    let mut trunc = vec![ZERO; m];
    for (&k, z) in &inverse.coeffs {
        trunc[wrap(k)] = *z;
    }
    planner.plan_fft_inverse(m).process(&mut trunc);
    let max_pointwise_residual = values.iter().zip(&trunc).map(|(a, b)| (a * b - ONE).norm()).fold(0.0, f64::max);

    let mut prod = f.convolve(&inverse).coeffs;
    *prod.entry(0).or_insert(ZERO) -= ONE;
    let convolution_residual = prod.values().map(|z| z.norm()).sum();

    Ok(WienerResult { inverse, min_abs, partial_sums, max_pointwise_residual, tail_l1, convolution_residual })
}
