//! Browser bindings: each export takes plain values and returns a JSON
//! string, `{"error": "..."}` on bad input.

use opstar::evolution::{cayley, cayley_diagnostics, kappa, laplacian_1d};
use opstar::gelfand::{discontinuous_character_demo, wiener_inverse, CounterexampleRow, FourierElement};
use opstar::io::parse_matrix;
use opstar::linalg::{eigenvalues, herm_eig, lex_cmp, CMatrix, C64, DEFAULT_TOL};
use opstar::random::DEFAULT_SEED;
use serde::Serialize;
use wasm_bindgen::prelude::wasm_bindgen;

const PLOT_POINTS: usize = 256;

#[derive(Debug, Serialize)]
pub struct CayleyView {
    pub eigenvalues: Vec<f64>,
    /// `κ(λ) = (λ − i)/(λ + i)` for each eigenvalue.
    pub mapped: Vec<C64>,
    /// Eigenvalues of the computed Cayley transform.
    pub unitary_spectrum: Vec<C64>,
    pub unitary_residual: f64,
    pub spectral_mapping: f64,
    pub gap_to_one: f64,
}

#[derive(Debug, Serialize)]
pub struct WienerView {
    /// `(k, g(k))` for `|k| ≤ n_out`.
    pub coefficients: Vec<(i64, C64)>,
    pub min_abs: f64,
    pub l1_norm: f64,
    pub max_pointwise_residual: f64,
    pub tail_l1: f64,
    pub convolution_residual: f64,
    /// `(t, f(t), g(t))` on an even grid of `[0, 2π)`.
    pub samples: Vec<(f64, C64, C64)>,
}

#[derive(Debug, Serialize)]
pub struct CounterexampleView {
    pub gamma: f64,
    pub rows: Vec<CounterexampleRow>,
    pub hermitian_max_ratio: f64,
    pub passed: bool,
}

fn sorted(mut v: Vec<C64>) -> Vec<C64> {
    v.sort_by(lex_cmp);
    v
}

pub fn cayley_view(a: &CMatrix) -> Result<CayleyView, String> {
    let u = cayley(a, DEFAULT_TOL).map_err(|e| e.to_string())?;
    let d = cayley_diagnostics(a, &u).map_err(|e| e.to_string())?;
    let eigenvalues = herm_eig(&a.hermitian_part(), DEFAULT_TOL).map_err(|e| e.to_string())?.real_eigenvalues();
    let mapped = eigenvalues.iter().map(|&l| kappa(l)).collect();
    let unitary_spectrum = sorted(eigenvalues_of(&u)?);
    Ok(CayleyView {
        eigenvalues,
        mapped,
        unitary_spectrum,
        unitary_residual: d.unitary_residual,
        spectral_mapping: d.spectral_mapping,
        gap_to_one: d.gap_to_one,
    })
}

fn eigenvalues_of(m: &CMatrix) -> Result<Vec<C64>, String> {
    eigenvalues(m).map_err(|e| e.to_string())
}

pub fn wiener_view(text: &str, n_out: usize) -> Result<WienerView, String> {
    let f = FourierElement::parse(text).map_err(|e| e.to_string())?;
    let w = wiener_inverse(&f, n_out, DEFAULT_TOL).map_err(|e| e.to_string())?;
    let samples = (0..PLOT_POINTS)
        .map(|j| {
            let t = std::f64::consts::TAU * j as f64 / PLOT_POINTS as f64;
            (t, f.eval(t), w.inverse.eval(t))
        })
        .collect();
    Ok(WienerView {
        coefficients: w.inverse.coeffs.iter().map(|(&k, &z)| (k, z)).collect(),
        min_abs: w.min_abs,
        l1_norm: w.inverse.l1_norm(),
        max_pointwise_residual: w.max_pointwise_residual,
        tail_l1: w.tail_l1,
        convolution_residual: w.convolution_residual,
        samples,
    })
}

pub fn counterexample_view(gamma: f64, n_max: u32) -> Result<CounterexampleView, String> {
    let r = discontinuous_character_demo(gamma, n_max, DEFAULT_SEED).map_err(|e| e.to_string())?;
    Ok(CounterexampleView {
        gamma: r.gamma,
        rows: r.rows,
        hermitian_max_ratio: r.hermitian_max_ratio,
        passed: r.checks.all_passed(),
    })
}

fn to_json<T: Serialize>(r: Result<T, String>) -> String {
    match r {
        Ok(v) => serde_json::to_string(&v).unwrap_or_else(|e| error_json(&e.to_string())),
        Err(e) => error_json(&e),
    }
}

fn error_json(msg: &str) -> String {
    serde_json::json!({ "error": msg }).to_string()
}

/// Cayley transform of the `n`-point discrete Laplacian.
#[wasm_bindgen]
pub fn cayley_laplacian(n: usize) -> String {
    if n == 0 || n > 64 {
        return error_json("n must lie in 1..=64");
    }
    to_json(cayley_view(&laplacian_1d(n)))
}

/// Cayley transform of a Hermitian matrix given as JSON rows of `[re, im]`.
#[wasm_bindgen]
pub fn cayley_matrix(matrix_json: &str) -> String {
    to_json(parse_matrix(matrix_json).map_err(|e| e.to_string()).and_then(|a| cayley_view(&a)))
}

/// Coefficients of `1/f` from lines `k re im`.
#[wasm_bindgen]
pub fn wiener_coefficients(coeff_text: &str, n_out: usize) -> String {
    to_json(wiener_view(coeff_text, n_out))
}

#[wasm_bindgen]
pub fn counterexample_table(gamma: f64, n_max: u32) -> String {
    if n_max > 40 {
        return error_json("n_max must be at most 40");
    }
    to_json(counterexample_view(gamma, n_max))
}
