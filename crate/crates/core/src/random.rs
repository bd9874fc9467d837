//! Seeded sampling of matrices, vectors and algebra elements.

use std::sync::Arc;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;

use crate::algebra::{AlgebraElement, StarAlgebra};
use crate::linalg::{c, vec_norm, CMatrix, C64, ZERO};

/// Seed used by every sampling check unless the caller overrides it.
pub const DEFAULT_SEED: u64 = 0xC5A1;

pub type SampleRng = ChaCha8Rng;

pub fn rng(seed: u64) -> SampleRng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Standard complex Gaussian (independent real and imaginary parts).
pub fn gaussian(rng: &mut impl Rng) -> C64 {
    let re: f64 = rng.sample(StandardNormal);
    let im: f64 = rng.sample(StandardNormal);
    c(re, im)
}

pub fn gaussian_vector(rng: &mut impl Rng, n: usize) -> Vec<C64> {
    (0..n).map(|_| gaussian(rng)).collect()
}

/// Uniformly distributed unit vector (normalised Gaussian).
pub fn unit_vector(rng: &mut impl Rng, n: usize) -> Vec<C64> {
    loop {
        let v = gaussian_vector(rng, n);
        let nrm = vec_norm(&v);
        if nrm > 1e-8 {
            return v.into_iter().map(|z| z / nrm).collect();
        }
    }
}

pub fn gaussian_matrix(rng: &mut impl Rng, rows: usize, cols: usize) -> CMatrix {
    CMatrix::from_fn(rows, cols, |_, _| gaussian(rng))
}

pub fn hermitian_matrix(rng: &mut impl Rng, n: usize) -> CMatrix {
    gaussian_matrix(rng, n, n).hermitian_part()
}

/// Haar-distributed unitary via Gram–Schmidt on a Gaussian matrix.
pub fn unitary_matrix(rng: &mut impl Rng, n: usize) -> CMatrix {
    let g = gaussian_matrix(rng, n, n);
    let mut cols: Vec<Vec<C64>> = Vec::with_capacity(n);
    for j in 0..n {
        let mut v = g.column(j);
        for _ in 0..2 {
            for q in &cols {
                let proj: C64 = q.iter().zip(&v).map(|(a, b)| a.conj() * b).sum();
                for (vi, qi) in v.iter_mut().zip(q) {
                    *vi -= proj * qi;
                }
            }
        }
        let nrm = vec_norm(&v);
        cols.push(v.into_iter().map(|z| z / nrm).collect());
    }
    CMatrix::from_columns(&cols, n)
}

/// `u diag(λ) u*` with Haar `u`.
pub fn normal_with_spectrum(rng: &mut impl Rng, spectrum: &[C64]) -> CMatrix {
    let u = unitary_matrix(rng, spectrum.len());
    &(&u * &CMatrix::diag(spectrum)) * &u.adjoint()
}

/// Normal matrix with Gaussian eigenvalues.
pub fn normal_matrix(rng: &mut impl Rng, n: usize) -> CMatrix {
    let spectrum = gaussian_vector(rng, n);
    normal_with_spectrum(rng, &spectrum)
}

/// Positive semidefinite `g* g`.
pub fn positive_matrix(rng: &mut impl Rng, n: usize) -> CMatrix {
    let g = gaussian_matrix(rng, n, n);
    (&g.adjoint() * &g).hermitian_part()
}

pub fn uniform(rng: &mut impl Rng, lo: f64, hi: f64) -> f64 {
    lo + (hi - lo) * rng.random::<f64>()
}

pub fn index(rng: &mut impl Rng, n: usize) -> usize {
    rng.random_range(0..n)
}

/// Gaussian coefficients on every basis element; on a ℤ window only the
/// exponents with `|n| ≤ max/2` are used so that products stay inside.
pub fn element(rng: &mut impl Rng, algebra: &Arc<StarAlgebra>) -> AlgebraElement {
    let coeffs = match algebra.exponents() {
        Some(exps) => {
            let half = exps.iter().map(|n| n.abs()).max().unwrap_or(0) / 2;
            exps.iter().map(|n| if n.abs() <= half { gaussian(rng) } else { ZERO }).collect()
        }
        None => gaussian_vector(rng, algebra.dim()),
    };
    AlgebraElement::new(algebra, coeffs).expect("finite coefficients of the right length")
}

/// `(x + x*)/2` for a random `x`.
pub fn hermitian_element(rng: &mut impl Rng, algebra: &Arc<StarAlgebra>) -> AlgebraElement {
    element(rng, algebra).hermitian_part()
}
