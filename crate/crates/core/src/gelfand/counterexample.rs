use rand::Rng;
use serde::Serialize;

use crate::algebra::{AlgebraElement, StarAlgebra};
use crate::error::{Error, Result};
use crate::linalg::{C64, I, ONE};
use crate::random;
use crate::report::{Check, CheckReport};

const HERMITIAN_SAMPLES: usize = 100;

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct CounterexampleRow {
    pub n: u32,
    /// `|δ₋ₙ| = γ⁻ⁿ`.
    pub norm: f64,
    /// `|τ(δ₋ₙ)| = 1`.
    pub character_abs: f64,
    /// `|τ(δ₋ₙ)| / |δ₋ₙ| = γⁿ`.
    pub ratio: f64,
}

#[derive(Debug, Clone, Serialize)]
pub struct CounterexampleReport {
    pub gamma: f64,
    pub rows: Vec<CounterexampleRow>,
    /// Largest `|τ(h)| / |h|` over the sampled Hermitian `h` and characters.
    pub hermitian_max_ratio: f64,
    /// `|δ₁ + δ₋₁|`.
    pub reference_norm: f64,
    /// Largest `|τ(δ₁ + δ₋₁)|` over the characters used.
    pub reference_character_abs: f64,
    pub checks: CheckReport,
}

/// Characters `τ_u(δ_n) = uⁿ` with `|u| = 1` on the weighted group ring
/// `Σ |a(n)| γⁿ`: contractive on Hermitian elements, unbounded overall.
pub fn discontinuous_character_demo(gamma: f64, n_max: u32, seed: u64) -> Result<CounterexampleReport> {
    if n_max == 0 {
        return Err(Error::InvalidParameter("n_max must be positive".into()));
    }
    let window = 2 * n_max.max(1) as i64;
    let support: Vec<i64> = (-window..=window).collect();
    let alg = StarAlgebra::weighted_int_ring(&support, gamma)?;
    let exps = alg.exponents().expect("weighted ring").to_vec();

    let mut rng = random::rng(seed);
    let mut units: Vec<C64> = vec![ONE, -ONE, I, -I];
    for _ in 0..4 {
        units.push(C64::from_polar(1.0, rng.random_range(0.0..std::f64::consts::TAU)));
    }
    let tau = |u: C64, a: &AlgebraElement| -> C64 {
        a.coeffs().iter().zip(&exps).map(|(z, &n)| z * u.powi(n as i32)).sum()
    };

    let basis = |n: i64| {
        let idx = exps.iter().position(|&k| k == n).expect("inside the window");
        AlgebraElement::basis(&alg, idx)
    };
    let mut rows = Vec::new();
    for n in 1..=n_max {
        let d = basis(-(n as i64));
        let norm = d.norm();
        let character_abs = units.iter().map(|&u| tau(u, &d).norm()).fold(0.0, f64::max);
        rows.push(CounterexampleRow { n, norm, character_abs, ratio: character_abs / norm });
    }

    let mut hermitian_max_ratio: f64 = 0.0;
    for _ in 0..HERMITIAN_SAMPLES {
        let h = random::hermitian_element(&mut rng, &alg);
        let hn = h.norm();
        for &u in &units {
            hermitian_max_ratio = hermitian_max_ratio.max(tau(u, &h).norm() / hn);
        }
    }

    let reference = basis(1).plus(&basis(-1))?;
    let reference_norm = reference.norm();
    let reference_character_abs = units.iter().map(|&u| tau(u, &reference).norm()).fold(0.0, f64::max);

    let mut checks = CheckReport::new("discontinuous character").with_seed(seed);
    let norm_err = rows.iter().map(|r| (r.norm - gamma.powi(-(r.n as i32))).abs() / r.norm).fold(0.0, f64::max);
    let char_err = rows.iter().map(|r| (r.character_abs - 1.0).abs()).fold(0.0, f64::max);
    checks.push(Check::at_most("|d(-n)| = gamma^-n", norm_err, 1e-12));
    checks.push(Check::at_most("|tau(d(-n))| = 1", char_err, 1e-12));
    checks.push(Check::at_most("|tau(h)| / |h| on hermitian h", hermitian_max_ratio, 1.0 + 1e-12));
    checks.push(Check::at_most("|tau(d1 + d-1)| - |d1 + d-1|", reference_character_abs - reference_norm, 0.0));
    let last = rows.last().expect("n_max ≥ 1");
    checks.push(Check::at_least("largest ratio", last.ratio, gamma.powi(last.n as i32) * (1.0 - 1e-12)));

    Ok(CounterexampleReport { gamma, rows, hermitian_max_ratio, reference_norm, reference_character_abs, checks })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn gamma_two() {
        let r = discontinuous_character_demo(2.0, 3, 1).unwrap();
        assert!(r.checks.all_passed(), "{:?}", r.checks);
        assert!((r.rows[2].norm - 0.125).abs() < 1e-15);
        assert!((r.rows[2].character_abs - 1.0).abs() < 1e-12);
        assert!((r.reference_norm - 2.5).abs() < 1e-15);
        assert!(r.reference_character_abs <= 2.0 + 1e-12);
    }

    #[test]
    fn gamma_four_ratios_grow() {
        let r = discontinuous_character_demo(4.0, 6, 1).unwrap();
        for row in &r.rows {
            assert!((row.ratio / 4f64.powi(row.n as i32) - 1.0).abs() < 1e-12);
        }
        assert!(r.checks.all_passed());
    }

    #[test]
    fn small_gamma_is_rejected() {
        assert!(matches!(discontinuous_character_demo(1.5, 3, 1), Err(Error::InvalidParameter(_))));
    }
}
