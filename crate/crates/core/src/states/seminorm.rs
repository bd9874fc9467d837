use std::sync::Arc;

use rand::Rng;
use serde::Serialize;

use super::LinearFunctional;
use crate::algebra::{AlgebraElement, StarAlgebra};
use crate::error::{Error, Result};
use crate::linalg::{op_norm, CMatrix, C64};
use crate::random;
use crate::report::{Check, CheckReport};
use crate::spectrum::{is_hermitian_algebra, ptak};

const HERMITIAN_SAMPLES: usize = 20;

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct SeminormResult {
    /// `‖a‖_o = r_σ(a)`.
    pub value: f64,
    /// Supremum of `ψ(a*a)^{1/2}` over vector states of the realisation, or
    /// over characters when there is no realisation.
    pub extreme_state_value: Option<f64>,
    /// Largest `ψ(a*a)^{1/2}` over the sampled states.
    pub sampled_max: f64,
}

/// Gelfand–Naimark seminorm on a Hermitian algebra, evaluated through the
/// Pták function and cross-checked against states.
#[derive(Debug, Clone)]
pub struct EnvelopingSeminorm {
    algebra: Arc<StarAlgebra>,
    characters: Option<Vec<Vec<C64>>>,
    seed: u64,
}

impl EnvelopingSeminorm {
    pub fn new(algebra: &Arc<StarAlgebra>, seed: u64) -> Result<Self> {
        let report = is_hermitian_algebra(algebra, HERMITIAN_SAMPLES, seed)?;
        if !report.all_passed() {
            let violation = report.failures().map(|c| c.value).fold(0.0, f64::max);
            return Err(Error::NotHermitianAlgebra { violation });
        }
        let characters = if algebra.realization().is_none() {
            Some(crate::gelfand::characters(algebra, seed)?.characters)
        } else {
            None
        };
        Ok(Self { algebra: Arc::clone(algebra), characters, seed })
    }

    pub fn algebra(&self) -> &Arc<StarAlgebra> {
        &self.algebra
    }

    /// `samples` random states: Haar vector states and rank-3 mixtures.
    pub fn eval(&self, a: &AlgebraElement, samples: usize) -> Result<SeminormResult> {
        if !Arc::ptr_eq(a.algebra(), &self.algebra) {
            return Err(Error::AlgebraMismatch);
        }
        let value = ptak(a)?;
        let asa = a.adjoint().mul(a)?;
        let mut rng = random::rng(self.seed ^ 0x5eed);
        let mut sampled_max: f64 = 0.0;
        let extreme_state_value = match &self.characters {
            Some(chars) => {
                let mut best: f64 = 0.0;
                for tau in chars {
                    let v: C64 = tau.iter().zip(a.coeffs()).map(|(t, x)| t * x).sum();
                    best = best.max(v.norm());
                }
                sampled_max = best;
                Some(best)
            }
            None => {
                let q = self.algebra.essential_basis().ok_or(Error::NoRealization)?;
                let ra = a.realize()?;
                for _ in 0..samples {
                    let psi = random_state(&mut rng, &self.algebra, q)?;
                    sampled_max = sampled_max.max(psi.eval(&asa)?.re.max(0.0).sqrt());
                }
                Some(op_norm(&(&ra * q)))
            }
        };
        Ok(SeminormResult { value, extreme_state_value, sampled_max })
    }
}

/// Haar vector state or a mixture of three, supported on the essential subspace.
fn random_state(rng: &mut impl Rng, alg: &Arc<StarAlgebra>, q: &CMatrix) -> Result<LinearFunctional> {
    let k = if rng.random_bool(0.5) { 1 } else { 3 };
    let n = q.rows();
    let mut rho = CMatrix::zeros(n, n);
    let weights: Vec<f64> = (0..k).map(|_| random::uniform(rng, 0.05, 1.0)).collect();
    let total: f64 = weights.iter().sum();
    for w in weights {
        let x = q.mul_vec(&random::unit_vector(rng, q.cols()));
        rho += &CMatrix::from_fn(n, n, |i, j| x[i] * x[j].conj() * (w / total));
    }
    LinearFunctional::from_density(alg, &rho)
}

/// `‖a‖_o` with the default seed and 50 sampled states.
pub fn enveloping_seminorm(a: &AlgebraElement) -> Result<f64> {
    let s = EnvelopingSeminorm::new(a.algebra(), random::DEFAULT_SEED)?;
    Ok(s.eval(a, 50)?.value)
}

/// `|ψ(a)| ≤ ‖a‖_o` and `ψ(a*a)^{1/2} ≤ ‖a‖_o` for sampled `a` and states
/// `ψ`, and the extreme vector state reaching `‖a‖_o`.
pub fn universal_norm_check(alg: &Arc<StarAlgebra>, samples: usize, seed: u64, tol: f64) -> Result<CheckReport> {
    let q = alg.essential_basis().ok_or(Error::NoRealization)?;
    let semi = EnvelopingSeminorm::new(alg, seed)?;
    let mut rng = random::rng(seed);
    let mut slack_value: f64 = f64::NEG_INFINITY;
    let mut slack_square: f64 = f64::NEG_INFINITY;
    let mut extreme_gap: f64 = 0.0;
    let mut violations = 0usize;
    for _ in 0..samples {
        let a = random::element(&mut rng, alg);
        let r = semi.eval(&a, 0)?;
        let psi = random_state(&mut rng, alg, q)?;
        let scale = 1.0 + r.value;
        let s1 = (psi.eval(&a)?.norm() - r.value) / scale;
        let s2 = (psi.eval(&a.adjoint().mul(&a)?)?.re.max(0.0).sqrt() - r.value) / scale;
        if s1 > tol || s2 > tol {
            violations += 1;
        }
        slack_value = slack_value.max(s1);
        slack_square = slack_square.max(s2);
        if let Some(e) = r.extreme_state_value {
            extreme_gap = extreme_gap.max((e - r.value).abs() / scale);
        }
    }
    let mut report = CheckReport::new("universal norm").with_seed(seed);
    report.push(Check::at_most("|psi(a)| - |a|_o", slack_value, tol));
    report.push(Check::at_most("psi(a*a)^1/2 - |a|_o", slack_square, tol));
    report.push(Check::at_most("extreme state gap", extreme_gap, 1e-6));
    report.push(Check::equals("violations", violations as f64, 0.0));
    Ok(report)
}
