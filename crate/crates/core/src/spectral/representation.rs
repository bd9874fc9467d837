use serde::Serialize;

use super::{cluster_radius, commutant, SpectralMeasure};
use crate::algebra::Representation;
use crate::error::{Error, Result};
use crate::linalg::{cluster_points, eps_rank, lex_cmp, normal_diag, op_norm, vec_norm, CMatrix, C64, ZERO};

/// `L²(μ)` on a finite set, realised as `ℂ^|Ω|` with
/// `⟨x, y⟩ = Σ μ_j x_j conj(y_j)`.
#[derive(Debug, Clone, Serialize)]
pub struct WeightedSpace<P = C64> {
    pub points: Vec<P>,
    pub weights: Vec<f64>,
}

impl<P> WeightedSpace<P> {
    pub fn new(points: Vec<P>, weights: Vec<f64>) -> Result<Self> {
        if points.len() != weights.len() {
            return Err(Error::DimensionMismatch {
                expected: format!("{} weights", points.len()),
                found: weights.len().to_string(),
            });
        }
        if weights.iter().any(|&w| w.is_nan() || w < 0.0) {
            return Err(Error::InvalidParameter("weights must be non-negative".into()));
        }
        let total: f64 = weights.iter().sum();
        if (total - 1.0).abs() > 1e-9 {
            return Err(Error::InvalidParameter(format!("weights sum to {total}, not 1")));
        }
        Ok(Self { points, weights })
    }

    /// Operator norm of `m` for the weighted inner product, on the support of μ.
    pub fn operator_norm(&self, m: &CMatrix) -> f64 {
        let support: Vec<usize> = (0..self.weights.len()).filter(|&k| self.weights[k] > 0.0).collect();
        let root: Vec<f64> = self.weights.iter().map(|w| w.sqrt()).collect();
        let s = support.len();
        op_norm(&CMatrix::from_fn(s, s, |i, j| m[(support[i], support[j])] * root[support[i]] / root[support[j]]))
    }
}

/// Multiplication operator `M_μ(g)` and its norm, the μ-essential supremum.
#[derive(Debug, Clone)]
pub struct MultOperator {
    pub matrix: CMatrix,
    pub norm: f64,
}

pub fn mult_operator<P>(space: &WeightedSpace<P>, g: impl Fn(&P) -> C64) -> MultOperator {
    let values: Vec<C64> = space.points.iter().map(g).collect();
    let norm = values
        .iter()
        .zip(&space.weights)
        .filter(|(_, &w)| w > 0.0)
        .map(|(v, _)| v.norm())
        .fold(0.0, f64::max);
    MultOperator { matrix: CMatrix::diag(&values), norm }
}

fn require_commutative(pi: &Representation, tol: f64) -> Result<()> {
    let alg = pi.algebra();
    let residual = alg.commutativity_residual();
    if residual > tol {
        return Err(Error::NotCommutative { residual });
    }
    Ok(())
}

/// Joint spectral resolution of a commutative representation. Points are
/// the joint eigenvalue tuples `(â(e_1), …, â(e_d))`, sorted lexicographically.
pub fn resolution_of_representation(pi: &Representation, tol: f64) -> Result<SpectralMeasure<Vec<C64>>> {
    require_commutative(pi, tol)?;
    let n = pi.space_dim();
    if !pi.is_nondegenerate() {
        let stacked = CMatrix::from_fn(n, n * pi.matrices().len(), |i, j| pi.matrices()[j / n][(i, j % n)]);
        return Err(Error::Degenerate { rank: eps_rank(&stacked, 1e-10), dim: n });
    }
    let mut blocks: Vec<(Vec<C64>, CMatrix)> = vec![(Vec::new(), CMatrix::identity(n))];
    for m in pi.matrices() {
        let radius = cluster_radius(m);
        let mut next = Vec::new();
        for (label, q) in blocks {
            let sub = m.compress(&q);
            let es = normal_diag(&sub, tol)?;
            for (center, members) in cluster_points(&es.eigenvalues, radius) {
                let v = CMatrix::from_columns(&members.iter().map(|&k| es.basis.column(k)).collect::<Vec<_>>(), q.cols());
                let mut l = label.clone();
                l.push(center);
                next.push((l, &q * &v));
            }
        }
        blocks = next;
    }
    blocks.sort_by(|a, b| a.0.iter().zip(&b.0).map(|(x, y)| lex_cmp(x, y)).find(|o| o.is_ne()).unwrap_or(std::cmp::Ordering::Equal));
    let (points, projections): (Vec<_>, Vec<_>) = blocks.into_iter().map(|(l, q)| (l, &q * &q.adjoint())).unzip();
    SpectralMeasure::new(points, projections)
}

/// `‖π(e_i) − ∫ ê_i dP‖` and `dim π' = dim P'`.
pub fn representation_resolution_report(
    pi: &Representation,
    measure: &SpectralMeasure<Vec<C64>>,
    tol: f64,
) -> Result<crate::report::CheckReport> {
    use crate::report::{Check, CheckReport};
    let mut report = CheckReport::new("representation resolution");
    let mut worst: f64 = 0.0;
    for (i, m) in pi.matrices().iter().enumerate() {
        let recon = super::spectral_integral(measure, |label| label.get(i).copied())?;
        worst = worst.max(op_norm(&(m - &recon)) / (1.0 + op_norm(m)));
    }
    report.push(Check::at_most("reconstruction", worst, 1e-9));
    let dp = commutant(pi.matrices(), tol)?.dim();
    let dq = commutant(&measure.projections, tol)?.dim();
    report.push(Check::equals("commutant dimension", dp as f64, dq as f64));
    Ok(report)
}

/// Spectral representation of a cyclic commutative representation.
#[derive(Debug, Clone)]
pub struct SpectralRepresentation {
    pub space: WeightedSpace<Vec<C64>>,
    pub measure: SpectralMeasure<Vec<C64>>,
    /// `V : H → L²(μ)`, `V(π(a)c) = â`.
    pub v: CMatrix,
    /// `max_i ‖V π(e_i) − M_μ(ê_i) V‖` in the weighted norm.
    pub intertwining_residual: f64,
    /// `max(‖V*V − 1‖, ‖VV* − 1‖)` with `V*` the weighted adjoint.
    pub unitarity_residual: f64,
}

impl SpectralRepresentation {
    pub fn weights(&self) -> &[f64] {
        &self.space.weights
    }
}

pub fn spectral_representation(pi: &Representation, c: &[C64], tol: f64) -> Result<SpectralRepresentation> {
    require_commutative(pi, tol)?;
    let n = pi.space_dim();
    let nrm = vec_norm(c);
    if c.len() != n || nrm == 0.0 {
        return Err(Error::NotCyclic { rank: 0, dim: n });
    }
    let c: Vec<C64> = c.iter().map(|z| z / nrm).collect();
    let mut orbit: Vec<Vec<C64>> = pi.matrices().iter().map(|m| m.mul_vec(&c)).collect();
    orbit.push(c.clone());
    let rank = eps_rank(&CMatrix::from_columns(&orbit, n), tol);
    if rank != n {
        return Err(Error::NotCyclic { rank, dim: n });
    }
    let measure = resolution_of_representation(pi, tol)?;
    let pc: Vec<Vec<C64>> = measure.projections.iter().map(|p| p.mul_vec(&c)).collect();
    let mu: Vec<f64> = pc.iter().map(|v| vec_norm(v).powi(2)).collect();
    let k = measure.points.len();
    if k != n || mu.iter().any(|&m| m <= tol) {
        return Err(Error::NotCyclic { rank: mu.iter().filter(|&&m| m > tol).count(), dim: n });
    }
    let v = CMatrix::from_fn(k, n, |t, j| pc[t][j].conj() / mu[t]);
    let root = CMatrix::diag_real(&mu.iter().map(|m| m.sqrt()).collect::<Vec<_>>());
    let w = &root * &v;
    let unitarity_residual = w.unitary_residual();
    let mut intertwining_residual: f64 = 0.0;
    for (i, m) in pi.matrices().iter().enumerate() {
        let hat: Vec<C64> = measure.points.iter().map(|l| l.get(i).copied().unwrap_or(ZERO)).collect();
        let diff = &(&v * m) - &(&CMatrix::diag(&hat) * &v);
        intertwining_residual = intertwining_residual.max(op_norm(&(&root * &diff)));
    }
    let space = WeightedSpace { points: measure.points.clone(), weights: mu };
    Ok(SpectralRepresentation { space, measure, v, intertwining_residual, unitarity_residual })
}
