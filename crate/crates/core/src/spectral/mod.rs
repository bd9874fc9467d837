//! Projection-valued measures on finite point sets, spectral integrals and
//! spectral theorems, commutants, multiplication operators and the spectral
//! representation of commutative representations.

mod commutant;
mod representation;

use std::fmt::Debug;

use rand::Rng;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::linalg::{cluster_points, eps_rank, normal_diag, op_norm, singular_values, CMatrix, C64};
use crate::random;
use crate::report::{Check, CheckReport};
use crate::spectrum::SPECTRUM_CLUSTER;

pub use commutant::{bicommutant_check, commutant, fuglede_check, intertwiner_space, Commutant};
pub use representation::{
    representation_resolution_report,
    mult_operator, resolution_of_representation, spectral_representation, MultOperator, SpectralRepresentation,
    WeightedSpace,
};

const SUBSET_PAIRS: usize = 50;

/// `P({ω})` for each point of a finite set Ω; `P(ω) = Σ_{p∈ω} P({p})`.
#[derive(Debug, Clone, Serialize)]
pub struct SpectralMeasure<P = C64> {
    pub points: Vec<P>,
    pub projections: Vec<CMatrix>,
    pub space_dim: usize,
}

impl<P: Clone + Debug> SpectralMeasure<P> {
    pub fn new(points: Vec<P>, projections: Vec<CMatrix>) -> Result<Self> {
        if points.len() != projections.len() || points.is_empty() {
            return Err(Error::DimensionMismatch {
                expected: format!("{} projections", points.len()),
                found: projections.len().to_string(),
            });
        }
        let n = projections[0].rows();
        if projections.iter().any(|p| p.rows() != n || p.cols() != n) {
            return Err(Error::DimensionMismatch { expected: format!("{n}x{n} projections"), found: "mixed shapes".into() });
        }
        Ok(Self { points, projections, space_dim: n })
    }

    /// `P(ω)` for a subset given by point indices.
    pub fn of_subset(&self, subset: &[usize]) -> CMatrix {
        let mut m = CMatrix::zeros(self.space_dim, self.space_dim);
        for &k in subset {
            m += &self.projections[k];
        }
        m
    }

    pub fn index_of(&self, point: &P) -> Option<usize>
    where
        P: PartialEq,
    {
        self.points.iter().position(|p| p == point)
    }

    /// Projection, orthogonality, completeness and `P(ω₁∩ω₂) = P(ω₁)P(ω₂)`
    /// over random subset pairs.
    pub fn validate(&self, seed: u64, tol: f64) -> CheckReport {
        let mut report = CheckReport::new("spectral measure").with_seed(seed);
        let n = self.space_dim;
        let projection = self
            .projections
            .iter()
            .map(|p| (&(p * p) - p).max_abs().max(p.hermitian_residual()))
            .fold(0.0, f64::max);
        report.push(Check::at_most("projection", projection, tol));
        let mut orth: f64 = 0.0;
        for (i, p) in self.projections.iter().enumerate() {
            for q in &self.projections[i + 1..] {
                orth = orth.max((p * q).max_abs());
            }
        }
        report.push(Check::at_most("orthogonality", orth, tol));
        let all: Vec<usize> = (0..self.points.len()).collect();
        report.push(Check::at_most("completeness", self.of_subset(&all).dist(&CMatrix::identity(n)), tol));

        let mut rng = random::rng(seed);
        let mut inter: f64 = 0.0;
        for _ in 0..SUBSET_PAIRS {
            let a: Vec<usize> = all.iter().copied().filter(|_| rng.random_bool(0.5)).collect();
            let b: Vec<usize> = all.iter().copied().filter(|_| rng.random_bool(0.5)).collect();
            let both: Vec<usize> = a.iter().copied().filter(|k| b.contains(k)).collect();
            inter = inter.max((&(&self.of_subset(&a) * &self.of_subset(&b)) - &self.of_subset(&both)).max_abs());
        }
        report.push(Check::at_most("intersection", inter, tol));
        report
    }
}

/// `∫ f dP = Σ_ω f(ω) P({ω})`.
pub fn spectral_integral<P: Debug>(measure: &SpectralMeasure<P>, f: impl Fn(&P) -> Option<C64>) -> Result<CMatrix> {
    let n = measure.space_dim;
    let mut m = CMatrix::zeros(n, n);
    for (p, proj) in measure.points.iter().zip(&measure.projections) {
        let v = f(p).filter(|z| z.re.is_finite() && z.im.is_finite()).ok_or_else(|| Error::MissingValue(format!("{p:?}")))?;
        m += &proj.scale(v);
    }
    Ok(m)
}

/// Clustering radius for the eigenvalues of `b`.
pub(crate) fn cluster_radius(b: &CMatrix) -> f64 {
    SPECTRUM_CLUSTER * (1.0 + op_norm(b))
}

/// Spectral resolution of a normal matrix: clustered eigenvalues and the
/// orthogonal projections onto their eigenspaces.
pub fn resolution_of_normal(b: &CMatrix, tol: f64) -> Result<SpectralMeasure<C64>> {
    let es = normal_diag(b, tol)?;
    let n = b.rows();
    let mut points = Vec::new();
    let mut projections = Vec::new();
    for (center, members) in cluster_points(&es.eigenvalues, cluster_radius(b)) {
        let mut p = CMatrix::zeros(n, n);
        for k in members {
            let v = es.basis.column(k);
            p += &CMatrix::from_fn(n, n, |i, j| v[i] * v[j].conj());
        }
        points.push(center);
        projections.push(p);
    }
    SpectralMeasure::new(points, projections)
}

/// `‖b − ∫ z dP‖ / ‖b‖` and `dim {b}' = dim P'`.
pub fn resolution_report(b: &CMatrix, measure: &SpectralMeasure<C64>, tol: f64) -> Result<CheckReport> {
    let mut report = CheckReport::new("spectral resolution");
    let recon = spectral_integral(measure, |z| Some(*z))?;
    let scale = op_norm(b).max(f64::MIN_POSITIVE);
    report.push(Check::at_most("reconstruction", op_norm(&(b - &recon)) / scale, 1e-9));
    let db = commutant(std::slice::from_ref(b), tol)?.basis.len();
    let dp = commutant(&measure.projections, tol)?.basis.len();
    report.push(Check::equals("commutant dimension", db as f64, dp as f64));
    Ok(report)
}

/// `f(b) = ∫ f dP` over the resolution of `b`.
pub fn borel_calculus(b: &CMatrix, f: impl Fn(C64) -> C64, tol: f64) -> Result<CMatrix> {
    let p = resolution_of_normal(b, tol)?;
    spectral_integral(&p, |z| Some(f(*z)))
}

/// For every atom `λ`: `rank P({λ})` against the kernel dimension of `b − λ`.
pub fn atoms_are_eigenvalues(b: &CMatrix, tol: f64) -> Result<CheckReport> {
    let p = resolution_of_normal(b, tol)?;
    let n = b.rows();
    let radius = 10.0 * cluster_radius(b);
    let mut report = CheckReport::new("atoms are eigenvalues");
    for (lambda, proj) in p.points.iter().zip(&p.projections) {
        let rank = eps_rank(proj, 1e-8);
        let shifted = b - &CMatrix::identity(n).scale(*lambda);
        let kernel = singular_values(&shifted).iter().filter(|&&s| s <= radius).count();
        report.push(Check::equals(format!("multiplicity at {:.6}{:+.6}i", lambda.re, lambda.im), rank as f64, kernel as f64));
    }
    Ok(report)
}

/// `f(P) = P ∘ f⁻¹`, merging points with equal image.
pub fn image_measure<P, Q: Clone + Debug + PartialEq>(
    measure: &SpectralMeasure<P>,
    f: impl Fn(&P) -> Q,
) -> SpectralMeasure<Q> {
    let mut points: Vec<Q> = Vec::new();
    let mut projections: Vec<CMatrix> = Vec::new();
    for (p, proj) in measure.points.iter().zip(&measure.projections) {
        let q = f(p);
        match points.iter().position(|x| *x == q) {
            Some(k) => projections[k] += proj,
            None => {
                points.push(q);
                projections.push(proj.clone());
            }
        }
    }
    SpectralMeasure { points, projections, space_dim: measure.space_dim }
}

/// Image measure for complex-valued maps, merging images within `radius`.
pub fn image_measure_clustered<P>(measure: &SpectralMeasure<P>, f: impl Fn(&P) -> C64, radius: f64) -> SpectralMeasure<C64> {
    let images: Vec<C64> = measure.points.iter().map(f).collect();
    let n = measure.space_dim;
    let mut points = Vec::new();
    let mut projections = Vec::new();
    for (center, members) in cluster_points(&images, radius) {
        let mut p = CMatrix::zeros(n, n);
        for k in members {
            p += &measure.projections[k];
        }
        points.push(center);
        projections.push(p);
    }
    SpectralMeasure { points, projections, space_dim: n }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::{c, ONE, ZERO};

    #[test]
    fn diagonal_resolution() {
        let p = resolution_of_normal(&CMatrix::diag_real(&[1.0, 2.0, 3.0]), 1e-9).unwrap();
        assert_eq!(p.points.len(), 3);
        let r = p.validate(1, 1e-12);
        assert!(r.all_passed(), "{r:?}");
        assert!(p.of_subset(&[]).max_abs() == 0.0);
    }

    #[test]
    fn repeated_eigenvalue() {
        let b = CMatrix::diag_real(&[1.0, 1.0, 5.0]);
        let p = resolution_of_normal(&b, 1e-9).unwrap();
        assert_eq!(p.points, vec![ONE, c(5.0, 0.0)]);
        assert_eq!(eps_rank(&p.projections[0], 1e-9), 2);
        assert_eq!(eps_rank(&p.projections[1], 1e-9), 1);
        assert!(resolution_report(&b, &p, 1e-9).unwrap().all_passed());
        assert!(atoms_are_eigenvalues(&b, 1e-9).unwrap().all_passed());
    }

    #[test]
    fn flip_projections() {
        let b = CMatrix::from_real_rows(&[&[0.0, 1.0], &[1.0, 0.0]]);
        let p = resolution_of_normal(&b, 1e-9).unwrap();
        let half = |s: f64| (&CMatrix::identity(2) + &b.scale_real(s)).scale_real(0.5);
        assert!(p.projections[0].dist(&half(-1.0)) < 1e-12);
        assert!(p.projections[1].dist(&half(1.0)) < 1e-12);
    }

    #[test]
    fn non_orthogonal_projections_fail() {
        let v = [ONE, ZERO];
        let w = [c(1.0 / 2f64.sqrt(), 0.0), c(1.0 / 2f64.sqrt(), 0.0)];
        let rank_one = |x: &[C64]| CMatrix::from_fn(2, 2, |i, j| x[i] * x[j].conj());
        let p = SpectralMeasure::new(vec![ZERO, ONE], vec![rank_one(&v), rank_one(&w)]).unwrap();
        let r = p.validate(1, 1e-9);
        assert!(!r.get("orthogonality").unwrap().passed);
    }

    #[test]
    fn integral_examples() {
        let b = CMatrix::diag_real(&[2.0, -1.0, 2.0]);
        let p = resolution_of_normal(&b, 1e-9).unwrap();
        assert!(spectral_integral(&p, |_| Some(ONE)).unwrap().dist(&CMatrix::identity(3)) < 1e-14);
        let k = p.index_of(&c(2.0, 0.0)).unwrap();
        let ind = spectral_integral(&p, |z| Some(if *z == c(2.0, 0.0) { ONE } else { ZERO })).unwrap();
        assert!(ind.dist(&p.projections[k]) < 1e-14);
        assert!(spectral_integral(&p, |z| Some(*z)).unwrap().dist(&b) < 1e-12);
        assert!(matches!(spectral_integral(&p, |_| None), Err(Error::MissingValue(_))));
    }

    #[test]
    fn borel_examples() {
        let mut rng = random::rng(5);
        let b = random::normal_matrix(&mut rng, 4);
        assert!(borel_calculus(&b, |z| z.conj(), 1e-9).unwrap().dist(&b.adjoint()) < 1e-10);
        let r = borel_calculus(&CMatrix::diag_real(&[4.0, 9.0]), |z| z.sqrt(), 1e-9).unwrap();
        assert!(r.dist(&CMatrix::diag_real(&[2.0, 3.0])) < 1e-14);
    }

    #[test]
    fn circulant_atoms() {
        let shift = CMatrix::from_real_rows(&[&[0.0, 0.0, 1.0], &[1.0, 0.0, 0.0], &[0.0, 1.0, 0.0]]);
        let r = atoms_are_eigenvalues(&shift, 1e-9).unwrap();
        assert_eq!(r.checks.len(), 3);
        assert!(r.all_passed());
    }

    #[test]
    fn image_of_square_merges() {
        let b = CMatrix::diag_real(&[-1.0, 1.0]);
        let p = resolution_of_normal(&b, 1e-9).unwrap();
        let q = image_measure(&p, |z| z * z);
        assert_eq!(q.points, vec![ONE]);
        assert!(q.projections[0].dist(&CMatrix::identity(2)) < 1e-14);
        let same = image_measure(&p, |z| *z);
        assert_eq!(same.points, p.points);
    }
}
