//! Finite-dimensional *-algebras described by structure constants and an
//! involution matrix, optionally realised faithfully by matrices.

mod element;
pub mod groups;
mod representation;
mod validate;

use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::{c, lstsq, mat_inv, range_basis, CMatrix, C64, ONE, ZERO};

pub use element::{element_adjoint, element_mul, element_norm, AlgebraElement};
pub use representation::{regular_rep, Representation};
pub use validate::{validate, validate_seeded};

/// How the norm of an element is evaluated.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "lowercase")]
pub enum NormSpec {
    /// Operator norm of the matrix realisation.
    Operator,
    /// `Σ |a_i|`.
    L1,
    /// `Σ |a(n)| γⁿ` over a ℤ-indexed basis.
    Weighted { gamma: f64 },
    /// `max |a_i|`.
    Sup,
    /// `|λ| + |a|` on an adjoined unit (coordinate 0) and the inner norm on the rest.
    Unitised { inner: Box<NormSpec> },
}

/// Multiplication law.
#[derive(Debug, Clone, PartialEq)]
pub(crate) enum Product {
    /// `e_i e_j = Σ_k c[(i·dim + j)·dim + k] e_k`.
    Dense(Vec<C64>),
    /// Basis `δ_n` for `n` in a finite window of ℤ; `δ_m δ_n = δ_{m+n}`,
    /// undefined (an error) when `m + n` leaves the window.
    IntWindow { exponents: Vec<i64> },
}

/// A finite-dimensional *-algebra.
#[derive(Debug, Clone)]
pub struct StarAlgebra {
    dim: usize,
    labels: Vec<String>,
    product: Product,
    /// Row `i` holds the coordinates of `e_i*`.
    involution: CMatrix,
    norm: NormSpec,
    realization: Option<Vec<CMatrix>>,
    unit: Option<Vec<C64>>,
    essential: Option<CMatrix>,
    coord_gram_inv: Option<CMatrix>,
    generators: Vec<CMatrix>,
}

/// Residual below which a least-squares unit candidate is accepted.
const UNIT_RESIDUAL: f64 = 1e-10;

impl StarAlgebra {
    /// Builds an algebra from dense structure constants.
    ///
    /// `structure[(i·dim + j)·dim + k]` is the coefficient of `e_k` in
    /// `e_i e_j`; row `i` of `involution` holds the coordinates of `e_i*`.
    pub fn from_structure(
        labels: Vec<String>,
        structure: Vec<C64>,
        involution: CMatrix,
        norm: NormSpec,
        realization: Option<Vec<CMatrix>>,
    ) -> Result<Arc<Self>> {
        let dim = labels.len();
        if dim == 0 {
            return Err(Error::InvalidParameter("algebra dimension must be positive".into()));
        }
        if structure.len() != dim * dim * dim {
            return Err(Error::DimensionMismatch {
                expected: format!("{} structure constants", dim * dim * dim),
                found: structure.len().to_string(),
            });
        }
        if structure.iter().any(|z| !z.re.is_finite() || !z.im.is_finite()) || !involution.is_finite() {
            return Err(Error::NonFinite);
        }
        if involution.rows() != dim || involution.cols() != dim {
            return Err(Error::DimensionMismatch {
                expected: format!("{dim}x{dim} involution"),
                found: format!("{}x{}", involution.rows(), involution.cols()),
            });
        }
        Self::build(labels, Product::Dense(structure), involution, norm, realization, Vec::new())
    }

    fn build(
        labels: Vec<String>,
        product: Product,
        involution: CMatrix,
        norm: NormSpec,
        realization: Option<Vec<CMatrix>>,
        generators: Vec<CMatrix>,
    ) -> Result<Arc<Self>> {
        let dim = labels.len();
        if let Some(r) = &realization {
            if r.len() != dim {
                return Err(Error::DimensionMismatch {
                    expected: format!("{dim} realization matrices"),
                    found: r.len().to_string(),
                });
            }
            let n = r[0].rows();
            if r.iter().any(|m| m.rows() != n || m.cols() != n) {
                return Err(Error::DimensionMismatch {
                    expected: format!("{n}x{n} realization matrices"),
                    found: "mixed shapes".into(),
                });
            }
        }
        match (&norm, &realization, &product) {
            (NormSpec::Operator, None, _) => {
                return Err(Error::InvalidParameter("operator norm requires a matrix realization".into()))
            }
            (NormSpec::Weighted { .. }, _, Product::Dense(_)) => {
                return Err(Error::InvalidParameter("weighted norm requires a ℤ-indexed basis".into()))
            }
            (NormSpec::Weighted { gamma }, _, _) if gamma.is_nan() || *gamma < 1.0 => {
                return Err(Error::InvalidParameter(format!("weight γ = {gamma} must be at least 1")))
            }
            _ => {}
        }
        let mut alg = StarAlgebra {
            dim,
            labels,
            product,
            involution,
            norm,
            realization,
            unit: None,
            essential: None,
            coord_gram_inv: None,
            generators,
        };
        alg.unit = alg.detect_unit();
        if let Some(r) = &alg.realization {
            let n = r[0].rows();
            let stacked = CMatrix::from_fn(n, n * dim, |i, j| r[j / n][(i, j % n)]);
            alg.essential = Some(range_basis(&stacked, 1e-10));
            let gram = CMatrix::from_fn(dim, dim, |i, j| r[i].hs_inner(&r[j]));
            alg.coord_gram_inv = Some(mat_inv(&gram).map_err(|_| Error::InvalidParameter(
                "realization matrices are linearly dependent (not faithful)".into(),
            ))?);
        }
        Ok(Arc::new(alg))
    }

    /// Least-squares solve of `e·e_i = e_i·e = e_i`; accepted when the residual is tiny.
    fn detect_unit(&self) -> Option<Vec<C64>> {
        let d = self.dim;
        match &self.product {
            Product::IntWindow { exponents } => {
                let pos = exponents.iter().position(|&n| n == 0)?;
                let mut u = vec![ZERO; d];
                u[pos] = ONE;
                Some(u)
            }
            Product::Dense(cs) => {
                // rows: (side, i, m); columns: k
                let a = CMatrix::from_fn(2 * d * d, d, |row, k| {
                    let side = row / (d * d);
                    let i = (row / d) % d;
                    let m = row % d;
                    if side == 0 {
                        cs[(k * d + i) * d + m]
                    } else {
                        cs[(i * d + k) * d + m]
                    }
                });
                let b = CMatrix::from_fn(2 * d * d, 1, |row, _| {
                    let i = (row / d) % d;
                    let m = row % d;
                    if i == m {
                        ONE
                    } else {
                        ZERO
                    }
                });
                let x = lstsq(&a, &b, 1e-12);
                let residual = (&(&a * &x) - &b).frobenius_norm();
                if residual <= UNIT_RESIDUAL * (d as f64).sqrt() {
                    Some(x.column(0))
                } else {
                    None
                }
            }
        }
    }

    /// The full matrix algebra `M_n` with matrix-unit basis `e_ij` (row-major),
    /// realised by itself with the operator norm.
    pub fn full_matrix(n: usize) -> Arc<Self> {
        let dim = n * n;
        let mut structure = vec![ZERO; dim * dim * dim];
        let mut involution = CMatrix::zeros(dim, dim);
        let mut labels = Vec::with_capacity(dim);
        let mut realization = Vec::with_capacity(dim);
        for i in 0..n {
            for j in 0..n {
                labels.push(format!("e{}{}", i + 1, j + 1));
                realization.push(CMatrix::unit(n, i, j));
                involution[(i * n + j, j * n + i)] = ONE;
                // e_ij e_jl = e_il
                for l in 0..n {
                    let a = i * n + j;
                    let b = j * n + l;
                    let k = i * n + l;
                    structure[(a * dim + b) * dim + k] = ONE;
                }
            }
        }
        Self::build(labels, Product::Dense(structure), involution, NormSpec::Operator, Some(realization), Vec::new())
            .expect("matrix units form a valid algebra")
    }

    /// The commutative algebra ℂⁿ of diagonal matrices, basis the diagonal
    /// projections.
    pub fn diagonal(n: usize) -> Arc<Self> {
        let mut structure = vec![ZERO; n * n * n];
        for i in 0..n {
            structure[(i * n + i) * n + i] = ONE;
        }
        let labels = (0..n).map(|i| format!("p{}", i + 1)).collect();
        let realization = (0..n).map(|i| CMatrix::unit(n, i, i)).collect();
        Self::build(labels, Product::Dense(structure), CMatrix::identity(n), NormSpec::Operator, Some(realization), Vec::new())
            .expect("diagonal projections form a valid algebra")
    }

    /// Smallest *-subalgebra of `N×N` matrices containing the generators.
    ///
    /// The span of the generators and their adjoints is closed under
    /// products until its dimension stabilises; the basis is orthonormal in
    /// the trace inner product and serves as the realisation.
    pub fn generate_matrix_algebra(generators: &[CMatrix], tol: f64) -> Result<Arc<Self>> {
        let first = generators.first().ok_or(Error::EmptyGenerators)?;
        let n = first.rows();
        for g in generators {
            if !g.is_square() || g.rows() != n {
                return Err(Error::DimensionMismatch {
                    expected: format!("{n}x{n} generators"),
                    found: format!("{}x{}", g.rows(), g.cols()),
                });
            }
            if !g.is_finite() {
                return Err(Error::NonFinite);
            }
        }
        if generators.iter().all(|g| g.max_abs() == 0.0) {
            return Err(Error::EmptyGenerators);
        }
        let cap = n * n;
        let mut basis: Vec<CMatrix> = Vec::new();
        let try_add = |basis: &mut Vec<CMatrix>, m: &CMatrix| -> Result<bool> {
            let scale = m.frobenius_norm();
            if scale == 0.0 {
                return Ok(false);
            }
            let mut r = m.scale_real(1.0 / scale);
            for _ in 0..2 {
                for b in basis.iter() {
                    let proj = b.hs_inner(&r);
                    r = &r - &b.scale(proj);
                }
            }
            let rn = r.frobenius_norm();
            if rn <= tol {
                return Ok(false);
            }
            if basis.len() >= cap {
                return Err(Error::ClosureCap { cap });
            }
            basis.push(r.scale_real(1.0 / rn));
            Ok(true)
        };
        for g in generators {
            try_add(&mut basis, g)?;
            try_add(&mut basis, &g.adjoint())?;
        }
        let mut frontier = 0;
        while frontier < basis.len() {
            let end = basis.len();
            for i in 0..end {
                for j in frontier.min(i)..end {
                    // every pair with at least one member beyond the frontier
                    if i < frontier && j < frontier {
                        continue;
                    }
                    let p = &basis[i] * &basis[j];
                    let q = &basis[j] * &basis[i];
                    try_add(&mut basis, &p)?;
                    try_add(&mut basis, &q)?;
                }
            }
            frontier = end;
        }
        Self::from_matrix_basis(basis, generators.to_vec())
    }

    /// Algebra whose basis is a given trace-orthonormal, product-closed and
    /// *-closed family of matrices.
    fn from_matrix_basis(basis: Vec<CMatrix>, generators: Vec<CMatrix>) -> Result<Arc<Self>> {
        let dim = basis.len();
        let mut structure = vec![ZERO; dim * dim * dim];
        for i in 0..dim {
            for j in 0..dim {
                let p = &basis[i] * &basis[j];
                for k in 0..dim {
                    let v = basis[k].hs_inner(&p);
                    structure[(i * dim + j) * dim + k] = clean(v);
                }
            }
        }
        let involution = CMatrix::from_fn(dim, dim, |i, k| clean(basis[k].hs_inner(&basis[i].adjoint())));
        let labels = (0..dim).map(|i| format!("b{i}")).collect();
        Self::build(labels, Product::Dense(structure), involution, NormSpec::Operator, Some(basis), generators)
    }

    /// Group ring ℂ[G] with basis `δ_g`, ℓ¹ norm and the left regular
    /// representation as realisation. Index 0 must be the identity.
    pub fn group_ring(table: &[Vec<usize>], inverses: &[usize]) -> Result<Arc<Self>> {
        groups::check_group(table, inverses)?;
        let n = table.len();
        let mut structure = vec![ZERO; n * n * n];
        let mut involution = CMatrix::zeros(n, n);
        let mut realization = Vec::with_capacity(n);
        for g in 0..n {
            for h in 0..n {
                structure[(g * n + h) * n + table[g][h]] = ONE;
            }
            involution[(g, inverses[g])] = ONE;
            realization.push(CMatrix::from_fn(n, n, |k, h| if table[g][h] == k { ONE } else { ZERO }));
        }
        let labels = (0..n).map(|g| format!("d{g}")).collect();
        Self::build(labels, Product::Dense(structure), involution, NormSpec::L1, Some(realization), Vec::new())
    }

    /// ℂ[ℤ] restricted to the exponents in `support`, with the weighted norm
    /// `Σ |a(n)| γⁿ` and involution `a*(n) = conj(a(−n))`.
    pub fn weighted_int_ring(support: &[i64], gamma: f64) -> Result<Arc<Self>> {
        if !gamma.is_finite() || gamma < 2.0 {
            return Err(Error::InvalidParameter(format!("weight γ = {gamma} must be at least 2")));
        }
        let mut exponents = support.to_vec();
        exponents.sort_unstable();
        exponents.dedup();
        if !exponents.contains(&0) {
            return Err(Error::InvalidParameter("support window must contain 0".into()));
        }
        if exponents.iter().any(|n| !exponents.contains(&-n)) {
            return Err(Error::InvalidParameter("support window must be closed under negation".into()));
        }
        let dim = exponents.len();
        let involution = CMatrix::from_fn(dim, dim, |i, k| if exponents[k] == -exponents[i] { ONE } else { ZERO });
        let labels = exponents.iter().map(|n| format!("d{n}")).collect();
        Self::build(labels, Product::IntWindow { exponents }, involution, NormSpec::Weighted { gamma }, None, Vec::new())
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn label_index(&self, label: &str) -> Option<usize> {
        self.labels.iter().position(|l| l == label)
    }

    pub fn norm_spec(&self) -> &NormSpec {
        &self.norm
    }

    pub fn realization(&self) -> Option<&[CMatrix]> {
        self.realization.as_deref()
    }

    pub fn unit_coords(&self) -> Option<&[C64]> {
        self.unit.as_deref()
    }

    pub fn is_unital(&self) -> bool {
        self.unit.is_some()
    }

    /// Original generators when built by [`StarAlgebra::generate_matrix_algebra`].
    pub fn generators(&self) -> &[CMatrix] {
        &self.generators
    }

    /// Involution matrix; row `i` holds the coordinates of `e_i*`.
    pub fn involution(&self) -> &CMatrix {
        &self.involution
    }

    /// Exponents of the basis when the algebra is a window of ℂ[ℤ].
    pub fn exponents(&self) -> Option<&[i64]> {
        match &self.product {
            Product::IntWindow { exponents } => Some(exponents),
            Product::Dense(_) => None,
        }
    }

    /// Structure constant: coefficient of `e_k` in `e_i e_j`, or `None`
    /// when the product leaves a ℤ window.
    pub fn structure_constant(&self, i: usize, j: usize, k: usize) -> Option<C64> {
        match &self.product {
            Product::Dense(cs) => Some(cs[(i * self.dim + j) * self.dim + k]),
            Product::IntWindow { exponents } => {
                let s = exponents[i] + exponents[j];
                if !exponents.contains(&s) {
                    return None;
                }
                Some(if exponents[k] == s { ONE } else { ZERO })
            }
        }
    }

    pub(crate) fn product(&self) -> &Product {
        &self.product
    }

    /// Orthonormal basis of the span of the ranges of the realisation.
    pub fn essential_basis(&self) -> Option<&CMatrix> {
        self.essential.as_ref()
    }

    /// Size of the matrices in the realisation.
    pub fn realization_size(&self) -> Option<usize> {
        self.realization.as_ref().map(|r| r[0].rows())
    }

    pub fn is_commutative(&self, tol: f64) -> bool {
        self.commutativity_residual() <= tol
    }

    pub fn commutativity_residual(&self) -> f64 {
        match &self.product {
            Product::IntWindow { .. } => 0.0,
            Product::Dense(cs) => {
                let d = self.dim;
                let mut worst: f64 = 0.0;
                for i in 0..d {
                    for j in i + 1..d {
                        for k in 0..d {
                            worst = worst.max((cs[(i * d + j) * d + k] - cs[(j * d + i) * d + k]).norm());
                        }
                    }
                }
                worst
            }
        }
    }

    /// Left-multiplication matrix `L_{e_i}` on coordinates: column `j` holds
    /// the coordinates of `e_i e_j`.
    pub fn left_mult_matrix(&self, i: usize) -> Result<CMatrix> {
        let d = self.dim;
        match &self.product {
            Product::Dense(cs) => Ok(CMatrix::from_fn(d, d, |k, j| cs[(i * d + j) * d + k])),
            Product::IntWindow { .. } => Err(Error::NoRealization),
        }
    }

    /// Coordinates of a matrix lying in the span of the realisation.
    pub fn coords_of_matrix(&self, m: &CMatrix) -> Result<Vec<C64>> {
        let r = self.realization.as_ref().ok_or(Error::NoRealization)?;
        let ginv = self.coord_gram_inv.as_ref().expect("set with realization");
        let rhs: Vec<C64> = r.iter().map(|ri| ri.hs_inner(m)).collect();
        let x = ginv.mul_vec(&rhs);
        let mut rec = CMatrix::zeros(m.rows(), m.cols());
        for (xi, ri) in x.iter().zip(r) {
            rec += &ri.scale(*xi);
        }
        let residual = (&rec - m).frobenius_norm();
        if residual > 1e-8 * m.frobenius_norm().max(1.0) {
            return Err(Error::NotInAlgebra { residual });
        }
        Ok(x)
    }

    /// Adjoins a unit when the algebra has none.
    ///
    /// Operator-normed algebras are unitised inside their ambient matrix
    /// space (the realisation gains the identity); other norms become
    /// `|λ| + |a|`.
    pub fn unitise(self: &Arc<Self>) -> Result<Arc<Self>> {
        if self.is_unital() {
            return Ok(Arc::clone(self));
        }
        let d = self.dim;
        let nd = d + 1;
        let cs = match &self.product {
            Product::Dense(cs) => cs,
            Product::IntWindow { .. } => unreachable!("ℤ windows always contain the unit δ₀"),
        };
        let mut structure = vec![ZERO; nd * nd * nd];
        structure[0] = ONE; // e·e = e
        for i in 0..d {
            structure[(i + 1) * nd + i + 1] = ONE; // e·e_i
            structure[((i + 1) * nd) * nd + i + 1] = ONE; // e_i·e
            for j in 0..d {
                for k in 0..d {
                    structure[((i + 1) * nd + j + 1) * nd + k + 1] = cs[(i * d + j) * d + k];
                }
            }
        }
        let mut involution = CMatrix::zeros(nd, nd);
        involution[(0, 0)] = ONE;
        for i in 0..d {
            for k in 0..d {
                involution[(i + 1, k + 1)] = self.involution[(i, k)];
            }
        }
        let mut labels = vec!["e".to_string()];
        labels.extend(self.labels.iter().cloned());
        let (norm, realization) = match (&self.norm, &self.realization) {
            (NormSpec::Operator, Some(r)) => {
                let mut rr = vec![CMatrix::identity(r[0].rows())];
                rr.extend(r.iter().cloned());
                (NormSpec::Operator, Some(rr))
            }
            (other, _) => (NormSpec::Unitised { inner: Box::new(other.clone()) }, None),
        };
        Self::build(labels, Product::Dense(structure), involution, norm, realization, Vec::new())
    }
}

fn clean(z: C64) -> C64 {
    let r = if z.re.abs() < 1e-15 { 0.0 } else { z.re };
    let i = if z.im.abs() < 1e-15 { 0.0 } else { z.im };
    c(r, i)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn generated_from_nilpotent_is_full_m2() {
        let e12 = CMatrix::unit(2, 0, 1);
        let alg = StarAlgebra::generate_matrix_algebra(&[e12], 1e-9).unwrap();
        assert_eq!(alg.dim(), 4);
        assert!(alg.is_unital());
    }

    #[test]
    fn generated_from_diagonal_is_two_dimensional() {
        let alg = StarAlgebra::generate_matrix_algebra(&[CMatrix::diag_real(&[1.0, 2.0])], 1e-9).unwrap();
        assert_eq!(alg.dim(), 2);
        assert!(alg.is_commutative(1e-12));
    }

    #[test]
    fn generated_from_identity_is_scalars() {
        let alg = StarAlgebra::generate_matrix_algebra(&[CMatrix::identity(3)], 1e-9).unwrap();
        assert_eq!(alg.dim(), 1);
        assert!(alg.is_unital());
    }

    #[test]
    fn generated_rejects_mismatch_and_empty() {
        assert_eq!(StarAlgebra::generate_matrix_algebra(&[], 1e-9).unwrap_err(), Error::EmptyGenerators);
        assert_eq!(
            StarAlgebra::generate_matrix_algebra(&[CMatrix::zeros(2, 2)], 1e-9).unwrap_err(),
            Error::EmptyGenerators
        );
        let err = StarAlgebra::generate_matrix_algebra(&[CMatrix::identity(2), CMatrix::identity(3)], 1e-9);
        assert!(matches!(err, Err(Error::DimensionMismatch { .. })));
    }

    #[test]
    fn corner_algebra_unit_is_projection() {
        // ℂ·e11 inside M₂: unital with unit e11 ≠ 1
        let alg = StarAlgebra::generate_matrix_algebra(&[CMatrix::unit(2, 0, 0)], 1e-9).unwrap();
        assert_eq!(alg.dim(), 1);
        assert!(alg.is_unital());
        assert_eq!(alg.essential_basis().unwrap().cols(), 1);
    }

    #[test]
    fn unitise_examples() {
        let m2 = StarAlgebra::full_matrix(2);
        assert_eq!(m2.unitise().unwrap().dim(), 4);

        // ℂ·n with n² = 0, n* = n: the strictly upper triangular 2×2 matrices as an abstract algebra
        let nil = StarAlgebra::from_structure(vec!["n".into()], vec![ZERO], CMatrix::identity(1), NormSpec::L1, None).unwrap();
        assert!(!nil.is_unital());
        let u = nil.unitise().unwrap();
        assert_eq!(u.dim(), 2);
        assert!(u.is_unital());
        assert_eq!(u.unitise().unwrap().dim(), 2);

        let scalars = StarAlgebra::full_matrix(1);
        assert_eq!(scalars.unitise().unwrap().dim(), 1);
    }

    #[test]
    fn weighted_ring_rejects_bad_windows() {
        assert!(StarAlgebra::weighted_int_ring(&[-1, 0, 1], 1.5).is_err());
        assert!(StarAlgebra::weighted_int_ring(&[0, 1], 2.0).is_err());
        assert!(StarAlgebra::weighted_int_ring(&[-1, 1], 2.0).is_err());
    }

    #[test]
    fn coords_round_trip_and_rejection() {
        let alg = StarAlgebra::diagonal(3);
        let m = CMatrix::diag_real(&[1.0, -2.0, 5.0]);
        let x = alg.coords_of_matrix(&m).unwrap();
        assert!((x[2] - c(5.0, 0.0)).norm() < 1e-14);
        assert!(matches!(alg.coords_of_matrix(&CMatrix::unit(3, 0, 1)), Err(Error::NotInAlgebra { .. })));
    }
}
