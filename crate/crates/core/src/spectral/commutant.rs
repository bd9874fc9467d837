use crate::algebra::StarAlgebra;
use crate::error::{Error, Result};
use crate::linalg::{lstsq, normal_diag, op_norm, svd, CMatrix};
use crate::report::{Check, CheckReport};

/// Trace-orthonormal basis of `S'`, the matrices commuting with `S ∪ S*`.
#[derive(Debug, Clone)]
pub struct Commutant {
    pub basis: Vec<CMatrix>,
    /// Whether `S*` already lies in the span of `S`.
    pub star_stable: bool,
}

impl Commutant {
    pub fn dim(&self) -> usize {
        self.basis.len()
    }
}

/// Orthonormal basis of `{X : X a = b X for every (a, b)}` with `X` of
/// shape `rows(b) × rows(a)`; `X` is vectorised row-major.
fn sylvester_null(pairs: &[(&CMatrix, &CMatrix)], rows: usize, cols: usize, tol: f64) -> Vec<CMatrix> {
    let unknowns = rows * cols;
    let mut system = CMatrix::zeros(pairs.len() * unknowns, unknowns);
    for (block, (a, b)) in pairs.iter().enumerate() {
        let base = block * unknowns;
        // (X a − b X)[r][c] = Σ_q X[r][q] a[q][c] − Σ_p b[r][p] X[p][c]
        for r in 0..rows {
            for cc in 0..cols {
                let row = base + r * cols + cc;
                for q in 0..cols {
                    system[(row, r * cols + q)] += a[(q, cc)];
                }
                for p in 0..rows {
                    system[(row, p * cols + cc)] -= b[(r, p)];
                }
            }
        }
    }
    // singular values are compared with the size of the operators, not with
    // the largest one, so a numerically scalar input keeps its full null space
    let scale = pairs.iter().map(|(a, b)| a.frobenius_norm() + b.frobenius_norm()).fold(0.0, f64::max);
    let s = svd(&system);
    (0..unknowns)
        .filter(|&k| s.sigma.get(k).is_none_or(|&sv| sv <= tol * scale))
        .map(|k| CMatrix::from_vec(rows, cols, s.v.column(k)).expect("rows·cols entries"))
        .collect()
}

fn same_shape(s: &[CMatrix]) -> Result<usize> {
    let n = s.first().map(CMatrix::rows).ok_or_else(|| Error::DimensionMismatch {
        expected: "at least one matrix".into(),
        found: "none".into(),
    })?;
    for m in s {
        if m.rows() != n || m.cols() != n {
            return Err(Error::DimensionMismatch { expected: format!("{n}x{n}"), found: format!("{}x{}", m.rows(), m.cols()) });
        }
    }
    Ok(n)
}

/// Residual of `m` after projecting onto the span of `basis`.
fn span_residual(basis: &[CMatrix], m: &CMatrix) -> f64 {
    if basis.is_empty() {
        return m.frobenius_norm();
    }
    let n2 = m.rows() * m.cols();
    let a = CMatrix::from_fn(n2, basis.len(), |p, k| basis[k].to_vec()[p]);
    let b = CMatrix::column_vector(&m.to_vec());
    let x = lstsq(&a, &b, 1e-12);
    (&(&a * &x) - &b).frobenius_norm()
}

/// `S'` over `S ∪ S*`.
pub fn commutant(s: &[CMatrix], tol: f64) -> Result<Commutant> {
    let n = same_shape(s)?;
    let adjoints: Vec<CMatrix> = s.iter().map(CMatrix::adjoint).collect();
    let mut pairs: Vec<(&CMatrix, &CMatrix)> = s.iter().map(|a| (a, a)).collect();
    pairs.extend(adjoints.iter().map(|a| (a, a)));
    let basis = sylvester_null(&pairs, n, n, tol);
    let star_stable = adjoints
        .iter()
        .all(|a| span_residual(s, a) <= 1e-9 * (1.0 + a.frobenius_norm()));
    Ok(Commutant { basis, star_stable })
}

/// Intertwiners `{a : a n₁ = n₂ a}`.
pub fn intertwiner_space(n1: &CMatrix, n2: &CMatrix, tol: f64) -> Vec<CMatrix> {
    sylvester_null(&[(n1, n2)], n2.rows(), n1.rows(), tol)
}

/// von Neumann's bicommutant theorem for the *-algebra generated by
/// `generators`, restricted to its essential subspace.
pub fn bicommutant_check(generators: &[CMatrix], tol: f64) -> Result<CheckReport> {
    let alg = StarAlgebra::generate_matrix_algebra(generators, tol)?;
    let q = alg.essential_basis().expect("generated algebras are realised");
    let a: Vec<CMatrix> = alg.realization().expect("realised").iter().map(|m| m.compress(q)).collect();
    let first = commutant(&a, tol)?;
    let second = commutant(&first.basis, tol)?;
    let mut report = CheckReport::new("bicommutant");
    report.push(Check::equals("dim A''", second.dim() as f64, a.len() as f64));
    let into = a.iter().map(|m| span_residual(&second.basis, m)).fold(0.0, f64::max);
    let back = second.basis.iter().map(|m| span_residual(&a, m)).fold(0.0, f64::max);
    report.push(Check::at_most("A in A''", into, tol));
    report.push(Check::at_most("A'' in A", back, tol));
    Ok(report)
}

/// Every intertwiner of two normal matrices also intertwines their adjoints.
pub fn fuglede_check(n1: &CMatrix, n2: &CMatrix, tol: f64) -> Result<CheckReport> {
    normal_diag(n1, tol)?;
    normal_diag(n2, tol)?;
    let space = intertwiner_space(n1, n2, tol);
    let (a1, a2) = (n1.adjoint(), n2.adjoint());
    let scale = op_norm(n1).max(op_norm(n2)).max(f64::MIN_POSITIVE);
    let worst = space
        .iter()
        .map(|a| op_norm(&(&(a * &a1) - &(&a2 * a))) / (op_norm(a) * scale))
        .fold(0.0, f64::max);
    let mut report = CheckReport::new("fuglede-putnam");
    report.push(Check::at_least("intertwiner dimension", space.len() as f64, 0.0));
    report.push(Check::at_most("adjoint intertwining", worst, tol));
    Ok(report)
}
