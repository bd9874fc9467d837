use std::fmt;
use std::sync::Arc;

use super::{NormSpec, Product, StarAlgebra};
use crate::error::{Error, Result};
use crate::linalg::{mat_inv, op_norm, vec_norm, CMatrix, C64, ONE, ZERO};

/// Coefficient vector over the basis of a [`StarAlgebra`].
#[derive(Clone)]
pub struct AlgebraElement {
    algebra: Arc<StarAlgebra>,
    coeffs: Vec<C64>,
}

impl fmt::Debug for AlgebraElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_map()
            .entries(
                self.algebra
                    .labels()
                    .iter()
                    .zip(&self.coeffs)
                    .filter(|(_, z)| z.norm() > 0.0),
            )
            .finish()
    }
}

impl AlgebraElement {
    pub fn new(algebra: &Arc<StarAlgebra>, coeffs: Vec<C64>) -> Result<Self> {
        if coeffs.len() != algebra.dim() {
            return Err(Error::DimensionMismatch {
                expected: format!("{} coefficients", algebra.dim()),
                found: coeffs.len().to_string(),
            });
        }
        if coeffs.iter().any(|z| !z.re.is_finite() || !z.im.is_finite()) {
            return Err(Error::NonFinite);
        }
        Ok(Self { algebra: Arc::clone(algebra), coeffs })
    }

    pub fn from_real(algebra: &Arc<StarAlgebra>, coeffs: &[f64]) -> Result<Self> {
        Self::new(algebra, coeffs.iter().map(|&x| C64::new(x, 0.0)).collect())
    }

    pub fn zero(algebra: &Arc<StarAlgebra>) -> Self {
        Self { algebra: Arc::clone(algebra), coeffs: vec![ZERO; algebra.dim()] }
    }

    pub fn basis(algebra: &Arc<StarAlgebra>, i: usize) -> Self {
        let mut e = Self::zero(algebra);
        e.coeffs[i] = ONE;
        e
    }

    /// Basis element by label.
    pub fn labelled(algebra: &Arc<StarAlgebra>, label: &str) -> Result<Self> {
        let i = algebra
            .label_index(label)
            .ok_or_else(|| Error::InvalidParameter(format!("unknown basis label {label:?}")))?;
        Ok(Self::basis(algebra, i))
    }

    pub fn unit(algebra: &Arc<StarAlgebra>) -> Result<Self> {
        let u = algebra.unit_coords().ok_or(Error::NotUnital)?;
        Ok(Self { algebra: Arc::clone(algebra), coeffs: u.to_vec() })
    }

    pub fn scalar(algebra: &Arc<StarAlgebra>, z: C64) -> Result<Self> {
        Ok(Self::unit(algebra)?.scale(z))
    }

    /// Element realised by a matrix in the span of the realisation.
    pub fn from_matrix(algebra: &Arc<StarAlgebra>, m: &CMatrix) -> Result<Self> {
        let coeffs = algebra.coords_of_matrix(m)?;
        Ok(Self { algebra: Arc::clone(algebra), coeffs })
    }

    pub fn algebra(&self) -> &Arc<StarAlgebra> {
        &self.algebra
    }

    pub fn coeffs(&self) -> &[C64] {
        &self.coeffs
    }

    pub fn into_coeffs(self) -> Vec<C64> {
        self.coeffs
    }

    pub fn same_algebra(&self, other: &Self) -> Result<()> {
        if Arc::ptr_eq(&self.algebra, &other.algebra) {
            Ok(())
        } else {
            Err(Error::AlgebraMismatch)
        }
    }

    pub fn plus(&self, other: &Self) -> Result<Self> {
        self.same_algebra(other)?;
        let coeffs = self.coeffs.iter().zip(&other.coeffs).map(|(a, b)| a + b).collect();
        Ok(Self { algebra: Arc::clone(&self.algebra), coeffs })
    }

    pub fn minus(&self, other: &Self) -> Result<Self> {
        self.plus(&other.scale(C64::new(-1.0, 0.0)))
    }

    pub fn scale(&self, z: C64) -> Self {
        Self { algebra: Arc::clone(&self.algebra), coeffs: self.coeffs.iter().map(|a| a * z).collect() }
    }

    pub fn scale_real(&self, x: f64) -> Self {
        self.scale(C64::new(x, 0.0))
    }

    pub fn mul(&self, other: &Self) -> Result<Self> {
        self.same_algebra(other)?;
        let d = self.algebra.dim();
        let mut out = vec![ZERO; d];
        match self.algebra.product() {
            Product::Dense(cs) => {
                for (i, a) in self.coeffs.iter().enumerate() {
                    if *a == ZERO {
                        continue;
                    }
                    for (j, b) in other.coeffs.iter().enumerate() {
                        if *b == ZERO {
                            continue;
                        }
                        let ab = a * b;
                        let row = &cs[(i * d + j) * d..(i * d + j + 1) * d];
                        for (o, c) in out.iter_mut().zip(row) {
                            *o += ab * c;
                        }
                    }
                }
            }
            Product::IntWindow { exponents } => {
                let lo = exponents[0];
                let hi = exponents[d - 1];
                for (i, a) in self.coeffs.iter().enumerate() {
                    if *a == ZERO {
                        continue;
                    }
                    for (j, b) in other.coeffs.iter().enumerate() {
                        if *b == ZERO {
                            continue;
                        }
                        let s = exponents[i] + exponents[j];
                        let k = if (lo..=hi).contains(&s) { exponents.binary_search(&s).ok() } else { None };
                        match k {
                            Some(k) => out[k] += a * b,
                            None => return Err(Error::WindowOverflow { exponent: s }),
                        }
                    }
                }
            }
        }
        Ok(Self { algebra: Arc::clone(&self.algebra), coeffs: out })
    }

    /// `a*` with coordinates `Σ_i conj(a_i) s[i][k]`.
    pub fn adjoint(&self) -> Self {
        let s = self.algebra.involution();
        let d = self.algebra.dim();
        let mut out = vec![ZERO; d];
        for (i, a) in self.coeffs.iter().enumerate() {
            if *a == ZERO {
                continue;
            }
            let ac = a.conj();
            for (k, o) in out.iter_mut().enumerate() {
                *o += ac * s[(i, k)];
            }
        }
        Self { algebra: Arc::clone(&self.algebra), coeffs: out }
    }

    pub fn norm(&self) -> f64 {
        norm_of(&self.algebra, self.algebra.norm_spec(), &self.coeffs)
    }

    pub fn pow(&self, n: u32) -> Result<Self> {
        if n == 0 {
            return Self::unit(&self.algebra);
        }
        let mut result: Option<Self> = None;
        let mut base = self.clone();
        let mut k = n;
        loop {
            if k & 1 == 1 {
                result = Some(match result {
                    None => base.clone(),
                    Some(r) => r.mul(&base)?,
                });
            }
            k >>= 1;
            if k == 0 {
                break;
            }
            base = base.mul(&base)?;
        }
        Ok(result.expect("n > 0"))
    }

    /// Left-multiplication matrix `L_a` on coordinates.
    pub fn left_mult(&self) -> Result<CMatrix> {
        let d = self.algebra.dim();
        let mut m = CMatrix::zeros(d, d);
        for (i, a) in self.coeffs.iter().enumerate() {
            if *a != ZERO {
                m += &self.algebra.left_mult_matrix(i)?.scale(*a);
            }
        }
        Ok(m)
    }

    /// Two-sided inverse in a unital algebra.
    pub fn inverse(&self) -> Result<Self> {
        let unit = Self::unit(&self.algebra)?;
        let l = self.left_mult()?;
        let linv = mat_inv(&l).map_err(|_| Error::NotInvertible)?;
        let x = Self { algebra: Arc::clone(&self.algebra), coeffs: linv.mul_vec(unit.coeffs()) };
        let left = x.mul(self)?.minus(&unit)?;
        if vec_norm(left.coeffs()) > 1e-8 * (1.0 + vec_norm(x.coeffs()) * vec_norm(self.coeffs())) {
            return Err(Error::NotInvertible);
        }
        Ok(x)
    }

    /// `‖a − a*‖` in coefficient space relative to `max(1, ‖a‖)`.
    pub fn hermitian_residual(&self) -> f64 {
        let d: Vec<C64> = self.coeffs.iter().zip(self.adjoint().coeffs).map(|(a, b)| a - b).collect();
        vec_norm(&d) / vec_norm(&self.coeffs).max(1.0)
    }

    pub fn is_hermitian(&self, tol: f64) -> bool {
        self.hermitian_residual() <= tol
    }

    /// `(a + a*)/2`.
    pub fn hermitian_part(&self) -> Self {
        let adj = self.adjoint();
        let coeffs = self.coeffs.iter().zip(&adj.coeffs).map(|(a, b)| (a + b) * 0.5).collect();
        Self { algebra: Arc::clone(&self.algebra), coeffs }
    }

    /// Image under the matrix realisation.
    pub fn realize(&self) -> Result<CMatrix> {
        let r = self.algebra.realization().ok_or(Error::NoRealization)?;
        let n = r[0].rows();
        let mut m = CMatrix::zeros(n, n);
        for (a, ri) in self.coeffs.iter().zip(r) {
            if *a != ZERO {
                m += &ri.scale(*a);
            }
        }
        Ok(m)
    }

    /// The same element viewed inside the unitisation of its algebra.
    pub fn into_unitisation(&self) -> Result<Self> {
        self.embed(&self.algebra.unitise()?)
    }

    /// The same element inside `target`, which must be this algebra or its
    /// unitisation (new unit at coordinate 0).
    pub fn embed(&self, target: &Arc<StarAlgebra>) -> Result<Self> {
        if Arc::ptr_eq(target, &self.algebra) {
            return Ok(self.clone());
        }
        if target.dim() != self.algebra.dim() + 1 || self.algebra.is_unital() {
            return Err(Error::AlgebraMismatch);
        }
        let mut coeffs = vec![ZERO];
        coeffs.extend_from_slice(&self.coeffs);
        Ok(Self { algebra: Arc::clone(target), coeffs })
    }
}

pub(crate) fn norm_of(alg: &StarAlgebra, spec: &NormSpec, coeffs: &[C64]) -> f64 {
    match spec {
        NormSpec::Operator => {
            let r = alg.realization().expect("operator norm requires a realization");
            let n = r[0].rows();
            let mut m = CMatrix::zeros(n, n);
            for (a, ri) in coeffs.iter().zip(r) {
                if *a != ZERO {
                    m += &ri.scale(*a);
                }
            }
            op_norm(&m)
        }
        NormSpec::L1 => coeffs.iter().map(|z| z.norm()).sum(),
        NormSpec::Sup => coeffs.iter().map(|z| z.norm()).fold(0.0, f64::max),
        NormSpec::Weighted { gamma } => {
            let exps = alg.exponents().expect("weighted norm requires exponents");
            coeffs.iter().zip(exps).map(|(z, &n)| z.norm() * gamma.powi(n as i32)).sum()
        }
        NormSpec::Unitised { inner } => coeffs[0].norm() + norm_of(alg, inner, &coeffs[1..]),
    }
}

pub fn element_mul(a: &AlgebraElement, b: &AlgebraElement) -> Result<AlgebraElement> {
    a.mul(b)
}

pub fn element_adjoint(a: &AlgebraElement) -> AlgebraElement {
    a.adjoint()
}

pub fn element_norm(a: &AlgebraElement) -> f64 {
    a.norm()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::groups;
    use crate::linalg::{c, I};

    #[test]
    fn cyclic_group_products_and_adjoints() {
        let z3 = groups::cyclic(3);
        let d1 = AlgebraElement::basis(&z3, 1);
        let d2 = AlgebraElement::basis(&z3, 2);
        assert_eq!(d1.mul(&d2).unwrap().coeffs(), &[ONE, ZERO, ZERO]);
        let adj = d1.scale(I).adjoint();
        assert_eq!(adj.coeffs(), &[ZERO, ZERO, -I]);
    }

    #[test]
    fn z2_square_and_self_adjoint_generator() {
        let z2 = groups::cyclic(2);
        let d1 = AlgebraElement::basis(&z2, 1);
        assert_eq!(d1.mul(&d1).unwrap().coeffs(), &[ONE, ZERO]);
        assert_eq!(d1.adjoint().coeffs(), d1.coeffs());
    }

    #[test]
    fn matrix_unit_has_norm_one() {
        let m2 = StarAlgebra::full_matrix(2);
        let e12 = AlgebraElement::labelled(&m2, "e12").unwrap();
        assert!((e12.norm() - 1.0).abs() < 1e-14);
    }

    #[test]
    fn weighted_norms() {
        let alg = StarAlgebra::weighted_int_ring(&[-3, -2, -1, 0, 1, 2, 3], 2.0).unwrap();
        assert_eq!(AlgebraElement::labelled(&alg, "d1").unwrap().norm(), 2.0);
        assert_eq!(AlgebraElement::labelled(&alg, "d-3").unwrap().norm(), 0.125);
        let h = AlgebraElement::labelled(&alg, "d0").unwrap().plus(&AlgebraElement::labelled(&alg, "d1").unwrap());
        assert_eq!(h.unwrap().norm(), 3.0);
    }

    #[test]
    fn window_overflow_is_reported() {
        let alg = StarAlgebra::weighted_int_ring(&[-1, 0, 1], 2.0).unwrap();
        let d1 = AlgebraElement::labelled(&alg, "d1").unwrap();
        assert_eq!(d1.mul(&d1).unwrap_err(), Error::WindowOverflow { exponent: 2 });
        let dm1 = AlgebraElement::labelled(&alg, "d-1").unwrap();
        assert_eq!(d1.adjoint().coeffs(), dm1.coeffs());
    }

    #[test]
    fn mismatched_algebras_are_rejected() {
        let a = AlgebraElement::basis(&groups::cyclic(3), 1);
        let b = AlgebraElement::basis(&groups::cyclic(3), 1);
        assert_eq!(a.mul(&b).unwrap_err(), Error::AlgebraMismatch);
    }

    #[test]
    fn inverse_in_group_ring() {
        let z3 = groups::cyclic(3);
        // 2δ₀ + δ₁ is invertible (no character vanishes)
        let a = AlgebraElement::new(&z3, vec![c(2.0, 0.0), ONE, ZERO]).unwrap();
        let inv = a.inverse().unwrap();
        let prod = a.mul(&inv).unwrap();
        assert!((prod.coeffs()[0] - ONE).norm() < 1e-12);
        assert!(prod.coeffs()[1].norm() < 1e-12);
        // δ₀ − δ₁ is not (trivial character)
        let b = AlgebraElement::new(&z3, vec![ONE, -ONE, ZERO]).unwrap();
        assert_eq!(b.inverse().unwrap_err(), Error::NotInvertible);
    }

    #[test]
    fn matrix_round_trip() {
        let m2 = StarAlgebra::full_matrix(2);
        let m = CMatrix::from_real_rows(&[&[1.0, 2.0], &[3.0, 4.0]]);
        let a = AlgebraElement::from_matrix(&m2, &m).unwrap();
        assert!(a.realize().unwrap().dist(&m) < 1e-14);
        assert!((a.pow(2).unwrap().realize().unwrap().dist(&(&m * &m))) < 1e-12);
    }
}
