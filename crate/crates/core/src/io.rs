//! Text formats: algebra specs, matrices, functionals and elements as JSON,
//! complex numbers written `[re, im]`.

use std::collections::BTreeMap;
use std::sync::Arc;

use serde::Deserialize;

use crate::algebra::{AlgebraElement, NormSpec, StarAlgebra};
use crate::error::{Error, Result};
use crate::linalg::{CMatrix, C64, ZERO};
use crate::states::LinearFunctional;

#[derive(Debug, Clone, Deserialize)]
#[serde(untagged)]
enum Structure {
    Flat(Vec<C64>),
    Nested(Vec<Vec<Vec<C64>>>),
}

#[derive(Debug, Clone, Deserialize)]
struct GroupSpec {
    table: Vec<Vec<usize>>,
    inverses: Vec<usize>,
}

/// Algebra description as read from a JSON file.
#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct AlgebraSpec {
    #[serde(default)]
    matrix_generators: Option<Vec<CMatrix>>,
    #[serde(default)]
    dim: Option<usize>,
    #[serde(default)]
    structure: Option<Structure>,
    #[serde(default)]
    involution: Option<CMatrix>,
    #[serde(default)]
    labels: Option<Vec<String>>,
    #[serde(default)]
    norm: Option<NormSpec>,
    #[serde(default)]
    group: Option<GroupSpec>,
    /// Exponent window for the weighted ℤ ring.
    #[serde(default)]
    support: Option<Vec<i64>>,
}

fn json<'a, T: Deserialize<'a>>(text: &'a str, what: &str) -> Result<T> {
    serde_json::from_str(text).map_err(|e| Error::Parse(format!("{what}: {e}")))
}

impl AlgebraSpec {
    pub fn parse(text: &str) -> Result<Self> {
        json(text, "algebra spec")
    }

    pub fn build(&self, tol: f64) -> Result<Arc<StarAlgebra>> {
        if let Some(gens) = &self.matrix_generators {
            return StarAlgebra::generate_matrix_algebra(gens, tol);
        }
        if let Some(g) = &self.group {
            return StarAlgebra::group_ring(&g.table, &g.inverses);
        }
        if let Some(support) = &self.support {
            let gamma = match &self.norm {
                Some(NormSpec::Weighted { gamma }) => *gamma,
                _ => return Err(Error::Parse("`support` needs a weighted norm".into())),
            };
            return StarAlgebra::weighted_int_ring(support, gamma);
        }
        let (Some(dim), Some(structure), Some(involution)) = (self.dim, &self.structure, &self.involution) else {
            return Err(Error::Parse(
                "expected `matrix_generators`, `group`, `support` or `dim`/`structure`/`involution`".into(),
            ));
        };
        let flat = match structure {
            Structure::Flat(v) => v.clone(),
            Structure::Nested(v) => {
                if v.len() != dim || v.iter().any(|r| r.len() != dim || r.iter().any(|c| c.len() != dim)) {
                    return Err(Error::Parse(format!("structure must be {dim}x{dim}x{dim}")));
                }
                v.iter().flatten().flatten().copied().collect()
            }
        };
        let labels = match &self.labels {
            Some(l) if l.len() == dim => l.clone(),
            Some(l) => return Err(Error::Parse(format!("{} labels for dimension {dim}", l.len()))),
            None => (0..dim).map(|i| format!("e{i}")).collect(),
        };
        StarAlgebra::from_structure(labels, flat, involution.clone(), self.norm.clone().unwrap_or(NormSpec::L1), None)
    }
}

pub fn parse_algebra(text: &str, tol: f64) -> Result<Arc<StarAlgebra>> {
    AlgebraSpec::parse(text)?.build(tol)
}

/// JSON array of rows of `[re, im]`.
pub fn parse_matrix(text: &str) -> Result<CMatrix> {
    let rows: Vec<Vec<C64>> = json(text, "matrix")?;
    let width = rows.first().map_or(0, Vec::len);
    if rows.is_empty() || width == 0 || rows.iter().any(|r| r.len() != width) {
        return Err(Error::Parse("matrix rows must be non-empty and of equal length".into()));
    }
    let m = CMatrix::from_rows(&rows)?;
    if !m.is_finite() {
        return Err(Error::NonFinite);
    }
    Ok(m)
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct FunctionalSpec {
    #[serde(default)]
    row: Option<Vec<C64>>,
    #[serde(default)]
    density: Option<CMatrix>,
}

/// `{"row": [[re, im], ...]}` with the values on the basis, or
/// `{"density": ρ}` for `a ↦ tr(ρ π(a))` on a matrix algebra.
pub fn parse_functional(text: &str, algebra: &Arc<StarAlgebra>) -> Result<LinearFunctional> {
    let spec: FunctionalSpec = json(text, "functional")?;
    match (spec.row, spec.density) {
        (Some(row), None) => LinearFunctional::new(algebra, row),
        (None, Some(rho)) => LinearFunctional::from_density(algebra, &rho),
        _ => Err(Error::Parse("functional needs exactly one of `row` and `density`".into())),
    }
}

/// An element given as a basis label, a coefficient array `[[re, im], ...]`
/// or a map `{"label": [re, im], ...}`.
pub fn parse_element(text: &str, algebra: &Arc<StarAlgebra>) -> Result<AlgebraElement> {
    let t = text.trim();
    if t.starts_with('[') {
        let coeffs: Vec<C64> = json(t, "element")?;
        return AlgebraElement::new(algebra, coeffs);
    }
    if t.starts_with('{') {
        let map: BTreeMap<String, C64> = json(t, "element")?;
        let mut coeffs = vec![ZERO; algebra.dim()];
        for (label, z) in map {
            let i = algebra.label_index(&label).ok_or_else(|| Error::Parse(format!("unknown basis label `{label}`")))?;
            coeffs[i] += z;
        }
        return AlgebraElement::new(algebra, coeffs);
    }
    AlgebraElement::labelled(algebra, t).map_err(|_| Error::Parse(format!("unknown basis label `{t}`")))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::{c, ONE};

    #[test]
    fn matrix_generators_spec() {
        let alg = parse_algebra(r#"{"matrix_generators": [[[[1,0],[0,0]],[[0,0],[0,0]]]]}"#, 1e-9).unwrap();
        assert_eq!(alg.dim(), 1);
        let m2 = parse_algebra(r#"{"matrix_generators": [[[[0,0],[1,0]],[[0,0],[0,0]]]]}"#, 1e-9).unwrap();
        assert_eq!(m2.dim(), 4);
    }

    #[test]
    fn structure_spec_matches_group_ring() {
        // ℤ₂ written out by hand
        let text = r#"{"dim": 2,
            "structure": [[[[1,0],[0,0]], [[0,0],[1,0]]], [[[0,0],[1,0]], [[1,0],[0,0]]]],
            "involution": [[[1,0],[0,0]], [[0,0],[1,0]]],
            "norm": {"type": "l1"}}"#;
        let alg = parse_algebra(text, 1e-9).unwrap();
        assert_eq!(alg.unit_coords().unwrap(), &[ONE, ZERO]);
        let g = parse_algebra(r#"{"group": {"table": [[0,1],[1,0]], "inverses": [0,1]}}"#, 1e-9).unwrap();
        let a = parse_element("[[1,0],[2,0]]", &alg).unwrap();
        let b = parse_element("[[1,0],[2,0]]", &g).unwrap();
        assert_eq!(a.mul(&a).unwrap().coeffs(), b.mul(&b).unwrap().coeffs());
    }

    #[test]
    fn weighted_spec() {
        let alg = parse_algebra(r#"{"support": [-1,0,1], "norm": {"type": "weighted", "gamma": 2}}"#, 1e-9).unwrap();
        assert_eq!(alg.dim(), 3);
        assert!(matches!(parse_algebra(r#"{"support": [-1,0,1]}"#, 1e-9), Err(Error::Parse(_))));
    }

    #[test]
    fn elements_and_functionals() {
        let alg = StarAlgebra::full_matrix(2);
        let e = parse_element(r#"{"e11": [1,0], "e22": [0,3]}"#, &alg).unwrap();
        assert_eq!(e.coeffs(), &[ONE, ZERO, ZERO, c(0.0, 3.0)]);
        assert_eq!(parse_element("e12", &alg).unwrap().coeffs()[1], ONE);
        assert!(matches!(parse_element("x", &alg), Err(Error::Parse(_))));
        let phi = parse_functional(r#"{"row": [[1,0],[0,0],[0,0],[0,0]]}"#, &alg).unwrap();
        assert_eq!(phi.eval(&e).unwrap(), ONE);
        let gen = parse_algebra(r#"{"matrix_generators": [[[[0,0],[1,0]],[[0,0],[0,0]]]]}"#, 1e-9).unwrap();
        let rho = parse_functional(r#"{"density": [[[1,0],[0,0]],[[0,0],[0,0]]]}"#, &gen).unwrap();
        let a = AlgebraElement::from_matrix(&gen, &CMatrix::diag(&[c(2.0, 0.0), c(5.0, 0.0)])).unwrap();
        assert!((rho.eval(&a).unwrap() - c(2.0, 0.0)).norm() < 1e-12);
        assert!(matches!(parse_functional(r#"{}"#, &alg), Err(Error::Parse(_))));
    }

    #[test]
    fn malformed_inputs() {
        assert!(matches!(parse_matrix("[[1,2]"), Err(Error::Parse(_))));
        assert!(matches!(parse_matrix("[[[1,0]],[[1,0],[2,0]]]"), Err(Error::Parse(_))));
        assert!(matches!(parse_algebra("{}", 1e-9), Err(Error::Parse(_))));
        assert!(matches!(parse_algebra(r#"{"bogus": 1}"#, 1e-9), Err(Error::Parse(_))));
        let m = parse_matrix("[[[1,0],[0,-1]],[[0,1],[3,0]]]").unwrap();
        assert_eq!(m[(1, 0)], c(0.0, 1.0));
    }
}
