use thiserror::Error;

/// Errors raised across the toolkit.
///
/// Variants carry the measured residual where a numerical precondition
/// failed, so callers can report how far off an input was.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("matrix is not Hermitian (residual {residual:.3e})")]
    NotHermitian { residual: f64 },
    #[error("matrix is not normal (residual {residual:.3e})")]
    NotNormal { residual: f64 },
    #[error("matrix is not unitary (residual {residual:.3e})")]
    NotUnitary { residual: f64 },
    #[error("iteration did not converge after {iterations} steps")]
    NoConvergence { iterations: usize },
    #[error("matrix is singular to working precision")]
    Singular,
    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: String, found: String },
    #[error("matrix must be square, got {rows}x{cols}")]
    NotSquare { rows: usize, cols: usize },
    #[error("non-finite entry in input")]
    NonFinite,

    #[error("no generators supplied")]
    EmptyGenerators,
    #[error("*-algebra closure exceeded {cap} dimensions")]
    ClosureCap { cap: usize },
    #[error("table is not a group: {axiom}")]
    NotAGroup { axiom: String },
    #[error("product leaves the support window (exponent {exponent})")]
    WindowOverflow { exponent: i64 },
    #[error("elements belong to different algebras")]
    AlgebraMismatch,
    #[error("algebra has no unit")]
    NotUnital,
    #[error("algebra is not commutative (residual {residual:.3e})")]
    NotCommutative { residual: f64 },
    #[error("algebra has no matrix realization or regular representation")]
    NoRealization,
    #[error("matrix does not lie in the algebra (residual {residual:.3e})")]
    NotInAlgebra { residual: f64 },
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("norm overflowed the floating range at power {power}")]
    Overflow { power: u64 },
    #[error("rational function has a pole on the spectrum at {point}")]
    PoleOnSpectrum { point: String },
    #[error("point lies in the spectrum (distance {distance:.3e})")]
    MuInSpectrum { distance: f64 },

    #[error("spectral radius {radius} too large for the square-root series")]
    RadiusTooLarge { radius: f64 },
    #[error("series did not converge within {terms} terms")]
    NonConvergent { terms: usize },
    #[error("element is not positive (spectral point {min_point:.3e})")]
    NotPositive { min_point: f64 },
    #[error("element is not invertible")]
    NotInvertible,
    #[error("precondition failed: {0}")]
    PreconditionFailed(String),

    #[error("characters degenerate after {attempts} attempts (nilpotent witness norm {witness_norm:.3e})")]
    DegenerateAfterRetries {
        attempts: usize,
        witness: Vec<num_complex::Complex64>,
        witness_norm: f64,
    },
    #[error("functional is not a state: {0}")]
    NotAState(String),
    #[error("linear system is inconsistent (residual {residual:.3e})")]
    InconsistentSystem { residual: f64 },
    #[error("symbol vanishes on the torus (min |f| = {min_abs:.3e})")]
    ZeroOnTorus { min_abs: f64 },
    #[error("functional is not positive (Gram eigenvalue {min_eigenvalue:.3e})")]
    NotPositiveFunctional { min_eigenvalue: f64 },
    #[error("functional has infinite variation")]
    InfiniteVariation,
    #[error("algebra is not Hermitian (violation {violation:.3e})")]
    NotHermitianAlgebra { violation: f64 },
    #[error("representation is degenerate (essential rank {rank} of {dim})")]
    Degenerate { rank: usize, dim: usize },
    #[error("vector is not cyclic (span rank {rank} of {dim})")]
    NotCyclic { rank: usize, dim: usize },
    #[error("function has no value at point {0}")]
    MissingValue(String),
    #[error("1 lies in the spectrum of the unitary (distance {distance:.3e})")]
    OneInSpectrum { distance: f64 },
    #[error("representation is not multiplicative (residual {residual:.3e})")]
    NotARepresentation { residual: f64 },

    #[error("parse error: {0}")]
    Parse(String),
}

pub type Result<T> = std::result::Result<T, Error>;
