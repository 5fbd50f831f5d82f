//! Error taxonomy shared by the whole crate.
//!
//! Validation failures (shape, Hermiticity, positivity, normalisation) are
//! kept distinct from domain failures (undefined matrix functions, orders
//! outside the admissible range, off-support couplings) so callers can map
//! them to different exit classes.

use thiserror::Error;

/// Crate-wide result alias.
pub type Result<T> = std::result::Result<T, Error>;

/// Everything that can go wrong while validating inputs or evaluating
/// measures, solvers and channels.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    /// Flat data buffer does not describe a square matrix of the stated size.
    #[error("data has {len} entries, expected {dim}x{dim}")]
    BadShape { len: usize, dim: usize },

    /// Two operators that must share a dimension do not.
    #[error("dimension mismatch: {left} vs {right}")]
    DimensionMismatch { left: usize, right: usize },

    /// A matrix entry is NaN or infinite.
    #[error("entry ({row},{col}) is not finite")]
    NonFiniteEntry { row: usize, col: usize },

    /// Hermiticity residual exceeds the configured tolerance.
    #[error("not Hermitian: relative asymmetry {residual:.3e} exceeds {tol:.3e}")]
    NotHermitian { residual: f64, tol: f64 },

    /// An eigenvalue is more negative than the positivity tolerance allows.
    #[error("not positive semidefinite: min eigenvalue {min_eigenvalue:.3e}")]
    NotPositive { min_eigenvalue: f64 },

    /// The trace differs from one beyond tolerance.
    #[error("trace {trace:.12} differs from 1 beyond tolerance")]
    TraceNotOne { trace: f64 },

    /// A scalar function was applied to an eigenvalue where it is undefined.
    #[error("matrix function undefined at eigenvalue {eigenvalue:.3e}")]
    Domain { eigenvalue: f64 },

    /// Rényi / Dyson order outside (0,1) ∪ (1,2].
    #[error("order s={s} outside (0,1) ∪ (1,2]")]
    InvalidOrder { s: f64 },

    /// A rank-deficient state whose Hamiltonian couples support to kernel;
    /// the requested quantity would need data off the support.
    #[error("rank-deficient state with off-support coupling {residual:.3e}")]
    Support { residual: f64 },

    /// ε must be positive and finite.
    #[error("epsilon must be positive and finite, got {value}")]
    InvalidEpsilon { value: f64 },

    /// Horizon must be positive and finite.
    #[error("horizon must be positive and finite, got {value}")]
    InvalidHorizon { value: f64 },

    /// Solver time resolution must be positive and finite.
    #[error("time tolerance must be positive and finite, got {value}")]
    InvalidTimeTolerance { value: f64 },

    /// An index list fails to be a permutation of 0..dim.
    #[error("index list is not a permutation of 0..{dim}")]
    NotPermutation { dim: usize },

    /// Kraus operators do not satisfy the completeness relation.
    #[error("Kraus completeness residual {residual:.3e} exceeds {tol:.3e}")]
    NotTracePreserving { residual: f64, tol: f64 },

    /// Constant-channel target state must commute with the Hamiltonian.
    #[error("constant-channel target has commutator norm {residual:.3e}")]
    NotIncoherentTarget { residual: f64 },

    /// A Stinespring dilation violates one of its structural invariants.
    #[error("invalid dilation: {reason}")]
    InvalidDilation { reason: String },

    /// A per-Kraus check was requested on a channel without a harmonic
    /// certificate.
    #[error("channel carries no harmonic certificate")]
    MissingCertificate,

    /// Tensor-factor label does not multiply out to the full dimension, or
    /// the kept factor index is out of range.
    #[error("composite label {label:?} invalid for dimension {dim}")]
    BadLabel { label: Vec<usize>, dim: usize },

    /// A channel needs at least one Kraus operator.
    #[error("empty Kraus list")]
    EmptyKraus,

    /// Generic positive-argument requirement (trial counts and similar).
    #[error("{what} must be positive, got {value}")]
    NonPositiveArgument { what: &'static str, value: f64 },
}
