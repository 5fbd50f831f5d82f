//! Numerics for coherence, asymmetry and quantum speed limits on
//! finite-dimensional systems.
//!
//! The crate provides:
//!
//! * dense complex-matrix and Hermitian spectral kernels ([`matrix`],
//!   [`spectral`]),
//! * validated Hamiltonians and density matrices ([`states`]),
//! * distinguishability measures between states: trace distance, Rényi
//!   relative entropies, infidelity and the perfect-distinguishability
//!   predicate ([`distinguishability`]),
//! * coherence / asymmetry measures of a state relative to a Hamiltonian:
//!   the commutator trace norm, skew information and its two-parameter
//!   generalization, and occupied-energy statistics ([`asymmetry`]),
//! * minimum evolution times under unitary dynamics and the four speed-limit
//!   bounds that control them ([`evolution`], [`bounds`]),
//! * translationally invariant (covariant) quantum channels, their harmonic
//!   Kraus certificates and energy-conserving Stinespring dilations
//!   ([`channels`]),
//! * seeded random ensembles and statistical verification suites
//!   ([`sampling`], [`suites`]).
//!
//! Everything is generic over the underlying real scalar through
//! [`scalar::Real`] (implemented for `f32` and `f64`); the aliases at the
//! crate root fix `f64`, which is what the tolerancing defaults assume.

#![forbid(unsafe_code)]

pub mod asymmetry;
pub mod bounds;
pub mod channels;
pub mod distinguishability;
pub mod error;
pub mod evolution;
pub mod matrix;
pub mod sampling;
pub mod scalar;
pub mod spectral;
pub mod states;
pub mod suites;
pub mod tolerances;

pub use error::{Error, Result};
pub use scalar::Real;

/// `f64` complex matrix.
pub type Matrix = matrix::ComplexMatrix<f64>;
/// `f64` tolerance record.
pub type Tolerances = tolerances::Tolerances<f64>;
/// `f64` Hamiltonian.
pub type Hamiltonian = states::Hamiltonian<f64>;
/// `f64` density matrix.
pub type DensityMatrix = states::DensityMatrix<f64>;
/// `f64` distinguishability-measure selector.
pub type Measure = distinguishability::Measure<f64>;
/// `f64` extended real (finite or +∞).
pub type Extended = distinguishability::Extended<f64>;
/// `f64` quantum channel.
pub type QuantumChannel = channels::QuantumChannel<f64>;
