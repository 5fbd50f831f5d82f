//! Central numerical-tolerance configuration.
//!
//! Every threshold used for validation, spectral clamping, solver crossing
//! detection and channel verification lives in one record so that a single
//! override point exists. Defaults target `f64`.

use crate::scalar::Real;

/// Numerical thresholds shared across the crate. All values are positive;
/// fields are absolute unless documented as relative.
#[derive(Clone, Debug, PartialEq)]
pub struct Tolerances<T> {
    /// Hermiticity: max |A − A†| entry relative to max |A| entry.
    pub herm: T,
    /// Spectral clamping: eigenvalues with |λ| ≤ clamp · max(1, ‖A‖) are
    /// treated as exactly zero before fractional or negative powers.
    pub clamp: T,
    /// State positivity: eigenvalues ≥ −psd pass validation; negatives in
    /// (−psd, 0) are clamped to zero and the state renormalised.
    pub psd: T,
    /// State normalisation: |tr ρ − 1| bound.
    pub trace_one: T,
    /// Occupation threshold: an energy level with population above supp
    /// counts as occupied.
    pub supp: T,
    /// Level grouping: eigenvalues within gap · max(1, spread) of each other
    /// belong to the same distinct energy level.
    pub gap: T,
    /// Default bound for the incoherence predicate ‖[H, ρ]‖₁ ≤ incoherent.
    pub incoherent: T,
    /// Perfect-distinguishability predicate: ‖σ₁ − σ₂‖₁ ≥ 2 − perp_predicate.
    pub perp_predicate: T,
    /// Offset used when solving for the orthogonalisation time (trace-distance
    /// target ε = 2 − perp_epsilon). Much tighter than `perp_predicate`: the
    /// crossing time depends on the offset like its square root, so resolving
    /// the saturation time to 1e-5 needs an offset of about 1e-12 or below.
    pub perp_epsilon: T,
    /// Crossing slack of the τ solver: a time where the distance comes within
    /// cross of ε may be accepted (tangential crossings).
    pub cross: T,
    /// Zero-denominator cutoff: speed-limit denominators at or below zero_div
    /// map the bound to +∞.
    pub zero_div: T,
    /// Channel completeness: max-entry norm of Σ K†K − I.
    pub completeness: T,
    /// Covariance residual accepted by channel verification.
    pub covariance: T,
    /// Harmonic Kraus residual accepted by the certificate check.
    pub harmonic: T,
    /// Per-Kraus incoherence residual accepted on incoherent probes.
    pub kraus_incoherence: T,
    /// τ-solver time resolution, in units of 1/spread(H).
    pub t_tol: T,
}

impl<T: Real> Default for Tolerances<T> {
    fn default() -> Self {
        Self {
            herm: T::of(1e-10),
            clamp: T::of(1e-12),
            psd: T::of(1e-10),
            trace_one: T::of(1e-10),
            supp: T::of(1e-10),
            gap: T::of(1e-9),
            incoherent: T::of(1e-10),
            perp_predicate: T::of(1e-8),
            perp_epsilon: T::of(1e-12),
            cross: T::of(1e-12),
            zero_div: T::of(1e-12),
            completeness: T::of(1e-9),
            covariance: T::of(1e-8),
            harmonic: T::of(1e-8),
            kraus_incoherence: T::of(1e-9),
            t_tol: T::of(1e-6),
        }
    }
}

impl<T: Real> Tolerances<T> {
    /// Absolute clamping threshold for an operator of the given norm scale.
    pub fn clamp_abs(&self, norm: T) -> T {
        self.clamp * norm.max(T::one())
    }

    /// Absolute level-grouping threshold for a spectrum of the given spread.
    pub fn gap_abs(&self, spread: T) -> T {
        self.gap * spread.max(T::one())
    }
}
