//! Quantum-speed-limit lower bounds on minimum evolution times, and the
//! report type that compares them against solved first-crossing times.
//!
//! Four bounds are evaluated: Mandelstam–Tamm π/(2ΔE) and Margolus–Levitin
//! π/(2A_min) (plus its H → −H variant π/(2A_max)) for the orthogonalization
//! time, and the generalized bounds ε/F_H (trace distance) and
//! √(1 − e^{−ε/2})/√S_H (Rényi-1/2 divergence) for partial
//! distinguishability targets. Zero denominators map to +∞: a stationary
//! state never reaches any target, and the bound says exactly that.

use crate::asymmetry::{energy_stats, f_measure, skew_information};
use crate::distinguishability::{Extended, Measure};
use crate::error::{Error, Result};
use crate::evolution::{solve_tau, TauResult};
use crate::scalar::Real;
use crate::states::{DensityMatrix, Hamiltonian};
use crate::tolerances::Tolerances;

fn guard_ratio<T: Real>(numerator: T, denominator: T, cutoff: T) -> Extended<T> {
    if denominator > cutoff {
        Extended::Finite(numerator / denominator)
    } else {
        Extended::Infinite
    }
}

/// Mandelstam–Tamm bound π/(2ΔE) on the orthogonalization time; +∞ for
/// states with vanishing energy uncertainty.
pub fn mt_bound<T: Real>(
    rho: &DensityMatrix<T>,
    h: &Hamiltonian<T>,
    tols: &Tolerances<T>,
) -> Result<Extended<T>> {
    let stats = energy_stats(rho, h, tols)?;
    Ok(guard_ratio(
        T::PI() / T::of(2.0),
        stats.uncertainty,
        tols.zero_div,
    ))
}

/// Margolus–Levitin bound π/(2·A_min), with A_min the average energy above
/// the lowest occupied level; +∞ when A_min vanishes.
pub fn ml_bound<T: Real>(
    rho: &DensityMatrix<T>,
    h: &Hamiltonian<T>,
    tols: &Tolerances<T>,
) -> Result<Extended<T>> {
    let stats = energy_stats(rho, h, tols)?;
    Ok(guard_ratio(
        T::PI() / T::of(2.0),
        stats.a_min(),
        tols.zero_div,
    ))
}

/// The H → −H variant of Margolus–Levitin: π/(2·A_max), with A_max the
/// highest occupied level minus the average energy.
pub fn ml_max_variant<T: Real>(
    rho: &DensityMatrix<T>,
    h: &Hamiltonian<T>,
    tols: &Tolerances<T>,
) -> Result<Extended<T>> {
    let stats = energy_stats(rho, h, tols)?;
    Ok(guard_ratio(
        T::PI() / T::of(2.0),
        stats.a_max(),
        tols.zero_div,
    ))
}

/// Trace-distance speed limit ε/F_H for reaching trace distance ε; +∞ for
/// asymmetry-free (incoherent) states. Requires ε ∈ (0, 2].
pub fn l1_bound<T: Real>(
    rho: &DensityMatrix<T>,
    h: &Hamiltonian<T>,
    epsilon: T,
    tols: &Tolerances<T>,
) -> Result<Extended<T>> {
    if !(epsilon > T::zero() && epsilon <= T::of(2.0)) {
        return Err(Error::InvalidEpsilon {
            value: epsilon.as_f64(),
        });
    }
    let f = f_measure(rho, h)?;
    Ok(guard_ratio(epsilon, f, tols.zero_div))
}

/// Rényi speed limit √(1 − e^{−ε/2}) / √S_H for reaching Rényi-1/2
/// divergence ε; +∞ for states with vanishing skew information. Requires
/// ε > 0; large ε serves as an orthogonalization (ε = ∞) proxy since the
/// numerator saturates at 1.
pub fn renyi_bound<T: Real>(
    rho: &DensityMatrix<T>,
    h: &Hamiltonian<T>,
    epsilon: T,
    tols: &Tolerances<T>,
) -> Result<Extended<T>> {
    if !epsilon.is_finite() || epsilon <= T::zero() {
        return Err(Error::InvalidEpsilon {
            value: epsilon.as_f64(),
        });
    }
    let skew = skew_information(rho, h)?;
    let numerator = (T::one() - (-epsilon / T::of(2.0)).exp()).max(T::zero()).sqrt();
    Ok(guard_ratio(numerator, skew.sqrt(), tols.zero_div))
}

/// Thresholds and solver settings for a [`bound_report`].
#[derive(Clone, Copy, Debug)]
pub struct BoundSettings<T> {
    /// Trace-distance target for the ε/F_H bound and its solved τ.
    pub epsilon_trace: T,
    /// Rényi divergence target for the Rényi bound and its solved τ.
    pub epsilon_renyi: T,
    /// Search horizon override for all three solves.
    pub horizon: Option<T>,
    /// Crossing-time tolerance override for all three solves.
    pub t_tol: Option<T>,
}

impl<T: Real> Default for BoundSettings<T> {
    fn default() -> Self {
        Self {
            epsilon_trace: T::one(),
            epsilon_renyi: T::one(),
            horizon: None,
            t_tol: None,
        }
    }
}

/// All four bounds next to the three solved times they constrain, with
/// per-bound tightness ratios bound/t_star ∈ (0, 1]. A ratio is `None`
/// ("N/A") when the bound is infinite or the solve did not reach its target.
#[derive(Clone, Debug)]
pub struct BoundReport<T: Real> {
    /// Solved orthogonalization time τ_⊥.
    pub tau_perp: TauResult<T>,
    /// Solved trace-distance crossing time at `epsilon_trace`.
    pub tau_l1: TauResult<T>,
    /// Solved Rényi-1/2 crossing time at `epsilon_renyi`.
    pub tau_renyi: TauResult<T>,
    /// Mandelstam–Tamm bound on τ_⊥.
    pub mt_bound: Extended<T>,
    /// Margolus–Levitin bound on τ_⊥.
    pub ml_bound: Extended<T>,
    /// H → −H Margolus–Levitin variant on τ_⊥.
    pub ml_max_variant: Extended<T>,
    /// Trace bound on the solved trace crossing.
    pub l1_bound: Extended<T>,
    /// Rényi bound on the solved Rényi crossing.
    pub renyi_bound: Extended<T>,
    /// bound/t_star for each bound against its matching solved τ.
    pub mt_tightness: Option<T>,
    /// See `mt_tightness`.
    pub ml_tightness: Option<T>,
    /// See `mt_tightness`.
    pub ml_max_tightness: Option<T>,
    /// See `mt_tightness`.
    pub l1_tightness: Option<T>,
    /// See `mt_tightness`.
    pub renyi_tightness: Option<T>,
}

fn tightness<T: Real>(bound: &Extended<T>, tau: &TauResult<T>) -> Option<T> {
    match (bound, tau.t_star()) {
        (Extended::Finite(b), Some(t)) if t > T::zero() => Some(*b / t),
        _ => None,
    }
}

/// Evaluates every bound and solves the three matching crossing problems
/// (orthogonalization, trace at ε, Rényi-1/2 at ε).
pub fn bound_report<T: Real>(
    rho: &DensityMatrix<T>,
    h: &Hamiltonian<T>,
    settings: &BoundSettings<T>,
    tols: &Tolerances<T>,
) -> Result<BoundReport<T>> {
    let tau_perp = solve_tau(
        rho,
        h,
        Measure::Perp,
        T::of(2.0),
        settings.horizon,
        settings.t_tol,
        tols,
    )?;
    let tau_l1 = solve_tau(
        rho,
        h,
        Measure::TraceDistance,
        settings.epsilon_trace,
        settings.horizon,
        settings.t_tol,
        tols,
    )?;
    let tau_renyi = solve_tau(
        rho,
        h,
        Measure::renyi(T::of(0.5))?,
        settings.epsilon_renyi,
        settings.horizon,
        settings.t_tol,
        tols,
    )?;
    let mt = mt_bound(rho, h, tols)?;
    let ml = ml_bound(rho, h, tols)?;
    let ml_max = ml_max_variant(rho, h, tols)?;
    let l1 = l1_bound(rho, h, settings.epsilon_trace, tols)?;
    let renyi = renyi_bound(rho, h, settings.epsilon_renyi, tols)?;
    Ok(BoundReport {
        mt_tightness: tightness(&mt, &tau_perp),
        ml_tightness: tightness(&ml, &tau_perp),
        ml_max_tightness: tightness(&ml_max, &tau_perp),
        l1_tightness: tightness(&l1, &tau_l1),
        renyi_tightness: tightness(&renyi, &tau_renyi),
        tau_perp,
        tau_l1,
        tau_renyi,
        mt_bound: mt,
        ml_bound: ml,
        ml_max_variant: ml_max,
        l1_bound: l1,
        renyi_bound: renyi,
    })
}
