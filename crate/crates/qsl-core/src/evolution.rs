//! Unitary orbits ρ(t) = e^{−iHt} ρ e^{iHt}, the minimum-evolution-time
//! solver, speed functionals, and finite-difference checks of the
//! instantaneous speed and acceleration identities.
//!
//! The solver looks for the first time the chosen distinguishability
//! measure reaches a target ε. Orbit distances are trigonometric
//! polynomials in t, so they can swing through a crossing and back between
//! two grid points; a plain scan-then-bisect would miss such crossings and,
//! worse, tangential crossings where the orbit only touches the threshold.
//! The solver therefore marches with Lipschitz-safe strides where a
//! derivative bound is available (trace distance is F_H-Lipschitz, Rényi
//! overlaps have an explicit frequency-sum bound) and recursively subdivides
//! any interval whose interior could still reach the threshold, accepting a
//! leaf only when the measured value is within the crossing tolerance.

use crate::asymmetry::{energy_stats, f_measure};
use crate::distinguishability::{
    evaluate, infidelity, renyi_relative_entropy, trace_distance, Extended, Measure,
};
use crate::error::{Error, Result};
use crate::matrix::ComplexMatrix;
use crate::scalar::Real;
use crate::states::{DensityMatrix, Hamiltonian};
use crate::tolerances::Tolerances;

/// Hard cap on subdivision depth; brackets shrink by half per level, so the
/// cap is never reached for any representable time tolerance.
const MAX_DEPTH: usize = 80;

fn check_dims<T: Real>(rho: &DensityMatrix<T>, h: &Hamiltonian<T>) -> Result<()> {
    if rho.dim() != h.dim() {
        return Err(Error::DimensionMismatch {
            left: rho.dim(),
            right: h.dim(),
        });
    }
    Ok(())
}

/// Evolved state e^{−iHt} ρ e^{iHt}. The spectrum is transported by
/// conjugation (eigenvalues, purity and clamping threshold are unchanged),
/// so no re-diagonalisation happens per time point.
pub fn evolve<T: Real>(
    rho: &DensityMatrix<T>,
    h: &Hamiltonian<T>,
    t: T,
) -> Result<DensityMatrix<T>> {
    check_dims(rho, h)?;
    let u = h.evolution_unitary(t);
    let matrix = u.matmul(rho.matrix()).matmul(&u.adjoint());
    let spectrum = rho.spectrum().conjugated_by(&u);
    Ok(DensityMatrix::from_trusted_parts(
        matrix,
        spectrum,
        rho.purity(),
        rho.clamp_abs(),
    ))
}

/// Outcome of a minimum-time search.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum TauStatus<T> {
    /// The measure reached the target within the horizon.
    Reached {
        /// First crossing time, localized to within `bracket_width`.
        t_star: T,
        /// Width of the final bracket (≤ the time tolerance).
        bracket_width: T,
    },
    /// No crossing was found on [0, horizon]; distinct from a mathematical
    /// "never reaches" — the report always carries the horizon searched.
    UnreachedWithinHorizon,
}

/// Minimum-time search result with the effective parameters used.
#[derive(Clone, Copy, Debug)]
pub struct TauResult<T> {
    /// Reached or not, with the crossing time when reached.
    pub status: TauStatus<T>,
    /// Effective threshold (for the perfect-distinguishability measure this
    /// is 2 minus the orthogonality tolerance, whatever was passed in).
    pub epsilon: T,
    /// The measure that was tracked.
    pub measure: Measure<T>,
    /// Search horizon actually used.
    pub horizon: T,
    /// Base grid step of the march; sub-step spikes of measures without a
    /// derivative bound are invisible below this resolution.
    pub base_step: T,
}

impl<T: Real> TauResult<T> {
    /// True when a crossing was found.
    pub fn is_reached(&self) -> bool {
        matches!(self.status, TauStatus::Reached { .. })
    }

    /// Crossing time, if reached.
    pub fn t_star(&self) -> Option<T> {
        match self.status {
            TauStatus::Reached { t_star, .. } => Some(t_star),
            TauStatus::UnreachedWithinHorizon => None,
        }
    }
}

/// Evolution speed 1/τ; zero when the target was not reached within the
/// horizon (callers should surface the horizon alongside).
pub fn speed<T: Real>(tau: &TauResult<T>) -> T {
    match tau.status {
        TauStatus::Reached { t_star, .. } => T::one() / t_star,
        TauStatus::UnreachedWithinHorizon => T::zero(),
    }
}

/// Threshold-scaled speed ε/τ; zero when unreached.
pub fn scaled_speed<T: Real>(tau: &TauResult<T>) -> T {
    match tau.status {
        TauStatus::Reached { t_star, .. } => tau.epsilon / t_star,
        TauStatus::UnreachedWithinHorizon => T::zero(),
    }
}

/// Default search horizon: 50·π/ΔE, fifty times the Mandelstam–Tamm minimal
/// time. `None` when ΔE is numerically zero — the state is stationary and no
/// finite horizon makes sense.
pub fn default_horizon<T: Real>(
    rho: &DensityMatrix<T>,
    h: &Hamiltonian<T>,
    tols: &Tolerances<T>,
) -> Result<Option<T>> {
    let stats = energy_stats(rho, h, tols)?;
    if stats.uncertainty > tols.zero_div {
        Ok(Some(T::of(50.0) * T::PI() / stats.uncertainty))
    } else {
        Ok(None)
    }
}

/// One threshold condition tracked by the solver, oriented so that larger
/// values are closer to crossing: crossed means `value ≥ strict`, and
/// `near ≤ strict` admits the crossing tolerance at acceptance time.
struct Component<'a, T> {
    eval: Box<dyn Fn(T) -> T + 'a>,
    strict: T,
    near: T,
    lipschitz: Option<T>,
}

impl<T: Real> Component<'_, T> {
    fn values_at<'b>(comps: &'b [Self], t: T) -> Vec<T>
    where
        'b: 'b,
    {
        comps.iter().map(|c| (c.eval)(t)).collect()
    }

    fn any_crossed(comps: &[Self], ys: &[T]) -> bool {
        comps.iter().zip(ys).any(|(c, &y)| y >= c.strict)
    }

    fn any_near(comps: &[Self], ys: &[T]) -> bool {
        comps.iter().zip(ys).any(|(c, &y)| y >= c.near)
    }

    /// Could any component reach its near-threshold strictly inside an
    /// interval of width `w` with endpoint values `ya`, `yb`? Components
    /// with a derivative bound get a rigorous interior estimate; without
    /// one, only observed endpoint values count (sub-grid spikes of such
    /// measures are documented as invisible below the base step).
    fn possible(comps: &[Self], ya: &[T], yb: &[T], w: T) -> bool {
        comps.iter().enumerate().any(|(i, c)| match c.lipschitz {
            Some(l) => ya[i].max(yb[i]) + l * w / T::of(2.0) >= c.near,
            None => ya[i] >= c.near || yb[i] >= c.near,
        })
    }
}

struct Crossing<T> {
    t_star: T,
    bracket_width: T,
}

/// Leftmost-first recursive localization of the first crossing inside
/// (a, b], given that [0, a] has already been cleared.
///
/// Subdivision continues below the time tolerance while the interior bound
/// says a crossing could still hide inside: crossing windows can be much
/// narrower than the requested bracket (think of an overlap that only dips
/// through its threshold for an instant), and a leaf is only accepted once a
/// measured value actually clears the near-threshold.
fn descend<T: Real>(
    comps: &[Component<T>],
    a: T,
    ya: &[T],
    b: T,
    yb: &[T],
    t_tol: T,
    depth: usize,
) -> Option<Crossing<T>> {
    let w = b - a;
    let accept = Component::any_near(comps, yb);
    if (w <= t_tol && accept) || depth >= MAX_DEPTH {
        return accept.then(|| Crossing {
            t_star: b,
            bracket_width: w.min(t_tol),
        });
    }
    if w <= t_tol && !Component::possible(comps, ya, yb, w) {
        return None;
    }
    let m = (a + b) / T::of(2.0);
    let ym = Component::values_at(comps, m);
    if Component::possible(comps, ya, &ym, m - a) {
        if let Some(c) = descend(comps, a, ya, m, &ym, t_tol, depth + 1) {
            return Some(c);
        }
    }
    if Component::possible(comps, &ym, yb, b - m) {
        return descend(comps, m, &ym, b, yb, t_tol, depth + 1);
    }
    None
}

/// Forward march over [0, horizon]: strides are Lipschitz-safe where every
/// component has a derivative bound (no crossing can hide inside a safe
/// stride), otherwise fixed at the base step; every interval that could
/// contain a crossing is subdivided.
fn march<T: Real>(
    comps: &[Component<T>],
    horizon: T,
    t_tol: T,
    base_step: T,
) -> Option<Crossing<T>> {
    let y0 = Component::values_at(comps, T::zero());
    if Component::any_crossed(comps, &y0) {
        return Some(Crossing {
            t_star: T::zero(),
            bracket_width: T::zero(),
        });
    }

    let mut t_prev = T::zero();
    let mut y_prev = y0;
    while t_prev < horizon {
        let mut safe = T::infinity();
        let mut all_bounded = true;
        for (i, c) in comps.iter().enumerate() {
            match c.lipschitz {
                Some(l) if l > T::zero() => {
                    let gap = (c.strict - y_prev[i]).max(T::zero());
                    safe = safe.min(gap / l);
                }
                Some(_) => {}
                None => all_bounded = false,
            }
        }
        let stride = if all_bounded {
            let jump = T::of(0.9) * safe;
            if jump.is_finite() {
                jump.max(base_step)
            } else {
                horizon
            }
        } else {
            base_step
        };
        let t_next = (t_prev + stride).min(horizon);
        let y_next = Component::values_at(comps, t_next);
        if Component::any_crossed(comps, &y_next)
            || Component::possible(comps, &y_prev, &y_next, t_next - t_prev)
        {
            if let Some(c) = descend(comps, t_prev, &y_prev, t_next, &y_next, t_tol, 0) {
                return Some(c);
            }
        }
        if t_next >= horizon {
            break;
        }
        t_prev = t_next;
        y_prev = y_next;
    }
    None
}

/// Precomputed trigonometric form of an orbit overlap trace
/// f(t) = Σ_{jk} c_jk e^{i(E_j−E_k)t}: real coefficients, frequencies, and
/// the derivative bound Σ|c||ω|.
struct TrigSum<T> {
    re: Vec<T>,
    im: Vec<T>,
    omega: Vec<T>,
    lipschitz: T,
    abs_sum: T,
}

impl<T: Real> TrigSum<T> {
    /// Builds the sum for f(t) = tr(A · U_t B U_t†) with A, B Hermitian and
    /// U_t = e^{−iHt}: c_jk = Ã_jk B̃_kj in the H eigenbasis.
    fn overlap(a: &ComplexMatrix<T>, b: &ComplexMatrix<T>, h: &Hamiltonian<T>) -> Self {
        let w = h.spectrum().eigenvectors();
        let at = w.adjoint().matmul(a).matmul(w);
        let bt = w.adjoint().matmul(b).matmul(w);
        let energies = h.spectrum().eigenvalues();
        let d = a.dim();
        let mut re = Vec::with_capacity(d * d);
        let mut im = Vec::with_capacity(d * d);
        let mut omega = Vec::with_capacity(d * d);
        let mut lipschitz = T::zero();
        let mut abs_sum = T::zero();
        for j in 0..d {
            for k in 0..d {
                let c = at[(j, k)] * bt[(k, j)];
                let freq = energies[j] - energies[k];
                re.push(c.re);
                im.push(c.im);
                omega.push(freq);
                let mag = c.norm();
                lipschitz += mag * freq.abs();
                abs_sum += mag;
            }
        }
        Self {
            re,
            im,
            omega,
            lipschitz,
            abs_sum,
        }
    }

    fn value(&self, t: T) -> T {
        let mut total = T::zero();
        for i in 0..self.re.len() {
            let phase = self.omega[i] * t;
            total += self.re[i] * phase.cos() - self.im[i] * phase.sin();
        }
        total
    }
}

fn trace_component<'a, T: Real>(
    rho: &'a DensityMatrix<T>,
    h: &'a Hamiltonian<T>,
    epsilon: T,
    f_h: T,
    tols: &Tolerances<T>,
) -> Component<'a, T> {
    Component {
        eval: Box::new(move |t| {
            let evolved = evolve(rho, h, t).expect("dimensions were checked");
            trace_distance(rho, &evolved).expect("dimensions were checked")
        }),
        strict: epsilon,
        near: epsilon - tols.cross,
        lipschitz: Some(f_h),
    }
}

fn infidelity_component<'a, T: Real>(
    rho: &'a DensityMatrix<T>,
    h: &'a Hamiltonian<T>,
    epsilon: T,
    tols: &'a Tolerances<T>,
) -> Component<'a, T> {
    Component {
        eval: Box::new(move |t| {
            let evolved = evolve(rho, h, t).expect("dimensions were checked");
            infidelity(rho, &evolved, tols).expect("dimensions were checked")
        }),
        strict: epsilon,
        near: epsilon - tols.cross,
        lipschitz: None,
    }
}

/// Components for a Rényi crossing D_s(ρ‖ρ(t)) ≥ ε, phrased in overlap
/// space: with v(t) = tr(ρ^s ρ(t)^{1−s}) and v_th = e^{(s−1)ε}, the
/// crossing is v ≤ v_th for s < 1 and v ≥ v_th for s > 1. A noise floor
/// proportional to the summed coefficient magnitude keeps "v reaches zero"
/// detectable for s < 1, which is what makes very large ε usable as a proxy
/// for the divergence going to +∞. For s > 1 with rank-deficient ρ a second
/// component watches the support-leak weight, whose crossing means D = +∞.
fn renyi_components<'a, T: Real>(
    rho: &DensityMatrix<T>,
    h: &Hamiltonian<T>,
    s: T,
    epsilon: T,
    tols: &Tolerances<T>,
) -> Option<Vec<Component<'a, T>>> {
    let d = rho.dim();
    let v_th = ((s - T::one()) * epsilon).exp();
    if !v_th.is_finite() {
        // ε beyond representable overlap: the target is unreachable in this
        // arithmetic, which the caller reports as unreached.
        return None;
    }
    let overlap = TrigSum::overlap(&rho.pseudo_power(s), &rho.pseudo_power(T::one() - s), h);
    let v_eps = overlap.abs_sum * T::epsilon() * T::of_usize(d * d);
    let slack = v_th * (s - T::one()).abs() * tols.cross;
    let lipschitz = Some(overlap.lipschitz);

    let mut comps = Vec::new();
    if s < T::one() {
        // Crossed ⇔ v(t) ≤ v_th + v_eps, oriented as y = (v_th + v_eps) − v.
        let threshold = v_th + v_eps;
        comps.push(Component {
            eval: Box::new(move |t| threshold - overlap.value(t)),
            strict: T::zero(),
            near: -slack,
            lipschitz,
        });
    } else {
        // Crossed ⇔ v(t) ≥ v_th − v_eps, oriented as y = v − (v_th − v_eps).
        let threshold = v_th - v_eps;
        comps.push(Component {
            eval: Box::new(move |t| overlap.value(t) - threshold),
            strict: T::zero(),
            near: -slack,
            lipschitz,
        });
        if rho.rank() < d {
            // leak(t) = tr(ρ (I − Π(t))) with Π(t) the evolved support
            // projector; leak beyond the support tolerance means D = +∞.
            let on_support = TrigSum::overlap(rho.matrix(), &rho.support_projector(), h);
            let leak_lip = Some(on_support.lipschitz);
            let strict = tols.supp;
            comps.push(Component {
                eval: Box::new(move |t| T::one() - on_support.value(t)),
                strict,
                near: strict / T::of(2.0),
                lipschitz: leak_lip,
            });
        }
    }
    Some(comps)
}

/// First time D(ρ, ρ(t)) ≥ ε on [0, horizon], bisected to `t_tol`.
///
/// Defaults: horizon 50·π/ΔE (immediately unreached when ΔE ≈ 0), time
/// tolerance 1e-6 in units of the inverse spectral spread of H. For
/// [`Measure::Perp`] the threshold is 2 − `perp_epsilon` regardless of ε:
/// the orthogonality cut is a tolerance, not a caller parameter.
pub fn solve_tau<T: Real>(
    rho: &DensityMatrix<T>,
    h: &Hamiltonian<T>,
    measure: Measure<T>,
    epsilon: T,
    horizon: Option<T>,
    t_tol: Option<T>,
    tols: &Tolerances<T>,
) -> Result<TauResult<T>> {
    check_dims(rho, h)?;
    if let Measure::Renyi { s } = measure {
        Measure::renyi(s)?;
    }
    let eps_eff = match measure {
        Measure::Perp => T::of(2.0) - tols.perp_epsilon,
        _ => {
            if !epsilon.is_finite() || epsilon <= T::zero() {
                return Err(Error::InvalidEpsilon {
                    value: epsilon.as_f64(),
                });
            }
            epsilon
        }
    };

    let horizon = match horizon {
        Some(hz) => {
            if !hz.is_finite() || hz <= T::zero() {
                return Err(Error::InvalidHorizon { value: hz.as_f64() });
            }
            hz
        }
        None => match default_horizon(rho, h, tols)? {
            Some(hz) => hz,
            None => {
                // Stationary state: no finite horizon would help.
                return Ok(TauResult {
                    status: TauStatus::UnreachedWithinHorizon,
                    epsilon: eps_eff,
                    measure,
                    horizon: T::zero(),
                    base_step: T::zero(),
                });
            }
        },
    };
    let t_tol = match t_tol {
        Some(tt) => {
            if !tt.is_finite() || tt <= T::zero() {
                return Err(Error::InvalidTimeTolerance { value: tt.as_f64() });
            }
            tt
        }
        None => {
            let spread = h.spread();
            if spread > T::zero() {
                tols.t_tol / spread
            } else {
                tols.t_tol
            }
        }
    };

    let unreached = |base_step: T| TauResult {
        status: TauStatus::UnreachedWithinHorizon,
        epsilon: eps_eff,
        measure,
        horizon,
        base_step,
    };

    // A threshold above the measure's attainable range can never be crossed.
    if let Extended::Finite(max) = measure.max_value() {
        if eps_eff > max {
            return Ok(unreached(T::zero()));
        }
    }

    let (comps, base_step) = match measure {
        Measure::TraceDistance | Measure::Perp => {
            let f_h = f_measure(rho, h)?;
            let lip_step = if f_h > T::zero() {
                eps_eff / (T::of(2.0) * f_h)
            } else {
                T::infinity()
            };
            let base = lip_step.min(horizon / T::of(1000.0));
            (vec![trace_component(rho, h, eps_eff, f_h, tols)], base)
        }
        Measure::Infidelity => {
            let base = horizon / T::of(2000.0);
            (vec![infidelity_component(rho, h, eps_eff, tols)], base)
        }
        Measure::Renyi { s } => {
            let base = horizon / T::of(2000.0);
            match renyi_components(rho, h, s, eps_eff, tols) {
                Some(c) => (c, base),
                None => return Ok(unreached(base)),
            }
        }
    };

    let status = match march(&comps, horizon, t_tol, base_step) {
        Some(crossing) => TauStatus::Reached {
            t_star: crossing.t_star,
            bracket_width: crossing.bracket_width,
        },
        None => TauStatus::UnreachedWithinHorizon,
    };
    Ok(TauResult {
        status,
        epsilon: eps_eff,
        measure,
        horizon,
        base_step,
    })
}

/// Both sides of the instantaneous-speed identity: the trace-distance
/// derivative at 0⁺ equals F_H. Returns (F_H, ‖ρ − ρ(δ)‖₁/δ).
pub fn instantaneous_speed_check<T: Real>(
    rho: &DensityMatrix<T>,
    h: &Hamiltonian<T>,
    delta: T,
) -> Result<(T, T)> {
    let lhs = f_measure(rho, h)?;
    let evolved = evolve(rho, h, delta)?;
    let rhs = trace_distance(rho, &evolved)? / delta;
    Ok((lhs, rhs))
}

/// Both sides of the instantaneous-acceleration identity: the second
/// derivative of t ↦ D_{1/2}(ρ, ρ(t)) at 0 equals 4·S_H. Returns
/// (S_H, central-difference estimate of D''(0)/4).
pub fn instantaneous_acceleration_check<T: Real>(
    rho: &DensityMatrix<T>,
    h: &Hamiltonian<T>,
    delta: T,
    tols: &Tolerances<T>,
) -> Result<(T, T)> {
    let lhs = crate::asymmetry::skew_information(rho, h)?;
    let half = T::of(0.5);
    let fwd = renyi_relative_entropy(rho, &evolve(rho, h, delta)?, half, tols)?
        .finite()
        .unwrap_or_else(T::infinity);
    let bwd = renyi_relative_entropy(rho, &evolve(rho, h, -delta)?, half, tols)?
        .finite()
        .unwrap_or_else(T::infinity);
    let rhs = (fwd + bwd) / (T::of(4.0) * delta * delta);
    Ok((lhs, rhs))
}

/// Orbit samples of one measure at given times.
#[derive(Clone, Debug)]
pub struct OrbitSample<T> {
    /// Sample times as provided (expected ascending, nonnegative).
    pub times: Vec<T>,
    /// D(ρ, ρ(t)) per time; exactly zero at t = 0 and possibly +∞ for
    /// Rényi orders above one.
    pub values: Vec<Extended<T>>,
}

/// Samples t ↦ D(ρ, ρ(t)) at the given times.
pub fn orbit_scan<T: Real>(
    rho: &DensityMatrix<T>,
    h: &Hamiltonian<T>,
    measure: &Measure<T>,
    times: &[T],
    tols: &Tolerances<T>,
) -> Result<OrbitSample<T>> {
    check_dims(rho, h)?;
    let mut values = Vec::with_capacity(times.len());
    for &t in times {
        if t == T::zero() {
            values.push(Extended::Finite(T::zero()));
            continue;
        }
        let evolved = evolve(rho, h, t)?;
        values.push(evaluate(measure, rho, &evolved, tols)?);
    }
    Ok(OrbitSample {
        times: times.to_vec(),
        values,
    })
}
