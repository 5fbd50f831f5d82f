//! Batch property suites: randomized checks of the monotonicity, convexity,
//! additivity, identity, and bound-validity statements, run over seeded
//! corpora and summarized as pass/fail reports.
//!
//! Every suite is deterministic in its seed: trial k derives its own RNG
//! streams from `seed` and `k` only, so reports are reproducible and
//! independent of scheduling.

use rand::Rng;
use rayon::prelude::*;

use crate::asymmetry::{energy_stats, f_measure, skew_information};
use crate::bounds::{l1_bound, renyi_bound};
use crate::channels::{
    constant_channel, dephasing_channel, dilation_to_channel, harmonic_residual,
    random_energy_conserving_unitary, verify_incoherent, verify_ti, QuantumChannel,
};
use crate::distinguishability::{Extended, Measure};
use crate::evolution::{
    default_horizon, instantaneous_acceleration_check, instantaneous_speed_check, solve_tau, speed,
};
use crate::sampling::{
    random_density, random_diagonal_in, random_hamiltonian, random_pure, random_ti_channel,
    rng_for,
};
use crate::scalar::Real;
use crate::states::{tensor_hamiltonian, tensor_state, DensityMatrix, Hamiltonian};
use crate::tolerances::Tolerances;

/// Outcome of one randomized suite.
#[derive(Clone, Debug)]
pub struct SuiteReport<T> {
    /// Which property was exercised.
    pub name: String,
    /// Number of trials run.
    pub trials: usize,
    /// Trials whose margin exceeded the tolerance.
    pub violations: usize,
    /// Worst observed excess over the permitted bound (−∞ if every trial
    /// was vacuous). Values at or below `tolerance` are passes.
    pub worst_margin: T,
    /// Permitted excess.
    pub tolerance: T,
}

impl<T: Real> SuiteReport<T> {
    /// True when no trial violated the property.
    pub fn passed(&self) -> bool {
        self.violations == 0
    }
}

impl<T: Real> std::fmt::Display for SuiteReport<T> {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(
            f,
            "{}: {} | trials {} | violations {} | worst margin {:.3e} (tol {:.1e})",
            self.name,
            if self.passed() { "PASS" } else { "FAIL" },
            self.trials,
            self.violations,
            self.worst_margin,
            self.tolerance,
        )
    }
}

/// Spreads trial indices over seed space.
fn trial_seed(seed: u64, k: usize) -> u64 {
    seed.wrapping_add((k as u64).wrapping_mul(0x9E37_79B9_7F4A_7C15))
}

fn run_trials<T, F>(name: &str, trials: usize, tolerance: T, trial: F) -> SuiteReport<T>
where
    T: Real,
    F: Fn(usize) -> T + Send + Sync,
{
    let margins: Vec<T> = (0..trials).into_par_iter().map(trial).collect();
    let worst = margins
        .iter()
        .copied()
        .fold(T::neg_infinity(), |a, b| a.max(b));
    let violations = margins.iter().filter(|&&m| m > tolerance).count();
    SuiteReport {
        name: name.to_string(),
        trials,
        violations,
        worst_margin: worst,
        tolerance,
    }
}

fn pick_dim(dims: &[usize], k: usize) -> usize {
    dims[k % dims.len()]
}

/// Random state: pure on even trials, full-rank mixed on odd ones.
fn random_state<T: Real>(dim: usize, k: usize, seed: u64, tols: &Tolerances<T>) -> DensityMatrix<T> {
    if k.is_multiple_of(2) {
        random_pure(dim, seed, tols)
    } else {
        random_density(dim, dim, seed, tols)
    }
}

/// TI channel pool used by the monotonicity suites: dilation-sampled,
/// dephasing, or constant-to-incoherent, cycled by trial index.
fn pool_channel<T: Real>(
    h: &Hamiltonian<T>,
    k: usize,
    seed: u64,
    tols: &Tolerances<T>,
) -> QuantumChannel<T> {
    match k % 3 {
        0 => random_ti_channel(h, seed, tols).expect("dilation sampling yields a valid channel"),
        1 => dephasing_channel(h, tols),
        _ => {
            let sigma = random_diagonal_in(h, seed, tols);
            constant_channel(&sigma, h, tols).expect("diagonal target is incoherent")
        }
    }
}

/// Asymmetry never increases under TI channels: F_H and S_H of Φ(ρ) must
/// not exceed their input values. With `inject_non_ti` the final trial
/// replaces Φ by a generic (non-TI) unitary acting on an incoherent state,
/// which manufactures a violation — used to demonstrate that the harness
/// actually detects failures.
pub fn measure_monotonicity_suite<T: Real>(
    trials: usize,
    dims: &[usize],
    seed: u64,
    inject_non_ti: bool,
    tols: &Tolerances<T>,
) -> SuiteReport<T> {
    run_trials(
        "asymmetry monotonicity under TI channels",
        trials,
        T::of(1e-9),
        |k| {
            let s = trial_seed(seed, k);
            let dim = pick_dim(dims, k);
            let h = random_hamiltonian(dim, s, tols);
            let inject = inject_non_ti && k + 1 == trials;
            let (rho, channel) = if inject {
                let rho = random_diagonal_in(&h, s.wrapping_add(1), tols);
                let u = crate::sampling::haar_unitary::<T>(dim, s.wrapping_add(2));
                let channel =
                    QuantumChannel::unitary(u, tols).expect("haar matrix is unitary");
                (rho, channel)
            } else {
                (
                    random_state(dim, k, s.wrapping_add(1), tols),
                    pool_channel(&h, k, s.wrapping_add(2), tols),
                )
            };
            let out = channel.apply(&rho, tols).expect("channel output is a state");
            let f_in = f_measure(&rho, &h).unwrap();
            let f_out = f_measure(&out, &h).unwrap();
            let s_in = skew_information(&rho, &h).unwrap();
            let s_out = skew_information(&out, &h).unwrap();
            (f_out - f_in).max(s_out - s_in)
        },
    )
}

/// Speed of evolution never increases under TI channels: at a fixed
/// trace-distance target and matched horizon, 1/τ of Φ(ρ) must not exceed
/// 1/τ of ρ — and unreachable targets must stay unreachable.
pub fn speed_monotonicity_suite<T: Real>(
    trials: usize,
    dims: &[usize],
    seed: u64,
    tols: &Tolerances<T>,
) -> SuiteReport<T> {
    let epsilon = T::of(0.1);
    run_trials(
        "speed monotonicity under TI channels",
        trials,
        T::of(1e-4),
        |k| {
            let s = trial_seed(seed, k);
            let dim = pick_dim(dims, k);
            let h = random_hamiltonian(dim, s, tols);
            let rho = random_state(dim, k, s.wrapping_add(1), tols);
            let channel = pool_channel(&h, k, s.wrapping_add(2), tols);
            let Some(horizon) = default_horizon(&rho, &h, tols).unwrap() else {
                // Stationary input: its image under a TI map is stationary
                // too, so the comparison is vacuous.
                return T::neg_infinity();
            };
            let out = channel.apply(&rho, tols).expect("channel output is a state");
            let tau_in = solve_tau(
                &rho,
                &h,
                Measure::TraceDistance,
                epsilon,
                Some(horizon),
                None,
                tols,
            )
            .unwrap();
            let tau_out = solve_tau(
                &out,
                &h,
                Measure::TraceDistance,
                epsilon,
                Some(horizon),
                None,
                tols,
            )
            .unwrap();
            speed(&tau_out) - speed(&tau_in)
        },
    )
}

/// Speed is quasi-convex: the mixture pρ + (1−p)σ is never faster than the
/// faster of its components, at a fixed target and matched horizon.
pub fn speed_quasi_convexity_suite<T: Real>(
    trials: usize,
    dims: &[usize],
    seed: u64,
    tols: &Tolerances<T>,
) -> SuiteReport<T> {
    let epsilon = T::of(0.1);
    run_trials("speed quasi-convexity", trials, T::of(1e-4), |k| {
        let s = trial_seed(seed, k);
        let dim = pick_dim(dims, k);
        let h = random_hamiltonian(dim, s, tols);
        let rho = random_state(dim, k, s.wrapping_add(1), tols);
        let sigma = random_state(dim, k + 1, s.wrapping_add(2), tols);
        let p = T::of(0.05) + T::of(0.9) * T::of(rng_for(s.wrapping_add(3)).gen::<f64>());
        let mix = DensityMatrix::new(
            &rho.matrix().scale_re(p) + &sigma.matrix().scale_re(T::one() - p),
            tols,
        )
        .expect("mixture of states is a state");
        let horizons = [
            default_horizon(&rho, &h, tols).unwrap(),
            default_horizon(&sigma, &h, tols).unwrap(),
            default_horizon(&mix, &h, tols).unwrap(),
        ];
        let Some(horizon) = horizons.iter().flatten().copied().fold(None, |a: Option<T>, b| {
            Some(a.map_or(b, |x| x.max(b)))
        }) else {
            return T::neg_infinity();
        };
        let solve = |state: &DensityMatrix<T>| {
            speed(
                &solve_tau(
                    state,
                    &h,
                    Measure::TraceDistance,
                    epsilon,
                    Some(horizon),
                    None,
                    tols,
                )
                .unwrap(),
            )
        };
        solve(&mix) - solve(&rho).max(solve(&sigma))
    })
}

/// Pure-state identities F_H = 2ΔE and S_H = ΔE².
pub fn pure_identity_suite<T: Real>(
    trials: usize,
    dims: &[usize],
    seed: u64,
    tols: &Tolerances<T>,
) -> SuiteReport<T> {
    run_trials("pure-state measure identities", trials, T::of(1e-9), |k| {
        let s = trial_seed(seed, k);
        let dim = pick_dim(dims, k);
        let h = random_hamiltonian(dim, s, tols);
        let psi = random_pure(dim, s.wrapping_add(1), tols);
        let de = energy_stats(&psi, &h, tols).unwrap().uncertainty;
        let f = f_measure(&psi, &h).unwrap();
        let sk = skew_information(&psi, &h).unwrap();
        (f - T::of(2.0) * de).abs().max((sk - de * de).abs())
    })
}

/// Mixed-state bounding inequalities F_H ≤ 2ΔE and S_H ≤ ΔE².
pub fn measure_inequality_suite<T: Real>(
    trials: usize,
    dims: &[usize],
    seed: u64,
    tols: &Tolerances<T>,
) -> SuiteReport<T> {
    run_trials("measure bounding inequalities", trials, T::of(1e-9), |k| {
        let s = trial_seed(seed, k);
        let dim = pick_dim(dims, k);
        let h = random_hamiltonian(dim, s, tols);
        let rho = random_density(dim, dim, s.wrapping_add(1), tols);
        let de = energy_stats(&rho, &h, tols).unwrap().uncertainty;
        let f = f_measure(&rho, &h).unwrap();
        let sk = skew_information(&rho, &h).unwrap();
        (f - T::of(2.0) * de).max(sk - de * de)
    })
}

/// Additivity on product states: S_H for mixed factors; ΔE², A_min and
/// A_max for pure factors.
pub fn additivity_suite<T: Real>(
    trials: usize,
    dims: &[usize],
    seed: u64,
    tols: &Tolerances<T>,
) -> SuiteReport<T> {
    run_trials("additivity on product states", trials, T::of(1e-9), |k| {
        let s = trial_seed(seed, k);
        let da = pick_dim(dims, k);
        let db = pick_dim(dims, k + 1);
        let ha = random_hamiltonian(da, s, tols);
        let hb = random_hamiltonian(db, s.wrapping_add(1), tols);
        let h = tensor_hamiltonian(&ha, &hb, tols).unwrap();

        let rho_a = random_density(da, da, s.wrapping_add(2), tols);
        let rho_b = random_density(db, db, s.wrapping_add(3), tols);
        let rho = tensor_state(&rho_a, &rho_b);
        let s_margin = (skew_information(&rho, &h).unwrap()
            - skew_information(&rho_a, &ha).unwrap()
            - skew_information(&rho_b, &hb).unwrap())
        .abs();

        let psi_a = random_pure(da, s.wrapping_add(4), tols);
        let psi_b = random_pure(db, s.wrapping_add(5), tols);
        let psi = tensor_state(&psi_a, &psi_b);
        let sa = energy_stats(&psi_a, &ha, tols).unwrap();
        let sb = energy_stats(&psi_b, &hb, tols).unwrap();
        let st = energy_stats(&psi, &h, tols).unwrap();
        let var_margin = (st.uncertainty * st.uncertainty
            - sa.uncertainty * sa.uncertainty
            - sb.uncertainty * sb.uncertainty)
            .abs();
        let a_min_margin = (st.a_min() - sa.a_min() - sb.a_min()).abs();
        let a_max_margin = (st.a_max() - sa.a_max() - sb.a_max()).abs();

        s_margin.max(var_margin).max(a_min_margin).max(a_max_margin)
    })
}

/// Convexity of F_H and S_H under mixing.
pub fn convexity_suite<T: Real>(
    trials: usize,
    dims: &[usize],
    seed: u64,
    tols: &Tolerances<T>,
) -> SuiteReport<T> {
    run_trials("convexity of F_H and S_H", trials, T::of(1e-9), |k| {
        let s = trial_seed(seed, k);
        let dim = pick_dim(dims, k);
        let h = random_hamiltonian(dim, s, tols);
        let rho = random_state(dim, k, s.wrapping_add(1), tols);
        let sigma = random_state(dim, k + 1, s.wrapping_add(2), tols);
        let p = T::of(0.05) + T::of(0.9) * T::of(rng_for(s.wrapping_add(3)).gen::<f64>());
        let mix = DensityMatrix::new(
            &rho.matrix().scale_re(p) + &sigma.matrix().scale_re(T::one() - p),
            tols,
        )
        .expect("mixture of states is a state");
        let q = T::one() - p;
        let f_margin = f_measure(&mix, &h).unwrap()
            - p * f_measure(&rho, &h).unwrap()
            - q * f_measure(&sigma, &h).unwrap();
        let s_margin = skew_information(&mix, &h).unwrap()
            - p * skew_information(&rho, &h).unwrap()
            - q * skew_information(&sigma, &h).unwrap();
        f_margin.max(s_margin)
    })
}

/// Finite-difference checks of the speed and acceleration identities:
/// F_H against ‖ρ − ρ(δ)‖₁/δ at δ = 1e-4, and S_H against a quarter of the
/// central second difference of D_{1/2} at δ = 1e-3, on random full-rank
/// four-level states.
pub fn finite_difference_suite<T: Real>(
    trials: usize,
    seed: u64,
    tols: &Tolerances<T>,
) -> SuiteReport<T> {
    run_trials(
        "instantaneous speed/acceleration identities",
        trials,
        T::of(1e-3),
        |k| {
            let s = trial_seed(seed, k);
            let h = random_hamiltonian(4, s, tols);
            let rho = random_density(4, 4, s.wrapping_add(1), tols);
            let (f, f_num) = instantaneous_speed_check(&rho, &h, T::of(1e-4)).unwrap();
            let (sk, sk_num) =
                instantaneous_acceleration_check(&rho, &h, T::of(1e-3), tols).unwrap();
            (f - f_num).abs().max((sk - sk_num).abs())
        },
    )
}

/// Certification of dilation-sampled channels: covariance and harmonic
/// residuals within 1e-8, per-Kraus incoherence within 1e-9, and the
/// certificate frequencies equal to environment level differences. The
/// margin is the worst residual/limit ratio, so 1 is the pass line.
pub fn channel_certification_suite<T: Real>(
    trials: usize,
    seed: u64,
    tols: &Tolerances<T>,
) -> SuiteReport<T> {
    let times: Vec<T> = [0.37, 1.0, 2.7, std::f64::consts::PI * std::f64::consts::SQRT_2, 7.3]
        .iter()
        .map(|&t| T::of(t))
        .collect();
    run_trials("TI channel certification", trials, T::one(), |k| {
        let s = trial_seed(seed, k);
        let dim = 2 + k % 3;
        let h_sys = random_hamiltonian(dim, s, tols);
        let h_env = random_hamiltonian(dim, s.wrapping_add(1), tols);
        let dilation = random_energy_conserving_unitary(&h_sys, &h_env, s.wrapping_add(2), tols);
        let channel = dilation_to_channel(&dilation, &h_sys, tols)
            .expect("sampled dilation reduces to a channel");

        let env_levels = dilation.env_hamiltonian.spectrum().eigenvalues();
        let cert = channel.certificate().expect("dilation channels are certified");
        let cert_err = cert
            .iter()
            .enumerate()
            .map(|(l, &w)| (w - (env_levels[l] - env_levels[0])).abs())
            .fold(T::zero(), |a, b| a.max(b));

        let cov = verify_ti(&channel, &h_sys, &times).unwrap();
        let harm = harmonic_residual(&channel, &h_sys, &times).unwrap();
        let inc = verify_incoherent(&channel, &h_sys).unwrap();
        (cov / T::of(1e-8))
            .max(harm / T::of(1e-8))
            .max(inc / T::of(1e-9))
            .max(cert_err / T::of(1e-12))
    })
}

/// Generalized-bound validity: over random (ρ, H) pairs and grids of trace
/// and Rényi thresholds, every finite bound must sit below the solved
/// crossing time (margin = bound − t_star, tolerance 1e-5).
pub fn bound_validity_suite<T: Real>(
    trials: usize,
    dims: &[usize],
    trace_epsilons: &[T],
    renyi_epsilons: &[T],
    seed: u64,
    tols: &Tolerances<T>,
) -> SuiteReport<T> {
    run_trials("generalized-bound validity", trials, T::of(1e-5), |k| {
        let s = trial_seed(seed, k);
        let dim = pick_dim(dims, k);
        let h = random_hamiltonian(dim, s, tols);
        let rho = random_state(dim, k, s.wrapping_add(1), tols);
        let mut margin = T::neg_infinity();
        for &eps in trace_epsilons {
            let bound = l1_bound(&rho, &h, eps, tols).unwrap();
            let tau = solve_tau(&rho, &h, Measure::TraceDistance, eps, None, None, tols).unwrap();
            if let (Extended::Finite(b), Some(t)) = (bound, tau.t_star()) {
                margin = margin.max(b - t);
            }
        }
        let half = Measure::renyi(T::of(0.5)).unwrap();
        for &eps in renyi_epsilons {
            let bound = renyi_bound(&rho, &h, eps, tols).unwrap();
            let tau = solve_tau(&rho, &h, half, eps, None, None, tols).unwrap();
            if let (Extended::Finite(b), Some(t)) = (bound, tau.t_star()) {
                margin = margin.max(b - t);
            }
        }
        margin
    })
}

/// Incoherent states carry no speed information: asymmetry measures vanish,
/// every crossing solver reports unreached, and the generalized bounds are
/// +∞. Any reached solve or finite bound scores margin 1.
pub fn incoherent_stationarity_suite<T: Real>(
    trials: usize,
    dims: &[usize],
    seed: u64,
    tols: &Tolerances<T>,
) -> SuiteReport<T> {
    run_trials("incoherent stationarity", trials, T::of(1e-10), |k| {
        let s = trial_seed(seed, k);
        let dim = pick_dim(dims, k);
        let h = random_hamiltonian(dim, s, tols);
        let rho = random_diagonal_in(&h, s.wrapping_add(1), tols);

        let mut margin = f_measure(&rho, &h).unwrap();
        margin = margin.max(skew_information(&rho, &h).unwrap());
        margin = margin.max(crate::asymmetry::dyson_skew(&rho, &h, T::of(0.5), tols).unwrap());

        let half = Measure::renyi(T::of(0.5)).unwrap();
        let solves = [
            solve_tau(&rho, &h, Measure::TraceDistance, T::of(0.5), None, None, tols).unwrap(),
            solve_tau(&rho, &h, half, T::one(), None, None, tols).unwrap(),
            solve_tau(&rho, &h, Measure::Perp, T::of(2.0), None, None, tols).unwrap(),
        ];
        if solves.iter().any(|t| t.is_reached()) {
            margin = T::one();
        }
        if l1_bound(&rho, &h, T::one(), tols).unwrap().is_finite()
            || renyi_bound(&rho, &h, T::one(), tols).unwrap().is_finite()
        {
            margin = T::one();
        }
        margin
    })
}
