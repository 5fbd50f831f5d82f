//! Asymmetry and coherence functionals relative to the translation group
//! e^{−iHt}: energy statistics, the commutator trace norm F_H, Wigner–Yanase
//! and Dyson–Wigner–Yanase skew information, and the occupied-level gaps
//! A_min/A_max.

use crate::error::{Error, Result};
use crate::matrix::{commutator, ComplexMatrix};
use crate::scalar::Real;
use crate::spectral::trace_norm;
use crate::states::{DensityMatrix, Hamiltonian};
use crate::tolerances::Tolerances;

/// First and second moments of energy plus the extreme occupied levels.
#[derive(Clone, Copy, Debug)]
pub struct EnergyStats<T> {
    /// Mean energy tr(ρH).
    pub average: T,
    /// Energy uncertainty ΔE = √(tr(ρH²) − tr²(ρH)).
    pub uncertainty: T,
    /// Least distinct level whose eigenspace population exceeds the support
    /// tolerance.
    pub min_occupied: T,
    /// Greatest such level.
    pub max_occupied: T,
}

impl<T: Real> EnergyStats<T> {
    /// Gap from the mean down to the lowest occupied level.
    pub fn a_min(&self) -> T {
        self.average - self.min_occupied
    }

    /// Gap from the mean up to the highest occupied level.
    pub fn a_max(&self) -> T {
        self.max_occupied - self.average
    }
}

fn check_dims<T: Real>(rho: &DensityMatrix<T>, h: &Hamiltonian<T>) -> Result<()> {
    if rho.dim() != h.dim() {
        return Err(Error::DimensionMismatch {
            left: rho.dim(),
            right: h.dim(),
        });
    }
    Ok(())
}

/// Energy statistics of ρ under H. Moments come from the eigenbasis
/// populations q_k = ⟨v_k|ρ|v_k⟩, and a distinct level counts as occupied
/// when its total eigenspace population exceeds the support tolerance —
/// the occupied-level cut is genuinely discontinuous, so the threshold is
/// explicit rather than implied.
pub fn energy_stats<T: Real>(
    rho: &DensityMatrix<T>,
    h: &Hamiltonian<T>,
    tols: &Tolerances<T>,
) -> Result<EnergyStats<T>> {
    check_dims(rho, h)?;
    let v = h.spectrum().eigenvectors();
    let in_h_basis = v.adjoint().matmul(rho.matrix()).matmul(v);
    let d = rho.dim();
    let populations: Vec<T> = (0..d).map(|k| in_h_basis[(k, k)].re).collect();

    let mut average = T::zero();
    let mut second = T::zero();
    for (k, &l) in h.spectrum().eigenvalues().iter().enumerate() {
        average += l * populations[k];
        second += l * l * populations[k];
    }
    let uncertainty = (second - average * average).max(T::zero()).sqrt();

    let mut occupied: Vec<T> = Vec::new();
    let mut best = (T::zero(), T::neg_infinity());
    for level in h.levels() {
        let pop = level
            .indices
            .iter()
            .fold(T::zero(), |a, &k| a + populations[k]);
        if pop > tols.supp {
            occupied.push(level.energy);
        }
        if pop > best.1 {
            best = (level.energy, pop);
        }
    }
    // Every state has total population one, so some level always clears any
    // sensible threshold; fall back to the most populated level regardless.
    let (min_occupied, max_occupied) = if occupied.is_empty() {
        (best.0, best.0)
    } else {
        (occupied[0], occupied[occupied.len() - 1])
    };
    Ok(EnergyStats {
        average,
        uncertainty,
        min_occupied,
        max_occupied,
    })
}

/// The pair (A_min, A_max) = (E_av − E_min, E_max − E_av).
pub fn a_min_max<T: Real>(
    rho: &DensityMatrix<T>,
    h: &Hamiltonian<T>,
    tols: &Tolerances<T>,
) -> Result<(T, T)> {
    let stats = energy_stats(rho, h, tols)?;
    Ok((stats.a_min(), stats.a_max()))
}

/// Commutator trace norm F_H(ρ) = ‖[H, ρ]‖₁, a faithful asymmetry measure:
/// zero exactly on states commuting with H.
pub fn f_measure<T: Real>(rho: &DensityMatrix<T>, h: &Hamiltonian<T>) -> Result<T> {
    check_dims(rho, h)?;
    Ok(trace_norm(&commutator(h.matrix(), rho.matrix())?))
}

/// Wigner–Yanase skew information S_H(ρ) = tr(H²ρ) − tr(√ρH√ρH), computed
/// in the manifestly nonnegative form ‖[H, √ρ]‖₂²/2.
pub fn skew_information<T: Real>(rho: &DensityMatrix<T>, h: &Hamiltonian<T>) -> Result<T> {
    check_dims(rho, h)?;
    let c = commutator(h.matrix(), &rho.sqrt_matrix())?;
    let f = c.frobenius_norm();
    Ok(f * f / T::of(2.0))
}

/// Dyson–Wigner–Yanase skew information of order s ∈ (0,1) ∪ (1,2].
///
/// For s ∈ (0,1) this is −tr([ρ^s,H][ρ^{1−s},H]) and reduces to 2·S_H at
/// s = 1/2. The same trace expression changes sign on (1,2] — the factors
/// λ^s and λ^{1−s} order eigenvalues oppositely there — so the overall sign
/// is chosen per branch to return the nonnegative asymmetry measure.
///
/// For s > 1 powers of ρ are taken on its support; when ρ is rank-deficient
/// and H couples the support to the kernel the formula has no finite value
/// and a support error is returned rather than a silently projected one.
pub fn dyson_skew<T: Real>(
    rho: &DensityMatrix<T>,
    h: &Hamiltonian<T>,
    s: T,
    tols: &Tolerances<T>,
) -> Result<T> {
    if !(s > T::zero() && s != T::one() && s <= T::of(2.0)) {
        return Err(Error::InvalidOrder { s: s.as_f64() });
    }
    check_dims(rho, h)?;
    let d = rho.dim();

    if s > T::one() && rho.rank() < d {
        let pi = rho.support_projector();
        let complement = &ComplexMatrix::identity(d) - &pi;
        let coupling = pi.matmul(h.matrix()).matmul(&complement).frobenius_norm();
        let scale = T::one().max(h.matrix().frobenius_norm());
        if coupling > tols.supp * scale {
            return Err(Error::Support {
                residual: coupling.as_f64(),
            });
        }
    }

    // Work in the eigenbasis of ρ: with h̃ = V†HV the trace expands to
    // ±Σ_{j<k} 2(λ_j^s − λ_k^s)(λ_j^{1−s} − λ_k^{1−s})|h̃_jk|², avoiding
    // explicit matrices with large negative powers.
    let v = rho.spectrum().eigenvectors();
    let ht = v.adjoint().matmul(h.matrix()).matmul(v);
    let clamp = rho.clamp_abs();
    let pow = |l: T, e: T| if l <= clamp { T::zero() } else { l.powf(e) };
    let a: Vec<T> = rho.eigenvalues().iter().map(|&l| pow(l, s)).collect();
    let b: Vec<T> = rho
        .eigenvalues()
        .iter()
        .map(|&l| pow(l, T::one() - s))
        .collect();

    let mut total = T::zero();
    for j in 0..d {
        for k in (j + 1)..d {
            let weight = ht[(j, k)].norm_sqr();
            total += T::of(2.0) * (a[j] - a[k]) * (b[j] - b[k]) * weight;
        }
    }
    if s > T::one() {
        total = -total;
    }
    Ok(total.max(T::zero()))
}

/// Aggregate report of every asymmetry functional plus the Dyson family at
/// the requested orders.
#[derive(Clone, Debug)]
pub struct MeasureReport<T> {
    /// Energy statistics (mean, uncertainty, extreme occupied levels).
    pub energy: EnergyStats<T>,
    /// E_av − E_min.
    pub a_min: T,
    /// E_max − E_av.
    pub a_max: T,
    /// ‖[H, ρ]‖₁.
    pub f_h: T,
    /// Wigner–Yanase skew information.
    pub skew: T,
    /// (order, value) pairs of the Dyson family.
    pub dyson: Vec<(T, T)>,
}

/// Computes the full report; any failing component fails the report.
pub fn measure_report<T: Real>(
    rho: &DensityMatrix<T>,
    h: &Hamiltonian<T>,
    orders: &[T],
    tols: &Tolerances<T>,
) -> Result<MeasureReport<T>> {
    let energy = energy_stats(rho, h, tols)?;
    let f_h = f_measure(rho, h)?;
    let skew = skew_information(rho, h)?;
    let mut dyson = Vec::with_capacity(orders.len());
    for &s in orders {
        dyson.push((s, dyson_skew(rho, h, s, tols)?));
    }
    Ok(MeasureReport {
        energy,
        a_min: energy.a_min(),
        a_max: energy.a_max(),
        f_h,
        skew,
        dyson,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::C;
    use crate::states::{tensor_hamiltonian, tensor_state};
    use num_complex::Complex;

    fn tols() -> Tolerances<f64> {
        Tolerances::default()
    }

    fn c(re: f64, im: f64) -> C<f64> {
        Complex::new(re, im)
    }

    fn qubit_h() -> Hamiltonian<f64> {
        Hamiltonian::diagonal(&[0.0, 1.0], &tols())
    }

    fn plus_state() -> DensityMatrix<f64> {
        DensityMatrix::pure(&[c(1.0, 0.0), c(1.0, 0.0)], &tols()).unwrap()
    }

    #[test]
    fn energy_stats_of_plus_state() {
        let stats = energy_stats(&plus_state(), &qubit_h(), &tols()).unwrap();
        assert!((stats.average - 0.5).abs() < 1e-14);
        assert!((stats.uncertainty - 0.5).abs() < 1e-14);
        assert!(stats.min_occupied.abs() < 1e-14);
        assert!((stats.max_occupied - 1.0).abs() < 1e-14);
    }

    #[test]
    fn energy_stats_of_eigenstate() {
        let ground = DensityMatrix::pure(&[c(1.0, 0.0), c(0.0, 0.0)], &tols()).unwrap();
        let stats = energy_stats(&ground, &qubit_h(), &tols()).unwrap();
        assert!(stats.uncertainty.abs() < 1e-14);
        assert!(stats.min_occupied.abs() < 1e-14);
        assert!(stats.max_occupied.abs() < 1e-14);
        let (a_min, a_max) = a_min_max(&ground, &qubit_h(), &tols()).unwrap();
        assert!(a_min.abs() < 1e-14 && a_max.abs() < 1e-14);
    }

    #[test]
    fn energy_stats_of_maximally_mixed_qubit() {
        let rho = DensityMatrix::maximally_mixed(2, &tols());
        let stats = energy_stats(&rho, &qubit_h(), &tols()).unwrap();
        assert!((stats.average - 0.5).abs() < 1e-14);
        assert!((stats.uncertainty - 0.5).abs() < 1e-14);
    }

    #[test]
    fn occupied_levels_respect_population_threshold() {
        let rho = DensityMatrix::new(
            crate::matrix::ComplexMatrix::diag_real(&[1.0f64 - 1e-12, 1e-12]),
            &tols(),
        )
        .unwrap();
        let stats = energy_stats(&rho, &qubit_h(), &tols()).unwrap();
        // The 1e-12 population is below the 1e-10 support cut.
        assert!(stats.max_occupied.abs() < 1e-14);
    }

    #[test]
    fn degenerate_level_population_is_pooled() {
        let h = Hamiltonian::diagonal(&[0.0, 1.0, 1.0], &tols());
        let rho = DensityMatrix::new(
            crate::matrix::ComplexMatrix::diag_real(&[0.5f64, 0.25, 0.25]),
            &tols(),
        )
        .unwrap();
        let stats = energy_stats(&rho, &h, &tols()).unwrap();
        assert!((stats.max_occupied - 1.0).abs() < 1e-14);
        assert!((stats.average - 0.5).abs() < 1e-14);
    }

    #[test]
    fn a_min_max_of_plus_state() {
        let (a_min, a_max) = a_min_max(&plus_state(), &qubit_h(), &tols()).unwrap();
        assert!((a_min - 0.5).abs() < 1e-14);
        assert!((a_max - 0.5).abs() < 1e-14);
    }

    #[test]
    fn a_min_max_is_additive_on_product_of_plus_states() {
        let ab = tensor_state(&plus_state(), &plus_state());
        let hab = tensor_hamiltonian(&qubit_h(), &qubit_h(), &tols()).unwrap();
        let (a_min, a_max) = a_min_max(&ab, &hab, &tols()).unwrap();
        assert!((a_min - 1.0).abs() < 1e-13);
        assert!((a_max - 1.0).abs() < 1e-13);
    }

    #[test]
    fn f_measure_vanishes_on_diagonal_states() {
        let rho = DensityMatrix::new(
            crate::matrix::ComplexMatrix::diag_real(&[0.3f64, 0.7]),
            &tols(),
        )
        .unwrap();
        assert!(f_measure(&rho, &qubit_h()).unwrap() < 1e-13);
    }

    #[test]
    fn f_measure_of_plus_state_is_one() {
        // [H, |+⟩⟨+|] has singular values 1/2, 1/2.
        let f = f_measure(&plus_state(), &qubit_h()).unwrap();
        assert!((f - 1.0).abs() < 1e-13);
    }

    #[test]
    fn f_measure_is_homogeneous_in_h() {
        let h2 = Hamiltonian::diagonal(&[0.0, 2.0], &tols());
        let f1 = f_measure(&plus_state(), &qubit_h()).unwrap();
        let f2 = f_measure(&plus_state(), &h2).unwrap();
        assert!((f2 - 2.0 * f1).abs() < 1e-13);
    }

    #[test]
    fn skew_information_vanishes_on_diagonal_states() {
        let rho = DensityMatrix::new(
            crate::matrix::ComplexMatrix::diag_real(&[0.3f64, 0.7]),
            &tols(),
        )
        .unwrap();
        assert!(skew_information(&rho, &qubit_h()).unwrap() < 1e-13);
    }

    #[test]
    fn skew_information_of_pure_states_is_the_variance() {
        let s = skew_information(&plus_state(), &qubit_h()).unwrap();
        assert!((s - 0.25).abs() < 1e-13);

        // (|0⟩ + |2⟩)/√2 with H = diag(0,1,2): variance of {0,2} at equal
        // weight is 1.
        let h3 = Hamiltonian::diagonal(&[0.0, 1.0, 2.0], &tols());
        let psi = DensityMatrix::pure(&[c(1.0, 0.0), c(0.0, 0.0), c(1.0, 0.0)], &tols()).unwrap();
        let s3 = skew_information(&psi, &h3).unwrap();
        assert!((s3 - 1.0).abs() < 1e-13);

        // Generic pure qubit: skew equals ΔE².
        let psi2 = DensityMatrix::pure(
            &[c(0.7f64.cos(), 0.0), c(0.7f64.sin() * 0.3f64.cos(), 0.7f64.sin() * 0.3f64.sin())],
            &tols(),
        )
        .unwrap();
        let stats = energy_stats(&psi2, &qubit_h(), &tols()).unwrap();
        let skew = skew_information(&psi2, &qubit_h()).unwrap();
        assert!((skew - stats.uncertainty * stats.uncertainty).abs() < 1e-12);
    }

    #[test]
    fn dyson_at_half_is_twice_skew() {
        // Mixed, non-diagonal state.
        let m = crate::matrix::ComplexMatrix::from_vec(
            2,
            vec![c(0.6, 0.0), c(0.2, 0.1), c(0.2, -0.1), c(0.4, 0.0)],
        )
        .unwrap();
        let rho = DensityMatrix::new(m, &tols()).unwrap();
        let d_half = dyson_skew(&rho, &qubit_h(), 0.5, &tols()).unwrap();
        let s = skew_information(&rho, &qubit_h()).unwrap();
        assert!((d_half - 2.0 * s).abs() < 1e-12, "{d_half} vs 2·{s}");
    }

    #[test]
    fn dyson_vanishes_on_diagonal_states() {
        let rho = DensityMatrix::new(
            crate::matrix::ComplexMatrix::diag_real(&[0.3f64, 0.7]),
            &tols(),
        )
        .unwrap();
        for s in [0.3f64, 0.5, 1.5, 2.0] {
            assert!(dyson_skew(&rho, &qubit_h(), s, &tols()).unwrap() < 1e-13);
        }
    }

    #[test]
    fn dyson_at_half_on_pure_state_is_twice_variance() {
        let d = dyson_skew(&plus_state(), &qubit_h(), 0.5, &tols()).unwrap();
        assert!((d - 0.5).abs() < 1e-12);
    }

    #[test]
    fn dyson_order_two_scalar_oracle() {
        // ρ with Bloch vector (1/2, 0, 0): eigenvalues 1/4, 3/4 with |∓⟩
        // eigenvectors; H = diag(0,1) has |⟨v₁|H|v₂⟩|² = 1/4.
        let m = crate::matrix::ComplexMatrix::from_vec(
            2,
            vec![c(0.5, 0.0), c(0.25, 0.0), c(0.25, 0.0), c(0.5, 0.0)],
        )
        .unwrap();
        let rho = DensityMatrix::new(m, &tols()).unwrap();
        let (l1, l2) = (0.25f64, 0.75f64);
        let expect = -(2.0 * (l1 * l1 - l2 * l2) * (1.0 / l1 - 1.0 / l2) * 0.25);
        let got = dyson_skew(&rho, &qubit_h(), 2.0, &tols()).unwrap();
        assert!((got - expect).abs() < 1e-12, "{got} vs {expect}");
        assert!(got > 0.0);
    }

    #[test]
    fn dyson_above_one_rejects_coupled_rank_deficiency() {
        let err = dyson_skew(&plus_state(), &qubit_h(), 1.5, &tols());
        assert!(matches!(err, Err(Error::Support { .. })));
        // Below order one the same state is fine.
        assert!(dyson_skew(&plus_state(), &qubit_h(), 0.5, &tols()).is_ok());
    }

    #[test]
    fn dyson_above_one_allows_uncoupled_rank_deficiency() {
        // Pure state inside a degenerate eigenspace: H preserves the support.
        let h = Hamiltonian::diagonal(&[1.0, 1.0, 3.0], &tols());
        let psi = DensityMatrix::pure(&[c(1.0, 0.0), c(1.0, 0.0), c(0.0, 0.0)], &tols()).unwrap();
        let got = dyson_skew(&psi, &h, 1.5, &tols()).unwrap();
        assert!(got.abs() < 1e-13);
    }

    #[test]
    fn dyson_rejects_out_of_range_orders() {
        let rho = DensityMatrix::maximally_mixed(2, &tols());
        for s in [0.0f64, 1.0, 2.5, -1.0] {
            assert!(matches!(
                dyson_skew(&rho, &qubit_h(), s, &tols()),
                Err(Error::InvalidOrder { .. })
            ));
        }
    }

    #[test]
    fn report_satisfies_bounding_inequalities() {
        let m = crate::matrix::ComplexMatrix::from_vec(
            2,
            vec![c(0.6, 0.0), c(0.2, 0.1), c(0.2, -0.1), c(0.4, 0.0)],
        )
        .unwrap();
        let rho = DensityMatrix::new(m, &tols()).unwrap();
        let report = measure_report(&rho, &qubit_h(), &[0.5f64, 2.0], &tols()).unwrap();
        let de = report.energy.uncertainty;
        assert!(report.f_h <= 2.0 * de + 1e-9);
        assert!(report.skew <= de * de + 1e-9);
        assert!(report.a_min >= -1e-12 && report.a_max >= -1e-12);
        assert_eq!(report.dyson.len(), 2);

        // Pure states saturate both inequalities.
        let pure_report = measure_report(&plus_state(), &qubit_h(), &[], &tols()).unwrap();
        let de = pure_report.energy.uncertainty;
        assert!((pure_report.f_h - 2.0 * de).abs() < 1e-9);
        assert!((pure_report.skew - de * de).abs() < 1e-9);
    }

    #[test]
    fn level_swap_changes_skew_on_superposition_states() {
        // (|0⟩+|1⟩)/√2 → (|0⟩+|N⟩)/√2 under a permutation unitary: the
        // variance jumps from 1/4 to N²/4, witnessing that these functionals
        // are not monotone under general incoherent operations.
        let n = 3;
        let h = Hamiltonian::diagonal(&[0.0, 1.0, 2.0, 3.0], &tols());
        let near = DensityMatrix::pure(
            &[c(1.0, 0.0), c(1.0, 0.0), c(0.0, 0.0), c(0.0, 0.0)],
            &tols(),
        )
        .unwrap();
        let far = DensityMatrix::pure(
            &[c(1.0, 0.0), c(0.0, 0.0), c(0.0, 0.0), c(1.0, 0.0)],
            &tols(),
        )
        .unwrap();
        let s_near = skew_information(&near, &h).unwrap();
        let s_far = skew_information(&far, &h).unwrap();
        assert!((s_near - 0.25).abs() < 1e-12);
        assert!((s_far - (n * n) as f64 / 4.0).abs() < 1e-12);
        assert!(s_far > s_near + 1.0);
    }
}
