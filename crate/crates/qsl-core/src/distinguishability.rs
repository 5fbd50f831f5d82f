//! Distinguishability measures between density matrices: trace distance,
//! the Rényi relative-entropy family of order s ∈ (0,1) ∪ (1,2], infidelity,
//! and the perfect-distinguishability predicate.
//!
//! Divergences can be genuinely infinite (disjoint supports, or order s > 1
//! with a support violation), so values are reported through [`Extended`],
//! which adjoins +∞ to the scalar type with total comparison semantics.

use std::fmt;

use crate::error::{Error, Result};
use crate::scalar::Real;
use crate::spectral::{eig_hermitian, trace_norm};
use crate::states::DensityMatrix;
use crate::tolerances::Tolerances;

/// A nonnegative scalar extended with +∞.
#[derive(Clone, Copy, Debug)]
pub enum Extended<T> {
    /// An ordinary finite value.
    Finite(T),
    /// Positive infinity.
    Infinite,
}

impl<T: Real> Extended<T> {
    /// True for the finite variant.
    pub fn is_finite(&self) -> bool {
        matches!(self, Extended::Finite(_))
    }

    /// The finite value, if any.
    pub fn finite(&self) -> Option<T> {
        match self {
            Extended::Finite(x) => Some(*x),
            Extended::Infinite => None,
        }
    }

    /// Conversion to f64, mapping the infinite variant to `f64::INFINITY`.
    pub fn as_f64(&self) -> f64 {
        match self {
            Extended::Finite(x) => x.as_f64(),
            Extended::Infinite => f64::INFINITY,
        }
    }
}

impl<T: Real> PartialEq for Extended<T> {
    fn eq(&self, other: &Self) -> bool {
        match (self, other) {
            (Extended::Finite(a), Extended::Finite(b)) => a == b,
            (Extended::Infinite, Extended::Infinite) => true,
            _ => false,
        }
    }
}

impl<T: Real> PartialOrd for Extended<T> {
    fn partial_cmp(&self, other: &Self) -> Option<std::cmp::Ordering> {
        use std::cmp::Ordering;
        match (self, other) {
            (Extended::Finite(a), Extended::Finite(b)) => a.partial_cmp(b),
            (Extended::Finite(_), Extended::Infinite) => Some(Ordering::Less),
            (Extended::Infinite, Extended::Finite(_)) => Some(Ordering::Greater),
            (Extended::Infinite, Extended::Infinite) => Some(Ordering::Equal),
        }
    }
}

impl<T: Real> fmt::Display for Extended<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Extended::Finite(x) => write!(f, "{x}"),
            Extended::Infinite => write!(f, "inf"),
        }
    }
}

impl<T: Real> From<T> for Extended<T> {
    fn from(x: T) -> Self {
        Extended::Finite(x)
    }
}

/// Distinguishability measure selector.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum Measure<T> {
    /// Trace distance ‖ρ₁ − ρ₂‖₁, range [0, 2].
    TraceDistance,
    /// Rényi relative entropy of order s ∈ (0,1) ∪ (1,2], range [0, ∞].
    Renyi {
        /// The order parameter.
        s: T,
    },
    /// Infidelity 1 − F(ρ₁, ρ₂), range [0, 1].
    Infidelity,
    /// Perfect distinguishability: trace distance at its maximum 2.
    Perp,
}

impl<T: Real> Measure<T> {
    /// Validated Rényi measure; the order must lie in (0,1) ∪ (1,2].
    pub fn renyi(s: T) -> Result<Self> {
        if s > T::zero() && s != T::one() && s <= T::of(2.0) {
            Ok(Measure::Renyi { s })
        } else {
            Err(Error::InvalidOrder { s: s.as_f64() })
        }
    }

    /// Largest value the measure can attain.
    pub fn max_value(&self) -> Extended<T> {
        match self {
            Measure::TraceDistance | Measure::Perp => Extended::Finite(T::of(2.0)),
            Measure::Infidelity => Extended::Finite(T::one()),
            Measure::Renyi { .. } => Extended::Infinite,
        }
    }
}

impl<T: Real> fmt::Display for Measure<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Measure::TraceDistance => write!(f, "trace"),
            Measure::Renyi { s } => write!(f, "renyi:{s}"),
            Measure::Infidelity => write!(f, "infidelity"),
            Measure::Perp => write!(f, "perp"),
        }
    }
}

fn check_dims<T: Real>(a: &DensityMatrix<T>, b: &DensityMatrix<T>) -> Result<()> {
    if a.dim() != b.dim() {
        return Err(Error::DimensionMismatch {
            left: a.dim(),
            right: b.dim(),
        });
    }
    Ok(())
}

/// Trace distance ‖ρ₁ − ρ₂‖₁ (both eigenvalue signs counted, so the range
/// is [0, 2] and orthogonal pure states sit at 2).
pub fn trace_distance<T: Real>(rho1: &DensityMatrix<T>, rho2: &DensityMatrix<T>) -> Result<T> {
    check_dims(rho1, rho2)?;
    Ok(trace_norm(&(rho1.matrix() - rho2.matrix())))
}

/// Probability weight of ρ₁ outside the support of ρ₂.
pub fn support_leak<T: Real>(rho1: &DensityMatrix<T>, rho2: &DensityMatrix<T>) -> Result<T> {
    check_dims(rho1, rho2)?;
    let pi = rho2.support_projector();
    Ok((T::one() - rho1.matrix().trace_product_re(&pi)).max(T::zero()))
}

/// Rényi relative entropy D_s(ρ₁‖ρ₂) = ln tr(ρ₁^s ρ₂^{1−s}) / (s − 1),
/// natural logarithm, order s ∈ (0,1) ∪ (1,2].
///
/// For s > 1 the divergence is +∞ unless supp ρ₁ ⊆ supp ρ₂; the inclusion is
/// tested against the support tolerance. Powers are taken on the support
/// only, so clamped zero eigenvalues never produce spurious infinities or
/// NaNs: for any s the result is +∞ exactly when the overlap trace vanishes.
pub fn renyi_relative_entropy<T: Real>(
    rho1: &DensityMatrix<T>,
    rho2: &DensityMatrix<T>,
    s: T,
    tols: &Tolerances<T>,
) -> Result<Extended<T>> {
    Measure::renyi(s)?;
    check_dims(rho1, rho2)?;
    if s > T::one() && support_leak(rho1, rho2)? > tols.supp {
        return Ok(Extended::Infinite);
    }
    let q = renyi_overlap(rho1, rho2, s);
    if q <= T::zero() {
        return Ok(Extended::Infinite);
    }
    Ok(Extended::Finite((q.ln() / (s - T::one())).max(T::zero())))
}

/// Overlap trace tr(ρ₁^s ρ₂^{1−s}) with powers taken on the supports.
pub fn renyi_overlap<T: Real>(rho1: &DensityMatrix<T>, rho2: &DensityMatrix<T>, s: T) -> T {
    let a = rho1.pseudo_power(s);
    let b = rho2.pseudo_power(T::one() - s);
    a.trace_product_re(&b)
}

/// Infidelity 1 − F with the squared-overlap fidelity
/// F = (tr √(√ρ₁ ρ₂ √ρ₁))², clamped into [0, 1].
pub fn infidelity<T: Real>(
    rho1: &DensityMatrix<T>,
    rho2: &DensityMatrix<T>,
    tols: &Tolerances<T>,
) -> Result<T> {
    check_dims(rho1, rho2)?;
    let s1 = rho1.sqrt_matrix();
    let m = s1.matmul(rho2.matrix()).matmul(&s1);
    let spec = eig_hermitian(&m, tols.herm)?;
    let root_sum = spec
        .eigenvalues()
        .iter()
        .fold(T::zero(), |a, &l| a + l.max(T::zero()).sqrt());
    let f = (root_sum * root_sum).min(T::one());
    Ok((T::one() - f).max(T::zero()))
}

/// Perfect distinguishability: the trace distance reaches its maximum 2 up
/// to the predicate tolerance, equivalently the supports are orthogonal.
pub fn is_perfectly_distinguishable<T: Real>(
    rho1: &DensityMatrix<T>,
    rho2: &DensityMatrix<T>,
    tols: &Tolerances<T>,
) -> Result<bool> {
    Ok(trace_distance(rho1, rho2)? >= T::of(2.0) - tols.perp_predicate)
}

/// Evaluates the functional underlying a measure at a pair of states. For
/// [`Measure::Perp`] this is the trace distance, whose maximum the predicate
/// asks for.
pub fn evaluate<T: Real>(
    measure: &Measure<T>,
    rho1: &DensityMatrix<T>,
    rho2: &DensityMatrix<T>,
    tols: &Tolerances<T>,
) -> Result<Extended<T>> {
    match measure {
        Measure::TraceDistance | Measure::Perp => {
            Ok(Extended::Finite(trace_distance(rho1, rho2)?))
        }
        Measure::Renyi { s } => renyi_relative_entropy(rho1, rho2, *s, tols),
        Measure::Infidelity => Ok(Extended::Finite(infidelity(rho1, rho2, tols)?)),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::matrix::ComplexMatrix;
    use crate::scalar::C;
    use num_complex::Complex;

    fn tols() -> Tolerances<f64> {
        Tolerances::default()
    }

    fn c(re: f64, im: f64) -> C<f64> {
        Complex::new(re, im)
    }

    fn diag_state(p: &[f64]) -> DensityMatrix<f64> {
        DensityMatrix::new(ComplexMatrix::diag_real(p), &tols()).unwrap()
    }

    fn bloch(x: f64, y: f64, z: f64) -> DensityMatrix<f64> {
        let m = ComplexMatrix::from_vec(
            2,
            vec![
                c(0.5 * (1.0 + z), 0.0),
                c(0.5 * x, -0.5 * y),
                c(0.5 * x, 0.5 * y),
                c(0.5 * (1.0 - z), 0.0),
            ],
        )
        .unwrap();
        DensityMatrix::new(m, &tols()).unwrap()
    }

    #[test]
    fn trace_distance_diagonal() {
        let d = trace_distance(&diag_state(&[1.0, 0.0]), &diag_state(&[0.5, 0.5])).unwrap();
        assert!((d - 1.0).abs() < 1e-14);
    }

    #[test]
    fn trace_distance_orthogonal_pure_states_is_two() {
        let plus = DensityMatrix::pure(&[c(1.0, 0.0), c(1.0, 0.0)], &tols()).unwrap();
        let minus = DensityMatrix::pure(&[c(1.0, 0.0), c(-1.0, 0.0)], &tols()).unwrap();
        let d = trace_distance(&plus, &minus).unwrap();
        assert!((d - 2.0).abs() < 1e-13);
        assert!(is_perfectly_distinguishable(&plus, &minus, &tols()).unwrap());
    }

    #[test]
    fn trace_distance_matches_bloch_formula() {
        // For qubits ‖ρ₁ − ρ₂‖₁ equals the Euclidean Bloch-vector distance.
        let r1 = bloch(0.3, 0.0, 0.4);
        let r2 = bloch(0.0, 0.5, -0.1);
        let expect = (0.3f64 * 0.3 + 0.5 * 0.5 + 0.5 * 0.5).sqrt();
        let d = trace_distance(&r1, &r2).unwrap();
        assert!((d - expect).abs() < 1e-13);
    }

    #[test]
    fn renyi_half_matches_root_overlap() {
        let rho1 = diag_state(&[0.25, 0.75]);
        let rho2 = diag_state(&[0.5, 0.5]);
        let overlap = 0.25f64.sqrt() * 0.5f64.sqrt() + 0.75f64.sqrt() * 0.5f64.sqrt();
        let expect = -2.0 * overlap.ln();
        let got = renyi_relative_entropy(&rho1, &rho2, 0.5, &tols())
            .unwrap()
            .finite()
            .unwrap();
        assert!((got - expect).abs() < 1e-13);
    }

    #[test]
    fn renyi_commuting_scalar_oracle() {
        let p = [0.1, 0.2, 0.7];
        let q = [0.5, 0.3, 0.2];
        let rho1 = diag_state(&p);
        let rho2 = diag_state(&q);
        for s in [0.3f64, 0.8, 1.3, 1.7, 2.0] {
            let overlap: f64 = p
                .iter()
                .zip(&q)
                .map(|(&pi, &qi)| pi.powf(s) * qi.powf(1.0 - s))
                .sum();
            let expect = overlap.ln() / (s - 1.0);
            let got = renyi_relative_entropy(&rho1, &rho2, s, &tols())
                .unwrap()
                .finite()
                .unwrap();
            assert!(
                (got - expect).abs() < 1e-12,
                "order {s}: got {got}, expected {expect}"
            );
        }
    }

    #[test]
    fn renyi_with_rank_deficient_first_argument() {
        // s = 0.3, ρ₁ = |1⟩⟨1|, ρ₂ = I/2: D = ln 2 exactly.
        let rho1 = diag_state(&[0.0, 1.0]);
        let rho2 = diag_state(&[0.5, 0.5]);
        let got = renyi_relative_entropy(&rho1, &rho2, 0.3, &tols())
            .unwrap()
            .finite()
            .unwrap();
        assert!((got - 2.0f64.ln()).abs() < 1e-13);
    }

    #[test]
    fn renyi_support_violation_is_infinite_above_one() {
        let mixed = diag_state(&[0.5, 0.5]);
        let pure = diag_state(&[1.0, 0.0]);
        let above = renyi_relative_entropy(&mixed, &pure, 1.5, &tols()).unwrap();
        assert_eq!(above, Extended::Infinite);
        // Below order one the same pair is finite: D_{1/2} = ln 2.
        let below = renyi_relative_entropy(&mixed, &pure, 0.5, &tols())
            .unwrap()
            .finite()
            .unwrap();
        assert!((below - 2.0f64.ln()).abs() < 1e-13);
    }

    #[test]
    fn renyi_order_two_with_contained_support() {
        // D_2(|0⟩⟨0| ‖ I/2) = ln tr(ρ₁² ρ₂^{−1}) = ln 2.
        let pure = diag_state(&[1.0, 0.0]);
        let mixed = diag_state(&[0.5, 0.5]);
        let got = renyi_relative_entropy(&pure, &mixed, 2.0, &tols())
            .unwrap()
            .finite()
            .unwrap();
        assert!((got - 2.0f64.ln()).abs() < 1e-13);
    }

    #[test]
    fn renyi_disjoint_supports_infinite_for_all_orders() {
        let zero = diag_state(&[1.0, 0.0]);
        let one = diag_state(&[0.0, 1.0]);
        for s in [0.4f64, 1.6] {
            let got = renyi_relative_entropy(&zero, &one, s, &tols()).unwrap();
            assert_eq!(got, Extended::Infinite, "order {s}");
        }
    }

    #[test]
    fn renyi_rejects_out_of_range_orders() {
        let rho = diag_state(&[0.5, 0.5]);
        for s in [0.0f64, -0.5, 1.0, 2.2] {
            assert!(matches!(
                renyi_relative_entropy(&rho, &rho, s, &tols()),
                Err(Error::InvalidOrder { .. })
            ));
        }
        assert!(Measure::renyi(2.0f64).is_ok());
    }

    #[test]
    fn renyi_of_identical_states_is_zero() {
        let rho = diag_state(&[0.0, 0.3, 0.7]);
        for s in [0.5f64, 1.5] {
            let got = renyi_relative_entropy(&rho, &rho, s, &tols())
                .unwrap()
                .finite()
                .unwrap();
            assert!(got.abs() < 1e-12, "order {s}: {got}");
        }
    }

    #[test]
    fn renyi_is_unitarily_invariant() {
        let rho1 = diag_state(&[0.2, 0.8]);
        let rho2 = bloch(0.3, 0.1, 0.2);
        let inv = 1.0 / 2.0f64.sqrt();
        let h = ComplexMatrix::from_vec(
            2,
            vec![c(inv, 0.0), c(inv, 0.0), c(inv, 0.0), c(-inv, 0.0)],
        )
        .unwrap();
        let rotate = |r: &DensityMatrix<f64>| {
            DensityMatrix::new(h.matmul(r.matrix()).matmul(&h.adjoint()), &tols()).unwrap()
        };
        for s in [0.5f64, 1.5] {
            let before = renyi_relative_entropy(&rho1, &rho2, s, &tols())
                .unwrap()
                .finite()
                .unwrap();
            let after = renyi_relative_entropy(&rotate(&rho1), &rotate(&rho2), s, &tols())
                .unwrap()
                .finite()
                .unwrap();
            assert!((before - after).abs() < 1e-12);
        }
    }

    #[test]
    fn infidelity_pure_states() {
        let zero = DensityMatrix::pure(&[c(1.0, 0.0), c(0.0, 0.0)], &tols()).unwrap();
        let plus = DensityMatrix::pure(&[c(1.0, 0.0), c(1.0, 0.0)], &tols()).unwrap();
        let got = infidelity(&zero, &plus, &tols()).unwrap();
        assert!((got - 0.5).abs() < 1e-13);
        assert!(infidelity(&zero, &zero, &tols()).unwrap() < 1e-14);
    }

    #[test]
    fn infidelity_commuting_scalar_oracle() {
        let p = [0.25f64, 0.75];
        let q = [0.5f64, 0.5];
        let root_overlap: f64 = p.iter().zip(&q).map(|(&a, &b)| (a * b).sqrt()).sum();
        let expect = 1.0 - root_overlap * root_overlap;
        let got = infidelity(&diag_state(&p), &diag_state(&q), &tols()).unwrap();
        assert!((got - expect).abs() < 1e-13);
    }

    #[test]
    fn perp_predicate_on_block_orthogonal_mixed_states() {
        let a = diag_state(&[0.5, 0.5, 0.0, 0.0]);
        let b = diag_state(&[0.0, 0.0, 0.3, 0.7]);
        assert!(is_perfectly_distinguishable(&a, &b, &tols()).unwrap());
        let zero = diag_state(&[1.0, 0.0]);
        let plus = DensityMatrix::pure(&[c(1.0, 0.0), c(1.0, 0.0)], &tols()).unwrap();
        assert!(!is_perfectly_distinguishable(&zero, &plus, &tols()).unwrap());
    }

    #[test]
    fn extended_ordering_and_display() {
        let a: Extended<f64> = Extended::Finite(3.0);
        assert!(a < Extended::Infinite);
        assert!(Extended::<f64>::Infinite >= a);
        assert_eq!(Extended::<f64>::Infinite, Extended::Infinite);
        assert_eq!(format!("{}", Extended::<f64>::Infinite), "inf");
        assert_eq!(Extended::<f64>::Infinite.as_f64(), f64::INFINITY);
        assert_eq!(a.finite(), Some(3.0));
    }

    #[test]
    fn dimension_mismatch_is_reported() {
        let a = diag_state(&[0.5, 0.5]);
        let b = diag_state(&[0.3, 0.3, 0.4]);
        assert!(matches!(
            trace_distance(&a, &b),
            Err(Error::DimensionMismatch { .. })
        ));
    }

    #[test]
    fn evaluate_dispatches_all_measures() {
        let a = diag_state(&[0.2, 0.8]);
        let b = diag_state(&[0.6, 0.4]);
        let td = evaluate(&Measure::TraceDistance, &a, &b, &tols()).unwrap();
        assert!((td.finite().unwrap() - 0.8).abs() < 1e-13);
        let perp = evaluate(&Measure::Perp, &a, &b, &tols()).unwrap();
        assert_eq!(td, perp);
        assert!(evaluate(&Measure::renyi(0.5).unwrap(), &a, &b, &tols())
            .unwrap()
            .is_finite());
        assert!(evaluate(&Measure::Infidelity, &a, &b, &tols())
            .unwrap()
            .is_finite());
    }
}
