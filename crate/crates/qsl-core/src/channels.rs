//! Translationally invariant (TI) quantum channels: Kraus representations
//! with harmonic certificates, energy-conserving Stinespring dilations, and
//! the verification routines that certify covariance and incoherence.
//!
//! A channel Φ is TI when it commutes with time translation,
//! Φ(e^{−iHt} ρ e^{iHt}) = e^{−iHt} Φ(ρ) e^{iHt} for all t. Equivalently a
//! Kraus representation exists whose operators are harmonic,
//! e^{−iHt} K_μ e^{iHt} = e^{iω_μ t} K_μ; the list of frequencies ω_μ is
//! carried as the channel's certificate. Every TI channel arises from
//! coupling to an environment through an energy-conserving joint unitary,
//! which is how random TI channels are produced here.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use num_complex::Complex;

use crate::error::{Error, Result};
use crate::matrix::{commutator, ComplexMatrix};
use crate::sampling::haar_unitary_with;
use crate::scalar::{c_re, Real, C};
use crate::spectral::trace_norm;
use crate::states::{DensityMatrix, Hamiltonian};
use crate::tolerances::Tolerances;

/// Unitarity bound for dilation joint unitaries.
const DILATION_UNITARITY_TOL: f64 = 1e-10;
/// Energy-conservation bound ‖[V, H_tot]‖_F, relative to max(1, ‖H_tot‖_F).
const DILATION_CONSERVATION_TOL: f64 = 1e-9;

/// Completely positive trace-preserving map in Kraus form, optionally
/// carrying the harmonic frequencies that certify translation invariance.
#[derive(Clone, Debug)]
pub struct QuantumChannel<T> {
    kraus: Vec<ComplexMatrix<T>>,
    omegas: Option<Vec<T>>,
}

impl<T: Real> QuantumChannel<T> {
    /// Validates shapes and the completeness relation Σ K†K = I.
    pub fn new(kraus: Vec<ComplexMatrix<T>>, tols: &Tolerances<T>) -> Result<Self> {
        Self::validate(&kraus, tols)?;
        Ok(Self {
            kraus,
            omegas: None,
        })
    }

    /// As [`new`](Self::new), attaching harmonic frequencies (one per Kraus
    /// operator). The harmonic property itself is verified against a
    /// Hamiltonian by [`harmonic_residual`].
    pub fn with_certificate(
        kraus: Vec<ComplexMatrix<T>>,
        omegas: Vec<T>,
        tols: &Tolerances<T>,
    ) -> Result<Self> {
        if omegas.len() != kraus.len() {
            return Err(Error::InvalidDilation {
                reason: format!(
                    "certificate has {} frequencies for {} Kraus operators",
                    omegas.len(),
                    kraus.len()
                ),
            });
        }
        Self::validate(&kraus, tols)?;
        Ok(Self {
            kraus,
            omegas: Some(omegas),
        })
    }

    fn validate(kraus: &[ComplexMatrix<T>], tols: &Tolerances<T>) -> Result<()> {
        let Some(first) = kraus.first() else {
            return Err(Error::EmptyKraus);
        };
        let d = first.dim();
        for k in kraus {
            if k.dim() != d {
                return Err(Error::DimensionMismatch {
                    left: k.dim(),
                    right: d,
                });
            }
            k.check_finite()?;
        }
        let mut sum = ComplexMatrix::zeros(d);
        for k in kraus {
            sum = &sum + &k.adjoint().matmul(k);
        }
        let residual = sum.max_abs_diff(&ComplexMatrix::identity(d));
        if residual > tols.completeness {
            return Err(Error::NotTracePreserving {
                residual: residual.as_f64(),
                tol: tols.completeness.as_f64(),
            });
        }
        Ok(())
    }

    /// The identity channel (trivially TI with frequency zero).
    pub fn identity(dim: usize, tols: &Tolerances<T>) -> Self {
        Self::with_certificate(vec![ComplexMatrix::identity(dim)], vec![T::zero()], tols)
            .expect("identity Kraus set is complete")
    }

    /// Channel ρ ↦ UρU† from a unitary (completeness enforces unitarity).
    pub fn unitary(u: ComplexMatrix<T>, tols: &Tolerances<T>) -> Result<Self> {
        Self::new(vec![u], tols)
    }

    /// System dimension.
    pub fn dim(&self) -> usize {
        self.kraus[0].dim()
    }

    /// The Kraus operators.
    pub fn kraus(&self) -> &[ComplexMatrix<T>] {
        &self.kraus
    }

    /// Harmonic frequencies, when certified.
    pub fn certificate(&self) -> Option<&[T]> {
        self.omegas.as_deref()
    }

    /// Raw action Σ K ρ K† on an arbitrary matrix.
    pub fn apply_matrix(&self, m: &ComplexMatrix<T>) -> ComplexMatrix<T> {
        let mut out = ComplexMatrix::zeros(self.dim());
        for k in &self.kraus {
            out = &out + &k.matmul(m).matmul(&k.adjoint());
        }
        out
    }

    /// Action on a state, re-validated as a density matrix.
    pub fn apply(&self, rho: &DensityMatrix<T>, tols: &Tolerances<T>) -> Result<DensityMatrix<T>> {
        if rho.dim() != self.dim() {
            return Err(Error::DimensionMismatch {
                left: rho.dim(),
                right: self.dim(),
            });
        }
        DensityMatrix::new(self.apply_matrix(rho.matrix()).hermitized(), tols)
    }

    /// Composition self ∘ other (other acts first). Kraus operators multiply
    /// pairwise; harmonic frequencies add when both factors are certified,
    /// which is what keeps TI channels closed under composition.
    pub fn compose(&self, other: &Self, tols: &Tolerances<T>) -> Result<Self> {
        if self.dim() != other.dim() {
            return Err(Error::DimensionMismatch {
                left: self.dim(),
                right: other.dim(),
            });
        }
        let mut kraus = Vec::with_capacity(self.kraus.len() * other.kraus.len());
        for a in &self.kraus {
            for b in &other.kraus {
                kraus.push(a.matmul(b));
            }
        }
        match (&self.omegas, &other.omegas) {
            (Some(wa), Some(wb)) => {
                let mut omegas = Vec::with_capacity(kraus.len());
                for &x in wa {
                    for &y in wb {
                        omegas.push(x + y);
                    }
                }
                Self::with_certificate(kraus, omegas, tols)
            }
            _ => Self::new(kraus, tols),
        }
    }
}

/// Full dephasing onto the distinct levels of H: Kraus operators are the
/// level projectors, all with frequency zero. Output states are always
/// incoherent.
pub fn dephasing_channel<T: Real>(h: &Hamiltonian<T>, tols: &Tolerances<T>) -> QuantumChannel<T> {
    let kraus: Vec<ComplexMatrix<T>> = (0..h.levels().len())
        .map(|l| h.level_projector(l))
        .collect();
    let omegas = vec![T::zero(); kraus.len()];
    QuantumChannel::with_certificate(kraus, omegas, tols)
        .expect("level projectors resolve the identity")
}

/// The channel that discards its input and prepares a fixed incoherent
/// state σ. The Kraus set √p_m |φ_m⟩⟨e_i| — with |φ_m⟩ the eigenvectors of
/// σ inside single energy levels and |e_i⟩ the eigenbasis of H — makes the
/// harmonic structure explicit: each operator has frequency ε_i − E_m.
pub fn constant_channel<T: Real>(
    sigma: &DensityMatrix<T>,
    h: &Hamiltonian<T>,
    tols: &Tolerances<T>,
) -> Result<QuantumChannel<T>> {
    if sigma.dim() != h.dim() {
        return Err(Error::DimensionMismatch {
            left: sigma.dim(),
            right: h.dim(),
        });
    }
    let residual = trace_norm(&commutator(h.matrix(), sigma.matrix())?);
    if residual > tols.incoherent {
        return Err(Error::NotIncoherentTarget {
            residual: residual.as_f64(),
        });
    }

    let d = h.dim();
    // Eigen-decompose σ level by level: each eigenvector lies inside one
    // eigenspace of H and inherits that level's energy.
    let mut prepared: Vec<(T, Vec<C<T>>, T)> = Vec::new(); // (weight, ket, energy)
    for (l, level) in h.levels().iter().enumerate() {
        let p = h.level_projector(l);
        let block = p.matmul(sigma.matrix()).matmul(&p);
        let spec = crate::spectral::eig_hermitian(&block.hermitized(), tols.herm)?;
        for k in 0..d {
            let weight = spec.eigenvalues()[k];
            if weight > sigma.clamp_abs() {
                let ket: Vec<C<T>> = (0..d).map(|i| spec.eigenvectors()[(i, k)]).collect();
                prepared.push((weight, ket, level.energy));
            }
        }
    }

    let v = h.spectrum().eigenvectors();
    let energies = h.spectrum().eigenvalues();
    let mut kraus = Vec::with_capacity(prepared.len() * d);
    let mut omegas = Vec::with_capacity(prepared.len() * d);
    for (weight, ket, energy) in &prepared {
        let root = weight.sqrt();
        for i in 0..d {
            let k = ComplexMatrix::from_fn(d, |r, c| ket[r] * v[(c, i)].conj() * c_re(root));
            kraus.push(k);
            omegas.push(energies[i] - *energy);
        }
    }
    QuantumChannel::with_certificate(kraus, omegas, tols)
}

/// Stinespring dilation data: an environment Hamiltonian, a joint unitary on
/// system ⊗ environment, and the eigenvector index of the environment's
/// initial state |E_0⟩.
#[derive(Clone, Debug)]
pub struct StinespringDilation<T> {
    /// Environment Hamiltonian H_env.
    pub env_hamiltonian: Hamiltonian<T>,
    /// Joint unitary V on system ⊗ environment (system-major indexing).
    pub joint_unitary: ComplexMatrix<T>,
    /// Index (in ascending eigenvalue order) of the environment eigenvector
    /// the dilation starts from.
    pub env_initial_index: usize,
    /// Sizes of the total-energy blocks the unitary was drawn on; empty for
    /// hand-built dilations. Near-degenerate energy sums merge into one
    /// block, so the sizes record exactly what was treated as conserved.
    pub block_sizes: Vec<usize>,
}

impl<T: Real> StinespringDilation<T> {
    /// Wraps hand-built dilation data; invariants are checked when the
    /// dilation is reduced to a channel.
    pub fn new(
        env_hamiltonian: Hamiltonian<T>,
        joint_unitary: ComplexMatrix<T>,
        env_initial_index: usize,
    ) -> Self {
        Self {
            env_hamiltonian,
            joint_unitary,
            env_initial_index,
            block_sizes: Vec::new(),
        }
    }
}

/// Random unitary commuting with H_sys ⊗ I + I ⊗ H_env: eigenvalue sums are
/// grouped into degenerate blocks (up to the gap tolerance) and an
/// independent Haar unitary is drawn on each block, seeded per block so the
/// result is deterministic regardless of evaluation order.
pub fn random_energy_conserving_unitary<T: Real>(
    h_sys: &Hamiltonian<T>,
    h_env: &Hamiltonian<T>,
    seed: u64,
    tols: &Tolerances<T>,
) -> StinespringDilation<T> {
    let ds = h_sys.dim();
    let de = h_env.dim();
    let total = ds * de;

    // Total-energy eigenpairs: value λ_i + μ_j, eigenvector v_i ⊗ w_j.
    let mut pairs: Vec<(T, usize, usize)> = Vec::with_capacity(total);
    for i in 0..ds {
        for j in 0..de {
            pairs.push((
                h_sys.spectrum().eigenvalues()[i] + h_env.spectrum().eigenvalues()[j],
                i,
                j,
            ));
        }
    }
    pairs.sort_by(|a, b| a.0.partial_cmp(&b.0).unwrap_or(std::cmp::Ordering::Equal));

    let spread = pairs[total - 1].0 - pairs[0].0;
    let gap = tols.gap_abs(spread);
    let mut blocks: Vec<std::ops::Range<usize>> = Vec::new();
    let mut start = 0;
    for k in 0..total {
        if k + 1 == total || pairs[k + 1].0 - pairs[k].0 > gap {
            blocks.push(start..k + 1);
            start = k + 1;
        }
    }

    // Columns of P are the sorted total-energy eigenvectors.
    let vs = h_sys.spectrum().eigenvectors();
    let ve = h_env.spectrum().eigenvectors();
    let p = ComplexMatrix::from_fn(total, |row, col| {
        let (_, i, j) = pairs[col];
        vs[(row / de, i)] * ve[(row % de, j)]
    });

    let mut block_diag = ComplexMatrix::zeros(total);
    let mut block_sizes = Vec::with_capacity(blocks.len());
    for (idx, range) in blocks.iter().enumerate() {
        let size = range.len();
        block_sizes.push(size);
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        rng.set_stream(idx as u64);
        let u = haar_unitary_with::<T, _>(&mut rng, size);
        for a in 0..size {
            for b in 0..size {
                block_diag[(range.start + a, range.start + b)] = u[(a, b)];
            }
        }
    }

    let joint_unitary = p.matmul(&block_diag).matmul(&p.adjoint());
    StinespringDilation {
        env_hamiltonian: h_env.clone(),
        joint_unitary,
        env_initial_index: 0,
        block_sizes,
    }
}

/// Reduces a dilation to Kraus form: K_l = ⟨E_l| V |E_0⟩ over the
/// environment eigenbasis, with harmonic frequencies ω_l = E_l − E_0.
/// Checks the dilation invariants (unitarity, energy conservation) first.
pub fn dilation_to_channel<T: Real>(
    dilation: &StinespringDilation<T>,
    h_sys: &Hamiltonian<T>,
    tols: &Tolerances<T>,
) -> Result<QuantumChannel<T>> {
    let ds = h_sys.dim();
    let de = dilation.env_hamiltonian.dim();
    let total = ds * de;
    let v = &dilation.joint_unitary;
    if v.dim() != total {
        return Err(Error::InvalidDilation {
            reason: format!(
                "joint unitary has dimension {}, expected {} × {} = {}",
                v.dim(),
                ds,
                de,
                total
            ),
        });
    }
    if dilation.env_initial_index >= de {
        return Err(Error::InvalidDilation {
            reason: format!(
                "environment initial index {} out of range for dimension {}",
                dilation.env_initial_index, de
            ),
        });
    }
    let unit_res = v.unitarity_residual();
    if unit_res.as_f64() > DILATION_UNITARITY_TOL {
        return Err(Error::InvalidDilation {
            reason: format!("joint operator is not unitary: residual {unit_res:e}"),
        });
    }
    let h_tot = &h_sys.matrix().kron(&ComplexMatrix::identity(de))
        + &ComplexMatrix::identity(ds).kron(dilation.env_hamiltonian.matrix());
    let cons = commutator(v, &h_tot)?.frobenius_norm();
    let scale = T::one().max(h_tot.frobenius_norm());
    if cons > T::of(DILATION_CONSERVATION_TOL) * scale {
        return Err(Error::InvalidDilation {
            reason: format!("joint unitary does not conserve energy: residual {cons:e}"),
        });
    }

    let we = dilation.env_hamiltonian.spectrum().eigenvectors();
    let energies = dilation.env_hamiltonian.spectrum().eigenvalues();
    let e0 = dilation.env_initial_index;
    let mut kraus = Vec::with_capacity(de);
    let mut omegas = Vec::with_capacity(de);
    for l in 0..de {
        let mut k = ComplexMatrix::zeros(ds);
        for a in 0..ds {
            for b in 0..ds {
                let mut acc: C<T> = Complex::new(T::zero(), T::zero());
                for p in 0..de {
                    let wl = we[(p, l)].conj();
                    if wl.norm_sqr() == T::zero() {
                        continue;
                    }
                    for q in 0..de {
                        acc += wl * v[(a * de + p, b * de + q)] * we[(q, e0)];
                    }
                }
                k[(a, b)] = acc;
            }
        }
        kraus.push(k);
        omegas.push(energies[l] - energies[e0]);
    }
    QuantumChannel::with_certificate(kraus, omegas, tols).map_err(|e| Error::InvalidDilation {
        reason: format!("dilation does not reduce to a valid channel: {e}"),
    })
}

/// Deterministic spanning probe set: the d² pure states |i⟩⟨i|,
/// |i+j⟩⟨i+j| and |i+ij⟩⟨i+ij| (symmetrized matrix units), as raw matrices.
fn probe_states<T: Real>(dim: usize) -> Vec<ComplexMatrix<T>> {
    let half = T::of(0.5);
    let mut probes = Vec::with_capacity(dim * dim);
    for i in 0..dim {
        for j in 0..dim {
            let mut m = ComplexMatrix::zeros(dim);
            if i == j {
                m[(i, i)] = c_re(T::one());
            } else if i < j {
                m[(i, i)] = c_re(half);
                m[(j, j)] = c_re(half);
                m[(i, j)] = c_re(half);
                m[(j, i)] = c_re(half);
            } else {
                // (|j⟩ + i|i⟩)/√2 for the lower triangle.
                m[(j, j)] = c_re(half);
                m[(i, i)] = c_re(half);
                m[(j, i)] = Complex::new(T::zero(), -half);
                m[(i, j)] = Complex::new(T::zero(), half);
            }
            probes.push(m);
        }
    }
    probes
}

/// Covariance residual: max over probe states and sample times of
/// ‖e^{−iHt} Φ(ρ) e^{iHt} − Φ(e^{−iHt} ρ e^{iHt})‖₁. Zero (to tolerance)
/// certifies translation invariance; the probes span operator space, so
/// linearity extends the certificate to all states.
pub fn verify_ti<T: Real>(
    channel: &QuantumChannel<T>,
    h: &Hamiltonian<T>,
    t_samples: &[T],
) -> Result<T> {
    if channel.dim() != h.dim() {
        return Err(Error::DimensionMismatch {
            left: channel.dim(),
            right: h.dim(),
        });
    }
    let mut worst = T::zero();
    for probe in probe_states::<T>(h.dim()) {
        let mapped = channel.apply_matrix(&probe);
        for &t in t_samples {
            let u = h.evolution_unitary(t);
            let lhs = u.matmul(&mapped).matmul(&u.adjoint());
            let rhs = channel.apply_matrix(&u.matmul(&probe).matmul(&u.adjoint()));
            worst = worst.max(trace_norm(&(&lhs - &rhs)));
        }
    }
    Ok(worst)
}

/// Per-Kraus incoherence residual: max over level-diagonal probe states and
/// Kraus operators of the off-level-diagonal Frobenius mass of K ρ K†.
/// Harmonic Kraus operators map each level block into a single level, so TI
/// channels score zero — the numeric content of "TI ⊆ incoherent".
pub fn verify_incoherent<T: Real>(
    channel: &QuantumChannel<T>,
    h: &Hamiltonian<T>,
) -> Result<T> {
    if channel.certificate().is_none() {
        return Err(Error::MissingCertificate);
    }
    if channel.dim() != h.dim() {
        return Err(Error::DimensionMismatch {
            left: channel.dim(),
            right: h.dim(),
        });
    }
    let d = h.dim();
    let projectors: Vec<ComplexMatrix<T>> = (0..h.levels().len())
        .map(|l| h.level_projector(l))
        .collect();
    let v = h.spectrum().eigenvectors();
    let half_root = T::of(0.5).sqrt();

    // Within-level symmetrized units, expressed in the H eigenbasis.
    let mut probes: Vec<ComplexMatrix<T>> = Vec::new();
    for level in h.levels() {
        for (x, &a) in level.indices.iter().enumerate() {
            for &b in level.indices.iter().skip(x) {
                let kets: Vec<Vec<C<T>>> = if a == b {
                    vec![(0..d).map(|r| v[(r, a)]).collect()]
                } else {
                    let plus: Vec<C<T>> = (0..d)
                        .map(|r| (v[(r, a)] + v[(r, b)]) * c_re(half_root))
                        .collect();
                    let phase: Vec<C<T>> = (0..d)
                        .map(|r| {
                            (v[(r, a)] + v[(r, b)] * Complex::new(T::zero(), T::one()))
                                * c_re(half_root)
                        })
                        .collect();
                    vec![plus, phase]
                };
                for ket in kets {
                    probes.push(ComplexMatrix::outer(&ket));
                }
            }
        }
    }

    let mut worst = T::zero();
    for probe in &probes {
        for k in channel.kraus() {
            let out = k.matmul(probe).matmul(&k.adjoint());
            let mut diagonal = ComplexMatrix::zeros(d);
            for p in &projectors {
                diagonal = &diagonal + &p.matmul(&out).matmul(p);
            }
            worst = worst.max((&out - &diagonal).frobenius_norm());
        }
    }
    Ok(worst)
}

/// Harmonic residual of a certified channel against H: max over Kraus
/// operators and times of ‖e^{−iHt} K e^{iHt} − e^{iωt} K‖_F.
pub fn harmonic_residual<T: Real>(
    channel: &QuantumChannel<T>,
    h: &Hamiltonian<T>,
    times: &[T],
) -> Result<T> {
    let Some(omegas) = channel.certificate() else {
        return Err(Error::MissingCertificate);
    };
    if channel.dim() != h.dim() {
        return Err(Error::DimensionMismatch {
            left: channel.dim(),
            right: h.dim(),
        });
    }
    let mut worst = T::zero();
    for &t in times {
        let u = h.evolution_unitary(t);
        let u_dag = u.adjoint();
        for (k, &omega) in channel.kraus().iter().zip(omegas) {
            let rotated = u.matmul(k).matmul(&u_dag);
            let phase = omega * t;
            let scaled = k.scale(Complex::new(phase.cos(), phase.sin()));
            worst = worst.max((&rotated - &scaled).frobenius_norm());
        }
    }
    Ok(worst)
}
