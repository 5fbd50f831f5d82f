//! Validated Hamiltonians and density matrices, and composite-system
//! plumbing (tensor products, partial trace, permutation unitaries).
//!
//! Both core types carry their spectral decomposition from construction
//! onward: validation needs the spectrum anyway (positivity, level
//! structure), and every downstream quantity (square roots, powers,
//! evolution unitaries, occupied-energy statistics) reads it directly.

use num_complex::Complex;

use crate::error::{Error, Result};
use crate::matrix::{commutator, ComplexMatrix};
use crate::scalar::{c_re, Real, C};
use crate::spectral::{eig_hermitian, trace_norm, SpectralDecomposition};
use crate::tolerances::Tolerances;

/// A distinct energy level: the representative eigenvalue and the indices of
/// the (ascending-ordered) eigenvectors that span its eigenspace.
#[derive(Clone, Debug)]
pub struct EnergyLevel<T> {
    /// Representative energy (mean of the grouped eigenvalues).
    pub energy: T,
    /// Indices into the spectral decomposition, contiguous and ascending.
    pub indices: Vec<usize>,
}

/// Hermitian Hamiltonian with cached spectrum and distinct-level structure.
#[derive(Clone, Debug)]
pub struct Hamiltonian<T> {
    matrix: ComplexMatrix<T>,
    spectrum: SpectralDecomposition<T>,
    levels: Vec<EnergyLevel<T>>,
}

impl<T: Real> Hamiltonian<T> {
    /// Validates Hermiticity and finiteness, diagonalises, and groups
    /// eigenvalues into distinct levels: eigenvalues closer than
    /// gap · max(1, spread) belong to one level.
    pub fn new(matrix: ComplexMatrix<T>, tols: &Tolerances<T>) -> Result<Self> {
        let spectrum = eig_hermitian(&matrix, tols.herm)?;
        let gap = tols.gap_abs(spectrum.spread());
        let levels = group_levels(spectrum.eigenvalues(), gap);
        Ok(Self {
            matrix: matrix.hermitized(),
            spectrum,
            levels,
        })
    }

    /// Diagonal Hamiltonian from real energies (always valid).
    pub fn diagonal(energies: &[T], tols: &Tolerances<T>) -> Self {
        Self::new(ComplexMatrix::diag_real(energies), tols)
            .expect("diagonal real matrix is Hermitian")
    }

    /// Hilbert-space dimension.
    pub fn dim(&self) -> usize {
        self.matrix.dim()
    }

    /// The (hermitized) matrix.
    pub fn matrix(&self) -> &ComplexMatrix<T> {
        &self.matrix
    }

    /// Cached eigendecomposition.
    pub fn spectrum(&self) -> &SpectralDecomposition<T> {
        &self.spectrum
    }

    /// Distinct energy levels, ascending.
    pub fn levels(&self) -> &[EnergyLevel<T>] {
        &self.levels
    }

    /// Spectral spread, the largest minus the smallest eigenvalue.
    pub fn spread(&self) -> T {
        self.spectrum.spread()
    }

    /// Evolution unitary e^{−iHt}.
    pub fn evolution_unitary(&self, t: T) -> ComplexMatrix<T> {
        self.spectrum.apply(|l| {
            let phase = l * t;
            Complex::new(phase.cos(), -phase.sin())
        })
    }

    /// Projector onto the eigenspace of the given distinct level.
    pub fn level_projector(&self, level: usize) -> ComplexMatrix<T> {
        let d = self.dim();
        let v = self.spectrum.eigenvectors();
        let mut p = ComplexMatrix::zeros(d);
        for &k in &self.levels[level].indices {
            for i in 0..d {
                for j in 0..d {
                    p[(i, j)] += v[(i, k)] * v[(j, k)].conj();
                }
            }
        }
        p
    }
}

fn group_levels<T: Real>(eigenvalues: &[T], gap: T) -> Vec<EnergyLevel<T>> {
    let mut levels: Vec<EnergyLevel<T>> = Vec::new();
    let mut start = 0;
    for k in 0..eigenvalues.len() {
        let is_last = k + 1 == eigenvalues.len();
        if is_last || eigenvalues[k + 1] - eigenvalues[k] > gap {
            let indices: Vec<usize> = (start..=k).collect();
            let mut sum = T::zero();
            for &i in &indices {
                sum += eigenvalues[i];
            }
            levels.push(EnergyLevel {
                energy: sum / T::of_usize(indices.len()),
                indices,
            });
            start = k + 1;
        }
    }
    levels
}

/// Validated density matrix: Hermitian, positive semidefinite (after
/// clamping), unit trace. The stored matrix is rebuilt from the processed
/// spectrum, so matrix and spectrum are always exactly consistent.
#[derive(Clone, Debug)]
pub struct DensityMatrix<T> {
    matrix: ComplexMatrix<T>,
    spectrum: SpectralDecomposition<T>,
    purity: T,
    clamp_abs: T,
}

impl<T: Real> DensityMatrix<T> {
    /// Validation pipeline: finiteness and Hermiticity checks, |tr − 1|
    /// bound, positivity with clamping of eigenvalues in (−psd, 0), and
    /// renormalisation to exactly unit eigenvalue sum.
    pub fn new(matrix: ComplexMatrix<T>, tols: &Tolerances<T>) -> Result<Self> {
        let spectrum = eig_hermitian(&matrix, tols.herm)?;

        let tr = matrix.trace().re;
        if (tr - T::one()).abs() > tols.trace_one {
            return Err(Error::TraceNotOne { trace: tr.as_f64() });
        }

        let min_eig = spectrum.eigenvalues()[0];
        if min_eig < -tols.psd {
            return Err(Error::NotPositive {
                min_eigenvalue: min_eig.as_f64(),
            });
        }

        // Clamp small negatives, renormalise to unit sum, rebuild.
        let clamped: Vec<T> = spectrum
            .eigenvalues()
            .iter()
            .map(|&l| l.max(T::zero()))
            .collect();
        let z = clamped.iter().fold(T::zero(), |a, &l| a + l);
        if z <= T::zero() {
            return Err(Error::NotPositive {
                min_eigenvalue: min_eig.as_f64(),
            });
        }
        let normalised: Vec<T> = clamped.iter().map(|&l| l / z).collect();
        let spectrum = SpectralDecomposition::from_parts(
            normalised,
            spectrum.eigenvectors().clone(),
        );
        let matrix = spectrum.reconstruct();
        let purity = spectrum
            .eigenvalues()
            .iter()
            .fold(T::zero(), |a, &l| a + l * l);
        let clamp_abs = tols.clamp_abs(T::one());
        Ok(Self {
            matrix,
            spectrum,
            purity,
            clamp_abs,
        })
    }

    /// Pure state from ket amplitudes; the ket is normalised first.
    pub fn pure(amplitudes: &[C<T>], tols: &Tolerances<T>) -> Result<Self> {
        let norm_sq = amplitudes
            .iter()
            .fold(T::zero(), |a, z| a + z.norm_sqr());
        if norm_sq <= T::zero() {
            return Err(Error::NonPositiveArgument {
                what: "ket norm",
                value: norm_sq.as_f64(),
            });
        }
        let inv = T::one() / norm_sq.sqrt();
        let v: Vec<C<T>> = amplitudes.iter().map(|&z| z * c_re(inv)).collect();
        Self::new(ComplexMatrix::outer(&v), tols)
    }

    /// The maximally mixed state I/d.
    pub fn maximally_mixed(dim: usize, tols: &Tolerances<T>) -> Self {
        let p = T::one() / T::of_usize(dim);
        Self::new(ComplexMatrix::identity(dim).scale_re(p), tols)
            .expect("maximally mixed state is valid")
    }

    /// Internal constructor for states obtained from an already-validated
    /// state by exact structure-preserving maps (unitary conjugation, tensor
    /// products): the caller guarantees consistency of the parts.
    pub(crate) fn from_trusted_parts(
        matrix: ComplexMatrix<T>,
        spectrum: SpectralDecomposition<T>,
        purity: T,
        clamp_abs: T,
    ) -> Self {
        Self {
            matrix,
            spectrum,
            purity,
            clamp_abs,
        }
    }

    /// Hilbert-space dimension.
    pub fn dim(&self) -> usize {
        self.matrix.dim()
    }

    /// The validated matrix.
    pub fn matrix(&self) -> &ComplexMatrix<T> {
        &self.matrix
    }

    /// Cached eigendecomposition (ascending, clamped, normalised).
    pub fn spectrum(&self) -> &SpectralDecomposition<T> {
        &self.spectrum
    }

    /// Ascending eigenvalues.
    pub fn eigenvalues(&self) -> &[T] {
        self.spectrum.eigenvalues()
    }

    /// tr ρ², cached.
    pub fn purity(&self) -> T {
        self.purity
    }

    /// Purity-based pure-state test.
    pub fn is_pure(&self, tol: T) -> bool {
        self.purity >= T::one() - tol
    }

    /// Absolute eigenvalue-clamping threshold fixed at validation.
    pub fn clamp_abs(&self) -> T {
        self.clamp_abs
    }

    /// Principal square root √ρ.
    pub fn sqrt_matrix(&self) -> ComplexMatrix<T> {
        self.spectrum.sqrt_psd(self.clamp_abs)
    }

    /// Pseudo-power ρ^s on the support (clamped zeros stay zero).
    pub fn pseudo_power(&self, s: T) -> ComplexMatrix<T> {
        self.spectrum.pseudo_power(s, self.clamp_abs)
    }

    /// Projector onto the support of ρ.
    pub fn support_projector(&self) -> ComplexMatrix<T> {
        self.spectrum.support_projector(self.clamp_abs)
    }

    /// Rank after clamping.
    pub fn rank(&self) -> usize {
        self.spectrum.rank(self.clamp_abs)
    }
}

/// Incoherence predicate: ‖[H, ρ]‖₁ ≤ tol. A state commuting with the
/// Hamiltonian is stationary under e^{−iHt} and carries no coherence between
/// distinct energy levels.
pub fn is_incoherent<T: Real>(
    rho: &DensityMatrix<T>,
    h: &Hamiltonian<T>,
    tol: T,
) -> Result<bool> {
    let c = commutator(h.matrix(), rho.matrix())?;
    Ok(trace_norm(&c) <= tol)
}

/// Tensor-factor structure of a composite Hilbert space; row-major index
/// convention with the last factor fastest.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CompositeLabel {
    dims: Vec<usize>,
}

impl CompositeLabel {
    /// Builds a label; every factor dimension must be ≥ 1 and the product
    /// must match `total_dim`.
    pub fn new(dims: Vec<usize>, total_dim: usize) -> Result<Self> {
        let prod: usize = dims.iter().product();
        if dims.is_empty() || dims.contains(&0) || prod != total_dim {
            return Err(Error::BadLabel {
                label: dims,
                dim: total_dim,
            });
        }
        Ok(Self { dims })
    }

    /// Factor dimensions.
    pub fn dims(&self) -> &[usize] {
        &self.dims
    }

    /// Number of factors.
    pub fn len(&self) -> usize {
        self.dims.len()
    }

    /// True when the label has no factors (never constructible).
    pub fn is_empty(&self) -> bool {
        self.dims.is_empty()
    }
}

/// Product state ρ_A ⊗ ρ_B via trusted construction: the spectrum of the
/// product is the sorted pairwise product of the factor spectra and the
/// purity multiplies.
pub fn tensor_state<T: Real>(a: &DensityMatrix<T>, b: &DensityMatrix<T>) -> DensityMatrix<T> {
    let (da, db) = (a.dim(), b.dim());
    let matrix = a.matrix().kron(b.matrix());

    let va = a.spectrum().eigenvectors();
    let vb = b.spectrum().eigenvectors();
    let mut pairs: Vec<(T, usize, usize)> = Vec::with_capacity(da * db);
    for i in 0..da {
        for j in 0..db {
            pairs.push((
                a.eigenvalues()[i] * b.eigenvalues()[j],
                i,
                j,
            ));
        }
    }
    pairs.sort_by(|x, y| x.0.partial_cmp(&y.0).unwrap_or(std::cmp::Ordering::Equal));
    let eigenvalues: Vec<T> = pairs.iter().map(|p| p.0).collect();
    let eigenvectors = ComplexMatrix::from_fn(da * db, |row, col| {
        let (_, i, j) = pairs[col];
        let (ra, rb) = (row / db, row % db);
        va[(ra, i)] * vb[(rb, j)]
    });
    DensityMatrix::from_trusted_parts(
        matrix,
        SpectralDecomposition::from_parts(eigenvalues, eigenvectors),
        a.purity() * b.purity(),
        a.clamp_abs().max(b.clamp_abs()),
    )
}

/// Non-interacting composite Hamiltonian H_A ⊗ I + I ⊗ H_B.
pub fn tensor_hamiltonian<T: Real>(
    a: &Hamiltonian<T>,
    b: &Hamiltonian<T>,
    tols: &Tolerances<T>,
) -> Result<Hamiltonian<T>> {
    let ia = ComplexMatrix::identity(a.dim());
    let ib = ComplexMatrix::identity(b.dim());
    let m = &a.matrix().kron(&ib) + &ia.kron(b.matrix());
    Hamiltonian::new(m, tols)
}

/// Partial trace keeping a single factor of a composite state.
pub fn partial_trace<T: Real>(
    rho: &DensityMatrix<T>,
    label: &CompositeLabel,
    keep: usize,
    tols: &Tolerances<T>,
) -> Result<DensityMatrix<T>> {
    let dims = label.dims();
    let total: usize = dims.iter().product();
    if total != rho.dim() || keep >= dims.len() {
        return Err(Error::BadLabel {
            label: dims.to_vec(),
            dim: rho.dim(),
        });
    }
    let dk = dims[keep];
    let stride: usize = dims[keep + 1..].iter().product();

    let m = rho.matrix();
    let mut out = ComplexMatrix::zeros(dk);
    // Enumerate all multi-indices of the traced factors by scanning every
    // full index whose kept component is zero.
    for full in 0..total {
        let k_comp = (full / stride) % dk;
        if k_comp != 0 {
            continue;
        }
        for a in 0..dk {
            let row = full + a * stride;
            for b in 0..dk {
                let col = full + b * stride;
                out[(a, b)] += m[(row, col)];
            }
        }
    }
    DensityMatrix::new(out, tols)
}

/// Permutation unitary U|i⟩ = |σ(i)⟩ for a bijection σ on basis labels.
pub fn permutation_unitary<T: Real>(perm: &[usize]) -> Result<ComplexMatrix<T>> {
    let d = perm.len();
    let mut seen = vec![false; d];
    for &p in perm {
        if p >= d || seen[p] {
            return Err(Error::NotPermutation { dim: d });
        }
        seen[p] = true;
    }
    let mut u = ComplexMatrix::zeros(d);
    for (i, &p) in perm.iter().enumerate() {
        u[(p, i)] = c_re(T::one());
    }
    Ok(u)
}
