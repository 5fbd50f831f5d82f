//! Deterministic random generators for states, Hamiltonians, unitaries and
//! channels. Everything is seeded through ChaCha8, with values drawn in f64
//! and converted, so sequences are reproducible across platforms and scalar
//! types.

use num_complex::Complex;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};

use crate::channels::{dilation_to_channel, random_energy_conserving_unitary, QuantumChannel};
use crate::error::Result;
use crate::matrix::ComplexMatrix;
use crate::scalar::{c_re, Real, C};
use crate::states::{DensityMatrix, Hamiltonian};
use crate::tolerances::Tolerances;

/// The stream cipher RNG used throughout; seeded per call site.
pub fn rng_for(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

fn normal<T: Real, R: Rng>(rng: &mut R) -> T {
    let x: f64 = StandardNormal.sample(rng);
    T::of(x)
}

fn complex_normal<T: Real, R: Rng>(rng: &mut R) -> C<T> {
    Complex::new(normal(rng), normal(rng))
}

/// Matrix of independent standard complex Gaussians.
pub fn ginibre<T: Real, R: Rng>(rng: &mut R, dim: usize) -> ComplexMatrix<T> {
    let mut m = ComplexMatrix::zeros(dim);
    for i in 0..dim {
        for j in 0..dim {
            m[(i, j)] = complex_normal(rng);
        }
    }
    m
}

/// Haar-random unitary: modified Gram–Schmidt orthonormalization of a
/// Ginibre matrix. MGS produces real positive diagonal factors, so no
/// additional phase fixing is needed for Haar distribution.
pub fn haar_unitary_with<T: Real, R: Rng>(rng: &mut R, dim: usize) -> ComplexMatrix<T> {
    let g = ginibre::<T, _>(rng, dim);
    let mut q: Vec<Vec<C<T>>> = (0..dim)
        .map(|j| (0..dim).map(|i| g[(i, j)]).collect())
        .collect();
    for j in 0..dim {
        let (done, rest) = q.split_at_mut(j);
        let qj = &mut rest[0];
        for qk in done.iter() {
            // proj = ⟨q_k, q_j⟩
            let mut proj = Complex::new(T::zero(), T::zero());
            for (a, b) in qk.iter().zip(qj.iter()) {
                proj += a.conj() * *b;
            }
            for (a, b) in qk.iter().zip(qj.iter_mut()) {
                *b -= proj * *a;
            }
        }
        let norm = qj
            .iter()
            .fold(T::zero(), |a, z| a + z.norm_sqr())
            .sqrt();
        let inv = T::one() / norm;
        for z in qj.iter_mut() {
            *z *= c_re(inv);
        }
    }
    ComplexMatrix::from_fn(dim, |i, j| q[j][i])
}

/// Haar-random unitary from a bare seed.
pub fn haar_unitary<T: Real>(dim: usize, seed: u64) -> ComplexMatrix<T> {
    haar_unitary_with(&mut rng_for(seed), dim)
}

/// GUE-like random Hamiltonian (G + G†)/(2√d), giving an O(1) spectral
/// range independent of dimension.
pub fn random_hamiltonian<T: Real>(
    dim: usize,
    seed: u64,
    tols: &Tolerances<T>,
) -> Hamiltonian<T> {
    let mut rng = rng_for(seed);
    let g = ginibre::<T, _>(&mut rng, dim);
    let scale = T::one() / (T::of(2.0) * T::of_usize(dim).sqrt());
    let h = g.hermitized().scale_re(scale);
    Hamiltonian::new(h, tols).expect("hermitized matrix is a valid Hamiltonian")
}

/// Random density matrix of the given rank: ρ = WW†/tr(WW†) with W a
/// dim × rank complex Gaussian block.
pub fn random_density<T: Real>(
    dim: usize,
    rank: usize,
    seed: u64,
    tols: &Tolerances<T>,
) -> DensityMatrix<T> {
    let rank = rank.clamp(1, dim);
    let mut rng = rng_for(seed);
    let mut w = vec![vec![Complex::new(T::zero(), T::zero()); rank]; dim];
    for row in w.iter_mut() {
        for entry in row.iter_mut() {
            *entry = complex_normal(&mut rng);
        }
    }
    let mut m = ComplexMatrix::zeros(dim);
    for i in 0..dim {
        for j in 0..dim {
            let mut acc = Complex::new(T::zero(), T::zero());
            for (wik, wjk) in w[i].iter().zip(w[j].iter()) {
                acc += *wik * wjk.conj();
            }
            m[(i, j)] = acc;
        }
    }
    let tr = m.trace().re;
    let m = m.scale_re(T::one() / tr);
    DensityMatrix::new(m, tols).expect("normalized Wishart matrix is a valid state")
}

/// Haar-random pure state.
pub fn random_pure<T: Real>(dim: usize, seed: u64, tols: &Tolerances<T>) -> DensityMatrix<T> {
    let mut rng = rng_for(seed);
    let amps: Vec<C<T>> = (0..dim).map(|_| complex_normal(&mut rng)).collect();
    DensityMatrix::pure(&amps, tols).expect("gaussian ket is almost surely nonzero")
}

/// Random state diagonal in the eigenbasis of H (hence incoherent when H is
/// nondegenerate; always stationary under e^{−iHt}).
pub fn random_diagonal_in<T: Real>(
    h: &Hamiltonian<T>,
    seed: u64,
    tols: &Tolerances<T>,
) -> DensityMatrix<T> {
    let d = h.dim();
    let mut rng = rng_for(seed);
    let mut weights: Vec<T> = (0..d)
        .map(|_| {
            let z: C<T> = complex_normal(&mut rng);
            z.norm_sqr()
        })
        .collect();
    let total = weights.iter().fold(T::zero(), |a, &w| a + w);
    for w in weights.iter_mut() {
        *w /= total;
    }
    let v = h.spectrum().eigenvectors();
    let mut m = ComplexMatrix::zeros(d);
    for k in 0..d {
        for i in 0..d {
            for j in 0..d {
                m[(i, j)] += v[(i, k)] * v[(j, k)].conj() * c_re(weights[k]);
            }
        }
    }
    DensityMatrix::new(m.hermitized(), tols).expect("convex mix of projectors is a valid state")
}

/// Random translationally invariant channel: an energy-conserving Stinespring
/// dilation with an environment carrying the same spectrum as H, reduced to
/// Kraus form with its harmonic certificate.
pub fn random_ti_channel<T: Real>(
    h: &Hamiltonian<T>,
    seed: u64,
    tols: &Tolerances<T>,
) -> Result<QuantumChannel<T>> {
    let env = Hamiltonian::diagonal(h.spectrum().eigenvalues(), tols);
    let dilation = random_energy_conserving_unitary(h, &env, seed, tols);
    dilation_to_channel(&dilation, h, tols)
}

/// Random CPTP channel with no symmetry: Kraus operators cut from a Haar
/// unitary on system ⊗ environment, environment dimension = system dimension.
pub fn random_channel<T: Real>(
    dim: usize,
    seed: u64,
    tols: &Tolerances<T>,
) -> Result<QuantumChannel<T>> {
    let total = dim * dim;
    let v = haar_unitary::<T>(total, seed);
    let mut kraus = Vec::with_capacity(dim);
    for l in 0..dim {
        let mut k = ComplexMatrix::zeros(dim);
        for a in 0..dim {
            for b in 0..dim {
                k[(a, b)] = v[(a * dim + l, b * dim)];
            }
        }
        kraus.push(k);
    }
    QuantumChannel::new(kraus, tols)
}
