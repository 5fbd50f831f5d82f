//! Minimal end-to-end tour: build a state, compute its measures, solve the
//! orthogonalization time and compare it against the speed-limit bounds.
//!
//! Run with `cargo run --example quickstart`.

use num_complex::Complex64;
use qsl_core::asymmetry::measure_report;
use qsl_core::bounds::{bound_report, BoundSettings};
use qsl_core::{DensityMatrix, Hamiltonian, Matrix, Tolerances};

fn main() -> qsl_core::Result<()> {
    let tols = Tolerances::default();

    // Qubit with energy splitting 1 and the maximally coherent state |+⟩.
    let h = Hamiltonian::diagonal(&[0.0, 1.0], &tols);
    let plus = DensityMatrix::new(Matrix::from_fn(2, |_, _| Complex64::new(0.5, 0.0)), &tols)?;

    let measures = measure_report(&plus, &h, &[0.5], &tols)?;
    println!("F_H  = {:.6}", measures.f_h);
    println!("S_H  = {:.6}", measures.skew);
    println!("dE   = {:.6}", measures.energy.uncertainty);

    let bounds = bound_report(&plus, &h, &BoundSettings::default(), &tols)?;
    println!("tau_perp  = {:?}", bounds.tau_perp.t_star());
    println!("MT bound  = {}", bounds.mt_bound);
    println!("ML bound  = {}", bounds.ml_bound);
    Ok(())
}
