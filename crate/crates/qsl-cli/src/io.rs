//! File formats and serialization helpers.
//!
//! Complex numbers are two-element `[re, im]` arrays and matrices are
//! row-major nested arrays, so every format is language-neutral and
//! lossless under decimal round-trips. Reports are JSON (with the effective
//! tolerances echoed) or fixed-column CSV with 17 significant digits.

use std::path::Path;

use serde::{Deserialize, Serialize};
use serde_json::{json, Value};

use qsl_core::distinguishability::Extended;
use qsl_core::matrix::ComplexMatrix;
use qsl_core::states::CompositeLabel;
use qsl_core::{DensityMatrix, Hamiltonian, Tolerances};

use crate::CliError;

/// Row-major complex matrix as `[re, im]` pairs.
pub type MatrixJson = Vec<Vec<[f64; 2]>>;

/// A state/Hamiltonian problem instance.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct ProblemFile {
    /// Hermitian Hamiltonian, row-major.
    pub hamiltonian: MatrixJson,
    /// Density matrix, row-major.
    pub state: MatrixJson,
    /// Tensor-factor dimensions, when the state lives on a composite space.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub label: Option<Vec<usize>>,
    /// Free-form provenance (name, seed, …).
    #[serde(skip_serializing_if = "Option::is_none")]
    pub metadata: Option<Value>,
}

/// A channel in Kraus form, optionally with harmonic frequencies.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct ChannelFile {
    /// Kraus operators, row-major.
    pub kraus: Vec<MatrixJson>,
    /// Harmonic frequencies certifying translation invariance.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub omega: Option<Vec<f64>>,
    /// Free-form provenance and residual diagnostics.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub metadata: Option<Value>,
}

/// An energy-conserving Stinespring dilation.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct DilationFile {
    /// Environment Hamiltonian, row-major.
    pub env_hamiltonian: MatrixJson,
    /// Joint unitary on system ⊗ environment, row-major.
    pub joint_unitary: MatrixJson,
    /// Index of the environment's initial eigenstate.
    pub env_initial_index: usize,
    /// Sizes of the conserved total-energy blocks.
    pub block_sizes: Vec<usize>,
    /// Free-form provenance.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub metadata: Option<Value>,
}

/// Partial tolerance overrides, applied on top of the defaults.
#[derive(Clone, Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ConfigFile {
    pub herm: Option<f64>,
    pub clamp: Option<f64>,
    pub psd: Option<f64>,
    pub trace_one: Option<f64>,
    pub supp: Option<f64>,
    pub gap: Option<f64>,
    pub incoherent: Option<f64>,
    pub perp_predicate: Option<f64>,
    pub perp_epsilon: Option<f64>,
    pub cross: Option<f64>,
    pub zero_div: Option<f64>,
    pub completeness: Option<f64>,
    pub covariance: Option<f64>,
    pub harmonic: Option<f64>,
    pub kraus_incoherence: Option<f64>,
    pub t_tol: Option<f64>,
}

impl ConfigFile {
    /// Defaults overlaid with whatever the file set.
    pub fn tolerances(&self) -> Tolerances {
        let mut t = Tolerances::default();
        macro_rules! apply {
            ($($field:ident),*) => {
                $(if let Some(v) = self.$field { t.$field = v; })*
            };
        }
        apply!(
            herm, clamp, psd, trace_one, supp, gap, incoherent, perp_predicate, perp_epsilon,
            cross, zero_div, completeness, covariance, harmonic, kraus_incoherence, t_tol
        );
        t
    }
}

/// Loads tolerance overrides; `None` path means defaults.
pub fn load_tolerances(path: Option<&Path>) -> Result<Tolerances, CliError> {
    match path {
        None => Ok(Tolerances::default()),
        Some(p) => {
            let cfg: ConfigFile = read_json(p)?;
            Ok(cfg.tolerances())
        }
    }
}

/// Effective tolerances as a JSON object, echoed into every JSON report.
pub fn tolerances_json(t: &Tolerances) -> Value {
    json!({
        "herm": t.herm,
        "clamp": t.clamp,
        "psd": t.psd,
        "trace_one": t.trace_one,
        "supp": t.supp,
        "gap": t.gap,
        "incoherent": t.incoherent,
        "perp_predicate": t.perp_predicate,
        "perp_epsilon": t.perp_epsilon,
        "cross": t.cross,
        "zero_div": t.zero_div,
        "completeness": t.completeness,
        "covariance": t.covariance,
        "harmonic": t.harmonic,
        "kraus_incoherence": t.kraus_incoherence,
        "t_tol": t.t_tol,
    })
}

/// One-line echo of the effective tolerances for CSV outputs (comment
/// syntax would corrupt strict CSV, so this goes to stderr).
pub fn tolerances_echo(t: &Tolerances) -> String {
    serde_json::to_string(&tolerances_json(t)).expect("tolerance echo serializes")
}

pub fn read_json<T: serde::de::DeserializeOwned>(path: &Path) -> Result<T, CliError> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| CliError::Parse(format!("cannot read {}: {e}", path.display())))?;
    serde_json::from_str(&text)
        .map_err(|e| CliError::Parse(format!("cannot parse {}: {e}", path.display())))
}

pub fn matrix_to_json(m: &ComplexMatrix<f64>) -> MatrixJson {
    (0..m.dim())
        .map(|i| (0..m.dim()).map(|j| [m[(i, j)].re, m[(i, j)].im]).collect())
        .collect()
}

pub fn matrix_from_json(rows: &MatrixJson, what: &str) -> Result<ComplexMatrix<f64>, CliError> {
    let dim = rows.len();
    if dim == 0 || rows.iter().any(|r| r.len() != dim) {
        return Err(CliError::Parse(format!("{what}: matrix must be square and nonempty")));
    }
    let data = rows
        .iter()
        .flat_map(|r| r.iter().map(|&[re, im]| num_complex::Complex::new(re, im)))
        .collect();
    ComplexMatrix::from_vec(dim, data).map_err(CliError::Validation)
}

/// A parsed and validated problem instance. A composite label in the file
/// is validated against the state dimension, then discarded — no command
/// needs the factorization itself.
pub struct Problem {
    pub hamiltonian: Hamiltonian,
    pub state: DensityMatrix,
    pub state_id: String,
}

pub fn load_problem(path: &Path, tols: &Tolerances) -> Result<Problem, CliError> {
    let file: ProblemFile = read_json(path)?;
    let h_m = matrix_from_json(&file.hamiltonian, "hamiltonian")?;
    let s_m = matrix_from_json(&file.state, "state")?;
    let hamiltonian = Hamiltonian::new(h_m, tols).map_err(CliError::Validation)?;
    let state = DensityMatrix::new(s_m, tols).map_err(CliError::Validation)?;
    if state.dim() != hamiltonian.dim() {
        return Err(CliError::Validation(qsl_core::Error::DimensionMismatch {
            left: state.dim(),
            right: hamiltonian.dim(),
        }));
    }
    if let Some(dims) = file.label.clone() {
        CompositeLabel::new(dims, state.dim()).map_err(CliError::Validation)?;
    }
    let state_id = file
        .metadata
        .as_ref()
        .and_then(|m| m.get("name"))
        .and_then(Value::as_str)
        .unwrap_or("state")
        .to_string();
    Ok(Problem {
        hamiltonian,
        state,
        state_id,
    })
}

/// Accepts either a bare matrix file or a problem file (using its
/// `hamiltonian` field).
pub fn load_hamiltonian(path: &Path, tols: &Tolerances) -> Result<Hamiltonian, CliError> {
    let value: Value = read_json(path)?;
    let rows_value = match &value {
        Value::Object(map) => map
            .get("hamiltonian")
            .cloned()
            .ok_or_else(|| CliError::Parse(format!("{}: no \"hamiltonian\" field", path.display())))?,
        other => other.clone(),
    };
    let rows: MatrixJson = serde_json::from_value(rows_value)
        .map_err(|e| CliError::Parse(format!("{}: {e}", path.display())))?;
    let m = matrix_from_json(&rows, "hamiltonian")?;
    Hamiltonian::new(m, tols).map_err(CliError::Validation)
}

/// ∞-aware JSON encoding: finite values as numbers, +∞ as the string
/// `"inf"` (JSON has no infinity literal).
pub fn extended_json(x: &Extended<f64>) -> Value {
    match x {
        Extended::Finite(v) => json!(v),
        Extended::Infinite => json!("inf"),
    }
}

/// ∞/N-A-aware CSV cell with 17 significant digits.
pub fn csv_cell(x: Option<f64>) -> String {
    match x {
        Some(v) => format!("{v:.17e}"),
        None => "inf".to_string(),
    }
}

pub fn write_output(out: Option<&Path>, content: &str) -> Result<(), CliError> {
    match out {
        Some(path) => std::fs::write(path, content)
            .map_err(|e| CliError::Parse(format!("cannot write {}: {e}", path.display()))),
        None => {
            print!("{content}");
            Ok(())
        }
    }
}

pub fn write_json_file(path: &Path, value: &impl Serialize) -> Result<(), CliError> {
    let text = serde_json::to_string_pretty(value)
        .map_err(|e| CliError::Parse(format!("serialization failed: {e}")))?;
    std::fs::write(path, text + "\n")
        .map_err(|e| CliError::Parse(format!("cannot write {}: {e}", path.display())))
}
