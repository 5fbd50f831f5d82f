//! Implementations of the subcommands: load, compute, serialize.

use std::path::Path;

use serde_json::{json, Value};

use qsl_core::asymmetry::{energy_stats, f_measure, measure_report, skew_information};
use qsl_core::bounds::{bound_report, BoundSettings};
use qsl_core::channels::{
    dilation_to_channel, harmonic_residual, random_energy_conserving_unitary, verify_incoherent,
    verify_ti,
};
use qsl_core::distinguishability::Extended;
use qsl_core::evolution::{orbit_scan, solve_tau, TauResult, TauStatus};
use qsl_core::matrix::ComplexMatrix;
use qsl_core::sampling::random_hamiltonian;
use qsl_core::suites::{
    convexity_suite, measure_monotonicity_suite, speed_monotonicity_suite,
    speed_quasi_convexity_suite,
};
use qsl_core::{Measure, QuantumChannel, Tolerances};

use crate::io::{
    csv_cell, extended_json, load_hamiltonian, load_problem, matrix_from_json, matrix_to_json,
    tolerances_echo, tolerances_json, write_json_file, write_output, ChannelFile, DilationFile,
};
use crate::{CliError, Format};

fn echo_tolerances_for_csv(tols: &Tolerances) {
    eprintln!("tolerances: {}", tolerances_echo(tols));
}

fn json_output(out: Option<&Path>, value: &Value) -> Result<(), CliError> {
    let text = serde_json::to_string_pretty(value)
        .map_err(|e| CliError::Parse(format!("serialization failed: {e}")))?;
    write_output(out, &(text + "\n"))
}

pub fn cmd_measures(
    input: &Path,
    orders: &[f64],
    format: Format,
    out: Option<&Path>,
    tols: &Tolerances,
) -> Result<(), CliError> {
    let problem = load_problem(input, tols)?;
    let report = measure_report(&problem.state, &problem.hamiltonian, orders, tols)
        .map_err(CliError::Validation)?;
    match format {
        Format::Json => {
            let dyson: Vec<Value> = report
                .dyson
                .iter()
                .map(|(s, v)| json!({"order": s, "value": v}))
                .collect();
            json_output(
                out,
                &json!({
                    "state_id": problem.state_id,
                    "dim": problem.state.dim(),
                    "purity": problem.state.purity(),
                    "average_energy": report.energy.average,
                    "uncertainty": report.energy.uncertainty,
                    "min_occupied": report.energy.min_occupied,
                    "max_occupied": report.energy.max_occupied,
                    "a_min": report.a_min,
                    "a_max": report.a_max,
                    "f_h": report.f_h,
                    "skew": report.skew,
                    "dyson": dyson,
                    "tolerances": tolerances_json(tols),
                }),
            )
        }
        Format::Csv => {
            let mut header =
                "state_id,dim,purity,average,dE,a_min,a_max,F_H,S_H".to_string();
            let mut row = format!(
                "{},{},{},{},{},{},{},{},{}",
                problem.state_id,
                problem.state.dim(),
                csv_cell(Some(problem.state.purity())),
                csv_cell(Some(report.energy.average)),
                csv_cell(Some(report.energy.uncertainty)),
                csv_cell(Some(report.a_min)),
                csv_cell(Some(report.a_max)),
                csv_cell(Some(report.f_h)),
                csv_cell(Some(report.skew)),
            );
            for (s, v) in &report.dyson {
                header.push_str(&format!(",dyson_{s}"));
                row.push_str(&format!(",{}", csv_cell(Some(*v))));
            }
            echo_tolerances_for_csv(tols);
            write_output(out, &format!("{header}\n{row}\n"))
        }
    }
}

pub fn parse_measure(text: &str) -> Result<Measure, CliError> {
    match text {
        "trace" => Ok(Measure::TraceDistance),
        "infidelity" => Ok(Measure::Infidelity),
        "perp" => Ok(Measure::Perp),
        other => {
            if let Some(order_text) = other.strip_prefix("renyi:") {
                let s: f64 = order_text.parse().map_err(|_| {
                    CliError::Parse(format!("cannot parse Rényi order in {other:?}"))
                })?;
                Measure::renyi(s).map_err(CliError::Validation)
            } else {
                Err(CliError::Parse(format!(
                    "unknown measure {other:?}; expected trace | renyi:<s> | infidelity | perp"
                )))
            }
        }
    }
}

fn tau_json(tau: &TauResult<f64>) -> Value {
    match tau.status {
        TauStatus::Reached {
            t_star,
            bracket_width,
        } => json!({
            "status": "reached",
            "t_star": t_star,
            "bracket_width": bracket_width,
        }),
        TauStatus::UnreachedWithinHorizon => json!({
            "status": "unreached_within_horizon",
            "t_star": Value::Null,
            "bracket_width": Value::Null,
        }),
    }
}

fn tau_csv_cells(tau: &TauResult<f64>) -> (String, String, String) {
    match tau.status {
        TauStatus::Reached {
            t_star,
            bracket_width,
        } => (
            "reached".to_string(),
            csv_cell(Some(t_star)),
            csv_cell(Some(bracket_width)),
        ),
        TauStatus::UnreachedWithinHorizon => (
            "unreached_within_horizon".to_string(),
            "unreached".to_string(),
            "unreached".to_string(),
        ),
    }
}

#[allow(clippy::too_many_arguments)]
pub fn cmd_tau(
    input: &Path,
    measure_text: &str,
    epsilon: f64,
    horizon: Option<f64>,
    t_tol: Option<f64>,
    format: Format,
    out: Option<&Path>,
    tols: &Tolerances,
) -> Result<(), CliError> {
    let problem = load_problem(input, tols)?;
    let measure = parse_measure(measure_text)?;
    let tau = solve_tau(
        &problem.state,
        &problem.hamiltonian,
        measure,
        epsilon,
        horizon,
        t_tol,
        tols,
    )
    .map_err(CliError::Validation)?;
    match format {
        Format::Json => {
            let mut value = tau_json(&tau);
            let obj = value.as_object_mut().expect("tau report is an object");
            obj.insert("state_id".into(), json!(problem.state_id));
            obj.insert("measure".into(), json!(tau.measure.to_string()));
            obj.insert("epsilon_effective".into(), json!(tau.epsilon));
            obj.insert("horizon".into(), json!(tau.horizon));
            obj.insert("base_step".into(), json!(tau.base_step));
            obj.insert("tolerances".into(), tolerances_json(tols));
            json_output(out, &value)
        }
        Format::Csv => {
            let (status, t_star, bracket) = tau_csv_cells(&tau);
            echo_tolerances_for_csv(tols);
            write_output(
                out,
                &format!(
                    "state_id,measure,epsilon,horizon,status,t_star,bracket_width\n{},{},{},{},{status},{t_star},{bracket}\n",
                    problem.state_id,
                    tau.measure,
                    csv_cell(Some(tau.epsilon)),
                    csv_cell(Some(tau.horizon)),
                ),
            )
        }
    }
}

fn option_json(x: Option<f64>) -> Value {
    match x {
        Some(v) => json!(v),
        None => Value::Null,
    }
}

fn ext_csv(x: &Extended<f64>) -> String {
    csv_cell(x.finite())
}

fn tightness_csv(x: Option<f64>) -> String {
    match x {
        Some(v) => format!("{v:.17e}"),
        None => "na".to_string(),
    }
}

#[allow(clippy::too_many_arguments)]
pub fn cmd_bounds(
    input: &Path,
    epsilon_trace: f64,
    epsilon_renyi: f64,
    horizon: Option<f64>,
    t_tol: Option<f64>,
    format: Format,
    out: Option<&Path>,
    tols: &Tolerances,
) -> Result<(), CliError> {
    let problem = load_problem(input, tols)?;
    let settings = BoundSettings {
        epsilon_trace,
        epsilon_renyi,
        horizon,
        t_tol,
    };
    let report = bound_report(&problem.state, &problem.hamiltonian, &settings, tols)
        .map_err(CliError::Validation)?;
    let stats = energy_stats(&problem.state, &problem.hamiltonian, tols)
        .map_err(CliError::Validation)?;
    let f_h = f_measure(&problem.state, &problem.hamiltonian).map_err(CliError::Validation)?;
    let skew =
        skew_information(&problem.state, &problem.hamiltonian).map_err(CliError::Validation)?;

    match format {
        Format::Json => json_output(
            out,
            &json!({
                "state_id": problem.state_id,
                "dim": problem.state.dim(),
                "purity": problem.state.purity(),
                "dE": stats.uncertainty,
                "F_H": f_h,
                "S_H": skew,
                "epsilon_trace": epsilon_trace,
                "epsilon_renyi": epsilon_renyi,
                "tau_perp": tau_json(&report.tau_perp),
                "tau_l1": tau_json(&report.tau_l1),
                "tau_renyi": tau_json(&report.tau_renyi),
                "mt_bound": extended_json(&report.mt_bound),
                "ml_bound": extended_json(&report.ml_bound),
                "ml_max_variant": extended_json(&report.ml_max_variant),
                "l1_bound": extended_json(&report.l1_bound),
                "renyi_bound": extended_json(&report.renyi_bound),
                "tightness": {
                    "mt": option_json(report.mt_tightness),
                    "ml": option_json(report.ml_tightness),
                    "ml_max": option_json(report.ml_max_tightness),
                    "l1": option_json(report.l1_tightness),
                    "renyi": option_json(report.renyi_tightness),
                },
                "tolerances": tolerances_json(tols),
            }),
        ),
        Format::Csv => {
            let (_, tau_perp, _) = tau_csv_cells(&report.tau_perp);
            let (_, tau_l1, _) = tau_csv_cells(&report.tau_l1);
            let (_, tau_renyi, _) = tau_csv_cells(&report.tau_renyi);
            echo_tolerances_for_csv(tols);
            write_output(
                out,
                &format!(
                    "state_id,dim,purity,dE,F_H,S_H,tau_perp,tau_l1,tau_renyi,mt,ml,ml_max,l1,renyi,tightness_mt,tightness_ml,tightness_ml_max,tightness_l1,tightness_renyi\n\
                     {},{},{},{},{},{},{tau_perp},{tau_l1},{tau_renyi},{},{},{},{},{},{},{},{},{},{}\n",
                    problem.state_id,
                    problem.state.dim(),
                    csv_cell(Some(problem.state.purity())),
                    csv_cell(Some(stats.uncertainty)),
                    csv_cell(Some(f_h)),
                    csv_cell(Some(skew)),
                    ext_csv(&report.mt_bound),
                    ext_csv(&report.ml_bound),
                    ext_csv(&report.ml_max_variant),
                    ext_csv(&report.l1_bound),
                    ext_csv(&report.renyi_bound),
                    tightness_csv(report.mt_tightness),
                    tightness_csv(report.ml_tightness),
                    tightness_csv(report.ml_max_tightness),
                    tightness_csv(report.l1_tightness),
                    tightness_csv(report.renyi_tightness),
                ),
            )
        }
    }
}

pub fn cmd_orbit(
    input: &Path,
    measure_text: &str,
    t_max: f64,
    steps: usize,
    out: Option<&Path>,
    tols: &Tolerances,
) -> Result<(), CliError> {
    if steps < 2 {
        return Err(CliError::Invalid(format!(
            "orbit needs at least 2 steps, got {steps}"
        )));
    }
    if !t_max.is_finite() || t_max <= 0.0 {
        return Err(CliError::Invalid(format!(
            "orbit needs a positive t-max, got {t_max}"
        )));
    }
    let problem = load_problem(input, tols)?;
    let measure = parse_measure(measure_text)?;
    let times: Vec<f64> = (0..steps)
        .map(|i| t_max * i as f64 / (steps - 1) as f64)
        .collect();
    let sample = orbit_scan(&problem.state, &problem.hamiltonian, &measure, &times, tols)
        .map_err(CliError::Validation)?;
    let mut text = String::from("t,D\n");
    for (t, v) in sample.times.iter().zip(&sample.values) {
        let cell = match v.finite() {
            Some(value) => format!("{value:.14e}"),
            None => "inf".to_string(),
        };
        text.push_str(&format!("{t:.14e},{cell}\n"));
    }
    echo_tolerances_for_csv(tols);
    write_output(out, &text)
}

pub fn cmd_channel_random(
    dims: usize,
    seed: u64,
    out_dir: &Path,
    tols: &Tolerances,
) -> Result<(), CliError> {
    if dims < 2 {
        return Err(CliError::Invalid(format!(
            "channel sampling needs dims >= 2, got {dims}"
        )));
    }
    let h_sys = random_hamiltonian::<f64>(dims, seed, tols);
    let h_env = random_hamiltonian::<f64>(dims, seed.wrapping_add(1), tols);
    let dilation = random_energy_conserving_unitary(&h_sys, &h_env, seed, tols);
    let channel = dilation_to_channel(&dilation, &h_sys, tols).map_err(CliError::Validation)?;

    let dim = channel.dim();
    let mut completeness = ComplexMatrix::zeros(dim);
    for k in channel.kraus() {
        completeness = &completeness + &k.adjoint().matmul(k);
    }
    let completeness_residual = completeness.max_abs_diff(&ComplexMatrix::identity(dim));
    let times = [0.37, 1.0, 2.7, 7.3];
    let covariance_residual =
        verify_ti(&channel, &h_sys, &times).map_err(CliError::Validation)?;
    let harmonic = harmonic_residual(&channel, &h_sys, &times).map_err(CliError::Validation)?;

    std::fs::create_dir_all(out_dir)
        .map_err(|e| CliError::Parse(format!("cannot create {}: {e}", out_dir.display())))?;

    let channel_file = ChannelFile {
        kraus: channel.kraus().iter().map(matrix_to_json).collect(),
        omega: channel.certificate().map(<[f64]>::to_vec),
        metadata: Some(json!({
            "seed": seed,
            "dim": dims,
            "system_hamiltonian": matrix_to_json(h_sys.matrix()),
            "completeness_residual": completeness_residual,
            "covariance_residual": covariance_residual,
            "harmonic_residual": harmonic,
        })),
    };
    let dilation_file = DilationFile {
        env_hamiltonian: matrix_to_json(dilation.env_hamiltonian.matrix()),
        joint_unitary: matrix_to_json(&dilation.joint_unitary),
        env_initial_index: dilation.env_initial_index,
        block_sizes: dilation.block_sizes.clone(),
        metadata: Some(json!({"seed": seed, "system_dim": dims})),
    };
    let channel_path = out_dir.join("channel.json");
    let dilation_path = out_dir.join("dilation.json");
    let hamiltonian_path = out_dir.join("hamiltonian.json");
    write_json_file(&channel_path, &channel_file)?;
    write_json_file(&dilation_path, &dilation_file)?;
    write_json_file(&hamiltonian_path, &matrix_to_json(h_sys.matrix()))?;
    println!(
        "wrote {}, {} and {} (completeness residual {completeness_residual:.3e})",
        channel_path.display(),
        dilation_path.display(),
        hamiltonian_path.display()
    );
    Ok(())
}

pub fn cmd_channel_verify(
    channel_path: &Path,
    hamiltonian_path: &Path,
    times: Option<&[f64]>,
    out: Option<&Path>,
    tols: &Tolerances,
) -> Result<(), CliError> {
    let file: ChannelFile = crate::io::read_json(channel_path)?;
    let kraus = file
        .kraus
        .iter()
        .map(|m| matrix_from_json(m, "kraus"))
        .collect::<Result<Vec<_>, _>>()?;
    let channel = match file.omega {
        Some(omega) => {
            QuantumChannel::with_certificate(kraus, omega, tols).map_err(CliError::Validation)?
        }
        None => QuantumChannel::new(kraus, tols).map_err(CliError::Validation)?,
    };
    let h = load_hamiltonian(hamiltonian_path, tols)?;

    let default_times = [
        0.37,
        1.0,
        2.7,
        std::f64::consts::PI * std::f64::consts::SQRT_2,
        7.3,
    ];
    let times = times.unwrap_or(&default_times);

    let covariance = verify_ti(&channel, &h, times).map_err(CliError::Validation)?;
    let covariance_pass = covariance <= tols.covariance;
    let mut overall = covariance_pass;

    let (harmonic, incoherence) = if channel.certificate().is_some() {
        let harm = harmonic_residual(&channel, &h, times).map_err(CliError::Validation)?;
        let inc = verify_incoherent(&channel, &h).map_err(CliError::Validation)?;
        overall &= harm <= tols.harmonic && inc <= tols.kraus_incoherence;
        (
            json!({"residual": harm, "threshold": tols.harmonic, "pass": harm <= tols.harmonic}),
            json!({
                "residual": inc,
                "threshold": tols.kraus_incoherence,
                "pass": inc <= tols.kraus_incoherence,
            }),
        )
    } else {
        (json!("skipped: no certificate"), json!("skipped: no certificate"))
    };

    json_output(
        out,
        &json!({
            "covariance": {
                "residual": covariance,
                "threshold": tols.covariance,
                "pass": covariance_pass,
            },
            "harmonic": harmonic,
            "incoherence": incoherence,
            "overall": if overall { "PASS" } else { "FAIL" },
            "tolerances": tolerances_json(tols),
        }),
    )?;
    if overall {
        Ok(())
    } else {
        Err(CliError::Violation(
            "channel verification failed (see report)".to_string(),
        ))
    }
}

pub fn cmd_monotone_suite(
    seed: u64,
    trials: usize,
    dims: &[usize],
    inject_non_ti: bool,
    tols: &Tolerances,
) -> Result<(), CliError> {
    if dims.is_empty() || dims.iter().any(|&d| d < 2) {
        return Err(CliError::Invalid(
            "suite dims must all be >= 2".to_string(),
        ));
    }
    let reports = [
        measure_monotonicity_suite(trials, dims, seed, inject_non_ti, tols),
        speed_monotonicity_suite(trials, dims, seed.wrapping_add(1), tols),
        speed_quasi_convexity_suite(trials, dims, seed.wrapping_add(2), tols),
        convexity_suite(trials, dims, seed.wrapping_add(3), tols),
    ];
    let mut violations = 0;
    for report in &reports {
        println!("{report}");
        violations += report.violations;
    }
    if violations == 0 {
        println!("monotone-suite: all {} properties passed", reports.len());
        Ok(())
    } else {
        Err(CliError::Violation(format!(
            "monotone-suite: {violations} trial(s) violated their property"
        )))
    }
}
