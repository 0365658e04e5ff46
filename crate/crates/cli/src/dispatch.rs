//! Command execution and output artifacts.

use std::fs;
use std::path::{Path, PathBuf};
use std::sync::atomic::{AtomicUsize, Ordering};
use std::sync::Mutex;
use std::thread;

use serde::{Deserialize, Serialize};

use crate::calibration::Calibration;
use crate::config::{Command, RunConfig, SweepParameter};
use crate::error::{CliError, CliResult, EXIT_CHECK_FAILED, EXIT_OK};
use crate::report;
use boussinesq_core::harness::{
    approximation_experiment, assess, run_checks_streaming, run_inequality_check, uniqueness_experiment,
    write_records_csv, ApproximationTable, CheckContext, CheckId, EstimateRecord, RunSummary, TwinRunResult,
};
use boussinesq_core::solver::simulate;
use boussinesq_core::spectral::snapshot::{write_snapshot, SnapshotMeta};
use boussinesq_core::spectral::SpectralField;

/// Environment variable overriding the root of relative output directories.
pub const OUTPUT_ROOT_ENV: &str = "BOUSSINESQ_OUTPUT_ROOT";

#[derive(Clone, Debug, Default)]
pub struct RunOptions {
    /// Worker threads for sweeps.
    pub workers: usize,
    /// Directory of the config file, for relative snapshot paths.
    pub config_dir: Option<PathBuf>,
    /// Root for relative output directories.
    pub output_root: Option<PathBuf>,
    /// Input and output directories of `report`.
    pub report_input: Option<PathBuf>,
    pub report_output: Option<PathBuf>,
}

impl RunOptions {
    /// Options with the output root taken from the environment.
    pub fn from_env() -> Self {
        RunOptions {
            workers: 1,
            output_root: std::env::var_os(OUTPUT_ROOT_ENV).map(PathBuf::from),
            ..RunOptions::default()
        }
    }
}

#[derive(Clone, Debug)]
pub struct Outcome {
    pub exit_code: u8,
    pub summaries: Vec<PathBuf>,
    pub message: String,
}

/// Records and experiment results of one verification.
#[derive(Clone, Debug)]
pub struct CheckOutcome {
    pub records: Vec<EstimateRecord>,
    pub uniqueness: Option<TwinRunResult>,
    pub approximation: Option<ApproximationTable>,
}

fn output_dir(config: &RunConfig, opts: &RunOptions) -> PathBuf {
    match &opts.output_root {
        Some(root) if config.output_dir.is_relative() => root.join(&config.output_dir),
        _ => config.output_dir.clone(),
    }
}

fn create_dir(dir: &Path) -> CliResult<()> {
    fs::create_dir_all(dir).map_err(|e| CliError::io(dir, e))
}

fn initial_fields(config: &RunConfig, base: Option<&Path>) -> CliResult<(SpectralField, SpectralField)> {
    let data = config
        .initial_data
        .as_ref()
        .ok_or_else(|| CliError::config("initial_data", "required for this command"))?;
    Ok(data.build(config.grid()?, config.seed, base)?)
}

fn context(config: &RunConfig) -> CliResult<CheckContext> {
    let mut ctx = CheckContext::new(
        config.family()?,
        config.gamma_spec()?,
        config.exponents,
        config.solver.clone(),
        config.seed,
    )?;
    if let Some(j) = config.chemin_band {
        ctx.chemin_band = j;
    }
    Ok(ctx)
}

/// Checks selected by the config: the listed ones, or every streaming check.
pub fn selected_checks(config: &RunConfig) -> Vec<CheckId> {
    if config.checks.is_empty() {
        CheckId::ALL.iter().copied().filter(|c| !c.needs_trajectory()).collect()
    } else {
        config.checks.clone()
    }
}

/// Runs every selected check plus the configured experiments.
pub fn evaluate_checks(config: &RunConfig, base: Option<&Path>) -> CliResult<CheckOutcome> {
    let ctx = context(config)?;
    let (omega0, rho0) = initial_fields(config, base)?;
    let ids = selected_checks(config);
    let streaming: Vec<CheckId> = ids.iter().copied().filter(|c| !c.needs_trajectory()).collect();
    let (mut records, _) = run_checks_streaming(&omega0, &rho0, &streaming, &ctx)?;
    if ids.iter().any(|c| c.needs_trajectory()) {
        let traj = simulate(&omega0, &rho0, &config.solver)?;
        for id in ids.iter().filter(|c| c.needs_trajectory()) {
            records.push(run_inequality_check(*id, &traj, &ctx)?);
        }
    }
    // Keep the configured order.
    records.sort_by_key(|r| ids.iter().position(|id| id.as_str() == r.check_id));
    let uniqueness = match &config.uniqueness {
        Some(u) => Some(uniqueness_experiment(
            &omega0,
            &rho0,
            &u.perturbation,
            &config.solver,
            &ctx.family,
            &ctx.gamma,
        )?),
        None => None,
    };
    let approximation = match &config.approximation {
        Some(a) => Some(approximation_experiment(
            &omega0,
            &rho0,
            &a.m_values,
            &config.solver,
            &ctx.family,
            &ctx.gamma,
        )?),
        None => None,
    };
    Ok(CheckOutcome {
        records,
        uniqueness,
        approximation,
    })
}

fn base_summary(config: &RunConfig) -> RunSummary {
    RunSummary {
        command: config.command.as_str().to_string(),
        config_hash: config.hash(),
        seed: config.seed,
        grid_n: config.n,
        kappa: config.solver.kappa,
        gamma: config.gamma.clone(),
        p0: config.exponents.p0,
        p1: config.exponents.p1,
        csv: None,
        checks: Vec::new(),
        calibration_applied: false,
        snapshots: Vec::new(),
        uniqueness: None,
        approximation: None,
        sweep_point: None,
        passed: true,
    }
}

fn write_config_copy(config: &RunConfig, dir: &Path) -> CliResult<()> {
    let path = dir.join(format!("config-{}.json", config.short_hash()));
    fs::write(&path, config.to_json() + "\n").map_err(|e| CliError::io(&path, e))
}

fn run_verify(config: &RunConfig, dir: &Path, opts: &RunOptions, sweep_point: Option<(String, f64)>) -> CliResult<(RunSummary, PathBuf)> {
    create_dir(dir)?;
    let outcome = evaluate_checks(config, opts.config_dir.as_deref())?;
    let hash = config.hash();
    let short = config.short_hash();
    let csv_name = format!("records-{short}.csv");
    write_records_csv(&dir.join(&csv_name), &outcome.records)?;
    let calibration = Calibration::bundled();
    let mut summary = base_summary(config);
    summary.command = Command::Verify.as_str().to_string();
    summary.csv = Some(csv_name);
    summary.calibration_applied = hash == calibration.reference_hash;
    summary.checks = outcome
        .records
        .iter()
        .map(|r| assess(r, calibration.constant_for(&hash, &r.check_id)))
        .collect();
    summary.sweep_point = sweep_point;
    let approx_ok = outcome
        .approximation
        .as_ref()
        .is_none_or(|a| a.slope.is_none() || (a.slope_ok && a.cauchy_monotone));
    let twin_ok = outcome.uniqueness.as_ref().is_none_or(|u| u.dominated());
    summary.passed = summary.checks.iter().all(|c| c.passed) && approx_ok && twin_ok;
    summary.uniqueness = outcome.uniqueness;
    summary.approximation = outcome.approximation;
    write_config_copy(config, dir)?;
    let path = dir.join(format!("summary-{short}.json"));
    summary.write(&path)?;
    Ok((summary, path))
}

fn run_simulate(config: &RunConfig, dir: &Path, opts: &RunOptions) -> CliResult<(RunSummary, PathBuf)> {
    create_dir(dir)?;
    let (omega0, rho0) = initial_fields(config, opts.config_dir.as_deref())?;
    let traj = simulate(&omega0, &rho0, &config.solver)?;
    let hash = config.hash();
    let short = config.short_hash();
    let mut summary = base_summary(config);
    for (label, state) in [("initial", traj.initial()), ("final", traj.last())] {
        for (name, field) in [("omega", &state.omega), ("rho", &state.rho)] {
            let file = format!("{name}-{short}-{label}.f64");
            let meta = SnapshotMeta {
                n: config.n,
                period: std::f64::consts::TAU,
                field: name.to_string(),
                time: state.t,
                config_hash: Some(hash.clone()),
            };
            write_snapshot(&dir.join(&file), field, &meta)?;
            summary.snapshots.push(file);
        }
    }
    write_config_copy(config, dir)?;
    let path = dir.join(format!("summary-{short}.json"));
    summary.write(&path)?;
    Ok((summary, path))
}

/// Member configuration of a sweep.
pub fn sweep_member(config: &RunConfig, parameter: SweepParameter, value: f64) -> CliResult<RunConfig> {
    let mut c = config.clone();
    c.command = Command::Verify;
    c.sweep = None;
    let integer = |v: f64| {
        if v >= 0.0 && v.fract() == 0.0 {
            Ok(v as u64)
        } else {
            Err(CliError::config("sweep.values", format!("{v} is not a nonnegative integer")))
        }
    };
    match parameter {
        SweepParameter::Kappa => c.solver.kappa = value,
        SweepParameter::Nu => c.solver.nu = value,
        SweepParameter::Dt => c.solver.dt = value,
        SweepParameter::TEnd => c.solver.t_end = value,
        SweepParameter::N => c.n = integer(value)? as usize,
        SweepParameter::Seed => c.seed = integer(value)?,
    }
    c.validate()?;
    Ok(c)
}

#[derive(Clone, Debug, Serialize, Deserialize)]
struct SweepIndex {
    config_hash: String,
    parameter: String,
    members: Vec<String>,
    passed: bool,
}

fn run_sweep(config: &RunConfig, dir: &Path, opts: &RunOptions) -> CliResult<(bool, Vec<PathBuf>)> {
    let sweep = config.sweep.as_ref().ok_or_else(|| CliError::config("sweep", "required for sweep"))?;
    create_dir(dir)?;
    let members = sweep
        .values
        .iter()
        .map(|v| sweep_member(config, sweep.parameter, *v))
        .collect::<CliResult<Vec<_>>>()?;
    let next = AtomicUsize::new(0);
    let results: Mutex<Vec<Option<CliResult<(RunSummary, PathBuf)>>>> =
        Mutex::new((0..members.len()).map(|_| None).collect());
    let workers = opts.workers.clamp(1, members.len());
    thread::scope(|s| {
        for _ in 0..workers {
            s.spawn(|| loop {
                let i = next.fetch_add(1, Ordering::SeqCst);
                if i >= members.len() {
                    break;
                }
                let member_dir = dir.join(format!("sweep-{}-{i}", sweep.parameter.as_str()));
                let point = Some((sweep.parameter.as_str().to_string(), sweep.values[i]));
                let r = run_verify(&members[i], &member_dir, opts, point);
                results.lock().expect("results lock")[i] = Some(r);
            });
        }
    });
    let mut paths = Vec::new();
    let mut passed = true;
    for r in results.into_inner().expect("results lock") {
        let (summary, path) = r.expect("every member ran")?;
        passed &= summary.passed;
        paths.push(path);
    }
    let index = SweepIndex {
        config_hash: config.hash(),
        parameter: sweep.parameter.as_str().to_string(),
        members: paths
            .iter()
            .map(|p| p.strip_prefix(dir).unwrap_or(p).display().to_string())
            .collect(),
        passed,
    };
    let index_path = dir.join(format!("sweep-{}.json", config.short_hash()));
    let text = serde_json::to_string_pretty(&index).expect("index serializes");
    fs::write(&index_path, text + "\n").map_err(|e| CliError::io(&index_path, e))?;
    Ok((passed, paths))
}

/// Executes `config.command`.
pub fn dispatch(config: &RunConfig, opts: &RunOptions) -> CliResult<Outcome> {
    let dir = output_dir(config, opts);
    match config.command {
        Command::Simulate => {
            let (_, path) = run_simulate(config, &dir, opts)?;
            Ok(Outcome {
                exit_code: EXIT_OK,
                message: format!("simulation written to {}", dir.display()),
                summaries: vec![path],
            })
        }
        Command::Verify => {
            let (summary, path) = run_verify(config, &dir, opts, None)?;
            Ok(Outcome {
                exit_code: if summary.passed { EXIT_OK } else { EXIT_CHECK_FAILED },
                message: report::summary_table(&[(path.clone(), summary)]),
                summaries: vec![path],
            })
        }
        Command::Sweep => {
            let (passed, paths) = run_sweep(config, &dir, opts)?;
            Ok(Outcome {
                exit_code: if passed { EXIT_OK } else { EXIT_CHECK_FAILED },
                message: format!("{} sweep members written to {}", paths.len(), dir.display()),
                summaries: paths,
            })
        }
        Command::Report => {
            let input = opts.report_input.clone().unwrap_or(dir);
            let message = report::report(&input, opts.report_output.as_deref())?;
            Ok(Outcome {
                exit_code: EXIT_OK,
                message,
                summaries: Vec::new(),
            })
        }
    }
}
