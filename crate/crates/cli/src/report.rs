//! The `report` command: hand off to the renderer, or print a text table.

use std::fmt::Write as _;
use std::fs;
use std::path::{Path, PathBuf};
use std::process::Command;

use crate::error::{CliError, CliResult};
use boussinesq_core::harness::RunSummary;

/// Environment variable naming the renderer executable.
pub const RENDERER_ENV: &str = "BOUSSINESQ_RENDERER";

/// Every `summary-*.json` below `dir`, sorted by path.
pub fn find_summaries(dir: &Path) -> CliResult<Vec<PathBuf>> {
    let mut found = Vec::new();
    let mut stack = vec![dir.to_path_buf()];
    while let Some(d) = stack.pop() {
        let entries = fs::read_dir(&d).map_err(|e| CliError::io(&d, e))?;
        for entry in entries {
            let path = entry.map_err(|e| CliError::io(&d, e))?.path();
            if path.is_dir() {
                stack.push(path);
            } else if path
                .file_name()
                .and_then(|n| n.to_str())
                .is_some_and(|n| n.starts_with("summary-") && n.ends_with(".json"))
            {
                found.push(path);
            }
        }
    }
    found.sort();
    Ok(found)
}

fn fmt_opt(v: Option<f64>) -> String {
    v.map(|x| format!("{x:.4e}")).unwrap_or_else(|| "-".into())
}

/// Plain-text table of every check in the given summaries.
pub fn summary_table(summaries: &[(PathBuf, RunSummary)]) -> String {
    if summaries.is_empty() {
        return "no records\n".into();
    }
    let mut out = String::new();
    for (path, s) in summaries {
        let _ = writeln!(
            out,
            "{} [{}] n={} kappa={} gamma={} seed={} hash={}",
            path.display(),
            s.command,
            s.grid_n,
            s.kappa,
            s.gamma,
            s.seed,
            &s.config_hash[..8.min(s.config_hash.len())]
        );
        if !s.checks.is_empty() {
            let _ = writeln!(out, "  {:<26} {:>12} {:>12} {:>12}  result", "check", "constant", "threshold", "residual");
        }
        for c in &s.checks {
            let _ = writeln!(
                out,
                "  {:<26} {:>12} {:>12} {:>12}  {}",
                c.check_id,
                format!("{:.4e}", c.max_relative_deviation.unwrap_or(c.empirical_constant)),
                fmt_opt(c.threshold),
                fmt_opt(c.truncation_residual),
                if c.passed { "PASS" } else { "FAIL" }
            );
        }
        if let Some(u) = &s.uniqueness {
            let _ = writeln!(
                out,
                "  twin run: {} fitted C = {:.4e}, rate C = {:.4e}, dominated = {}",
                u.description,
                u.fitted_constant,
                u.rate_constant,
                u.dominated()
            );
        }
        if let Some(a) = &s.approximation {
            let _ = writeln!(
                out,
                "  approximation: slope = {}, target = {:.4}, monotone gaps = {}",
                a.slope.map(|x| format!("{x:.4}")).unwrap_or_else(|| "-".into()),
                a.target_slope,
                a.cauchy_monotone
            );
        }
        if !s.snapshots.is_empty() {
            let _ = writeln!(out, "  snapshots: {}", s.snapshots.join(", "));
        }
    }
    out
}

fn try_renderer(input: &Path, out: &Path) -> Option<String> {
    let exe = std::env::var_os(RENDERER_ENV)?;
    let status = Command::new(&exe)
        .arg("render")
        .arg("--input")
        .arg(input)
        .arg("--out")
        .arg(out)
        .status()
        .ok()?;
    status
        .success()
        .then(|| format!("report rendered to {}", out.display()))
}

/// Renders `input` into `out` when a renderer is configured, and otherwise
/// returns (and, with `out`, writes) the text table.
pub fn report(input: &Path, out: Option<&Path>) -> CliResult<String> {
    let target = out.unwrap_or(input);
    if let Some(msg) = try_renderer(input, target) {
        return Ok(msg);
    }
    let summaries = find_summaries(input)?
        .into_iter()
        .map(|p| Ok((p.clone(), RunSummary::read(&p)?)))
        .collect::<CliResult<Vec<_>>>()?;
    let table = summary_table(&summaries);
    if let Some(dir) = out {
        fs::create_dir_all(dir).map_err(|e| CliError::io(dir, e))?;
        let path = dir.join("report.txt");
        fs::write(&path, &table).map_err(|e| CliError::io(&path, e))?;
    }
    Ok(table)
}
