//! `check`, `solve` and `example`.

use std::path::{Path, PathBuf};
use std::time::Instant;

use kcosym_core::{
    grid_base_points, q_independence_check, reduce, section_maxima, verify_pipeline, Check,
    PipelineReport,
};

use crate::builtins;
use crate::output::{write_lifted, write_residual, write_solution};
use crate::problem::{load, Overrides, Problem};
use crate::report::{CheckEntry, Checks, GridMeta, IntegratorMeta, RunReport, Timing, SCHEMA};
use crate::CliError;

/// Largest spread of the classical residual over `q_samples`, across grid
/// nodes. `None` unless the section comes from potentials and there are at
/// least two samples.
fn q_independence(p: &Problem) -> Result<Option<CheckEntry>, CliError> {
    let Some(w) = &p.potentials else {
        return Ok(None);
    };
    if p.q_samples.len() < 2 {
        return Ok(None);
    }
    let mut worst = 0.0_f64;
    for x in p.grid.nodes() {
        let s = q_independence_check(w, &p.system, &x, &p.q_samples)?;
        worst = worst.max(s.spread());
    }
    Ok(Some(Check::new(worst, p.tolerances.hj).into()))
}

fn finish(
    p: &Problem,
    command: &'static str,
    checks: Checks,
    samples: usize,
    start: Instant,
) -> RunReport {
    RunReport {
        schema: SCHEMA,
        command,
        problem: p.name.clone(),
        pass: checks.all_pass(),
        checks,
        samples,
        grid: GridMeta::from(&p.grid),
        integrator: None,
        within_hypotheses: None,
        solution_scale: None,
        files: Vec::new(),
        timing: Timing {
            wall_clock_seconds: start.elapsed().as_secs_f64(),
        },
    }
}

/// Samples the section residuals at every grid node paired with every
/// `q_samples` entry. Nothing is integrated.
pub fn run_check(p: &Problem) -> Result<RunReport, CliError> {
    let start = Instant::now();
    let z = reduce(&p.system, &p.section)?;
    let points = grid_base_points(p.dims, &p.grid, &p.q_samples)?;
    let m = section_maxima(&p.system, &p.section, &z, &points)?;
    let t = &p.tolerances;
    let checks = Checks {
        hj: Check::new(m.hj, t.hj).into(),
        closedness: Check::new(m.closedness, t.closedness).into(),
        compatibility: Check::new(m.compatibility, t.compatibility).into(),
        q_independence: q_independence(p)?,
        path: None,
        hdw: None,
    };
    Ok(finish(p, "check", checks, points.len(), start))
}

/// A `solve` run: the report plus every intermediate result.
#[derive(Debug, Clone)]
pub struct Solved {
    pub report: RunReport,
    pub pipeline: PipelineReport,
}

/// Runs the full pipeline: section residuals, integration, path
/// independence, lift and HDW residual.
pub fn run_solve(p: &Problem) -> Result<Solved, CliError> {
    let start = Instant::now();
    let pipeline = verify_pipeline(
        &p.system,
        &p.section,
        &p.initial_q,
        &p.grid,
        &p.q_samples,
        &p.tolerances,
        &p.integrator,
    )?;
    let checks = Checks {
        hj: pipeline.hj.into(),
        closedness: pipeline.closedness.into(),
        compatibility: pipeline.compatibility.into(),
        q_independence: q_independence(p)?,
        path: Some(pipeline.path.into()),
        hdw: Some(pipeline.hdw.into()),
    };
    let samples = p.grid.node_count() * (p.q_samples.len() + 1);
    let mut report = finish(p, "solve", checks, samples, start);
    report.integrator = Some(IntegratorMeta {
        method: pipeline.solution.method(),
        subdivisions: pipeline.solution.subdivisions(),
        axis_order: pipeline.solution.axis_order().to_vec(),
        blowup_bound: p.integrator.blowup_bound,
    });
    report.within_hypotheses = Some(pipeline.within_hypotheses);
    report.solution_scale = Some(pipeline.solution_scale);
    Ok(Solved { report, pipeline })
}

fn output_dir(p: &Problem, default_dir: Option<&Path>) -> Result<PathBuf, CliError> {
    let dir = p
        .output_dir
        .clone()
        .or_else(|| default_dir.map(Path::to_path_buf))
        .unwrap_or_else(|| PathBuf::from("."));
    std::fs::create_dir_all(&dir).map_err(|e| CliError::Io(format!("{}: {e}", dir.display())))?;
    Ok(dir)
}

/// `check <file>`: writes `<prefix>.check.json`.
pub fn cmd_check(
    path: &Path,
    overrides: &Overrides,
    default_dir: Option<&Path>,
) -> Result<RunReport, CliError> {
    let p = load(path, overrides)?;
    let mut report = run_check(&p)?;
    let dir = output_dir(&p, default_dir)?;
    let name = format!("{}.check.json", p.prefix);
    report.files.push(name.clone());
    report.write(&dir.join(name))?;
    Ok(report)
}

/// `solve <file>`: writes the solution, lifted solution and residual CSVs
/// and `<prefix>.solve.json`.
pub fn cmd_solve(
    path: &Path,
    overrides: &Overrides,
    default_dir: Option<&Path>,
) -> Result<RunReport, CliError> {
    let p = load(path, overrides)?;
    let Solved {
        mut report,
        pipeline,
    } = run_solve(&p)?;
    let dir = output_dir(&p, default_dir)?;
    let file = |suffix: &str| format!("{}.{suffix}", p.prefix);
    write_solution(&dir.join(file("solution.csv")), &pipeline.solution)?;
    write_lifted(&dir.join(file("lifted.csv")), &pipeline.lifted)?;
    write_residual(
        &dir.join(file("residual.csv")),
        &pipeline.lifted,
        &pipeline.residual,
    )?;
    report.files = ["solution.csv", "lifted.csv", "residual.csv", "solve.json"]
        .iter()
        .map(|s| file(s))
        .collect();
    report.write(&dir.join(file("solve.json")))?;
    Ok(report)
}

/// `example <name>`: writes the builtin problem to `out`, or to
/// `<name>.toml` in `default_dir`.
pub fn cmd_example(
    name: &str,
    out: Option<&Path>,
    default_dir: Option<&Path>,
) -> Result<PathBuf, CliError> {
    let text = builtins::example(name)?.render()?;
    let path = match out {
        Some(p) => p.to_path_buf(),
        None => {
            let dir = default_dir.unwrap_or(Path::new("."));
            std::fs::create_dir_all(dir)
                .map_err(|e| CliError::Io(format!("{}: {e}", dir.display())))?;
            dir.join(format!("{name}.toml"))
        }
    };
    std::fs::write(&path, text).map_err(|e| CliError::Io(format!("{}: {e}", path.display())))?;
    Ok(path)
}
