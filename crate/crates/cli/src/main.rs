use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use kcosym::{builtins, cmd_check, cmd_example, cmd_solve, CliError, Overrides, ToleranceFile};

/// Hamilton-Jacobi sections, reduced integration and HDW verification for
/// first-order field theories.
#[derive(Debug, Parser)]
#[command(name = "kcosym", version)]
struct Cli {
    #[command(flatten)]
    global: Global,
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Args)]
struct Global {
    /// Override the Hamilton-Jacobi residual tolerance.
    #[arg(long, global = true)]
    tol_hj: Option<f64>,
    /// Override the closedness tolerance.
    #[arg(long, global = true)]
    tol_closedness: Option<f64>,
    /// Override the compatibility tolerance.
    #[arg(long, global = true)]
    tol_compat: Option<f64>,
    /// Override the relative path-independence tolerance.
    #[arg(long, global = true)]
    tol_path: Option<f64>,
    /// Override the relative HDW residual tolerance.
    #[arg(long, global = true)]
    tol_hdw: Option<f64>,
    /// Replace the grid spacing on every axis, keeping the extent: h=<spacing>.
    #[arg(long, global = true, value_parser = parse_grid)]
    grid: Option<f64>,
    /// Print nothing on success.
    #[arg(long, short, global = true)]
    quiet: bool,
    /// Directory for outputs when the problem file names none.
    #[arg(long, global = true, env = "KCOSYM_OUTPUT_DIR")]
    output_dir: Option<PathBuf>,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Sample the section residuals on the grid (no integration).
    Check { file: PathBuf },
    /// Integrate, lift and verify; writes CSV files and a JSON report.
    Solve { file: PathBuf },
    /// Write a builtin problem file.
    Example {
        /// Builtin name; `list` prints the registry.
        name: String,
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

fn parse_grid(s: &str) -> Result<f64, String> {
    let v = s
        .strip_prefix("h=")
        .ok_or_else(|| format!("expected h=<spacing>, got `{s}`"))?;
    let h: f64 = v.parse().map_err(|e| format!("`{v}`: {e}"))?;
    if h.is_finite() && h > 0.0 {
        Ok(h)
    } else {
        Err(format!("spacing must be positive, got {h}"))
    }
}

fn run(cli: Cli) -> Result<bool, CliError> {
    let g = &cli.global;
    let overrides = Overrides {
        tolerances: ToleranceFile {
            hj: g.tol_hj,
            closedness: g.tol_closedness,
            compatibility: g.tol_compat,
            path: g.tol_path,
            hdw: g.tol_hdw,
        },
        spacing: g.grid,
    };
    let dir = g.output_dir.as_deref();
    let report = match &cli.command {
        Command::Check { file } => cmd_check(file, &overrides, dir)?,
        Command::Solve { file } => cmd_solve(file, &overrides, dir)?,
        Command::Example { name, .. } if name == "list" => {
            for e in builtins::EXAMPLES {
                println!("{:<26} {}", e.name, e.summary);
            }
            return Ok(true);
        }
        Command::Example { name, out } => {
            let path = cmd_example(name, out.as_deref(), dir)?;
            if !g.quiet {
                println!("{}", path.display());
            }
            return Ok(true);
        }
    };
    if !g.quiet || !report.pass {
        print!("{}", report.summary());
    }
    Ok(report.pass)
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
