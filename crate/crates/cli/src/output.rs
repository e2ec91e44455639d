//! CSV output. Every value is written with 17 significant digits so files
//! read back bit-exactly; rows follow grid storage order (axis 1 slowest).

use std::path::Path;

use kcosym_core::{coordinate_names, GridSolution, HdwResidual, PhaseMapGrid};

use crate::CliError;

fn io(path: &Path, e: impl std::fmt::Display) -> CliError {
    CliError::Io(format!("{}: {e}", path.display()))
}

pub fn fmt_value(v: f64) -> String {
    format!("{v:.16e}")
}

fn write_rows(
    path: &Path,
    header: &[String],
    rows: impl Iterator<Item = Vec<f64>>,
) -> Result<(), CliError> {
    let mut w = csv::Writer::from_path(path).map_err(|e| io(path, e))?;
    w.write_record(header).map_err(|e| io(path, e))?;
    for row in rows {
        w.write_record(row.iter().map(|v| fmt_value(*v)))
            .map_err(|e| io(path, e))?;
    }
    w.flush().map_err(|e| io(path, e))
}

/// Columns `x1..xk, q1..qn`.
pub fn write_solution(path: &Path, psi: &GridSolution) -> Result<(), CliError> {
    let dims = psi.dims();
    let header: Vec<String> = coordinate_names(dims)
        .into_iter()
        .take(dims.base_count())
        .collect();
    let grid = psi.grid();
    write_rows(
        path,
        &header,
        (0..grid.node_count()).map(|lin| {
            let mut row = grid.node(&grid.multi_index(lin));
            row.extend_from_slice(psi.value(lin));
            row
        }),
    )
}

/// Columns are every phase-space coordinate in canonical order.
pub fn write_lifted(path: &Path, phi: &PhaseMapGrid) -> Result<(), CliError> {
    let header = coordinate_names(phi.dims());
    write_rows(
        path,
        &header,
        (0..phi.grid().node_count()).map(|lin| phi.phase_env(lin)),
    )
}

/// Columns `x1..xk`, then `r1_a_i` (`∂ψ^i/∂x^a - ∂H/∂p^a_i`, `a` outer),
/// then `r2_i` (`Σ_a ∂ψ^a_i/∂x^a + ∂H/∂q^i`).
pub fn write_residual(path: &Path, phi: &PhaseMapGrid, r: &HdwResidual) -> Result<(), CliError> {
    let dims = phi.dims();
    let (k, n) = (dims.k(), dims.n());
    let mut header: Vec<String> = (1..=k).map(|a| format!("x{a}")).collect();
    for a in 1..=k {
        for i in 1..=n {
            header.push(format!("r1_{a}_{i}"));
        }
    }
    for i in 1..=n {
        header.push(format!("r2_{i}"));
    }
    let grid = phi.grid();
    write_rows(
        path,
        &header,
        (0..grid.node_count()).map(|lin| {
            let mut row = grid.node(&grid.multi_index(lin));
            row.extend_from_slice(&r.r1[lin * k * n..(lin + 1) * k * n]);
            row.extend_from_slice(&r.r2[lin * n..(lin + 1) * n]);
            row
        }),
    )
}

/// Header and numeric rows of a CSV written by this module.
pub fn read_csv(path: &Path) -> Result<(Vec<String>, Vec<Vec<f64>>), CliError> {
    let mut r = csv::Reader::from_path(path).map_err(|e| io(path, e))?;
    let header = r
        .headers()
        .map_err(|e| io(path, e))?
        .iter()
        .map(str::to_string)
        .collect();
    let mut rows = Vec::new();
    for rec in r.records() {
        let rec = rec.map_err(|e| io(path, e))?;
        let row = rec
            .iter()
            .map(|s| s.parse::<f64>().map_err(|e| io(path, format!("{s:?}: {e}"))))
            .collect::<Result<Vec<_>, _>>()?;
        rows.push(row);
    }
    Ok((header, rows))
}
