//! TOML problem files.
//!
//! ```toml
//! name = "free-k1"
//! hamiltonian = "0.5*p1_1^2"      # or "builtin:<name>"
//! section = [["c"]]                # k rows of n expressions, or:
//! # potentials = ["c*q1"]          # k expressions
//! initial_q = [1.0]
//! q_samples = [[-1.0], [0.0]]      # optional, defaults to [initial_q]
//!
//! [dims]
//! k = 1
//! n = 1
//!
//! [params]
//! c = 0.75
//!
//! [grid]
//! origin = [0.0]
//! spacing = [0.1]                  # one value per axis, or a single value
//! steps = [10]
//!
//! [integrator]                     # optional
//! subdivisions = 1
//! blowup_bound = 1e12
//!
//! [tolerances]                     # optional, any subset
//! hj = 1e-10
//!
//! [output]                         # optional
//! dir = "out"                      # relative to the problem file
//! prefix = "free"
//! ```

use std::collections::BTreeMap;
use std::fmt;
use std::path::{Path, PathBuf};

use kcosym_core::{
    section_from_potentials, Dimensions, GridSpec, HJSection, HamiltonianSystem,
    IntegrateOptions, ParamSet, PotentialFamily, ScalarField, Tolerances,
};
use serde::Deserialize;
use toml::Spanned;

use crate::builtins::builtin_hamiltonian;
use crate::CliError;

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ProblemFile {
    pub name: Option<String>,
    pub description: Option<String>,
    pub dims: DimsSpec,
    #[serde(default)]
    pub params: BTreeMap<String, f64>,
    pub hamiltonian: Spanned<String>,
    pub section: Option<Vec<Vec<Spanned<String>>>>,
    pub potentials: Option<Vec<Spanned<String>>>,
    pub initial_q: Vec<f64>,
    pub q_samples: Option<Vec<Vec<f64>>>,
    pub grid: GridFile,
    #[serde(default)]
    pub integrator: IntegratorFile,
    #[serde(default)]
    pub tolerances: ToleranceFile,
    #[serde(default)]
    pub output: OutputFile,
}

#[derive(Debug, Clone, Copy, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct DimsSpec {
    pub k: usize,
    pub n: usize,
}

#[derive(Debug, Clone, Deserialize)]
#[serde(untagged)]
pub enum PerAxis<T> {
    One(T),
    Each(Vec<T>),
}

impl<T: Clone> PerAxis<T> {
    fn expand(&self, k: usize) -> Vec<T> {
        match self {
            PerAxis::One(v) => vec![v.clone(); k],
            PerAxis::Each(v) => v.clone(),
        }
    }
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GridFile {
    pub origin: PerAxis<f64>,
    pub spacing: PerAxis<f64>,
    pub steps: PerAxis<usize>,
}

#[derive(Debug, Clone, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct IntegratorFile {
    pub subdivisions: Option<usize>,
    pub blowup_bound: Option<f64>,
}

#[derive(Debug, Clone, Copy, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ToleranceFile {
    pub hj: Option<f64>,
    pub closedness: Option<f64>,
    pub compatibility: Option<f64>,
    pub path: Option<f64>,
    pub hdw: Option<f64>,
}

impl ToleranceFile {
    /// `other`'s entries win.
    pub fn overlay(&self, other: &ToleranceFile) -> ToleranceFile {
        ToleranceFile {
            hj: other.hj.or(self.hj),
            closedness: other.closedness.or(self.closedness),
            compatibility: other.compatibility.or(self.compatibility),
            path: other.path.or(self.path),
            hdw: other.hdw.or(self.hdw),
        }
    }

    pub fn resolve(&self) -> Tolerances {
        let d = Tolerances::default();
        Tolerances {
            hj: self.hj.unwrap_or(d.hj),
            closedness: self.closedness.unwrap_or(d.closedness),
            compatibility: self.compatibility.unwrap_or(d.compatibility),
            path: self.path.unwrap_or(d.path),
            hdw: self.hdw.unwrap_or(d.hdw),
        }
    }
}

#[derive(Debug, Clone, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct OutputFile {
    pub dir: Option<PathBuf>,
    pub prefix: Option<String>,
}

/// A validated problem, ready to run.
#[derive(Debug, Clone)]
pub struct Problem {
    pub name: String,
    pub dims: Dimensions,
    pub params: ParamSet,
    pub system: HamiltonianSystem,
    pub section: HJSection,
    pub potentials: Option<PotentialFamily>,
    pub grid: GridSpec,
    pub initial_q: Vec<f64>,
    pub q_samples: Vec<Vec<f64>>,
    pub tolerances: Tolerances,
    pub integrator: IntegrateOptions,
    /// Output directory from the file, already resolved against its location.
    pub output_dir: Option<PathBuf>,
    pub prefix: String,
}

/// Overrides applied on top of the file.
#[derive(Debug, Clone, Default)]
pub struct Overrides {
    pub tolerances: ToleranceFile,
    pub spacing: Option<f64>,
}

/// Line and column (1-based) of byte offset `at`.
fn line_col(text: &str, at: usize) -> (usize, usize) {
    let before = &text[..at.min(text.len())];
    let line = before.matches('\n').count() + 1;
    let col = before.rfind('\n').map_or(before.len(), |i| before.len() - i - 1) + 1;
    (line, col)
}

struct Located<'a> {
    source: &'a str,
    origin: &'a str,
}

impl Located<'_> {
    fn error(&self, at: usize, msg: impl fmt::Display) -> CliError {
        let (line, col) = line_col(self.source, at);
        CliError::Input(format!("{}:{line}:{col}: {msg}", self.origin))
    }

    fn expr(
        &self,
        text: &Spanned<String>,
        what: &str,
        dims: Dimensions,
        params: &ParamSet,
    ) -> Result<ScalarField, CliError> {
        ScalarField::parse(text.get_ref(), dims, params).map_err(|e| {
            // Position inside the string literal; +1 skips the opening quote.
            let at = text.span().start + 1 + parse_pos(&e).unwrap_or(0);
            self.error(at, format!("{what}: {e}"))
        })
    }
}

fn parse_pos(e: &kcosym_core::Error) -> Option<usize> {
    match e {
        kcosym_core::Error::Parse(p) => Some(p.pos),
        _ => None,
    }
}

impl ProblemFile {
    pub fn from_str(text: &str) -> Result<Self, toml::de::Error> {
        toml::from_str(text)
    }
}

/// Reads and validates a problem file.
pub fn load(path: &Path, overrides: &Overrides) -> Result<Problem, CliError> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| CliError::Input(format!("{}: {e}", path.display())))?;
    let stem = path
        .file_stem()
        .map(|s| s.to_string_lossy().into_owned())
        .unwrap_or_else(|| "problem".into());
    let base = path.parent().map(Path::to_path_buf).unwrap_or_default();
    let origin = path.display().to_string();
    load_str(&text, &origin, &stem, &base, overrides)
}

/// Validates problem text; `origin` labels error messages, `stem` is the
/// default name and prefix, relative output directories resolve against `base`.
pub fn load_str(
    text: &str,
    origin: &str,
    stem: &str,
    base: &Path,
    overrides: &Overrides,
) -> Result<Problem, CliError> {
    let loc = Located {
        source: text,
        origin,
    };
    let file: ProblemFile = toml::from_str(text).map_err(|e| {
        let at = e.span().map_or(0, |s| s.start);
        loc.error(at, e.message())
    })?;
    let invalid = |msg: String| CliError::Input(format!("{origin}: {msg}"));

    let dims = Dimensions::new(file.dims.k, file.dims.n).map_err(|e| invalid(e.to_string()))?;
    let (k, n) = (dims.k(), dims.n());
    let mut params = ParamSet::new();
    for (name, v) in &file.params {
        params
            .insert(name, *v)
            .map_err(|e| invalid(format!("params.{name}: {e}")))?;
    }

    let h_text = file.hamiltonian.get_ref();
    let system = match h_text.strip_prefix("builtin:") {
        Some(name) => {
            let expanded = builtin_hamiltonian(name, dims).map_err(|msg| {
                loc.error(file.hamiltonian.span().start, msg)
            })?;
            HamiltonianSystem::parse(expanded, dims, &params).map_err(|e| {
                loc.error(file.hamiltonian.span().start, format!("hamiltonian: {e}"))
            })?
        }
        None => {
            let h = loc.expr(&file.hamiltonian, "hamiltonian", dims, &params)?;
            HamiltonianSystem::new(dims, h).map_err(|e| invalid(e.to_string()))?
        }
    };

    let (section, potentials) = match (&file.section, &file.potentials) {
        (Some(_), Some(_)) | (None, None) => {
            return Err(invalid(
                "exactly one of `section` and `potentials` must be given".into(),
            ))
        }
        (Some(rows), None) => {
            if rows.len() != k || rows.iter().any(|r| r.len() != n) {
                return Err(invalid(format!("section must be {k} rows of {n} expressions")));
            }
            let mut comps = Vec::with_capacity(k * n);
            for (a, row) in rows.iter().enumerate() {
                for (i, t) in row.iter().enumerate() {
                    comps.push(loc.expr(t, &format!("section[{a}][{i}]"), dims, &params)?);
                }
            }
            let g = HJSection::new(dims, comps).map_err(|e| invalid(e.to_string()))?;
            (g, None)
        }
        (None, Some(ws)) => {
            if ws.len() != k {
                return Err(invalid(format!("potentials must list {k} expressions")));
            }
            let mut fields = Vec::with_capacity(k);
            for (a, t) in ws.iter().enumerate() {
                fields.push(loc.expr(t, &format!("potentials[{a}]"), dims, &params)?);
            }
            let w = PotentialFamily::new(dims, fields).map_err(|e| invalid(e.to_string()))?;
            (section_from_potentials(&w), Some(w))
        }
    };

    if file.initial_q.len() != n || file.initial_q.iter().any(|v| !v.is_finite()) {
        return Err(invalid(format!("initial_q must hold {n} finite values")));
    }
    let q_samples = file
        .q_samples
        .clone()
        .unwrap_or_else(|| vec![file.initial_q.clone()]);
    if q_samples.is_empty()
        || q_samples
            .iter()
            .any(|q| q.len() != n || q.iter().any(|v| !v.is_finite()))
    {
        return Err(invalid(format!(
            "q_samples must be a non-empty list of {n}-value points"
        )));
    }

    let g = &file.grid;
    let mut grid = GridSpec::new(g.origin.expand(k), g.spacing.expand(k), g.steps.expand(k))
        .map_err(|e| invalid(format!("grid: {e}")))?;
    if grid.dim() != k {
        return Err(invalid(format!("grid must have {k} axes")));
    }
    if let Some(h) = overrides.spacing {
        grid = grid
            .with_spacing(h)
            .map_err(|e| invalid(format!("--grid h={h}: {e}")))?;
    }

    let defaults = IntegrateOptions::default();
    let integrator = IntegrateOptions {
        subdivisions: file.integrator.subdivisions.unwrap_or(defaults.subdivisions),
        blowup_bound: file.integrator.blowup_bound.unwrap_or(defaults.blowup_bound),
    };
    if integrator.subdivisions == 0 || !(integrator.blowup_bound > 0.0) {
        return Err(invalid(
            "integrator: subdivisions must be >= 1 and blowup_bound > 0".into(),
        ));
    }
    let tolerances = file.tolerances.overlay(&overrides.tolerances).resolve();
    for (name, v) in [
        ("hj", tolerances.hj),
        ("closedness", tolerances.closedness),
        ("compatibility", tolerances.compatibility),
        ("path", tolerances.path),
        ("hdw", tolerances.hdw),
    ] {
        if !(v.is_finite() && v >= 0.0) {
            return Err(invalid(format!("tolerance {name} must be finite and >= 0")));
        }
    }

    let name = file.name.clone().unwrap_or_else(|| stem.to_string());
    let prefix = file.output.prefix.clone().unwrap_or_else(|| stem.to_string());
    let output_dir = file.output.dir.as_ref().map(|d| base.join(d));
    Ok(Problem {
        name,
        dims,
        params,
        system,
        section,
        potentials,
        grid,
        initial_q: file.initial_q,
        q_samples,
        tolerances,
        integrator,
        output_dir,
        prefix,
    })
}
