//! Integral sections of reduced k-vector fields on rectangular grids.
//!
//! `∂ψ^i/∂x^α = f^i_α(x, ψ)` is overdetermined for `k > 1`. The sweep fills
//! the grid axis by axis: the first axis of `order` is integrated from the
//! origin, then every later axis is marched from the face already filled.
//! For a compatible field every order gives the same section up to
//! truncation error; [`path_independence`] measures the difference.

use alloc::vec;
use alloc::vec::Vec;

use crate::error::{Error, EvalError, Result};
use crate::field::HamiltonianSystem;
use crate::grid::GridSpec;
use crate::hdw::{hdw_residual, HdwResidual, PhaseMapGrid};
use crate::hj::{
    closedness_residual, compatibility_residual, hj_residual, reduce, HJSection,
    ReducedKVectorField,
};
use crate::model::{BasePoint, Dimensions};

/// Knobs for [`integrate_section`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct IntegrateOptions {
    /// RK4 steps per grid cell.
    pub subdivisions: usize,
    /// Abort when any `|ψ^i|` exceeds this.
    pub blowup_bound: f64,
}

impl Default for IntegrateOptions {
    fn default() -> Self {
        Self {
            subdivisions: 1,
            blowup_bound: 1e12,
        }
    }
}

/// `ψ^i` at every node of a grid, `n` values per node in storage order.
#[derive(Debug, Clone, PartialEq)]
pub struct GridSolution {
    dims: Dimensions,
    grid: GridSpec,
    values: Vec<f64>,
    axis_order: Vec<usize>,
    subdivisions: usize,
}

impl GridSolution {
    pub fn dims(&self) -> Dimensions {
        self.dims
    }

    pub fn grid(&self) -> &GridSpec {
        &self.grid
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    /// `ψ` at node `lin`.
    pub fn value(&self, lin: usize) -> &[f64] {
        let n = self.dims.n();
        &self.values[lin * n..(lin + 1) * n]
    }

    pub fn axis_order(&self) -> &[usize] {
        &self.axis_order
    }

    pub fn method(&self) -> &'static str {
        "rk4"
    }

    pub fn subdivisions(&self) -> usize {
        self.subdivisions
    }

    /// `‖ψ‖_∞`.
    pub fn sup_norm(&self) -> f64 {
        self.values.iter().fold(0.0_f64, |m, v| m.max(v.abs()))
    }
}

fn check_order(order: &[usize], k: usize) -> Result<()> {
    let mut seen = vec![false; k];
    if order.len() != k {
        return Err(Error::InvalidAxisOrder(order.to_vec()));
    }
    for &a in order {
        if a >= k || seen[a] {
            return Err(Error::InvalidAxisOrder(order.to_vec()));
        }
        seen[a] = true;
    }
    Ok(())
}

struct Stepper<'a> {
    z: &'a ReducedKVectorField,
    dims: Dimensions,
    env: Vec<f64>,
    k: [Vec<f64>; 4],
    tmp: Vec<f64>,
}

impl Stepper<'_> {
    fn rhs(&mut self, axis: usize, x: &[f64], y: &[f64], stage: usize) -> Result<(), EvalError> {
        let kk = self.dims.k();
        self.env[..kk].copy_from_slice(x);
        self.env[kk..kk + y.len()].copy_from_slice(y);
        self.z.eval_direction(axis, &self.env, &mut self.k[stage])
    }

    /// One classic RK4 step of size `h` along `axis` starting at `x`.
    fn step(&mut self, axis: usize, x: &mut [f64], y: &mut [f64], h: f64) -> Result<(), EvalError> {
        let n = y.len();
        let x0 = x[axis];
        self.rhs(axis, x, y, 0)?;
        x[axis] = x0 + 0.5 * h;
        for i in 0..n {
            self.tmp[i] = y[i] + 0.5 * h * self.k[0][i];
        }
        let t = core::mem::take(&mut self.tmp);
        self.rhs(axis, x, &t, 1)?;
        self.tmp = t;
        for i in 0..n {
            self.tmp[i] = y[i] + 0.5 * h * self.k[1][i];
        }
        let t = core::mem::take(&mut self.tmp);
        self.rhs(axis, x, &t, 2)?;
        self.tmp = t;
        x[axis] = x0 + h;
        for i in 0..n {
            self.tmp[i] = y[i] + h * self.k[2][i];
        }
        let t = core::mem::take(&mut self.tmp);
        self.rhs(axis, x, &t, 3)?;
        self.tmp = t;
        for i in 0..n {
            y[i] += h / 6.0 * (self.k[0][i] + 2.0 * self.k[1][i] + 2.0 * self.k[2][i] + self.k[3][i]);
        }
        Ok(())
    }
}

/// RK4 sweep of `∂ψ/∂x^α = f_α(x, ψ)` with `ψ(origin) = q0`, filling axes
/// in the given order.
pub fn integrate_section(
    z: &ReducedKVectorField,
    q0: &[f64],
    grid: &GridSpec,
    order: &[usize],
    opts: &IntegrateOptions,
) -> Result<GridSolution> {
    let dims = z.dims();
    let (k, n) = (dims.k(), dims.n());
    if grid.dim() != k {
        return Err(Error::ShapeMismatch {
            what: "grid axes",
            expected: k,
            found: grid.dim(),
        });
    }
    if q0.len() != n {
        return Err(Error::ShapeMismatch {
            what: "initial field values",
            expected: n,
            found: q0.len(),
        });
    }
    if q0.iter().any(|v| !v.is_finite()) {
        return Err(Error::NonFinite {
            what: "initial field values",
        });
    }
    if opts.subdivisions == 0 {
        return Err(Error::InvalidGrid("subdivisions must be at least 1"));
    }
    check_order(order, k)?;

    let strides = grid.strides();
    let mut values = vec![0.0; grid.node_count() * n];
    values[..n].copy_from_slice(q0);
    let mut st = Stepper {
        z,
        dims,
        env: vec![0.0; dims.coord_count()],
        k: [vec![0.0; n], vec![0.0; n], vec![0.0; n], vec![0.0; n]],
        tmp: vec![0.0; n],
    };
    let mut y = vec![0.0; n];
    for (m, &axis) in order.iter().enumerate() {
        let s = strides[axis];
        let h = grid.spacing()[axis] / opts.subdivisions as f64;
        // Starting nodes: index 0 on `axis` and on every axis not yet swept.
        let filled = &order[..m];
        for start in 0..grid.node_count() {
            let idx = grid.multi_index(start);
            if idx[axis] != 0 || (0..k).any(|a| idx[a] != 0 && !filled.contains(&a)) {
                continue;
            }
            let mut x = grid.node(&idx);
            y.copy_from_slice(&values[start * n..(start + 1) * n]);
            for j in 1..=grid.steps()[axis] {
                for sub in 0..opts.subdivisions {
                    st.step(axis, &mut x, &mut y, h).map_err(|source| Error::NodeEval {
                        node: x.clone(),
                        source,
                    })?;
                    // Pin the position to the lattice to avoid drift.
                    x[axis] = grid.coordinate(axis, j - 1) + (sub + 1) as f64 * h;
                }
                x[axis] = grid.coordinate(axis, j);
                let mag = y.iter().fold(0.0_f64, |a, v| a.max(v.abs()));
                if !(mag <= opts.blowup_bound) {
                    return Err(Error::BlowUp { node: x, magnitude: mag });
                }
                let lin = start + j * s;
                values[lin * n..(lin + 1) * n].copy_from_slice(&y);
            }
        }
    }
    Ok(GridSolution {
        dims,
        grid: grid.clone(),
        values,
        axis_order: order.to_vec(),
        subdivisions: opts.subdivisions,
    })
}

/// Outcome of [`path_independence`].
#[derive(Debug, Clone, PartialEq)]
pub struct PathIndependence {
    /// Max over nodes and components of `|ψ_forward - ψ_reversed|`.
    pub deviation: f64,
    /// `‖ψ_forward‖_∞`.
    pub sup_norm: f64,
    /// The solution swept in axis order `0, 1, ..., k-1`.
    pub solution: GridSolution,
}

/// Integrates with the identity axis order and with its reverse and
/// compares the two sections.
pub fn path_independence(
    z: &ReducedKVectorField,
    q0: &[f64],
    grid: &GridSpec,
    opts: &IntegrateOptions,
) -> Result<PathIndependence> {
    let k = z.dims().k();
    let forward: Vec<usize> = (0..k).collect();
    let reversed: Vec<usize> = (0..k).rev().collect();
    let a = integrate_section(z, q0, grid, &forward, opts)?;
    let deviation = if k == 1 {
        0.0
    } else {
        let b = integrate_section(z, q0, grid, &reversed, opts)?;
        a.values
            .iter()
            .zip(&b.values)
            .fold(0.0_f64, |m, (u, v)| m.max((u - v).abs()))
    };
    Ok(PathIndependence {
        deviation,
        sup_norm: a.sup_norm(),
        solution: a,
    })
}

/// `x ↦ (x, ψ(x), γ(x, ψ(x)))` on the grid of `psi`.
pub fn lift(gamma: &HJSection, psi: &GridSolution) -> Result<PhaseMapGrid> {
    let dims = psi.dims();
    if gamma.dims() != dims {
        return Err(Error::ShapeMismatch {
            what: "section dimensions",
            expected: dims.coord_count(),
            found: gamma.dims().coord_count(),
        });
    }
    let (k, n) = (dims.k(), dims.n());
    let grid = psi.grid();
    let base = dims.base_count();
    let mut p = Vec::with_capacity(grid.node_count() * k * n);
    let mut env = vec![0.0; dims.coord_count()];
    for lin in 0..grid.node_count() {
        let x = grid.node(&grid.multi_index(lin));
        env[..k].copy_from_slice(&x);
        env[k..base].copy_from_slice(psi.value(lin));
        for g in gamma.components() {
            p.push(g.value(&env).map_err(|source| Error::NodeEval { node: x.clone(), source })?);
        }
    }
    PhaseMapGrid::new(dims, grid.clone(), psi.values.clone(), p)
}

/// Pass thresholds for [`verify_pipeline`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Tolerances {
    pub hj: f64,
    pub closedness: f64,
    pub compatibility: f64,
    /// Relative: the bound is `path · (1 + ‖ψ‖_∞)`.
    pub path: f64,
    /// Relative: the bound is `hdw · h_max² · (1 + S)` where `S` is
    /// [`PhaseMapGrid::third_derivative_bound`] of the lifted solution.
    pub hdw: f64,
}

impl Default for Tolerances {
    fn default() -> Self {
        Self {
            hj: 1e-10,
            closedness: 1e-10,
            compatibility: 1e-10,
            path: 1e-8,
            hdw: 10.0,
        }
    }
}

/// A measured maximum against its threshold.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Check {
    pub value: f64,
    pub threshold: f64,
    pub pass: bool,
}

impl Check {
    pub fn new(value: f64, threshold: f64) -> Self {
        Self {
            value,
            threshold,
            pass: value <= threshold,
        }
    }
}

/// Everything [`verify_pipeline`] measured.
#[derive(Debug, Clone)]
pub struct PipelineReport {
    pub hj: Check,
    pub closedness: Check,
    pub compatibility: Check,
    pub path: Check,
    pub hdw: Check,
    /// Largest third-difference estimate of the lifted solution.
    pub solution_scale: f64,
    /// The HJ and path-independence checks both pass, so a small HDW
    /// residual is expected.
    pub within_hypotheses: bool,
    pub solution: GridSolution,
    pub lifted: PhaseMapGrid,
    pub residual: HdwResidual,
    pub pass: bool,
}

fn max_abs(v: &[f64]) -> f64 {
    v.iter().fold(0.0_f64, |m, x| m.max(x.abs()))
}

/// Residual maxima over a set of base points.
#[derive(Debug, Clone, Copy, Default, PartialEq)]
pub struct SectionMaxima {
    pub hj: f64,
    pub closedness: f64,
    pub compatibility: f64,
}

/// Samples the HJ, closedness and compatibility residuals at every point.
pub fn section_maxima(
    sys: &HamiltonianSystem,
    gamma: &HJSection,
    z: &ReducedKVectorField,
    points: &[BasePoint],
) -> Result<SectionMaxima> {
    let mut m = SectionMaxima::default();
    for pt in points {
        let wrap = |e: Error| match e {
            Error::Eval(source) => Error::NodeEval {
                node: pt.x().iter().chain(pt.q()).copied().collect(),
                source,
            },
            other => other,
        };
        m.hj = m.hj.max(max_abs(&hj_residual(gamma, sys, pt).map_err(wrap)?));
        m.closedness = m
            .closedness
            .max(max_abs(&closedness_residual(gamma, pt).map_err(wrap)?));
        m.compatibility = m
            .compatibility
            .max(max_abs(&compatibility_residual(z, pt).map_err(wrap)?));
    }
    Ok(m)
}

/// Base points `(x, q)` for every grid node `x` and every `q` in `q_samples`.
pub fn grid_base_points(
    dims: Dimensions,
    grid: &GridSpec,
    q_samples: &[Vec<f64>],
) -> Result<Vec<BasePoint>> {
    let mut out = Vec::with_capacity(grid.node_count() * q_samples.len());
    for x in grid.nodes() {
        for q in q_samples {
            out.push(BasePoint::new(dims, x.clone(), q.clone())?);
        }
    }
    Ok(out)
}

/// Samples the section residuals at every grid node paired with every
/// `q_samples` entry and along the computed solution, integrates `Z^γ`,
/// certifies path independence, lifts by `γ` and measures the HDW residual.
pub fn verify_pipeline(
    sys: &HamiltonianSystem,
    gamma: &HJSection,
    q0: &[f64],
    grid: &GridSpec,
    q_samples: &[Vec<f64>],
    tol: &Tolerances,
    opts: &IntegrateOptions,
) -> Result<PipelineReport> {
    let dims = sys.dims();
    let z = reduce(sys, gamma)?;
    let pi = path_independence(&z, q0, grid, opts)?;
    let solution = pi.solution;

    let mut points = grid_base_points(dims, grid, q_samples)?;
    for lin in 0..grid.node_count() {
        let x = grid.node(&grid.multi_index(lin));
        points.push(BasePoint::new(dims, x, solution.value(lin).to_vec())?);
    }
    let m = section_maxima(sys, gamma, &z, &points)?;

    let lifted = lift(gamma, &solution)?;
    let residual = hdw_residual(&lifted, sys)?;
    let scale = lifted.third_derivative_bound();
    let h = grid.max_spacing();

    let hj = Check::new(m.hj, tol.hj);
    let closedness = Check::new(m.closedness, tol.closedness);
    let compatibility = Check::new(m.compatibility, tol.compatibility);
    let path = Check::new(pi.deviation, tol.path * (1.0 + pi.sup_norm));
    let hdw = Check::new(residual.max(), tol.hdw * h * h * (1.0 + scale));
    let pass = hj.pass && closedness.pass && compatibility.pass && path.pass && hdw.pass;
    Ok(PipelineReport {
        hj,
        closedness,
        compatibility,
        path,
        hdw,
        solution_scale: scale,
        within_hypotheses: hj.pass && path.pass,
        solution,
        lifted,
        residual,
        pass,
    })
}
