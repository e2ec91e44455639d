//! Hamiltonian k-vector fields in local form and Hamilton–De Donder–Weyl
//! residuals.
//!
//! A k-vector field `X_α = (X_α)_β ∂/∂x^β + (X_α)^i ∂/∂q^i + (X_α)^β_i ∂/∂p^β_i`
//! solves the Hamiltonian equations when
//!
//! ```text
//! (X_α)_β = δ_αβ,   (X_α)^i = ∂H/∂p^α_i,   Σ_α (X_α)^α_i = -∂H/∂q^i.
//! ```
//!
//! Solutions differ by elements of the kernel described in [`kernel_check`].

use alloc::vec;
use alloc::vec::Vec;

use crate::error::{Error, Result};
use crate::field::{HamiltonianSystem, ScalarField};
use crate::grid::GridSpec;
use crate::model::{Dimensions, PhasePoint};

/// Components of a k-vector field on phase space.
#[derive(Debug, Clone)]
pub struct KVectorFieldLocal {
    dims: Dimensions,
    base: Vec<ScalarField>,
    field: Vec<ScalarField>,
    momentum: Vec<ScalarField>,
}

fn expect_len<T>(v: &[T], expected: usize, what: &'static str) -> Result<()> {
    if v.len() == expected {
        Ok(())
    } else {
        Err(Error::ShapeMismatch {
            what,
            expected,
            found: v.len(),
        })
    }
}

impl KVectorFieldLocal {
    /// `base[α·k + β] = (X_α)_β`, `field[α·n + i] = (X_α)^i`,
    /// `momentum[(α·k + β)·n + i] = (X_α)^β_i`.
    pub fn new(
        dims: Dimensions,
        base: Vec<ScalarField>,
        field: Vec<ScalarField>,
        momentum: Vec<ScalarField>,
    ) -> Result<Self> {
        let (k, n) = (dims.k(), dims.n());
        expect_len(&base, k * k, "base components")?;
        expect_len(&field, k * n, "field components")?;
        expect_len(&momentum, k * k * n, "momentum components")?;
        Ok(Self {
            dims,
            base,
            field,
            momentum,
        })
    }

    pub fn zero(dims: Dimensions) -> Self {
        let (k, n) = (dims.k(), dims.n());
        Self {
            dims,
            base: vec![ScalarField::zero(); k * k],
            field: vec![ScalarField::zero(); k * n],
            momentum: vec![ScalarField::zero(); k * k * n],
        }
    }

    pub fn dims(&self) -> Dimensions {
        self.dims
    }

    fn m_index(&self, alpha: usize, beta: usize, i: usize) -> usize {
        (alpha * self.dims.k() + beta) * self.dims.n() + i
    }

    /// `(X_α)_β`.
    pub fn base(&self, alpha: usize, beta: usize) -> &ScalarField {
        &self.base[alpha * self.dims.k() + beta]
    }

    /// `(X_α)^i`.
    pub fn field(&self, alpha: usize, i: usize) -> &ScalarField {
        &self.field[alpha * self.dims.n() + i]
    }

    /// `(X_α)^β_i`.
    pub fn momentum(&self, alpha: usize, beta: usize, i: usize) -> &ScalarField {
        &self.momentum[self.m_index(alpha, beta, i)]
    }

    pub fn set_base(&mut self, alpha: usize, beta: usize, f: ScalarField) {
        let k = self.dims.k();
        self.base[alpha * k + beta] = f;
    }

    pub fn set_field(&mut self, alpha: usize, i: usize, f: ScalarField) {
        let n = self.dims.n();
        self.field[alpha * n + i] = f;
    }

    pub fn set_momentum(&mut self, alpha: usize, beta: usize, i: usize, f: ScalarField) {
        let m = self.m_index(alpha, beta, i);
        self.momentum[m] = f;
    }

    /// Componentwise `self - other`.
    pub fn difference(&self, other: &KVectorFieldLocal) -> Result<KVectorFieldLocal> {
        if self.dims != other.dims {
            return Err(Error::ShapeMismatch {
                what: "k-vector field coordinates",
                expected: self.dims.coord_count(),
                found: other.dims.coord_count(),
            });
        }
        let sub = |a: &[ScalarField], b: &[ScalarField]| -> Vec<ScalarField> {
            a.iter().zip(b).map(|(x, y)| x.sub(y)).collect()
        };
        Ok(Self {
            dims: self.dims,
            base: sub(&self.base, &other.base),
            field: sub(&self.field, &other.field),
            momentum: sub(&self.momentum, &other.momentum),
        })
    }
}

/// The particular solution `(X_α)_β = δ_αβ`, `(X_α)^i = ∂H/∂p^α_i`,
/// `(X_1)^1_i = -∂H/∂q^i`, every other momentum component zero.
pub fn canonical_solution(sys: &HamiltonianSystem) -> KVectorFieldLocal {
    let dims = sys.dims();
    let h = sys.hamiltonian();
    let mut x = KVectorFieldLocal::zero(dims);
    for a in 0..dims.k() {
        x.set_base(a, a, ScalarField::constant(1.0));
        for i in 0..dims.n() {
            x.set_field(a, i, h.partial_field(dims.p(a, i)));
        }
    }
    for i in 0..dims.n() {
        x.set_momentum(0, 0, i, h.partial_field(dims.q(i)).neg());
    }
    x
}

/// Outcome of [`is_solution`]: the largest violation of each of the three
/// local equations.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SolutionCheck {
    pub pass: bool,
    pub base: f64,
    pub field: f64,
    pub momentum: f64,
}

/// Checks the local Hamiltonian equations for `x` at `pt`.
pub fn is_solution(
    x: &KVectorFieldLocal,
    sys: &HamiltonianSystem,
    pt: &PhasePoint,
    tol: f64,
) -> Result<SolutionCheck> {
    let dims = sys.dims();
    if x.dims() != dims || pt.dims() != dims {
        return Err(Error::ShapeMismatch {
            what: "k-vector field dimensions",
            expected: dims.coord_count(),
            found: x.dims().coord_count(),
        });
    }
    let env = pt.to_flat();
    let h = sys.hamiltonian();
    let (k, n) = (dims.k(), dims.n());

    let mut base = 0.0_f64;
    for a in 0..k {
        for b in 0..k {
            let delta = if a == b { 1.0 } else { 0.0 };
            base = base.max((x.base(a, b).value(&env)? - delta).abs());
        }
    }
    let mut field = 0.0_f64;
    for a in 0..k {
        for i in 0..n {
            let r = x.field(a, i).value(&env)? - h.partial(&env, dims.p(a, i))?;
            field = field.max(r.abs());
        }
    }
    let mut momentum = 0.0_f64;
    for i in 0..n {
        let mut trace = h.partial(&env, dims.q(i))?;
        for a in 0..k {
            trace += x.momentum(a, a, i).value(&env)?;
        }
        momentum = momentum.max(trace.abs());
    }
    Ok(SolutionCheck {
        pass: base <= tol && field <= tol && momentum <= tol,
        base,
        field,
        momentum,
    })
}

/// Largest violations of `(Y_β)_α = 0`, `Y^i_β = 0` and `Σ_α (Y_α)^α_i = 0`.
pub fn kernel_residual(y: &KVectorFieldLocal, pt: &PhasePoint) -> Result<[f64; 3]> {
    let dims = y.dims();
    let env = pt.to_flat();
    let (k, n) = (dims.k(), dims.n());
    let mut out = [0.0_f64; 3];
    for a in 0..k {
        for b in 0..k {
            out[0] = out[0].max(y.base(a, b).value(&env)?.abs());
        }
        for i in 0..n {
            out[1] = out[1].max(y.field(a, i).value(&env)?.abs());
        }
    }
    for i in 0..n {
        let mut trace = 0.0;
        for a in 0..k {
            trace += y.momentum(a, a, i).value(&env)?;
        }
        out[2] = out[2].max(trace.abs());
    }
    Ok(out)
}

/// Membership of `y` in `ker ω♯ ∩ ker η♯` at `pt`, up to `tol`.
pub fn kernel_check(y: &KVectorFieldLocal, pt: &PhasePoint, tol: f64) -> Result<bool> {
    Ok(kernel_residual(y, pt)?.iter().all(|r| *r <= tol))
}

/// Samples of `x ↦ (x, ψ^i(x), ψ^α_i(x))` on a grid.
#[derive(Debug, Clone, PartialEq)]
pub struct PhaseMapGrid {
    dims: Dimensions,
    grid: GridSpec,
    q: Vec<f64>,
    p: Vec<f64>,
}

impl PhaseMapGrid {
    /// `q` holds `n` values per node and `p` holds `k·n` (`α`-outer), both in
    /// node storage order.
    pub fn new(dims: Dimensions, grid: GridSpec, q: Vec<f64>, p: Vec<f64>) -> Result<Self> {
        if grid.dim() != dims.k() {
            return Err(Error::ShapeMismatch {
                what: "grid axes",
                expected: dims.k(),
                found: grid.dim(),
            });
        }
        for axis in 0..grid.dim() {
            if grid.nodes_on_axis(axis) < 3 {
                return Err(Error::GridTooSmall {
                    axis,
                    nodes: grid.nodes_on_axis(axis),
                });
            }
        }
        let nodes = grid.node_count();
        expect_len(&q, nodes * dims.n(), "field values")?;
        expect_len(&p, nodes * dims.k() * dims.n(), "momentum values")?;
        if q.iter().chain(&p).any(|v| !v.is_finite()) {
            return Err(Error::NonFinite {
                what: "phase map values",
            });
        }
        Ok(Self { dims, grid, q, p })
    }

    pub fn dims(&self) -> Dimensions {
        self.dims
    }

    pub fn grid(&self) -> &GridSpec {
        &self.grid
    }

    pub fn q_values(&self) -> &[f64] {
        &self.q
    }

    pub fn p_values(&self) -> &[f64] {
        &self.p
    }

    /// Flat phase-space coordinates of node `lin`.
    pub fn phase_env(&self, lin: usize) -> Vec<f64> {
        let (k, n) = (self.dims.k(), self.dims.n());
        let mut env = self.grid.node(&self.grid.multi_index(lin));
        env.extend_from_slice(&self.q[lin * n..(lin + 1) * n]);
        env.extend_from_slice(&self.p[lin * k * n..(lin + 1) * k * n]);
        env
    }

    /// Largest third-difference estimate `|Δ³v| / h³` of any sampled
    /// component along any axis with at least four nodes. This bounds the
    /// truncation error of the stencils in [`hdw_residual`] (`≤ h²/3 · max|v'''|`).
    pub fn third_derivative_bound(&self) -> f64 {
        let (k, n) = (self.dims.k(), self.dims.n());
        let strides = self.grid.strides();
        let mut out = 0.0_f64;
        for axis in 0..k {
            let steps = self.grid.steps()[axis];
            if steps < 3 {
                continue;
            }
            let hs = self.grid.spacing()[axis];
            let h3 = hs * hs * hs;
            let s = strides[axis];
            for lin in 0..self.grid.node_count() {
                let i = (lin / s) % (steps + 1);
                if i + 3 > steps {
                    continue;
                }
                let d3 = |v: &[f64], w: usize, c: usize| {
                    let at = |m: usize| v[(lin + m * s) * w + c];
                    (at(3) - 3.0 * at(2) + 3.0 * at(1) - at(0)).abs() / h3
                };
                for c in 0..n {
                    out = out.max(d3(&self.q, n, c));
                }
                for c in 0..k * n {
                    out = out.max(d3(&self.p, k * n, c));
                }
            }
        }
        out
    }
}

/// Second-order derivative along `axis` of component `comp` of a node-major
/// array with `width` values per node: central in the interior, one-sided
/// three-point at the ends.
fn axis_derivative(
    values: &[f64],
    width: usize,
    comp: usize,
    grid: &GridSpec,
    strides: &[usize],
    lin: usize,
    axis: usize,
) -> f64 {
    let s = strides[axis];
    let last = grid.steps()[axis];
    let i = (lin / s) % (last + 1);
    let h = grid.spacing()[axis];
    let v = |node: usize| values[node * width + comp];
    if i == 0 {
        let v0 = v(lin);
        (4.0 * (v(lin + s) - v0) - (v(lin + 2 * s) - v0)) / (2.0 * h)
    } else if i == last {
        let v0 = v(lin);
        ((v(lin - 2 * s) - v0) - 4.0 * (v(lin - s) - v0)) / (2.0 * h)
    } else {
        (v(lin + s) - v(lin - s)) / (2.0 * h)
    }
}

/// Residual fields of the HDW equations for a sampled phase map.
#[derive(Debug, Clone, PartialEq)]
pub struct HdwResidual {
    /// `D_α ψ^i - ∂H/∂p^α_i`, `k·n` per node (`α`-outer).
    pub r1: Vec<f64>,
    /// `Σ_α D_α ψ^α_i + ∂H/∂q^i`, `n` per node.
    pub r2: Vec<f64>,
    pub max_r1: f64,
    pub max_r2: f64,
}

impl HdwResidual {
    pub fn max(&self) -> f64 {
        self.max_r1.max(self.max_r2)
    }
}

/// Finite-difference residuals of
/// `∂ψ^i/∂x^α = ∂H/∂p^α_i` and `Σ_α ∂ψ^α_i/∂x^α = -∂H/∂q^i` at every node.
pub fn hdw_residual(phi: &PhaseMapGrid, sys: &HamiltonianSystem) -> Result<HdwResidual> {
    let dims = phi.dims();
    if dims != sys.dims() {
        return Err(Error::ShapeMismatch {
            what: "phase map dimensions",
            expected: sys.dims().coord_count(),
            found: dims.coord_count(),
        });
    }
    let (k, n) = (dims.k(), dims.n());
    let grid = phi.grid();
    let strides = grid.strides();
    let h = sys.hamiltonian();
    let nodes = grid.node_count();
    let mut r1 = Vec::with_capacity(nodes * k * n);
    let mut r2 = Vec::with_capacity(nodes * n);
    let (mut max_r1, mut max_r2) = (0.0_f64, 0.0_f64);
    for lin in 0..nodes {
        let env = phi.phase_env(lin);
        for a in 0..k {
            for i in 0..n {
                let d = axis_derivative(&phi.q, n, i, grid, &strides, lin, a);
                let r = d - h.partial(&env, dims.p(a, i))?;
                max_r1 = max_r1.max(r.abs());
                r1.push(r);
            }
        }
        for i in 0..n {
            let mut r = h.partial(&env, dims.q(i))?;
            for a in 0..k {
                r += axis_derivative(&phi.p, k * n, a * n + i, grid, &strides, lin, a);
            }
            max_r2 = max_r2.max(r.abs());
            r2.push(r);
        }
    }
    Ok(HdwResidual {
        r1,
        r2,
        max_r1,
        max_r2,
    })
}
