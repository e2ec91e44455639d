//! Scalar fields on phase space with exact partial derivatives.
//!
//! A [`ScalarField`] is a small immutable graph: parsed expressions at the
//! leaves, combined by derivative, substitution and arithmetic nodes. Every
//! field evaluates on the full phase-space environment (see
//! [`crate::model::coordinate_names`]); fields on `R^k × Q` simply never read
//! the momentum slots. Derivative nodes are evaluated by lifting the number
//! type one dual level, so derivatives of derivatives and derivatives of
//! compositions stay exact to rounding.

use alloc::collections::BTreeSet;
use alloc::sync::Arc;
use alloc::vec::Vec;

use crate::error::{Error, EvalError, Result};
use crate::expr::{self, Expr, ParamSet};
use crate::model::{Dimensions, PhasePoint};
use crate::real::{Real, MAX_DEPTH};

/// Default step for [`fd_partial`].
pub const DEFAULT_FD_STEP: f64 = 1e-5;

#[derive(Debug)]
enum Node {
    Const(f64),
    Expr(Expr),
    Partial(ScalarField, usize),
    Compose {
        outer: ScalarField,
        subs: Vec<(usize, ScalarField)>,
    },
    Neg(ScalarField),
    Add(ScalarField, ScalarField),
    Sub(ScalarField, ScalarField),
    Mul(ScalarField, ScalarField),
}

/// Deterministic, side-effect free real function of the phase-space
/// coordinates. Cloning is cheap.
#[derive(Debug, Clone)]
pub struct ScalarField(Arc<Node>);

impl ScalarField {
    fn node(n: Node) -> Self {
        Self(Arc::new(n))
    }

    pub fn constant(v: f64) -> Self {
        Self::node(Node::Const(v))
    }

    pub fn zero() -> Self {
        Self::constant(0.0)
    }

    /// Wraps an expression, substituting parameter values.
    pub fn from_expr(e: &Expr, params: &ParamSet) -> Result<Self> {
        Ok(Self::node(Node::Expr(e.bind(params)?)))
    }

    pub fn parse(text: &str, dims: Dimensions, params: &ParamSet) -> Result<Self> {
        let e = expr::parse(text, dims, params)?;
        Self::from_expr(&e, params)
    }

    /// The field `∂self/∂c`.
    pub fn partial_field(&self, c: usize) -> Self {
        Self::node(Node::Partial(self.clone(), c))
    }

    /// The field `self(env[c_1 ← g_1, ...])`: each listed coordinate slot is
    /// replaced by the value of its field, all evaluated at the same point.
    pub fn compose(&self, subs: Vec<(usize, ScalarField)>) -> Self {
        Self::node(Node::Compose {
            outer: self.clone(),
            subs,
        })
    }

    pub fn neg(&self) -> Self {
        Self::node(Node::Neg(self.clone()))
    }

    pub fn add(&self, other: &ScalarField) -> Self {
        Self::node(Node::Add(self.clone(), other.clone()))
    }

    pub fn sub(&self, other: &ScalarField) -> Self {
        Self::node(Node::Sub(self.clone(), other.clone()))
    }

    pub fn mul(&self, other: &ScalarField) -> Self {
        Self::node(Node::Mul(self.clone(), other.clone()))
    }

    pub fn value(&self, env: &[f64]) -> Result<f64, EvalError> {
        self.eval(env)
    }

    pub fn value_at(&self, pt: &PhasePoint) -> Result<f64, EvalError> {
        self.eval(&pt.to_flat())
    }

    /// Exact `∂self/∂c` at `env`.
    pub fn partial(&self, env: &[f64], c: usize) -> Result<f64, EvalError> {
        partial_at(self, env, c)
    }

    /// Exact `∂²self/∂c1∂c2` at `env`.
    pub fn second_partial(&self, env: &[f64], c1: usize, c2: usize) -> Result<f64, EvalError> {
        partial_at(&self.partial_field(c1), env, c2)
    }

    /// Evaluates over any supported number type.
    pub fn eval<T: Real>(&self, env: &[T]) -> Result<T, EvalError> {
        match &*self.0 {
            Node::Const(v) => Ok(T::constant(*v)),
            Node::Expr(e) => e.eval_generic(env, &EMPTY),
            Node::Partial(f, c) => partial_at(f, env, *c),
            Node::Compose { outer, subs } => {
                let mut inner = env.to_vec();
                for (slot, g) in subs {
                    let v = g.eval(env)?;
                    match inner.get_mut(*slot) {
                        Some(s) => *s = v,
                        None => {
                            return Err(EvalError::CoordinateOutOfRange {
                                index: *slot,
                                len: env.len(),
                            })
                        }
                    }
                }
                outer.eval(&inner)
            }
            Node::Neg(f) => Ok(-f.eval(env)?),
            Node::Add(a, b) => Ok(a.eval(env)? + b.eval(env)?),
            Node::Sub(a, b) => Ok(a.eval(env)? - b.eval(env)?),
            Node::Mul(a, b) => Ok(a.eval(env)? * b.eval(env)?),
        }
    }

    /// Coordinates the field may depend on (syntactic, conservative).
    pub fn references(&self) -> BTreeSet<usize> {
        match &*self.0 {
            Node::Const(_) => BTreeSet::new(),
            Node::Expr(e) => e.coordinates(),
            Node::Partial(f, _) | Node::Neg(f) => f.references(),
            Node::Compose { outer, subs } => {
                let mut out = outer.references();
                for (slot, _) in subs {
                    out.remove(slot);
                }
                for (slot, g) in subs {
                    if outer.references().contains(slot) {
                        out.extend(g.references());
                    }
                }
                out
            }
            Node::Add(a, b) | Node::Sub(a, b) | Node::Mul(a, b) => {
                let mut out = a.references();
                out.extend(b.references());
                out
            }
        }
    }
}

static EMPTY: ParamSet = ParamSet::empty();

fn partial_at<T: Real>(f: &ScalarField, env: &[T], c: usize) -> Result<T, EvalError> {
    if T::DEPTH >= MAX_DEPTH {
        return Err(EvalError::NestingTooDeep(MAX_DEPTH));
    }
    if c >= env.len() {
        return Err(EvalError::CoordinateOutOfRange {
            index: c,
            len: env.len(),
        });
    }
    let lifted: Vec<T::Lift> = env
        .iter()
        .enumerate()
        .map(|(j, v)| T::seed(v, j == c))
        .collect();
    Ok(T::tangent(f.eval(&lifted)?))
}

/// Central difference `(f(env + h e_c) - f(env - h e_c)) / 2h`. Test oracle
/// only; the library itself always uses exact partials.
pub fn fd_partial(f: &ScalarField, env: &[f64], c: usize, h: f64) -> Result<f64, EvalError> {
    if c >= env.len() {
        return Err(EvalError::CoordinateOutOfRange {
            index: c,
            len: env.len(),
        });
    }
    let mut plus = env.to_vec();
    let mut minus = env.to_vec();
    plus[c] += h;
    minus[c] -= h;
    Ok((f.value(&plus)? - f.value(&minus)?) / (2.0 * h))
}

/// A Hamiltonian `H(x, q, p)` on `R^k × (T¹_k)*Q`.
#[derive(Debug, Clone)]
pub struct HamiltonianSystem {
    dims: Dimensions,
    h: ScalarField,
}

impl HamiltonianSystem {
    pub fn new(dims: Dimensions, h: ScalarField) -> Result<Self> {
        if let Some(&c) = h.references().iter().find(|&&c| c >= dims.coord_count()) {
            return Err(Error::IndexOutOfRange {
                what: "Hamiltonian coordinate",
                index: c,
                len: dims.coord_count(),
            });
        }
        Ok(Self { dims, h })
    }

    pub fn parse(text: &str, dims: Dimensions, params: &ParamSet) -> Result<Self> {
        Self::new(dims, ScalarField::parse(text, dims, params)?)
    }

    pub fn dims(&self) -> Dimensions {
        self.dims
    }

    pub fn hamiltonian(&self) -> &ScalarField {
        &self.h
    }
}
