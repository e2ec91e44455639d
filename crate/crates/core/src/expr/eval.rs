use alloc::boxed::Box;
use alloc::vec::Vec;

use super::ast::{BinOp, Expr, Func};
use super::ParamSet;
use crate::error::EvalError;
use crate::real::{Real, Scalar};

fn finite<T: Scalar>(v: T, what: &'static str) -> Result<T, EvalError> {
    if v.is_finite() {
        Ok(v)
    } else {
        Err(EvalError::NonFinite(what))
    }
}

pub(crate) fn apply_func<T: Scalar>(func: Func, a: T) -> Result<T, EvalError> {
    let v = a.value();
    let smooth = a.tangent_is_zero();
    let r = match func {
        Func::Sin => a.sin(),
        Func::Cos => a.cos(),
        Func::Exp => a.exp(),
        Func::Log => {
            if v <= 0.0 {
                return Err(EvalError::Domain { func: "log", arg: v });
            }
            a.ln()
        }
        Func::Sqrt => {
            if v < 0.0 {
                return Err(EvalError::Domain { func: "sqrt", arg: v });
            }
            if v == 0.0 && !smooth {
                return Err(EvalError::NonDifferentiable { func: "sqrt", arg: v });
            }
            a.sqrt()
        }
        Func::Abs => {
            if v == 0.0 && !smooth {
                return Err(EvalError::NonDifferentiable { func: "abs", arg: v });
            }
            a.abs()
        }
        Func::Asin => {
            if !(-1.0..=1.0).contains(&v) {
                return Err(EvalError::Domain { func: "asin", arg: v });
            }
            if v.abs() == 1.0 && !smooth {
                return Err(EvalError::NonDifferentiable { func: "asin", arg: v });
            }
            a.asin()
        }
    };
    finite(r, func.name())
}

pub(crate) fn apply_binary<T: Scalar>(op: BinOp, a: T, b: T) -> Result<T, EvalError> {
    match op {
        BinOp::Add => Ok(a + b),
        BinOp::Sub => Ok(a - b),
        BinOp::Mul => finite(a * b, "*"),
        BinOp::Div => {
            if b.value() == 0.0 {
                return Err(EvalError::DivisionByZero);
            }
            finite(a / b, "/")
        }
        BinOp::Pow => {
            let c = b.tangent_is_zero();
            pow(a, b, c)
        }
    }
}

/// `const_exp` selects the constant-exponent rules (integer powers of any
/// base); otherwise the base must be positive.
fn pow<T: Scalar>(base: T, exp: T, const_exp: bool) -> Result<T, EvalError> {
    let b = base.value();
    if const_exp {
        let e = exp.value();
        if libm::trunc(e) == e && e.abs() <= i32::MAX as f64 {
            let n = e as i32;
            if n < 0 && b == 0.0 {
                return Err(EvalError::DivisionByZero);
            }
            return finite(base.powi(n), "^");
        }
        if b < 0.0 {
            return Err(EvalError::Domain { func: "^", arg: b });
        }
        if b == 0.0 {
            if e < 0.0 {
                return Err(EvalError::DivisionByZero);
            }
            if e < 1.0 && !base.tangent_is_zero() {
                return Err(EvalError::NonDifferentiable { func: "^", arg: b });
            }
        }
        return finite(base.powf(e), "^");
    }
    if b <= 0.0 {
        return Err(EvalError::Domain { func: "^", arg: b });
    }
    finite((exp * base.ln()).exp(), "^")
}

impl Expr {
    /// Evaluates at `env`, a flat coordinate array in canonical order.
    pub fn eval(&self, env: &[f64], params: &ParamSet) -> Result<f64, EvalError> {
        self.eval_generic(env, params)
    }

    /// Exact first partial with respect to the coordinate at flat index `c`.
    pub fn partial(&self, env: &[f64], params: &ParamSet, c: usize) -> Result<f64, EvalError> {
        if c >= env.len() {
            return Err(EvalError::CoordinateOutOfRange {
                index: c,
                len: env.len(),
            });
        }
        let lifted: Vec<_> = env
            .iter()
            .enumerate()
            .map(|(j, v)| f64::seed(v, j == c))
            .collect();
        Ok(self.eval_generic(&lifted, params)?.eps)
    }

    pub fn eval_generic<T: Real>(&self, env: &[T], params: &ParamSet) -> Result<T, EvalError> {
        match self {
            Expr::Num(v) => Ok(T::constant(*v)),
            Expr::Coord(c) => env.get(*c).cloned().ok_or(EvalError::CoordinateOutOfRange {
                index: *c,
                len: env.len(),
            }),
            Expr::Param(name) => params
                .get(name)
                .map(T::constant)
                .ok_or_else(|| EvalError::UnboundParameter(name.clone())),
            Expr::Neg(a) => Ok(-a.eval_generic(env, params)?),
            Expr::Binary(BinOp::Pow, a, b) => {
                let base = a.eval_generic(env, params)?;
                let e = b.eval_generic(env, params)?;
                pow(base, e, b.is_constant())
            }
            Expr::Binary(op, a, b) => {
                let a = a.eval_generic(env, params)?;
                let b = b.eval_generic(env, params)?;
                apply_binary(*op, a, b)
            }
            Expr::Call(func, a) => apply_func(*func, a.eval_generic(env, params)?),
        }
    }

    /// Replaces every parameter by its value.
    pub fn bind(&self, params: &ParamSet) -> Result<Expr, EvalError> {
        Ok(match self {
            Expr::Param(name) => Expr::Num(
                params
                    .get(name)
                    .ok_or_else(|| EvalError::UnboundParameter(name.clone()))?,
            ),
            Expr::Num(_) | Expr::Coord(_) => self.clone(),
            Expr::Neg(a) => Expr::Neg(Box::new(a.bind(params)?)),
            Expr::Call(f, a) => Expr::Call(*f, Box::new(a.bind(params)?)),
            Expr::Binary(op, a, b) => {
                Expr::Binary(*op, Box::new(a.bind(params)?), Box::new(b.bind(params)?))
            }
        })
    }
}
