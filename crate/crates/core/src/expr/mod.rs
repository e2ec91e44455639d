//! Infix expression language for Hamiltonians, sections and potentials.
//!
//! Grammar (EBNF; whitespace is insignificant):
//!
//! ```text
//! expr   = term , { ("+" | "-") , term } ;
//! term   = unary , { ("*" | "/") , unary } ;
//! unary  = ("-" | "+") , unary | power ;
//! power  = atom , [ "^" , unary ] ;          (* right-associative *)
//! atom   = number | ident | func , "(" , expr , ")" | "(" , expr , ")" ;
//! func   = "sin" | "cos" | "exp" | "log" | "sqrt" | "abs" | "asin" ;
//! number = digits , [ "." , [ digits ] ] , [ ("e" | "E") , [ "+" | "-" ] , digits ]
//!        | "." , digits , [ exponent ] ;
//! ident  = letter , { letter | digit | "_" } ;
//! ```
//!
//! Identifiers resolve to coordinates (`x1`, `q2`, `p1_2`, ...) first and to
//! parameters second. Precedence runs `^` > unary minus > `* /` > `+ -`, so
//! `-q1^2` is `-(q1^2)` and `2^-1` is `0.5`.

mod ast;
mod eval;
mod parse;

use alloc::collections::BTreeMap;
use alloc::string::{String, ToString};

pub use ast::{BinOp, Expr, Func};
pub use parse::parse;

use crate::error::{Error, Result};
use crate::model::Coord;

/// Named real constants referenced by expressions (`m`, `C1`, `E`, ...).
#[derive(Debug, Clone, Default, PartialEq)]
pub struct ParamSet {
    values: BTreeMap<String, f64>,
}

impl ParamSet {
    pub fn new() -> Self {
        Self::default()
    }

    pub const fn empty() -> Self {
        Self {
            values: BTreeMap::new(),
        }
    }

    /// Adds or replaces a parameter. Names must be identifiers that cannot be
    /// confused with a coordinate or a function.
    pub fn insert(&mut self, name: &str, value: f64) -> Result<()> {
        if !is_valid_param_name(name) {
            return Err(Error::InvalidParameterName(name.to_string()));
        }
        if !value.is_finite() {
            return Err(Error::NonFinite { what: "parameter" });
        }
        self.values.insert(name.to_string(), value);
        Ok(())
    }

    pub fn with(mut self, name: &str, value: f64) -> Result<Self> {
        self.insert(name, value)?;
        Ok(self)
    }

    pub fn get(&self, name: &str) -> Option<f64> {
        self.values.get(name).copied()
    }

    pub fn contains(&self, name: &str) -> bool {
        self.values.contains_key(name)
    }

    pub fn iter(&self) -> impl Iterator<Item = (&str, f64)> {
        self.values.iter().map(|(k, v)| (k.as_str(), *v))
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }
}

fn is_valid_param_name(name: &str) -> bool {
    let mut chars = name.chars();
    let Some(first) = chars.next() else {
        return false;
    };
    first.is_ascii_alphabetic()
        && chars.all(|c| c.is_ascii_alphanumeric() || c == '_')
        && !Coord::is_coordinate_like(name)
        && Func::from_name(name).is_none()
}
