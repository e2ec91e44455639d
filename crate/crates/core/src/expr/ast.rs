use alloc::boxed::Box;
use alloc::collections::BTreeSet;
use core::fmt;

use crate::model::Dimensions;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BinOp {
    Add,
    Sub,
    Mul,
    Div,
    Pow,
}

impl BinOp {
    fn symbol(self) -> &'static str {
        match self {
            BinOp::Add => "+",
            BinOp::Sub => "-",
            BinOp::Mul => "*",
            BinOp::Div => "/",
            BinOp::Pow => "^",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Func {
    Sin,
    Cos,
    Exp,
    Log,
    Sqrt,
    Abs,
    Asin,
}

impl Func {
    pub fn from_name(name: &str) -> Option<Func> {
        Some(match name {
            "sin" => Func::Sin,
            "cos" => Func::Cos,
            "exp" => Func::Exp,
            "log" => Func::Log,
            "sqrt" => Func::Sqrt,
            "abs" => Func::Abs,
            "asin" => Func::Asin,
            _ => return None,
        })
    }

    pub fn name(self) -> &'static str {
        match self {
            Func::Sin => "sin",
            Func::Cos => "cos",
            Func::Exp => "exp",
            Func::Log => "log",
            Func::Sqrt => "sqrt",
            Func::Abs => "abs",
            Func::Asin => "asin",
        }
    }
}

/// Expression tree. Coordinates are stored by flat index (see
/// [`crate::model::coordinate_names`]); parameters by name.
#[derive(Debug, Clone, PartialEq)]
pub enum Expr {
    Num(f64),
    Coord(usize),
    Param(alloc::string::String),
    Neg(Box<Expr>),
    Binary(BinOp, Box<Expr>, Box<Expr>),
    Call(Func, Box<Expr>),
}

impl Expr {
    pub fn binary(op: BinOp, lhs: Expr, rhs: Expr) -> Expr {
        Expr::Binary(op, Box::new(lhs), Box::new(rhs))
    }

    pub fn call(func: Func, arg: Expr) -> Expr {
        Expr::Call(func, Box::new(arg))
    }

    pub fn neg(arg: Expr) -> Expr {
        Expr::Neg(Box::new(arg))
    }

    /// Coordinate indices appearing in the tree.
    pub fn coordinates(&self) -> BTreeSet<usize> {
        let mut out = BTreeSet::new();
        self.collect_coords(&mut out);
        out
    }

    /// True when no coordinate appears in the tree.
    pub fn is_constant(&self) -> bool {
        match self {
            Expr::Coord(_) => false,
            Expr::Num(_) | Expr::Param(_) => true,
            Expr::Neg(a) | Expr::Call(_, a) => a.is_constant(),
            Expr::Binary(_, a, b) => a.is_constant() && b.is_constant(),
        }
    }

    fn collect_coords(&self, out: &mut BTreeSet<usize>) {
        match self {
            Expr::Coord(c) => {
                out.insert(*c);
            }
            Expr::Num(_) | Expr::Param(_) => {}
            Expr::Neg(a) | Expr::Call(_, a) => a.collect_coords(out),
            Expr::Binary(_, a, b) => {
                a.collect_coords(out);
                b.collect_coords(out);
            }
        }
    }

    /// Fully parenthesized rendering that [`crate::expr::parse`] reads back
    /// to an evaluation-identical tree.
    pub fn display(&self, dims: Dimensions) -> Printer<'_> {
        Printer { expr: self, dims }
    }
}

pub struct Printer<'a> {
    expr: &'a Expr,
    dims: Dimensions,
}

impl fmt::Display for Printer<'_> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let sub = |e| Printer {
            expr: e,
            dims: self.dims,
        };
        match self.expr {
            Expr::Num(v) if *v < 0.0 || (*v == 0.0 && v.is_sign_negative()) => {
                write!(f, "(-{:?})", -v)
            }
            Expr::Num(v) => write!(f, "{v:?}"),
            Expr::Coord(c) => match self.dims.coord(*c) {
                Some(coord) => write!(f, "{coord}"),
                None => write!(f, "<coord {c}>"),
            },
            Expr::Param(p) => f.write_str(p),
            Expr::Neg(a) => write!(f, "(-{})", sub(a)),
            Expr::Binary(op, a, b) => write!(f, "({} {} {})", sub(a), op.symbol(), sub(b)),
            Expr::Call(func, a) => write!(f, "{}({})", func.name(), sub(a)),
        }
    }
}
