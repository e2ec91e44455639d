use alloc::string::String;
use alloc::vec::Vec;

pub type Result<T, E = Error> = core::result::Result<T, E>;

/// Failure while evaluating an expression or scalar field.
#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum EvalError {
    #[error("unbound parameter `{0}`")]
    UnboundParameter(String),
    #[error("coordinate index {index} outside environment of length {len}")]
    CoordinateOutOfRange { index: usize, len: usize },
    #[error("{func} is undefined at {arg}")]
    Domain { func: &'static str, arg: f64 },
    #[error("{func} is not differentiable at {arg}")]
    NonDifferentiable { func: &'static str, arg: f64 },
    #[error("division by zero")]
    DivisionByZero,
    #[error("{0} produced a non-finite value")]
    NonFinite(&'static str),
    #[error("derivative nesting deeper than {0} levels")]
    NestingTooDeep(usize),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum ParseErrorKind {
    EmptyInput,
    UnexpectedChar(char),
    UnexpectedEnd,
    UnexpectedToken(String),
    InvalidNumber(String),
    UnknownIdentifier(String),
    UnknownFunction(String),
}

/// Syntax or name-resolution error; `pos` is a byte offset into the source text.
#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
#[error("{kind} at position {pos}")]
pub struct ParseError {
    pub kind: ParseErrorKind,
    pub pos: usize,
}

impl core::fmt::Display for ParseErrorKind {
    fn fmt(&self, f: &mut core::fmt::Formatter<'_>) -> core::fmt::Result {
        match self {
            ParseErrorKind::EmptyInput => f.write_str("empty expression"),
            ParseErrorKind::UnexpectedChar(c) => write!(f, "unexpected character `{c}`"),
            ParseErrorKind::UnexpectedEnd => f.write_str("unexpected end of input"),
            ParseErrorKind::UnexpectedToken(t) => write!(f, "unexpected `{t}`"),
            ParseErrorKind::InvalidNumber(t) => write!(f, "invalid number `{t}`"),
            ParseErrorKind::UnknownIdentifier(t) => write!(f, "unknown identifier `{t}`"),
            ParseErrorKind::UnknownFunction(t) => write!(f, "unknown function `{t}`"),
        }
    }
}

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum Error {
    #[error("invalid dimensions k={k}, n={n}: both must be at least 1")]
    InvalidDimensions { k: usize, n: usize },
    #[error("{what}: expected length {expected}, found {found}")]
    ShapeMismatch {
        what: &'static str,
        expected: usize,
        found: usize,
    },
    #[error("{what} contains a non-finite value")]
    NonFinite { what: &'static str },
    #[error("{what} index {index} out of range 0..{len}")]
    IndexOutOfRange {
        what: &'static str,
        index: usize,
        len: usize,
    },
    #[error("invalid parameter name `{0}`")]
    InvalidParameterName(String),
    #[error("{what} references momentum coordinate `{coord}`")]
    MomentumDependence { what: &'static str, coord: String },
    #[error("invalid grid: {0}")]
    InvalidGrid(&'static str),
    #[error("axis {axis} has {nodes} nodes; at least 3 are required")]
    GridTooSmall { axis: usize, nodes: usize },
    #[error("at least {required} samples required, got {got}")]
    TooFewSamples { required: usize, got: usize },
    #[error("axis order {0:?} is not a permutation")]
    InvalidAxisOrder(Vec<usize>),
    #[error("integration blew up at node {node:?}: |q| = {magnitude:e}")]
    BlowUp { node: Vec<f64>, magnitude: f64 },
    #[error("evaluation failed at node {node:?}: {source}")]
    NodeEval { node: Vec<f64>, source: EvalError },
    #[error(transparent)]
    Parse(#[from] ParseError),
    #[error(transparent)]
    Eval(#[from] EvalError),
}
