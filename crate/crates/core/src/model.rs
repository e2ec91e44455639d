//! Darboux-coordinate data model.
//!
//! Every array in the crate, and every column set in the output files, uses
//! the ordering returned by [`coordinate_names`]: `x1..xk`, then `q1..qn`,
//! then the momenta `pα_i` with `α` outer and `i` inner. Indices in the Rust
//! API are 0-based; names are 1-based.

use alloc::format;
use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;
use core::fmt;

use crate::error::{Error, Result};

/// The pair `(k, n)`: number of space-time parameters and of field components.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Dimensions {
    k: usize,
    n: usize,
}

impl Dimensions {
    pub fn new(k: usize, n: usize) -> Result<Self> {
        if k == 0 || n == 0 {
            return Err(Error::InvalidDimensions { k, n });
        }
        Ok(Self { k, n })
    }

    pub fn k(&self) -> usize {
        self.k
    }

    pub fn n(&self) -> usize {
        self.n
    }

    /// Phase-space dimension `k(n+1) + n`.
    pub fn coord_count(&self) -> usize {
        self.k + self.n + self.k * self.n
    }

    /// Dimension of `R^k × Q`.
    pub fn base_count(&self) -> usize {
        self.k + self.n
    }

    /// Flat index of `x^α`.
    pub fn x(&self, alpha: usize) -> usize {
        debug_assert!(alpha < self.k);
        alpha
    }

    /// Flat index of `q^i`.
    pub fn q(&self, i: usize) -> usize {
        debug_assert!(i < self.n);
        self.k + i
    }

    /// Flat index of `p^α_i`.
    pub fn p(&self, alpha: usize, i: usize) -> usize {
        debug_assert!(alpha < self.k && i < self.n);
        self.k + self.n + alpha * self.n + i
    }

    pub fn coord(&self, index: usize) -> Option<Coord> {
        let (k, n) = (self.k, self.n);
        if index < k {
            Some(Coord::X(index))
        } else if index < k + n {
            Some(Coord::Q(index - k))
        } else if index < self.coord_count() {
            let r = index - k - n;
            Some(Coord::P(r / n, r % n))
        } else {
            None
        }
    }

    pub fn index_of(&self, coord: Coord) -> Option<usize> {
        match coord {
            Coord::X(a) if a < self.k => Some(self.x(a)),
            Coord::Q(i) if i < self.n => Some(self.q(i)),
            Coord::P(a, i) if a < self.k && i < self.n => Some(self.p(a, i)),
            _ => None,
        }
    }

    /// Resolves a coordinate name such as `x2`, `q1` or `p3_1`.
    pub fn lookup(&self, name: &str) -> Option<usize> {
        Coord::parse(name).and_then(|c| self.index_of(c))
    }

    pub fn name(&self, index: usize) -> Option<String> {
        self.coord(index).map(|c| format!("{c}"))
    }

    pub fn is_momentum(&self, index: usize) -> bool {
        index >= self.base_count() && index < self.coord_count()
    }
}

/// A single Darboux coordinate, 0-based.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Coord {
    X(usize),
    Q(usize),
    P(usize, usize),
}

impl Coord {
    /// Parses the canonical spelling. Leading zeros and index 0 are rejected so
    /// that every coordinate has exactly one name.
    pub fn parse(name: &str) -> Option<Coord> {
        fn index(digits: &str) -> Option<usize> {
            if digits.is_empty() || digits.starts_with('0') {
                return None;
            }
            if !digits.bytes().all(|b| b.is_ascii_digit()) {
                return None;
            }
            digits.parse::<usize>().ok().map(|v| v - 1)
        }
        let (head, rest) = name.split_at(name.chars().next()?.len_utf8());
        match head {
            "x" => index(rest).map(Coord::X),
            "q" => index(rest).map(Coord::Q),
            "p" => {
                let (a, i) = rest.split_once('_')?;
                Some(Coord::P(index(a)?, index(i)?))
            }
            _ => None,
        }
    }

    /// True when `name` has the shape of a coordinate name for some dimensions.
    pub fn is_coordinate_like(name: &str) -> bool {
        Coord::parse(name).is_some()
    }
}

impl fmt::Display for Coord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match *self {
            Coord::X(a) => write!(f, "x{}", a + 1),
            Coord::Q(i) => write!(f, "q{}", i + 1),
            Coord::P(a, i) => write!(f, "p{}_{}", a + 1, i + 1),
        }
    }
}

/// Canonical coordinate names for `dims`.
pub fn coordinate_names(dims: Dimensions) -> Vec<String> {
    (0..dims.coord_count())
        .map(|i| format!("{}", dims.coord(i).expect("index in range")))
        .collect()
}

/// The coordinate along which the Reeb field `R_α` points. In Darboux
/// coordinates `R_α = ∂/∂x^α`.
pub fn reeb_component(dims: Dimensions, alpha: usize) -> Result<String> {
    if alpha >= dims.k() {
        return Err(Error::IndexOutOfRange {
            what: "Reeb field",
            index: alpha,
            len: dims.k(),
        });
    }
    Ok(format!("{}", Coord::X(alpha)))
}

fn check_finite(values: &[f64], what: &'static str) -> Result<()> {
    if values.iter().all(|v| v.is_finite()) {
        Ok(())
    } else {
        Err(Error::NonFinite { what })
    }
}

fn check_len(values: &[f64], expected: usize, what: &'static str) -> Result<()> {
    if values.len() == expected {
        Ok(())
    } else {
        Err(Error::ShapeMismatch {
            what,
            expected,
            found: values.len(),
        })
    }
}

/// A point `(x, q, p)` of `R^k × (T¹_k)*Q`. Momenta are stored `α`-outer.
#[derive(Debug, Clone, PartialEq)]
pub struct PhasePoint {
    dims: Dimensions,
    x: Vec<f64>,
    q: Vec<f64>,
    p: Vec<f64>,
}

impl PhasePoint {
    pub fn new(dims: Dimensions, x: Vec<f64>, q: Vec<f64>, p: Vec<f64>) -> Result<Self> {
        check_len(&x, dims.k(), "x")?;
        check_len(&q, dims.n(), "q")?;
        check_len(&p, dims.k() * dims.n(), "p")?;
        check_finite(&x, "x")?;
        check_finite(&q, "q")?;
        check_finite(&p, "p")?;
        Ok(Self { dims, x, q, p })
    }

    pub fn from_flat(dims: Dimensions, flat: &[f64]) -> Result<Self> {
        check_len(flat, dims.coord_count(), "phase point")?;
        let (k, n) = (dims.k(), dims.n());
        Self::new(
            dims,
            flat[..k].to_vec(),
            flat[k..k + n].to_vec(),
            flat[k + n..].to_vec(),
        )
    }

    pub fn to_flat(&self) -> Vec<f64> {
        let mut out = Vec::with_capacity(self.dims.coord_count());
        out.extend_from_slice(&self.x);
        out.extend_from_slice(&self.q);
        out.extend_from_slice(&self.p);
        out
    }

    pub fn dims(&self) -> Dimensions {
        self.dims
    }

    pub fn x(&self) -> &[f64] {
        &self.x
    }

    pub fn q(&self) -> &[f64] {
        &self.q
    }

    pub fn p(&self) -> &[f64] {
        &self.p
    }

    /// `p^α_i`.
    pub fn momentum(&self, alpha: usize, i: usize) -> f64 {
        self.p[alpha * self.dims.n() + i]
    }

    pub fn base(&self) -> BasePoint {
        BasePoint {
            dims: self.dims,
            x: self.x.clone(),
            q: self.q.clone(),
        }
    }
}

/// A point `(x, q)` of `R^k × Q`.
#[derive(Debug, Clone, PartialEq)]
pub struct BasePoint {
    dims: Dimensions,
    x: Vec<f64>,
    q: Vec<f64>,
}

impl BasePoint {
    pub fn new(dims: Dimensions, x: Vec<f64>, q: Vec<f64>) -> Result<Self> {
        check_len(&x, dims.k(), "x")?;
        check_len(&q, dims.n(), "q")?;
        check_finite(&x, "x")?;
        check_finite(&q, "q")?;
        Ok(Self { dims, x, q })
    }

    pub fn dims(&self) -> Dimensions {
        self.dims
    }

    pub fn x(&self) -> &[f64] {
        &self.x
    }

    pub fn q(&self) -> &[f64] {
        &self.q
    }

    /// Full phase-space environment with all momenta set to zero.
    pub fn to_env(&self) -> Vec<f64> {
        let mut env = vec![0.0; self.dims.coord_count()];
        env[..self.dims.k()].copy_from_slice(&self.x);
        env[self.dims.k()..self.dims.base_count()].copy_from_slice(&self.q);
        env
    }

    pub fn with_momenta(&self, p: Vec<f64>) -> Result<PhasePoint> {
        PhasePoint::new(self.dims, self.x.clone(), self.q.clone(), p)
    }
}
