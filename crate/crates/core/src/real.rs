//! Number types for forward-mode differentiation.
//!
//! [`Dual`] carries a value and one tangent. Nesting duals gives higher
//! derivatives: `Dual<Dual<f64>>` holds a mixed second partial in
//! `eps.eps`. The nesting depth is bounded by [`MAX_DEPTH`] so that the
//! evaluator, which lifts its number type by one level per partial
//! derivative, monomorphizes to a finite set of types.

use core::ops::{Add, Div, Mul, Neg, Sub};

/// Deepest supported derivative nesting.
pub const MAX_DEPTH: usize = 4;

/// Arithmetic and elementary functions shared by `f64` and every dual level.
///
/// Domain checks belong to the caller; these functions follow the analytic
/// formulas and never test their inputs.
pub trait Scalar:
    Clone
    + core::fmt::Debug
    + Add<Output = Self>
    + Sub<Output = Self>
    + Mul<Output = Self>
    + Div<Output = Self>
    + Neg<Output = Self>
{
    fn constant(v: f64) -> Self;
    /// The primal value.
    fn value(&self) -> f64;
    /// True when every tangent component is exactly zero.
    fn tangent_is_zero(&self) -> bool;
    fn is_zero(&self) -> bool {
        self.value() == 0.0 && self.tangent_is_zero()
    }
    fn is_finite(&self) -> bool;
    fn scale(&self, c: f64) -> Self;

    fn sin(&self) -> Self;
    fn cos(&self) -> Self;
    fn exp(&self) -> Self;
    fn ln(&self) -> Self;
    fn sqrt(&self) -> Self;
    fn abs(&self) -> Self;
    fn asin(&self) -> Self;
    fn powi(&self, n: i32) -> Self;
    fn powf(&self, e: f64) -> Self;
}

/// A [`Scalar`] that can be lifted one dual level for differentiation.
pub trait Real: Scalar {
    /// One level up; at [`MAX_DEPTH`] this is `Self` and must not be used.
    type Lift: Real;
    const DEPTH: usize;

    /// Embeds `v` one level up with tangent 1 when `active`, else 0.
    fn seed(v: &Self, active: bool) -> Self::Lift;
    /// Extracts the tangent of a lifted number.
    fn tangent(v: Self::Lift) -> Self;
}

impl Scalar for f64 {
    fn constant(v: f64) -> Self {
        v
    }
    fn value(&self) -> f64 {
        *self
    }
    fn tangent_is_zero(&self) -> bool {
        true
    }
    fn is_finite(&self) -> bool {
        f64::is_finite(*self)
    }
    fn scale(&self, c: f64) -> Self {
        self * c
    }
    fn sin(&self) -> Self {
        libm::sin(*self)
    }
    fn cos(&self) -> Self {
        libm::cos(*self)
    }
    fn exp(&self) -> Self {
        libm::exp(*self)
    }
    fn ln(&self) -> Self {
        libm::log(*self)
    }
    fn sqrt(&self) -> Self {
        libm::sqrt(*self)
    }
    fn abs(&self) -> Self {
        libm::fabs(*self)
    }
    fn asin(&self) -> Self {
        libm::asin(*self)
    }
    fn powi(&self, n: i32) -> Self {
        powi(*self, n)
    }
    fn powf(&self, e: f64) -> Self {
        libm::pow(*self, e)
    }
}

/// Integer power by binary exponentiation; exact for small integer inputs.
fn powi(base: f64, n: i32) -> f64 {
    let mut e = n.unsigned_abs();
    let mut b = base;
    let mut acc = 1.0;
    while e > 0 {
        if e & 1 == 1 {
            acc *= b;
        }
        b *= b;
        e >>= 1;
    }
    if n < 0 {
        1.0 / acc
    } else {
        acc
    }
}

/// `re + eps·ε` with `ε² = 0`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Dual<T> {
    pub re: T,
    pub eps: T,
}

impl<T: Scalar> Dual<T> {
    pub fn new(re: T, eps: T) -> Self {
        Self { re, eps }
    }

    fn chain(&self, re: T, slope: impl FnOnce() -> T) -> Self {
        // Skipping the slope keeps singular derivatives (sqrt at 0, ...) out of
        // directions the value does not depend on.
        let eps = if self.eps.is_zero() {
            T::constant(0.0)
        } else {
            slope() * self.eps.clone()
        };
        Self { re, eps }
    }
}

impl<T: Scalar> Add for Dual<T> {
    type Output = Self;
    fn add(self, rhs: Self) -> Self {
        Self::new(self.re + rhs.re, self.eps + rhs.eps)
    }
}

impl<T: Scalar> Sub for Dual<T> {
    type Output = Self;
    fn sub(self, rhs: Self) -> Self {
        Self::new(self.re - rhs.re, self.eps - rhs.eps)
    }
}

impl<T: Scalar> Mul for Dual<T> {
    type Output = Self;
    fn mul(self, rhs: Self) -> Self {
        let eps = self.eps * rhs.re.clone() + self.re.clone() * rhs.eps;
        Self::new(self.re * rhs.re, eps)
    }
}

impl<T: Scalar> Div for Dual<T> {
    type Output = Self;
    fn div(self, rhs: Self) -> Self {
        let re = self.re / rhs.re.clone();
        let eps = (self.eps - re.clone() * rhs.eps) / rhs.re;
        Self::new(re, eps)
    }
}

impl<T: Scalar> Neg for Dual<T> {
    type Output = Self;
    fn neg(self) -> Self {
        Self::new(-self.re, -self.eps)
    }
}

impl<T: Scalar> Scalar for Dual<T> {
    fn constant(v: f64) -> Self {
        Self::new(T::constant(v), T::constant(0.0))
    }
    fn value(&self) -> f64 {
        self.re.value()
    }
    fn tangent_is_zero(&self) -> bool {
        self.re.tangent_is_zero() && self.eps.is_zero()
    }
    fn is_finite(&self) -> bool {
        self.re.is_finite() && self.eps.is_finite()
    }
    fn scale(&self, c: f64) -> Self {
        Self::new(self.re.scale(c), self.eps.scale(c))
    }
    fn sin(&self) -> Self {
        self.chain(self.re.sin(), || self.re.cos())
    }
    fn cos(&self) -> Self {
        self.chain(self.re.cos(), || -self.re.sin())
    }
    fn exp(&self) -> Self {
        let e = self.re.exp();
        self.chain(e.clone(), || e)
    }
    fn ln(&self) -> Self {
        self.chain(self.re.ln(), || T::constant(1.0) / self.re.clone())
    }
    fn sqrt(&self) -> Self {
        let s = self.re.sqrt();
        self.chain(s.clone(), || T::constant(0.5) / s)
    }
    fn abs(&self) -> Self {
        let sign = if self.re.value() < 0.0 { -1.0 } else { 1.0 };
        self.chain(self.re.abs(), || T::constant(sign))
    }
    fn asin(&self) -> Self {
        self.chain(self.re.asin(), || {
            let one = T::constant(1.0);
            one.clone() / (one - self.re.clone() * self.re.clone()).sqrt()
        })
    }
    fn powi(&self, n: i32) -> Self {
        if n == 0 {
            return Self::constant(1.0);
        }
        self.chain(self.re.powi(n), || self.re.powi(n - 1).scale(n as f64))
    }
    fn powf(&self, e: f64) -> Self {
        self.chain(self.re.powf(e), || self.re.powf(e - 1.0).scale(e))
    }
}

pub type D1 = Dual<f64>;
pub type D2 = Dual<D1>;
pub type D3 = Dual<D2>;
pub type D4 = Dual<D3>;

impl Real for f64 {
    type Lift = D1;
    const DEPTH: usize = 0;
    fn seed(v: &Self, active: bool) -> D1 {
        Dual::new(*v, if active { 1.0 } else { 0.0 })
    }
    fn tangent(v: D1) -> Self {
        v.eps
    }
}

macro_rules! lift_dual {
    ($t:ty, $lift:ty, $depth:expr) => {
        impl Real for $t {
            type Lift = $lift;
            const DEPTH: usize = $depth;
            fn seed(v: &Self, active: bool) -> $lift {
                Dual::new(v.clone(), <$t>::constant(if active { 1.0 } else { 0.0 }))
            }
            fn tangent(v: $lift) -> Self {
                v.eps
            }
        }
    };
}

lift_dual!(D1, D2, 1);
lift_dual!(D2, D3, 2);
lift_dual!(D3, D4, 3);

impl Real for D4 {
    type Lift = D4;
    const DEPTH: usize = MAX_DEPTH;
    fn seed(_: &Self, _: bool) -> D4 {
        unreachable!("evaluator checks depth before lifting")
    }
    fn tangent(_: D4) -> Self {
        unreachable!("evaluator checks depth before lifting")
    }
}
