//! Exact first derivatives over phase-space coordinates.
//!
//! [`Dual1`] carries a value together with its gradient with respect to the
//! flattened phase-space coordinates (all positions particle-major, then all
//! velocities particle-major). [`Jet`] is a univariate dual over any
//! [`Scalar`], used to differentiate a scalar profile with respect to its own
//! argument while keeping the phase-space gradient of the result.
//!
//! [`finite_diff_grad`] is an independent central-difference oracle.

use std::fmt::Debug;
use std::ops::{Add, Div, Mul, Neg, Sub};

use thiserror::Error;

use crate::phasespace::PhasePoint;

/// Evaluation left the domain of a function.
#[derive(Debug, Clone, PartialEq, Error)]
#[error("domain error: {0}")]
pub struct DomainError(pub String);

impl DomainError {
    pub fn new(msg: impl Into<String>) -> Self {
        DomainError(msg.into())
    }
}

/// Numeric tower shared by plain reals, [`Dual1`] and [`Jet`].
///
/// The elementary functions do not check their domain; callers that accept
/// user input (the expression evaluator) check values before applying them.
pub trait Scalar:
    Clone
    + Debug
    + Send
    + Sync
    + From<f64>
    + Add<Output = Self>
    + Sub<Output = Self>
    + Mul<Output = Self>
    + Div<Output = Self>
    + Neg<Output = Self>
{
    fn value(&self) -> f64;
    /// True if the value and every carried derivative are finite.
    fn is_finite(&self) -> bool;
    fn sqrt(self) -> Self;
    fn exp(self) -> Self;
    fn ln(self) -> Self;
    fn sin(self) -> Self;
    fn cos(self) -> Self;
    fn abs(self) -> Self;
    fn powi(self, n: i32) -> Self;
    /// `self^e`. The derivative with respect to `e` is only carried for a
    /// positive base.
    fn powf(self, e: Self) -> Self;

    fn square(self) -> Self {
        self.clone() * self
    }
}

impl Scalar for f64 {
    fn value(&self) -> f64 {
        *self
    }
    fn is_finite(&self) -> bool {
        f64::is_finite(*self)
    }
    fn sqrt(self) -> Self {
        f64::sqrt(self)
    }
    fn exp(self) -> Self {
        f64::exp(self)
    }
    fn ln(self) -> Self {
        f64::ln(self)
    }
    fn sin(self) -> Self {
        f64::sin(self)
    }
    fn cos(self) -> Self {
        f64::cos(self)
    }
    fn abs(self) -> Self {
        f64::abs(self)
    }
    fn powi(self, n: i32) -> Self {
        f64::powi(self, n)
    }
    fn powf(self, e: Self) -> Self {
        f64::powf(self, e)
    }
}

/// Value plus gradient over the 6N phase-space coordinates.
///
/// An empty gradient stands for the zero gradient of a constant; arithmetic
/// broadcasts it against full-length gradients.
#[derive(Debug, Clone, PartialEq)]
pub struct Dual1 {
    value: f64,
    grad: Vec<f64>,
}

impl Dual1 {
    pub fn constant(value: f64) -> Self {
        Dual1 { value, grad: Vec::new() }
    }

    /// Independent variable number `index` out of `dim`.
    pub fn variable(value: f64, index: usize, dim: usize) -> Self {
        assert!(index < dim, "variable index {index} out of range for dimension {dim}");
        let mut grad = vec![0.0; dim];
        grad[index] = 1.0;
        Dual1 { value, grad }
    }

    pub fn from_parts(value: f64, grad: Vec<f64>) -> Self {
        Dual1 { value, grad }
    }

    pub fn value(&self) -> f64 {
        self.value
    }

    /// Partial derivative with respect to coordinate `k` (zero past the
    /// stored length).
    pub fn partial(&self, k: usize) -> f64 {
        self.grad.get(k).copied().unwrap_or(0.0)
    }

    pub fn gradient(&self) -> &[f64] {
        &self.grad
    }

    /// Gradient padded with zeros to exactly `dim` entries.
    pub fn gradient_padded(&self, dim: usize) -> Vec<f64> {
        let mut g = self.grad.clone();
        g.resize(dim, 0.0);
        g
    }

    /// Apply a unary function with value `f` and derivative `df` at `self`.
    fn chain(&self, f: f64, df: f64) -> Dual1 {
        Dual1 { value: f, grad: self.grad.iter().map(|g| g * df).collect() }
    }

    fn is_constant(&self) -> bool {
        self.grad.iter().all(|g| *g == 0.0)
    }
}

/// `ca * a + cb * b` with zero-broadcasting of shorter gradients.
fn combine(a: &[f64], ca: f64, b: &[f64], cb: f64) -> Vec<f64> {
    let n = a.len().max(b.len());
    (0..n)
        .map(|k| {
            let x = a.get(k).map_or(0.0, |g| ca * g);
            let y = b.get(k).map_or(0.0, |g| cb * g);
            x + y
        })
        .collect()
}

impl From<f64> for Dual1 {
    fn from(value: f64) -> Self {
        Dual1::constant(value)
    }
}

impl Add for Dual1 {
    type Output = Dual1;
    fn add(self, rhs: Dual1) -> Dual1 {
        Dual1 { value: self.value + rhs.value, grad: combine(&self.grad, 1.0, &rhs.grad, 1.0) }
    }
}

impl Sub for Dual1 {
    type Output = Dual1;
    fn sub(self, rhs: Dual1) -> Dual1 {
        Dual1 { value: self.value - rhs.value, grad: combine(&self.grad, 1.0, &rhs.grad, -1.0) }
    }
}

impl Mul for Dual1 {
    type Output = Dual1;
    fn mul(self, rhs: Dual1) -> Dual1 {
        Dual1 { value: self.value * rhs.value, grad: combine(&self.grad, rhs.value, &rhs.grad, self.value) }
    }
}

impl Div for Dual1 {
    type Output = Dual1;
    fn div(self, rhs: Dual1) -> Dual1 {
        let q = self.value / rhs.value;
        Dual1 { value: q, grad: combine(&self.grad, 1.0 / rhs.value, &rhs.grad, -q / rhs.value) }
    }
}

impl Neg for Dual1 {
    type Output = Dual1;
    fn neg(self) -> Dual1 {
        Dual1 { value: -self.value, grad: self.grad.iter().map(|g| -g).collect() }
    }
}

impl Scalar for Dual1 {
    fn value(&self) -> f64 {
        self.value
    }
    fn is_finite(&self) -> bool {
        self.value.is_finite() && self.grad.iter().all(|g| g.is_finite())
    }
    fn sqrt(self) -> Self {
        let s = self.value.sqrt();
        self.chain(s, 0.5 / s)
    }
    fn exp(self) -> Self {
        let e = self.value.exp();
        self.chain(e, e)
    }
    fn ln(self) -> Self {
        self.chain(self.value.ln(), 1.0 / self.value)
    }
    fn sin(self) -> Self {
        self.chain(self.value.sin(), self.value.cos())
    }
    fn cos(self) -> Self {
        self.chain(self.value.cos(), -self.value.sin())
    }
    fn abs(self) -> Self {
        let sign = if self.value > 0.0 {
            1.0
        } else if self.value < 0.0 {
            -1.0
        } else {
            0.0
        };
        self.chain(self.value.abs(), sign)
    }
    fn powi(self, n: i32) -> Self {
        let d = if n == 0 { 0.0 } else { f64::from(n) * self.value.powi(n - 1) };
        self.chain(self.value.powi(n), d)
    }
    fn powf(self, e: Self) -> Self {
        let value = self.value.powf(e.value);
        let da = if e.value == 0.0 { 0.0 } else { e.value * self.value.powf(e.value - 1.0) };
        if e.is_constant() {
            return self.chain(value, da);
        }
        let de = if self.value > 0.0 { value * self.value.ln() } else { 0.0 };
        Dual1 { value, grad: combine(&self.grad, da, &e.grad, de) }
    }
}

/// Univariate first-order jet `value + deriv·ε` over any scalar type.
#[derive(Debug, Clone, PartialEq)]
pub struct Jet<T> {
    pub value: T,
    pub deriv: T,
}

impl<T: Scalar> Jet<T> {
    pub fn variable(value: T) -> Self {
        Jet { value, deriv: T::from(1.0) }
    }

    fn chain(self, f: T, df: T) -> Self {
        Jet { value: f, deriv: self.deriv * df }
    }
}

impl<T: Scalar> From<f64> for Jet<T> {
    fn from(value: f64) -> Self {
        Jet { value: T::from(value), deriv: T::from(0.0) }
    }
}

impl<T: Scalar> Add for Jet<T> {
    type Output = Jet<T>;
    fn add(self, rhs: Self) -> Self {
        Jet { value: self.value + rhs.value, deriv: self.deriv + rhs.deriv }
    }
}

impl<T: Scalar> Sub for Jet<T> {
    type Output = Jet<T>;
    fn sub(self, rhs: Self) -> Self {
        Jet { value: self.value - rhs.value, deriv: self.deriv - rhs.deriv }
    }
}

impl<T: Scalar> Mul for Jet<T> {
    type Output = Jet<T>;
    fn mul(self, rhs: Self) -> Self {
        let deriv = self.deriv * rhs.value.clone() + self.value.clone() * rhs.deriv;
        Jet { value: self.value * rhs.value, deriv }
    }
}

impl<T: Scalar> Div for Jet<T> {
    type Output = Jet<T>;
    fn div(self, rhs: Self) -> Self {
        let q = self.value / rhs.value.clone();
        let deriv = (self.deriv - q.clone() * rhs.deriv) / rhs.value;
        Jet { value: q, deriv }
    }
}

impl<T: Scalar> Neg for Jet<T> {
    type Output = Jet<T>;
    fn neg(self) -> Self {
        Jet { value: -self.value, deriv: -self.deriv }
    }
}

impl<T: Scalar> Scalar for Jet<T> {
    fn value(&self) -> f64 {
        self.value.value()
    }
    fn is_finite(&self) -> bool {
        self.value.is_finite() && self.deriv.is_finite()
    }
    fn sqrt(self) -> Self {
        let s = self.value.clone().sqrt();
        let ds = T::from(0.5) / s.clone();
        self.chain(s, ds)
    }
    fn exp(self) -> Self {
        let e = self.value.clone().exp();
        self.chain(e.clone(), e)
    }
    fn ln(self) -> Self {
        let d = T::from(1.0) / self.value.clone();
        let l = self.value.clone().ln();
        self.chain(l, d)
    }
    fn sin(self) -> Self {
        let (s, c) = (self.value.clone().sin(), self.value.clone().cos());
        self.chain(s, c)
    }
    fn cos(self) -> Self {
        let (c, s) = (self.value.clone().cos(), self.value.clone().sin());
        self.chain(c, -s)
    }
    fn abs(self) -> Self {
        let v = self.value.value();
        let sign = if v > 0.0 {
            1.0
        } else if v < 0.0 {
            -1.0
        } else {
            0.0
        };
        let a = self.value.clone().abs();
        self.chain(a, T::from(sign))
    }
    fn powi(self, n: i32) -> Self {
        let d = if n == 0 { T::from(0.0) } else { T::from(f64::from(n)) * self.value.clone().powi(n - 1) };
        let p = self.value.clone().powi(n);
        self.chain(p, d)
    }
    fn powf(self, e: Self) -> Self {
        let value = self.value.clone().powf(e.value.clone());
        let da = if e.value.value() == 0.0 {
            T::from(0.0)
        } else {
            e.value.clone() * self.value.clone().powf(e.value.clone() - T::from(1.0))
        };
        let mut deriv = self.deriv * da;
        if self.value.value() > 0.0 {
            deriv = deriv + e.deriv * value.clone() * self.value.ln();
        }
        Jet { value, deriv }
    }
}

/// A scalar function of the flattened phase-space coordinates, evaluable
/// over any numeric tower.
pub trait ScalarField {
    fn eval<T: Scalar>(&self, coords: &[T]) -> Result<T, DomainError>;
}

/// Lifted coordinates of `p`: coordinate `k` carries the unit gradient `e_k`.
pub fn lift_coords(p: &PhasePoint) -> Vec<Dual1> {
    let c = p.coords();
    let dim = c.len();
    c.iter().enumerate().map(|(k, &x)| Dual1::variable(x, k, dim)).collect()
}

/// Value and all 6N partial derivatives of `f` at `p`.
pub fn lift_eval<F: ScalarField>(f: &F, p: &PhasePoint) -> Result<Dual1, DomainError> {
    let coords = lift_coords(p);
    let out = f.eval(&coords)?;
    if !out.is_finite() {
        return Err(DomainError::new("non-finite value or derivative"));
    }
    let dim = coords.len();
    Ok(Dual1::from_parts(out.value(), out.gradient_padded(dim)))
}

/// Central differences `(f(p+h e_k) - f(p-h e_k)) / 2h` for every coordinate.
pub fn finite_diff_grad<F: ScalarField>(f: &F, p: &PhasePoint, h: f64) -> Result<Vec<f64>, DomainError> {
    let base = p.coords();
    let mut grad = Vec::with_capacity(base.len());
    let mut probe = base.clone();
    for k in 0..base.len() {
        probe[k] = base[k] + h;
        let fp = f.eval(&probe)?;
        probe[k] = base[k] - h;
        let fm = f.eval(&probe)?;
        probe[k] = base[k];
        grad.push((fp - fm) / (2.0 * h));
    }
    Ok(grad)
}

#[cfg(test)]
mod tests {
    use super::*;

    struct V1Squared;
    impl ScalarField for V1Squared {
        fn eval<T: Scalar>(&self, c: &[T]) -> Result<T, DomainError> {
            Ok(c[3].clone() * c[3].clone())
        }
    }

    struct V1TimesX2;
    impl ScalarField for V1TimesX2 {
        fn eval<T: Scalar>(&self, c: &[T]) -> Result<T, DomainError> {
            Ok(c[3].clone() * c[1].clone())
        }
    }

    struct Seven;
    impl ScalarField for Seven {
        fn eval<T: Scalar>(&self, _c: &[T]) -> Result<T, DomainError> {
            Ok(T::from(7.0))
        }
    }

    struct ExpV3;
    impl ScalarField for ExpV3 {
        fn eval<T: Scalar>(&self, c: &[T]) -> Result<T, DomainError> {
            Ok(c[5].clone().exp())
        }
    }

    /// sqrt(1 - v^2), undefined outside the unit ball.
    struct LorentzFactor;
    impl ScalarField for LorentzFactor {
        fn eval<T: Scalar>(&self, c: &[T]) -> Result<T, DomainError> {
            let s = T::from(1.0) - (c[3].clone().square() + c[4].clone().square() + c[5].clone().square());
            if s.value() <= 0.0 {
                return Err(DomainError::new("v^2 >= 1"));
            }
            Ok(s.sqrt())
        }
    }

    fn point(x: [f64; 3], v: [f64; 3]) -> PhasePoint {
        PhasePoint::new(vec![x], vec![v]).unwrap()
    }

    #[test]
    fn lift_polynomial() {
        let d = lift_eval(&V1Squared, &point([0.0; 3], [0.5, 0.0, 0.0])).unwrap();
        assert_eq!(d.value(), 0.25);
        assert_eq!(d.gradient(), &[0.0, 0.0, 0.0, 1.0, 0.0, 0.0]);
    }

    #[test]
    fn lift_constant() {
        let d = lift_eval(&Seven, &point([1.0, 2.0, 3.0], [0.1, 0.2, 0.3])).unwrap();
        assert_eq!(d.value(), 7.0);
        assert_eq!(d.gradient(), &[0.0; 6]);
    }

    #[test]
    fn lift_product_matches_finite_differences() {
        let p = point([1.0, 2.0, 3.0], [0.5, 0.0, 0.0]);
        let d = lift_eval(&V1TimesX2, &p).unwrap();
        assert_eq!(d.value(), 1.0);
        assert_eq!(d.partial(1), 0.5);
        assert_eq!(d.partial(3), 2.0);
        let fd = finite_diff_grad(&V1TimesX2, &p, 1e-4).unwrap();
        for (a, b) in d.gradient().iter().zip(&fd) {
            assert!((a - b).abs() < 1e-9);
        }
    }

    #[test]
    fn finite_differences_quadratic_and_exp() {
        let p = point([0.0; 3], [0.5, 0.0, 0.0]);
        let fd = finite_diff_grad(&V1Squared, &p, 1e-4).unwrap();
        assert!((fd[3] - 1.0).abs() < 1e-8);
        let fd = finite_diff_grad(&ExpV3, &point([0.0; 3], [0.0; 3]), 1e-4).unwrap();
        // Taylor remainder h^2/6 ~ 1.7e-9
        assert!((fd[5] - 1.0).abs() < 1e-8);
    }

    #[test]
    fn finite_difference_stencil_leaving_domain() {
        let p = point([0.0; 3], [0.99995, 0.0, 0.0]);
        assert!(finite_diff_grad(&LorentzFactor, &p, 1e-4).is_err());
        assert!(lift_eval(&LorentzFactor, &p).is_ok());
    }

    #[test]
    fn finite_differences_converge_quadratically() {
        let p = point([0.0; 3], [0.0, 0.0, 0.3]);
        let exact = 0.3f64.exp();
        let e1 = (finite_diff_grad(&ExpV3, &p, 1e-2).unwrap()[5] - exact).abs();
        let e2 = (finite_diff_grad(&ExpV3, &p, 5e-3).unwrap()[5] - exact).abs();
        let ratio = e1 / e2;
        assert!((ratio - 4.0).abs() < 0.05, "ratio {ratio}");
    }

    #[test]
    fn constant_broadcasting() {
        let x = Dual1::variable(2.0, 1, 3);
        let y = x.clone() * Dual1::constant(3.0) + Dual1::constant(1.0);
        assert_eq!(y.value(), 7.0);
        assert_eq!(y.gradient(), &[0.0, 3.0, 0.0]);
        let z = (x.clone() + Dual1::variable(5.0, 0, 3)) - Dual1::variable(5.0, 0, 3);
        assert_eq!(z.value(), x.value());
        assert_eq!(z.gradient(), x.gradient());
    }

    #[test]
    fn jet_over_dual_gives_second_derivative() {
        // d/du (u^3) = 3u^2, and its phase-space derivative 6u du.
        let u = Dual1::variable(2.0, 0, 1);
        let j = Jet::variable(u).powi(3);
        assert_eq!(j.value.value(), 8.0);
        assert_eq!(j.deriv.value(), 12.0);
        assert_eq!(j.deriv.partial(0), 12.0);
    }

    #[test]
    fn powf_with_variable_exponent() {
        let a = Dual1::variable(2.0, 0, 2);
        let e = Dual1::variable(3.0, 1, 2);
        let p = a.powf(e);
        assert!((p.value() - 8.0).abs() < 1e-15);
        assert!((p.partial(0) - 12.0).abs() < 1e-12);
        assert!((p.partial(1) - 8.0 * 2f64.ln()).abs() < 1e-12);
    }
}
