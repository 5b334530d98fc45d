//! Coefficient-field abstraction shared by the polynomial layers.
//!
//! Everything above this module (polynomials, rational functions, central
//! functions) is generic over a [`Field`]. The engine itself instantiates
//! the stack with exact Gaussian rationals; see the aliases at the crate
//! root.

use std::fmt::Debug;
use std::ops::{Add, Div, Mul, Neg, Sub};

use num_complex::Complex;
use num_rational::BigRational;
use num_traits::{One, Zero};

/// A commutative field with exact equality.
///
/// Zero tests are structural (`== Zero::zero()`), so only exact types give
/// meaningful normal forms. Floating point types satisfy the bounds but
/// are not used by the engine.
pub trait Field:
    Clone
    + Debug
    + PartialEq
    + Zero
    + One
    + Neg<Output = Self>
    + Add<Output = Self>
    + Sub<Output = Self>
    + Mul<Output = Self>
    + Div<Output = Self>
{
}

impl<T> Field for T where
    T: Clone
        + Debug
        + PartialEq
        + Zero
        + One
        + Neg<Output = T>
        + Add<Output = T>
        + Sub<Output = T>
        + Mul<Output = T>
        + Div<Output = T>
{
}

/// The field's involution (complex conjugation, identity on real fields).
pub trait Conjugate {
    fn conjugate(&self) -> Self;
}

impl Conjugate for BigRational {
    fn conjugate(&self) -> Self {
        self.clone()
    }
}

impl Conjugate for f64 {
    fn conjugate(&self) -> Self {
        *self
    }
}

impl Conjugate for f32 {
    fn conjugate(&self) -> Self {
        *self
    }
}

impl<T: Clone + Neg<Output = T>> Conjugate for Complex<T> {
    fn conjugate(&self) -> Self {
        Complex::new(self.re.clone(), -self.im.clone())
    }
}
