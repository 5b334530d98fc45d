//! Exact symbolic engine for pseudo-Riemannian calculi over
//! noncommutative ⋆-algebras: the noncommutative torus, the noncommutative
//! 3-sphere and its localization, optionally extended by a formal
//! conformal factor.
//!
//! The coefficient layer ([`poly`], [`ratfunc`], [`central`]) is generic
//! over a [`field::Field`]; the geometry layers work with the exact
//! [`Scalar`] defined here.

pub mod calculus;
pub mod central;
pub mod connection;
pub mod error;
pub mod field;
pub mod matrix;
pub mod models;
pub mod morphism;
pub mod poly;
pub mod qalgebra;
pub mod ratfunc;
pub mod report;
pub mod scalars;
pub mod submanifold;

pub use error::{Error, Result};
pub use qalgebra::{AlgElement, AlgebraSpec, Coeff, Derivation};
pub use scalars::{GaussianRational, QValue, Scalar};

/// Rational matrices (derivation-basis changes, Lie algebra maps).
pub use matrix::RationalMatrix;
