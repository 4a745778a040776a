//! Numerical verification toolkit for Popoviciu-type convexity inequalities:
//! special-function evaluation, quasi-arithmetic mean algebra, convexity
//! classification, residual evaluators, and counterexample search.

pub mod convexity;
pub mod error;
pub mod inequalities;
pub mod interval;
pub mod means;
pub mod search;
pub mod specfun;

pub use error::{Error, Result};
