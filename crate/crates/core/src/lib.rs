//! Exact q-series kernel and identity verifier for trivariate q-polynomials,
//! Cauchy polynomials and the connection formulae relating them.

pub mod arith;
pub mod cli;
pub mod error;
pub mod multipoly;
pub mod qcore;
pub mod series;
pub mod trivariate;
pub mod verifier;

pub use error::{Error, Result};
