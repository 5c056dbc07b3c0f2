//! Norms of analytic functions on the unit disc and weighted dual
//! characterizations of Bergman, Bloch and Besov-type norms.

#![allow(clippy::neg_cmp_op_on_partial_ord)]
pub mod analytic;
pub mod error;
pub mod fs_dual;
pub mod norms;
mod pairs;
pub mod quadrature;

pub use analytic::TaylorFunction;
pub use error::{Error, Result};
