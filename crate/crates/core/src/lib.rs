//! Computational spectral theory for model cone operators on `(0,1] x S^1`.
// `!(x > 0.0)` is used on purpose so that NaN fails the check
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod asymptotics;
pub mod coneop;
pub mod error;
pub mod index;
pub mod indexsets;
pub mod numeric;
pub mod sector;
pub mod traces;
pub mod symbols;

pub use error::{Error, Result};
