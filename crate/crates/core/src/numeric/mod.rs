//! Numerical building blocks shared by the spectral pipelines.

pub mod poly;
pub mod quad;
pub mod smooth;
pub mod special;
pub mod tridiag;
