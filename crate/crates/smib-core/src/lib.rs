#![no_std]
#![forbid(unsafe_code)]

extern crate alloc;

pub mod mat;
pub mod eig;
pub mod care;
pub mod newton;
pub mod ode;
pub mod params;
pub mod plant;
pub mod cdm;
pub mod equilibrium;
pub mod fl;
pub mod lqg;
pub mod freq;
pub mod scenarios;

pub use mat::Matrix;

#[derive(Debug, Clone, PartialEq)]
pub enum NumError {
    DimensionMismatch { expected: (usize, usize), got: (usize, usize) },
    SingularMatrix,
    NoConvergence { iterations: usize, residual: f64 },
    NonFinite { t: f64 },
    InvalidInput(&'static str),
}

pub type Result<T> = core::result::Result<T, NumError>;
