//! Linear-optics toolkit: passive interferometers, permanents, Fock-space
//! boson sampling, multiphoton phase estimation and related state families.
//!
//! Everything numeric is generic over [`Real`] (`f32` or `f64`); the aliases
//! below fix double precision for everyday use.

// NaN-rejecting guards read as `!(x >= 0)` on purpose
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod error;
pub mod fock;
pub mod metrology;
pub mod netlib;
pub mod permanent;
pub mod scalar;
pub mod variants;

pub use error::{Error, Result};
pub use scalar::{Real, C};

pub type Complex64 = num_complex::Complex<f64>;
pub type Matrix = netlib::ComplexMatrix<f64>;
pub type Unitary = netlib::UnitaryMatrix<f64>;
pub type Matrix32 = netlib::ComplexMatrix<f32>;
pub type Unitary32 = netlib::UnitaryMatrix<f32>;

pub type Coupler = netlib::BeamsplitterElement<f64>;
pub type Reck = netlib::ReckDecomposition<f64>;
