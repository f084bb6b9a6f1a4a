//! Exact symbolic verification of supersymmetric Lax structures for
//! Calogero-type many-body models.

pub mod coeff;
pub mod error;
pub mod fermion;
pub mod jacobi;
pub mod matrix;
pub mod model;
pub mod operator;
pub mod poly;
pub mod scalar;
mod text;
pub mod verify;

pub use coeff::{Chart, RatCoeff};
pub use error::{Error, Result};
pub use fermion::{FermionPoly, FermionWord, FockState, FockVector};
pub use jacobi::{Jacobi, JacobiMatrix};
pub use matrix::{BasisTag, OperatorMatrix};
pub use model::{Bundle, Model, ModelSpec};
pub use operator::{Operator, StateFn};
pub use poly::Poly;
pub use scalar::{Rat, Scalar};
