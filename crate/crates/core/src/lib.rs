//! Exact decision procedures for generating operators between
//! finite-dimensional normed spaces, with sampling oracles to cross-check
//! them.

pub mod catalog;
pub mod cli;
pub mod error;
pub mod generating;
pub mod geometry;
pub mod linalg;
pub mod operator;
pub mod random;
pub mod oracle;
pub mod relative_norm;
pub mod scalar;
pub mod space;

pub use error::{Error, Result};
pub use generating::{Certificate, CheckOptions, Method, Verdict};
pub use linalg::{Matrix, Vector};
pub use operator::Operator;
pub use scalar::{Backend, Rational, Scalar};
pub use space::Space;

pub type SpaceF64 = Space<f64>;
pub type SpaceQ = Space<Rational>;
pub type OperatorF64 = Operator<f64>;
pub type OperatorQ = Operator<Rational>;
