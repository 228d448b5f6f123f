//! Finite sofic approximations of group actions: labeled action graphs,
//! local neighborhood statistics, approximation builders, finite-type
//! kernel operators and determinant certificates.
//!
//! Words act on the left with the rightmost letter applied first:
//! `θ(uv, x) = θ(u, θ(v, x))`.
//!
//! Kernels and operator specs are generic over [`Scalar`]; the aliases below
//! fix the common entry types.

pub mod action;
pub mod constructions;
pub mod error;
pub mod linalg;
pub mod nbhd;
pub mod operator;
pub mod scalar;
pub mod seed;
pub mod spectral;

pub use num_complex::Complex64;

pub use action::{FiniteAction, GeneratorWord, LabelWord, Letter, Mode};
pub use error::{Error, Result};
pub use nbhd::{NeighborhoodType, PairStatVector, StatVector};
pub use operator::{BlockKernel, FiniteTypeOperatorSpec};
pub use scalar::{FieldScalar, Rational, Scalar};

pub type IntKernel = BlockKernel<i64>;
pub type RationalKernel = BlockKernel<Rational>;
pub type RealKernel = BlockKernel<f64>;
pub type ComplexKernel = BlockKernel<Complex64>;

pub type IntSpec = FiniteTypeOperatorSpec<i64>;
pub type RationalSpec = FiniteTypeOperatorSpec<Rational>;
pub type RealSpec = FiniteTypeOperatorSpec<f64>;
pub type ComplexSpec = FiniteTypeOperatorSpec<Complex64>;
