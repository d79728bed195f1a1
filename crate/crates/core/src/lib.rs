//! Exact computer algebra for polynomials in two vector variables `x, u ∈ ℝ^m`.

pub mod coeff;
pub mod error;
pub mod fischer;
pub mod hwv;
pub mod hypergeom;
pub mod operator;
pub mod pizzetti;
pub mod poly;
pub mod random;
pub mod simplicial;
pub mod special;
pub mod transvector;

pub use coeff::{GaussianRational, Rational};
pub use error::{Error, Result};
pub use operator::{EulerPoly, EulerRationalScale, LinearOperator, OperatorAtom};
pub use poly::{Dim, Monomial, Polynomial, Var};
