//! Exact integration of polynomials over the cube `[-r, r]^n`, its boundary
//! and its diagonal set, with verifiers for the mean-value, quadrature and
//! Pizzetti-type identities satisfied by harmonic and polyharmonic
//! polynomials.
//!
//! The core types are generic over a [`Scalar`]; exact work uses
//! [`Rational`], and the aliases below fix that choice.

pub mod approx;
pub mod error;
pub mod harmonic;
pub mod integrate;
pub mod limits;
pub mod linalg;
pub mod oracle;
pub mod parse;
pub mod poly;
pub mod report;
pub mod scalar;
pub mod verify;

pub use error::{Error, Result};
pub use integrate::{CubeDomain, Region, Weight};
pub use poly::{Exponent, Polynomial, UnivariatePolynomial};
pub use scalar::Scalar;

pub type Rational = num_rational::BigRational;
pub type Poly = Polynomial<Rational>;
pub type UniPoly = UnivariatePolynomial<Rational>;
pub type Cube = CubeDomain<Rational>;
pub type PolyF64 = Polynomial<f64>;
