//! Exact factorization residuals and open-box certificates for second-order
//! bivariate linear partial differential operators with polynomial
//! coefficients.
//!
//! The crate is `no_std` and only needs `alloc`. All decision paths use exact
//! rational arithmetic; there is no floating point anywhere in the crate.
//!
//! * [`poly`]: rationals, sparse bivariate and dense univariate polynomials.
//! * [`bernstein`]: tensor-product Bernstein range enclosures on rectangles.
//! * [`lpdo`]: operators, characteristic roots, the residual `R` and its
//!   closed forms, the exactly factorizable family and a composition oracle.
//! * [`boxcert`]: quantifier-free predicates for `|a x^2 + b x + c| < 4`,
//!   exact extrema of quadratics on rectangles, certificates for
//!   `|a00 - R| < eps` on an open box, and sampling falsification.

#![no_std]

extern crate alloc;

pub mod bernstein;
pub mod boxcert;
mod error;
pub mod grid;
pub mod lpdo;
pub mod poly;

pub use error::Error;
pub use poly::{Axis, Poly1, Poly2, Rational, Rect};
