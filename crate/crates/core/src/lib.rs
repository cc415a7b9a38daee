//! Numerical toolkit for the generalized Laplace final-value theorem.
//!
//! The crate cross-checks frequency-side limits `lim_{s→0} sF(s)` against
//! fractional Cesàro averages of the time signal, and uses the same
//! machinery to show numerically that Caputo fractional systems do not
//! settle onto nonconstant periodic orbits.

pub mod acceptance;
pub mod extrap;
pub mod fraccalc;
pub mod finval;
pub mod fodesim;
pub mod quad;
pub mod report;
pub mod specfun;
pub mod xform;
