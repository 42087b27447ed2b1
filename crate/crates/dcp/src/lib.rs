//! Exact low-density series for the mean cluster size of directed compact
//! percolation near a damp wall, and the machinery to analyse them:
//! modular-arithmetic guessing of linear ODEs and P-recurrences, exact
//! reconstruction over the rationals, singularity and critical-exponent
//! analysis, and verification of the operator factorisation.
//!
//! The crate is organised around five subsystems:
//!
//! * [`algebra`] — arbitrary-precision polynomials, prime-field linear
//!   algebra, CRT and rational reconstruction, Pade approximants.
//! * [`series`] — generation of the mean-size series from the damp-wall
//!   recurrences, an independent cluster-enumeration oracle, and the
//!   bulk/wet/dry closed forms.
//! * [`guess`] — discovery of minimal P-recurrences and ODEs modulo primes
//!   and their exact reconstruction.
//! * [`singular`] — head-polynomial structure, indicial exponents, Pade
//!   scans and Dlog-Pade exponent estimates.
//! * [`factory`] — the explicit algebraic and rational solutions, the
//!   appendix-built second-order operator, and the direct-sum factorisation
//!   checks.

pub mod algebra;
pub mod error;
pub mod factory;
pub mod guess;
pub mod io;
pub mod series;
pub mod singular;

pub use error::{Error, Result};
