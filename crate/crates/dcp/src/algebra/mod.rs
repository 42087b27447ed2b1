//! Exact arithmetic substrate: big integers and rationals, dense univariate
//! polynomials, prime-field linear algebra, CRT plus rational reconstruction,
//! and Pade approximants.

pub mod arith;
pub mod crt;
pub mod modfield;
pub mod pade;
pub mod poly;
pub mod ratpoly;

pub use crt::{crt_combine, rational_reconstruct};
pub use modfield::{nullspace_mod, ModMatrix, PrimeField};
pub use pade::{pade, PadeApprox};
pub use poly::IntPoly;
pub use ratpoly::RatPoly;

use num_bigint::BigInt;
use num_rational::BigRational;

/// Shorthand for an exact rational built from machine integers.
pub fn rat(n: i64, d: i64) -> BigRational {
    BigRational::new(BigInt::from(n), BigInt::from(d))
}

/// Shorthand for an exact integer rational.
pub fn rint(n: i64) -> BigRational {
    BigRational::from(BigInt::from(n))
}
