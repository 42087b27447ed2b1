use thiserror::Error;

/// Errors shared across the crate.
#[derive(Debug, Error)]
pub enum Error {
    #[error("modulus {0} is not an odd prime below 2^31")]
    BadModulus(u64),
    #[error("duplicate prime {0} in CRT input")]
    DuplicatePrime(u64),
    #[error("invalid seed: m = {m}, y = {y} (need m >= 1 and y >= m - 1)")]
    InvalidSeed { m: usize, y: usize },
    #[error("denominator of r is divisible by the prime {0}")]
    BadPrimeForRatio(u64),
    #[error("zero polynomial passed to {0}")]
    ZeroPolynomial(&'static str),
    #[error("Pade approximant [{l}/{m}] is degenerate (denominator vanishes at 0)")]
    DegeneratePade { l: usize, m: usize },
    #[error("series has {have} terms, but {need} are required")]
    InsufficientTerms { have: usize, need: usize },
    #[error("rational reconstruction failed at modulus of {digits} digits; more primes required")]
    ReconstructionFailed { digits: usize },
    #[error("kernel dimension {0} > 1 after over-determination; grid point is not minimal")]
    AmbiguousKernel(usize),
    #[error("operators disagree on (order, degree, support); cannot reconstruct")]
    SupportMismatch,
    #[error("irregular singular point; no indicial exponents")]
    IrregularPoint,
    #[error("{0}")]
    Domain(String),
}

pub type Result<T> = std::result::Result<T, Error>;
