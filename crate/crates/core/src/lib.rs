//! Numerical laboratory for sums of random multiplicative functions twisted
//! by the Fourier coefficients of the discriminant cusp form.
//!
//! The crate computes exact Ramanujan tau values, the unit-normalized Hecke
//! eigenvalues derived from them, prime-sum statistics, partial Euler
//! products, Monte Carlo low-moment estimates of the twisted sums
//! `S(x) = sum_{n <= x} h(n) lambda(n)`, and Gaussian random-walk barrier
//! probabilities. Every stochastic experiment is driven by a counter-based
//! generator so results are reproducible bit-for-bit at any worker count.

pub mod acceptance;
pub mod error;
pub mod euler;
pub mod exec;
pub mod io;
pub mod modform;
pub mod moments;
pub mod primes;
pub mod rmf;
pub mod rng;
pub mod walks;

pub use error::Error;

/// Result alias used across the crate.
pub type Result<T> = std::result::Result<T, Error>;
