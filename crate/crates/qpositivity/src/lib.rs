//! Verification-grade numerics for q-series positivity.
//!
//! The crate evaluates the classical q-special functions (q-Pochhammer
//! symbols, Ramanujan's entire function A_q, the confluent basic
//! hypergeometric series 1phi1, Jacobi's theta_4, the q-Gamma function),
//! materializes the Hermitian Gram matrices of the associated positive
//! definite kernels and certifies them positive semidefinite, sweeps a
//! family of modulus inequalities for nonnegative margins, and verifies
//! the underlying Fourier-transform (Bochner) representations by
//! quadrature against nonnegative densities.
//!
//! Modules:
//! - [`qkernel`]: scalar special functions with certified truncation.
//! - [`gram`]: Gram matrix construction, eigenvalue-based PSD checks,
//!   Schur products, determinants.
//! - [`certify`]: inequality margin reports and parameter sweeps.
//! - [`oracle`]: quadrature verification of the integral representations
//!   and density reconstruction.
//! - [`cli`]: the command-line driver.

pub mod certify;
pub mod cli;
mod error;
pub mod gram;
pub mod oracle;
pub mod qkernel;

pub use error::{Error, Result};
