//! Test-side oracles: arbitrary-precision cylinder functions and a
//! determinant-interpolation eigenvalue reference for small pencils.
//!
//! Everything here is deliberately independent of the production crate: the
//! oracles use ascending series / integral representations at 256-bit
//! precision and plain LU + polynomial root finding, so agreement with the
//! fast paths is meaningful evidence rather than an identity.

pub mod bessel_oracle;
pub mod bigc;
pub mod gevp_oracle;

pub use bessel_oracle::{oracle_h1, oracle_h1_ratio, oracle_j, oracle_j_ratio, oracle_k, oracle_y};
pub use gevp_oracle::{det, finite_eigenvalues};
