//! Ding-Helleseth-Martinsen binary sequences of period `2q`, `q ≡ 5 (mod 8)`
//! prime: construction, autocorrelation, exact 2-adic complexity, and exact
//! verification of the cyclotomic and Gauss-period identities behind it.
//!
//! - [`ntheory`]: primality, generators, the per-prime parameter block
//! - [`cyclotomy`]: order-four classes and cyclotomic numbers
//! - [`gaussring`]: arithmetic mod `2^{2q} - 1` and the Gauss periods
//! - [`sequence`]: sequence construction, autocorrelation, `S(2)`
//! - [`adic`]: 2-adic complexity and the divisor criteria
//! - [`suite`]: batch identity checking
//! - [`cli`]: the `dhm` command

pub mod adic;
pub mod cli;
pub mod context;
pub mod cyclotomy;
mod decimal;
pub mod error;
pub mod gaussring;
pub mod ntheory;
pub mod sequence;
pub mod suite;

pub use context::PrimeContext;
pub use error::{Error, Result};
