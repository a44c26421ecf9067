//! Uniform multiplicative and additive bounds on the prime degrees of
//! rational isogenies of elliptic curves over degree-`d` number fields.
//!
//! The crate is organised around the pipeline that turns an isogeny
//! signature into a finite set of possible isogeny primes:
//!
//! * [`ntheory`] — arbitrary-precision primality, factorization, Jacobi
//!   symbols and a segmented prime sieve;
//! * [`weil`] — admissible Frobenius traces over finite fields and exact
//!   powers of quadratic Weil numbers;
//! * [`multiquad`] — exact norm-form products over multiquadratic étale
//!   algebras;
//! * [`signatures`] — the signature space, duality and orbit classes;
//! * [`bounds`] — the per-signature multiplicative bound integers, their
//!   gcd-accumulation across auxiliary primes, and the additive / GRH
//!   fallback bounds;
//! * [`type2`] — the uniform Condition-CC test, the Chebotarev-driven
//!   bound pipeline for odd degrees, and the checkpointed large-range
//!   scanner.

pub mod bounds;
pub mod error;
pub mod multiquad;
pub mod ntheory;
mod numeric;
pub mod signatures;
pub mod type2;
pub mod weil;

pub use error::Error;

/// Crate-wide result alias.
pub type Result<T> = std::result::Result<T, Error>;
