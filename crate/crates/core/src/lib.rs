//! Random generation of the symmetric group under the Ewens sampling formula.
//!
//! `ESF(α, n)` weights each `σ ∈ S_n` by `α^{C(σ)}` where `C(σ)` counts cycles.
//! This crate provides
//!
//! * [`perm`]: permutations, orbits, exact group orders and the
//!   "generates at least `A_n`" decision procedure,
//! * [`ewens`]: factorials, the pmf, Stirling cycle numbers and an exact sampler,
//! * [`densities`]: closed-form α-densities and moments of fixed-set counts,
//! * [`oracle`]: brute-force weighted enumeration used as ground truth,
//! * [`montecarlo`]: seeded, parallel estimation of generation events.

pub mod densities;
mod error;
pub mod ewens;
pub mod montecarlo;
pub mod numeric;
pub mod oracle;
pub mod perm;

pub use error::{Error, Result};
pub use ewens::EwensParams;
pub use perm::Permutation;
