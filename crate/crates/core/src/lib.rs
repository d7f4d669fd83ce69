//! Cycles of gaps among the generators of `Z mod p#`, censuses of the
//! constellations they contain, and the normalized linear dynamic system that
//! carries those counts from one stage of Eratosthenes sieve to the next.
//!
//! The crate is organised bottom-up:
//!
//! * [`prime_engine`] – segmented sieve, prime streams over ranges and the
//!   empirical census of gaps between actual primes.
//! * [`gap_cycle`] – the cycles `G(p#)`, built by the three-step recursion and,
//!   independently, from the residues coprime to `p#`.
//! * [`census`] – constellation counts in materialized cycles and the exact
//!   counting recurrence that advances them without building larger cycles.
//! * [`dynamics`] – ratio vectors, system and transfer matrices, the binomial
//!   eigenstructure, asymptotic ratios and long products over primes.

pub mod census;
pub mod dynamics;
mod error;
pub mod exec;
pub mod gap_cycle;
pub mod prime_engine;

pub use error::{Error, Result};
pub use exec::ExecPolicy;
