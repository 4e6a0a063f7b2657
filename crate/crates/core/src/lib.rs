#![no_std]

//! Composition operators `f ↦ f∘ψ` on the space of slowly increasing smooth
//! functions, studied numerically through their symbols `ψ`.
//!
//! The crate is allocation-based but does not depend on `std`; reports,
//! file formats and the command line live in the companion `omdyn-cli`
//! crate.
//!
//! - [`jets`]: truncated derivative calculus (Faà di Bruno, inverse jets).
//! - [`symbols`]: the symbol type, the example catalog and monotone blends.
//! - [`orbits`]: forward/backward iterates and jet transport along orbits.
//! - [`schwartz`]: rapidly decreasing weights, majorants and seminorms.
//! - [`classify`]: mixing, hypercyclicity and non-transitivity verdicts.
//! - [`abel`]: numerical solutions of `H(ψ(x)) = H(x) + 1`.
//! - [`hypvec`]: the explicit hypercyclic-vector construction.

extern crate alloc;
#[cfg(test)]
extern crate std;

pub mod abel;
pub mod classify;
pub mod error;
pub mod hypvec;
pub mod jets;
pub mod numeric;
pub mod orbits;
pub mod schwartz;
pub mod symbols;

pub use error::{Error, Result};
pub use jets::Jet;
