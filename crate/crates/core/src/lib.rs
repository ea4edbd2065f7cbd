//! Exact and numerical tools for GL(3) Hecke operators and SL(3,R) spherical analysis
//! restricted to the diagonal flat.
//!
//! The crate is organised by subject:
//!
//! * [`lie`]: roots, Killing form, Iwasawa coordinates and distances on SL(3,R).
//! * [`hecke`]: the spherical Hecke algebra of GL(3,Q_p) by explicit coset enumeration.
//! * [`amplifier`]: per-prime amplifiers built from Satake parameters and their expansions.
//! * [`lattice`]: integer matrix enumeration, the minor polynomial and subalgebra closure.
//! * [`spherical`]: spherical functions, transforms, kernels and oscillatory integrals.

pub mod amplifier;
pub mod error;
pub mod hecke;
pub mod lattice;
pub mod lie;
pub mod rng;
pub mod spherical;

pub use error::{Error, Result};
