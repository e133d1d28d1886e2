//! Two-level pairing model in its dual algebraic formulations.
//!
//! The number-conserving (unitary/Casimir) and number-nonconserving
//! (quasispin/pairing) descriptions of bosonic and fermionic two-level
//! systems are implemented side by side:
//!
//! - [`wigner`]: Clebsch-Gordan and 6j coefficients (Racah sums).
//! - [`irreps`]: branching rules, irrep dimensions, seniority-quasispin
//!   duality maps.
//! - [`fock`]: brute-force second-quantized oracle — every generator,
//!   Casimir, and quasispin operator as an explicit matrix, with a
//!   verification suite for the commutator tables and duality identities.
//! - [`quasispin`]: the production engine — seniority-blocked bases and
//!   exact tridiagonal/banded pairing Hamiltonians from closed-form matrix
//!   elements.
//! - [`eigen`]: self-contained symmetric eigensolvers (implicit-shift QL,
//!   cyclic Jacobi).
//! - [`spectra`]: transitional Hamiltonians across the quantum phase
//!   transition, dynamical-symmetry level schemes, filling curves, gaps.

pub mod eigen;
pub mod error;
pub mod fock;
pub mod half;
pub mod irreps;
pub mod quasispin;
pub mod spectra;
pub mod wigner;

pub use error::{Error, Result};
pub use half::{half, HalfInt};
pub use irreps::{LevelSpec, Statistics, SystemSpec};
