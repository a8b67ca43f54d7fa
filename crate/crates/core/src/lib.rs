//! Numerical laboratory for covariantly quantized gauge-field modes.
//!
//! The crate discretizes the momentum-space mode algebra of a massless
//! four-component gauge field on finite grids and truncated Fock spaces
//! carrying a Krein metric, so that the algebraic identities of the
//! continuum theory (commutation relations, displacement algebra, gauge
//! transformations, mode-sum distributions) become finite computations
//! with measurable residuals.
//!
//! Layout:
//! - [`modes`]: momentum grids, Coulomb/screened/gauge profiles, mode-sum
//!   distributions and number integrals.
//! - [`fock`]: truncated multi-mode Fock representations, ladder matrices,
//!   the Krein metric η and K-conjugation; the dense brute-force oracle.
//! - [`displacement`]: field-translation generators, unitary and
//!   pseudo-unitary displacements, displaced vacua, overlap and
//!   particle-number bookkeeping.
//! - [`gauge`]: unphysical-photon operators, the physical-sector condition
//!   and the gauge-charge commutator identities.
//! - [`maxwell`]: Riemann-Silberstein form of free Maxwell dynamics on a
//!   periodic grid with an exact spectral propagator.
//! - [`ccr`]: finite-dimensional demonstrations around the canonical
//!   commutation relations (trace obstruction, Weyl form, occupation
//!   classes).
//! - [`report`]: CSV and JSON-lines emission for scans and check reports.

pub mod ccr;
pub mod displacement;
pub mod error;
pub mod fock;
pub mod gauge;
pub mod maxwell;
pub mod modes;
pub mod report;

pub use error::{Error, Result};
