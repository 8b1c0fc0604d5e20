//! A desk-scale workbench for finite Stone-Priestley duality.
//!
//! The crate builds Galois (concept) lattices, row-generated Boolean
//! algebras and bounded lattices from incidence structures, enumerates
//! their prime-filter and ultrafilter spectra, computes tail algebras and
//! free Boolean algebras of posets, and checks the projection-property and
//! centralizer theory of finite universal algebras. Everything is finite
//! and explicit: families of subsets are bit-vector backed, canonical and
//! deterministic, and every structural theorem the crate relies on is also
//! verifiable here by an independent brute-force route.
//!
//! Modules:
//! - [`bits`]: packed subsets and canonical set families.
//! - [`poset`]: finite posets, segment families, join-irreducibility.
//! - [`context`]: incidence structures, polarities, concept lattices.
//! - [`setfam`]: generated bounded lattices and Boolean algebras.
//! - [`spectra`]: prime filters, ultrafilters, spectra, duality checks.
//! - [`tail`]: tail algebras and lattices, closures of `down(P)`, Birkhoff
//!   representation, free Boolean algebras over posets.
//! - [`ualg`]: finite universal algebras, preservation and commutation,
//!   homomorphism enumeration, projection-property checkers, centralizers.
//! - [`selftest`]: the seeded, deterministic verification suite.

// Double-indexed loops over square tables (joins[a][b] and friends) are
// the working idiom throughout; the range-loop lint fights it.
#![allow(clippy::needless_range_loop)]

pub mod bits;
pub mod context;
pub mod poset;
pub mod selftest;
pub mod setfam;
pub mod spectra;
pub mod tail;
pub mod ualg;

pub use bits::{SetFamily, Subset};
pub use context::{Concept, GaloisLattice, IncidenceStructure};
pub use poset::Poset;
pub use setfam::{FamilyKind, GeneratedFamily};
pub use spectra::{DualityReport, Filter, Spectrum};
