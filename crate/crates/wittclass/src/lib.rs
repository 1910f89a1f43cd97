//! Exact arithmetic for Witt-ring computations attached to `SL(2)` and
//! `PSL(2)` over small exact fields.
//!
//! The crate is organized bottom-up:
//!
//! * [`fields`] — field descriptors and exact elements for `Q`, `Q(sqrt d)`,
//!   `F_p`, and `F_{p^2}`, with square/positivity/stufe predicates and
//!   residue maps at inert primes.
//! * [`witt`] — diagonal quadratic forms as formal Witt-ring expressions:
//!   normalization, Pfister forms, signed determinants, fundamental-ideal
//!   membership, Hilbert symbols, and a three-valued equality decision.
//! * [`sl2`] — unimodular 2×2 matrices, Bruhat normal forms, the sign
//!   section for `PSL(2)`, and anti-commuting pair constructions.
//! * [`cocycles`] — the Witt, Bruhat-table, and corrected 2-cocycles, plus
//!   sampled verification campaigns for their identities.
//! * [`surfaces`] — central-extension elements, commutator/relator
//!   evaluation of surface group representations, torus realization, and
//!   bound audits.
//! * [`sampling`] — seeded deterministic samplers shared by campaigns,
//!   tests, and the CLI.
//! * [`exec`] — the sequential/parallel execution helper behind the
//!   `parallel` feature.
//!
//! All arithmetic is exact; no floating point is used anywhere.

pub mod cocycles;
pub mod exec;
pub mod factor;
pub mod fields;
pub mod sampling;
pub mod sl2;
pub mod surfaces;
pub mod witt;

pub use fields::{FieldDescriptor, FieldElement};

