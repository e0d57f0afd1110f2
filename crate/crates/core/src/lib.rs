//! Finite full-contraction transformation semigroups on the chain
//! `[n] = {1, 2, ..., n}`.
//!
//! The crate builds the order-preserving (and order-reversing) full
//! contraction semigroups of a finite chain, their regular and idempotent
//! subsemigroups, and the ideal/quotient families derived from them. Every
//! family can be produced two independent ways: by filtering all `n^n` maps
//! against the defining predicates, and by the closed constructive forms.
//! On top of that sit Green's relations (computed both from kernel/image
//! invariants and abstractly from principal ideals), closure and Rees
//! quotient machinery, and an exact minimal-generating-set search that
//! produces checkable rank certificates.
//!
//! Maps act on the right: `x(αβ) = (xα)β`, and all external values are
//! 1-based.

pub mod claims;
pub mod error;
pub mod families;
pub mod genrank;
pub mod greens;
pub mod transform;

pub use error::{Error, Result};
pub use families::{enumerate, EnumerateOptions, FamilyId, FamilySet, FamilyTag, Method};
pub use transform::{KernelPartition, PropertyFlags, Transformation};
