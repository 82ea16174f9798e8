//! Core computations for 2-primitive elements of `F_{q^2}` lying on translates
//! `{θ + x : x ∈ F_q}` and lines `{α(θ + x) : x ∈ F_q}`.
//!
//! The crate is `no_std` (it only needs `alloc`) and is organised bottom-up:
//!
//! - [`arith`]: exact 64-bit number theory (factorisation, Möbius, totient,
//!   square-free divisor counts) and the prime power contexts every other
//!   module consumes.
//! - [`ffield`]: concrete arithmetic in `F_{q^2}` with a fixed primitive
//!   element, the `F_q` membership test and translate/line class keys.
//! - [`criteria`]: the character-sum sufficient conditions and the interval
//!   scan that isolates the prime powers needing direct verification.
//! - [`verify`]: exhaustive translate and line property verifiers, in both a
//!   literal exponent-pair form and a linear class-indexing form.
//! - [`charoracle`]: a small-field character-sum laboratory that checks the
//!   identities underneath [`criteria`] numerically.

#![no_std]
#![forbid(unsafe_code)]

extern crate alloc;

pub mod arith;
pub mod charoracle;
pub mod criteria;
mod error;
pub mod ffield;
pub mod verify;

pub use crate::arith::{Factorization, PrimePowerCtx};
pub use crate::criteria::{CriterionVerdict, SieveDecomposition, Stage};
pub use crate::error::Error;
pub use crate::ffield::{FieldElem, QuadExtField};
pub use crate::verify::{GammaSet, PropertyKind, PropertyReport, Witness};
