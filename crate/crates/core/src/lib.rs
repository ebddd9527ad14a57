//! Exact computational machinery for the Fermat equation over real quadratic
//! fields Q(sqrt(d)).
//!
//! The crate is organized bottom-up:
//!
//! * [`quadfield`]: field contexts and exact element arithmetic (no floating
//!   point anywhere; embedding signs are decided by integer comparisons),
//! * [`abelian`]: integer matrix normal forms and finite abelian groups,
//! * [`idealkit`]: ideals in Hermite normal form, prime factorization,
//!   residue rings and principality testing,
//! * [`classgrp`]: class groups, odd coset representatives for Cl/Cl^2, and
//!   narrow ray class groups,
//! * [`freylevel`]: local reduction types of Frey curves y^2 = x(x-u)(x+v)
//!   and the predicted lowered levels,
//! * [`irred`]: irreducibility certificates for the mod-p representation,
//! * [`eliminate`]: Hecke-eigenvalue congruences that rule out newforms at
//!   the predicted levels, plus the per-field verdict.
//!
//! Everything is deterministic: iteration orders are canonical and all
//! randomness lives in the test suites behind fixed seeds.

pub mod abelian;
pub mod classgrp;
pub mod eliminate;
pub mod freylevel;
pub mod idealkit;
pub mod irred;
pub mod quadfield;

use thiserror::Error;

/// Crate-wide error type.
#[derive(Debug, Error)]
pub enum Error {
    #[error("d = {0} is not squarefree")]
    NotSquarefree(u64),

    #[error("d = {0} is outside the supported range 2..=1000")]
    UnsupportedField(u64),

    #[error("operands belong to different fields (d = {0} and d = {1})")]
    MixedFields(u64, u64),

    #[error("coordinates ({x}, {y}) do not describe an algebraic integer of Q(sqrt({d}))")]
    NonIntegral { d: u64, x: String, y: String },

    #[error("{op}: capacity exceeded: {detail}")]
    Capacity { op: &'static str, detail: String },

    #[error("zero {0} is not allowed here")]
    Zero(&'static str),

    #[error("{0}")]
    Invalid(String),

    #[error("missing data: {0}")]
    DataGap(String),
}

/// Convenience alias used throughout the crate.
pub type Result<T> = std::result::Result<T, Error>;

pub use quadfield::{make_field, FieldCtx, QElem, TwoSplitting};
