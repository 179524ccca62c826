//! Exact invariants of irreducible representations of a p-adic division algebra.
//!
//! The ambient object is a central division algebra `D` of degree `n` over the
//! local field `F_q((t))`. Its maximal order is realised as a twisted power
//! series ring over `F_{q^n}` and the unitary dual is computed, level by
//! level, through the finite quotients `G_m = D^* / <pi_central> U_m`. All
//! representation-theoretic quantities (restriction multiplicities, the
//! distance `dist`, the pairing `inv`, twist stabilizers, reducibility points,
//! Plancherel densities and Rankin-Selberg conductors) are derived from
//! modular character tables and carried in exact arithmetic: integers,
//! arbitrary-precision rationals, and rational functions in `Y = q^{-s}`.
//!
//! The crate is `no_std` (with `alloc`); IO, caching and the CLI live in the
//! companion crate `dstar-cli`.

#![no_std]
#![deny(unsafe_code)]

extern crate alloc;

pub mod chartab;
pub mod engine;
pub mod field;
pub mod group;
pub mod invariants;
pub mod modl;
pub mod plancherel;
pub mod ratio;
pub mod rng;
pub mod series;

pub use engine::{Engine, EngineBase, EngineError};
pub use field::{FieldElement, FieldError, FieldTower};
pub use group::{GroupElement, GroupError, UnitGroup};
pub use invariants::{IrrepRecord, PairRecord};
pub use series::{SeriesError, TwistedSeries};

// arithmetic dependencies, re-exported for downstream crates
pub use num_bigint;
pub use num_rational;
pub use num_traits;
