//! Flow semantics and exact property deciders for regular autonomous
//! asynchronous Boolean systems `Ξ_Φ` over `B^n`.
//!
//! A system is generated by a transition function `Φ: B^n → B^n`. At each
//! step a fire vector `v` selects which coordinates compute `Φ`; the others
//! keep their value. Schedules are infinite sequences of fire vectors in which
//! every coordinate fires infinitely often (the unbounded delay model). The
//! crate decides dependence on initial states, orbit separation, point, set
//! and system transitivity, and conjugacy between systems, and ships an
//! independent brute-force [`oracle`] together with census tooling in
//! [`explorer`].
//!
//! The crate is `no_std` and only needs `alloc`.

#![no_std]

extern crate alloc;
#[cfg(test)]
extern crate std;

pub mod boolean;
pub mod conjugacy;
pub mod deciders;
pub mod error;
pub mod explorer;
pub mod graph;
pub mod oracle;
pub mod property;
pub mod schedule;
pub mod verdict;

pub use boolean::{CoordinateSet, FireVector, StateVector, TransitionFunction, MAX_ARITY};
pub use deciders::{decide, Limits};
pub use error::{Error, Result};
pub use property::{Property, Quantifier, SeparationMode, TransitivityMode};
pub use schedule::{Flow, Run, Schedule, TimeGrid};
pub use verdict::{Checkpoint, Reason, Truth, Verdict, Witness};
