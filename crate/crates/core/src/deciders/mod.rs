//! Exact deciders for initial-state dependence, orbit separation and
//! transitivity, all reduced to searches in finite labeled graphs.
//!
//! Flows are constant on grid intervals, so quantifying over real `t` reduces
//! to quantifying over letter counts plus the interval before `t_0`. The
//! coverage clause `⋃_{ξ ≤ t} ρ(ξ) = (1,…,1)` holds exactly from interval `K`
//! on, `K` being the coverage index; it never holds before `t_0`.
//!
//! Any finite word extends to a progressive schedule by appending `(1,…,1)`
//! forever, so "some schedule reaches X" is plain reachability, while "some
//! schedule stays inside X forever" needs a fair SCC inside X.

mod independence;
mod separation;
mod transitivity;

pub use independence::{
    agree_exists, n_dependent, n_independent, n_independent_direct, p_dependent, p_independent, pairwise_mergeable_all,
};
pub use separation::separated;
pub use transitivity::{point_transitive, set_transitive, system_transitive, witness_orbits};

use alloc::vec::Vec;

use crate::boolean::{FireVector, StateVector, TransitionFunction};
use crate::error::{Error, Result};
use crate::graph::DEFAULT_NODE_BUDGET;
use crate::property::Property;
use crate::schedule::Schedule;
use crate::verdict::Verdict;

/// Guards for the searches whose state spaces grow fastest.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Limits {
    /// Cap on explored nodes for product searches.
    pub node_budget: u64,
    /// Largest arity for the visited-set pair search used by atemporal separation.
    pub atemporal_max_arity: u8,
}

impl Default for Limits {
    fn default() -> Self {
        Self { node_budget: DEFAULT_NODE_BUDGET, atemporal_max_arity: 3 }
    }
}

/// Decides `property` for `Ξ_Φ`.
pub fn decide(phi: &TransitionFunction, property: &Property, limits: &Limits) -> Result<Verdict> {
    match property {
        Property::AgreeExists { mu, other } => agree_exists(phi, *mu, *other),
        Property::PIndependent => p_independent(phi),
        Property::NIndependent => Ok(n_independent(phi)),
        Property::PDependent => Ok(p_dependent(phi)),
        Property::NDependent => n_dependent(phi),
        Property::PairwiseMergeableAll => pairwise_mergeable_all(phi),
        Property::Separated { mu, other, mode, quantifier } => separated(phi, *mu, *other, *mode, *quantifier, limits),
        Property::PointTransitive { mu, mode } => point_transitive(phi, *mu, *mode),
        Property::SetTransitive { set, mode } => set_transitive(phi, set, *mode, limits),
        Property::SystemTransitive { mode } => system_transitive(phi, *mode, limits),
    }
}

pub(crate) fn check_state(phi: &TransitionFunction, s: StateVector) -> Result<()> {
    if s.arity() != phi.arity() {
        Err(Error::ArityMismatch { expected: phi.arity(), found: s.arity() })
    } else {
        Ok(())
    }
}

pub(crate) fn letters(arity: u8, word: &[u32]) -> Vec<FireVector> {
    word.iter().map(|&b| FireVector::from_raw(arity, b)).collect()
}

/// `word` followed by `(1,…,1)` forever, in canonical form.
pub(crate) fn full_tail(arity: u8, word: &[u32]) -> Schedule {
    Schedule::with_full_tail(arity, letters(arity, word)).expect("full tail is progressive").canonical()
}

/// A lasso schedule from label words.
pub(crate) fn lasso(arity: u8, prefix: &[u32], period: &[u32]) -> Schedule {
    Schedule::new(arity, letters(arity, prefix), letters(arity, period))
        .expect("fair cycle covers every coordinate")
        .canonical()
}
