use alloc::vec;
use alloc::vec::Vec;

use super::{agree_exists, check_state, full_tail, lasso, Limits};
use crate::boolean::{full_mask, StateVector, TransitionFunction};
use crate::error::{Error, Result};
use crate::graph::{fair_run_witness, product_graph, LabeledGraph, OrbitPairNode, PairSpace};
use crate::property::{Quantifier, SeparationMode};
use crate::schedule::Schedule;
use crate::verdict::{Reason, Verdict, Witness};

/// Orbit separation of `mu` and `other` in the given mode and quantifier.
///
/// - temporal/p: some schedule reaches a covered time with different states.
/// - weak/p: as temporal, and afterwards the flows reconverge for good.
/// - strong/p: some progressive schedule keeps the flows apart at every time,
///   including before `t_0`.
/// - atemporal/p: some schedule gives disjoint orbits.
/// - the n variants quantify over every schedule; weak/n is `Unknown`
///   because the boundedness clause admits two readings under `∀ρ`.
pub fn separated(
    phi: &TransitionFunction,
    mu: StateVector,
    other: StateVector,
    mode: SeparationMode,
    quantifier: Quantifier,
    limits: &Limits,
) -> Result<Verdict> {
    check_state(phi, mu)?;
    check_state(phi, other)?;
    use Quantifier::*;
    use SeparationMode::*;
    if mu == other && (mode, quantifier) != (Weak, N) {
        return Ok(Verdict::no(Reason::IdenticalStates));
    }
    match (mode, quantifier) {
        (Temporal, P) => temporal_p(phi, mu, other),
        (Temporal, N) => Ok(agree_exists(phi, mu, other)?.negated()),
        (Weak, P) => weak_p(phi, mu, other),
        (Weak, N) => Ok(Verdict::unknown(Reason::AmbiguousDefinition)),
        (Strong, P) => strong_p(phi, mu, other, limits),
        (Strong, N) => strong_n(phi, mu, other),
        (Atemporal, P) => atemporal_p(phi, mu, other, limits),
        (Atemporal, N) => atemporal_n(phi, mu, other, limits),
    }
}

fn pair_space(phi: &TransitionFunction) -> Result<Option<PairSpace<'_>>> {
    match PairSpace::new(phi) {
        Ok(s) => Ok(Some(s)),
        Err(Error::Budget { .. }) => Ok(None),
        Err(e) => Err(e),
    }
}

fn temporal_p(phi: &TransitionFunction, mu: StateVector, other: StateVector) -> Result<Verdict> {
    let Some(space) = pair_space(phi)? else {
        return Ok(Verdict::unknown(Reason::BudgetExceeded));
    };
    let full = full_mask(phi.arity());
    let found =
        space.search((mu.bits(), other.bits()), |_, _, _| false, |_, _, _, _| false, |_, a, b, f| f == full && a != b);
    Ok(match found {
        Some(word) => {
            let s = full_tail(phi.arity(), &word);
            Verdict::yes(Reason::CoverageProductPath).with_witness(Witness::replayed(
                phi,
                s,
                vec![mu, other],
                &[Some(word.len() - 1)],
            ))
        }
        None => Verdict::no(Reason::CoverageProductExhausted),
    })
}

fn weak_p(phi: &TransitionFunction, mu: StateVector, other: StateVector) -> Result<Verdict> {
    let Some(space) = pair_space(phi)? else {
        return Ok(Verdict::unknown(Reason::BudgetExceeded));
    };
    let full = full_mask(phi.arity());
    let found = space.search(
        (mu.bits(), other.bits()),
        |_, _, _| false,
        |seen, a, b, f| seen || (f == full && a != b),
        |seen, a, b, _| seen && a == b,
    );
    Ok(match found {
        Some(word) => {
            let s = full_tail(phi.arity(), &word);
            // first covered disagreement, then the reconvergence point
            let (mut x, mut y, mut f) = (mu.bits(), other.bits(), 0);
            let mut split = 0;
            for (k, &v) in word.iter().enumerate() {
                x = phi.step_bits(v, x);
                y = phi.step_bits(v, y);
                f |= v;
                if f == full && x != y {
                    split = k;
                    break;
                }
            }
            let at = [Some(split), Some(word.len() - 1)];
            Verdict::yes(Reason::ReconvergencePath).with_witness(Witness::replayed(phi, s, vec![mu, other], &at))
        }
        None => Verdict::no(Reason::NoReconvergence),
    })
}

fn lasso_intervals(s: &Schedule) -> Vec<Option<usize>> {
    let mut at = vec![None];
    at.extend((0..s.prefix().len() + s.period().len()).map(Some));
    at
}

fn strong_p(phi: &TransitionFunction, mu: StateVector, other: StateVector, limits: &Limits) -> Result<Verdict> {
    let g = match product_graph(phi, [mu, other], false, false, limits.node_budget) {
        Ok(g) => g,
        Err(Error::Budget { .. }) => return Ok(Verdict::unknown(Reason::BudgetExceeded)),
        Err(e) => return Err(e),
    };
    let start = g.id(&crate::graph::ProductNode { states: [mu.bits(), other.bits()], fired: None }).unwrap();
    let apart = |x: u32| {
        let k = g.key(x);
        k.states[0] != k.states[1]
    };
    Ok(match fair_run_witness(&g, start, apart, |_| true) {
        Some((prefix, period)) => {
            let s = lasso(phi.arity(), &prefix, &period);
            let at = lasso_intervals(&s);
            Verdict::yes(Reason::FairScc).with_witness(Witness::replayed(phi, s, vec![mu, other], &at))
        }
        None => Verdict::no(Reason::NoFairScc),
    })
}

fn strong_n(phi: &TransitionFunction, mu: StateVector, other: StateVector) -> Result<Verdict> {
    let Some(space) = pair_space(phi)? else {
        return Ok(Verdict::unknown(Reason::BudgetExceeded));
    };
    let found = space.search((mu.bits(), other.bits()), |_, _, _| false, |_, _, _, _| false, |_, a, b, _| a == b);
    Ok(match found {
        Some(word) => {
            let s = full_tail(phi.arity(), &word);
            Verdict::no(Reason::DiagonalReachable).with_witness(Witness::replayed(
                phi,
                s,
                vec![mu, other],
                &[Some(word.len() - 1)],
            ))
        }
        None => Verdict::yes(Reason::DiagonalUnreachable),
    })
}

fn orbit_pair_graph(
    phi: &TransitionFunction,
    mu: StateVector,
    other: StateVector,
    prune_intersections: bool,
    limits: &Limits,
) -> Result<Option<LabeledGraph<OrbitPairNode>>> {
    if phi.arity() > limits.atemporal_max_arity.min(6) {
        return Ok(None);
    }
    let start =
        OrbitPairNode { a: mu.bits(), b: other.bits(), visited_a: 1 << mu.bits(), visited_b: 1 << other.bits() };
    let explored = LabeledGraph::explore(phi.arity(), &[start], true, limits.node_budget, |k, v| {
        let meets = k.visited_a & k.visited_b != 0;
        if meets && !prune_intersections {
            return None;
        }
        let (a, b) = (phi.step_bits(v, k.a), phi.step_bits(v, k.b));
        let next = OrbitPairNode { a, b, visited_a: k.visited_a | 1 << a, visited_b: k.visited_b | 1 << b };
        (!(prune_intersections && next.visited_a & next.visited_b != 0)).then_some(next)
    });
    match explored {
        Ok(g) => Ok(Some(g)),
        Err(Error::Budget { .. }) => Ok(None),
        Err(e) => Err(e),
    }
}

fn atemporal_p(phi: &TransitionFunction, mu: StateVector, other: StateVector, limits: &Limits) -> Result<Verdict> {
    let Some(g) = orbit_pair_graph(phi, mu, other, true, limits)? else {
        return Ok(Verdict::unknown(Reason::BudgetExceeded));
    };
    let start =
        g.id(&OrbitPairNode { a: mu.bits(), b: other.bits(), visited_a: 1 << mu.bits(), visited_b: 1 << other.bits() });
    let Some(start) = start else {
        return Ok(Verdict::no(Reason::OrbitPairExhausted));
    };
    Ok(match fair_run_witness(&g, start, |_| true, |_| true) {
        Some((prefix, period)) => {
            let s = lasso(phi.arity(), &prefix, &period);
            let at = lasso_intervals(&s);
            Verdict::yes(Reason::OrbitPairFairScc).with_witness(Witness::replayed(phi, s, vec![mu, other], &at))
        }
        None => Verdict::no(Reason::OrbitPairExhausted),
    })
}

fn atemporal_n(phi: &TransitionFunction, mu: StateVector, other: StateVector, limits: &Limits) -> Result<Verdict> {
    let Some(g) = orbit_pair_graph(phi, mu, other, false, limits)? else {
        return Ok(Verdict::unknown(Reason::BudgetExceeded));
    };
    let start = g
        .id(&OrbitPairNode { a: mu.bits(), b: other.bits(), visited_a: 1 << mu.bits(), visited_b: 1 << other.bits() })
        .unwrap();
    let meets = |x: u32| {
        let k = g.key(x);
        k.visited_a & k.visited_b != 0
    };
    Ok(match g.shortest_path(start, |_| true, meets) {
        Some((word, end)) => {
            let k = g.key(end);
            let common = (k.visited_a & k.visited_b).trailing_zeros();
            let s = full_tail(phi.arity(), &word);
            let mut w = Witness::replayed(phi, s, vec![mu, other], &[]);
            w.states = vec![StateVector::from_raw(phi.arity(), common)];
            Verdict::no(Reason::OrbitIntersection).with_witness(w)
        }
        None => Verdict::yes(Reason::OrbitPairExhausted),
    })
}
