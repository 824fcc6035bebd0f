use alloc::vec;
use alloc::vec::Vec;

use super::{check_state, full_tail, lasso, Limits};
use crate::boolean::{full_mask, StateVector, TransitionFunction};
use crate::error::{Error, Result};
use crate::graph::{build_graph, covering_walk, exists_fair_run, fair_run_witness, LabeledGraph, SetProductNode};
use crate::property::TransitivityMode;
use crate::schedule::Run;
use crate::verdict::{Reason, Verdict, Witness};

/// Transitivity of a single point.
///
/// - weak-p: every state is reachable from `mu`.
/// - strong-p: one walk from `mu` visits every state.
/// - n: no progressive run from `mu` avoids any other state forever.
pub fn point_transitive(phi: &TransitionFunction, mu: StateVector, mode: TransitivityMode) -> Result<Verdict> {
    check_state(phi, mu)?;
    let g = build_graph(phi, None)?;
    let from = mu.bits();
    Ok(match mode {
        TransitivityMode::WeakP => {
            let reach = g.reachable(from, |_| true);
            match reach.iter().position(|&r| !r) {
                None => Verdict::yes(Reason::Reachability),
                Some(missing) => {
                    Verdict::no(Reason::Unreachable).with_witness(Witness::states(vec![*g.key(missing as u32)]))
                }
            }
        }
        TransitivityMode::StrongP => {
            let all: Vec<u32> = (0..g.len() as u32).collect();
            match covering_walk(&g, from, &all, |_| true) {
                Some((walk, _)) => {
                    let s = full_tail(phi.arity(), &walk);
                    let at: Vec<_> = (0..walk.len()).map(Some).collect();
                    Verdict::yes(Reason::SccChain).with_witness(Witness::replayed(phi, s, vec![mu], &at))
                }
                None => Verdict::no(Reason::NotChain),
            }
        }
        TransitivityMode::N => match avoiding_run(&g, phi, mu, (0..g.len() as u32).filter(|&t| t != from)) {
            Some(w) => Verdict::no(Reason::AvoidingFairRun).with_witness(w),
            None => Verdict::yes(Reason::AllFairRunsCover),
        },
    })
}

/// First target (in order) avoided forever by some fair run from `mu`, with
/// that run as a lasso schedule.
fn avoiding_run(
    g: &LabeledGraph<StateVector>,
    phi: &TransitionFunction,
    mu: StateVector,
    targets: impl Iterator<Item = u32>,
) -> Option<Witness> {
    let from = g.id(&mu)?;
    for t in targets {
        if exists_fair_run(g, from, &[t]) {
            let (prefix, period) = fair_run_witness(g, from, |x| x != t, |_| true).unwrap();
            let s = lasso(phi.arity(), &prefix, &period);
            let mut w = Witness::replayed(phi, s, vec![mu], &[]);
            w.states = vec![*g.key(t)];
            return Some(w);
        }
    }
    None
}

fn normalise_set(phi: &TransitionFunction, set: &[StateVector]) -> Result<Vec<StateVector>> {
    if set.is_empty() {
        return Err(Error::EmptySet);
    }
    for &s in set {
        check_state(phi, s)?;
    }
    let mut a = set.to_vec();
    a.sort_unstable();
    a.dedup();
    Ok(a)
}

/// Whether no label moves a member of `a` outside `a`.
fn is_closed(phi: &TransitionFunction, member: &[bool], a: &[StateVector]) -> bool {
    a.iter().all(|x| (0..=full_mask(phi.arity())).all(|v| member[phi.step_bits(v, x.bits()) as usize]))
}

/// Transitivity of a non-empty set `A`.
///
/// - weak-p: from each member, a progressive run whose orbit is exactly `A`.
/// - strong-p: one progressive schedule giving orbit `A` from every member.
/// - n: every progressive run from every member has orbit `A`.
pub fn set_transitive(
    phi: &TransitionFunction,
    set: &[StateVector],
    mode: TransitivityMode,
    limits: &Limits,
) -> Result<Verdict> {
    let a = normalise_set(phi, set)?;
    let mut member = vec![false; 1 << phi.arity()];
    for s in &a {
        member[s.bits() as usize] = true;
    }
    Ok(match mode {
        TransitivityMode::WeakP => set_weak_p(phi, &a)?,
        TransitivityMode::StrongP => {
            if is_closed(phi, &member, &a) {
                closed_set_strong_p(phi, &a)?
            } else {
                set_strong_p_product(phi, &a, &member, limits)?
            }
        }
        TransitivityMode::N => set_n(phi, &a, &member)?,
    })
}

/// [`set_transitive`] with `A = B^n`.
pub fn system_transitive(phi: &TransitionFunction, mode: TransitivityMode, limits: &Limits) -> Result<Verdict> {
    let all: Vec<StateVector> = phi.states().collect();
    set_transitive(phi, &all, mode, limits)
}

fn set_weak_p(phi: &TransitionFunction, a: &[StateVector]) -> Result<Verdict> {
    let g = build_graph(phi, Some(a))?;
    for &mu in a {
        let from = g.id(&mu).unwrap();
        let reach = g.reachable(from, |_| true);
        if let Some(missing) = reach.iter().position(|&r| !r) {
            return Ok(Verdict::no(Reason::Unreachable).with_witness(Witness::states(vec![mu, *g.key(missing as u32)])));
        }
        let cond = g.condense(&reach);
        let comps: Vec<u32> = (0..cond.len() as u32).collect();
        if !cond.is_chain(&comps) {
            return Ok(Verdict::no(Reason::NotChain).with_witness(Witness::states(vec![mu])));
        }
        if !cond.is_fair(cond.len() as u32 - 1) {
            return Ok(Verdict::no(Reason::UnfairTail).with_witness(Witness::states(vec![mu])));
        }
    }
    Ok(Verdict::yes(Reason::SccChain))
}

/// For a set closed under every label, one schedule serving all members
/// exists iff the restricted graph is strongly connected: walk the first
/// member's run over all of `A`, then the second member's from wherever it
/// now is, and so on. Visited sets only grow and no run can leave `A`.
fn closed_set_strong_p(phi: &TransitionFunction, a: &[StateVector]) -> Result<Verdict> {
    let g = build_graph(phi, Some(a))?;
    let reach = g.reachable(0, |_| true);
    if reach.iter().any(|&r| !r) || g.condense(&reach).len() != 1 {
        return Ok(Verdict::no(Reason::ClosedSetDisconnected));
    }
    let all: Vec<u32> = (0..g.len() as u32).collect();
    let mut word: Vec<u32> = Vec::new();
    for &mu in a {
        let at = word.iter().fold(mu.bits(), |x, &v| phi.step_bits(v, x));
        let (walk, _) = covering_walk(&g, g.id(&StateVector::from_raw(phi.arity(), at)).unwrap(), &all, |_| true)
            .expect("strongly connected");
        word.extend(walk);
    }
    let s = full_tail(phi.arity(), &word);
    Ok(Verdict::yes(Reason::ClosedSetConnectivity).with_witness(Witness::replayed(phi, s, a.to_vec(), &[])))
}

/// Shared-schedule product over `A`: one component per member, each with a
/// mask of the members it has visited. Success is a fair SCC, reachable
/// without leaving `A`, in which every mask is full.
fn set_strong_p_product(
    phi: &TransitionFunction,
    a: &[StateVector],
    member: &[bool],
    limits: &Limits,
) -> Result<Verdict> {
    let m = a.len();
    if m > 32 {
        return Ok(Verdict::unknown(Reason::BudgetExceeded));
    }
    let mut pos = vec![u32::MAX; member.len()];
    for (i, s) in a.iter().enumerate() {
        pos[s.bits() as usize] = i as u32;
    }
    let full_set = if m == 32 { u32::MAX } else { (1u32 << m) - 1 };
    let mut data: Vec<u32> = a.iter().map(|s| s.bits()).collect();
    data.extend((0..m).map(|i| 1u32 << i));
    let start = SetProductNode { data: data.into_boxed_slice() };
    let explored =
        LabeledGraph::explore(phi.arity(), core::slice::from_ref(&start), true, limits.node_budget, |k, v| {
            let mut next = k.data.clone();
            for i in 0..m {
                let y = phi.step_bits(v, k.data[i]);
                if !member[y as usize] {
                    return None;
                }
                next[i] = y;
                next[m + i] |= 1 << pos[y as usize];
            }
            Some(SetProductNode { data: next })
        });
    let g = match explored {
        Ok(g) => g,
        Err(Error::Budget { .. }) => return Ok(Verdict::unknown(Reason::BudgetExceeded)),
        Err(e) => return Err(e),
    };
    let from = g.id(&start).unwrap();
    let covered = |x: u32| g.key(x).data[m..].iter().all(|&mask| mask == full_set);
    Ok(match fair_run_witness(&g, from, |_| true, covered) {
        Some((prefix, period)) => {
            let s = lasso(phi.arity(), &prefix, &period);
            Verdict::yes(Reason::SetProductFairScc).with_witness(Witness::replayed(phi, s, a.to_vec(), &[]))
        }
        None => Verdict::no(Reason::SetProductExhausted),
    })
}

fn set_n(phi: &TransitionFunction, a: &[StateVector], member: &[bool]) -> Result<Verdict> {
    let g = build_graph(phi, None)?;
    for &mu in a {
        let from = mu.bits();
        if let Some((word, out)) = g.shortest_path(from, |_| true, |x| !member[x as usize]) {
            let s = full_tail(phi.arity(), &word);
            let mut w = Witness::replayed(phi, s, vec![mu], &[Some(word.len() - 1)]);
            w.states = vec![*g.key(out)];
            return Ok(Verdict::no(Reason::Escape).with_witness(w));
        }
        let others = a.iter().map(|s| s.bits()).filter(|&t| t != from);
        if let Some(w) = avoiding_run(&g, phi, mu, others) {
            return Ok(Verdict::no(Reason::AvoidingFairRun).with_witness(w));
        }
    }
    Ok(Verdict::yes(Reason::AllFairRunsCover))
}

/// Orbit of every witnessed initial state, for checking set-transitivity witnesses.
pub fn witness_orbits(phi: &TransitionFunction, w: &Witness) -> Option<Vec<Vec<StateVector>>> {
    let s = w.schedule.as_ref()?;
    Some(w.initial.iter().map(|&mu| Run::compute(phi, mu, s).orbit().into_iter().collect()).collect())
}
