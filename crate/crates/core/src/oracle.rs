//! Brute-force reference semantics for validating the deciders.
//!
//! Schedules are enumerated as words over the non-zero fire vectors and
//! closed into lassos `u·w^ω`; every candidate is judged by simulating it
//! with [`Run`] and evaluating the property definition literally. Nothing
//! here uses the graph module.
//!
//! Enumeration is breadth-first and merges words that end in the same
//! *configuration*: the current states of the tracked flows together with
//! whatever monotone history the property reads (fired coordinates, visited
//! states, "differed at a covered time", "met"). Two words with the same
//! configuration have the same set of possible continuations and the same
//! verdict on each, so keeping the first is exact.
//!
//! Sufficiency. Every lasso `u·w^ω` passes, after finitely many repetitions
//! of `w`, through a configuration `c` that recurs after a whole number of
//! further periods with its history unchanged. So a satisfying lasso exists
//! iff some reachable `c` admits a cycle back to itself whose letters cover
//! every coordinate, and the property's value on `u·w^ω` depends only on `c`:
//! - orbit properties read the visited sets, which the cycle cannot grow;
//! - "met at some time" and "differed at a covered time" are history flags;
//! - "eventually equal forever" is decided by the states of `c`, because
//!   equal flows stay equal under a shared letter.
//!
//! The configuration space is finite, so a search that ends with an empty
//! frontier is a proof of non-existence. A search cut off at `depth` with
//! work left over answers `Unknown`. Zero letters are never enumerated:
//! they change neither states nor history.

use alloc::boxed::Box;
use alloc::collections::VecDeque;
use alloc::vec;
use alloc::vec::Vec;

use hashbrown::HashMap;

use crate::boolean::{full_mask, FireVector, StateVector, TransitionFunction};
use crate::error::{Error, Result};
use crate::property::{Property, Quantifier, SeparationMode, TransitivityMode};
use crate::schedule::{joint_horizon, Run, Schedule};
use crate::verdict::{Reason, Truth, Verdict, Witness};

/// Largest arity the oracle accepts (visited sets are 64-bit masks).
pub const ORACLE_MAX_ARITY: u8 = 4;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct OracleConfig {
    /// Longest prefix `u` explored before giving up with `Unknown`.
    pub depth: usize,
    /// Close configurations into fair periods; when off, only the tail
    /// `(1,…,1)^ω` is tried and a failed search is inconclusive.
    pub lasso: bool,
    /// Cap on configuration expansions across one check.
    pub budget: u64,
}

impl Default for OracleConfig {
    fn default() -> Self {
        Self { depth: 4096, lasso: true, budget: 1 << 24 }
    }
}

/// A literal property of one lasso schedule applied to the tracked states.
#[derive(Clone, Debug, PartialEq, Eq)]
enum Pred {
    /// Equal at every covered time.
    Agree,
    /// Different at some covered time.
    Differ,
    /// Different at some covered time, equal from some time on.
    DifferThenMerge,
    /// Different at every time, including before `t_0`.
    Apart,
    /// Equal at some time.
    Meet,
    Disjoint,
    Intersect,
    Contains(u32),
    /// Every tracked orbit equals the set (packed membership mask).
    OrbitIs(u64),
    /// The single tracked orbit differs from the set.
    OrbitIsNot(u64),
}

#[derive(Clone, Copy, Default)]
struct Track {
    fired: bool,
    visited: bool,
    differ_covered: bool,
    met: bool,
}

impl Pred {
    fn track(&self) -> Track {
        match self {
            Pred::Agree | Pred::Differ | Pred::DifferThenMerge => {
                Track { fired: true, differ_covered: true, ..Track::default() }
            }
            Pred::Apart | Pred::Meet => Track { met: true, ..Track::default() },
            _ => Track { visited: true, ..Track::default() },
        }
    }

    /// Literal evaluation on the runs of `s` from `starts`.
    fn holds(&self, phi: &TransitionFunction, starts: &[StateVector], s: &Schedule) -> bool {
        let runs: Vec<Run> = starts.iter().map(|&mu| Run::compute(phi, mu, s)).collect();
        let refs: Vec<&Run> = runs.iter().collect();
        let (start, len) = joint_horizon(&refs);
        // interval k is covered iff k >= K; after m letters the flow is in interval m-1
        let covered_from = s.coverage_index().expect("progressive") + 1;
        let end = start.max(covered_from) + len;
        let eq = |m: usize| runs[0].state_after(m) == runs[1].state_after(m);
        let orbit_mask = |r: &Run| r.orbit().iter().fold(0u64, |acc, x| acc | 1 << x.bits());
        match self {
            Pred::Agree => (covered_from..end).all(eq),
            Pred::Differ => !(covered_from..end).all(eq),
            Pred::DifferThenMerge => !(covered_from..end).all(eq) && (start.max(covered_from)..end).all(eq),
            Pred::Apart => !(0..end).any(eq),
            Pred::Meet => (0..end).any(eq),
            Pred::Disjoint => orbit_mask(&runs[0]) & orbit_mask(&runs[1]) == 0,
            Pred::Intersect => orbit_mask(&runs[0]) & orbit_mask(&runs[1]) != 0,
            Pred::Contains(x) => orbit_mask(&runs[0]) >> x & 1 == 1,
            Pred::OrbitIs(a) => runs.iter().all(|r| orbit_mask(r) == *a),
            Pred::OrbitIsNot(a) => orbit_mask(&runs[0]) != *a,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
struct Config {
    states: Box<[u32]>,
    fired: u32,
    visited: Box<[u64]>,
    flags: u8,
}

const DIFFER_COVERED: u8 = 1;
const MET: u8 = 2;

impl Config {
    fn same_history(&self, other: &Self) -> bool {
        self.fired == other.fired && self.visited == other.visited && self.flags == other.flags
    }
}

enum Outcome {
    Found(Schedule),
    Exhausted,
    Inconclusive,
    Budget,
}

struct Search<'a> {
    phi: &'a TransitionFunction,
    track: Track,
    full: u32,
    cfg: &'a OracleConfig,
    expansions: u64,
}

impl<'a> Search<'a> {
    fn note(&self, c: &mut Config) {
        if self.track.differ_covered && c.fired == self.full && c.states[0] != c.states[1] {
            c.flags |= DIFFER_COVERED;
        }
        if self.track.met && c.states[0] == c.states[1] {
            c.flags |= MET;
        }
    }

    fn start(&self, starts: &[StateVector]) -> Config {
        let states: Box<[u32]> = starts.iter().map(|s| s.bits()).collect();
        let visited = if self.track.visited { states.iter().map(|&x| 1u64 << x).collect() } else { Box::default() };
        let mut c = Config { states, fired: 0, visited, flags: 0 };
        self.note(&mut c);
        c
    }

    fn step(&self, c: &Config, v: u32) -> Config {
        let states: Box<[u32]> = c.states.iter().map(|&x| self.phi.step_bits(v, x)).collect();
        let visited = if self.track.visited {
            c.visited.iter().zip(states.iter()).map(|(&m, &x)| m | 1 << x).collect()
        } else {
            Box::default()
        };
        let fired = if self.track.fired { c.fired | v } else { 0 };
        let mut next = Config { states, fired, visited, flags: c.flags };
        self.note(&mut next);
        next
    }

    fn spend(&mut self) -> bool {
        self.expansions += 1;
        self.expansions <= self.cfg.budget
    }

    /// Shortest non-empty word leading from `c` back to `c` with full union.
    fn closure(&mut self, c: &Config) -> Option<Option<Vec<u32>>> {
        let mut index: HashMap<(Config, u32), usize> = HashMap::new();
        let mut nodes: Vec<(Config, u32, usize, u32)> = vec![(c.clone(), 0, usize::MAX, 0)];
        index.insert((c.clone(), 0), 0);
        let mut head = 0;
        while head < nodes.len() {
            if !self.spend() {
                return None;
            }
            let (cur, mask) = (nodes[head].0.clone(), nodes[head].1);
            for v in 1..=self.full {
                let next = self.step(&cur, v);
                if !next.same_history(c) {
                    continue;
                }
                let m = mask | v;
                if m == self.full && next == *c {
                    let mut word = vec![v];
                    let mut at = head;
                    while at != 0 {
                        word.push(nodes[at].3);
                        at = nodes[at].2;
                    }
                    word.reverse();
                    return Some(Some(word));
                }
                if !index.contains_key(&(next.clone(), m)) {
                    index.insert((next.clone(), m), nodes.len());
                    nodes.push((next, m, head, v));
                }
            }
            head += 1;
        }
        Some(None)
    }

    fn run(&mut self, starts: &[StateVector], pred: &Pred) -> Outcome {
        let n = self.phi.arity();
        let word = |s: &[u32]| s.iter().map(|&b| FireVector::new(n, b).unwrap()).collect::<Vec<_>>();
        let root = self.start(starts);
        let mut index: HashMap<Config, usize> = HashMap::new();
        // (config, parent, letter, depth)
        let mut nodes: Vec<(Config, usize, u32, usize)> = vec![(root.clone(), usize::MAX, 0, 0)];
        index.insert(root, 0);
        let mut queue = VecDeque::from([0usize]);
        let mut truncated = false;
        while let Some(i) = queue.pop_front() {
            if !self.spend() {
                return Outcome::Budget;
            }
            let mut prefix = Vec::new();
            let mut at = i;
            while at != 0 {
                prefix.push(nodes[at].2);
                at = nodes[at].1;
            }
            prefix.reverse();
            let c = nodes[i].0.clone();
            let period = if self.cfg.lasso {
                match self.closure(&c) {
                    None => return Outcome::Budget,
                    Some(p) => p,
                }
            } else {
                Some(vec![self.full])
            };
            if let Some(period) = period {
                let s = Schedule::new(n, word(&prefix), word(&period)).expect("period covers");
                if pred.holds(self.phi, starts, &s) {
                    return Outcome::Found(s.canonical());
                }
            }
            let depth = nodes[i].3;
            for v in 1..=self.full {
                let next = self.step(&c, v);
                if index.contains_key(&next) {
                    continue;
                }
                if depth >= self.cfg.depth {
                    truncated = true;
                    continue;
                }
                index.insert(next.clone(), nodes.len());
                queue.push_back(nodes.len());
                nodes.push((next, i, v, depth + 1));
            }
        }
        if truncated || !self.cfg.lasso {
            Outcome::Inconclusive
        } else {
            Outcome::Exhausted
        }
    }
}

/// Outcome of one existential search as a verdict, with its lasso witness.
fn exists(
    phi: &TransitionFunction,
    starts: &[StateVector],
    pred: Pred,
    cfg: &OracleConfig,
    expansions: &mut u64,
) -> Verdict {
    let mut search = Search { phi, track: pred.track(), full: full_mask(phi.arity()), cfg, expansions: 0 };
    let outcome = search.run(starts, &pred);
    *expansions += search.expansions;
    match outcome {
        Outcome::Found(s) => {
            debug_assert!(pred.holds(phi, starts, &s));
            Verdict::yes(Reason::OracleWitness).with_witness(Witness::replayed(phi, s, starts.to_vec(), &[]))
        }
        Outcome::Exhausted => Verdict::no(Reason::OracleExhausted),
        Outcome::Inconclusive => Verdict::unknown(Reason::OracleDepthLimit),
        Outcome::Budget => Verdict::unknown(Reason::BudgetExceeded),
    }
}

/// Three-valued conjunction; stops at the first `False`.
fn all_of(items: impl IntoIterator<Item = Verdict>) -> Verdict {
    let mut unknown = None;
    for v in items {
        match v.value {
            Truth::True => {}
            Truth::False => return v,
            Truth::Unknown => unknown = unknown.or(Some(v)),
        }
    }
    unknown.unwrap_or_else(|| Verdict::yes(Reason::OracleExhausted))
}

/// Three-valued disjunction; stops at the first `True`.
fn any_of(items: impl IntoIterator<Item = Verdict>) -> Verdict {
    let mut unknown = None;
    for v in items {
        match v.value {
            Truth::True => return v,
            Truth::False => {}
            Truth::Unknown => unknown = unknown.or(Some(v)),
        }
    }
    unknown.unwrap_or_else(|| Verdict::no(Reason::OracleExhausted))
}

fn mask_of(set: &[StateVector]) -> u64 {
    set.iter().fold(0, |acc, s| acc | 1 << s.bits())
}

/// Evaluates `property` by bounded enumeration of schedules.
pub fn oracle_check(phi: &TransitionFunction, property: &Property, cfg: &OracleConfig) -> Result<Verdict> {
    oracle_check_counted(phi, property, cfg).map(|(v, _)| v)
}

/// [`oracle_check`] together with the number of configuration expansions.
pub fn oracle_check_counted(
    phi: &TransitionFunction,
    property: &Property,
    cfg: &OracleConfig,
) -> Result<(Verdict, u64)> {
    let n = phi.arity();
    if n > ORACLE_MAX_ARITY {
        return Err(Error::Budget { attempted: n as u64, limit: ORACLE_MAX_ARITY as u64 });
    }
    let check = |s: &StateVector| {
        if s.arity() != n {
            Err(Error::ArityMismatch { expected: n, found: s.arity() })
        } else {
            Ok(())
        }
    };
    let mut spent = 0u64;
    let mut ex = |starts: &[StateVector], pred: Pred| exists(phi, starts, pred, cfg, &mut spent);
    let states: Vec<StateVector> = phi.states().collect();
    let verdict = match property {
        Property::AgreeExists { mu, other } => {
            check(mu)?;
            check(other)?;
            ex(&[*mu, *other], Pred::Agree)
        }
        Property::PIndependent | Property::NDependent => {
            let v = any_of(states.iter().map(|&mu| all_of(states.iter().map(|&o| ex(&[mu, o], Pred::Agree)))));
            let v = Verdict::new(v.value, v.reason);
            if *property == Property::NDependent {
                v.negated()
            } else {
                v
            }
        }
        Property::NIndependent | Property::PDependent => {
            let v =
                any_of(states.iter().map(|&mu| all_of(states.iter().map(|&o| ex(&[mu, o], Pred::Differ).negated()))));
            let v = Verdict::new(v.value, v.reason);
            if *property == Property::PDependent {
                v.negated()
            } else {
                v
            }
        }
        Property::PairwiseMergeableAll => {
            let v = all_of(
                states
                    .iter()
                    .flat_map(|&mu| states.iter().map(move |&o| (mu, o)))
                    .map(|(mu, o)| ex(&[mu, o], Pred::Agree)),
            );
            Verdict::new(v.value, v.reason)
        }
        Property::Separated { mu, other, mode, quantifier } => {
            check(mu)?;
            check(other)?;
            let pair = [*mu, *other];
            use Quantifier::*;
            use SeparationMode::*;
            match (mode, quantifier) {
                (Temporal, P) => ex(&pair, Pred::Differ),
                (Temporal, N) => ex(&pair, Pred::Agree).negated(),
                (Weak, P) => ex(&pair, Pred::DifferThenMerge),
                (Weak, N) => Verdict::unknown(Reason::AmbiguousDefinition),
                (Strong, P) => ex(&pair, Pred::Apart),
                (Strong, N) => ex(&pair, Pred::Meet).negated(),
                (Atemporal, P) => ex(&pair, Pred::Disjoint),
                (Atemporal, N) => ex(&pair, Pred::Intersect).negated(),
            }
        }
        Property::PointTransitive { mu, mode } => {
            check(mu)?;
            let all = mask_of(&states);
            match mode {
                TransitivityMode::WeakP => all_of(states.iter().map(|t| ex(&[*mu], Pred::Contains(t.bits())))),
                TransitivityMode::StrongP => ex(&[*mu], Pred::OrbitIs(all)),
                TransitivityMode::N => ex(&[*mu], Pred::OrbitIsNot(all)).negated(),
            }
        }
        Property::SetTransitive { set, mode } => {
            if set.is_empty() {
                return Err(Error::EmptySet);
            }
            for s in set {
                check(s)?;
            }
            set_check(set, *mode, &mut ex)
        }
        Property::SystemTransitive { mode } => set_check(&states, *mode, &mut ex),
    };
    Ok((verdict, spent))
}

fn set_check(
    set: &[StateVector],
    mode: TransitivityMode,
    ex: &mut impl FnMut(&[StateVector], Pred) -> Verdict,
) -> Verdict {
    let mut a = set.to_vec();
    a.sort_unstable();
    a.dedup();
    let mask = mask_of(&a);
    match mode {
        TransitivityMode::WeakP => all_of(a.iter().map(|&mu| ex(&[mu], Pred::OrbitIs(mask)))),
        TransitivityMode::StrongP => ex(&a, Pred::OrbitIs(mask)),
        TransitivityMode::N => all_of(a.iter().map(|&mu| ex(&[mu], Pred::OrbitIsNot(mask)).negated())),
    }
}

/// Every property descriptor the sweep checks at arity `n`: agreement and
/// all separation variants on ordered pairs, point transitivity at every
/// state, set transitivity on every non-empty subset, and the whole-system
/// properties.
pub fn property_catalogue(n: u8) -> Vec<Property> {
    let states: Vec<StateVector> = StateVector::all(n).collect();
    let mut out = Property::system_properties();
    for &mu in &states {
        for &other in &states {
            out.push(Property::AgreeExists { mu, other });
            for mode in SeparationMode::ALL {
                for quantifier in Quantifier::ALL {
                    out.push(Property::Separated { mu, other, mode, quantifier });
                }
            }
        }
    }
    for &mu in &states {
        for mode in TransitivityMode::ALL {
            out.push(Property::PointTransitive { mu, mode });
        }
    }
    for bits in 1u64..1 << states.len() {
        let set: Vec<StateVector> = states.iter().copied().filter(|s| bits >> s.bits() & 1 == 1).collect();
        for mode in TransitivityMode::ALL {
            out.push(Property::SetTransitive { set: set.clone(), mode });
        }
    }
    out
}

/// One property on one function where decider and oracle were compared.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Comparison {
    pub table: Vec<u32>,
    pub property: Property,
    pub decider: Truth,
    pub oracle: Truth,
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct SweepReport {
    pub functions: usize,
    pub checks: usize,
    pub agreements: usize,
    /// Both sides known and different.
    pub disagreements: Vec<Comparison>,
    /// At least one side `Unknown`.
    pub unresolved: Vec<Comparison>,
}

/// Compares [`crate::deciders::decide`] with [`oracle_check`] on every
/// function and every property from `properties`.
pub fn oracle_sweep(
    functions: impl IntoIterator<Item = TransitionFunction>,
    properties: impl Fn(&TransitionFunction) -> Vec<Property>,
    cfg: &OracleConfig,
    limits: &crate::deciders::Limits,
) -> Result<SweepReport> {
    let mut report = SweepReport::default();
    for phi in functions {
        report.functions += 1;
        for property in properties(&phi) {
            let d = crate::deciders::decide(&phi, &property, limits)?.value;
            let o = oracle_check(&phi, &property, cfg)?.value;
            report.checks += 1;
            let cmp = || Comparison { table: phi.table().to_vec(), property: property.clone(), decider: d, oracle: o };
            match (d, o) {
                (Truth::Unknown, _) | (_, Truth::Unknown) => report.unresolved.push(cmp()),
                _ if d == o => report.agreements += 1,
                _ => report.disagreements.push(cmp()),
            }
        }
    }
    Ok(report)
}

/// All lasso schedules with non-zero letters, `|u| ≤ max_prefix`,
/// `1 ≤ |w| ≤ max_period` and `w` covering every coordinate, shortest first.
/// The deliberately naive reference for small bounds.
pub fn enumerate_lassos(arity: u8, max_prefix: usize, max_period: usize) -> Vec<Schedule> {
    let letters: Vec<FireVector> = (1..=full_mask(arity)).map(|b| FireVector::new(arity, b).unwrap()).collect();
    let words = |max: usize, min: usize| {
        let mut out: Vec<Vec<FireVector>> = Vec::new();
        let mut layer: Vec<Vec<FireVector>> = vec![Vec::new()];
        for len in 0..=max {
            if len >= min {
                out.extend(layer.iter().cloned());
            }
            layer = layer
                .iter()
                .flat_map(|w| {
                    letters.iter().map(move |&l| {
                        let mut w = w.clone();
                        w.push(l);
                        w
                    })
                })
                .collect();
        }
        out
    };
    let prefixes = words(max_prefix, 0);
    let periods: Vec<Vec<FireVector>> = words(max_period, 1)
        .into_iter()
        .filter(|w| w.iter().fold(0, |a, v| a | v.bits()) == full_mask(arity))
        .collect();
    let mut out = Vec::new();
    for u in &prefixes {
        for w in &periods {
            out.push(Schedule::new(arity, u.clone(), w.clone()).unwrap());
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::deciders::{decide, Limits};
    use proptest::prelude::*;

    fn s(t: &str) -> StateVector {
        t.parse().unwrap()
    }
    fn toggle_second() -> TransitionFunction {
        TransitionFunction::from_fn(2, |mu| mu.with(2, !mu.get(2))).unwrap()
    }
    fn cfg() -> OracleConfig {
        OracleConfig::default()
    }

    #[test]
    fn oracle_examples() {
        let p = Property::SetTransitive { set: vec![s("00"), s("01")], mode: TransitivityMode::N };
        assert!(oracle_check(&toggle_second(), &p, &cfg()).unwrap().is_true());
        let c = TransitionFunction::constant(s("11"));
        assert!(oracle_check(&c, &Property::NIndependent, &cfg()).unwrap().is_true());
        let shallow = OracleConfig { depth: 1, ..cfg() };
        for phi in [toggle_second(), c] {
            for mu in phi.states() {
                let p = Property::AgreeExists { mu, other: mu };
                assert!(oracle_check(&phi, &p, &shallow).unwrap().is_true());
            }
        }
    }

    #[test]
    fn cut_off_searches_are_unknown() {
        let not = TransitionFunction::from_fn(2, |mu| StateVector::new(2, !mu.bits() & 3).unwrap()).unwrap();
        let p = Property::PointTransitive { mu: s("00"), mode: TransitivityMode::N };
        let v = oracle_check(&not, &p, &OracleConfig { depth: 0, ..cfg() }).unwrap();
        assert_eq!(v.value, Truth::Unknown);
        // (1,1)^ω from 00 only visits {00, 11}
        assert!(oracle_check(&not, &p, &cfg()).unwrap().is_false());

        let p = Property::SetTransitive { set: vec![s("00"), s("01")], mode: TransitivityMode::N };
        let v = oracle_check(&toggle_second(), &p, &OracleConfig { lasso: false, ..cfg() }).unwrap();
        assert_eq!(v.value, Truth::Unknown);
    }

    #[test]
    fn sweep_n1_has_no_disagreements() {
        let fs = (0..4).map(|i| TransitionFunction::from_index(1, i).unwrap());
        let r = oracle_sweep(fs, |phi| property_catalogue(phi.arity()), &cfg(), &Limits::default()).unwrap();
        assert_eq!(r.functions, 4);
        assert!(r.disagreements.is_empty(), "{:?}", r.disagreements);
        assert!(r.unresolved.iter().all(|c| c.property.name() == "weak-n-separated"));
    }

    /// Every naive witness is found by the pruned search, and every naive
    /// exhaustion is matched.
    #[test]
    fn pruned_search_covers_naive_enumeration() {
        let lassos = enumerate_lassos(2, 2, 3);
        let preds = |a: StateVector, b: StateVector| {
            [
                Pred::Agree,
                Pred::Differ,
                Pred::DifferThenMerge,
                Pred::Apart,
                Pred::Meet,
                Pred::Disjoint,
                Pred::Intersect,
                Pred::Contains(b.bits()),
                Pred::OrbitIs(1 << a.bits() | 1 << b.bits()),
            ]
        };
        for idx in (0..256).step_by(5) {
            let phi = TransitionFunction::from_index(2, idx).unwrap();
            for a in phi.states() {
                for b in phi.states() {
                    for pred in preds(a, b) {
                        let starts = [a, b];
                        let naive = lassos.iter().any(|l| pred.holds(&phi, &starts, l));
                        let mut spent = 0;
                        let v = exists(&phi, &starts, pred.clone(), &cfg(), &mut spent);
                        if naive {
                            assert!(v.is_true(), "{idx} {a} {b} {pred:?}");
                        }
                        if v.is_true() {
                            let w = v.witness.unwrap();
                            assert!(pred.holds(&phi, &starts, w.schedule.as_ref().unwrap()));
                        } else {
                            assert!(v.is_false());
                        }
                    }
                }
            }
        }
    }

    #[test]
    fn agrees_with_deciders_on_examples() {
        let phi = toggle_second();
        let lim = Limits::default();
        for p in property_catalogue(2) {
            let d = decide(&phi, &p, &lim).unwrap().value;
            let o = oracle_check(&phi, &p, &cfg()).unwrap().value;
            assert_eq!(d, o, "{p}");
        }
    }

    fn arb_schedule() -> impl Strategy<Value = (Vec<u32>, Vec<u32>)> {
        (proptest::collection::vec(1u32..8, 0..5), proptest::collection::vec(1u32..8, 1..4))
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(1000))]

        /// Inserting zero letters changes no literal property value.
        #[test]
        fn stuttering_spot_check(
            table in proptest::collection::vec(0u32..8, 8),
            (prefix, period) in arb_schedule(),
            a in 0u32..8,
            b in 0u32..8,
            zeros in proptest::collection::vec(0usize..6, 0..4),
        ) {
            let phi = TransitionFunction::new(3, table).unwrap();
            let word = |w: &[u32]| w.iter().map(|&v| FireVector::new(3, v).unwrap()).collect::<Vec<_>>();
            let mut period = period;
            period.push(7);
            let base = Schedule::new(3, word(&prefix), word(&period)).unwrap();
            let (mut p2, mut w2) = (prefix.clone(), period.clone());
            for (i, &z) in zeros.iter().enumerate() {
                if i % 2 == 0 {
                    p2.insert(z.min(p2.len()), 0);
                } else {
                    w2.insert(z.min(w2.len()), 0);
                }
            }
            let stut = Schedule::new(3, word(&p2), word(&w2)).unwrap();
            let (a, b) = (StateVector::new(3, a).unwrap(), StateVector::new(3, b).unwrap());
            let all = (1u64 << 8) - 1;
            for pred in [Pred::Agree, Pred::Differ, Pred::DifferThenMerge, Pred::Apart, Pred::Meet,
                         Pred::Disjoint, Pred::Intersect, Pred::Contains(b.bits()), Pred::OrbitIs(all),
                         Pred::OrbitIsNot(all)] {
                prop_assert_eq!(pred.holds(&phi, &[a, b], &base), pred.holds(&phi, &[a, b], &stut));
            }
        }
    }
}
