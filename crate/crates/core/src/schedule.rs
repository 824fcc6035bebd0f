//! Ultimately periodic progressive schedules, time grids and flows.
//!
//! A schedule induces the infinite word `α^0 α^1 …` with `α^k = prefix[k]` for
//! `k < |prefix|` and `period[(k - |prefix|) mod |period|]` afterwards. The flow
//! of `μ` is `μ` before `t_0` and `Φ^{α^0…α^k}(μ)` on `[t_k, t_{k+1})`.
//!
//! Steps are counted in letters: after `m` letters the flow sits in grid
//! interval `m - 1`, and `m = 0` is the interval before `t_0`.

use alloc::collections::BTreeSet;
use alloc::vec::Vec;

use hashbrown::HashMap;

use crate::boolean::{full_mask, CoordinateSet, FireVector, StateVector, TransitionFunction};
use crate::error::{Error, Result};

/// Finite representation of a schedule `ρ`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Schedule {
    arity: u8,
    prefix: Vec<FireVector>,
    period: Vec<FireVector>,
}

impl Schedule {
    /// A schedule that is well formed but not necessarily progressive.
    pub fn raw(arity: u8, prefix: Vec<FireVector>, period: Vec<FireVector>) -> Result<Self> {
        if period.is_empty() {
            return Err(Error::EmptyPeriod);
        }
        if let Some(v) = prefix.iter().chain(&period).find(|v| v.arity() != arity) {
            return Err(Error::ArityMismatch { expected: arity, found: v.arity() });
        }
        Ok(Self { arity, prefix, period })
    }

    /// A progressive schedule; rejects periods that leave some coordinate idle.
    pub fn new(arity: u8, prefix: Vec<FireVector>, period: Vec<FireVector>) -> Result<Self> {
        let s = Self::raw(arity, prefix, period)?;
        let missing = s.idle_coordinates();
        if !missing.is_empty() {
            return Err(Error::NotProgressive { missing });
        }
        Ok(s)
    }

    /// `prefix` followed by `(1,…,1)` forever.
    pub fn with_full_tail(arity: u8, prefix: Vec<FireVector>) -> Result<Self> {
        Self::new(arity, prefix, alloc::vec![FireVector::ones(arity)])
    }

    pub fn arity(&self) -> u8 {
        self.arity
    }

    pub fn prefix(&self) -> &[FireVector] {
        &self.prefix
    }

    pub fn period(&self) -> &[FireVector] {
        &self.period
    }

    /// Coordinates never fired by the period.
    pub fn idle_coordinates(&self) -> CoordinateSet {
        let fired = self.period.iter().fold(0, |acc, v| acc | v.bits());
        CoordinateSet::from_raw(self.arity, full_mask(self.arity) & !fired)
    }

    /// True iff every coordinate fires infinitely often.
    pub fn validate_progressive(&self) -> bool {
        self.idle_coordinates().is_empty()
    }

    /// Letter `α^k`.
    pub fn step(&self, k: usize) -> FireVector {
        if k < self.prefix.len() {
            self.prefix[k]
        } else {
            self.period[(k - self.prefix.len()) % self.period.len()]
        }
    }

    /// Period position of letter `k`, or `None` while inside the prefix.
    pub(crate) fn period_position(&self, k: usize) -> Option<usize> {
        k.checked_sub(self.prefix.len()).map(|j| j % self.period.len())
    }

    /// Smallest `K` with `α^0 ∪ … ∪ α^K = (1,…,1)`; `None` if not progressive.
    pub fn coverage_index(&self) -> Option<usize> {
        if !self.validate_progressive() {
            return None;
        }
        let full = full_mask(self.arity);
        let mut union = 0;
        let mut k = 0;
        loop {
            union |= self.step(k).bits();
            if union == full {
                return Some(k);
            }
            k += 1;
        }
    }

    /// Applies `f` to every letter.
    pub fn map_letters(&self, mut f: impl FnMut(FireVector) -> FireVector) -> Result<Self> {
        Self::raw(self.arity, self.prefix.iter().map(|&v| f(v)).collect(), self.period.iter().map(|&v| f(v)).collect())
    }

    /// Shortest equivalent representation of the same infinite word: the
    /// period is reduced to its primitive root and prefix letters matching the
    /// period's tail are rotated into it.
    pub fn canonical(&self) -> Self {
        let mut period = self.period.clone();
        let p = period.len();
        if let Some(root) = (1..=p).find(|&d| p.is_multiple_of(d) && (d..p).all(|i| period[i] == period[i - d])) {
            period.truncate(root);
        }
        let mut prefix = self.prefix.clone();
        while let Some(&last) = prefix.last() {
            if last != *period.last().unwrap() {
                break;
            }
            prefix.pop();
            period.rotate_right(1);
        }
        Self { arity: self.arity, prefix, period }
    }
}

/// Strictly increasing real times `t_0 < t_1 < …`, unbounded above.
///
/// The listed times are used first; afterwards the grid continues with unit
/// spacing from the last listed time. An empty list is the canonical grid
/// `t_k = k`.
#[derive(Clone, Debug, Default, PartialEq)]
pub struct TimeGrid {
    times: Vec<f64>,
}

impl TimeGrid {
    pub fn canonical() -> Self {
        Self { times: Vec::new() }
    }

    pub fn explicit(times: Vec<f64>) -> Result<Self> {
        let ok = times.iter().all(|t| t.is_finite()) && times.windows(2).all(|w| w[0] < w[1]);
        if !ok {
            return Err(Error::InvalidTimeGrid);
        }
        Ok(Self { times })
    }

    pub fn is_canonical(&self) -> bool {
        self.times.is_empty()
    }

    pub fn listed(&self) -> &[f64] {
        &self.times
    }

    /// `t_k`.
    pub fn time(&self, k: usize) -> f64 {
        match self.times.len() {
            0 => k as f64,
            len if k < len => self.times[k],
            len => self.times[len - 1] + (k - (len - 1)) as f64,
        }
    }

    /// The `k` with `t ∈ [t_k, t_{k+1})`, or `None` for `t < t_0`.
    pub fn interval_of(&self, t: f64) -> Option<usize> {
        let (base_k, base_t) = match self.times.len() {
            0 => (0, 0.0),
            len => {
                if t < self.times[0] {
                    return None;
                }
                let after = self.times.partition_point(|&x| x <= t);
                if after < len {
                    return Some(after - 1);
                }
                (len - 1, self.times[len - 1])
            }
        };
        if t < base_t {
            return None;
        }
        // `as` truncates toward zero, which is floor for the non-negative offset.
        let mut k = base_k + (t - base_t) as usize;
        while self.time(k + 1) <= t {
            k += 1;
        }
        while k > base_k && self.time(k) > t {
            k -= 1;
        }
        Some(k)
    }
}

/// The trajectory `Φ^ρ(μ, ·)`.
#[derive(Clone, Copy, Debug)]
pub struct Flow<'a> {
    pub phi: &'a TransitionFunction,
    pub mu: StateVector,
    pub schedule: &'a Schedule,
    pub grid: &'a TimeGrid,
}

impl<'a> Flow<'a> {
    pub fn new(
        phi: &'a TransitionFunction,
        mu: StateVector,
        schedule: &'a Schedule,
        grid: &'a TimeGrid,
    ) -> Result<Self> {
        for found in [mu.arity(), schedule.arity()] {
            if found != phi.arity() {
                return Err(Error::ArityMismatch { expected: phi.arity(), found });
            }
        }
        Ok(Self { phi, mu, schedule, grid })
    }

    /// `Φ^ρ(μ, t)`.
    pub fn at(&self, t: f64) -> StateVector {
        match self.grid.interval_of(t) {
            None => self.mu,
            Some(k) => self.run().state_after(k + 1),
        }
    }

    /// The lasso-shaped run of states indexed by letters consumed.
    pub fn run(&self) -> Run {
        Run::compute(self.phi, self.mu, self.schedule)
    }

    /// `Or_ρ(μ)`.
    pub fn orbit(&self) -> BTreeSet<StateVector> {
        self.run().orbit()
    }
}

/// States `x_0 = μ, x_1, …` with `x_{j+len} = x_j` for `j ≥ loop_start`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Run {
    arity: u8,
    states: Vec<u32>,
    loop_start: usize,
}

impl Run {
    pub fn compute(phi: &TransitionFunction, mu: StateVector, schedule: &Schedule) -> Self {
        let arity = phi.arity();
        let mut states = alloc::vec![mu.bits()];
        let mut seen: HashMap<(u32, usize), usize> = HashMap::new();
        let mut x = mu.bits();
        let mut j = 0usize;
        loop {
            // x = x_j, the state before letter j
            if let Some(pos) = schedule.period_position(j) {
                if let Some(&first) = seen.get(&(x, pos)) {
                    states.pop();
                    return Self { arity, states, loop_start: first };
                }
                seen.insert((x, pos), j);
            }
            x = phi.step_bits(schedule.step(j).bits(), x);
            states.push(x);
            j += 1;
        }
    }

    /// `x_m`, the state after `m` letters.
    pub fn state_after(&self, m: usize) -> StateVector {
        let len = self.states.len();
        let idx = if m < len {
            m
        } else {
            let cyc = len - self.loop_start;
            self.loop_start + (m - self.loop_start) % cyc
        };
        StateVector::from_raw(self.arity, self.states[idx])
    }

    /// Letters before the run enters its cycle.
    pub fn loop_start(&self) -> usize {
        self.loop_start
    }

    /// Length in letters of the repeating part.
    pub fn cycle_len(&self) -> usize {
        self.states.len() - self.loop_start
    }

    pub fn orbit(&self) -> BTreeSet<StateVector> {
        self.states.iter().map(|&b| StateVector::from_raw(self.arity, b)).collect()
    }

    /// States visited infinitely often.
    pub fn recurrent(&self) -> BTreeSet<StateVector> {
        self.states[self.loop_start..].iter().map(|&b| StateVector::from_raw(self.arity, b)).collect()
    }
}

/// A horizon after which two runs of the same schedule are both periodic in
/// lockstep: any step index `m ≥ horizon` satisfies `x_m = x_{m+lcm}`.
pub fn joint_horizon(runs: &[&Run]) -> (usize, usize) {
    let start = runs.iter().map(|r| r.loop_start).max().unwrap_or(0);
    let lcm = runs.iter().fold(1usize, |acc, r| lcm(acc, r.cycle_len()));
    (start, lcm)
}

fn gcd(a: usize, b: usize) -> usize {
    if b == 0 {
        a
    } else {
        gcd(b, a % b)
    }
}

fn lcm(a: usize, b: usize) -> usize {
    a / gcd(a, b) * b
}

#[cfg(test)]
mod tests {
    use super::*;
    use alloc::vec;
    use proptest::prelude::*;

    fn s(t: &str) -> StateVector {
        t.parse().unwrap()
    }
    fn fv(t: &str) -> FireVector {
        t.parse().unwrap()
    }
    fn word(ts: &[&str]) -> Vec<FireVector> {
        ts.iter().map(|t| fv(t)).collect()
    }
    fn origin_jump() -> TransitionFunction {
        TransitionFunction::new(2, vec![0b11, 0b01, 0b10, 0b11]).unwrap()
    }
    fn toggle_second() -> TransitionFunction {
        TransitionFunction::from_fn(2, |mu| mu.with(2, !mu.get(2))).unwrap()
    }

    #[test]
    fn progressive_examples() {
        assert!(Schedule::raw(2, vec![], word(&["11"])).unwrap().validate_progressive());
        assert!(Schedule::raw(2, word(&["11"]), word(&["01", "10"])).unwrap().validate_progressive());
        let idle = Schedule::raw(2, vec![], word(&["01"])).unwrap();
        assert!(!idle.validate_progressive());
        match Schedule::new(2, vec![], word(&["01"])) {
            Err(Error::NotProgressive { missing }) => {
                assert_eq!(missing.coordinates().collect::<Vec<_>>(), vec![1])
            }
            other => panic!("{other:?}"),
        }
        assert_eq!(Schedule::raw(2, vec![], vec![]), Err(Error::EmptyPeriod));
    }

    #[test]
    fn coverage_examples() {
        let s1 = Schedule::new(2, vec![], word(&["11"])).unwrap();
        assert_eq!(s1.coverage_index(), Some(0));
        let s2 = Schedule::new(2, word(&["10"]), word(&["10", "01"])).unwrap();
        assert_eq!(s2.coverage_index(), Some(2));
        let s3 = Schedule::new(2, word(&["01", "10"]), word(&["11"])).unwrap();
        assert_eq!(s3.coverage_index(), Some(1));
    }

    #[test]
    fn flow_examples() {
        let grid = TimeGrid::canonical();
        let c = TransitionFunction::constant(s("11"));
        let all = Schedule::new(2, vec![], word(&["11"])).unwrap();
        let f = Flow::new(&c, s("00"), &all, &grid).unwrap();
        assert_eq!(f.at(-1.0), s("00"));
        assert_eq!(f.at(0.0), s("11"));

        let phi = origin_jump();
        let sched = Schedule::new(2, word(&["01"]), word(&["11"])).unwrap();
        let f = Flow::new(&phi, s("00"), &sched, &grid).unwrap();
        assert_eq!(f.at(0.5), s("01"));
        assert_eq!(f.at(1.0), s("01"));
        assert_eq!(f.at(1.9), s("01"));
    }

    #[test]
    fn orbit_examples() {
        let grid = TimeGrid::canonical();
        let phi = origin_jump();
        let alt = Schedule::new(2, vec![], word(&["01", "10"])).unwrap();
        let f = Flow::new(&phi, s("11"), &alt, &grid).unwrap();
        assert_eq!(f.orbit().into_iter().collect::<Vec<_>>(), vec![s("11")]);

        let f3 = toggle_second();
        for sched in [
            Schedule::new(2, vec![], word(&["11"])).unwrap(),
            Schedule::new(2, word(&["10", "10"]), word(&["01", "10"])).unwrap(),
        ] {
            let f = Flow::new(&f3, s("00"), &sched, &grid).unwrap();
            assert_eq!(f.orbit().into_iter().collect::<Vec<_>>(), vec![s("00"), s("01")]);
        }

        let corner_swap = TransitionFunction::new(2, vec![0b11, 0b00, 0b00, 0b00]).unwrap();
        let all = Schedule::new(2, vec![], word(&["11"])).unwrap();
        let f = Flow::new(&corner_swap, s("00"), &all, &grid).unwrap();
        assert_eq!(f.orbit().into_iter().collect::<Vec<_>>(), vec![s("00"), s("11")]);
    }

    #[test]
    fn canonical_rolls_prefix_into_period() {
        let s = Schedule::new(2, word(&["11"]), word(&["11", "11"])).unwrap();
        let c = s.canonical();
        assert!(c.prefix().is_empty());
        assert_eq!(c.period(), &word(&["11"])[..]);
        let s = Schedule::new(2, word(&["10", "01"]), word(&["10", "01"])).unwrap();
        assert!(s.canonical().prefix().is_empty());
        let s = Schedule::new(2, word(&["01"]), word(&["10", "01"])).unwrap();
        let c = s.canonical();
        assert!(c.prefix().is_empty());
        assert_eq!(c.period(), &word(&["01", "10"])[..]);
    }

    #[test]
    fn explicit_grid_intervals() {
        let g = TimeGrid::explicit(vec![-1.0, 0.25, 3.0]).unwrap();
        assert_eq!(g.interval_of(-2.0), None);
        assert_eq!(g.interval_of(-1.0), Some(0));
        assert_eq!(g.interval_of(0.3), Some(1));
        assert_eq!(g.interval_of(3.0), Some(2));
        assert_eq!(g.interval_of(4.5), Some(3));
        assert_eq!(g.time(4), 5.0);
        assert!(TimeGrid::explicit(vec![1.0, 1.0]).is_err());
        assert!(TimeGrid::explicit(vec![f64::NAN]).is_err());
        let c = TimeGrid::canonical();
        assert_eq!(c.interval_of(-0.1), None);
        assert_eq!(c.interval_of(2.999), Some(2));
    }

    fn arb_setup() -> impl Strategy<Value = (TransitionFunction, u32, Schedule)> {
        (1u8..=3).prop_flat_map(|n| {
            let top = 1u32 << n;
            (
                proptest::collection::vec(0..top, 1usize << n),
                0..top,
                proptest::collection::vec(0..top, 0..5),
                proptest::collection::vec(0..top, 1..5),
            )
                .prop_map(move |(t, mu, pre, mut per)| {
                    per.push((1 << n) - 1);
                    let phi = TransitionFunction::new(n, t).unwrap();
                    let fvs = |w: Vec<u32>| w.into_iter().map(|b| FireVector::new(n, b).unwrap()).collect();
                    (phi, mu, Schedule::new(n, fvs(pre), fvs(per)).unwrap())
                })
        })
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(1000))]

        #[test]
        fn orbit_matches_long_simulation((phi, mu, sched) in arb_setup()) {
            let mu = StateVector::new(phi.arity(), mu).unwrap();
            let run = Run::compute(&phi, mu, &sched);
            let horizon = run.loop_start() + run.cycle_len();
            let mut sim = BTreeSet::new();
            let mut x = mu;
            sim.insert(x);
            for k in 0..4 * horizon {
                x = phi.restrict(sched.step(k), x).unwrap();
                prop_assert_eq!(run.state_after(k + 1), x);
                sim.insert(x);
            }
            prop_assert_eq!(run.orbit(), sim);
        }

        #[test]
        fn flow_constant_on_intervals((phi, mu, sched) in arb_setup(), a in 0.0f64..1.0, b in 0.0f64..1.0, k in 0usize..20) {
            let mu = StateVector::new(phi.arity(), mu).unwrap();
            let grid = TimeGrid::canonical();
            let f = Flow::new(&phi, mu, &sched, &grid).unwrap();
            prop_assert_eq!(f.at(k as f64 + a * 0.999), f.at(k as f64 + b * 0.999));
            prop_assert_eq!(f.at(-1.0 - a), mu);
        }

        #[test]
        fn stuttering_is_invisible((phi, mu, sched) in arb_setup(), at in 0usize..6, len in 1usize..10) {
            let n = phi.arity();
            let mu = StateVector::new(n, mu).unwrap();
            let word: Vec<_> = (0..len).map(|k| sched.step(k)).collect();
            let mut stuttered = word.clone();
            stuttered.insert(at.min(word.len()), FireVector::zeros(n));
            prop_assert_eq!(phi.iterate_word(mu, &word).unwrap(), phi.iterate_word(mu, &stuttered).unwrap());
        }

        #[test]
        fn coverage_index_bound((_phi, _mu, sched) in arb_setup()) {
            let k = sched.coverage_index().unwrap();
            prop_assert!(k < sched.prefix().len() + sched.period().len());
            let union = (0..=k).fold(0, |acc, j| acc | sched.step(j).bits());
            prop_assert_eq!(union, full_mask(sched.arity()));
            if k > 0 {
                let before = (0..k).fold(0, |acc, j| acc | sched.step(j).bits());
                prop_assert!(before != full_mask(sched.arity()));
            }
        }

        #[test]
        fn canonical_preserves_word((_phi, _mu, sched) in arb_setup()) {
            let c = sched.canonical();
            prop_assert!(c.prefix().len() <= sched.prefix().len());
            for k in 0..64 {
                prop_assert_eq!(c.step(k), sched.step(k));
            }
        }
    }
}
