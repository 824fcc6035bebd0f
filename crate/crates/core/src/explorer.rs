//! Function-space sweeps: census rows and summaries, witness mining and the
//! fixed-point survey.
//!
//! Functions are numbered by [`TransitionFunction::index`]; every sweep runs
//! in increasing index order, so outputs are reproducible.

use alloc::vec;
use alloc::vec::Vec;
use core::ops::Range;

use crate::boolean::{full_mask, FireVector, StateVector, TransitionFunction};
use crate::conjugacy::StateBijection;
use crate::deciders::{
    n_independent_direct, p_independent, pairwise_mergeable_all, point_transitive, separated, set_transitive,
    system_transitive, Limits,
};
use crate::error::{Error, Result};
use crate::property::{Property, Quantifier, SeparationMode, TransitivityMode};
use crate::schedule::{Run, Schedule};
use crate::verdict::{Truth, Verdict, Witness};

/// Largest arity handled by [`SystemPortrait`].
pub const FAST_PATH_MAX_ARITY: u8 = 5;
/// Largest arity for which every function has an index.
pub const CENSUS_MAX_ARITY: u8 = 3;

/// Whole-system transitivity computed on bit-packed state sets.
///
/// - weak-p and strong-p both reduce to strong connectivity: for `A = B^n`
///   there is no way to leave `A`, every state reaching every state makes
///   the graph one SCC, and that SCC is fair because every `(1,…,1)` edge is
///   internal.
/// - n fails iff some state `a` can be avoided forever, i.e. the graph
///   without `a` still contains a fair SCC (each of its members is a start).
#[derive(Default)]
pub struct SystemPortrait {
    n: u8,
    size: usize,
    succ: [u32; 32],
    labels: [[u32; 32]; 32],
}

impl SystemPortrait {
    pub fn load(&mut self, phi: &TransitionFunction) -> Result<()> {
        let n = phi.arity();
        if n > FAST_PATH_MAX_ARITY {
            return Err(Error::Budget { attempted: n as u64, limit: FAST_PATH_MAX_ARITY as u64 });
        }
        self.load_table(n, phi.table());
        Ok(())
    }

    fn load_table(&mut self, n: u8, table: &[u32]) {
        self.n = n;
        self.size = 1 << n;
        for x in 0..self.size {
            self.succ[x] = 0;
            self.labels[x][..self.size].fill(0);
            let phi_x = table[x];
            for v in 0..=full_mask(n) {
                let y = ((x as u32 & !v) | (phi_x & v)) as usize;
                self.succ[x] |= 1 << y;
                self.labels[x][y] |= v;
            }
        }
    }

    fn all(&self) -> u32 {
        if self.size == 32 {
            u32::MAX
        } else {
            (1u32 << self.size) - 1
        }
    }

    /// Reflexive-transitive closure inside `allowed`.
    fn closure(&self, allowed: u32, reach: &mut [u32; 32]) {
        for x in 0..self.size {
            reach[x] = if allowed >> x & 1 == 1 { (self.succ[x] & allowed) | 1 << x } else { 0 };
        }
        for k in 0..self.size {
            if allowed >> k & 1 == 0 {
                continue;
            }
            for i in 0..self.size {
                if reach[i] >> k & 1 == 1 {
                    reach[i] |= reach[k];
                }
            }
        }
    }

    fn has_fair_scc(&self, allowed: u32) -> bool {
        let mut reach = [0u32; 32];
        self.closure(allowed, &mut reach);
        let full = full_mask(self.n);
        let mut done = !allowed & self.all();
        for x in 0..self.size {
            if done >> x & 1 == 1 {
                continue;
            }
            let mut scc = 0u32;
            for y in 0..self.size {
                if reach[x] >> y & 1 == 1 && reach[y] >> x & 1 == 1 {
                    scc |= 1 << y;
                }
            }
            done |= scc;
            let mut internal = 0;
            for a in 0..self.size {
                if scc >> a & 1 == 1 {
                    for b in 0..self.size {
                        if scc >> b & 1 == 1 {
                            internal |= self.labels[a][b];
                        }
                    }
                }
            }
            if internal == full {
                return true;
            }
        }
        false
    }

    pub fn strongly_connected(&self) -> bool {
        let mut reach = [0u32; 32];
        self.closure(self.all(), &mut reach);
        reach[..self.size].iter().all(|&r| r == self.all())
    }

    pub fn n_transitive(&self) -> bool {
        (0..self.size).all(|a| !self.has_fair_scc(self.all() & !(1 << a)))
    }
}

/// The properties computed for every function of a census.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct CheapFlags {
    pub constant: bool,
    pub fixed_points: u32,
    pub weak_p: bool,
    pub strong_p: bool,
    pub n_transitive: bool,
}

fn cheap_from_table(portrait: &mut SystemPortrait, n: u8, table: &[u32]) -> CheapFlags {
    portrait.load_table(n, table);
    let connected = portrait.strongly_connected();
    CheapFlags {
        constant: table.iter().all(|&y| y == table[0]),
        fixed_points: table.iter().enumerate().filter(|&(x, &y)| x as u32 == y).count() as u32,
        weak_p: connected,
        strong_p: connected,
        n_transitive: portrait.n_transitive(),
    }
}

/// [`CheapFlags`] through the bit-packed fast path.
pub fn cheap_flags(phi: &TransitionFunction) -> Result<CheapFlags> {
    let mut p = SystemPortrait::default();
    p.load(phi)?;
    Ok(cheap_from_table(&mut p, phi.arity(), phi.table()))
}

/// [`CheapFlags`] through the general deciders; the reference for the fast path.
pub fn cheap_flags_via_deciders(phi: &TransitionFunction, limits: &Limits) -> Result<CheapFlags> {
    let known = |v: Verdict| v.value.known().ok_or(Error::Budget { attempted: 0, limit: 0 });
    Ok(CheapFlags {
        constant: phi.is_constant().is_some(),
        fixed_points: phi.fixed_point_count() as u32,
        weak_p: known(system_transitive(phi, TransitivityMode::WeakP, limits)?)?,
        strong_p: known(system_transitive(phi, TransitivityMode::StrongP, limits)?)?,
        n_transitive: known(system_transitive(phi, TransitivityMode::N, limits)?)?,
    })
}

/// Quadratic-pair properties, computed on all functions at `n ≤ 2` and on a
/// sample at `n = 3`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct PairFlags {
    pub p_independent: Truth,
    /// From the definition, not from constancy.
    pub n_independent_direct: Truth,
    pub pairwise_mergeable_all: Truth,
}

pub fn pair_flags(phi: &TransitionFunction) -> Result<PairFlags> {
    Ok(PairFlags {
        p_independent: p_independent(phi)?.value,
        n_independent_direct: n_independent_direct(phi)?.value,
        pairwise_mergeable_all: pairwise_mergeable_all(phi)?.value,
    })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct CensusRow {
    pub index: u64,
    pub cheap: CheapFlags,
    pub pairs: Option<PairFlags>,
}

/// Deterministic counts over a set of census rows.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct CensusSummary {
    pub arity: u8,
    pub functions: u64,
    pub constant: u64,
    pub with_fixed_point: u64,
    /// `fixed_point_histogram[k]`: functions with exactly `k` fixed points.
    pub fixed_point_histogram: Vec<u64>,
    pub weak_p_transitive: u64,
    pub strong_p_transitive: u64,
    pub n_transitive: u64,
    /// Weakly p-transitive yet n-independent (constant): must stay 0.
    pub weak_p_transitive_not_p_dependent: u64,
    /// Rows carrying [`PairFlags`].
    pub pair_rows: u64,
    pub p_independent: u64,
    pub n_independent_direct: u64,
    pub pairwise_mergeable_all: u64,
    /// Direct n-independence disagreeing with constancy.
    pub n_independent_not_constant: u64,
    /// n-transitive yet p-independent (so not n-dependent); reported as found.
    pub n_transitive_not_n_dependent: u64,
    /// Pair rows with an `Unknown` flag.
    pub pair_unknown: u64,
    /// `[p-independent][has fixed point]` over pair rows, `false` first.
    pub survey: [[u64; 2]; 2],
}

impl CensusSummary {
    pub fn new(arity: u8) -> Self {
        Self { arity, fixed_point_histogram: vec![0; (1 << arity) + 1], ..Self::default() }
    }

    pub fn add(&mut self, row: &CensusRow) {
        let c = &row.cheap;
        self.functions += 1;
        self.constant += c.constant as u64;
        self.with_fixed_point += (c.fixed_points > 0) as u64;
        self.fixed_point_histogram[c.fixed_points as usize] += 1;
        self.weak_p_transitive += c.weak_p as u64;
        self.strong_p_transitive += c.strong_p as u64;
        self.n_transitive += c.n_transitive as u64;
        self.weak_p_transitive_not_p_dependent += (c.weak_p && c.constant) as u64;
        if let Some(p) = row.pairs {
            self.pair_rows += 1;
            let (Some(pi), Some(ni), Some(pm)) =
                (p.p_independent.known(), p.n_independent_direct.known(), p.pairwise_mergeable_all.known())
            else {
                self.pair_unknown += 1;
                return;
            };
            self.p_independent += pi as u64;
            self.n_independent_direct += ni as u64;
            self.pairwise_mergeable_all += pm as u64;
            self.n_independent_not_constant += (ni != c.constant) as u64;
            self.n_transitive_not_n_dependent += (c.n_transitive && pi) as u64;
            self.survey[pi as usize][(c.fixed_points > 0) as usize] += 1;
        }
    }

    /// Adds the counts of a summary over a disjoint range.
    pub fn merge(&mut self, other: &Self) {
        self.functions += other.functions;
        self.constant += other.constant;
        self.with_fixed_point += other.with_fixed_point;
        for (a, b) in self.fixed_point_histogram.iter_mut().zip(&other.fixed_point_histogram) {
            *a += b;
        }
        self.weak_p_transitive += other.weak_p_transitive;
        self.strong_p_transitive += other.strong_p_transitive;
        self.n_transitive += other.n_transitive;
        self.weak_p_transitive_not_p_dependent += other.weak_p_transitive_not_p_dependent;
        self.pair_rows += other.pair_rows;
        self.p_independent += other.p_independent;
        self.n_independent_direct += other.n_independent_direct;
        self.pairwise_mergeable_all += other.pairwise_mergeable_all;
        self.n_independent_not_constant += other.n_independent_not_constant;
        self.n_transitive_not_n_dependent += other.n_transitive_not_n_dependent;
        self.pair_unknown += other.pair_unknown;
        for i in 0..2 {
            for j in 0..2 {
                self.survey[i][j] += other.survey[i][j];
            }
        }
    }
}

/// Number of functions `B^n → B^n`.
pub fn function_count(n: u8) -> Result<u64> {
    if n == 0 || n > CENSUS_MAX_ARITY {
        return Err(Error::ArityOutOfRange { arity: n, max: CENSUS_MAX_ARITY });
    }
    Ok(1u64 << (n as u32 * (1 << n)))
}

/// Evaluates every index in `range` in increasing order, handing each row to
/// `sink`. Pair flags are computed where `with_pairs(index)` holds.
pub fn census_range(
    n: u8,
    range: Range<u64>,
    mut with_pairs: impl FnMut(u64) -> bool,
    mut sink: impl FnMut(&CensusRow),
) -> Result<CensusSummary> {
    let total = function_count(n)?;
    if range.end > total {
        return Err(Error::Budget { attempted: range.end, limit: total });
    }
    let mut summary = CensusSummary::new(n);
    let mut portrait = SystemPortrait::default();
    let size = 1usize << n;
    let mask = full_mask(n) as u64;
    let mut table = vec![0u32; size];
    for index in range {
        for (x, slot) in table.iter_mut().enumerate() {
            *slot = ((index >> (n as usize * x)) & mask) as u32;
        }
        let cheap = cheap_from_table(&mut portrait, n, &table);
        let pairs = if with_pairs(index) {
            let phi = TransitionFunction::new(n, table.clone())?;
            Some(pair_flags(&phi)?)
        } else {
            None
        };
        let row = CensusRow { index, cheap, pairs };
        summary.add(&row);
        sink(&row);
    }
    Ok(summary)
}

/// What a mined function must exhibit.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum MineTarget {
    System(TransitivityMode),
    /// Some state is transitive in this mode.
    Point(TransitivityMode),
    /// Some subset with at least two states, other than `B^n`.
    Set(TransitivityMode),
    /// Some pair of distinct states.
    Separation(SeparationMode, Quantifier),
    /// Some state weakly but not strongly p-transitive.
    PointWeakNotStrong,
}

/// A mined function together with the subject and the evidence.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Mined {
    pub index: u64,
    pub function: TransitionFunction,
    pub property: Property,
    pub verdict: Verdict,
}

/// Whether the single schedule `s` gives orbit `A` from every member of `A`.
pub fn schedule_realises(phi: &TransitionFunction, set: &[StateVector], s: &Schedule) -> bool {
    let mask = |it: &mut dyn Iterator<Item = StateVector>| it.fold(0u64, |a, x| a | 1 << x.bits());
    let want = mask(&mut set.iter().copied());
    set.iter().all(|&mu| mask(&mut Run::compute(phi, mu, s).orbit().into_iter()) == want)
}

fn subsets(n: u8, min: usize, proper: bool) -> Vec<Vec<StateVector>> {
    let size = 1u64 << n;
    let states: Vec<StateVector> = StateVector::all(n).collect();
    (1u64..1 << size)
        .filter(|b| b.count_ones() as usize >= min && !(proper && *b == (1 << size) - 1))
        .map(|b| states.iter().copied().filter(|s| b >> s.bits() & 1 == 1).collect())
        .collect()
}

/// Subjects and their verdicts for one function, in a fixed order; the first
/// `True` wins.
fn first_hit(
    phi: &TransitionFunction,
    target: &MineTarget,
    shape: Option<&Schedule>,
    limits: &Limits,
) -> Result<Option<(Property, Verdict)>> {
    let n = phi.arity();
    let shaped = |set: &[StateVector], v: Verdict| -> Option<Verdict> {
        match shape {
            None => Some(v),
            Some(s) if schedule_realises(phi, set, s) => {
                Some(v.with_witness(Witness::replayed(phi, s.clone(), set.to_vec(), &[])))
            }
            Some(_) => None,
        }
    };
    let all: Vec<StateVector> = phi.states().collect();
    match target {
        MineTarget::System(mode) => {
            let v = system_transitive(phi, *mode, limits)?;
            if v.is_true() {
                if let Some(v) = shaped(&all, v) {
                    return Ok(Some((Property::SystemTransitive { mode: *mode }, v)));
                }
            }
        }
        MineTarget::Point(mode) => {
            for &mu in &all {
                let v = point_transitive(phi, mu, *mode)?;
                if v.is_true() {
                    let v = match shape {
                        None => Some(v),
                        Some(s) if Run::compute(phi, mu, s).orbit().len() == all.len() => {
                            Some(v.with_witness(Witness::replayed(phi, s.clone(), vec![mu], &[])))
                        }
                        Some(_) => None,
                    };
                    if let Some(v) = v {
                        return Ok(Some((Property::PointTransitive { mu, mode: *mode }, v)));
                    }
                }
            }
        }
        MineTarget::Set(mode) => {
            for set in subsets(n, 2, true) {
                let v = set_transitive(phi, &set, *mode, limits)?;
                if v.is_true() {
                    if let Some(v) = shaped(&set, v) {
                        return Ok(Some((Property::SetTransitive { set, mode: *mode }, v)));
                    }
                }
            }
        }
        MineTarget::Separation(mode, quantifier) => {
            for &mu in &all {
                for &other in all.iter().filter(|&&o| o > mu) {
                    let v = separated(phi, mu, other, *mode, *quantifier, limits)?;
                    if v.is_true() {
                        let p = Property::Separated { mu, other, mode: *mode, quantifier: *quantifier };
                        return Ok(Some((p, v)));
                    }
                }
            }
        }
        MineTarget::PointWeakNotStrong => {
            for &mu in &all {
                let weak = point_transitive(phi, mu, TransitivityMode::WeakP)?;
                if weak.is_true() && point_transitive(phi, mu, TransitivityMode::StrongP)?.is_false() {
                    return Ok(Some((Property::PointTransitive { mu, mode: TransitivityMode::WeakP }, weak)));
                }
            }
        }
    }
    Ok(None)
}

/// The first `limit` functions (by index) exhibiting `target`. When `shape`
/// is given, transitivity targets also require that exact schedule to be a
/// witness, and it replaces the decider's witness. An empty result is a
/// finding, not an error.
pub fn mine_witnesses(
    n: u8,
    target: &MineTarget,
    shape: Option<&Schedule>,
    mut filter: impl FnMut(&TransitionFunction) -> bool,
    limit: usize,
    limits: &Limits,
) -> Result<Vec<Mined>> {
    let total = function_count(n)?;
    if let Some(s) = shape {
        if s.arity() != n {
            return Err(Error::ArityMismatch { expected: n, found: s.arity() });
        }
    }
    let mut out = Vec::new();
    for index in 0..total {
        if out.len() >= limit {
            break;
        }
        let phi = TransitionFunction::from_index(n, index)?;
        if !filter(&phi) {
            continue;
        }
        if let Some((property, verdict)) = first_hit(&phi, target, shape, limits)? {
            out.push(Mined { index, function: phi, property, verdict });
        }
    }
    Ok(out)
}

/// Cross-tabulation of p-independence against having a fixed point.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Survey {
    /// `cells[p-independent][has fixed point]`.
    pub cells: [[u64; 2]; 2],
    /// Smallest and largest index seen in each cell.
    pub extremes: [[Option<(u64, u64)>; 2]; 2],
    pub unknown: u64,
}

/// Surveys the given function indices (all of them at `n = 2`, a sample at `n = 3`).
pub fn open_problem_survey(n: u8, indices: impl IntoIterator<Item = u64>) -> Result<Survey> {
    let mut survey = Survey::default();
    for index in indices {
        let phi = TransitionFunction::from_index(n, index)?;
        let Some(pi) = p_independent(&phi)?.value.known() else {
            survey.unknown += 1;
            continue;
        };
        let fp = phi.fixed_point_count() > 0;
        survey.cells[pi as usize][fp as usize] += 1;
        let e = &mut survey.extremes[pi as usize][fp as usize];
        *e = Some(match *e {
            None => (index, index),
            Some((lo, hi)) => (lo.min(index), hi.max(index)),
        });
    }
    Ok(survey)
}

/// A property and its image under a state bijection `H`.
fn transported(p: &Property, h: &StateBijection) -> Property {
    match p {
        Property::AgreeExists { mu, other } => Property::AgreeExists { mu: h.apply(*mu), other: h.apply(*other) },
        Property::Separated { mu, other, mode, quantifier } => {
            Property::Separated { mu: h.apply(*mu), other: h.apply(*other), mode: *mode, quantifier: *quantifier }
        }
        Property::PointTransitive { mu, mode } => Property::PointTransitive { mu: h.apply(*mu), mode: *mode },
        Property::SetTransitive { set, mode } => {
            let mut set: Vec<StateVector> = set.iter().map(|&s| h.apply(s)).collect();
            set.sort_unstable();
            Property::SetTransitive { set, mode: *mode }
        }
        other => other.clone(),
    }
}

/// One property whose value differs between `Φ` and its conjugate.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct InvarianceMismatch {
    pub property: Property,
    pub left: Truth,
    pub right: Truth,
}

/// Decides every property of `catalogue` on `Φ` and its transported version
/// on `Υ`, returning the mismatches. `(H, H')` is expected to be a verified
/// conjugacy.
pub fn conjugacy_invariance(
    phi: &TransitionFunction,
    ups: &TransitionFunction,
    h: &StateBijection,
    catalogue: &[Property],
    limits: &Limits,
) -> Result<Vec<InvarianceMismatch>> {
    let mut out = Vec::new();
    for p in catalogue {
        let left = crate::deciders::decide(phi, p, limits)?.value;
        let right = crate::deciders::decide(ups, &transported(p, h), limits)?.value;
        if left != right {
            out.push(InvarianceMismatch { property: p.clone(), left, right });
        }
    }
    Ok(out)
}

/// One single-coordinate letter per coordinate, from coordinate `n` down to
/// coordinate 1; at `n = 2` this is `[01, 10]`.
pub fn alternating_period(n: u8) -> Vec<FireVector> {
    (1..=n).rev().map(|i| FireVector::single(n, i)).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::conjugacy::{forced_conjugate, verify_conjugacy, OmegaElement};

    fn s(t: &str) -> StateVector {
        t.parse().unwrap()
    }

    #[test]
    fn fast_path_matches_deciders_at_n1_n2() {
        let lim = Limits::default();
        for n in 1..=2 {
            for idx in 0..function_count(n).unwrap() {
                let phi = TransitionFunction::from_index(n, idx).unwrap();
                assert_eq!(cheap_flags(&phi).unwrap(), cheap_flags_via_deciders(&phi, &lim).unwrap(), "{phi:?}");
            }
        }
    }

    #[test]
    fn fast_path_matches_deciders_on_n3_sample() {
        let lim = Limits::default();
        // a fixed stride through the index space plus the extremes
        let mut idx = 0u64;
        while idx < function_count(3).unwrap() {
            let phi = TransitionFunction::from_index(3, idx).unwrap();
            assert_eq!(cheap_flags(&phi).unwrap(), cheap_flags_via_deciders(&phi, &lim).unwrap(), "{idx}");
            idx += 40_009;
        }
    }

    #[test]
    fn census_n2_counts() {
        let mut rows = 0;
        let sum = census_range(2, 0..256, |_| true, |_| rows += 1).unwrap();
        assert_eq!(rows, 256);
        assert_eq!(sum.functions, 256);
        assert_eq!(sum.constant, 4);
        assert_eq!(sum.n_independent_direct, 4);
        assert_eq!(sum.n_independent_not_constant, 0);
        assert_eq!(sum.weak_p_transitive_not_p_dependent, 0);
        assert_eq!(sum.survey.iter().flatten().sum::<u64>(), 256);
        let mut split = census_range(2, 0..100, |_| true, |_| ()).unwrap();
        split.merge(&census_range(2, 100..256, |_| true, |_| ()).unwrap());
        assert_eq!(split, sum);
    }

    #[test]
    fn mining_examples() {
        let lim = Limits::default();
        let m = mine_witnesses(1, &MineTarget::System(TransitivityMode::N), None, |_| true, 10, &lim).unwrap();
        assert_eq!(m.len(), 1);
        assert_eq!(m[0].function.table(), &[1, 0]);

        let alt = Schedule::new(2, vec![], alternating_period(2)).unwrap();
        assert_eq!(alt.period(), &["01".parse().unwrap(), "10".parse().unwrap()][..]);
        let m =
            mine_witnesses(2, &MineTarget::System(TransitivityMode::StrongP), Some(&alt), |_| true, 1, &lim).unwrap();
        assert_eq!(m.len(), 1);
        assert!(m[0].verdict.witness.as_ref().unwrap().replays(&m[0].function));
    }

    #[test]
    fn survey_examples() {
        let sv = open_problem_survey(2, 0..256).unwrap();
        assert_eq!(sv.cells.iter().flatten().sum::<u64>(), 256);
        let c = TransitionFunction::constant(s("11"));
        let one = open_problem_survey(2, [c.index().unwrap()]).unwrap();
        assert_eq!(one.cells[1][1], 1);
    }

    #[test]
    fn conjugates_share_flags() {
        let lim = Limits::default();
        let swap = StateBijection::coordinate_permutation(&[2, 1]).unwrap();
        let hp = OmegaElement::new(swap.clone()).unwrap();
        let catalogue = crate::oracle::property_catalogue(2);
        for idx in (0..256).step_by(17) {
            let phi = TransitionFunction::from_index(2, idx).unwrap();
            let ups = forced_conjugate(&phi, &swap).unwrap();
            assert!(verify_conjugacy(&phi, &ups, &swap, &hp).unwrap());
            assert!(conjugacy_invariance(&phi, &ups, &swap, &catalogue, &lim).unwrap().is_empty());
        }
    }
}
