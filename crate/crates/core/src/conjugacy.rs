//! State bijections, the cover-preserving group `Ω_n`, and conjugacy between
//! systems: `H ∘ Φ^v = Υ^{H'(v)} ∘ H` for every fire vector `v`.

use alloc::vec;
use alloc::vec::Vec;

use crate::boolean::{check_arity, full_mask, FireVector, StateVector, TransitionFunction, MAX_ARITY};
use crate::error::{Error, Result};
use crate::schedule::Schedule;

/// Largest arity for the exhaustive subset check in [`omega_membership`].
pub const OMEGA_EXHAUSTIVE_MAX_ARITY: u8 = 4;
/// Largest arity accepted by [`search_conjugacy`] and [`omega_elements`].
pub const SEARCH_MAX_ARITY: u8 = 3;

/// A bijection of `B^n`; `inverse[forward[x]] == x` for every `x`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct StateBijection {
    arity: u8,
    forward: Vec<u32>,
    inverse: Vec<u32>,
}

impl StateBijection {
    pub fn new(arity: u8, forward: Vec<u32>) -> Result<Self> {
        check_arity(arity, MAX_ARITY)?;
        let size = 1usize << arity;
        if forward.len() != size {
            return Err(Error::TableLength { arity, found: forward.len() });
        }
        let mut inverse = vec![u32::MAX; size];
        for (x, &y) in forward.iter().enumerate() {
            if y > full_mask(arity) {
                return Err(Error::StrayBits { arity, bits: y });
            }
            if inverse[y as usize] != u32::MAX {
                return Err(Error::NotBijective);
            }
            inverse[y as usize] = x as u32;
        }
        Ok(Self { arity, forward, inverse })
    }

    pub fn identity(arity: u8) -> Self {
        let forward: Vec<u32> = (0..1u32 << arity).collect();
        Self { arity, inverse: forward.clone(), forward }
    }

    /// Sends coordinate `i` to coordinate `perm[i-1]` (both 1-indexed).
    pub fn coordinate_permutation(perm: &[u8]) -> Result<Self> {
        let arity = perm.len() as u8;
        check_arity(arity, MAX_ARITY)?;
        let mut seen = 0u32;
        for &p in perm {
            if p == 0 || p > arity || seen >> (p - 1) & 1 == 1 {
                return Err(Error::NotBijective);
            }
            seen |= 1 << (p - 1);
        }
        let forward = (0..1u32 << arity)
            .map(|x| perm.iter().enumerate().fold(0, |acc, (i, &p)| acc | ((x >> i) & 1) << (p - 1)))
            .collect();
        Self::new(arity, forward)
    }

    /// Complement of every coordinate.
    pub fn complement(arity: u8) -> Self {
        let m = full_mask(arity);
        let forward: Vec<u32> = (0..1u32 << arity).map(|x| x ^ m).collect();
        Self { arity, inverse: forward.clone(), forward }
    }

    pub fn arity(&self) -> u8 {
        self.arity
    }

    pub fn forward(&self) -> &[u32] {
        &self.forward
    }

    pub fn apply_bits(&self, x: u32) -> u32 {
        self.forward[x as usize]
    }

    pub fn apply(&self, mu: StateVector) -> StateVector {
        StateVector::from_raw(self.arity, self.forward[mu.bits() as usize])
    }

    pub fn apply_fire(&self, v: FireVector) -> FireVector {
        FireVector::from_raw(self.arity, self.forward[v.bits() as usize])
    }

    pub fn inverse(&self) -> Self {
        Self { arity: self.arity, forward: self.inverse.clone(), inverse: self.forward.clone() }
    }

    /// `self ∘ other`: apply `other` first.
    pub fn compose(&self, other: &Self) -> Result<Self> {
        if self.arity != other.arity {
            return Err(Error::ArityMismatch { expected: self.arity, found: other.arity });
        }
        let forward = other.forward.iter().map(|&x| self.forward[x as usize]).collect();
        Self::new(self.arity, forward)
    }

    /// Every bijection of `B^n` in lexicographic order of the forward table.
    pub fn all(arity: u8) -> Result<Vec<Self>> {
        if arity > SEARCH_MAX_ARITY {
            return Err(Error::Budget { attempted: arity as u64, limit: SEARCH_MAX_ARITY as u64 });
        }
        let mut out = Vec::new();
        let mut perm: Vec<u32> = (0..1u32 << arity).collect();
        loop {
            out.push(Self::new(arity, perm.clone())?);
            if !next_permutation(&mut perm) {
                return Ok(out);
            }
        }
    }
}

fn next_permutation(p: &mut [u32]) -> bool {
    let Some(i) = (1..p.len()).rev().find(|&i| p[i - 1] < p[i]) else {
        return false;
    };
    let j = (i..p.len()).rev().find(|&j| p[j] > p[i - 1]).unwrap();
    p.swap(i - 1, j);
    p[i..].reverse();
    true
}

/// Exhaustive check of the group conditions: both extreme states are fixed,
/// and for every subset `S` with `|S| ≥ 2`, `∪S` is full iff `∪H(S)` is.
///
/// Tuples reduce to subsets because unions ignore order and multiplicity.
pub fn omega_membership(h: &StateBijection) -> Result<bool> {
    let n = h.arity;
    if n > OMEGA_EXHAUSTIVE_MAX_ARITY {
        return Err(Error::Budget { attempted: n as u64, limit: OMEGA_EXHAUSTIVE_MAX_ARITY as u64 });
    }
    let full = full_mask(n);
    if h.apply_bits(0) != 0 || h.apply_bits(full) != full {
        return Ok(false);
    }
    let size = 1u32 << n;
    // unions of S and H(S), built up by lowest set bit
    let count = 1usize << size;
    let mut left = vec![0u32; count];
    let mut right = vec![0u32; count];
    for s in 1..count {
        let low = s.trailing_zeros();
        let rest = s & (s - 1);
        left[s] = left[rest] | low;
        right[s] = right[rest] | h.apply_bits(low);
        if rest != 0 && (left[s] == full) != (right[s] == full) {
            return Ok(false);
        }
    }
    Ok(true)
}

/// Whether `H` maps every half-space `{μ : μ_i = 0}` onto some half-space
/// `{μ : μ_j = 0}`. Agrees with [`omega_membership`] on every bijection with
/// `n ≤ 3`; used for arities beyond the exhaustive guard.
pub fn omega_membership_fast(h: &StateBijection) -> bool {
    let n = h.arity;
    let mut hit = 0u32;
    for i in 0..n {
        let image = (0..1u32 << n).filter(|x| x >> i & 1 == 0).fold(0u32, |acc, x| acc | h.apply_bits(x));
        // the image is a half-space {μ_j = 0} iff its union misses exactly one coordinate
        let missing = full_mask(n) & !image;
        if missing.count_ones() != 1 || hit & missing != 0 {
            return false;
        }
        let j = missing.trailing_zeros();
        if (0..1u32 << n).filter(|x| x >> i & 1 == 0).any(|x| h.apply_bits(x) >> j & 1 != 0) {
            return false;
        }
        hit |= missing;
    }
    true
}

/// A bijection certified to belong to `Ω_n`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct OmegaElement {
    bijection: StateBijection,
}

impl OmegaElement {
    pub fn new(h: StateBijection) -> Result<Self> {
        let member =
            if h.arity <= OMEGA_EXHAUSTIVE_MAX_ARITY { omega_membership(&h)? } else { omega_membership_fast(&h) };
        if member {
            Ok(Self { bijection: h })
        } else {
            Err(Error::NotInOmega)
        }
    }

    pub fn identity(arity: u8) -> Self {
        Self { bijection: StateBijection::identity(arity) }
    }

    pub fn bijection(&self) -> &StateBijection {
        &self.bijection
    }

    pub fn compose(&self, other: &Self) -> Result<Self> {
        Ok(Self { bijection: self.bijection.compose(&other.bijection)? })
    }

    pub fn inverse(&self) -> Self {
        Self { bijection: self.bijection.inverse() }
    }
}

/// Every element of `Ω_n`, in lexicographic order of the forward table.
pub fn omega_elements(arity: u8) -> Result<Vec<OmegaElement>> {
    let mut out = Vec::new();
    for h in StateBijection::all(arity)? {
        if omega_membership(&h)? {
            out.push(OmegaElement { bijection: h });
        }
    }
    Ok(out)
}

fn check_pair(phi: &TransitionFunction, ups: &TransitionFunction) -> Result<()> {
    if phi.arity() != ups.arity() {
        return Err(Error::ArityMismatch { expected: phi.arity(), found: ups.arity() });
    }
    Ok(())
}

/// Checks `H(Φ^v(μ)) = Υ^{H'(v)}(H(μ))` for all `4^n` pairs `(v, μ)`.
pub fn verify_conjugacy(
    phi: &TransitionFunction,
    ups: &TransitionFunction,
    h: &StateBijection,
    h_prime: &OmegaElement,
) -> Result<bool> {
    check_pair(phi, ups)?;
    let n = phi.arity();
    for b in [h.arity, h_prime.bijection.arity] {
        if b != n {
            return Err(Error::ArityMismatch { expected: n, found: b });
        }
    }
    let hp = &h_prime.bijection;
    Ok((0..=full_mask(n)).all(|v| {
        (0..=full_mask(n))
            .all(|mu| h.apply_bits(phi.step_bits(v, mu)) == ups.step_bits(hp.apply_bits(v), h.apply_bits(mu)))
    }))
}

/// Out-degree and in-degree multisets of the distinct-successor graph.
fn degree_profile(phi: &TransitionFunction) -> (Vec<u32>, Vec<u32>) {
    let n = phi.arity();
    let size = 1usize << n;
    let mut outs = Vec::with_capacity(size);
    let mut ins = vec![0u32; size];
    let mut seen = vec![u32::MAX; size];
    for mu in 0..size as u32 {
        let mut d = 0;
        for v in 0..=full_mask(n) {
            let y = phi.step_bits(v, mu) as usize;
            if seen[y] != mu {
                seen[y] = mu;
                d += 1;
                ins[y] += 1;
            }
        }
        outs.push(d);
    }
    outs.sort_unstable();
    ins.sort_unstable();
    (outs, ins)
}

/// Finds a conjugacy `(H, H')`, or `None`. The witness is the first pair in
/// the order (`H'` lexicographic, then `H` lexicographic).
///
/// Rejects early on fixed-point counts and degree multisets; for each `H'`,
/// a depth-first search assigns `H` at the smallest unassigned state and
/// propagates every value forced by the conjugacy equation.
pub fn search_conjugacy(
    phi: &TransitionFunction,
    ups: &TransitionFunction,
) -> Result<Option<(StateBijection, OmegaElement)>> {
    check_pair(phi, ups)?;
    let n = phi.arity();
    if n > SEARCH_MAX_ARITY {
        return Err(Error::Budget { attempted: n as u64, limit: SEARCH_MAX_ARITY as u64 });
    }
    if phi.fixed_point_count() != ups.fixed_point_count() || degree_profile(phi) != degree_profile(ups) {
        return Ok(None);
    }
    for hp in omega_elements(n)? {
        let mut assign = vec![u32::MAX; 1 << n];
        let mut used = vec![false; 1 << n];
        if extend(phi, ups, hp.bijection(), &mut assign, &mut used) {
            let h = StateBijection::new(n, assign)?;
            debug_assert!(verify_conjugacy(phi, ups, &h, &hp)?);
            return Ok(Some((h, hp)));
        }
    }
    Ok(None)
}

/// Assigns `H(x) = y` and everything it forces; returns the trail of
/// assigned states, or `None` on conflict (with the trail undone).
fn propagate(
    phi: &TransitionFunction,
    ups: &TransitionFunction,
    hp: &StateBijection,
    assign: &mut [u32],
    used: &mut [bool],
    x: u32,
    y: u32,
) -> Option<Vec<u32>> {
    let n = phi.arity();
    let mut trail = Vec::new();
    let mut queue = vec![(x, y)];
    let mut ok = true;
    while let Some((x, y)) = queue.pop() {
        let cur = assign[x as usize];
        if cur == y {
            continue;
        }
        if cur != u32::MAX || used[y as usize] {
            ok = false;
            break;
        }
        assign[x as usize] = y;
        used[y as usize] = true;
        trail.push(x);
        for v in 0..=full_mask(n) {
            queue.push((phi.step_bits(v, x), ups.step_bits(hp.apply_bits(v), y)));
        }
    }
    if ok {
        Some(trail)
    } else {
        undo(assign, used, &trail);
        None
    }
}

fn undo(assign: &mut [u32], used: &mut [bool], trail: &[u32]) {
    for &x in trail {
        used[assign[x as usize] as usize] = false;
        assign[x as usize] = u32::MAX;
    }
}

fn extend(
    phi: &TransitionFunction,
    ups: &TransitionFunction,
    hp: &StateBijection,
    assign: &mut [u32],
    used: &mut [bool],
) -> bool {
    let Some(x) = assign.iter().position(|&a| a == u32::MAX) else {
        return true;
    };
    for y in 0..assign.len() as u32 {
        if used[y as usize] {
            continue;
        }
        if let Some(trail) = propagate(phi, ups, hp, assign, used, x as u32, y) {
            if extend(phi, ups, hp, assign, used) {
                return true;
            }
            undo(assign, used, &trail);
        }
    }
    false
}

/// The system `Υ = H ∘ Φ ∘ H^{-1}` forced by `v = (1,…,1)`; it is a
/// conjugate of `Φ` under `(H, H')` iff [`verify_conjugacy`] accepts it.
pub fn forced_conjugate(phi: &TransitionFunction, h: &StateBijection) -> Result<TransitionFunction> {
    if h.arity != phi.arity() {
        return Err(Error::ArityMismatch { expected: phi.arity(), found: h.arity });
    }
    let inv = h.inverse();
    let table = (0..1u32 << phi.arity()).map(|y| h.apply_bits(phi.table()[inv.apply_bits(y) as usize])).collect();
    TransitionFunction::new(phi.arity(), table)
}

/// Applies `H'` to every letter; progressiveness is preserved.
pub fn transport_schedule(h_prime: &OmegaElement, s: &Schedule) -> Result<Schedule> {
    if h_prime.bijection.arity != s.arity() {
        return Err(Error::ArityMismatch { expected: s.arity(), found: h_prime.bijection.arity });
    }
    s.map_letters(|v| h_prime.bijection.apply_fire(v))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::schedule::{Run, TimeGrid};
    use proptest::prelude::*;

    fn s(t: &str) -> StateVector {
        t.parse().unwrap()
    }
    fn origin_jump() -> TransitionFunction {
        TransitionFunction::new(2, vec![0b11, 0b01, 0b10, 0b11]).unwrap()
    }
    fn toggle_second() -> TransitionFunction {
        TransitionFunction::from_fn(2, |mu| mu.with(2, !mu.get(2))).unwrap()
    }
    fn swap() -> StateBijection {
        StateBijection::coordinate_permutation(&[2, 1]).unwrap()
    }

    #[test]
    fn membership_examples() {
        assert!(omega_membership(&StateBijection::identity(2)).unwrap());
        assert!(omega_membership(&swap()).unwrap());
        assert!(!omega_membership(&StateBijection::complement(2)).unwrap());
        assert_eq!(omega_elements(2).unwrap().len(), 2);
        assert!(omega_membership(&StateBijection::identity(5)).is_err());
    }

    #[test]
    fn fast_path_agrees_with_exhaustive_check() {
        for n in 1..=3 {
            let mut members = 0;
            for h in StateBijection::all(n).unwrap() {
                let slow = omega_membership(&h).unwrap();
                assert_eq!(slow, omega_membership_fast(&h), "{h:?}");
                members += slow as usize;
            }
            // exactly the coordinate permutations
            assert_eq!(members, [1, 2, 6][n as usize - 1]);
        }
    }

    #[test]
    fn omega_two_is_a_group() {
        let all = omega_elements(2).unwrap();
        for a in &all {
            assert!(all.contains(&a.inverse()));
            for b in &all {
                assert!(all.contains(&a.compose(b).unwrap()));
            }
        }
    }

    #[test]
    fn verify_examples() {
        let id = StateBijection::identity(2);
        let idp = OmegaElement::identity(2);
        assert!(verify_conjugacy(&toggle_second(), &toggle_second(), &id, &idp).unwrap());
        let ups = TransitionFunction::from_fn(2, |mu| mu.with(1, !mu.get(1))).unwrap();
        let sw = OmegaElement::new(swap()).unwrap();
        assert!(verify_conjugacy(&toggle_second(), &ups, &swap(), &sw).unwrap());
        assert_eq!(forced_conjugate(&toggle_second(), &swap()).unwrap(), ups);
        let c = TransitionFunction::constant(s("11"));
        for h in StateBijection::all(2).unwrap() {
            for hp in omega_elements(2).unwrap() {
                assert!(!verify_conjugacy(&origin_jump(), &c, &h, &hp).unwrap());
            }
        }
    }

    fn brute_force(phi: &TransitionFunction, ups: &TransitionFunction) -> Option<(StateBijection, OmegaElement)> {
        let n = phi.arity();
        for hp in omega_elements(n).unwrap() {
            for h in StateBijection::all(n).unwrap() {
                if verify_conjugacy(phi, ups, &h, &hp).unwrap() {
                    return Some((h, hp));
                }
            }
        }
        None
    }

    #[test]
    fn search_matches_brute_force_at_n2() {
        let c11 = TransitionFunction::constant(s("11"));
        let c00 = TransitionFunction::constant(s("00"));
        assert_eq!(search_conjugacy(&c11, &c00).unwrap(), brute_force(&c11, &c00));
        assert_eq!(search_conjugacy(&origin_jump(), &toggle_second()).unwrap(), None);
        let (h, hp) = search_conjugacy(&toggle_second(), &toggle_second()).unwrap().unwrap();
        assert_eq!(h, StateBijection::identity(2));
        assert_eq!(hp, OmegaElement::identity(2));
        for a in (0..256).step_by(7) {
            let phi = TransitionFunction::from_index(2, a).unwrap();
            for b in 0..256 {
                let ups = TransitionFunction::from_index(2, b).unwrap();
                assert_eq!(search_conjugacy(&phi, &ups).unwrap(), brute_force(&phi, &ups), "{a} {b}");
            }
        }
    }

    #[test]
    fn transport_examples() {
        let sw = OmegaElement::new(swap()).unwrap();
        let word = |ts: &[&str]| ts.iter().map(|t| t.parse().unwrap()).collect::<Vec<FireVector>>();
        let sch = Schedule::new(2, vec![], word(&["01", "10"])).unwrap();
        assert_eq!(transport_schedule(&OmegaElement::identity(2), &sch).unwrap(), sch);
        let moved = transport_schedule(&sw, &sch).unwrap();
        assert_eq!(moved.period(), &word(&["10", "01"])[..]);
        assert!(moved.validate_progressive());
    }

    fn arb_perm(n: usize) -> impl Strategy<Value = Vec<u8>> {
        Just((1..=n as u8).collect::<Vec<u8>>()).prop_shuffle()
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(1000))]

        #[test]
        fn omega_three_closed_under_composition(p in arb_perm(3), q in arb_perm(3)) {
            let a = OmegaElement::new(StateBijection::coordinate_permutation(&p).unwrap()).unwrap();
            let b = OmegaElement::new(StateBijection::coordinate_permutation(&q).unwrap()).unwrap();
            prop_assert!(OmegaElement::new(a.compose(&b).unwrap().bijection().clone()).is_ok());
            prop_assert!(OmegaElement::new(a.inverse().bijection().clone()).is_ok());
        }

        #[test]
        fn tuples_reduce_to_subsets(
            forward in Just((0u32..8).collect::<Vec<u32>>()).prop_shuffle(),
            tuple in proptest::collection::vec(0u32..8, 2..10),
        ) {
            let h = StateBijection::new(3, forward).unwrap();
            if omega_membership(&h).unwrap() {
                let l = tuple.iter().fold(0, |a, &x| a | x);
                let r = tuple.iter().fold(0, |a, &x| a | h.apply_bits(x));
                prop_assert_eq!(l == 7, r == 7);
            }
        }

        #[test]
        fn conjugacy_transports_flows(
            table in proptest::collection::vec(0u32..8, 8),
            p in arb_perm(3),
            mu in 0u32..8,
            prefix in proptest::collection::vec(0u32..8, 0..5),
            period in proptest::collection::vec(1u32..8, 1..4),
        ) {
            let phi = TransitionFunction::new(3, table).unwrap();
            let h = StateBijection::coordinate_permutation(&p).unwrap();
            let hp = OmegaElement::new(h.clone()).unwrap();
            let ups = forced_conjugate(&phi, &h).unwrap();
            prop_assert!(verify_conjugacy(&phi, &ups, &h, &hp).unwrap());
            let word = |w: &[u32]| w.iter().map(|&v| FireVector::new(3, v).unwrap()).collect::<Vec<_>>();
            let mut period = word(&period);
            period.push(FireVector::ones(3));
            let sch = Schedule::new(3, word(&prefix), period).unwrap();
            let moved = transport_schedule(&hp, &sch).unwrap();
            let mu = StateVector::new(3, mu).unwrap();
            let a = Run::compute(&phi, mu, &sch);
            let b = Run::compute(&ups, h.apply(mu), &moved);
            for m in 0..20 {
                prop_assert_eq!(h.apply(a.state_after(m)), b.state_after(m));
            }
            let grid = TimeGrid::canonical();
            let f = crate::schedule::Flow::new(&phi, mu, &sch, &grid).unwrap();
            let g = crate::schedule::Flow::new(&ups, h.apply(mu), &moved, &grid).unwrap();
            prop_assert_eq!(h.apply(f.at(2.5)), g.at(2.5));
        }
    }
}
