//! Points of `B^n`, fire vectors, coordinate sets and transition tables.
//!
//! Coordinates are numbered `1..=n` in every user-facing surface. Internally
//! coordinate `i` lives at bit `i - 1`, so the packed value of a state is its
//! table index with coordinate 1 as the least significant bit. Text renders
//! coordinate 1 as the leftmost character, matching tuple notation `(μ1, μ2)`.

use alloc::vec::Vec;
use core::fmt;
use core::str::FromStr;

use crate::error::{Error, Result};

/// Default upper bound on the arity accepted by the constructors.
pub const MAX_ARITY: u8 = 12;

#[inline]
pub(crate) const fn full_mask(arity: u8) -> u32 {
    if arity >= 32 {
        u32::MAX
    } else {
        (1u32 << arity) - 1
    }
}

pub(crate) fn check_arity(arity: u8, max: u8) -> Result<()> {
    if arity == 0 || arity > max {
        Err(Error::ArityOutOfRange { arity, max })
    } else {
        Ok(())
    }
}

macro_rules! bit_word {
    ($(#[$meta:meta])* $name:ident) => {
        $(#[$meta])*
        #[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
        pub struct $name {
            bits: u32,
            arity: u8,
        }

        impl $name {
            /// Builds a value from packed bits (coordinate 1 is bit 0).
            pub fn new(arity: u8, bits: u32) -> Result<Self> {
                check_arity(arity, 31)?;
                if bits & !full_mask(arity) != 0 {
                    return Err(Error::StrayBits { arity, bits });
                }
                Ok(Self { bits, arity })
            }

            /// Packed constructor without validation; callers guarantee the invariant.
            #[inline]
            pub(crate) const fn from_raw(arity: u8, bits: u32) -> Self {
                Self { bits, arity }
            }

            pub const fn zeros(arity: u8) -> Self {
                Self { bits: 0, arity }
            }

            pub const fn ones(arity: u8) -> Self {
                Self { bits: full_mask(arity), arity }
            }

            #[inline]
            pub const fn bits(self) -> u32 {
                self.bits
            }

            #[inline]
            pub const fn arity(self) -> u8 {
                self.arity
            }

            /// Coordinate `i` (1-indexed).
            pub fn get(self, i: u8) -> bool {
                debug_assert!(i >= 1 && i <= self.arity);
                self.bits >> (i - 1) & 1 == 1
            }

            /// Returns a copy with coordinate `i` (1-indexed) set to `value`.
            pub fn with(self, i: u8, value: bool) -> Self {
                let m = 1u32 << (i - 1);
                let bits = if value { self.bits | m } else { self.bits & !m };
                Self { bits, arity: self.arity }
            }

            pub fn is_full(self) -> bool {
                self.bits == full_mask(self.arity)
            }

            /// All `2^n` values of this arity in increasing packed order.
            pub fn all(arity: u8) -> impl Iterator<Item = Self> + Clone {
                (0..=full_mask(arity)).map(move |bits| Self { bits, arity })
            }

            /// Parses a bit string whose leftmost character is coordinate 1.
            pub fn parse_bits(text: &str) -> core::result::Result<Self, ParseBitsError> {
                let len = text.len();
                if len == 0 || len > 31 {
                    return Err(ParseBitsError::Length(len));
                }
                let mut bits = 0u32;
                for (i, c) in text.chars().enumerate() {
                    match c {
                        '0' => {}
                        '1' => bits |= 1 << i,
                        other => return Err(ParseBitsError::Character(other)),
                    }
                }
                Ok(Self { bits, arity: len as u8 })
            }
        }

        impl fmt::Display for $name {
            fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
                write_bits(f, self.bits, self.arity)
            }
        }

        impl fmt::Debug for $name {
            fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
                write!(f, "{}(", stringify!($name))?;
                write_bits(f, self.bits, self.arity)?;
                f.write_str(")")
            }
        }

        impl FromStr for $name {
            type Err = ParseBitsError;

            fn from_str(s: &str) -> core::result::Result<Self, Self::Err> {
                Self::parse_bits(s.trim())
            }
        }
    };
}

fn write_bits(f: &mut fmt::Formatter<'_>, bits: u32, arity: u8) -> fmt::Result {
    for i in 0..arity {
        f.write_str(if bits >> i & 1 == 1 { "1" } else { "0" })?;
    }
    Ok(())
}

/// Failure to read a bit string.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum ParseBitsError {
    Length(usize),
    Character(char),
}

impl fmt::Display for ParseBitsError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ParseBitsError::Length(n) => write!(f, "bit string length {n} outside 1..=31"),
            ParseBitsError::Character(c) => write!(f, "unexpected character {c:?} in bit string"),
        }
    }
}

impl core::error::Error for ParseBitsError {}

bit_word!(
    /// A point `μ ∈ B^n`.
    StateVector
);
bit_word!(
    /// Selects which coordinates compute `Φ` during one step.
    FireVector
);
bit_word!(
    /// A subset of `{1..n}`.
    CoordinateSet
);

impl CoordinateSet {
    pub fn union(self, other: Self) -> Self {
        Self::from_raw(self.arity, self.bits | other.bits)
    }

    pub fn is_empty(self) -> bool {
        self.bits == 0
    }

    pub fn len(self) -> u32 {
        self.bits.count_ones()
    }

    /// Member coordinates, 1-indexed and ascending.
    pub fn coordinates(self) -> impl Iterator<Item = u8> {
        (0..self.arity).filter(move |i| self.bits >> i & 1 == 1).map(|i| i + 1)
    }
}

impl From<FireVector> for CoordinateSet {
    fn from(v: FireVector) -> Self {
        CoordinateSet::from_raw(v.arity(), v.bits())
    }
}

impl FireVector {
    /// The single-coordinate vector firing only coordinate `i` (1-indexed).
    pub fn single(arity: u8, i: u8) -> Self {
        Self::from_raw(arity, 1 << (i - 1))
    }
}

/// `Φ: B^n → B^n` stored as a table indexed by the packed input.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct TransitionFunction {
    arity: u8,
    table: Vec<u32>,
}

impl TransitionFunction {
    /// Builds a function from packed outputs, `table[μ] = Φ(μ)`.
    pub fn new(arity: u8, table: Vec<u32>) -> Result<Self> {
        Self::with_limit(arity, table, MAX_ARITY)
    }

    /// As [`TransitionFunction::new`] with an explicit arity ceiling.
    pub fn with_limit(arity: u8, table: Vec<u32>, max_arity: u8) -> Result<Self> {
        check_arity(arity, max_arity.min(31))?;
        if table.len() != 1usize << arity {
            return Err(Error::TableLength { arity, found: table.len() });
        }
        let mask = full_mask(arity);
        if let Some(&bad) = table.iter().find(|&&b| b & !mask != 0) {
            return Err(Error::StrayBits { arity, bits: bad });
        }
        Ok(Self { arity, table })
    }

    pub fn from_fn(arity: u8, mut f: impl FnMut(StateVector) -> StateVector) -> Result<Self> {
        check_arity(arity, MAX_ARITY)?;
        let mut table = Vec::with_capacity(1 << arity);
        for mu in StateVector::all(arity) {
            let out = f(mu);
            if out.arity() != arity {
                return Err(Error::ArityMismatch { expected: arity, found: out.arity() });
            }
            table.push(out.bits());
        }
        Ok(Self { arity, table })
    }

    pub fn constant(value: StateVector) -> Self {
        let arity = value.arity();
        Self { arity, table: alloc::vec![value.bits(); 1 << arity] }
    }

    pub fn identity(arity: u8) -> Self {
        Self { arity, table: (0..=full_mask(arity)).collect() }
    }

    /// Unpacks a function index: `Φ(μ)` occupies bits `n·μ .. n·μ + n`.
    ///
    /// Indices run over `0 .. 2^(n·2^n)`; increasing index is the order used by
    /// every census and witness-mining routine.
    pub fn from_index(arity: u8, index: u64) -> Result<Self> {
        check_arity(arity, 4)?;
        let rows = 1usize << arity;
        let width = arity as usize * rows;
        if width < 64 && index >> width != 0 {
            return Err(Error::StrayBits { arity, bits: (index >> width) as u32 });
        }
        let mask = full_mask(arity) as u64;
        let table = (0..rows).map(|mu| ((index >> (arity as usize * mu)) & mask) as u32).collect();
        Ok(Self { arity, table })
    }

    /// Inverse of [`TransitionFunction::from_index`]; requires `n·2^n ≤ 64`.
    pub fn index(&self) -> Option<u64> {
        let width = self.arity as usize * self.table.len();
        if width > 64 {
            return None;
        }
        Some(self.table.iter().enumerate().fold(0u64, |acc, (mu, &y)| acc | (y as u64) << (self.arity as usize * mu)))
    }

    #[inline]
    pub fn arity(&self) -> u8 {
        self.arity
    }

    /// Packed outputs, `table()[μ] = Φ(μ)`.
    #[inline]
    pub fn table(&self) -> &[u32] {
        &self.table
    }

    pub fn states(&self) -> impl Iterator<Item = StateVector> + Clone {
        StateVector::all(self.arity)
    }

    fn check(&self, found: u8) -> Result<()> {
        if found != self.arity {
            Err(Error::ArityMismatch { expected: self.arity, found })
        } else {
            Ok(())
        }
    }

    /// `Φ(μ)`.
    pub fn apply(&self, mu: StateVector) -> Result<StateVector> {
        self.check(mu.arity())?;
        Ok(StateVector::from_raw(self.arity, self.table[mu.bits() as usize]))
    }

    /// `Φ^v(μ)`: fired coordinates take `Φ_i(μ)`, the others keep `μ_i`.
    pub fn restrict(&self, v: FireVector, mu: StateVector) -> Result<StateVector> {
        self.check(v.arity())?;
        self.check(mu.arity())?;
        Ok(StateVector::from_raw(self.arity, self.step_bits(v.bits(), mu.bits())))
    }

    /// Packed form of [`TransitionFunction::restrict`] for hot loops.
    #[inline]
    pub fn step_bits(&self, v: u32, mu: u32) -> u32 {
        (mu & !v) | (self.table[mu as usize] & v)
    }

    /// Left fold of [`TransitionFunction::restrict`] over `word`.
    pub fn iterate_word(&self, mu: StateVector, word: &[FireVector]) -> Result<StateVector> {
        self.check(mu.arity())?;
        let mut x = mu.bits();
        for v in word {
            self.check(v.arity())?;
            x = self.step_bits(v.bits(), x);
        }
        Ok(StateVector::from_raw(self.arity, x))
    }

    /// The constant value when `Φ` is constant.
    pub fn is_constant(&self) -> Option<StateVector> {
        let first = self.table[0];
        self.table.iter().all(|&y| y == first).then(|| StateVector::from_raw(self.arity, first))
    }

    pub fn fixed_points(&self) -> Vec<StateVector> {
        self.table
            .iter()
            .enumerate()
            .filter(|&(mu, &y)| mu as u32 == y)
            .map(|(mu, _)| StateVector::from_raw(self.arity, mu as u32))
            .collect()
    }

    pub fn fixed_point_count(&self) -> usize {
        self.table.iter().enumerate().filter(|&(mu, &y)| mu as u32 == y).count()
    }

    /// Coordinates with `Φ_i(μ) ≠ μ_i`.
    pub fn unstable_set(&self, mu: StateVector) -> Result<CoordinateSet> {
        self.check(mu.arity())?;
        Ok(CoordinateSet::from_raw(self.arity, self.table[mu.bits() as usize] ^ mu.bits()))
    }
}

impl fmt::Debug for TransitionFunction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("Φ[")?;
        for (mu, &y) in self.table.iter().enumerate() {
            if mu > 0 {
                f.write_str(", ")?;
            }
            write_bits(f, mu as u32, self.arity)?;
            f.write_str("->")?;
            write_bits(f, y, self.arity)?;
        }
        f.write_str("]")
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use alloc::string::ToString;
    use alloc::vec;
    use proptest::prelude::*;

    fn s(text: &str) -> StateVector {
        text.parse().unwrap()
    }

    fn fv(text: &str) -> FireVector {
        text.parse().unwrap()
    }

    /// Φ(μ1, μ2) = (¬μ2 ∨ μ1μ2, ¬μ1 ∨ μ1μ2), evaluated coordinate by coordinate.
    fn origin_jump() -> TransitionFunction {
        TransitionFunction::from_fn(2, |mu| {
            let (a, b) = (mu.get(1), mu.get(2));
            StateVector::zeros(2).with(1, !b || (a && b)).with(2, !a || (a && b))
        })
        .unwrap()
    }

    #[test]
    fn origin_jump_formula_reading_matches_fixture() {
        let phi = origin_jump();
        for (mu, y) in [("00", "11"), ("01", "01"), ("10", "10"), ("11", "11")] {
            assert_eq!(phi.apply(s(mu)).unwrap(), s(y));
        }
        assert_eq!(phi.fixed_points(), vec![s("10"), s("01"), s("11")]);
        assert_eq!(phi.is_constant(), None);
    }

    #[test]
    fn bit_text_orientation() {
        let mu = s("10");
        assert!(mu.get(1));
        assert!(!mu.get(2));
        assert_eq!(mu.bits(), 1);
        assert_eq!(mu.to_string(), "10");
        assert!("1a".parse::<StateVector>().is_err());
        assert!("".parse::<StateVector>().is_err());
    }

    #[test]
    fn apply_examples() {
        let c = TransitionFunction::constant(s("11"));
        assert_eq!(c.apply(s("01")).unwrap(), s("11"));
        assert_eq!(TransitionFunction::identity(2).apply(s("10")).unwrap(), s("10"));
        assert_eq!(origin_jump().apply(s("00")).unwrap(), s("11"));
        assert!(matches!(c.apply(s("011")), Err(Error::ArityMismatch { .. })));
    }

    #[test]
    fn restrict_examples() {
        let phi = origin_jump();
        assert_eq!(phi.restrict(fv("01"), s("00")).unwrap(), s("01"));
        assert_eq!(phi.restrict(fv("00"), s("00")).unwrap(), s("00"));
        assert_eq!(phi.restrict(fv("11"), s("00")).unwrap(), s("11"));
        assert!(phi.restrict(fv("1"), s("00")).is_err());
    }

    #[test]
    fn iterate_word_examples() {
        let phi = origin_jump();
        assert_eq!(phi.iterate_word(s("10"), &[]).unwrap(), s("10"));
        assert_eq!(phi.iterate_word(s("00"), &[fv("01")]).unwrap(), s("01"));
        assert_eq!(phi.iterate_word(s("00"), &[fv("01"), fv("10")]).unwrap(), s("01"));
        let c = TransitionFunction::constant(s("11"));
        assert_eq!(c.iterate_word(s("00"), &[fv("10"), fv("01")]).unwrap(), s("11"));
    }

    #[test]
    fn constancy_and_fixed_points() {
        let c = TransitionFunction::constant(s("11"));
        assert_eq!(c.is_constant(), Some(s("11")));
        assert_eq!(c.fixed_points(), vec![s("11")]);
        let id = TransitionFunction::identity(2);
        assert_eq!(id.is_constant(), None);
        assert_eq!(id.fixed_points().len(), 4);
    }

    #[test]
    fn unstable_sets() {
        let c = TransitionFunction::constant(s("11"));
        assert_eq!(c.unstable_set(s("00")).unwrap().coordinates().collect::<Vec<_>>(), vec![1, 2]);
        assert!(c.unstable_set(s("11")).unwrap().is_empty());
        assert!(origin_jump().unstable_set(s("01")).unwrap().is_empty());
    }

    #[test]
    fn constructor_guards() {
        assert!(matches!(TransitionFunction::new(2, vec![0; 3]), Err(Error::TableLength { .. })));
        assert!(matches!(TransitionFunction::new(2, vec![0, 0, 0, 4]), Err(Error::StrayBits { .. })));
        assert!(matches!(TransitionFunction::new(13, vec![]), Err(Error::ArityOutOfRange { .. })));
        assert!(StateVector::new(2, 4).is_err());
    }

    #[test]
    fn index_round_trip_small() {
        for idx in 0..256u64 {
            let phi = TransitionFunction::from_index(2, idx).unwrap();
            assert_eq!(phi.index(), Some(idx));
        }
        assert!(TransitionFunction::from_index(2, 256).is_err());
    }

    fn arb_function(max_arity: u8) -> impl Strategy<Value = TransitionFunction> {
        (1..=max_arity).prop_flat_map(|n| {
            proptest::collection::vec(0..(1u32 << n), 1usize << n)
                .prop_map(move |t| TransitionFunction::new(n, t).unwrap())
        })
    }

    fn arb_case() -> impl Strategy<Value = (TransitionFunction, u32, Vec<u32>, Vec<u32>)> {
        arb_function(3).prop_flat_map(|phi| {
            let top = 1u32 << phi.arity();
            (Just(phi), 0..top, proptest::collection::vec(0..top, 0..8), proptest::collection::vec(0..top, 0..8))
        })
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(1000))]

        #[test]
        fn restrict_identities((phi, mu, _, _) in arb_case()) {
            let n = phi.arity();
            let mu = StateVector::new(n, mu).unwrap();
            prop_assert_eq!(phi.restrict(FireVector::zeros(n), mu).unwrap(), mu);
            prop_assert_eq!(phi.restrict(FireVector::ones(n), mu).unwrap(), phi.apply(mu).unwrap());
        }

        #[test]
        fn restrict_is_coordinatewise((phi, mu, w, _) in arb_case()) {
            let n = phi.arity();
            let mu = StateVector::new(n, mu).unwrap();
            let image = phi.apply(mu).unwrap();
            for &v in &w {
                let v = FireVector::new(n, v).unwrap();
                let out = phi.restrict(v, mu).unwrap();
                for i in 1..=n {
                    let expected = (!v.get(i) && mu.get(i)) ^ (v.get(i) && image.get(i));
                    prop_assert_eq!(out.get(i), expected);
                }
            }
        }

        #[test]
        fn word_fold_associates((phi, mu, w1, w2) in arb_case()) {
            let n = phi.arity();
            let mu = StateVector::new(n, mu).unwrap();
            let w1: Vec<_> = w1.into_iter().map(|b| FireVector::new(n, b).unwrap()).collect();
            let w2: Vec<_> = w2.into_iter().map(|b| FireVector::new(n, b).unwrap()).collect();
            let mut joined = w1.clone();
            joined.extend_from_slice(&w2);
            let mid = phi.iterate_word(mu, &w1).unwrap();
            prop_assert_eq!(phi.iterate_word(mu, &joined).unwrap(), phi.iterate_word(mid, &w2).unwrap());
        }

        #[test]
        fn constant_function_fires_to_value(n in 1u8..=3, c in 0u32..8, mu in 0u32..8, w in proptest::collection::vec(0u32..8, 0..8)) {
            let mask = full_mask(n);
            let c = StateVector::new(n, c & mask).unwrap();
            let mu = StateVector::new(n, mu & mask).unwrap();
            let w: Vec<_> = w.into_iter().map(|b| FireVector::new(n, b & mask).unwrap()).collect();
            let phi = TransitionFunction::constant(c);
            let fired = w.iter().fold(0, |acc, v| acc | v.bits());
            let out = phi.iterate_word(mu, &w).unwrap();
            for i in 1..=n {
                let bit = 1 << (i - 1);
                let expected = if fired & bit != 0 { c.get(i) } else { mu.get(i) };
                prop_assert_eq!(out.get(i), expected);
            }
        }
    }
}
