use alloc::vec;
use alloc::vec::Vec;

use super::{check_state, full_tail};
use crate::boolean::{full_mask, StateVector, TransitionFunction};
use crate::error::{Error, Result};
use crate::graph::PairSpace;
use crate::verdict::{Reason, Truth, Verdict, Witness};

/// Whether some progressive schedule keeps the flows of `mu` and `other`
/// equal at every time the schedule has covered all coordinates.
///
/// Searches the coverage product `(a, b, F)` for a path to the diagonal that
/// never visits a node with `F` full and `a ≠ b`. Equality is absorbing, and
/// once reached the schedule continues with `(1,…,1)` forever.
pub fn agree_exists(phi: &TransitionFunction, mu: StateVector, other: StateVector) -> Result<Verdict> {
    check_state(phi, mu)?;
    check_state(phi, other)?;
    let n = phi.arity();
    if mu == other {
        let s = full_tail(n, &[]);
        return Ok(Verdict::yes(Reason::IdenticalStates).with_witness(Witness::replayed(
            phi,
            s,
            vec![mu, other],
            &[None, Some(0)],
        )));
    }
    let space = match PairSpace::new(phi) {
        Ok(s) => s,
        Err(Error::Budget { .. }) => return Ok(Verdict::unknown(Reason::BudgetExceeded)),
        Err(e) => return Err(e),
    };
    let full = full_mask(n);
    let found =
        space.search((mu.bits(), other.bits()), |a, b, f| f == full && a != b, |_, _, _, _| false, |_, a, b, _| a == b);
    Ok(match found {
        Some(word) => {
            let s = full_tail(n, &word);
            let k = s.coverage_index().expect("progressive");
            let at = [Some(word.len().saturating_sub(1)), Some(k)];
            Verdict::yes(Reason::CoverageProductPath).with_witness(Witness::replayed(phi, s, vec![mu, other], &at))
        }
        None => Verdict::no(Reason::CoverageProductExhausted),
    })
}

/// Outcome of a per-pair predicate over every ordered pair.
struct PairTable {
    n: u8,
    values: Vec<Truth>,
}

impl PairTable {
    fn build(phi: &TransitionFunction, mut f: impl FnMut(StateVector, StateVector) -> Result<Truth>) -> Result<Self> {
        let n = phi.arity();
        let size = 1usize << n;
        let mut values = Vec::with_capacity(size * size);
        for mu in StateVector::all(n) {
            for other in StateVector::all(n) {
                values.push(f(mu, other)?);
            }
        }
        Ok(Self { n, values })
    }

    fn get(&self, mu: StateVector, other: StateVector) -> Truth {
        self.values[((mu.bits() as usize) << self.n) | other.bits() as usize]
    }

    /// `∃μ ∀μ'` of the table; witness is the anchor or, failing that, one
    /// spoiling partner per state.
    fn exists_forall(&self, yes: Reason, no: Reason) -> Verdict {
        let mut partners = Vec::new();
        let mut unknown = false;
        for mu in StateVector::all(self.n) {
            let mut spoiler = None;
            let mut row_unknown = false;
            for other in StateVector::all(self.n) {
                match self.get(mu, other) {
                    Truth::True => {}
                    Truth::False => {
                        spoiler = Some(other);
                        break;
                    }
                    Truth::Unknown => row_unknown = true,
                }
            }
            match spoiler {
                None if !row_unknown => {
                    return Verdict::yes(yes).with_witness(Witness::states(vec![mu]));
                }
                None => unknown = true,
                Some(s) => partners.push(s),
            }
        }
        if unknown {
            Verdict::unknown(Reason::BudgetExceeded)
        } else {
            Verdict::no(no).with_witness(Witness::states(partners))
        }
    }
}

/// `∃μ ∀μ' ∃ρ`: some anchor state agrees with every other state.
pub fn p_independent(phi: &TransitionFunction) -> Result<Verdict> {
    let table = PairTable::build(phi, |a, b| Ok(agree_exists(phi, a, b)?.value))?;
    Ok(table.exists_forall(Reason::AnchorState, Reason::NoAnchorState))
}

/// Negation of [`p_independent`]; on `True` the witness lists, for each state
/// in increasing order, a partner whose orbit cannot be merged with it.
pub fn n_dependent(phi: &TransitionFunction) -> Result<Verdict> {
    Ok(p_independent(phi)?.negated())
}

/// n-independence through the constant-function characterisation.
pub fn n_independent(phi: &TransitionFunction) -> Verdict {
    match phi.is_constant() {
        Some(c) => Verdict::yes(Reason::ConstantFastPath).with_witness(Witness::states(vec![c])),
        None => Verdict::no(Reason::ConstantFastPath),
    }
}

/// n-independence from the definition: `∃μ ∀μ'`, no schedule reaches a covered
/// time at which the two flows differ.
pub fn n_independent_direct(phi: &TransitionFunction) -> Result<Verdict> {
    let n = phi.arity();
    let space = match PairSpace::new(phi) {
        Ok(s) => s,
        Err(Error::Budget { .. }) => return Ok(Verdict::unknown(Reason::BudgetExceeded)),
        Err(e) => return Err(e),
    };
    let full = full_mask(n);
    let table = PairTable::build(phi, |a, b| {
        let split =
            space.search((a.bits(), b.bits()), |_, _, _| false, |_, _, _, _| false, |_, x, y, f| f == full && x != y);
        Ok(Truth::from_bool(split.is_none()))
    })?;
    Ok(table.exists_forall(Reason::AnchorState, Reason::NoAnchorState))
}

/// Negation of [`n_independent`].
pub fn p_dependent(phi: &TransitionFunction) -> Verdict {
    n_independent(phi).negated()
}

/// `∀μ ∀μ' ∃ρ` agreement; an exploration variant, never used in place of
/// p-independence.
pub fn pairwise_mergeable_all(phi: &TransitionFunction) -> Result<Verdict> {
    let mut unknown = false;
    for mu in phi.states() {
        for other in phi.states() {
            match agree_exists(phi, mu, other)?.value {
                Truth::True => {}
                Truth::False => {
                    return Ok(
                        Verdict::no(Reason::CoverageProductExhausted).with_witness(Witness::states(vec![mu, other]))
                    )
                }
                Truth::Unknown => unknown = true,
            }
        }
    }
    Ok(if unknown { Verdict::unknown(Reason::BudgetExceeded) } else { Verdict::yes(Reason::AllPairsMerge) })
}
