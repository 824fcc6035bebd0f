//! Three-valued verdicts with witnesses and certificate tags.

use alloc::vec::Vec;
use core::fmt;
use core::str::FromStr;

use crate::boolean::{StateVector, TransitionFunction};
use crate::schedule::{Run, Schedule};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Truth {
    True,
    False,
    Unknown,
}

impl Truth {
    pub fn from_bool(b: bool) -> Self {
        if b {
            Truth::True
        } else {
            Truth::False
        }
    }

    pub fn negate(self) -> Self {
        match self {
            Truth::True => Truth::False,
            Truth::False => Truth::True,
            Truth::Unknown => Truth::Unknown,
        }
    }

    pub fn as_str(self) -> &'static str {
        match self {
            Truth::True => "true",
            Truth::False => "false",
            Truth::Unknown => "unknown",
        }
    }

    pub fn known(self) -> Option<bool> {
        match self {
            Truth::True => Some(true),
            Truth::False => Some(false),
            Truth::Unknown => None,
        }
    }
}

impl fmt::Display for Truth {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for Truth {
    type Err = UnknownTag;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "true" => Ok(Truth::True),
            "false" => Ok(Truth::False),
            "unknown" => Ok(Truth::Unknown),
            _ => Err(UnknownTag),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct UnknownTag;

impl fmt::Display for UnknownTag {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("unrecognised tag")
    }
}

macro_rules! reasons {
    ($($variant:ident => $tag:literal),* $(,)?) => {
        /// Machine-readable name of the argument behind a verdict.
        #[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
        pub enum Reason {
            $($variant,)*
        }

        impl Reason {
            pub const ALL: &'static [Reason] = &[$(Reason::$variant,)*];

            pub fn as_str(self) -> &'static str {
                match self {
                    $(Reason::$variant => $tag,)*
                }
            }
        }

        impl FromStr for Reason {
            type Err = UnknownTag;

            fn from_str(s: &str) -> Result<Self, Self::Err> {
                match s {
                    $($tag => Ok(Reason::$variant),)*
                    _ => Err(UnknownTag),
                }
            }
        }
    };
}

reasons! {
    IdenticalStates => "identical-states",
    ConstantFastPath => "constant-fast-path",
    CoverageProductPath => "coverage-product-path",
    CoverageProductExhausted => "coverage-product-exhausted",
    AnchorState => "anchor-state",
    NoAnchorState => "no-anchor-state",
    AllPairsMerge => "all-pairs-merge",
    ReconvergencePath => "reconvergence-path",
    NoReconvergence => "no-reconvergence",
    FairScc => "fair-scc",
    NoFairScc => "no-fair-scc",
    DiagonalReachable => "diagonal-reachable",
    DiagonalUnreachable => "diagonal-unreachable",
    OrbitPairFairScc => "orbit-pair-fair-scc",
    OrbitPairExhausted => "orbit-pair-exhausted",
    OrbitIntersection => "orbit-intersection",
    Reachability => "reachability",
    Unreachable => "unreachable",
    SccChain => "scc-chain",
    NotChain => "scc-not-chain",
    UnfairTail => "unfair-tail",
    Escape => "escape",
    AvoidingFairRun => "avoiding-fair-run",
    AllFairRunsCover => "all-fair-runs-cover",
    SetProductFairScc => "set-product-fair-scc",
    SetProductExhausted => "set-product-exhausted",
    ClosedSetConnectivity => "closed-set-connectivity",
    ClosedSetDisconnected => "closed-set-disconnected",
    BudgetExceeded => "budget-exceeded",
    AmbiguousDefinition => "ambiguous-definition",
    OracleWitness => "oracle-witness",
    OracleExhausted => "oracle-exhausted",
    OracleDepthLimit => "oracle-depth-limit",
}

impl fmt::Display for Reason {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

/// Claimed states of the witnessed flows in one grid interval.
///
/// `interval` is `None` for `t < t_0` and `Some(k)` for `[t_k, t_{k+1})`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Checkpoint {
    pub interval: Option<usize>,
    pub states: Vec<StateVector>,
}

/// Evidence for a verdict: a schedule, the initial states it is applied to,
/// claimed states at chosen intervals, and property-specific extra states
/// (an anchor state, an avoided target, partner states).
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Witness {
    pub schedule: Option<Schedule>,
    pub initial: Vec<StateVector>,
    pub checkpoints: Vec<Checkpoint>,
    pub states: Vec<StateVector>,
}

impl Witness {
    pub fn states(states: Vec<StateVector>) -> Self {
        Self { states, ..Self::default() }
    }

    /// A schedule witness with checkpoints filled in from simulation.
    pub fn replayed(
        phi: &TransitionFunction,
        schedule: Schedule,
        initial: Vec<StateVector>,
        intervals: &[Option<usize>],
    ) -> Self {
        let runs: Vec<Run> = initial.iter().map(|&mu| Run::compute(phi, mu, &schedule)).collect();
        let checkpoints = intervals
            .iter()
            .map(|&interval| Checkpoint {
                interval,
                states: runs.iter().map(|r| r.state_after(interval.map_or(0, |k| k + 1))).collect(),
            })
            .collect();
        Self { schedule: Some(schedule), initial, checkpoints, states: Vec::new() }
    }

    /// Re-simulates the schedule and compares every checkpoint.
    pub fn replays(&self, phi: &TransitionFunction) -> bool {
        let Some(schedule) = &self.schedule else {
            return self.checkpoints.is_empty();
        };
        if !schedule.validate_progressive() {
            return false;
        }
        let runs: Vec<Run> = self.initial.iter().map(|&mu| Run::compute(phi, mu, schedule)).collect();
        self.checkpoints.iter().all(|cp| {
            cp.states.len() == runs.len()
                && runs.iter().zip(&cp.states).all(|(r, &s)| r.state_after(cp.interval.map_or(0, |k| k + 1)) == s)
        })
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Verdict {
    pub value: Truth,
    pub reason: Reason,
    pub witness: Option<Witness>,
}

impl Verdict {
    pub fn new(value: Truth, reason: Reason) -> Self {
        Self { value, reason, witness: None }
    }

    pub fn yes(reason: Reason) -> Self {
        Self::new(Truth::True, reason)
    }

    pub fn no(reason: Reason) -> Self {
        Self::new(Truth::False, reason)
    }

    pub fn unknown(reason: Reason) -> Self {
        Self::new(Truth::Unknown, reason)
    }

    pub fn with_witness(mut self, witness: Witness) -> Self {
        self.witness = Some(witness);
        self
    }

    /// Same evidence, opposite claim (for dual properties).
    pub fn negated(mut self) -> Self {
        self.value = self.value.negate();
        self
    }

    pub fn is_true(&self) -> bool {
        self.value == Truth::True
    }

    pub fn is_false(&self) -> bool {
        self.value == Truth::False
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn reason_tags_round_trip() {
        for &r in Reason::ALL {
            assert_eq!(r.as_str().parse::<Reason>(), Ok(r));
        }
        assert!("nope".parse::<Reason>().is_err());
    }

    #[test]
    fn truth_negation() {
        assert_eq!(Truth::True.negate(), Truth::False);
        assert_eq!(Truth::Unknown.negate(), Truth::Unknown);
    }
}
