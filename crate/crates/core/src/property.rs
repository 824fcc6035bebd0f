//! Descriptors naming one dynamical property together with its arguments.

use alloc::vec::Vec;
use core::fmt;
use core::str::FromStr;

use crate::boolean::StateVector;
use crate::verdict::UnknownTag;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum SeparationMode {
    Temporal,
    Weak,
    Strong,
    Atemporal,
}

impl SeparationMode {
    pub const ALL: [SeparationMode; 4] =
        [SeparationMode::Temporal, SeparationMode::Weak, SeparationMode::Strong, SeparationMode::Atemporal];

    pub fn as_str(self) -> &'static str {
        match self {
            SeparationMode::Temporal => "temporal",
            SeparationMode::Weak => "weak",
            SeparationMode::Strong => "strong",
            SeparationMode::Atemporal => "atemporal",
        }
    }
}

/// `p` (some progressive schedule) or `n` (every progressive schedule).
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Quantifier {
    P,
    N,
}

impl Quantifier {
    pub const ALL: [Quantifier; 2] = [Quantifier::P, Quantifier::N];

    pub fn as_str(self) -> &'static str {
        match self {
            Quantifier::P => "p",
            Quantifier::N => "n",
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum TransitivityMode {
    WeakP,
    StrongP,
    N,
}

impl TransitivityMode {
    pub const ALL: [TransitivityMode; 3] = [TransitivityMode::WeakP, TransitivityMode::StrongP, TransitivityMode::N];

    pub fn as_str(self) -> &'static str {
        match self {
            TransitivityMode::WeakP => "weak-p",
            TransitivityMode::StrongP => "strong-p",
            TransitivityMode::N => "n",
        }
    }
}

impl FromStr for TransitivityMode {
    type Err = UnknownTag;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "weak-p" | "weak_p" => Ok(TransitivityMode::WeakP),
            "strong-p" | "strong_p" => Ok(TransitivityMode::StrongP),
            "n" => Ok(TransitivityMode::N),
            _ => Err(UnknownTag),
        }
    }
}

impl FromStr for SeparationMode {
    type Err = UnknownTag;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        SeparationMode::ALL.into_iter().find(|m| m.as_str() == s).ok_or(UnknownTag)
    }
}

impl FromStr for Quantifier {
    type Err = UnknownTag;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "p" => Ok(Quantifier::P),
            "n" => Ok(Quantifier::N),
            _ => Err(UnknownTag),
        }
    }
}

/// A property of `Ξ_Φ` with its arguments.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum Property {
    /// Some progressive schedule makes the two flows equal at every covered time.
    AgreeExists {
        mu: StateVector,
        other: StateVector,
    },
    PIndependent,
    NIndependent,
    PDependent,
    NDependent,
    /// Every ordered pair satisfies `AgreeExists` (exploration variant).
    PairwiseMergeableAll,
    Separated {
        mu: StateVector,
        other: StateVector,
        mode: SeparationMode,
        quantifier: Quantifier,
    },
    PointTransitive {
        mu: StateVector,
        mode: TransitivityMode,
    },
    SetTransitive {
        set: Vec<StateVector>,
        mode: TransitivityMode,
    },
    SystemTransitive {
        mode: TransitivityMode,
    },
}

impl Property {
    /// Stable kebab-case name used by the CLI and reports.
    pub fn name(&self) -> &'static str {
        use Quantifier::*;
        use SeparationMode::*;
        match self {
            Property::AgreeExists { .. } => "agree",
            Property::PIndependent => "p-independent",
            Property::NIndependent => "n-independent",
            Property::PDependent => "p-dependent",
            Property::NDependent => "n-dependent",
            Property::PairwiseMergeableAll => "pairwise-mergeable-all",
            Property::Separated { mode, quantifier, .. } => match (mode, quantifier) {
                (Temporal, P) => "temporal-p-separated",
                (Temporal, N) => "temporal-n-separated",
                (Weak, P) => "weak-p-separated",
                (Weak, N) => "weak-n-separated",
                (Strong, P) => "strong-p-separated",
                (Strong, N) => "strong-n-separated",
                (Atemporal, P) => "atemporal-p-separated",
                (Atemporal, N) => "atemporal-n-separated",
            },
            Property::PointTransitive { .. } => "point-transitive",
            Property::SetTransitive { .. } => "set-transitive",
            Property::SystemTransitive { .. } => "system-transitive",
        }
    }

    /// Splits a separation name like `weak-n-separated` into its parts.
    pub fn parse_separation(name: &str) -> Option<(SeparationMode, Quantifier)> {
        let rest = name.strip_suffix("-separated")?;
        let (mode, q) = rest.rsplit_once('-')?;
        Some((mode.parse().ok()?, q.parse().ok()?))
    }

    /// The whole-system properties, in report order.
    pub fn system_properties() -> Vec<Property> {
        let mut v = alloc::vec![
            Property::PIndependent,
            Property::NIndependent,
            Property::PDependent,
            Property::NDependent,
            Property::PairwiseMergeableAll,
        ];
        v.extend(TransitivityMode::ALL.map(|mode| Property::SystemTransitive { mode }));
        v
    }
}

impl fmt::Display for Property {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())?;
        match self {
            Property::AgreeExists { mu, other } | Property::Separated { mu, other, .. } => {
                write!(f, "({mu},{other})")
            }
            Property::PointTransitive { mu, mode } => write!(f, "[{}]({mu})", mode.as_str()),
            Property::SetTransitive { set, mode } => {
                write!(f, "[{}]({{", mode.as_str())?;
                for (i, s) in set.iter().enumerate() {
                    if i > 0 {
                        f.write_str(",")?;
                    }
                    write!(f, "{s}")?;
                }
                f.write_str("})")
            }
            Property::SystemTransitive { mode } => write!(f, "[{}]", mode.as_str()),
            _ => Ok(()),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn separation_names_parse_back() {
        for mode in SeparationMode::ALL {
            for quantifier in Quantifier::ALL {
                let mu = StateVector::zeros(1);
                let p = Property::Separated { mu, other: mu, mode, quantifier };
                assert_eq!(Property::parse_separation(p.name()), Some((mode, quantifier)));
            }
        }
        assert_eq!(Property::parse_separation("agree"), None);
    }
}
