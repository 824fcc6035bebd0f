//! JSON verdict reports.
//!
//! States and fire vectors are bit strings (coordinate 1 leftmost). A
//! checkpoint `interval` of `k` is the grid interval `[t_k, t_{k+1})` of the
//! canonical grid; `null` is the time before `t_0`.

use asyncflow_core::{
    Checkpoint, Property, Quantifier, Reason, Schedule, StateVector, TransitivityMode, Truth, Verdict, Witness,
};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::schedule_text::{letters_text, parse_letters};

pub const SCHEMA_VERSION: u32 = 1;

/// Arguments of a property, as given on the command line.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct PropertyArgs {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub mu: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub mu2: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub set: Option<Vec<String>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub mode: Option<String>,
}

impl PropertyArgs {
    pub fn of(property: &Property) -> Self {
        let mut a = PropertyArgs::default();
        match property {
            Property::AgreeExists { mu, other } | Property::Separated { mu, other, .. } => {
                a.mu = Some(mu.to_string());
                a.mu2 = Some(other.to_string());
            }
            Property::PointTransitive { mu, mode } => {
                a.mu = Some(mu.to_string());
                a.mode = Some(mode.as_str().into());
            }
            Property::SetTransitive { set, mode } => {
                a.set = Some(set.iter().map(ToString::to_string).collect());
                a.mode = Some(mode.as_str().into());
            }
            Property::SystemTransitive { mode } => a.mode = Some(mode.as_str().into()),
            _ => {}
        }
        a
    }
}

fn state(arity: u8, text: Option<&str>, flag: &str) -> Result<StateVector> {
    let text = text.ok_or_else(|| Error::Usage(format!("this property needs --{flag}")))?;
    let mu: StateVector = text.parse().map_err(|_| Error::Usage(format!("--{flag}: invalid bit string `{text}`")))?;
    if mu.arity() != arity {
        return Err(Error::Usage(format!("--{flag}: expected {arity} bits, found `{text}`")));
    }
    Ok(mu)
}

fn mode(args: &PropertyArgs) -> Result<TransitivityMode> {
    let text =
        args.mode.as_deref().ok_or_else(|| Error::Usage("this property needs --mode weak-p|strong-p|n".into()))?;
    text.parse().map_err(|_| Error::Usage(format!("--mode: expected weak-p, strong-p or n, found `{text}`")))
}

/// Builds the property named `name` for a model of the given arity.
pub fn build_property(name: &str, args: &PropertyArgs, arity: u8) -> Result<Property> {
    let pair = || -> Result<(StateVector, StateVector)> {
        Ok((state(arity, args.mu.as_deref(), "mu")?, state(arity, args.mu2.as_deref(), "mu2")?))
    };
    Ok(match name {
        "agree" => {
            let (mu, other) = pair()?;
            Property::AgreeExists { mu, other }
        }
        "p-independent" => Property::PIndependent,
        "n-independent" => Property::NIndependent,
        "p-dependent" => Property::PDependent,
        "n-dependent" => Property::NDependent,
        "pairwise-mergeable-all" => Property::PairwiseMergeableAll,
        "point-transitive" => {
            Property::PointTransitive { mu: state(arity, args.mu.as_deref(), "mu")?, mode: mode(args)? }
        }
        "set-transitive" => {
            let items = args.set.as_ref().ok_or_else(|| Error::Usage("this property needs --set".into()))?;
            let set = items.iter().map(|s| state(arity, Some(s), "set")).collect::<Result<Vec<_>>>()?;
            Property::SetTransitive { set, mode: mode(args)? }
        }
        "system-transitive" => Property::SystemTransitive { mode: mode(args)? },
        other => match Property::parse_separation(other) {
            Some((mode, quantifier)) => {
                let (mu, other) = pair()?;
                Property::Separated { mu, other, mode, quantifier }
            }
            None => return Err(Error::Usage(format!("unknown property `{other}`"))),
        },
    })
}

/// Every property name accepted by [`build_property`].
pub fn property_names() -> Vec<String> {
    let mut v: Vec<String> = [
        "agree",
        "p-independent",
        "n-independent",
        "p-dependent",
        "n-dependent",
        "pairwise-mergeable-all",
        "point-transitive",
        "set-transitive",
        "system-transitive",
    ]
    .map(String::from)
    .into();
    for mode in asyncflow_core::SeparationMode::ALL {
        for q in Quantifier::ALL {
            v.push(format!("{}-{}-separated", mode.as_str(), q.as_str()));
        }
    }
    v
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ScheduleReport {
    pub prefix: String,
    pub period: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CheckpointReport {
    pub interval: Option<usize>,
    pub states: Vec<String>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct WitnessReport {
    pub schedule: Option<ScheduleReport>,
    pub initial: Vec<String>,
    pub checkpoints: Vec<CheckpointReport>,
    /// Property-specific states: an anchor, an avoided target, partners.
    pub states: Vec<String>,
}

fn strings(v: &[StateVector]) -> Vec<String> {
    v.iter().map(ToString::to_string).collect()
}

fn parse_states(v: &[String], arity: u8) -> Result<Vec<StateVector>> {
    v.iter().map(|s| state(arity, Some(s), "witness")).collect()
}

impl WitnessReport {
    pub fn of(w: &Witness) -> Self {
        Self {
            schedule: w
                .schedule
                .as_ref()
                .map(|s| ScheduleReport { prefix: letters_text(s.prefix()), period: letters_text(s.period()) }),
            initial: strings(&w.initial),
            checkpoints: w
                .checkpoints
                .iter()
                .map(|c| CheckpointReport { interval: c.interval, states: strings(&c.states) })
                .collect(),
            states: strings(&w.states),
        }
    }

    pub fn to_witness(&self, arity: u8) -> Result<Witness> {
        let schedule = match &self.schedule {
            None => None,
            Some(s) => {
                let letters = |t: &str| parse_letters(t, arity).map_err(|e| Error::parse("witness schedule", e));
                Some(Schedule::raw(arity, letters(&s.prefix)?, letters(&s.period)?)?)
            }
        };
        Ok(Witness {
            schedule,
            initial: parse_states(&self.initial, arity)?,
            checkpoints: self
                .checkpoints
                .iter()
                .map(|c| Ok(Checkpoint { interval: c.interval, states: parse_states(&c.states, arity)? }))
                .collect::<Result<_>>()?,
            states: parse_states(&self.states, arity)?,
        })
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct VerdictReport {
    pub schema_version: u32,
    pub tool_version: String,
    pub model: String,
    pub arity: u8,
    pub property: String,
    pub arguments: PropertyArgs,
    /// `decider` or `oracle`.
    pub engine: String,
    pub verdict: String,
    pub reason: String,
    pub witness: Option<WitnessReport>,
}

impl VerdictReport {
    pub fn new(model: &str, arity: u8, property: &Property, engine: &str, verdict: &Verdict) -> Self {
        Self {
            schema_version: SCHEMA_VERSION,
            tool_version: env!("CARGO_PKG_VERSION").into(),
            model: model.into(),
            arity,
            property: property.name().into(),
            arguments: PropertyArgs::of(property),
            engine: engine.into(),
            verdict: verdict.value.as_str().into(),
            reason: verdict.reason.as_str().into(),
            witness: verdict.witness.as_ref().map(WitnessReport::of),
        }
    }

    pub fn property(&self) -> Result<Property> {
        build_property(&self.property, &self.arguments, self.arity)
    }

    pub fn verdict(&self) -> Result<Verdict> {
        let value: Truth =
            self.verdict.parse().map_err(|_| Error::Usage(format!("unknown verdict `{}`", self.verdict)))?;
        let reason: Reason =
            self.reason.parse().map_err(|_| Error::Usage(format!("unknown reason `{}`", self.reason)))?;
        let witness = self.witness.as_ref().map(|w| w.to_witness(self.arity)).transpose()?;
        Ok(Verdict { value, reason, witness })
    }
}
