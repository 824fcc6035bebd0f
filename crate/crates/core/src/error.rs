use core::fmt;

use crate::boolean::CoordinateSet;

/// Errors raised by the core operations.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Error {
    /// Two values that must share an arity do not.
    ArityMismatch { expected: u8, found: u8 },
    /// Arity outside `1..=max`.
    ArityOutOfRange { arity: u8, max: u8 },
    /// A transition table whose length is not `2^n`.
    TableLength { arity: u8, found: usize },
    /// A packed value has bits set above the arity.
    StrayBits { arity: u8, bits: u32 },
    /// A schedule whose period is empty.
    EmptyPeriod,
    /// A schedule whose period never fires the listed coordinates.
    NotProgressive { missing: CoordinateSet },
    /// Grid times must be finite and strictly increasing.
    InvalidTimeGrid,
    /// A state set that must be non-empty is empty.
    EmptySet,
    /// A table that must describe a bijection does not.
    NotBijective,
    /// A bijection fails the cover-preservation conditions of the group.
    NotInOmega,
    /// An operation refused to run because the search space exceeds its guard.
    Budget { attempted: u64, limit: u64 },
}

impl fmt::Display for Error {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Error::ArityMismatch { expected, found } => {
                write!(f, "arity mismatch: expected {expected}, found {found}")
            }
            Error::ArityOutOfRange { arity, max } => {
                write!(f, "arity {arity} outside the supported range 1..={max}")
            }
            Error::TableLength { arity, found } => {
                write!(f, "transition table for arity {arity} needs {} rows, found {found}", 1usize << arity)
            }
            Error::StrayBits { arity, bits } => {
                write!(f, "value {bits:#b} has bits above arity {arity}")
            }
            Error::EmptyPeriod => f.write_str("schedule period is empty"),
            Error::NotProgressive { missing } => {
                f.write_str("schedule is not progressive: ")?;
                let mut first = true;
                for i in missing.coordinates() {
                    if !first {
                        f.write_str(", ")?;
                    }
                    first = false;
                    write!(f, "coordinate {i}")?;
                }
                f.write_str(" never fires in the period")
            }
            Error::InvalidTimeGrid => f.write_str("time grid must be finite and strictly increasing"),
            Error::EmptySet => f.write_str("state set is empty"),
            Error::NotBijective => f.write_str("table is not a bijection"),
            Error::NotInOmega => f.write_str("bijection does not preserve full covers"),
            Error::Budget { attempted, limit } => {
                write!(f, "search space of {attempted} exceeds budget {limit}")
            }
        }
    }
}

impl core::error::Error for Error {}

pub type Result<T> = core::result::Result<T, Error>;
