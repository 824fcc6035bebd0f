//! Permutation-table files: `2^n` lines `<bits> -> <bits>`, each input once,
//! describing a bijection of `B^n`. `#` starts a comment.

use std::fmt::Write as _;

use asyncflow_core::conjugacy::StateBijection;
use asyncflow_core::{StateVector, MAX_ARITY};

use crate::error::ParseError;

pub fn parse_permutation(text: &str) -> Result<StateBijection, ParseError> {
    let mut arity: Option<u8> = None;
    let mut forward: Vec<Option<u32>> = Vec::new();
    let mut last = 1;
    for (i, raw) in text.lines().enumerate() {
        let number = i + 1;
        let body = raw.split('#').next().unwrap_or("");
        if body.trim().is_empty() {
            continue;
        }
        last = number;
        let col = body.len() - body.trim_start().len() + 1;
        let Some((lhs, rhs)) = body.split_once("->") else {
            return Err(ParseError::new(number, col, "expected `<bits> -> <bits>`"));
        };
        let parse = |w: &str| -> Result<StateVector, ParseError> {
            w.trim().parse().map_err(|_| ParseError::new(number, col, format!("invalid bit string `{}`", w.trim())))
        };
        let (x, y) = (parse(lhs)?, parse(rhs)?);
        let n = *arity.get_or_insert(x.arity());
        if n > MAX_ARITY {
            return Err(ParseError::new(number, col, format!("arity {n} exceeds {MAX_ARITY}")));
        }
        if forward.is_empty() {
            forward = vec![None; 1 << n];
        }
        if x.arity() != n || y.arity() != n {
            return Err(ParseError::new(number, col, format!("expected {n} bits on both sides")));
        }
        let slot = &mut forward[x.bits() as usize];
        if slot.is_some() {
            return Err(ParseError::new(number, col, format!("duplicate row for {x}")));
        }
        *slot = Some(y.bits());
    }
    let Some(n) = arity else {
        return Err(ParseError::new(last, 1, "permutation table is empty"));
    };
    if let Some(missing) = forward.iter().position(Option::is_none) {
        let x = StateVector::new(n, missing as u32).expect("in range");
        return Err(ParseError::new(last, 1, format!("missing row for {x}")));
    }
    let table = forward.into_iter().map(Option::unwrap).collect();
    StateBijection::new(n, table).map_err(|e| ParseError::new(last, 1, e.to_string()))
}

pub fn print_permutation(h: &StateBijection) -> String {
    let n = h.arity();
    let mut out = String::new();
    for x in StateVector::all(n) {
        let y = h.apply(x);
        let _ = writeln!(out, "{x} -> {y}");
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn round_trip_and_errors() {
        let swap = StateBijection::coordinate_permutation(&[2, 1]).unwrap();
        let text = print_permutation(&swap);
        assert_eq!(text, "00 -> 00\n10 -> 01\n01 -> 10\n11 -> 11\n");
        assert_eq!(parse_permutation(&text).unwrap(), swap);
        assert!(parse_permutation("00 -> 00\n10 -> 00\n01 -> 10\n11 -> 11\n").is_err());
        assert!(parse_permutation("00 -> 00\n00 -> 01\n").unwrap_err().message.contains("duplicate"));
        assert!(parse_permutation("00 -> 00\n").unwrap_err().message.contains("missing"));
    }
}
