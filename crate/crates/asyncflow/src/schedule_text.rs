//! Schedule files.
//!
//! ```text
//! prefix: 11 01
//! period: 01 10
//! times:  0 0.5 2.25
//! ```
//!
//! `period:` is required; `prefix:` and `times:` are optional. A line that
//! does not open a section continues the previous one. `times:` lists
//! `t_0, t_1, …` (commas or whitespace); later times continue with unit
//! spacing from the last listed one, and omitting it selects `t_k = k`.

use std::fmt::Write as _;

use asyncflow_core::{Error as CoreError, FireVector, Schedule, TimeGrid};

use crate::error::ParseError;

#[derive(Clone, Copy, PartialEq, Eq)]
enum Section {
    Prefix,
    Period,
    Times,
}

/// Parses a schedule; `arity`, when given, is enforced on every letter.
pub fn parse_schedule(text: &str, arity: Option<u8>) -> Result<(Schedule, TimeGrid), ParseError> {
    let mut prefix: Vec<FireVector> = Vec::new();
    let mut period: Vec<FireVector> = Vec::new();
    let mut times: Vec<f64> = Vec::new();
    let mut seen = [false; 3];
    let mut section: Option<Section> = None;
    let mut arity = arity;
    let mut period_line = 0;
    let mut last_line = 1;
    for (i, raw) in text.lines().enumerate() {
        let number = i + 1;
        let body = raw.split('#').next().unwrap_or("");
        if body.trim().is_empty() {
            continue;
        }
        last_line = number;
        let mut rest = body;
        let mut base = 0;
        let head = body.trim_start();
        for (key, sec) in [("prefix:", Section::Prefix), ("period:", Section::Period), ("times:", Section::Times)] {
            if let Some(after) = head.strip_prefix(key) {
                let col = body.len() - head.len() + 1;
                if std::mem::replace(&mut seen[sec as usize], true) {
                    return Err(ParseError::new(number, col, format!("duplicate section `{key}`")));
                }
                section = Some(sec);
                if sec == Section::Period {
                    period_line = number;
                }
                base = body.len() - after.len();
                rest = after;
                break;
            }
        }
        let Some(sec) = section else {
            return Err(ParseError::new(number, 1, "expected `prefix:`, `period:` or `times:`"));
        };
        for (offset, word) in words(rest) {
            let col = base + offset + 1;
            if sec == Section::Times {
                let t: f64 = word
                    .parse()
                    .ok()
                    .filter(|t: &f64| t.is_finite())
                    .ok_or_else(|| ParseError::new(number, col, format!("invalid time `{word}`")))?;
                if times.last().is_some_and(|&prev| prev >= t) {
                    return Err(ParseError::new(number, col, "times must be strictly increasing"));
                }
                times.push(t);
                continue;
            }
            let v: FireVector =
                word.parse().map_err(|_| ParseError::new(number, col, format!("invalid fire vector `{word}`")))?;
            match arity {
                Some(n) if n != v.arity() => {
                    return Err(ParseError::new(number, col, format!("expected {n} bits, found `{word}`")));
                }
                _ => arity = Some(v.arity()),
            }
            if sec == Section::Prefix { &mut prefix } else { &mut period }.push(v);
        }
    }
    if period.is_empty() {
        let line = if period_line > 0 { period_line } else { last_line };
        return Err(ParseError::new(line, 1, "schedule needs a non-empty `period:`"));
    }
    let n = arity.expect("period is non-empty");
    let schedule = Schedule::new(n, prefix, period).map_err(|e| match e {
        CoreError::NotProgressive { .. } => ParseError::new(period_line, 1, e.to_string()),
        other => ParseError::new(period_line, 1, other.to_string()),
    })?;
    let grid = if times.is_empty() {
        TimeGrid::canonical()
    } else {
        TimeGrid::explicit(times).map_err(|e| ParseError::new(last_line, 1, e.to_string()))?
    };
    Ok((schedule, grid))
}

/// Whitespace- or comma-separated words with their byte offsets.
fn words(s: &str) -> impl Iterator<Item = (usize, &str)> {
    let mut pos = 0;
    s.split(|c: char| c.is_whitespace() || c == ',').filter_map(move |w| {
        let start = pos;
        pos += w.len() + 1;
        (!w.is_empty()).then_some((start, w))
    })
}

pub fn letters_text(letters: &[FireVector]) -> String {
    letters.iter().map(ToString::to_string).collect::<Vec<_>>().join(" ")
}

pub fn print_schedule(schedule: &Schedule, grid: &TimeGrid) -> String {
    let mut out = String::new();
    if !schedule.prefix().is_empty() {
        let _ = writeln!(out, "prefix: {}", letters_text(schedule.prefix()));
    }
    let _ = writeln!(out, "period: {}", letters_text(schedule.period()));
    if !grid.is_canonical() {
        let times: Vec<String> = grid.listed().iter().map(|t| format!("{t:?}")).collect();
        let _ = writeln!(out, "times: {}", times.join(" "));
    }
    out
}

/// Parses whitespace-separated letters of one schedule section.
pub fn parse_letters(text: &str, arity: u8) -> Result<Vec<FireVector>, ParseError> {
    words(text)
        .map(|(offset, w)| {
            w.parse::<FireVector>()
                .ok()
                .filter(|v| v.arity() == arity)
                .ok_or_else(|| ParseError::new(1, offset + 1, format!("invalid fire vector `{w}`")))
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn examples() {
        let (s, g) = parse_schedule("period: 11\n", None).unwrap();
        assert_eq!(s.period(), &["11".parse::<FireVector>().unwrap()]);
        assert!(s.prefix().is_empty() && g.is_canonical());
        let (s, _) = parse_schedule("period: 01 10\n", Some(2)).unwrap();
        assert_eq!(letters_text(s.period()), "01 10");
        let err = parse_schedule("period: 01\n", None).unwrap_err();
        assert!(err.message.contains("coordinate 1 never fires"), "{err}");
    }

    #[test]
    fn continuation_and_times() {
        let text = "# warm-up\nprefix: 10\n  01\nperiod: 11\ntimes: 0, 0.5\n 2.25\n";
        let (s, g) = parse_schedule(text, None).unwrap();
        assert_eq!(letters_text(s.prefix()), "10 01");
        assert_eq!(g.listed(), &[0.0, 0.5, 2.25]);
        let again = print_schedule(&s, &g);
        assert_eq!(parse_schedule(&again, None).unwrap(), (s, g));
    }

    #[test]
    fn diagnostics() {
        let err = parse_schedule("period: 11 1x\n", None).unwrap_err();
        assert_eq!((err.line, err.column), (1, 12));
        let err = parse_schedule("period: 11 101\n", None).unwrap_err();
        assert_eq!(err.column, 12);
        let err = parse_schedule("period: 11\ntimes: 1 0\n", None).unwrap_err();
        assert_eq!(err.line, 2);
        assert!(parse_schedule("prefix: 11\n", None).is_err());
        assert!(parse_schedule("11\n", None).is_err());
        assert!(parse_schedule("period: 111\n", Some(2)).is_err());
    }
}
