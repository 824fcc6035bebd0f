//! Model files.
//!
//! ```text
//! # comments run to the end of the line
//! name = toggle_second
//! n = 2
//! y1 = x1
//! y2 = !x2
//! ```
//!
//! The body is either truth-table rows `<bits> -> <bits>` (all `2^n` rows,
//! each exactly once) or one binding `y<i> = <expr>` per output coordinate.
//! Expressions use `x1..xn`, `0`, `1`, parentheses and the operators `!`,
//! `&`, `^`, `|`, binding in that order from tightest to loosest; binary
//! operators associate to the left. Bit strings put coordinate 1 leftmost.

use std::fmt::{self, Write as _};

use asyncflow_core::{StateVector, TransitionFunction, MAX_ARITY};

use crate::error::ParseError;

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Expr {
    Const(bool),
    /// 1-based input coordinate.
    Var(u8),
    Not(Box<Expr>),
    And(Box<Expr>, Box<Expr>),
    Xor(Box<Expr>, Box<Expr>),
    Or(Box<Expr>, Box<Expr>),
}

impl Expr {
    pub fn eval(&self, mu: StateVector) -> bool {
        match self {
            Expr::Const(b) => *b,
            Expr::Var(i) => mu.get(*i),
            Expr::Not(e) => !e.eval(mu),
            Expr::And(a, b) => a.eval(mu) && b.eval(mu),
            Expr::Xor(a, b) => a.eval(mu) ^ b.eval(mu),
            Expr::Or(a, b) => a.eval(mu) || b.eval(mu),
        }
    }

    fn precedence(&self) -> u8 {
        match self {
            Expr::Or(..) => 1,
            Expr::Xor(..) => 2,
            Expr::And(..) => 3,
            _ => 4,
        }
    }

    fn write(&self, out: &mut String, min: u8) {
        let prec = self.precedence();
        let wrap = prec < min;
        if wrap {
            out.push('(');
        }
        match self {
            Expr::Const(b) => out.push(if *b { '1' } else { '0' }),
            Expr::Var(i) => {
                let _ = write!(out, "x{i}");
            }
            Expr::Not(e) => {
                out.push('!');
                e.write(out, 4);
            }
            Expr::And(a, b) | Expr::Xor(a, b) | Expr::Or(a, b) => {
                let op = match self {
                    Expr::And(..) => " & ",
                    Expr::Xor(..) => " ^ ",
                    _ => " | ",
                };
                // left-associative: the right operand needs strictly tighter binding
                a.write(out, prec);
                out.push_str(op);
                b.write(out, prec + 1);
            }
        }
        if wrap {
            out.push(')');
        }
    }
}

impl fmt::Display for Expr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut s = String::new();
        self.write(&mut s, 0);
        f.write_str(&s)
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum ModelSource {
    /// `Φ(μ)` for every `μ`, indexed by packed state.
    Table,
    /// Expression for each output coordinate, coordinate 1 first.
    Expressions(Vec<Expr>),
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ModelDocument {
    pub name: Option<String>,
    pub source: ModelSource,
    pub function: TransitionFunction,
}

impl ModelDocument {
    pub fn arity(&self) -> u8 {
        self.function.arity()
    }

    pub fn from_function(name: Option<String>, function: TransitionFunction) -> Self {
        Self { name, source: ModelSource::Table, function }
    }

    pub fn display_name(&self) -> &str {
        self.name.as_deref().unwrap_or("model")
    }
}

impl fmt::Display for ModelDocument {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if let Some(name) = &self.name {
            writeln!(f, "name = {name}")?;
        }
        writeln!(f, "n = {}", self.arity())?;
        match &self.source {
            ModelSource::Table => {
                for mu in self.function.states() {
                    writeln!(f, "{mu} -> {}", self.function.apply(mu).expect("same arity"))?;
                }
            }
            ModelSource::Expressions(exprs) => {
                for (i, e) in exprs.iter().enumerate() {
                    writeln!(f, "y{} = {e}", i + 1)?;
                }
            }
        }
        Ok(())
    }
}

/// A line with its comment stripped, 1-based number, and the column offset
/// of its first retained character.
struct Line<'a> {
    number: usize,
    text: &'a str,
    offset: usize,
}

fn content_lines(text: &str) -> impl Iterator<Item = Line<'_>> {
    text.lines().enumerate().filter_map(|(i, raw)| {
        let body = raw.split('#').next().unwrap_or("");
        let trimmed = body.trim_start();
        let offset = body.len() - trimmed.len();
        let trimmed = trimmed.trim_end();
        (!trimmed.is_empty()).then_some(Line { number: i + 1, text: trimmed, offset })
    })
}

fn parse_bits(line: &Line<'_>, col: usize, word: &str, n: u8) -> Result<StateVector, ParseError> {
    if word.len() != n as usize {
        return Err(ParseError::new(line.number, col, format!("expected {n} bits, found `{word}`")));
    }
    word.parse().map_err(|_| ParseError::new(line.number, col, format!("invalid bit string `{word}`")))
}

pub fn parse_model(text: &str) -> Result<ModelDocument, ParseError> {
    let mut name = None;
    let mut arity: Option<(u8, usize)> = None;
    let mut rows: Vec<Option<u32>> = Vec::new();
    let mut exprs: Vec<Option<Expr>> = Vec::new();
    let mut kind: Option<bool> = None; // Some(true): table rows
    let mut last_line = 0;
    for line in content_lines(text) {
        last_line = line.number;
        let col = line.offset + 1;
        if let Some((key, value)) = line.text.split_once('=') {
            let key = key.trim();
            let value_col = col + line.text.len() - line.text[line.text.find('=').unwrap() + 1..].trim_start().len();
            let value = value.trim();
            if key == "name" {
                if name.is_some() {
                    return Err(ParseError::new(line.number, col, "duplicate `name`"));
                }
                name = Some(value.to_string());
                continue;
            }
            if key == "n" {
                if arity.is_some() {
                    return Err(ParseError::new(line.number, col, "duplicate header `n`"));
                }
                let n: u8 = value.parse().ok().filter(|&n| (1..=MAX_ARITY).contains(&n)).ok_or_else(|| {
                    ParseError::new(line.number, value_col, format!("arity must be an integer in 1..={MAX_ARITY}"))
                })?;
                arity = Some((n, line.number));
                rows = vec![None; 1 << n];
                exprs = vec![None; n as usize];
                continue;
            }
            let Some((n, _)) = arity else {
                return Err(ParseError::new(line.number, col, "missing header `n=<int>` before the body"));
            };
            let Some(i) = key.strip_prefix('y').and_then(|d| d.parse::<u8>().ok()) else {
                return Err(ParseError::new(line.number, col, format!("unknown binding `{key}`")));
            };
            if kind == Some(true) {
                return Err(ParseError::new(line.number, col, "cannot mix truth-table rows and expressions"));
            }
            kind = Some(false);
            if i == 0 || i > n {
                return Err(ParseError::new(line.number, col, format!("output y{i} outside y1..y{n}")));
            }
            if exprs[i as usize - 1].is_some() {
                return Err(ParseError::new(line.number, col, format!("y{i} is bound twice")));
            }
            let e = parse_expr(value, n).map_err(|(c, m)| ParseError::new(line.number, value_col + c, m))?;
            exprs[i as usize - 1] = Some(e);
            continue;
        }
        let Some((n, _)) = arity else {
            return Err(ParseError::new(line.number, col, "missing header `n=<int>` before the body"));
        };
        let Some((lhs, rhs)) = line.text.split_once("->") else {
            return Err(ParseError::new(line.number, col, "expected `<bits> -> <bits>` or `y<i> = <expr>`"));
        };
        if kind == Some(false) {
            return Err(ParseError::new(line.number, col, "cannot mix truth-table rows and expressions"));
        }
        kind = Some(true);
        let rhs_col = col + line.text.find("->").unwrap() + 2 + (rhs.len() - rhs.trim_start().len());
        let mu = parse_bits(&line, col, lhs.trim(), n)?;
        let y = parse_bits(&line, rhs_col, rhs.trim(), n)?;
        let slot = &mut rows[mu.bits() as usize];
        if slot.is_some() {
            return Err(ParseError::new(line.number, col, format!("duplicate row for {mu}")));
        }
        *slot = Some(y.bits());
    }
    let Some((n, header_line)) = arity else {
        return Err(ParseError::new(last_line.max(1), 1, "missing header `n=<int>`"));
    };
    let end = last_line.max(header_line);
    let (source, function) = match kind {
        Some(true) => {
            if let Some(missing) = rows.iter().position(Option::is_none) {
                let mu = StateVector::new(n, missing as u32).expect("in range");
                return Err(ParseError::new(end, 1, format!("missing row for {mu}")));
            }
            let table = rows.into_iter().map(Option::unwrap).collect();
            (ModelSource::Table, TransitionFunction::new(n, table).expect("validated"))
        }
        Some(false) => {
            if let Some(i) = exprs.iter().position(Option::is_none) {
                return Err(ParseError::new(end, 1, format!("output y{} is not bound", i + 1)));
            }
            let exprs: Vec<Expr> = exprs.into_iter().map(Option::unwrap).collect();
            let f = TransitionFunction::from_fn(n, |mu| {
                exprs.iter().enumerate().fold(StateVector::zeros(n), |acc, (i, e)| acc.with(i as u8 + 1, e.eval(mu)))
            })
            .expect("validated");
            (ModelSource::Expressions(exprs), f)
        }
        None => return Err(ParseError::new(end, 1, "model has no rows or bindings")),
    };
    Ok(ModelDocument { name, source, function })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
enum Tok {
    Var(u8),
    Const(bool),
    Not,
    And,
    Xor,
    Or,
    Open,
    Close,
}

/// Tokens with their 0-based byte columns.
fn lex(s: &str, n: u8) -> Result<Vec<(Tok, usize)>, (usize, String)> {
    let bytes = s.as_bytes();
    let mut out = Vec::new();
    let mut i = 0;
    while i < bytes.len() {
        let c = bytes[i];
        let tok = match c {
            b' ' | b'\t' => {
                i += 1;
                continue;
            }
            b'!' => Tok::Not,
            b'&' => Tok::And,
            b'^' => Tok::Xor,
            b'|' => Tok::Or,
            b'(' => Tok::Open,
            b')' => Tok::Close,
            b'0' => Tok::Const(false),
            b'1' => Tok::Const(true),
            b'x' => {
                let start = i;
                i += 1;
                let digits = bytes[i..].iter().take_while(|b| b.is_ascii_digit()).count();
                let num: Option<u8> = s[i..i + digits].parse().ok();
                i += digits;
                match num {
                    Some(k) if k >= 1 && k <= n => {
                        out.push((Tok::Var(k), start));
                        continue;
                    }
                    _ => return Err((start, format!("unknown variable `{}`; inputs are x1..x{n}", &s[start..i]))),
                }
            }
            _ => return Err((i, format!("unexpected character `{}`", s[i..].chars().next().unwrap()))),
        };
        out.push((tok, i));
        i += 1;
    }
    Ok(out)
}

struct ExprParser {
    toks: Vec<(Tok, usize)>,
    pos: usize,
    end: usize,
}

impl ExprParser {
    fn peek(&self) -> Option<Tok> {
        self.toks.get(self.pos).map(|t| t.0)
    }

    fn col(&self) -> usize {
        self.toks.get(self.pos).map_or(self.end, |t| t.1)
    }

    fn binary(
        &mut self,
        op: Tok,
        next: fn(&mut Self) -> Result<Expr, (usize, String)>,
        build: fn(Box<Expr>, Box<Expr>) -> Expr,
    ) -> Result<Expr, (usize, String)> {
        let mut lhs = next(self)?;
        while self.peek() == Some(op) {
            self.pos += 1;
            let rhs = next(self)?;
            lhs = build(Box::new(lhs), Box::new(rhs));
        }
        Ok(lhs)
    }

    fn or(&mut self) -> Result<Expr, (usize, String)> {
        self.binary(Tok::Or, Self::xor, Expr::Or)
    }

    fn xor(&mut self) -> Result<Expr, (usize, String)> {
        self.binary(Tok::Xor, Self::and, Expr::Xor)
    }

    fn and(&mut self) -> Result<Expr, (usize, String)> {
        self.binary(Tok::And, Self::unary, Expr::And)
    }

    fn unary(&mut self) -> Result<Expr, (usize, String)> {
        if self.peek() == Some(Tok::Not) {
            self.pos += 1;
            return Ok(Expr::Not(Box::new(self.unary()?)));
        }
        let e = self.atom()?;
        if matches!(self.peek(), Some(Tok::Var(_) | Tok::Const(_) | Tok::Open | Tok::Not)) {
            return Err((self.col(), "juxtaposition is not permitted; write `&` explicitly".into()));
        }
        Ok(e)
    }

    fn atom(&mut self) -> Result<Expr, (usize, String)> {
        let col = self.col();
        match self.peek() {
            Some(Tok::Var(i)) => {
                self.pos += 1;
                Ok(Expr::Var(i))
            }
            Some(Tok::Const(b)) => {
                self.pos += 1;
                Ok(Expr::Const(b))
            }
            Some(Tok::Open) => {
                self.pos += 1;
                let e = self.or()?;
                if self.peek() != Some(Tok::Close) {
                    return Err((self.col(), "expected `)`".into()));
                }
                self.pos += 1;
                Ok(e)
            }
            Some(_) => Err((col, "expected a variable, constant or `(`".into())),
            None => Err((col, "unexpected end of expression".into())),
        }
    }
}

/// Parses one expression over `x1..xn`; errors carry a 0-based column.
pub fn parse_expr(s: &str, n: u8) -> Result<Expr, (usize, String)> {
    let toks = lex(s, n)?;
    let mut p = ExprParser { toks, pos: 0, end: s.len() };
    let e = p.or()?;
    if p.pos != p.toks.len() {
        return Err((p.col(), "unexpected token".into()));
    }
    Ok(e)
}
