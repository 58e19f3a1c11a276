use std::collections::BTreeSet;
use std::fmt;

use super::{Constraint, Formula, FormulaKind, Rel, Span};

#[derive(Clone, Debug, PartialEq, Eq, thiserror::Error)]
#[error("{kind} at byte {position}")]
pub struct ParseError {
    pub position: usize,
    pub kind: ParseErrorKind,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum ParseErrorKind {
    UnknownToken(char),
    Unexpected { found: String, expected: &'static str },
    UnexpectedEnd { expected: &'static str },
    ZeroModulus,
    IntegerOutOfRange,
}

impl fmt::Display for ParseErrorKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ParseErrorKind::UnknownToken(c) => write!(f, "unknown token {c:?}"),
            ParseErrorKind::Unexpected { found, expected } => {
                write!(f, "expected {expected}, found {found}")
            }
            ParseErrorKind::UnexpectedEnd { expected } => {
                write!(f, "expected {expected}, found end of input")
            }
            ParseErrorKind::ZeroModulus => f.write_str("modulus must be at least 1"),
            ParseErrorKind::IntegerOutOfRange => f.write_str("integer out of range"),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
enum Tok {
    LParen,
    RParen,
    CoalOpen,
    CoalClose,
    Comma,
    Not,
    And,
    Or,
    Implies,
    Lt,
    Le,
    Eq,
    Gt,
    Ge,
    Int(i64),
    Word(String),
}

impl fmt::Display for Tok {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            Tok::LParen => "'('",
            Tok::RParen => "')'",
            Tok::CoalOpen => "'<<'",
            Tok::CoalClose => "'>>'",
            Tok::Comma => "','",
            Tok::Not => "'!'",
            Tok::And => "'&'",
            Tok::Or => "'|'",
            Tok::Implies => "'->'",
            Tok::Lt => "'<'",
            Tok::Le => "'<='",
            Tok::Eq => "'='",
            Tok::Gt => "'>'",
            Tok::Ge => "'>='",
            Tok::Int(i) => return write!(f, "integer {i}"),
            Tok::Word(w) => return write!(f, "{w:?}"),
        };
        f.write_str(s)
    }
}

fn lex(src: &str) -> Result<Vec<(Tok, Span)>, ParseError> {
    let bytes = src.as_bytes();
    let mut out = Vec::new();
    let mut i = 0;
    while i < bytes.len() {
        let c = bytes[i];
        let start = i;
        let two = |t: &[u8]| bytes[i..].starts_with(t);
        let tok = if c.is_ascii_whitespace() {
            i += 1;
            continue;
        } else if two(b"<<") {
            i += 2;
            Tok::CoalOpen
        } else if two(b">>") {
            i += 2;
            Tok::CoalClose
        } else if two(b"<=") {
            i += 2;
            Tok::Le
        } else if two(b">=") {
            i += 2;
            Tok::Ge
        } else if two(b"->") {
            i += 2;
            Tok::Implies
        } else if c == b'-' || c.is_ascii_digit() {
            let neg = c == b'-';
            if neg {
                i += 1;
            }
            let digits = i;
            while i < bytes.len() && bytes[i].is_ascii_digit() {
                i += 1;
            }
            if digits == i {
                return Err(ParseError { position: start, kind: ParseErrorKind::UnknownToken('-') });
            }
            let value: i64 = src[start..i].parse().map_err(|_| ParseError {
                position: start,
                kind: ParseErrorKind::IntegerOutOfRange,
            })?;
            Tok::Int(value)
        } else if c.is_ascii_alphabetic() || c == b'_' {
            while i < bytes.len() && (bytes[i].is_ascii_alphanumeric() || bytes[i] == b'_') {
                i += 1;
            }
            Tok::Word(src[start..i].to_string())
        } else {
            i += 1;
            match c {
                b'(' => Tok::LParen,
                b')' => Tok::RParen,
                b',' => Tok::Comma,
                b'!' => Tok::Not,
                b'&' => Tok::And,
                b'|' => Tok::Or,
                b'<' => Tok::Lt,
                b'>' => Tok::Gt,
                b'=' => Tok::Eq,
                _ => {
                    let ch = src[start..].chars().next().unwrap_or('\u{fffd}');
                    return Err(ParseError { position: start, kind: ParseErrorKind::UnknownToken(ch) });
                }
            }
        };
        out.push((tok, Span::new(start, i)));
    }
    Ok(out)
}

/// Words with a fixed meaning; they cannot be used as proposition names.
pub(crate) const KEYWORDS: [&str; 8] = ["X", "U", "F", "G", "r", "mod", "true", "false"];

struct Parser {
    toks: Vec<(Tok, Span)>,
    pos: usize,
    len: usize,
}

impl Parser {
    fn peek(&self) -> Option<&Tok> {
        self.toks.get(self.pos).map(|(t, _)| t)
    }

    fn peek_word(&self, w: &str) -> bool {
        matches!(self.peek(), Some(Tok::Word(x)) if x == w)
    }

    fn bump(&mut self) -> Option<(Tok, Span)> {
        let t = self.toks.get(self.pos).cloned();
        if t.is_some() {
            self.pos += 1;
        }
        t
    }

    fn error(&self, expected: &'static str) -> ParseError {
        match self.toks.get(self.pos) {
            Some((t, span)) => ParseError {
                position: span.start,
                kind: ParseErrorKind::Unexpected { found: t.to_string(), expected },
            },
            None => ParseError { position: self.len, kind: ParseErrorKind::UnexpectedEnd { expected } },
        }
    }

    fn expect(&mut self, tok: Tok, expected: &'static str) -> Result<Span, ParseError> {
        match self.toks.get(self.pos) {
            Some((t, span)) if *t == tok => {
                let span = *span;
                self.pos += 1;
                Ok(span)
            }
            _ => Err(self.error(expected)),
        }
    }

    fn implies(&mut self) -> Result<Formula, ParseError> {
        let lhs = self.or()?;
        if self.peek() == Some(&Tok::Implies) {
            self.bump();
            let rhs = self.implies()?;
            let span = lhs.span.join(rhs.span);
            return Ok(Formula::with_span(FormulaKind::Implies(Box::new(lhs), Box::new(rhs)), span));
        }
        Ok(lhs)
    }

    fn or(&mut self) -> Result<Formula, ParseError> {
        let mut lhs = self.and()?;
        while self.peek() == Some(&Tok::Or) {
            self.bump();
            let rhs = self.and()?;
            let span = lhs.span.join(rhs.span);
            lhs = Formula::with_span(FormulaKind::Or(Box::new(lhs), Box::new(rhs)), span);
        }
        Ok(lhs)
    }

    fn and(&mut self) -> Result<Formula, ParseError> {
        let mut lhs = self.until()?;
        while self.peek() == Some(&Tok::And) {
            self.bump();
            let rhs = self.until()?;
            let span = lhs.span.join(rhs.span);
            lhs = Formula::with_span(FormulaKind::And(Box::new(lhs), Box::new(rhs)), span);
        }
        Ok(lhs)
    }

    fn until(&mut self) -> Result<Formula, ParseError> {
        let lhs = self.unary()?;
        if self.peek_word("U") {
            self.bump();
            let rhs = self.until()?;
            let span = lhs.span.join(rhs.span);
            return Ok(Formula::with_span(FormulaKind::Until(Box::new(lhs), Box::new(rhs)), span));
        }
        Ok(lhs)
    }

    fn unary(&mut self) -> Result<Formula, ParseError> {
        let Some((tok, span)) = self.toks.get(self.pos).cloned() else {
            return Err(self.error("a formula"));
        };
        let wrap = |p: &mut Self, make: fn(Box<Formula>) -> FormulaKind| -> Result<Formula, ParseError> {
            p.bump();
            let sub = p.unary()?;
            let sp = span.join(sub.span);
            Ok(Formula::with_span(make(Box::new(sub)), sp))
        };
        match tok {
            Tok::Not => wrap(self, FormulaKind::Not),
            Tok::Word(w) if w == "X" => wrap(self, FormulaKind::Next),
            Tok::Word(w) if w == "F" => wrap(self, FormulaKind::Finally),
            Tok::Word(w) if w == "G" => wrap(self, FormulaKind::Globally),
            Tok::CoalOpen => {
                self.bump();
                let mut agents = BTreeSet::new();
                if self.peek() != Some(&Tok::CoalClose) {
                    loop {
                        match self.peek() {
                            Some(Tok::Word(a)) => {
                                agents.insert(a.clone());
                                self.bump();
                            }
                            _ => return Err(self.error("an agent name")),
                        }
                        if self.peek() == Some(&Tok::Comma) {
                            self.bump();
                        } else {
                            break;
                        }
                    }
                }
                self.expect(Tok::CoalClose, "'>>'")?;
                let sub = self.unary()?;
                let sp = span.join(sub.span);
                Ok(Formula::with_span(FormulaKind::Coalition(agents, Box::new(sub)), sp))
            }
            _ => self.atom(),
        }
    }

    fn int(&mut self) -> Result<(i64, Span), ParseError> {
        match self.toks.get(self.pos).cloned() {
            Some((Tok::Int(v), span)) => {
                self.pos += 1;
                Ok((v, span))
            }
            _ => Err(self.error("an integer")),
        }
    }

    fn atom(&mut self) -> Result<Formula, ParseError> {
        let Some((tok, span)) = self.toks.get(self.pos).cloned() else {
            return Err(self.error("a formula"));
        };
        match tok {
            Tok::LParen => {
                self.bump();
                let inner = self.implies()?;
                let close = self.expect(Tok::RParen, "')'")?;
                Ok(Formula::with_span(inner.kind, span.join(close)))
            }
            Tok::Word(w) if w == "true" || w == "false" => {
                self.bump();
                Ok(Formula::with_span(FormulaKind::Bool(w == "true"), span))
            }
            Tok::Word(w) if w == "r" => {
                self.bump();
                if self.peek_word("mod") {
                    self.bump();
                    let (k, kspan) = self.int()?;
                    if k == 0 {
                        return Err(ParseError { position: kspan.start, kind: ParseErrorKind::ZeroModulus });
                    }
                    if k < 0 {
                        return Err(ParseError {
                            position: kspan.start,
                            kind: ParseErrorKind::Unexpected { found: format!("integer {k}"), expected: "a positive modulus" },
                        });
                    }
                    self.expect(Tok::Eq, "'='")?;
                    let (c, cspan) = self.int()?;
                    return Ok(Formula::with_span(
                        FormulaKind::Constraint(Constraint::modulo(c, k as u64)),
                        span.join(cspan),
                    ));
                }
                let rel = match self.peek() {
                    Some(Tok::Lt) => Rel::Lt,
                    Some(Tok::Le) => Rel::Le,
                    Some(Tok::Eq) => Rel::Eq,
                    Some(Tok::Gt) => Rel::Gt,
                    Some(Tok::Ge) => Rel::Ge,
                    _ => return Err(self.error("a comparison or 'mod' after 'r'")),
                };
                self.bump();
                let (c, cspan) = self.int()?;
                Ok(Formula::with_span(FormulaKind::Constraint(Constraint::new(rel, c)), span.join(cspan)))
            }
            Tok::Word(w) if !KEYWORDS.contains(&w.as_str()) => {
                self.bump();
                Ok(Formula::with_span(FormulaKind::Prop(w), span))
            }
            _ => Err(self.error("a proposition, constraint or '('")),
        }
    }
}

/// Parses the ASCII concrete syntax.
///
/// Precedence, tightest first: unary operators (`!`, `X`, `F`, `G`, `<<A>>`), `U`
/// (right-associative), `&`, `|`, `->` (right-associative).
pub fn parse(text: &str) -> Result<Formula, ParseError> {
    let toks = lex(text)?;
    let mut p = Parser { toks, pos: 0, len: text.len() };
    let f = p.implies()?;
    if p.pos != p.toks.len() {
        return Err(p.error("end of input"));
    }
    Ok(f)
}
