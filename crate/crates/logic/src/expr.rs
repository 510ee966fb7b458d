//! Functional-form propositional expressions.
//!
//! Grammar (whitespace insignificant, keywords case-sensitive):
//!
//! ```text
//! expr := ATOM | KIND '(' expr (',' expr)* ')'
//! KIND := And | Or | Not | Implies | Iff
//! ATOM := [A-Za-z_][A-Za-z0-9_]*
//! ```
//!
//! `Not` takes one argument, `Implies` and `Iff` two, `And` and `Or` two or more.

use std::fmt;

use thiserror::Error;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum OpKind {
    And,
    Or,
    Not,
    Implies,
    Iff,
}

impl OpKind {
    fn from_keyword(word: &str) -> Option<Self> {
        Some(match word {
            "And" => OpKind::And,
            "Or" => OpKind::Or,
            "Not" => OpKind::Not,
            "Implies" => OpKind::Implies,
            "Iff" => OpKind::Iff,
            _ => return None,
        })
    }

    pub fn keyword(self) -> &'static str {
        match self {
            OpKind::And => "And",
            OpKind::Or => "Or",
            OpKind::Not => "Not",
            OpKind::Implies => "Implies",
            OpKind::Iff => "Iff",
        }
    }

    fn arity_ok(self, n: usize) -> bool {
        match self {
            OpKind::Not => n == 1,
            OpKind::Implies | OpKind::Iff => n == 2,
            OpKind::And | OpKind::Or => n >= 2,
        }
    }

    fn arity_text(self) -> &'static str {
        match self {
            OpKind::Not => "exactly 1",
            OpKind::Implies | OpKind::Iff => "exactly 2",
            OpKind::And | OpKind::Or => "at least 2",
        }
    }
}

impl fmt::Display for OpKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.keyword())
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum LogicalExpr {
    Atom(String),
    Not(Box<LogicalExpr>),
    And(Vec<LogicalExpr>),
    Or(Vec<LogicalExpr>),
    Implies(Box<LogicalExpr>, Box<LogicalExpr>),
    Iff(Box<LogicalExpr>, Box<LogicalExpr>),
}

impl LogicalExpr {
    pub fn atom(name: impl Into<String>) -> Self {
        LogicalExpr::Atom(name.into())
    }

    #[allow(clippy::should_implement_trait)]
    pub fn not(e: LogicalExpr) -> Self {
        LogicalExpr::Not(Box::new(e))
    }

    pub fn implies(a: LogicalExpr, b: LogicalExpr) -> Self {
        LogicalExpr::Implies(Box::new(a), Box::new(b))
    }

    pub fn iff(a: LogicalExpr, b: LogicalExpr) -> Self {
        LogicalExpr::Iff(Box::new(a), Box::new(b))
    }

    /// Conjunction of `parts`; a single part is returned unchanged. Panics on an empty list.
    pub fn conjunction(mut parts: Vec<LogicalExpr>) -> Self {
        assert!(!parts.is_empty(), "conjunction of nothing");
        if parts.len() == 1 {
            parts.pop().unwrap()
        } else {
            LogicalExpr::And(parts)
        }
    }

    /// Atom names in first-appearance (left-to-right preorder) order, without repeats.
    pub fn atoms(&self) -> Vec<&str> {
        let mut out: Vec<&str> = Vec::new();
        self.visit_atoms(&mut |name| {
            if !out.contains(&name) {
                out.push(name);
            }
        });
        out
    }

    pub fn visit_atoms<'a>(&'a self, f: &mut impl FnMut(&'a str)) {
        match self {
            LogicalExpr::Atom(name) => f(name),
            LogicalExpr::Not(e) => e.visit_atoms(f),
            LogicalExpr::And(es) | LogicalExpr::Or(es) => es.iter().for_each(|e| e.visit_atoms(f)),
            LogicalExpr::Implies(a, b) | LogicalExpr::Iff(a, b) => {
                a.visit_atoms(f);
                b.visit_atoms(f);
            }
        }
    }

    /// Renames atoms in place.
    pub fn rename_atoms(&mut self, f: &impl Fn(&str) -> Option<String>) {
        match self {
            LogicalExpr::Atom(name) => {
                if let Some(new) = f(name) {
                    *name = new;
                }
            }
            LogicalExpr::Not(e) => e.rename_atoms(f),
            LogicalExpr::And(es) | LogicalExpr::Or(es) => {
                es.iter_mut().for_each(|e| e.rename_atoms(f))
            }
            LogicalExpr::Implies(a, b) | LogicalExpr::Iff(a, b) => {
                a.rename_atoms(f);
                b.rename_atoms(f);
            }
        }
    }

    /// Truth value under `value_of(atom)`.
    pub fn eval(&self, value_of: &impl Fn(&str) -> bool) -> bool {
        match self {
            LogicalExpr::Atom(name) => value_of(name),
            LogicalExpr::Not(e) => !e.eval(value_of),
            LogicalExpr::And(es) => es.iter().all(|e| e.eval(value_of)),
            LogicalExpr::Or(es) => es.iter().any(|e| e.eval(value_of)),
            LogicalExpr::Implies(a, b) => !a.eval(value_of) || b.eval(value_of),
            LogicalExpr::Iff(a, b) => a.eval(value_of) == b.eval(value_of),
        }
    }

    pub fn depth(&self) -> usize {
        match self {
            LogicalExpr::Atom(_) => 1,
            LogicalExpr::Not(e) => 1 + e.depth(),
            LogicalExpr::And(es) | LogicalExpr::Or(es) => {
                1 + es.iter().map(LogicalExpr::depth).max().unwrap_or(0)
            }
            LogicalExpr::Implies(a, b) | LogicalExpr::Iff(a, b) => 1 + a.depth().max(b.depth()),
        }
    }
}

impl fmt::Display for LogicalExpr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fn list(f: &mut fmt::Formatter<'_>, kind: &str, es: &[&LogicalExpr]) -> fmt::Result {
            write!(f, "{kind}(")?;
            for (i, e) in es.iter().enumerate() {
                if i > 0 {
                    write!(f, ", ")?;
                }
                write!(f, "{e}")?;
            }
            write!(f, ")")
        }
        match self {
            LogicalExpr::Atom(name) => f.write_str(name),
            LogicalExpr::Not(e) => list(f, "Not", &[e]),
            LogicalExpr::And(es) => list(f, "And", &es.iter().collect::<Vec<_>>()),
            LogicalExpr::Or(es) => list(f, "Or", &es.iter().collect::<Vec<_>>()),
            LogicalExpr::Implies(a, b) => list(f, "Implies", &[a, b]),
            LogicalExpr::Iff(a, b) => list(f, "Iff", &[a, b]),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ParseError {
    #[error("syntax error at byte {offset}: {message}")]
    Syntax { offset: usize, message: String },
    #[error("{kind} at byte {offset} takes {expected} argument(s), got {found}")]
    Arity {
        kind: OpKind,
        offset: usize,
        expected: &'static str,
        found: usize,
    },
}

struct Parser<'a> {
    src: &'a str,
    pos: usize,
}

impl<'a> Parser<'a> {
    fn skip_ws(&mut self) {
        let rest = &self.src[self.pos..];
        self.pos += rest.len() - rest.trim_start().len();
    }

    fn peek(&mut self) -> Option<char> {
        self.skip_ws();
        self.src[self.pos..].chars().next()
    }

    fn error(&self, offset: usize, message: impl Into<String>) -> ParseError {
        ParseError::Syntax {
            offset,
            message: message.into(),
        }
    }

    fn expect(&mut self, c: char) -> Result<(), ParseError> {
        match self.peek() {
            Some(got) if got == c => {
                self.pos += c.len_utf8();
                Ok(())
            }
            Some(got) => Err(self.error(self.pos, format!("expected `{c}`, found `{got}`"))),
            None => Err(self.error(self.pos, format!("expected `{c}`, found end of input"))),
        }
    }

    fn ident(&mut self) -> Result<(usize, &'a str), ParseError> {
        self.skip_ws();
        let start = self.pos;
        let rest = &self.src[start..];
        let mut end = 0;
        for (i, c) in rest.char_indices() {
            let ok = if i == 0 {
                c.is_ascii_alphabetic() || c == '_'
            } else {
                c.is_ascii_alphanumeric() || c == '_'
            };
            if !ok {
                break;
            }
            end = i + c.len_utf8();
        }
        if end == 0 {
            return Err(match rest.chars().next() {
                Some(c) => self.error(start, format!("expected an atom or operator, found `{c}`")),
                None => self.error(start, "expected an atom or operator, found end of input"),
            });
        }
        self.pos = start + end;
        Ok((start, &rest[..end]))
    }

    fn expr(&mut self) -> Result<LogicalExpr, ParseError> {
        let (start, word) = self.ident()?;
        let kind = OpKind::from_keyword(word);
        if self.peek() != Some('(') {
            return match kind {
                Some(k) => Err(self.error(self.pos, format!("expected `(` after {k}"))),
                None => Ok(LogicalExpr::Atom(word.to_string())),
            };
        }
        let Some(kind) = kind else {
            return Err(self.error(start, format!("unknown operator `{word}`")));
        };
        self.expect('(')?;
        let mut args = vec![self.expr()?];
        while self.peek() == Some(',') {
            self.pos += 1;
            args.push(self.expr()?);
        }
        self.expect(')')?;
        if !kind.arity_ok(args.len()) {
            return Err(ParseError::Arity {
                kind,
                offset: start,
                expected: kind.arity_text(),
                found: args.len(),
            });
        }
        let mut it = args.into_iter();
        Ok(match kind {
            OpKind::Not => LogicalExpr::not(it.next().unwrap()),
            OpKind::Implies => LogicalExpr::implies(it.next().unwrap(), it.next().unwrap()),
            OpKind::Iff => LogicalExpr::iff(it.next().unwrap(), it.next().unwrap()),
            OpKind::And => LogicalExpr::And(it.collect()),
            OpKind::Or => LogicalExpr::Or(it.collect()),
        })
    }
}

/// Parses one functional-form expression.
pub fn parse_expression(line: &str) -> Result<LogicalExpr, ParseError> {
    let mut p = Parser { src: line, pos: 0 };
    let e = p.expr()?;
    if let Some(c) = p.peek() {
        return Err(p.error(p.pos, format!("unexpected trailing `{c}`")));
    }
    Ok(e)
}
