//! MELL formulas and linear negation.
//!
//! Grammar used by the net file format: atoms are identifiers, `^` is the
//! postfix dual on atoms, `*` is tensor, `@` is par, `!`/`?` are prefixes,
//! with parentheses for grouping. Prefixes bind tightest, then `*`, then `@`;
//! the binary connectives associate to the left.

use serde::{Deserialize, Serialize};
use std::fmt;
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum Formula {
    Atom(String),
    DualAtom(String),
    Tensor(Box<Formula>, Box<Formula>),
    Par(Box<Formula>, Box<Formula>),
    OfCourse(Box<Formula>),
    WhyNot(Box<Formula>),
}

impl Formula {
    pub fn atom(s: impl Into<String>) -> Self {
        Formula::Atom(s.into())
    }

    pub fn tensor(a: Formula, b: Formula) -> Self {
        Formula::Tensor(Box::new(a), Box::new(b))
    }

    pub fn par(a: Formula, b: Formula) -> Self {
        Formula::Par(Box::new(a), Box::new(b))
    }

    pub fn of_course(a: Formula) -> Self {
        Formula::OfCourse(Box::new(a))
    }

    pub fn why_not(a: Formula) -> Self {
        Formula::WhyNot(Box::new(a))
    }

    /// Linear negation, by De Morgan: `(A ⊗ B)^⊥ = A^⊥ ⅋ B^⊥` and
    /// `(!A)^⊥ = ?A^⊥`.
    pub fn dual(&self) -> Formula {
        match self {
            Formula::Atom(a) => Formula::DualAtom(a.clone()),
            Formula::DualAtom(a) => Formula::Atom(a.clone()),
            Formula::Tensor(a, b) => Formula::par(a.dual(), b.dual()),
            Formula::Par(a, b) => Formula::tensor(a.dual(), b.dual()),
            Formula::OfCourse(a) => Formula::why_not(a.dual()),
            Formula::WhyNot(a) => Formula::of_course(a.dual()),
        }
    }
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
#[error("formula syntax error at byte {at}: {msg}")]
pub struct FormulaParseError {
    pub at: usize,
    pub msg: String,
}

struct Parser<'a> {
    src: &'a str,
    pos: usize,
}

impl<'a> Parser<'a> {
    fn err(&self, msg: impl Into<String>) -> FormulaParseError {
        FormulaParseError { at: self.pos, msg: msg.into() }
    }

    fn skip_ws(&mut self) {
        while self.src[self.pos..].starts_with(|c: char| c.is_whitespace()) {
            self.pos += 1;
        }
    }

    fn peek(&mut self) -> Option<char> {
        self.skip_ws();
        self.src[self.pos..].chars().next()
    }

    fn bump(&mut self) -> Option<char> {
        let c = self.peek()?;
        self.pos += c.len_utf8();
        Some(c)
    }

    // par level (loosest)
    fn formula(&mut self) -> Result<Formula, FormulaParseError> {
        let mut lhs = self.tensor_level()?;
        while self.peek() == Some('@') {
            self.bump();
            let rhs = self.tensor_level()?;
            lhs = Formula::par(lhs, rhs);
        }
        Ok(lhs)
    }

    fn tensor_level(&mut self) -> Result<Formula, FormulaParseError> {
        let mut lhs = self.prefix_level()?;
        while self.peek() == Some('*') {
            self.bump();
            let rhs = self.prefix_level()?;
            lhs = Formula::tensor(lhs, rhs);
        }
        Ok(lhs)
    }

    fn prefix_level(&mut self) -> Result<Formula, FormulaParseError> {
        match self.peek() {
            Some('!') => {
                self.bump();
                Ok(Formula::of_course(self.prefix_level()?))
            }
            Some('?') => {
                self.bump();
                Ok(Formula::why_not(self.prefix_level()?))
            }
            Some('(') => {
                self.bump();
                let f = self.formula()?;
                if self.peek() != Some(')') {
                    return Err(self.err("expected ')'"));
                }
                self.bump();
                Ok(f)
            }
            Some(c) if c.is_alphanumeric() || c == '_' => {
                let start = self.pos;
                while self.src[self.pos..]
                    .starts_with(|c: char| c.is_alphanumeric() || c == '_')
                {
                    self.pos += 1;
                }
                let ident = self.src[start..self.pos].to_string();
                if self.src[self.pos..].starts_with('^') {
                    self.pos += 1;
                    Ok(Formula::DualAtom(ident))
                } else {
                    Ok(Formula::Atom(ident))
                }
            }
            Some(c) => Err(self.err(format!("unexpected character '{c}'"))),
            None => Err(self.err("unexpected end of formula")),
        }
    }
}

pub fn parse_formula(src: &str) -> Result<Formula, FormulaParseError> {
    let mut p = Parser { src, pos: 0 };
    let f = p.formula()?;
    p.skip_ws();
    if p.pos != src.len() {
        return Err(p.err("trailing input after formula"));
    }
    Ok(f)
}

impl fmt::Display for Formula {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        // precedence: 0 par, 1 tensor, 2 prefix/atom
        fn go(x: &Formula, prec: u8, f: &mut fmt::Formatter<'_>) -> fmt::Result {
            match x {
                Formula::Atom(a) => write!(f, "{a}"),
                Formula::DualAtom(a) => write!(f, "{a}^"),
                Formula::Tensor(a, b) => {
                    if prec > 1 {
                        write!(f, "(")?;
                    }
                    go(a, 1, f)?;
                    write!(f, " * ")?;
                    go(b, 2, f)?;
                    if prec > 1 {
                        write!(f, ")")?;
                    }
                    Ok(())
                }
                Formula::Par(a, b) => {
                    if prec > 0 {
                        write!(f, "(")?;
                    }
                    go(a, 0, f)?;
                    write!(f, " @ ")?;
                    go(b, 1, f)?;
                    if prec > 0 {
                        write!(f, ")")?;
                    }
                    Ok(())
                }
                Formula::OfCourse(a) => {
                    write!(f, "!")?;
                    go(a, 2, f)
                }
                Formula::WhyNot(a) => {
                    write!(f, "?")?;
                    go(a, 2, f)
                }
            }
        }
        go(self, 0, f)
    }
}
