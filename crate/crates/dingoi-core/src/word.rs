//! Words of the weight monoid.
//!
//! Generators: the multiplicatives `p`, `q`; the exponential pair `r`, `s`
//! in both polarities; named derelictions `d?[a]` / `d![a]`; and the
//! branch-tracking family `u[a]`, `v[a]`, `e[a]`. `t` and `b` only appear in
//! the promotion extension. A star suffix marks the inverse, written after
//! the polarity and before the name bracket: `d!*[g]`, `r?*`, `v*[b]`.
//!
//! The empty word prints as `1`, the absorbing zero as `0`.

use crate::name::{Name, Polarity};
use serde::{Deserialize, Serialize};
use std::fmt;
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum Gen {
    P,
    Q,
    R(Polarity),
    S(Polarity),
    D(Name, Polarity),
    U(Name),
    V(Name),
    E(Name),
    /// Promotion operator (extension only).
    T,
    /// Box operator (extension only).
    B,
}

impl Gen {
    pub fn name(&self) -> Option<&Name> {
        match self {
            Gen::D(n, _) | Gen::U(n) | Gen::V(n) | Gen::E(n) => Some(n),
            _ => None,
        }
    }

    /// Multiplicative/exponential letters (the `pme` sub-monoid).
    pub fn is_pme(&self) -> bool {
        matches!(self, Gen::P | Gen::Q | Gen::R(_) | Gen::S(_) | Gen::D(..))
    }

    /// Branch letters (the `pa` sub-monoid).
    pub fn is_pa(&self) -> bool {
        matches!(self, Gen::U(_) | Gen::V(_) | Gen::E(_))
    }
}

#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct Lit {
    pub gen: Gen,
    pub star: bool,
}

impl Lit {
    pub fn new(gen: Gen) -> Self {
        Lit { gen, star: false }
    }

    pub fn starred(gen: Gen) -> Self {
        Lit { gen, star: true }
    }

    pub fn star(&self) -> Lit {
        Lit {
            gen: self.gen.clone(),
            star: !self.star,
        }
    }
}

impl fmt::Display for Lit {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let star = if self.star { "*" } else { "" };
        match &self.gen {
            Gen::P => write!(f, "p{star}"),
            Gen::Q => write!(f, "q{star}"),
            Gen::R(t) => write!(f, "r{t}{star}"),
            Gen::S(t) => write!(f, "s{t}{star}"),
            Gen::D(n, t) => write!(f, "d{t}{star}[{n}]"),
            Gen::U(n) => write!(f, "u{star}[{n}]"),
            Gen::V(n) => write!(f, "v{star}[{n}]"),
            Gen::E(n) => write!(f, "e{star}[{n}]"),
            Gen::T => write!(f, "t{star}"),
            Gen::B => write!(f, "b{star}"),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum Word {
    Zero,
    Lits(Vec<Lit>),
}

impl Word {
    pub fn one() -> Word {
        Word::Lits(Vec::new())
    }

    pub fn zero() -> Word {
        Word::Zero
    }

    pub fn lit(l: Lit) -> Word {
        Word::Lits(vec![l])
    }

    pub fn from_lits(lits: Vec<Lit>) -> Word {
        Word::Lits(lits)
    }

    pub fn lits(&self) -> Option<&[Lit]> {
        match self {
            Word::Zero => None,
            Word::Lits(ls) => Some(ls),
        }
    }

    pub fn len(&self) -> usize {
        match self {
            Word::Zero => 0,
            Word::Lits(ls) => ls.len(),
        }
    }

    pub fn is_empty(&self) -> bool {
        matches!(self, Word::Lits(ls) if ls.is_empty())
    }

    /// Monoid product; zero absorbs.
    pub fn mul(&self, other: &Word) -> Word {
        match (self, other) {
            (Word::Zero, _) | (_, Word::Zero) => Word::Zero,
            (Word::Lits(a), Word::Lits(b)) => {
                let mut out = a.clone();
                out.extend(b.iter().cloned());
                Word::Lits(out)
            }
        }
    }

    /// The involution: reverse the word and star every literal.
    pub fn star(&self) -> Word {
        match self {
            Word::Zero => Word::Zero,
            Word::Lits(ls) => Word::Lits(ls.iter().rev().map(Lit::star).collect()),
        }
    }

    /// Names occurring in the word's literals.
    pub fn names(&self) -> Vec<Name> {
        let mut out = Vec::new();
        if let Word::Lits(ls) = self {
            for l in ls {
                if let Some(n) = l.gen.name() {
                    if !out.contains(n) {
                        out.push(n.clone());
                    }
                }
            }
        }
        out
    }
}

impl fmt::Display for Word {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Word::Zero => write!(f, "0"),
            Word::Lits(ls) if ls.is_empty() => write!(f, "1"),
            Word::Lits(ls) => {
                let parts: Vec<String> = ls.iter().map(|l| l.to_string()).collect();
                write!(f, "{}", parts.join(" "))
            }
        }
    }
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
#[error("word syntax error in '{token}': {msg}")]
pub struct WordParseError {
    pub token: String,
    pub msg: String,
}

fn parse_lit(tok: &str) -> Result<Lit, WordParseError> {
    let err = |msg: &str| WordParseError {
        token: tok.to_string(),
        msg: msg.to_string(),
    };
    let mut chars = tok.chars();
    let head = chars.next().ok_or_else(|| err("empty literal"))?;
    let rest: String = chars.collect();
    let (mut body, name) = match rest.find('[') {
        Some(i) => {
            if !rest.ends_with(']') {
                return Err(err("missing ']'"));
            }
            (
                rest[..i].to_string(),
                Some(Name::from(&rest[i + 1..rest.len() - 1])),
            )
        }
        None => (rest, None),
    };
    let star = body.ends_with('*');
    if star {
        body.pop();
    }
    let pol = match body.as_str() {
        "" => None,
        "?" => Some(Polarity::WhyNot),
        "!" => Some(Polarity::OfCourse),
        other => return Err(err(&format!("unexpected modifier '{other}'"))),
    };
    let gen = match (head, pol, name) {
        ('p', None, None) => Gen::P,
        ('q', None, None) => Gen::Q,
        ('r', Some(t), None) => Gen::R(t),
        ('s', Some(t), None) => Gen::S(t),
        ('d', Some(t), Some(n)) => Gen::D(n, t),
        ('u', None, Some(n)) => Gen::U(n),
        ('v', None, Some(n)) => Gen::V(n),
        ('e', None, Some(n)) => Gen::E(n),
        ('t', None, None) => Gen::T,
        ('b', None, None) => Gen::B,
        _ => return Err(err("unknown literal")),
    };
    Ok(Lit { gen, star })
}

/// Parse a whitespace-separated word. `0` anywhere makes the word zero,
/// `1` is the empty word.
pub fn parse_word(src: &str) -> Result<Word, WordParseError> {
    let mut lits = Vec::new();
    for tok in src.split_whitespace() {
        if tok == "0" {
            return Ok(Word::Zero);
        }
        if tok == "1" {
            continue;
        }
        lits.push(parse_lit(tok)?);
    }
    Ok(Word::Lits(lits))
}

#[cfg(test)]
pub(crate) mod strategies {
    use super::*;
    use proptest::prelude::*;

    pub fn arb_lit(names: &'static [&'static str]) -> BoxedStrategy<Lit> {
        let name = proptest::sample::select(names.to_vec()).prop_map(Name::from);
        let pol = prop_oneof![Just(Polarity::WhyNot), Just(Polarity::OfCourse)];
        let gen = prop_oneof![
            Just(Gen::P),
            Just(Gen::Q),
            pol.clone().prop_map(Gen::R),
            pol.clone().prop_map(Gen::S),
            (name.clone(), pol).prop_map(|(n, t)| Gen::D(n, t)),
            name.clone().prop_map(Gen::U),
            name.clone().prop_map(Gen::V),
            name.prop_map(Gen::E),
        ];
        (gen, any::<bool>())
            .prop_map(|(gen, star)| Lit { gen, star })
            .boxed()
    }

    pub fn arb_word(max_len: usize) -> BoxedStrategy<Word> {
        proptest::collection::vec(arb_lit(&["a", "b"]), 0..=max_len)
            .prop_map(Word::Lits)
            .boxed()
    }
}

#[cfg(test)]
mod tests {
    use super::strategies::arb_word;
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn star_reverses_literals() {
        // star of d!*[g] s!* r? d?[a] is d?*[a] r?* s! d![g]
        let w = parse_word("d!*[g] s!* r? d?[a]").unwrap();
        let expect = parse_word("d?*[a] r?* s! d![g]").unwrap();
        assert_eq!(w.star(), expect);
    }

    #[test]
    fn zero_absorbs() {
        let w = parse_word("p q").unwrap();
        assert_eq!(w.mul(&Word::Zero), Word::Zero);
        assert_eq!(Word::Zero.mul(&w), Word::Zero);
    }

    proptest! {
        #[test]
        fn star_is_involutive(w in arb_word(12)) {
            prop_assert_eq!(w.star().star(), w);
        }

        #[test]
        fn print_parse_round_trip(w in arb_word(12)) {
            let printed = w.to_string();
            prop_assert_eq!(parse_word(&printed).unwrap(), w);
        }
    }
}
