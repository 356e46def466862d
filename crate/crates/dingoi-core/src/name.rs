use serde::{Deserialize, Serialize};
use std::fmt;

/// A cell or sum-node label drawn from a countable alphabet.
///
/// Names are totally ordered; the default order is lexicographic on the
/// underlying string. The order can be overridden per run (see [`NameOrder`])
/// which affects canonical sum-tree forms only, never weights.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct Name(pub String);

impl Name {
    pub fn new(s: impl Into<String>) -> Self {
        Name(s.into())
    }

    pub fn as_str(&self) -> &str {
        &self.0
    }
}

impl fmt::Display for Name {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

impl From<&str> for Name {
    fn from(s: &str) -> Self {
        Name(s.to_string())
    }
}

/// Exponential polarity: `?` (why-not side) or `!` (of-course side).
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum Polarity {
    WhyNot,
    OfCourse,
}

impl Polarity {
    pub fn flip(self) -> Self {
        match self {
            Polarity::WhyNot => Polarity::OfCourse,
            Polarity::OfCourse => Polarity::WhyNot,
        }
    }

    pub fn symbol(self) -> char {
        match self {
            Polarity::WhyNot => '?',
            Polarity::OfCourse => '!',
        }
    }
}

impl fmt::Display for Polarity {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.symbol())
    }
}

/// Total order on names used when canonicalizing sum-trees.
///
/// Names listed in `preferred` compare before all others, in list order;
/// the rest fall back to the lexicographic order. `DINGOI_NAME_ORDER`
/// (a comma-separated list) feeds this in the CLI, for testing only.
#[derive(Debug, Clone, Default)]
pub struct NameOrder {
    preferred: Vec<Name>,
}

impl NameOrder {
    pub fn lexicographic() -> Self {
        NameOrder::default()
    }

    pub fn with_preference(preferred: Vec<Name>) -> Self {
        NameOrder { preferred }
    }

    pub fn from_env_spec(spec: &str) -> Self {
        let preferred = spec
            .split(',')
            .map(str::trim)
            .filter(|s| !s.is_empty())
            .map(Name::from)
            .collect();
        NameOrder { preferred }
    }

    pub fn cmp(&self, a: &Name, b: &Name) -> std::cmp::Ordering {
        let pa = self.preferred.iter().position(|n| n == a);
        let pb = self.preferred.iter().position(|n| n == b);
        match (pa, pb) {
            (Some(i), Some(j)) => i.cmp(&j),
            (Some(_), None) => std::cmp::Ordering::Less,
            (None, Some(_)) => std::cmp::Ordering::Greater,
            (None, None) => a.cmp(b),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn name_order_preference_overrides_lex() {
        let ord = NameOrder::from_env_spec("g, a");
        assert_eq!(ord.cmp(&Name::from("g"), &Name::from("a")), std::cmp::Ordering::Less);
        assert_eq!(ord.cmp(&Name::from("b"), &Name::from("c")), std::cmp::Ordering::Less);
        assert_eq!(ord.cmp(&Name::from("a"), &Name::from("b")), std::cmp::Ordering::Less);
    }
}
