//! Directed rewriting of weight words to canonical form, and formal sums.
//!
//! The rewrite system orients the weight monoid's relations:
//!
//! * `p* p -> 1`, `q* q -> 1`, `p* q -> 0`, `q* p -> 0`;
//! * `d t* r t' -> u d t* u*` and the `s`/`v` twin (opposite polarities),
//!   together with their starred duals;
//! * `d!*[a] d?[b] -> e[a] e[b]` for distinct names, in both polarities
//!   (the mirror is validated against the token model);
//! * commuting starred `r`/`s` of one polarity rightward past unstarred
//!   `r`/`s` of the other.
//!
//! Branch letters (`u`, `v`, `e`) are never rewritten positionally: they
//! slide past everything except a same-name dereliction letter, and the
//! final pass folds each name's letters into a semantic triple
//! (pop word, push word, e-flag) anchored in the gap after the last
//! same-name `d` to their left. A name whose triple is semantically the
//! empty injection collapses the whole word to zero.
//!
//! The result is `Zero`, a canonical weight, or `Stuck` when the residue is
//! not of the `a b*` shape (no relation applies; e.g. `r?* r?`).

use crate::name::Name;
use crate::word::{Gen, Lit, Word};
use serde::{Deserialize, Serialize};
use std::collections::BTreeMap;
use std::fmt;

pub type BitWord = Vec<bool>;

/// Per-name branch action: strip `pop` as a prefix, require the remainder
/// empty when `eflag`, then prepend `push`.
#[derive(
    Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize, Default,
)]
pub struct Block {
    pub pop: BitWord,
    pub push: BitWord,
    pub eflag: bool,
}

impl Block {
    pub fn identity() -> Block {
        Block::default()
    }

    pub fn is_identity(&self) -> bool {
        self.pop.is_empty() && self.push.is_empty() && !self.eflag
    }

    pub fn star(&self) -> Block {
        Block {
            pop: self.push.clone(),
            push: self.pop.clone(),
            eflag: self.eflag,
        }
    }

    /// Compose an outer branch literal onto this block. `None` means the
    /// composite is the empty injection.
    fn apply_outer(&self, lit: &Lit) -> Option<Block> {
        let mut b = self.clone();
        match (&lit.gen, lit.star) {
            (Gen::U(_), false) | (Gen::V(_), false) => {
                let bit = matches!(lit.gen, Gen::V(_));
                b.push.insert(0, bit);
            }
            (Gen::U(_), true) | (Gen::V(_), true) => {
                let bit = matches!(lit.gen, Gen::V(_));
                if b.push.is_empty() {
                    if b.eflag {
                        return None;
                    }
                    b.pop.push(bit);
                } else if b.push[0] == bit {
                    b.push.remove(0);
                } else {
                    return None;
                }
            }
            (Gen::E(_), _) => {
                if !b.push.is_empty() {
                    return None;
                }
                b.eflag = true;
            }
            _ => unreachable!("apply_outer is only called on branch literals"),
        }
        Some(b)
    }

    /// Fold a name's literal sequence, rightmost literal acting first.
    pub fn from_lits(lits: &[Lit]) -> Option<Block> {
        let mut b = Block::identity();
        for lit in lits.iter().rev() {
            b = b.apply_outer(lit)?;
        }
        Some(b)
    }

    /// The literal spelling: push letters, `e`, starred pop letters.
    pub fn to_lits(&self, name: &Name) -> Vec<Lit> {
        let letter = |bit: bool| {
            if bit {
                Gen::V(name.clone())
            } else {
                Gen::U(name.clone())
            }
        };
        let mut out = Vec::new();
        for &b in &self.push {
            out.push(Lit::new(letter(b)));
        }
        if self.eflag {
            out.push(Lit::new(Gen::E(name.clone())));
        }
        for &b in self.pop.iter().rev() {
            out.push(Lit::starred(letter(b)));
        }
        out
    }
}

/// A canonical weight: `mid` is the multiplicative/exponential residue and
/// `gaps[k]` holds the branch blocks anchored between `mid[k-1]` and
/// `mid[k]` (`gaps.len() == mid.len() + 1`).
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
pub struct CanonicalWeight {
    pub mid: Vec<Lit>,
    pub gaps: Vec<BTreeMap<Name, Block>>,
}

impl CanonicalWeight {
    pub fn one() -> CanonicalWeight {
        CanonicalWeight {
            mid: Vec::new(),
            gaps: vec![BTreeMap::new()],
        }
    }

    pub fn is_one(&self) -> bool {
        self.mid.is_empty() && self.gaps.iter().all(|g| g.is_empty())
    }

    /// The canonical form of the starred element. Gap anchoring is
    /// leftmost, which a bare structural reversal would flip, so the
    /// reversed word is re-normalized (the rule set is closed under star,
    /// so this cannot get stuck).
    pub fn star(&self) -> CanonicalWeight {
        match normalize(&self.to_word().star()) {
            Normalized::Canonical(c) => c,
            other => unreachable!("star of a canonical weight must normalize: {other}"),
        }
    }

    /// Spell the canonical weight back out as a word.
    pub fn to_word(&self) -> Word {
        let mut lits = Vec::new();
        for (k, gap) in self.gaps.iter().enumerate() {
            for (n, b) in gap {
                lits.extend(b.to_lits(n));
            }
            if let Some(l) = self.mid.get(k) {
                lits.push(l.clone());
            }
        }
        Word::Lits(lits)
    }

    /// Does the weight have the conjugated `a b*` shape: mid split into an
    /// unstarred prefix and a starred suffix, with every name's blocks
    /// either a single self-mirrored block up front or a mirrored pair at
    /// the two ends?
    pub fn is_alpha_ab_star(&self) -> bool {
        let mut starred_seen = false;
        for l in &self.mid {
            if l.star {
                starred_seen = true;
            } else if starred_seen {
                return false;
            }
        }
        let last = self.gaps.len() - 1;
        let mut names: Vec<&Name> = Vec::new();
        for gap in &self.gaps {
            for n in gap.keys() {
                if !names.contains(&n) {
                    names.push(n);
                }
            }
        }
        for n in names {
            let slots: Vec<(usize, &Block)> = self
                .gaps
                .iter()
                .enumerate()
                .filter_map(|(k, g)| g.get(n).map(|b| (k, b)))
                .collect();
            match slots.as_slice() {
                [] => {}
                [(0, b)] if last == 0 || !self.mid_mentions(n) => {
                    if b.pop != b.push {
                        return false;
                    }
                }
                [(0, b1), (k, b2)] if *k == last => {
                    if **b2 != b1.star() {
                        return false;
                    }
                }
                _ => return false,
            }
        }
        true
    }

    fn mid_mentions(&self, n: &Name) -> bool {
        self.mid.iter().any(|l| l.gen.name() == Some(n))
    }

    /// The `(a, b)` split of the mid word, when shaped. `b` is returned
    /// positive (un-starred, reversed).
    pub fn ab_split(&self) -> Option<(Vec<Lit>, Vec<Lit>)> {
        let split = self.mid.iter().position(|l| l.star).unwrap_or(self.mid.len());
        let (a, bs) = self.mid.split_at(split);
        if bs.iter().any(|l| !l.star) {
            return None;
        }
        let b: Vec<Lit> = bs.iter().rev().map(Lit::star).collect();
        Some((a.to_vec(), b))
    }
}

impl fmt::Display for CanonicalWeight {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let w = self.to_word();
        write!(f, "{w}")
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub enum Normalized {
    Zero,
    Canonical(CanonicalWeight),
    Stuck(Word),
}

impl Normalized {
    pub fn is_zero(&self) -> bool {
        matches!(self, Normalized::Zero)
    }

    pub fn canonical(&self) -> Option<&CanonicalWeight> {
        match self {
            Normalized::Canonical(c) => Some(c),
            _ => None,
        }
    }
}

impl fmt::Display for Normalized {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Normalized::Zero => write!(f, "0"),
            Normalized::Canonical(c) => write!(f, "{c}"),
            Normalized::Stuck(w) => write!(f, "stuck: {w}"),
        }
    }
}

fn pa_commutes_with(pa: &Lit, pme: &Lit) -> bool {
    match (pa.gen.name(), &pme.gen) {
        (Some(n), Gen::D(m, _)) => n != m,
        _ => true,
    }
}

enum PairAction {
    Zero,
    Replace(Vec<Lit>),
}

fn pair_rule(x: &Lit, y: &Lit) -> Option<PairAction> {
    use Gen::*;
    // p/q full orthogonality
    if x.star && !y.star {
        match (&x.gen, &y.gen) {
            (P, P) | (Q, Q) => return Some(PairAction::Replace(Vec::new())),
            (P, Q) | (Q, P) => return Some(PairAction::Zero),
            _ => {}
        }
    }
    // d t* followed by r/s of the other polarity
    if let (D(n, t), true, R(t2) | S(t2), false) = (&x.gen, x.star, &y.gen, y.star) {
        if t != t2 {
            let conj = if matches!(y.gen, R(_)) {
                Lit::new(U(n.clone()))
            } else {
                Lit::new(V(n.clone()))
            };
            return Some(PairAction::Replace(vec![conj.clone(), x.clone(), conj.star()]));
        }
    }
    // starred r/s followed by an unstarred d of the other polarity
    if let (R(t2) | S(t2), true, D(n, t), false) = (&x.gen, x.star, &y.gen, y.star) {
        if t != t2 {
            let conj = if matches!(x.gen, R(_)) {
                Lit::new(U(n.clone()))
            } else {
                Lit::new(V(n.clone()))
            };
            return Some(PairAction::Replace(vec![conj.clone(), y.clone(), conj.star()]));
        }
    }
    // d t*[a] d t'[b] -> e[a] e[b], distinct names, opposite polarities
    if let (D(n, t), true, D(m, t2), false) = (&x.gen, x.star, &y.gen, y.star) {
        if n != m && t != t2 {
            return Some(PairAction::Replace(vec![
                Lit::new(E(n.clone())),
                Lit::new(E(m.clone())),
            ]));
        }
    }
    // starred r/s of one polarity commutes right past unstarred of the other
    if let (R(t) | S(t), true, R(t2) | S(t2), false) = (&x.gen, x.star, &y.gen, y.star) {
        if t != t2 {
            return Some(PairAction::Replace(vec![y.clone(), x.clone()]));
        }
    }
    None
}

/// Exhaustively apply the directed system. Terminates: every step either
/// removes multiplicative/exponential literals or reduces the number of
/// starred-before-unstarred exponential inversions.
pub fn normalize(w: &Word) -> Normalized {
    let mut lits = match w {
        Word::Zero => return Normalized::Zero,
        Word::Lits(ls) => ls.clone(),
    };
    if lits
        .iter()
        .any(|l| matches!(l.gen, Gen::T | Gen::B))
    {
        return Normalized::Stuck(w.clone());
    }
    let mut steps = 0usize;
    'rewrite: loop {
        steps += 1;
        assert!(steps < 100_000, "normalize failed to terminate");
        let pme_positions: Vec<usize> = lits
            .iter()
            .enumerate()
            .filter(|(_, l)| l.gen.is_pme())
            .map(|(i, _)| i)
            .collect();
        for pair in pme_positions.windows(2) {
            let (i, j) = (pair[0], pair[1]);
            let mut gap_left = Vec::new();
            let mut gap_right = Vec::new();
            let mut blocked = false;
            for g in &lits[i + 1..j] {
                if pa_commutes_with(g, &lits[i]) {
                    gap_left.push(g.clone());
                } else if pa_commutes_with(g, &lits[j]) {
                    gap_right.push(g.clone());
                } else {
                    blocked = true;
                    break;
                }
            }
            if blocked {
                continue;
            }
            if let Some(action) = pair_rule(&lits[i], &lits[j]) {
                match action {
                    PairAction::Zero => return Normalized::Zero,
                    PairAction::Replace(mid) => {
                        let mut replacement = gap_left;
                        replacement.extend(mid);
                        replacement.extend(gap_right);
                        lits.splice(i..=j, replacement);
                        continue 'rewrite;
                    }
                }
            }
        }
        break;
    }
    // fold branch letters into per-gap per-name blocks
    let mid: Vec<Lit> = lits.iter().filter(|l| l.gen.is_pme()).cloned().collect();
    let mut anchor: BTreeMap<Name, usize> = BTreeMap::new();
    let mut grouped: BTreeMap<(usize, Name), Vec<Lit>> = BTreeMap::new();
    let mut pme_seen = 0usize;
    for l in &lits {
        if l.gen.is_pme() {
            pme_seen += 1;
            if let Gen::D(n, _) = &l.gen {
                anchor.insert(n.clone(), pme_seen);
            }
        } else {
            let n = l.gen.name().expect("branch literal carries a name").clone();
            let slot = anchor.get(&n).copied().unwrap_or(0);
            grouped.entry((slot, n)).or_default().push(l.clone());
        }
    }
    let mut gaps: Vec<BTreeMap<Name, Block>> = vec![BTreeMap::new(); mid.len() + 1];
    for ((slot, name), ls) in grouped {
        match Block::from_lits(&ls) {
            None => return Normalized::Zero,
            Some(b) if b.is_identity() => {}
            Some(b) => {
                gaps[slot].insert(name, b);
            }
        }
    }
    let cw = CanonicalWeight { mid, gaps };
    if cw.ab_split().is_none() {
        return Normalized::Stuck(Word::Lits(lits));
    }
    Normalized::Canonical(cw)
}

/// A finite multiset of canonical weights with natural coefficients.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize, Default)]
pub struct FormalSum {
    pub terms: BTreeMap<CanonicalWeight, u64>,
}

impl FormalSum {
    pub fn new() -> FormalSum {
        FormalSum::default()
    }

    pub fn add(&mut self, cw: CanonicalWeight, count: u64) {
        if count > 0 {
            *self.terms.entry(cw).or_insert(0) += count;
        }
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn total(&self) -> u64 {
        self.terms.values().sum()
    }
}

impl fmt::Display for FormalSum {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "(empty sum)");
        }
        let parts: Vec<String> = self
            .terms
            .iter()
            .map(|(cw, k)| {
                if *k == 1 {
                    cw.to_string()
                } else {
                    format!("{k}.({cw})")
                }
            })
            .collect();
        write!(f, "{}", parts.join(" + "))
    }
}

/// Merge terms under `u x u* + v x v* = x`: two terms identical except that
/// one name's front block pops and pushes a leading 0 where the other pops
/// and pushes a leading 1 combine into the unprefixed term. Name blocks are
/// independent, so the result does not depend on merge order.
pub fn sum_normalize(s: &FormalSum) -> FormalSum {
    let mut terms = s.terms.clone();
    'merge: loop {
        let keys: Vec<CanonicalWeight> = terms.keys().cloned().collect();
        for cw in &keys {
            let count = match terms.get(cw) {
                Some(&c) if c > 0 => c,
                _ => continue,
            };
            for (name, block) in cw.gaps[0].clone() {
                let (Some(&pop0), Some(&push0)) = (block.pop.first(), block.push.first()) else {
                    continue;
                };
                if pop0 != push0 {
                    continue;
                }
                // build the sibling with the opposite leading bit
                let mut sib_block = block.clone();
                sib_block.pop[0] = !pop0;
                sib_block.push[0] = !push0;
                let mut sibling = cw.clone();
                sibling.gaps[0].insert(name.clone(), sib_block);
                let Some(&sib_count) = terms.get(&sibling) else {
                    continue;
                };
                if sib_count == 0 || sibling == *cw {
                    continue;
                }
                let merged_count = count.min(sib_count);
                let mut merged = cw.clone();
                let mut stripped = block.clone();
                stripped.pop.remove(0);
                stripped.push.remove(0);
                if stripped.is_identity() {
                    merged.gaps[0].remove(&name);
                } else {
                    merged.gaps[0].insert(name.clone(), stripped);
                }
                sub(&mut terms, cw, merged_count);
                sub(&mut terms, &sibling, merged_count);
                *terms.entry(merged).or_insert(0) += merged_count;
                continue 'merge;
            }
        }
        break;
    }
    FormalSum { terms }
}

fn sub(terms: &mut BTreeMap<CanonicalWeight, u64>, key: &CanonicalWeight, k: u64) {
    if let Some(c) = terms.get_mut(key) {
        *c -= k;
        if *c == 0 {
            terms.remove(key);
        }
    }
}
