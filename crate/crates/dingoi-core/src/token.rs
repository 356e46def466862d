//! The concrete token machine.
//!
//! A token is a multiplicative bit stack, two exponential stacks of bit
//! words, and a finitely-supported index function from names to bit words.
//! Every generator acts as a partial injection on tokens; words act
//! rightmost-literal-first. Emptiness and extensional equality are decided
//! by running over a finite seed family: each literal inspects or moves at
//! most one stack entry and one prefix bit, so a word of length n constrains
//! tokens at most n deep in every component, and seeds bounded by the
//! per-component operation counts are exhaustive.

use crate::name::{Name, Polarity};
use crate::word::{Gen, Lit, Word};
use serde::{Deserialize, Serialize};
use std::collections::BTreeMap;
use std::fmt;
use thiserror::Error;

pub type BitWord = Vec<bool>;

/// Index functions store no empty entries, so equality is structural.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize, Default)]
pub struct Token {
    pub m: BitWord,
    pub e_wn: Vec<BitWord>,
    pub e_oc: Vec<BitWord>,
    pub f: BTreeMap<Name, BitWord>,
}

impl Token {
    pub fn empty() -> Token {
        Token::default()
    }

    pub fn f_at(&self, n: &Name) -> BitWord {
        self.f.get(n).cloned().unwrap_or_default()
    }

    fn set_f(&mut self, n: &Name, w: BitWord) {
        if w.is_empty() {
            self.f.remove(n);
        } else {
            self.f.insert(n.clone(), w);
        }
    }

    fn stack_mut(&mut self, t: Polarity) -> &mut Vec<BitWord> {
        match t {
            Polarity::WhyNot => &mut self.e_wn,
            Polarity::OfCourse => &mut self.e_oc,
        }
    }
}

fn fmt_bits(w: &[bool]) -> String {
    if w.is_empty() {
        "e".to_string()
    } else {
        w.iter().map(|&b| if b { '1' } else { '0' }).collect()
    }
}

impl fmt::Display for Token {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let stack = |s: &Vec<BitWord>| -> String {
            let parts: Vec<String> = s.iter().map(|w| fmt_bits(w)).collect();
            format!("[{}]", parts.join(","))
        };
        let fs: Vec<String> = self
            .f
            .iter()
            .map(|(n, w)| format!("{n}:{}", fmt_bits(w)))
            .collect();
        write!(
            f,
            "(m={}; e?={}; e!={}; f={{{}}})",
            fmt_bits(&self.m),
            stack(&self.e_wn),
            stack(&self.e_oc),
            fs.join(",")
        )
    }
}

/// Apply one literal. `None` is the partial-map "undefined", not an error.
pub fn apply_gen(lit: &Lit, t: &Token) -> Option<Token> {
    let mut out = t.clone();
    match (&lit.gen, lit.star) {
        (Gen::P, false) => out.m.insert(0, false),
        (Gen::Q, false) => out.m.insert(0, true),
        (Gen::P, true) => {
            if out.m.first() != Some(&false) {
                return None;
            }
            out.m.remove(0);
        }
        (Gen::Q, true) => {
            if out.m.first() != Some(&true) {
                return None;
            }
            out.m.remove(0);
        }
        (Gen::R(pol), false) | (Gen::S(pol), false) => {
            let bit = matches!(lit.gen, Gen::S(_));
            let stack = out.stack_mut(*pol);
            let top = stack.first_mut()?;
            top.insert(0, bit);
        }
        (Gen::R(pol), true) | (Gen::S(pol), true) => {
            let bit = matches!(lit.gen, Gen::S(_));
            let stack = out.stack_mut(*pol);
            let top = stack.first_mut()?;
            if top.first() != Some(&bit) {
                return None;
            }
            top.remove(0);
        }
        (Gen::D(n, pol), false) => {
            let sigma = out.f_at(n);
            out.stack_mut(*pol).insert(0, Vec::new());
            out.stack_mut(pol.flip()).insert(0, sigma);
        }
        (Gen::D(n, pol), true) => {
            let sigma = out.f_at(n);
            {
                let same = out.stack_mut(*pol);
                if same.first().map(|w| w.is_empty()) != Some(true) {
                    return None;
                }
            }
            {
                let other = out.stack_mut(pol.flip());
                if other.first() != Some(&sigma) {
                    return None;
                }
            }
            out.stack_mut(*pol).remove(0);
            out.stack_mut(pol.flip()).remove(0);
        }
        (Gen::U(n), false) | (Gen::V(n), false) => {
            let bit = matches!(lit.gen, Gen::V(_));
            let mut w = out.f_at(n);
            w.insert(0, bit);
            out.set_f(n, w);
        }
        (Gen::U(n), true) | (Gen::V(n), true) => {
            let bit = matches!(lit.gen, Gen::V(_));
            let mut w = out.f_at(n);
            if w.first() != Some(&bit) {
                return None;
            }
            w.remove(0);
            out.set_f(n, w);
        }
        (Gen::E(n), _) => {
            if !out.f_at(n).is_empty() {
                return None;
            }
        }
        // the base machine has no box stack; t and b never act here
        (Gen::T, _) | (Gen::B, _) => return None,
    }
    Some(out)
}

/// Right-to-left fold of [`apply_gen`]; the zero word is undefined
/// everywhere.
pub fn run_word(w: &Word, t: &Token) -> Option<Token> {
    let lits = w.lits()?;
    let mut cur = t.clone();
    for lit in lits.iter().rev() {
        cur = apply_gen(lit, &cur)?;
    }
    Some(cur)
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
#[error("token bound {bound} is smaller than the word length {need}")]
pub struct BoundTooSmall {
    pub bound: usize,
    pub need: usize,
}

/// Per-component seed bounds derived from the words under test, capped by
/// the user bound `L` and by small hard limits.
///
/// Every literal moves at most one stack entry and inspects at most one
/// prefix bit (a starred dereliction additionally compares one entry with
/// one index value), so a word only ever constrains seeds to the depth of
/// its own operation counts; structure beyond that depth rides along
/// untouched. The hard caps keep the family enumerable while still
/// exercising every defined/undefined branch of short words.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SeedBounds {
    pub m_len: usize,
    pub stack_depth: usize,
    pub entry_len: usize,
    pub f_len: usize,
}

const CAP_M: usize = 3;
const CAP_DEPTH: usize = 2;
const CAP_ENTRY: usize = 2;
const CAP_F: usize = 2;

impl SeedBounds {
    pub fn for_words(words: &[&Word], bound: usize) -> SeedBounds {
        let mut n_pq = 0usize;
        let mut n_rs = 0usize;
        let mut n_d = 0usize;
        let mut n_uv = 0usize;
        let mut n_tb = 0usize;
        for w in words {
            if let Some(lits) = w.lits() {
                for l in lits {
                    match l.gen {
                        Gen::P | Gen::Q => n_pq += 1,
                        Gen::R(_) | Gen::S(_) => n_rs += 1,
                        Gen::D(..) => n_d += 1,
                        // e reads the index function, so it counts toward
                        // the index-value depth like u/v do
                        Gen::U(_) | Gen::V(_) | Gen::E(_) => n_uv += 1,
                        Gen::T | Gen::B => n_tb += 1,
                    }
                }
            }
        }
        let f_len = (n_uv + n_d).min(bound).min(CAP_F);
        SeedBounds {
            m_len: n_pq.min(bound).min(CAP_M),
            stack_depth: (n_d + n_tb + usize::from(n_rs > 0))
                .min(bound)
                .min(CAP_DEPTH),
            entry_len: (n_rs + f_len).min(bound).min(CAP_ENTRY),
            f_len,
        }
    }
}

fn bitwords_up_to(len: usize) -> Vec<BitWord> {
    let mut out = vec![Vec::new()];
    let mut frontier = vec![Vec::new()];
    for _ in 0..len {
        let mut next = Vec::new();
        for w in &frontier {
            for b in [false, true] {
                let mut w2 = w.clone();
                w2.push(b);
                out.push(w2.clone());
                next.push(w2);
            }
        }
        frontier = next;
    }
    out
}

fn stacks_up_to(depth: usize, entries: &[BitWord]) -> Vec<Vec<BitWord>> {
    let mut out = vec![Vec::new()];
    let mut frontier: Vec<Vec<BitWord>> = vec![Vec::new()];
    for _ in 0..depth {
        let mut next = Vec::new();
        for s in &frontier {
            for e in entries {
                let mut s2 = s.clone();
                s2.push(e.clone());
                out.push(s2.clone());
                next.push(s2);
            }
        }
        frontier = next;
    }
    out
}

/// The finite seed family for `words` at user bound `L`: every combination
/// of component values within [`SeedBounds`], with the index function
/// supported on the words' names only. Lazy; callers short-circuit.
pub fn seed_family<'a>(words: &[&Word], bound: usize) -> impl Iterator<Item = Token> + 'a {
    let b = SeedBounds::for_words(words, bound);
    let mut names: Vec<Name> = Vec::new();
    for w in words {
        for n in w.names() {
            if !names.contains(&n) {
                names.push(n);
            }
        }
    }
    let ms = bitwords_up_to(b.m_len);
    let entries = bitwords_up_to(b.entry_len);
    let stacks = stacks_up_to(b.stack_depth, &entries);
    let fvals = bitwords_up_to(b.f_len);
    let mut fmaps: Vec<BTreeMap<Name, BitWord>> = vec![BTreeMap::new()];
    for n in &names {
        let mut next = Vec::new();
        for f in &fmaps {
            for v in &fvals {
                let mut f2 = f.clone();
                if !v.is_empty() {
                    f2.insert(n.clone(), v.clone());
                }
                next.push(f2);
            }
        }
        fmaps = next;
    }
    let stacks2 = stacks.clone();
    ms.into_iter().flat_map(move |m| {
        let stacks = stacks.clone();
        let stacks_inner = stacks2.clone();
        let fmaps = fmaps.clone();
        let m = m.clone();
        stacks.into_iter().flat_map(move |ewn| {
            let m = m.clone();
            let fmaps = fmaps.clone();
            let ewn2 = ewn.clone();
            stacks_inner.clone().into_iter().flat_map(move |eoc| {
                let m = m.clone();
                let ewn = ewn2.clone();
                fmaps.clone().into_iter().map(move |f| Token {
                    m: m.clone(),
                    e_wn: ewn.clone(),
                    e_oc: eoc.clone(),
                    f,
                })
            })
        })
    })
}

fn check_bound(words: &[&Word], bound: usize) -> Result<(), BoundTooSmall> {
    let need = words.iter().map(|w| w.len()).max().unwrap_or(0);
    if bound < need {
        return Err(BoundTooSmall { bound, need });
    }
    Ok(())
}

/// Is the operation denoted by `w` defined anywhere? Decided over the seed
/// family.
pub fn domain_nonempty(w: &Word, bound: usize) -> Result<bool, BoundTooSmall> {
    check_bound(&[w], bound)?;
    if matches!(w, Word::Zero) {
        return Ok(false);
    }
    Ok(seed_family(&[w], bound).any(|t| run_word(w, &t).is_some()))
}

/// Pointwise equality of the two operations over the seed family of both
/// words, including definedness.
pub fn extensional_equal(w1: &Word, w2: &Word, bound: usize) -> Result<bool, BoundTooSmall> {
    check_bound(&[w1, w2], bound)?;
    Ok(seed_family(&[w1, w2], bound).all(|t| run_word(w1, &t) == run_word(w2, &t)))
}

/// One checked relation instance.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct AxiomCheck {
    pub label: String,
    pub lhs: String,
    pub rhs: String,
    pub holds: bool,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize, Default)]
pub struct AxiomReport {
    pub checks: Vec<AxiomCheck>,
}

impl AxiomReport {
    pub fn all_pass(&self) -> bool {
        self.checks.iter().all(|c| c.holds)
    }

    pub fn failures(&self) -> Vec<&AxiomCheck> {
        self.checks.iter().filter(|c| !c.holds).collect()
    }
}

pub(crate) struct SuiteBuilder<'a> {
    pub bound: usize,
    pub report: AxiomReport,
    pub run: Box<dyn Fn(&Word, &Token) -> Option<Token> + 'a>,
}

impl<'a> SuiteBuilder<'a> {
    pub fn new(bound: usize) -> SuiteBuilder<'a> {
        SuiteBuilder {
            bound,
            report: AxiomReport::default(),
            run: Box::new(run_word),
        }
    }

    fn eq_over_seeds(&self, w1: &Word, w2: &Word) -> bool {
        seed_family(&[w1, w2], self.bound).all(|t| (self.run)(w1, &t) == (self.run)(w2, &t))
    }

    pub fn equal(&mut self, label: &str, lhs: &Word, rhs: &Word) {
        let holds = self.eq_over_seeds(lhs, rhs);
        self.report.checks.push(AxiomCheck {
            label: label.to_string(),
            lhs: lhs.to_string(),
            rhs: rhs.to_string(),
            holds,
        });
    }

    pub fn distinct(&mut self, label: &str, lhs: &Word, rhs: &Word) {
        let holds = !self.eq_over_seeds(lhs, rhs);
        self.report.checks.push(AxiomCheck {
            label: label.to_string(),
            lhs: lhs.to_string(),
            rhs: rhs.to_string(),
            holds,
        });
    }

    /// Full orthogonality x ⊥⊥ y: x*x = 1, y*y = 1 and the idempotents
    /// from x and y compose to zero.
    pub fn fully_orthogonal(&mut self, label: &str, x: &Word, y: &Word) {
        self.equal(&format!("{label}: x*x = 1"), &x.star().mul(x), &Word::one());
        self.equal(&format!("{label}: y*y = 1"), &y.star().mul(y), &Word::one());
        let idem = x.mul(&x.star()).mul(&y.mul(&y.star()));
        self.equal(&format!("{label}: x x* y y* = 0"), &idem, &Word::zero());
    }

    pub fn commute(&mut self, label: &str, x: &Word, y: &Word) {
        self.equal(label, &x.mul(y), &y.mul(x));
    }
}

fn lit_word(gen: Gen) -> Word {
    Word::lit(Lit::new(gen))
}

/// All Def.-4 relations over the given names, both polarities, plus the
/// non-triviality checks `0 != 1` and `e_a != e_b`.
pub fn axiom_suite_over(names: &[Name], bound: usize) -> AxiomReport {
    let mut s = SuiteBuilder::new(bound);
    build_base_suite(&mut s, names);
    s.report
}

pub fn axiom_suite(bound: usize) -> AxiomReport {
    axiom_suite_over(&[Name::from("a"), Name::from("b")], bound)
}

pub(crate) fn build_base_suite(s: &mut SuiteBuilder<'_>, names: &[Name]) {
    use Polarity::{OfCourse, WhyNot};
    let p = lit_word(Gen::P);
    let q = lit_word(Gen::Q);
    s.fully_orthogonal("p ⊥⊥ q", &p, &q);
    for n in names {
        let u = lit_word(Gen::U(n.clone()));
        let v = lit_word(Gen::V(n.clone()));
        s.fully_orthogonal(&format!("u[{n}] ⊥⊥ v[{n}]"), &u, &v);
        let e = lit_word(Gen::E(n.clone()));
        s.equal(&format!("e[{n}] e[{n}] = e[{n}]"), &e.mul(&e), &e);
    }
    // {r!, s!} commutes with {r?*, s?*}
    for x in [Gen::R(OfCourse), Gen::S(OfCourse)] {
        for y in [Gen::R(WhyNot), Gen::S(WhyNot)] {
            let xw = lit_word(x.clone());
            let yw = Word::lit(Lit::starred(y));
            s.commute(&format!("{} comm {}", xw, yw), &xw, &yw);
        }
    }
    // {u,v,e} of one name commutes with everything except same-name d
    for n in names {
        let pa = [
            lit_word(Gen::U(n.clone())),
            lit_word(Gen::V(n.clone())),
            lit_word(Gen::E(n.clone())),
        ];
        let mut others = vec![
            Gen::P,
            Gen::Q,
            Gen::R(WhyNot),
            Gen::S(WhyNot),
            Gen::R(OfCourse),
            Gen::S(OfCourse),
        ];
        for m in names {
            if m != n {
                others.extend([
                    Gen::D(m.clone(), WhyNot),
                    Gen::D(m.clone(), OfCourse),
                    Gen::U(m.clone()),
                    Gen::V(m.clone()),
                    Gen::E(m.clone()),
                ]);
            }
        }
        for x in &pa {
            for g in &others {
                let y = lit_word(g.clone());
                s.commute(&format!("{x} comms {y}"), x, &y);
                let ys = Word::lit(Lit::starred(g.clone()));
                s.commute(&format!("{x} comms {ys}"), x, &ys);
            }
        }
    }
    // d*(a,t) r(t') = u d*(a,t) u*   and the s/v twin, t != t'
    for n in names {
        for (t, t2) in [(WhyNot, OfCourse), (OfCourse, WhyNot)] {
            let ds = Word::lit(Lit::starred(Gen::D(n.clone(), t)));
            let u = lit_word(Gen::U(n.clone()));
            let v = lit_word(Gen::V(n.clone()));
            let r = lit_word(Gen::R(t2));
            let sw = lit_word(Gen::S(t2));
            s.equal(
                &format!("d{}*[{n}] r{} rewrite", t.symbol(), t2.symbol()),
                &ds.mul(&r),
                &u.mul(&ds).mul(&u.star()),
            );
            s.equal(
                &format!("d{}*[{n}] s{} rewrite", t.symbol(), t2.symbol()),
                &ds.mul(&sw),
                &v.mul(&ds).mul(&v.star()),
            );
        }
    }
    // d*(a,!) d(b,?) = e_a e_b for a != b, and the polarity mirror
    for n in names {
        for m in names {
            if n == m {
                continue;
            }
            let ea_eb = lit_word(Gen::E(n.clone())).mul(&lit_word(Gen::E(m.clone())));
            for (t, t2) in [(OfCourse, WhyNot), (WhyNot, OfCourse)] {
                let lhs = Word::lit(Lit::starred(Gen::D(n.clone(), t)))
                    .mul(&lit_word(Gen::D(m.clone(), t2)));
                s.equal(
                    &format!(
                        "d{}*[{n}] d{}[{m}] = e[{n}] e[{m}]",
                        t.symbol(),
                        t2.symbol()
                    ),
                    &lhs,
                    &ea_eb,
                );
            }
        }
    }
    // the model is non-trivial
    s.distinct("0 != 1", &Word::zero(), &Word::one());
    if names.len() >= 2 {
        s.distinct(
            "e_a != e_b",
            &lit_word(Gen::E(names[0].clone())),
            &lit_word(Gen::E(names[1].clone())),
        );
    }
    s.distinct("r? != s?", &lit_word(Gen::R(WhyNot)), &lit_word(Gen::S(WhyNot)));
}

/// The MALL fragment: relations among `{p, q, u, v}` only.
pub fn mall_suite(names: &[Name], bound: usize) -> AxiomReport {
    let mut s = SuiteBuilder::new(bound);
    let p = lit_word(Gen::P);
    let q = lit_word(Gen::Q);
    s.fully_orthogonal("p ⊥⊥ q", &p, &q);
    for n in names {
        let u = lit_word(Gen::U(n.clone()));
        let v = lit_word(Gen::V(n.clone()));
        s.fully_orthogonal(&format!("u[{n}] ⊥⊥ v[{n}]"), &u, &v);
        for x in [&u, &v] {
            for y in [&p, &q] {
                s.commute(&format!("{x} comms {y}"), x, y);
                s.commute(&format!("{x} comms {y}*"), x, &y.star());
            }
            for m in names {
                if m != n {
                    for g in [Gen::U(m.clone()), Gen::V(m.clone())] {
                        let y = lit_word(g);
                        s.commute(&format!("{x} comms {y}"), x, &y);
                        s.commute(&format!("{x} comms {y}*"), x, &y.star());
                    }
                }
            }
        }
    }
    s.distinct("0 != 1", &Word::zero(), &Word::one());
    s.report
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::word::strategies::arb_word;
    use crate::word::parse_word;
    use proptest::prelude::*;

    fn tok(m: &str, ewn: &[&str], eoc: &[&str], f: &[(&str, &str)]) -> Token {
        let bits = |s: &str| -> BitWord { s.chars().map(|c| c == '1').collect() };
        Token {
            m: bits(m),
            e_wn: ewn.iter().map(|s| bits(s)).collect(),
            e_oc: eoc.iter().map(|s| bits(s)).collect(),
            f: f
                .iter()
                .filter(|(_, v)| !v.is_empty())
                .map(|(n, v)| (Name::from(*n), bits(v)))
                .collect(),
        }
    }

    #[test]
    fn p_pushes_zero_bit() {
        let t = Token::empty();
        let out = apply_gen(&Lit::new(Gen::P), &t).unwrap();
        assert_eq!(out, tok("0", &[], &[], &[]));
    }

    #[test]
    fn r_undefined_on_empty_stack() {
        let t = Token::empty();
        assert_eq!(apply_gen(&Lit::new(Gen::R(Polarity::WhyNot)), &t), None);
    }

    #[test]
    fn dereliction_copies_index_value() {
        // d?[a] on (e,[],[],{a:01}) gives (e,[e],[01],{a:01})
        let t = tok("", &[], &[], &[("a", "01")]);
        let out = apply_gen(&Lit::new(Gen::D(Name::from("a"), Polarity::WhyNot)), &t).unwrap();
        assert_eq!(out, tok("", &[""], &["01"], &[("a", "01")]));
    }

    #[test]
    fn phi1_runs_on_its_predicted_domain() {
        // the canonical triples of w(phi1) predict the domain f(a)=1, f(g)=0
        let w = parse_word("d!*[g] s!* r? d?[a]").unwrap();
        let seed = tok("", &[], &[], &[("a", "1"), ("g", "0")]);
        assert_eq!(run_word(&w, &seed), Some(seed.clone()));
        let off_domain = tok("", &[], &[], &[("a", "0"), ("g", "0")]);
        assert_eq!(run_word(&w, &off_domain), None);
    }

    #[test]
    fn identity_runs_everywhere() {
        let t = tok("01", &["1"], &[""], &[("a", "1")]);
        assert_eq!(run_word(&Word::one(), &t), Some(t.clone()));
    }

    #[test]
    fn pq_mismatch_has_empty_domain() {
        let w = parse_word("p* q").unwrap();
        assert!(!domain_nonempty(&w, 2).unwrap());
    }

    #[test]
    fn empty_word_has_nonempty_domain() {
        assert!(domain_nonempty(&Word::one(), 0).unwrap());
    }

    #[test]
    fn phi1_is_regular_in_the_model() {
        let w = parse_word("d!*[g] s!* r? d?[a]").unwrap();
        assert!(domain_nonempty(&w, 4).unwrap());
    }

    #[test]
    fn bound_too_small_reported() {
        let w = parse_word("p p p").unwrap();
        assert!(domain_nonempty(&w, 2).is_err());
    }

    #[test]
    fn rewrite_axiom_holds_extensionally() {
        let lhs = parse_word("d!*[a] r?").unwrap();
        let rhs = parse_word("u[a] d!*[a] u*[a]").unwrap();
        assert!(extensional_equal(&lhs, &rhs, 4).unwrap());
    }

    #[test]
    fn e_names_are_distinct() {
        let ea = parse_word("e[a]").unwrap();
        let eb = parse_word("e[b]").unwrap();
        assert!(!extensional_equal(&ea, &eb, 2).unwrap());
    }

    #[test]
    fn one_is_not_zero() {
        assert!(!extensional_equal(&Word::one(), &Word::zero(), 2).unwrap());
    }

    #[test]
    fn full_suite_passes_at_l4() {
        let report = axiom_suite(4);
        for c in report.failures() {
            eprintln!("FAILED: {} ({} vs {})", c.label, c.lhs, c.rhs);
        }
        assert!(report.all_pass());
    }

    #[test]
    fn one_name_suite_passes() {
        let report = axiom_suite_over(&[Name::from("a")], 4);
        assert!(report.all_pass());
    }

    #[test]
    fn mall_suite_passes_at_l4() {
        let report = mall_suite(&[Name::from("a"), Name::from("b")], 4);
        assert!(report.all_pass());
    }

    #[test]
    fn mutated_s_breaks_rs_distinctness_but_not_pq() {
        // route every s? through r?: the r/s distinctness check must fail,
        // while p ⊥⊥ q is untouched
        let mutate = |w: &Word| -> Word {
            match w.lits() {
                None => Word::Zero,
                Some(ls) => Word::from_lits(
                    ls.iter()
                        .map(|l| match &l.gen {
                            Gen::S(t) => Lit {
                                gen: Gen::R(*t),
                                star: l.star,
                            },
                            _ => l.clone(),
                        })
                        .collect(),
                ),
            }
        };
        let mut s = SuiteBuilder::new(4);
        s.run = Box::new(move |w, t| run_word(&mutate(w), t));
        build_base_suite(&mut s, &[Name::from("a"), Name::from("b")]);
        let report = s.report;
        assert!(!report.all_pass());
        let rs_fail = report
            .failures()
            .iter()
            .any(|c| c.label.contains("r? != s?"));
        assert!(rs_fail);
        let pq_ok = report
            .checks
            .iter()
            .filter(|c| c.label.starts_with("p ⊥⊥ q"))
            .all(|c| c.holds);
        assert!(pq_ok);
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(48))]

        #[test]
        fn operations_are_injective(w in arb_word(6), t1 in arb_token(), t2 in arb_token()) {
            if t1 != t2 {
                if let (Some(a), Some(b)) = (run_word(&w, &t1), run_word(&w, &t2)) {
                    prop_assert_ne!(a, b);
                }
            }
        }

        #[test]
        fn star_inverts(w in arb_word(6), t in arb_token()) {
            if let Some(mid) = run_word(&w, &t) {
                prop_assert_eq!(run_word(&w.star(), &mid), Some(t));
            }
        }

        #[test]
        fn idempotent_law(w in arb_word(5), t in arb_token()) {
            // u u* u = u pointwise
            let www = w.mul(&w.star()).mul(&w);
            prop_assert_eq!(run_word(&www, &t), run_word(&w, &t));
        }
    }

    fn arb_token() -> BoxedStrategy<Token> {
        let bits = proptest::collection::vec(any::<bool>(), 0..3);
        let stack = proptest::collection::vec(
            proptest::collection::vec(any::<bool>(), 0..3),
            0..3,
        );
        (
            bits,
            stack.clone(),
            stack,
            proptest::collection::btree_map(
                proptest::sample::select(vec!["a", "b"]).prop_map(Name::from),
                proptest::collection::vec(any::<bool>(), 1..3),
                0..3,
            ),
        )
            .prop_map(|(m, e_wn, e_oc, f)| Token { m, e_wn, e_oc, f })
            .boxed()
    }
}
