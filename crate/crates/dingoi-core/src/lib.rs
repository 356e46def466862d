//! Differential interaction nets and their geometry of interaction.
//!
//! The crate provides, in loosely bottom-up order:
//!
//! * [`net`]: simple nets, named sum-trees, and the interchange quotient;
//! * [`parse`]: the net file format;
//! * [`typecheck`]: formula assignment and subject reduction's contract;
//! * [`reduction`]: the rewrite rules, weak and full normalization, traces;
//! * [`path`]: paths, crossings, path reduction, persistence;
//! * [`word`] / [`canonical`]: the weight monoid, directed normalization to
//!   the conjugated `a b*` form, and formal sums;
//! * [`token`]: the concrete reversible token machine and its axiom suite;
//! * [`goi`]: path weighting, regularity, soundness checking, NEX and SNEX;
//! * [`mell`]: the promotion extension over tree-shaped tokens.

pub mod canonical;
pub mod corpus;
pub mod formula;
pub mod goi;
pub mod mell;
pub mod name;
pub mod net;
pub mod parse;
pub mod path;
pub mod reduction;
pub mod token;
pub mod typecheck;
pub mod word;

pub use canonical::{normalize, CanonicalWeight, FormalSum, Normalized};
pub use formula::Formula;
pub use name::{Name, NameOrder, Polarity};
pub use net::{canonical_sum_tree, Cell, CellId, PortId, SimpleNet, SumTree, Symbol, Wire};
pub use parse::{parse_net, render_net};
pub use reduction::{
    apply_rule, find_redexes, full_normalize, weak_normalize, Redex, ReductionTrace, RuleTag,
    Strategy,
};
pub use token::Token;
pub use typecheck::type_check;
pub use word::{parse_word, Word};
