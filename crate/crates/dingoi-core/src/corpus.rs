//! The nets shipped with the crate, embedded for tests and the CLI's
//! `example` command.

pub const S2: &str = include_str!("../corpus/s2.net");
pub const SINGLE_WIRE: &str = include_str!("../corpus/single_wire.net");
pub const MULT_REDEX: &str = include_str!("../corpus/mult_redex.net");
pub const BIALGEBRA: &str = include_str!("../corpus/bialgebra.net");
pub const DER_CHAIN: &str = include_str!("../corpus/der_chain.net");
pub const WEAKENING: &str = include_str!("../corpus/weakening.net");
pub const DC_ZERO: &str = include_str!("../corpus/dc_zero.net");
pub const DER_COWEAK: &str = include_str!("../corpus/der_coweak.net");
pub const CLASH: &str = include_str!("../corpus/clash.net");

/// Name/source pairs for every shipped net.
pub fn all() -> Vec<(&'static str, &'static str)> {
    vec![
        ("s2", S2),
        ("single_wire", SINGLE_WIRE),
        ("mult_redex", MULT_REDEX),
        ("bialgebra", BIALGEBRA),
        ("der_chain", DER_CHAIN),
        ("weakening", WEAKENING),
        ("dc_zero", DC_ZERO),
        ("der_coweak", DER_COWEAK),
        ("clash", CLASH),
    ]
}

/// The well-typed nets used by the invariance and soundness harnesses.
pub fn typed() -> Vec<(&'static str, &'static str)> {
    vec![
        ("s2", S2),
        ("single_wire", SINGLE_WIRE),
        ("mult_redex", MULT_REDEX),
        ("bialgebra", BIALGEBRA),
        ("der_chain", DER_CHAIN),
        ("weakening", WEAKENING),
        ("dc_zero", DC_ZERO),
        ("der_coweak", DER_COWEAK),
    ]
}

pub fn by_name(name: &str) -> Option<&'static str> {
    all().into_iter().find(|(n, _)| *n == name).map(|(_, s)| s)
}
