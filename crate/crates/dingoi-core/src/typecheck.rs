//! Typing of dins.
//!
//! A wire always joins a formula to its dual. Cell schemes type the
//! principal port with the cell's conclusion and each auxiliary port with
//! the dual of the corresponding premise:
//!
//! ```text
//! tensor:  principal A * B,  aux A^, B^        par: principal A @ B, aux A^, B^
//! der(a):  principal ?A,     aux A^            coder(a): principal !A, aux A^
//! con:     principal ?A,     aux !A^, !A^      cocon: principal !A, aux ?A^, ?A^
//! weak:    principal ?A                        coweak: principal !A
//! ```
//!
//! With this scheme a dereliction plugged into a contraction premise and a
//! contraction cut against a co-contraction both type, and every reduction
//! rule preserves types (subject reduction is tested in the reduction
//! module).

use crate::formula::Formula;
use crate::net::{Branch, Cell, PortId, SimpleNet, SumTree, Symbol};
use std::collections::BTreeMap;
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum TypeError {
    #[error("type clash at port {port}: expected {expected}, found {found}")]
    Clash {
        port: PortId,
        expected: String,
        found: Formula,
    },
    #[error("missing type seed for the component of port {port}")]
    MissingSeed { port: PortId },
    #[error("free port {port} typed {left} in one leaf and {right} in another")]
    InterfaceMismatch {
        port: PortId,
        left: Formula,
        right: Formula,
    },
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TypingReport {
    pub leaves: Vec<(Branch, BTreeMap<PortId, Formula>)>,
}

impl TypingReport {
    /// Types of free ports (shared across leaves).
    pub fn interface(&self) -> BTreeMap<PortId, Formula> {
        let mut out = BTreeMap::new();
        for (_, types) in &self.leaves {
            for (p, f) in types {
                out.entry(*p).or_insert_with(|| f.clone());
            }
        }
        out
    }
}

struct Checker {
    types: BTreeMap<PortId, Formula>,
    worklist: Vec<PortId>,
}

impl Checker {
    fn set(&mut self, p: PortId, f: Formula) -> Result<(), TypeError> {
        match self.types.get(&p) {
            Some(existing) if *existing != f => Err(TypeError::Clash {
                port: p,
                expected: existing.to_string(),
                found: f,
            }),
            Some(_) => Ok(()),
            None => {
                self.types.insert(p, f);
                self.worklist.push(p);
                Ok(())
            }
        }
    }

    fn shape_err(&self, p: PortId, expected: &str) -> TypeError {
        TypeError::Clash {
            port: p,
            expected: expected.to_string(),
            found: self.types[&p].clone(),
        }
    }

    fn derive_cell(&mut self, cell: &Cell) -> Result<(), TypeError> {
        let principal = self.types.get(&cell.principal).cloned();
        match &cell.symbol {
            Symbol::Tensor | Symbol::Par => {
                if let Some(t) = principal {
                    let (a, b) = match (&cell.symbol, &t) {
                        (Symbol::Tensor, Formula::Tensor(a, b)) => (a.clone(), b.clone()),
                        (Symbol::Par, Formula::Par(a, b)) => (a.clone(), b.clone()),
                        (Symbol::Tensor, _) => {
                            return Err(self.shape_err(cell.principal, "a tensor formula"))
                        }
                        _ => return Err(self.shape_err(cell.principal, "a par formula")),
                    };
                    self.set(cell.aux[0], a.dual())?;
                    self.set(cell.aux[1], b.dual())?;
                } else if let (Some(u), Some(v)) = (
                    self.types.get(&cell.aux[0]).cloned(),
                    self.types.get(&cell.aux[1]).cloned(),
                ) {
                    let t = match cell.symbol {
                        Symbol::Tensor => Formula::tensor(u.dual(), v.dual()),
                        _ => Formula::par(u.dual(), v.dual()),
                    };
                    self.set(cell.principal, t)?;
                }
            }
            Symbol::Der(_) | Symbol::Coder(_) => {
                if let Some(t) = principal {
                    let a = match (&cell.symbol, &t) {
                        (Symbol::Der(_), Formula::WhyNot(a)) => a.clone(),
                        (Symbol::Coder(_), Formula::OfCourse(a)) => a.clone(),
                        (Symbol::Der(_), _) => {
                            return Err(self.shape_err(cell.principal, "a ?-formula"))
                        }
                        _ => return Err(self.shape_err(cell.principal, "a !-formula")),
                    };
                    self.set(cell.aux[0], a.dual())?;
                } else if let Some(u) = self.types.get(&cell.aux[0]).cloned() {
                    let t = match cell.symbol {
                        Symbol::Der(_) => Formula::why_not(u.dual()),
                        _ => Formula::of_course(u.dual()),
                    };
                    self.set(cell.principal, t)?;
                }
            }
            Symbol::Con | Symbol::Cocon => {
                if let Some(t) = principal {
                    let aux_ty = match (&cell.symbol, &t) {
                        (Symbol::Con, Formula::WhyNot(a)) => Formula::of_course(a.dual()),
                        (Symbol::Cocon, Formula::OfCourse(a)) => Formula::why_not(a.dual()),
                        (Symbol::Con, _) => {
                            return Err(self.shape_err(cell.principal, "a ?-formula"))
                        }
                        _ => return Err(self.shape_err(cell.principal, "a !-formula")),
                    };
                    self.set(cell.aux[0], aux_ty.clone())?;
                    self.set(cell.aux[1], aux_ty)?;
                } else {
                    for i in [0usize, 1] {
                        if let Some(u) = self.types.get(&cell.aux[i]).cloned() {
                            let (prin, other) = match (&cell.symbol, &u) {
                                (Symbol::Con, Formula::OfCourse(w)) => {
                                    (Formula::why_not(w.dual()), u.clone())
                                }
                                (Symbol::Cocon, Formula::WhyNot(w)) => {
                                    (Formula::of_course(w.dual()), u.clone())
                                }
                                (Symbol::Con, _) => {
                                    return Err(
                                        self.shape_err(cell.aux[i], "a !-formula (dual premise)")
                                    )
                                }
                                _ => {
                                    return Err(
                                        self.shape_err(cell.aux[i], "a ?-formula (dual premise)")
                                    )
                                }
                            };
                            self.set(cell.principal, prin)?;
                            self.set(cell.aux[1 - i], other)?;
                            break;
                        }
                    }
                }
            }
            Symbol::Weak => {
                if let Some(t) = principal {
                    if !matches!(t, Formula::WhyNot(_)) {
                        return Err(self.shape_err(cell.principal, "a ?-formula"));
                    }
                }
            }
            Symbol::Coweak => {
                if let Some(t) = principal {
                    if !matches!(t, Formula::OfCourse(_)) {
                        return Err(self.shape_err(cell.principal, "a !-formula"));
                    }
                }
            }
        }
        Ok(())
    }
}

fn check_leaf(net: &SimpleNet) -> Result<BTreeMap<PortId, Formula>, TypeError> {
    let mut ck = Checker {
        types: net.types.clone(),
        worklist: net.types.keys().copied().collect(),
    };
    // seed-driven fixpoint
    loop {
        // re-derive all cells whose knowledge might have grown; cheap at
        // corpus scale and avoids chasing the worklist through cells
        let mut progressed = false;
        while let Some(p) = ck.worklist.pop() {
            progressed = true;
            let t = ck.types[&p].clone();
            if let Some(q) = net.partner(p) {
                ck.set(q, t.dual())?;
            }
        }
        for cell in net.cells.values() {
            ck.derive_cell(cell)?;
        }
        if !ck.worklist.is_empty() {
            continue;
        }
        if !progressed {
            break;
        }
    }
    for &p in &net.ports {
        if !ck.types.contains_key(&p) {
            return Err(TypeError::MissingSeed { port: p });
        }
    }
    // final pass: every wire joins duals (holds by construction, checked
    // anyway)
    for w in &net.wires {
        if ck.types[&w.0] != ck.types[&w.1].dual() {
            return Err(TypeError::Clash {
                port: w.0,
                expected: ck.types[&w.1].dual().to_string(),
                found: ck.types[&w.0].clone(),
            });
        }
    }
    Ok(ck.types)
}

/// Assign a formula to every port of every live leaf, or report why not.
pub fn type_check(tree: &SumTree) -> Result<TypingReport, TypeError> {
    let mut leaves = Vec::new();
    let mut interface: BTreeMap<PortId, Formula> = BTreeMap::new();
    for (branch, net) in tree.leaves() {
        let types = check_leaf(net)?;
        for &p in &net.free {
            match interface.get(&p) {
                None => {
                    interface.insert(p, types[&p].clone());
                }
                Some(f) if *f != types[&p] => {
                    return Err(TypeError::InterfaceMismatch {
                        port: p,
                        left: f.clone(),
                        right: types[&p].clone(),
                    });
                }
                _ => {}
            }
        }
        leaves.push((branch, types));
    }
    Ok(TypingReport { leaves })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::parse::parse_net;

    #[test]
    fn der_scheme_forces_dual_aux() {
        // principal ?X forces aux X^ (the dual of the premise)
        let src = "net n {
            cell d der:a prin ax
            free fp, fa
            wire prin fp
            wire ax fa
            type fp !X^
        }";
        let t = parse_net(src).unwrap();
        let report = type_check(&t).unwrap();
        let types = &report.leaves[0].1;
        // prin is dual of fp: ?X
        let prin_ty = types.values().find(|f| matches!(f, Formula::WhyNot(_)));
        assert!(prin_ty.is_some());
        // aux carries X^, its free partner X
        let fa_ty = types
            .iter()
            .find(|(_, f)| **f == Formula::Atom("X".into()))
            .is_some();
        assert!(fa_ty, "aux partner should be the bare atom: {types:?}");
    }

    #[test]
    fn non_dual_wire_clashes() {
        let src = "net n {
            free a, b
            wire a b
            type a X
            type b X
        }";
        let t = parse_net(src).unwrap();
        assert!(matches!(type_check(&t), Err(TypeError::Clash { .. })));
    }

    #[test]
    fn missing_seed_reported() {
        let src = "net n { free a, b \n wire a b }";
        let t = parse_net(src).unwrap();
        assert!(matches!(type_check(&t), Err(TypeError::MissingSeed { .. })));
    }

    #[test]
    fn weak_needs_why_not() {
        let src = "net n {
            cell w weak p
            free f
            wire p f
            type f X
        }";
        let t = parse_net(src).unwrap();
        // p gets X^, not a ?-formula
        assert!(matches!(type_check(&t), Err(TypeError::Clash { .. })));
    }
}
