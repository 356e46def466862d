//! The net file format.
//!
//! Line-oriented, `#` starts a comment. A file holds one net:
//!
//! ```text
//! net s2 {
//!   cell c0 der:a p0 p1
//!   cell c1 con p2 p0 p3
//!   wire p2 p4
//!   free p1, p5
//!   loops 0
//!   type p1 X^
//!   sum a { ... | ... }   # a body is either plain statements or one sum
//! }
//! ```
//!
//! Cell symbols: `tensor`, `par`, `der:<name>`, `coder:<name>`, `con`,
//! `cocon`, `weak`, `coweak`. Port and cell identifiers share one namespace
//! across sum bodies, so the leaves of a sum can name a common interface.

use crate::formula::parse_formula;
use crate::name::Name;
use crate::net::{Cell, CellId, NetError, PortId, SimpleNet, SumTree, Symbol, Wire};
use std::collections::BTreeMap;
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ParseError {
    #[error("syntax error at line {line}, column {col}: {msg}")]
    Syntax { line: usize, col: usize, msg: String },
    #[error("invalid net: {0}")]
    Semantic(#[from] NetError),
}

#[derive(Debug, Clone)]
struct Tok {
    text: String,
    line: usize,
    col: usize,
}

fn tokenize(text: &str) -> Vec<Tok> {
    let mut out = Vec::new();
    for (lno, raw) in text.lines().enumerate() {
        let line = match raw.find('#') {
            Some(i) => &raw[..i],
            None => raw,
        };
        let mut col = 0;
        let mut cur = String::new();
        let mut cur_col = 0;
        for ch in line.chars() {
            col += 1;
            if ch.is_whitespace() || matches!(ch, '{' | '}' | '|' | ',') {
                if !cur.is_empty() {
                    out.push(Tok {
                        text: std::mem::take(&mut cur),
                        line: lno + 1,
                        col: cur_col,
                    });
                }
                if !ch.is_whitespace() {
                    out.push(Tok {
                        text: ch.to_string(),
                        line: lno + 1,
                        col,
                    });
                }
            } else {
                if cur.is_empty() {
                    cur_col = col;
                }
                cur.push(ch);
            }
        }
        if !cur.is_empty() {
            out.push(Tok {
                text: cur,
                line: lno + 1,
                col: cur_col,
            });
        }
        out.push(Tok {
            text: "\n".into(),
            line: lno + 1,
            col: col + 1,
        });
    }
    out
}

struct Parser {
    toks: Vec<Tok>,
    pos: usize,
    ports: BTreeMap<String, PortId>,
    cells: BTreeMap<String, CellId>,
}

impl Parser {
    fn err(&self, msg: impl Into<String>) -> ParseError {
        let (line, col) = self
            .toks
            .get(self.pos.min(self.toks.len().saturating_sub(1)))
            .map(|t| (t.line, t.col))
            .unwrap_or((0, 0));
        ParseError::Syntax {
            line,
            col,
            msg: msg.into(),
        }
    }

    fn skip_newlines(&mut self) {
        while self.toks.get(self.pos).is_some_and(|t| t.text == "\n") {
            self.pos += 1;
        }
    }

    fn peek(&mut self) -> Option<&str> {
        self.skip_newlines();
        self.toks.get(self.pos).map(|t| t.text.as_str())
    }

    /// Next token on the current line, not skipping newlines.
    fn peek_inline(&self) -> Option<&str> {
        self.toks.get(self.pos).map(|t| t.text.as_str())
    }

    fn bump(&mut self) -> Option<Tok> {
        self.skip_newlines();
        let t = self.toks.get(self.pos).cloned();
        if t.is_some() {
            self.pos += 1;
        }
        t
    }

    fn bump_inline(&mut self) -> Option<Tok> {
        let t = self.toks.get(self.pos).cloned();
        if t.is_some() {
            self.pos += 1;
        }
        t
    }

    fn expect(&mut self, what: &str) -> Result<Tok, ParseError> {
        match self.bump() {
            Some(t) if t.text == what => Ok(t),
            Some(t) => Err(ParseError::Syntax {
                line: t.line,
                col: t.col,
                msg: format!("expected '{what}', found '{}'", t.text),
            }),
            None => Err(self.err(format!("expected '{what}', found end of input"))),
        }
    }

    fn ident(&mut self, what: &str) -> Result<Tok, ParseError> {
        match self.bump() {
            Some(t)
                if t.text
                    .chars()
                    .all(|c| c.is_alphanumeric() || c == '_' || c == ':')
                    && !t.text.is_empty() =>
            {
                Ok(t)
            }
            Some(t) => Err(ParseError::Syntax {
                line: t.line,
                col: t.col,
                msg: format!("expected {what}, found '{}'", t.text),
            }),
            None => Err(self.err(format!("expected {what}, found end of input"))),
        }
    }

    fn port(&mut self, net: &mut SimpleNet, tok: &Tok) -> PortId {
        let n = self.ports.len() as u32;
        let id = *self.ports.entry(tok.text.clone()).or_insert(PortId(n));
        net.ports.insert(id);
        id
    }

    fn symbol(&mut self, tok: &Tok) -> Result<Symbol, ParseError> {
        let s = &tok.text;
        let sym = match s.as_str() {
            "tensor" => Symbol::Tensor,
            "par" => Symbol::Par,
            "con" => Symbol::Con,
            "cocon" => Symbol::Cocon,
            "weak" => Symbol::Weak,
            "coweak" => Symbol::Coweak,
            _ => {
                if let Some(name) = s.strip_prefix("der:") {
                    Symbol::Der(Name::from(name))
                } else if let Some(name) = s.strip_prefix("coder:") {
                    Symbol::Coder(Name::from(name))
                } else {
                    return Err(ParseError::Syntax {
                        line: tok.line,
                        col: tok.col,
                        msg: format!("unknown cell symbol '{s}'"),
                    });
                }
            }
        };
        Ok(sym)
    }

    /// A net body: either leaf statements or a single `sum`.
    fn body(&mut self) -> Result<SumTree, ParseError> {
        if self.peek() == Some("sum") {
            self.bump();
            let name = self.ident("sum name")?;
            self.expect("{")?;
            let left = self.body()?;
            self.expect("|")?;
            let right = self.body()?;
            self.expect("}")?;
            return Ok(SumTree::node(Name::from(name.text.as_str()), left, right));
        }
        let mut net = SimpleNet::new();
        loop {
            match self.peek() {
                None | Some("}") | Some("|") => break,
                Some("sum") => {
                    return Err(self.err("a sum must be the only statement of its body"));
                }
                Some("cell") => {
                    self.bump();
                    let cid_tok = self.ident("cell identifier")?;
                    let n = self.cells.len() as u32;
                    let id = *self
                        .cells
                        .entry(cid_tok.text.clone())
                        .or_insert(CellId(n));
                    if net.cells.contains_key(&id) {
                        return Err(ParseError::Syntax {
                            line: cid_tok.line,
                            col: cid_tok.col,
                            msg: format!("duplicate cell '{}'", cid_tok.text),
                        });
                    }
                    let sym_tok = self.ident("cell symbol")?;
                    let symbol = self.symbol(&sym_tok)?;
                    let mut ports = Vec::new();
                    while let Some(t) = self.peek_inline() {
                        if t == "\n" {
                            break;
                        }
                        let tok = self.bump_inline().unwrap();
                        ports.push(self.port(&mut net, &tok));
                    }
                    if ports.len() != symbol.arity() + 1 {
                        return Err(ParseError::Syntax {
                            line: sym_tok.line,
                            col: sym_tok.col,
                            msg: format!(
                                "cell '{}' needs {} ports, got {}",
                                sym_tok.text,
                                symbol.arity() + 1,
                                ports.len()
                            ),
                        });
                    }
                    let principal = ports[0];
                    let aux = ports[1..].to_vec();
                    net.cells.insert(
                        id,
                        Cell {
                            id,
                            symbol,
                            principal,
                            aux,
                        },
                    );
                }
                Some("wire") => {
                    self.bump();
                    let a = self.ident("port")?;
                    let b = self.ident("port")?;
                    let pa = self.port(&mut net, &a);
                    let pb = self.port(&mut net, &b);
                    if pa == pb {
                        return Err(ParseError::Semantic(NetError::SelfWire(pa)));
                    }
                    let w = Wire::new(pa, pb);
                    if net.wires.iter().any(|x| x.touches(pa) || x.touches(pb)) {
                        let clash = if net.wires.iter().any(|x| x.touches(pa)) {
                            pa
                        } else {
                            pb
                        };
                        return Err(ParseError::Semantic(NetError::PortInTwoWires(clash)));
                    }
                    net.wires.insert(w);
                }
                Some("free") => {
                    self.bump();
                    loop {
                        let t = self.ident("port")?;
                        let p = self.port(&mut net, &t);
                        net.free.insert(p);
                        if self.peek_inline() == Some(",") {
                            self.bump_inline();
                        } else {
                            break;
                        }
                    }
                }
                Some("loops") => {
                    self.bump();
                    let t = self.ident("loop count")?;
                    net.loops = t.text.parse().map_err(|_| ParseError::Syntax {
                        line: t.line,
                        col: t.col,
                        msg: format!("invalid loop count '{}'", t.text),
                    })?;
                }
                Some("type") => {
                    self.bump();
                    let t = self.ident("port")?;
                    let p = self.port(&mut net, &t);
                    // the rest of the line is the formula
                    let mut parts = Vec::new();
                    while let Some(tok) = self.peek_inline() {
                        if tok == "\n" {
                            break;
                        }
                        parts.push(self.bump_inline().unwrap().text);
                    }
                    let src = parts.join(" ");
                    let formula = parse_formula(&src).map_err(|e| ParseError::Syntax {
                        line: t.line,
                        col: t.col,
                        msg: e.to_string(),
                    })?;
                    net.types.insert(p, formula);
                }
                Some(other) => {
                    let msg = format!("unknown statement '{other}'");
                    return Err(self.err(msg));
                }
            }
        }
        Ok(SumTree::Leaf(net))
    }
}

/// Parse a net file into a validated sum-tree.
pub fn parse_net(text: &str) -> Result<SumTree, ParseError> {
    let mut p = Parser {
        toks: tokenize(text),
        pos: 0,
        ports: BTreeMap::new(),
        cells: BTreeMap::new(),
    };
    if p.peek() != Some("net") {
        return Err(p.err("expected 'net <ident> {'"));
    }
    p.bump();
    p.ident("net name")?;
    p.expect("{")?;
    let tree = p.body()?;
    p.expect("}")?;
    if p.peek().is_some() {
        return Err(p.err("trailing input after net"));
    }
    tree.validate()?;
    Ok(tree)
}

/// Render a net in the file format. The tree is renumbered first, so
/// `parse_net(render_net(t)) == t.renumbered()`.
pub fn render_net(tree: &SumTree) -> String {
    let t = tree.renumbered();
    let mut out = String::from("net n {\n");
    render_body(&t, 1, &mut out);
    out.push_str("}\n");
    out
}

fn indent(depth: usize, out: &mut String) {
    for _ in 0..depth {
        out.push_str("  ");
    }
}

fn render_body(tree: &SumTree, depth: usize, out: &mut String) {
    match tree {
        SumTree::Dead => {
            indent(depth, out);
            out.push_str("# dead branch\n");
        }
        SumTree::Node { name, left, right } => {
            indent(depth, out);
            out.push_str(&format!("sum {name} {{\n"));
            render_body(left, depth + 1, out);
            indent(depth, out);
            out.push_str("|\n");
            render_body(right, depth + 1, out);
            indent(depth, out);
            out.push_str("}\n");
        }
        SumTree::Leaf(net) => {
            for cell in net.cells.values() {
                indent(depth, out);
                out.push_str(&format!("cell {} {}", cell.id, cell.symbol.keyword()));
                for p in cell.ports() {
                    out.push_str(&format!(" {p}"));
                }
                out.push('\n');
            }
            if !net.free.is_empty() {
                indent(depth, out);
                let frees: Vec<String> = net.free.iter().map(|p| p.to_string()).collect();
                out.push_str(&format!("free {}\n", frees.join(", ")));
            }
            for w in &net.wires {
                indent(depth, out);
                out.push_str(&format!("wire {} {}\n", w.0, w.1));
            }
            if net.loops > 0 {
                indent(depth, out);
                out.push_str(&format!("loops {}\n", net.loops));
            }
            for (p, f) in &net.types {
                indent(depth, out);
                out.push_str(&format!("type {p} {f}\n"));
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn empty_net_parses() {
        let t = parse_net("net n {}").unwrap();
        match t {
            SumTree::Leaf(net) => {
                assert!(net.ports.is_empty());
                assert_eq!(net.loops, 0);
            }
            _ => panic!("expected leaf"),
        }
    }

    #[test]
    fn port_in_two_wires_rejected() {
        let src = "net n {\n free a, b, c\n wire a b\n wire a c\n}";
        let err = parse_net(src).unwrap_err();
        assert!(matches!(
            err,
            ParseError::Semantic(NetError::PortInTwoWires(_))
        ));
    }

    #[test]
    fn dangling_port_rejected() {
        // b is mentioned in a wire but neither a cell port nor declared free
        let src = "net n {\n cell k weak a\n wire a b\n}";
        let err = parse_net(src).unwrap_err();
        assert!(matches!(err, ParseError::Semantic(NetError::DanglingPort(_))));
    }

    #[test]
    fn name_collision_rejected() {
        let src = "net n {
            cell d1 der:a q0 q1
            cell d2 der:a q2 q3
            wire q0 q2
            free q1, q3
            wire q1 q3
        }";
        // q1/q3 in a wire *and* free is fine; the der:a duplication is not
        let err = parse_net(src).unwrap_err();
        assert!(matches!(err, ParseError::Semantic(NetError::NameCollision(_))));
    }

    #[test]
    fn sum_parses_and_round_trips() {
        let src = "net n {
            sum a {
               free f1, f2
               wire f1 f2
            |
               sum b {
                  free f1, f2
                  wire f1 f2
               |
                  free f1, f2
                  wire f1 f2
               }
            }
        }";
        let t = parse_net(src).unwrap();
        let rendered = render_net(&t);
        let t2 = parse_net(&rendered).unwrap();
        assert_eq!(t2, t.renumbered());
        // shared interface: f1 has the same id in every leaf
        let leaves = t.leaves();
        assert_eq!(leaves.len(), 3);
        let frees: Vec<_> = leaves.iter().map(|(_, n)| n.free.clone()).collect();
        assert!(frees.windows(2).all(|w| w[0] == w[1]));
    }

    #[test]
    fn render_parse_is_stable() {
        let src = "net n {
            cell t tensor r a b
            cell u par s x y
            wire r s
            wire a x
            wire b y
            loops 2
        }";
        let t = parse_net(src).unwrap();
        let r1 = render_net(&t);
        let r2 = render_net(&parse_net(&r1).unwrap());
        assert_eq!(r1, r2);
    }
}
