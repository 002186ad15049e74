//! Text and JSON forms of construction expressions.
//!
//! ```text
//! expr    := block | "fsum(" slot "," slot ";" expr "," expr ")"
//!          | "surgery(" slot ",(" int "," int ");" expr ")"
//! block   := NAME "(" [param "=" int {"," param "=" int}] ")"
//! ```

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use super::{eval_shape, ConstructError, ConstructionExpr};
use crate::catalog::Catalog;
use crate::swring::TorusKnot;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("syntax error at offset {position}: {message}")]
pub struct SyntaxError {
    pub position: usize,
    pub message: String,
}

struct Parser<'a> {
    src: &'a str,
    pos: usize,
    catalog: &'a Catalog,
}

fn is_slot_char(c: char) -> bool {
    !c.is_whitespace() && !",;()=".contains(c)
}

fn is_name_char(c: char) -> bool {
    c.is_alphanumeric() || c == '_' || c == '\''
}

impl<'a> Parser<'a> {
    fn err<T>(&self, message: impl Into<String>) -> Result<T, ConstructError> {
        Err(SyntaxError {
            position: self.pos,
            message: message.into(),
        }
        .into())
    }

    fn rest(&self) -> &'a str {
        &self.src[self.pos..]
    }

    fn skip_ws(&mut self) {
        let trimmed = self.rest().trim_start();
        self.pos = self.src.len() - trimmed.len();
    }

    fn peek(&mut self) -> Option<char> {
        self.skip_ws();
        self.rest().chars().next()
    }

    fn expect(&mut self, c: char) -> Result<(), ConstructError> {
        match self.peek() {
            Some(x) if x == c => {
                self.pos += c.len_utf8();
                Ok(())
            }
            Some(x) => self.err(format!("expected `{c}`, found `{x}`")),
            None => self.err(format!("expected `{c}`, found end of input")),
        }
    }

    fn take_while(&mut self, pred: impl Fn(char) -> bool) -> &'a str {
        self.skip_ws();
        let rest = self.rest();
        let len = rest.find(|c: char| !pred(c)).unwrap_or(rest.len());
        self.pos += len;
        &rest[..len]
    }

    fn slot(&mut self) -> Result<String, ConstructError> {
        let s = self.take_while(is_slot_char);
        if s.is_empty() {
            return self.err("expected a slot name");
        }
        Ok(s.to_string())
    }

    fn int(&mut self) -> Result<i64, ConstructError> {
        self.skip_ws();
        let start = self.pos;
        let rest = self.rest();
        let mut len = 0;
        for (i, c) in rest.char_indices() {
            if c.is_ascii_digit() || (i == 0 && (c == '-' || c == '+')) {
                len = i + c.len_utf8();
            } else {
                break;
            }
        }
        let text = &rest[..len];
        match text.parse::<i64>() {
            Ok(v) => {
                self.pos = start + len;
                Ok(v)
            }
            Err(_) => self.err("expected an integer"),
        }
    }

    fn expr(&mut self) -> Result<ConstructionExpr, ConstructError> {
        self.skip_ws();
        let start = self.pos;
        let name = self.take_while(is_name_char);
        if name.is_empty() {
            return self.err("expected `fsum`, `surgery` or a block name");
        }
        match name {
            "fsum" => {
                self.expect('(')?;
                let ls = self.slot()?;
                self.expect(',')?;
                let rs = self.slot()?;
                self.expect(';')?;
                let left = self.expr()?;
                self.expect(',')?;
                let right = self.expr()?;
                self.expect(')')?;
                Ok(ConstructionExpr::fsum(left, &ls, right, &rs))
            }
            "surgery" => {
                self.expect('(')?;
                let slot = self.slot()?;
                self.expect(',')?;
                self.expect('(')?;
                let knot_pos = self.pos;
                let p = self.int()?;
                self.expect(',')?;
                let q = self.int()?;
                self.expect(')')?;
                self.expect(';')?;
                let base = self.expr()?;
                self.expect(')')?;
                let knot = TorusKnot::new(p, q).map_err(|e| SyntaxError {
                    position: knot_pos,
                    message: e.to_string(),
                })?;
                Ok(ConstructionExpr::surgery(base, &slot, knot))
            }
            _ => {
                self.expect('(')?;
                let mut params = BTreeMap::new();
                if self.peek() != Some(')') {
                    loop {
                        let key = self.take_while(is_name_char);
                        if key.is_empty() {
                            return self.err("expected a parameter name");
                        }
                        self.expect('=')?;
                        let v = self.int()?;
                        if params.insert(key.to_string(), v).is_some() {
                            return self.err(format!("parameter `{key}` given twice"));
                        }
                        if self.peek() == Some(',') {
                            self.pos += 1;
                        } else {
                            break;
                        }
                    }
                }
                self.expect(')')?;
                let block = self.catalog.resolve(name, &params).map_err(|e| match e {
                    crate::catalog::CatalogError::BadParams { .. } => ConstructError::Syntax(SyntaxError {
                        position: start,
                        message: e.to_string(),
                    }),
                    other => other.into(),
                })?;
                Ok(ConstructionExpr::leaf(block))
            }
        }
    }
}

/// Parses the text form, resolving block names through `catalog`, and checks
/// that every referenced slot exists. Genus mismatches are left to `eval`.
pub fn parse(text: &str, catalog: &Catalog) -> Result<ConstructionExpr, ConstructError> {
    let mut p = Parser {
        src: text,
        pos: 0,
        catalog,
    };
    let e = p.expr()?;
    if p.peek().is_some() {
        return p.err("trailing input");
    }
    match eval_shape(&e) {
        Err(err @ ConstructError::MissingSlot { .. }) => Err(err),
        _ => Ok(e),
    }
}

/// Canonical text form; `parse(serialize(e))` equals `e`.
pub fn serialize(e: &ConstructionExpr) -> String {
    match e {
        ConstructionExpr::Leaf(b) => b.grammar_token(),
        ConstructionExpr::FiberSum {
            left,
            right,
            left_slot,
            right_slot,
        } => format!(
            "fsum({left_slot},{right_slot}; {}, {})",
            serialize(left),
            serialize(right)
        ),
        ConstructionExpr::KnotSurgery {
            base,
            torus_slot,
            knot,
        } => format!("surgery({torus_slot},{knot}; {})", serialize(base)),
    }
}

/// JSON mirror of the grammar.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum AstNode {
    Block {
        name: String,
        #[serde(default)]
        params: BTreeMap<String, i64>,
    },
    Fsum {
        left_slot: String,
        right_slot: String,
        left: Box<AstNode>,
        right: Box<AstNode>,
    },
    Surgery {
        slot: String,
        knot: (i64, i64),
        base: Box<AstNode>,
    },
}

pub fn to_ast(e: &ConstructionExpr) -> AstNode {
    match e {
        ConstructionExpr::Leaf(b) => AstNode::Block {
            name: b.name.clone(),
            params: b.params.clone(),
        },
        ConstructionExpr::FiberSum {
            left,
            right,
            left_slot,
            right_slot,
        } => AstNode::Fsum {
            left_slot: left_slot.clone(),
            right_slot: right_slot.clone(),
            left: Box::new(to_ast(left)),
            right: Box::new(to_ast(right)),
        },
        ConstructionExpr::KnotSurgery {
            base,
            torus_slot,
            knot,
        } => AstNode::Surgery {
            slot: torus_slot.clone(),
            knot: (knot.p(), knot.q()),
            base: Box::new(to_ast(base)),
        },
    }
}

pub fn from_ast(a: &AstNode, catalog: &Catalog) -> Result<ConstructionExpr, ConstructError> {
    Ok(match a {
        AstNode::Block { name, params } => ConstructionExpr::leaf(catalog.resolve(name, params)?),
        AstNode::Fsum {
            left_slot,
            right_slot,
            left,
            right,
        } => ConstructionExpr::fsum(from_ast(left, catalog)?, left_slot, from_ast(right, catalog)?, right_slot),
        AstNode::Surgery { slot, knot, base } => {
            let k = TorusKnot::new(knot.0, knot.1).map_err(|e| SyntaxError {
                position: 0,
                message: e.to_string(),
            })?;
            ConstructionExpr::surgery(from_ast(base, catalog)?, slot, k)
        }
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::construct::eval;

    fn cat() -> Catalog {
        Catalog::default_catalog()
    }

    #[test]
    fn round_trips() {
        for s in [
            "fsum(f,f; H(k=2), E(n=2))",
            "surgery(T,(2,5); E(n=4))",
            "Y(x=1,g=3)",
            "fsum(Σ_g,Σ; Y(x=2,g=3), Z(g=3))",
            "fsum(f,f; fsum(f,f; Xd(c=96,chi=10), Xd(c=96,chi=10)), X2n(n=3))",
        ] {
            let e = parse(s, &cat()).unwrap();
            assert_eq!(serialize(&e), s);
            assert_eq!(parse(&serialize(&e), &cat()).unwrap(), e);
            let ast = to_ast(&e);
            let js = serde_json::to_string(&ast).unwrap();
            let back: AstNode = serde_json::from_str(&js).unwrap();
            assert_eq!(from_ast(&back, &cat()).unwrap(), e);
        }
    }

    #[test]
    fn whitespace_is_insignificant() {
        let a = parse("fsum( f , f ;H( k = 2 ),\n E(n=2) )", &cat()).unwrap();
        let b = parse("fsum(f,f;H(k=2),E(n=2))", &cat()).unwrap();
        assert_eq!(a, b);
    }

    #[test]
    fn genus_mismatch_surfaces_at_eval() {
        let e = parse("fsum(Σ,Σ; Z(g=2), Z(g=3))", &cat()).unwrap();
        assert!(matches!(eval(&e), Err(ConstructError::SlotMismatch { .. })));
    }

    #[test]
    fn errors() {
        assert!(matches!(parse("fsum(f,f; H(k=2) E(n=2))", &cat()), Err(ConstructError::Syntax(_))));
        assert!(matches!(parse("Q(n=2)", &cat()), Err(ConstructError::Catalog(_))));
        assert!(matches!(parse("fsum(g,f; E(n=2), E(n=2))", &cat()), Err(ConstructError::MissingSlot { .. })));
        assert!(matches!(parse("surgery(T,(2,4); E(n=4))", &cat()), Err(ConstructError::Syntax(_))));
        assert!(matches!(parse("E(n=2) x", &cat()), Err(ConstructError::Syntax(_))));
        match parse("fsum(f,f; H(k=2), E(n=0))", &cat()) {
            Err(ConstructError::Syntax(s)) => assert_eq!(s.position, 18),
            other => panic!("{other:?}"),
        }
    }
}
