//! Construction expressions over catalog blocks and their evaluation.

mod grammar;

use std::collections::BTreeSet;
use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

pub use grammar::{from_ast, parse, serialize, to_ast, AstNode, SyntaxError};

use crate::catalog::{BlockSpec, CatalogError, SlotKind, SurfaceSlot};
use crate::invariants::{CharNumbers, InvariantError};
use crate::swring::{
    gluing_factor, propagate_designated_class, sw_of_block, ClassGen, Designated, SwStatus,
    TorusKnot,
};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ConstructError {
    #[error("slot genus mismatch at {path}: `{left}` has genus {left_genus}, `{right}` has genus {right_genus}")]
    SlotMismatch {
        path: String,
        left: String,
        left_genus: i64,
        right: String,
        right_genus: i64,
    },
    #[error("no slot `{slot}` at {path} (available: {available})")]
    MissingSlot {
        path: String,
        slot: String,
        available: String,
    },
    #[error("knot surgery at {path} needs a torus, slot `{slot}` has genus {genus}")]
    NonTorusSlot { path: String, slot: String, genus: i64 },
    #[error("at {path}: {source}")]
    Invariants {
        path: String,
        source: InvariantError,
    },
    #[error(transparent)]
    Syntax(#[from] SyntaxError),
    #[error(transparent)]
    Catalog(#[from] CatalogError),
    #[error("copies must be at least 1")]
    BadCopies,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum ConstructionExpr {
    Leaf(BlockSpec),
    FiberSum {
        left: Box<ConstructionExpr>,
        right: Box<ConstructionExpr>,
        left_slot: String,
        right_slot: String,
    },
    KnotSurgery {
        base: Box<ConstructionExpr>,
        torus_slot: String,
        knot: TorusKnot,
    },
}

impl ConstructionExpr {
    pub fn leaf(block: BlockSpec) -> Self {
        ConstructionExpr::Leaf(block)
    }

    pub fn fsum(left: ConstructionExpr, left_slot: &str, right: ConstructionExpr, right_slot: &str) -> Self {
        ConstructionExpr::FiberSum {
            left: Box::new(left),
            right: Box::new(right),
            left_slot: left_slot.to_string(),
            right_slot: right_slot.to_string(),
        }
    }

    pub fn surgery(base: ConstructionExpr, torus_slot: &str, knot: TorusKnot) -> Self {
        ConstructionExpr::KnotSurgery {
            base: Box::new(base),
            torus_slot: torus_slot.to_string(),
            knot,
        }
    }

    /// Leaves in evaluation order.
    pub fn leaves(&self) -> Vec<&BlockSpec> {
        let mut out = Vec::new();
        fn walk<'a>(e: &'a ConstructionExpr, out: &mut Vec<&'a BlockSpec>) {
            match e {
                ConstructionExpr::Leaf(b) => out.push(b),
                ConstructionExpr::FiberSum { left, right, .. } => {
                    walk(left, out);
                    walk(right, out);
                }
                ConstructionExpr::KnotSurgery { base, .. } => walk(base, out),
            }
        }
        walk(self, &mut out);
        out
    }
}

impl fmt::Display for ConstructionExpr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&serialize(self))
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct EvalReport {
    pub invariants: CharNumbers,
    pub spin: bool,
    pub simply_connected: bool,
    pub symplectic: bool,
    pub slots: Vec<SurfaceSlot>,
    pub sw: SwStatus,
    /// Canonical class of a leaf or of a genus > 1 sum, when it is basic.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub canonical: Option<String>,
    pub provenance: Vec<String>,
    /// Set when a product formula was applied to a side with b₂⁺ ≤ 1.
    pub formal_only: bool,
}

impl EvalReport {
    pub fn slot(&self, id: &str) -> Option<&SurfaceSlot> {
        self.slots.iter().find(|s| s.id == id)
    }

    /// Everything except SW and provenance, for comparing reports of
    /// expressions that differ in shape.
    pub fn topology(&self) -> (CharNumbers, bool, bool, bool) {
        (self.invariants, self.spin, self.simply_connected, self.symplectic)
    }
}

#[derive(Default)]
struct Counters {
    leaves: usize,
    sums: usize,
    shape_only: bool,
}

fn slot_ids(slots: &[SurfaceSlot]) -> String {
    slots.iter().map(|s| s.id.as_str()).collect::<Vec<_>>().join(", ")
}

fn find_slot<'a>(slots: &'a [SurfaceSlot], id: &str, path: &str) -> Result<&'a SurfaceSlot, ConstructError> {
    slots.iter().find(|s| s.id == id).ok_or_else(|| ConstructError::MissingSlot {
        path: path.to_string(),
        slot: id.to_string(),
        available: slot_ids(slots),
    })
}

fn dedupe(slots: Vec<SurfaceSlot>) -> Vec<SurfaceSlot> {
    let mut seen = BTreeSet::new();
    let mut out = Vec::with_capacity(slots.len());
    for mut s in slots {
        if seen.contains(&s.id) {
            let base = s.id.clone();
            let mut i = 2;
            while seen.contains(&format!("{base}#{i}")) {
                i += 1;
            }
            s.id = format!("{base}#{i}");
        }
        seen.insert(s.id.clone());
        out.push(s);
    }
    out
}

/// Evaluates an expression bottom-up. Leaves are tagged `leaf0, leaf1, …`
/// and sums `sum0, sum1, …` in evaluation order; these tags qualify the
/// class names in the SW data.
pub fn eval(expr: &ConstructionExpr) -> Result<EvalReport, ConstructError> {
    let mut ctr = Counters::default();
    eval_at(expr, "root", &mut ctr)
}

/// Slots and invariants only; SW is left unknown.
pub(crate) fn eval_shape(expr: &ConstructionExpr) -> Result<EvalReport, ConstructError> {
    let mut ctr = Counters {
        shape_only: true,
        ..Counters::default()
    };
    eval_at(expr, "root", &mut ctr)
}

fn eval_at(expr: &ConstructionExpr, path: &str, ctr: &mut Counters) -> Result<EvalReport, ConstructError> {
    match expr {
        ConstructionExpr::Leaf(block) => Ok(eval_leaf(block, path, ctr)),
        ConstructionExpr::FiberSum {
            left,
            right,
            left_slot,
            right_slot,
        } => {
            let l = eval_at(left, &format!("{path}/L"), ctr)?;
            let r = eval_at(right, &format!("{path}/R"), ctr)?;
            eval_sum(l, r, left_slot, right_slot, path, ctr)
        }
        ConstructionExpr::KnotSurgery {
            base,
            torus_slot,
            knot,
        } => {
            let b = eval_at(base, &format!("{path}/B"), ctr)?;
            eval_surgery(b, torus_slot, knot, path)
        }
    }
}

fn eval_leaf(block: &BlockSpec, path: &str, ctr: &mut Counters) -> EvalReport {
    let tag = format!("leaf{}", ctr.leaves);
    ctr.leaves += 1;
    let slots = block
        .surfaces
        .iter()
        .map(|s| SurfaceSlot {
            class: format!("{}@{tag}", s.class_name()),
            ..s.clone()
        })
        .collect();
    let sw = if ctr.shape_only {
        SwStatus::Unknown {
            reason: "not computed".into(),
        }
    } else {
        sw_of_block(block, &tag, path)
    };
    let canonical = matches!(block.sw, crate::catalog::SwKind::MinimalGeneralType)
        .then(|| format!("K@{tag}"))
        .or_else(|| match &sw {
            SwStatus::Partial { designated } => designated.first().cloned(),
            _ => None,
        });
    let mut provenance = vec![format!("{path}: {} as {tag}", block.label())];
    provenance.extend(block.notes.iter().map(|n| format!("{path}: {n}")));
    EvalReport {
        invariants: block.invariants,
        spin: block.spin,
        simply_connected: block.simply_connected,
        symplectic: true,
        slots,
        sw,
        canonical,
        provenance,
        formal_only: false,
    }
}

fn eval_sum(
    l: EvalReport,
    r: EvalReport,
    left_slot: &str,
    right_slot: &str,
    path: &str,
    ctr: &mut Counters,
) -> Result<EvalReport, ConstructError> {
    let ls = find_slot(&l.slots, left_slot, &format!("{path}/L"))?.clone();
    let rs = find_slot(&r.slots, right_slot, &format!("{path}/R"))?.clone();
    if ls.genus != rs.genus {
        return Err(ConstructError::SlotMismatch {
            path: path.to_string(),
            left: ls.id,
            left_genus: ls.genus,
            right: rs.id,
            right_genus: rs.genus,
        });
    }
    let g = ls.genus;
    let invariants = l
        .invariants
        .fiber_sum(&r.invariants, g)
        .map_err(|source| ConstructError::Invariants {
            path: path.to_string(),
            source,
        })?;
    let tag = format!("sum{}", ctr.sums);
    ctr.sums += 1;

    let left_rest: Vec<SurfaceSlot> = l.slots.iter().filter(|s| s.id != ls.id).cloned().collect();
    let right_rest: Vec<SurfaceSlot> = r.slots.iter().filter(|s| s.id != rs.id).cloned().collect();
    let fresh_class = if g == 1 {
        format!("f@{tag}")
    } else {
        format!("Σ@{tag}")
    };
    let regenerated = SurfaceSlot {
        id: ls.id.clone(),
        genus: g,
        self_intersection: 0,
        kind: if ls.kind == SlotKind::TorusInCusp && rs.kind == SlotKind::TorusInCusp {
            SlotKind::TorusInCusp
        } else {
            SlotKind::Symplectic
        },
        has_dual_sphere: left_rest.iter().chain(&right_rest).any(|s| s.has_dual_sphere),
        host: format!("induced embedding of the summed surface at {path}"),
        class: fresh_class.clone(),
    };
    let mut slots = vec![regenerated];
    slots.extend(left_rest);
    slots.extend(right_rest);
    let slots = dedupe(slots);

    let mut provenance = l.provenance;
    provenance.extend(r.provenance);
    provenance.push(format!(
        "{path}: fiber sum along genus-{g} surfaces `{}`, `{}` as {tag}: χ and c add with corrections {} and {}; spin and symplectic by the fiber-sum lemma",
        ls.id,
        rs.id,
        g - 1,
        8 * (g - 1)
    ));
    let dual = ls.has_dual_sphere || rs.has_dual_sphere;
    if l.simply_connected && r.simply_connected {
        if dual {
            provenance.push(format!(
                "{path}: simply connected by Van Kampen, a dual sphere bounds the meridian"
            ));
        } else {
            provenance.push(format!(
                "{path}: no dual sphere on either summed surface, simple connectivity not established"
            ));
        }
    }

    let mut formal_only = l.formal_only || r.formal_only;
    let mut canonical = None;
    let sw = if g == 1 {
        match (&l.sw, &r.sw) {
            (SwStatus::Exact { sw: a }, SwStatus::Exact { sw: b }) => {
                if l.invariants.b2plus() <= 1 || r.invariants.b2plus() <= 1 {
                    formal_only = true;
                    provenance.push(format!(
                        "{path}: warning, b2+ ≤ 1 on a side; the torus sum formula is applied formally"
                    ));
                }
                let f = ClassGen::new(fresh_class.clone(), format!("{path}: gluing torus"));
                match a.mul(b).and_then(|p| p.mul_expr(&gluing_factor(&f))) {
                    Ok(sw) => SwStatus::Exact { sw },
                    Err(e) => SwStatus::Unknown {
                        reason: e.to_string(),
                    },
                }
            }
            (SwStatus::Unknown { reason }, _) | (_, SwStatus::Unknown { reason }) => SwStatus::Unknown {
                reason: reason.clone(),
            },
            _ => {
                let mut designated = l.sw.designated();
                designated.extend(r.sw.designated());
                SwStatus::Partial { designated }
            }
        }
    } else {
        let pairing = 2 * g - 2;
        match (&l.canonical, &r.canonical) {
            (Some(kl), Some(kr)) => {
                let fresh = format!("K@{tag}");
                let d = propagate_designated_class(
                    &Designated {
                        class: kl.clone(),
                        pairing,
                    },
                    &Designated {
                        class: kr.clone(),
                        pairing,
                    },
                    g,
                    &fresh,
                )
                .expect("adjunction gives pairing 2g−2 on both sides");
                provenance.push(format!(
                    "{path}: basic classes {kl}, {kr} pair to 2g−2 = {pairing} with the fiber, so {fresh} is basic on the sum"
                ));
                let mut designated = vec![d.class.clone()];
                for s in [&l.sw, &r.sw] {
                    designated.extend(s.designated().into_iter().filter(|c| c != kl && c != kr));
                }
                canonical = Some(d.class);
                SwStatus::Partial { designated }
            }
            _ => {
                provenance.push(format!(
                    "{path}: no designated class on one side, SW of the genus-{g} sum unknown"
                ));
                SwStatus::Unknown {
                    reason: format!("genus-{g} fiber sum without designated classes"),
                }
            }
        }
    };

    Ok(EvalReport {
        invariants,
        spin: l.spin && r.spin,
        simply_connected: l.simply_connected && r.simply_connected && dual,
        symplectic: l.symplectic && r.symplectic,
        slots,
        sw,
        canonical,
        provenance,
        formal_only,
    })
}

fn eval_surgery(
    mut b: EvalReport,
    torus_slot: &str,
    knot: &TorusKnot,
    path: &str,
) -> Result<EvalReport, ConstructError> {
    let s = find_slot(&b.slots, torus_slot, path)?.clone();
    if s.genus != 1 {
        return Err(ConstructError::NonTorusSlot {
            path: path.to_string(),
            slot: s.id,
            genus: s.genus,
        });
    }
    b.provenance.push(format!(
        "{path}: knot surgery on `{}` with the {knot} torus knot; homeomorphism type unchanged, SW multiplied by Δ(e^(2T))",
        s.id
    ));
    b.sw = match b.sw {
        SwStatus::Exact { sw } => {
            let t = ClassGen::new(s.class.clone(), format!("{path}: surgery torus"));
            // the class may already be present with the provenance of its leaf
            let t = sw
                .classes()
                .into_iter()
                .find(|g| g.name == t.name)
                .cloned()
                .unwrap_or(t);
            match sw.mul_expr(&knot.delta_at(&t)) {
                Ok(sw) => SwStatus::Exact { sw },
                Err(e) => SwStatus::Unknown {
                    reason: e.to_string(),
                },
            }
        }
        other => other,
    };
    Ok(b)
}

/// Left-associated chain `base ♯ base ♯ ⋯ ♯ base [♯ tail]` along `slot`.
pub fn iterate_fiber_sum(
    base: &ConstructionExpr,
    copies: usize,
    slot: &str,
    tail: Option<(&ConstructionExpr, &str)>,
) -> Result<ConstructionExpr, ConstructError> {
    if copies == 0 {
        return Err(ConstructError::BadCopies);
    }
    let mut acc = base.clone();
    for _ in 1..copies {
        acc = ConstructionExpr::fsum(acc, slot, base.clone(), slot);
    }
    if let Some((t, tslot)) = tail {
        acc = ConstructionExpr::fsum(acc, slot, t.clone(), tslot);
    }
    Ok(acc)
}
