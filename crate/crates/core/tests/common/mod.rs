#![allow(dead_code)]

use geo4_core::construct::{eval, ConstructionExpr, EvalReport};
use geo4_core::swring::{ClassGen, SwExpr};

/// Pushes SW forward to a basis where all torus fibers are one class `f`
/// and each canonical class is named after its block. Each factor is pushed
/// forward before multiplying, so the product stays small.
pub fn pushforward(r: &EvalReport, labels: &[String]) -> SwExpr {
    let sw = r.sw.exact().unwrap();
    let mut out = SwExpr::constant(sw.scalar().clone());
    for factor in sw.factors() {
        out = out.mul(&push_factor(factor, labels)).unwrap();
    }
    out
}

fn push_factor(e: &SwExpr, labels: &[String]) -> SwExpr {
    let mut out = e.clone();
    for g in e.basis().gens() {
        let (label, tag) = g.name.split_once('@').unwrap();
        let target = match label {
            "f" | "T" => "f".to_string(),
            "K" => {
                let i: usize = tag.trim_start_matches("leaf").parse().unwrap();
                format!("K[{}]", labels[i])
            }
            other => panic!("unexpected class {other}"),
        };
        out = out.substitute(&g.name, &ClassGen::new(target, "pushforward"), 1).unwrap();
    }
    out
}

pub fn labels(e: &ConstructionExpr) -> Vec<String> {
    e.leaves().iter().map(|b| b.label()).collect()
}

pub fn assert_same_sw(a: &ConstructionExpr, b: &ConstructionExpr) {
    let (ra, rb) = (eval(a).unwrap(), eval(b).unwrap());
    assert_eq!(ra.topology(), rb.topology());
    let (sa, sb) = (ra.sw.exact().unwrap(), rb.sw.exact().unwrap());
    assert_eq!(sa.abs_histogram(), sb.abs_histogram());
    assert_eq!(sa.count_up_to_sign(), sb.count_up_to_sign());
    assert_eq!(pushforward(&ra, &labels(a)), pushforward(&rb, &labels(b)));
}
