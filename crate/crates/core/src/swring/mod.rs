//! Formal Seiberg–Witten invariants as elements of an integral group ring
//! over named cohomology classes, with the torus fiber-sum and knot-surgery
//! product formulas.

mod alexander;
mod factored;
mod ring;

use std::collections::BTreeMap;

use num_bigint::BigUint;
use num_traits::{One, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};
use thiserror::Error;

pub use alexander::{InvalidKnot, TorusKnot};
pub use factored::{all_unit, FactoredSw};
pub use ring::{ClassBasis, ClassGen, RingError, SwExpr};

use crate::catalog::{BlockSpec, SwKind};
use crate::construct::EvalReport;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SwError {
    #[error(transparent)]
    Ring(#[from] RingError),
    #[error("pairings with [Σ] are {left} and {right}, both must equal 2g−2 = {expected}")]
    PairingMismatch { left: i64, right: i64, expected: i64 },
    #[error("SW is only partially known (designated classes: {0})")]
    PartialSw(String),
    #[error("SW is unknown: {0}")]
    UnknownSw(String),
    #[error("bad parameters: {0}")]
    BadParams(String),
}

/// (e^f − e^{−f})², the factor contributed by a torus fiber sum.
pub fn gluing_factor(f: &ClassGen) -> SwExpr {
    SwExpr::exp(f, 1)
        .sub(&SwExpr::exp(f, -1))
        .expect("one class")
        .pow(2)
}

/// SW of E(n), n ≥ 2: (e^T − e^{−T})^{n−2}.
pub fn elliptic_sw(t: &ClassGen, n: i64) -> SwExpr {
    assert!(n >= 2, "E({n}) has b2+ = 1");
    SwExpr::exp(t, 1)
        .sub(&SwExpr::exp(t, -1))
        .expect("one class")
        .pow((n - 2) as u32)
        .with_classes(std::slice::from_ref(t))
        .expect("one class")
}

/// SW of a minimal surface of general type with canonical class K, under the
/// convention SW(−K) = (−1)^χ SW(K).
pub fn minimal_general_type_sw(k: &ClassGen, chi: i64) -> SwExpr {
    let sign = if chi.rem_euclid(2) == 0 { 1 } else { -1 };
    SwExpr::exp(k, 1)
        .add(&SwExpr::term(&[(k.clone(), -1)], sign).expect("one class"))
        .expect("one class")
}

/// SW_{A♯_f B} = SW_A · SW_B · (e^f − e^{−f})².
pub fn sw_fiber_sum_torus(a: &SwExpr, b: &SwExpr, f: &ClassGen) -> Result<SwExpr, RingError> {
    a.mul(b)?.mul(&gluing_factor(f))
}

/// SW_{X_K} = SW_X · Δ_K(e^{2T}).
pub fn sw_knot_surgery(sw: &SwExpr, t: &ClassGen, knot: &TorusKnot) -> Result<SwExpr, RingError> {
    sw.mul(&knot.delta_at(t))
}

/// Seiberg–Witten status of a block or composite.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "status", rename_all = "snake_case")]
pub enum SwStatus {
    Exact { sw: FactoredSw },
    /// Only these classes are known to be basic.
    Partial { designated: Vec<String> },
    Unknown { reason: String },
}

impl SwStatus {
    pub fn exact(&self) -> Result<&FactoredSw, SwError> {
        match self {
            SwStatus::Exact { sw } => Ok(sw),
            SwStatus::Partial { designated } => Err(SwError::PartialSw(designated.join(", "))),
            SwStatus::Unknown { reason } => Err(SwError::UnknownSw(reason.clone())),
        }
    }

    pub fn designated(&self) -> Vec<String> {
        match self {
            SwStatus::Partial { designated } => designated.clone(),
            _ => Vec::new(),
        }
    }
}

fn qualify(name: &str, tag: &str) -> String {
    format!("{name}@{tag}")
}

/// Formal SW of a catalog block, with its classes qualified by `tag`.
pub fn sw_of_block(block: &BlockSpec, tag: &str, path: &str) -> SwStatus {
    let chi = block.invariants.chi();
    match &block.sw {
        SwKind::Elliptic => {
            let n = block.invariants.chi();
            if n < 2 {
                return SwStatus::Unknown {
                    reason: format!("{} has b2+ = 1", block.label()),
                };
            }
            let t = ClassGen::new(qualify("T", tag), format!("{path}: fiber class of {}", block.label()));
            SwStatus::Exact {
                sw: FactoredSw::from_expr(&elliptic_sw(&t, n)),
            }
        }
        SwKind::MinimalGeneralType => {
            let k = ClassGen::new(
                qualify("K", tag),
                format!("{path}: canonical class of {}", block.label()),
            );
            SwStatus::Exact {
                sw: FactoredSw::from_expr(&minimal_general_type_sw(&k, chi)),
            }
        }
        SwKind::Explicit { expr } => {
            let renamed = expr.map_classes(|g| {
                ClassGen::new(qualify(&g.name, tag), format!("{path}: {}", g.provenance))
            });
            match renamed {
                Ok(e) => SwStatus::Exact {
                    sw: FactoredSw::from_expr(&e),
                },
                Err(e) => SwStatus::Unknown {
                    reason: e.to_string(),
                },
            }
        }
        SwKind::Partial { classes } => SwStatus::Partial {
            designated: classes.iter().map(|c| qualify(c, tag)).collect(),
        },
    }
}

/// A class known to be basic together with its pairing against [Σ].
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Designated {
    pub class: String,
    pub pairing: i64,
}

/// Across a genus-g fiber sum, basic classes l₁, l₂ with ⟨lᵢ, [Σ]⟩ = 2g − 2
/// induce a nonzero SW value on the sum.
pub fn propagate_designated_class(
    l1: &Designated,
    l2: &Designated,
    g: i64,
    fresh: &str,
) -> Result<Designated, SwError> {
    let expected = 2 * g - 2;
    if l1.pairing != expected || l2.pairing != expected {
        return Err(SwError::PairingMismatch {
            left: l1.pairing,
            right: l2.pairing,
            expected,
        });
    }
    Ok(Designated {
        class: fresh.to_string(),
        pairing: expected,
    })
}

fn count_json<S: serde::Serializer>(n: &BigUint, s: S) -> Result<S::Ok, S::Error> {
    match n.to_u64() {
        Some(v) => s.serialize_u64(v),
        None => s.serialize_str(&n.to_string()),
    }
}

fn count_from_json<'de, D: serde::Deserializer<'de>>(d: D) -> Result<BigUint, D::Error> {
    use serde::de::Error;
    let v = serde_json::Value::deserialize(d)?;
    match &v {
        serde_json::Value::Number(n) => n.as_u64().map(BigUint::from),
        serde_json::Value::String(s) => s.parse().ok(),
        _ => None,
    }
    .ok_or_else(|| D::Error::custom("count must be a non-negative integer"))
}

/// Support of an SW invariant.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct BasicClassSet {
    /// Rendered classes, present when the support is small enough to list.
    pub classes: Option<Vec<String>>,
    #[serde(serialize_with = "count_json", deserialize_with = "count_from_json")]
    pub count: BigUint,
    #[serde(serialize_with = "count_json", deserialize_with = "count_from_json")]
    pub count_up_to_sign: BigUint,
}

pub const LIST_LIMIT: usize = 4096;

fn render_class(v: &[(String, i64)]) -> String {
    if v.is_empty() {
        return "0".to_string();
    }
    let mut out = String::new();
    for (name, e) in v {
        if *e < 0 {
            out.push('-');
        } else if !out.is_empty() {
            out.push('+');
        }
        if e.abs() != 1 {
            out.push_str(&e.abs().to_string());
        }
        out.push_str(name.split('@').next().unwrap_or(name));
    }
    out
}

pub fn basic_classes_of(sw: &FactoredSw) -> BasicClassSet {
    let classes = sw.expand(LIST_LIMIT).map(|e| {
        let mut s = e.support();
        s.reverse();
        s.iter().map(|v| render_class(v)).collect()
    });
    BasicClassSet {
        classes,
        count: sw.term_count(),
        count_up_to_sign: sw.count_up_to_sign(),
    }
}

pub fn basic_classes(status: &SwStatus) -> Result<BasicClassSet, SwError> {
    Ok(basic_classes_of(status.exact()?))
}

/// |coefficient| histogram of SW(E(n)): binomial coefficients C(n−2, i).
pub fn elliptic_histogram(n: i64) -> BTreeMap<BigUint, BigUint> {
    let mut h: BTreeMap<BigUint, BigUint> = BTreeMap::new();
    if n < 2 {
        return h;
    }
    let m = (n - 2) as u64;
    let mut c = BigUint::one();
    for i in 0..=m {
        *h.entry(c.clone()).or_insert_with(BigUint::zero) += 1u32;
        c = c * BigUint::from(m - i) / BigUint::from(i + 1);
    }
    h
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Admissibility {
    /// SW has the shape of a minimal surface of general type.
    Consistent,
    /// Not diffeomorphic to a complex surface of the relevant kind.
    NotComplex,
    /// The coefficient-multiset proxy cannot decide.
    Undetermined,
    /// SW is not known exactly.
    Unknown,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ComplexVerdict {
    pub verdict: Admissibility,
    pub reasons: Vec<String>,
}

impl ComplexVerdict {
    pub fn summary(&self) -> String {
        let head = match self.verdict {
            Admissibility::Consistent => "consistent with a minimal complex surface of general type",
            Admissibility::NotComplex => "not complex-admissible",
            Admissibility::Undetermined => "undetermined by proxy",
            Admissibility::Unknown => "unknown",
        };
        if self.reasons.is_empty() {
            head.to_string()
        } else {
            format!("{head} ({})", self.reasons.join("; "))
        }
    }
}

/// Decides from SW whether a composite can be a complex surface. For c > 0 a
/// minimal surface of general type has exactly ±K as basic classes; for c = 0
/// the coefficient multiset is compared with that of E(χ).
pub fn is_complex_admissible(report: &EvalReport) -> ComplexVerdict {
    let sw = match report.sw.exact() {
        Ok(sw) => sw,
        Err(e) => {
            return ComplexVerdict {
                verdict: Admissibility::Unknown,
                reasons: vec![e.to_string()],
            }
        }
    };
    let c = report.invariants.c();
    let chi = report.invariants.chi();
    let up = sw.count_up_to_sign();
    if c > 0 {
        if sw.is_zero() {
            return ComplexVerdict {
                verdict: Admissibility::NotComplex,
                reasons: vec!["SW vanishes, but a surface of general type has SW(±K) = ±1".into()],
            };
        }
        if up.is_one() {
            return ComplexVerdict {
                verdict: Admissibility::Consistent,
                reasons: vec!["one basic class up to sign".into()],
            };
        }
        return ComplexVerdict {
            verdict: Admissibility::NotComplex,
            reasons: vec![format!(
                "c = {c} > 0 and {up} basic classes up to sign; a minimal surface of general type has only ±K"
            )],
        };
    }
    if c < 0 {
        return ComplexVerdict {
            verdict: Admissibility::Unknown,
            reasons: vec![format!("c = {c} < 0 lies outside the symplectic range")],
        };
    }
    let mut reasons = Vec::new();
    if up > BigUint::one() {
        reasons.push(format!("not of general type ({up} classes up to sign)"));
    }
    if chi < 2 {
        reasons.push(format!("SW of E({chi}) is not defined by the product formulas"));
        return ComplexVerdict {
            verdict: Admissibility::Undetermined,
            reasons,
        };
    }
    if sw.abs_histogram() == elliptic_histogram(chi) {
        reasons.insert(
            0,
            format!("c = 0 elliptic comparison: coefficient multiset agrees with E({chi})"),
        );
        ComplexVerdict {
            verdict: Admissibility::Undetermined,
            reasons,
        }
    } else {
        reasons.insert(
            0,
            format!("c = 0 elliptic comparison: coefficient multiset differs from E({chi})"),
        );
        ComplexVerdict {
            verdict: Admissibility::NotComplex,
            reasons,
        }
    }
}

/// Upper set of SW-basic classes of W = [H(7)♯_f] H(8k′−1) ♯_f E(2n) ♯_f mX:
/// K_H ± K_{H₇} ± 2jT ± K_X ⋯ ± K_X + {0, ±2f} + ⋯ + {0, ±2f}, every sign
/// and choice allowed.
pub fn w_basic_classes(m: i64, k_prime: i64, n: i64, with_h7: bool) -> Result<BasicClassSet, SwError> {
    Ok(basic_classes_of(&w_formal_sw(m, k_prime, n, with_h7)?))
}

/// The unit-coefficient product whose support is the set enumerated by
/// [`w_basic_classes`].
pub fn w_formal_sw(m: i64, k_prime: i64, n: i64, with_h7: bool) -> Result<FactoredSw, SwError> {
    if m < 0 || k_prime < 1 || n < 1 {
        return Err(SwError::BadParams(format!(
            "need m ≥ 0, k′ ≥ 1, n ≥ 1 (got m = {m}, k′ = {k_prime}, n = {n})"
        )));
    }
    let cls = |name: String| ClassGen::new(name, "W family");
    let sym = |g: &ClassGen| SwExpr::exp(g, 1).add(&SwExpr::exp(g, -1)).expect("one class");
    let kh = cls(format!("K_H{}", 8 * k_prime - 1));
    let mut w = FactoredSw::from_expr(&SwExpr::exp(&kh, 1));
    if with_h7 {
        w = w.mul_expr(&sym(&cls("K_H7".into())))?;
    }
    let t = cls("T".into());
    let mut tsum = SwExpr::zero();
    for j in -(n - 1)..=(n - 1) {
        tsum = tsum.add(&SwExpr::exp(&t, 2 * j))?;
    }
    w = w.mul_expr(&tsum)?;
    for i in 1..=m {
        w = w.mul_expr(&sym(&cls(format!("K_X{i}"))))?;
    }
    let tori = m + if with_h7 { 2 } else { 1 };
    for j in 1..=tori {
        let f = cls(format!("f{j}"));
        let e = SwExpr::one().add(&SwExpr::exp(&f, 2))?.add(&SwExpr::exp(&f, -2))?;
        w = w.mul_expr(&e)?;
    }
    Ok(w)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn g(n: &str) -> ClassGen {
        ClassGen::new(n, "t")
    }

    #[test]
    fn elliptic_blocks() {
        let t = g("T");
        assert_eq!(elliptic_sw(&t, 4).render(), "+1*exp(2T) -2 +1*exp(-2T)");
        assert_eq!(elliptic_sw(&t, 2).render(), "+1");
        let h: Vec<_> = elliptic_histogram(6).into_iter().collect();
        assert_eq!(
            h,
            vec![
                (BigUint::from(1u32), BigUint::from(2u32)),
                (BigUint::from(4u32), BigUint::from(2u32)),
                (BigUint::from(6u32), BigUint::from(1u32))
            ]
        );
        assert_eq!(
            elliptic_sw(&t, 6).abs_histogram(),
            elliptic_histogram(6)
        );
    }

    #[test]
    fn horikawa_sign() {
        let k = g("K");
        assert_eq!(minimal_general_type_sw(&k, 7).render(), "+1*exp(K) -1*exp(-K)");
        assert_eq!(minimal_general_type_sw(&k, 8).render(), "+1*exp(K) +1*exp(-K)");
    }

    #[test]
    fn surgery_on_e4() {
        let t = g("T");
        let e4 = elliptic_sw(&t, 4);
        let tref = sw_knot_surgery(&e4, &t, &TorusKnot::new(2, 3).unwrap()).unwrap();
        assert_eq!(
            tref.render(),
            "+1*exp(4T) -3*exp(2T) +4 -3*exp(-2T) +1*exp(-4T)"
        );
        let k25 = sw_knot_surgery(&e4, &t, &TorusKnot::new(2, 5).unwrap()).unwrap();
        let mut a: Vec<u32> = k25.terms().map(|(_, c)| c.magnitude().to_u32().unwrap()).collect();
        a.sort();
        // [1,-2,1] * [1,-1,1,-1,1] = [1,-3,4,-4,4,-3,1]
        assert_eq!(a, vec![1, 1, 3, 3, 4, 4, 4]);
        assert_ne!(tref.abs_histogram(), k25.abs_histogram());
    }

    #[test]
    fn x4_from_gluing() {
        let f = g("f");
        let x4 = sw_fiber_sum_torus(&SwExpr::one(), &SwExpr::one(), &f).unwrap();
        assert_eq!(x4.render(), "+1*exp(2f) -2 +1*exp(-2f)");
        let b = basic_classes_of(&FactoredSw::from_expr(&x4));
        assert_eq!(b.count, BigUint::from(3u32));
        assert_eq!(b.count_up_to_sign, BigUint::from(2u32));
        assert_eq!(b.classes.unwrap(), vec!["2f", "0", "-2f"]);
    }

    #[test]
    fn designated_propagation() {
        let d = |p| Designated {
            class: "K".into(),
            pairing: p,
        };
        assert_eq!(
            propagate_designated_class(&d(4), &d(4), 3, "K_Z").unwrap().class,
            "K_Z"
        );
        assert!(matches!(
            propagate_designated_class(&d(4), &d(2), 3, "K_Z"),
            Err(SwError::PairingMismatch { .. })
        ));
    }

    #[test]
    fn w_small_cases() {
        let a = w_basic_classes(0, 1, 1, false).unwrap();
        assert_eq!(a.count, BigUint::from(3u32));
        assert_eq!(a.count_up_to_sign, BigUint::from(3u32));
        let b = w_basic_classes(0, 1, 2, false).unwrap();
        assert!(b.count > a.count);
        assert!(w_basic_classes(0, 0, 1, false).is_err());
    }
}
