use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use num_bigint::{BigInt, BigUint};
use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use super::ring::{bigint_from_json, bigint_to_json, ClassGen, RingError, SwExpr};

/// A group-ring element kept as `scalar · Π factors` where the factors use
/// pairwise disjoint sets of classes.
///
/// Invariants that only depend on the coefficient multiset and the support
/// (term count, classes up to sign, |coefficient| histogram) are computed
/// factor by factor, so products with millions of terms stay cheap.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FactoredSw {
    scalar: BigInt,
    factors: Vec<SwExpr>,
}

impl Default for FactoredSw {
    fn default() -> Self {
        FactoredSw::one()
    }
}

fn class_names(e: &SwExpr) -> BTreeSet<String> {
    e.used_classes().into_iter().map(|g| g.name.clone()).collect()
}

impl FactoredSw {
    pub fn one() -> Self {
        FactoredSw {
            scalar: BigInt::one(),
            factors: Vec::new(),
        }
    }

    pub fn from_expr(e: &SwExpr) -> Self {
        let mut f = FactoredSw::one();
        f.mul_expr_in_place(e).expect("single factor cannot clash");
        f
    }

    pub fn scalar(&self) -> &BigInt {
        &self.scalar
    }

    pub fn factors(&self) -> &[SwExpr] {
        &self.factors
    }

    pub fn is_zero(&self) -> bool {
        self.scalar.is_zero()
    }

    fn set_zero(&mut self) {
        self.scalar = BigInt::zero();
        self.factors.clear();
    }

    fn mul_expr_in_place(&mut self, e: &SwExpr) -> Result<(), RingError> {
        if self.is_zero() {
            return Ok(());
        }
        if e.is_zero() {
            self.set_zero();
            return Ok(());
        }
        let e = e.trimmed();
        if e.is_constant() {
            self.scalar *= e.constant_term();
            return Ok(());
        }
        let names = class_names(&e);
        let mut merged = e;
        let mut rest = Vec::with_capacity(self.factors.len());
        for f in self.factors.drain(..) {
            if class_names(&f).is_disjoint(&names) {
                rest.push(f);
            } else {
                merged = merged.mul(&f)?;
            }
        }
        self.factors = rest;
        let merged = merged.trimmed();
        if merged.is_zero() {
            self.set_zero();
        } else if merged.is_constant() {
            self.scalar *= merged.constant_term();
        } else {
            self.factors.push(merged);
        }
        self.factors.sort_by(|a, b| {
            let ka = a.basis().gens().first().map(|g| g.name.clone());
            let kb = b.basis().gens().first().map(|g| g.name.clone());
            ka.cmp(&kb)
        });
        Ok(())
    }

    pub fn mul_expr(&self, e: &SwExpr) -> Result<Self, RingError> {
        let mut out = self.clone();
        out.mul_expr_in_place(e)?;
        Ok(out)
    }

    pub fn mul(&self, other: &FactoredSw) -> Result<Self, RingError> {
        let mut out = self.clone();
        out.scalar *= &other.scalar;
        if out.is_zero() {
            out.set_zero();
            return Ok(out);
        }
        for f in &other.factors {
            out.mul_expr_in_place(f)?;
        }
        Ok(out)
    }

    /// Classes used by some factor.
    pub fn classes(&self) -> Vec<&ClassGen> {
        self.factors.iter().flat_map(|f| f.used_classes()).collect()
    }

    /// Number of nonzero terms of the expanded element.
    pub fn term_count(&self) -> BigUint {
        if self.is_zero() {
            return BigUint::zero();
        }
        self.factors
            .iter()
            .map(|f| BigUint::from(f.term_count()))
            .fold(BigUint::one(), |a, b| a * b)
    }

    /// The expanded element, or `None` when it has more than `limit` terms.
    pub fn expand(&self, limit: usize) -> Option<SwExpr> {
        if self.term_count() > BigUint::from(limit) {
            return None;
        }
        let mut acc = SwExpr::constant(self.scalar.clone());
        for f in &self.factors {
            acc = acc.mul(f).expect("factors are disjoint");
        }
        Some(acc)
    }

    /// Multiset of |coefficients| as value → multiplicity.
    pub fn abs_histogram(&self) -> BTreeMap<BigUint, BigUint> {
        let mut h: BTreeMap<BigUint, BigUint> = BTreeMap::new();
        if self.is_zero() {
            return h;
        }
        h.insert(self.scalar.magnitude().clone(), BigUint::one());
        for f in &self.factors {
            let fh = f.abs_histogram();
            let mut next: BTreeMap<BigUint, BigUint> = BTreeMap::new();
            for (a, n) in &h {
                for (b, m) in &fh {
                    *next.entry(a * b).or_insert_with(BigUint::zero) += n * m;
                }
            }
            h = next;
        }
        h
    }

    /// Number of basic classes counted up to the involution K ↦ −K.
    pub fn count_up_to_sign(&self) -> BigUint {
        if self.is_zero() {
            return BigUint::zero();
        }
        let mut total = BigUint::one();
        let mut paired = BigUint::one();
        let mut zero_in = true;
        for f in &self.factors {
            let s = f.support_vectors();
            let p = s
                .iter()
                .filter(|v| s.contains(&v.iter().map(|e| -e).collect::<Vec<_>>()))
                .count();
            let z = s.iter().any(|v| v.iter().all(|&e| e == 0));
            total *= BigUint::from(s.len());
            paired *= BigUint::from(p);
            zero_in &= z;
        }
        let z = if zero_in { BigUint::one() } else { BigUint::zero() };
        // orbits of size one (v with -v missing, or v = 0) plus pairs
        total - (paired - z) / 2u32
    }

    pub fn conjugation_sign(&self) -> Option<i32> {
        let mut sign = 1;
        for f in &self.factors {
            sign *= f.conjugation_sign()?;
        }
        Some(sign)
    }

    fn display_names(&self) -> BTreeMap<String, String> {
        let used = self.classes();
        used.iter()
            .map(|g| {
                let ambiguous = used
                    .iter()
                    .any(|u| u.label() == g.label() && u.name != g.name);
                let shown = if ambiguous {
                    g.name.clone()
                } else {
                    g.label().to_string()
                };
                (g.name.clone(), shown)
            })
            .collect()
    }

    /// Expanded canonical text when at most `limit` terms, otherwise the
    /// product of canonical factors.
    pub fn render(&self, limit: usize) -> String {
        let names = self.display_names();
        let name_list = |e: &SwExpr| -> Vec<String> {
            e.basis()
                .gens()
                .iter()
                .map(|g| names.get(&g.name).cloned().unwrap_or_else(|| g.name.clone()))
                .collect()
        };
        if let Some(e) = self.expand(limit) {
            return e.render_with_names(&name_list(&e));
        }
        let mut parts = Vec::new();
        if !self.scalar.is_one() {
            parts.push(self.scalar.to_string());
        }
        for f in &self.factors {
            parts.push(format!("({})", f.render_with_names(&name_list(f))));
        }
        parts.join(" * ")
    }
}

impl fmt::Display for FactoredSw {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.render(4096))
    }
}

#[derive(Serialize, Deserialize)]
struct FactoredJson {
    scalar: serde_json::Value,
    factors: Vec<SwExpr>,
}

impl Serialize for FactoredSw {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        FactoredJson {
            scalar: bigint_to_json(&self.scalar),
            factors: self.factors.clone(),
        }
        .serialize(s)
    }
}

impl<'de> Deserialize<'de> for FactoredSw {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        use serde::de::Error;
        let raw = FactoredJson::deserialize(d)?;
        let scalar = bigint_from_json(&raw.scalar)
            .ok_or_else(|| D::Error::custom("scalar must be an integer"))?;
        let mut out = FactoredSw {
            scalar,
            factors: Vec::new(),
        };
        for f in &raw.factors {
            out.mul_expr_in_place(f).map_err(D::Error::custom)?;
        }
        Ok(out)
    }
}

/// Whether all |coefficients| are 1, used by callers reporting on the proxy.
pub fn all_unit(h: &BTreeMap<BigUint, BigUint>) -> bool {
    h.keys().all(|k| k.is_one())
}
