use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use num_bigint::{BigInt, BigUint};
use num_traits::{Signed, ToPrimitive, Zero};
use serde::de::Error as _;
use serde::{Deserialize, Deserializer, Serialize, Serializer};
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum RingError {
    #[error("class `{name}` appears with two provenances: `{first}` and `{second}`")]
    BasisClash {
        name: String,
        first: String,
        second: String,
    },
    #[error("malformed group-ring element: {0}")]
    Malformed(String),
}

/// A named second-cohomology class together with where it came from.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct ClassGen {
    pub name: String,
    pub provenance: String,
}

impl ClassGen {
    pub fn new(name: impl Into<String>, provenance: impl Into<String>) -> Self {
        ClassGen {
            name: name.into(),
            provenance: provenance.into(),
        }
    }

    /// The part of the name before `@`.
    pub fn label(&self) -> &str {
        self.name.split('@').next().unwrap_or(&self.name)
    }
}

/// Generators sorted by name; exponent vectors index into this order.
#[derive(Debug, Clone, Default, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct ClassBasis {
    gens: Vec<ClassGen>,
}

impl ClassBasis {
    pub fn new(gens: impl IntoIterator<Item = ClassGen>) -> Result<Self, RingError> {
        let mut b = ClassBasis::default();
        for g in gens {
            b.insert(g)?;
        }
        Ok(b)
    }

    fn insert(&mut self, g: ClassGen) -> Result<usize, RingError> {
        match self.gens.binary_search_by(|x| x.name.cmp(&g.name)) {
            Ok(i) => {
                if self.gens[i].provenance != g.provenance {
                    return Err(RingError::BasisClash {
                        name: g.name,
                        first: self.gens[i].provenance.clone(),
                        second: g.provenance,
                    });
                }
                Ok(i)
            }
            Err(i) => {
                self.gens.insert(i, g);
                Ok(i)
            }
        }
    }

    pub fn len(&self) -> usize {
        self.gens.len()
    }

    pub fn is_empty(&self) -> bool {
        self.gens.is_empty()
    }

    pub fn gens(&self) -> &[ClassGen] {
        &self.gens
    }

    pub fn index_of(&self, name: &str) -> Option<usize> {
        self.gens.binary_search_by(|x| x.name.as_str().cmp(name)).ok()
    }

    /// Union by name; returns the merged basis and the index maps of both inputs.
    fn merge(&self, other: &ClassBasis) -> Result<(ClassBasis, Vec<usize>, Vec<usize>), RingError> {
        let mut merged = self.clone();
        for g in &other.gens {
            merged.insert(g.clone())?;
        }
        let map = |b: &ClassBasis| -> Vec<usize> {
            b.gens
                .iter()
                .map(|g| merged.index_of(&g.name).expect("merged basis contains input"))
                .collect()
        };
        let ms = map(self);
        let mo = map(other);
        Ok((merged, ms, mo))
    }
}

/// An element of the integral group ring Z[H²] over a finite set of named
/// classes: a finite map from exponent vectors to nonzero integers.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct SwExpr {
    basis: ClassBasis,
    terms: BTreeMap<Vec<i64>, BigInt>,
}

impl Default for SwExpr {
    fn default() -> Self {
        SwExpr::zero()
    }
}

fn remap(v: &[i64], map: &[usize], len: usize) -> Vec<i64> {
    let mut out = vec![0; len];
    for (i, &e) in v.iter().enumerate() {
        out[map[i]] = e;
    }
    out
}

impl SwExpr {
    pub fn zero() -> Self {
        SwExpr {
            basis: ClassBasis::default(),
            terms: BTreeMap::new(),
        }
    }

    pub fn constant(c: impl Into<BigInt>) -> Self {
        let c = c.into();
        let mut terms = BTreeMap::new();
        if !c.is_zero() {
            terms.insert(Vec::new(), c);
        }
        SwExpr {
            basis: ClassBasis::default(),
            terms,
        }
    }

    pub fn one() -> Self {
        SwExpr::constant(1)
    }

    /// coef · exp(Σ kᵢ·classᵢ)
    pub fn term(
        classes: &[(ClassGen, i64)],
        coef: impl Into<BigInt>,
    ) -> Result<Self, RingError> {
        let basis = ClassBasis::new(classes.iter().map(|(g, _)| g.clone()))?;
        let mut v = vec![0; basis.len()];
        for (g, k) in classes {
            v[basis.index_of(&g.name).unwrap()] += k;
        }
        let mut e = SwExpr {
            basis,
            terms: BTreeMap::new(),
        };
        e.add_term(v, coef.into());
        Ok(e)
    }

    /// exp(k·class)
    pub fn exp(class: &ClassGen, k: i64) -> Self {
        SwExpr::term(&[(class.clone(), k)], 1).expect("single class cannot clash")
    }

    /// Builds an element from raw parts, dropping zero coefficients.
    pub fn from_parts(
        basis: ClassBasis,
        terms: impl IntoIterator<Item = (Vec<i64>, BigInt)>,
    ) -> Result<Self, RingError> {
        let mut e = SwExpr {
            basis,
            terms: BTreeMap::new(),
        };
        for (v, c) in terms {
            if v.len() != e.basis.len() {
                return Err(RingError::Malformed(format!(
                    "exponent vector of length {} over a basis of {}",
                    v.len(),
                    e.basis.len()
                )));
            }
            e.add_term(v, c);
        }
        Ok(e)
    }

    fn add_term(&mut self, v: Vec<i64>, c: BigInt) {
        if c.is_zero() {
            return;
        }
        use std::collections::btree_map::Entry;
        match self.terms.entry(v) {
            Entry::Vacant(e) => {
                e.insert(c);
            }
            Entry::Occupied(mut e) => {
                *e.get_mut() += c;
                if e.get().is_zero() {
                    e.remove();
                }
            }
        }
    }

    pub fn basis(&self) -> &ClassBasis {
        &self.basis
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Vec<i64>, &BigInt)> {
        self.terms.iter()
    }

    pub fn term_count(&self) -> usize {
        self.terms.len()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    /// True when every term has the zero exponent vector.
    pub fn is_constant(&self) -> bool {
        self.terms.keys().all(|v| v.iter().all(|&e| e == 0))
    }

    pub fn constant_term(&self) -> BigInt {
        self.terms
            .iter()
            .find(|(v, _)| v.iter().all(|&e| e == 0))
            .map(|(_, c)| c.clone())
            .unwrap_or_else(BigInt::zero)
    }

    /// Coefficient of exp(Σ kᵢ·classᵢ), classes named.
    pub fn coefficient(&self, exps: &[(&str, i64)]) -> BigInt {
        let mut v = vec![0; self.basis.len()];
        for (name, k) in exps {
            match self.basis.index_of(name) {
                Some(i) => v[i] += k,
                None if *k == 0 => {}
                None => return BigInt::zero(),
            }
        }
        self.terms.get(&v).cloned().unwrap_or_else(BigInt::zero)
    }

    fn over(&self, basis: &ClassBasis, map: &[usize]) -> BTreeMap<Vec<i64>, BigInt> {
        self.terms
            .iter()
            .map(|(v, c)| (remap(v, map, basis.len()), c.clone()))
            .collect()
    }

    /// Adds classes to the basis without changing the element.
    pub fn with_classes(&self, extra: &[ClassGen]) -> Result<Self, RingError> {
        let other = ClassBasis::new(extra.iter().cloned())?;
        let (basis, ms, _) = self.basis.merge(&other)?;
        let terms = self.over(&basis, &ms);
        Ok(SwExpr { basis, terms })
    }

    pub fn add(&self, other: &SwExpr) -> Result<SwExpr, RingError> {
        let (basis, ms, mo) = self.basis.merge(&other.basis)?;
        let mut out = SwExpr {
            terms: self.over(&basis, &ms),
            basis,
        };
        for (v, c) in &other.terms {
            out.add_term(remap(v, &mo, out.basis.len()), c.clone());
        }
        Ok(out)
    }

    pub fn neg(&self) -> SwExpr {
        SwExpr {
            basis: self.basis.clone(),
            terms: self.terms.iter().map(|(v, c)| (v.clone(), -c)).collect(),
        }
    }

    pub fn sub(&self, other: &SwExpr) -> Result<SwExpr, RingError> {
        self.add(&other.neg())
    }

    pub fn scale(&self, k: &BigInt) -> SwExpr {
        if k.is_zero() {
            return SwExpr {
                basis: self.basis.clone(),
                terms: BTreeMap::new(),
            };
        }
        SwExpr {
            basis: self.basis.clone(),
            terms: self.terms.iter().map(|(v, c)| (v.clone(), c * k)).collect(),
        }
    }

    pub fn mul(&self, other: &SwExpr) -> Result<SwExpr, RingError> {
        let (basis, ms, mo) = self.basis.merge(&other.basis)?;
        let n = basis.len();
        let a: Vec<_> = self.terms.iter().map(|(v, c)| (remap(v, &ms, n), c)).collect();
        let b: Vec<_> = other.terms.iter().map(|(v, c)| (remap(v, &mo, n), c)).collect();
        let mut terms: BTreeMap<Vec<i64>, BigInt> = BTreeMap::new();
        for (va, ca) in &a {
            for (vb, cb) in &b {
                let v: Vec<i64> = va.iter().zip(vb).map(|(x, y)| x + y).collect();
                *terms.entry(v).or_insert_with(BigInt::zero) += *ca * *cb;
            }
        }
        terms.retain(|_, c| !c.is_zero());
        Ok(SwExpr { basis, terms })
    }

    pub fn pow(&self, n: u32) -> SwExpr {
        let mut acc = SwExpr::one();
        let mut base = self.clone();
        let mut n = n;
        while n > 0 {
            if n & 1 == 1 {
                acc = acc.mul(&base).expect("same basis");
            }
            n >>= 1;
            if n > 0 {
                base = base.mul(&base).expect("same basis");
            }
        }
        if acc.basis.is_empty() && !self.basis.is_empty() {
            acc = acc.with_classes(self.basis.gens()).expect("fresh basis");
        }
        acc
    }

    /// Negates every exponent (charge conjugation).
    pub fn conjugate(&self) -> SwExpr {
        SwExpr {
            basis: self.basis.clone(),
            terms: self
                .terms
                .iter()
                .map(|(v, c)| (v.iter().map(|e| -e).collect(), c.clone()))
                .collect(),
        }
    }

    /// `Some(±1)` when `conjugate(self) = ±self`.
    pub fn conjugation_sign(&self) -> Option<i32> {
        let conj = self.conjugate();
        if conj.terms == self.terms {
            Some(1)
        } else if conj.terms == self.neg().terms {
            Some(-1)
        } else {
            None
        }
    }

    /// Replaces every occurrence of `from` by `factor · to`.
    pub fn substitute(&self, from: &str, to: &ClassGen, factor: i64) -> Result<SwExpr, RingError> {
        let Some(idx) = self.basis.index_of(from) else {
            return self.with_classes(std::slice::from_ref(to));
        };
        let kept: Vec<ClassGen> = self
            .basis
            .gens()
            .iter()
            .filter(|g| g.name != from)
            .cloned()
            .collect();
        let mut basis = ClassBasis::new(kept)?;
        let target = basis.insert(to.clone())?;
        let mut out = SwExpr {
            basis,
            terms: BTreeMap::new(),
        };
        for (v, c) in &self.terms {
            let mut w = vec![0; out.basis.len()];
            for (i, &e) in v.iter().enumerate() {
                if i == idx {
                    w[target] += factor * e;
                } else {
                    let j = out.basis.index_of(&self.basis.gens()[i].name).unwrap();
                    w[j] += e;
                }
            }
            out.add_term(w, c.clone());
        }
        Ok(out)
    }

    /// Renames classes; names must stay distinct.
    pub fn map_classes(&self, f: impl Fn(&ClassGen) -> ClassGen) -> Result<SwExpr, RingError> {
        let renamed: Vec<ClassGen> = self.basis.gens().iter().map(&f).collect();
        let basis = ClassBasis::new(renamed.iter().cloned())?;
        if basis.len() != renamed.len() {
            return Err(RingError::Malformed("renaming merged two classes".into()));
        }
        let map: Vec<usize> = renamed
            .iter()
            .map(|g| basis.index_of(&g.name).unwrap())
            .collect();
        let n = basis.len();
        let terms: Vec<_> = self
            .terms
            .iter()
            .map(|(v, c)| (remap(v, &map, n), c.clone()))
            .collect();
        SwExpr::from_parts(basis, terms)
    }

    /// Classes with a nonzero exponent in some term.
    pub fn used_classes(&self) -> Vec<&ClassGen> {
        (0..self.basis.len())
            .filter(|&i| self.terms.keys().any(|v| v[i] != 0))
            .map(|i| &self.basis.gens()[i])
            .collect()
    }

    /// Same element over the smallest basis.
    pub fn trimmed(&self) -> SwExpr {
        let keep: Vec<usize> = (0..self.basis.len())
            .filter(|&i| self.terms.keys().any(|v| v[i] != 0))
            .collect();
        let basis = ClassBasis {
            gens: keep.iter().map(|&i| self.basis.gens()[i].clone()).collect(),
        };
        let terms = self
            .terms
            .iter()
            .map(|(v, c)| (keep.iter().map(|&i| v[i]).collect(), c.clone()))
            .collect();
        SwExpr { basis, terms }
    }

    /// Multiset of |coefficients|, as value → multiplicity.
    pub fn abs_histogram(&self) -> BTreeMap<BigUint, BigUint> {
        let mut h: BTreeMap<BigUint, BigUint> = BTreeMap::new();
        for c in self.terms.values() {
            *h.entry(c.magnitude().clone()).or_insert_with(BigUint::zero) += 1u32;
        }
        h
    }

    /// Support as exponent maps keyed by class name.
    pub fn support(&self) -> Vec<Vec<(String, i64)>> {
        self.terms
            .keys()
            .map(|v| {
                v.iter()
                    .enumerate()
                    .filter(|(_, &e)| e != 0)
                    .map(|(i, &e)| (self.basis.gens()[i].name.clone(), e))
                    .collect()
            })
            .collect()
    }

    pub(crate) fn support_vectors(&self) -> BTreeSet<Vec<i64>> {
        self.terms.keys().cloned().collect()
    }

    /// Display names: the short label where it is unambiguous among used classes.
    fn display_names(&self) -> Vec<String> {
        let used: Vec<&ClassGen> = self.used_classes();
        self.basis
            .gens()
            .iter()
            .map(|g| {
                let clashes = used
                    .iter()
                    .filter(|u| u.label() == g.label() && u.name != g.name)
                    .count();
                if clashes == 0 {
                    g.label().to_string()
                } else {
                    g.name.clone()
                }
            })
            .collect()
    }

    /// Canonical text: terms in descending lexicographic order of exponent
    /// vectors, e.g. `+1*exp(2T) -2 +1*exp(-2T)`.
    pub fn render(&self) -> String {
        self.render_with_names(&self.display_names())
    }

    /// Renders with caller-chosen display names, one per basis entry.
    pub(crate) fn render_with_names(&self, names: &[String]) -> String {
        if self.terms.is_empty() {
            return "0".to_string();
        }
        let mut parts = Vec::with_capacity(self.terms.len());
        for (v, c) in self.terms.iter().rev() {
            let sign = if c.is_negative() { "-" } else { "+" };
            let mag = c.magnitude();
            let mut exps = String::new();
            for (i, &e) in v.iter().enumerate() {
                if e == 0 {
                    continue;
                }
                if e < 0 {
                    exps.push('-');
                } else if !exps.is_empty() {
                    exps.push('+');
                }
                if e.abs() != 1 {
                    exps.push_str(&e.abs().to_string());
                }
                exps.push_str(&names[i]);
            }
            if exps.is_empty() {
                parts.push(format!("{sign}{mag}"));
            } else {
                parts.push(format!("{sign}{mag}*exp({exps})"));
            }
        }
        parts.join(" ")
    }
}

impl fmt::Display for SwExpr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.render())
    }
}

#[derive(Serialize, Deserialize)]
struct TermJson {
    exp: Vec<i64>,
    coef: serde_json::Value,
}

#[derive(Serialize, Deserialize)]
struct SwExprJson {
    basis: Vec<ClassGen>,
    terms: Vec<TermJson>,
}

pub(crate) fn bigint_to_json(c: &BigInt) -> serde_json::Value {
    match c.to_i64() {
        Some(i) => serde_json::Value::from(i),
        None => serde_json::Value::from(c.to_string()),
    }
}

pub(crate) fn bigint_from_json(v: &serde_json::Value) -> Option<BigInt> {
    match v {
        serde_json::Value::Number(n) => n.as_i64().map(BigInt::from),
        serde_json::Value::String(s) => s.parse().ok(),
        _ => None,
    }
}

impl Serialize for SwExpr {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        SwExprJson {
            basis: self.basis.gens().to_vec(),
            terms: self
                .terms
                .iter()
                .map(|(v, c)| TermJson {
                    exp: v.clone(),
                    coef: bigint_to_json(c),
                })
                .collect(),
        }
        .serialize(s)
    }
}

impl<'de> Deserialize<'de> for SwExpr {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let raw = SwExprJson::deserialize(d)?;
        let given: Vec<String> = raw.basis.iter().map(|g| g.name.clone()).collect();
        let basis = ClassBasis::new(raw.basis).map_err(D::Error::custom)?;
        if basis.len() != given.len() {
            return Err(D::Error::custom("duplicate class in basis"));
        }
        // exponent vectors in the file follow the file's basis order
        let map: Vec<usize> = given.iter().map(|n| basis.index_of(n).unwrap()).collect();
        let mut terms = Vec::with_capacity(raw.terms.len());
        for t in raw.terms {
            if t.exp.len() != map.len() {
                return Err(D::Error::custom("exponent vector length differs from basis"));
            }
            let coef = bigint_from_json(&t.coef)
                .ok_or_else(|| D::Error::custom("coefficient must be an integer"))?;
            terms.push((remap(&t.exp, &map, map.len()), coef));
        }
        SwExpr::from_parts(basis, terms).map_err(D::Error::custom)
    }
}
