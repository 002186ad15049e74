use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use num_integer::Integer;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use super::ring::{ClassBasis, ClassGen, SwExpr};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("invalid torus knot ({p},{q}): {reason}")]
pub struct InvalidKnot {
    pub p: i64,
    pub q: i64,
    pub reason: String,
}

/// The (p, q) torus knot with 2 ≤ p < q and gcd(p, q) = 1.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(try_from = "(i64, i64)", into = "(i64, i64)")]
pub struct TorusKnot {
    p: i64,
    q: i64,
}

impl TorusKnot {
    pub fn new(p: i64, q: i64) -> Result<Self, InvalidKnot> {
        let bad = |reason: &str| InvalidKnot {
            p,
            q,
            reason: reason.to_string(),
        };
        if p < 2 || q < 2 {
            return Err(bad("both parameters must be at least 2"));
        }
        if p.gcd(&q) != 1 {
            return Err(bad("parameters must be coprime"));
        }
        if (p - 1).checked_mul(q - 1).is_none_or(|d| d > 1_000_000) {
            return Err(bad("genus too large"));
        }
        let (p, q) = if p < q { (p, q) } else { (q, p) };
        Ok(TorusKnot { p, q })
    }

    pub fn p(&self) -> i64 {
        self.p
    }

    pub fn q(&self) -> i64 {
        self.q
    }

    /// Half the degree span of Δ, which is also the Seifert genus.
    pub fn genus(&self) -> i64 {
        (self.p - 1) * (self.q - 1) / 2
    }

    /// Symmetric Alexander polynomial as exponent → coefficient.
    ///
    /// Uses the semigroup form Δ(t) = 1 − (1 − t)·Σ_{gaps s} tˢ, where the gaps
    /// are the non-negative integers outside the semigroup ⟨p, q⟩, then
    /// shifts by t^{−g}.
    pub fn alexander(&self) -> BTreeMap<i64, i64> {
        let g = self.genus();
        let top = 2 * g;
        let mut in_semigroup = vec![false; (top + 1) as usize];
        in_semigroup[0] = true;
        for s in 1..=top {
            let s_us = s as usize;
            in_semigroup[s_us] = (s >= self.p && in_semigroup[(s - self.p) as usize])
                || (s >= self.q && in_semigroup[(s - self.q) as usize]);
        }
        let mut coeffs: BTreeMap<i64, i64> = BTreeMap::new();
        *coeffs.entry(0).or_default() += 1;
        for s in 0..top {
            if !in_semigroup[s as usize] {
                *coeffs.entry(s).or_default() -= 1;
                *coeffs.entry(s + 1).or_default() += 1;
            }
        }
        coeffs
            .into_iter()
            .filter(|(_, c)| *c != 0)
            .map(|(e, c)| (e - g, c))
            .collect()
    }

    /// Δ_K(e^{2·class}).
    pub fn delta_at(&self, class: &ClassGen) -> SwExpr {
        let basis = ClassBasis::new([class.clone()]).expect("one class");
        SwExpr::from_parts(
            basis,
            self.alexander()
                .into_iter()
                .map(|(e, c)| (vec![2 * e], BigInt::from(c))),
        )
        .expect("well-formed")
    }
}

impl TryFrom<(i64, i64)> for TorusKnot {
    type Error = InvalidKnot;

    fn try_from((p, q): (i64, i64)) -> Result<Self, Self::Error> {
        TorusKnot::new(p, q)
    }
}

impl From<TorusKnot> for (i64, i64) {
    fn from(k: TorusKnot) -> Self {
        (k.p, k.q)
    }
}

impl fmt::Display for TorusKnot {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({},{})", self.p, self.q)
    }
}

impl FromStr for TorusKnot {
    type Err = InvalidKnot;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let bad = || InvalidKnot {
            p: 0,
            q: 0,
            reason: format!("cannot parse `{s}`, expected (p,q)"),
        };
        let inner = s
            .trim()
            .strip_prefix('(')
            .and_then(|r| r.strip_suffix(')'))
            .ok_or_else(bad)?;
        let (a, b) = inner.split_once(',').ok_or_else(bad)?;
        let p = a.trim().parse().map_err(|_| bad())?;
        let q = b.trim().parse().map_err(|_| bad())?;
        TorusKnot::new(p, q)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    // (t^{pq} − 1)(t − 1) / ((t^p − 1)(t^q − 1)) by long division on dense
    // coefficient vectors, lowest degree first.
    fn by_division(p: usize, q: usize) -> Vec<i64> {
        let mut num = vec![0i64; p * q + 2];
        num[p * q + 1] += 1;
        num[p * q] -= 1;
        num[1] -= 1;
        num[0] += 1;
        let mut den = vec![0i64; p + q + 1];
        den[p + q] += 1;
        den[p] -= 1;
        den[q] -= 1;
        den[0] += 1;
        let dn = den.len() - 1;
        let mut quot = vec![0i64; num.len() - dn];
        for i in (0..quot.len()).rev() {
            let c = num[i + dn];
            quot[i] = c;
            for (j, d) in den.iter().enumerate() {
                num[i + j] -= c * d;
            }
        }
        assert!(num.iter().all(|&x| x == 0), "remainder must vanish");
        quot
    }

    #[test]
    fn trefoil_and_friends() {
        let k = TorusKnot::new(2, 3).unwrap();
        let expect: BTreeMap<i64, i64> = [(-1, 1), (0, -1), (1, 1)].into_iter().collect();
        assert_eq!(k.alexander(), expect);
        let k = TorusKnot::new(2, 5).unwrap();
        let expect: BTreeMap<i64, i64> =
            [(-2, 1), (-1, -1), (0, 1), (1, -1), (2, 1)].into_iter().collect();
        assert_eq!(k.alexander(), expect);
    }

    #[test]
    fn semigroup_form_agrees_with_division() {
        for p in 2..8usize {
            for q in (p + 1)..20usize {
                if (p as i64).gcd(&(q as i64)) != 1 {
                    continue;
                }
                let k = TorusKnot::new(p as i64, q as i64).unwrap();
                let dense = by_division(p, q);
                let g = k.genus();
                let from_div: BTreeMap<i64, i64> = dense
                    .iter()
                    .enumerate()
                    .filter(|(_, &c)| c != 0)
                    .map(|(e, &c)| (e as i64 - g, c))
                    .collect();
                assert_eq!(k.alexander(), from_div, "T({p},{q})");
            }
        }
    }

    #[test]
    fn invalid_knots() {
        assert!(TorusKnot::new(2, 4).is_err());
        assert!(TorusKnot::new(1, 5).is_err());
        assert!("(2,7)".parse::<TorusKnot>().is_ok());
        assert!("2,7".parse::<TorusKnot>().is_err());
    }

    #[test]
    fn delta_in_a_class() {
        let t = ClassGen::new("T", "fiber");
        let d = TorusKnot::new(2, 3).unwrap().delta_at(&t);
        assert_eq!(d.render(), "+1*exp(2T) -1 +1*exp(-2T)");
    }
}
