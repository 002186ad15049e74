//! Characteristic numbers of closed simply connected 4-manifolds and the
//! lattice of the (χ, c)-plane.
//!
//! Everything here is exact. `CharNumbers` holds `i64` fields and every
//! derivation uses checked arithmetic, so an overflow surfaces as an error
//! instead of a wrong congruence. Slopes and intercepts of the named lines
//! are `BigRational`.

use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{Signed, ToPrimitive};
use serde::{Deserialize, Serialize};
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum InvariantError {
    #[error("σ + e = {0} is not divisible by 4, so χ is not an integer")]
    NonIntegralChi(i64),
    #[error("negative Betti number: b2+ = {b2plus}, b2- = {b2minus}")]
    NegativeBetti { b2plus: i64, b2minus: i64 },
    #[error("point ({chi}, {c}) is not allowed for a spin manifold: {reasons}")]
    NotAllowed { chi: i64, c: i64, reasons: String },
    #[error("χ(X) = 0, the f-line is undefined")]
    ZeroChi,
    #[error("integer overflow while combining characteristic numbers")]
    Overflow,
}

/// Exact tuple (e, σ, χ, c, b₂⁺, b₂⁻) for a closed simply connected 4-manifold.
///
/// Only constructible through the checked constructors, so the identities
/// `e = 2 + b₂⁺ + b₂⁻`, `σ = b₂⁺ − b₂⁻`, `4χ = σ + e`, `c = 3σ + 2e` always hold.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "RawCharNumbers", into = "RawCharNumbers")]
pub struct CharNumbers {
    e: i64,
    sigma: i64,
    chi: i64,
    c: i64,
    b2plus: i64,
    b2minus: i64,
}

#[derive(Serialize, Deserialize)]
struct RawCharNumbers {
    e: i64,
    sigma: i64,
    chi: i64,
    c: i64,
    b2plus: i64,
    b2minus: i64,
}

impl From<CharNumbers> for RawCharNumbers {
    fn from(n: CharNumbers) -> Self {
        RawCharNumbers {
            e: n.e,
            sigma: n.sigma,
            chi: n.chi,
            c: n.c,
            b2plus: n.b2plus,
            b2minus: n.b2minus,
        }
    }
}

impl TryFrom<RawCharNumbers> for CharNumbers {
    type Error = InvariantError;

    fn try_from(raw: RawCharNumbers) -> Result<Self, Self::Error> {
        let n = CharNumbers::from_betti(raw.b2plus, raw.b2minus)?;
        if (n.e, n.sigma, n.chi, n.c) != (raw.e, raw.sigma, raw.chi, raw.c) {
            return Err(InvariantError::NonIntegralChi(raw.sigma + raw.e));
        }
        Ok(n)
    }
}

impl CharNumbers {
    /// Builds the tuple from the Betti numbers b₂⁺ and b₂⁻.
    pub fn from_betti(b2plus: i64, b2minus: i64) -> Result<Self, InvariantError> {
        if b2plus < 0 || b2minus < 0 {
            return Err(InvariantError::NegativeBetti { b2plus, b2minus });
        }
        let e = b2plus
            .checked_add(b2minus)
            .and_then(|s| s.checked_add(2))
            .ok_or(InvariantError::Overflow)?;
        let sigma = b2plus - b2minus;
        Self::from_e_sigma(e, sigma)
    }

    /// Builds the tuple from Euler characteristic and signature.
    pub fn from_e_sigma(e: i64, sigma: i64) -> Result<Self, InvariantError> {
        let sum = sigma.checked_add(e).ok_or(InvariantError::Overflow)?;
        if sum.rem_euclid(4) != 0 {
            return Err(InvariantError::NonIntegralChi(sum));
        }
        // e - 2 ± σ must be even and non-negative
        let b2plus2 = e - 2 + sigma;
        let b2minus2 = e - 2 - sigma;
        if b2plus2 < 0 || b2minus2 < 0 || b2plus2.is_odd() {
            return Err(InvariantError::NegativeBetti {
                b2plus: Integer::div_floor(&b2plus2, &2),
                b2minus: Integer::div_floor(&b2minus2, &2),
            });
        }
        let c = sigma
            .checked_mul(3)
            .and_then(|s3| e.checked_mul(2).and_then(|e2| s3.checked_add(e2)))
            .ok_or(InvariantError::Overflow)?;
        Ok(CharNumbers {
            e,
            sigma,
            chi: sum / 4,
            c,
            b2plus: b2plus2 / 2,
            b2minus: b2minus2 / 2,
        })
    }

    /// Builds the tuple from a lattice point: e = 12χ − c, σ = c − 8χ.
    pub fn from_chi_c(chi: i64, c: i64) -> Result<Self, InvariantError> {
        let e = chi
            .checked_mul(12)
            .and_then(|x| x.checked_sub(c))
            .ok_or(InvariantError::Overflow)?;
        let sigma = chi
            .checked_mul(8)
            .and_then(|x| c.checked_sub(x))
            .ok_or(InvariantError::Overflow)?;
        Self::from_e_sigma(e, sigma)
    }

    pub fn e(&self) -> i64 {
        self.e
    }

    pub fn sigma(&self) -> i64 {
        self.sigma
    }

    pub fn chi(&self) -> i64 {
        self.chi
    }

    pub fn c(&self) -> i64 {
        self.c
    }

    pub fn b2plus(&self) -> i64 {
        self.b2plus
    }

    pub fn b2minus(&self) -> i64 {
        self.b2minus
    }

    pub fn point(&self) -> LatticePoint {
        LatticePoint::new(self.chi, self.c)
    }

    /// Invariants of a fiber sum along a square-zero surface of genus `genus`:
    /// e adds with a 4(g−1) correction and σ is additive.
    pub fn fiber_sum(&self, other: &CharNumbers, genus: i64) -> Result<Self, InvariantError> {
        let e = self
            .e
            .checked_add(other.e)
            .and_then(|s| s.checked_add(4 * (genus - 1)))
            .ok_or(InvariantError::Overflow)?;
        let sigma = self
            .sigma
            .checked_add(other.sigma)
            .ok_or(InvariantError::Overflow)?;
        Self::from_e_sigma(e, sigma)
    }
}

/// Any point of the (χ, c)-plane; validity is the job of [`is_allowed`].
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct LatticePoint {
    pub chi: i64,
    pub c: i64,
}

impl LatticePoint {
    pub const fn new(chi: i64, c: i64) -> Self {
        LatticePoint { chi, c }
    }

    pub fn sigma(&self) -> i64 {
        self.c - 8 * self.chi
    }

    pub fn offset(&self, other: LatticePoint) -> LatticePoint {
        LatticePoint::new(self.chi + other.chi, self.c + other.c)
    }
}

impl fmt::Display for LatticePoint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}, {})", self.chi, self.c)
    }
}

/// A necessary condition for spin symplectic manifolds that a point can fail.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Constraint {
    /// c ≥ 0 (Taubes).
    Nonnegative,
    /// c ≡ 8χ (mod 16) (Rohlin).
    Congruence,
}

impl Constraint {
    pub fn describe(&self) -> &'static str {
        match self {
            Constraint::Nonnegative => "c < 0",
            Constraint::Congruence => "congruence violated",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct AllowedVerdict {
    pub allowed: bool,
    pub violated: Vec<Constraint>,
}

/// Checks c ≥ 0 and c ≡ 8χ (mod 16), reporting every failed constraint.
pub fn is_allowed(p: LatticePoint) -> AllowedVerdict {
    let mut violated = Vec::new();
    if p.c < 0 {
        violated.push(Constraint::Nonnegative);
    }
    if (p.c - 8 * p.chi).rem_euclid(16) != 0 {
        violated.push(Constraint::Congruence);
    }
    AllowedVerdict {
        allowed: violated.is_empty(),
        violated,
    }
}

pub fn char_from_betti(b2plus: i64, b2minus: i64) -> Result<CharNumbers, InvariantError> {
    CharNumbers::from_betti(b2plus, b2minus)
}

/// Homeomorphism data determined by (χ, c) and the type.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct HomeoType {
    pub b2plus: i64,
    pub b2minus: i64,
    pub sigma: i64,
    pub spin: bool,
    /// `Some(n)` when the manifold is homeomorphic to (2n+1)(S²×S²).
    pub connected_sum_n: Option<i64>,
    pub name: Option<String>,
}

pub fn homeo_type(p: LatticePoint, spin: bool) -> Result<HomeoType, InvariantError> {
    if spin {
        let verdict = is_allowed(p);
        if !verdict.allowed {
            let reasons = verdict
                .violated
                .iter()
                .map(Constraint::describe)
                .collect::<Vec<_>>()
                .join(", ");
            return Err(InvariantError::NotAllowed {
                chi: p.chi,
                c: p.c,
                reasons,
            });
        }
    }
    let b2plus = 2 * p.chi - 1;
    let b2minus = 10 * p.chi - 1 - p.c;
    if b2plus < 0 || b2minus < 0 {
        return Err(InvariantError::NegativeBetti { b2plus, b2minus });
    }
    let sigma = p.sigma();
    let (connected_sum_n, name) = if spin && sigma == 0 {
        let n = p.chi - 1;
        (Some(n), Some(format!("{}(S²×S²)", 2 * n + 1)))
    } else {
        (None, None)
    };
    Ok(HomeoType {
        b2plus,
        b2minus,
        sigma,
        spin,
        connected_sum_n,
        name,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum LineName {
    Elliptic,
    Noether,
    NoetherParallel12,
    SignatureZero,
    Ratio876,
    #[serde(rename = "BMY")]
    Bmy,
    FLine,
}

impl LineName {
    pub const NAMED: [LineName; 6] = [
        LineName::Elliptic,
        LineName::NoetherParallel12,
        LineName::Noether,
        LineName::SignatureZero,
        LineName::Ratio876,
        LineName::Bmy,
    ];

    pub fn label(&self) -> &'static str {
        match self {
            LineName::Elliptic => "c=0",
            LineName::Noether => "c=2χ−6",
            LineName::NoetherParallel12 => "c=2χ−12",
            LineName::SignatureZero => "c=8χ",
            LineName::Ratio876 => "c=8.76χ",
            LineName::Bmy => "c=9χ",
            LineName::FLine => "c=f(χ)",
        }
    }
}

impl std::str::FromStr for LineName {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "Elliptic" => Ok(LineName::Elliptic),
            "Noether" => Ok(LineName::Noether),
            "NoetherParallel12" => Ok(LineName::NoetherParallel12),
            "SignatureZero" => Ok(LineName::SignatureZero),
            "Ratio876" => Ok(LineName::Ratio876),
            "BMY" | "Bmy" => Ok(LineName::Bmy),
            "FLine" => Ok(LineName::FLine),
            other => Err(format!("unknown line `{other}`")),
        }
    }
}

/// An affine line c = slope·χ + intercept in the geography plane.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct RegionLine {
    pub name: LineName,
    pub slope: BigRational,
    pub intercept: BigRational,
}

fn rat(n: i64, d: i64) -> BigRational {
    BigRational::new(BigInt::from(n), BigInt::from(d))
}

impl RegionLine {
    pub fn named(name: LineName) -> Option<Self> {
        let (slope, intercept) = match name {
            LineName::Elliptic => (rat(0, 1), rat(0, 1)),
            LineName::Noether => (rat(2, 1), rat(-6, 1)),
            LineName::NoetherParallel12 => (rat(2, 1), rat(-12, 1)),
            LineName::SignatureZero => (rat(8, 1), rat(0, 1)),
            LineName::Ratio876 => (rat(876, 100), rat(0, 1)),
            LineName::Bmy => (rat(9, 1), rat(0, 1)),
            LineName::FLine => return None,
        };
        Some(RegionLine {
            name,
            slope,
            intercept,
        })
    }

    pub fn evaluate(&self, chi: &BigRational) -> BigRational {
        &self.slope * chi + &self.intercept
    }

    pub fn at(&self, chi: i64) -> BigRational {
        self.evaluate(&BigRational::from_integer(chi.into()))
    }

    /// Compares an integer point against the line: `Less` means below.
    pub fn compare(&self, p: LatticePoint) -> std::cmp::Ordering {
        BigRational::from_integer(p.c.into()).cmp(&self.at(p.chi))
    }

    /// Least integer χ ≥ `from` with `self(χ) ≥ other(χ)`, for a line with a
    /// strictly larger slope. `None` when the slopes do not allow a crossing.
    pub fn first_chi_above(&self, other: &RegionLine) -> Option<i64> {
        let ds = &self.slope - &other.slope;
        if !ds.is_positive() {
            return None;
        }
        // (s1 - s2) χ ≥ i2 - i1
        let bound = (&other.intercept - &self.intercept) / ds;
        bound.ceil().to_integer().to_i64()
    }
}

/// f(χ) = c(X)/χ(X) · [χ − c(X)/2 − 6] + c(X).
pub fn f_line(x: &CharNumbers) -> Result<RegionLine, InvariantError> {
    f_line_from(x.chi(), x.c())
}

pub fn f_line_from(chi: i64, c: i64) -> Result<RegionLine, InvariantError> {
    if chi == 0 {
        return Err(InvariantError::ZeroChi);
    }
    let slope = rat(c, chi);
    let shift = rat(c, 2) + rat(6, 1);
    let intercept = BigRational::from_integer(c.into()) - &slope * shift;
    Ok(RegionLine {
        name: LineName::FLine,
        slope,
        intercept,
    })
}

/// Renders a rational as a decimal with `digits` fractional digits, truncated.
pub fn decimal(r: &BigRational, digits: usize) -> String {
    let neg = r.is_negative();
    let a = r.abs();
    let int = a.to_integer();
    let mut frac = a - BigRational::from_integer(int.clone());
    let mut out = format!("{}{}", if neg { "-" } else { "" }, int);
    if digits > 0 {
        out.push('.');
        let ten = BigInt::from(10);
        for _ in 0..digits {
            frac *= BigRational::from_integer(ten.clone());
            let d = frac.to_integer();
            out.push_str(&d.to_string());
            frac -= BigRational::from_integer(d);
        }
    }
    out
}

pub fn rational_to_f64(r: &BigRational) -> f64 {
    r.numer().to_f64().unwrap_or(f64::NAN) / r.denom().to_f64().unwrap_or(f64::NAN)
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_traits::Zero;

    #[test]
    fn k3_from_betti() {
        let n = char_from_betti(3, 19).unwrap();
        assert_eq!((n.e(), n.sigma(), n.chi(), n.c()), (24, -16, 2, 0));
    }

    #[test]
    fn connected_sums_of_s2xs2() {
        for k in 0..20 {
            let n = char_from_betti(2 * k + 1, 2 * k + 1).unwrap();
            assert_eq!(
                (n.e(), n.sigma(), n.chi(), n.c()),
                (4 * k + 4, 0, k + 1, 8 * k + 8)
            );
        }
        let single = char_from_betti(1, 1).unwrap();
        assert_eq!((single.e(), single.chi(), single.c()), (4, 1, 8));
    }

    #[test]
    fn non_integral_chi_rejected() {
        assert!(matches!(
            char_from_betti(2, 2),
            Err(InvariantError::NonIntegralChi(_))
        ));
    }

    #[test]
    fn allowed_examples() {
        assert!(is_allowed(LatticePoint::new(7, 8)).allowed);
        assert!(is_allowed(LatticePoint::new(2, 0)).allowed);
        let v = is_allowed(LatticePoint::new(3, 0));
        assert!(!v.allowed);
        assert_eq!(v.violated, vec![Constraint::Congruence]);
        let v = is_allowed(LatticePoint::new(1, -8));
        assert_eq!(v.violated, vec![Constraint::Nonnegative]);
        let v = is_allowed(LatticePoint::new(1, -1));
        assert_eq!(
            v.violated,
            vec![Constraint::Nonnegative, Constraint::Congruence]
        );
    }

    #[test]
    fn homeo_examples() {
        let h = homeo_type(LatticePoint::new(2, 0), true).unwrap();
        assert_eq!((h.b2plus, h.b2minus), (3, 19));
        let h = homeo_type(LatticePoint::new(7, 8), true).unwrap();
        assert_eq!((h.b2plus, h.b2minus, h.sigma), (13, 61, -48));
        for n in 0..30 {
            let h = homeo_type(LatticePoint::new(n + 1, 8 * n + 8), true).unwrap();
            assert_eq!(h.connected_sum_n, Some(n));
            assert_eq!(h.name.as_deref(), Some(format!("{}(S²×S²)", 2 * n + 1).as_str()));
        }
        assert!(matches!(
            homeo_type(LatticePoint::new(3, 0), true),
            Err(InvariantError::NotAllowed { .. })
        ));
        // non-spin points are not subject to the congruence
        assert!(homeo_type(LatticePoint::new(3, 0), false).is_ok());
    }

    #[test]
    fn f_line_examples() {
        let f = f_line_from(10, 90).unwrap();
        assert_eq!(f.slope, rat(9, 1));
        assert_eq!(f.intercept, rat(-369, 1));
        let f = f_line_from(1, 0).unwrap();
        assert!(f.slope.is_zero() && f.intercept.is_zero());
        let f = f_line_from(6875, 60116).unwrap();
        assert_eq!(f.slope, rat(60116, 6875));
        assert_eq!(decimal(&f.slope, 4), "8.7441");
        assert_eq!(f_line_from(0, 5), Err(InvariantError::ZeroChi));
    }

    #[test]
    fn line_order_beyond_seven() {
        let lines: Vec<_> = LineName::NAMED
            .iter()
            .map(|n| RegionLine::named(*n).unwrap())
            .collect();
        for chi in 7..500 {
            let v: Vec<_> = lines.iter().map(|l| l.at(chi)).collect();
            assert!(v[0] <= v[1] && v[1] <= v[2]);
            assert!(v[2] < v[3] && v[3] < v[4] && v[4] < v[5]);
        }
    }

    #[test]
    fn threshold_crossing() {
        let f = f_line_from(10, 96).unwrap();
        let sig = RegionLine::named(LineName::SignatureZero).unwrap();
        assert_eq!(f.first_chi_above(&sig), Some(264));
        assert_eq!(sig.first_chi_above(&f), None);
    }

    #[test]
    fn serde_rejects_inconsistent_tuple() {
        let good = serde_json::to_string(&char_from_betti(3, 19).unwrap()).unwrap();
        assert!(serde_json::from_str::<CharNumbers>(&good).is_ok());
        let bad = good.replace("\"c\":0", "\"c\":16");
        assert!(serde_json::from_str::<CharNumbers>(&bad).is_err());
    }
}
