use std::str::FromStr;

use num_bigint::BigInt;
use num_rational::BigRational;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::{Certificate, GeoError, Realizer};
use crate::invariants::{is_allowed, LatticePoint, LineName, RegionLine};

/// A line given by name or by exact slope and intercept (`"876/100"`).
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum LineRef {
    Named { line: LineName },
    Explicit { slope: String, intercept: String },
}

impl LineRef {
    pub fn resolve(&self) -> Result<RegionLine, GeoError> {
        match self {
            LineRef::Named { line } => RegionLine::named(*line).ok_or_else(|| {
                GeoError::BadParams(format!("line {line:?} needs an explicit slope and intercept"))
            }),
            LineRef::Explicit { slope, intercept } => {
                let parse = |s: &str| -> Result<BigRational, GeoError> {
                    let s = s.trim();
                    let r = match s.split_once('/') {
                        Some((n, d)) => {
                            let n = BigInt::from_str(n.trim());
                            let d = BigInt::from_str(d.trim());
                            match (n, d) {
                                (Ok(n), Ok(d)) if d != BigInt::from(0) => Some(BigRational::new(n, d)),
                                _ => None,
                            }
                        }
                        None => BigInt::from_str(s).ok().map(BigRational::from_integer),
                    };
                    r.ok_or_else(|| GeoError::BadParams(format!("`{s}` is not a rational number")))
                };
                Ok(RegionLine {
                    name: LineName::FLine,
                    slope: parse(slope)?,
                    intercept: parse(intercept)?,
                })
            }
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "snake_case")]
pub enum RegionConstraint {
    /// c ≤ line(χ)
    LineLe {
        #[serde(flatten)]
        line: LineRef,
    },
    LineGe {
        #[serde(flatten)]
        line: LineRef,
    },
    LineLt {
        #[serde(flatten)]
        line: LineRef,
    },
    LineGt {
        #[serde(flatten)]
        line: LineRef,
    },
    /// c ≡ 8χ (mod 16)
    Congruence,
    /// c ≥ 0
    Nonneg,
}

/// A region of the plane, enumerated up to `chi_max`. With an `offset`, the
/// constraints apply to p − offset.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct RegionSpec {
    pub name: String,
    pub chi_max: i64,
    #[serde(default = "one")]
    pub chi_min: i64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub offset: Option<LatticePoint>,
    pub constraints: Vec<RegionConstraint>,
}

fn one() -> i64 {
    1
}

struct Compiled {
    tests: Vec<(std::cmp::Ordering, bool, RegionLine)>,
    congruence: bool,
    nonneg: bool,
}

impl RegionSpec {
    /// 0 ≤ c ≤ 2χ − 6.
    pub fn wedge(chi_max: i64) -> RegionSpec {
        RegionSpec {
            name: "wedge 0 ≤ c ≤ 2χ−6".into(),
            chi_max,
            chi_min: 1,
            offset: None,
            constraints: vec![
                RegionConstraint::Nonneg,
                RegionConstraint::LineLe {
                    line: LineRef::Named {
                        line: LineName::Noether,
                    },
                },
                RegionConstraint::Congruence,
            ],
        }
    }

    /// 2χ − 6 ≤ c < 3(χ − 5).
    pub fn ppx_strip(chi_max: i64) -> RegionSpec {
        RegionSpec {
            name: "strip 2χ−6 ≤ c < 3(χ−5)".into(),
            chi_max,
            chi_min: 1,
            offset: None,
            constraints: vec![
                RegionConstraint::LineGe {
                    line: LineRef::Named {
                        line: LineName::Noether,
                    },
                },
                RegionConstraint::LineLt {
                    line: LineRef::Explicit {
                        slope: "3".into(),
                        intercept: "-15".into(),
                    },
                },
                RegionConstraint::Congruence,
            ],
        }
    }

    fn compile(&self) -> Result<Compiled, GeoError> {
        use std::cmp::Ordering::*;
        let mut c = Compiled {
            tests: Vec::new(),
            congruence: false,
            nonneg: false,
        };
        for k in &self.constraints {
            match k {
                // (ordering to reject, whether equality is rejected)
                RegionConstraint::LineLe { line } => c.tests.push((Greater, false, line.resolve()?)),
                RegionConstraint::LineLt { line } => c.tests.push((Greater, true, line.resolve()?)),
                RegionConstraint::LineGe { line } => c.tests.push((Less, false, line.resolve()?)),
                RegionConstraint::LineGt { line } => c.tests.push((Less, true, line.resolve()?)),
                RegionConstraint::Congruence => c.congruence = true,
                RegionConstraint::Nonneg => c.nonneg = true,
            }
        }
        Ok(c)
    }

    /// Allowed points of the region, χ ascending then c ascending.
    pub fn enumerate(&self) -> Result<Vec<LatticePoint>, GeoError> {
        if self.chi_max < 1 {
            return Err(GeoError::BadParams("chi_max must be at least 1".into()));
        }
        let compiled = self.compile()?;
        let off = self.offset.unwrap_or(LatticePoint::new(0, 0));
        let mut out = Vec::new();
        for chi in self.chi_min.max(1)..=self.chi_max {
            // b₂⁻ ≥ 0 bounds c by 10χ − 1
            for c in 0..10 * chi {
                let p = LatticePoint::new(chi, c);
                if !is_allowed(p).allowed {
                    continue;
                }
                let q = LatticePoint::new(chi - off.chi, c - off.c);
                if compiled.nonneg && q.c < 0 {
                    continue;
                }
                if compiled.congruence && (q.c - 8 * q.chi).rem_euclid(16) != 0 {
                    continue;
                }
                let ok = compiled.tests.iter().all(|(reject, strict, line)| {
                    let o = line.compare(q);
                    o != *reject && !(*strict && o == std::cmp::Ordering::Equal)
                });
                if ok {
                    out.push(p);
                }
            }
        }
        Ok(out)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct PointResult {
    pub point: LatticePoint,
    pub realized: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub expr: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub copies: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub reason: Option<String>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct CoverageReport {
    pub version: u32,
    pub region: String,
    pub chi_max: i64,
    pub total: usize,
    pub realized: usize,
    pub fully_covered: bool,
    pub points: Vec<PointResult>,
    #[serde(skip)]
    pub certificates: Vec<Certificate>,
}

impl CoverageReport {
    pub fn unrealized(&self) -> impl Iterator<Item = &PointResult> {
        self.points.iter().filter(|p| !p.realized)
    }

    pub fn percent(&self) -> f64 {
        if self.total == 0 {
            100.0
        } else {
            100.0 * self.realized as f64 / self.total as f64
        }
    }

    /// Summary line plus a per-point table.
    pub fn text(&self) -> String {
        let mut out = format!(
            "region: {}\nchi_max: {}\npoints: {}\nrealized: {}\ncovered {:.0}%{}\n",
            self.region,
            self.chi_max,
            self.total,
            self.realized,
            self.percent().floor(),
            if self.fully_covered { "" } else { " (not fully covered)" }
        );
        out.push_str(&format!("{:>6} {:>8}  {:<3}  construction\n", "chi", "c", "ok"));
        for p in &self.points {
            let detail = match (&p.expr, &p.reason) {
                (Some(e), _) => e.clone(),
                (None, Some(r)) => r.lines().next().unwrap_or("").to_string(),
                _ => String::new(),
            };
            out.push_str(&format!(
                "{:>6} {:>8}  {:<3}  {}\n",
                p.point.chi,
                p.point.c,
                if p.realized { "yes" } else { "no" },
                detail
            ));
        }
        out
    }
}

/// Runs the realizer on every allowed point of the region, in parallel; the
/// report is in enumeration order regardless of scheduling.
pub fn verify_coverage(region: &RegionSpec, realizer: &Realizer) -> Result<CoverageReport, GeoError> {
    let pts = region.enumerate()?;
    let results: Vec<(PointResult, Option<Certificate>)> = pts
        .par_iter()
        .map(|&p| match realizer.realize(p) {
            Ok(cert) => {
                let sound = cert.recheck();
                (
                    PointResult {
                        point: p,
                        realized: sound,
                        expr: Some(cert.expr_text()),
                        copies: Some(cert.copies),
                        reason: (!sound).then(|| "certificate failed on re-evaluation".to_string()),
                    },
                    sound.then_some(cert),
                )
            }
            Err(e) => (
                PointResult {
                    point: p,
                    realized: false,
                    expr: None,
                    copies: None,
                    reason: Some(e.to_string()),
                },
                None,
            ),
        })
        .collect();
    let realized = results.iter().filter(|(r, _)| r.realized).count();
    let total = results.len();
    let (points, certs): (Vec<_>, Vec<_>) = results.into_iter().unzip();
    Ok(CoverageReport {
        version: 1,
        region: region.name.clone(),
        chi_max: region.chi_max,
        total,
        realized,
        fully_covered: realized == total,
        points,
        certificates: certs.into_iter().flatten().collect(),
    })
}
