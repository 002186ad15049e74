//! Realizing lattice points by constructions, checking coverage of regions,
//! and generating exotic families on (2n+1)(S²×S²).

mod composite;
mod exotic;
mod ppx;
mod profile;
mod realize;
mod region;

use serde::Serialize;
use thiserror::Error;

pub use composite::{
    build_composite_x, exotic_threshold, threshold_closed_form, Composite, CompositeValidation,
    CompositeX, ThresholdReport,
};
pub use exotic::{exotic_family, surgery_torus, ExoticFamily, ExoticMember};
pub use ppx::{ppx_admissible, PpxFamily, PpxVerdict};
pub use profile::{CompositeConfig, Profile};
pub use realize::{realize_base, realize_general, Realizer};
pub use region::{
    verify_coverage, CoverageReport, PointResult, RegionConstraint, RegionSpec, LineRef,
};

use crate::construct::{eval, serialize, ConstructError, ConstructionExpr, EvalReport};
use crate::invariants::{homeo_type, HomeoType, InvariantError, LatticePoint};
use crate::swring::SwError;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum GeoError {
    #[error("{point} is not allowed: {reasons}")]
    NotAllowed { point: LatticePoint, reasons: String },
    #[error("{point} is outside the base wedge: {reason}")]
    OutOfRegion { point: LatticePoint, reason: String },
    #[error("no base realization of {point}: {reason}")]
    NoRealization { point: LatticePoint, reason: String },
    #[error("{point} is not covered:\n  {}", trace.join("\n  "))]
    NotCovered {
        point: LatticePoint,
        trace: Vec<String>,
    },
    #[error("bad parameters: {0}")]
    BadParams(String),
    #[error("slope {slope} of the f-line is at most 8, so it never rises above the signature-zero line")]
    RatioTooSmall { slope: String },
    #[error("n = {n} is below the threshold: the f-line reaches c = 8χ only from χ = {threshold}, i.e. n ≥ {}", threshold - 1)]
    BelowThreshold { n: i64, threshold: i64 },
    #[error("certificate for {point} failed: {}", failed.join(", "))]
    CertificateFailed { point: LatticePoint, failed: Vec<String> },
    #[error(transparent)]
    Construct(#[from] ConstructError),
    #[error(transparent)]
    Sw(#[from] SwError),
    #[error(transparent)]
    Invariants(#[from] InvariantError),
    #[error("profile: {0}")]
    Profile(String),
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Check {
    pub name: String,
    pub passed: bool,
}

/// A construction for a lattice point together with its evaluation and the
/// facts checked on it.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Certificate {
    pub point: LatticePoint,
    #[serde(serialize_with = "expr_text")]
    pub expr: ConstructionExpr,
    /// Copies of the composite X used; 0 for base constructions.
    pub copies: usize,
    pub homeo: HomeoType,
    pub checks: Vec<Check>,
    pub report: EvalReport,
}

fn expr_text<S: serde::Serializer>(e: &ConstructionExpr, s: S) -> Result<S::Ok, S::Error> {
    s.serialize_str(&serialize(e))
}

fn run_checks(point: LatticePoint, report: &EvalReport) -> Vec<Check> {
    let inv = report.invariants;
    vec![
        Check {
            name: format!("invariants match {point}"),
            passed: inv.point() == point,
        },
        Check {
            name: "spin".into(),
            passed: report.spin,
        },
        Check {
            name: "simply connected".into(),
            passed: report.simply_connected,
        },
        Check {
            name: "symplectic".into(),
            passed: report.symplectic,
        },
    ]
}

impl Certificate {
    /// Evaluates `expr` and checks it against `point`.
    pub fn issue(point: LatticePoint, expr: ConstructionExpr, copies: usize) -> Result<Certificate, GeoError> {
        let report = eval(&expr)?;
        let checks = run_checks(point, &report);
        let failed: Vec<String> = checks.iter().filter(|c| !c.passed).map(|c| c.name.clone()).collect();
        if !failed.is_empty() {
            return Err(GeoError::CertificateFailed { point, failed });
        }
        let homeo = homeo_type(point, true)?;
        Ok(Certificate {
            point,
            expr,
            copies,
            homeo,
            checks,
            report,
        })
    }

    /// Re-evaluates the expression from scratch and re-runs every check.
    pub fn recheck(&self) -> bool {
        match eval(&self.expr) {
            Ok(r) => run_checks(self.point, &r).iter().all(|c| c.passed) && r.invariants == self.report.invariants,
            Err(_) => false,
        }
    }

    pub fn expr_text(&self) -> String {
        serialize(&self.expr)
    }
}
