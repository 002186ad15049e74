use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::Signed;
use serde::Serialize;

use super::GeoError;
use crate::catalog::BlockSpec;
use crate::construct::{eval, iterate_fiber_sum, serialize, ConstructionExpr, EvalReport};
use crate::invariants::{decimal, f_line, CharNumbers, LineName, RegionLine};

/// The block X that gets repeated in realize_general, with the slot used for
/// the repetition.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Composite {
    pub name: String,
    pub expr: ConstructionExpr,
    pub report: EvalReport,
    pub slot: String,
}

impl Composite {
    pub fn new(name: &str, expr: ConstructionExpr, slot: &str) -> Result<Composite, GeoError> {
        let report = eval(&expr)?;
        let s = report
            .slot(slot)
            .ok_or_else(|| GeoError::BadParams(format!("composite {name} has no slot `{slot}`")))?;
        if s.genus != 1 {
            return Err(GeoError::BadParams(format!(
                "composite {name} slot `{slot}` has genus {}, torus sums need a torus",
                s.genus
            )));
        }
        if !report.spin || !report.simply_connected {
            return Err(GeoError::BadParams(format!(
                "composite {name} must be spin and simply connected"
            )));
        }
        Ok(Composite {
            name: name.to_string(),
            expr,
            report,
            slot: slot.to_string(),
        })
    }

    pub fn from_block(block: BlockSpec) -> Result<Composite, GeoError> {
        let name = block.name.clone();
        Composite::new(&name, ConstructionExpr::leaf(block), "f")
    }

    pub fn invariants(&self) -> CharNumbers {
        self.report.invariants
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct CompositeValidation {
    pub chi: i64,
    pub c: i64,
    pub sigma: i64,
    pub positive_signature: bool,
    /// c/χ as an exact fraction `p/q`.
    pub ratio: String,
    pub ratio_decimal: String,
    pub exceeds_876: bool,
}

impl CompositeValidation {
    pub fn of(n: &CharNumbers) -> CompositeValidation {
        let ratio = BigRational::new(BigInt::from(n.c()), BigInt::from(n.chi()));
        let bound = BigRational::new(BigInt::from(876), BigInt::from(100));
        CompositeValidation {
            chi: n.chi(),
            c: n.c(),
            sigma: n.sigma(),
            positive_signature: n.sigma() > 0,
            ratio: format!("{}/{}", ratio.numer(), ratio.denom()),
            ratio_decimal: decimal(&ratio, 10),
            exceeds_876: ratio > bound,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CompositeX {
    pub x: i64,
    pub g: i64,
    pub k: i64,
    pub expr: ConstructionExpr,
    pub report: EvalReport,
    pub validation: CompositeValidation,
}

/// X = Y(x) ♯_Σ ⋯ ♯_Σ Y(x) (k copies) ♯_Σ Z(g) along genus-g fibers.
pub fn build_composite_x(x: i64, g: i64, k: i64) -> Result<CompositeX, GeoError> {
    if x < 1 || g < 2 || k < 1 {
        return Err(GeoError::BadParams(format!(
            "need x ≥ 1, g ≥ 2, k ≥ 1 (got x = {x}, g = {g}, k = {k})"
        )));
    }
    let bad = |e: crate::catalog::CatalogError| GeoError::BadParams(e.to_string());
    let y = ConstructionExpr::leaf(BlockSpec::y(x, g).map_err(bad)?);
    let z = ConstructionExpr::leaf(BlockSpec::z(g).map_err(bad)?);
    let expr = iterate_fiber_sum(&y, k as usize, "Σ_g", Some((&z, "Σ")))?;
    let report = eval(&expr)?;
    let validation = CompositeValidation::of(&report.invariants);
    Ok(CompositeX {
        x,
        g,
        k,
        expr,
        report,
        validation,
    })
}

impl CompositeX {
    pub fn composite(&self) -> Result<Composite, GeoError> {
        Composite::new(
            &format!("X(x={},g={},k={})", self.x, self.g, self.k),
            self.expr.clone(),
            "f",
        )
    }

    pub fn expr_text(&self) -> String {
        serialize(&self.expr)
    }
}

/// The closed form 267145kx² + 70 quoted for the threshold.
pub fn threshold_closed_form(x: i64, k: i64) -> i64 {
    267145 * k * x * x + 70
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ThresholdReport {
    /// Least χ with f(χ) ≥ 8χ.
    pub threshold: i64,
    pub f_slope: String,
    pub f_intercept: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub closed_form: Option<i64>,
}

/// Least lattice χ at which the f-line of X reaches the signature-zero line.
pub fn exotic_threshold(x: &CharNumbers, params: Option<(i64, i64)>) -> Result<ThresholdReport, GeoError> {
    let f = f_line(x)?;
    let sig0 = RegionLine::named(LineName::SignatureZero).expect("named line");
    let threshold = f.first_chi_above(&sig0).ok_or_else(|| GeoError::RatioTooSmall {
        slope: decimal(&f.slope, 6),
    })?;
    let fmt = |r: &BigRational| {
        if r.is_integer() {
            r.numer().to_string()
        } else {
            format!("{}{}/{}", if r.is_negative() { "-" } else { "" }, r.numer().abs(), r.denom())
        }
    };
    Ok(ThresholdReport {
        threshold: threshold.max(1),
        f_slope: fmt(&f.slope),
        f_intercept: fmt(&f.intercept),
        closed_form: params.map(|(x, k)| threshold_closed_form(x, k)),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::swring::SwStatus;

    #[test]
    fn small_composite() {
        let x = build_composite_x(1, 3, 1).unwrap();
        let v = &x.validation;
        assert_eq!((v.chi, v.c, v.sigma), (6875, 60116, 5116));
        assert!(v.positive_signature);
        assert!(!v.exceeds_876);
        assert!(v.ratio_decimal.starts_with("8.744"));
        assert!(matches!(x.report.sw, SwStatus::Partial { .. }));
    }

    #[test]
    fn paper_composite() {
        let x = build_composite_x(10, 3, 100).unwrap();
        let v = &x.validation;
        assert!(v.exceeds_876 && v.positive_signature);
        assert!(x.report.spin && x.report.simply_connected);
        assert!(v.ratio_decimal.starts_with("8.7600"));
        assert!(x.composite().is_ok());
    }

    #[test]
    fn thresholds() {
        let d = CharNumbers::from_chi_c(10, 96).unwrap();
        assert_eq!(exotic_threshold(&d, None).unwrap().threshold, 264);
        let flat = CharNumbers::from_chi_c(10, 80).unwrap();
        assert!(matches!(exotic_threshold(&flat, None), Err(GeoError::RatioTooSmall { .. })));
    }
}
