use num_bigint::BigUint;
use serde::Serialize;

use super::{exotic_threshold, Certificate, GeoError, Realizer};
use crate::catalog::SlotKind;
use crate::construct::{ConstructionExpr, EvalReport};
use crate::invariants::{HomeoType, LatticePoint};
use crate::swring::TorusKnot;

/// One smooth structure in the family, with its SW fingerprint.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ExoticMember {
    pub label: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub knot: Option<TorusKnot>,
    pub certificate: Certificate,
    pub term_count: String,
    pub classes_up_to_sign: String,
    /// (|coefficient|, multiplicity), ascending by coefficient.
    pub histogram: Vec<(String, String)>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ExoticFamily {
    pub version: u32,
    pub n: i64,
    pub point: LatticePoint,
    pub homeo: HomeoType,
    pub threshold: i64,
    pub surgery_slot: String,
    pub members: Vec<ExoticMember>,
    /// Every member has the homeomorphism type of the base.
    pub same_homeo: bool,
    /// Every member has nonzero SW, unlike the standard structure.
    pub all_nonzero: bool,
    /// The absolute-coefficient multisets are pairwise distinct.
    pub pairwise_distinct: bool,
}

impl ExoticFamily {
    pub fn witnessed(&self) -> bool {
        self.same_homeo && self.all_nonzero && self.pairwise_distinct
    }

    /// Witness table: one row per member.
    pub fn text(&self) -> String {
        let mut out = format!(
            "{} at {}, threshold N = {}, surgery on `{}`\n",
            self.homeo.name.as_deref().unwrap_or("?"),
            self.point,
            self.threshold,
            self.surgery_slot
        );
        out.push_str(&format!("{:<12} {:>24} {:>24}  |coef|^mult\n", "member", "terms", "classes/±"));
        for m in &self.members {
            let hist: Vec<String> = m.histogram.iter().map(|(k, v)| format!("{k}^{v}")).collect();
            let mut h = hist.join(" ");
            if h.len() > 120 {
                h.truncate(117);
                h.push_str("...");
            }
            out.push_str(&format!(
                "{:<12} {:>24} {:>24}  {}\n",
                m.label, m.term_count, m.classes_up_to_sign, h
            ));
        }
        for m in &self.members {
            out.push_str(&format!("{}: {}\n", m.label, m.certificate.expr_text()));
        }
        out.push_str(&format!(
            "same homeomorphism type: {}\nall SW nonzero: {}\npairwise distinct SW multisets: {}\n",
            yes(self.same_homeo),
            yes(self.all_nonzero),
            yes(self.pairwise_distinct)
        ));
        out
    }
}

fn yes(b: bool) -> &'static str {
    if b {
        "yes"
    } else {
        "no"
    }
}

/// The torus used for knot surgery: a fiber of an E factor (class label `T`)
/// when there is one, otherwise the first torus sitting in a cusp
/// neighbourhood.
pub fn surgery_torus(report: &EvalReport) -> Option<String> {
    let tori = || report.slots.iter().filter(|s| s.genus == 1 && s.kind == SlotKind::TorusInCusp);
    tori()
        .find(|s| s.class_name().split('@').next() == Some("T"))
        .or_else(|| tori().next())
        .map(|s| s.id.clone())
}

fn member(label: String, knot: Option<TorusKnot>, certificate: Certificate) -> Result<ExoticMember, GeoError> {
    let sw = certificate.report.sw.exact()?;
    let histogram = sw
        .abs_histogram()
        .into_iter()
        .map(|(k, v): (BigUint, BigUint)| (k.to_string(), v.to_string()))
        .collect();
    Ok(ExoticMember {
        label,
        knot,
        term_count: sw.term_count().to_string(),
        classes_up_to_sign: sw.count_up_to_sign().to_string(),
        histogram,
        certificate,
    })
}

/// `count` smooth structures on (2n+1)(S²×S²): the realization W of
/// (n+1, 8n+8) and its knot surgeries along T(2,3), T(2,5), …
pub fn exotic_family(n: i64, count: usize, realizer: &Realizer) -> Result<ExoticFamily, GeoError> {
    if n < 1 || count < 1 {
        return Err(GeoError::BadParams(format!("need n ≥ 1 and count ≥ 1 (got n = {n}, count = {count})")));
    }
    let x = realizer.composite.as_ref().ok_or_else(|| {
        GeoError::BadParams("signature-zero points lie above the base wedge; configure a composite X".into())
    })?;
    let threshold = exotic_threshold(&x.invariants(), None)?.threshold;
    let point = LatticePoint::new(n + 1, 8 * (n + 1));
    if point.chi < threshold {
        return Err(GeoError::BelowThreshold { n, threshold });
    }
    let base = realizer.realize(point)?;
    let slot = surgery_torus(&base.report)
        .ok_or_else(|| GeoError::BadParams(format!("{} has no torus for knot surgery", base.expr_text())))?;
    let mut members = vec![member("W".into(), None, base.clone())?];
    for j in 1..count as i64 {
        let knot = TorusKnot::new(2, 2 * j + 1).expect("2 and 2j+1 are coprime");
        let expr = ConstructionExpr::surgery(base.expr.clone(), &slot, knot);
        let cert = Certificate::issue(point, expr, base.copies)?;
        members.push(member(format!("W_K{knot}"), Some(knot), cert)?);
    }
    let same_homeo = members.iter().all(|m| m.certificate.homeo == base.homeo);
    let all_nonzero = members.iter().all(|m| !m.histogram.is_empty());
    let pairwise_distinct = members
        .iter()
        .enumerate()
        .all(|(i, a)| members[i + 1..].iter().all(|b| a.histogram != b.histogram));
    Ok(ExoticFamily {
        version: 1,
        n,
        point,
        homeo: base.homeo.clone(),
        threshold,
        surgery_slot: slot,
        members,
        same_homeo,
        all_nonzero,
        pairwise_distinct,
    })
}
