use super::{Certificate, Composite, GeoError};
use crate::catalog::BlockSpec;
use crate::construct::{iterate_fiber_sum, ConstructionExpr};
use crate::invariants::{is_allowed, LatticePoint};

fn leaf(b: Result<BlockSpec, crate::catalog::CatalogError>) -> Result<ConstructionExpr, GeoError> {
    Ok(ConstructionExpr::leaf(b.map_err(|e| GeoError::BadParams(e.to_string()))?))
}

fn fsum(a: ConstructionExpr, b: ConstructionExpr) -> ConstructionExpr {
    ConstructionExpr::fsum(a, "f", b, "f")
}

fn check_allowed(p: LatticePoint) -> Result<(), GeoError> {
    let v = is_allowed(p);
    if v.allowed {
        return Ok(());
    }
    let reasons: Vec<&str> = v.violated.iter().map(|c| c.describe()).collect();
    Err(GeoError::NotAllowed {
        point: p,
        reasons: reasons.join(", "),
    })
}

/// The base construction for a point of 0 ≤ c ≤ 2χ − 6:
///
/// * c = 0: X(χ) = E(2)♯_f E(χ−2);
/// * c ≡ 8 (mod 16): H(8k′−1)♯_f E(2n), k′ = (c+8)/16;
/// * c ≡ 0 (mod 16): H(7)♯_f H(8k′−1)♯_f E(2n), k′ = c/16.
///
/// n = 0 drops the E factor.
pub fn base_expr(p: LatticePoint) -> Result<ConstructionExpr, GeoError> {
    check_allowed(p)?;
    let (chi, c) = (p.chi, p.c);
    if c > 2 * chi - 6 {
        return Err(GeoError::OutOfRegion {
            point: p,
            reason: format!("c = {c} > 2χ − 6 = {}", 2 * chi - 6),
        });
    }
    if c == 0 {
        return leaf(BlockSpec::x2n(chi / 2));
    }
    if c % 16 == 8 {
        let kp = (c + 8) / 16;
        let n = (chi - (8 * kp - 1)) / 2;
        let h = leaf(BlockSpec::h(2 * kp))?;
        return Ok(if n == 0 { h } else { fsum(h, leaf(BlockSpec::e(2 * n))?) });
    }
    let kp = c / 16;
    let twice_n = chi - 8 * kp - 6;
    if twice_n < 0 {
        return Err(GeoError::NoRealization {
            point: p,
            reason: format!(
                "H(7)♯_f H({})♯_f E(2n) needs n = (χ − 8k′ − 6)/2 ≥ 0 with k′ = {kp}, got n = {}/2 (the point lies above c = 2χ − 12)",
                8 * kp - 1,
                twice_n
            ),
        });
    }
    let hh = fsum(leaf(BlockSpec::h(2))?, leaf(BlockSpec::h(2 * kp))?);
    Ok(if twice_n == 0 {
        hh
    } else {
        fsum(hh, leaf(BlockSpec::e(twice_n))?)
    })
}

pub fn realize_base(p: LatticePoint) -> Result<Certificate, GeoError> {
    Certificate::issue(p, base_expr(p)?, 0)
}

/// W = X♯_f ⋯ ♯_f X (m copies) ♯_f V with V from [`realize_base`], taking
/// the least m that works.
pub fn realize_general(p: LatticePoint, x: &Composite) -> Result<Certificate, GeoError> {
    check_allowed(p)?;
    let xp = x.report.invariants.point();
    let mut trace = Vec::new();
    let mut m = 0usize;
    loop {
        let residual = LatticePoint::new(p.chi - m as i64 * xp.chi, p.c - m as i64 * xp.c);
        if residual.c < 0 || residual.chi < 1 {
            trace.push(format!("m = {m}: residual {residual} leaves the first quadrant, search stops"));
            break;
        }
        match base_expr(residual) {
            Ok(v) => {
                let expr = if m == 0 {
                    v
                } else {
                    iterate_fiber_sum(&x.expr, m, &x.slot, Some((&v, "f")))?
                };
                return Certificate::issue(p, expr, m);
            }
            Err(e) => trace.push(format!("m = {m}: residual {residual}: {e}")),
        }
        m += 1;
    }
    Err(GeoError::NotCovered { point: p, trace })
}

/// Dispatches to [`realize_general`] when a composite is configured.
#[derive(Debug, Clone, Default)]
pub struct Realizer {
    pub composite: Option<Composite>,
}

impl Realizer {
    pub fn base_only() -> Self {
        Realizer { composite: None }
    }

    pub fn with_composite(x: Composite) -> Self {
        Realizer { composite: Some(x) }
    }

    pub fn realize(&self, p: LatticePoint) -> Result<Certificate, GeoError> {
        match &self.composite {
            Some(x) => realize_general(p, x),
            None => realize_base(p),
        }
    }
}
