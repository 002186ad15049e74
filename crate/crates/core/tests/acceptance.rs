//! Acceptance run: one PASS/FAIL line per criterion. Exits nonzero when any
//! criterion fails. All comparisons are exact unless a tolerance is named.

use std::collections::{BTreeMap, BTreeSet};
use std::time::{Duration, Instant};

use num_bigint::BigInt;
use num_rational::BigRational;
use proptest::strategy::{Strategy, ValueTree};
use proptest::test_runner::{Config, TestRunner};

use geo4_core::catalog::{desk_block, BlockSpec};
use geo4_core::construct::{eval, ConstructionExpr};
use geo4_core::geography::{
    build_composite_x, exotic_family, exotic_threshold, threshold_closed_form, ppx_admissible,
    verify_coverage, Composite, PpxVerdict, Realizer, RegionConstraint, RegionSpec, LineRef,
};
use geo4_core::invariants::{decimal, is_allowed, CharNumbers, LatticePoint, LineName};
use geo4_core::swring::{w_basic_classes, TorusKnot};

mod common;
use common::assert_same_sw;

/// Criterion 1 runtime bound.
const IDENTITY_BUDGET: Duration = Duration::from_secs(1);
/// Criterion 3 runtime bound.
const COVERAGE_BUDGET: Duration = Duration::from_secs(30);
/// Criterion 6 runtime bound.
const EXOTIC_BUDGET: Duration = Duration::from_secs(10);
/// Criterion 9: N / (267145·k·x²) must lie in this band.
const THRESHOLD_BAND: (f64, f64) = (0.9, 1.1);
/// Criterion 4: number of random 3-block chains.
const CHAINS: u32 = 1000;
const CHI_MAX: i64 = 200;

type Criterion = (&'static str, fn() -> Outcome);

struct Outcome {
    pass: bool,
    detail: String,
}

fn outcome(pass: bool, detail: impl Into<String>) -> Outcome {
    Outcome {
        pass,
        detail: detail.into(),
    }
}

fn c1_invariant_calculus() -> Outcome {
    let t = Instant::now();
    let mut checked = 0;
    for bp in 0..=200i64 {
        for bm in 0..=200i64 {
            let e = 2 + bp + bm;
            let sigma = bp - bm;
            let integral = (sigma + e) % 4 == 0;
            match CharNumbers::from_betti(bp, bm) {
                Ok(n) if integral => {
                    if n.c() != 3 * sigma + 2 * e || n.sigma() != n.c() - 8 * n.chi() || n.e() != e {
                        return outcome(false, format!("identity fails at b2+ = {bp}, b2- = {bm}"));
                    }
                    checked += 1;
                }
                Err(_) if !integral => {}
                _ => return outcome(false, format!("integrality misjudged at ({bp}, {bm})")),
            }
        }
    }
    let el = t.elapsed();
    outcome(el < IDENTITY_BUDGET, format!("{checked} Betti pairs exact, {el:.2?} (< {IDENTITY_BUDGET:?})"))
}

fn c2_block_table() -> Outcome {
    for k in 1..=100 {
        let h = BlockSpec::h(k).unwrap().invariants;
        if (h.chi(), h.c()) != (4 * k - 1, 8 * k - 8) {
            return outcome(false, format!("H({}) = {}", 4 * k - 1, h.point()));
        }
    }
    for g in 1..=50 {
        let z = BlockSpec::z(g).unwrap().invariants;
        if (z.chi(), z.c()) != (2 * g * g - g + 1, 8 * g * g - 16 * g + 8) {
            return outcome(false, format!("Z({g}) = {}", z.point()));
        }
        if z.sigma() != -8 * g * (g + 1) {
            return outcome(false, format!("σ(Z({g})) = {}", z.sigma()));
        }
    }
    let want = BigRational::new(BigInt::from(60068), BigInt::from(6857));
    for x in 1..=20 {
        let y = BlockSpec::y(x, 3).unwrap().invariants;
        let r = BigRational::new(BigInt::from(y.c()), BigInt::from(y.chi()));
        if r != want {
            return outcome(false, format!("c/χ of Y({x}) = {r}"));
        }
    }
    let d = decimal(&want, 8);
    outcome(
        d.starts_with("8.76009"),
        format!("H(4k−1) k ≤ 100, Z(g) g ≤ 50, Y(x) ratio 60068/6857 = {d}…"),
    )
}

/// Points of the wedge reached by the (k′, n) parameterizations.
fn family_oracle(chi_max: i64) -> BTreeSet<LatticePoint> {
    let mut s: BTreeSet<LatticePoint> = (1..=chi_max / 2).map(|n| LatticePoint::new(2 * n, 0)).collect();
    for kp in 1..=chi_max {
        for n in 0..=chi_max {
            for p in [
                LatticePoint::new(8 * kp - 1 + 2 * n, 16 * kp - 8),
                LatticePoint::new(8 * kp + 6 + 2 * n, 16 * kp),
            ] {
                if p.chi <= chi_max {
                    s.insert(p);
                }
            }
        }
    }
    s
}

fn c3_wedge_coverage() -> Outcome {
    let t = Instant::now();
    let report = verify_coverage(&RegionSpec::wedge(CHI_MAX), &Realizer::base_only()).unwrap();
    let el = t.elapsed();
    let oracle = family_oracle(CHI_MAX);
    let agree = report
        .points
        .iter()
        .all(|p| p.realized == oracle.contains(&p.point));
    let sound = report.certificates.iter().all(|c| c.recheck());
    let missing: Vec<String> = report.unrealized().take(5).map(|p| p.point.to_string()).collect();
    let detail = format!(
        "{}/{} realized, oracle {}, certificates {}, {el:.2?}; unrealized e.g. {}",
        report.realized,
        report.total,
        if agree { "agrees" } else { "DISAGREES" },
        if sound { "recheck" } else { "FAIL recheck" },
        if missing.is_empty() { "none".into() } else { missing.join(" ") }
    );
    outcome(report.fully_covered && agree && sound && el < COVERAGE_BUDGET, detail)
}

fn leaf(b: BlockSpec) -> ConstructionExpr {
    ConstructionExpr::leaf(b)
}

fn fsum(a: ConstructionExpr, b: ConstructionExpr) -> ConstructionExpr {
    ConstructionExpr::fsum(a, "f", b, "f")
}

fn c4_product_formula() -> Outcome {
    let k3 = fsum(leaf(BlockSpec::e(2).unwrap()), leaf(BlockSpec::e(2).unwrap()));
    let r = eval(&k3).unwrap();
    let sw = r.sw.exact().unwrap().expand(16).unwrap();
    let f = sw.basis().gens()[0].name.clone();
    let exact = sw.term_count() == 3
        && sw.coefficient(&[(&f, 2)]) == BigInt::from(1)
        && sw.coefficient(&[(&f, 0)]) == BigInt::from(-2)
        && sw.coefficient(&[(&f, -2)]) == BigInt::from(1);
    if !exact {
        return outcome(false, format!("SW(E(2)♯E(2)) = {}", sw.render()));
    }
    let block = (0usize..3, 1i64..8).prop_map(|(fam, p)| match fam {
        0 => BlockSpec::e(p.max(2)).unwrap(),
        1 => BlockSpec::h(p.min(5)).unwrap(),
        _ => BlockSpec::x2n(p.clamp(2, 6)).unwrap(),
    });
    let chain = (block.clone(), block.clone(), block);
    let mut runner = TestRunner::new(Config::default());
    for _ in 0..CHAINS {
        let (a, b, c) = chain.new_tree(&mut runner).unwrap().current();
        let base = fsum(fsum(leaf(a.clone()), leaf(b.clone())), leaf(c.clone()));
        let variants = [
            fsum(leaf(a.clone()), fsum(leaf(b.clone()), leaf(c.clone()))),
            fsum(fsum(leaf(c.clone()), leaf(a.clone())), leaf(b.clone())),
            fsum(leaf(b.clone()), fsum(leaf(c.clone()), leaf(a.clone()))),
            fsum(fsum(leaf(c.clone()), leaf(b.clone())), leaf(a.clone())),
        ];
        for v in &variants {
            if std::panic::catch_unwind(|| assert_same_sw(&base, v)).is_err() {
                return outcome(false, format!("{base} and {v} differ"));
            }
        }
    }
    outcome(
        true,
        format!("SW(E(2)♯E(2)) = {}; {CHAINS} chains associate and commute", sw.render()),
    )
}

/// Δ of T(p,q) by dividing (t^{pq} − 1)(t − 1) by (t^p − 1)(t^q − 1).
fn alexander_by_division(p: i64, q: i64) -> Vec<i64> {
    let mono = |d: usize| {
        let mut v = vec![0i64; d + 1];
        v[0] = -1;
        v[d] = 1;
        v
    };
    let mul = |a: &[i64], b: &[i64]| {
        let mut out = vec![0i64; a.len() + b.len() - 1];
        for (i, x) in a.iter().enumerate() {
            for (j, y) in b.iter().enumerate() {
                out[i + j] += x * y;
            }
        }
        out
    };
    let mut num = mul(&mono((p * q) as usize), &mono(1));
    let den = mul(&mono(p as usize), &mono(q as usize));
    let mut quo = vec![0i64; num.len() - den.len() + 1];
    for i in (0..quo.len()).rev() {
        let c = num[i + den.len() - 1] / den[den.len() - 1];
        quo[i] = c;
        for (j, d) in den.iter().enumerate() {
            num[i + j] -= c * d;
        }
    }
    assert!(num.iter().all(|&c| c == 0), "division leaves a remainder");
    quo
}

fn c5_alexander() -> Outcome {
    let tref = TorusKnot::new(2, 3).unwrap().alexander();
    let want: BTreeMap<i64, i64> = [(-1, 1), (0, -1), (1, 1)].into_iter().collect();
    if tref != want {
        return outcome(false, format!("Δ_T(2,3) = {tref:?}"));
    }
    let mut n = 0;
    for p in 2..=15i64 {
        for q in p + 1..=15 {
            if num_integer::gcd(p, q) != 1 {
                continue;
            }
            let k = TorusKnot::new(p, q).unwrap();
            let d = k.alexander();
            let g = k.genus();
            let oracle = alexander_by_division(p, q);
            let shifted: BTreeMap<i64, i64> = oracle
                .iter()
                .enumerate()
                .filter(|(_, &c)| c != 0)
                .map(|(i, &c)| (i as i64 - g, c))
                .collect();
            let palindromic = d.iter().all(|(e, c)| d.get(&-e) == Some(c));
            if shifted != d || d.values().sum::<i64>() != 1 || !palindromic {
                return outcome(false, format!("T({p},{q}) disagrees with division"));
            }
            n += 1;
        }
    }
    outcome(true, format!("Δ_T(2,3) = t − 1 + t⁻¹; {n} torus knots match division, Δ(1) = 1, palindromic"))
}

fn desk() -> Realizer {
    Realizer::with_composite(Composite::from_block(desk_block()).unwrap())
}

fn c6_exotic_family() -> Outcome {
    let t = Instant::now();
    let fam = match exotic_family(263, 12, &desk()) {
        Ok(f) => f,
        Err(e) => return outcome(false, e.to_string()),
    };
    let el = t.elapsed();
    outcome(
        fam.members.len() == 12 && fam.witnessed() && el < EXOTIC_BUDGET,
        format!(
            "{} members on {} at {}: same homeo {}, nonzero {}, pairwise distinct {}, {el:.2?}",
            fam.members.len(),
            fam.homeo.name.as_deref().unwrap_or("?"),
            fam.point,
            fam.same_homeo,
            fam.all_nonzero,
            fam.pairwise_distinct
        ),
    )
}

fn c7_claim_two() -> Outcome {
    let mut n_cases = 0;
    for m in 0..=5 {
        for kp in 1..=5 {
            for n in 1..=5 {
                for h7 in [false, true] {
                    let b = w_basic_classes(m, kp, n, h7).unwrap();
                    if b.count_up_to_sign <= 1u32.into() {
                        return outcome(false, format!("m = {m}, k′ = {kp}, n = {n}, H(7) = {h7}"));
                    }
                    n_cases += 1;
                }
            }
        }
    }
    outcome(true, format!("{n_cases} parameter sets, each with more than one class up to sign"))
}

fn ppx_oracle(p: LatticePoint) -> bool {
    let on_noether = p.c == 2 * p.chi - 6 && p.c % 16 == 8;
    let on_eight_thirds = 3 * p.c == 8 * p.chi - 32 && p.chi % 3 == 0;
    on_noether || on_eight_thirds
}

fn c8_ppx_dichotomy() -> Outcome {
    let strip = RegionSpec {
        name: "strip".into(),
        chi_max: CHI_MAX,
        chi_min: 1,
        offset: None,
        constraints: vec![
            RegionConstraint::LineGe {
                line: LineRef::Named { line: LineName::Noether },
            },
            RegionConstraint::LineLt {
                line: LineRef::Explicit {
                    slope: "3".into(),
                    intercept: "-15".into(),
                },
            },
            RegionConstraint::Congruence,
        ],
    };
    let report = verify_coverage(&strip, &desk()).unwrap();
    let verdicts_ok = report.points.iter().all(|p| {
        let v = ppx_admissible(p.point);
        !matches!(v, PpxVerdict::NotApplicable) && v.is_admissible() == ppx_oracle(p.point)
    });
    let exceptional = report.points.iter().filter(|p| ppx_admissible(p.point).is_admissible()).count();
    let missing: Vec<String> = report.unrealized().take(5).map(|p| p.point.to_string()).collect();
    outcome(
        report.fully_covered && verdicts_ok,
        format!(
            "{} strip points, {} exceptional, verdicts {}, {}/{} certified; unrealized e.g. {}",
            report.total,
            exceptional,
            if verdicts_ok { "exact" } else { "WRONG" },
            report.realized,
            report.total,
            if missing.is_empty() { "none".into() } else { missing.join(" ") }
        ),
    )
}

fn c9_threshold() -> Outcome {
    let d = exotic_threshold(&CharNumbers::from_chi_c(10, 96).unwrap(), None).unwrap();
    if d.threshold != 264 {
        return outcome(false, format!("desk threshold {}", d.threshold));
    }
    let mut rows = Vec::new();
    let mut in_band = true;
    for (x, k) in [(10, 100), (10, 200), (20, 100)] {
        let cx = build_composite_x(x, 3, k).unwrap();
        let t = exotic_threshold(&cx.report.invariants, Some((x, k))).unwrap();
        let r = t.threshold as f64 / threshold_closed_form(x, k) as f64;
        in_band &= r > THRESHOLD_BAND.0 && r < THRESHOLD_BAND.1 && is_allowed(cx.report.invariants.point()).allowed;
        rows.push(format!("(x={x},k={k}) N = {} vs {} ({r:.5})", t.threshold, threshold_closed_form(x, k)));
    }
    outcome(in_band, format!("desk N = 264; {}", rows.join("; ")))
}

fn main() {
    let criteria: [Criterion; 9] = [
        ("invariant calculus", c1_invariant_calculus),
        ("block table", c2_block_table),
        ("wedge coverage", c3_wedge_coverage),
        ("SW product formula", c4_product_formula),
        ("Alexander polynomials", c5_alexander),
        ("exotic family witness", c6_exotic_family),
        ("W basic classes", c7_claim_two),
        ("PPX dichotomy", c8_ppx_dichotomy),
        ("threshold", c9_threshold),
    ];
    let mut failed = 0;
    for (i, (name, f)) in criteria.iter().enumerate() {
        let o = f();
        if !o.pass {
            failed += 1;
        }
        println!("{} {}. {name}: {}", if o.pass { "PASS" } else { "FAIL" }, i + 1, o.detail);
    }
    println!("acceptance: {} passed, {failed} failed", criteria.len() - failed);
    if failed > 0 {
        std::process::exit(1);
    }
}
