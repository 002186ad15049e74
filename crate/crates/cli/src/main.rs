use std::io::Write as _;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{anyhow, Context};
use clap::{Parser, Subcommand};
use serde_json::{json, Value};

use geo4_core::catalog::Catalog;
use geo4_core::construct::{eval, parse, serialize};
use geo4_core::geography::{
    build_composite_x, exotic_family, exotic_threshold, ppx_admissible, verify_coverage, GeoError,
    PpxVerdict, Profile, RegionSpec,
};
use geo4_core::invariants::{f_line, is_allowed, LatticePoint, LineName};
use geo4_core::plot::{lines_for, render_svg, PlotSpec, PointSet};
use geo4_core::swring::{basic_classes_of, is_complex_admissible, SwStatus};

const OK: u8 = 0;
const FALSE: u8 = 1;
const NOT_COVERED: u8 = 2;
const INPUT: u8 = 3;

/// Geography of simply connected spin symplectic 4-manifolds.
#[derive(Parser, Debug)]
#[command(name = "geo4", version)]
struct Cli {
    /// Emit JSON instead of text.
    #[arg(long, global = true)]
    json: bool,
    /// Write the main artifact (certificate, report, SVG) to a file.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    /// Profile file, or `desk` / `paper`. Overrides GEO4_PROFILE.
    #[arg(long, global = true)]
    profile: Option<String>,
    /// Enumeration bound; overrides the profile and region files.
    #[arg(long, global = true)]
    chi_max: Option<i64>,
    /// Draw c at true scale instead of 1/8.
    #[arg(long, global = true)]
    true_aspect: bool,
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Subcommand, Debug)]
enum Cmd {
    /// Test c ≥ 0 and c ≡ 8χ (mod 16).
    Allowed {
        #[arg(allow_negative_numbers = true)]
        chi: i64,
        #[arg(allow_negative_numbers = true)]
        c: i64,
    },
    /// Find a construction for a lattice point.
    Realize {
        #[arg(allow_negative_numbers = true)]
        chi: i64,
        #[arg(allow_negative_numbers = true)]
        c: i64,
    },
    /// Realize every allowed point of a region.
    Coverage { region: PathBuf },
    /// Evaluate an expression (or a file holding one) and print its SW invariant.
    Sw { expr: String },
    /// Knot-surgery family on (2n+1)(S²×S²).
    Exotic {
        n: i64,
        #[arg(long, default_value_t = 3)]
        count: usize,
    },
    /// Render the (χ, c)-plane to SVG.
    Plot { spec: PathBuf },
    /// Build Y(x)♯⋯♯Y(x)♯Z(g), validate it and compute its threshold.
    Composite {
        #[arg(long, default_value_t = 10)]
        x: i64,
        #[arg(long, default_value_t = 3)]
        g: i64,
        #[arg(long, default_value_t = 100)]
        k: i64,
    },
    /// Least χ at which the profile's f-line reaches c = 8χ.
    Threshold,
    /// Spin complex-surface test in the strip 2χ−6 ≤ c < 3(χ−5).
    Ppx {
        #[arg(allow_negative_numbers = true)]
        chi: i64,
        #[arg(allow_negative_numbers = true)]
        c: i64,
    },
    /// Print the profile's block catalog as JSON.
    Catalog,
}

/// A failure with its exit code.
struct Fail {
    code: u8,
    message: String,
}

impl From<anyhow::Error> for Fail {
    fn from(e: anyhow::Error) -> Self {
        Fail {
            code: INPUT,
            message: format!("{e:#}"),
        }
    }
}

type Res = Result<u8, Fail>;

fn geo_fail(e: GeoError) -> Fail {
    let code = match e {
        GeoError::NotAllowed { .. } => FALSE,
        GeoError::OutOfRegion { .. }
        | GeoError::NoRealization { .. }
        | GeoError::NotCovered { .. }
        | GeoError::BelowThreshold { .. }
        | GeoError::RatioTooSmall { .. } => NOT_COVERED,
        _ => INPUT,
    };
    Fail {
        code,
        message: e.to_string(),
    }
}

struct Ctx {
    json: bool,
    out: Option<PathBuf>,
    profile: Profile,
    chi_max: Option<i64>,
    true_aspect: bool,
}

impl Ctx {
    /// Prints text or JSON to stdout.
    fn emit(&self, text: &str, value: Value) -> anyhow::Result<()> {
        if self.json {
            println!("{}", serde_json::to_string_pretty(&value)?);
        } else {
            print!("{text}");
            if !text.ends_with('\n') {
                println!();
            }
        }
        std::io::stdout().flush()?;
        Ok(())
    }

    fn write_out(&self, content: &str) -> anyhow::Result<bool> {
        match &self.out {
            Some(p) => {
                std::fs::write(p, content).with_context(|| format!("writing {}", p.display()))?;
                Ok(true)
            }
            None => Ok(false),
        }
    }

    fn catalog(&self) -> anyhow::Result<Catalog> {
        self.profile.catalog().map_err(|e| anyhow!(e))
    }
}

fn load_profile(flag: Option<&str>) -> anyhow::Result<Profile> {
    let env = std::env::var("GEO4_PROFILE").ok().filter(|s| !s.is_empty());
    let spec = flag.map(str::to_string).or(env).unwrap_or_else(|| "desk".into());
    Profile::resolve(&spec).map_err(|e| anyhow!(e))
}

fn read(path: &Path) -> anyhow::Result<String> {
    std::fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))
}

fn allowed(ctx: &Ctx, chi: i64, c: i64) -> Res {
    let p = LatticePoint::new(chi, c);
    let v = is_allowed(p);
    let text = if v.allowed {
        "allowed".to_string()
    } else {
        let r: Vec<&str> = v.violated.iter().map(|c| c.describe()).collect();
        format!("not allowed: {}", r.join(", "))
    };
    ctx.emit(&text, json!({"version": 1, "point": p, "allowed": v.allowed, "violated": v.violated}))?;
    Ok(if v.allowed { OK } else { FALSE })
}

fn realize(ctx: &Ctx, chi: i64, c: i64) -> Res {
    let realizer = ctx.profile.realizer().map_err(geo_fail)?;
    let cert = realizer.realize(LatticePoint::new(chi, c)).map_err(geo_fail)?;
    let value = json!({"version": 1, "certificate": cert});
    if ctx.write_out(&serde_json::to_string_pretty(&value).map_err(anyhow::Error::from)?)? || !ctx.json {
        let mut text = cert.expr_text();
        if cert.copies > 0 {
            text.push_str(&format!("\n({} copies of X)", cert.copies));
        }
        if let Some(name) = &cert.homeo.name {
            text.push_str(&format!("\nhomeomorphic to {name}"));
        }
        ctx.emit(&text, json!({"version": 1, "expr": cert.expr_text(), "copies": cert.copies}))?;
    } else {
        ctx.emit("", value)?;
    }
    Ok(OK)
}

fn coverage(ctx: &Ctx, path: &Path) -> Res {
    let mut region: RegionSpec =
        serde_json::from_str(&read(path)?).with_context(|| format!("parsing region {}", path.display()))?;
    if let Some(m) = ctx.chi_max {
        region.chi_max = m;
    }
    let realizer = ctx.profile.realizer().map_err(geo_fail)?;
    let report = verify_coverage(&region, &realizer).map_err(geo_fail)?;
    let value = serde_json::to_value(&report).map_err(anyhow::Error::from)?;
    ctx.write_out(&serde_json::to_string_pretty(&value).map_err(anyhow::Error::from)?)?;
    ctx.emit(&report.text(), value)?;
    Ok(if report.fully_covered { OK } else { NOT_COVERED })
}

fn sw(ctx: &Ctx, arg: &str) -> Res {
    let text = if Path::new(arg).is_file() {
        read(Path::new(arg))?
    } else {
        arg.to_string()
    };
    let expr = parse(text.trim(), &ctx.catalog()?).map_err(|e| anyhow!(e))?;
    let report = eval(&expr).map_err(|e| anyhow!(e))?;
    let verdict = is_complex_admissible(&report);
    let (out, value) = match &report.sw {
        SwStatus::Exact { sw } => {
            let classes = basic_classes_of(sw);
            let rendered = sw.render(4096);
            (
                format!(
                    "{}\n{} basic classes, {} up to sign\n{}\n",
                    rendered,
                    classes.count,
                    classes.count_up_to_sign,
                    verdict.summary()
                ),
                json!({"version": 1, "expr": serialize(&expr), "status": "exact", "sw": rendered,
                       "basic_classes": classes, "admissibility": verdict}),
            )
        }
        SwStatus::Partial { designated } => (
            format!(
                "partial: designated basic classes {}\n{}\n",
                designated.join(", "),
                verdict.summary()
            ),
            json!({"version": 1, "expr": serialize(&expr), "status": "partial", "designated": designated,
                   "admissibility": verdict}),
        ),
        SwStatus::Unknown { reason } => (
            format!("unknown: {reason}\n"),
            json!({"version": 1, "expr": serialize(&expr), "status": "unknown", "reason": reason}),
        ),
    };
    ctx.emit(&out, value)?;
    Ok(OK)
}

fn exotic(ctx: &Ctx, n: i64, count: usize) -> Res {
    let realizer = ctx.profile.realizer().map_err(geo_fail)?;
    let fam = exotic_family(n, count, &realizer).map_err(geo_fail)?;
    let value = serde_json::to_value(&fam).map_err(anyhow::Error::from)?;
    ctx.write_out(&serde_json::to_string_pretty(&value).map_err(anyhow::Error::from)?)?;
    ctx.emit(&fam.text(), value)?;
    Ok(if fam.witnessed() { OK } else { FALSE })
}

fn composite(ctx: &Ctx, x: i64, g: i64, k: i64) -> Res {
    let cx = build_composite_x(x, g, k).map_err(geo_fail)?;
    let v = &cx.validation;
    let th = exotic_threshold(&cx.report.invariants, Some((x, k)));
    let mut text = format!(
        "X(x={x},g={g},k={k}): (χ, c) = ({}, {}), σ = {}\nc/χ = {} ≈ {}\npositive signature: {}\nratio > 8.76: {}\n",
        v.chi,
        v.c,
        v.sigma,
        v.ratio,
        v.ratio_decimal,
        v.positive_signature,
        v.exceeds_876
    );
    let th_json = match &th {
        Ok(t) => {
            text.push_str(&format!(
                "threshold N = {} (closed form 267145kx² + 70 = {})\n",
                t.threshold,
                t.closed_form.unwrap_or_default()
            ));
            serde_json::to_value(t).map_err(anyhow::Error::from)?
        }
        Err(e) => {
            text.push_str(&format!("threshold: {e}\n"));
            Value::Null
        }
    };
    ctx.emit(&text, json!({"version": 1, "validation": v, "threshold": th_json}))?;
    Ok(OK)
}

fn threshold(ctx: &Ctx) -> Res {
    let realizer = ctx.profile.realizer().map_err(geo_fail)?;
    let x = realizer
        .composite
        .ok_or_else(|| anyhow!("profile `{}` has no composite X", ctx.profile.name))?;
    let paper = match ctx.profile.composite {
        geo4_core::geography::CompositeConfig::Paper { x, k, .. } => Some((x, k)),
        _ => None,
    };
    let t = exotic_threshold(&x.invariants(), paper).map_err(geo_fail)?;
    let mut text = format!(
        "X = {} at {}\nf(χ) = {}·χ + ({})\nthreshold N = {}\n",
        x.name,
        x.invariants().point(),
        t.f_slope,
        t.f_intercept,
        t.threshold
    );
    if let Some(cf) = t.closed_form {
        text.push_str(&format!("closed form 267145kx² + 70 = {cf}\n"));
    }
    ctx.emit(&text, json!({"version": 1, "composite": x.name, "threshold": t}))?;
    Ok(OK)
}

fn ppx(ctx: &Ctx, chi: i64, c: i64) -> Res {
    let p = LatticePoint::new(chi, c);
    let v = ppx_admissible(p);
    let text = match v {
        PpxVerdict::NotApplicable => "not applicable: outside 2χ−6 ≤ c < 3(χ−5)".to_string(),
        PpxVerdict::Admissible { family } => format!("admissible as a spin complex surface ({family:?})"),
        PpxVerdict::NotAdmissible => "not admissible as a spin complex surface".to_string(),
    };
    ctx.emit(&text, json!({"version": 1, "point": p, "ppx": v}))?;
    Ok(if v.is_admissible() { OK } else { FALSE })
}

fn plot(ctx: &Ctx, path: &Path) -> Res {
    let mut spec: PlotSpec =
        serde_json::from_str(&read(path)?).with_context(|| format!("parsing plot spec {}", path.display()))?;
    if let Some(m) = ctx.chi_max {
        spec.chi_max = m;
    }
    spec.true_aspect |= ctx.true_aspect;
    spec.validate().map_err(|e| anyhow!(e))?;
    let base = path.parent().unwrap_or(Path::new("."));
    let realizer = ctx.profile.realizer().map_err(geo_fail)?;
    let mut sets = Vec::new();
    for (i, src) in spec.point_sources.iter().enumerate() {
        if let Some(r) = &src.region {
            let rp = base.join(r);
            let mut region: RegionSpec = serde_json::from_str(&read(&rp)?)
                .with_context(|| format!("parsing region {}", rp.display()))?;
            region.chi_max = region.chi_max.min(spec.chi_max);
            let report = verify_coverage(&region, &realizer).map_err(geo_fail)?;
            let label = src.label.clone().unwrap_or_else(|| region.name.clone());
            sets.push(PointSet {
                label: label.clone(),
                color: src.color.clone(),
                points: report.points.iter().filter(|p| p.realized).map(|p| p.point).collect(),
                hollow: false,
            });
            let missing: Vec<LatticePoint> = report.unrealized().map(|p| p.point).collect();
            if !missing.is_empty() {
                sets.push(PointSet {
                    label: format!("{label} (unrealized)"),
                    color: "#d62728".into(),
                    points: missing,
                    hollow: true,
                });
            }
        } else if let Some(c) = &src.certificate {
            let cp = base.join(c);
            let v: Value = serde_json::from_str(&read(&cp)?)
                .with_context(|| format!("parsing certificate {}", cp.display()))?;
            let point = v
                .get("certificate")
                .unwrap_or(&v)
                .get("point")
                .cloned()
                .ok_or_else(|| anyhow!("point_sources[{i}]: {} has no point", cp.display()))?;
            let point: LatticePoint = serde_json::from_value(point)
                .with_context(|| format!("point_sources[{i}]: bad point in {}", cp.display()))?;
            sets.push(PointSet {
                label: src.label.clone().unwrap_or_else(|| format!("certificate {point}")),
                color: src.color.clone(),
                points: vec![point],
                hollow: false,
            });
        }
    }
    let f = match &realizer.composite {
        Some(x) => Some(f_line(&x.invariants()).map_err(|e| anyhow!(e))?),
        None => None,
    };
    if spec.show_lines.contains(&LineName::FLine) && f.is_none() {
        return Err(anyhow!("the f-line needs a profile with a composite X").into());
    }
    let svg = render_svg(spec.chi_max, &lines_for(&spec.show_lines, f.as_ref()), &sets, spec.true_aspect);
    let target = ctx.out.clone().or_else(|| spec.output_path.as_ref().map(|p| base.join(p)));
    match target {
        Some(p) => {
            std::fs::write(&p, &svg).with_context(|| format!("writing {}", p.display()))?;
            ctx.emit(
                &format!("wrote {}", p.display()),
                json!({"version": 1, "svg": p.display().to_string()}),
            )?;
        }
        None => print!("{svg}"),
    }
    Ok(OK)
}

fn catalog(ctx: &Ctx) -> Res {
    let cat = ctx.catalog()?;
    let text = cat.to_json();
    ctx.write_out(&text)?;
    println!("{text}");
    Ok(OK)
}

fn run(cli: Cli) -> Res {
    let ctx = Ctx {
        json: cli.json,
        out: cli.out,
        profile: load_profile(cli.profile.as_deref())?,
        chi_max: cli.chi_max,
        true_aspect: cli.true_aspect,
    };
    match cli.cmd {
        Cmd::Allowed { chi, c } => allowed(&ctx, chi, c),
        Cmd::Realize { chi, c } => realize(&ctx, chi, c),
        Cmd::Coverage { region } => coverage(&ctx, &region),
        Cmd::Sw { expr } => sw(&ctx, &expr),
        Cmd::Exotic { n, count } => exotic(&ctx, n, count),
        Cmd::Plot { spec } => plot(&ctx, &spec),
        Cmd::Composite { x, g, k } => composite(&ctx, x, g, k),
        Cmd::Threshold => threshold(&ctx),
        Cmd::Ppx { chi, c } => ppx(&ctx, chi, c),
        Cmd::Catalog => catalog(&ctx),
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { INPUT } else { OK };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match run(cli) {
        Ok(code) => ExitCode::from(code),
        Err(f) => {
            eprintln!("error: {}", f.message);
            ExitCode::from(f.code)
        }
    }
}
