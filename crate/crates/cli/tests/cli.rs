use std::path::Path;
use std::process::{Command, Output};

fn geo4(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_geo4"))
        .args(args)
        .env_remove("GEO4_PROFILE")
        .output()
        .expect("geo4 runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

fn stderr(o: &Output) -> String {
    String::from_utf8_lossy(&o.stderr).into_owned()
}

#[test]
fn allowed_verdicts_and_exit_codes() {
    let o = geo4(&["allowed", "7", "8"]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(stdout(&o).trim(), "allowed");

    let o = geo4(&["allowed", "3", "0"]);
    assert_eq!(o.status.code(), Some(1));
    assert!(stdout(&o).contains("congruence violated"));

    let o = geo4(&["allowed", "1", "-8"]);
    assert_eq!(o.status.code(), Some(1));
    assert!(stdout(&o).contains("c < 0"));
}

#[test]
fn usage_errors_exit_3() {
    assert_eq!(geo4(&["allowed", "x", "8"]).status.code(), Some(3));
    assert_eq!(geo4(&["frobnicate"]).status.code(), Some(3));
    assert_eq!(geo4(&["sw", "fsum(f,f; E(n=2), Q(n=1))"]).status.code(), Some(3));
    assert_eq!(geo4(&["--help"]).status.code(), Some(0));
}

#[test]
fn realize_prints_expression() {
    let o = geo4(&["realize", "17", "8"]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(stdout(&o).lines().next(), Some("fsum(f,f; H(k=2), E(n=10))"));

    let o = geo4(&["realize", "14", "16"]);
    assert_eq!(stdout(&o).lines().next(), Some("fsum(f,f; H(k=2), H(k=2))"));
}

#[test]
fn realize_writes_certificate() {
    let dir = tempfile::tempdir().unwrap();
    let cert = dir.path().join("cert.json");
    let o = geo4(&["realize", "15", "24", "--out", cert.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0));
    let v: serde_json::Value = serde_json::from_str(&std::fs::read_to_string(&cert).unwrap()).unwrap();
    assert_eq!(v["version"], 1);
    assert_eq!(v["certificate"]["expr"], "H(k=4)");
    assert_eq!(v["certificate"]["point"]["chi"], 15);
    assert!(v["certificate"]["checks"].as_array().unwrap().iter().all(|c| c["passed"] == true));
}

#[test]
fn realize_uncovered_point_exits_2_with_trace() {
    let o = geo4(&["realize", "12", "16"]);
    assert_eq!(o.status.code(), Some(2));
    assert!(stderr(&o).contains("m = 0"));
}

#[test]
fn realize_on_signature_zero_line() {
    let o = geo4(&["--json", "realize", "264", "2112"]);
    assert_eq!(o.status.code(), Some(0));
    let v: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(v["certificate"]["homeo"]["name"], "527(S²×S²)");
    assert_eq!(v["certificate"]["copies"], 21);
}

fn write(dir: &Path, name: &str, text: &str) -> String {
    let p = dir.join(name);
    std::fs::write(&p, text).unwrap();
    p.to_str().unwrap().to_string()
}

const WEDGE: &str = r#"{"name":"wedge","chi_max":40,"constraints":[
    {"type":"nonneg"},{"type":"line_le","line":"Noether"},{"type":"congruence"}]}"#;

#[test]
fn coverage_of_wedge_below_the_parallel_line() {
    let dir = tempfile::tempdir().unwrap();
    let r = write(
        dir.path(),
        "w.json",
        r#"{"name":"lower wedge","chi_max":60,"constraints":[
            {"type":"nonneg"},{"type":"line_le","line":"NoetherParallel12"},{"type":"congruence"}]}"#,
    );
    let o = geo4(&["coverage", &r]);
    assert_eq!(o.status.code(), Some(0), "{}", stdout(&o));
    assert!(stdout(&o).contains("covered 100%"));
}

#[test]
fn coverage_reports_gaps_with_exit_2() {
    let dir = tempfile::tempdir().unwrap();
    let r = write(dir.path(), "w.json", WEDGE);
    let o = geo4(&["--json", "--profile", "desk", "coverage", &r, "--chi-max", "20"]);
    assert_eq!(o.status.code(), Some(2));
    let v: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(v["version"], 1);
    assert_eq!(v["chi_max"], 20);
    assert_eq!(v["fully_covered"], false);
    let missing: Vec<_> = v["points"]
        .as_array()
        .unwrap()
        .iter()
        .filter(|p| p["realized"] == false)
        .map(|p| (p["point"]["chi"].as_i64().unwrap(), p["point"]["c"].as_i64().unwrap()))
        .collect();
    assert_eq!(missing, vec![(12, 16), (20, 32)]);
}

#[test]
fn sw_of_k3_sum() {
    let o = geo4(&["sw", "fsum(f,f; E(n=2), E(n=2))"]);
    assert_eq!(o.status.code(), Some(0));
    let out = stdout(&o);
    assert_eq!(out.lines().next(), Some("+1*exp(2f) -2 +1*exp(-2f)"));
    assert!(out.contains("3 basic classes, 2 up to sign"));
}

#[test]
fn sw_of_trefoil_surgery() {
    let o = geo4(&["--json", "sw", "surgery(T,(2,3); E(n=4))"]);
    let v: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(v["sw"], "+1*exp(4T) -3*exp(2T) +4 -3*exp(-2T) +1*exp(-4T)");
    assert_eq!(v["basic_classes"]["count"], 5);
}

#[test]
fn sw_partial_is_not_an_error() {
    let o = geo4(&["sw", "fsum(Σ_g,Σ; Y(x=1,g=3), Z(g=3))"]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).contains("partial"));
}

#[test]
fn sw_reads_files() {
    let dir = tempfile::tempdir().unwrap();
    let f = write(dir.path(), "e.txt", "E(n=3)\n");
    let o = geo4(&["sw", &f]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).starts_with("+1*exp(T) -1*exp(-T)"));
}

#[test]
fn exotic_threshold_logic() {
    let o = geo4(&["--profile", "paper", "exotic", "5", "--count", "1"]);
    assert_eq!(o.status.code(), Some(2));
    assert!(stderr(&o).contains("2671155071"));

    let o = geo4(&["exotic", "5", "--count", "1"]);
    assert_eq!(o.status.code(), Some(2));
    assert!(stderr(&o).contains("264"));

    let o = geo4(&["exotic", "263", "--count", "1"]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).contains("527(S²×S²)"));
}

#[test]
fn exotic_json_family() {
    let o = geo4(&["--json", "exotic", "263", "--count", "4"]);
    assert_eq!(o.status.code(), Some(0));
    let v: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(v["members"].as_array().unwrap().len(), 4);
    assert_eq!(v["pairwise_distinct"], true);
}

#[test]
fn profile_from_env_and_file() {
    let dir = tempfile::tempdir().unwrap();
    let p = write(
        dir.path(),
        "p.json",
        r#"{"version":1,"name":"base","composite":{"kind":"none"},"chi_max":30}"#,
    );
    let o = Command::new(env!("CARGO_BIN_EXE_geo4"))
        .args(["realize", "264", "2112"])
        .env("GEO4_PROFILE", &p)
        .output()
        .unwrap();
    assert_eq!(o.status.code(), Some(2));
    // the flag wins over the environment
    let o = Command::new(env!("CARGO_BIN_EXE_geo4"))
        .args(["--profile", "desk", "realize", "264", "2112"])
        .env("GEO4_PROFILE", &p)
        .output()
        .unwrap();
    assert_eq!(o.status.code(), Some(0));
    let bad = write(dir.path(), "bad.json", r#"{"version":1}"#);
    assert_eq!(geo4(&["--profile", &bad, "allowed", "7", "8"]).status.code(), Some(3));
}

#[test]
fn threshold_and_composite() {
    let o = geo4(&["threshold"]);
    assert!(stdout(&o).contains("threshold N = 264"));
    let o = geo4(&["--json", "composite", "--x", "1", "--g", "3", "--k", "1"]);
    let v: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(v["validation"]["chi"], 6875);
    assert_eq!(v["validation"]["exceeds_876"], false);
}

#[test]
fn ppx_verdicts() {
    assert_eq!(geo4(&["ppx", "15", "24"]).status.code(), Some(0));
    let o = geo4(&["ppx", "13", "20"]);
    assert_eq!(o.status.code(), Some(1));
    assert!(stdout(&o).contains("not admissible"));
    assert!(stdout(&geo4(&["ppx", "7", "8"])).contains("not applicable"));
}

#[test]
fn catalog_round_trips() {
    let o = geo4(&["catalog"]);
    let v: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(v["version"], 1);
    assert!(v["blocks"].as_array().unwrap().len() > 5);
}

fn plot_spec(dir: &Path, sources: &str) -> String {
    write(
        dir,
        "plot.json",
        &format!(
            r#"{{"chi_max":50,"show_lines":["Elliptic","Noether","NoetherParallel12","SignatureZero","Ratio876","BMY","FLine"],
                "point_sources":{sources}}}"#
        ),
    )
}

#[test]
fn plot_all_lines() {
    let dir = tempfile::tempdir().unwrap();
    let spec = plot_spec(dir.path(), "[]");
    let out = dir.path().join("a.svg");
    let o = geo4(&["plot", &spec, "--out", out.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    let svg = std::fs::read_to_string(&out).unwrap();
    assert!(svg.starts_with("<svg"));
    assert!(svg.matches("class=\"line-label\"").count() >= 6);
    assert!(!svg.contains("href"));
}

#[test]
fn plot_is_byte_identical_and_colors_points() {
    let dir = tempfile::tempdir().unwrap();
    write(dir.path(), "w.json", WEDGE);
    let spec = plot_spec(dir.path(), r##"[{"region":"w.json","color":"#00aa00"}]"##);
    let a = dir.path().join("a.svg");
    let b = dir.path().join("b.svg");
    assert_eq!(geo4(&["plot", &spec, "--out", a.to_str().unwrap()]).status.code(), Some(0));
    assert_eq!(geo4(&["plot", &spec, "--out", b.to_str().unwrap()]).status.code(), Some(0));
    let sa = std::fs::read(&a).unwrap();
    assert_eq!(sa, std::fs::read(&b).unwrap());
    let text = String::from_utf8(sa).unwrap();
    assert!(text.contains(r##"fill="#00aa00""##));

    let c = dir.path().join("c.svg");
    geo4(&["plot", &spec, "--true-aspect", "--out", c.to_str().unwrap()]);
    assert_ne!(std::fs::read(&c).unwrap(), std::fs::read(&a).unwrap());
}

#[test]
fn plot_rejects_bad_color() {
    let dir = tempfile::tempdir().unwrap();
    let spec = plot_spec(dir.path(), r##"[{"region":"w.json","color":"green"}]"##);
    assert_eq!(geo4(&["plot", &spec]).status.code(), Some(3));
}
