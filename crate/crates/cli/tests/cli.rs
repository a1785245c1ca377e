use std::fs;
use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use serde_json::Value;

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_xi-contour"))
}

fn config(name: &str) -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR"))
        .join("../../configs")
        .join(name)
}

fn run(args: &[&str]) -> Output {
    bin().args(args).output().expect("binary runs")
}

fn job(cmd: &str, cfg: &Path, out: &Path, extra: &[&str]) -> Output {
    let mut args = vec![
        cmd,
        "--config",
        cfg.to_str().unwrap(),
        "--out",
        out.to_str().unwrap(),
    ];
    args.extend_from_slice(extra);
    run(&args)
}

fn json(path: &Path) -> Value {
    serde_json::from_str(&fs::read_to_string(path).unwrap()).unwrap()
}

#[test]
fn bounds_table() {
    let out = run(&["bounds", "2", "5", "2"]);
    assert!(out.status.success());
    let v: Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(v["isotopy_bound"], 11);
    assert_eq!(v["chamber_bound"], 2);
    assert_eq!(v["korben"]["components"], 2);
    let v: Value = serde_json::from_slice(&run(&["bounds", "2", "6", "2"]).stdout).unwrap();
    assert_eq!(v["max_facet_lines"], 3);
    assert_eq!(v["steiner"], 7);
}

#[test]
fn bounds_rejects_impossible_parameters() {
    assert_eq!(run(&["bounds", "2", "2", "2"]).status.code(), Some(2));
}

#[test]
fn missing_config_is_a_usage_error() {
    let dir = tempfile::tempdir().unwrap();
    let out = job("verify", &dir.path().join("absent.toml"), dir.path(), &[]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn bad_field_is_named() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("bad.toml");
    fs::write(&cfg, "name = \"x\"\nspectrum = [[0, 1, \"cbrt(2)\"]]\n").unwrap();
    let out = job("contour", &cfg, dir.path(), &[]);
    assert_eq!(out.status.code(), Some(2));
    let err = String::from_utf8_lossy(&out.stderr);
    assert!(err.contains("spectrum[0][2]"), "{err}");
}

#[test]
fn pentagon_contour_files() {
    let dir = tempfile::tempdir().unwrap();
    let out = job(
        "contour",
        &config("penta.toml"),
        dir.path(),
        &["--workers", "2"],
    );
    assert!(
        out.status.success(),
        "{}",
        String::from_utf8_lossy(&out.stderr)
    );
    let case = dir.path().join("penta");
    let mut nonempty = 0;
    let mut layers = 0;
    for entry in fs::read_dir(&case).unwrap() {
        let path = entry.unwrap().path();
        if path.extension().is_some_and(|e| e == "csv") {
            layers += 1;
            let text = fs::read_to_string(&path).unwrap();
            assert!(text.starts_with("kind,id,piece,theta,x,y\n"));
            nonempty += text.lines().any(|l| l.starts_with("arc,")) as usize;
        }
    }
    assert_eq!((layers, nonempty), (16, 5));

    let svg = fs::read_to_string(case.join("contour.svg")).unwrap();
    let doc = roxmltree::Document::parse(&svg).expect("well-formed SVG");
    let root = doc.root_element();
    assert_eq!(root.tag_name().name(), "svg");
    assert_eq!(root.attribute("version"), Some("1.1"));
    let groups = doc
        .descendants()
        .filter(|n| n.attribute("id").is_some_and(|id| id.starts_with("sigma-")))
        .count();
    assert_eq!(groups, 16);
    assert_eq!(
        doc.descendants()
            .filter(|n| n.attribute("class") == Some("cusp"))
            .count(),
        2
    );

    let report = json(&case.join("report.json"));
    let attained = report["layers"]
        .as_array()
        .unwrap()
        .iter()
        .filter(|l| l["attained"] == true)
        .count();
    assert_eq!(attained, 5);
    assert!(report["nullspace_residual"].as_f64().unwrap() < 1e-10);
    assert!(json(&case.join("report.meta.json"))["started"].is_u64());
}

#[test]
fn reports_are_byte_identical() {
    let a = tempfile::tempdir().unwrap();
    let b = tempfile::tempdir().unwrap();
    assert!(job(
        "contour",
        &config("inf.toml"),
        a.path(),
        &["--workers", "1"]
    )
    .status
    .success());
    assert!(job(
        "contour",
        &config("inf.toml"),
        b.path(),
        &["--workers", "3"]
    )
    .status
    .success());
    for file in ["report.json", "contour.svg", "++-++.csv", "+--++.csv"] {
        let x = fs::read(a.path().join("inf").join(file)).unwrap();
        let y = fs::read(b.path().join("inf").join(file)).unwrap();
        assert!(x == y, "{file} differs");
    }
}

#[test]
fn inf_contour_has_an_arc_and_two_lines() {
    let dir = tempfile::tempdir().unwrap();
    assert!(job("contour", &config("inf.toml"), dir.path(), &[])
        .status
        .success());
    let svg = fs::read_to_string(dir.path().join("inf/contour.svg")).unwrap();
    let doc = roxmltree::Document::parse(&svg).unwrap();
    let mut lines: Vec<(String, String)> = doc
        .descendants()
        .filter(|n| n.attribute("class") == Some("facet"))
        .map(|n| {
            (
                n.attribute("x1").unwrap().into(),
                n.attribute("y1").unwrap().into(),
            )
        })
        .collect();
    lines.sort();
    lines.dedup();
    assert_eq!(lines.len(), 2);
    assert!(doc.descendants().any(|n| n.has_tag_name("polyline")));
}

#[test]
fn inf_chambers_separate_the_two_circles() {
    let dir = tempfile::tempdir().unwrap();
    let out = job("chambers", &config("inf.toml"), dir.path(), &[]);
    assert!(
        out.status.success(),
        "{}",
        String::from_utf8_lossy(&out.stderr)
    );
    let report = json(&dir.path().join("inf/report.json"));
    let sign = report["signs"]
        .as_array()
        .unwrap()
        .iter()
        .find(|s| s["sign"] == "++-++")
        .unwrap();
    assert_eq!(sign["attained"], false);
    assert_eq!(sign["count"], 2);
    let samples = sign["samples"].as_array().unwrap();
    assert_eq!(samples.len(), 2);
    assert_ne!(samples[0]["chamber"], samples[1]["chamber"]);
    let empty = report["signs"]
        .as_array()
        .unwrap()
        .iter()
        .find(|s| s["sign"] == "+++++")
        .unwrap();
    assert_eq!(empty["count"], 1);
}

#[test]
fn circuit_config_verifies() {
    let dir = tempfile::tempdir().unwrap();
    let out = job("verify", &config("sqrt2.toml"), dir.path(), &[]);
    assert!(
        out.status.success(),
        "{}",
        String::from_utf8_lossy(&out.stdout)
    );
    let report = json(&dir.path().join("sqrt2/report.json"));
    assert_eq!(report["passed"], true);
    let on = &report["samples"][0]["circuit"];
    assert!(on["residual"].as_f64().unwrap().abs() < 1e-12);
    assert_eq!(on["sign_compatible"], true);
}

#[test]
fn corrupted_basis_fails_verification() {
    let dir = tempfile::tempdir().unwrap();
    let out = job(
        "verify",
        &config("sqrt2.toml"),
        dir.path(),
        &["--corrupt-basis"],
    );
    assert_eq!(out.status.code(), Some(1));
    let report = json(&dir.path().join("sqrt2/report.json"));
    assert_eq!(report["passed"], false);
    assert_eq!(report["checks"][0]["status"], "fail");
}

#[test]
fn golden_configs_verify() {
    for name in ["inf", "penta"] {
        let dir = tempfile::tempdir().unwrap();
        let out = job("verify", &config(&format!("{name}.toml")), dir.path(), &[]);
        assert!(
            out.status.success(),
            "{name}:\n{}",
            String::from_utf8_lossy(&out.stdout)
        );
    }
}

#[test]
fn window_override_is_validated() {
    let dir = tempfile::tempdir().unwrap();
    let out = job(
        "chambers",
        &config("inf.toml"),
        dir.path(),
        &["--window", "-1"],
    );
    assert_eq!(out.status.code(), Some(2));
}
