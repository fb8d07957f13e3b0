use std::fs;
use std::path::{Path, PathBuf};

use klein_cli::run;
use klein_core::scene::Scene;
use klein_core::Point;
use serde_json::Value;
use tempfile::TempDir;

const SCENE: &str = r#"{
  "points": {
    "O": {"x": "0", "y": "0"},
    "P": {"x": "3/5", "y": "0"},
    "Q": {"x": "-1/3", "y": "1/2"},
    "X": {"kind": "rim", "x": "3/5", "y": "4/5"}
  },
  "lines": {
    "l": {"ends": [{"kind": "rim", "x": "1", "y": "0"}, {"kind": "rim", "x": "-1", "y": "0"}]},
    "m": {"ends": [{"kind": "rim", "x": "0", "y": "1"}, {"kind": "rim", "x": "3/5", "y": "4/5"}]}
  }
}"#;

fn klein(args: &[&str]) -> i32 {
    run(std::iter::once("klein").chain(args.iter().copied()))
}

fn setup() -> (TempDir, PathBuf) {
    let dir = tempfile::tempdir().unwrap();
    let scene = dir.path().join("scene.json");
    fs::write(&scene, SCENE).unwrap();
    (dir, scene)
}

fn s(p: &Path) -> &str {
    p.to_str().unwrap()
}

#[test]
fn midpoint_construction() {
    let (dir, scene) = setup();
    let out = dir.path().join("mid.json");
    assert_eq!(
        klein(&["construct", "midpoint", "--scene", s(&scene), "--args", "O", "P", "--out", s(&out)]),
        0
    );
    let result = Scene::parse(&fs::read_to_string(&out).unwrap()).unwrap();
    assert!(result.finite("result").unwrap().eq_exact(&Point::rat(1, 3, 0, 1)));
}

#[test]
fn construction_results_reload() {
    let (dir, scene) = setup();
    let out = dir.path().join("perp.json");
    assert_eq!(
        klein(&["construct", "perp_at_point", "--scene", s(&scene), "--args", "l", "P", "--out", s(&out)]),
        0
    );
    let perp = Scene::parse(&fs::read_to_string(&out).unwrap()).unwrap().line("result").unwrap();
    assert!(perp.contains(&Point::rat(3, 5, 0, 1)));

    let out = dir.path().join("refl.json");
    assert_eq!(
        klein(&["construct", "reflection-apply", "--scene", s(&scene), "--args", "l", "Q", "--out", s(&out)]),
        0
    );
    let image = Scene::parse(&fs::read_to_string(&out).unwrap()).unwrap().finite("result").unwrap();
    assert!(image.eq_exact(&Point::rat(-1, 3, -1, 2)));
}

#[test]
fn construct_errors() {
    let (dir, scene) = setup();
    let out = dir.path().join("x.json");
    let o = s(&out);
    assert_eq!(klein(&["construct", "trisect", "--scene", s(&scene), "--args", "O", "P", "--out", o]), 2);
    assert_eq!(klein(&["construct", "midpoint", "--scene", s(&scene), "--args", "O", "Z", "--out", o]), 2);
    assert_eq!(klein(&["construct", "midpoint", "--scene", "/nonexistent.json", "--args", "O", "P"]), 2);
    // a line has no common perpendicular with itself
    assert_eq!(
        klein(&["construct", "common_perpendicular", "--scene", s(&scene), "--args", "l", "l", "--out", o]),
        1
    );
}

#[test]
fn render_structure() {
    let (dir, scene) = setup();
    let out = dir.path().join("scene.svg");
    assert_eq!(klein(&["render", "--scene", s(&scene), "--out", s(&out), "--size", "256"]), 0);
    let svg = fs::read_to_string(&out).unwrap();
    assert!(svg.starts_with("<?xml") || svg.starts_with("<svg"));
    assert!(svg.contains("<!-- klein 0.1.0 -->"));
    assert_eq!(svg.matches("<circle").count(), 1);
    assert_eq!(svg.matches("<line").count(), 2);
    assert_eq!(svg.matches("<text").count(), 4);
    assert!(svg.trim_end().ends_with("</svg>"));
    assert_eq!(klein(&["render", "--scene", s(&scene), "--out", s(&out), "--size", "0"]), 2);
}

#[test]
fn verify_exit_codes() {
    let dir = tempfile::tempdir().unwrap();
    let report = dir.path().join("r.json");
    let r = s(&report);
    assert_eq!(klein(&["verify", "--suite", "axioms", "--seed", "1", "--trials", "2", "--json", r]), 0);
    let v: Value = serde_json::from_str(&fs::read_to_string(&report).unwrap()).unwrap();
    assert_eq!(v["overall"], true);
    assert_eq!(
        klein(&[
            "verify",
            "--suite",
            "axioms",
            "--seed",
            "1",
            "--trials",
            "4",
            "--sabotage",
            "euclidean-mirror",
            "--json",
            r
        ]),
        1
    );
    assert_eq!(klein(&["verify", "--suite", "nope", "--seed", "1", "--trials", "2"]), 2);
    assert_eq!(klein(&["verify", "--suite", "axioms", "--seed", "1", "--trials", "0"]), 2);
    assert_eq!(klein(&["verify", "--suite", "axioms", "--seed", "x", "--trials", "2"]), 2);
    assert_eq!(
        klein(&["verify", "--suite", "axioms", "--seed", "1", "--trials", "2", "--sabotage", "gremlin"]),
        2
    );
    assert_eq!(klein(&["frobnicate"]), 2);
}

#[test]
fn oval_report() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("oval.json");
    assert_eq!(klein(&["oval", "--p", "5", "--check", "all", "--json", s(&path)]), 0);
    let v: Value = serde_json::from_str(&fs::read_to_string(&path).unwrap()).unwrap();
    assert_eq!(v["points"], 6);
    assert_eq!(v["involutions"], 25);
    for k in ["oval", "pascal", "regular", "incidence", "involution-model"] {
        assert_eq!(v["checks"][k], true, "{k}");
    }
    assert_eq!(klein(&["oval", "--p", "4"]), 2);
    assert_eq!(klein(&["oval", "--p", "7", "--check", "pascal"]), 0);
}
