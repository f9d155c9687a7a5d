use std::path::PathBuf;
use std::process::{Command, Output};

use serde_json::Value;

fn fan(name: &str) -> String {
    let p: PathBuf = [env!("CARGO_MANIFEST_DIR"), "..", "..", "fans", name].iter().collect();
    p.to_string_lossy().into_owned()
}

fn golden(name: &str) -> String {
    let p: PathBuf = [env!("CARGO_MANIFEST_DIR"), "tests", "golden", name].iter().collect();
    std::fs::read_to_string(p).unwrap()
}

fn qamp(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_qamp")).args(args).output().unwrap()
}

fn json_ok(args: &[&str]) -> Value {
    let out = qamp(args);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stdout));
    serde_json::from_slice(&out.stdout).unwrap()
}

fn json_err(args: &[&str]) -> Value {
    let out = qamp(args);
    assert!(!out.status.success());
    serde_json::from_slice(&out.stdout).unwrap()
}

#[test]
fn check_accepts_and_rejects() {
    let v = json_ok(&["check", "--fan", &fan("blowup_p3.json")]);
    assert_eq!(v["rays"], 5);
    assert_eq!(v["simplicial"], true);
    let e = json_err(&["check", "--fan", &fan("incomplete.json")]);
    assert_eq!(e["error"], "NotComplete");
    let e = json_err(&["check", "--fan", "/nonexistent/fan.json"]);
    assert_eq!(e["error"], "Io");
}

#[test]
fn cohomology_and_oracle() {
    let p2 = fan("p2.json");
    let v = json_ok(&["cohomology", "--fan", &p2, "--divisor", "[2,0,0]"]);
    assert_eq!(v["dims"], serde_json::json!([6, 0, 0]));
    assert!(v.get("weights").is_none());
    let v = json_ok(&["cech", "--fan", &p2, "--divisor", r#"{"coeffs": [-3, 0, 0]}"#]);
    assert_eq!(v["dims"], serde_json::json!([0, 0, 1]));
    let v = json_ok(&["cohomology", "--fan", &fan("blowup_p2.json"), "--divisor", "[0,0,1,-1]", "--keep-weights"]);
    assert_eq!(v["dims"], serde_json::json!([2, 0, 0]));
    assert_eq!(v["weights"]["0"].as_array().unwrap().len(), 2);
    let e = json_err(&["cohomology", "--fan", &fan("p112.json"), "--divisor", "[0,0,1]"]);
    assert_eq!(e["error"], "NotCartier");
    let e = json_err(&["cohomology", "--fan", &p2, "--divisor", "[1,0]"]);
    assert_eq!(e["error"], "Malformed");
}

#[test]
fn divisor_from_file() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("d.json");
    std::fs::write(&path, r#"{"coeffs": [1, 0, 0]}"#).unwrap();
    let v = json_ok(&["cohomology", "--fan", &fan("p2.json"), "--divisor", path.to_str().unwrap()]);
    assert_eq!(v["dims"], serde_json::json!([3, 0, 0]));
}

#[test]
fn qample_membership_and_levels() {
    let bl = fan("blowup_p3.json");
    let member = |c: &str, q: &str| json_ok(&["qample", "--fan", &bl, "--q", q, "--class", c])["q_ample"].clone();
    assert_eq!(member("2,-1", "0"), true);
    assert_eq!(member("1,-2", "0"), false);
    assert_eq!(member("1,-2", "1"), true);
    assert_eq!(member("0,-1", "2"), false);
    assert_eq!(json_ok(&["level", "--fan", &bl, "--class", "0,1"])["level"], 2);
    assert_eq!(json_ok(&["level", "--fan", &bl, "--class", "-1,0"])["level"], 3);
    let e = json_err(&["qample", "--fan", &bl, "--q", "4"]);
    assert_eq!(e["error"], "InvalidQ");
}

#[test]
fn qample_cone_json() {
    let v = json_ok(&["qample", "--fan", &fan("blowup_p3.json"), "--q", "1"]);
    assert_eq!(v["q"], 1);
    // the quadrant is cut by x + y = 0 into two closed pieces, one open cone
    assert_eq!(v["closed_pieces"].as_array().unwrap().len(), 2);
    let cover = v["open_cover"].as_array().unwrap();
    assert_eq!(cover.len(), 1);
    let normals: Vec<Value> =
        cover[0]["constraints"].as_array().unwrap().iter().map(|c| c["normal"].clone()).collect();
    assert_eq!(normals, vec![serde_json::json!([0, -1]), serde_json::json!([1, 0])]);
    for c in v["open_cover"].as_array().unwrap() {
        assert!(c["constraints"].as_array().unwrap().iter().all(|h| h["strict"] == true));
    }
}

#[test]
fn hhat_and_betti() {
    let p2 = fan("p2.json");
    assert_eq!(json_ok(&["hhat", "--fan", &p2, "--i", "0", "--divisor", "[1,0,0]"])["value"], "1");
    assert_eq!(json_ok(&["hhat", "--fan", &p2, "--i", "2", "--class", "-1"])["value"], "1");
    assert_eq!(json_ok(&["hhat", "--fan", &p2, "--i", "0", "--class", "1/2"])["value"], "1/4");
    let e = json_err(&["hhat", "--fan", &p2, "--i", "3", "--class", "1"]);
    assert_eq!(e["error"], "InvalidDegree");
    let v = json_ok(&["betti", "--fan", &fan("blowup_p3.json")]);
    assert_eq!(v["J"]["0"], serde_json::json!([[4, 5]]));
    assert_eq!(v["J"]["1"], serde_json::json!([[1, 2, 3]]));
    assert_eq!(v["J"]["2"], serde_json::json!([[1, 2, 3, 4, 5]]));
}

#[test]
fn classgroup_output() {
    let v = json_ok(&["classgroup", "--fan", &fan("blowup_p2.json")]);
    assert_eq!(v["rank"], 2);
    assert_eq!(v["ray_classes"], serde_json::json!([["1", "-1"], ["1", "-1"], ["1", "0"], ["0", "1"]]));
}

#[test]
fn figures_match_golden_files() {
    let cases = [
        ("blowup_p3.json", "0", "ample", "blowup_p3_ample_q0.svg"),
        ("blowup_p3.json", "1", "ample", "blowup_p3_ample_q1.svg"),
        ("blowup_p3.json", "2", "ample", "blowup_p3_ample_q2.svg"),
        ("blowup_p2.json", "0", "obstruction", "blowup_p2_obstruction_q0.svg"),
        ("blowup_p2.json", "1", "obstruction", "blowup_p2_obstruction_q1.svg"),
    ];
    for (f, q, kind, gold) in cases {
        let out = qamp(&["figure", "--fan", &fan(f), "--q", q, "--kind", kind]);
        assert!(out.status.success());
        assert_eq!(String::from_utf8(out.stdout).unwrap(), golden(gold), "{gold}");
    }
}

#[test]
fn figure_styles() {
    // Amp_0 of the blowup of P^3: wedge between (1,0) and (1,-1), both edges excluded
    let amp0 = golden("blowup_p3_ample_q0.svg");
    assert_eq!(amp0.matches("stroke-dasharray").count(), 2);
    assert!(amp0.contains("x2=\"400.00\" y2=\"400.00\""));
    assert!(amp0.contains("x2=\"400.00\" y2=\"200.00\""));
    // K for q = 1 on the blowup of P^2: {x <= 0, x + y <= 0}, closed edges
    let k1 = golden("blowup_p2_obstruction_q1.svg");
    assert_eq!(k1.matches("stroke-dasharray").count(), 0);
    assert!(k1.contains("x2=\"0.00\" y2=\"0.00\""));
    assert!(k1.contains("x2=\"200.00\" y2=\"400.00\""));
    let e = json_err(&["figure", "--fan", &fan("p2.json"), "--q", "0"]);
    assert_eq!(e["error"], "UnsupportedRank");
}

#[test]
fn cache_reproduces_output() {
    let dir = tempfile::tempdir().unwrap();
    let cache = dir.path().to_str().unwrap();
    let args = ["qample", "--fan", &fan("blowup_p3.json"), "--q", "2", "--cache-dir", cache];
    let first = qamp(&args).stdout;
    let cached = std::fs::read_dir(dir.path()).unwrap().filter(|e| {
        e.as_ref().unwrap().file_name().to_string_lossy().ends_with(".json")
    });
    assert_eq!(cached.count(), 1);
    let second = qamp(&args).stdout;
    for e in std::fs::read_dir(dir.path()).unwrap() {
        std::fs::remove_file(e.unwrap().path()).unwrap();
    }
    let third = qamp(&args).stdout;
    let uncached = qamp(&args[..5]).stdout;
    assert_eq!(first, second);
    assert_eq!(first, third);
    assert_eq!(first, uncached);
}
