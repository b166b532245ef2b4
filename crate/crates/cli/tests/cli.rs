use std::path::Path;
use std::process::{Command, Output};

use serde_json::Value;

fn tetrad(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_tetrad")).args(args).output().expect("binary runs")
}

fn code(o: &Output) -> i32 {
    o.status.code().expect("exit code")
}

fn read_json(path: &Path) -> Value {
    serde_json::from_str(&std::fs::read_to_string(path).unwrap()).unwrap()
}

#[test]
fn build_writes_a_document() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("g.json");
    let o = tetrad(&["build", "--family", "fitting_two", "--p", "3", "--out", out.to_str().unwrap()]);
    assert_eq!(code(&o), 0);
    let doc = read_json(&out);
    assert_eq!(doc["schema_version"], 1);
    assert_eq!(doc["p_order_exponent"], 5);
    assert_eq!(doc["g_order"], "1944");
    assert_eq!(doc["field"]["modulus"].as_array().unwrap().len(), 3);
}

#[test]
fn invalid_parameters_exit_two() {
    let o = tetrad(&["build", "--family", "one", "--p", "5", "--q", "3"]);
    assert_eq!(code(&o), 2);
    assert!(String::from_utf8_lossy(&o.stderr).contains("q must divide p−1"));
    assert_eq!(code(&tetrad(&["build", "--family", "nine", "--p", "5"])), 2);
}

#[test]
fn five_carries_the_order_flag() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("g.json");
    let o = tetrad(&["build", "--family", "five", "--p", "7", "--q", "3", "--n", "4", "--out", out.to_str().unwrap()]);
    assert_eq!(code(&o), 0);
    let flags = read_json(&out)["flags"].as_array().unwrap().clone();
    assert!(flags.iter().any(|f| f.as_str().unwrap().starts_with("order correction")));
    assert_eq!(read_json(&out)["g_order"], "13800933594");
}

#[test]
fn verify_fitting_two() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("r.json");
    let o = tetrad(&["verify", "--family", "fitting_two", "--p", "3", "--out", out.to_str().unwrap()]);
    assert_eq!(code(&o), 0);
    let r = read_json(&out);
    assert_eq!(r["status"], "PASS");
    assert_eq!(r["oracle"]["status"], "VERIFIED");
    assert_eq!(r["oracle"]["cd"], serde_json::json!([1, 2, 8, 18]));
    assert_eq!(r["predictions"]["cd"], serde_json::json!([1, 2, 8, 18]));
}

#[test]
fn verify_past_caps_is_cert_only() {
    let o = tetrad(&["verify", "--family", "one", "--p", "7", "--q", "3", "--json"]);
    assert_eq!(code(&o), 0);
    let r: Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(r["status"], "PASS_CERT_ONLY");
    assert_eq!(r["oracle"]["status"], "SKIPPED_ORACLE");
    assert_eq!(r["oracle"]["order"], "6900466797");
}

#[test]
fn oracle_past_caps_exits_three() {
    assert_eq!(code(&tetrad(&["oracle", "--family", "fitting_two", "--p", "3", "--max-order", "1000"])), 3);
    assert_eq!(code(&tetrad(&["oracle", "--family", "fitting_two", "--p", "3", "--max-classes", "10"])), 3);
    assert_eq!(code(&tetrad(&["oracle", "--family", "fitting_two", "--p", "3"])), 0);
}

#[test]
fn corrupted_document_fails_certification() {
    let dir = tempfile::tempdir().unwrap();
    let good = dir.path().join("g.json");
    assert_eq!(code(&tetrad(&["build", "--family", "fitting_two", "--p", "3", "--out", good.to_str().unwrap()])), 0);
    let mut doc = read_json(&good);
    let z = doc["h_generators"][0]["aut"]["z_mult"].as_u64().unwrap();
    doc["h_generators"][0]["aut"]["z_mult"] = Value::from(z % 2 + 1);
    let bad = dir.path().join("bad.json");
    std::fs::write(&bad, doc.to_string()).unwrap();
    let report = dir.path().join("r.json");
    let o = tetrad(&["certify", "--in", bad.to_str().unwrap(), "--out", report.to_str().unwrap()]);
    assert_eq!(code(&o), 1);
    let r = read_json(&report);
    assert_eq!(r["status"], "FAIL");
    let first = &r["certificate"]["checks"][0];
    assert_eq!(first["name"], "aut_compatibility");
    assert_eq!(first["verdict"], "FAIL");
    assert!(first["witness"].is_object());
}

#[test]
fn malformed_input_exits_two() {
    let dir = tempfile::tempdir().unwrap();
    let junk = dir.path().join("j.json");
    std::fs::write(&junk, "{").unwrap();
    assert_eq!(code(&tetrad(&["certify", "--in", junk.to_str().unwrap()])), 2);
    assert_eq!(code(&tetrad(&["certify", "--in", dir.path().join("missing").to_str().unwrap()])), 2);
    assert_eq!(code(&tetrad(&["certify"])), 2);
}

#[test]
fn search_failure_exits_one() {
    let o = tetrad(&["build", "--family", "no_prime", "--p", "11", "--n", "5"]);
    assert_eq!(code(&o), 1);
    assert!(String::from_utf8_lossy(&o.stderr).contains("search failed"));
}

#[test]
fn identical_flags_give_identical_bytes() {
    let dir = tempfile::tempdir().unwrap();
    let run = |name: &str| {
        let out = dir.path().join(name);
        tetrad(&["certify", "--family", "three", "--p", "7", "--q", "3", "--out", out.to_str().unwrap()]);
        std::fs::read(out).unwrap()
    };
    assert_eq!(run("a.json"), run("b.json"));
    let timed = dir.path().join("t.json");
    tetrad(&["certify", "--family", "three", "--p", "7", "--q", "3", "--timings", "--out", timed.to_str().unwrap()]);
    let t = read_json(&timed);
    assert!(t["non_canonical"]["timings"].is_object());
}

#[test]
fn certify_round_trips_through_a_document() {
    let dir = tempfile::tempdir().unwrap();
    for (family, extra) in [("two", vec!["--p", "7", "--q", "3", "--r", "2"]), ("five", vec!["--p", "7", "--q", "3", "--n", "4"])] {
        let g = dir.path().join(format!("{family}.json"));
        let mut args = vec!["build", "--family", family];
        args.extend(&extra);
        args.extend(["--out", g.to_str().unwrap()]);
        assert_eq!(code(&tetrad(&args)), 0);
        let from_doc = tetrad(&["certify", "--in", g.to_str().unwrap(), "--json"]);
        let mut direct = vec!["certify", "--family", family];
        direct.extend(&extra);
        direct.push("--json");
        let from_flags = tetrad(&direct);
        assert_eq!(code(&from_doc), 0);
        assert_eq!(from_doc.stdout, from_flags.stdout);
    }
}

#[test]
fn selftest_green_and_hook() {
    let o = tetrad(&["selftest"]);
    assert_eq!(code(&o), 0, "{}", String::from_utf8_lossy(&o.stdout));
    let o = tetrad(&["selftest", "--break-composition"]);
    assert_eq!(code(&o), 1);
    let o = tetrad(&["selftest", "--filter", "oracle"]);
    assert_eq!(code(&o), 0);
    let table = String::from_utf8_lossy(&o.stdout).to_string();
    assert_eq!(table.lines().count(), 2);
    assert!(table.contains("oracle"));
}
