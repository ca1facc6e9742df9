use std::path::Path;
use std::process::{Command, Output};

use serde_json::{json, Value};

fn lab(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_bicrossed-lab"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn report(out: &Output) -> Value {
    serde_json::from_slice(&out.stdout).expect("stdout is JSON")
}

fn write_scenario(dir: &Path, name: &str, body: &Value) -> String {
    let path = dir.join(name);
    std::fs::write(&path, body.to_string()).unwrap();
    path.to_str().unwrap().to_string()
}

#[test]
fn s3_scenario_reports_regular_and_is_reproducible() {
    let dir = tempfile::tempdir().unwrap();
    let scenario = write_scenario(
        dir.path(),
        "s3.json",
        &json!({
            "schema": "bicrossed-lab/1",
            "seed": 3,
            "items": [{ "subject": { "pair": "S3" }, "checks": ["pentagon", "regularity", "dims"] }]
        }),
    );
    let first = dir.path().join("a.json");
    let second = dir.path().join("b.json");
    for out in [&first, &second] {
        let o = lab(&["run", &scenario, "--no-timestamp", "--out", out.to_str().unwrap()]);
        assert_eq!(o.status.code(), Some(0), "{}", String::from_utf8_lossy(&o.stderr));
    }
    let a = std::fs::read(&first).unwrap();
    assert_eq!(a, std::fs::read(&second).unwrap());

    let r: Value = serde_json::from_slice(&a).unwrap();
    assert_eq!(r["schema"], "bicrossed-lab/1");
    assert_eq!(r["status"], "pass");
    assert!(r.get("timestamp").is_none());
    let regularity = &r["items"][0]["checks"][1];
    assert_eq!(regularity["data"]["verdict"], "regular");
    assert_eq!(regularity["data"]["dims"]["S"], 6);
    assert_eq!(regularity["data"]["dims"]["Shat"], 6);
    assert_eq!(regularity["data"]["dims"]["C"], 36);
    assert_eq!(regularity["data"]["dims"]["SShat"], 36);
}

#[test]
fn adelic_scenario_is_not_open_with_density_in_range() {
    let dir = tempfile::tempdir().unwrap();
    let scenario = write_scenario(
        dir.path(),
        "f2.json",
        &json!({
            "schema": "bicrossed-lab/1",
            "seed": 0,
            "items": [{
                "subject": { "ring": "adeles-f2" },
                "checks": ["openness", "density"],
                "truncation": 25,
                "samples": 100000,
                "seed": 7
            }]
        }),
    );
    let o = lab(&["run", &scenario]);
    assert_eq!(o.status.code(), Some(0), "{}", String::from_utf8_lossy(&o.stderr));
    let r = report(&o);
    assert!(r["timestamp"].is_u64());
    let checks = &r["items"][0]["checks"];
    assert_eq!(checks[0]["data"]["openness"], "not_open");
    let density = &checks[1]["data"];
    assert!(density["z_score"].as_f64().unwrap() <= 3.0);
    assert_eq!(density["primes"].as_array().unwrap().len(), 25);
}

#[test]
fn empty_scenario_passes() {
    let dir = tempfile::tempdir().unwrap();
    let scenario = write_scenario(dir.path(), "e.json", &json!({ "schema": "bicrossed-lab/1", "seed": 1, "items": [] }));
    let o = lab(&["run", &scenario, "--no-timestamp"]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(report(&o), json!({ "schema": "bicrossed-lab/1", "seed": 1, "status": "pass", "items": [] }));
}

#[test]
fn bad_scenarios_exit_with_usage_status() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("bad.json");
    std::fs::write(&path, "{\n  \"schema\": \"bicrossed-lab/1\",\n  \"seed\": x\n}").unwrap();
    let o = lab(&["run", path.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(2));
    let err = String::from_utf8_lossy(&o.stderr);
    assert!(err.contains("line 3, column 11"), "{err}");

    let unknown = write_scenario(
        dir.path(),
        "u.json",
        &json!({ "schema": "bicrossed-lab/1", "seed": 1, "items": [{ "subject": { "pair": "S3" }, "checks": ["bogus"] }] }),
    );
    let o = lab(&["run", &unknown]);
    assert_eq!(o.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&o.stderr).contains("unknown check \"bogus\""));

    assert_eq!(lab(&["run", "/nonexistent/scenario.json"]).status.code(), Some(2));
    assert_eq!(lab(&["frobnicate"]).status.code(), Some(2));
}

#[test]
fn failing_checks_exit_with_one() {
    let dir = tempfile::tempdir().unwrap();
    let scenario = write_scenario(
        dir.path(),
        "f.json",
        &json!({
            "schema": "bicrossed-lab/1",
            "seed": 5,
            "items": [
                { "subject": { "map": "broken" }, "checks": ["pentagon"], "samples": 20 },
                { "subject": { "map": "additive" }, "checks": ["pentagon"], "samples": 20 }
            ]
        }),
    );
    let o = lab(&["run", &scenario, "--no-timestamp"]);
    assert_eq!(o.status.code(), Some(1));
    let r = report(&o);
    assert_eq!(r["status"], "fail");
    assert_eq!(r["items"][0]["checks"][0]["status"], "fail");
    assert_eq!(r["items"][1]["checks"][0]["status"], "pass");
}

#[test]
fn axb_factor_over_q5() {
    let o = lab(&["axb", "factor", r#"{"kind":"PAdicField","p":5}"#, "2", "3"]);
    assert_eq!(o.status.code(), Some(0));
    let d = &report(&o)["data"];
    assert_eq!(d["g"]["a"]["value"], "4");
    assert_eq!(d["g"]["x"]["value"], "3");
    assert_eq!(d["s"]["a"]["value"], "1/2");
    assert_eq!(d["s"]["x"]["value"], "0");

    // x = -1 lies outside G1 G2.
    let o = lab(&["axb", "factor", "Q_5", "2", "-1"]);
    assert_eq!(o.status.code(), Some(1));
    assert_eq!(report(&o)["data"]["factorizable"], false);
}

#[test]
fn adele_witness_has_a_valuation_one_component() {
    let o = lab(&["adele", "witness", r#"{"kind":"AllPrimesResidueDegree2"}"#, "--constraint", "2,3"]);
    assert_eq!(o.status.code(), Some(0), "{}", String::from_utf8_lossy(&o.stderr));
    let d = &report(&o)["data"];
    assert_eq!(d["verified"], true);
    assert_eq!(d["valuation_one_primes"], json!([5]));
    assert!(d["witness"]["exceptions"]["5"].as_str().unwrap().starts_with("5^1 "));
}

#[test]
fn pentagon_verify_axb_real() {
    let o = lab(&["pentagon", "verify", "axb_real", "--samples", "1000", "--seed", "1"]);
    assert_eq!(o.status.code(), Some(0));
    let d = &report(&o)["data"];
    assert_eq!(d["pentagon"]["passed"], 1000);
    assert_eq!(d["round_trip"]["left"], true);
    assert_eq!(d["round_trip"]["right"], true);
}

#[test]
fn padic_eval_and_bq_check() {
    let o = lab(&["padic", "eval", "1/2", "--prime", "5", "--precision", "3"]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(report(&o)["data"]["unit_digits"], json!([3, 2, 2]));
    let o = lab(&["padic", "eval", "1 +", "--prime", "5"]);
    assert_eq!(o.status.code(), Some(2));

    let o = lab(&["ring", "bq-check", "Z/36", "6", "--samples", "200"]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(report(&o)["data"]["pi_q_multiplicative"], true);
}

#[test]
fn bicrossed_report_by_name_and_by_table() {
    let o = lab(&["bicrossed", "report", "S3"]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(report(&o)["data"]["dims"]["C"], 36);

    // C2 as the pair (C2, trivial), with the group given by its table.
    let pair = json!({
        "group": { "order": 2, "table": [[0, 1], [1, 0]] },
        "g1": [0, 1],
        "g2": [0]
    });
    let o = lab(&["bicrossed", "report", &pair.to_string(), "--dump-operator"]);
    assert_eq!(o.status.code(), Some(0), "{}", String::from_utf8_lossy(&o.stderr));
    let d = &report(&o)["data"];
    assert_eq!(d["dims"]["C"], 4);
    assert_eq!(d["operator"].as_array().unwrap().len(), 4);
}
