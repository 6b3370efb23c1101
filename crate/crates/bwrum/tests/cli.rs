use std::fs;
use std::path::PathBuf;
use std::process::Command;

use bwrum::files::{polynomials_json, read_system};
use bwrum_core::measure::{system_from_distribution, verify_reconstruction};
use bwrum_core::poly::all_polynomials;
use bwrum_core::system::Limits;
use serde_json::Value;

fn fixture(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("tests/fixtures").join(name)
}

fn run(args: &[&str]) -> (i32, String, String) {
    let mut out = Vec::new();
    let mut err = Vec::new();
    let argv = std::iter::once("bwrum").chain(args.iter().copied());
    let code = bwrum::run(argv, &mut out, &mut err);
    (code, String::from_utf8(out).unwrap(), String::from_utf8(err).unwrap())
}

fn run_json(args: &[&str]) -> (i32, Value) {
    let (code, out, err) = run(args);
    let v = serde_json::from_str(&out).unwrap_or_else(|e| panic!("{e}: {out}{err}"));
    (code, v)
}

fn path(name: &str) -> String {
    fixture(name).to_string_lossy().into_owned()
}

#[test]
fn uniform_is_representable() {
    let (code, v) = run_json(&["check", &path("uniform4.json"), "--lp"]);
    assert_eq!(code, 0);
    assert_eq!(v["schema"], "bwrum-report/1");
    assert_eq!(v["verdict"], "Representable");
    assert_eq!(v["lp_oracle"]["agrees"], true);
}

#[test]
fn negk3_exits_two_with_its_certificate() {
    let (code, v) = run_json(&["check", &path("negk3.json")]);
    assert_eq!(code, 2);
    let certs = v["certificates"].as_array().unwrap();
    assert_eq!(certs.len(), 1);
    assert_eq!(certs[0]["best"], "1");
    assert_eq!(certs[0]["worst"], "2");
    assert_eq!(certs[0]["context"], serde_json::json!(["3"]));
    assert_eq!(certs[0]["K"], "-1/6");
}

#[test]
fn fixtures_match_goldens() {
    for name in ["example1", "example2", "example3", "table2", "negk3"] {
        let (code, out, _) = run(&["fixture", name]);
        assert_eq!(code, 0);
        assert_eq!(out, fs::read_to_string(fixture(&format!("{name}.json"))).unwrap(), "{name}");
    }
    let (_, out, _) = run(&["fixture", "uniform_n", "--n", "4"]);
    assert_eq!(out, fs::read_to_string(fixture("uniform4.json")).unwrap());
    let (code, _, err) = run(&["fixture", "example9"]);
    assert_eq!(code, 64);
    assert!(err.contains("unknown fixture"));
}

fn rows(v: &Value) -> Vec<String> {
    v.as_array()
        .unwrap()
        .iter()
        .map(|r| r.as_array().unwrap().iter().map(|x| x.as_str().unwrap()).collect())
        .collect()
}

#[test]
fn example_one_contains_the_listed_rows_and_mirrors() {
    let v: Value = serde_json::from_str(&fs::read_to_string(fixture("example1.json")).unwrap()).unwrap();
    let all = rows(&v["rankings"]);
    assert_eq!(all.len(), 20);
    for row in ["uvprq", "upvrq", "uprvq", "uprqv", "puvrq", "purvq", "purqv", "pruvq", "pruqv", "prquv"] {
        let mirror: String = row.chars().map(|c| match c { 'u' => 'v', 'v' => 'u', c => c }).collect();
        assert!(all.contains(&row.to_string()) && all.contains(&mirror), "{row}");
    }
}

#[test]
fn table_two_components() {
    let v: Value = serde_json::from_str(&fs::read_to_string(fixture("table2.json")).unwrap()).unwrap();
    let expected: [(&[&str], &[&str]); 4] = [
        (&[], &["upqrv", "uprqv", "uqprv", "uqrpv", "urpqv", "urqpv"]),
        (&["p"], &["puqrv", "purqv", "uqrvp", "urqvp"]),
        (&["q"], &["quprv", "qurpv", "uprvq", "urpvq"]),
        (&["p", "q"], &["pqurv", "qpurv", "urvpq", "urvqp", "purvq", "qurvp"]),
    ];
    let mut total = 0;
    for c in v["components"].as_array().unwrap() {
        let moved: Vec<&str> = c["moved"].as_array().unwrap().iter().map(|x| x.as_str().unwrap()).collect();
        let (_, allowed) = expected.iter().find(|(m, _)| *m == moved.as_slice()).unwrap();
        for r in rows(&c["rankings"]) {
            assert!(allowed.contains(&r.as_str()), "{r} under {moved:?}");
            total += 1;
        }
    }
    assert_eq!(total, 20);
}

#[test]
fn demo_report_is_pinned() {
    let (code, out, _) = run(&["demo", "--n", "4", "--seed", "7"]);
    assert_eq!(code, 0);
    assert_eq!(out, fs::read_to_string(fixture("demo_n4_seed7.json")).unwrap());
    let v: Value = serde_json::from_str(&out).unwrap();
    assert_eq!(v["round_trip"], true);
    assert_eq!(v["verified"], true);
    assert_eq!(v["methods"]["lp"]["verification"]["exact"], true);
}

#[test]
fn poly_is_the_library_table() {
    let text = fs::read_to_string(fixture("negk3.json")).unwrap();
    let loaded = read_system(&text, Limits::default()).unwrap();
    let expected = polynomials_json(&all_polynomials(&loaded.system), &loaded.labels);
    let (code, v) = run_json(&["poly", &path("negk3.json")]);
    assert_eq!(code, 0);
    assert_eq!(v, expected);
    let (_, csv, _) = run(&["poly", &path("negk3.json"), "--csv"]);
    assert_eq!(csv.lines().count(), 1 + 12);
}

#[test]
fn labels_flag_renames_output() {
    let (code, v) = run_json(&["check", &path("uniform4.json"), "--witness", "--labels", "w,x,y,z"]);
    // the recursion yields no verified witness past two alternatives
    assert_eq!(code, 1);
    assert!(v["witness_error"].as_str().unwrap().contains("no recursion reading"));
    assert_eq!(v["verdict"], "Representable");
    let (code, _, err) = run(&["check", &path("uniform4.json"), "--labels", "a,b"]);
    assert_eq!(code, 64);
    assert!(err.contains("--labels"));
}

#[test]
fn construct_uses_the_lp_when_recursion_fails() {
    let (code, v) = run_json(&["construct", &path("uniform4.json")]);
    assert_eq!(code, 0);
    assert_eq!(v["verified"], true);
    assert_eq!(v["methods_agree"], false);
    assert_eq!(v["methods"]["recursion"]["status"], "failed");
    assert_eq!(v["methods"]["recursion"]["attempts"].as_array().unwrap().len(), 16);
    let (code, v) = run_json(&["construct", &path("uniform4.json"), "--method", "recursion"]);
    assert_eq!(code, 1);
    assert_eq!(v["distribution"], Value::Null);
    let (code, v) = run_json(&["construct", &path("negk3.json")]);
    assert_eq!(code, 2);
    assert_eq!(v["verified"], false);
}

#[test]
fn forward_simulate_ingest_pipeline() {
    let dir = tempfile::tempdir().unwrap();
    let sys = dir.path().join("sys.json");
    let counts = dir.path().join("counts.json");
    let (code, _, _) = run(&["forward", &path("dist3.json"), "--out", sys.to_str().unwrap()]);
    assert_eq!(code, 0);
    let loaded = read_system(&fs::read_to_string(&sys).unwrap(), Limits::default()).unwrap();
    assert_eq!(loaded.labels.names().unwrap(), ["a", "b", "c"]);
    let dist = bwrum::files::read_distribution(&fs::read_to_string(fixture("dist3.json")).unwrap()).unwrap();
    assert_eq!(loaded.system, system_from_distribution(&dist.dist));
    assert!(verify_reconstruction(&loaded.system, &dist.dist).is_exact());

    let args = ["simulate", &path("dist3.json"), "--design", &path("design3.json"), "--seed", "3"];
    let (code, first, _) = run(&args);
    assert_eq!(code, 0);
    let (_, second, _) = run(&args);
    assert_eq!(first, second);
    fs::write(&counts, &first).unwrap();
    let v: Value = serde_json::from_str(&first).unwrap();
    let total: u64 = v["subsets"][0]["counts"].as_array().unwrap().iter().map(|c| c["count"].as_u64().unwrap()).sum();
    assert_eq!(total, 200);

    // only two of the four offered sets are in the design
    let (code, v) = run_json(&["ingest", counts.to_str().unwrap(), "--smoothing", "1"]);
    assert_eq!(code, 0);
    assert_eq!(v["unobserved"].as_array().unwrap().len(), 2);
    let (code, _, _) = run(&["ingest", counts.to_str().unwrap(), "--smoothing=-1"]);
    assert_eq!(code, 64);
    let (code, _, _) = run(&["ingest", &path("uniform4.json")]);
    assert_eq!(code, 65);
}

#[test]
fn validate_directory_in_name_order() {
    let dir = tempfile::tempdir().unwrap();
    fs::copy(fixture("uniform4.json"), dir.path().join("b.json")).unwrap();
    let broken = fs::read_to_string(fixture("negk3.json")).unwrap().replacen("\"1/6\"", "\"1/2\"", 1);
    fs::write(dir.path().join("a.json"), broken).unwrap();
    fs::write(dir.path().join("c.json"), "{").unwrap();
    fs::write(dir.path().join("notes.txt"), "ignored").unwrap();
    let (code, v) = run_json(&["validate", dir.path().to_str().unwrap()]);
    assert_eq!(code, 65);
    let files = v["files"].as_array().unwrap();
    let names: Vec<&str> = files.iter().map(|f| f["file"].as_str().unwrap()).collect();
    assert_eq!(names, ["a.json", "b.json", "c.json"]);
    assert_eq!(files[0]["exit"], 1);
    assert_eq!(files[0]["validation"]["valid"], false);
    assert_eq!(files[1]["exit"], 0);
    assert_eq!(files[2]["exit"], 65);
    let (code, _) = run_json(&["check", dir.path().to_str().unwrap()]);
    assert_eq!(code, 65);
}

#[test]
fn pattern_counts_and_labels() {
    let (_, out, _) = run(&["pattern", "--prefix", "p", "--ground", "p,q,r", "--suffix", "q", "--n", "5", "--count"]);
    assert_eq!(out.trim(), "20");
    let (_, v) = run_json(&["pattern", "--prefix", "0", "--ground", "0,1", "--suffix", "1", "--n", "3"]);
    assert_eq!(v, serde_json::json!([[0, 1, 2], [0, 2, 1], [2, 0, 1]]));
    let (code, _, _) = run(&["pattern", "--prefix", "a", "--ground", "a,b,c,d", "--n", "3"]);
    assert_eq!(code, 64);
}

#[test]
fn binary_exit_codes() {
    let bin = env!("CARGO_BIN_EXE_bwrum");
    let status = |args: &[&str]| Command::new(bin).args(args).output().unwrap().status.code().unwrap();
    assert_eq!(status(&["check", &path("uniform4.json")]), 0);
    assert_eq!(status(&["check", &path("negk3.json")]), 2);
    assert_eq!(status(&["check"]), 64);
    assert_eq!(status(&["check", "/no/such/file.json"]), 65);
    assert_eq!(status(&["--help"]), 0);
}

#[test]
fn timing_is_opt_in() {
    let (_, v) = run_json(&["check", &path("uniform4.json")]);
    assert!(v.get("timing_ms").is_none());
    let (_, v) = run_json(&["check", &path("uniform4.json"), "--timing"]);
    assert!(v["timing_ms"].is_number());
}
