use std::process::{Command, Output};

use serde_json::Value;

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_hlmoments")).args(args).output().expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

fn json(args: &[&str]) -> (Value, i32) {
    let mut full = vec!["--format", "json"];
    full.extend_from_slice(args);
    let o = run(&full);
    let v = serde_json::from_slice(&o.stdout).unwrap_or_else(|e| panic!("{e}: {}", stdout(&o)));
    (v, o.status.code().unwrap())
}

#[test]
fn coeff_examples() {
    let (v, code) = json(&["coeff", "--lambda", "1,1", "--mu", "1"]);
    assert_eq!(code, 0);
    assert_eq!(v["result"]["coeffs"], serde_json::json!([1, 1]));
    let (v, _) = json(&["coeff", "--lambda", "1,1", "--mu", "1", "--eval-at", "2"]);
    assert_eq!(v["result"]["value"], "3");
    let (v, _) = json(&["coeff", "--lambda", "1", "--mu", "2"]);
    assert_eq!(v["result"]["coeffs"], serde_json::json!([0]));
}

#[test]
fn every_json_output_carries_metadata() {
    let (v, _) = json(&["--seed", "7", "--max-group-order", "512", "moments", "--lambda", "1", "--p", "3", "--u", "0"]);
    let meta = &v["meta"];
    assert_eq!(meta["seed"], 7);
    assert_eq!(meta["version"], env!("CARGO_PKG_VERSION"));
    assert_eq!(meta["bounds"]["max_group_order"], 512);
    assert_eq!(meta["command"][0], "--format");
    assert!(meta["command"].as_array().unwrap().iter().any(|a| a == "moments"));
}

#[test]
fn moments_examples() {
    let (v, _) = json(&["moments", "--lambda", "1", "--p", "3", "--u", "0"]);
    assert_eq!(v["result"]["value"], "2");
    let (v, _) = json(&["moments", "--lambda", "1", "--p", "2", "--u", "0", "--type-s"]);
    assert_eq!(v["result"]["value"], "3");
    let (v, _) = json(&["moments", "--lambda", "", "--p", "5", "--u", "7"]);
    assert_eq!(v["result"]["value"], "1");
    let (v, _) = json(&["moments", "--lambda", "1", "--p", "3", "--u", "1", "--conjecture", "class-real"]);
    assert_eq!(v["result"]["value"], "4/3");
    assert!(v["result"]["context"].as_str().unwrap().starts_with("conjectural"));
    let (v, code) = json(&["moments", "--lambda", "1", "--p", "3", "--u", "1/2", "--float"]);
    assert_eq!(code, 0);
    assert!(v["result"]["value"].is_null());
    assert!((v["result"]["value_float"].as_f64().unwrap() - (1.0 + 3f64.powf(-0.5))).abs() < 1e-12);
}

#[test]
fn usage_errors_exit_2() {
    assert_eq!(run(&["moments", "--lambda", "1", "--p", "4", "--u", "0"]).status.code(), Some(2));
    assert_eq!(run(&["moments", "--lambda", "1", "--p", "3", "--u", "1/2"]).status.code(), Some(2));
    assert_eq!(run(&["coeff", "--lambda", "1,2", "--mu", "1"]).status.code(), Some(2));
    assert_eq!(run(&["verify", "--id", "NOPE"]).status.code(), Some(2));
    assert_eq!(run(&["verify"]).status.code(), Some(2));
    let (v, code) = json(&["moments", "--lambda", "1", "--p", "9"]);
    assert_eq!(code, 2);
    assert_eq!(v["error"]["kind"], "usage");
}

#[test]
fn oracle_examples() {
    for (args, expect) in [
        (vec!["oracle", "--check", "subgroups", "--lambda", "1,1", "--mu", "1", "--p", "2"], "3 vs 3 PASS"),
        (vec!["oracle", "--check", "injections", "--lambda", "1", "--mu", "2", "--p", "2"], "1 vs 1 PASS"),
        (vec!["oracle", "--check", "aut", "--lambda", "1,1", "--p", "2"], "6 vs 6 PASS"),
    ] {
        let o = run(&args);
        assert_eq!(o.status.code(), Some(0));
        assert_eq!(stdout(&o).trim(), expect);
    }
}

#[test]
fn resource_bounds_exit_3() {
    let o = run(&["oracle", "--check", "aut", "--lambda", "3,3,3", "--p", "3", "--max-group-order", "100"]);
    assert_eq!(o.status.code(), Some(3));
    assert!(String::from_utf8_lossy(&o.stderr).contains("max_group_order"));
    let o = Command::new(env!("CARGO_BIN_EXE_hlmoments"))
        .args(["oracle", "--check", "subgroups", "--lambda", "2,2", "--mu", "1", "--p", "3"])
        .env("HLMOMENTS_MAX_GROUP_ORDER", "10")
        .output()
        .unwrap();
    assert_eq!(o.status.code(), Some(3));
    assert_eq!(run(&["verify", "--id", "EULER", "--zmax", "20"]).status.code(), Some(3));
    assert_eq!(run(&["verify", "--id", "LASCOUX", "--alphabet", "5", "--degree", "2"]).status.code(), Some(3));
}

#[test]
fn verify_examples() {
    let (v, code) = json(&["verify", "--id", "UMOY_ABELIAN", "--ell", "2", "--lambda", "2,1", "--zmax", "8"]);
    assert_eq!(code, 0);
    assert_eq!(v["result"]["summary"]["passed"], 1);
    assert_eq!(run(&["verify", "--id", "QBIN", "--n", "6"]).status.code(), Some(0));
    let (v, code) = json(&["verify", "--id", "EULER"]);
    assert_eq!(code, 0);
    assert_eq!(v["result"]["summary"]["total"], 3);
    let (v, code) = json(&["verify", "--id", "MIRROR_SWAP", "--lambda", "2,1"]);
    assert_eq!(code, 0);
    assert_eq!(v["result"]["reports"][0]["status"], "PASS");
}

#[test]
fn verify_all_passes() {
    let (v, code) = json(&["verify", "--all"]);
    assert_eq!(code, 0, "{v}");
    let reports = v["result"]["reports"].as_array().unwrap();
    assert!(reports.len() >= 39);
    let ids: Vec<&str> = reports.iter().map(|r| r["case"]["id"].as_str().unwrap()).collect();
    let mut sorted = ids.clone();
    sorted.sort_by_key(|id| id.parse::<hlmoments::IdentityId>().unwrap());
    assert_eq!(ids, sorted);
}

#[test]
fn failing_manifest_exits_1_with_localized_mismatch() {
    let path = std::env::temp_dir().join(format!("hlmoments-mutated-{}.toml", std::process::id()));
    std::fs::write(
        &path,
        "version = 1\nseed = 3\n\n[[case]]\nid = \"QBIN\"\nstrategy = \"SYMBOLIC_EXACT\"\nn = 3\nmutate = true\n\n\
         [mutation_guard]\nid = \"QBIN\"\nstrategy = \"SYMBOLIC_EXACT\"\nn = 2\n",
    )
    .unwrap();
    let (v, code) = json(&["verify", "--all", "--manifest", path.to_str().unwrap()]);
    std::fs::remove_file(&path).ok();
    assert_eq!(code, 1);
    let m = &v["result"]["reports"][0]["mismatch"];
    assert_eq!(m["variables"], serde_json::json!(["z"]));
    assert_ne!(m["lhs"], m["rhs"]);
}

#[test]
fn table_examples() {
    let (v, _) = json(&["table", "--conjecture", "selmer", "--ell", "1", "--m", "3", "--p", "2"]);
    assert_eq!(v["result"]["rows"][0]["value"], "135");
    let (v, _) = json(&["table", "--conjecture", "sha", "--u", "1", "--lambda", "1", "--p", "3"]);
    assert_eq!(v["result"]["rows"][0]["value"], "4/3");
    let (v, _) = json(&["table", "--conjecture", "class-imaginary", "--lambda", "1", "--p", "2,3"]);
    let rows = v["result"]["rows"].as_array().unwrap();
    assert_eq!(rows[1]["value"], "2");
    assert_eq!(rows[0]["outside_stated_range"], true);
    assert_eq!(rows[1]["outside_stated_range"], false);
}

#[test]
fn csv_has_header_and_rows() {
    let o = run(&["--format", "csv", "table", "--conjecture", "class-real", "--p", "3,5"]);
    let out = stdout(&o);
    let mut rdr = csv::ReaderBuilder::new().comment(Some(b'#')).from_reader(out.as_bytes());
    assert_eq!(rdr.headers().unwrap().get(3), Some("value"));
    let rows: Vec<_> = rdr.records().map(Result::unwrap).collect();
    assert_eq!(rows.len(), 2);
    assert_eq!(&rows[0][3], "4/3");
}

#[test]
fn help_documents_defaults() {
    let out = stdout(&run(&["--help"]));
    assert!(out.contains("4096"));
    assert!(out.contains("Exit codes"));
}

#[test]
fn incomplete_case_parameters_exit_2() {
    let o = run(&["verify", "--id", "CSQ", "--n", "2"]);
    assert_eq!(o.status.code(), Some(2));
    assert!(stdout(&o).contains("missing case parameter `k`"));
}

#[test]
fn class_group_moments_at_two_are_flagged() {
    let (v, code) = json(&["moments", "--lambda", "1", "--p", "2", "--u", "0", "--conjecture", "class-imaginary"]);
    assert_eq!(code, 0);
    assert_eq!(v["result"]["outside_stated_range"], true);
    let (v, _) = json(&["moments", "--lambda", "1", "--p", "3", "--u", "0", "--conjecture", "class-imaginary"]);
    assert_eq!(v["result"]["outside_stated_range"], false);
}
