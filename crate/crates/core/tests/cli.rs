use std::process::{Command, Output};

use frac_ostrowski::verify::Report;

fn tool(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_frac-ostrowski"))
        .args(args)
        .env_remove("FRAC_OSTROWSKI_OUT_DIR")
        .output()
        .expect("binary runs")
}

fn stdout(out: &Output) -> String {
    String::from_utf8(out.stdout.clone()).unwrap()
}

#[test]
fn identity_residual_is_small() {
    let out = tool(&["identity", "--f", "square:a=0,b=1", "--alpha", "0.5,1,2", "--grid", "21", "--format", "json"]);
    assert_eq!(out.status.code(), Some(0));
    let report = Report::from_json(&stdout(&out)).unwrap();
    let max = report.results[0]["max_residual"].as_f64().unwrap();
    assert!(max <= 1e-8, "{max}");
}

#[test]
fn sweep_passes_with_non_negative_slack() {
    let out = tool(&["sweep", "--f", "square:a=0,b=1", "--h", "identity", "--theorem", "1", "--variant", "first", "--alpha", "1", "--format", "json"]);
    assert_eq!(out.status.code(), Some(0));
    let report = Report::from_json(&stdout(&out)).unwrap();
    assert!(report.summary.pass);
    assert!(report.summary.min_slack.unwrap() >= 0.0);
}

#[test]
fn godunova_sweep_is_divergent() {
    let out = tool(&["sweep", "--f", "square:a=0,b=1", "--h", "godunova", "--theorem", "1", "--variant", "first", "--alpha", "1"]);
    assert_eq!(out.status.code(), Some(3));
    assert!(stdout(&out).contains("divergent"));
}

#[test]
fn uncertified_sweep_exits_three() {
    let out = tool(&["sweep", "--f", "square", "--h", "one", "--theorem", "2", "--variant", "second", "--p", "2"]);
    assert_eq!(out.status.code(), Some(3));
    let text = stdout(&out);
    let table_end = text.find("status:").unwrap();
    assert!(text.find("superadditive").unwrap() < table_end);
}

#[test]
fn usage_errors_go_to_stderr() {
    for args in [&["bogus"][..], &["sweep", "--f", "square"], &["sweep", "--f", "square", "--h", "identity", "--nope"]] {
        let out = tool(args);
        assert_eq!(out.status.code(), Some(2), "{args:?}");
        assert!(out.stdout.is_empty());
        assert!(String::from_utf8_lossy(&out.stderr).contains("Usage"), "{args:?}");
    }
    let out = tool(&["sweep", "--f", "square:a=-1", "--h", "identity"]);
    assert_eq!(out.status.code(), Some(2));
    assert!(!out.stderr.is_empty());
}

#[test]
fn csv_schema_and_precision() {
    let out = tool(&["sweep", "--f", "exp", "--h", "power:s=0.5", "--theorem", "3", "--variant", "second", "--alpha", "0.5,2", "--q", "2", "--grid", "11", "--format", "csv"]);
    assert_eq!(out.status.code(), Some(0));
    let mut reader = csv::Reader::from_reader(out.stdout.as_slice());
    let header: Vec<String> = reader.headers().unwrap().iter().map(String::from).collect();
    assert_eq!(header, ["x", "alpha", "s", "p", "q", "theorem", "variant", "lhs", "bound", "slack", "status"]);
    let rows: Vec<csv::StringRecord> = reader.records().map(Result::unwrap).collect();
    assert_eq!(rows.len(), 22);
    let first = &rows[0];
    assert_eq!(&first[5], "3");
    assert_eq!(&first[6], "second");
    assert_eq!(&first[10], "pass");
    assert!(first[3].is_empty());
    // 17 significant digits: one before the point, sixteen after
    let mantissa = first[7].split('e').next().unwrap().trim_start_matches('-');
    assert_eq!(mantissa.replace('.', "").len(), 17, "{}", &first[7]);
    let xs: Vec<f64> = rows.iter().map(|r| r[0].parse().unwrap()).collect();
    assert!(xs.windows(2).all(|w| w[0] <= w[1]));
}

#[test]
fn json_report_round_trips() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("sweep.json");
    let out = tool(&["sweep", "--f", "cube", "--h", "identity", "--theorem", "2", "--p", "1.5,4", "--grid", "21", "--format", "json", "--output", path.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0));
    let report = Report::from_json(&std::fs::read_to_string(&path).unwrap()).unwrap();
    assert!(report.summary.pass);
    assert_eq!(report.config["subcommand"], "sweep");
    let status = tool(&["status", path.to_str().unwrap()]);
    assert_eq!(status.status.code(), Some(0));

    // a report whose results fail is re-read as failing
    let mut failing = report.clone();
    failing.results[0]["status"] = "fail".into();
    failing.results[0]["violations"] = 3.into();
    failing.summary.pass = false;
    failing.summary.violations = 3;
    let bad = dir.path().join("bad.json");
    std::fs::write(&bad, failing.to_json()).unwrap();
    assert_eq!(tool(&["status", bad.to_str().unwrap()]).status.code(), Some(1));

    // a summary that contradicts its results is rejected
    failing.summary.pass = true;
    std::fs::write(&bad, failing.to_json()).unwrap();
    assert_eq!(tool(&["status", bad.to_str().unwrap()]).status.code(), Some(2));
}

#[test]
fn output_dir_env_resolves_relative_paths() {
    let dir = tempfile::tempdir().unwrap();
    let out = Command::new(env!("CARGO_BIN_EXE_frac-ostrowski"))
        .args(["compare-classical", "--h", "identity", "--p", "2", "--format", "json", "--output", "nested/cmp.json"])
        .env("FRAC_OSTROWSKI_OUT_DIR", dir.path())
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(0));
    let report = Report::from_json(&std::fs::read_to_string(dir.path().join("nested/cmp.json")).unwrap()).unwrap();
    assert_eq!(report.results[0]["thm1_better"], false);
    assert_eq!(report.results[0]["thm2_better"], false);
}

#[test]
fn check_props_reports_failed_requirement() {
    let out = tool(&["check-props", "--h", "power:s=1", "--f", "square", "--grid", "21"]);
    assert_eq!(out.status.code(), Some(0));
    // |f′| = √t is concave, so not convex
    let out = tool(&["check-props", "--h", "identity", "--f", "power_primitive:r=0.5", "--grid", "21"]);
    assert_eq!(out.status.code(), Some(1));
    let out = tool(&["check-props", "--h", "one", "--grid", "21", "--format", "json"]);
    assert_eq!(out.status.code(), Some(0));
    let report = Report::from_json(&stdout(&out)).unwrap();
    let superadditive = report.results.iter().find(|r| r["property"] == "superadditive").unwrap();
    assert_eq!(superadditive["holds"], false);
}

#[test]
fn corollary_and_tightness_run() {
    let out = tool(&["corollary", "--theorem", "3", "--variant", "first", "--q", "2"]);
    assert_eq!(out.status.code(), Some(0), "{}", stdout(&out));
    let out = tool(&["tightness", "--f", "square", "--h", "identity", "--alpha", "1", "--format", "json"]);
    assert_eq!(out.status.code(), Some(0));
    let report = Report::from_json(&stdout(&out)).unwrap();
    assert!(report.results[0]["min_slack"].as_f64().unwrap() >= 0.0);
}

#[test]
fn suite_report_is_deterministic_and_round_trips() {
    let dir = tempfile::tempdir().unwrap();
    let a = dir.path().join("a.json");
    let b = dir.path().join("b.json");
    for path in [&a, &b] {
        let out = tool(&["suite", "--alpha", "0.5,2", "--grid", "11", "--format", "json", "--output", path.to_str().unwrap()]);
        assert_eq!(out.status.code(), Some(0));
    }
    assert_eq!(std::fs::read_to_string(&a).unwrap(), std::fs::read_to_string(&b).unwrap());
    assert_eq!(tool(&["status", a.to_str().unwrap()]).status.code(), Some(0));
    assert_eq!(tool(&["suite", "--format", "csv"]).status.code(), Some(2));
}
