use std::process::{Command, Output};

use sheetcalc_cli::{Status, VerificationReport, THEOREMS};

fn sheetcalc(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_sheetcalc"))
        .args(args)
        .env_remove("SHEETCALC_MAX_RANK")
        .output()
        .expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

#[test]
fn info_reports_dimensions() {
    let o = sheetcalc(&["info", "A2"]);
    assert!(o.status.success());
    let s = stdout(&o);
    assert!(s.contains("dim 8"), "{s}");
    assert!(s.contains("positive roots 3"), "{s}");
    assert!(s.contains("exponents [1, 2]"), "{s}");

    let o = sheetcalc(&["info", "B3", "--json"]);
    let v: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(v["dim"], 21);
    assert_eq!(v["degrees"], serde_json::json!([2, 4, 6]));
}

#[test]
fn rk_dimension() {
    let o = sheetcalc(&["rk", "--type", "A2", "--k", "3"]);
    assert!(o.status.success());
    assert_eq!(stdout(&o).trim(), "dim 20");

    let o = sheetcalc(&["rk", "--type", "A1", "--k", "1", "--dump"]);
    let s = stdout(&o);
    let lines: Vec<&str> = s.lines().collect();
    assert_eq!(lines[0], "dim 3");
    assert_eq!(lines.len(), 4);
}

#[test]
fn ideals_of_a3() {
    let o = sheetcalc(&["ideals", "--type", "A3", "--size", "3"]);
    assert!(o.status.success());
    let s = stdout(&o);
    let lines: Vec<&str> = s.lines().collect();
    assert_eq!(lines[0], "3 ideals of size 3");
    assert_eq!(lines.len(), 4);
    assert!(lines[1..].iter().all(|l| l.ends_with(" abelian")), "{s}");

    let o = sheetcalc(&["ideals", "--type", "A3", "--size", "3", "--json"]);
    let v: Vec<serde_json::Value> = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(v.len(), 3);
    assert!(v
        .iter()
        .all(|i| i["abelian"] == true && i["roots"].as_array().unwrap().len() == 3));
}

#[test]
fn verify_passes_and_exits_zero() {
    let o = sheetcalc(&["verify", "al1", "--type", "A2"]);
    assert!(o.status.success(), "{}", stdout(&o));
    let s = stdout(&o);
    assert!(s.starts_with("pass al1 A2"), "{s}");
    assert!(!s.contains("FAIL"));
}

#[test]
fn usage_errors_exit_two() {
    for args in [
        &["verify", "nonsense", "--type", "A2"][..],
        &["verify", "al1", "--type", "X3"],
        &["info", "A7"],
        &["info", "E6"],
        &["rk", "--type", "A2"],
    ] {
        let o = sheetcalc(args);
        assert_eq!(o.status.code(), Some(2), "{args:?}");
    }
}

#[test]
fn rank_budget_from_environment() {
    let o = Command::new(env!("CARGO_BIN_EXE_sheetcalc"))
        .args(["info", "A7"])
        .env("SHEETCALC_MAX_RANK", "7")
        .output()
        .unwrap();
    assert!(o.status.success());
    assert!(stdout(&o).contains("dim 63"));

    let o = Command::new(env!("CARGO_BIN_EXE_sheetcalc"))
        .args(["info", "A3"])
        .env("SHEETCALC_MAX_RANK", "2")
        .output()
        .unwrap();
    assert_eq!(o.status.code(), Some(2));

    let o = Command::new(env!("CARGO_BIN_EXE_sheetcalc"))
        .args(["info", "A2"])
        .env("SHEETCALC_MAX_RANK", "many")
        .output()
        .unwrap();
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn json_report_round_trips() {
    let o = sheetcalc(&["verify", "ideals", "--type", "A2", "--json"]);
    assert!(o.status.success());
    let text = stdout(&o);
    let rep: VerificationReport = serde_json::from_str(&text).unwrap();
    assert_eq!(rep.theorem, "ideals");
    assert_eq!(rep.cartan_type, "A2");
    assert_eq!(rep.status, Status::Pass);
    assert_eq!(serde_json::to_string_pretty(&rep).unwrap(), text.trim_end());
}

#[test]
fn verify_all_on_a1() {
    let o = sheetcalc(&["verify", "all", "--type", "A1", "--json", "--seed", "3"]);
    assert!(o.status.success(), "{}", stdout(&o));
    let reps: Vec<VerificationReport> = serde_json::from_slice(&o.stdout).unwrap();
    let names: Vec<&str> = reps.iter().map(|r| r.theorem.as_str()).collect();
    assert_eq!(names, THEOREMS);
    assert!(reps.iter().all(|r| r.seed == 3 && r.status != Status::Fail));
}

#[test]
fn seed_makes_runs_reproducible() {
    let run = || {
        let o = sheetcalc(&["verify", "sheets", "--type", "A2", "--seed", "11", "--json"]);
        let mut rep: VerificationReport = serde_json::from_slice(&o.stdout).unwrap();
        rep.elapsed_ms = 0;
        rep
    };
    assert_eq!(run(), run());
}
