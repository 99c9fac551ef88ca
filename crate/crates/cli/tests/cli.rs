use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use extgini::equity::{prop2_instance, TransferInstance};
use extgini::pairing::{BlockInvolution, PairingFunction};
use extgini::stream::Stream;
use extgini::Rational;
use serde_json::Value;
use tempfile::TempDir;

fn bin(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_extgini")).args(args).output().expect("binary runs")
}

fn json(out: &Output) -> Value {
    serde_json::from_slice(&out.stdout).expect("stdout is one JSON document")
}

fn write(dir: &TempDir, name: &str, value: &impl serde::Serialize) -> PathBuf {
    let p = dir.path().join(name);
    std::fs::write(&p, serde_json::to_string(value).unwrap()).unwrap();
    p
}

fn s(p: &Path) -> &str {
    p.to_str().unwrap()
}

/// Levels 1 and 4 spread from 2 and 3 in every block of two.
fn spread_instance() -> TransferInstance {
    let equal = Stream::periodic_ints(&[2, 3]).unwrap();
    let unequal = Stream::periodic_ints(&[1, 4]).unwrap();
    let p = PairingFunction::periodic(2, BlockInvolution::adjacent_swaps(2)).unwrap();
    TransferInstance::new(unequal, equal, p).unwrap()
}

#[test]
fn welfare_of_stream_file_and_demo_agree() {
    let dir = TempDir::new().unwrap();
    let f = write(&dir, "x.json", &Stream::periodic_ints(&[2, 3, 5]).unwrap());
    let a = bin(&["welfare", s(&f)]);
    let b = bin(&["welfare", "--demo", "motivating235"]);
    assert_eq!(a.status.code(), Some(0));
    assert_eq!(json(&a)["W"], "-4/3");
    assert_eq!(a.stdout, b.stdout);
}

#[test]
fn compare_reports_order() {
    let dir = TempDir::new().unwrap();
    let x = write(&dir, "x.json", &Stream::periodic_ints(&[2, 3, 5]).unwrap());
    let y = write(&dir, "y.json", &Stream::periodic_ints(&[1, 4, 5]).unwrap());
    let v = json(&bin(&["compare", s(&x), s(&y)]));
    assert_eq!(v["order"], "greater");
    assert_eq!(v["W_b"], "-16/9");
    assert_eq!(json(&bin(&["compare", s(&y), s(&x)]))["order"], "less");
    assert_eq!(json(&bin(&["compare", s(&x), s(&x)]))["order"], "equal");
}

#[test]
fn verify_exit_codes() {
    let dir = TempDir::new().unwrap();
    let f = write(&dir, "inst.json", &spread_instance());
    let ok = bin(&["verify", s(&f), "--variant", "wpd"]);
    assert_eq!(ok.status.code(), Some(0));
    assert_eq!(json(&ok)["valid"], true);
    let pd = bin(&["verify", s(&f), "--variant", "pd"]);
    assert_eq!(pd.status.code(), Some(1));
    assert_eq!(json(&pd)["valid"], false);
    assert!(!pd.stderr.is_empty());
    assert_eq!(bin(&["verify", s(&f), "--variant", "bogus"]).status.code(), Some(2));
    let bad = dir.path().join("bad.json");
    std::fs::write(&bad, "{\"unequal\": 3}").unwrap();
    let out = bin(&["verify", s(&bad), "--variant", "apd"]);
    assert_eq!(out.status.code(), Some(2));
    assert!(json(&out)["error"].is_string());
}

#[test]
fn float_literals_are_rejected() {
    let dir = TempDir::new().unwrap();
    let f = dir.path().join("f.json");
    std::fs::write(&f, r#"{"alphabet":[0.5,1],"preperiod":[],"period":[0,1]}"#).unwrap();
    assert_eq!(bin(&["welfare", s(&f)]).status.code(), Some(2));
}

#[test]
fn prop1_csv_round_trips() {
    let dir = TempDir::new().unwrap();
    let f = write(&dir, "inst.json", &spread_instance());
    let csv_path = dir.path().join("p1.csv");
    let out = bin(&["prop1", s(&f), "--n-max", "25", "--csv", s(&csv_path)]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(json(&out)["all_hold"], true);
    let mut rdr = csv::Reader::from_path(&csv_path).unwrap();
    assert_eq!(rdr.headers().unwrap(), vec!["N", "raw_x", "raw_y", "D", "bound", "slack"]);
    let mut n = 0;
    for rec in rdr.records() {
        let rec = rec.unwrap();
        let q = |i: usize| rec[i].parse::<Rational>().unwrap();
        assert_eq!(q(1) - q(4), q(5));
        assert!(q(4) > q(2));
        assert!(!q(5).is_negative());
        n += 1;
    }
    assert_eq!(n, 25);
}

#[test]
fn convergence_csv_is_exact_and_deterministic() {
    let dir = TempDir::new().unwrap();
    let f = write(&dir, "y.json", &Stream::periodic_ints(&[1, 4, 5]).unwrap());
    let c1 = dir.path().join("a.csv");
    let c2 = dir.path().join("b.csv");
    let o1 = bin(&["convergence", s(&f), "--h", "3", "--n-max", "40", "--csv", s(&c1)]);
    let o2 = bin(&["--sequential", "convergence", s(&f), "--h", "3", "--n-max", "40", "--csv", s(&c2)]);
    assert_eq!(o1.status.code(), Some(0));
    assert_eq!(o1.stdout, o2.stdout);
    assert_eq!(std::fs::read(&c1).unwrap(), std::fs::read(&c2).unwrap());
    let mut rdr = csv::Reader::from_path(&c1).unwrap();
    assert_eq!(
        rdr.headers().unwrap(),
        vec!["N", "H_N", "W_N_num", "W_N_den", "running_liminf_num", "running_liminf_den"]
    );
    for rec in rdr.records() {
        let rec = rec.unwrap();
        let w = Rational::new(rec[2].parse::<i64>().unwrap(), rec[3].parse::<i64>().unwrap()).unwrap();
        // h equals the period, so every prefix is whole periods.
        assert_eq!(w, Rational::ratio(16, 9));
    }
    assert_eq!(json(&o1)["running_liminf"], "16/9");
}

#[test]
fn sparse_demo_runs_through_estimator() {
    let out = bin(&["convergence", "--demo", "sparse10-equal", "--h", "10", "--n-max", "100"]);
    assert_eq!(out.status.code(), Some(0));
    let v = json(&out);
    assert_eq!(v["mode"], "estimated");
    assert_eq!(v["H_N"], 1000);
    assert_eq!(bin(&["welfare", "--demo", "sparse10"]).status.code(), Some(2));
}

#[test]
fn case4_scan_and_argument_checks() {
    let out = bin(&["case4-scan", "--value-max", "4", "--eps-max", "1"]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(json(&out)["violations"].as_array().unwrap().len(), 0);
    assert_eq!(bin(&["case4-scan", "--value-max", "1", "--eps-max", "1"]).status.code(), Some(2));
}

#[test]
fn prop2_rows_and_zero_k() {
    let dir = TempDir::new().unwrap();
    let csv_path = dir.path().join("p2.csv");
    let out = bin(&["prop2", "--k-max", "5", "--csv", s(&csv_path)]);
    assert_eq!(out.status.code(), Some(0));
    let v = json(&out);
    assert_eq!(v["gaps_strictly_decreasing"], true);
    assert_eq!(v["final_gap"], "1/42");
    let rows = csv::Reader::from_path(&csv_path).unwrap().records().count();
    assert_eq!(rows, 5);
    let zero = bin(&["prop2", "--k-max", "0"]);
    assert_eq!(zero.status.code(), Some(2));
    assert!(json(&zero)["error"].is_string());
}

#[test]
fn prop2_instance_verifies_through_cli() {
    let dir = TempDir::new().unwrap();
    let f = write(&dir, "k3.json", &prop2_instance(3, 2).unwrap());
    assert_eq!(bin(&["verify", s(&f), "--variant", "s-apd"]).status.code(), Some(0));
}

#[test]
fn anonymity_and_cases_commands() {
    let dir = TempDir::new().unwrap();
    let st = write(&dir, "s.json", &Stream::periodic_ints(&[1, 4, 5]).unwrap());
    let out = bin(&["anonymity", s(&st), "--i", "2", "--j", "9"]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(json(&out)["holds"], true);
    let inst = write(&dir, "inst.json", &spread_instance());
    let out = bin(&["cases", s(&inst), "--n", "6"]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(json(&out)["reproduces_raw_difference"], true);
}

#[test]
fn usage_errors_emit_json() {
    let out = bin(&["welfare", "--demo", "nope"]);
    assert_eq!(out.status.code(), Some(2));
    assert!(json(&out)["error"].is_string());
    let help = bin(&["--help"]);
    assert_eq!(help.status.code(), Some(0));
    assert!(String::from_utf8_lossy(&help.stdout).contains("case4-scan"));
}
