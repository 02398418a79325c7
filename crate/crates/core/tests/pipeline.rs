use std::path::PathBuf;
use std::process::Command;

use num_rational::BigRational;

use apery_core::certify::{run_certificate, CertifyConfig, Grade};
use apery_core::generators::{builtin_catalog, n1_family, CatalogEntry};
use apery_core::Verdict;

fn fixture(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("fixtures").join(name)
}

fn config(name: &str) -> CertifyConfig {
    CertifyConfig::from_json(&std::fs::read_to_string(fixture(name)).unwrap()).unwrap()
}

fn forge(args: &[&str]) -> (i32, String, String) {
    let out = Command::new(env!("CARGO_BIN_EXE_apery-forge")).args(args).output().unwrap();
    (out.status.code().unwrap(), String::from_utf8(out.stdout).unwrap(), String::from_utf8(out.stderr).unwrap())
}

#[test]
fn catalog_fixture_is_current() {
    let text = std::fs::read_to_string(fixture("catalog.json")).unwrap();
    let v: serde_json::Value = serde_json::from_str(&text).unwrap();
    assert_eq!(v["schema"], "apery-forge/1");
    let stored: Vec<CatalogEntry> = serde_json::from_value(v["entries"].clone()).unwrap();
    assert_eq!(serde_json::to_value(&stored).unwrap(), serde_json::to_value(builtin_catalog()).unwrap());
}

#[test]
fn n1_certifies_log2() {
    let rep = run_certificate(&config("n1_b1.json"));
    assert_eq!(rep.verdict, Verdict::Certified, "{:?}", rep.errors);
    let m = rep.constant.as_ref().unwrap();
    assert_eq!(m.name, "log(2/1)");
    assert_eq!(m.multiple, BigRational::from_integer(1.into()));
    for f in &rep.flags {
        assert!(f.value != Some(false), "{} failed", f.name);
    }
    let json: serde_json::Value = serde_json::from_str(&rep.to_json(false)).unwrap();
    assert_eq!(json["verdict"]["status"], "CERTIFIED-AT-DESK-SCALE");
}

#[test]
fn baby_apery_certifies_zeta2() {
    let rep = run_certificate(&config("babyapery.json"));
    assert_eq!(rep.verdict, Verdict::Certified, "{:?}", rep.errors);
    assert_eq!(rep.constant.as_ref().unwrap().name, "zeta(2)");
    assert_eq!(rep.flags.iter().find(|f| f.name == "gate").unwrap().grade, Grade::Interval);
    assert_eq!(rep.a_prefix.len(), 10);
}

#[test]
fn disabling_checks_never_worsens_the_verdict() {
    let base = config("phi4.json");
    let rep = run_certificate(&base);
    assert_eq!(rep.verdict, Verdict::HypothesisFailed(vec!["gate".into()]));
    assert_eq!(rep.verdict.exit_code(), 2);
    let mut relaxed = base.clone();
    relaxed.toggles.gate = false;
    let rep2 = run_certificate(&relaxed);
    assert!(!matches!(rep2.verdict, Verdict::HypothesisFailed(_)), "{}", rep2.verdict);
    assert!(!rep2.flags.iter().find(|f| f.name == "gate").unwrap().toggled);

    let mut cfg = CertifyConfig::new(n1_family(2).phi);
    cfg.terms = 60;
    let strict = run_certificate(&cfg);
    cfg.toggles.positivity = false;
    cfg.toggles.involutive = false;
    let loose = run_certificate(&cfg);
    assert_eq!(strict.verdict, Verdict::Certified);
    assert_eq!(loose.verdict, Verdict::Certified);
}

#[test]
fn invalid_configs_are_rejected() {
    assert!(CertifyConfig::from_json(r#"{"phi": "x1 + x1^-1"}"#).is_err());
    assert!(CertifyConfig::from_json(r#"{"schema": "other/9", "phi": "x1", "n": 1}"#).is_err());
    let mut c = config("n1_b1.json");
    c.terms = 10;
    assert!(c.validate().is_err());
    c.terms = 200;
    c.c = 0;
    assert!(c.validate().is_err());
}

#[test]
fn cli_exit_codes() {
    let apery = fixture("apery.json");
    let (code, out, err) = forge(&["certify", "--input", apery.to_str().unwrap()]);
    assert_eq!(code, 0, "{}", err);
    assert!(err.contains("CERTIFIED-AT-DESK-SCALE"));
    let v: serde_json::Value = serde_json::from_str(&out).unwrap();
    assert_eq!(v["constant"]["name"], "zeta(3)");
    assert_eq!(v["constant"]["multiple"], "-2");

    let phi4 = fixture("phi4.json");
    let (code, _, err) = forge(&["certify", "--input", phi4.to_str().unwrap()]);
    assert_eq!(code, 2);
    assert!(err.contains("HYPOTHESIS-FAILED(gate)"));

    let (code, _, _) = forge(&["certify", "--no-such-flag"]);
    assert_eq!(code, 1);
    let (code, _, err) = forge(&["certify", "--input", "/nonexistent.json"]);
    assert_eq!(code, 1);
    assert!(err.starts_with("error:"));
    let (code, out, _) = forge(&["certify", "--phi=-x1 + 3 - 2*x1^-1", "--n", "1", "--q0", "-1"]);
    assert_eq!(code, 0);
    let v: serde_json::Value = serde_json::from_str(&out).unwrap();
    assert_eq!(v["constant"]["multiple"], "-1/2");
    let (code, _, err) = forge(&["certify", "--phi", "x1 + 3 - 2*x1^-1", "--n", "1"]);
    assert_eq!(code, 2);
    assert!(err.contains("positivity"));
}

#[test]
fn cli_subcommands() {
    let baby = fixture("babyapery.json");
    let (code, out, _) = forge(&["fit", "--input", baby.to_str().unwrap(), "--terms", "40"]);
    assert_eq!(code, 0);
    let v: serde_json::Value = serde_json::from_str(&out).unwrap();
    assert_eq!(v["structural"]["mum"], true);

    let (code, out, _) = forge(&["sequence", "--phi", "x1 + 2 + x1^-1", "--n", "1", "--terms", "40"]);
    assert_eq!(code, 0);
    let v: serde_json::Value = serde_json::from_str(&out).unwrap();
    assert_eq!(v["a"].as_array().unwrap()[..5], serde_json::json!(["1", "2", "6", "20", "70"]).as_array().unwrap()[..]);
    let (code, _, _) = forge(&["sequence", "--phi", "x1 + 2 + x1^-1", "--n", "1", "--terms", "4"]);
    assert_eq!(code, 1);

    let (code, out, _) = forge(&["generate", "vz", "--n", "2"]);
    assert_eq!(code, 0);
    assert!(out.contains("\"psi\""));
    let (code, out, _) = forge(&["generate", "cellular", "--sigma", "3,5,2,4,1"]);
    assert!(code == 0 || code == 1, "{}", out);
    let (code, _, _) = forge(&["generate", "catalog", "--pretty"]);
    assert_eq!(code, 0);
    let (code, out, _) = forge(&["polytope", "--phi", "x1 + x2 + x1^-1*x2^-1", "--n", "2"]);
    assert_eq!(code, 0);
    assert!(out.contains("polytope"));
    let (code, _, _) = forge(&["frobenius", "--input", baby.to_str().unwrap(), "--terms", "40"]);
    assert_eq!(code, 0);
}
