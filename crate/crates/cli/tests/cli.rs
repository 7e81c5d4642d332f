use std::path::Path;

use fandecomp_cli::run;
use serde_json::Value;
use tempfile::TempDir;

fn cli(args: &[&str]) -> (i32, String) {
    run(std::iter::once("fandecomp").chain(args.iter().copied()))
}

fn json(args: &[&str]) -> Value {
    let mut full = vec!["--json"];
    full.extend_from_slice(args);
    let (code, out) = cli(&full);
    assert_eq!(code, 0, "{out}");
    serde_json::from_str(&out).expect("valid JSON")
}

fn generate(dir: &TempDir, name: &str, args: &[&str]) -> String {
    let path = dir.path().join(name);
    let p = path.to_str().unwrap();
    let mut full = vec!["fan-gen"];
    full.extend_from_slice(args);
    full.extend_from_slice(&["--out", p]);
    let (code, out) = cli(&full);
    assert_eq!(code, 0, "{out}");
    p.to_string()
}

#[test]
fn count_diag_two_mod_two() {
    let (code, out) = cli(&["mf-count", "DIAG(2)", "--mod", "2"]);
    assert_eq!(code, 0);
    assert_eq!(out.trim(), "9 (closed form 9, MATCH)");
    let v = json(&["mf-count", "DIAG(2)", "--mod", "2", "--sequential"]);
    assert_eq!(v["count"], 9);
    assert_eq!(v["verdict"], "MATCH");
}

#[test]
fn count_odd_modulus_has_no_closed_form() {
    let v = json(&["mf-count", "PQ(1,1)", "--mod", "3"]);
    assert!(v["closed_form"].is_null());
    assert_eq!(v["count"], 4);
}

#[test]
fn factor_f0_gives_two_lines() {
    let dir = TempDir::new().unwrap();
    let f0 = generate(&dir, "f0.json", &["hirzebruch", "0"]);
    let v = json(&["fan-factor", &f0]);
    let blocks = v["blocks"].as_array().unwrap();
    assert_eq!(blocks.len(), 2);
    for b in blocks {
        assert_eq!(b["factor"]["dim"], 1);
        assert_eq!(b["factor"]["rays"].as_array().unwrap().len(), 2);
    }
    let (code, out) = cli(&["fan-factor", &f0]);
    assert_eq!(code, 0);
    assert!(out.starts_with("2 block(s)"));
}

#[test]
fn hirzebruch_one_is_one_block() {
    let dir = TempDir::new().unwrap();
    let f1 = generate(&dir, "f1.json", &["hirzebruch", "1"]);
    assert_eq!(json(&["fan-factor", &f1])["blocks"].as_array().unwrap().len(), 1);
}

#[test]
fn recover_spec_product() {
    let (code, out) = cli(&["recover", "CP1^2 * PQ(1,1)"]);
    assert_eq!(code, 0, "{out}");
    assert!(out.contains("recovered: m=2, m_{1,1}=1"), "{out}");
    assert_eq!(out.lines().last(), Some("OK"));
}

#[test]
fn recover_rejects_diag_one() {
    let (code, out) = cli(&["recover", "DIAG(1)"]);
    assert_eq!(code, 1, "{out}");
}

#[test]
fn validate_and_product() {
    let dir = TempDir::new().unwrap();
    let p1 = generate(&dir, "p1.json", &["proj", "1"]);
    let p2 = generate(&dir, "p2.json", &["proj", "2"]);
    let (code, out) = cli(&["fan-validate", &p2]);
    assert_eq!(code, 0);
    assert!(out.ends_with("VALID\n"));

    let (code, prod) = cli(&["fan-product", &p1, &p2]);
    assert_eq!(code, 0);
    let path = dir.path().join("prod.json");
    std::fs::write(&path, prod).unwrap();
    let v = json(&["fan-validate", path.to_str().unwrap()]);
    assert_eq!(v["valid"], true);
    assert_eq!(json(&["fan-factor", path.to_str().unwrap()])["blocks"].as_array().unwrap().len(), 2);
}

#[test]
fn incomplete_fan_fails_validation() {
    let dir = TempDir::new().unwrap();
    let path = dir.path().join("half.json");
    std::fs::write(&path, r#"{"dim": 2, "rays": [[1,0],[0,1]], "maximal_cones": [[0,1]]}"#).unwrap();
    let (code, out) = cli(&["fan-validate", path.to_str().unwrap()]);
    assert_eq!(code, 1, "{out}");
    assert!(out.contains("INVALID"));
}

#[test]
fn isomorphism_certificate() {
    let dir = TempDir::new().unwrap();
    let f0 = generate(&dir, "f0.json", &["hirzebruch", "0"]);
    let f2 = generate(&dir, "f2.json", &["hirzebruch", "2"]);
    let f4 = generate(&dir, "f4.json", &["hirzebruch", "-4"]);
    assert_eq!(json(&["fan-iso", &f0, &f0])["isomorphic"], true);
    assert_eq!(json(&["fan-iso", &f2, &f4])["isomorphic"], false);
    let (code, out) = cli(&["fan-iso", &f0, &f2]);
    assert_eq!(code, 0);
    assert_eq!(out.trim(), "NOT ISOMORPHIC");
}

#[test]
fn census_poincare_normalize() {
    let (code, out) = cli(&["mf-census", "CP1 * PQ(2,1)"]);
    assert_eq!(code, 0);
    assert!(out.contains("4 component(s)"), "{out}");
    assert_eq!(cli(&["mf-poincare", "CP1^2"]).1.trim(), "1 + 2x + x^2");
    assert_eq!(json(&["mf-normalize", "1", "0", "1"])["normal_form"], "PQ(2,1)");
    assert_eq!(json(&["mf-normalize", "0", "0", "0"])["normal_form"], "S4");
}

#[test]
fn profile_lists_products() {
    let v = json(&["mf-profile", "PQ(1,1)"]);
    assert_eq!(v["b2"], 2);
    assert_eq!(v["products"].as_array().unwrap().len(), 2);
}

#[test]
fn exit_codes() {
    assert_eq!(cli(&["mf-count", "PQ(", "--mod", "2"]).0, 2);
    assert_eq!(cli(&["mf-count", "PQ(30,30)", "--mod", "2"]).0, 3);
    assert_eq!(cli(&["mf-count", "PQ(2,2)", "--mod", "2", "--budget", "10"]).0, 3);
    assert_eq!(cli(&["mf-count", "PQ(1,1)", "--mod", "0"]).0, 1);
    assert_eq!(cli(&["no-such-command"]).0, 2);
    assert_eq!(cli(&["--threads", "0", "selftest"]).0, 2);
    assert_eq!(cli(&["--help"]).0, 0);
    assert_eq!(cli(&["--version"]).0, 0);
}

#[test]
fn fan_file_errors_name_the_path() {
    let dir = TempDir::new().unwrap();
    let bad = dir.path().join("bad.json");
    std::fs::write(&bad, "{ not json").unwrap();
    let (code, out) = cli(&["fan-validate", bad.to_str().unwrap()]);
    assert_eq!(code, 2);
    assert!(out.contains("bad.json"), "{out}");

    let missing = Path::new("/definitely/missing.json");
    let (code, out) = cli(&["fan-factor", missing.to_str().unwrap()]);
    assert_eq!(code, 2);
    assert!(out.contains("missing.json"));
}

#[test]
fn selftest_passes_with_one_thread() {
    let (code, out) = cli(&["--threads", "1", "selftest"]);
    assert_eq!(code, 0, "{out}");
    assert_eq!(out.lines().filter(|l| l.starts_with("[PASS]")).count(), 9);
    assert!(out.trim_end().ends_with("9/9 passed"));
}
