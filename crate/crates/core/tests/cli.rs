use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use redinv::catalogio::{read_result, CatalogFile, ResultRecord, DEFAULT_SPECS};
use redinv::Invariants;

fn root() -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("../..")
}

fn redinv(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_redinv"))
        .args(args)
        .current_dir(root())
        .env_remove("REDINV_CATALOG")
        .output()
        .expect("binary runs")
}

fn json(args: &[&str]) -> (i32, ResultRecord) {
    let mut full = vec!["--format", "json"];
    full.extend_from_slice(args);
    let out = redinv(&full);
    let text = String::from_utf8(out.stdout).unwrap();
    (out.status.code().unwrap(), ResultRecord::from_json(&text).expect("valid result record"))
}

#[test]
fn invariants_of_adjoint_groups() {
    for (spec, pic) in [("PGL(3)", "Z/3"), ("PSO(8)", "Z/2 + Z/2"), ("E6ad", "Z/3"), ("GL(2)", "0")] {
        let (code, rec) = json(&["invariants", spec]);
        assert_eq!(code, 0);
        assert!(rec.passed);
        assert_eq!(rec.groups["pic"].to_string(), pic, "{spec}");
    }
}

#[test]
fn pi1d_both_resolutions_agree() {
    let (code, rec) = json(&["pi1d", "SO(5)", "--resolution", "both"]);
    assert_eq!(code, 0);
    assert!(rec.passed);
    assert!(rec.complexes.len() >= 2);
}

#[test]
fn json_output_is_stable() {
    let a = redinv(&["--format", "json", "pi1d", "PGL(3) xΓ:flip"]);
    let b = redinv(&["--format", "json", "pi1d", "PGL(3) xΓ:flip"]);
    assert_eq!(a.stdout, b.stdout);
    assert!(!a.stdout.is_empty());
}

#[test]
fn ses_fixtures_pass_and_corruption_fails() {
    for n in 2..=6 {
        for file in [format!("fixtures/ses/gm_gl{n}_pgl{n}.json"), format!("fixtures/ses/sl{n}_gl{n}_gm.json")] {
            let (code, rec) = json(&["check-ses", &file]);
            assert_eq!(code, 0, "{file}");
            assert!(rec.passed);
        }
    }
    let out = redinv(&["check-ses", "fixtures/ses/corrupt_partition.json"]);
    assert_eq!(out.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&out.stderr).contains("roots-compatible"));
}

#[test]
fn cech_and_matrix_files() {
    let (code, rec) = json(&["cech", "fixtures/cech/mixed.json"]);
    assert_eq!(code, 0);
    let degrees = &rec.complexes["cech"];
    assert_eq!(degrees[0].group.to_string(), "Z/2");
    assert_eq!(degrees[1].group.to_string(), "Z/3");
    assert!(degrees[2..].iter().all(|d| d.group.to_string() == "0"));

    let (code, rec) = json(&["matrix", "snf", "fixtures/matrix/example.json"]);
    assert_eq!(code, 0);
    assert!(rec.matrices.contains_key("d"));
}

#[test]
fn input_errors_exit_two() {
    assert_eq!(redinv(&["invariants", "XYZ"]).status.code(), Some(2));
    assert_eq!(redinv(&["check-ses", "fixtures/does-not-exist.json"]).status.code(), Some(2));
    assert_eq!(redinv(&["cech", "fixtures/cech/times3.json", "--max-degree", "99"]).status.code(), Some(2));
}

#[test]
fn catalog_build_round_trips() {
    let out = redinv(&["catalog", "build"]);
    assert_eq!(out.status.code(), Some(0));
    let built = String::from_utf8(out.stdout).unwrap();
    let shipped = std::fs::read_to_string(root().join("catalog/groups.json")).unwrap();
    assert_eq!(built, shipped);
    assert_eq!(CatalogFile::from_specs(DEFAULT_SPECS).unwrap().to_json(), shipped);
    assert_eq!(redinv(&["catalog", "check"]).status.code(), Some(0));
}

#[test]
fn custom_catalog_via_env_and_result_files() {
    let dir = tempfile::tempdir().unwrap();
    let cat = dir.path().join("cat.json");
    let mut file = CatalogFile::from_specs(&["SL(2)", "PGL(2)"]).unwrap();
    file.entries[1].name = "adjoint-A1".into();
    std::fs::write(&cat, file.to_json()).unwrap();
    let out = Command::new(env!("CARGO_BIN_EXE_redinv"))
        .args(["--format", "json", "invariants", "adjoint-A1"])
        .env("REDINV_CATALOG", &cat)
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(0));
    let rec = ResultRecord::from_json(&String::from_utf8(out.stdout).unwrap()).unwrap();
    assert_eq!(rec.groups["pic"].to_string(), "Z/2");

    let path = dir.path().join("result.json");
    redinv::catalogio::write_result(&rec, &path).unwrap();
    assert_eq!(read_result(&path).unwrap(), rec);

    file.entries[1].expected.mu_dual = Invariants::new(0, &[5]);
    std::fs::write(&cat, file.to_json()).unwrap();
    let bad = Command::new(env!("CARGO_BIN_EXE_redinv")).args(["catalog", "check"]).env("REDINV_CATALOG", &cat).output().unwrap();
    assert_ne!(bad.status.code(), Some(0));
}

#[test]
fn selftest_passes() {
    let out = redinv(&["selftest", "--seed", "3", "--cases", "20"]);
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
}
