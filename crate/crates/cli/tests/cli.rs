use std::path::PathBuf;
use std::process::{Command, Output};

use serde_json::Value;

fn data(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../core/data").join(name)
}

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_xzero")).args(args).output().expect("binary runs")
}

fn json(o: &Output) -> Value {
    serde_json::from_slice(&o.stdout).expect("stdout is JSON")
}

fn stderr(o: &Output) -> String {
    String::from_utf8_lossy(&o.stderr).into_owned()
}

#[test]
fn verify_tangent_reports_kernel_four() {
    let o = run(&["verify", "--stage", "tangent"]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    let r = json(&o);
    let k = r.as_array().unwrap().iter().find(|c| c["check"] == "Jacobian kernel dimension").unwrap();
    assert_eq!((k["expected"].clone(), k["got"].clone(), k["pass"].clone()), (4.into(), 4.into(), true.into()));
}

#[test]
fn verify_rho0_passes() {
    let o = run(&["verify", "--stage", "rho0"]);
    assert_eq!(o.status.code(), Some(0));
    let r = json(&o);
    let checks = r.as_array().unwrap();
    assert!(!checks.is_empty());
    assert!(checks.iter().all(|c| c["stage"] == "rho0" && c["status"] != "fail"));
}

#[test]
fn verify_all_passes_with_errata_flagged() {
    let o = run(&["verify"]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    let r = json(&o);
    let errata: Vec<_> = r.as_array().unwrap().iter().filter(|c| c["status"] == "erratum").collect();
    assert!(errata.iter().all(|c| c["note"].is_string()));
    assert!(stderr(&o).contains("errata"));
}

#[test]
fn corrupt_flags_file_is_an_input_error() {
    let dir = tempfile::tempdir().unwrap();
    for f in ["matrices.json", "instance.json"] {
        std::fs::copy(data(f), dir.path().join(f)).unwrap();
    }
    let flags = std::fs::read_to_string(data("flags.json")).unwrap();
    std::fs::write(dir.path().join("flags.json"), &flags[..flags.len() / 3]).unwrap();
    let o = run(&["verify", "--stage", "all", "--data-dir", dir.path().to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(2));
    assert!(stderr(&o).contains("flags.json"));
    assert!(o.stdout.is_empty());
}

#[test]
fn data_dir_copy_verifies() {
    let dir = tempfile::tempdir().unwrap();
    for f in ["matrices.json", "flags.json", "instance.json"] {
        std::fs::copy(data(f), dir.path().join(f)).unwrap();
    }
    let o = run(&["verify", "--stage", "decoration", "--data-dir", dir.path().to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
}

#[test]
fn tangent_on_bundled_point() {
    let (i, p) = (data("instance.json"), data("point.json"));
    let o = run(&["tangent", i.to_str().unwrap(), p.to_str().unwrap(), "--basis"]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    let r = json(&o);
    assert_eq!(r["kernel_dimension"], 4);
    assert_eq!(r["residuals"]["equal_to_one"], 48);
    let basis = r["basis"].as_array().unwrap();
    assert_eq!(basis.len(), 4);
    // Echelon form: each vector's leading entry is 1 and sits strictly right of the previous one.
    let lead: Vec<usize> = basis
        .iter()
        .map(|v| {
            let v = v.as_array().unwrap();
            assert_eq!(v.len(), 48);
            let k = v.iter().position(|x| x != "0").unwrap();
            assert_eq!(v[k], "(1)·1");
            k
        })
        .collect();
    assert!(lead.windows(2).all(|w| w[0] < w[1]), "{lead:?}");
}

#[test]
fn tangent_defaults_to_bundled_data() {
    let o = run(&["tangent"]);
    assert_eq!(o.status.code(), Some(0));
    assert!(json(&o).get("basis").is_none());
}

#[test]
fn perturbed_point_names_residual() {
    let mut p: Value = serde_json::from_str(&std::fs::read_to_string(data("point.json")).unwrap()).unwrap();
    p[5]["coeffs"][0] = "3".into();
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("p.json");
    std::fs::write(&path, p.to_string()).unwrap();
    let o = run(&["tangent", data("instance.json").to_str().unwrap(), path.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(1));
    assert!(stderr(&o).contains("residual"), "{}", stderr(&o));
    assert!(json(&o)["residuals"]["first_failure"]["residual"].is_string());
}

#[test]
fn short_point_is_an_input_error() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("p.json");
    std::fs::write(&path, "[]").unwrap();
    let o = run(&["tangent", data("instance.json").to_str().unwrap(), path.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn sample_both_signs_at_rho0_traces() {
    let o = run(&["sample", "--z", "5,3,5,3", "--sign", "both"]);
    assert_eq!(o.status.code(), Some(0));
    let rows = json(&o);
    let rows = rows.as_array().unwrap();
    assert_eq!(rows.len(), 2);
    for r in rows {
        assert_eq!(r["discriminant"], "(-375)·1");
        assert_eq!(r["commutator"], "ok");
        assert_eq!(r["sigma"], "ok");
        assert_eq!(r["traces"].as_array().unwrap().len(), 9);
    }
    assert_ne!(rows[0]["traces"][8], rows[1]["traces"][8]);
}

#[test]
fn sample_flags_vanishing_denominator() {
    let o = run(&["sample", "--z", "0,0,0,-3"]);
    assert_eq!(o.status.code(), Some(0));
    let rows = json(&o);
    assert!(rows[0]["status"].as_str().unwrap().starts_with("denominator vanishes"));
}

#[test]
fn seeded_sample_is_deterministic() {
    let a = run(&["sample", "--count", "100", "--seed", "7", "--format", "csv"]);
    let b = run(&["sample", "--count", "100", "--seed", "7", "--format", "csv"]);
    assert_eq!(a.status.code(), Some(0));
    assert_eq!(a.stdout, b.stdout);
    let mut rd = csv::Reader::from_reader(&a.stdout[..]);
    let idx: Vec<usize> = rd.records().map(|r| r.unwrap()[0].parse().unwrap()).collect();
    assert_eq!(idx, (0..100).collect::<Vec<_>>());
    let c = run(&["sample", "--count", "100", "--seed", "8", "--format", "csv"]);
    assert_ne!(a.stdout, c.stdout);
}

#[test]
fn float_mode_and_grid() {
    let o = run(&["sample", "--grid", "0:1,0:1,0:1,-1:0", "--mode", "float", "--sign", "both"]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    assert_eq!(json(&o).as_array().unwrap().len(), 32);
}

#[test]
fn bad_sample_input() {
    assert_eq!(run(&["sample", "--z", "1,2,3"]).status.code(), Some(2));
    assert_eq!(run(&["sample", "--grid", "3:1"]).status.code(), Some(2));
    assert_eq!(run(&["sample"]).status.code(), Some(2));
    assert_eq!(run(&["sample", "--z", "1,2,3,x"]).status.code(), Some(2));
}

#[test]
fn import_reproduces_bundled_instance() {
    let o = run(&[
        "import",
        data("whitehead_pgl3.csv").to_str().unwrap(),
        data("whitehead_pgl3.header.json").to_str().unwrap(),
    ]);
    assert_eq!(o.status.code(), Some(0));
    let got = json(&o);
    let want: Value = serde_json::from_str(&std::fs::read_to_string(data("instance.json")).unwrap()).unwrap();
    assert_eq!(got["rows"], want["rows"]);
    let missing = run(&["import", "/nonexistent.csv", data("whitehead_pgl3.header.json").to_str().unwrap()]);
    assert_eq!(missing.status.code(), Some(2));
}
