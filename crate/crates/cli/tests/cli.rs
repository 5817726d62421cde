use std::path::Path;
use std::process::{Command, Output};

use serde_json::Value;

fn voronoi(args: &[&str], dir: &Path) -> Output {
    Command::new(env!("CARGO_BIN_EXE_voronoi"))
        .args(args)
        .current_dir(dir)
        .env_remove("VORONOI_CATALOG_DIR")
        .output()
        .expect("binary runs")
}

fn stdout_json(o: &Output) -> Value {
    serde_json::from_slice(&o.stdout).expect("stdout is JSON")
}

fn write(dir: &Path, name: &str, text: &str) {
    std::fs::write(dir.join(name), text).unwrap();
}

#[test]
fn building_reports_seven_simplices() {
    let dir = tempfile::tempdir().unwrap();
    let o = voronoi(&["building", "--n", "4", "--emit", "b4.json"], dir.path());
    assert!(o.status.success());
    let v = stdout_json(&o);
    assert_eq!(v["simplices"], 7);
    assert_eq!(v["f_vector"], serde_json::json!([3, 3, 1]));
    let h = voronoi(&["homology", "--complex", "b4.json", "--integer"], dir.path());
    let groups: Vec<String> =
        stdout_json(&h)["homology"].as_array().unwrap().iter().map(|g| g["group"].as_str().unwrap().to_string()).collect();
    assert_eq!(groups, ["Z", "0", "0"]);
}

#[test]
fn sp4_verify_passes() {
    let dir = tempfile::tempdir().unwrap();
    let o = voronoi(&["sp4", "verify"], dir.path());
    assert_eq!(o.status.code(), Some(0));
    let v = stdout_json(&o);
    assert_eq!(v["pass"], true);
    assert!(v["checks"].as_array().unwrap().iter().all(|c| c["pass"] == true));
}

#[test]
fn reduce_rejects_indefinite_and_malformed_input() {
    let dir = tempfile::tempdir().unwrap();
    assert!(voronoi(&["perfect", "enumerate", "--n", "2", "--out", "cat2.json"], dir.path()).status.success());
    write(dir.path(), "bad.json", r#"{"n":2,"rows":[["1","2"],["2","1"]]}"#);
    let o = voronoi(&["reduce", "--form", "bad.json", "--catalog", "cat2.json"], dir.path());
    assert_eq!(o.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&o.stderr).contains("positive-definite"));

    write(dir.path(), "broken.json", "{\"n\":2,\n\"rows\":[[\"1\" \"0\"]]}");
    let o = voronoi(&["reduce", "--form", "broken.json", "--catalog", "cat2.json"], dir.path());
    assert_eq!(o.status.code(), Some(2));
    let err = String::from_utf8_lossy(&o.stderr);
    assert!(err.contains("broken.json:2:"), "{err}");

    let o = voronoi(&["reduce", "--form", "missing.json", "--catalog", "cat2.json"], dir.path());
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn reduce_uses_catalog_directory() {
    let dir = tempfile::tempdir().unwrap();
    let cats = dir.path().join("cats");
    let o = Command::new(env!("CARGO_BIN_EXE_voronoi"))
        .args(["perfect", "enumerate", "--n", "2"])
        .env("VORONOI_CATALOG_DIR", &cats)
        .output()
        .unwrap();
    assert!(o.status.success());
    assert!(cats.join("perfect-2.json").exists());
    write(dir.path(), "f.json", r#"{"n":2,"rows":[["5","3"],["3","2"]]}"#);
    let o = Command::new(env!("CARGO_BIN_EXE_voronoi"))
        .args(["reduce", "--form", "f.json"])
        .current_dir(dir.path())
        .env("VORONOI_CATALOG_DIR", &cats)
        .output()
        .unwrap();
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    let v = stdout_json(&o);
    assert_eq!(v["class_index"], 0);
    assert_eq!(v["support"].as_array().unwrap().len(), 2);
}

#[test]
fn resume_matches_a_single_run() {
    let dir = tempfile::tempdir().unwrap();
    let d = dir.path();
    assert!(voronoi(&["perfect", "enumerate", "--n", "4", "--out", "full.json"], d).status.success());
    assert!(voronoi(&["perfect", "enumerate", "--n", "4", "--max-expansions", "1", "--out", "part.json"], d)
        .status
        .success());
    let part: Value = serde_json::from_str(&std::fs::read_to_string(d.join("part.json")).unwrap()).unwrap();
    assert_eq!(part["complete"], false);
    assert!(voronoi(&["perfect", "enumerate", "--n", "4", "--resume", "part.json", "--out", "resumed.json"], d)
        .status
        .success());
    assert_eq!(std::fs::read(d.join("full.json")).unwrap(), std::fs::read(d.join("resumed.json")).unwrap());

    // A tampered record fails hash verification.
    let text = std::fs::read_to_string(d.join("part.json")).unwrap();
    let mut v: Value = serde_json::from_str(&text).unwrap();
    v["classes"][0]["neighbors"] = serde_json::json!([0, 1]);
    write(d, "tampered.json", &serde_json::to_string(&v).unwrap());
    let o = voronoi(&["perfect", "enumerate", "--n", "4", "--resume", "tampered.json"], d);
    assert_eq!(o.status.code(), Some(1));
}

#[test]
fn sl2_emits_complexes() {
    let dir = tempfile::tempdir().unwrap();
    let d = dir.path();
    let o = voronoi(&["sl2", "--level", "5", "--emit", "dual.json", "--emit", "out/tessellation.json"], d);
    assert!(o.status.success());
    let v = stdout_json(&o);
    assert_eq!((v["triangles"].as_u64(), v["edges"].as_u64(), v["cusps"].as_u64()), (Some(20), Some(30), Some(12)));
    assert_eq!(v["h1_rank"], 11);
    let h = stdout_json(&voronoi(&["homology", "--complex", "out/tessellation.json", "--integer"], d));
    assert_eq!(h["euler_characteristic"], 2);
    let h = stdout_json(&voronoi(&["homology", "--complex", "dual.json"], d));
    assert_eq!(h["homology"][1]["betti"], 11);
    assert_eq!(voronoi(&["sl2", "--level", "2"], d).status.code(), Some(2));
    assert_eq!(voronoi(&["sl2", "--level", "5", "--emit", "other.json"], d).status.code(), Some(2));
}

#[test]
fn shell_certifies_octahedron() {
    let dir = tempfile::tempdir().unwrap();
    let d = dir.path();
    write(
        d,
        "oct.json",
        r#"{"maximal_faces":[[0,2,4],[0,2,5],[0,3,4],[0,3,5],[1,2,4],[1,2,5],[1,3,4],[1,3,5]]}"#,
    );
    let o = voronoi(&["shell", "--complex", "oct.json", "--budget", "10_000", "--order", "order.json"], d);
    assert!(o.status.success());
    assert_eq!(stdout_json(&o)["verdict"], "sphere");
    let order: Value = serde_json::from_str(&std::fs::read_to_string(d.join("order.json")).unwrap()).unwrap();
    assert_eq!(order["order"].as_array().unwrap().len(), 8);
    write(d, "two.json", r#"{"maximal_faces":[[0,1,2],[3,4,5]]}"#);
    assert_eq!(stdout_json(&voronoi(&["shell", "--complex", "two.json"], d))["verdict"], "not-shellable");
    assert_eq!(voronoi(&["shell", "--complex", "oct.json", "--budget", "0"], d).status.code(), Some(2));
}

#[test]
fn usage_errors_exit_two() {
    let dir = tempfile::tempdir().unwrap();
    assert_eq!(voronoi(&["frobnicate"], dir.path()).status.code(), Some(2));
    assert_eq!(voronoi(&["building"], dir.path()).status.code(), Some(2));
    write(dir.path(), "x.json", r#"{"neither":1}"#);
    assert_eq!(voronoi(&["homology", "--complex", "x.json"], dir.path()).status.code(), Some(2));
}

#[test]
fn repeated_invocations_are_identical() {
    let dir = tempfile::tempdir().unwrap();
    let d = dir.path();
    for args in [
        &["building", "--n", "5"][..],
        &["sp4", "verify"],
        &["sl2", "--level", "7"],
        &["perfect", "enumerate", "--n", "4"],
    ] {
        let a = voronoi(args, d);
        let b = voronoi(args, d);
        let c = voronoi(&[&["--sequential"], args].concat(), d);
        assert_eq!(a.stdout, b.stdout, "{args:?}");
        assert_eq!(a.stdout, c.stdout, "{args:?}");
    }
}
