use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use kappa::io::{self, Input};

fn data(name: &str) -> String {
    format!("{}/../../data/{name}.tangle.json", env!("CARGO_MANIFEST_DIR"))
}

fn golden(name: &str) -> String {
    std::fs::read_to_string(format!("{}/tests/golden/{name}", env!("CARGO_MANIFEST_DIR"))).unwrap()
}

fn kappa_in(dir: &Path, args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_kappa")).current_dir(dir).args(args).output().unwrap()
}

fn kappa(args: &[&str]) -> Output {
    kappa_in(&std::env::temp_dir(), args)
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn stderr(o: &Output) -> String {
    String::from_utf8(o.stderr.clone()).unwrap()
}

#[test]
fn kh_of_the_trefoil_closure() {
    let o = kappa(&["kh", &data("trefoil"), "--level", "1"]);
    assert!(o.status.success(), "{}", stderr(&o));
    let out = stdout(&o);
    assert!(out.contains(&golden("trefoil-T1.kh.tsv")), "{out}");
    assert!(out.contains("# jones\tt^-4 + t^-6 - t^-10\n"));
    assert!(out.contains("# thin\tfalse\n"));

    let o = kappa(&["kh", &data("trefoil"), "--level", "1", "--format", "json"]);
    let v: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(v["total"], 7);
    assert_eq!(v["cells"][0], serde_json::json!({"u": -7, "q": -10, "dim": 1}));
}

#[test]
fn kh_of_the_crossingless_unknot() {
    let dir = tempfile::tempdir().unwrap();
    std::fs::write(dir.path().join("u.json"), r#"{"name": "unknot", "crossings": []}"#).unwrap();
    let o = kappa_in(dir.path(), &["kh", "u.json"]);
    assert!(o.status.success());
    assert!(stdout(&o).starts_with("# kh unknot\nu\tq\tdim\n0\t0\t1\n# delta grid"));
}

#[test]
fn malformed_input_names_the_arc() {
    let dir = tempfile::tempdir().unwrap();
    std::fs::write(dir.path().join("bad.json"), r#"{"crossings": [[1, 2, 3, 7]]}"#).unwrap();
    let o = kappa_in(dir.path(), &["kh", "bad.json", "-o", "out.tsv"]);
    assert_eq!(o.status.code(), Some(2));
    assert!(stderr(&o).contains("arcs 1 2 3 7"), "{}", stderr(&o));
    assert!(!dir.path().join("out.tsv").exists());

    std::fs::write(dir.path().join("junk.json"), "{").unwrap();
    assert_eq!(kappa_in(dir.path(), &["kappa", "junk.json"]).status.code(), Some(2));
    assert_eq!(kappa(&["kappa", &data("trefoil"), "--window", "2:1"]).status.code(), Some(2));
}

#[test]
fn kappa_grids() {
    let o = kappa(&["kappa", &data("trefoil")]);
    assert!(o.status.success(), "{}", stderr(&o));
    let out = stdout(&o);
    assert!(out.starts_with(&format!("# kappa trefoil\n{}", golden("trefoil.kappa.tsv"))), "{out}");
    assert!(out.contains("# total\t4\n"));

    let o = kappa(&["kappa", &data("figure8-h1"), "--cap", "32"]);
    let out = stdout(&o);
    assert!(out.starts_with(&format!("# kappa figure8-h1\n{}", golden("figure8-h1.kappa.tsv"))), "{out}");

    let o = kappa(&["kappa", &data("unknot")]);
    assert!(stdout(&o).starts_with("# kappa unknot\n2delta\\u\n# total\t0\n"));
}

#[test]
fn kappa_json_shape() {
    let o = kappa(&["kappa", &data("trefoil"), "--format", "json"]);
    let v: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(v["total"], 4);
    let us: Vec<i64> = v["entries"].as_array().unwrap().iter().map(|e| e["u"].as_i64().unwrap()).collect();
    assert_eq!(us, vec![-5, -3, -2, 0]);
    assert!(v["entries"].as_array().unwrap().iter().all(|e| e["two_delta"] == 1 && e["dim"] == 1));
    assert_eq!(v["stabilization"]["agreements"], 3);
}

#[test]
fn output_is_deterministic() {
    for args in [vec!["kappa", "--format", "json"], vec!["kh", "--level", "3"]] {
        let mut a = args.clone();
        let f = data("trefoil");
        a.insert(1, &f);
        let x = kappa(&a);
        let y = kappa(&a);
        assert!(x.status.success());
        assert_eq!(x.stdout, y.stdout);
    }
}

#[test]
fn exit_codes_for_cap_and_stabilization() {
    let dir = tempfile::tempdir().unwrap();
    let o = kappa_in(dir.path(), &["kappa", &data("trefoil"), "--cap", "12", "-o", "k.tsv"]);
    assert_eq!(o.status.code(), Some(4));
    assert!(!dir.path().join("k.tsv").exists());

    let o = kappa_in(dir.path(), &["kappa", &data("trefoil"), "--cap", "18", "-o", "k.tsv"]);
    assert_eq!(o.status.code(), Some(3));
    assert!(!dir.path().join("k.tsv").exists());
    let partial = std::fs::read_to_string(dir.path().join("k.tsv.unstabilized.json")).unwrap();
    let v: serde_json::Value = serde_json::from_str(&partial).unwrap();
    assert_eq!(v["status"], "unstabilized");

    let o = kappa_in(dir.path(), &["kappa", &data("trefoil"), "--window", "-2:2"]);
    assert_eq!(o.status.code(), Some(3));
    assert!(dir.path().join("trefoil.unstabilized.json").exists());
}

#[test]
fn fixed_window() {
    let o = kappa(&["kappa", &data("trefoil"), "--window", "-8:8"]);
    assert!(o.status.success(), "{}", stderr(&o));
    assert!(stdout(&o).contains(&golden("trefoil.kappa.tsv")));
}

#[test]
fn mirror_checks() {
    let o = kappa(&["mirror-check", &data("trefoil")]);
    assert!(stdout(&o).contains("verdict\tOBSTRUCTED\n"));
    let o = kappa(&["mirror-check", &data("unknot")]);
    assert!(stdout(&o).contains("verdict\tSILENT\n"));
    let o = kappa(&["mirror-check", &data("figure8-h1"), &data("figure8-h2"), "--cap", "32"]);
    assert!(stdout(&o).contains("verdict\tSILENT\n"), "{}", stderr(&o));
}

#[test]
fn closure_round_trips() {
    let dir = tempfile::tempdir().unwrap();
    let o = kappa_in(dir.path(), &["closure", &data("trefoil"), "--level", "2", "-o", "t2.json"]);
    assert!(o.status.success());
    let from_file = kappa_in(dir.path(), &["kh", "t2.json"]);
    let direct = kappa(&["kh", &data("trefoil"), "--level", "2"]);
    let body = |o: &Output| stdout(o).split_once('\n').unwrap().1.to_string();
    assert_eq!(body(&from_file), body(&direct));
}

#[test]
fn data_files_are_canonical() {
    for name in ["unknot", "trefoil", "figure8-h1", "figure8-h2", "5_1", "8_19"] {
        let path = data(name);
        let text = std::fs::read_to_string(&path).unwrap();
        let Input::Tangle(t) = io::read(&path).unwrap() else { panic!("{name} is not a tangle") };
        assert_eq!(io::tangle_to_json(&t), text, "{name}");
        let r = t.validate().unwrap();
        assert!(r.planar && r.braid_like && r.closed_components == 0, "{name}");
    }
}

fn copy_data(to: &Path) -> PathBuf {
    let d = to.join("data");
    std::fs::create_dir(&d).unwrap();
    for name in ["unknot", "trefoil", "figure8-h1", "figure8-h2", "5_1", "8_19"] {
        std::fs::copy(data(name), d.join(format!("{name}.tangle.json"))).unwrap();
    }
    d
}

#[test]
fn verify_passes_on_the_dataset() {
    let dir = tempfile::tempdir().unwrap();
    copy_data(dir.path());
    let o = kappa_in(dir.path(), &["verify"]);
    let out = stdout(&o);
    assert!(o.status.success(), "{out}");
    assert_eq!(out.lines().filter(|l| l.starts_with("PASS")).count(), 12);

    let o = kappa_in(dir.path(), &["verify", "--soft-only"]);
    let out = stdout(&o);
    assert!(o.status.success());
    assert_eq!(out.lines().count(), 2, "{out}");
    assert!(out.starts_with("PASS 12 soft diagnostics"));
}

#[test]
fn verify_reports_a_corrupted_trefoil() {
    let dir = tempfile::tempdir().unwrap();
    let d = copy_data(dir.path());
    let path = d.join("trefoil.tangle.json");
    // Flip the first crossing: this changes its sign.
    let text = std::fs::read_to_string(&path).unwrap().replacen("[1, 5, 7, 8]", "[5, 7, 8, 1]", 1);
    std::fs::write(&path, text).unwrap();
    let o = kappa_in(dir.path(), &["verify", "--data", "data"]);
    assert_eq!(o.status.code(), Some(1));
    let out = stdout(&o);
    let first = out.lines().next().unwrap();
    assert!(first.starts_with("FAIL  1 Kh anchor: cell (u,q) = ("), "{out}");
    assert!(out.contains("hard checks failed"));
}
