use std::path::PathBuf;
use std::process::{Command, Output};

use serde_json::{json, Value};

fn fixture(name: &str) -> String {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("tests/fixtures").join(name).display().to_string()
}

fn run_with(env: &[(&str, &str)], args: &[&str]) -> Output {
    let mut cmd = Command::new(env!("CARGO_BIN_EXE_thomason"));
    cmd.args(args);
    for (k, v) in env {
        cmd.env(k, v);
    }
    cmd.output().expect("binary runs")
}

fn run(args: &[&str]) -> Output {
    run_with(&[], args)
}

fn ok(args: &[&str]) -> Value {
    let out = run(args);
    assert!(out.status.success(), "{args:?}: {}", String::from_utf8_lossy(&out.stderr));
    serde_json::from_slice(&out.stdout).expect("stdout is JSON")
}

fn fails(args: &[&str], code: i32) -> Value {
    let out = run(args);
    assert_eq!(out.status.code(), Some(code), "{args:?}: {}", String::from_utf8_lossy(&out.stdout));
    serde_json::from_slice(&out.stderr).expect("diagnostic is JSON")
}

#[test]
fn group_cohomology_of_z2() {
    let (c, t) = (fixture("bz2.json"), fixture("const_Z.json"));
    let v = ok(&["cohomology", "--category", &c, "--coeff", &t, "--ring", "Z", "--degree", "2"]);
    assert_eq!(v, json!({"degree": 2, "free_rank": 0, "torsion": [2]}));
    let v = ok(&["cohomology", "--category", &c, "--coeff", &t, "--degree", "4", "--normalized"]);
    assert_eq!(v, json!({"degree": 4, "free_rank": 0, "torsion": [2]}));
    let v = ok(&["cohomology", "--category", &c, "--coeff", &t, "--ring", "Q", "--degree", "2"]);
    assert_eq!(v, json!({"degree": 2, "free_rank": 0, "torsion": []}));
    let t = fixture("const_Z_contra.json");
    let v = ok(&["homology", "--category", &c, "--coeff", &t, "--degree", "1"]);
    assert_eq!(v, json!({"degree": 1, "free_rank": 0, "torsion": [2]}));
    let v = ok(&["cohomology", "--homology", "--category", &c, "--coeff", &t, "--degree", "2"]);
    assert_eq!(v, json!({"degree": 2, "free_rank": 0, "torsion": []}));
}

#[test]
fn nerve_counts() {
    let c = fixture("circle_poset.json");
    assert_eq!(ok(&["nerve", "--category", &c, "--dim", "2"])["count"], 12);
    // a height-one poset has no nondegenerate 2-chains; its four strict relations are the 1-simplices
    assert_eq!(ok(&["nerve", "--category", &c, "--dim", "2", "--nondegenerate"])["count"], 0);
    let v = ok(&["nerve", "--category", &c, "--dim", "1", "--nondegenerate", "--list"]);
    assert_eq!(v["simplices"], json!(["a<c", "a<d", "b<c", "b<d"]));
}

#[test]
fn broken_category_is_a_user_error() {
    let d = fails(&["validate", "--category", &fixture("broken.json")], 1);
    assert_eq!(d["error"], "NonAssociative");
    assert!(d["message"].as_str().unwrap().contains("(f, f, f)"), "{d}");
    assert!(d["context"].as_str().unwrap().ends_with("broken.json"));
}

#[test]
fn user_errors_exit_with_one() {
    let (c, bz2) = (fixture("interval1.json"), fixture("bz2.json"));
    let d = fails(&["cohomology", "--category", &c, "--coeff", &fixture("bad_coefficient.json"), "--degree", "0"], 1);
    assert_eq!(d["error"], "Parse");
    let d = fails(&["homology", "--category", &bz2, "--coeff", &fixture("const_Z.json"), "--degree", "0"], 1);
    assert_eq!(d["error"], "VarianceMismatch");
    let d = fails(&["nerve", "--category", &fixture("missing.json"), "--dim", "1"], 1);
    assert_eq!(d["error"], "Parse");
    let d = fails(&["compare-bw", "--category", &bz2, "--coeff", &fixture("const_Z.json")], 1);
    assert_eq!(d["error"], "UnsupportedCoefficientKind");
    assert_eq!(run(&["validate"]).status.code(), Some(1));
    let out = run_with(&[("THOMASON_THREADS", "zero")], &["nerve", "--category", &c, "--dim", "1"]);
    assert_eq!(out.status.code(), Some(1));
}

#[test]
fn validate_output_round_trips() {
    let dir = std::env::temp_dir().join(format!("thomason-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let c = fixture("circle_poset.json");
    let first = ok(&["validate", "--category", &c, "--coeff", &fixture("twisted_circle.json")]);
    let cat = dir.join("cat.json");
    let coeff = dir.join("coeff.json");
    std::fs::write(&cat, first["category"].to_string()).unwrap();
    std::fs::write(&coeff, first["coeff"].to_string()).unwrap();
    let second = ok(&["validate", "--category", cat.to_str().unwrap(), "--coeff", coeff.to_str().unwrap()]);
    assert_eq!(first, second);
    let f = ok(&["validate", "--functor", &fixture("torus_projection.json")]);
    std::fs::write(dir.join("u.json"), f["functor"].to_string()).unwrap();
    assert_eq!(ok(&["validate", "--functor", dir.join("u.json").to_str().unwrap()]), f);
    let g = ok(&["validate", "--category", &fixture("interval1.json"), "--pseudofunctor", &fixture("vertex_fibration.json")]);
    std::fs::write(dir.join("g.json"), g["pseudofunctor"].to_string()).unwrap();
    let again = ok(&["validate", "--category", &fixture("interval1.json"), "--pseudofunctor", dir.join("g.json").to_str().unwrap()]);
    assert_eq!(again, g);
    std::fs::remove_dir_all(&dir).unwrap();
}

#[test]
fn output_is_deterministic() {
    let args = ["leray-e2", "--functor", &fixture("torus_projection.json"), "--coeff", &fixture("const_Q.json"), "--pmax", "2", "--qmax", "1"];
    let one = run_with(&[("THOMASON_THREADS", "1")], &args);
    let four = run_with(&[("THOMASON_THREADS", "4")], &args);
    assert!(one.status.success());
    assert_eq!(one.stdout, four.stdout);
    assert_eq!(run(&args).stdout, one.stdout);
}

#[test]
fn baues_wirsching_comparison() {
    let v = ok(&["compare-bw", "--category", &fixture("bz2.json"), "--coeff", &fixture("bw_z2.json"), "--top", "4"]);
    assert_eq!(v["equal"], true);
    assert!(v["degrees"].as_array().unwrap().iter().all(|d| d["equal"] == true));
    // constant values on every arrow: the group cohomology of Z/2 again
    let torsion: Vec<Value> = v["cohomology"].as_array().unwrap().iter().map(|g| g["torsion"].clone()).collect();
    assert_eq!(torsion, vec![json!([]), json!([]), json!([2]), json!([])]);
}

#[test]
fn limits_of_the_twisted_circle() {
    let (c, t) = (fixture("circle_poset.json"), fixture("twisted_circle.json"));
    let v = ok(&["limit", "--category", &c, "--coeff", &t]);
    assert_eq!(v, json!({"kind": "lim", "value": {"free_rank": 0, "torsion": []}, "equals_degree_zero": true}));
    assert_eq!(ok(&["cohomology", "--category", &c, "--coeff", &t, "--degree", "1"])["torsion"], json!([2]));
}

#[test]
fn torus_pages() {
    let u = fixture("torus_projection.json");
    for (coeff, extra) in [("const_Q.json", None), ("const_Z_contra.json", Some("--homology"))] {
        let t = fixture(coeff);
        let mut args = vec!["leray-e2", "--functor", &u, "--coeff", &t, "--pmax", "1", "--qmax", "1"];
        args.extend(extra);
        let v = ok(&args);
        let dims: Vec<Vec<u64>> = v["page"]["grid"]
            .as_array()
            .unwrap()
            .iter()
            .map(|col| col.as_array().unwrap().iter().map(|g| g["free_rank"].as_u64().unwrap()).collect())
            .collect();
        assert_eq!(dims, vec![vec![1, 1], vec![1, 1]]);
        let abutment: Vec<u64> = v["page"]["abutment"].as_array().unwrap().iter().map(|g| g["free_rank"].as_u64().unwrap()).collect();
        assert_eq!(abutment, vec![1, 2, 1]);
        assert_eq!(v["check"]["equality_degrees"], json!([0, 1, 2]));
    }
    let text = run(&["--format", "text", "leray-e2", "--functor", &u, "--coeff", &fixture("const_Q.json"), "--pmax", "1", "--qmax", "1"]);
    assert!(String::from_utf8(text.stdout).unwrap().contains("abutment: Q, Q^2, Q"));
}

#[test]
fn fibration_reports() {
    let (base, g) = (fixture("interval1.json"), fixture("vertex_fibration.json"));
    let v = ok(&["fibration", "--base", &base, "--pseudofunctor", &g, "check"]);
    assert_eq!(v["total"], json!({"objects": 3, "morphisms": 5}));
    assert_eq!(v["check"]["result"], "fibration");
    assert!(v["fibers"].as_array().unwrap().iter().all(|f| f["coreflective"] == true));
    let v = ok(&["fibration", "--base", &base, "--pseudofunctor", &g, "locality", "--qmax", "2"]);
    assert_eq!(v["all_isomorphisms"], true);
    assert_eq!(v["reports"].as_array().unwrap().len(), 6);
    let (p, torus) = (fixture("circle_poset.json"), fixture("torus_fibration.json"));
    let v = ok(&["fibration", "--base", &p, "--pseudofunctor", &torus, "e2", "--pmax", "1", "--qmax", "1"]);
    let abutment: Vec<u64> = v["page"]["abutment"].as_array().unwrap().iter().map(|g| g["free_rank"].as_u64().unwrap()).collect();
    assert_eq!(abutment, vec![1, 2, 1]);
    assert_eq!(v["check"]["bound_holds"], true);
    let v = ok(&["fibration", "--base", &p, "--pseudofunctor", &torus, "e2", "--homology", "--pmax", "1", "--qmax", "1"]);
    assert_eq!(v["page"]["side"], "homology");
    // the twisted local system on the base kills the base direction in degree 0
    let v = ok(&["fibration", "--base", &p, "--pseudofunctor", &torus, "e2", "--coeff", &fixture("twisted_circle.json"), "--pmax", "1", "--qmax", "1"]);
    assert_eq!(v["page"]["grid"][0][0]["free_rank"], 0);
}

#[test]
fn verify_passes() {
    let v = ok(&["verify", "--seed", "5"]);
    assert_eq!(v["passed"], true);
    assert_eq!(v["criteria"].as_array().unwrap().len(), 10);
    let text = run(&["--format", "text", "verify", "--seed", "5"]);
    let text = String::from_utf8(text.stdout).unwrap();
    assert_eq!(text.lines().filter(|l| l.starts_with("PASS")).count(), 10);
}
