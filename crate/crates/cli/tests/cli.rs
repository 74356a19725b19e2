use std::io::Write;
use std::process::{Command, Output, Stdio};

use serde_json::{json, Value};

fn lagfib(args: &[&str], stdin: Option<&str>) -> Output {
    let mut child = Command::new(env!("CARGO_BIN_EXE_lagfib"))
        .args(args)
        .stdin(Stdio::piped())
        .stdout(Stdio::piped())
        .stderr(Stdio::piped())
        .spawn()
        .unwrap();
    let mut pipe = child.stdin.take().unwrap();
    pipe.write_all(stdin.unwrap_or("").as_bytes()).unwrap();
    drop(pipe);
    child.wait_with_output().unwrap()
}

fn json_of(out: &Output) -> Value {
    serde_json::from_slice(&out.stdout).unwrap_or_else(|e| panic!("{e}: {}", String::from_utf8_lossy(&out.stdout)))
}

fn ok(args: &[&str], stdin: Option<&str>) -> Value {
    let out = lagfib(args, stdin);
    assert!(out.status.success(), "{args:?}: {}", String::from_utf8_lossy(&out.stderr));
    json_of(&out)
}

const K2_M3: [&str; 10] = ["--series", "K2", "--m", "3", "--delta", "0", "--x", "1", "--y", "1"];

fn with<'a>(cmd: &'a str, rest: &[&'a str]) -> Vec<&'a str> {
    std::iter::once(cmd).chain(rest.iter().copied()).collect()
}

#[test]
fn klein_cohomology_has_torsion_two_and_three() {
    let v = ok(&with("cohomology", &K2_M3), None);
    assert_eq!(v["rank"], 0);
    assert_eq!(v["torsion"], json!([2, 3]));
    assert_eq!(v["invariant_factors"], json!([6]));
    assert_eq!(v["twisting"]["ambient"], "trivial");
}

#[test]
fn klein_enumeration_lists_six_fibrations_that_verify() {
    let out = lagfib(&with("enumerate", &K2_M3), None);
    let specs = json_of(&out);
    assert_eq!(specs.as_array().unwrap().len(), 6);
    let reports = ok(&["verify"], Some(&String::from_utf8(out.stdout).unwrap()));
    for r in reports.as_array().unwrap() {
        assert!(r.as_array().unwrap().iter().all(|c| c["pass"] == true), "{r}");
    }
}

#[test]
fn empty_generator_list_is_the_plane() {
    assert_eq!(ok(&["normalize", "--lattice-only"], Some("[]")), json!({"series": "R2"}));
    assert_eq!(ok(&["normalize", "--json", "[]"], None)["lattice"], json!({"series": "R2"}));
}

#[test]
fn normalize_reads_generators_from_a_file() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("gens.json");
    // b = ((1,0;0,-1),(1,0)) and a = ((1,2;0,1),(1,1))
    let gens = r#"[{"linear":[[1,0],[0,-1]],"translation":["1","0"]},{"linear":[[1,2],[0,1]],"translation":["1","1"]}]"#;
    std::fs::write(&path, gens).unwrap();
    let v = ok(&["normalize", "--input", path.to_str().unwrap()], None);
    assert_eq!(v["lattice"]["series"], "K2");
    assert_eq!(v["words"].as_array().unwrap().len(), 2);
}

#[test]
fn built_records_pass_verify_over_every_series() {
    let cases: Vec<Vec<&str>> = vec![
        vec!["--series", "K2", "--m", "2", "--delta", "1", "--x", "1/2", "--y", "3", "--m0", "1", "--n0", "-2"],
        vec!["--series", "T2nyx", "--n", "3", "--x", "2", "--y", "1/3", "--m0", "-1", "--lambda", "5/7"],
        vec!["--series", "T2uvwz", "--u", "1", "--v", "1/2", "--w", "-1", "--z", "2", "--n0", "1"],
        vec!["--series", "R2"],
        vec!["--series", "C2uv", "--u", "1", "--v", "-3"],
        vec!["--series", "C2ny", "--n", "2", "--y", "1"],
        vec!["--series", "M2", "--delta", "1", "--x", "1/2"],
        vec!["--t3"],
    ];
    for args in cases {
        let built = lagfib(&with("build", &args), None);
        assert!(built.status.success(), "{args:?}");
        let report = ok(&["verify"], Some(&String::from_utf8(built.stdout).unwrap()));
        assert!(report.as_array().unwrap().iter().all(|c| c["pass"] == true), "{args:?}: {report}");
    }
}

#[test]
fn failing_check_exits_with_three() {
    let built = ok(&["build", "--series", "T2nyx", "--n", "1", "--x", "1", "--y", "1"], None);
    let mut spec = built.clone();
    spec["maps"]["h"]["linear"][2][1] = json!("1");
    let out = lagfib(&["verify", "--json", &spec.to_string()], None);
    assert_eq!(out.status.code(), Some(3));
    let report = json_of(&out);
    let failed: Vec<&str> =
        report.as_array().unwrap().iter().filter(|c| c["pass"] == false).map(|c| c["check"].as_str().unwrap()).collect();
    assert_eq!(failed, ["symplectic"]);
}

#[test]
fn parse_errors_exit_with_one() {
    for (args, stdin) in [
        (vec!["frobnicate"], None),
        (vec!["cohomology"], Some("{not json")),
        (vec!["cohomology", "--series", "K3", "--m", "1"], None),
        (vec!["cohomology", "--series", "K2", "--m", "2"], None),
    ] {
        let out = lagfib(&args, stdin);
        assert_eq!(out.status.code(), Some(1), "{args:?}");
        assert_eq!(json_of(&out)["error"]["code"], 1);
    }
}

#[test]
fn precondition_errors_exit_with_two() {
    let cases: [(Vec<&str>, Option<&str>, &str); 5] = [
        (vec!["cohomology", "--series", "T2nyx", "--n", "1", "--x", "pi", "--y", "1"], None, "not_rational"),
        (vec!["cohomology"], Some(r#"{"series":"T2nyx","params":{"n":1,"y":0.5,"x":1}}"#), "not_rational"),
        (vec!["cohomology", "--series", "K2", "--m", "1", "--delta", "1", "--x", "1", "--y", "1"], None, "invalid_parameters"),
        (vec!["build", "--series", "K2", "--m", "2", "--delta", "0", "--x", "1", "--y", "1", "--lambda", "1"], None, "invalid_parameters"),
        (vec!["normalize"], Some(r#"[{"linear":[[0,-1],[1,0]],"translation":["0","0"]}]"#), "not_free_action"),
    ];
    for (args, stdin, kind) in cases {
        let out = lagfib(&args, stdin);
        assert_eq!(out.status.code(), Some(2), "{args:?}: {}", String::from_utf8_lossy(&out.stdout));
        assert_eq!(json_of(&out)["error"]["kind"], kind, "{args:?}");
    }
}

#[test]
fn output_is_byte_stable() {
    for args in [with("enumerate", &K2_M3), with("cohomology", &K2_M3), vec!["build", "--t3", "--pretty"]] {
        let a = lagfib(&args, None).stdout;
        let b = lagfib(&args, None).stdout;
        assert_eq!(a, b, "{args:?}");
    }
}

#[test]
fn isomorphism_of_translation_tori() {
    let t = |u: i64, v: i64, w: i64, z: i64| json!({"series": "T2uvwz", "params": {"u": u, "v": v, "w": w, "z": z}});
    let yes = ok(&["isomorphic", "--json", &json!([t(1, 0, 0, 2), t(2, 0, 1, 1)]).to_string()], None);
    assert_eq!(yes["isomorphic"], true);
    let no = ok(&["isomorphic", "--json", &json!([t(1, 0, 0, 4), t(2, 0, 0, 2)]).to_string()], None);
    assert_eq!(no, json!({"isomorphic": false, "witness": null}));
}

#[test]
fn render_domain_writes_svg() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("domain.svg");
    let mut args = with("render-domain", &K2_M3);
    args.extend(["--width", "320", "--height", "240", "--out", path.to_str().unwrap()]);
    let out = lagfib(&args, None);
    assert!(out.status.success());
    assert!(out.stdout.is_empty());
    let svg = std::fs::read_to_string(&path).unwrap();
    assert!(svg.starts_with(r#"<svg xmlns="http://www.w3.org/2000/svg" width="320" height="240""#));
    assert!(svg.contains("<polygon"));
}
