use std::path::PathBuf;

use dgcyl::cli::run_with;

fn data(name: &str) -> String {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("data").join(name).display().to_string()
}

fn run(args: &[&str]) -> (i32, String, String) {
    let mut out = Vec::new();
    let mut err = Vec::new();
    let code = run_with(std::iter::once("dgcyl").chain(args.iter().copied()), &mut out, &mut err);
    (code, String::from_utf8(out).unwrap(), String::from_utf8(err).unwrap())
}

fn report(args: &[&str]) -> (i32, serde_json::Value, String) {
    let mut full = vec!["--format", "json"];
    full.extend_from_slice(args);
    let (code, out, _) = run(&full);
    let v = serde_json::from_str(&out).expect("json report");
    (code, v, out)
}

#[test]
fn linf_check_passes() {
    let (code, v, _) = report(&["cyl", "linf-check", "--trials", "50", "--seed", "7", "--max-arity", "3"]);
    assert_eq!(code, 0);
    assert_eq!(v["passed"], true);
    assert_eq!(v["schema"], "dgcyl-report/1");
}

#[test]
fn two_vertex_trees_with_three_leaves() {
    let (code, v, _) = report(&["trees", "enumerate", "--n", "3", "--two-vertex"]);
    assert_eq!(code, 0);
    assert_eq!(v["result"]["count"], 8);
    let (_, text, _) = run(&["trees", "enumerate", "--n", "3", "--two-vertex"]);
    assert!(text.starts_with("8 two-vertex classes"));
}

#[test]
fn mapping_cylinder_suite_passes() {
    let (code, _, _) = run(&["mapcyl", "check", "--trials", "100", "--seed", "1"]);
    assert_eq!(code, 0);
}

#[test]
fn explicit_mapping_cylinder_instance() {
    let (code, v, _) = report(&["mapcyl", "check", "--input", &data("lemma.json")]);
    assert_eq!(code, 0);
    assert_eq!(v["result"]["verdict"], "pass");
}

#[test]
fn reports_are_reproducible() {
    let args = ["cyl", "linf-check", "--trials", "5", "--seed", "3", "--max-arity", "3"];
    let (_, _, a) = report(&args);
    let (_, _, b) = report(&args);
    assert_eq!(a, b);
    let (_, other, _) = report(&["cyl", "linf-check", "--trials", "5", "--seed", "4", "--max-arity", "3"]);
    assert_ne!(serde_json::from_str::<serde_json::Value>(&a).unwrap()["input_sha256"], other["input_sha256"]);
}

#[test]
fn report_file_matches_stdout() {
    let dir = std::env::temp_dir().join(format!("dgcyl-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let (code, _, out) = report(&["--report", dir.to_str().unwrap(), "mc", "check", &data("sl2.json")]);
    assert_eq!(code, 0);
    assert_eq!(std::fs::read_to_string(dir.join("mc-check.json")).unwrap(), out);
    std::fs::remove_dir_all(&dir).unwrap();
}

#[test]
fn scenario_commands() {
    let (code, v, _) = report(&["cyl", "mc-check", &data("dg_lie_to_line.json")]);
    assert_eq!((code, v["result"]["mc"].clone()), (0, serde_json::json!(true)));
    let (code, v, _) = report(&["cyl", "zigzag", &data("dg_lie_to_line.json"), "--max-arity", "2"]);
    assert_eq!(code, 0);
    assert_eq!(v["result"]["verdict"], "pass");
    let (code, v, _) = report(&["cyl", "zigzag", &data("abelian_file_cooperad.json")]);
    assert_eq!((code, v["passed"].clone()), (0, serde_json::json!(true)));
}

#[test]
fn check_failures_exit_one_with_a_witness() {
    let (code, v, _) = report(&["cyl", "mc-check", &data("not_a_morphism.json")]);
    assert_eq!(code, 1);
    assert_eq!(v["result"]["morphism"], false);
    assert!(v["result"]["witness"].is_string());
    let (code, v, _) = report(&["mc", "check", &data("not_jacobi.json")]);
    assert_eq!(code, 1);
    assert!(v["result"]["axiom_defect"].as_str().unwrap().contains("Jacobi"));
}

#[test]
fn malformed_input_exits_two() {
    let dir = std::env::temp_dir().join(format!("dgcyl-bad-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let bad = dir.join("bad.json");
    std::fs::write(&bad, r#"{"kind": "dgla", "basis": [{"label": "x"}]}"#).unwrap();
    let (code, out, err) = run(&["mc", "check", bad.to_str().unwrap()]);
    assert_eq!(code, 2);
    assert!(out.is_empty() && !err.is_empty());
    std::fs::write(&bad, r#"{"cooperad": "cocom", "max_arity": 2}"#).unwrap();
    assert_eq!(run(&["cyl", "zigzag", bad.to_str().unwrap()]).0, 2);
    assert_eq!(run(&["mc", "check", dir.join("missing.json").to_str().unwrap()]).0, 2);
    assert_eq!(run(&["trees", "canonicalize", "[1, [2, 2]]"]).0, 2);
    assert_eq!(run(&["nonsense"]).0, 2);
    std::fs::remove_dir_all(&dir).unwrap();
}

#[test]
fn tree_commands() {
    let (code, v, _) = report(&["trees", "insert", "[1, [2, 3]]", "--j", "1", "[2, [1]]"]);
    assert_eq!(code, 0);
    assert_eq!(v["result"]["tree"], serde_json::json!([[2, 3], [1]]));
    assert_eq!(run(&["trees", "insert", "[1, [2, 3]]", "--j", "1", "[1, 2, 3]"]).0, 2);
    let (code, v, _) = report(&["trees", "canonicalize", "[[3, 1], 2]"]);
    assert_eq!(code, 0);
    assert_eq!(v["result"]["idempotent"], true);
    let (code, art, _) = run(&["--format", "ascii-art", "trees", "enumerate", "--n", "2", "--two-vertex"]);
    assert_eq!(code, 0);
    assert!(art.lines().count() > 4);
    assert_eq!(run(&["trees", "verify", "--n", "4"]).0, 0);
}

#[test]
fn cooperad_and_def_commands() {
    assert_eq!(run(&["cooperad", "validate", &data("cocom3.json")]).0, 0);
    assert_eq!(run(&["cooperad", "validate", "coass", "--max-arity", "3"]).0, 0);
    let (code, v, _) = report(&["def", "cohomology", &data("dg_lie.json"), "--max-arity", "2"]);
    assert_eq!(code, 0);
    assert!(v["result"]["ranks"].is_object());
    assert_eq!(run(&["def", "build", &data("graded_assoc.json"), "--max-arity", "2"]).0, 0);
}
