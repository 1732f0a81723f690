//! End-to-end tests of the binary: JSON shape, determinism, error paths.

use std::process::{Command, Output};

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_newton-moduli"))
}

fn run(args: &[&str]) -> Output {
    bin().args(args).output().expect("binary runs")
}

fn json_of(out: &Output) -> serde_json::Value {
    serde_json::from_slice(&out.stdout).expect("valid JSON on stdout")
}

#[test]
fn classify_cubic_boundary_divisor() {
    let out = run(&["classify", "--roots", "0,0,inf"]);
    assert!(out.status.success());
    let v = json_of(&out);
    assert_eq!(v["schema"], 1);
    assert_eq!(v["classification"]["verdict"], "strictly_semistable");
}

#[test]
fn classify_family_emits_vertex_table() {
    let out = run(&["classify", "--roots", "0,1,t"]);
    assert!(out.status.success());
    let v = json_of(&out);
    assert_eq!(v["vertices"].as_array().unwrap().len(), 2);
}

#[test]
fn git_class_of_phi3_inputs() {
    for roots in ["0,0,inf", "0,0,1", "0,1,inf"] {
        let out = run(&["git-class", "--roots", roots]);
        assert!(out.status.success());
        let v = json_of(&out);
        assert_eq!(v["class"]["kind"], "strictly_semistable");
        assert_eq!(v["class"]["degree"], 3);
    }
}

#[test]
fn iterate_reports_constant_verdicts() {
    let out = run(&["iterate", "--roots", "0,0,inf", "-n", "2"]);
    assert!(out.status.success());
    let v = json_of(&out);
    let steps = v["steps"].as_array().unwrap();
    assert_eq!(steps.len(), 2);
    for s in steps {
        assert_eq!(s["classification"]["verdict"], "strictly_semistable");
    }
    assert_eq!(v["final_pair"]["numerator"], "2*X^5*Y^4");
}

#[test]
fn iterate_budget_error_is_machine_readable() {
    let out = run(&["iterate", "--roots", "0,0,inf", "-n", "9"]);
    assert!(!out.status.success());
    let v = json_of(&out);
    assert_eq!(v["error"]["code"], "budget-exceeded");
}

#[test]
fn measure_reports_exact_tail() {
    let out = run(&["measure", "--roots", "0,0,0,inf,inf", "--levels", "3"]);
    assert!(out.status.success());
    let v = json_of(&out);
    assert_eq!(v["tail_bound"], "1/625");
    assert_eq!(v["total_mass"], "624/625");
}

#[test]
fn measure_rejects_nondegenerate_maps() {
    let out = run(&["measure", "--roots", "0,1,2"]);
    assert!(!out.status.success());
    assert_eq!(json_of(&out)["error"]["code"], "non-atomic-measure");
}

#[test]
fn barycenter_boundary_descriptor() {
    let out = run(&["barycenter", "--roots", "0,0,inf"]);
    assert!(out.status.success());
    let v = json_of(&out);
    assert_eq!(v["class"], "half_atoms");
    assert_eq!(v["description"], "delta_0/2 + delta_inf/2");
}

#[test]
fn barycenter_stable_quartic() {
    let out = run(&["barycenter", "--roots", "0,0,1,2", "--levels", "7"]);
    assert!(out.status.success());
    let v = json_of(&out);
    assert_eq!(v["class"], "barycentered");
    assert!(v["residual"].as_f64().unwrap() < 1e-8);
    assert!(!v["atoms"].as_array().unwrap().is_empty());
}

#[test]
fn tree_with_dot_output() {
    let dir = std::env::temp_dir().join("newton_moduli_cli_test");
    std::fs::create_dir_all(&dir).unwrap();
    let dot_path = dir.join("tree.dot");
    let out = run(&[
        "tree",
        "--roots",
        "0,1,t",
        "--dot",
        dot_path.to_str().unwrap(),
    ]);
    assert!(out.status.success());
    let v = json_of(&out);
    assert_eq!(v["stable_curve"]["components"], 2);
    assert_eq!(v["stable_curve"]["marks"], 4);
    assert_eq!(v["stable_curve"]["nodes"], 1);
    let dot = std::fs::read_to_string(&dot_path).unwrap();
    assert!(dot.contains("graph tree_of_spheres"));
}

#[test]
fn hss_quartic_unique_stable_vertex() {
    let out = run(&["hss", "--roots", "0,1,t^(-1),2*t^(-1)"]);
    assert!(out.status.success());
    let v = json_of(&out);
    assert_eq!(v["locus"]["kind"], "unique_stable_vertex");
    assert_eq!(v["locus"]["vertex"], "xi(0, -1)");
}

#[test]
fn kappa_matches_direct_divisor_class() {
    let through_family = run(&["kappa", "--roots", "0,1,5,t^(-1),2*t^(-1),3*t^(-1)"]);
    let direct = run(&["git-class", "--roots", "0,0,0,1,2,3"]);
    assert!(through_family.status.success() && direct.status.success());
    assert_eq!(json_of(&through_family)["class"], json_of(&direct)["class"]);
}

#[test]
fn conjugate_finds_and_refutes() {
    let out = run(&["conjugate", "0,1,1,4", "1,3,3,9"]);
    assert!(out.status.success());
    let v = json_of(&out);
    assert_eq!(v["conjugacy"]["scale"], "2");
    assert_eq!(v["conjugacy"]["offset"], "1");

    let out = run(&["conjugate", "0,0,0,1,1,2", "0,0,0,1,1,3"]);
    assert!(out.status.success());
    assert!(json_of(&out)["conjugacy"].is_null());
}

#[test]
fn json_file_input_with_marks() {
    let dir = std::env::temp_dir().join("newton_moduli_cli_test");
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join("family.json");
    std::fs::write(
        &path,
        r#"{"degree": 3, "roots": ["1", "0", "t"], "marks": [1, 0, 2]}"#,
    )
    .unwrap();
    let out = run(&["classify", path.to_str().unwrap()]);
    assert!(out.status.success());
    let v = json_of(&out);
    assert_eq!(v["family"].as_array().unwrap()[0], "0");
}

#[test]
fn outputs_are_byte_stable() {
    for args in [
        vec!["hss", "--roots", "0,1,t"],
        vec!["measure", "--roots", "0,0,inf", "--levels", "4"],
        vec!["git-class", "--roots", "0,0,1,2"],
    ] {
        let a = run(&args);
        let b = run(&args);
        assert_eq!(a.stdout, b.stdout, "nondeterministic output for {args:?}");
    }
}

#[test]
fn parse_errors_carry_positions() {
    let out = run(&["classify", "--roots", "0,1,$"]);
    assert!(!out.status.success());
    let v = json_of(&out);
    assert_eq!(v["error"]["code"], "parse-error");
    assert!(v["error"]["message"].as_str().unwrap().contains("byte"));
}

#[test]
fn all_roots_at_infinity_is_rejected() {
    let out = run(&["classify", "--roots", "inf,inf,inf"]);
    assert!(!out.status.success());
    assert_eq!(json_of(&out)["error"]["code"], "unsupported-divisor");
}
