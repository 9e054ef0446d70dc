//! Exit-code and I/O contracts of the command-line surface:
//! 0 = pass, 1 = mathematical failure, 2 = input error.

use std::process::Command;

fn run(args: &[&str]) -> (String, String, Option<i32>) {
    let output = Command::new(env!("CARGO_BIN_EXE_cartan-tableaux"))
        .args(args)
        .output()
        .expect("binary runs");
    (
        String::from_utf8_lossy(&output.stdout).into_owned(),
        String::from_utf8_lossy(&output.stderr).into_owned(),
        output.status.code(),
    )
}

fn temp_file(name: &str, contents: &str) -> String {
    let path = std::env::temp_dir().join(name);
    std::fs::write(&path, contents).unwrap();
    path.to_str().unwrap().to_string()
}

#[test]
fn passing_checks_exit_zero() {
    let (stdout, _, code) = run(&["check-lie", "catalog:sl4_wilczynski"]);
    assert_eq!(code, Some(0));
    assert!(stdout.contains("jacobi: pass"));
    let (_, _, code) = run(&["tableau", "check", "catalog:fubini_cartan"]);
    assert_eq!(code, Some(0));
}

#[test]
fn jacobi_violation_exits_one_and_names_the_triple() {
    let path = temp_file(
        "ct_bad_lie.json",
        r#"{"dim": 3, "basis": ["e","h","f"],
            "brackets": [[0,1,0,"-2"],[0,2,1,"1"],[0,2,0,"1"],[1,2,2,"-2"]]}"#,
    );
    let (stdout, _, code) = run(&["check-lie", &path]);
    assert_eq!(code, Some(1));
    assert!(stdout.contains("violated at basis triple (0, 1, 2)"), "{stdout}");
}

#[test]
fn unparseable_input_exits_two() {
    let path = temp_file("ct_broken.json", "{ not json");
    let (_, stderr, code) = run(&["check-lie", &path]);
    assert_eq!(code, Some(2));
    assert!(!stderr.is_empty());
    // Unknown catalog names are input errors too.
    let (_, _, code) = run(&["tableau", "characters", "catalog:no_such_entry"]);
    assert_eq!(code, Some(2));
}

#[test]
fn corrupted_tableau_check_exits_one_with_witness() {
    // Dump the catalog tableau, corrupt one generator entry, re-check.
    let (dump, _, code) = run(&["catalog", "dump", "fubini_cartan"]);
    assert_eq!(code, Some(0));
    let mut value: serde_json::Value = serde_json::from_str(&dump).unwrap();
    // generators[4] is the r1 generator; give it a spurious B5 (x) alpha1.
    value["generators"][4][4][0] = serde_json::json!("1");
    let path = temp_file("ct_corrupted_tableau.json", &value.to_string());
    let (stdout, _, code) = run(&["tableau", "check", &path]);
    assert_eq!(code, Some(1));
    assert!(stdout.contains("condition 1 (curvature): FAIL"), "{stdout}");
    assert!(stdout.contains("gamma"), "{stdout}");
}

#[test]
fn non_maximal_abelian_build_exits_one_with_extension_witness() {
    let (dump, _, code) = run(&["catalog", "dump", "sl3_so3"]);
    assert_eq!(code, Some(0));
    let mut value: serde_json::Value = serde_json::from_str(&dump).unwrap();
    // Shrink a to a single diagonal direction: extends to the full diagonal.
    value["a"] = serde_json::json!([["1", "3", "0", "0", "0", "0", "0", "0"]]);
    let path = temp_file("ct_nonmax_a.json", &value.to_string());
    let (_, stderr, code) = run(&["cartan", "build", &path]);
    assert_eq!(code, Some(1));
    assert!(stderr.contains("not maximal abelian"), "{stderr}");
    assert!(stderr.contains("witness"), "{stderr}");
}

#[test]
fn missing_abelian_subspace_is_an_input_error() {
    let (dump, _, _) = run(&["catalog", "dump", "sl3_so3"]);
    let mut value: serde_json::Value = serde_json::from_str(&dump).unwrap();
    value.as_object_mut().unwrap().remove("a");
    let path = temp_file("ct_no_a.json", &value.to_string());
    let (_, stderr, code) = run(&["cartan", "build", &path]);
    assert_eq!(code, Some(2));
    assert!(stderr.contains("maximal abelian"), "{stderr}");
}

#[test]
fn out_flag_writes_the_report_to_a_file() {
    let out = std::env::temp_dir().join("ct_characters.json");
    let out_str = out.to_str().unwrap();
    let (stdout, _, code) = run(&[
        "tableau",
        "characters",
        "catalog:demoulin",
        "--format",
        "json",
        "--out",
        out_str,
    ]);
    assert_eq!(code, Some(0));
    assert!(stdout.is_empty());
    let written = std::fs::read_to_string(&out).unwrap();
    let value: serde_json::Value = serde_json::from_str(&written).unwrap();
    assert_eq!(value["s0"], 13);
    assert_eq!(value["characters"], serde_json::json!([4, 0]));
}

#[test]
fn exact_flags_match_randomized_results_on_the_catalog() {
    let (a, _, code_a) = run(&[
        "tableau",
        "characters",
        "catalog:fubini_cartan",
        "--format",
        "json",
        "--exact-flags",
    ]);
    assert_eq!(code_a, Some(0));
    let va: serde_json::Value = serde_json::from_str(&a).unwrap();
    assert_eq!(va["characters"], serde_json::json!([5, 1]));
    assert_eq!(va["flag"]["certificate"]["mode"], "exact");
    assert_eq!(
        va["flag"]["certificate"]["generic_dims"],
        serde_json::json!([6, 1, 0])
    );
}

#[test]
fn dumped_tableau_round_trips_through_the_engine() {
    let (dump, _, _) = run(&["catalog", "dump", "asympt_isothermic"]);
    let path = temp_file("ct_ai.json", &dump);
    let (stdout, _, code) = run(&["tableau", "characters", &path]);
    assert_eq!(code, Some(0));
    assert_eq!(stdout.trim(), "s0=13 s1=5 s2=0");
    let (stdout, _, code) = run(&["pfaffian", "cartan-test", &path]);
    assert_eq!(code, Some(0));
    assert!(stdout.contains("(5,0) = (5,0), fiber 5"), "{stdout}");
    assert!(stdout.contains("last nonzero character: s1 = 5"), "{stdout}");
}
