//! End-to-end tests of the command-line interface: exit codes, report
//! contents, and byte-determinism of outputs.

use std::path::{Path, PathBuf};
use std::process::{Command, Output};

fn input(name: &str) -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR"))
        .join("../../inputs")
        .join(name)
}

fn scratch(name: &str, contents: &str) -> PathBuf {
    let path = Path::new(env!("CARGO_TARGET_TMPDIR")).join(name);
    std::fs::write(&path, contents).unwrap();
    path
}

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_arrangeval"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn run_json(args: &[&str]) -> serde_json::Value {
    let out = run(args);
    assert!(
        out.status.success(),
        "command {:?} failed: {}",
        args,
        String::from_utf8_lossy(&out.stderr)
    );
    serde_json::from_slice(&out.stdout).expect("stdout is JSON")
}

fn exit_code(out: &Output) -> i32 {
    out.status.code().expect("process not killed by signal")
}

#[test]
fn malformed_json_exits_2() {
    let path = scratch("malformed.json", "{not json");
    let out = run(&["filtration", path.to_str().unwrap()]);
    assert_eq!(exit_code(&out), 2);
}

#[test]
fn wrong_schema_exits_2() {
    let path = scratch(
        "wrong_schema.json",
        r#"{"schema":"other/9","kind":"toric","dim":1,"hyperplanes":[]}"#,
    );
    let out = run(&["filtration", path.to_str().unwrap()]);
    assert_eq!(exit_code(&out), 2);
}

#[test]
fn missing_file_exits_2() {
    let out = run(&["filtration", "/nonexistent/arrangement.json"]);
    assert_eq!(exit_code(&out), 2);
}

#[test]
fn rank_deficient_arrangement_exits_3_with_report() {
    let path = scratch(
        "rank_deficient.json",
        r#"{"schema":"arrangeval/1","kind":"toric","dim":2,"hyperplanes":[
            {"normal":[1,0],"offset":"0"},{"normal":[1,0],"offset":"1/2"}]}"#,
    );
    let out = run(&["verify", path.to_str().unwrap()]);
    assert_eq!(exit_code(&out), 3);
    let report: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(report["valid"], serde_json::json!(false));
    assert_eq!(report["has_zero_dimensional_flat"], serde_json::json!(false));
}

#[test]
fn grid_filtration_dims() {
    let report = run_json(&["filtration", input("torus_grid.json").to_str().unwrap()]);
    assert_eq!(report["schema"], "arrangeval/1");
    assert_eq!(report["seed"], 0);
    assert_eq!(report["dims"], serde_json::json!([1, 2, 1]));
    assert_eq!(report["total_dim"], 4);
    assert_eq!(report["validation"]["valid"], serde_json::json!(true));
}

#[test]
fn circle_filtration_dims() {
    let report = run_json(&["filtration", input("circle_thirds.json").to_str().unwrap()]);
    assert_eq!(report["dims"], serde_json::json!([1, 2]));
    assert_eq!(report["total_dim"], 3);
}

#[test]
fn verify_passes_on_all_sample_arrangements() {
    for name in [
        "torus_grid.json",
        "torus_triangle.json",
        "circle_thirds.json",
        "affine_triangle.json",
    ] {
        let out = run(&["verify", input(name).to_str().unwrap()]);
        assert_eq!(exit_code(&out), 0, "{name}");
        let report: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
        assert_eq!(report["all_equal"], serde_json::json!(true), "{name}");
    }
}

#[test]
fn verify_affine_reports_compact_dimension_one() {
    let report = run_json(&["verify", input("affine_triangle.json").to_str().unwrap()]);
    assert_eq!(report["mode"], "pseudoaffine");
    assert_eq!(report["compact"]["compact_dim"], 1);
    assert_eq!(report["compact"]["equal"], serde_json::json!(true));
    assert_eq!(
        report["compact"]["contained_in_reciprocity"],
        serde_json::json!(true)
    );
}

#[test]
fn verify_mode_mismatch_exits_3() {
    let out = run(&[
        "verify",
        input("torus_grid.json").to_str().unwrap(),
        "--mode",
        "pseudoaffine",
    ]);
    assert_eq!(exit_code(&out), 3);
}

#[test]
fn scissors_square_parallelogram_congruent() {
    let report = run_json(&[
        "scissors",
        input("unit_square.json").to_str().unwrap(),
        input("parallelogram.json").to_str().unwrap(),
        "--mode",
        "hg2d",
    ]);
    assert_eq!(report["congruent"], serde_json::json!(true));
    assert_eq!(report["witness"], serde_json::Value::Null);
    assert_eq!(report["left"]["area"], "1");
    assert_eq!(report["right"]["area"], "1");
}

#[test]
fn scissors_triangle_square_not_congruent_with_witness() {
    let report = run_json(&[
        "scissors",
        input("triangle.json").to_str().unwrap(),
        input("unit_square.json").to_str().unwrap(),
        "--mode",
        "hg2d",
    ]);
    assert_eq!(report["congruent"], serde_json::json!(false));
    assert_eq!(report["witness"]["kind"], "invariant");
    let name = report["witness"]["name"].as_str().unwrap();
    assert!(name.starts_with("upsilon"), "witness names an edge invariant");
    assert_ne!(report["witness"]["left"], report["witness"]["right"]);
}

#[test]
fn scissors_nonconvex_input_exits_3() {
    let path = scratch(
        "nonconvex.json",
        r#"{"schema":"arrangeval/1","dim":2,"vertices":[
            ["0","0"],["2","0"],["1","1"],["2","2"],["0","2"]]}"#,
    );
    let out = run(&[
        "scissors",
        path.to_str().unwrap(),
        input("unit_square.json").to_str().unwrap(),
        "--mode",
        "hg2d",
    ]);
    assert_eq!(exit_code(&out), 3);
}

#[test]
fn scissors_integer_translate_congruent_mod_lattice() {
    let path = scratch(
        "square_shift.json",
        r#"{"schema":"arrangeval/1","dim":2,"vertices":[
            ["3","5"],["4","5"],["4","6"],["3","6"]]}"#,
    );
    let report = run_json(&[
        "scissors",
        input("unit_square.json").to_str().unwrap(),
        path.to_str().unwrap(),
        "--mode",
        "zn",
    ]);
    assert_eq!(report["congruent"], serde_json::json!(true));
    assert_eq!(report["validation"]["valid"], serde_json::json!(true));
}

#[test]
fn scissors_zn_witness_names_torus_cell() {
    let path = scratch(
        "half_square.json",
        r#"{"schema":"arrangeval/1","dim":2,"vertices":[
            ["0","0"],["1/2","0"],["1/2","1"],["0","1"]]}"#,
    );
    let report = run_json(&[
        "scissors",
        path.to_str().unwrap(),
        input("unit_square.json").to_str().unwrap(),
        "--mode",
        "zn",
    ]);
    assert_eq!(report["congruent"], serde_json::json!(false));
    assert_eq!(report["witness"]["kind"], "torus_cell");
    assert_ne!(report["witness"]["left"], report["witness"]["right"]);
}

#[test]
fn hadwiger_eval_csv_lists_every_flag() {
    let path = scratch(
        "eval_square.json",
        r#"{"schema":"arrangeval/1","dim":2,"vertices":[
            ["0","0"],["1/2","0"],["1/2","1"],["0","1"]]}"#,
    );
    let out = run(&[
        "hadwiger-eval",
        input("torus_grid.json").to_str().unwrap(),
        path.to_str().unwrap(),
        "--format",
        "csv",
    ]);
    assert_eq!(exit_code(&out), 0);
    let text = String::from_utf8(out.stdout).unwrap();
    let mut lines = text.lines();
    assert_eq!(lines.next(), Some("rank,flag,orientation,coefficient"));
    // 1 empty flag + 4 rank-1 flags + 8 rank-2 flags.
    assert_eq!(text.lines().count(), 1 + 13);
    assert!(text.lines().nth(1).unwrap().ends_with(",1/2"));
}

#[test]
fn render_torus_triangle_draws_diagonal_and_two_cells() {
    let out = run(&["render", input("torus_triangle.json").to_str().unwrap()]);
    assert_eq!(exit_code(&out), 0);
    let svg = String::from_utf8(out.stdout).unwrap();
    assert!(svg.starts_with("<svg"));
    assert!(svg.ends_with("</svg>\n"));
    assert!(svg.contains(">c0<") && svg.contains(">c1<") && !svg.contains(">c2<"));
    assert!(svg.contains("3 hyperplanes, 2 cells"));
    // The diagonal: one line crossing the full square corner to corner.
    assert!(svg.contains(r#"x1="40.000" y1="640.000" x2="640.000" y2="40.000""#));
}

#[test]
fn render_affine_triangle_counts_seven_regions() {
    let out = run(&[
        "render",
        input("affine_triangle.json").to_str().unwrap(),
        "--flags",
    ]);
    assert_eq!(exit_code(&out), 0);
    let svg = String::from_utf8(out.stdout).unwrap();
    assert!(svg.contains("3 hyperplanes, 7 cells"));
    assert!(svg.contains(">c6<"));
}

#[test]
fn render_rejects_non_planar_input() {
    let out = run(&["render", input("circle_thirds.json").to_str().unwrap()]);
    assert_eq!(exit_code(&out), 3);
}

#[test]
fn reports_are_byte_identical_for_fixed_seed() {
    for args in [
        vec!["filtration", "torus_grid.json"],
        vec!["verify", "torus_grid.json"],
        vec!["verify", "affine_triangle.json"],
        vec!["render", "torus_triangle.json"],
    ] {
        let full: Vec<String> = std::iter::once(args[0].to_string())
            .chain(args[1..].iter().map(|n| {
                input(n).to_str().unwrap().to_string()
            }))
            .chain(["--seed".to_string(), "42".to_string()])
            .collect();
        let argrefs: Vec<&str> = full.iter().map(String::as_str).collect();
        let first = run(&argrefs);
        let second = run(&argrefs);
        assert_eq!(first.stdout, second.stdout, "{args:?}");
        assert!(first.status.success());
    }
}

#[test]
fn seed_is_embedded_in_reports() {
    let report = run_json(&[
        "filtration",
        input("circle_thirds.json").to_str().unwrap(),
        "--seed",
        "17",
    ]);
    assert_eq!(report["seed"], 17);
}

#[test]
fn out_flag_writes_file() {
    let target = Path::new(env!("CARGO_TARGET_TMPDIR")).join("report_out.json");
    let out = run(&[
        "filtration",
        input("torus_grid.json").to_str().unwrap(),
        "--out",
        target.to_str().unwrap(),
    ]);
    assert_eq!(exit_code(&out), 0);
    assert!(out.stdout.is_empty());
    let report: serde_json::Value =
        serde_json::from_str(&std::fs::read_to_string(&target).unwrap()).unwrap();
    assert_eq!(report["dims"], serde_json::json!([1, 2, 1]));
}
