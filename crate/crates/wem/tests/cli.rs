//! End-to-end tests of the command line: JSON shapes, exact values, and
//! the exit-code contract (0 success, 1 mathematical failure, 2 bad
//! input).

use std::io::Write;
use std::process::{Command, Output};

use serde_json::Value;
use tempfile::NamedTempFile;

fn wem(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_wem"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn json_stdout(out: &Output) -> Value {
    assert!(
        out.status.success(),
        "stdout: {}\nstderr: {}",
        String::from_utf8_lossy(&out.stdout),
        String::from_utf8_lossy(&out.stderr)
    );
    serde_json::from_slice(&out.stdout).expect("stdout is JSON")
}

fn write_file(content: &str) -> NamedTempFile {
    let mut f = NamedTempFile::new().unwrap();
    f.write_all(content.as_bytes()).unwrap();
    f
}

/// The unit square [0,1]^2.
fn square_file() -> NamedTempFile {
    write_file(
        r#"{"dimension": 2, "halfspaces": [
            {"normal": [1, 0], "offset": 0},
            {"normal": [0, 1], "offset": 0},
            {"normal": [-1, 0], "offset": 1},
            {"normal": [0, -1], "offset": 1}
        ]}"#,
    )
}

/// The triangle with vertices (0,0), (2,0), (0,1); its slanted facet
/// gives one vertex cone of index 2.
fn triangle_file() -> NamedTempFile {
    write_file(
        r#"{"dimension": 2, "halfspaces": [
            {"normal": [1, 0], "offset": 0},
            {"normal": [0, 1], "offset": 0},
            {"normal": [-1, -2], "offset": 2}
        ]}"#,
    )
}

const ONE: &str = r#"[{"exponents": [0, 0], "coefficient": "1"}]"#;

#[test]
fn verify_reports_structure() {
    let file = triangle_file();
    let doc = json_stdout(&wem(&["verify", file.path().to_str().unwrap()]));
    assert_eq!(doc["result"]["valid"], Value::Bool(true));
    assert_eq!(doc["result"]["vertex_count"], 3);
    assert_eq!(doc["result"]["lattice_point_count"], 4);
    assert_eq!(doc["manifest"]["command"], "verify");
    assert_eq!(doc["manifest"]["version"], env!("CARGO_PKG_VERSION"));
}

#[test]
fn verify_rejects_redundant_facet_with_witness() {
    let file = write_file(
        r#"{"dimension": 2, "halfspaces": [
            {"normal": [1, 0], "offset": 0},
            {"normal": [0, 1], "offset": 0},
            {"normal": [-1, 0], "offset": 1},
            {"normal": [0, -1], "offset": 1},
            {"normal": [-1, -1], "offset": 5}
        ]}"#,
    );
    let out = wem(&["verify", file.path().to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(1));
    let err: Value = serde_json::from_slice(&out.stderr).unwrap();
    assert!(err["error"].as_str().unwrap().contains("4"));
    assert!(err["error"].as_str().unwrap().contains("redundant"));
}

#[test]
fn verify_rejects_malformed_json_as_input_error() {
    let file = write_file("{not json");
    let out = wem(&["verify", file.path().to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn verify_rejects_non_primitive_normal() {
    let file = write_file(
        r#"{"dimension": 2, "halfspaces": [
            {"normal": [1, 0], "offset": 0},
            {"normal": [0, 1], "offset": 0},
            {"normal": [-2, -2], "offset": 1}
        ]}"#,
    );
    let out = wem(&["verify", file.path().to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(1));
}

#[test]
fn sum_matches_the_known_values() {
    let square = square_file();
    let doc = json_stdout(&wem(&[
        "sum",
        square.path().to_str().unwrap(),
        "--q",
        "1/2",
        "--poly",
        ONE,
    ]));
    assert_eq!(doc["result"]["value"], "1");

    let triangle = triangle_file();
    for (q, expect) in [("1", "4"), ("0", "0")] {
        let doc = json_stdout(&wem(&[
            "sum",
            triangle.path().to_str().unwrap(),
            "--q",
            q,
            "--poly",
            ONE,
        ]));
        assert_eq!(doc["result"]["value"], expect, "q = {q}");
    }
}

#[test]
fn em_agrees_with_its_oracle_and_lists_contributions() {
    let triangle = triangle_file();
    let doc = json_stdout(&wem(&[
        "em",
        triangle.path().to_str().unwrap(),
        "--q",
        "1/3",
        "--poly",
        r#"[{"exponents": [1, 0], "coefficient": "1"},
            {"exponents": [0, 1], "coefficient": "2/3"}]"#,
        "--compare-oracle",
    ]));
    let result = &doc["result"];
    assert_eq!(result["path"], "faces");
    assert_eq!(result["value"], result["oracle"]);
    // The identity element of the full face plus the one nontrivial flat
    // element at the index-2 vertex.
    assert_eq!(result["contributions"].as_array().unwrap().len(), 2);
    assert_eq!(doc["manifest"]["ambient_order"], 2);
}

#[test]
fn em_regular_fastpath_matches_the_generic_path() {
    let square = square_file();
    let poly = r#"[{"exponents": [2, 1], "coefficient": "3"},
        {"exponents": [0, 0], "coefficient": "1/5"}]"#;
    let generic = json_stdout(&wem(&[
        "em",
        square.path().to_str().unwrap(),
        "--q",
        "2/7",
        "--poly",
        poly,
    ]));
    let fast = json_stdout(&wem(&[
        "em",
        square.path().to_str().unwrap(),
        "--q",
        "2/7",
        "--poly",
        poly,
        "--regular-fastpath",
    ]));
    assert_eq!(fast["result"]["path"], "regular");
    assert_eq!(generic["result"]["value"], fast["result"]["value"]);
}

#[test]
fn em_regular_fastpath_rejects_singular_input() {
    let triangle = triangle_file();
    let out = wem(&[
        "em",
        triangle.path().to_str().unwrap(),
        "--q",
        "1/2",
        "--poly",
        ONE,
        "--regular-fastpath",
    ]);
    assert_eq!(out.status.code(), Some(1));
    let err: Value = serde_json::from_slice(&out.stderr).unwrap();
    assert!(err["error"].as_str().unwrap().contains("not regular"));
}

#[test]
fn em_smooth_path_reports_consistent_remainders() {
    let file = write_file(
        r#"{"dimension": 1, "halfspaces": [
            {"normal": [1], "offset": 0},
            {"normal": [-1], "offset": 6}
        ]}"#,
    );
    let doc = json_stdout(&wem(&[
        "em",
        file.path().to_str().unwrap(),
        "--q",
        "1/3",
        "--bump",
        r#"[{"kind": "bump", "center": 3.0, "radius": 2.5}]"#,
        "--k",
        "3",
        "--quad-tol",
        "1e-8",
    ]));
    let r = &doc["result"];
    assert_eq!(r["path"], "smooth");
    let diff = r["remainder_difference"].as_f64().unwrap();
    let formula = r["remainder_formula"].as_f64().unwrap();
    assert!((diff - formula).abs() < 1e-6, "diff {diff} formula {formula}");
    assert!(doc["manifest"]["tolerances"]["quad_tol"].as_f64().unwrap() > 0.0);
    assert!(doc["manifest"]["xi"].is_array());
}

#[test]
fn em_smooth_skip_kernel_check_omits_the_formula() {
    let file = write_file(
        r#"{"dimension": 1, "halfspaces": [
            {"normal": [1], "offset": 0},
            {"normal": [-1], "offset": 6}
        ]}"#,
    );
    let doc = json_stdout(&wem(&[
        "em",
        file.path().to_str().unwrap(),
        "--q",
        "1/3",
        "--bump",
        r#"[{"kind": "bump", "center": 3.0, "radius": 2.5}]"#,
        "--k",
        "3",
        "--quad-tol",
        "1e-8",
        "--skip-kernel-check",
    ]));
    let r = &doc["result"];
    assert_eq!(r["path"], "smooth");
    assert!(r["remainder_formula"].is_null());
    assert!(r["remainder_difference"].as_f64().is_some());
}

#[test]
fn em_requires_exactly_one_integrand() {
    let square = square_file();
    let out = wem(&["em", square.path().to_str().unwrap(), "--q", "1/2"]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn groups_dump_shows_the_index_two_vertex() {
    let triangle = triangle_file();
    let doc = json_stdout(&wem(&["groups", triangle.path().to_str().unwrap()]));
    let faces = doc["result"]["faces"].as_array().unwrap();
    let orders: Vec<u64> = faces
        .iter()
        .map(|f| f["order"].as_u64().unwrap())
        .collect();
    assert_eq!(orders.iter().filter(|&&o| o == 2).count(), 1);
    let big = faces.iter().find(|f| f["order"] == 2).unwrap();
    assert_eq!(big["invariant_factors"].as_array().unwrap().last().unwrap(), "2");
    let elements = big["elements"].as_array().unwrap();
    assert_eq!(elements.len(), 2);
    // The nontrivial element rotates both facet characters by 1/2 and is
    // genuinely new at this face.
    let nontrivial = elements
        .iter()
        .find(|e| e["rotations"].as_array().unwrap().iter().any(|r| r != "0"))
        .unwrap();
    assert_eq!(nontrivial["flat"], Value::Bool(true));
}

#[test]
fn decompose_square_flip_counts() {
    let square = square_file();
    let doc = json_stdout(&wem(&[
        "decompose",
        square.path().to_str().unwrap(),
        "--xi",
        "1,2",
    ]));
    let cones = doc["result"]["cones"].as_array().unwrap();
    assert_eq!(cones.len(), 4);
    let mut counts: Vec<u64> = cones
        .iter()
        .map(|c| c["flip_count"].as_u64().unwrap())
        .collect();
    counts.sort();
    assert_eq!(counts, vec![0, 1, 1, 2]);
}

#[test]
fn em1d_interval_constant_value() {
    let doc = json_stdout(&wem(&[
        "em1d",
        "--q",
        "1/3",
        "--m",
        "2",
        "--a",
        "0",
        "--b",
        "5",
        "--function",
        r#"{"kind": "polynomial", "coefficients": [1.0]}"#,
    ]));
    let sum = doc["result"]["sum"]["re"].as_f64().unwrap();
    assert!((sum - 14.0 / 3.0).abs() < 1e-12, "{sum}");
    assert_eq!(doc["result"]["mode"], "interval");
}

#[test]
fn em1d_twisted_ray_agreement() {
    let doc = json_stdout(&wem(&[
        "em1d",
        "--q",
        "1/2",
        "--m",
        "3",
        "--lambda",
        "1/4",
        "--function",
        r#"{"kind": "cutoff_polynomial", "coefficients": [1.0, 0.5],
            "plateau_end": 5.0, "margin": 1.0}"#,
    ]));
    assert_eq!(doc["result"]["mode"], "twisted_ray");
    assert_eq!(doc["manifest"]["ambient_order"], 4);
    assert!(doc["result"]["agreement"].as_f64().unwrap() < 1e-8);
}

#[test]
fn em1d_rejects_unbounded_ray_input() {
    let out = wem(&[
        "em1d",
        "--q",
        "1/2",
        "--m",
        "2",
        "--ray",
        "--function",
        r#"{"kind": "polynomial", "coefficients": [1.0]}"#,
    ]);
    assert_eq!(out.status.code(), Some(1));
}

#[test]
fn exact_results_are_bit_stable_across_runs_and_thread_counts() {
    let triangle = triangle_file();
    let path = triangle.path().to_str().unwrap().to_string();
    let run = |threads: &str| -> String {
        let out = Command::new(env!("CARGO_BIN_EXE_wem"))
            .args([
                "em",
                &path,
                "--q",
                "3/5",
                "--poly",
                r#"[{"exponents": [2, 0], "coefficient": "7/2"}]"#,
            ])
            .env("WEM_THREADS", threads)
            .output()
            .expect("binary runs");
        let doc: Value = serde_json::from_slice(&out.stdout).unwrap();
        serde_json::to_string(&doc["result"]).unwrap()
    };
    let one = run("1");
    assert_eq!(one, run("1"), "re-running must reproduce the result");
    assert_eq!(one, run("4"), "thread count must not affect exact output");
}
