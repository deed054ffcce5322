mod common;

use std::fs;
use std::process::Command;

use common::{fixtures, gff};
use gfusion::io::load_system;
use gfusion::linalg::{diag, identity, max_abs_diff};

fn stdout(o: &std::process::Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn stderr(o: &std::process::Output) -> String {
    String::from_utf8(o.stderr.clone()).unwrap()
}

#[test]
fn bounds_line_format() {
    let o = gff(&fixtures(), &["bounds", "parseval.json"]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(stdout(&o), "lower=1 upper=1 kind=parseval\n");
}

#[test]
fn frame_op_to_stdout_and_file() {
    let o = gff(&fixtures(), &["frame-op", "weighted_coordinate.json"]);
    assert_eq!(o.status.code(), Some(0));
    let doc: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    let s = gfusion::io::matrix_from_value(&doc, &Default::default()).unwrap();
    assert_eq!(s, diag(&[4.0, 1.0]));

    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("s.json");
    let o = gff(
        &fixtures(),
        &["frame-op", "parseval.json", "-o", out.to_str().unwrap()],
    );
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).is_empty());
    assert!(fs::read_to_string(out).unwrap().contains("\"rows\": 2"));
}

#[test]
fn dual_round_trips_and_reconstructs() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("dual.json");
    let o = gff(
        &fixtures(),
        &["dual", "tensor_left.json", "-o", out.to_str().unwrap()],
    );
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    let sys = load_system(fixtures().join("tensor_left.json")).unwrap();
    let dual = load_system(&out).unwrap();
    let pair = gfusion::pair_frame_operator(&sys, &dual).unwrap();
    assert!(max_abs_diff(&pair, &identity(3)) <= 1e-9);
}

#[test]
fn dual_of_bessel_only_fails_with_message() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("d.json");
    let o = gff(
        &fixtures(),
        &["dual", "bessel_only.json", "-o", out.to_str().unwrap()],
    );
    assert_eq!(o.status.code(), Some(1));
    assert_eq!(stderr(&o).trim(), "NotAFrame: lambda_min=0");
    assert!(!out.exists());
}

#[test]
fn pair_reports_matrix_and_norm() {
    let o = gff(
        &fixtures(),
        &["pair", "tensor_left.json", "tensor_left_dual.json"],
    );
    assert_eq!(o.status.code(), Some(0));
    let doc: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    let norm = doc["operator_norm"].as_f64().unwrap();
    assert!((norm - 1.0).abs() < 1e-9);
    let m = gfusion::io::matrix_from_value(&doc["matrix"], &Default::default()).unwrap();
    assert!(max_abs_diff(&m, &identity(3)) < 1e-9);

    let o = gff(
        &fixtures(),
        &["pair", "tensor_left.json", "tensor_right.json"],
    );
    assert_eq!(o.status.code(), Some(2));
    assert!(stderr(&o).starts_with("DimensionMismatch"));

    let o = gff(
        &fixtures(),
        &["pair", "weighted_coordinate.json", "parseval.json"],
    );
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn tensor_writes_product_and_respects_budget() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("prod.json");
    let o = gff(
        &fixtures(),
        &[
            "tensor",
            "tensor_left.json",
            "tensor_right.json",
            "-o",
            out.to_str().unwrap(),
        ],
    );
    assert_eq!(o.status.code(), Some(0));
    let prod = load_system(&out).unwrap();
    assert_eq!(prod.ambient_dim(), 6);
    assert_eq!(prod.len(), 6);

    let o = Command::new(env!("CARGO_BIN_EXE_gff"))
        .current_dir(fixtures())
        .env("GFF_MAX_ELEMENTS", "10")
        .args([
            "tensor",
            "tensor_left.json",
            "tensor_right.json",
            "-o",
            out.to_str().unwrap(),
        ])
        .output()
        .unwrap();
    assert_eq!(o.status.code(), Some(2));
    assert!(stderr(&o).starts_with("SizeLimit"));
}

#[test]
fn random_is_deterministic() {
    let dir = tempfile::tempdir().unwrap();
    let d = dir.path();
    let args = |name: &'static str| {
        vec![
            "random",
            "--dim",
            "4",
            "--components",
            "3",
            "--local-dims",
            "1,2,3",
            "--seed",
            "42",
            "-o",
            name,
        ]
    };
    assert_eq!(gff(d, &args("a.json")).status.code(), Some(0));
    assert_eq!(gff(d, &args("b.json")).status.code(), Some(0));
    assert_eq!(
        fs::read(d.join("a.json")).unwrap(),
        fs::read(d.join("b.json")).unwrap()
    );
    let sys = load_system(d.join("a.json")).unwrap();
    assert_eq!(sys.local_dims(), vec![1, 2, 3]);

    let o = gff(
        d,
        &[
            "random",
            "--dim",
            "4",
            "--components",
            "3",
            "--local-dims",
            "1,2",
            "-o",
            "c.json",
        ],
    );
    assert_eq!(o.status.code(), Some(2));
    assert!(stderr(&o).starts_with("BadParams"));
}

#[test]
fn apply_operations() {
    let dir = tempfile::tempdir().unwrap();
    let v = dir.path().join("v.json");
    fs::write(&v, "[[1, 0], [1, 0]]").unwrap();
    let v = v.to_str().unwrap();

    let run = |op: &str| {
        let o = gff(
            &fixtures(),
            &[
                "apply",
                "weighted_coordinate.json",
                "--vector",
                v,
                "--op",
                op,
            ],
        );
        assert_eq!(o.status.code(), Some(0), "{op}: {}", stderr(&o));
        serde_json::from_str::<serde_json::Value>(&stdout(&o)).unwrap()
    };
    assert_eq!(
        run("analysis")["blocks"],
        serde_json::json!([[[2.0, 0.0]], [[1.0, 0.0]]])
    );
    assert_eq!(
        run("frame-op")["vector"],
        serde_json::json!([[4.0, 0.0], [1.0, 0.0]])
    );
    let rec = run("reconstruct");
    assert!(rec["rel_err"].as_f64().unwrap() <= 1e-12);
    assert_eq!(
        run("synthesis")["vector"],
        serde_json::json!([[2.0, 0.0], [1.0, 0.0]])
    );

    let o = gff(
        &fixtures(),
        &["apply", "parseval.json", "--vector", v, "--op", "nonsense"],
    );
    assert_eq!(o.status.code(), Some(2));
    let o = gff(&fixtures(), &["apply", "scalar.json", "--vector", v]);
    assert_eq!(o.status.code(), Some(2));
    let o = gff(
        &fixtures(),
        &[
            "apply",
            "bessel_only.json",
            "--vector",
            v,
            "--op",
            "reconstruct",
        ],
    );
    assert_eq!(o.status.code(), Some(1));
}

#[test]
fn verify_json_is_deterministic_and_self_describing() {
    let dir = tempfile::tempdir().unwrap();
    let (a, b) = (dir.path().join("a.json"), dir.path().join("b.json"));
    for p in [&a, &b] {
        let o = gff(
            &fixtures(),
            &[
                "verify",
                "tensor_right.json",
                "--seed",
                "9",
                "--trials",
                "5",
                "--json",
                p.to_str().unwrap(),
            ],
        );
        assert_eq!(o.status.code(), Some(0));
    }
    let text = fs::read_to_string(&a).unwrap();
    assert_eq!(text, fs::read_to_string(&b).unwrap());
    let rep: gfusion::report::VerifyReportFile = serde_json::from_str(&text).unwrap();
    assert!(rep.consistent());
    assert_eq!(
        rep.residuals.keys().collect::<Vec<_>>(),
        rep.thresholds.keys().collect::<Vec<_>>()
    );
    assert_eq!(rep.bounds.kind, "frame");
}

#[test]
fn usage_errors_and_help() {
    let o = gff(&fixtures(), &["--help"]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).contains("verify-tensor"));
    assert_eq!(gff(&fixtures(), &[]).status.code(), Some(2));
    assert_eq!(gff(&fixtures(), &["bounds"]).status.code(), Some(2));
    assert_eq!(
        gff(&fixtures(), &["bounds", "missing.json"]).status.code(),
        Some(2)
    );
    assert_eq!(
        gff(
            &fixtures(),
            &[
                "verify-tensor",
                "parseval.json",
                "parseval.json",
                "--lp",
                "parseval.json"
            ]
        )
        .status
        .code(),
        Some(2)
    );
}
