use std::path::PathBuf;
use std::process::{Command, Output};

fn parstruct(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_parstruct"))
        .args(args)
        .output()
        .expect("binary runs")
}

/// Runs with whitespace-separated arguments.
fn run(line: &str) -> Output {
    parstruct(&line.split_whitespace().collect::<Vec<_>>())
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn stderr(o: &Output) -> String {
    String::from_utf8(o.stderr.clone()).unwrap()
}

fn data(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("tests/data").join(name)
}

#[test]
fn evaluate_sphere_curvature() {
    let o = run("evaluate sphere_lc --quantity rho --point 1.0471975511965976,1.0 --args e_th e_ph e_ph");
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    assert_eq!(stdout(&o).trim(), "vector (0.75, 0)");
}

#[test]
fn evaluate_flat_torsion_form() {
    let o = run("evaluate flat2d --quantity theta --point 0.3,-1.2 --args dx1");
    assert_eq!(stdout(&o).trim(), "biform 0");
}

#[test]
fn evaluate_weitzenbock_torsion_form() {
    let o = run("evaluate relative_weitzenbock --quantity theta --point 2,1 --args beta_2");
    assert_eq!(stdout(&o).trim(), "biform -0.25 dx1∧dx2");
}

#[test]
fn evaluate_json_output() {
    let o = run("evaluate sphere_lc --quantity nabla_v --point 1.0471975511965976,0 --args e_ph e_ph --format json");
    let v: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(v["kind"], "vector");
    let c = v["components"].as_array().unwrap();
    assert!((c[0].as_f64().unwrap() + 3f64.sqrt() / 4.0).abs() <= 1e-15);
    assert!(c[1].as_f64().unwrap().abs() <= 1e-15);
}

#[test]
fn evaluate_expression_arguments() {
    // Θ(x2 dx1) = d(x2 dx1) = -dx1∧dx2 on a torsion-free connection
    let o = run("evaluate sphere_lc --quantity curl --point 1,2 --args w:ph;0");
    assert_eq!(stdout(&o).trim(), "biform -1 dth∧dph");
}

#[test]
fn evaluate_input_errors_exit_2() {
    let cases = [
        "evaluate sphere_lc --quantity rhoo --point 1,1 --args e_th e_ph e_ph",
        "evaluate sphere_lc --quantity rho --point 5,1 --args e_th e_ph e_ph",
        "evaluate sphere_lc --quantity rho --point 1,1 --args e_th e_ph",
        "evaluate sphere_lc --quantity rho --point 1,1 --args e_th dth e_ph",
    ];
    for args in cases {
        let o = run(args);
        assert_eq!(o.status.code(), Some(2), "{args:?}");
        assert!(stderr(&o).starts_with("error: "), "{}", stderr(&o));
    }
}

#[test]
fn verify_fixtures_exit_0() {
    for name in ["flat2d", "sphere_lc", "relative_weitzenbock.toml"] {
        let o = parstruct(&["verify", name, "--samples", "10"]);
        assert_eq!(o.status.code(), Some(0), "{name}: {}", stdout(&o));
        assert!(stdout(&o).ends_with("verdict: PASS\n"));
    }
}

#[test]
fn verify_violation_exits_1() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("torsion.toml");
    std::fs::write(
        &path,
        "[chart]\ndim = 2\ncoords = [\"x\", \"y\"]\ndomain = [[0, 1], [0, 1]]\n\n[connection]\n\"G^1_12\" = \"y\"\n",
    )
    .unwrap();
    let o = parstruct(&[
        "verify",
        path.to_str().unwrap(),
        "--suite",
        "symmetry",
        "--samples",
        "5",
    ]);
    assert_eq!(o.status.code(), Some(1));
    assert!(stdout(&o).contains("symmetry     fail"), "{}", stdout(&o));
}

#[test]
fn suite_and_tolerance_overrides() {
    let o = run("verify sphere_lc --suite cartan1,duality --samples 4 --tol cartan1=1e-7 --format json");
    let v: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    let suites = v["suites"].as_array().unwrap();
    assert_eq!(suites.len(), 2);
    assert_eq!(suites[0]["name"], "cartan1");
    assert_eq!(suites[0]["tolerance"], 1e-7);
    assert_eq!(suites[1]["samples"], 4);
    assert_eq!(v["verdict"], "pass");
}

#[test]
fn bad_overrides_exit_2() {
    for args in [
        "verify flat2d --suite cartan3",
        "verify flat2d --tol cartan1=-1",
        "verify flat2d --samples 0",
        "verify flat2d --format yaml",
    ] {
        assert_eq!(run(args).status.code(), Some(2), "{args}");
    }
}

#[test]
fn missing_file_exits_2() {
    let o = run("verify no/such/file.toml");
    assert_eq!(o.status.code(), Some(2));
    assert!(stderr(&o).contains("no/such/file.toml"));
}

#[test]
fn json_runs_are_byte_identical() {
    let args = "verify sphere_lc --seed 7 --samples 20 --format json";
    assert_eq!(run(args).stdout, run(args).stdout);
}

#[test]
fn malformed_corpus() {
    let expected = std::fs::read_to_string(data("malformed/expected.txt")).unwrap();
    let rows: Vec<_> = expected.lines().filter(|l| !l.starts_with('#')).collect();
    assert_eq!(rows.len(), 10);
    for row in rows {
        let mut cols = row.split('\t');
        let (file, pos, fragment) = (cols.next().unwrap(), cols.next().unwrap(), cols.next().unwrap());
        let path = data("malformed").join(file);
        let o = parstruct(&["verify", path.to_str().unwrap()]);
        assert_eq!(o.status.code(), Some(2), "{file}");
        let err = stderr(&o);
        let prefix = format!("error: {}:{pos}: ", path.display());
        assert!(err.starts_with(&prefix), "{file}: {err}");
        assert!(err.contains(fragment), "{file}: {err}");
    }
}

#[test]
fn catalog_commands() {
    let list = stdout(&run("catalog list"));
    assert_eq!(list.lines().count(), 3);
    let show = run("catalog show sphere_lc");
    assert!(stdout(&show).contains("\"G^1_22\" = \"-sin(th)*cos(th)\""));
    assert_eq!(run("catalog show torus").status.code(), Some(2));
}
