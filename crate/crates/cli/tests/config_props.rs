use parstruct_cli::catalog;
use parstruct_cli::{parse_config, run_suites, ConfigError, Status, Suite, Verdict};
use parstruct_core::frame::FramePair;

const HEADER: &str = r#"
[chart]
dim = 2
coords = ["x1", "x2"]
domain = [[0.5, 2.0], [-1.0, 1.0]]
"#;

fn with(body: &str) -> Result<parstruct_cli::SpecConfig, ConfigError> {
    parse_config(&format!("{HEADER}{body}"), "test.toml")
}

fn fails(body: &str) -> ConfigError {
    match with(body) {
        Ok(_) => panic!("accepted:\n{body}"),
        Err(e) => e,
    }
}

fn position(e: &ConfigError) -> (usize, usize) {
    let p = e.pos().unwrap_or_else(|| panic!("no position in {e}"));
    (p.line, p.col)
}

#[test]
fn sphere_fixture_has_three_coefficients() {
    let cfg = catalog::open("sphere_lc").unwrap();
    assert_eq!(cfg.name, "sphere_lc");
    assert_eq!(cfg.seed, 7);
    assert_eq!(cfg.samples, 100);
    assert_eq!(cfg.suites, Suite::ALL.to_vec());
    let keys: Vec<_> = cfg.coefficients.keys().copied().collect();
    assert_eq!(keys, vec![(0, 1, 1), (1, 0, 1), (1, 1, 0)]);
    let p = [1.0, 0.4];
    let g = cfg.connection.coefficients_in(&FramePair::coordinate(2), &p).unwrap();
    let cot = 1.0f64.cos() / 1.0f64.sin();
    let want = [0.0, 0.0, 0.0, -1.0f64.sin() * 1.0f64.cos(), 0.0, cot, cot, 0.0];
    for (a, b) in g.iter().zip(want) {
        assert!((a - b).abs() <= 1e-15, "{g:?}");
    }
}

#[test]
fn empty_connection_block_is_flat() {
    let cfg = with("[connection]\n").unwrap();
    assert!(cfg.coefficients.is_empty());
    let g = cfg.connection.coefficients_at(&[1.0, 0.0]).unwrap();
    assert!(g.iter().all(|x| *x == 0.0));
}

#[test]
fn comma_index_form_is_accepted() {
    let a = with("[connection]\n\"G^1_2,1\" = \"x1\"\n").unwrap();
    let b = with("[connection]\n\"G^1_21\" = \"x1\"\n").unwrap();
    assert_eq!(a.coefficients, b.coefficients);
}

#[test]
fn out_of_range_index_is_positioned() {
    let e = fails("[connection]\n\"G^3_11\" = \"1\"\n");
    assert!(matches!(e, ConfigError::Semantic { .. }), "{e}");
    assert_eq!(position(&e), (7, 1));
    assert!(e.to_string().starts_with("test.toml:7:1:"), "{e}");
}

#[test]
fn expression_errors_point_into_the_string() {
    let e = fails("[connection]\n\"G^1_11\" = \"x1 + * 2\"\n");
    // opening quote at column 12, '*' at offset 5 of the expression
    assert_eq!(position(&e), (7, 18));
}

#[test]
fn relative_with_coefficients_is_rejected() {
    let e = fails(
        "[frame]\nvectors = [[\"1\", \"0\"], [\"0\", \"x1\"]]\n[connection]\nrelative = true\n\"G^1_11\" = \"1\"\n",
    );
    assert!(e.to_string().contains("relative"), "{e}");
}

#[test]
fn unknown_keys_are_rejected() {
    let e = fails("[verify]\nsamplez = 3\n");
    assert_eq!(position(&e), (7, 1));
}

#[test]
fn points_outside_the_box_are_rejected() {
    let cfg = with("").unwrap();
    assert_eq!(cfg.point("1, 0.5").unwrap(), vec![1.0, 0.5]);
    assert!(cfg.point("3, 0").is_err());
    assert!(cfg.point("1").is_err());
    assert!(cfg.point("1, abc").is_err());
}

#[test]
fn tolerances_table_overrides_defaults() {
    let cfg = with("[tolerances]\ncartan1 = 1e-6\n").unwrap();
    assert_eq!(cfg.tolerance(Suite::Cartan1), 1e-6);
    assert_eq!(cfg.tolerance(Suite::Cartan2), 1e-9);
}

#[test]
fn torsion_without_expectation_fails_symmetry() {
    let mut cfg = with("[connection]\n\"G^1_12\" = \"1\"\n").unwrap();
    cfg.samples = 10;
    let report = run_suites(&cfg);
    let by_name = |n: &str| report.suites.iter().find(|s| s.name == n).unwrap();
    assert_eq!(by_name("symmetry").status, Status::Fail);
    assert_eq!(by_name("cyclic").status, Status::Informational);
    assert_eq!(by_name("cartan1").status, Status::Pass);
    assert_eq!(report.verdict, Verdict::Fail);
}

#[test]
fn expected_asymmetry_on_a_symmetric_connection_fails() {
    let mut cfg = with("[verify]\nexpected_asymmetric = true\n").unwrap();
    cfg.samples = 5;
    let report = run_suites(&cfg);
    let sym = report.suites.iter().find(|s| s.name == "symmetry").unwrap();
    assert_eq!(sym.status, Status::Fail);
}

#[test]
fn catalog_fixtures_pass() {
    for f in &catalog::FIXTURES {
        let mut cfg = catalog::open(f.name).unwrap();
        cfg.samples = 20;
        let report = run_suites(&cfg);
        assert!(report.passed(), "{}", report.to_text());
        assert_eq!(report.suites.len(), Suite::ALL.len());
    }
}

#[test]
fn weitzenbock_fixture_statuses() {
    let mut cfg = catalog::open("relative_weitzenbock.toml").unwrap();
    cfg.samples = 20;
    let report = run_suites(&cfg);
    for s in &report.suites {
        let want = match s.name.as_str() {
            "symmetry" => Status::ExpectedFail,
            "cyclic" | "bianchi" => Status::Informational,
            _ => Status::Pass,
        };
        assert_eq!(s.status, want, "{}", s.name);
    }
}

#[test]
fn reports_are_deterministic_and_seed_dependent() {
    let mut cfg = catalog::open("sphere_lc").unwrap();
    cfg.samples = 15;
    cfg.suites = vec![Suite::Cartan2, Suite::Duality];
    let a = run_suites(&cfg).to_json();
    assert_eq!(a, run_suites(&cfg).to_json());
    cfg.seed += 1;
    assert_ne!(a, run_suites(&cfg).to_json());
}

#[test]
fn text_and_json_carry_the_same_numbers() {
    let mut cfg = catalog::open("sphere_lc").unwrap();
    cfg.samples = 10;
    cfg.suites = vec![Suite::Cartan1, Suite::Bianchi];
    let report = run_suites(&cfg);
    let text = report.to_text();
    let back: parstruct_cli::Report = serde_json::from_str(&report.to_json()).unwrap();
    assert_eq!(back, report);
    for s in &report.suites {
        let line = text.lines().find(|l| l.starts_with(&s.name)).unwrap();
        let field: f64 = line.split_whitespace().nth(2).unwrap().parse().unwrap();
        assert_eq!(Some(field), s.max_residual);
    }
}

#[test]
fn coefficients_are_checked_over_the_box() {
    // negative under the root where x2 < -0.5
    let e = fails("[connection]\n\"G^2_22\" = \"sqrt(x2 + 0.5)\"\n");
    assert_eq!(position(&e), (7, 12));
    assert!(e.to_string().contains("sqrt of negative value"), "{e}");
}
