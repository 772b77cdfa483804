mod common;

use common::{max_abs, max_diff, sampler, vf};
use parstruct_core::cartan::CurvatureFamily;
use parstruct_core::chart::{ScalarField, VectorField};
use parstruct_core::expr::compile;
use parstruct_core::frame::FramePair;
use parstruct_core::zoo::{
    bianchi_residual, compatibility_residual, cyclic_residual, deform, is_symmetric, Deformation, JacobianField,
    RelativeStructure, SplitDecomposition, VectorOperatorField,
};
use parstruct_core::Connection;

const SEED: u64 = 0x200;

fn op(names: &[&str], rows: [[&str; 2]; 2]) -> VectorOperatorField {
    let f = |s: &str| ScalarField::from_expr(compile(s, names).unwrap());
    VectorOperatorField::from_fields(rows.iter().map(|r| r.iter().map(|s| f(s)).collect()).collect()).unwrap()
}

#[test]
fn sphere_satisfies_cyclic_and_bianchi() {
    let fx = common::sphere();
    for i in 0..30 {
        let mut s = sampler(&fx.chart, SEED, i);
        let (w, a, b, c) = (s.vector_field(), s.vector_field(), s.vector_field(), s.vector_field());
        let p = s.point();
        let cyc = cyclic_residual(&fx.conn, &a, &b, &c, &p).unwrap();
        assert!(max_abs(&cyc) <= 1e-8, "{cyc:?}");
        let bia = bianchi_residual(&fx.conn, &w, &a, &b, &c, &p).unwrap();
        assert!(max_abs(&bia) <= 1e-8, "{bia:?}");
    }
}

fn worst_cyclic(conn: &Connection, chart: &parstruct_core::Chart, n: usize) -> f64 {
    (0..n)
        .map(|i| {
            let mut s = sampler(chart, SEED, i);
            let (a, b, c) = (s.vector_field(), s.vector_field(), s.vector_field());
            let p = s.point();
            max_abs(&cyclic_residual(conn, &a, &b, &c, &p).unwrap())
        })
        .fold(0.0, f64::max)
}

/// The Weitzenböck structure has torsion but ρ ≡ 0, so the cyclic sum
/// vanishes anyway.
#[test]
fn weitzenbock_cyclic_sum_vanishes_because_it_is_flat() {
    let fx = common::weitzenbock();
    assert!(worst_cyclic(&fx.conn, &fx.chart, 30) <= 1e-10);
}

/// In two dimensions the cyclic sum is an alternating 3-form and vanishes for
/// every connection; in three, constant non-symmetric coefficients break it.
#[test]
fn torsion_and_curvature_break_the_cyclic_identity() {
    let chart = parstruct_core::Chart::standard(vec![(-1.0, 1.0); 3]).unwrap();
    let fields = (0..27)
        .map(|k| ScalarField::constant(((k * 7 % 11) as f64 - 5.0) / 5.0))
        .collect();
    let g = Connection::from_fields(FramePair::coordinate(3), fields).unwrap();
    assert!(!is_symmetric(&g, &chart, 5, 1, 1e-10).unwrap().symmetric);
    assert!(worst_cyclic(&g, &chart, 30) > 1e-3);
}

#[test]
fn symmetry_detection() {
    let sphere = common::sphere();
    assert!(
        is_symmetric(&sphere.conn, &sphere.chart, 20, 1, 1e-10)
            .unwrap()
            .symmetric
    );
    let w = common::weitzenbock();
    let report = is_symmetric(&w.conn, &w.chart, 20, 1, 1e-10).unwrap();
    assert!(!report.symmetric);
    assert!(report.torsion > 1e-3 && report.theta > 1e-3);
    assert!(w.chart.contains(&report.worst_point));
}

#[test]
fn deformation_laws() {
    for fx in common::all() {
        let names: Vec<&str> = fx.chart.names().iter().map(String::as_str).collect();
        let (x, y) = (names[0], names[1]);
        let rows = [
            [format!("2 + sin({x})"), format!("0.3*{y}")],
            [format!("cos({y})"), "3".to_string()],
        ];
        let lambda = op(&names, [[&rows[0][0], &rows[0][1]], [&rows[1][0], &rows[1][1]]]);
        let d = Deformation::new(&fx.chart, lambda).unwrap();
        let g = deform(&fx.conn, &d);
        for i in 0..50 {
            let mut s = sampler(&fx.chart, SEED + 1, i);
            let (a, v, w) = (s.vector_field(), s.vector_field(), s.form_field());
            let p = s.point();
            assert!(d.inverse_residual(&p).unwrap() <= 1e-12);
            assert!(d.adjoint_residual(&w, &v, &p).unwrap() <= 1e-10);
            assert!(
                d.dps2_residual(&fx.conn, &g, &a, &v, &p).unwrap() <= 1e-10,
                "{}",
                fx.name
            );
            assert!(
                d.dps4_residual(&fx.conn, &g, &a, &w, &p).unwrap() <= 1e-10,
                "{}",
                fx.name
            );
        }
    }
}

#[test]
fn constant_scaling_deformation_is_trivial() {
    let fx = common::sphere();
    let d = Deformation::new(&fx.chart, op(&["th", "ph"], [["2.5", "0"], ["0", "2.5"]])).unwrap();
    let g = deform(&fx.conn, &d);
    let coord = FramePair::coordinate(2);
    for i in 0..10 {
        let p = sampler(&fx.chart, SEED + 2, i).point();
        let d = max_diff(
            &g.coefficients_in(&coord, &p).unwrap(),
            &fx.conn.coefficients_in(&coord, &p).unwrap(),
        );
        assert!(d <= 1e-12);
    }
}

#[test]
fn deformation_is_functorial() {
    let fx = common::sphere();
    let names = ["th", "ph"];
    let l = op(&names, [["1 + 0.2*sin(ph)", "0"], ["th", "1"]]);
    let m = op(&names, [["2", "cos(th)"], ["0", "1 + th^2"]]);
    let (dl, dm) = (
        Deformation::new(&fx.chart, l.clone()).unwrap(),
        Deformation::new(&fx.chart, m.clone()).unwrap(),
    );
    let dml = Deformation::new(&fx.chart, m.compose(&l)).unwrap();
    let twice = deform(&deform(&fx.conn, &dl), &dm);
    let once = deform(&fx.conn, &dml);
    for i in 0..10 {
        let mut s = sampler(&fx.chart, SEED + 3, i);
        let (a, v) = (s.vector_field(), s.vector_field());
        let p = s.point();
        let d = max_diff(
            &twice.nabla(&a, &v).at(&p).unwrap(),
            &once.nabla(&a, &v).at(&p).unwrap(),
        );
        assert!(d <= 1e-10, "{d}");
    }
}

#[test]
fn singular_deformation_is_a_domain_error() {
    let chart = common::weitzenbock_chart();
    assert!(Deformation::new(&chart, op(&["x1", "x2"], [["x2", "0"], ["0", "1"]])).is_err());
}

#[test]
fn deformation_bridge_to_weitzenbock() {
    let flat = common::flat();
    let w = common::weitzenbock();
    let d = Deformation::new(&w.chart, op(&["x1", "x2"], [["1", "0"], ["0", "x1"]])).unwrap();
    let g = deform(&flat.conn, &d);
    let coord = FramePair::coordinate(2);
    for i in 0..50 {
        let p = sampler(&w.chart, SEED + 4, i).point();
        let diff = max_diff(
            &g.coefficients_in(&coord, &p).unwrap(),
            &w.conn.coefficients_in(&coord, &p).unwrap(),
        );
        assert!(diff <= 1e-10, "{diff}");
    }
}

#[test]
fn relative_structure_laws() {
    let r = common::weitzenbock_structure();
    let chart = common::weitzenbock_chart();
    let rho = CurvatureFamily::new(r.connection(), r.frame());
    for i in 0..50 {
        let mut s = sampler(&chart, SEED + 5, i);
        let (a, b, c, w) = (s.vector_field(), s.vector_field(), s.vector_field(), s.form_field());
        let p = s.point();
        assert!(r.rps3_residual(&a, &p).unwrap() <= 1e-10);
        assert!(r.rps5_residual(&a, &p).unwrap() <= 1e-10);
        assert!(r.rps6_residual(&a, &b, &p).unwrap() <= 1e-10);
        assert!(r.rps7_residual(&w, &p).unwrap() <= 1e-10);
        assert!(max_abs(&rho.rho_at(&a, &b, &c, &p).unwrap()) <= 1e-10);
    }
}

#[test]
fn random_relative_structures_are_flat() {
    let chart = common::sphere_chart();
    for i in 0..10 {
        let mut s = sampler(&chart, SEED + 6, i);
        let r = RelativeStructure::new(s.frame().unwrap());
        let rho = CurvatureFamily::new(r.connection(), r.frame());
        let (a, b, c) = (s.vector_field(), s.vector_field(), s.vector_field());
        let p = s.point();
        let got = rho.rho_at(&a, &b, &c, &p).unwrap();
        assert!(max_abs(&got) <= 1e-10, "{got:?}");
    }
}

#[test]
fn coordinate_relative_structure_is_flat_connection() {
    let r = RelativeStructure::new(FramePair::coordinate(2));
    let coefs = r.connection().coefficients_at(&[0.4, 1.1]).unwrap();
    assert!(coefs.iter().all(|c| *c == 0.0));
}

#[test]
fn singular_frame_is_rejected() {
    let chart = common::weitzenbock_chart();
    let b = vec![vf(&chart, &["1", "0"]), vf(&chart, &["0", "x2"])];
    assert!(RelativeStructure::from_vectors(&chart, b).is_err());
}

#[test]
fn split_theorem() {
    for fx in common::all() {
        let mut s = sampler(&fx.chart, SEED + 7, 0);
        let split = SplitDecomposition::new(&fx.conn, s.frame().unwrap());
        for i in 0..50 {
            let mut s = sampler(&fx.chart, SEED + 8, i);
            let (a, v, w) = (s.vector_field(), s.vector_field(), s.form_field());
            let p = s.point();
            assert!(split.sth2_residual(&a, &v, &p).unwrap() <= 1e-10, "{}", fx.name);
            assert!(split.sth4_residual(&a, &w, &p).unwrap() <= 1e-10, "{}", fx.name);
        }
    }
}

#[test]
fn sphere_split_in_coordinates_carries_all_of_gamma() {
    let fx = common::sphere();
    let split = SplitDecomposition::new(&fx.conn, FramePair::coordinate(2));
    let e_ph = VectorField::basis(2, 1);
    let got = split
        .gamma(&e_ph, &e_ph)
        .at(&[std::f64::consts::FRAC_PI_3, 0.0])
        .unwrap();
    let want = &common::oracle_rows("nabla")[0];
    assert!(max_diff(&got, want) <= 1e-10);
}

#[test]
fn relative_split_against_itself_is_trivial() {
    let r = common::weitzenbock_structure();
    let split = SplitDecomposition::new(r.connection(), r.frame().clone());
    let chart = common::weitzenbock_chart();
    for i in 0..10 {
        let mut s = sampler(&chart, SEED + 9, i);
        let (a, v) = (s.vector_field(), s.vector_field());
        assert!(max_abs(&split.gamma(&a, &v).at(&s.point()).unwrap()) <= 1e-12);
    }
}

#[test]
fn jacobian_laws() {
    let chart = common::weitzenbock_chart();
    let frame_b = common::weitzenbock_structure().frame().clone();
    let mut s = sampler(&chart, SEED + 10, 0);
    let frame_a = s.frame().unwrap();
    let j = JacobianField::new(&frame_a, &frame_b);
    let back = JacobianField::new(&frame_b, &frame_a);
    for i in 0..50 {
        let mut s = sampler(&chart, SEED + 11, i);
        let (a, v, w) = (s.vector_field(), s.vector_field(), s.form_field());
        let p = s.point();
        assert!(j.identity_residual(&p).unwrap() <= 1e-10);
        assert!(
            j.j()
                .compose(back.j())
                .distance_at(&VectorOperatorField::identity(2), &p)
                .unwrap()
                <= 1e-10
        );
        assert!(j.jf3_residual(&p).unwrap() <= 1e-10);
        assert!(j.jf4_residual(&a, &v, &p).unwrap() <= 1e-10);
        assert!(j.jf5_residual(&a, &w, &p).unwrap() <= 1e-10);
        assert!(j.jf6_residual(&p).unwrap() <= 1e-10);
    }
}

#[test]
fn relative_structures_of_one_frame_are_compatible() {
    let chart = common::weitzenbock_chart();
    let a = common::weitzenbock_structure();
    // the same frame, written differently
    let b = RelativeStructure::from_vectors(
        &chart,
        vec![vf(&chart, &["1", "0"]), vf(&chart, &["0", "exp(log(x1))"])],
    )
    .unwrap();
    let flat = Connection::flat(2);
    let points: Vec<Vec<f64>> = (0..20).map(|i| sampler(&chart, SEED + 12, i).point()).collect();
    assert!(compatibility_residual(a.connection(), b.connection(), &points).unwrap() <= 1e-9);
    assert!(compatibility_residual(a.connection(), &flat, &points).unwrap() > 1e-3);
}
