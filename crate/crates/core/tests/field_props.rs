mod common;

use common::{max_abs, max_diff, sampler};
use parstruct_core::cartan::{bivector, wedge1};
use parstruct_core::chart::{
    derivative, directional_derivative, exterior_derivative_1form, lie_bracket, pairing, scalar_differential, Chart,
};
use parstruct_core::exterior::{pair, KForm, KVector};
use parstruct_core::frame::{dual_frame, idx3, structure_coefficients};
use parstruct_core::jet::dot;

const SEED: u64 = 0x5eed;

fn chart3() -> Chart {
    Chart::standard(vec![(-1.5, 1.5), (-1.0, 2.0), (0.5, 2.5)]).unwrap()
}

#[test]
fn jacobi_identity() {
    for chart in [common::sphere_chart(), chart3()] {
        for i in 0..20 {
            let mut s = sampler(&chart, SEED, i);
            let (a, b, c) = (s.vector_field(), s.vector_field(), s.vector_field());
            let p = s.point();
            let sum = lie_bracket(&a, &lie_bracket(&b, &c))
                .add(&lie_bracket(&b, &lie_bracket(&c, &a)))
                .add(&lie_bracket(&c, &lie_bracket(&a, &b)));
            assert!(max_abs(&sum.at(&p).unwrap()) <= 1e-10);
            assert!(max_abs(&lie_bracket(&a, &a).at(&p).unwrap()) == 0.0);
        }
    }
}

#[test]
fn bracket_is_antisymmetric() {
    let chart = chart3();
    let mut s = sampler(&chart, SEED, 99);
    let (a, b) = (s.vector_field(), s.vector_field());
    let p = s.point();
    let ab = lie_bracket(&a, &b).at(&p).unwrap();
    let ba = lie_bracket(&b, &a).at(&p).unwrap();
    assert!(ab.iter().zip(&ba).all(|(x, y)| *x == -*y));
}

#[test]
fn leibniz_rule() {
    let chart = chart3();
    for i in 0..30 {
        let mut s = sampler(&chart, SEED, i);
        let (f, g, a) = (s.scalar_field(), s.scalar_field(), s.vector_field());
        let p = s.point();
        let lhs = derivative(&a, &f.mul(&g)).at(&p).unwrap();
        let rhs = derivative(&a, &f).at(&p).unwrap() * g.at(&p).unwrap()
            + f.at(&p).unwrap() * derivative(&a, &g).at(&p).unwrap();
        assert!((lhs - rhs).abs() <= 1e-10, "{lhs} vs {rhs}");
    }
}

#[test]
fn differential_pairs_to_directional_derivative() {
    let chart = chart3();
    for i in 0..20 {
        let mut s = sampler(&chart, SEED, i);
        let (f, a) = (s.scalar_field(), s.vector_field());
        let p = s.point();
        let df = scalar_differential(&f, &p).unwrap();
        let lhs = dot(&df, &a.at(&p).unwrap());
        let rhs = directional_derivative(&a, &f, &p).unwrap();
        assert!((lhs - rhs).abs() <= 1e-12 * (1.0 + rhs.abs()));
    }
}

/// `dω = Σ_ν d(ω(e_ν))∧ε^ν − ½⟨ω,[e_μ,e_ν]⟩ε^μ∧ε^ν` in any frame.
#[test]
fn exterior_derivative_in_any_frame() {
    for chart in [common::sphere_chart(), chart3()] {
        for i in 0..20 {
            let mut s = sampler(&chart, SEED, i);
            let frame = s.frame().unwrap();
            let w = s.form_field();
            let p = s.point();
            let (e, eps) = (frame.vectors(), frame.coforms());
            let n = chart.dim();
            let mut rhs = KForm::zero(n, 2).unwrap();
            for nu in 0..n {
                let d = scalar_differential(&pairing(&w, &e[nu]), &p).unwrap();
                rhs = &rhs + &wedge1(&d, &eps[nu].at(&p).unwrap()).unwrap();
            }
            for mu in 0..n {
                for nu in mu + 1..n {
                    let k = dot(&w.at(&p).unwrap(), &lie_bracket(&e[mu], &e[nu]).at(&p).unwrap());
                    let basis = wedge1(&eps[mu].at(&p).unwrap(), &eps[nu].at(&p).unwrap()).unwrap();
                    rhs = &rhs - &basis.scale(k);
                }
            }
            let lhs = exterior_derivative_1form(&w, &p).unwrap();
            assert!((&lhs - &rhs).max_abs() <= 1e-10, "{lhs} vs {rhs}");
        }
    }
}

#[test]
fn dual_frame_duality_at_100_points() {
    let chart = chart3();
    let mut s = sampler(&chart, SEED, 7);
    let frame = s.frame().unwrap();
    let beta = dual_frame(&chart, frame.vectors()).unwrap();
    for _ in 0..100 {
        let p = s.point();
        for (mu, bm) in beta.iter().enumerate() {
            for (nu, bn) in frame.vectors().iter().enumerate() {
                let d = dot(&bm.at(&p).unwrap(), &bn.at(&p).unwrap());
                let want = if mu == nu { 1.0 } else { 0.0 };
                assert!((d - want).abs() <= 1e-12);
            }
        }
    }
}

#[test]
fn structure_coefficients_are_antisymmetric() {
    let chart = chart3();
    for i in 0..10 {
        let mut s = sampler(&chart, SEED, i);
        let frame = s.frame().unwrap();
        let p = s.point();
        let c = structure_coefficients(&frame, &p).unwrap();
        for sg in 0..3 {
            for m in 0..3 {
                for n in 0..3 {
                    assert_eq!(c[idx3(3, sg, m, n)], -c[idx3(3, sg, n, m)]);
                }
            }
        }
    }
}

#[test]
fn wedge_anticommutes_and_pairs_as_determinant() {
    let chart = chart3();
    for i in 0..50 {
        let mut s = sampler(&chart, SEED, i);
        let (x, y) = (s.vector(), s.vector());
        let xy = KVector::grade_one(&x).wedge(&KVector::grade_one(&y)).unwrap();
        let yx = KVector::grade_one(&y).wedge(&KVector::grade_one(&x)).unwrap();
        assert!((&xy + &yx).components().iter().all(|c| *c == 0.0));

        let (a, b) = (s.vector(), s.vector());
        let (u, v) = (s.vector(), s.vector());
        let det = dot(&a, &u) * dot(&b, &v) - dot(&a, &v) * dot(&b, &u);
        let got = pair(&wedge1(&a, &b).unwrap(), &bivector(&u, &v).unwrap()).unwrap();
        assert!((got - det).abs() <= 1e-12 * (1.0 + det.abs()), "{got} vs {det}");
    }
}

#[test]
fn wedge_is_associative() {
    let chart = chart3();
    let mut s = sampler(&chart, SEED, 3);
    let (a, b, c) = (
        KForm::grade_one(&s.vector()),
        KForm::grade_one(&s.vector()),
        KForm::grade_one(&s.vector()),
    );
    let l = a.wedge(&b).unwrap().wedge(&c).unwrap();
    let r = a.wedge(&b.wedge(&c).unwrap()).unwrap();
    assert!(max_diff(l.components(), r.components()) <= 1e-12);
}
