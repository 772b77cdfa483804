#![allow(dead_code)]

use parstruct_core::chart::{Chart, ScalarField, VectorField};
use parstruct_core::expr::compile;
use parstruct_core::frame::{idx3, FramePair};
use parstruct_core::sample::{Sampler, SplitMix64};
use parstruct_core::zoo::RelativeStructure;
use parstruct_core::Connection;

pub struct Fixture {
    pub name: &'static str,
    pub chart: Chart,
    pub conn: Connection,
}

pub fn flat() -> Fixture {
    Fixture {
        name: "flat",
        chart: Chart::standard(vec![(-2.0, 2.0), (-2.0, 2.0)]).unwrap(),
        conn: Connection::flat(2),
    }
}

pub fn sphere_chart() -> Chart {
    Chart::new(vec!["th", "ph"], vec![(0.3, 2.8), (0.0, std::f64::consts::TAU)]).unwrap()
}

pub fn sphere() -> Fixture {
    let chart = sphere_chart();
    let c = |s: &str| ScalarField::from_expr(compile(s, chart.names()).unwrap());
    let mut fields: Vec<ScalarField> = (0..8).map(|_| ScalarField::constant(0.0)).collect();
    fields[idx3(2, 0, 1, 1)] = c("-sin(th)*cos(th)");
    fields[idx3(2, 1, 0, 1)] = c("cos(th)/sin(th)");
    fields[idx3(2, 1, 1, 0)] = c("cos(th)/sin(th)");
    Fixture {
        name: "sphere",
        conn: Connection::from_fields(FramePair::coordinate(2), fields).unwrap(),
        chart,
    }
}

pub fn weitzenbock_chart() -> Chart {
    Chart::standard(vec![(0.5, 3.0), (-1.0, 2.0)]).unwrap()
}

pub fn vf(chart: &Chart, comps: &[&str]) -> VectorField {
    VectorField::from_components(
        comps
            .iter()
            .map(|s| ScalarField::from_expr(compile(s, chart.names()).unwrap()))
            .collect(),
    )
}

pub fn weitzenbock_structure() -> RelativeStructure {
    let chart = weitzenbock_chart();
    let b = vec![vf(&chart, &["1", "0"]), vf(&chart, &["0", "x1"])];
    RelativeStructure::from_vectors(&chart, b).unwrap()
}

pub fn weitzenbock() -> Fixture {
    Fixture {
        name: "weitzenbock",
        conn: weitzenbock_structure().connection().clone(),
        chart: weitzenbock_chart(),
    }
}

pub fn all() -> Vec<Fixture> {
    vec![flat(), sphere(), weitzenbock()]
}

pub fn sampler(chart: &Chart, seed: u64, i: usize) -> Sampler<'_> {
    Sampler::new(chart, SplitMix64::substream(seed, 0, i as u32))
}

pub fn max_diff(a: &[f64], b: &[f64]) -> f64 {
    assert_eq!(a.len(), b.len());
    a.iter().zip(b).fold(0.0, |m, (x, y)| m.max((x - y).abs()))
}

pub fn max_abs(a: &[f64]) -> f64 {
    a.iter().fold(0.0, |m, x| m.max(x.abs()))
}

/// Rows of `tests/data/sphere_oracle.txt` with the given tag.
pub fn oracle_rows(tag: &str) -> Vec<Vec<f64>> {
    let text = include_str!("../data/sphere_oracle.txt");
    text.lines()
        .filter(|l| !l.starts_with('#'))
        .filter_map(|l| {
            let mut parts = l.split_whitespace();
            (parts.next() == Some(tag)).then(|| parts.map(|x| x.parse().unwrap()).collect())
        })
        .collect()
}
