//! End-to-end construction runs on the standard examples.

use andreev::angles::AngleAssignment;
use andreev::combinatorics::{cube, dodecahedron};
use andreev::construct::{construct, PipelineConfig};
use andreev::lorentz::VertexClass;
use std::f64::consts::PI;

#[test]
fn cube_two_pi_fifths() {
    let c = cube();
    let a = AngleAssignment::uniform(&c, 2.0 * PI / 5.0);
    let cfg = PipelineConfig::default();
    let out = construct(&c, &a, &cfg).unwrap();
    let got = out.realization.extract_angles().unwrap();
    assert!(got.infinity_distance(&a) < 1e-9);
    assert!(out.realization.vertices().iter().all(VertexClass::is_finite));
}

#[test]
fn dodecahedron_two_pi_fifths() {
    let c = dodecahedron();
    let a = AngleAssignment::uniform(&c, 2.0 * PI / 5.0);
    let cfg = PipelineConfig::default();
    let out = construct(&c, &a, &cfg).unwrap();
    let got = out.realization.extract_angles().unwrap();
    assert!(got.infinity_distance(&a) < 1e-9);
    assert!(out.realization.vertices().iter().all(VertexClass::is_finite));
    println!("{}", out.report.to_text());
}
