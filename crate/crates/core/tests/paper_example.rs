//! The torus inside the localized 3-sphere, checked line by line.

mod common;

#[test]
fn sphere_levi_civita_lines() {
    common::criterion_1().unwrap();
}

#[test]
fn both_connections_are_pseudo_riemannian() {
    common::criterion_2().unwrap();
}

#[test]
fn induced_metric() {
    common::criterion_3().unwrap();
}

#[test]
fn induced_connection_lines() {
    common::criterion_4().unwrap();
}

#[test]
fn second_fundamental_form_and_mean_curvature() {
    common::criterion_5().unwrap();
}

#[test]
fn gauss_equation() {
    common::criterion_6().unwrap();
}

#[test]
fn flat_torus() {
    common::criterion_9().unwrap();
}

#[test]
fn oracle_parser_rejects_garbage() {
    let spec = ncgeom::models::formal_sphere_spec();
    assert!(common::module_vector("E_1*H_1 + Q", spec, 3, &[]).is_err());
    let v = common::module_vector("E_2 - E_3*t", spec, 3, &[]).unwrap();
    assert!(v.coord(0).is_zero() && v.coord(1).is_one());
}
