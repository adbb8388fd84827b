use std::f64::consts::{FRAC_PI_4, PI};

use cmera::{
    cmera_correlator, exact_correlator, kernel_value, BoundaryCondition, DefectParams, Geometry, KernelFn,
    Observable, Profile, QuadratureSpec, Scale, Suite, SuiteReport,
};
use proptest::prelude::*;

#[test]
fn magic_long_distance_matches_conformal_value() {
    let spec = QuadratureSpec::default();
    let p = Profile::magic(Scale::unit());
    let c = cmera_correlator(&Geometry::FullLine, &p, &Observable::PiPi, 30.0, 0.0, &spec).unwrap();
    let exact = -1.0 / (2.0 * PI * 900.0);
    assert!((exact + 1.76839e-4).abs() < 1e-9);
    assert!(((c - exact) / exact).abs() < 0.01, "{c} vs {exact}");
}

#[test]
fn scale_enters_as_dimension_two() {
    let spec = QuadratureSpec::default();
    let g = Geometry::boundary(BoundaryCondition::Neumann);
    let unit = cmera_correlator(&g, &Profile::gaussian(Scale::unit()), &Observable::PiPi, 3.0, 1.0, &spec).unwrap();
    let l = 2.5;
    let scaled =
        cmera_correlator(&g, &Profile::gaussian(Scale::new(l).unwrap()), &Observable::PiPi, 3.0 / l, 1.0 / l, &spec)
            .unwrap();
    assert!((scaled / (l * l) - unit).abs() < 1e-9);
}

#[test]
fn trivial_defect_is_the_full_line() {
    let spec = QuadratureSpec::default();
    let p = Profile::gaussian(Scale::unit());
    let d = Geometry::defect(FRAC_PI_4).unwrap();
    for (x, y) in [(-3.0, 2.0), (4.0, 1.5), (-0.5, -7.0)] {
        let a = cmera_correlator(&d, &p, &Observable::PiPi, x, y, &spec).unwrap();
        let b = cmera_correlator(&Geometry::FullLine, &p, &Observable::PiPi, x, y, &spec).unwrap();
        assert!((a - b).abs() < 1e-12);
        let k = KernelFn::new(d, p).unwrap();
        assert!(k.modification(x, y).unwrap().abs() < 1e-16);
    }
}

#[test]
fn contact_and_domain_are_rejected() {
    let spec = QuadratureSpec::default();
    let p = Profile::magic(Scale::unit());
    let g = Geometry::boundary(BoundaryCondition::Dirichlet);
    assert!(exact_correlator(&g, &Observable::PiPi, 1.0, 1.0).is_err());
    assert!(cmera_correlator(&g, &p, &Observable::PiPi, -1.0, 1.0, &spec).unwrap_err().is_validation());
    assert!(Geometry::defect(2.0).is_err());
}

#[test]
fn suite_reports_serialize() {
    let r = cmera::run_suite(Suite::Flow, 1).unwrap();
    let text = serde_json::to_string(&r).unwrap();
    let back: Vec<SuiteReport> = serde_json::from_str(&text).unwrap();
    assert_eq!(back, r);
    assert!(!text.contains("\"oracle\""));
}

proptest! {
    #[test]
    fn reflection_and_transmission_sum_to_one(theta in -1.57f64..1.57) {
        let p = DefectParams::new(theta);
        prop_assert!((p.reflection + p.transmission - 1.0).abs() <= 4.0 * f64::EPSILON);
        prop_assert!(p.reflection >= 0.0 && p.transmission >= 0.0);
    }

    #[test]
    fn exact_correlator_is_symmetric(theta in -1.5f64..1.5, x in -20.0f64..20.0, y in -20.0f64..20.0) {
        prop_assume!((x - y).abs() > 1e-3 && x != 0.0 && y != 0.0);
        let g = Geometry::defect(theta).unwrap();
        let a = exact_correlator(&g, &Observable::PiPi, x, y).unwrap();
        let b = exact_correlator(&g, &Observable::PiPi, y, x).unwrap();
        prop_assert!((a - b).abs() <= 1e-12 * a.abs());
    }

    #[test]
    fn boundary_kernel_is_symmetric(x in 0.01f64..10.0, y in 0.01f64..10.0) {
        for c in [BoundaryCondition::Dirichlet, BoundaryCondition::Neumann] {
            let k = KernelFn::new(Geometry::boundary(c), Profile::magic(Scale::unit())).unwrap();
            let a = kernel_value(&k, x, y).unwrap();
            let b = kernel_value(&k, y, x).unwrap();
            prop_assert!((a - b).abs() <= 1e-15);
        }
    }
}
