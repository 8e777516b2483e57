//! The whole pipeline instantiates at f32 (with tolerances matching that
//! precision); f64 stays the precision the defaults are written for.

use jengap::classic::theorem1_bounds;
use jengap::uniform::{certify_uniform_convexity, thm7_lower_refinement, CertGrid, Certify};
use jengap::{
    FunctionSpec32, Instance32, Interval32, ModulusSpec32, Tolerance32, Verdict, WeightVector32,
};

#[test]
fn f32_pipeline_smoke() {
    let tol = Tolerance32::new(1e-5, 1e-4);
    let interval = Interval32::new(0.0, 1.0).unwrap();
    let inst = Instance32::new(
        vec![0.0, 1.0],
        WeightVector32::new(vec![0.2, 0.8]).unwrap(),
        WeightVector32::new(vec![0.5, 0.5]).unwrap(),
        FunctionSpec32::square(),
        Some(ModulusSpec32::squared()),
        interval,
    )
    .unwrap();

    let chain = theorem1_bounds(&inst, &tol).unwrap();
    assert_eq!(chain.verdict, Verdict::Verified);
    assert!((chain.terms[1].value - 0.16).abs() < 1e-5);

    let grid = CertGrid::new(16, 16, 9, tol).unwrap();
    let cert = certify_uniform_convexity(
        inst.f(),
        inst.phi().unwrap(),
        inst.interval(),
        &grid,
    )
    .unwrap();
    assert!(cert.passed);

    let refinement = thm7_lower_refinement(&inst, &tol, &Certify::Grid(grid)).unwrap();
    assert_eq!(refinement.verdict, Verdict::Verified);
    assert!(refinement.slack.abs() < 1e-5);
}
