//! Consistency checks that span modules: certificates against randomized
//! falsification, and the theorem's empirical signature on certified maps.

use monochaos::attract::{check_attracting, find_periodic_orbit, omega_limit};
use monochaos::dynamics::{builtin, time_t_map};
use monochaos::expr::{IntervalBox, SystemDef, SystemKind};
use monochaos::monocert::{verify_cooperative_field, verify_monotone_map, Verdict};
use monochaos::order::VectorOrder;
use std::collections::BTreeMap;

/// A certified map never yields a falsification counterexample.
#[test]
fn certified_map_survives_falsification() {
    let sys = SystemDef::new(
        "contractive-shear",
        SystemKind::DiscreteMap,
        &["x", "y"],
        BTreeMap::new(),
        &["0.5*x + 0.1*y + 0.2", "0.1*x + 0.5*y + 0.2"],
    )
    .unwrap();
    let bx = IntervalBox::cube(0.0, 1.0, 2);
    let cert = verify_monotone_map(&sys, &bx, 3).unwrap();
    assert_eq!(cert.verdict, Verdict::Certified);
    let order = VectorOrder::new(2);
    let ce = order.falsify_monotone(&sys, &bx, 10_000, 42).unwrap();
    assert!(ce.is_none(), "counterexample against a certificate: {ce:?}");
}

/// A certified cooperative field's small-time flow map is monotone on
/// sampled comparable pairs (tau = 0.1, 1000 pairs).
#[test]
fn certified_field_time_map_survives_falsification() {
    let sys = builtin("coop-lv-2d").unwrap();
    let bx = IntervalBox::cube(0.0, 5.0, 2);
    let cert = verify_cooperative_field(&sys, &bx, 2).unwrap();
    assert_eq!(cert.verdict, Verdict::Certified);
    let map = time_t_map(sys, 0.1, 0.005).unwrap();
    let order = VectorOrder::new(2);
    let ce = order.falsify_monotone(&map, &bx, 1000, 42).unwrap();
    assert!(ce.is_none(), "flow of a cooperative field reversed order: {ce:?}");
}

/// A refuted map is falsified, and the falsifier's pair replays the
/// violation.
#[test]
fn refuted_map_is_falsified() {
    let sys = SystemDef::new(
        "competitive",
        SystemKind::DiscreteMap,
        &["x", "y"],
        BTreeMap::new(),
        &["x - 0.3*y", "y - 0.3*x"],
    )
    .unwrap();
    let bx = IntervalBox::cube(0.0, 1.0, 2);
    let cert = verify_monotone_map(&sys, &bx, 3).unwrap();
    assert_eq!(cert.verdict, Verdict::Refuted);
    let order = VectorOrder::new(2);
    let ce = order
        .falsify_monotone(&sys, &bx, 10_000, 42)
        .unwrap()
        .expect("a negative coupling must be falsifiable");
    assert!(order.leq(&ce.x, &ce.y).unwrap());
    assert!(!order.leq(&ce.image_x, &ce.image_y).unwrap());
}

/// The theorem's empirical signature: for a certified monotone map whose
/// estimate attracts every probe, the periodic-orbit search from a cloud
/// point succeeds.
#[test]
fn certified_attracting_maps_yield_periodic_orbits() {
    let sys = SystemDef::new(
        "contractive-shear",
        SystemKind::DiscreteMap,
        &["x", "y"],
        BTreeMap::new(),
        &["0.5*x + 0.1*y + 0.2", "0.1*x + 0.5*y + 0.2"],
    )
    .unwrap();
    let bx = IntervalBox::cube(0.0, 1.0, 2);
    assert_eq!(
        verify_monotone_map(&sys, &bx, 3).unwrap().verdict,
        Verdict::Certified
    );
    let estimate = omega_limit(&sys, &[0.9, 0.1], 200, 50, 1e-8).unwrap();
    let attraction = check_attracting(&sys, &estimate, 50, 80, 7);
    assert_eq!(attraction.attracts_fraction, 1.0);
    let search = find_periodic_orbit(&sys, &estimate.cloud[0], 8, 1e-3, 1e-10).unwrap();
    let orbit = search.found().expect("theorem signature: orbit expected");
    assert_eq!(orbit.period, 1);
    // Fixed point of the affine map: x = y = 0.2 / 0.4 = 0.5.
    assert!((orbit.points[0][0] - 0.5).abs() < 1e-9);
    assert!((orbit.points[0][1] - 0.5).abs() < 1e-9);
}
