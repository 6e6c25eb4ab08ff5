//! Interval certificates: a cooperative Lotka-Volterra field certifies,
//! its competitive twin and the Lorenz field refute with concrete
//! witness points.

use monochaos::dynamics::builtin;
use monochaos::expr::{IntervalBox, SystemDef, SystemKind};
use monochaos::monocert::verify_cooperative_field;
use std::collections::BTreeMap;

fn main() {
    let coop = builtin("coop-lv-2d").unwrap();
    let cert = verify_cooperative_field(&coop, &IntervalBox::cube(0.0, 5.0, 2), 2).unwrap();
    println!("coop-lv-2d on [0,5]^2:");
    println!("{}\n", cert.to_json_string());

    let competitive = SystemDef::new(
        "competitive-lv-2d",
        SystemKind::VectorField,
        &["x", "y"],
        BTreeMap::new(),
        &["x*(1 - x - 0.5*y)", "y*(1 - y - 0.5*x)"],
    )
    .unwrap();
    let cert =
        verify_cooperative_field(&competitive, &IntervalBox::cube(0.0, 5.0, 2), 4).unwrap();
    println!("competitive-lv-2d on [0,5]^2 (negative coupling):");
    println!("{}\n", cert.to_json_string());

    let lorenz = builtin("lorenz-classical").unwrap();
    let cert =
        verify_cooperative_field(&lorenz, &IntervalBox::cube(-20.0, 20.0, 3), 6).unwrap();
    println!("lorenz-classical on [-20,20]^3:");
    println!("{}", cert.to_json_string());
    println!("witness replays: {}", cert.replay_witness(&lorenz));
}
