//! The expression toolkit: parse a system, evaluate it, take symbolic
//! partials, and bound ranges over boxes with interval arithmetic.

use monochaos::expr::{diff, interval_eval, parse, IntervalBox};
use std::collections::BTreeMap;

fn main() {
    let variables: Vec<String> = ["x", "y", "z"].iter().map(|s| s.to_string()).collect();
    let mut parameters = BTreeMap::new();
    parameters.insert("rho".to_string(), 28.0);

    let e = parse("rho*x - y - x*z", &variables, &parameters).unwrap();
    println!("expression      {e}");
    println!("value at (1,1,3): {}", e.eval(&[1.0, 1.0, 3.0]).unwrap());

    for (i, name) in variables.iter().enumerate() {
        println!("d/d{name}          {}", diff(&e, i));
    }

    let bx = IntervalBox::from_bounds(&[(-20.0, 20.0), (-20.0, 20.0), (0.0, 50.0)]);
    let range = interval_eval(&e, &bx).unwrap();
    println!("range over box  [{}, {}]", range.lo, range.hi);

    let partial = diff(&e, 2); // -x
    let range = interval_eval(&partial, &bx).unwrap();
    println!("d/dz range      [{}, {}]  (straddles zero: not cooperative)", range.lo, range.hi);

    match parse("x +", &variables, &parameters) {
        Err(err) => println!("parse error     {err}"),
        Ok(_) => unreachable!(),
    }
}
