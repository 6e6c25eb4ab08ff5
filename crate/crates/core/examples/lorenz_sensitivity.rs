//! Two Lorenz trajectories started 1e-8 apart drift macroscopically apart
//! within a few dozen time units.

use monochaos::attract::dist;
use monochaos::dynamics::{builtin, integrate_rk4};

fn main() {
    let sys = builtin("lorenz-classical").unwrap();
    let a = integrate_rk4(&sys, &[1.0, 1.0, 1.0], 0.001, 50.0).unwrap();
    let b = integrate_rk4(&sys, &[1.0 + 1e-8, 1.0, 1.0], 0.001, 50.0).unwrap();

    println!("  t      separation");
    let mut next_threshold = 1e-8;
    for ((t, sa), sb) in a.times.iter().zip(&a.states).zip(&b.states) {
        let d = dist(sa, sb);
        if d >= next_threshold {
            println!("{t:6.2}   {d:.3e}");
            next_threshold *= 10.0;
        }
    }
    let final_d = dist(a.last(), b.last());
    println!("at t = 50 the states differ by {final_d:.3} (attractor diameter scale)");
}
