//! Attracting sets and periodic orbits: the logistic 2-cycle and the
//! cooperative Lotka-Volterra equilibrium through the time-1 map.

use monochaos::attract::{check_attracting, find_periodic_orbit, omega_limit};
use monochaos::dynamics::{builtin, iterate, time_t_map};

fn main() {
    // Logistic map at r = 3.2: the omega-limit set is a 2-cycle.
    let logistic = builtin("logistic(3.2)").unwrap();
    let estimate = omega_limit(&logistic, &[0.3], 2000, 200, 1e-4).unwrap();
    println!("logistic(3.2) omega-limit clusters: {:?}", estimate.cloud);
    println!("trapping box: {:?}", estimate.trapping_box.axes());
    println!("invariance defect: {:.2e}", estimate.invariance_defect);

    let report = check_attracting(&logistic, &estimate, 200, 400, 42);
    println!(
        "attraction: {:.0}% of probes, sup-distance falls to {:.2e}",
        100.0 * report.attracts_fraction,
        report.uniform_bound_curve.last().unwrap()
    );

    let settled = iterate(&logistic, &[0.3], 500).unwrap();
    let orbit = find_periodic_orbit(&logistic, settled.last(), 8, 1e-2, 1e-10)
        .unwrap()
        .found()
        .cloned()
        .expect("2-cycle");
    println!(
        "refined period-{} orbit: {:?} (residual {:.2e})\n",
        orbit.period, orbit.points, orbit.residual
    );

    // Cooperative field: everything spirals into the equilibrium (2, 2).
    let map = time_t_map(builtin("coop-lv-2d").unwrap(), 1.0, 0.01).unwrap();
    let estimate = omega_limit(&map, &[0.1, 0.1], 60, 20, 1e-4).unwrap();
    println!("coop-lv-2d time-1 map omega cluster: {:?}", estimate.cloud);
    let orbit = find_periodic_orbit(&map, &estimate.cloud[0], 8, 1e-3, 1e-9)
        .unwrap()
        .found()
        .cloned()
        .expect("fixed point");
    println!(
        "fixed point {:?} with residual {:.2e}",
        orbit.points[0], orbit.residual
    );
}
