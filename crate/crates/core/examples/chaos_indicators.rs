//! The numerical chaos indicators side by side on three 1-D maps:
//! sensitivity separation, orbit coverage of reference bins, and the gap
//! from occupied bins to known periodic orbits.

use monochaos::attract::PeriodicOrbitEstimate;
use monochaos::chaos::{
    periodic_density_gap_with_reference, reference_bins, sensitivity_estimate,
    transitivity_coverage_with_reference,
};
use monochaos::dynamics::{builtin, FnMap, PointMap};
use monochaos::expr::IntervalBox;

fn indicators(name: &str, map: &dyn PointMap, extra_orbits: &[PeriodicOrbitEstimate]) {
    let bx = IntervalBox::from_bounds(&[(0.0, 1.0)]);
    let sens = sensitivity_estimate(map, &bx, 1e-6, 64, 30, 42).unwrap();
    let reference = reference_bins(map, &bx, 128, 8, 1000, 20_000, 42).unwrap();
    let coverage = transitivity_coverage_with_reference(map, &reference, &[0.37], 100_000).unwrap();
    print!(
        "{name:<22} min-max-separation {:.3}   coverage {:.3}",
        sens.delta_hat, coverage
    );
    if extra_orbits.is_empty() {
        println!();
    } else {
        let gap = periodic_density_gap_with_reference(&reference, extra_orbits).unwrap();
        println!(
            "   periodic gap {:.5} (bin radius {:.5})",
            gap,
            reference.bin_radius()
        );
    }
}

fn main() {
    // Exact rational cycles k/(2^p - 1) of the doubling map up to period 10.
    let mut cycles = Vec::new();
    for p in 1..=10u32 {
        let denom = (1u64 << p) - 1;
        for k in 0..denom {
            let mut points = Vec::new();
            let mut x = k as f64 / denom as f64;
            for _ in 0..p {
                points.push(vec![x]);
                x = (2.0 * x).fract();
            }
            cycles.push(PeriodicOrbitEstimate {
                period: p as usize,
                points,
                residual: 0.0,
                tolerance: 1e-12,
                refined: true,
            });
        }
    }

    let doubling = builtin("doubling").unwrap();
    indicators("doubling (chaotic)", &doubling, &cycles);

    let logistic = builtin("logistic(4)").unwrap();
    indicators("logistic r=4 (chaotic)", &logistic, &[]);

    let alpha = 0.381_966_011_250_105f64;
    let rotation = FnMap::new(1, move |x: &[f64]| vec![(x[0] + alpha).fract()]);
    indicators("circle rotation", &rotation, &[]);
    println!("(the rotation separates nothing: nearby points stay within the initial 1e-6)");
}
