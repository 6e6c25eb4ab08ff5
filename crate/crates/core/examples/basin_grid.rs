//! Basin sampling: label grid points by whether their orbits reach the
//! attracting set. Prints an ASCII picture for the logistic 2-cycle and
//! the squaring map's basin threshold at x = 1.

use monochaos::attract::{basin_sample, omega_limit, BasinLabel};
use monochaos::dynamics::{builtin, FnMap};
use monochaos::expr::IntervalBox;

fn glyph(label: BasinLabel) -> char {
    match label {
        BasinLabel::Attracted => '#',
        BasinLabel::NotAttracted => '.',
        BasinLabel::Divergent => 'x',
    }
}

fn main() {
    let logistic = builtin("logistic(3.2)").unwrap();
    let estimate = omega_limit(&logistic, &[0.3], 2000, 200, 1e-4).unwrap();
    let grid = basin_sample(
        &logistic,
        &estimate,
        &IntervalBox::from_bounds(&[(0.0, 1.0)]),
        61,
        2000,
    )
    .unwrap();
    println!("logistic(3.2) basin on [0,1] (61 points, # attracted):");
    println!("{}", grid.labels.iter().map(|&l| glyph(l)).collect::<String>());
    println!("(the endpoints map into the repelling fixed point at 0)\n");

    let square = FnMap::new(1, |x: &[f64]| vec![x[0] * x[0]]);
    let origin = omega_limit(&square, &[0.5], 50, 20, 1e-6).unwrap();
    let grid = basin_sample(
        &square,
        &origin,
        &IntervalBox::from_bounds(&[(0.0, 2.0)]),
        41,
        80,
    )
    .unwrap();
    println!("x -> x^2 basin of the origin on [0,2] (41 points, x divergent):");
    println!("{}", grid.labels.iter().map(|&l| glyph(l)).collect::<String>());
    println!("(threshold sits at the repelling fixed point x = 1)");
}
