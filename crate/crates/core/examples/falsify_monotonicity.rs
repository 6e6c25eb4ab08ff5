//! Randomized falsification of map monotonicity: sample comparable pairs
//! x <= y and look for images that violate the order.

use monochaos::dynamics::{builtin, time_t_map, FnMap};
use monochaos::expr::IntervalBox;
use monochaos::order::VectorOrder;

fn main() {
    let order1 = VectorOrder::new(1);

    let doubling = FnMap::new(1, |x: &[f64]| vec![2.0 * x[0]]);
    let bx = IntervalBox::from_bounds(&[(0.0, 1.0)]);
    let result = order1.falsify_monotone(&doubling, &bx, 10_000, 42).unwrap();
    println!("x -> 2x on [0,1]:      {result:?}");

    let reflect = FnMap::new(1, |x: &[f64]| vec![-x[0]]);
    let bx = IntervalBox::from_bounds(&[(-1.0, 1.0)]);
    let ce = order1
        .falsify_monotone(&reflect, &bx, 10_000, 42)
        .unwrap()
        .expect("reflection reverses order");
    println!(
        "x -> -x on [-1,1]:     counterexample x = {:?}, y = {:?}",
        ce.x, ce.y
    );

    let order3 = VectorOrder::new(3);
    let lorenz_map = time_t_map(builtin("lorenz-classical").unwrap(), 1.0, 0.01).unwrap();
    let bx = IntervalBox::cube(-10.0, 10.0, 3);
    let ce = order3
        .falsify_monotone(&lorenz_map, &bx, 200, 42)
        .unwrap()
        .expect("the Lorenz flow is not order preserving");
    println!("lorenz time-1 map:     order violated at coordinate {}", ce.violated_coordinate);
    println!("  x  = {:?}", ce.x);
    println!("  y  = {:?}", ce.y);
    println!("  Tx = {:?}", ce.image_x);
    println!("  Ty = {:?}", ce.image_y);

    // Strong-order witnesses: open boxes strictly below and above a point
    // inside any neighborhood.
    let witness = order3.strong_order_witness(&[0.0, 0.0, 0.0], 1.0);
    println!(
        "strong-order witness at the origin, radius 1: below {:?}, above {:?}, valid {}",
        witness.below.axes()[0],
        witness.above.axes()[0],
        witness.verify(&order3)
    );
}
