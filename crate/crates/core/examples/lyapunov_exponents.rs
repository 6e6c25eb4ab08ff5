//! Largest Lyapunov exponents by two-trajectory renormalization, with
//! the known values alongside.

use monochaos::chaos::lyapunov_benettin;
use monochaos::dynamics::{builtin, time_t_map, FnMap};

fn main() {
    let doubling = builtin("doubling").unwrap();
    let est = lyapunov_benettin(&doubling, &[0.37], 100_000, 4, 1.0, 42).unwrap();
    println!(
        "doubling map     {:+.4} +- {:.1e}   (ln 2 = {:+.4})",
        est.lambda1,
        est.stderr,
        std::f64::consts::LN_2
    );

    let logistic = builtin("logistic(4)").unwrap();
    let est = lyapunov_benettin(&logistic, &[0.37], 200_000, 1, 1.0, 42).unwrap();
    println!(
        "logistic r=4     {:+.4} +- {:.1e}   (ln 2 = {:+.4})",
        est.lambda1,
        est.stderr,
        std::f64::consts::LN_2
    );

    let angle = std::f64::consts::TAU * 0.381_966_011_250_105;
    let (s, c) = angle.sin_cos();
    let rotation = FnMap::new(2, move |p: &[f64]| {
        vec![c * p[0] - s * p[1], s * p[0] + c * p[1]]
    });
    let est = lyapunov_benettin(&rotation, &[1.0, 0.0], 50_000, 5, 1.0, 42).unwrap();
    println!("plane rotation   {:+.1e}              (isometry: 0)", est.lambda1);

    // For a flow, pass its time-tau map and the elapsed time per step.
    let tau = 0.5;
    let lorenz = time_t_map(builtin("lorenz-classical").unwrap(), tau, 0.005).unwrap();
    let est = lyapunov_benettin(&lorenz, &[1.0, 1.0, 1.0], 4000, 2, tau, 42).unwrap();
    println!(
        "lorenz flow      {:+.3} +- {:.1e}    (literature value near +0.9)",
        est.lambda1, est.stderr
    );
}
