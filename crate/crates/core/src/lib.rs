//! monochaos: analysis toolkit for chaotic and monotone dynamical systems.
//!
//! The crate provides:
//!
//! - [`expr`]: an expression language for defining maps and vector fields,
//!   with symbolic differentiation and outward-rounded interval evaluation;
//! - [`order`]: the componentwise vector order on R^n, strong-order
//!   witnesses, and randomized falsification of map monotonicity;
//! - [`monocert`]: interval certificates that a vector field is cooperative
//!   or that a map has a nonnegative Jacobian over a box;
//! - [`dynamics`]: map iteration, fixed-step RK4 integration, time-t maps,
//!   Poincare sections, and a catalog of builtin systems;
//! - [`attract`]: attracting-set estimates, periodic-orbit detection with
//!   Newton refinement, attraction checks, and basin sampling;
//! - [`chaos`]: numerical chaos indicators (sensitivity separation,
//!   Benettin Lyapunov exponents, transitivity coverage, periodic density);
//! - [`sft`]: exact decision procedures for chaos conditions on subshifts
//!   of finite type presented as directed graphs;
//! - [`lab`]: config-driven experiments behind the `monochaos` CLI.
//!
//! See the crate examples for runnable walkthroughs of each capability.

pub mod attract;
pub mod chaos;
pub mod dynamics;
pub mod expr;
pub mod lab;
pub mod monocert;
pub mod order;
pub mod sft;
