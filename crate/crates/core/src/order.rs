//! The componentwise (vector) order on R^n, strong-order witnesses, and
//! randomized falsification of map monotonicity.

use crate::dynamics::PointMap;
use crate::expr::{Interval, IntervalBox};
use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use thiserror::Error;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Error)]
pub enum OrderError {
    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },
}

/// The partial order `x <= y iff x_j <= y_j for all j` on R^n.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct VectorOrder {
    dim: usize,
}

impl VectorOrder {
    pub fn new(dim: usize) -> VectorOrder {
        assert!(dim > 0, "order needs a positive dimension");
        VectorOrder { dim }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    fn check(&self, x: &[f64], y: &[f64]) -> Result<(), OrderError> {
        for v in [x, y] {
            if v.len() != self.dim {
                return Err(OrderError::DimensionMismatch {
                    expected: self.dim,
                    got: v.len(),
                });
            }
        }
        Ok(())
    }

    pub fn leq(&self, x: &[f64], y: &[f64]) -> Result<bool, OrderError> {
        self.check(x, y)?;
        Ok(x.iter().zip(y).all(|(a, b)| a <= b))
    }

    pub fn strictly_less(&self, x: &[f64], y: &[f64]) -> Result<bool, OrderError> {
        Ok(self.leq(x, y)? && x != y)
    }

    /// Open boxes strictly below and strictly above `x`, inside the
    /// sup-norm ball of the given radius: shifted along the diagonal by
    /// radius/2 with half-width radius/8.
    pub fn strong_order_witness(&self, x: &[f64], radius: f64) -> OrderWitness {
        assert!(radius > 0.0, "witness radius must be positive");
        let shift = radius / 2.0;
        let hw = radius / 8.0;
        let boxed = |sign: f64| {
            IntervalBox::new(
                x.iter()
                    .map(|&c| {
                        let center = c + sign * shift;
                        Interval::new(center - hw, center + hw)
                    })
                    .collect(),
            )
        };
        OrderWitness {
            below: boxed(-1.0),
            above: boxed(1.0),
            center: x.to_vec(),
            radius,
        }
    }

    /// Samples comparable pairs `x <= y` in `bx` (y is x plus a nonnegative
    /// perturbation staying inside the box) and returns the first pair whose
    /// images violate the order, if any. Deterministic for a fixed seed.
    /// Pairs on which the map fails to evaluate are skipped.
    pub fn falsify_monotone(
        &self,
        map: &dyn PointMap,
        bx: &IntervalBox,
        samples: usize,
        seed: u64,
    ) -> Result<Option<MonotoneCounterexample>, OrderError> {
        assert!(samples >= 1, "need at least one sample");
        if bx.dim() != self.dim {
            return Err(OrderError::DimensionMismatch {
                expected: self.dim,
                got: bx.dim(),
            });
        }
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        for _ in 0..samples {
            let x = bx.sample(&mut rng);
            let y: Vec<f64> = x
                .iter()
                .enumerate()
                .map(|(j, &xj)| {
                    let room = bx.axis(j).hi - xj;
                    xj + rng.gen::<f64>() * room
                })
                .collect();
            let (tx, ty) = match (map.apply(&x), map.apply(&y)) {
                (Ok(tx), Ok(ty)) => (tx, ty),
                _ => continue,
            };
            if !self.leq(&tx, &ty)? {
                let violated = tx
                    .iter()
                    .zip(&ty)
                    .position(|(a, b)| a > b)
                    .expect("violation has a witnessing coordinate");
                return Ok(Some(MonotoneCounterexample {
                    x,
                    y,
                    image_x: tx,
                    image_y: ty,
                    violated_coordinate: violated,
                }));
            }
        }
        Ok(None)
    }
}

/// Open boxes `below < x < above` witnessing the strong-order property at
/// `x` for one neighborhood radius.
#[derive(Debug, Clone, PartialEq)]
pub struct OrderWitness {
    pub below: IntervalBox,
    pub above: IntervalBox,
    pub center: Vec<f64>,
    pub radius: f64,
}

impl OrderWitness {
    /// Re-checks the witness invariants: every corner of `below` is
    /// strictly under the center, every corner of `above` strictly over,
    /// and both boxes sit inside the sup-norm radius ball.
    pub fn verify(&self, order: &VectorOrder) -> bool {
        let inside = |bx: &IntervalBox| {
            bx.axes().iter().zip(&self.center).all(|(iv, &c)| {
                (iv.lo - c).abs() < self.radius && (iv.hi - c).abs() < self.radius
            })
        };
        let below_ok = self.below.corners().iter().all(|corner| {
            order
                .strictly_less(corner, &self.center)
                .unwrap_or(false)
        });
        let above_ok = self.above.corners().iter().all(|corner| {
            order
                .strictly_less(&self.center, corner)
                .unwrap_or(false)
        });
        below_ok && above_ok && inside(&self.below) && inside(&self.above)
    }
}

/// A comparable pair whose images are not comparable in order.
#[derive(Debug, Clone, PartialEq)]
pub struct MonotoneCounterexample {
    pub x: Vec<f64>,
    pub y: Vec<f64>,
    pub image_x: Vec<f64>,
    pub image_y: Vec<f64>,
    pub violated_coordinate: usize,
}
