//! Outward-rounded interval arithmetic.
//!
//! Every primitive operation returns an interval that contains the true
//! range of the operation over its inputs. Endpoints computed in floating
//! point are widened outward by [`WIDEN_ULPS`] ulps unless an error-free
//! transformation proves the endpoint exact; exact endpoints (in
//! particular exact zeros from products with a zero factor) are kept,
//! which is what lets sign certificates close on boxes touching the
//! boundary of the positive orthant.

use super::{EvalError, Expr, Func};
use serde::{Deserialize, Serialize};

const WIDEN_ULPS: u32 = 4;

/// Closed real interval `[lo, hi]`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Interval {
    pub lo: f64,
    pub hi: f64,
}

impl Interval {
    pub fn new(lo: f64, hi: f64) -> Interval {
        assert!(lo <= hi, "interval endpoints out of order: [{lo}, {hi}]");
        Interval { lo, hi }
    }

    pub fn point(v: f64) -> Interval {
        Interval { lo: v, hi: v }
    }

    pub fn width(&self) -> f64 {
        self.hi - self.lo
    }

    pub fn midpoint(&self) -> f64 {
        let m = 0.5 * (self.lo + self.hi);
        if m.is_finite() {
            m
        } else {
            0.5 * self.lo + 0.5 * self.hi
        }
    }

    pub fn contains(&self, v: f64) -> bool {
        self.lo <= v && v <= self.hi
    }

    pub fn contains_zero(&self) -> bool {
        self.contains(0.0)
    }

    pub fn neg(self) -> Interval {
        Interval {
            lo: -self.hi,
            hi: -self.lo,
        }
    }

    pub fn add(self, o: Interval) -> Interval {
        Interval {
            lo: lo_end(self.lo + o.lo, sum_exact(self.lo, o.lo)),
            hi: hi_end(self.hi + o.hi, sum_exact(self.hi, o.hi)),
        }
    }

    pub fn sub(self, o: Interval) -> Interval {
        Interval {
            lo: lo_end(self.lo - o.hi, sum_exact(self.lo, -o.hi)),
            hi: hi_end(self.hi - o.lo, sum_exact(self.hi, -o.lo)),
        }
    }

    pub fn mul(self, o: Interval) -> Interval {
        let cands = [
            (self.lo, o.lo),
            (self.lo, o.hi),
            (self.hi, o.lo),
            (self.hi, o.hi),
        ];
        let mut lo = f64::INFINITY;
        let mut hi = f64::NEG_INFINITY;
        let mut lo_exact = true;
        let mut hi_exact = true;
        for (a, b) in cands {
            let p = a * b;
            let exact = prod_exact(a, b, p);
            if p < lo {
                lo = p;
                lo_exact = exact;
            } else if p == lo && !exact {
                lo_exact = false;
            }
            if p > hi {
                hi = p;
                hi_exact = exact;
            } else if p == hi && !exact {
                hi_exact = false;
            }
        }
        Interval {
            lo: lo_end(lo, lo_exact),
            hi: hi_end(hi, hi_exact),
        }
    }

    /// Fails when the divisor straddles zero; certification callers treat
    /// that as an unresolvable sub-box.
    pub fn div(self, o: Interval) -> Result<Interval, IntervalError> {
        if o.contains_zero() {
            return Err(IntervalError::DivisionByZero);
        }
        let cands = [
            (self.lo, o.lo),
            (self.lo, o.hi),
            (self.hi, o.lo),
            (self.hi, o.hi),
        ];
        let mut lo = f64::INFINITY;
        let mut hi = f64::NEG_INFINITY;
        let mut lo_exact = true;
        let mut hi_exact = true;
        for (a, b) in cands {
            let q = a / b;
            let exact = quot_exact(a, b, q);
            if q < lo {
                lo = q;
                lo_exact = exact;
            } else if q == lo && !exact {
                lo_exact = false;
            }
            if q > hi {
                hi = q;
                hi_exact = exact;
            } else if q == hi && !exact {
                hi_exact = false;
            }
        }
        Ok(Interval {
            lo: lo_end(lo, lo_exact),
            hi: hi_end(hi, hi_exact),
        })
    }

    pub fn powi(self, n: i32) -> Result<Interval, IntervalError> {
        if n == 0 {
            return Ok(Interval::point(1.0));
        }
        if n < 0 {
            let p = self.powi(-n)?;
            return Interval::point(1.0).div(p);
        }
        if n % 2 == 1 {
            // Odd powers are monotone.
            let lo = scalar_pow(self.lo, n);
            let hi = scalar_pow(self.hi, n);
            Ok(Interval { lo: lo.lo, hi: hi.hi })
        } else {
            let mag_hi = self.lo.abs().max(self.hi.abs());
            let mag_lo = if self.contains_zero() {
                return Ok(Interval {
                    lo: 0.0,
                    hi: scalar_pow(mag_hi, n).hi,
                });
            } else {
                self.lo.abs().min(self.hi.abs())
            };
            Ok(Interval {
                lo: scalar_pow(mag_lo, n).lo,
                hi: scalar_pow(mag_hi, n).hi,
            })
        }
    }

    pub fn abs(self) -> Interval {
        if self.lo >= 0.0 {
            self
        } else if self.hi <= 0.0 {
            self.neg()
        } else {
            Interval {
                lo: 0.0,
                hi: self.hi.max(-self.lo),
            }
        }
    }

    pub fn exp(self) -> Interval {
        Interval {
            lo: lo_end(self.lo.exp(), false).max(0.0),
            hi: hi_end(self.hi.exp(), false),
        }
    }

    pub fn ln(self) -> Result<Interval, IntervalError> {
        if self.hi <= 0.0 {
            return Err(IntervalError::EmptyDomain { func: "log" });
        }
        let lo = if self.lo <= 0.0 {
            f64::NEG_INFINITY
        } else {
            lo_end(self.lo.ln(), false)
        };
        Ok(Interval {
            lo,
            hi: hi_end(self.hi.ln(), false),
        })
    }

    pub fn sqrt(self) -> Result<Interval, IntervalError> {
        if self.hi < 0.0 {
            return Err(IntervalError::EmptyDomain { func: "sqrt" });
        }
        let lo = if self.lo <= 0.0 {
            0.0
        } else {
            let r = self.lo.sqrt();
            lo_end(r, r.mul_add(r, -self.lo) == 0.0).max(0.0)
        };
        let r = self.hi.sqrt();
        Ok(Interval {
            lo,
            hi: hi_end(r, r.mul_add(r, -self.hi) == 0.0),
        })
    }

    pub fn floor(self) -> Interval {
        Interval {
            lo: self.lo.floor(),
            hi: self.hi.floor(),
        }
    }

    pub fn sin(self) -> Interval {
        trig_range(self, 0.0)
    }

    pub fn cos(self) -> Interval {
        // cos(x) = sin(x + pi/2); shift the critical-point lattice instead
        // of the interval to avoid rounding the argument.
        trig_range(self, std::f64::consts::FRAC_PI_2)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum IntervalError {
    DivisionByZero,
    EmptyDomain { func: &'static str },
}

/// Enclosure of sin over `x` when `phase` is 0, of cos when `phase` is pi/2.
fn trig_range(x: Interval, phase: f64) -> Interval {
    use std::f64::consts::{FRAC_PI_2, PI};
    let f = |v: f64| if phase == 0.0 { v.sin() } else { v.cos() };
    if x.width() >= 2.0 * PI || !x.lo.is_finite() || !x.hi.is_finite() {
        return Interval::new(-1.0, 1.0);
    }
    let mut lo = f(x.lo).min(f(x.hi));
    let mut hi = f(x.lo).max(f(x.hi));
    // Maxima of the shifted sine sit at pi/2 - phase + 2k*pi, minima at
    // -pi/2 - phase + 2k*pi. Conservative k bounds only widen the result.
    let max_anchor = FRAC_PI_2 - phase;
    let min_anchor = -FRAC_PI_2 - phase;
    for (anchor, is_max) in [(max_anchor, true), (min_anchor, false)] {
        let k_lo = ((x.lo - anchor) / (2.0 * PI)).floor() as i64 - 1;
        let k_hi = ((x.hi - anchor) / (2.0 * PI)).ceil() as i64 + 1;
        for k in k_lo..=k_hi {
            let crit = anchor + 2.0 * PI * k as f64;
            // Treat the critical point as inside on a slightly inflated
            // interval; false positives only widen the enclosure.
            let slack = 4.0 * f64::EPSILON * (1.0 + crit.abs());
            if crit >= x.lo - slack && crit <= x.hi + slack {
                if is_max {
                    hi = 1.0;
                } else {
                    lo = -1.0;
                }
            }
        }
    }
    Interval {
        lo: lo_end(lo, false).max(-1.0),
        hi: hi_end(hi, false).min(1.0),
    }
}

/// `x^n` for `n >= 1` as a directed-rounding pair, by repeated interval
/// squaring from the exact singleton `[x, x]`.
fn scalar_pow(x: f64, n: i32) -> Interval {
    let mut acc = Interval::point(1.0);
    let mut base = Interval::point(x);
    let mut k = n as u32;
    while k > 0 {
        if k & 1 == 1 {
            acc = acc.mul(base);
        }
        k >>= 1;
        if k > 0 {
            base = base.mul(base);
        }
    }
    acc
}

fn step_down(x: f64, ulps: u32) -> f64 {
    let mut y = x;
    for _ in 0..ulps {
        y = y.next_down();
    }
    y
}

fn step_up(x: f64, ulps: u32) -> f64 {
    let mut y = x;
    for _ in 0..ulps {
        y = y.next_up();
    }
    y
}

fn lo_end(v: f64, exact: bool) -> f64 {
    if exact || v == f64::NEG_INFINITY {
        v
    } else {
        step_down(v, WIDEN_ULPS)
    }
}

fn hi_end(v: f64, exact: bool) -> f64 {
    if exact || v == f64::INFINITY {
        v
    } else {
        step_up(v, WIDEN_ULPS)
    }
}

/// Two-sum residual test: true when `a + b` rounded to `a + b` is exact.
fn sum_exact(a: f64, b: f64) -> bool {
    let s = a + b;
    if !s.is_finite() {
        return false;
    }
    let bp = s - a;
    let ap = s - bp;
    (a - ap) == 0.0 && (b - bp) == 0.0
}

/// FMA residual test for products.
fn prod_exact(a: f64, b: f64, p: f64) -> bool {
    p.is_finite() && a.mul_add(b, -p) == 0.0
}

/// Residual test for quotients: `q*b == a` exactly.
fn quot_exact(a: f64, b: f64, q: f64) -> bool {
    q.is_finite() && q.mul_add(b, -a) == 0.0
}

/// Axis-aligned box: one interval per state-space dimension.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct IntervalBox {
    dims: Vec<Interval>,
}

impl IntervalBox {
    pub fn new(dims: Vec<Interval>) -> IntervalBox {
        assert!(!dims.is_empty(), "interval box needs at least one axis");
        IntervalBox { dims }
    }

    pub fn from_bounds(bounds: &[(f64, f64)]) -> IntervalBox {
        IntervalBox::new(bounds.iter().map(|&(lo, hi)| Interval::new(lo, hi)).collect())
    }

    /// The cube `[lo, hi]^n`.
    pub fn cube(lo: f64, hi: f64, n: usize) -> IntervalBox {
        IntervalBox::new(vec![Interval::new(lo, hi); n])
    }

    pub fn dim(&self) -> usize {
        self.dims.len()
    }

    pub fn axis(&self, i: usize) -> Interval {
        self.dims[i]
    }

    pub fn axes(&self) -> &[Interval] {
        &self.dims
    }

    pub fn contains(&self, x: &[f64]) -> bool {
        x.len() == self.dim() && x.iter().zip(&self.dims).all(|(v, iv)| iv.contains(*v))
    }

    pub fn midpoint(&self) -> Vec<f64> {
        self.dims.iter().map(|iv| iv.midpoint()).collect()
    }

    pub fn corners(&self) -> Vec<Vec<f64>> {
        let n = self.dim();
        assert!(n <= 20, "corner enumeration limited to 20 dimensions");
        let mut out = Vec::with_capacity(1 << n);
        for mask in 0u32..(1 << n) {
            out.push(
                (0..n)
                    .map(|i| {
                        if mask >> i & 1 == 0 {
                            self.dims[i].lo
                        } else {
                            self.dims[i].hi
                        }
                    })
                    .collect(),
            );
        }
        out
    }

    pub fn widest_axis(&self) -> usize {
        let mut best = 0;
        let mut w = f64::NEG_INFINITY;
        for (i, iv) in self.dims.iter().enumerate() {
            if iv.width() > w {
                w = iv.width();
                best = i;
            }
        }
        best
    }

    pub fn bisect(&self, axis: usize) -> (IntervalBox, IntervalBox) {
        let iv = self.dims[axis];
        let mid = iv.midpoint();
        let mut left = self.clone();
        let mut right = self.clone();
        left.dims[axis] = Interval::new(iv.lo, mid);
        right.dims[axis] = Interval::new(mid, iv.hi);
        (left, right)
    }

    pub fn sample(&self, rng: &mut impl rand::Rng) -> Vec<f64> {
        self.dims
            .iter()
            .map(|iv| {
                if iv.width() == 0.0 {
                    iv.lo
                } else {
                    rng.gen_range(iv.lo..=iv.hi)
                }
            })
            .collect()
    }
}

/// Evaluates `e` over `bx`; the result contains the range of `e` on the
/// box (soundness), with no tightness guarantee.
pub fn interval_eval(e: &Expr, bx: &IntervalBox) -> Result<Interval, EvalError> {
    match e {
        Expr::Number(c) => Ok(Interval::point(*c)),
        Expr::Param { value, .. } => Ok(Interval::point(*value)),
        Expr::Var { index, .. } => {
            if *index < bx.dim() {
                Ok(bx.axis(*index))
            } else {
                Err(EvalError::DimensionMismatch {
                    index: *index,
                    got: bx.dim(),
                })
            }
        }
        Expr::Neg(a) => Ok(interval_eval(a, bx)?.neg()),
        Expr::Add(a, b) => Ok(interval_eval(a, bx)?.add(interval_eval(b, bx)?)),
        Expr::Sub(a, b) => Ok(interval_eval(a, bx)?.sub(interval_eval(b, bx)?)),
        Expr::Mul(a, b) => Ok(interval_eval(a, bx)?.mul(interval_eval(b, bx)?)),
        Expr::Div(a, b) => interval_eval(a, bx)?
            .div(interval_eval(b, bx)?)
            .map_err(|err| annotate(err, e)),
        Expr::Pow(base, n) => interval_eval(base, bx)?
            .powi(*n)
            .map_err(|err| annotate(err, e)),
        Expr::Func(f, arg) => {
            let v = interval_eval(arg, bx)?;
            match f {
                Func::Exp => Ok(v.exp()),
                Func::Log => v.ln().map_err(|err| annotate(err, e)),
                Func::Sin => Ok(v.sin()),
                Func::Cos => Ok(v.cos()),
                Func::Sqrt => v.sqrt().map_err(|err| annotate(err, e)),
                Func::Abs => Ok(v.abs()),
                Func::Floor => Ok(v.floor()),
            }
        }
    }
}

fn annotate(err: IntervalError, e: &Expr) -> EvalError {
    match err {
        IntervalError::DivisionByZero => EvalError::DivisionByZero(e.to_string()),
        IntervalError::EmptyDomain { func } => EvalError::Domain {
            func,
            expr: e.to_string(),
        },
    }
}
