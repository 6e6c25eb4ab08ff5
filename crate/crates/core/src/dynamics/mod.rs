//! Orbits of maps and flows: iteration, fixed-step RK4 integration,
//! time-t maps, Poincare sections, and builtin systems.

mod builtins;

pub use builtins::builtin;

use crate::expr::{EvalError, SystemDef, SystemKind};
use std::io::{self, Write};
use thiserror::Error;

/// Any coordinate beyond this magnitude flags the orbit divergent.
pub const DIVERGENCE_THRESHOLD: f64 = 1e12;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum DynamicsError {
    #[error("orbit diverged at step {step}")]
    Divergent { step: usize },
    #[error(transparent)]
    Eval(#[from] EvalError),
    #[error("system `{name}` is not a {expected}")]
    WrongKind { name: String, expected: &'static str },
    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },
    #[error("no section crossing within max_time {max_time}")]
    NoCrossing { max_time: f64 },
    #[error("unknown builtin system `{0}`")]
    UnknownBuiltin(String),
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),
}

/// A state-to-state map on R^n. Implemented by discrete-map systems,
/// time-t maps of flows, and plain closures.
pub trait PointMap {
    fn dim(&self) -> usize;

    fn apply(&self, x: &[f64]) -> Result<Vec<f64>, DynamicsError>;

    fn apply_n(&self, x: &[f64], n: usize) -> Result<Vec<f64>, DynamicsError> {
        let mut cur = x.to_vec();
        for _ in 0..n {
            cur = self.apply(&cur)?;
        }
        Ok(cur)
    }
}

impl<M: PointMap + ?Sized> PointMap for &M {
    fn dim(&self) -> usize {
        (**self).dim()
    }

    fn apply(&self, x: &[f64]) -> Result<Vec<f64>, DynamicsError> {
        (**self).apply(x)
    }
}

fn state_ok(x: &[f64]) -> bool {
    x.iter().all(|v| v.is_finite() && v.abs() <= DIVERGENCE_THRESHOLD)
}

impl PointMap for SystemDef {
    fn dim(&self) -> usize {
        self.dimension()
    }

    fn apply(&self, x: &[f64]) -> Result<Vec<f64>, DynamicsError> {
        if self.kind() != SystemKind::DiscreteMap {
            return Err(DynamicsError::WrongKind {
                name: self.name().to_string(),
                expected: "discrete-map",
            });
        }
        if x.len() != self.dimension() {
            return Err(DynamicsError::DimensionMismatch {
                expected: self.dimension(),
                got: x.len(),
            });
        }
        let out = self.eval(x)?;
        if !state_ok(&out) {
            return Err(DynamicsError::Divergent { step: 1 });
        }
        Ok(out)
    }
}

/// Wraps a closure as a [`PointMap`]; handy for analytically defined maps.
pub struct FnMap<F> {
    dim: usize,
    f: F,
}

impl<F: Fn(&[f64]) -> Vec<f64>> FnMap<F> {
    pub fn new(dim: usize, f: F) -> FnMap<F> {
        FnMap { dim, f }
    }
}

impl<F: Fn(&[f64]) -> Vec<f64>> PointMap for FnMap<F> {
    fn dim(&self) -> usize {
        self.dim
    }

    fn apply(&self, x: &[f64]) -> Result<Vec<f64>, DynamicsError> {
        let out = (self.f)(x);
        if !state_ok(&out) {
            return Err(DynamicsError::Divergent { step: 1 });
        }
        Ok(out)
    }
}

/// A finite sampled trajectory. For maps, `times` holds iterate indices;
/// for flows it holds integration times and `step` the nominal step size.
#[derive(Debug, Clone, PartialEq)]
pub struct Orbit {
    pub system: String,
    pub times: Vec<f64>,
    pub states: Vec<Vec<f64>>,
    pub step: Option<f64>,
    pub divergent: bool,
}

impl Orbit {
    pub fn len(&self) -> usize {
        self.states.len()
    }

    pub fn is_empty(&self) -> bool {
        self.states.is_empty()
    }

    pub fn last(&self) -> &[f64] {
        self.states.last().expect("orbit holds at least the start")
    }

    pub fn max_norm(&self) -> f64 {
        self.states
            .iter()
            .map(|s| s.iter().map(|v| v * v).sum::<f64>().sqrt())
            .fold(0.0, f64::max)
    }

    /// CSV export: header `t,x1,...,xn`, 17 significant digits per value.
    pub fn write_csv<W: Write>(&self, w: &mut W) -> io::Result<()> {
        let n = self.states.first().map_or(0, |s| s.len());
        write!(w, "t")?;
        for i in 1..=n {
            write!(w, ",x{i}")?;
        }
        writeln!(w)?;
        for (t, s) in self.times.iter().zip(&self.states) {
            write!(w, "{t:.16e}")?;
            for v in s {
                write!(w, ",{v:.16e}")?;
            }
            writeln!(w)?;
        }
        Ok(())
    }
}

/// Iterates a map `n` times, recording every state. Numeric blow-up
/// truncates the orbit and sets the divergent flag.
pub fn iterate(map: &dyn PointMap, x0: &[f64], n: usize) -> Result<Orbit, DynamicsError> {
    if x0.len() != map.dim() {
        return Err(DynamicsError::DimensionMismatch {
            expected: map.dim(),
            got: x0.len(),
        });
    }
    let mut states = Vec::with_capacity(n + 1);
    let mut times = Vec::with_capacity(n + 1);
    states.push(x0.to_vec());
    times.push(0.0);
    let mut divergent = !state_ok(x0);
    if !divergent {
        for k in 1..=n {
            match map.apply(states.last().expect("nonempty")) {
                Ok(next) => {
                    states.push(next);
                    times.push(k as f64);
                }
                Err(DynamicsError::Divergent { .. }) => {
                    divergent = true;
                    break;
                }
                Err(e) => return Err(e),
            }
        }
    }
    Ok(Orbit {
        system: String::new(),
        times,
        states,
        step: None,
        divergent,
    })
}

struct RkScratch {
    k1: Vec<f64>,
    k2: Vec<f64>,
    k3: Vec<f64>,
    k4: Vec<f64>,
    tmp: Vec<f64>,
}

impl RkScratch {
    fn new(n: usize) -> RkScratch {
        RkScratch {
            k1: vec![0.0; n],
            k2: vec![0.0; n],
            k3: vec![0.0; n],
            k4: vec![0.0; n],
            tmp: vec![0.0; n],
        }
    }
}

fn rk4_step(
    sys: &SystemDef,
    x: &[f64],
    h: f64,
    out: &mut [f64],
    s: &mut RkScratch,
) -> Result<(), EvalError> {
    let n = x.len();
    sys.eval_into(x, &mut s.k1)?;
    for i in 0..n {
        s.tmp[i] = x[i] + 0.5 * h * s.k1[i];
    }
    sys.eval_into(&s.tmp, &mut s.k2)?;
    for i in 0..n {
        s.tmp[i] = x[i] + 0.5 * h * s.k2[i];
    }
    sys.eval_into(&s.tmp, &mut s.k3)?;
    for i in 0..n {
        s.tmp[i] = x[i] + h * s.k3[i];
    }
    sys.eval_into(&s.tmp, &mut s.k4)?;
    for i in 0..n {
        out[i] = x[i] + h / 6.0 * (s.k1[i] + 2.0 * s.k2[i] + 2.0 * s.k3[i] + s.k4[i]);
    }
    Ok(())
}

fn check_flow_args(sys: &SystemDef, h: f64) -> Result<(), DynamicsError> {
    if sys.kind() != SystemKind::VectorField {
        return Err(DynamicsError::WrongKind {
            name: sys.name().to_string(),
            expected: "vector-field",
        });
    }
    if !(h > 0.0) {
        return Err(DynamicsError::InvalidParameter(format!(
            "step h must be positive, got {h}"
        )));
    }
    Ok(())
}

/// Classical fixed-step fourth-order Runge-Kutta. The final partial step
/// is shortened so the orbit ends at `t_end` exactly. A non-finite or
/// overlarge state aborts integration with the divergence flag set.
pub fn integrate_rk4(
    sys: &SystemDef,
    x0: &[f64],
    h: f64,
    t_end: f64,
) -> Result<Orbit, DynamicsError> {
    check_flow_args(sys, h)?;
    if !(t_end > 0.0) {
        return Err(DynamicsError::InvalidParameter(format!(
            "t_end must be positive, got {t_end}"
        )));
    }
    if x0.len() != sys.dimension() {
        return Err(DynamicsError::DimensionMismatch {
            expected: sys.dimension(),
            got: x0.len(),
        });
    }
    let n = sys.dimension();
    let mut scratch = RkScratch::new(n);
    let mut states = vec![x0.to_vec()];
    let mut times = vec![0.0];
    let mut divergent = !state_ok(x0);
    let mut t = 0.0;
    let mut cur = x0.to_vec();
    let mut next = vec![0.0; n];
    while !divergent && t < t_end {
        let step = if t + h > t_end { t_end - t } else { h };
        if step <= 0.0 {
            break;
        }
        rk4_step(sys, &cur, step, &mut next, &mut scratch)?;
        t = if t + h > t_end { t_end } else { t + h };
        if state_ok(&next) {
            cur.copy_from_slice(&next);
            states.push(cur.clone());
            times.push(t);
        } else {
            divergent = true;
        }
    }
    Ok(Orbit {
        system: sys.name().to_string(),
        times,
        states,
        step: Some(h),
        divergent,
    })
}

/// The map `x -> phi_tau(x)` obtained by integrating a vector field for
/// time `tau` with RK4 step `h`.
pub struct TimeTMap {
    sys: SystemDef,
    tau: f64,
    h: f64,
}

pub fn time_t_map(sys: SystemDef, tau: f64, h: f64) -> Result<TimeTMap, DynamicsError> {
    check_flow_args(&sys, h)?;
    if !(tau > 0.0) {
        return Err(DynamicsError::InvalidParameter(format!(
            "tau must be positive, got {tau}"
        )));
    }
    Ok(TimeTMap { sys, tau, h })
}

impl TimeTMap {
    pub fn system(&self) -> &SystemDef {
        &self.sys
    }

    pub fn tau(&self) -> f64 {
        self.tau
    }
}

impl PointMap for TimeTMap {
    fn dim(&self) -> usize {
        self.sys.dimension()
    }

    fn apply(&self, x: &[f64]) -> Result<Vec<f64>, DynamicsError> {
        let n = self.sys.dimension();
        if x.len() != n {
            return Err(DynamicsError::DimensionMismatch {
                expected: n,
                got: x.len(),
            });
        }
        let mut scratch = RkScratch::new(n);
        let mut cur = x.to_vec();
        let mut next = vec![0.0; n];
        let mut t = 0.0;
        let mut step_no = 0usize;
        while t < self.tau {
            let step = if t + self.h > self.tau {
                self.tau - t
            } else {
                self.h
            };
            if step <= 0.0 {
                break;
            }
            rk4_step(&self.sys, &cur, step, &mut next, &mut scratch)?;
            step_no += 1;
            if !state_ok(&next) {
                return Err(DynamicsError::Divergent { step: step_no });
            }
            cur.copy_from_slice(&next);
            t = if t + self.h > self.tau { self.tau } else { t + self.h };
        }
        Ok(cur)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CrossingDirection {
    Increasing,
    Decreasing,
}

/// A transverse section `g(x) = level` of the flow, where `g` is either
/// the state coordinate `index` or its time derivative (for sections at
/// local extrema of a coordinate).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SectionSpec {
    pub index: usize,
    pub level: f64,
    pub direction: CrossingDirection,
    pub on_velocity: bool,
}

impl SectionSpec {
    pub fn coordinate(index: usize, level: f64, direction: CrossingDirection) -> SectionSpec {
        SectionSpec {
            index,
            level,
            direction,
            on_velocity: false,
        }
    }

    /// Section at zeros of `d x_index / dt`; with `Decreasing` this picks
    /// out local maxima of the coordinate.
    pub fn velocity(index: usize, direction: CrossingDirection) -> SectionSpec {
        SectionSpec {
            index,
            level: 0.0,
            direction,
            on_velocity: true,
        }
    }

    fn value(&self, sys: &SystemDef, x: &[f64], scratch: &mut Vec<f64>) -> Result<f64, EvalError> {
        if self.on_velocity {
            scratch.resize(sys.dimension(), 0.0);
            sys.eval_into(x, scratch)?;
            Ok(scratch[self.index])
        } else {
            Ok(x[self.index])
        }
    }

    fn crossed(&self, prev: f64, cur: f64) -> bool {
        match self.direction {
            CrossingDirection::Increasing => prev < self.level && cur >= self.level,
            CrossingDirection::Decreasing => prev > self.level && cur <= self.level,
        }
    }
}

/// First return to the section: integrates until the section function
/// crosses `level` in the requested direction, then localizes the crossing
/// by bisection on the final step to `|g(x) - level| <= 1e-10`.
pub fn poincare_map(
    sys: &SystemDef,
    section: &SectionSpec,
    x0: &[f64],
    h: f64,
    max_time: f64,
) -> Result<(Vec<f64>, f64), DynamicsError> {
    check_flow_args(sys, h)?;
    let n = sys.dimension();
    if x0.len() != n {
        return Err(DynamicsError::DimensionMismatch {
            expected: n,
            got: x0.len(),
        });
    }
    if section.index >= n {
        return Err(DynamicsError::InvalidParameter(format!(
            "section coordinate {} out of range for dimension {n}",
            section.index
        )));
    }
    const CROSSING_TOL: f64 = 1e-10;
    let mut scratch = RkScratch::new(n);
    let mut gbuf = Vec::new();
    let mut cur = x0.to_vec();
    let mut next = vec![0.0; n];
    let mut g_prev = section.value(sys, &cur, &mut gbuf)?;
    let mut t = 0.0;
    let mut step_no = 0usize;
    while t < max_time {
        rk4_step(sys, &cur, h, &mut next, &mut scratch)?;
        step_no += 1;
        if !state_ok(&next) {
            return Err(DynamicsError::Divergent { step: step_no });
        }
        let g_next = section.value(sys, &next, &mut gbuf)?;
        if section.crossed(g_prev, g_next) {
            // Bisect the step fraction from the pre-crossing state.
            let mut lo = 0.0;
            let mut hi = h;
            let mut best = next.clone();
            let mut best_dt = h;
            let mut probe = vec![0.0; n];
            for _ in 0..200 {
                let mid = 0.5 * (lo + hi);
                rk4_step(sys, &cur, mid, &mut probe, &mut scratch)?;
                let g_mid = section.value(sys, &probe, &mut gbuf)?;
                if (g_mid - section.level).abs() <= CROSSING_TOL {
                    return Ok((probe, t + mid));
                }
                if section.crossed(g_prev, g_mid) {
                    hi = mid;
                    best.copy_from_slice(&probe);
                    best_dt = mid;
                } else {
                    lo = mid;
                }
            }
            let g_best = section.value(sys, &best, &mut gbuf)?;
            if (g_best - section.level).abs() <= CROSSING_TOL {
                return Ok((best, t + best_dt));
            }
            return Err(DynamicsError::InvalidParameter(
                "section crossing could not be localized; the crossing may be tangent".into(),
            ));
        }
        g_prev = g_next;
        cur.copy_from_slice(&next);
        t += h;
    }
    Err(DynamicsError::NoCrossing { max_time })
}

/// Successive local maxima of coordinate `coord` on `t in [t_start, t_end]`,
/// skipping the transient before `t_start`.
pub fn successive_maxima(
    sys: &SystemDef,
    coord: usize,
    x0: &[f64],
    h: f64,
    t_start: f64,
    t_end: f64,
) -> Result<Vec<f64>, DynamicsError> {
    let section = SectionSpec::velocity(coord, CrossingDirection::Decreasing);
    let mut state = if t_start > 0.0 {
        let transient = integrate_rk4(sys, x0, h, t_start)?;
        if transient.divergent {
            return Err(DynamicsError::Divergent {
                step: transient.len(),
            });
        }
        transient.last().to_vec()
    } else {
        x0.to_vec()
    };
    let mut t = t_start;
    let mut maxima = Vec::new();
    loop {
        let remaining = t_end - t;
        if remaining <= h {
            break;
        }
        match poincare_map(sys, &section, &state, h, remaining) {
            Ok((point, dt)) => {
                t += dt;
                maxima.push(point[coord]);
                // Step off the section before searching again.
                let mut scratch = RkScratch::new(sys.dimension());
                let mut next = vec![0.0; sys.dimension()];
                rk4_step(sys, &point, h, &mut next, &mut scratch)?;
                if !state_ok(&next) {
                    return Err(DynamicsError::Divergent { step: 0 });
                }
                state = next;
                t += h;
            }
            Err(DynamicsError::NoCrossing { .. }) => break,
            Err(e) => return Err(e),
        }
    }
    Ok(maxima)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::expr::SystemKind;
    use std::collections::BTreeMap;

    fn decay() -> SystemDef {
        SystemDef::new(
            "decay",
            SystemKind::VectorField,
            &["x"],
            BTreeMap::new(),
            &["-x"],
        )
        .unwrap()
    }

    #[test]
    fn iterate_identity_map() {
        let sys = builtin("identity(2)").unwrap();
        let orbit = iterate(&sys, &[1.5, -0.5], 5).unwrap();
        assert_eq!(orbit.len(), 6);
        assert!(orbit.states.iter().all(|s| s == &vec![1.5, -0.5]));
        assert!(!orbit.divergent);
    }

    #[test]
    fn iterate_doubling_from_third() {
        let sys = builtin("doubling").unwrap();
        let orbit = iterate(&sys, &[1.0 / 3.0], 6).unwrap();
        for (k, s) in orbit.states.iter().enumerate() {
            let expected = if k % 2 == 0 { 1.0 / 3.0 } else { 2.0 / 3.0 };
            assert!((s[0] - expected).abs() < 1e-13, "step {k}: {}", s[0]);
        }
    }

    #[test]
    fn iterate_logistic_matches_direct_recurrence() {
        let sys = builtin("logistic(4)").unwrap();
        let orbit = iterate(&sys, &[0.3], 10).unwrap();
        let mut x = 0.3;
        for s in &orbit.states {
            assert!((s[0] - x).abs() < 1e-12);
            x = 4.0 * x * (1.0 - x);
        }
    }

    #[test]
    fn iterate_flags_divergence() {
        let sys = SystemDef::new(
            "blowup",
            SystemKind::DiscreteMap,
            &["x"],
            BTreeMap::new(),
            &["x*x"],
        )
        .unwrap();
        let orbit = iterate(&sys, &[10.0], 100).unwrap();
        assert!(orbit.divergent);
        assert!(orbit.len() < 101);
    }

    #[test]
    fn rk4_matches_exponential_decay() {
        let orbit = integrate_rk4(&decay(), &[1.0], 0.01, 1.0).unwrap();
        let expected = (-1.0f64).exp();
        assert!((orbit.last()[0] - expected).abs() < 1e-7);
        assert!((orbit.times.last().unwrap() - 1.0).abs() < 1e-12);
    }

    #[test]
    fn rk4_constant_field_is_constant() {
        let sys = SystemDef::new(
            "still",
            SystemKind::VectorField,
            &["x"],
            BTreeMap::new(),
            &["0*x"],
        )
        .unwrap();
        let orbit = integrate_rk4(&sys, &[2.5], 0.1, 1.0).unwrap();
        assert!(orbit.states.iter().all(|s| s[0] == 2.5));
    }

    #[test]
    fn rk4_error_shrinks_at_fourth_order() {
        let exact = (-1.0f64).exp();
        let err_h = (integrate_rk4(&decay(), &[1.0], 0.01, 1.0).unwrap().last()[0] - exact).abs();
        let err_h2 = (integrate_rk4(&decay(), &[1.0], 0.005, 1.0).unwrap().last()[0] - exact).abs();
        let factor = err_h / err_h2;
        assert!(
            (8.0..=32.0).contains(&factor),
            "order factor {factor} outside [8, 32]"
        );
    }

    #[test]
    fn lorenz_stays_bounded() {
        let sys = builtin("lorenz-classical").unwrap();
        let orbit = integrate_rk4(&sys, &[1.0, 1.0, 1.0], 0.001, 100.0).unwrap();
        assert!(!orbit.divergent);
        assert!(orbit.max_norm() < 60.0);
    }

    #[test]
    fn time_t_map_of_decay_contracts_by_e() {
        let map = time_t_map(decay(), 1.0, 0.01).unwrap();
        let y = map.apply(&[1.0]).unwrap();
        assert!((y[0] - (-1.0f64).exp()).abs() < 1e-7);
    }

    #[test]
    fn time_t_map_rejects_zero_tau() {
        assert!(matches!(
            time_t_map(decay(), 0.0, 0.01),
            Err(DynamicsError::InvalidParameter(_))
        ));
    }

    #[test]
    fn time_t_map_fixes_coop_equilibrium() {
        let sys = builtin("coop-lv-2d").unwrap();
        let map = time_t_map(sys, 1.0, 0.01).unwrap();
        let y = map.apply(&[2.0, 2.0]).unwrap();
        assert!((y[0] - 2.0).abs() < 1e-6 && (y[1] - 2.0).abs() < 1e-6);
    }

    #[test]
    fn iterate_composes_with_time_t_map() {
        let sys = builtin("coop-lv-2d").unwrap();
        let tau = 0.7;
        let n = 5;
        let map = time_t_map(sys.clone(), tau, 0.01).unwrap();
        let by_map = iterate(&map, &[0.3, 0.4], n).unwrap();
        let direct = integrate_rk4(&sys, &[0.3, 0.4], 0.01, tau * n as f64).unwrap();
        let a = by_map.last();
        let b = direct.last();
        for i in 0..2 {
            let rel = (a[i] - b[i]).abs() / (1.0 + b[i].abs());
            assert!(rel < 1e-6, "coordinate {i}: {} vs {}", a[i], b[i]);
        }
    }

    #[test]
    fn poincare_constant_flow() {
        let sys = SystemDef::new(
            "drift",
            SystemKind::VectorField,
            &["x", "y"],
            BTreeMap::new(),
            &["1 + 0*x", "0*y"],
        )
        .unwrap();
        let section = SectionSpec::coordinate(0, 1.0, CrossingDirection::Increasing);
        let (point, t) = poincare_map(&sys, &section, &[0.0, 0.0], 0.01, 10.0).unwrap();
        assert!((point[0] - 1.0).abs() <= 1e-10);
        assert!(point[1].abs() < 1e-12);
        assert!((t - 1.0).abs() < 1e-9);
    }

    #[test]
    fn poincare_rotation_returns_after_full_turn() {
        let sys = SystemDef::new(
            "rotation",
            SystemKind::VectorField,
            &["x", "y"],
            BTreeMap::new(),
            &["-y", "x"],
        )
        .unwrap();
        let section = SectionSpec::coordinate(1, 0.0, CrossingDirection::Increasing);
        let (point, t) = poincare_map(&sys, &section, &[1.0, 0.0], 0.001, 10.0).unwrap();
        assert!((point[1]).abs() <= 1e-10);
        assert!((point[0] - 1.0).abs() < 1e-6);
        assert!((t - std::f64::consts::TAU).abs() < 1e-6);
    }

    #[test]
    fn poincare_times_out_without_crossing() {
        let section = SectionSpec::coordinate(0, 5.0, CrossingDirection::Increasing);
        let err = poincare_map(&decay(), &section, &[1.0], 0.01, 2.0).unwrap_err();
        assert!(matches!(err, DynamicsError::NoCrossing { .. }));
    }

    #[test]
    fn orbit_csv_format() {
        let sys = builtin("identity(2)").unwrap();
        let orbit = iterate(&sys, &[1.0, 2.0], 1).unwrap();
        let mut buf = Vec::new();
        orbit.write_csv(&mut buf).unwrap();
        let text = String::from_utf8(buf).unwrap();
        let mut lines = text.lines();
        assert_eq!(lines.next().unwrap(), "t,x1,x2");
        let row = lines.next().unwrap();
        assert!(row.starts_with("0.0000000000000000e0,1.0000000000000000e0"));
    }
}
