//! Attracting-set estimates, periodic-orbit detection with Newton
//! refinement, attraction reports, and basin sampling.
//!
//! Distances are Euclidean throughout; the distance from a point to a
//! cloud is the minimum over cloud points.

use crate::dynamics::{iterate, DynamicsError, PointMap};
use crate::expr::{Interval, IntervalBox};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

pub fn dist(a: &[f64], b: &[f64]) -> f64 {
    a.iter()
        .zip(b)
        .map(|(x, y)| (x - y) * (x - y))
        .sum::<f64>()
        .sqrt()
}

pub fn dist_to_cloud(x: &[f64], cloud: &[Vec<f64>]) -> f64 {
    cloud
        .iter()
        .map(|p| dist(x, p))
        .fold(f64::INFINITY, f64::min)
}

/// Empirical omega-limit estimate: a cluster cloud, a trapping box, and
/// the quality measures attached to them.
#[derive(Debug, Clone, PartialEq)]
pub struct AttractingSetEstimate {
    /// Cluster representatives of the orbit tail.
    pub cloud: Vec<Vec<f64>>,
    /// Bounding box of the cloud, inflated by 10% per axis.
    pub trapping_box: IntervalBox,
    pub transient: usize,
    pub tail: usize,
    pub cluster_eps: f64,
    /// Max over cloud points of dist(T(p), cloud): how far applying the
    /// map once can leave the cloud.
    pub invariance_defect: f64,
    /// Max pairwise distance within the cloud.
    pub diameter: f64,
}

/// Iterates `transient + tail` steps, glues the last `tail` states into
/// clusters of radius `cluster_eps`, and wraps the cluster representatives
/// in an inflated bounding box. A divergent orbit is an error here.
pub fn omega_limit(
    map: &dyn PointMap,
    x0: &[f64],
    transient: usize,
    tail: usize,
    cluster_eps: f64,
) -> Result<AttractingSetEstimate, DynamicsError> {
    if tail == 0 {
        return Err(DynamicsError::InvalidParameter(
            "tail must be at least 1".into(),
        ));
    }
    if !(cluster_eps > 0.0) {
        return Err(DynamicsError::InvalidParameter(
            "cluster_eps must be positive".into(),
        ));
    }
    let orbit = iterate(map, x0, transient + tail)?;
    if orbit.divergent {
        return Err(DynamicsError::Divergent {
            step: orbit.len().saturating_sub(1),
        });
    }
    // Greedy epsilon-gluing against running centroids.
    let mut sums: Vec<(Vec<f64>, usize)> = Vec::new();
    for state in &orbit.states[transient + 1..] {
        let mut assigned = false;
        for (sum, count) in sums.iter_mut() {
            let centroid: Vec<f64> = sum.iter().map(|s| s / *count as f64).collect();
            if dist(state, &centroid) <= cluster_eps {
                for (s, v) in sum.iter_mut().zip(state) {
                    *s += v;
                }
                *count += 1;
                assigned = true;
                break;
            }
        }
        if !assigned {
            sums.push((state.clone(), 1));
        }
    }
    let cloud: Vec<Vec<f64>> = sums
        .iter()
        .map(|(sum, count)| sum.iter().map(|s| s / *count as f64).collect())
        .collect();

    let n = map.dim();
    let mut axes = Vec::with_capacity(n);
    for i in 0..n {
        let lo = cloud.iter().map(|p| p[i]).fold(f64::INFINITY, f64::min);
        let hi = cloud.iter().map(|p| p[i]).fold(f64::NEG_INFINITY, f64::max);
        let center = 0.5 * (lo + hi);
        // 10% inflation, with a small absolute pad so degenerate axes
        // still bound an open neighborhood.
        let pad = 0.05 * (hi - lo) + 1e-9 * (1.0 + center.abs());
        axes.push(Interval::new(lo - pad, hi + pad));
    }
    let trapping_box = IntervalBox::new(axes);

    let mut defect = 0.0f64;
    for p in &cloud {
        let image = map.apply(p)?;
        defect = defect.max(dist_to_cloud(&image, &cloud));
    }

    let stride = (cloud.len() / 2048).max(1);
    let sampled: Vec<&Vec<f64>> = cloud.iter().step_by(stride).collect();
    let mut diameter = 0.0f64;
    for (idx, a) in sampled.iter().enumerate() {
        for b in &sampled[idx + 1..] {
            diameter = diameter.max(dist(a, b));
        }
    }

    Ok(AttractingSetEstimate {
        cloud,
        trapping_box,
        transient,
        tail,
        cluster_eps,
        invariance_defect: defect,
        diameter,
    })
}

/// Attraction statistics for probe points sampled in the trapping box.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct AttractionReport {
    /// Fraction of probes whose final distance to the cloud is below the
    /// estimate's cluster radius. Divergent probes count as not attracted.
    pub attracts_fraction: f64,
    /// Per-step supremum over probes of the distance to the cloud; a
    /// decreasing tail is the empirical signature of uniform attraction.
    pub uniform_bound_curve: Vec<f64>,
    pub probes: usize,
    pub divergent_probes: usize,
}

pub fn check_attracting(
    map: &dyn PointMap,
    estimate: &AttractingSetEstimate,
    probes: usize,
    steps: usize,
    seed: u64,
) -> AttractionReport {
    assert!(probes >= 1, "need at least one probe");
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut curve = vec![0.0f64; steps + 1];
    let mut attracted = 0usize;
    let mut divergent = 0usize;
    for _ in 0..probes {
        let mut x = estimate.trapping_box.sample(&mut rng);
        let mut alive = true;
        curve[0] = curve[0].max(dist_to_cloud(&x, &estimate.cloud));
        for c in curve.iter_mut().skip(1) {
            if alive {
                match map.apply(&x) {
                    Ok(next) => {
                        x = next;
                        *c = c.max(dist_to_cloud(&x, &estimate.cloud));
                    }
                    Err(_) => alive = false,
                }
            }
        }
        if !alive {
            divergent += 1;
        } else if dist_to_cloud(&x, &estimate.cloud) < estimate.cluster_eps {
            attracted += 1;
        }
    }
    AttractionReport {
        attracts_fraction: attracted as f64 / probes as f64,
        uniform_bound_curve: curve,
        probes,
        divergent_probes: divergent,
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum BasinLabel {
    Attracted,
    NotAttracted,
    Divergent,
}

impl BasinLabel {
    pub fn code(self) -> i8 {
        match self {
            BasinLabel::Attracted => 1,
            BasinLabel::NotAttracted => 0,
            BasinLabel::Divergent => -1,
        }
    }
}

/// Labels over a regular lattice, row-major in lattice coordinates.
#[derive(Debug, Clone, PartialEq)]
pub struct BasinGrid {
    pub labels: Vec<BasinLabel>,
    pub per_axis: usize,
    pub dim: usize,
}

impl BasinGrid {
    /// CSV export as a matrix of {1, 0, -1}: one row per line along the
    /// last axis.
    pub fn write_csv<W: std::io::Write>(&self, w: &mut W) -> std::io::Result<()> {
        for row in self.labels.chunks(self.per_axis) {
            let line: Vec<String> = row.iter().map(|l| l.code().to_string()).collect();
            writeln!(w, "{}", line.join(","))?;
        }
        Ok(())
    }
}

/// Labels each lattice point of `grid_per_axis`^dim points in `bx` by
/// whether its orbit ends up within the estimate's cluster radius of the
/// cloud after `steps` iterations.
pub fn basin_sample(
    map: &dyn PointMap,
    estimate: &AttractingSetEstimate,
    bx: &IntervalBox,
    grid_per_axis: usize,
    steps: usize,
) -> Result<BasinGrid, DynamicsError> {
    if grid_per_axis < 2 {
        return Err(DynamicsError::InvalidParameter(
            "grid needs at least 2 points per axis".into(),
        ));
    }
    let n = bx.dim();
    let total = grid_per_axis.pow(n as u32);
    let mut labels = Vec::with_capacity(total);
    for flat in 0..total {
        let mut idx = flat;
        let mut x = vec![0.0; n];
        // Last axis varies fastest.
        for i in (0..n).rev() {
            let k = idx % grid_per_axis;
            idx /= grid_per_axis;
            let axis = bx.axis(i);
            x[i] = axis.lo + axis.width() * k as f64 / (grid_per_axis - 1) as f64;
        }
        let orbit = iterate(map, &x, steps)?;
        let label = if orbit.divergent {
            BasinLabel::Divergent
        } else if dist_to_cloud(orbit.last(), &estimate.cloud) < estimate.cluster_eps {
            BasinLabel::Attracted
        } else {
            BasinLabel::NotAttracted
        };
        labels.push(label);
    }
    Ok(BasinGrid {
        labels,
        per_axis: grid_per_axis,
        dim: n,
    })
}

/// A detected periodic orbit with its recurrence residual.
#[derive(Debug, Clone, PartialEq)]
pub struct PeriodicOrbitEstimate {
    pub period: usize,
    pub points: Vec<Vec<f64>>,
    /// max_i d(T(points[i]), points[(i+1) mod p]).
    pub residual: f64,
    pub tolerance: f64,
    /// False when Newton stagnated and the coarse recurrence is returned.
    pub refined: bool,
}

#[derive(Debug, Clone, PartialEq)]
pub enum PeriodicSearch {
    Found(PeriodicOrbitEstimate),
    NotFound { max_period: usize },
}

impl PeriodicSearch {
    pub fn found(&self) -> Option<&PeriodicOrbitEstimate> {
        match self {
            PeriodicSearch::Found(e) => Some(e),
            PeriodicSearch::NotFound { .. } => None,
        }
    }
}

/// Recomputes the chain residual of a stored orbit.
pub fn orbit_residual(map: &dyn PointMap, points: &[Vec<f64>]) -> Result<f64, DynamicsError> {
    let p = points.len();
    let mut worst = 0.0f64;
    for (i, pt) in points.iter().enumerate() {
        let image = map.apply(pt)?;
        worst = worst.max(dist(&image, &points[(i + 1) % p]));
    }
    Ok(worst)
}

/// Scans the orbit of `seed_point` for coarse recurrence `d(T^p x, x) <
/// coarse_tol` with minimal p, then polishes the cycle with damped Newton
/// on `F(x) = T^p(x) - x` (forward-difference Jacobian, step 1e-6) until
/// the chain residual is at or below `refine_tol`, up to 50 Newton steps.
/// Afterwards the period collapses to the smallest divisor whose orbit
/// also meets `refine_tol`.
pub fn find_periodic_orbit(
    map: &dyn PointMap,
    seed_point: &[f64],
    max_period: usize,
    coarse_tol: f64,
    refine_tol: f64,
) -> Result<PeriodicSearch, DynamicsError> {
    if max_period < 1 {
        return Err(DynamicsError::InvalidParameter(
            "max_period must be at least 1".into(),
        ));
    }
    let orbit = iterate(map, seed_point, max_period)?;
    if orbit.divergent {
        return Ok(PeriodicSearch::NotFound { max_period });
    }
    let period = (1..=max_period)
        .find(|&p| p < orbit.len() && dist(&orbit.states[p], seed_point) < coarse_tol);
    let Some(mut period) = period else {
        return Ok(PeriodicSearch::NotFound { max_period });
    };

    let (refined_point, converged) = newton_refine(map, seed_point, period, refine_tol)?;
    let mut anchor = if converged {
        refined_point
    } else {
        seed_point.to_vec()
    };

    if converged {
        // Minimal-period collapse over divisors of the detected period.
        for q in 1..period {
            if period % q == 0 {
                if let Ok(points) = orbit_points(map, &anchor, q) {
                    if orbit_residual(map, &points)? <= refine_tol {
                        period = q;
                        break;
                    }
                }
            }
        }
        // Re-anchor in case the divisor check shortened the cycle.
        let (p2, ok2) = newton_refine(map, &anchor, period, refine_tol)?;
        if ok2 {
            anchor = p2;
        }
    }

    let points = orbit_points(map, &anchor, period)?;
    let residual = orbit_residual(map, &points)?;
    Ok(PeriodicSearch::Found(PeriodicOrbitEstimate {
        period,
        points,
        residual,
        tolerance: refine_tol,
        refined: converged && residual <= refine_tol,
    }))
}

fn orbit_points(
    map: &dyn PointMap,
    start: &[f64],
    period: usize,
) -> Result<Vec<Vec<f64>>, DynamicsError> {
    let mut points = Vec::with_capacity(period);
    let mut cur = start.to_vec();
    for _ in 0..period {
        points.push(cur.clone());
        cur = map.apply(&cur)?;
    }
    Ok(points)
}

fn residual_vec(map: &dyn PointMap, x: &[f64], p: usize) -> Result<Vec<f64>, DynamicsError> {
    let image = map.apply_n(x, p)?;
    Ok(image.iter().zip(x).map(|(a, b)| a - b).collect())
}

fn norm(v: &[f64]) -> f64 {
    v.iter().map(|x| x * x).sum::<f64>().sqrt()
}

fn newton_refine(
    map: &dyn PointMap,
    start: &[f64],
    p: usize,
    refine_tol: f64,
) -> Result<(Vec<f64>, bool), DynamicsError> {
    const FD_STEP: f64 = 1e-6;
    const MAX_STEPS: usize = 50;
    let n = map.dim();
    let mut x = start.to_vec();
    let mut f = match residual_vec(map, &x, p) {
        Ok(f) => f,
        Err(_) => return Ok((x, false)),
    };
    for _ in 0..MAX_STEPS {
        if norm(&f) <= refine_tol {
            return Ok((x, true));
        }
        // Forward-difference Jacobian of F(x) = T^p(x) - x.
        let mut jac = vec![vec![0.0; n]; n];
        for j in 0..n {
            let mut xj = x.clone();
            xj[j] += FD_STEP;
            let fj = match residual_vec(map, &xj, p) {
                Ok(fj) => fj,
                Err(_) => return Ok((x, false)),
            };
            for i in 0..n {
                jac[i][j] = (fj[i] - f[i]) / FD_STEP;
            }
        }
        let Some(delta) = solve(&mut jac, &f) else {
            return Ok((x, false));
        };
        // Damped step: halve until the residual improves.
        let mut lambda = 1.0;
        let mut accepted = false;
        for _ in 0..9 {
            let trial: Vec<f64> = x
                .iter()
                .zip(&delta)
                .map(|(xi, di)| xi - lambda * di)
                .collect();
            match residual_vec(map, &trial, p) {
                Ok(ft) if norm(&ft) < norm(&f) => {
                    x = trial;
                    f = ft;
                    accepted = true;
                    break;
                }
                _ => lambda *= 0.5,
            }
        }
        if !accepted {
            return Ok((x, norm(&f) <= refine_tol));
        }
    }
    let ok = norm(&f) <= refine_tol;
    Ok((x, ok))
}

/// Gaussian elimination with partial pivoting; None on (near-)singularity.
fn solve(a: &mut [Vec<f64>], b: &[f64]) -> Option<Vec<f64>> {
    let n = b.len();
    let mut rhs = b.to_vec();
    for col in 0..n {
        let pivot = (col..n)
            .max_by(|&i, &j| a[i][col].abs().partial_cmp(&a[j][col].abs()).unwrap())?;
        if a[pivot][col].abs() < 1e-14 {
            return None;
        }
        a.swap(col, pivot);
        rhs.swap(col, pivot);
        for row in col + 1..n {
            let factor = a[row][col] / a[col][col];
            for k in col..n {
                a[row][k] -= factor * a[col][k];
            }
            rhs[row] -= factor * rhs[col];
        }
    }
    let mut x = vec![0.0; n];
    for row in (0..n).rev() {
        let mut acc = rhs[row];
        for k in row + 1..n {
            acc -= a[row][k] * x[k];
        }
        x[row] = acc / a[row][row];
    }
    Some(x)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dynamics::{builtin, time_t_map, FnMap};

    /// The logistic 2-cycle solves r^2 x^2 - r(r+1) x + (r+1) = 0, the
    /// quartic f(f(x)) = x with the fixed points divided out.
    fn logistic_two_cycle(r: f64) -> (f64, f64) {
        let disc = ((r + 1.0) * (r - 3.0)).sqrt();
        let a = ((r + 1.0) - disc) / (2.0 * r);
        let b = ((r + 1.0) + disc) / (2.0 * r);
        (a, b)
    }

    #[test]
    fn constant_map_omega_is_single_cluster() {
        let map = FnMap::new(2, |_: &[f64]| vec![0.25, -1.5]);
        let est = omega_limit(&map, &[5.0, 5.0], 10, 50, 1e-9).unwrap();
        assert_eq!(est.cloud.len(), 1);
        assert!(dist(&est.cloud[0], &[0.25, -1.5]) < 1e-12);
        assert!(est.trapping_box.contains(&est.cloud[0]));
        assert!(est.invariance_defect < 1e-12);
    }

    #[test]
    fn logistic_omega_finds_two_cycle() {
        let map = builtin("logistic(3.2)").unwrap();
        let est = omega_limit(&map, &[0.3], 2000, 200, 1e-4).unwrap();
        assert_eq!(est.cloud.len(), 2);
        let (a, b) = logistic_two_cycle(3.2);
        let mut found: Vec<f64> = est.cloud.iter().map(|p| p[0]).collect();
        found.sort_by(|x, y| x.partial_cmp(y).unwrap());
        assert!((found[0] - a).abs() < 1e-3, "{} vs {a}", found[0]);
        assert!((found[1] - b).abs() < 1e-3, "{} vs {b}", found[1]);
    }

    #[test]
    fn coop_lv_time_one_map_settles_at_equilibrium() {
        let map = time_t_map(builtin("coop-lv-2d").unwrap(), 1.0, 0.01).unwrap();
        let est = omega_limit(&map, &[0.1, 0.1], 60, 20, 1e-4).unwrap();
        assert_eq!(est.cloud.len(), 1);
        assert!(dist(&est.cloud[0], &[2.0, 2.0]) < 1e-4);
    }

    #[test]
    fn divergent_orbit_is_an_error() {
        let map = FnMap::new(1, |x: &[f64]| vec![x[0] * x[0]]);
        assert!(matches!(
            omega_limit(&map, &[10.0], 0, 50, 1e-6),
            Err(DynamicsError::Divergent { .. })
        ));
    }

    #[test]
    fn constant_map_attracts_everything_immediately() {
        let map = FnMap::new(1, |_: &[f64]| vec![0.5]);
        let est = omega_limit(&map, &[0.0], 5, 20, 1e-9).unwrap();
        let report = check_attracting(&map, &est, 25, 5, 9);
        assert_eq!(report.attracts_fraction, 1.0);
        assert!(report.uniform_bound_curve[1] < 1e-12);
    }

    #[test]
    fn repeller_attracts_nothing() {
        let map = FnMap::new(1, |x: &[f64]| vec![2.0 * x[0]]);
        let est = AttractingSetEstimate {
            cloud: vec![vec![0.0]],
            trapping_box: IntervalBox::from_bounds(&[(-1.0, 1.0)]),
            transient: 0,
            tail: 1,
            cluster_eps: 1e-6,
            invariance_defect: 0.0,
            diameter: 0.0,
        };
        let report = check_attracting(&map, &est, 50, 60, 11);
        assert_eq!(report.attracts_fraction, 0.0);
    }

    #[test]
    fn coop_lv_equilibrium_attracts_box_probes() {
        let map = time_t_map(builtin("coop-lv-2d").unwrap(), 1.0, 0.01).unwrap();
        let est = AttractingSetEstimate {
            cloud: vec![vec![2.0, 2.0]],
            trapping_box: IntervalBox::from_bounds(&[(1.0, 3.0), (1.0, 3.0)]),
            transient: 0,
            tail: 1,
            cluster_eps: 1e-4,
            invariance_defect: 0.0,
            diameter: 0.0,
        };
        let report = check_attracting(&map, &est, 100, 40, 5);
        assert_eq!(report.attracts_fraction, 1.0);
    }

    #[test]
    fn identity_map_is_periodic_at_the_seed() {
        let map = builtin("identity(2)").unwrap();
        let search = find_periodic_orbit(&map, &[0.3, -0.7], 4, 1e-9, 1e-12).unwrap();
        let est = search.found().expect("identity point is a fixed point");
        assert_eq!(est.period, 1);
        assert_eq!(est.residual, 0.0);
        assert!(est.refined);
    }

    #[test]
    fn logistic_two_cycle_refines_to_quartic_roots() {
        let map = builtin("logistic(3.2)").unwrap();
        // Seed near the attractor after a short settle.
        let settle = iterate(&map, &[0.3], 500).unwrap();
        let search = find_periodic_orbit(&map, settle.last(), 8, 1e-2, 1e-10).unwrap();
        let est = search.found().expect("2-cycle expected");
        assert_eq!(est.period, 2);
        assert!(est.refined);
        let (a, b) = logistic_two_cycle(3.2);
        let mut xs: Vec<f64> = est.points.iter().map(|p| p[0]).collect();
        xs.sort_by(|x, y| x.partial_cmp(y).unwrap());
        assert!((xs[0] - a).abs() < 1e-6);
        assert!((xs[1] - b).abs() < 1e-6);
        // Spec-pinned decimal values for the r = 3.2 cycle.
        assert!((xs[0] - 0.5130445).abs() < 1e-6);
        assert!((xs[1] - 0.7994555).abs() < 1e-6);
    }

    #[test]
    fn doubling_cycle_from_one_seventh() {
        let map = builtin("doubling").unwrap();
        let search = find_periodic_orbit(&map, &[1.0 / 7.0], 8, 1e-9, 1e-12).unwrap();
        let est = search.found().expect("1/7 lies on a 3-cycle");
        assert_eq!(est.period, 3);
        let expected = [1.0 / 7.0, 2.0 / 7.0, 4.0 / 7.0];
        for (p, e) in est.points.iter().zip(expected) {
            assert!((p[0] - e).abs() < 1e-12);
        }
    }

    #[test]
    fn no_recurrence_reports_not_found() {
        let map = FnMap::new(1, |x: &[f64]| vec![x[0] + 1.0]);
        let search = find_periodic_orbit(&map, &[0.0], 16, 1e-6, 1e-9).unwrap();
        assert!(matches!(search, PeriodicSearch::NotFound { .. }));
    }

    #[test]
    fn fixed_point_disguised_as_higher_period_collapses() {
        let map = FnMap::new(1, |x: &[f64]| vec![0.5 * x[0]]);
        // Near zero every period recurs at coarse tolerance; the divisor
        // check must collapse to period 1.
        let search = find_periodic_orbit(&map, &[1e-8], 6, 1e-3, 1e-12).unwrap();
        let est = search.found().unwrap();
        assert_eq!(est.period, 1);
        assert!(dist(&est.points[0], &[0.0]) < 1e-12);
    }

    #[test]
    fn stored_residual_replays() {
        let map = builtin("logistic(3.2)").unwrap();
        let settle = iterate(&map, &[0.3], 500).unwrap();
        let est = find_periodic_orbit(&map, settle.last(), 8, 1e-2, 1e-10)
            .unwrap()
            .found()
            .cloned()
            .unwrap();
        let replayed = orbit_residual(&map, &est.points).unwrap();
        assert!((replayed - est.residual).abs() <= 1e-12);
    }

    #[test]
    fn periodic_points_pairwise_distinct() {
        let map = builtin("logistic(3.2)").unwrap();
        let settle = iterate(&map, &[0.3], 500).unwrap();
        let est = find_periodic_orbit(&map, settle.last(), 8, 1e-2, 1e-10)
            .unwrap()
            .found()
            .cloned()
            .unwrap();
        for (i, a) in est.points.iter().enumerate() {
            for b in &est.points[i + 1..] {
                assert!(dist(a, b) > 10.0 * est.tolerance);
            }
        }
    }

    #[test]
    fn basin_of_constant_map_is_everything() {
        let map = FnMap::new(1, |_: &[f64]| vec![0.5]);
        let est = omega_limit(&map, &[0.1], 2, 10, 1e-9).unwrap();
        let grid = basin_sample(&map, &est, &IntervalBox::from_bounds(&[(0.0, 1.0)]), 11, 5)
            .unwrap();
        assert!(grid.labels.iter().all(|l| *l == BasinLabel::Attracted));
    }

    #[test]
    fn logistic_two_cycle_basin_excludes_endpoints() {
        let map = builtin("logistic(3.2)").unwrap();
        let est = omega_limit(&map, &[0.3], 2000, 200, 1e-4).unwrap();
        let grid = basin_sample(&map, &est, &IntervalBox::from_bounds(&[(0.0, 1.0)]), 21, 2000)
            .unwrap();
        assert_eq!(grid.labels[0], BasinLabel::NotAttracted); // x = 0 is fixed at 0
        assert_eq!(grid.labels[20], BasinLabel::NotAttracted); // x = 1 maps to 0
        for label in &grid.labels[1..20] {
            assert_eq!(*label, BasinLabel::Attracted);
        }
    }

    #[test]
    fn square_map_basin_threshold_at_one() {
        let map = FnMap::new(1, |x: &[f64]| vec![x[0] * x[0]]);
        let est = AttractingSetEstimate {
            cloud: vec![vec![0.0]],
            trapping_box: IntervalBox::from_bounds(&[(-0.1, 0.1)]),
            transient: 0,
            tail: 1,
            cluster_eps: 1e-3,
            invariance_defect: 0.0,
            diameter: 0.0,
        };
        let grid = basin_sample(&map, &est, &IntervalBox::from_bounds(&[(0.0, 2.0)]), 21, 60)
            .unwrap();
        for (k, label) in grid.labels.iter().enumerate() {
            let x = 2.0 * k as f64 / 20.0;
            if x < 1.0 {
                assert_eq!(*label, BasinLabel::Attracted, "x = {x}");
            } else {
                assert_ne!(*label, BasinLabel::Attracted, "x = {x}");
            }
        }
    }

    #[test]
    fn basin_csv_uses_numeric_labels() {
        let map = FnMap::new(1, |_: &[f64]| vec![0.5]);
        let est = omega_limit(&map, &[0.1], 2, 10, 1e-9).unwrap();
        let grid = basin_sample(&map, &est, &IntervalBox::from_bounds(&[(0.0, 1.0)]), 3, 5)
            .unwrap();
        let mut buf = Vec::new();
        grid.write_csv(&mut buf).unwrap();
        assert_eq!(String::from_utf8(buf).unwrap(), "1,1,1\n");
    }
}
