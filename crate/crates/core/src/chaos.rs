//! Numerical chaos indicators: pairwise sensitivity separation, Benettin
//! two-trajectory Lyapunov exponents, transitivity coverage over reference
//! bins, and the distance gap from occupied bins to known periodic orbits.
//!
//! These are heuristics: the sensitivity statistic is a minimum over
//! sampled pairs standing in for a universal separation constant, and the
//! coverage denominators are restricted to bins visited by a reference
//! ensemble so measure-zero attractors are not penalized against the full
//! ambient box.

use crate::attract::{dist, PeriodicOrbitEstimate};
use crate::dynamics::{iterate, DynamicsError, PointMap};
use crate::expr::IntervalBox;
use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::Serialize;
use std::collections::BTreeSet;

/// Default seed for stochastic indicator runs.
pub const DEFAULT_SEED: u64 = 42;

/// Separation statistic from nearby pairs.
#[derive(Debug, Clone, PartialEq)]
pub struct SensitivityEstimate {
    /// Minimum over pairs of the maximal separation within the horizon: a
    /// lower-bound proxy for a universal sensitivity constant.
    pub delta_hat: f64,
    pub pairs_used: usize,
    /// Pairs dropped because an orbit diverged; reported, not folded into
    /// the minimum.
    pub divergent_pairs: usize,
    /// Per-pair separation curves d(T^k x, T^k y), k = 0..=horizon.
    pub curves: Vec<Vec<f64>>,
}

/// For each of `pairs` base points x sampled in `bx` with a partner y in
/// the ball B(x, eps), records max over 1 <= k <= horizon of
/// d(T^k x, T^k y) and returns the minimum of those maxima.
pub fn sensitivity_estimate(
    map: &dyn PointMap,
    bx: &IntervalBox,
    eps: f64,
    pairs: usize,
    horizon: usize,
    seed: u64,
) -> Result<SensitivityEstimate, DynamicsError> {
    if !(eps > 0.0) {
        return Err(DynamicsError::InvalidParameter(
            "eps must be positive".into(),
        ));
    }
    if pairs == 0 || horizon == 0 {
        return Err(DynamicsError::InvalidParameter(
            "pairs and horizon must be at least 1".into(),
        ));
    }
    let n = map.dim();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut delta_hat = f64::INFINITY;
    let mut divergent_pairs = 0usize;
    let mut used = 0usize;
    let mut curves = Vec::with_capacity(pairs);
    for _ in 0..pairs {
        let x0 = bx.sample(&mut rng);
        // Partner uniform in the eps-ball around x0 (rejection from the cube).
        let y0 = loop {
            let offset: Vec<f64> = (0..n).map(|_| rng.gen_range(-eps..=eps)).collect();
            let r = offset.iter().map(|v| v * v).sum::<f64>().sqrt();
            if r > 0.0 && r <= eps {
                break x0.iter().zip(&offset).map(|(a, b)| a + b).collect::<Vec<f64>>();
            }
        };
        let mut x = x0;
        let mut y = y0;
        let mut curve = vec![dist(&x, &y)];
        let mut max_sep = 0.0f64;
        let mut ok = true;
        for _ in 0..horizon {
            match (map.apply(&x), map.apply(&y)) {
                (Ok(nx), Ok(ny)) => {
                    x = nx;
                    y = ny;
                    let d = dist(&x, &y);
                    curve.push(d);
                    max_sep = max_sep.max(d);
                }
                _ => {
                    ok = false;
                    break;
                }
            }
        }
        curves.push(curve);
        if ok {
            delta_hat = delta_hat.min(max_sep);
            used += 1;
        } else {
            divergent_pairs += 1;
        }
    }
    Ok(SensitivityEstimate {
        delta_hat,
        pairs_used: used,
        divergent_pairs,
        curves,
    })
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct LyapunovEstimate {
    pub lambda1: f64,
    pub stderr: f64,
    /// Times the offset collapsed below 1e-15 and was re-randomized.
    pub collapses: usize,
}

/// Largest Lyapunov exponent by two-trajectory renormalization: evolve a
/// base point and an offset partner (initial gap 1e-9), accumulate
/// log(gap growth) each renormalization window, divide by elapsed time.
/// `time_per_step` is 1 for maps and tau for time-tau flow maps. The
/// standard error comes from averaging over 10 consecutive blocks.
pub fn lyapunov_benettin(
    map: &dyn PointMap,
    x0: &[f64],
    steps: usize,
    renorm_every: usize,
    time_per_step: f64,
    seed: u64,
) -> Result<LyapunovEstimate, DynamicsError> {
    const GAP: f64 = 1e-9;
    const COLLAPSE: f64 = 1e-15;
    if steps < 1000 {
        return Err(DynamicsError::InvalidParameter(
            "lyapunov estimation needs at least 1000 steps".into(),
        ));
    }
    if renorm_every == 0 || renorm_every > steps / 10 {
        return Err(DynamicsError::InvalidParameter(
            "renorm_every must be in 1..=steps/10".into(),
        ));
    }
    let n = map.dim();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let offset_direction = |rng: &mut ChaCha8Rng| -> Vec<f64> {
        loop {
            let v: Vec<f64> = (0..n).map(|_| rng.gen_range(-1.0..=1.0)).collect();
            let r = norm(&v);
            if r > 1e-3 {
                return v.iter().map(|c| c / r).collect();
            }
        }
    };
    let mut base = x0.to_vec();
    let dir = offset_direction(&mut rng);
    let mut partner: Vec<f64> = base.iter().zip(&dir).map(|(b, d)| b + GAP * d).collect();
    let mut window_logs = Vec::new();
    let mut collapses = 0usize;
    let windows = steps / renorm_every;
    for _ in 0..windows {
        for _ in 0..renorm_every {
            base = map.apply(&base)?;
            partner = match map.apply(&partner) {
                Ok(p) => p,
                Err(DynamicsError::Divergent { .. }) => {
                    // Partner escaped; restart it next to the base orbit.
                    collapses += 1;
                    let dir = offset_direction(&mut rng);
                    base.iter().zip(&dir).map(|(b, d)| b + GAP * d).collect()
                }
                Err(e) => return Err(e),
            };
        }
        let gap = dist(&base, &partner);
        if gap < COLLAPSE {
            collapses += 1;
            let dir = offset_direction(&mut rng);
            partner = base.iter().zip(&dir).map(|(b, d)| b + GAP * d).collect();
            continue;
        }
        window_logs.push((gap / GAP).ln());
        // Pull the partner back to the reference gap along the current
        // separation direction.
        let scale = GAP / gap;
        partner = base
            .iter()
            .zip(&partner)
            .map(|(b, p)| b + (p - b) * scale)
            .collect();
    }
    if window_logs.is_empty() {
        return Err(DynamicsError::InvalidParameter(
            "all renormalization windows collapsed".into(),
        ));
    }
    let window_time = renorm_every as f64 * time_per_step;
    let lambda1 =
        window_logs.iter().sum::<f64>() / (window_logs.len() as f64 * window_time);
    // Block averaging over 10 consecutive blocks.
    let blocks = 10.min(window_logs.len());
    let block_len = window_logs.len() / blocks;
    let mut block_means = Vec::with_capacity(blocks);
    for b in 0..blocks {
        let chunk = &window_logs[b * block_len..(b + 1) * block_len];
        block_means.push(chunk.iter().sum::<f64>() / (chunk.len() as f64 * window_time));
    }
    let mean = block_means.iter().sum::<f64>() / blocks as f64;
    let var = block_means
        .iter()
        .map(|m| (m - mean) * (m - mean))
        .sum::<f64>()
        / (blocks.max(2) - 1) as f64;
    let stderr = (var / blocks as f64).sqrt();
    Ok(LyapunovEstimate {
        lambda1,
        stderr,
        collapses,
    })
}

fn norm(v: &[f64]) -> f64 {
    v.iter().map(|x| x * x).sum::<f64>().sqrt()
}

/// Occupancy of a regular binning of `bx` by a reference ensemble; used
/// as the denominator for coverage statistics.
#[derive(Debug, Clone, PartialEq)]
pub struct ReferenceBins {
    bx: IntervalBox,
    bins_per_axis: usize,
    occupied: BTreeSet<usize>,
}

impl ReferenceBins {
    pub fn occupied_count(&self) -> usize {
        self.occupied.len()
    }

    pub fn bins_per_axis(&self) -> usize {
        self.bins_per_axis
    }

    fn bin_of(&self, x: &[f64]) -> Option<usize> {
        let mut flat = 0usize;
        for (i, &v) in x.iter().enumerate() {
            let axis = self.bx.axis(i);
            if v < axis.lo || v > axis.hi {
                return None;
            }
            let w = axis.width();
            let k = if w == 0.0 {
                0
            } else {
                (((v - axis.lo) / w) * self.bins_per_axis as f64) as usize
            };
            flat = flat * self.bins_per_axis + k.min(self.bins_per_axis - 1);
        }
        Some(flat)
    }

    fn center_of(&self, mut flat: usize) -> Vec<f64> {
        let n = self.bx.dim();
        let mut x = vec![0.0; n];
        for i in (0..n).rev() {
            let k = flat % self.bins_per_axis;
            flat /= self.bins_per_axis;
            let axis = self.bx.axis(i);
            x[i] = axis.lo + axis.width() * (k as f64 + 0.5) / self.bins_per_axis as f64;
        }
        x
    }

    /// Half the diagonal of one bin.
    pub fn bin_radius(&self) -> f64 {
        (0..self.bx.dim())
            .map(|i| {
                let w = self.bx.axis(i).width() / self.bins_per_axis as f64;
                0.25 * w * w
            })
            .sum::<f64>()
            .sqrt()
    }
}

/// Runs `members` seeded orbits (each `transient + steps_per_member`
/// iterations, transient discarded) and records the bins they visit.
pub fn reference_bins(
    map: &dyn PointMap,
    bx: &IntervalBox,
    bins_per_axis: usize,
    members: usize,
    transient: usize,
    steps_per_member: usize,
    seed: u64,
) -> Result<ReferenceBins, DynamicsError> {
    if bins_per_axis < 2 {
        return Err(DynamicsError::InvalidParameter(
            "need at least 2 bins per axis".into(),
        ));
    }
    let mut reference = ReferenceBins {
        bx: bx.clone(),
        bins_per_axis,
        occupied: BTreeSet::new(),
    };
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    for _ in 0..members {
        let x0 = bx.sample(&mut rng);
        let orbit = iterate(map, &x0, transient + steps_per_member)?;
        for state in orbit.states.iter().skip(transient.min(orbit.len())) {
            if let Some(bin) = reference.bin_of(state) {
                reference.occupied.insert(bin);
            }
        }
    }
    Ok(reference)
}

/// Bins visited by the single orbit of `x0` within `steps` iterations.
pub fn occupied_bins(
    map: &dyn PointMap,
    reference: &ReferenceBins,
    x0: &[f64],
    steps: usize,
) -> Result<BTreeSet<usize>, DynamicsError> {
    let orbit = iterate(map, x0, steps)?;
    Ok(orbit
        .states
        .iter()
        .filter_map(|s| reference.bin_of(s))
        .collect())
}

const REF_MEMBERS: usize = 8;
const REF_TRANSIENT: usize = 1000;
const REF_STEPS: usize = 20_000;

/// Fraction of reference-occupied bins the orbit of `x0` visits within
/// `steps` iterations. The reference ensemble (8 members, 20000 steps
/// each after transient) is fixed, so the fraction is nondecreasing in
/// `steps` for a fixed seed.
pub fn transitivity_coverage(
    map: &dyn PointMap,
    bx: &IntervalBox,
    x0: &[f64],
    steps: usize,
    bins_per_axis: usize,
    seed: u64,
) -> Result<f64, DynamicsError> {
    let reference = reference_bins(
        map,
        bx,
        bins_per_axis,
        REF_MEMBERS,
        REF_TRANSIENT,
        REF_STEPS,
        seed,
    )?;
    transitivity_coverage_with_reference(map, &reference, x0, steps)
}

pub fn transitivity_coverage_with_reference(
    map: &dyn PointMap,
    reference: &ReferenceBins,
    x0: &[f64],
    steps: usize,
) -> Result<f64, DynamicsError> {
    if reference.occupied.is_empty() {
        return Ok(0.0);
    }
    let visited = occupied_bins(map, reference, x0, steps)?;
    let hit = visited.intersection(&reference.occupied).count();
    Ok(hit as f64 / reference.occupied.len() as f64)
}

/// Maximum over reference-occupied bins of the distance from the bin
/// center to the nearest point of any found periodic orbit. Small gaps
/// mean periodic points are plausibly dense at this resolution.
pub fn periodic_density_gap(
    map: &dyn PointMap,
    bx: &IntervalBox,
    found_orbits: &[PeriodicOrbitEstimate],
    bins_per_axis: usize,
    seed: u64,
) -> Result<f64, DynamicsError> {
    let reference = reference_bins(
        map,
        bx,
        bins_per_axis,
        REF_MEMBERS,
        REF_TRANSIENT,
        REF_STEPS,
        seed,
    )?;
    periodic_density_gap_with_reference(&reference, found_orbits)
}

pub fn periodic_density_gap_with_reference(
    reference: &ReferenceBins,
    found_orbits: &[PeriodicOrbitEstimate],
) -> Result<f64, DynamicsError> {
    if found_orbits.is_empty() {
        return Err(DynamicsError::InvalidParameter(
            "periodic_density_gap needs at least one found orbit".into(),
        ));
    }
    let points: Vec<&Vec<f64>> = found_orbits.iter().flat_map(|o| o.points.iter()).collect();
    let mut gap = 0.0f64;
    for &bin in &reference.occupied {
        let center = reference.center_of(bin);
        let nearest = points
            .iter()
            .map(|p| dist(&center, p))
            .fold(f64::INFINITY, f64::min);
        gap = gap.max(nearest);
    }
    Ok(gap)
}

/// Bin statistics for a scalar return map presented as successive pairs
/// (v_n, v_{n+1}).
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ReturnMapStats {
    pub bins: usize,
    pub occupied_bins: usize,
    /// Occupied bins whose detrended vertical spread is below the
    /// threshold.
    pub thin_bins: usize,
    pub max_thickness: f64,
    /// Fraction of bins over the occupied range that hold a point.
    pub occupancy: f64,
}

/// Bins the first coordinates over their occupied range and measures the
/// vertical thickness of the point cloud in each bin after removing the
/// bin's least-squares linear trend (the curve's local slope would
/// otherwise dominate the spread). Thin bins everywhere mean the pairs lie
/// on a one-dimensional graph at this resolution.
pub fn return_map_thickness(
    pairs: &[(f64, f64)],
    bins: usize,
    thin_threshold: f64,
) -> ReturnMapStats {
    assert!(bins >= 2, "need at least two bins");
    let lo = pairs.iter().map(|p| p.0).fold(f64::INFINITY, f64::min);
    let hi = pairs.iter().map(|p| p.0).fold(f64::NEG_INFINITY, f64::max);
    let width = hi - lo;
    let mut buckets: Vec<Vec<(f64, f64)>> = vec![Vec::new(); bins];
    for &(x, y) in pairs {
        let k = if width == 0.0 {
            0
        } else {
            ((((x - lo) / width) * bins as f64) as usize).min(bins - 1)
        };
        buckets[k].push((x, y));
    }
    let mut occupied = 0usize;
    let mut thin = 0usize;
    let mut max_thickness = 0.0f64;
    for bucket in &buckets {
        if bucket.is_empty() {
            continue;
        }
        occupied += 1;
        let thickness = detrended_spread(bucket);
        max_thickness = max_thickness.max(thickness);
        if thickness < thin_threshold {
            thin += 1;
        }
    }
    ReturnMapStats {
        bins,
        occupied_bins: occupied,
        thin_bins: thin,
        max_thickness,
        occupancy: occupied as f64 / bins as f64,
    }
}

fn detrended_spread(points: &[(f64, f64)]) -> f64 {
    let n = points.len() as f64;
    if points.len() < 2 {
        return 0.0;
    }
    let mx = points.iter().map(|p| p.0).sum::<f64>() / n;
    let my = points.iter().map(|p| p.1).sum::<f64>() / n;
    let sxx = points.iter().map(|p| (p.0 - mx) * (p.0 - mx)).sum::<f64>();
    let sxy = points
        .iter()
        .map(|p| (p.0 - mx) * (p.1 - my))
        .sum::<f64>();
    let slope = if sxx > 0.0 { sxy / sxx } else { 0.0 };
    let mut res_lo = f64::INFINITY;
    let mut res_hi = f64::NEG_INFINITY;
    for &(x, y) in points {
        let r = y - (my + slope * (x - mx));
        res_lo = res_lo.min(r);
        res_hi = res_hi.max(r);
    }
    res_hi - res_lo
}

/// One heuristic verdict with a note on how it was reached.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct FlagNote {
    pub holds: bool,
    pub note: String,
}

/// Heuristic per-condition flags; none of these is proof-grade.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct DevaneyFlags {
    pub sensitive: FlagNote,
    pub transitive: FlagNote,
    pub dense_periodic: FlagNote,
    pub nondiscreteness_note: String,
}

/// Bundle of the numerical indicators for one map.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ChaosReport {
    pub sensitivity_delta_hat: f64,
    pub lyapunov_1: f64,
    pub lyapunov_stderr: f64,
    pub transitivity_coverage: f64,
    pub periodic_density_gap: f64,
    pub flags: DevaneyFlags,
}

impl ChaosReport {
    /// Validates the type invariants: coverage in [0,1], all fields finite.
    pub fn new(
        sensitivity_delta_hat: f64,
        lyapunov_1: f64,
        lyapunov_stderr: f64,
        transitivity_coverage: f64,
        periodic_density_gap: f64,
        flags: DevaneyFlags,
    ) -> Result<ChaosReport, DynamicsError> {
        if !(0.0..=1.0).contains(&transitivity_coverage) {
            return Err(DynamicsError::InvalidParameter(format!(
                "coverage {transitivity_coverage} outside [0, 1]"
            )));
        }
        for (name, v) in [
            ("sensitivity_delta_hat", sensitivity_delta_hat),
            ("lyapunov_1", lyapunov_1),
            ("lyapunov_stderr", lyapunov_stderr),
            ("periodic_density_gap", periodic_density_gap),
        ] {
            if !v.is_finite() {
                return Err(DynamicsError::InvalidParameter(format!(
                    "{name} is not finite"
                )));
            }
        }
        Ok(ChaosReport {
            sensitivity_delta_hat,
            lyapunov_1,
            lyapunov_stderr,
            transitivity_coverage,
            periodic_density_gap,
            flags,
        })
    }
}
