//! Theorem experiments: certified-monotone map + attracting set, then a
//! periodic-orbit search. For a monotone map on a strongly ordered space,
//! an attracting set carrying dense periodic points or a dense orbit is a
//! single periodic orbit, so the pipeline's empirical signature is
//! "certified + attracting implies a periodic orbit is found".
//!
//! A run where the signature fails is labeled a violation candidate, never
//! a counterexample: the theorem is proved, numerics are fallible.

use super::{check_positive, config_err, region_box, to_pretty_json, LabError, SystemRef};
use crate::attract::{
    check_attracting, dist, find_periodic_orbit, omega_limit,
};
use crate::dynamics::{time_t_map, DynamicsError, PointMap};
use crate::expr::{SystemDef, SystemKind};
use crate::monocert::{verify_cooperative_field, verify_monotone_map, Certificate, Verdict};
use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};
use std::collections::BTreeMap;
use std::path::Path;

fn d_tau() -> f64 {
    1.0
}
fn d_flow_h() -> f64 {
    0.02
}
fn d_depth() -> u32 {
    4
}
fn d_cluster_eps() -> f64 {
    1e-6
}
fn d_coarse_tol() -> f64 {
    1e-3
}
fn d_refine_tol() -> f64 {
    1e-9
}
fn d_match_tol() -> f64 {
    1e-4
}
fn d_settle_tol() -> f64 {
    1e-9
}
fn d_settle_cap() -> usize {
    20_000
}
fn d_probes() -> usize {
    40
}
fn d_attract_steps() -> usize {
    60
}
fn d_max_period() -> usize {
    32
}
fn d_tail() -> usize {
    50
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(tag = "mode", rename_all = "kebab-case")]
pub enum TheoremMode {
    /// One named system.
    Single {
        system: SystemRef,
        #[serde(rename = "box")]
        region: Vec<(f64, f64)>,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        x0: Option<Vec<f64>>,
    },
    /// Random diagonally-dominant cooperative systems.
    Sweep {
        count: usize,
        /// Dimensions cycled over instances; defaults to [2, 3].
        #[serde(default, skip_serializing_if = "Option::is_none")]
        dims: Option<Vec<usize>>,
    },
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct TheoremConfig {
    #[serde(flatten)]
    pub mode: TheoremMode,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub seed: Option<u64>,
    #[serde(default = "d_tau")]
    pub tau: f64,
    #[serde(default = "d_flow_h")]
    pub h: f64,
    #[serde(default = "d_depth")]
    pub depth_limit: u32,
    #[serde(default = "d_cluster_eps")]
    pub cluster_eps: f64,
    #[serde(default = "d_coarse_tol")]
    pub coarse_tol: f64,
    #[serde(default = "d_refine_tol")]
    pub refine_tol: f64,
    /// Cloud points must sit within this distance of the found orbit.
    #[serde(default = "d_match_tol")]
    pub match_tol: f64,
    #[serde(default = "d_settle_tol")]
    pub settle_tol: f64,
    #[serde(default = "d_settle_cap")]
    pub settle_cap: usize,
    #[serde(default = "d_probes")]
    pub probes: usize,
    #[serde(default = "d_attract_steps")]
    pub attract_steps: usize,
    #[serde(default = "d_max_period")]
    pub max_period: usize,
    #[serde(default = "d_tail")]
    pub tail: usize,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum TheoremVerdict {
    ConsistentWithTheorem,
    ViolationCandidate,
    Inconclusive,
}

#[derive(Debug, Clone, Serialize)]
pub struct CertificateSummary {
    pub verdict: Verdict,
    pub subdivisions: usize,
    pub reason: Option<String>,
}

impl CertificateSummary {
    fn from(cert: &Certificate) -> CertificateSummary {
        CertificateSummary {
            verdict: cert.verdict,
            subdivisions: cert.subdivisions,
            reason: cert.reason.clone(),
        }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct AttractingSummary {
    pub cloud_size: usize,
    pub diameter: f64,
    pub invariance_defect: f64,
    pub attracts_fraction: f64,
}

#[derive(Debug, Clone, Serialize)]
pub struct PeriodicResult {
    pub found: bool,
    pub period: Option<usize>,
    pub residual: Option<f64>,
    pub refined: Option<bool>,
    pub points: Vec<Vec<f64>>,
}

/// Report for a single theorem experiment.
#[derive(Debug, Clone, Serialize)]
pub struct TheoremReport {
    pub system: String,
    pub certificate: CertificateSummary,
    pub attracting: Option<AttractingSummary>,
    pub periodic: Option<PeriodicResult>,
    /// Max distance from a cloud point to the found periodic orbit.
    pub cloud_orbit_distance: Option<f64>,
    pub verdict: TheoremVerdict,
    pub notes: Vec<String>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum InstanceStatus {
    Completed,
    DivergentExcluded,
}

#[derive(Debug, Clone, Serialize)]
pub struct TheoremInstanceReport {
    pub index: usize,
    pub dimension: usize,
    pub status: InstanceStatus,
    pub report: Option<TheoremReport>,
}

#[derive(Debug, Clone, Serialize)]
pub struct TheoremSweepReport {
    pub count: usize,
    pub family_seed: u64,
    pub consistent: usize,
    pub violation_candidates: usize,
    pub inconclusive: usize,
    pub divergent_excluded: usize,
    pub max_cloud_orbit_distance: Option<f64>,
    pub instances: Vec<TheoremInstanceReport>,
}

pub(super) fn run_theorem(
    c: &TheoremConfig,
    base_dir: &Path,
) -> Result<(String, i32), LabError> {
    for (value, field) in [
        (c.cluster_eps, "cluster_eps"),
        (c.coarse_tol, "coarse_tol"),
        (c.refine_tol, "refine_tol"),
        (c.match_tol, "match_tol"),
        (c.settle_tol, "settle_tol"),
        (c.tau, "tau"),
        (c.h, "h"),
    ] {
        check_positive(value, field)?;
    }
    let seed = c.seed.expect("validated by run()");
    match &c.mode {
        TheoremMode::Single { system, region, x0 } => {
            let sys = system.resolve(base_dir)?;
            let bx = region_box(region, "box")?;
            if bx.dim() != sys.dimension() {
                return Err(config_err("box", "dimension does not match the system"));
            }
            let start = x0.clone().unwrap_or_else(|| vec![0.5; sys.dimension()]);
            let report = theorem_pipeline(&sys, &bx.axes_bounds(), &start, c, seed)?
                .ok_or_else(|| {
                    LabError::Dynamics(DynamicsError::Divergent { step: 0 })
                })?;
            let code = exit_code_for(&[report.verdict]);
            Ok((to_pretty_json(&report), code))
        }
        TheoremMode::Sweep { count, dims } => {
            if *count < 1 {
                return Err(config_err("count", "must be at least 1"));
            }
            let dims = dims.clone().unwrap_or_else(|| vec![2, 3]);
            if dims.iter().any(|&n| n < 1) {
                return Err(config_err("dims", "dimensions must be at least 1"));
            }
            let report = run_sweep(*count, &dims, seed, c)?;
            let verdicts: Vec<TheoremVerdict> = report
                .instances
                .iter()
                .filter_map(|i| i.report.as_ref().map(|r| r.verdict))
                .collect();
            let code = exit_code_for(&verdicts);
            Ok((to_pretty_json(&report), code))
        }
    }
}

fn exit_code_for(verdicts: &[TheoremVerdict]) -> i32 {
    if verdicts
        .iter()
        .any(|v| *v == TheoremVerdict::ViolationCandidate)
    {
        2
    } else {
        0
    }
}

trait AxesBounds {
    fn axes_bounds(&self) -> Vec<(f64, f64)>;
}

impl AxesBounds for crate::expr::IntervalBox {
    fn axes_bounds(&self) -> Vec<(f64, f64)> {
        self.axes().iter().map(|iv| (iv.lo, iv.hi)).collect()
    }
}

/// Random cooperative ecology instance: dx_i/dt = x_i (r_i - a_ii x_i +
/// sum_{j != i} a_ij x_j), with growth rates in [0.5, 1.5], self-limits in
/// [0.8, 1.2], and couplings capped so every row stays diagonally dominant
/// (orbits remain bounded).
pub fn sweep_system(dimension: usize, rng: &mut ChaCha8Rng, index: usize) -> SystemDef {
    let n = dimension;
    let r: Vec<f64> = (0..n).map(|_| rng.gen_range(0.5..=1.5)).collect();
    let a_diag: Vec<f64> = (0..n).map(|_| rng.gen_range(0.8..=1.2)).collect();
    let a_min = a_diag.iter().copied().fold(f64::INFINITY, f64::min);
    // Row dominance cap: sum of couplings stays below the self-limit.
    let cap = if n > 1 {
        0.95 * a_min / (n - 1) as f64
    } else {
        0.0
    };
    let mut params = BTreeMap::new();
    let mut equations = Vec::with_capacity(n);
    for i in 0..n {
        params.insert(format!("r{}", i + 1), r[i]);
        params.insert(format!("a{}{}", i + 1, i + 1), a_diag[i]);
        let mut terms = format!("r{idx} - a{idx}{idx}*x{idx}", idx = i + 1);
        for j in 0..n {
            if j != i {
                let coupling = rng.gen_range(0.0..=cap);
                params.insert(format!("a{}{}", i + 1, j + 1), coupling);
                terms.push_str(&format!(" + a{}{}*x{}", i + 1, j + 1, j + 1));
            }
        }
        equations.push(format!("x{}*({})", i + 1, terms));
    }
    let variables: Vec<String> = (1..=n).map(|i| format!("x{i}")).collect();
    let var_refs: Vec<&str> = variables.iter().map(|s| s.as_str()).collect();
    let eq_refs: Vec<&str> = equations.iter().map(|s| s.as_str()).collect();
    SystemDef::new(
        &format!("sweep-coop-{index}"),
        SystemKind::VectorField,
        &var_refs,
        params,
        &eq_refs,
    )
    .expect("generated systems are well formed")
}

fn run_sweep(
    count: usize,
    dims: &[usize],
    family_seed: u64,
    c: &TheoremConfig,
) -> Result<TheoremSweepReport, LabError> {
    let mut rng = ChaCha8Rng::seed_from_u64(family_seed);
    let mut instances = Vec::with_capacity(count);
    let mut consistent = 0;
    let mut violations = 0;
    let mut inconclusive = 0;
    let mut divergent = 0;
    let mut max_match: Option<f64> = None;
    for index in 0..count {
        let n = dims[index % dims.len()];
        let sys = sweep_system(n, &mut rng, index);
        // Bounded by r_max / (a_ii - sum couplings) <= 1.5 / 0.04; 40 is a
        // comfortable trapping bound per axis.
        let bounds = vec![(0.0, 40.0); n];
        let x0 = vec![0.5; n];
        match theorem_pipeline(&sys, &bounds, &x0, c, family_seed ^ index as u64)? {
            None => {
                divergent += 1;
                instances.push(TheoremInstanceReport {
                    index,
                    dimension: n,
                    status: InstanceStatus::DivergentExcluded,
                    report: None,
                });
            }
            Some(report) => {
                match report.verdict {
                    TheoremVerdict::ConsistentWithTheorem => consistent += 1,
                    TheoremVerdict::ViolationCandidate => violations += 1,
                    TheoremVerdict::Inconclusive => inconclusive += 1,
                }
                if let Some(d) = report.cloud_orbit_distance {
                    max_match = Some(max_match.map_or(d, |m: f64| m.max(d)));
                }
                instances.push(TheoremInstanceReport {
                    index,
                    dimension: n,
                    status: InstanceStatus::Completed,
                    report: Some(report),
                });
            }
        }
    }
    Ok(TheoremSweepReport {
        count,
        family_seed,
        consistent,
        violation_candidates: violations,
        inconclusive,
        divergent_excluded: divergent,
        max_cloud_orbit_distance: max_match,
        instances,
    })
}

/// Certify, settle, estimate the attracting set, check attraction, and
/// hunt the periodic orbit. Returns None when the instance diverges.
fn theorem_pipeline(
    sys: &SystemDef,
    bounds: &[(f64, f64)],
    x0: &[f64],
    c: &TheoremConfig,
    seed: u64,
) -> Result<Option<TheoremReport>, LabError> {
    let bx = region_box(bounds, "box")?;
    let mut notes = Vec::new();

    let (certificate, map): (Certificate, Box<dyn PointMap>) = match sys.kind() {
        SystemKind::VectorField => {
            let cert = verify_cooperative_field(sys, &bx, c.depth_limit)?;
            let map = time_t_map(sys.clone(), c.tau, c.h)?;
            notes.push(format!(
                "theorem tested on the time-{} map of the flow",
                c.tau
            ));
            (cert, Box::new(map))
        }
        SystemKind::DiscreteMap => {
            let cert = verify_monotone_map(sys, &bx, c.depth_limit)?;
            (cert, Box::new(sys.clone()))
        }
    };
    let map = map.as_ref();

    // Settle toward the attracting set before estimating it.
    let mut settled = x0.to_vec();
    let mut settle_steps = 0usize;
    loop {
        let next = match map.apply(&settled) {
            Ok(next) => next,
            Err(DynamicsError::Divergent { .. }) => return Ok(None),
            Err(e) => return Err(e.into()),
        };
        let moved = dist(&next, &settled);
        settled = next;
        settle_steps += 1;
        if moved < c.settle_tol || settle_steps >= c.settle_cap {
            break;
        }
    }
    notes.push(format!("settled for {settle_steps} steps"));

    let estimate = match omega_limit(map, &settled, 10, c.tail, c.cluster_eps) {
        Ok(est) => est,
        Err(DynamicsError::Divergent { .. }) => return Ok(None),
        Err(e) => return Err(e.into()),
    };
    let attraction = check_attracting(map, &estimate, c.probes, c.attract_steps, seed);

    let search = find_periodic_orbit(
        map,
        &estimate.cloud[0],
        c.max_period,
        c.coarse_tol,
        c.refine_tol,
    )?;
    let (periodic, cloud_orbit_distance) = match search.found() {
        Some(est) => {
            let max_d = estimate
                .cloud
                .iter()
                .map(|p| {
                    est.points
                        .iter()
                        .map(|q| dist(p, q))
                        .fold(f64::INFINITY, f64::min)
                })
                .fold(0.0f64, f64::max);
            (
                PeriodicResult {
                    found: true,
                    period: Some(est.period),
                    residual: Some(est.residual),
                    refined: Some(est.refined),
                    points: est.points.clone(),
                },
                Some(max_d),
            )
        }
        None => (
            PeriodicResult {
                found: false,
                period: None,
                residual: None,
                refined: None,
                points: Vec::new(),
            },
            None,
        ),
    };

    let fully_attracting = attraction.attracts_fraction == 1.0;
    let orbit_matches = periodic.found
        && periodic.refined.unwrap_or(false)
        && cloud_orbit_distance.is_some_and(|d| d <= c.match_tol);
    let verdict = match certificate.verdict {
        Verdict::Certified if fully_attracting && orbit_matches => {
            TheoremVerdict::ConsistentWithTheorem
        }
        Verdict::Certified if fully_attracting && !periodic.found => {
            // The theorem's signature failed outright: certified monotone,
            // attracting, but no periodic orbit at the stated tolerances.
            TheoremVerdict::ViolationCandidate
        }
        _ => TheoremVerdict::Inconclusive,
    };
    if verdict == TheoremVerdict::Inconclusive {
        notes.push(match certificate.verdict {
            Verdict::Certified => {
                "certified, but attraction or orbit matching fell short of tolerances".to_string()
            }
            Verdict::Refuted => "system is not monotone; the theorem does not apply".to_string(),
            Verdict::Inconclusive => "monotonicity certificate inconclusive".to_string(),
        });
    }
    // A probe that never converged keeps us from claiming the violation
    // signature; the supremum curve tells how close attraction came.
    if let Some(final_sup) = attraction.uniform_bound_curve.last() {
        notes.push(format!(
            "attracts_fraction {:.3}, final sup distance {final_sup:.3e}",
            attraction.attracts_fraction
        ));
    }

    Ok(Some(TheoremReport {
        system: sys.name().to_string(),
        certificate: CertificateSummary::from(&certificate),
        attracting: Some(AttractingSummary {
            cloud_size: estimate.cloud.len(),
            diameter: estimate.diameter,
            invariance_defect: estimate.invariance_defect,
            attracts_fraction: attraction.attracts_fraction,
        }),
        periodic: Some(periodic),
        cloud_orbit_distance,
        verdict,
        notes,
    }))
}
