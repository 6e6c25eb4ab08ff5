//! Pipelines behind the simulate / certify / attract / chaos / sft
//! experiment kinds.

use super::{
    check_positive, config_err, region_box, to_pretty_json, write_text, AttractConfig,
    CertifyConfig, ChaosConfig, GraphRef, LabError, SftCheckKind, SftConfig, SimulateConfig,
};
use crate::attract::{check_attracting, find_periodic_orbit, omega_limit, PeriodicSearch};
use crate::chaos::{
    lyapunov_benettin, periodic_density_gap_with_reference, reference_bins, sensitivity_estimate,
    transitivity_coverage_with_reference, ChaosReport, DevaneyFlags, FlagNote,
};
use crate::dynamics::{integrate_rk4, iterate, Orbit};
use crate::expr::{SystemDef, SystemKind};
use crate::monocert::{verify_cooperative_field, verify_monotone_map, Certificate, Verdict};
use crate::sft::{
    devaney_check_bruteforce, equivalence_scan, touhey_check, word_string, Budget, DevaneyVerdict,
    SymbolGraph, TouheyVerdict,
};
use serde::Serialize;
use std::fs;
use std::path::Path;

#[derive(Serialize)]
struct SimulateReport {
    system: String,
    kind: &'static str,
    samples: usize,
    divergent: bool,
    final_time: f64,
    final_state: Vec<f64>,
    max_norm: f64,
    orbit_csv: String,
}

pub(super) fn run_simulate(
    c: &SimulateConfig,
    base_dir: &Path,
    run_dir: &Path,
) -> Result<String, LabError> {
    let sys = c.system.resolve(base_dir)?;
    let orbit: Orbit = match sys.kind() {
        SystemKind::DiscreteMap => iterate(&sys, &c.x0, c.steps)?,
        SystemKind::VectorField => {
            check_positive(c.h, "h")?;
            let t_end = c.t_end.ok_or_else(|| {
                config_err("t_end", "required when simulating a vector field")
            })?;
            check_positive(t_end, "t_end")?;
            integrate_rk4(&sys, &c.x0, c.h, t_end)?
        }
    };
    let csv_path = run_dir.join("orbit.csv");
    let mut buf = Vec::new();
    orbit
        .write_csv(&mut buf)
        .expect("writing to memory cannot fail");
    fs::write(&csv_path, &buf).map_err(|source| LabError::Io {
        action: "write",
        path: csv_path.clone(),
        source,
    })?;
    let report = SimulateReport {
        system: sys.name().to_string(),
        kind: sys.kind().label(),
        samples: orbit.len(),
        divergent: orbit.divergent,
        final_time: *orbit.times.last().expect("orbit is nonempty"),
        final_state: orbit.last().to_vec(),
        max_norm: orbit.max_norm(),
        orbit_csv: "orbit.csv".to_string(),
    };
    Ok(to_pretty_json(&report))
}

#[derive(Serialize)]
struct CertifyReport {
    system: String,
    kind: &'static str,
    verdict: Verdict,
    subdivisions: usize,
    depth_limit: u32,
    witness_replays: Option<bool>,
    reason: Option<String>,
    certificate: String,
}

pub(super) fn certify_system(
    sys: &SystemDef,
    region: &[(f64, f64)],
    depth_limit: u32,
) -> Result<Certificate, LabError> {
    let bx = region_box(region, "box")?;
    let cert = match sys.kind() {
        SystemKind::VectorField => verify_cooperative_field(sys, &bx, depth_limit)?,
        SystemKind::DiscreteMap => verify_monotone_map(sys, &bx, depth_limit)?,
    };
    Ok(cert)
}

pub(super) fn run_certify(
    c: &CertifyConfig,
    base_dir: &Path,
    run_dir: &Path,
) -> Result<String, LabError> {
    let sys = c.system.resolve(base_dir)?;
    let cert = certify_system(&sys, &c.region, c.depth_limit)?;
    let cert_path = run_dir.join("certificate.json");
    write_text(&cert_path, &cert.to_json_string())?;
    let report = CertifyReport {
        system: sys.name().to_string(),
        kind: sys.kind().label(),
        verdict: cert.verdict,
        subdivisions: cert.subdivisions,
        depth_limit: cert.depth_limit,
        witness_replays: cert.witness.as_ref().map(|_| cert.replay_witness(&sys)),
        reason: cert.reason.clone(),
        certificate: "certificate.json".to_string(),
    };
    Ok(to_pretty_json(&report))
}

#[derive(Serialize)]
struct PeriodicSummary {
    found: bool,
    period: Option<usize>,
    residual: Option<f64>,
    refined: Option<bool>,
    points: Vec<Vec<f64>>,
}

fn periodic_summary(search: &PeriodicSearch) -> PeriodicSummary {
    match search.found() {
        Some(est) => PeriodicSummary {
            found: true,
            period: Some(est.period),
            residual: Some(est.residual),
            refined: Some(est.refined),
            points: est.points.clone(),
        },
        None => PeriodicSummary {
            found: false,
            period: None,
            residual: None,
            refined: None,
            points: Vec::new(),
        },
    }
}

#[derive(Serialize)]
struct AttractReport {
    system: String,
    cloud_size: usize,
    cloud: Vec<Vec<f64>>,
    trapping_box: Vec<(f64, f64)>,
    diameter: f64,
    invariance_defect: f64,
    attracts_fraction: f64,
    divergent_probes: usize,
    uniform_curve_final: f64,
    uniform_curve_monotone_tail: bool,
    periodic: PeriodicSummary,
    basin_csv: Option<String>,
}

pub(super) fn run_attract(
    c: &AttractConfig,
    base_dir: &Path,
    run_dir: &Path,
) -> Result<String, LabError> {
    check_positive(c.cluster_eps, "cluster_eps")?;
    check_positive(c.coarse_tol, "coarse_tol")?;
    check_positive(c.refine_tol, "refine_tol")?;
    let map = c.map.build(base_dir)?;
    let seed = c.seed.expect("validated by run()");
    let estimate = omega_limit(&map, &c.x0, c.transient, c.tail, c.cluster_eps)?;
    let attraction = check_attracting(&map, &estimate, c.probes, c.steps, seed);
    let search = find_periodic_orbit(
        &map,
        &estimate.cloud[0],
        c.max_period,
        c.coarse_tol,
        c.refine_tol,
    )?;

    let basin_csv = match &c.basin {
        None => None,
        Some(basin) => {
            let bx = region_box(&basin.region, "basin.box")?;
            let grid = crate::attract::basin_sample(&map, &estimate, &bx, basin.grid, basin.steps)?;
            let path = run_dir.join("basin.csv");
            let mut buf = Vec::new();
            grid.write_csv(&mut buf).expect("memory write");
            fs::write(&path, &buf).map_err(|source| LabError::Io {
                action: "write",
                path: path.clone(),
                source,
            })?;
            Some("basin.csv".to_string())
        }
    };

    let curve = &attraction.uniform_bound_curve;
    let tail_start = curve.len() / 2;
    let monotone_tail = curve[tail_start..].windows(2).all(|w| w[1] <= w[0] + 1e-12);
    let report = AttractReport {
        system: map.system().name().to_string(),
        cloud_size: estimate.cloud.len(),
        cloud: estimate.cloud.clone(),
        trapping_box: estimate
            .trapping_box
            .axes()
            .iter()
            .map(|iv| (iv.lo, iv.hi))
            .collect(),
        diameter: estimate.diameter,
        invariance_defect: estimate.invariance_defect,
        attracts_fraction: attraction.attracts_fraction,
        divergent_probes: attraction.divergent_probes,
        uniform_curve_final: *curve.last().expect("curve is nonempty"),
        uniform_curve_monotone_tail: monotone_tail,
        periodic: periodic_summary(&search),
        basin_csv,
    };
    Ok(to_pretty_json(&report))
}

#[derive(Serialize)]
struct ChaosPipelineReport {
    system: String,
    monotone_certificate: Verdict,
    report: ChaosReport,
    orbits_found: usize,
    separation_csv: String,
}

pub(super) fn run_chaos(
    c: &ChaosConfig,
    base_dir: &Path,
    run_dir: &Path,
) -> Result<String, LabError> {
    check_positive(c.eps, "eps")?;
    check_positive(c.cluster_eps, "cluster_eps")?;
    let seed = c.seed.expect("validated by run()");
    let map = c.map.build(base_dir)?;
    let region = region_box(&c.region, "box")?;

    // Monotonicity certificate for the underlying system.
    let certificate = certify_system(map.system(), &c.region, c.depth_limit)?;

    // Locate the attracting region; indicator runs launch from it.
    let estimate = omega_limit(&map, &c.x0, c.transient, c.tail, c.cluster_eps)?;

    let sensitivity = sensitivity_estimate(
        &map,
        &estimate.trapping_box,
        c.eps,
        c.pairs,
        c.horizon,
        seed,
    )?;
    let lyapunov = lyapunov_benettin(
        &map,
        &estimate.cloud[0],
        c.lyapunov_steps,
        c.renorm_every,
        1.0,
        seed,
    )?;
    let reference = reference_bins(&map, &region, c.bins_per_axis, 8, 1000, 20_000, seed)?;
    let coverage =
        transitivity_coverage_with_reference(&map, &reference, &estimate.cloud[0], c.coverage_steps)?;

    // Hunt periodic orbits from a few cloud points.
    let mut orbits = Vec::new();
    for point in estimate.cloud.iter().take(c.orbit_seeds.max(1)) {
        if let PeriodicSearch::Found(est) =
            find_periodic_orbit(&map, point, c.max_period, c.coarse_tol, c.refine_tol)?
        {
            orbits.push(est);
        }
    }
    let (gap, gap_note) = if orbits.is_empty() {
        (
            estimate.diameter.max(reference.bin_radius()),
            "no periodic orbits found at the tested tolerances; gap set to the cloud diameter"
                .to_string(),
        )
    } else {
        (
            periodic_density_gap_with_reference(&reference, &orbits)?,
            format!("gap over occupied bins to {} found orbit(s)", orbits.len()),
        )
    };

    let sensitivity_threshold = c.sensitivity_threshold.unwrap_or(100.0 * c.eps);
    let dense_threshold = 2.0 * reference.bin_radius();
    let flags = DevaneyFlags {
        sensitive: FlagNote {
            holds: sensitivity.delta_hat >= sensitivity_threshold,
            note: format!(
                "min over {} pairs (eps {:.3e}) of max separation within {} steps, against threshold {:.3e}; heuristic stand-in for a universal separation constant",
                sensitivity.pairs_used, c.eps, c.horizon, sensitivity_threshold
            ),
        },
        transitive: FlagNote {
            holds: coverage >= 0.9,
            note: format!(
                "single orbit covered {:.1}% of reference-occupied bins at {} bins/axis",
                100.0 * coverage,
                c.bins_per_axis
            ),
        },
        dense_periodic: FlagNote {
            holds: !orbits.is_empty() && gap <= dense_threshold,
            note: format!("{gap_note}; dense at this resolution means gap <= {dense_threshold:.3e}"),
        },
        nondiscreteness_note:
            "not decidable from finite samples; exact on finite symbolic models via the sft checks"
                .to_string(),
    };
    let report = ChaosReport::new(
        sensitivity.delta_hat,
        lyapunov.lambda1,
        lyapunov.stderr,
        coverage,
        gap,
        flags,
    )?;

    let csv_path = run_dir.join("separation.csv");
    let mut csv = String::from("pair,k,distance\n");
    for (p, curve) in sensitivity.curves.iter().enumerate() {
        for (k, d) in curve.iter().enumerate() {
            csv.push_str(&format!("{p},{k},{d:.16e}\n"));
        }
    }
    write_text(&csv_path, &csv)?;

    let out = ChaosPipelineReport {
        system: map.system().name().to_string(),
        monotone_certificate: certificate.verdict,
        report,
        orbits_found: orbits.len(),
        separation_csv: "separation.csv".to_string(),
    };
    Ok(to_pretty_json(&out))
}

#[derive(Serialize)]
struct ConditionJson {
    holds: bool,
    witness: Option<String>,
    failure: Option<String>,
}

#[derive(Serialize)]
struct DevaneyJson {
    dense_periodic: ConditionJson,
    transitive: ConditionJson,
    sensitive: ConditionJson,
    nondiscrete: ConditionJson,
    chaotic: bool,
    periodic_point_counts: Vec<usize>,
    dense_witnesses: Vec<[String; 2]>,
    partial: bool,
}

fn devaney_json(v: &DevaneyVerdict) -> DevaneyJson {
    DevaneyJson {
        dense_periodic: ConditionJson {
            holds: v.dense_periodic,
            witness: v
                .dense_witnesses
                .first()
                .map(|(u, q)| format!("cylinder {} meets orbit of {}", word_string(u), word_string(q))),
            failure: v.dense_failure.as_ref().map(|w| word_string(w)),
        },
        transitive: ConditionJson {
            holds: v.transitive,
            witness: v.transitive_walk.as_ref().map(|w| word_string(w)),
            failure: None,
        },
        sensitive: ConditionJson {
            holds: v.sensitive,
            witness: v.sensitive_witnesses.first().map(|(u, a, b)| {
                format!(
                    "cylinder {} extends to both {} and {}",
                    word_string(u),
                    word_string(a),
                    word_string(b)
                )
            }),
            failure: v.insensitive_cylinder.as_ref().map(|w| word_string(w)),
        },
        nondiscrete: ConditionJson {
            holds: v.nondiscrete,
            witness: Some(format!("periodic point counts {:?}", v.periodic_point_counts)),
            failure: None,
        },
        chaotic: crate::sft::chaotic(v),
        periodic_point_counts: v.periodic_point_counts.clone(),
        dense_witnesses: v
            .dense_witnesses
            .iter()
            .map(|(u, q)| [word_string(u), word_string(q)])
            .collect(),
        partial: v.partial,
    }
}

#[derive(Serialize)]
struct TouheyJson {
    holds: bool,
    failing_pair: Option<[String; 2]>,
    shared_witnesses: Vec<[String; 3]>,
    partial: bool,
}

fn touhey_json(v: &TouheyVerdict) -> TouheyJson {
    TouheyJson {
        holds: v.holds,
        failing_pair: v
            .failing_pair
            .as_ref()
            .map(|(u, w)| [word_string(u), word_string(w)]),
        shared_witnesses: v
            .shared_witnesses
            .iter()
            .map(|(u, w, q)| [word_string(u), word_string(w), word_string(q)])
            .collect(),
        partial: v.partial,
    }
}

#[derive(Serialize)]
struct ScanJson {
    graphs_scanned: usize,
    agreements: usize,
    disagreements: usize,
    single_orbit_bucket: usize,
    disagreement_cases: Vec<ScanCaseJson>,
    partial: bool,
}

#[derive(Serialize)]
struct ScanCaseJson {
    vertices: usize,
    edges: Vec<(usize, usize)>,
    touhey: bool,
    devaney_conjunction: bool,
    dense_periodic: bool,
    transitive: bool,
    sensitive: bool,
    nondiscrete: bool,
}

#[derive(Serialize)]
struct SftReport {
    word_length: usize,
    period_bound: usize,
    pruned_vertices: Vec<usize>,
    devaney: Option<DevaneyJson>,
    touhey: Option<TouheyJson>,
    scan: Option<ScanJson>,
    budget_used: usize,
}

pub(super) fn run_sft(
    c: &SftConfig,
    base_dir: &Path,
    _run_dir: &Path,
    mut budget: Budget,
) -> Result<String, LabError> {
    if c.word_length < 1 || c.period_bound < 1 {
        return Err(config_err(
            "word_length/period_bound",
            "must be at least 1",
        ));
    }
    let mut report = SftReport {
        word_length: c.word_length,
        period_bound: c.period_bound,
        pruned_vertices: Vec::new(),
        devaney: None,
        touhey: None,
        scan: None,
        budget_used: 0,
    };
    match c.check {
        SftCheckKind::Scan => {
            let scan = equivalence_scan(
                c.max_vertices,
                c.max_edges,
                c.word_length,
                c.period_bound,
                &mut budget,
            )?;
            report.scan = Some(ScanJson {
                graphs_scanned: scan.graphs_scanned,
                agreements: scan.agreements,
                disagreements: scan.disagreements.len(),
                single_orbit_bucket: scan.single_orbit_bucket.len(),
                disagreement_cases: scan
                    .disagreements
                    .iter()
                    .map(|case| ScanCaseJson {
                        vertices: case.vertices,
                        edges: case.edges.clone(),
                        touhey: case.touhey,
                        devaney_conjunction: case.devaney_conjunction(),
                        dense_periodic: case.dense_periodic,
                        transitive: case.transitive,
                        sensitive: case.sensitive,
                        nondiscrete: case.nondiscrete,
                    })
                    .collect(),
                partial: scan.partial,
            });
        }
        kind => {
            let graph_ref = c
                .graph
                .as_ref()
                .ok_or_else(|| config_err("graph", "required for devaney/touhey checks"))?;
            let graph = match graph_ref {
                GraphRef::Inline { vertices, edges } => SymbolGraph::new(
                    *vertices,
                    edges.iter().map(|[a, b]| (*a, *b)),
                )?,
                GraphRef::File { file } => {
                    let path = base_dir.join(file);
                    let text = fs::read_to_string(&path).map_err(|source| LabError::Io {
                        action: "read graph",
                        path: path.clone(),
                        source,
                    })?;
                    SymbolGraph::from_json_str(&text)?
                }
            };
            report.pruned_vertices = graph.pruned_vertices().to_vec();
            if matches!(kind, SftCheckKind::Devaney | SftCheckKind::Both) {
                let v =
                    devaney_check_bruteforce(&graph, c.word_length, c.period_bound, &mut budget);
                report.devaney = Some(devaney_json(&v));
            }
            if matches!(kind, SftCheckKind::Touhey | SftCheckKind::Both) {
                let v = touhey_check(&graph, c.word_length, c.period_bound, &mut budget);
                report.touhey = Some(touhey_json(&v));
            }
        }
    }
    report.budget_used = budget.used();
    Ok(to_pretty_json(&report))
}
