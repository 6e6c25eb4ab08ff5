//! Config-driven experiments: the library surface behind the `monochaos`
//! command-line front end.
//!
//! One experiment per JSON config file. Outputs land in a directory keyed
//! by the hash of the effective config (seed overrides included), so
//! identical runs are detected and reproduce byte-identical reports.

mod pipelines;
mod theorem;

pub use theorem::{
    sweep_system, InstanceStatus, TheoremInstanceReport, TheoremReport, TheoremSweepReport,
    TheoremVerdict,
};

use crate::dynamics::{builtin, time_t_map, DynamicsError, PointMap, TimeTMap};
use crate::expr::{IntervalBox, SystemDef, SystemError, SystemKind};
use crate::monocert::CertifyError;
use crate::sft::{Budget, SftError};
use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};
use std::fs;
use std::path::{Path, PathBuf};
use thiserror::Error;

/// Environment variable capping brute-force enumeration in sft runs.
pub const MAX_STATES_ENV: &str = "MONOCHAOS_MAX_STATES";

#[derive(Debug, Error)]
pub enum LabError {
    #[error("config field `{field}`: {message}")]
    Config { field: String, message: String },
    #[error("cannot {action} `{path}`: {source}")]
    Io {
        action: &'static str,
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
    #[error("malformed config: {0}")]
    Parse(String),
    #[error(transparent)]
    System(#[from] SystemError),
    #[error(transparent)]
    Dynamics(#[from] DynamicsError),
    #[error(transparent)]
    Certify(#[from] CertifyError),
    #[error(transparent)]
    Sft(#[from] SftError),
}

fn config_err(field: &str, message: impl Into<String>) -> LabError {
    LabError::Config {
        field: field.to_string(),
        message: message.into(),
    }
}

/// Reference to a system: a builtin name or a definition file (relative
/// paths resolve against the config file's directory).
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(untagged)]
pub enum SystemRef {
    Builtin(String),
    File { file: PathBuf },
}

impl SystemRef {
    pub fn resolve(&self, base_dir: &Path) -> Result<SystemDef, LabError> {
        match self {
            SystemRef::Builtin(name) => builtin(name).map_err(|e| match e {
                DynamicsError::UnknownBuiltin(n) => config_err(
                    "system",
                    format!("`{n}` is neither a builtin nor a definition file reference"),
                ),
                other => LabError::Dynamics(other),
            }),
            SystemRef::File { file } => {
                let path = base_dir.join(file);
                let text = fs::read_to_string(&path).map_err(|source| LabError::Io {
                    action: "read system definition",
                    path: path.clone(),
                    source,
                })?;
                Ok(SystemDef::from_json_str(&text)?)
            }
        }
    }
}

/// A system plus the time-t parameters needed when it is a flow.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct MapSpec {
    pub system: SystemRef,
    /// Flow-to-map time; required when the system is a vector field.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub tau: Option<f64>,
    /// RK4 step for the time-t map.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub h: Option<f64>,
}

/// A usable map: either a discrete-map system or a time-t flow map.
pub enum BuiltMap {
    Discrete(SystemDef),
    Flow(TimeTMap),
}

impl BuiltMap {
    pub fn system(&self) -> &SystemDef {
        match self {
            BuiltMap::Discrete(sys) => sys,
            BuiltMap::Flow(map) => map.system(),
        }
    }
}

impl PointMap for BuiltMap {
    fn dim(&self) -> usize {
        self.system().dimension()
    }

    fn apply(&self, x: &[f64]) -> Result<Vec<f64>, DynamicsError> {
        match self {
            BuiltMap::Discrete(sys) => sys.apply(x),
            BuiltMap::Flow(map) => map.apply(x),
        }
    }
}

impl MapSpec {
    pub fn build(&self, base_dir: &Path) -> Result<BuiltMap, LabError> {
        let sys = self.system.resolve(base_dir)?;
        match sys.kind() {
            SystemKind::DiscreteMap => Ok(BuiltMap::Discrete(sys)),
            SystemKind::VectorField => {
                let tau = self.tau.unwrap_or(1.0);
                let h = self.h.unwrap_or(0.01);
                Ok(BuiltMap::Flow(time_t_map(sys, tau, h)?))
            }
        }
    }
}

fn check_positive(value: f64, field: &str) -> Result<(), LabError> {
    if value > 0.0 && value.is_finite() {
        Ok(())
    } else {
        Err(config_err(field, format!("must be positive, got {value}")))
    }
}

fn region_box(bounds: &[(f64, f64)], field: &str) -> Result<IntervalBox, LabError> {
    if bounds.is_empty() {
        return Err(config_err(field, "box needs at least one axis"));
    }
    for &(lo, hi) in bounds {
        if !(lo.is_finite() && hi.is_finite() && lo <= hi) {
            return Err(config_err(field, format!("bad interval [{lo}, {hi}]")));
        }
    }
    Ok(IntervalBox::from_bounds(bounds))
}

fn d_steps() -> usize {
    1000
}
fn d_h() -> f64 {
    0.001
}
fn d_depth() -> u32 {
    8
}
fn d_transient() -> usize {
    1000
}
fn d_tail() -> usize {
    500
}
fn d_cluster_eps() -> f64 {
    1e-3
}
fn d_probes() -> usize {
    100
}
fn d_attract_steps() -> usize {
    200
}
fn d_max_period() -> usize {
    64
}
fn d_coarse_tol() -> f64 {
    1e-3
}
fn d_refine_tol() -> f64 {
    1e-9
}
fn d_eps() -> f64 {
    1e-8
}
fn d_pairs() -> usize {
    32
}
fn d_horizon() -> usize {
    50
}
fn d_lyap_steps() -> usize {
    20_000
}
fn d_renorm() -> usize {
    5
}
fn d_bins() -> usize {
    100
}
fn d_coverage_steps() -> usize {
    20_000
}
fn d_orbit_seeds() -> usize {
    4
}
fn d_chaos_max_period() -> usize {
    16
}
fn d_word_length() -> usize {
    3
}
fn d_period_bound() -> usize {
    6
}
fn d_scan_vertices() -> usize {
    3
}
fn d_scan_edges() -> usize {
    6
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct SimulateConfig {
    pub system: SystemRef,
    pub x0: Vec<f64>,
    /// Iterations for maps.
    #[serde(default = "d_steps")]
    pub steps: usize,
    /// RK4 step for flows.
    #[serde(default = "d_h")]
    pub h: f64,
    /// Integration end time for flows.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub t_end: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub seed: Option<u64>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct CertifyConfig {
    pub system: SystemRef,
    #[serde(rename = "box")]
    pub region: Vec<(f64, f64)>,
    #[serde(default = "d_depth")]
    pub depth_limit: u32,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub seed: Option<u64>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct BasinConfig {
    #[serde(rename = "box")]
    pub region: Vec<(f64, f64)>,
    pub grid: usize,
    pub steps: usize,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct AttractConfig {
    #[serde(flatten)]
    pub map: MapSpec,
    pub x0: Vec<f64>,
    #[serde(default = "d_transient")]
    pub transient: usize,
    #[serde(default = "d_tail")]
    pub tail: usize,
    #[serde(default = "d_cluster_eps")]
    pub cluster_eps: f64,
    #[serde(default = "d_probes")]
    pub probes: usize,
    #[serde(default = "d_attract_steps")]
    pub steps: usize,
    #[serde(default = "d_max_period")]
    pub max_period: usize,
    #[serde(default = "d_coarse_tol")]
    pub coarse_tol: f64,
    #[serde(default = "d_refine_tol")]
    pub refine_tol: f64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub basin: Option<BasinConfig>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub seed: Option<u64>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ChaosConfig {
    #[serde(flatten)]
    pub map: MapSpec,
    /// Ambient box for coverage binning and the monotonicity certificate.
    #[serde(rename = "box")]
    pub region: Vec<(f64, f64)>,
    pub x0: Vec<f64>,
    #[serde(default = "d_transient")]
    pub transient: usize,
    #[serde(default = "d_tail")]
    pub tail: usize,
    #[serde(default = "d_cluster_eps")]
    pub cluster_eps: f64,
    #[serde(default = "d_eps")]
    pub eps: f64,
    #[serde(default = "d_pairs")]
    pub pairs: usize,
    #[serde(default = "d_horizon")]
    pub horizon: usize,
    #[serde(default = "d_lyap_steps")]
    pub lyapunov_steps: usize,
    #[serde(default = "d_renorm")]
    pub renorm_every: usize,
    #[serde(default = "d_bins")]
    pub bins_per_axis: usize,
    #[serde(default = "d_coverage_steps")]
    pub coverage_steps: usize,
    #[serde(default = "d_orbit_seeds")]
    pub orbit_seeds: usize,
    #[serde(default = "d_chaos_max_period")]
    pub max_period: usize,
    #[serde(default = "d_coarse_tol")]
    pub coarse_tol: f64,
    #[serde(default = "d_refine_tol")]
    pub refine_tol: f64,
    #[serde(default = "d_depth")]
    pub depth_limit: u32,
    /// Separation level for the heuristic sensitivity flag; defaults to
    /// 100 times the pair offset eps.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub sensitivity_threshold: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub seed: Option<u64>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(untagged)]
pub enum GraphRef {
    Inline { vertices: usize, edges: Vec<[usize; 2]> },
    File { file: PathBuf },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum SftCheckKind {
    Devaney,
    Touhey,
    Both,
    Scan,
}

fn d_sft_check() -> SftCheckKind {
    SftCheckKind::Both
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct SftConfig {
    /// Graph to analyze; ignored by the scan check.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub graph: Option<GraphRef>,
    #[serde(default = "d_word_length")]
    pub word_length: usize,
    #[serde(default = "d_period_bound")]
    pub period_bound: usize,
    #[serde(default = "d_sft_check")]
    pub check: SftCheckKind,
    #[serde(default = "d_scan_vertices")]
    pub max_vertices: usize,
    #[serde(default = "d_scan_edges")]
    pub max_edges: usize,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub seed: Option<u64>,
}

/// One experiment; the `kind` tag selects the pipeline.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum ExperimentConfig {
    Simulate(SimulateConfig),
    Certify(CertifyConfig),
    Attract(AttractConfig),
    Chaos(ChaosConfig),
    Sft(SftConfig),
    Theorem(theorem::TheoremConfig),
}

impl ExperimentConfig {
    pub fn kind_name(&self) -> &'static str {
        match self {
            ExperimentConfig::Simulate(_) => "simulate",
            ExperimentConfig::Certify(_) => "certify",
            ExperimentConfig::Attract(_) => "attract",
            ExperimentConfig::Chaos(_) => "chaos",
            ExperimentConfig::Sft(_) => "sft",
            ExperimentConfig::Theorem(_) => "theorem",
        }
    }

    pub fn seed(&self) -> Option<u64> {
        match self {
            ExperimentConfig::Simulate(c) => c.seed,
            ExperimentConfig::Certify(c) => c.seed,
            ExperimentConfig::Attract(c) => c.seed,
            ExperimentConfig::Chaos(c) => c.seed,
            ExperimentConfig::Sft(c) => c.seed,
            ExperimentConfig::Theorem(c) => c.seed,
        }
    }

    pub fn set_seed(&mut self, seed: u64) {
        match self {
            ExperimentConfig::Simulate(c) => c.seed = Some(seed),
            ExperimentConfig::Certify(c) => c.seed = Some(seed),
            ExperimentConfig::Attract(c) => c.seed = Some(seed),
            ExperimentConfig::Chaos(c) => c.seed = Some(seed),
            ExperimentConfig::Sft(c) => c.seed = Some(seed),
            ExperimentConfig::Theorem(c) => c.seed = Some(seed),
        }
    }

    /// Stochastic experiments must carry a seed.
    fn requires_seed(&self) -> bool {
        matches!(
            self,
            ExperimentConfig::Attract(_)
                | ExperimentConfig::Chaos(_)
                | ExperimentConfig::Theorem(_)
        )
    }
}

pub fn load_config(path: &Path) -> Result<ExperimentConfig, LabError> {
    let text = fs::read_to_string(path).map_err(|source| LabError::Io {
        action: "read config",
        path: path.to_path_buf(),
        source,
    })?;
    serde_json::from_str(&text).map_err(|e| LabError::Parse(e.to_string()))
}

/// Hex-truncated SHA-256 of the effective config; keys the output directory.
pub fn config_hash(config: &ExperimentConfig) -> String {
    let bytes = serde_json::to_vec(config).expect("config serialization cannot fail");
    let digest = Sha256::digest(&bytes);
    let mut hex = String::with_capacity(16);
    for byte in digest.iter().take(8) {
        hex.push_str(&format!("{byte:02x}"));
    }
    hex
}

/// Outcome of a run: process exit code plus where the report landed.
#[derive(Debug, Clone)]
pub struct RunOutcome {
    pub exit_code: i32,
    pub out_dir: PathBuf,
    pub report_path: PathBuf,
    /// True when the keyed output directory already existed.
    pub rerun: bool,
}

fn default_budget() -> Budget {
    let max = std::env::var(MAX_STATES_ENV)
        .ok()
        .and_then(|v| v.parse::<usize>().ok())
        .unwrap_or(Budget::DEFAULT_MAX_STATES);
    Budget::new(max)
}

/// Validates the config, runs the experiment, and writes `report.json`
/// (plus pipeline-specific CSV data) under `out_dir/<config-hash>/`.
///
/// Exit codes: 0 on completion, 2 when a theorem experiment ends in a
/// violation candidate; errors map to 1 in the CLI.
pub fn run(
    config: &ExperimentConfig,
    base_dir: &Path,
    out_dir: &Path,
) -> Result<RunOutcome, LabError> {
    if config.requires_seed() && config.seed().is_none() {
        return Err(config_err(
            "seed",
            format!(
                "{} experiments are stochastic and need a seed (config field or --seed)",
                config.kind_name()
            ),
        ));
    }
    let hash = config_hash(config);
    let run_dir = out_dir.join(&hash);
    let rerun = run_dir.exists();
    fs::create_dir_all(&run_dir).map_err(|source| LabError::Io {
        action: "create output directory",
        path: run_dir.clone(),
        source,
    })?;

    let (report_json, exit_code) = match config {
        ExperimentConfig::Simulate(c) => (pipelines::run_simulate(c, base_dir, &run_dir)?, 0),
        ExperimentConfig::Certify(c) => (pipelines::run_certify(c, base_dir, &run_dir)?, 0),
        ExperimentConfig::Attract(c) => (pipelines::run_attract(c, base_dir, &run_dir)?, 0),
        ExperimentConfig::Chaos(c) => (pipelines::run_chaos(c, base_dir, &run_dir)?, 0),
        ExperimentConfig::Sft(c) => {
            (pipelines::run_sft(c, base_dir, &run_dir, default_budget())?, 0)
        }
        ExperimentConfig::Theorem(c) => theorem::run_theorem(c, base_dir)?,
    };

    let report_path = run_dir.join("report.json");
    write_text(&report_path, &report_json)?;
    Ok(RunOutcome {
        exit_code,
        out_dir: run_dir,
        report_path,
        rerun,
    })
}

fn write_text(path: &Path, text: &str) -> Result<(), LabError> {
    fs::write(path, text).map_err(|source| LabError::Io {
        action: "write",
        path: path.to_path_buf(),
        source,
    })
}

fn to_pretty_json<T: Serialize>(value: &T) -> String {
    serde_json::to_string_pretty(value).expect("report serialization cannot fail")
}
