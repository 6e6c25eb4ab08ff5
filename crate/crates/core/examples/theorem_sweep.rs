//! The headline experiment: random diagonally-dominant cooperative
//! systems are certified monotone, their time-1 maps attract to a set,
//! and that set always turns out to be a periodic orbit (a fixed point
//! here) -- monotone dynamics leave no room for a chaotic attracting set.

use monochaos::lab::{self, ExperimentConfig};

fn main() {
    let config: ExperimentConfig = serde_json::from_value(serde_json::json!({
        "kind": "theorem",
        "mode": "sweep",
        "count": 10,
        "seed": 7
    }))
    .unwrap();

    let dir = tempfile::tempdir().unwrap();
    let outcome = lab::run(&config, dir.path(), dir.path()).unwrap();
    let report: serde_json::Value =
        serde_json::from_str(&std::fs::read_to_string(&outcome.report_path).unwrap()).unwrap();

    println!(
        "sweep of {} cooperative systems (seed {}):",
        report["count"], report["family_seed"]
    );
    println!(
        "  consistent {}  violation-candidates {}  inconclusive {}  divergent-excluded {}",
        report["consistent"],
        report["violation_candidates"],
        report["inconclusive"],
        report["divergent_excluded"]
    );
    println!(
        "  max distance from attracting cloud to found orbit: {}",
        report["max_cloud_orbit_distance"]
    );
    for instance in report["instances"].as_array().unwrap() {
        let r = &instance["report"];
        println!(
            "  #{} dim {}: certificate {}, attracts {}, period {:?}, verdict {}",
            instance["index"],
            instance["dimension"],
            r["certificate"]["verdict"],
            r["attracting"]["attracts_fraction"],
            r["periodic"]["period"],
            r["verdict"]
        );
    }
    println!("exit code {}", outcome.exit_code);
}
