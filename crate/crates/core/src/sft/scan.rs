//! Exhaustive comparison of the sharing-of-periodic-orbits criterion
//! against the conjunction of the four condition verdicts over all small
//! essential digraphs.

use super::{chaotic, devaney_check_bruteforce, touhey_check, Budget, SftError, SymbolGraph};
use serde::Serialize;

/// One scanned graph with both verdicts.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ScanCase {
    pub vertices: usize,
    pub edges: Vec<(usize, usize)>,
    pub touhey: bool,
    pub dense_periodic: bool,
    pub transitive: bool,
    pub sensitive: bool,
    pub nondiscrete: bool,
}

impl ScanCase {
    pub fn devaney_conjunction(&self) -> bool {
        self.dense_periodic && self.transitive && self.sensitive && self.nondiscrete
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ScanReport {
    pub word_length: usize,
    pub period_bound: usize,
    pub graphs_scanned: usize,
    pub agreements: usize,
    /// Graphs where the sharing criterion and the conjunction differ.
    pub disagreements: Vec<ScanCase>,
    /// Graphs whose whole space is a single periodic orbit (the graph is
    /// one cycle). The sharing criterion holds on these while sensitivity
    /// and nondiscreteness fail; they are reported separately rather than
    /// judged as disagreements.
    pub single_orbit_bucket: Vec<ScanCase>,
    pub partial: bool,
}

/// Enumerates every essential digraph (no isomorphism reduction) with at
/// most `max_vertices` vertices and `max_edges` edges, and compares
/// `touhey_check` against the conjunction of the brute-force condition
/// verdicts at `(word_length, period_bound)`.
pub fn equivalence_scan(
    max_vertices: usize,
    max_edges: usize,
    word_length: usize,
    period_bound: usize,
    budget: &mut Budget,
) -> Result<ScanReport, SftError> {
    if max_vertices > 4 {
        return Err(SftError::ScanTooLarge(max_vertices));
    }
    let mut report = ScanReport {
        word_length,
        period_bound,
        graphs_scanned: 0,
        agreements: 0,
        disagreements: Vec::new(),
        single_orbit_bucket: Vec::new(),
        partial: false,
    };
    for vertices in 1..=max_vertices {
        let all_edges: Vec<(usize, usize)> = (0..vertices)
            .flat_map(|a| (0..vertices).map(move |b| (a, b)))
            .collect();
        let masks = 1u64 << all_edges.len();
        for mask in 1..masks {
            if (mask.count_ones() as usize) > max_edges {
                continue;
            }
            let edges: Vec<(usize, usize)> = all_edges
                .iter()
                .enumerate()
                .filter(|(i, _)| mask >> i & 1 == 1)
                .map(|(_, &e)| e)
                .collect();
            if !is_essential(vertices, &edges) {
                continue;
            }
            let g = SymbolGraph::new(vertices, edges.iter().copied())
                .expect("essential graphs construct");
            let devaney = devaney_check_bruteforce(&g, word_length, period_bound, budget);
            let touhey = touhey_check(&g, word_length, period_bound, budget);
            report.partial |= devaney.partial || touhey.partial;
            let case = ScanCase {
                vertices,
                edges,
                touhey: touhey.holds,
                dense_periodic: devaney.dense_periodic,
                transitive: devaney.transitive,
                sensitive: devaney.sensitive,
                nondiscrete: devaney.nondiscrete,
            };
            report.graphs_scanned += 1;
            if is_single_cycle(&g) {
                report.single_orbit_bucket.push(case);
            } else if case.touhey == chaotic(&devaney) {
                report.agreements += 1;
            } else {
                report.disagreements.push(case);
            }
        }
    }
    Ok(report)
}

fn is_essential(vertices: usize, edges: &[(usize, usize)]) -> bool {
    let mut out_deg = vec![0usize; vertices];
    let mut in_deg = vec![0usize; vertices];
    for &(a, b) in edges {
        out_deg[a] += 1;
        in_deg[b] += 1;
    }
    (0..vertices).all(|v| out_deg[v] > 0 && in_deg[v] > 0)
}

/// The whole shift space is one periodic orbit exactly when the graph is
/// a single cycle: strongly connected with every out-degree one.
fn is_single_cycle(g: &SymbolGraph) -> bool {
    g.is_strongly_connected()
        && g.active_vertices()
            .iter()
            .all(|&v| g.out(v).len() == 1)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn one_vertex_scan() {
        // The only essential digraph on one vertex is the self-loop: a
        // single fixed point, so it lands in the single-orbit bucket.
        let report = equivalence_scan(1, 6, 3, 6, &mut Budget::standard()).unwrap();
        assert_eq!(report.graphs_scanned, 1);
        assert_eq!(report.single_orbit_bucket.len(), 1);
        assert!(report.disagreements.is_empty());
    }

    #[test]
    fn two_vertex_scan_agrees_everywhere() {
        let report = equivalence_scan(2, 6, 3, 6, &mut Budget::standard()).unwrap();
        assert!(!report.partial);
        assert!(
            report.disagreements.is_empty(),
            "disagreements: {:?}",
            report.disagreements
        );
        // Bucket: the 1-loop, the 2-cycle, and the 2-cycle seen from the
        // one-vertex subgraph... exactly the single-cycle graphs.
        for case in &report.single_orbit_bucket {
            assert!(case.touhey);
            assert!(!case.sensitive || !case.nondiscrete);
        }
    }

    #[test]
    fn bucket_members_are_cycles() {
        let report = equivalence_scan(3, 6, 3, 6, &mut Budget::standard()).unwrap();
        for case in &report.single_orbit_bucket {
            let g = SymbolGraph::new(case.vertices, case.edges.iter().copied()).unwrap();
            assert!(is_single_cycle(&g));
            assert!(case.touhey, "a single orbit shares itself: {case:?}");
        }
        assert_eq!(
            report.graphs_scanned,
            report.agreements + report.disagreements.len() + report.single_orbit_bucket.len()
        );
    }
}
