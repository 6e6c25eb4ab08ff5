//! Resolution analysis for the sharing-vs-conjunction scan: pins the
//! computed behavior at the coarse resolution and shows how the
//! disagreements decompose as the period budget grows.

use monochaos::sft::{
    devaney_check_bruteforce, equivalence_scan, orbit_visits_cylinder, touhey_check, Budget,
    SymbolGraph,
};

/// At (L=3, P=6) every disagreement is a sharing-criterion false negative:
/// the conjunction holds but some cylinder pair needs a shared orbit of
/// period beyond 6.
#[test]
fn coarse_scan_disagreements_are_period_budget_artifacts() {
    let scan = equivalence_scan(3, 6, 3, 6, &mut Budget::standard()).unwrap();
    assert_eq!(scan.graphs_scanned, 227);
    assert_eq!(scan.single_orbit_bucket.len(), 4);
    assert_eq!(scan.disagreements.len(), 92);
    for case in &scan.disagreements {
        assert!(!case.touhey, "unexpected flavor: {case:?}");
        assert!(case.devaney_conjunction(), "unexpected flavor: {case:?}");
    }
}

/// The loop-plus-triangle graph is the smallest witness: the cylinders
/// 000 and 201 share no orbit of period 6, but they share one of period 8
/// (00012012), and the sharing check confirms this.
#[test]
fn loop_plus_triangle_needs_period_eight() {
    let g = SymbolGraph::new(3, [(0, 0), (0, 1), (1, 2), (2, 0)]).unwrap();
    let at_six = touhey_check(&g, 3, 6, &mut Budget::standard());
    assert!(!at_six.holds);
    assert!(at_six.failing_pair.is_some());
    // A period-8 orbit through three loop turns and the triangle visits
    // both of the stubborn cylinders.
    let witness = vec![0, 0, 0, 1, 2, 0, 1, 2];
    assert!(orbit_visits_cylinder(&witness, &[0, 0, 0]));
    assert!(orbit_visits_cylinder(&witness, &[2, 0, 1]));

    let at_eight = touhey_check(&g, 3, 8, &mut Budget::standard());
    assert!(at_eight.holds, "failing pair at 8: {:?}", at_eight.failing_pair);
    // Every Devaney condition already holds at the coarse resolution.
    let devaney = devaney_check_bruteforce(&g, 3, 6, &mut Budget::standard());
    assert!(devaney.dense_periodic && devaney.transitive && devaney.sensitive && devaney.nondiscrete);
}

/// At P=8 the period-budget artifacts vanish; what remains are the three
/// graphs whose cycle lengths are all even (two 2-cycles through a shared
/// vertex). Their periodic-point counts grow only at even periods, so no
/// two consecutive periods both increase and the nondiscreteness check
/// stays false even though the shift space is infinite and the sharing
/// criterion correctly holds.
#[test]
fn residual_disagreements_have_even_cycle_parity() {
    let scan = equivalence_scan(3, 6, 3, 8, &mut Budget::standard()).unwrap();
    assert_eq!(scan.disagreements.len(), 3, "{:?}", scan.disagreements);
    for case in &scan.disagreements {
        assert!(case.touhey);
        assert!(case.dense_periodic && case.transitive && case.sensitive);
        assert!(!case.nondiscrete);
        let g = SymbolGraph::new(case.vertices, case.edges.iter().copied()).unwrap();
        let v = devaney_check_bruteforce(&g, 3, 8, &mut Budget::standard());
        // Counts stall at every odd period.
        let c = &v.periodic_point_counts;
        for p in (3..=c.len()).step_by(2) {
            assert_eq!(c[p - 1], c[p - 2], "odd period {p} gained points: {c:?}");
        }
    }
}

/// The scan total decomposes exactly and deterministically.
#[test]
fn scan_is_deterministic() {
    let a = equivalence_scan(3, 6, 3, 6, &mut Budget::standard()).unwrap();
    let b = equivalence_scan(3, 6, 3, 6, &mut Budget::standard()).unwrap();
    assert_eq!(a, b);
    assert_eq!(
        a.graphs_scanned,
        a.agreements + a.disagreements.len() + a.single_orbit_bucket.len()
    );
}
